//! Lower-triangular 16×16 tables indexed by personality type.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::mbti::MbtiType;

/// Cross-type values for every unordered pair of distinct types (120 cells).
/// Cells may be missing when a value could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeTable {
    // cells[i][j] for j < i, in `MbtiType::ALL` order
    cells: Vec<Vec<Option<f64>>>,
}

impl Default for TypeTable {
    fn default() -> Self {
        TypeTable {
            cells: (0..16).map(|i| vec![None; i]).collect(),
        }
    }
}

impl TypeTable {
    pub fn set(&mut self, a: MbtiType, b: MbtiType, value: f64) {
        let (i, j) = Self::slot(a, b);
        self.cells[i][j] = Some(value);
    }

    pub fn get(&self, a: MbtiType, b: MbtiType) -> Option<f64> {
        let (i, j) = Self::slot(a, b);
        self.cells[i][j]
    }

    fn slot(a: MbtiType, b: MbtiType) -> (usize, usize) {
        assert_ne!(a, b, "diagonal is not part of the table");
        let (i, j) = (a.index(), b.index());
        if i > j {
            (i, j)
        } else {
            (j, i)
        }
    }

    pub fn populated(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.cells.iter().flatten().filter_map(|c| *c)
    }

    /// Tab-delimited lower triangle: header row of type codes, then one row
    /// per type with values for the types before it. Missing cells are `NA`.
    pub fn to_tsv(&self, precision: usize) -> String {
        let mut s = String::from("type");
        for t in MbtiType::ALL {
            let _ = write!(s, "\t{t}");
        }
        s.push('\n');
        for (i, row) in self.cells.iter().enumerate() {
            s.push_str(MbtiType::ALL[i].code());
            for cell in row {
                match cell {
                    Some(v) => {
                        let _ = write!(s, "\t{v:.precision$}");
                    }
                    None => s.push_str("\tNA"),
                }
            }
            s.push('\n');
        }
        s
    }
}

impl Serialize for TypeTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(120))?;
        for (i, row) in self.cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                map.serialize_entry(&format!("{}-{}", MbtiType::ALL[i], MbtiType::ALL[j]), cell)?;
            }
        }
        map.end()
    }
}
