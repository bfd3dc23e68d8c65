use nalgebra::DMatrix;
use proptest::prelude::*;

use persona_core::lexfeat::{extract_features, fit_elastic_net, load_lexicon, pearson_r, ElasticNetParams};
use persona_core::semsim::{cosine, doc_vector, EmbeddingTable};

fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..30).prop_flat_map(|d| (prop::collection::vec(-10.0f64..10.0, d), prop::collection::vec(-10.0f64..10.0, d)))
}

fn nondegenerate(v: &[f64]) -> bool {
    v.iter().any(|x| (x - v[0]).abs() > 1e-3)
}

proptest! {
    #[test]
    fn cosine_symmetric_and_scale_free((a, b) in vec_pair(), s in 1e-3f64..1e3) {
        prop_assume!(a.iter().any(|x| x.abs() > 1e-3) && b.iter().any(|x| x.abs() > 1e-3));
        let c = cosine(&a, &b).unwrap();
        prop_assert!((c - cosine(&b, &a).unwrap()).abs() <= 1e-12);
        let scaled: Vec<f64> = a.iter().map(|x| x * s).collect();
        prop_assert!((c - cosine(&scaled, &b).unwrap()).abs() <= 1e-12);
        prop_assert!((-1.0..=1.0).contains(&c));
    }

    #[test]
    fn pearson_symmetric_and_affine_free((x, y) in vec_pair(), a in 1e-2f64..1e2, b in -50.0f64..50.0) {
        prop_assume!(nondegenerate(&x) && nondegenerate(&y));
        let r = pearson_r(&x, &y).unwrap();
        prop_assert!((r - pearson_r(&y, &x).unwrap()).abs() <= 1e-12);
        let moved: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assert!((r - pearson_r(&moved, &y).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn doc_vector_ignores_token_order(tokens in prop::collection::vec(0usize..8, 1..30), seed in any::<u64>()) {
        let mut table = EmbeddingTable::new(3);
        for i in 0..6 {
            let f = i as f64;
            table.insert(&format!("t{i}"), vec![f, 1.0 - f, 0.5 * f]).unwrap();
        }
        let words: Vec<String> = tokens.iter().map(|i| format!("t{i}")).collect();
        let mut shuffled = words.clone();
        // a cheap deterministic rotation plus reversal stands in for a shuffle
        shuffled.rotate_left((seed % words.len() as u64) as usize);
        shuffled.reverse();
        let a = doc_vector(&words, &table);
        let b = doc_vector(&shuffled, &table);
        prop_assert_eq!(a.in_vocab_fraction, b.in_vocab_fraction);
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn elastic_net_objective_never_increases(
        rows in 5usize..30,
        cols in 1usize..6,
        seed in prop::collection::vec(-3.0f64..3.0, 200),
        lambda in 0.0f64..1.0,
        mix in 0.0f64..=1.0,
    ) {
        let x = DMatrix::from_fn(rows, cols, |i, j| seed[(i * cols + j) % 200] + (i * j) as f64 * 0.01);
        let y: Vec<f64> = (0..rows).map(|i| seed[(i * 13 + 7) % 200]).collect();
        let fit = fit_elastic_net(&x, &y, ElasticNetParams { lambda, mix, ..ElasticNetParams::default() }).unwrap();
        for w in fit.objective_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0), "{:?}", fit.objective_history);
        }
    }

    #[test]
    fn large_l1_penalty_zeroes_everything(rows in 5usize..20, seed in prop::collection::vec(-3.0f64..3.0, 60)) {
        let x = DMatrix::from_fn(rows, 3, |i, j| seed[(i * 3 + j) % 60]);
        let y: Vec<f64> = (0..rows).map(|i| seed[(i * 7 + 1) % 60] * 2.0).collect();
        let fit = fit_elastic_net(&x, &y, ElasticNetParams { lambda: 1e3, mix: 1.0, ..ElasticNetParams::default() }).unwrap();
        prop_assert!(fit.coefficients.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn category_proportions_are_fractions(text in "[a-z ]{0,80}") {
        let lex = load_lexicon("posemo\thapp*\nposemo\tgood\nnegemo\tsad\nnegemo\tba*\n".as_bytes()).unwrap();
        let f = extract_features(&text, &lex);
        prop_assert!(f.0.values().all(|v| (0.0..=1.0).contains(v)));
    }
}
