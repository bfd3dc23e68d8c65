//! Tokenizer shared by every text-based stage.

/// Lowercases and splits on any non-alphanumeric character, dropping empties.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}
