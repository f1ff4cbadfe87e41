//! Bundled reference data.

pub const TABLE1: &str = include_str!("../golden/table1.tsv");
pub const EQUATIONS: &str = include_str!("../golden/equations.tsv");

/// Tab-separated rows, skipping blank lines and `#` comments.
pub fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('\t').collect()))
}

/// A named equation from the bundled list.
pub fn equation(name: &str) -> Option<&'static str> {
    rows(EQUATIONS).find(|(_, r)| r[0] == name).map(|(_, r)| r[1])
}

pub fn equation_names() -> Vec<&'static str> {
    rows(EQUATIONS).map(|(_, r)| r[0]).collect()
}
