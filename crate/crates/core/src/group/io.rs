//! Plain-text group files.
//!
//! Cayley table: first line `n`, then `n` lines of `n` space-separated
//! 0-based indices; row `g`, column `h` holds `g·h`.
//!
//! Permutation generators: first line the degree `d`, then one generator
//! per line as `d` space-separated images of `1..d`.

use std::path::Path;

use super::FiniteGroup;
use crate::error::GroupError;

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>, GroupError> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| GroupError::Format(format!("line {lineno}: `{t}` is not a non-negative integer")))
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_cayley_table(text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = content_lines(text);
    let (ln, first) = lines.next().ok_or_else(|| GroupError::Format("empty file".into()))?;
    let n = match numbers(first, ln)?.as_slice() {
        [n] => *n,
        _ => return Err(GroupError::Format("line 1 must hold the order".into())),
    };
    let mut rows = Vec::with_capacity(n);
    for (ln, line) in lines {
        rows.push(numbers(line, ln)?);
    }
    if rows.len() != n {
        return Err(GroupError::Format(format!("expected {n} rows, found {}", rows.len())));
    }
    FiniteGroup::from_cayley_table(&rows)
}

pub fn parse_permutation_generators(text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = content_lines(text);
    let (ln, first) = lines.next().ok_or_else(|| GroupError::Format("empty file".into()))?;
    let degree = match numbers(first, ln)?.as_slice() {
        [d] if *d >= 1 => *d,
        _ => return Err(GroupError::Format("line 1 must hold a positive degree".into())),
    };
    let mut gens = Vec::new();
    for (ln, line) in lines {
        gens.push(numbers(line, ln)?);
    }
    FiniteGroup::from_permutation_generators(degree, &gens)
}

/// Renders the Cayley table format. Only available for table-backed groups.
pub fn write_cayley_table(g: &FiniteGroup) -> Option<String> {
    let t = g.table()?;
    let n = g.order();
    let mut out = format!("{n}\n");
    for row in t.chunks(n) {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Some(out)
}

pub fn load_cayley_table(path: &Path) -> Result<FiniteGroup, GroupError> {
    let text = std::fs::read_to_string(path).map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
    parse_cayley_table(&text)
}

pub fn load_permutation_generators(path: &Path) -> Result<FiniteGroup, GroupError> {
    let text = std::fs::read_to_string(path).map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
    parse_permutation_generators(&text)
}
