use std::fs;
use std::path::Path;

use num_bigint::BigInt;

use crate::CliError;

/// Reads one decimal integer per line. Blank lines are rejected except at
/// the very end; an empty file is an error.
pub fn read_sequence(path: &Path) -> Result<Vec<BigInt>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_sequence(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn parse_sequence(text: &str) -> Result<Vec<BigInt>, String> {
    let body = text.trim_end_matches(['\n', '\r']);
    if body.trim().is_empty() {
        return Err("no integers found".into());
    }
    body.lines()
        .enumerate()
        .map(|(i, line)| {
            line.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("line {}: {line:?} is not an integer", i + 1))
        })
        .collect()
}

/// Comma-separated integers, as in `--b-list 3,8,120`.
pub fn parse_list(s: &str) -> Result<Vec<BigInt>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::usage(format!("{t:?} is not an integer")))
        })
        .collect()
}
