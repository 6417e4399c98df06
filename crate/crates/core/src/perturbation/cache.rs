//! Plain-text coefficient cache.
//!
//! ```text
//! bncache v1 p2+x2/4+i*l*x3
//! 1<TAB>11
//! 2<TAB>-930
//! ```
//!
//! One `n<TAB>b_n` line per coefficient, `n` counting up from 1, every line
//! newline-terminated and free of trailing whitespace.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dashu::integer::IBig;

use super::{validate_signs, PerturbationError, PerturbationSeries};

pub const CACHE_MAGIC: &str = "bncache v1";

fn header(tag: &str) -> String {
    format!("{CACHE_MAGIC} {tag}")
}

fn render(series: &PerturbationSeries) -> String {
    let mut out = header(series.hamiltonian_tag());
    out.push('\n');
    for (i, b) in series.coefficients().iter().enumerate() {
        writeln!(out, "{}\t{}", i + 1, b).expect("writing to a String");
    }
    out
}

fn io_error(path: &Path, source: std::io::Error) -> PerturbationError {
    PerturbationError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `series` to `destination`. An existing file is replaced only if
/// it is empty or carries the same Hamiltonian tag.
pub fn write_cache(series: &PerturbationSeries, destination: &Path) -> Result<(), PerturbationError> {
    let expected = header(series.hamiltonian_tag());
    match fs::read_to_string(destination) {
        Ok(existing) => {
            let first = existing.lines().next().unwrap_or("");
            if !existing.is_empty() && first != expected {
                return Err(PerturbationError::HeaderMismatch {
                    path: destination.to_path_buf(),
                    expected,
                    found: first.to_string(),
                });
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(io_error(destination, e)),
    }

    let mut staging = destination.as_os_str().to_owned();
    staging.push(".partial");
    let staging = PathBuf::from(staging);
    fs::write(&staging, render(series)).map_err(|e| io_error(&staging, e))?;
    fs::rename(&staging, destination).map_err(|e| io_error(destination, e))
}

/// Loads and validates a cache written by [`write_cache`].
pub fn read_cache(source: &Path) -> Result<PerturbationSeries, PerturbationError> {
    let text = fs::read_to_string(source).map_err(|e| io_error(source, e))?;
    parse(&text, source)
}

fn parse(text: &str, path: &Path) -> Result<PerturbationSeries, PerturbationError> {
    let parse_error = |line: usize, message: String| PerturbationError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    if !text.ends_with('\n') {
        let last = text.lines().count().max(1);
        return Err(parse_error(last, "missing final newline".into()));
    }

    let mut lines = text.lines();
    let first = lines.next().unwrap_or("");
    let tag = first
        .strip_prefix(CACHE_MAGIC)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| parse_error(1, format!("expected header {CACHE_MAGIC:?}, found {first:?}")))?;
    if tag != super::HAMILTONIAN_TAG {
        return Err(PerturbationError::HeaderMismatch {
            path: path.to_path_buf(),
            expected: header(super::HAMILTONIAN_TAG),
            found: first.to_string(),
        });
    }

    let mut coefficients = Vec::new();
    for (offset, line) in lines.enumerate() {
        let line_no = offset + 2;
        if line != line.trim_end() {
            return Err(parse_error(line_no, "trailing whitespace".into()));
        }
        let (index, value) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(line_no, format!("expected \"n<TAB>b_n\", found {line:?}")))?;
        let n: usize = index
            .parse()
            .map_err(|_| parse_error(line_no, format!("bad index {index:?}")))?;
        let expected_n = coefficients.len() + 1;
        if n != expected_n {
            return Err(parse_error(line_no, format!("expected index {expected_n}, found {n}")));
        }
        if value.contains(['/', '.', 'e', 'E']) {
            return Err(PerturbationError::NonIntegral { n });
        }
        let b: IBig = value
            .parse()
            .map_err(|_| parse_error(line_no, format!("bad integer {value:?}")))?;
        coefficients.push(b);
    }
    validate_signs(&coefficients)?;
    PerturbationSeries::new(coefficients)
}
