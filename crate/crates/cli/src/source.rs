//! Coefficient loading with an optional on-disk cache.

use std::fs;
use std::path::Path;

use ptcubic_core::perturbation::{compute_coefficients, read_cache, write_cache, PerturbationSeries};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Disabled,
    Hit,
    /// The cache was missing, too short or unreadable and has been rewritten.
    Written { reason: String },
}

/// Returns `b_1..b_order`, from the cache when it holds enough coefficients,
/// otherwise by recursion (rewriting the cache if one is configured).
pub fn load_series(
    order: usize,
    cache: Option<&Path>,
) -> Result<(PerturbationSeries, CacheOutcome), CliError> {
    let Some(path) = cache else {
        return Ok((compute_coefficients(order)?, CacheOutcome::Disabled));
    };
    let reason = if path.exists() {
        match read_cache(path) {
            Ok(series) if series.max_order() >= order => {
                return Ok((series.truncated(order), CacheOutcome::Hit));
            }
            Ok(series) => format!("cache holds {} coefficients, {order} requested", series.max_order()),
            Err(e @ ptcubic_core::perturbation::PerturbationError::HeaderMismatch { .. }) => {
                return Err(e.into());
            }
            Err(e) => format!("cache rejected: {e}"),
        }
    } else {
        "cache missing".to_string()
    };
    let series = compute_coefficients(order)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_cache(&series, path)?;
    Ok((series, CacheOutcome::Written { reason }))
}

/// Reads the cache as-is when present (no recomputation, no rewrite);
/// computes `order` coefficients otherwise.
pub fn inspect_series(order: usize, cache: Option<&Path>) -> Result<PerturbationSeries, CliError> {
    match cache {
        Some(path) if path.exists() => Ok(read_cache(path)?.truncated(order)),
        _ => Ok(compute_coefficients(order)?),
    }
}
