//! Spec resolution: a JSON file path or a builtin name.

use std::path::Path;

use anyhow::{bail, Context, Result};
use sftlab_core::sft::SftSpec;

/// Builtin spec names accepted wherever a spec path is expected:
/// `full:K`, `full:K:D`, `tracks:A,B,..`, `tracks:A,B,..:D`, `golden-mean`,
/// `hard-square-tri`.
pub fn builtin(name: &str) -> Option<SftSpec> {
    let parts: Vec<&str> = name.split(':').collect();
    let dim = |i: usize| parts.get(i).map_or(Some(1), |d| d.parse::<usize>().ok().filter(|&d| d >= 1));
    match parts[0] {
        "golden-mean" if parts.len() == 1 => Some(SftSpec::golden_mean()),
        "hard-square-tri" if parts.len() == 1 => Some(SftSpec::triangular_hard_square()),
        "full" if (2..=3).contains(&parts.len()) => {
            let k: usize = parts[1].parse().ok().filter(|&k| (1..=256).contains(&k))?;
            Some(SftSpec::full_shift(k, dim(2)?))
        }
        "tracks" if (2..=3).contains(&parts.len()) => {
            let sizes: Vec<usize> = parts[1].split(',').map(|s| s.trim().parse().ok().filter(|&n| n >= 1)).collect::<Option<_>>()?;
            if sizes.iter().product::<usize>() > 256 {
                return None;
            }
            Some(SftSpec::full_shift_tracks(&sizes, dim(2)?))
        }
        _ => None,
    }
}

/// Loads a spec from a file, falling back to builtin names.
pub fn ingest_spec(reference: &str) -> Result<SftSpec> {
    let path = Path::new(reference);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {reference}"))?;
        return SftSpec::from_json(&text).with_context(|| format!("in spec file {reference}"));
    }
    match builtin(reference) {
        Some(s) => Ok(s),
        None => bail!("spec {reference:?} is neither a readable file nor a builtin name"),
    }
}
