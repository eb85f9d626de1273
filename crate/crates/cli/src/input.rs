use std::fs;

use knaster_core::fraisse::GenericSequence;
use knaster_core::lingraph::{validate, Morphism};
use serde::de::DeserializeOwned;

use crate::ops::CliError;

/// The argument itself, or the contents of the file after a leading `@`.
pub fn resolve(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.trim().to_string()),
    }
}

/// A value string given as `0,1,0`, `[0,1,0]`, or either form in a file.
pub fn values(arg: &str) -> Result<Vec<usize>, CliError> {
    let text = resolve(arg)?;
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("`{s}` is not a vertex index")))
        })
        .collect()
}

pub fn morphism(arg: &str, cod: usize) -> Result<Morphism, CliError> {
    let v = values(arg)?;
    Ok(validate(v.len(), cod, &v)?)
}

/// JSON from a file path (with or without a leading `@`).
pub fn json_file<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let path = arg.strip_prefix('@').unwrap_or(arg);
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path} is not the expected JSON: {e}")))
}

/// A tower, either bare or under the `tower` key of a verb output.
pub fn tower(arg: &str) -> Result<GenericSequence, CliError> {
    let mut v: serde_json::Value = json_file(arg)?;
    if let Some(inner) = v.get_mut("tower") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(|e| CliError::Usage(format!("{arg} does not hold a tower: {e}")))
}
