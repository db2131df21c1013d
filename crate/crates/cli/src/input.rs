use std::fs;

use mel_core::entropy::MatrixEnsemble;
use mel_core::phi::ScalarFunctionSpec;
use mel_core::spectral::HermitianMatrix;
use serde::de::DeserializeOwned;

/// Failure to read or parse user input; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_json<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T, InputError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| InputError(format!("{what}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| InputError(format!("{what}: {e}")))
}

pub fn spec(arg: &str) -> Result<ScalarFunctionSpec, InputError> {
    let spec: ScalarFunctionSpec = read_json("--fn", arg)?;
    spec.validate().map_err(|e| InputError(format!("--fn: {e}")))?;
    Ok(spec)
}

pub fn matrix(flag: &str, arg: &str) -> Result<HermitianMatrix, InputError> {
    read_json(flag, arg)
}

pub fn ensemble(arg: &str) -> Result<MatrixEnsemble, InputError> {
    read_json("--ensemble", arg)
}

/// Parses `2,3,4` into dimensions.
pub fn dimensions(arg: &str) -> Result<Vec<usize>, String> {
    arg.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(0) => Err("dimensions must be positive".to_string()),
            Ok(n) => Ok(n),
            Err(e) => Err(format!("bad dimension {s:?}: {e}")),
        })
        .collect()
}
