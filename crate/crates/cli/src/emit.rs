use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::{Format, Output};
use crate::CliError;

/// Resolves `--format` against what a subcommand supports.
pub fn format(output: &Output, default: Format, supported: &[Format]) -> Result<Format, CliError> {
    let f = output.format.unwrap_or(default);
    if supported.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "--format {} is not supported by this subcommand",
            match f {
                Format::Csv => "csv",
                Format::Json => "json",
            }
        )))
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    writer
        .into_inner()
        .map_err(|e| CliError::Failed(e.to_string()))
}

/// Writes the finished report to `--out` or to standard output.
pub fn deliver(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display()))),
        None => Ok(stdout.write_all(bytes)?),
    }
}
