use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use talabounds_core::io::to_json;
use talabounds_core::{Complex64, Shape};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Common wrapper around every report.
#[derive(Debug, Serialize)]
pub struct ReportEnvelope<P: Serialize> {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub inputs_digest: String,
    pub payload: P,
}

/// SHA-256 over the command name, its result-relevant parameters and the
/// bytes of every input file, each length-prefixed.
pub struct Inputs {
    command: &'static str,
    hasher: Sha256,
}

impl Inputs {
    pub fn new(command: &'static str) -> Self {
        let mut inputs = Inputs {
            command,
            hasher: Sha256::new(),
        };
        inputs.chunk(command.as_bytes());
        inputs
    }

    fn chunk(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn param(mut self, name: &str, value: impl std::fmt::Display) -> Self {
        self.chunk(format!("{name}={value}").as_bytes());
        self
    }

    pub fn file(&mut self, path: &Path) -> Result<String, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.chunk(text.as_bytes());
        Ok(text)
    }

    pub fn envelope<P: Serialize>(self, payload: P) -> ReportEnvelope<P> {
        ReportEnvelope {
            tool_version: TOOL_VERSION,
            command: self.command,
            inputs_digest: hex::encode(self.hasher.finalize()),
            payload,
        }
    }
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Data(format!("stdout: {e}")))
        }
    }
}

pub fn write_report<P: Serialize>(
    out: Option<&Path>,
    csv: bool,
    report: ReportEnvelope<P>,
) -> Result<(), CliError> {
    if csv {
        return Err(CliError::Usage(format!(
            "--csv applies to table output only, not to `{}`",
            report.command
        )));
    }
    write_text(out, &to_json(&report))
}

/// `index,x1..xn,re,im` rows in flat order; `axis` names the coordinate
/// columns (`x` for points, `y` for frequencies).
pub fn table_csv(shape: Shape, values: &[Complex64], axis: char) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string()];
    header.extend((1..=shape.n()).map(|i| format!("{axis}{i}")));
    header.extend(["re".into(), "im".into()]);
    let to_data = |e: csv::Error| CliError::Data(e.to_string());
    w.write_record(&header).map_err(to_data)?;
    let mut row = Vec::with_capacity(shape.n() + 3);
    for (flat, v) in values.iter().enumerate() {
        row.clear();
        row.push(flat.to_string());
        row.extend((0..shape.n()).map(|i| shape.digit(flat, i).to_string()));
        row.push(format!("{:.16e}", v.re));
        row.push(format!("{:.16e}", v.im));
        w.write_record(&row).map_err(to_data)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `dir/stem.measure.json` next to `path`.
pub fn sibling_measure_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.measure.json"))
}
