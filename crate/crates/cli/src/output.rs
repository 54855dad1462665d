use crate::CliError;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// 17 significant digits, `.` separator.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write `bytes` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Input(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    /// To `out` if given, else to stdout.
    pub fn emit(&self, out: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
        match out {
            Some(p) => {
                write_atomic(p, self.text.as_bytes())?;
                Ok(Some(p.to_path_buf()))
            }
            None => {
                print!("{}", self.text);
                Ok(None)
            }
        }
    }
}

/// Record of one invocation, enough to rerun it.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>, started: Instant, outputs: Vec<PathBuf>) -> Self {
        Self {
            command: command.to_string(),
            parameters: std::env::args().skip(1).collect(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_time_s: started.elapsed().as_secs_f64(),
            outputs,
        }
    }
}
