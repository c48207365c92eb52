use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::failure::Failure;

/// Directory used for outputs when no explicit path is given.
pub const OUT_DIR_VAR: &str = "ESPD_OUT_DIR";

/// Full round-trip precision: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn env_out_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Where a command's stdout and stderr text goes.
pub struct Io<'a> {
    pub out: &'a mut (dyn Write + Send),
    pub err: &'a mut (dyn Write + Send),
}

impl Io<'_> {
    /// Diagnostic line on the error stream; a failing stream is not fatal.
    pub fn note(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.err, "{line}");
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

/// Explicit path, else `default_name` under the output directory variable, else stdout.
pub fn sink(explicit: Option<PathBuf>, default_name: &str) -> Sink {
    match explicit {
        Some(path) => Sink::File(path),
        None => match env_out_dir() {
            Some(dir) => Sink::File(dir.join(default_name)),
            None => Sink::Stdout,
        },
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn emit(io: &mut Io, sink: &Sink, bytes: &[u8]) -> Result<(), Failure> {
    match sink {
        Sink::Stdout => io
            .out
            .write_all(bytes)
            .and_then(|()| io.out.flush())
            .map_err(|e| Failure::compute(format!("stdout: {e}"))),
        Sink::File(path) => {
            write_atomic(path, bytes).map_err(|e| Failure::compute(format!("cannot write {}: {e}", path.display())))
        }
    }
}

/// Comma-separated, LF-terminated, header first.
pub fn csv_bytes<I>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
