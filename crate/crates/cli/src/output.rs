//! Output naming and bit-stable CSV/JSON emission.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

/// `{experiment}-{n}-{beta}-{seed}` with floats in shortest round-trip form.
pub fn stem(experiment: &str, n: usize, beta: f64, seed: u64) -> String {
    format!("{experiment}-{n}-{beta}-{seed}")
}

/// Shortest decimal that parses back to the same float.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub struct Writer {
    dir: PathBuf,
    stem: String,
    format: Format,
}

impl Writer {
    pub fn new(dir: &Path, stem: String, format: Format) -> Self {
        Self {
            dir: dir.to_path_buf(),
            stem,
            format,
        }
    }

    fn path(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.stem))
    }

    pub fn csv<I>(&self, header: &[String], rows: I) -> io::Result<Option<PathBuf>>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        if !self.format.csv() {
            return Ok(None);
        }
        let path = self.path("csv");
        let write = || -> io::Result<()> {
            fs::create_dir_all(&self.dir)?;
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(header)?;
            for row in rows {
                w.write_record(&row)?;
            }
            w.flush()
        };
        write().map_err(|e| with_path(&path, e))?;
        Ok(Some(path))
    }

    pub fn json<T: Serialize>(&self, value: &T) -> io::Result<Option<PathBuf>> {
        if !self.format.json() {
            return Ok(None);
        }
        let path = self.path("json");
        let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        text.push('\n');
        fs::create_dir_all(&self.dir)
            .and_then(|()| fs::write(&path, text))
            .map_err(|e| with_path(&path, e))?;
        Ok(Some(path))
    }
}

fn with_path(path: &Path, e: io::Error) -> io::Error {
    io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

pub fn header<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Vec<String> {
    names.into_iter().map(|s| s.as_ref().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_numbers() {
        assert_eq!(stem("clt", 101, 2.0, 0), "clt-101-2-0");
        assert_eq!(stem("clt", 101, 0.5, 7), "clt-101-0.5-7");
        assert_eq!(num(72.0 / 625.0), "0.1152");
        assert_eq!(num(1e-300), "1e-300");
        for v in [0.1 + 0.2, std::f64::consts::PI, -3.25e17] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}
