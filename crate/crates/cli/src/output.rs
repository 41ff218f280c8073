//! CSV and JSON writers. Floats always carry 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliResult;

/// `x` in scientific notation with 17 significant digits. Negative zero is
/// written as zero.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// A float that serializes as a 17-digit JSON number; non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl From<f64> for F17 {
    fn from(x: f64) -> Self {
        F17(x)
    }
}

pub fn f17s(xs: &[f64]) -> Vec<F17> {
    xs.iter().map(|&x| F17(x)).collect()
}

/// Output directory; created on first write.
#[derive(Debug, Clone)]
pub struct OutDir(PathBuf);

impl OutDir {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self(path.into())
    }

    pub fn path(&self) -> &Path {
        &self.0
    }

    fn file(&self, name: &str) -> CliResult<PathBuf> {
        fs::create_dir_all(&self.0)?;
        Ok(self.0.join(name))
    }

    /// One header row then the data rows, LF line endings.
    pub fn csv(&self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<PathBuf> {
        let path = self.file(name)?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
        Ok(path)
    }

    pub fn json(&self, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let path = self.file(name)?;
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
