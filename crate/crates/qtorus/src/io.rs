//! Element file format and atomic file writing.
//!
//! An element is stored as JSON:
//! `{ "d": int, "theta": [[real]], "coeffs": [ { "m": [int], "re": real, "im": real } ] }`.
//! Doubles round-trip losslessly (shortest-representation printing).

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{MultiIndex, QElement, ThetaMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub m: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ElementFile {
    pub d: usize,
    pub theta: Vec<Vec<f64>>,
    pub coeffs: Vec<CoeffEntry>,
}

impl ElementFile {
    pub fn from_element(x: &QElement) -> Self {
        ElementFile {
            d: x.d(),
            theta: x.theta().rows(),
            coeffs: x
                .iter()
                .map(|(m, c)| CoeffEntry { m: m.0.clone(), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn into_element(self) -> Result<QElement> {
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        if self.theta.len() != d {
            return Err(Error::NotSquare { rows: self.theta.len(), cols: d });
        }
        for row in &self.theta {
            if row.len() != d {
                return Err(Error::NotSquare { rows: d, cols: row.len() });
            }
            entries.extend_from_slice(row);
        }
        let theta = Arc::new(ThetaMatrix::new(d, entries)?);
        QElement::from_coeffs(
            theta,
            self.coeffs
                .into_iter()
                .map(|e| (MultiIndex(e.m), Complex64::new(e.re, e.im))),
        )
    }
}

pub fn save_element(x: &QElement, path: &Path) -> Result<()> {
    let file = ElementFile::from_element(x);
    let body = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))?;
    write_atomic(path, body.as_bytes())
}

pub fn load_element(path: &Path) -> Result<QElement> {
    let body = std::fs::read_to_string(path)?;
    let file: ElementFile =
        serde_json::from_str(&body).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    file.into_element()
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// partially written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
