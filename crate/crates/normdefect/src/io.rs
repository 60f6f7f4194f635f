//! JSON matrix files.
//!
//! The canonical form is
//! `{"rows": n, "cols": m, "entries": [[re, im], ...]}` with entries in
//! row-major order; a compact real-only form with bare numbers in `entries`
//! is also accepted. All components must be finite. Writing always emits
//! the canonical pair form, and write-then-read reproduces entries bitwise.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct RawMatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<RawEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Complex([f64; 2]),
    Real(f64),
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let raw: RawMatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let entries: Vec<Complex64> = raw
        .entries
        .iter()
        .map(|e| match e {
            RawEntry::Complex([re, im]) => Complex64::new(*re, *im),
            RawEntry::Real(x) => Complex64::new(*x, 0.0),
        })
        .collect();
    ComplexMatrix::new(raw.rows, raw.cols, entries)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn matrix_to_value(m: &ComplexMatrix) -> serde_json::Value {
    let raw = RawMatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries: m
            .entries()
            .iter()
            .map(|z| RawEntry::Complex([z.re, z.im]))
            .collect(),
    };
    serde_json::to_value(&raw).expect("finite matrices serialize")
}

pub fn matrix_to_string(m: &ComplexMatrix) -> String {
    serde_json::to_string(&matrix_to_value(m)).expect("finite matrices serialize")
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, matrix_to_string(m))?;
    Ok(())
}
