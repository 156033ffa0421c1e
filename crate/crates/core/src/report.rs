// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV record schemas and atomic file output.
//!
//! | file           | columns |
//! |----------------|---------|
//! | `amplitude.csv`| scenario, log_re, log_im, value_re, value_im, overflow, det_log_re, det_log_im, symplectic_defect |
//! | `saddle.csv`   | scenario, mode, z_t_re, z_t_im, zbar_0_re, zbar_0_im |
//! | `verify.csv`   | scenario, check, residual, tolerance, passed |
//! | `compare.csv`  | scenario, closed_re, closed_im, fock_re, fock_im, fock_leak, pi_re, pi_im, extrapolated_re, extrapolated_im, closed_vs_fock, closed_vs_pi, fock_vs_pi |
//! | `scan.csv`     | K, hs_norm_sq, abs_det, abs_vacuum_amplitude, phase_increment, verdict |
//! | `history.csv`  | see `PropagatorHistory::write_csv` |
//!
//! Floats are written in shortest round-trip form, so identical inputs give
//! byte-identical files and every row parses back to the same values.

use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub scenario: String,
    pub log_re: f64,
    pub log_im: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub overflow: bool,
    /// `−½ log det(ᾱ₀⁻¹ᾱ)`.
    pub det_log_re: f64,
    pub det_log_im: f64,
    pub symplectic_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleRecord {
    pub scenario: String,
    pub mode: usize,
    pub z_t_re: f64,
    pub z_t_im: f64,
    pub zbar_0_re: f64,
    pub zbar_0_im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub scenario: String,
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub scenario: String,
    pub closed_re: f64,
    pub closed_im: f64,
    pub fock_re: f64,
    pub fock_im: f64,
    pub fock_leak: f64,
    /// Finest slicing.
    pub pi_re: f64,
    pub pi_im: f64,
    pub extrapolated_re: f64,
    pub extrapolated_im: f64,
    pub closed_vs_fock: f64,
    pub closed_vs_pi: f64,
    pub fock_vs_pi: f64,
}

pub fn write_records<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn to_csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
}

pub fn read_records<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Write to a sibling temporary file, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
