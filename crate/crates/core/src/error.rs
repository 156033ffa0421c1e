// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} outside [0, {horizon}]")]
    Domain { t: f64, horizon: f64 },

    #[error("lambda {0} outside [0, 1]")]
    LambdaRange(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("validation failed: {invariant} (residual {residual:.3e} at t = {at})")]
    Validation {
        invariant: String,
        residual: f64,
        at: f64,
    },

    #[error("{what} is numerically singular (pivot ratio {ratio:.3e})")]
    Singular { what: String, ratio: f64 },

    #[error("integration failed at t = {t}: symplectic defect {defect:.3e} exceeds {bound:.3e}")]
    IntegrationFailure { t: f64, defect: f64, bound: f64 },

    #[error("symplectic defect {defect:.3e} above recoverable bound {bound:.3e}")]
    Unrecoverable { defect: f64, bound: f64 },

    #[error("kernel crossing: conj(alpha_lambda(T)) singular at lambda = {lambda}")]
    KernelCrossing { lambda: f64 },

    #[error("path-integral elimination singular at slice {slice} (|det| = {modulus:.3e})")]
    SliceSingular { slice: usize, modulus: f64 },

    #[error("time {0} is not a node of the history grid")]
    OffGrid(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures caused by malformed input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. }
                | Error::Shape(_)
                | Error::Domain { .. }
                | Error::LambdaRange(_)
                | Error::Config(_)
                | Error::Usage(_)
                | Error::Toml(_)
        )
    }
}
