// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Independent reference computations of the transition amplitude.

pub mod fock;
pub mod path_integral;

pub use fock::{fock_matrix_element, unitarity_check, FockConfig, FockResult};
pub use path_integral::{
    convergence_study, discrete_path_integral, discrete_path_integral_log, normalization_log_ratio,
    richardson, ConvergenceStudy, DiscretePIConfig,
};
