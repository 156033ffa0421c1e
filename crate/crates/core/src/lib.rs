// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Coherent-state transition amplitudes `ℐ(v, w) = ⟨v| U(T) |w⟩` for
//! time-dependent quadratic bosonic Hamiltonians
//! `ℋ = a†A a + ½(a B̄ a + a† B a†)`, in the unnormalized Bargmann
//! convention `⟨v|w⟩ = exp(v·w)`.
//!
//! The closed form runs through the classical symplectic propagator:
//!
//! ```text
//! log ℐ = vᵀ α⁻¹† w + ½ vᵀ σ v − ½ wᵀ γ w − ½ log det(ᾱ₀⁻¹ ᾱ)
//! ```
//!
//! with the branch of the logarithm fixed by tracking it along `t`.
//! [`oracles`] holds two independent references (truncated Fock space and a
//! discretized path integral) and [`diagnostics`] the mode-family scans.
//!
//! ```
//! use coherent_path::{amplitude, hamiltonian::QuadraticHamiltonian, linalg::c, propagator};
//! use coherent_path::action::CoherentLabel;
//!
//! let h = QuadraticHamiltonian::single_mode_squeeze(c(0.6, 0.0), 1.0).unwrap();
//! let s = propagator::evolve(&h, 1.0, 1024, false).unwrap().propagator;
//! let vac = CoherentLabel::zeros(1);
//! let a = amplitude::transition_amplitude(&s, &vac, &vac).unwrap();
//! assert!((a.value.norm() - 1.0 / 0.6f64.cosh().sqrt()).abs() < 1e-10);
//! ```

pub mod action;
pub mod amplitude;
pub mod bogoliubov;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod green;
pub mod hamiltonian;
pub mod linalg;
pub mod oracles;
pub mod pipeline;
pub mod propagator;
pub mod quadrature;
pub mod random;
pub mod report;
pub mod scenario;

pub use action::{CoherentLabel, DiscretizedPath};
pub use amplitude::{classical_saddle, lambda_continuation_phase, transition_amplitude, Amplitude};
pub use error::{Error, Result};
pub use exec::Execution;
pub use hamiltonian::QuadraticHamiltonian;
pub use linalg::{CMat, CVec, C64};
pub use propagator::{evolve, evolve_with, EvolveOptions, SymplecticPropagator};
pub use scenario::{FamilyFile, Scenario};
