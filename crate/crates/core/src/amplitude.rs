// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Coherent-state transition amplitude `ℐ(v, w) = ⟨v| U(T) |w⟩` in the
//! unnormalized convention `⟨v|w⟩ = e^{v·w}`.
//!
//! ```text
//! log ℐ = v·α⁻¹†w + ½ v·σv − ½ w·γw − ½ log det(ᾱ₀⁻¹ ᾱ)
//! ```
//!
//! The determinant enters only through its tracked logarithm.

use crate::action::CoherentLabel;
use crate::bogoliubov;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::green;
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CVec, Factorized, C64};
use crate::propagator::{self, EvolveOptions, SymplecticPropagator};
use crate::quadrature;

/// `|Re log ℐ|` beyond which `value` is not materialized.
pub const OVERFLOW_LOG: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude {
    pub log_value: C64,
    pub value: C64,
    /// True when `value` could not be represented; `log_value` stays exact.
    pub overflow: bool,
}

impl Amplitude {
    pub fn from_log(log_value: C64) -> Self {
        let overflow = log_value.re.abs() >= OVERFLOW_LOG || !log_value.is_finite();
        let value = if overflow {
            if log_value.re > 0.0 {
                C64::new(f64::INFINITY, f64::INFINITY)
            } else {
                C64::new(0.0, 0.0)
            }
        } else {
            log_value.exp()
        };
        Self {
            log_value,
            value,
            overflow,
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.log_value.re.exp()
    }
}

fn check_labels(s: &SymplecticPropagator, v: &CoherentLabel, w: &CoherentLabel) -> Result<()> {
    if v.n() != s.n() || w.n() != s.n() {
        return Err(Error::Shape(format!(
            "labels have {} and {} modes, propagator {}",
            v.n(),
            w.n(),
            s.n()
        )));
    }
    Ok(())
}

pub fn transition_amplitude(
    s: &SymplecticPropagator,
    v: &CoherentLabel,
    w: &CoherentLabel,
) -> Result<Amplitude> {
    check_labels(s, v, w)?;
    let d = bogoliubov::derive(s)?;
    let (v, w) = (v.components(), w.components());
    let quad = linalg::form(v, &d.alpha_inv_dag, w) + 0.5 * linalg::form(v, &d.sigma, v)
        - 0.5 * linalg::form(w, &d.gamma, w);
    Ok(Amplitude::from_log(quad - 0.5 * s.log_det_ratio()))
}

/// Boundary data `(z(T), z̄(0))` of the classical critical path:
/// `z(T) = α⁻¹†w + σv`, `z̄(0) = ᾱ⁻¹v − γw`.
pub fn classical_saddle(
    s: &SymplecticPropagator,
    v: &CoherentLabel,
    w: &CoherentLabel,
) -> Result<(CVec, CVec)> {
    check_labels(s, v, w)?;
    let d = bogoliubov::derive(s)?;
    let (v, w) = (v.components(), w.components());
    let z_t = &d.alpha_inv_dag * w + &d.sigma * v;
    let zbar_0 = Factorized::new(&s.alpha_bar(), "conj(alpha)")?.solve_vec(v) - &d.gamma * w;
    Ok((z_t, zbar_0))
}

pub const DEFAULT_LAMBDA_NODES: usize = 33;

pub fn uniform_lambda_grid(nodes: usize) -> Vec<f64> {
    if nodes < 2 {
        return vec![0.0; nodes];
    }
    (0..nodes).map(|k| k as f64 / (nodes - 1) as f64).collect()
}

/// `−½ log det(ᾱ₀⁻¹ ᾱ)` obtained by integrating
/// `d/dλ log ℐ_λ = −½ tr(ᾱ_λ⁻¹ dᾱ_λ/dλ)` from `ℐ₀ = 1`.
pub fn lambda_continuation_phase(
    h: &QuadraticHamiltonian,
    lambda_grid: &[f64],
    steps: usize,
) -> Result<C64> {
    lambda_continuation_phase_with(h, lambda_grid, steps, Execution::default())
}

pub fn lambda_continuation_phase_with(
    h: &QuadraticHamiltonian,
    lambda_grid: &[f64],
    steps: usize,
    exec: Execution,
) -> Result<C64> {
    let ok_ends = lambda_grid.len() >= 2
        && lambda_grid[0] == 0.0
        && lambda_grid[lambda_grid.len() - 1] == 1.0
        && lambda_grid.windows(2).all(|w| w[1] > w[0]);
    if !ok_ends {
        return Err(Error::Config(
            "lambda grid must increase from 0 to 1".into(),
        ));
    }
    let opts = EvolveOptions::with_steps(steps).recording();
    let integrand = exec.try_map_range(lambda_grid.len(), |i| {
        let lam = lambda_grid[i];
        let ev = propagator::evolve_with(h, lam, &opts).map_err(|e| crossing(e, lam))?;
        let d = green::log_det_derivative(h, &ev.history.expect("recorded"))
            .map_err(|e| crossing(e, lam))?;
        Ok::<C64, Error>(-0.5 * d)
    })?;
    let spacing = lambda_grid[1] - lambda_grid[0];
    let uniform = lambda_grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - spacing).abs() < 1e-12);
    Ok(if uniform {
        quadrature::simpson(&integrand, spacing)
    } else {
        quadrature::integrate_nonuniform(lambda_grid, &integrand)
    })
}

fn crossing(e: Error, lambda: f64) -> Error {
    match e {
        Error::Singular { .. } => Error::KernelCrossing { lambda },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMat};

    fn label(x: C64) -> CoherentLabel {
        CoherentLabel::from_slice(&[x]).unwrap()
    }

    #[test]
    fn zero_time_is_overlap() {
        let s = SymplecticPropagator::identity(1, 1.0);
        let (v, w) = (c(0.3, 0.4), c(-0.2, 0.9));
        let a = transition_amplitude(&s, &label(v), &label(w)).unwrap();
        assert!((a.value - (v * w).exp()).norm() < 1e-15);
    }

    #[test]
    fn squeeze_vacuum_and_saddle() {
        let r = 0.8_f64;
        let s = SymplecticPropagator::from_blocks(
            CMat::from_element(1, 1, c(r.cosh(), 0.0)),
            CMat::from_element(1, 1, c(0.0, -r.sinh())),
            1.0,
            c(0.0, 0.0),
        )
        .unwrap();
        let a = transition_amplitude(&s, &label(c(0.0, 0.0)), &label(c(0.0, 0.0))).unwrap();
        assert!((a.value - c(1.0 / r.cosh().sqrt(), 0.0)).norm() < 1e-15);
        let (zt, zb0) = classical_saddle(&s, &label(c(1.0, 0.0)), &label(c(0.0, 0.0))).unwrap();
        assert!((zt[0] - c(0.0, -r.tanh())).norm() < 1e-15);
        assert!((zb0[0] - c(1.0 / r.cosh(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn overflow_is_flagged() {
        let a = Amplitude::from_log(c(800.0, 1.0));
        assert!(a.overflow && a.log_value.re == 800.0);
        assert!(!Amplitude::from_log(c(-3.0, 0.2)).overflow);
    }

    #[test]
    fn continuation_squeeze_value() {
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.5, 0.0), 2.0).unwrap();
        let got =
            lambda_continuation_phase(&h, &uniform_lambda_grid(DEFAULT_LAMBDA_NODES), 256).unwrap();
        assert!(
            (got - c(-0.5 * 1f64.cosh().ln(), 0.0)).norm() < 1e-7,
            "{got}"
        );
        assert!((got.re + 0.2168904).abs() < 1e-6);
    }

    #[test]
    fn continuation_vanishes_without_pairing() {
        let h = QuadraticHamiltonian::constant(
            CMat::from_element(1, 1, c(1.0, 0.0)),
            CMat::zeros(1, 1),
            1.0,
        )
        .unwrap();
        let got = lambda_continuation_phase(&h, &[0.0, 0.3, 1.0], 16).unwrap();
        assert_eq!(got, c(0.0, 0.0));
    }
}
