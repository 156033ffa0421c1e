// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-sliced coherent-state path integral
//!
//! ```text
//! ℐ_N = ∫ ∏_{k=1}^{N−1} d²ⁿz_k/πⁿ exp{ −Σ_k z̄_k·z_k
//!        + Σ_{k=0}^{N−1} [z̄_{k+1}·z_k − iΔt ℋ(z̄_{k+1}, z_k)] },  z_0 = w, z̄_N = v,
//! ```
//!
//! with `ℋ` sampled at slice midpoints. The Gaussian integrals are done one
//! slice at a time, which is block elimination of the tridiagonal quadratic
//! form: after eliminating `z_1 … z_{k−1}` the exponent is
//! `z̄_kᵀ j_k − ½ z̄_kᵀ R_k z̄_k + c_k`. Eliminating slice `k` contributes
//! `−½ log det(id − P_k R_k)` with `P_k = iΔt B_k`.

use crate::action::CoherentLabel;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CMat, Factorized, C64, I};

#[derive(Clone, Copy, Debug)]
pub struct DiscretePIConfig {
    pub slices: usize,
}

impl DiscretePIConfig {
    pub fn new(slices: usize) -> Result<Self> {
        if slices < 2 {
            return Err(Error::Config(format!(
                "path integral needs at least 2 slices, got {slices}"
            )));
        }
        Ok(Self { slices })
    }
}

/// `|det(id − P R)|` below which a slice counts as singular.
const SLICE_FLOOR: f64 = 1e-14;

/// `log ℐ_N(v, w)`.
pub fn discrete_path_integral_log(
    h: &QuadraticHamiltonian,
    v: &CoherentLabel,
    w: &CoherentLabel,
    cfg: &DiscretePIConfig,
) -> Result<C64> {
    let n = h.n();
    if v.n() != n || w.n() != n {
        return Err(Error::Shape(
            "label and Hamiltonian mode counts differ".into(),
        ));
    }
    let big_n = cfg.slices;
    let dt = h.horizon() / big_n as f64;
    let idt = I * dt;
    let id = linalg::identity(n);
    let slice = |k: usize| -> Result<(CMat, CMat, CMat)> {
        let (a, b) = h.sample((k as f64 + 0.5) * dt)?;
        let l = &id - &a * idt;
        let p = &b * idt;
        let rt = linalg::conj(&b) * idt;
        Ok((l, p, rt))
    };

    let w = w.components();
    let (l0, p0, rt0) = slice(0)?;
    let mut constant = -0.5 * linalg::form(w, &p0, w);
    let mut j = &l0 * w;
    let mut r = rt0;
    for k in 1..big_n {
        let (l, p, rt) = slice(k)?;
        // det(id − R P) = det(id − P R).
        let m = &id - &r * &p;
        let f = Factorized::new(&m, "slice").map_err(|_| Error::SliceSingular {
            slice: k,
            modulus: m.determinant().norm(),
        })?;
        let logdet = f.log_det();
        if logdet.re.exp() < SLICE_FLOOR {
            return Err(Error::SliceSingular {
                slice: k,
                modulus: logdet.re.exp(),
            });
        }
        let j_hat = f.solve_vec(&j);
        constant += -0.5 * logdet - 0.5 * linalg::dot(&j, &(&p * &j_hat));
        let r_hat = f.solve(&r);
        r = &l * r_hat * l.transpose() + rt;
        j = &l * j_hat;
    }
    let v = v.components();
    Ok(constant + linalg::dot(v, &j) - 0.5 * linalg::form(v, &r, v))
}

pub fn discrete_path_integral(
    h: &QuadraticHamiltonian,
    v: &CoherentLabel,
    w: &CoherentLabel,
    cfg: &DiscretePIConfig,
) -> Result<C64> {
    Ok(discrete_path_integral_log(h, v, w, cfg)?.exp())
}

/// `log(ℐ_N[A only] / ℐ_N[A, B])` at `v = w = 0`, which tends to
/// `½ log det(ᾱ₀⁻¹ ᾱ)` as the slicing is refined.
pub fn normalization_log_ratio(h: &QuadraticHamiltonian, cfg: &DiscretePIConfig) -> Result<C64> {
    let zero = CoherentLabel::zeros(h.n());
    let free = discrete_path_integral_log(&h.with_pairing_scale(0.0), &zero, &zero, cfg)?;
    let full = discrete_path_integral_log(h, &zero, &zero, cfg)?;
    Ok(free - full)
}

/// Richardson extrapolation of values at successively halved steps, assuming
/// an error series in integer powers of the step.
pub fn richardson(values: &[C64]) -> C64 {
    assert!(!values.is_empty());
    let mut table = values.to_vec();
    for level in 1..values.len() {
        let factor = (1u64 << level) as f64 - 1.0;
        for i in (level..values.len()).rev() {
            table[i] = table[i] + (table[i] - table[i - 1]) / factor;
        }
    }
    table[values.len() - 1]
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub slices: Vec<usize>,
    pub log_values: Vec<C64>,
    pub extrapolated: C64,
}

impl ConvergenceStudy {
    pub fn values(&self) -> Vec<C64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }
}

/// `ℐ_N` for `N = 2^k`, `k` in `powers`, and the Richardson value of `ℐ`.
pub fn convergence_study(
    h: &QuadraticHamiltonian,
    v: &CoherentLabel,
    w: &CoherentLabel,
    powers: std::ops::RangeInclusive<u32>,
    exec: Execution,
) -> Result<ConvergenceStudy> {
    let slices: Vec<usize> = powers.map(|k| 1usize << k).collect();
    let log_values = exec.try_map_range(slices.len(), |i| {
        discrete_path_integral_log(h, v, w, &DiscretePIConfig::new(slices[i])?)
    })?;
    let values: Vec<C64> = log_values.iter().map(|l| l.exp()).collect();
    Ok(ConvergenceStudy {
        extrapolated: richardson(&values),
        slices,
        log_values,
    })
}
