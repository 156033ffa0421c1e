// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Derived blocks `γ = ᾱ⁻¹β̄`, `σ = βᾱ⁻¹`, `α⁻¹†`, and composition.

use crate::error::Result;
use crate::linalg::{self, CMat, Factorized};
use crate::propagator::SymplecticPropagator;

#[derive(Clone, Debug)]
pub struct DerivedBogoliubov {
    pub alpha_inv_dag: CMat,
    pub gamma: CMat,
    pub sigma: CMat,
}

impl DerivedBogoliubov {
    /// Largest of the γ and σ symmetry residuals.
    pub fn symmetry_residual(&self) -> f64 {
        linalg::symmetry_residual(&self.gamma).max(linalg::symmetry_residual(&self.sigma))
    }
}

pub fn derive(s: &SymplecticPropagator) -> Result<DerivedBogoliubov> {
    let abar = Factorized::new(&s.alpha_bar(), "conj(alpha)")?;
    let gamma = abar.solve(&s.beta_bar());
    // σ = βᾱ⁻¹ = (ᾱ⁻ᵀβᵀ)ᵀ and ᾱᵀ = α†.
    let alpha_dag = Factorized::new(&s.alpha.adjoint(), "alpha^dagger")?;
    let sigma = alpha_dag.solve(&s.beta.transpose()).transpose();
    let alpha_inv_dag = alpha_dag.inverse();
    Ok(DerivedBogoliubov {
        alpha_inv_dag,
        gamma,
        sigma,
    })
}

pub fn hs_norm_beta(s: &SymplecticPropagator) -> f64 {
    s.beta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `S2 · S1`, with S1 applied first.
///
/// `ᾱ = ᾱ₂ (id + γ₂σ₁) ᾱ₁`, so the tracked log adds the two factors' logs and
/// `log det(id + γ₂σ₁)` continued along `id + sγ₂σ₁`, `s ∈ [0, 1]`.
pub fn compose(
    s2: &SymplecticPropagator,
    s1: &SymplecticPropagator,
) -> Result<SymplecticPropagator> {
    let alpha = &s2.alpha * &s1.alpha + &s2.beta * s1.beta_bar();
    let beta = &s2.alpha * &s1.beta + &s2.beta * s1.alpha_bar();
    let gamma2 = Factorized::new(&s2.alpha_bar(), "conj(alpha)")?.solve(&s2.beta_bar());
    let sigma1 = Factorized::new(&s1.alpha.adjoint(), "alpha^dagger")?
        .solve(&s1.beta.transpose())
        .transpose();
    let cross = linalg::log_det_identity_plus(&(gamma2 * sigma1))?;
    Ok(SymplecticPropagator {
        alpha,
        beta,
        t: s1.t + s2.t,
        lambda: s2.lambda,
        logdet_abar: s2.logdet_abar + s1.logdet_abar + cross,
        logdet_abar0: s2.logdet_abar0 + s1.logdet_abar0,
    })
}
