// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Green function of `D_λ` with `ζ(0) = 0`, `ζ̄(T) = 0`, assembled from a
//! recorded propagator history, plus the trace and λ-derivative identities.
//!
//! The kernel is separable:
//! `G(t, u) = θ(t − u) S(t) S⁻¹(u) Σ + i [β_t; ᾱ_t] R(u)` with
//! `R(u) = [γ α_u† − β_u†,  γ β_uᵀ − α_uᵀ]`, `γ = γ(T)` and `Σ = diag(−i, i)`.

use crate::action::{self, DiscretizedPath};
use crate::bogoliubov;
use crate::error::{Error, Result};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CMat, CVec, Factorized, C64, I};
use crate::propagator::{self, EvolveOptions, PropagatorHistory, SymplecticPropagator};
use crate::quadrature;

#[derive(Clone, Debug)]
pub struct GreenKernel {
    h: QuadraticHamiltonian,
    history: PropagatorHistory,
    gamma: CMat,
    theta0: f64,
}

impl GreenKernel {
    pub fn new(h: QuadraticHamiltonian, history: PropagatorHistory) -> Result<Self> {
        if history.len() < 2 {
            return Err(Error::Config(
                "a Green kernel needs at least one time step".into(),
            ));
        }
        let gamma = bogoliubov::derive(history.last())?.gamma;
        Ok(Self {
            h,
            history,
            gamma,
            theta0: 0.5,
        })
    }

    /// Evolve `h` at `lambda` with `steps` recorded steps and build the kernel.
    pub fn build(h: &QuadraticHamiltonian, lambda: f64, steps: usize) -> Result<Self> {
        let ev = propagator::evolve_with(h, lambda, &EvolveOptions::with_steps(steps).recording())?;
        Self::new(h.clone(), ev.history.expect("recorded"))
    }

    /// Value of the step function at zero; ½ unless changed.
    pub fn with_theta0(mut self, theta0: f64) -> Self {
        self.theta0 = theta0;
        self
    }

    pub fn history(&self) -> &PropagatorHistory {
        &self.history
    }

    pub fn hamiltonian(&self) -> &QuadraticHamiltonian {
        &self.h
    }

    pub fn lambda(&self) -> f64 {
        self.history.lambda()
    }

    pub fn gamma_final(&self) -> &CMat {
        &self.gamma
    }

    fn theta(&self, x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            0.0
        } else {
            self.theta0
        }
    }

    /// `R(u)` as its two n×n halves.
    fn right(&self, s: &SymplecticPropagator) -> (CMat, CMat) {
        (
            &self.gamma * s.alpha.adjoint() - s.beta.adjoint(),
            &self.gamma * s.beta.transpose() - s.alpha.transpose(),
        )
    }
}

/// `G(t, u)` as a 2n×2n matrix, `t` and `u` on the history grid.
pub fn green_block(k: &GreenKernel, t: f64, u: f64) -> Result<CMat> {
    let i = k.history.index_of(t)?;
    let j = k.history.index_of(u)?;
    Ok(green_block_at(k, i, j))
}

/// `G` between history nodes `i` (time t) and `j` (time u).
pub fn green_block_at(k: &GreenKernel, i: usize, j: usize) -> CMat {
    let st = &k.history.snapshots[i];
    let su = &k.history.snapshots[j];
    let th = C64::from(k.theta(k.history.grid[i] - k.history.grid[j]));
    let (abar_t, bbar_t) = (st.alpha_bar(), st.beta_bar());
    let (r_up, r_low) = k.right(su);
    let zz = (&st.alpha * su.alpha.adjoint() - &st.beta * su.beta.adjoint()) * (-I * th)
        + &st.beta * &r_up * I;
    let zzb = (&st.alpha * su.beta.transpose() - &st.beta * su.alpha.transpose()) * (-I * th)
        + &st.beta * &r_low * I;
    let zbz = (&bbar_t * su.alpha.adjoint() - &abar_t * su.beta.adjoint()) * (-I * th)
        + &abar_t * &r_up * I;
    let zbzb = (&bbar_t * su.beta.transpose() - &abar_t * su.alpha.transpose()) * (-I * th)
        + &abar_t * &r_low * I;
    linalg::block2(&zz, &zzb, &zbz, &zbzb)
}

/// `ζ = ∫ G F du` at every history node for a forcing sampled on the grid.
pub fn apply_green(k: &GreenKernel, forcing: &DiscretizedPath) -> Result<DiscretizedPath> {
    let grid = &k.history.grid;
    if forcing.grid().len() != grid.len()
        || forcing
            .grid()
            .iter()
            .zip(grid)
            .any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + b.abs()))
    {
        return Err(Error::Shape(
            "forcing must be sampled on the history grid".into(),
        ));
    }
    let n = k.history.last().n();
    if forcing.n() != n {
        return Err(Error::Shape(format!(
            "forcing has {} modes, kernel {}",
            forcing.n(),
            n
        )));
    }
    // P(u) = S⁻¹(u) Σ F(u), stacked.
    let p: Vec<CVec> = k
        .history
        .snapshots
        .iter()
        .zip(forcing.z().iter().zip(forcing.zbar()))
        .map(|(s, (fz, fzb))| {
            let up = (s.alpha.adjoint() * fz + s.beta.transpose() * fzb) * (-I);
            let low = (s.beta.adjoint() * fz + s.alpha.transpose() * fzb) * I;
            stack(&up, &low)
        })
        .collect();
    let running = cumulative_vec(&p, k.history.step());
    let total = &running[running.len() - 1];
    let (tot_up, tot_low) = split(total, n);
    let tail = &k.gamma * &tot_up + &tot_low;
    let mut z = Vec::with_capacity(grid.len());
    let mut zbar = Vec::with_capacity(grid.len());
    for (s, c) in k.history.snapshots.iter().zip(&running) {
        let (c_up, c_low) = split(c, n);
        let abar = s.alpha_bar();
        z.push(&s.alpha * &c_up + &s.beta * (&c_low - &tail));
        zbar.push(s.beta_bar() * &c_up + abar * (&c_low - &tail));
    }
    DiscretizedPath::new(grid.clone(), z, zbar)
}

fn stack(a: &CVec, b: &CVec) -> CVec {
    let n = a.len();
    CVec::from_fn(2 * n, |i, _| if i < n { a[i] } else { b[i - n] })
}

fn split(v: &CVec, n: usize) -> (CVec, CVec) {
    (v.rows(0, n).into_owned(), v.rows(n, n).into_owned())
}

fn cumulative_vec(samples: &[CVec], h: f64) -> Vec<CVec> {
    let len = samples[0].len();
    let mut out = vec![CVec::zeros(len); samples.len()];
    for r in 0..len {
        let col: Vec<C64> = samples.iter().map(|v| v[r]).collect();
        for (o, x) in out.iter_mut().zip(quadrature::cumulative(&col, h)) {
            o[r] = x;
        }
    }
    out
}

/// Residual of `D_λ (G F) = F`: max-norm over interior nodes plus the
/// boundary values `|ζ(0)|` and `|ζ̄(T)|`.
pub fn verify_green(k: &GreenKernel, forcing: &DiscretizedPath) -> Result<f64> {
    let zeta = apply_green(k, forcing)?;
    let d = action::apply_d(&k.h, k.lambda(), &zeta)?;
    let last = d.len() - 1;
    let mut interior = 0.0_f64;
    for (idx, (up, low)) in d.iter().enumerate().take(last).skip(1) {
        interior = interior
            .max(linalg::vec_max_abs(&(up - &forcing.z()[idx])))
            .max(linalg::vec_max_abs(&(low - &forcing.zbar()[idx])));
    }
    Ok(interior + linalg::vec_max_abs(&zeta.z()[0]) + linalg::vec_max_abs(&zeta.zbar()[last]))
}

/// Relative error of `G (D_λ ζ) = ζ` for the linear path `ζ(t) = c t/T`,
/// `ζ̄(t) = d (T − t)/T`. It meets both boundary conditions and its image
/// under `D_λ` is known exactly, so no difference quotients enter.
pub fn manufactured_residual(k: &GreenKernel, c: &CVec, d: &CVec) -> Result<f64> {
    let n = k.history.last().n();
    if c.len() != n || d.len() != n {
        return Err(Error::Shape(format!("test path needs {n} components")));
    }
    let horizon = k.h.horizon();
    if horizon == 0.0 {
        return Ok(0.0);
    }
    let lam = C64::from(k.lambda());
    let grid = k.history.grid.clone();
    let mut fz = Vec::with_capacity(grid.len());
    let mut fzb = Vec::with_capacity(grid.len());
    let mut exact = Vec::with_capacity(grid.len());
    for &t in &grid {
        let (a, b) = k.h.sample(t)?;
        let z = c * C64::from(t / horizon);
        let zb = d * C64::from((horizon - t) / horizon);
        fz.push(c * (I / horizon) - &a * &z - linalg::conj(&b) * &zb * lam);
        fzb.push(d * (I / horizon) - linalg::conj(&a) * &zb - &b * &z * lam);
        exact.push((z, zb));
    }
    let zeta = apply_green(k, &DiscretizedPath::new(grid, fz, fzb)?)?;
    let mut err = 0.0_f64;
    let mut scale = 0.0_f64;
    for ((z, zb), (ez, ezb)) in zeta.z().iter().zip(zeta.zbar()).zip(&exact) {
        err = err
            .max(linalg::vec_max_abs(&(z - ez)))
            .max(linalg::vec_max_abs(&(zb - ezb)));
        scale = scale
            .max(linalg::vec_max_abs(ez))
            .max(linalg::vec_max_abs(ezb));
    }
    Ok(if scale > 0.0 { err / scale } else { err })
}

/// `Tr(G N)` through the reduced integrand
/// `−i tr{β(γβᵀ − αᵀ)B + ᾱ(γα† − β†)B̄}`, composite Simpson.
pub fn trace_gn(k: &GreenKernel) -> Result<C64> {
    let samples = k
        .history
        .grid
        .iter()
        .zip(&k.history.snapshots)
        .map(|(&t, s)| {
            let (_, b) = k.h.sample(t)?;
            let (r_up, r_low) = k.right(s);
            let tr = linalg::trace(&(&s.beta * r_low * &b))
                + linalg::trace(&(s.alpha_bar() * r_up * linalg::conj(&b)));
            Ok(-I * tr)
        })
        .collect::<Result<Vec<C64>>>()?;
    Ok(quadrature::simpson(&samples, k.history.step()))
}

/// `Tr(G N) = −∫ tr{G_ζζ̄(t,t) B + G_ζ̄ζ(t,t) B̄}` from the equal-time blocks
/// with the kernel's θ(0).
pub fn trace_gn_blocks(k: &GreenKernel) -> Result<C64> {
    let n = k.history.last().n();
    let samples = (0..k.history.len())
        .map(|i| {
            let (_, b) = k.h.sample(k.history.grid[i])?;
            let g = green_block_at(k, i, i);
            let zzb = g.view((0, n), (n, n)).into_owned();
            let zbz = g.view((n, 0), (n, n)).into_owned();
            Ok(-(linalg::trace(&(zzb * &b)) + linalg::trace(&(zbz * linalg::conj(&b)))))
        })
        .collect::<Result<Vec<C64>>>()?;
    Ok(quadrature::simpson(&samples, k.history.step()))
}

/// `dS_λ/dλ (T) = −S(T) ∫₀ᵀ S⁻¹(u) (dH/dλ)(u) S(u) du` with
/// `dH/dλ = i [[0, B̄], [−B, 0]]`.
pub fn ds_dlambda(h: &QuadraticHamiltonian, lambda: f64, steps: usize) -> Result<CMat> {
    let ev = propagator::evolve_with(h, lambda, &EvolveOptions::with_steps(steps).recording())?;
    ds_dlambda_from(h, &ev.history.expect("recorded"))
}

pub fn ds_dlambda_from(h: &QuadraticHamiltonian, history: &PropagatorHistory) -> Result<CMat> {
    let n = history.last().n();
    let weights = quadrature::simpson_weights(history.len() - 1, history.step());
    let mut acc = CMat::zeros(2 * n, 2 * n);
    for ((&t, s), w) in history.grid.iter().zip(&history.snapshots).zip(weights) {
        let (_, b) = h.sample(t)?;
        let dh = linalg::block2(
            &CMat::zeros(n, n),
            &linalg::conj(&b),
            &(-b),
            &CMat::zeros(n, n),
        ) * I;
        let inv = propagator::propagator_inverse(s).matrix();
        acc += inv * dh * s.matrix() * C64::from(w);
    }
    Ok(-history.last().matrix() * acc)
}

/// `tr(ᾱ⁻¹ dᾱ/dλ)` at the final time of the history.
pub fn log_det_derivative(h: &QuadraticHamiltonian, history: &PropagatorHistory) -> Result<C64> {
    let n = history.last().n();
    let ds = ds_dlambda_from(h, history)?;
    let dabar = ds.view((n, n), (n, n)).into_owned();
    let abar = Factorized::new(&history.last().alpha_bar(), "conj(alpha)")?;
    Ok(linalg::trace(&abar.solve(&dabar)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn one(x: C64) -> CMat {
        CMat::from_element(1, 1, x)
    }

    #[test]
    fn free_kernel_is_retarded_phase() {
        let omega = 1.3;
        let h = QuadraticHamiltonian::constant(one(c(omega, 0.0)), one(c(0.4, 0.0)), 1.0).unwrap();
        let k = GreenKernel::build(&h, 0.0, 64).unwrap();
        let g = green_block(&k, 0.75, 0.25).unwrap();
        assert!((g[(0, 0)] - (-I * (-I * omega * 0.5).exp())).norm() < 1e-9);
        assert!(g[(0, 1)].norm() < 1e-12);
        let before = green_block(&k, 0.25, 0.75).unwrap();
        assert!(before[(0, 0)].norm() < 1e-12);
        assert!(matches!(green_block(&k, 0.3, 0.25), Err(Error::OffGrid(_))));
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.7, 0.0), 1.0).unwrap();
        let k = GreenKernel::build(&h, 1.0, 64).unwrap();
        let f = DiscretizedPath::sample(1.0, 64, |_| (CVec::zeros(1), CVec::zeros(1))).unwrap();
        assert_eq!(verify_green(&k, &f).unwrap(), 0.0);
    }

    #[test]
    fn constant_source_free_mode() {
        // λ = 0, A = ω: i ζ̇ − ω ζ = f with ζ(0) = 0 gives ζ = (f/ω)(e^{−iωt} − 1).
        let (omega, f) = (0.8, c(0.3, -0.2));
        let h = QuadraticHamiltonian::constant(one(c(omega, 0.0)), one(c(0.5, 0.1)), 1.0).unwrap();
        let k = GreenKernel::build(&h, 0.0, 2000).unwrap();
        let forcing = DiscretizedPath::sample(1.0, 2000, |_| {
            (CVec::from_element(1, f), CVec::from_element(1, f.conj()))
        })
        .unwrap();
        let zeta = apply_green(&k, &forcing).unwrap();
        for (t, z) in zeta.grid().iter().zip(zeta.z()) {
            let exact = f / omega * ((-I * omega * t).exp() - 1.0);
            assert!((z[0] - exact).norm() < 1e-10);
        }
        assert!(verify_green(&k, &forcing).unwrap() < 1e-6);
    }

    #[test]
    fn theta_convention_is_irrelevant_on_the_diagonal() {
        let h = QuadraticHamiltonian::constant(one(c(0.4, 0.0)), one(c(0.6, 0.2)), 1.5).unwrap();
        let k = GreenKernel::build(&h, 1.0, 128).unwrap();
        let mid = trace_gn_blocks(&k.clone()).unwrap();
        let lo = trace_gn_blocks(&k.clone().with_theta0(0.0)).unwrap();
        let hi = trace_gn_blocks(&k.clone().with_theta0(1.0)).unwrap();
        assert!((mid - lo).norm() < 1e-12 && (mid - hi).norm() < 1e-12);
        assert!((mid - trace_gn(&k).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn squeeze_trace_matches_closed_form() {
        // ᾱ_λ(T) = cosh(λbT): tr(ᾱ⁻¹ dᾱ/dλ) = bT tanh(λbT).
        let (b, t, lam) = (0.5, 2.0, 0.6);
        let h = QuadraticHamiltonian::single_mode_squeeze(c(b, 0.0), t).unwrap();
        let k = GreenKernel::build(&h, lam, 400).unwrap();
        let expect = b * t * (lam * b * t).tanh();
        assert!((trace_gn(&k).unwrap() - expect).norm() < 1e-8);
        assert!((log_det_derivative(&h, k.history()).unwrap() - expect).norm() < 1e-8);
    }

    #[test]
    fn manufactured_path_is_reproduced() {
        let h = QuadraticHamiltonian::from_fn(1, 1.2, |t| {
            (one(c(0.7 + t, 0.0)), one(c(0.4 * t, -0.2)))
        })
        .unwrap();
        let (cv, dv) = (
            CVec::from_element(1, c(0.3, 0.1)),
            CVec::from_element(1, c(-0.5, 0.7)),
        );
        let fine = GreenKernel::build(&h, 0.8, 512).unwrap();
        assert!(manufactured_residual(&fine, &cv, &dv).unwrap() < 1e-10);
        let coarse = GreenKernel::build(&h, 0.8, 8).unwrap();
        assert!(manufactured_residual(&coarse, &cv, &dv).unwrap() > 1e-8);
    }

    #[test]
    fn dsym_zero_without_pairing() {
        let h = QuadraticHamiltonian::constant(one(c(1.0, 0.0)), one(c(0.0, 0.0)), 1.0).unwrap();
        assert!(ds_dlambda(&h, 0.5, 32).unwrap().norm() < 1e-15);
    }
}
