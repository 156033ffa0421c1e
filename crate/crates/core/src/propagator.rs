// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Symplectic evolution `dS/dt = −H_λ(t) S`, `S(0) = id`, with
//! `H_λ = i [[A, λB̄], [−λB, −Ā]]` and `S = [[α, β], [β̄, ᾱ]]`.
//!
//! Only `α` and `β` are stored; `ᾱ = conj(α)` and `β̄ = conj(β)` by
//! construction. Alongside the blocks we carry `log det ᾱ` on a branch that is
//! continuous in time and `log det ᾱ₀ = i ∫ tr A`, the free (B = 0) reference.

use std::io::Write;

use crate::error::{Error, Result};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CMat, Factorized, C64, I};

#[derive(Clone, Debug)]
pub struct SymplecticPropagator {
    pub alpha: CMat,
    pub beta: CMat,
    pub t: f64,
    pub lambda: f64,
    /// `log det ᾱ`, imaginary part unwrapped along the evolution.
    pub logdet_abar: C64,
    /// `log det ᾱ₀ = i ∫₀ᵗ tr A(u) du`.
    pub logdet_abar0: C64,
}

impl SymplecticPropagator {
    pub fn identity(n: usize, lambda: f64) -> Self {
        Self {
            alpha: linalg::identity(n),
            beta: CMat::zeros(n, n),
            t: 0.0,
            lambda,
            logdet_abar: C64::new(0.0, 0.0),
            logdet_abar0: C64::new(0.0, 0.0),
        }
    }

    /// Wrap explicit blocks. `logdet_abar` takes the principal branch, which is
    /// only meaningful when no winding history matters.
    pub fn from_blocks(alpha: CMat, beta: CMat, t: f64, logdet_abar0: C64) -> Result<Self> {
        if alpha.shape() != beta.shape() || alpha.nrows() != alpha.ncols() {
            return Err(Error::Shape(format!(
                "alpha {:?} and beta {:?} must be equal square blocks",
                alpha.shape(),
                beta.shape()
            )));
        }
        let logdet_abar = Factorized::new(&linalg::conj(&alpha), "conj(alpha)")?.log_det();
        Ok(Self {
            alpha,
            beta,
            t,
            lambda: 1.0,
            logdet_abar,
            logdet_abar0,
        })
    }

    pub fn n(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn alpha_bar(&self) -> CMat {
        linalg::conj(&self.alpha)
    }

    pub fn beta_bar(&self) -> CMat {
        linalg::conj(&self.beta)
    }

    /// The full 2n×2n matrix `[[α, β], [β̄, ᾱ]]`.
    pub fn matrix(&self) -> CMat {
        linalg::block2(&self.alpha, &self.beta, &self.beta_bar(), &self.alpha_bar())
    }

    /// `log det(ᾱ₀⁻¹ ᾱ)` on the tracked branch.
    pub fn log_det_ratio(&self) -> C64 {
        self.logdet_abar - self.logdet_abar0
    }
}

/// `H_λ(t) = i [[A, λB̄], [−λB, −Ā]]`. For self-adjoint A the lower-right
/// block `−Ā` equals `−Aᵀ`, which keeps the flow closed on `[[α, β], [β̄, ᾱ]]`.
pub fn hamiltonian_generator(h: &QuadraticHamiltonian, t: f64, lambda: f64) -> Result<CMat> {
    check_lambda(lambda)?;
    let (a, b) = h.sample(t)?;
    let lam = C64::from(lambda);
    let g = linalg::block2(
        &a,
        &(linalg::conj(&b) * lam),
        &(-&b * lam),
        &(-linalg::conj(&a)),
    );
    Ok(g * I)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaRange(lambda));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub steps: usize,
    /// Reproject every this many steps and at the end; 0 disables.
    pub reproject_every: usize,
    /// Maximum defect tolerated after reprojection.
    pub defect_bound: f64,
    /// Maximum defect from which reprojection is attempted.
    pub recover_bound: f64,
    pub record: bool,
    /// Keep every `history_stride`-th step in the history.
    pub history_stride: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            reproject_every: 16,
            defect_bound: 1e-10,
            recover_bound: 1e-4,
            record: false,
            history_stride: 1,
        }
    }
}

pub const DEFAULT_STEPS: usize = 1024;

impl EvolveOptions {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    pub fn recording(mut self) -> Self {
        self.record = true;
        self
    }

    pub fn without_reprojection(mut self) -> Self {
        self.reproject_every = 0;
        self
    }
}

/// Propagator snapshots on a uniform grid over `[0, T]`.
#[derive(Clone, Debug)]
pub struct PropagatorHistory {
    pub grid: Vec<f64>,
    pub snapshots: Vec<SymplecticPropagator>,
}

impl PropagatorHistory {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn step(&self) -> f64 {
        if self.grid.len() < 2 {
            0.0
        } else {
            self.grid[1] - self.grid[0]
        }
    }

    pub fn lambda(&self) -> f64 {
        self.snapshots[0].lambda
    }

    pub fn last(&self) -> &SymplecticPropagator {
        self.snapshots.last().expect("history is never empty")
    }

    /// Grid index of `t`, if `t` is a node to within 1e-9 of a step.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let h = self.step();
        if h == 0.0 {
            return if t.abs() < 1e-12 {
                Ok(0)
            } else {
                Err(Error::OffGrid(t))
            };
        }
        let k = (t - self.grid[0]) / h;
        let r = k.round();
        if r < 0.0 || r as usize >= self.grid.len() || (k - r).abs() > 1e-9 {
            return Err(Error::OffGrid(t));
        }
        Ok(r as usize)
    }

    /// CSV dump: `t`, Re/Im of every α and β entry (row-major), then
    /// `logdet_abar_re`, `logdet_abar_im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.snapshots[0].n();
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        for block in ["alpha", "beta"] {
            for i in 0..n {
                for j in 0..n {
                    header.push(format!("{block}_{i}{j}_re"));
                    header.push(format!("{block}_{i}{j}_im"));
                }
            }
        }
        header.push("logdet_abar_re".into());
        header.push("logdet_abar_im".into());
        wtr.write_record(&header)?;
        for (t, s) in self.grid.iter().zip(&self.snapshots) {
            let mut row = vec![format!("{t:e}")];
            for m in [&s.alpha, &s.beta] {
                for i in 0..n {
                    for j in 0..n {
                        row.push(format!("{:e}", m[(i, j)].re));
                        row.push(format!("{:e}", m[(i, j)].im));
                    }
                }
            }
            row.push(format!("{:e}", s.logdet_abar.re));
            row.push(format!("{:e}", s.logdet_abar.im));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub propagator: SymplecticPropagator,
    pub history: Option<PropagatorHistory>,
}

/// Right-hand side of the block equations plus `d/dt log det ᾱ`.
struct Rhs {
    d_alpha: CMat,
    d_beta: CMat,
    d_logdet: C64,
}

fn rhs(a: &CMat, b: &CMat, lambda: f64, alpha: &CMat, beta: &CMat, t: f64) -> Result<Rhs> {
    let lam = C64::from(lambda);
    let abar = linalg::conj(alpha);
    let bbar_lam = linalg::conj(b) * lam;
    let d_alpha = (a * alpha + &bbar_lam * linalg::conj(beta)) * (-I);
    let d_beta = (a * beta + &bbar_lam * &abar) * (-I);
    let mut d_logdet = I * linalg::trace(a);
    if lambda != 0.0 && b.iter().any(|z| *z != C64::new(0.0, 0.0)) {
        let fact = Factorized::new(&abar, "conj(alpha)").map_err(|e| at_time(e, t))?;
        d_logdet += I * lam * linalg::trace(&fact.solve(&(b * beta)));
    }
    Ok(Rhs {
        d_alpha,
        d_beta,
        d_logdet,
    })
}

fn at_time(e: Error, t: f64) -> Error {
    match e {
        Error::Singular { what, ratio } => Error::Singular {
            what: format!("{what} at t = {t}"),
            ratio,
        },
        other => other,
    }
}

pub fn evolve(
    h: &QuadraticHamiltonian,
    lambda: f64,
    steps: usize,
    record: bool,
) -> Result<Evolution> {
    let mut opts = EvolveOptions::with_steps(steps);
    opts.record = record;
    evolve_with(h, lambda, &opts)
}

/// Classical fourth-order fixed-step integration of the propagator.
///
/// The log-det increment of each step is the principal log of the determinant
/// ratio, shifted by the multiple of 2πi that lies closest to the RK4
/// integral of `i tr A + iλ tr(ᾱ⁻¹ B β)`. The value therefore matches
/// `det ᾱ` to rounding while the branch follows the trace equation.
pub fn evolve_with(
    h: &QuadraticHamiltonian,
    lambda: f64,
    opts: &EvolveOptions,
) -> Result<Evolution> {
    check_lambda(lambda)?;
    if opts.steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    if opts.record && (opts.history_stride == 0 || !opts.steps.is_multiple_of(opts.history_stride))
    {
        return Err(Error::Config(format!(
            "history stride {} must divide steps {}",
            opts.history_stride, opts.steps
        )));
    }
    let n = h.n();
    let horizon = h.horizon();
    let dt = horizon / opts.steps as f64;
    let mut s = SymplecticPropagator::identity(n, lambda);
    let mut principal = C64::new(0.0, 0.0);
    let mut history = opts.record.then(|| PropagatorHistory {
        grid: vec![0.0],
        snapshots: vec![s.clone()],
    });
    let (mut a0, mut b0) = h.sample(0.0)?;
    let frozen = h.is_time_independent();
    let hc = C64::from(dt);
    for step in 0..opts.steps {
        let t = step as f64 * dt;
        let t_next = if step + 1 == opts.steps {
            horizon
        } else {
            t + dt
        };
        let ((am, bm), (a1, b1)) = if frozen {
            ((a0.clone(), b0.clone()), (a0.clone(), b0.clone()))
        } else {
            (h.sample(t + 0.5 * dt)?, h.sample(t_next)?)
        };

        let k1 = rhs(&a0, &b0, lambda, &s.alpha, &s.beta, t)?;
        let al2 = &s.alpha + &k1.d_alpha * (hc * 0.5);
        let be2 = &s.beta + &k1.d_beta * (hc * 0.5);
        let k2 = rhs(&am, &bm, lambda, &al2, &be2, t + 0.5 * dt)?;
        let al3 = &s.alpha + &k2.d_alpha * (hc * 0.5);
        let be3 = &s.beta + &k2.d_beta * (hc * 0.5);
        let k3 = rhs(&am, &bm, lambda, &al3, &be3, t + 0.5 * dt)?;
        let al4 = &s.alpha + &k3.d_alpha * hc;
        let be4 = &s.beta + &k3.d_beta * hc;
        let k4 = rhs(&a1, &b1, lambda, &al4, &be4, t_next)?;

        let sixth = hc / 6.0;
        s.alpha +=
            (&k1.d_alpha + (&k2.d_alpha + &k3.d_alpha) * C64::from(2.0) + &k4.d_alpha) * sixth;
        s.beta += (&k1.d_beta + (&k2.d_beta + &k3.d_beta) * C64::from(2.0) + &k4.d_beta) * sixth;
        let ode_increment = (k1.d_logdet + 2.0 * (k2.d_logdet + k3.d_logdet) + k4.d_logdet) * sixth;
        let tr0 = |a: &CMat| I * linalg::trace(a);
        s.logdet_abar0 += (tr0(&a0) + 4.0 * tr0(&am) + tr0(&a1)) * sixth;

        let new_principal = Factorized::new(&s.alpha_bar(), "conj(alpha)")
            .map_err(|e| at_time(e, t_next))?
            .log_det();
        s.logdet_abar += linalg::unwrap_to(new_principal - principal, ode_increment);
        principal = new_principal;
        s.t = t_next;

        let last = step + 1 == opts.steps;
        if opts.reproject_every > 0 && ((step + 1) % opts.reproject_every == 0 || last) {
            let before = symplectic_defect(&s);
            if before > opts.recover_bound {
                return Err(Error::IntegrationFailure {
                    t: t_next,
                    defect: before,
                    bound: opts.recover_bound,
                });
            }
            s = reproject_with(&s, opts.recover_bound)?;
            let after = symplectic_defect(&s);
            if after > opts.defect_bound {
                return Err(Error::IntegrationFailure {
                    t: t_next,
                    defect: after,
                    bound: opts.defect_bound,
                });
            }
            principal = Factorized::new(&s.alpha_bar(), "conj(alpha)")?.log_det();
        }

        if let Some(hist) = history.as_mut() {
            if (step + 1) % opts.history_stride == 0 {
                hist.grid.push(t_next);
                hist.snapshots.push(s.clone());
            }
        }
        a0 = a1;
        b0 = b1;
    }
    Ok(Evolution {
        propagator: s,
        history,
    })
}

/// Operator-norm residuals of `αα† − ββ† = id` and `αβᵀ − βαᵀ = 0`; the larger.
pub fn symplectic_defect(s: &SymplecticPropagator) -> f64 {
    let (p, q) = defect_blocks(s);
    linalg::op_norm(&p).max(linalg::op_norm(&q))
}

fn defect_blocks(s: &SymplecticPropagator) -> (CMat, CMat) {
    let n = s.n();
    let p = &s.alpha * s.alpha.adjoint() - &s.beta * s.beta.adjoint() - linalg::identity(n);
    let q = &s.alpha * s.beta.transpose() - &s.beta * s.alpha.transpose();
    (p, q)
}

/// Default bound on the defect that [`reproject`] accepts.
pub const RECOVERABLE_DEFECT: f64 = 1e-4;

pub fn reproject(s: &SymplecticPropagator) -> Result<SymplecticPropagator> {
    reproject_with(s, RECOVERABLE_DEFECT)
}

/// Pull `S` back onto the symplectic group with repeated first-order
/// corrections `S ← (I − ½E) S`, where `E = S K S† K − I` and
/// `K = diag(I, −I)`. The correction keeps the `[[α, β], [β̄, ᾱ]]` layout;
/// `logdet_abar` moves by the induced change of `log det ᾱ`.
pub fn reproject_with(
    s: &SymplecticPropagator,
    recover_bound: f64,
) -> Result<SymplecticPropagator> {
    let start = symplectic_defect(s);
    if start > recover_bound {
        return Err(Error::Unrecoverable {
            defect: start,
            bound: recover_bound,
        });
    }
    let before = Factorized::new(&s.alpha_bar(), "conj(alpha)")?.log_det();
    let mut out = s.clone();
    for _ in 0..8 {
        let (p, q) = defect_blocks(&out);
        let size = linalg::max_abs(&p).max(linalg::max_abs(&q));
        if size < 1e-15 {
            break;
        }
        let half = C64::from(0.5);
        let beta_bar = out.beta_bar();
        let alpha_bar = out.alpha_bar();
        let alpha = &out.alpha - (&p * &out.alpha - &q * &beta_bar) * half;
        let beta = &out.beta - (&p * &out.beta - &q * &alpha_bar) * half;
        out.alpha = alpha;
        out.beta = beta;
    }
    let after = Factorized::new(&out.alpha_bar(), "conj(alpha)")?.log_det();
    out.logdet_abar += linalg::unwrap_to(after - before, C64::new(0.0, 0.0));
    Ok(out)
}

/// `S⁻¹ = [[α†, −βᵀ], [−β†, αᵀ]]`. The inverse runs the clock backwards, so
/// its tracked logs are the conjugates of the forward ones.
pub fn propagator_inverse(s: &SymplecticPropagator) -> SymplecticPropagator {
    SymplecticPropagator {
        alpha: s.alpha.adjoint(),
        beta: -s.beta.transpose(),
        t: -s.t,
        lambda: s.lambda,
        logdet_abar: s.logdet_abar.conj(),
        logdet_abar0: s.logdet_abar0.conj(),
    }
}

/// Closed-form propagator for one mode with constant `A = a` (real) and
/// `B = b`, including the unwrapped `log det ᾱ`.
///
/// With `Ω² = a² − |b|²`: `α = cos Ωt − i(a/Ω) sin Ωt`,
/// `β = −i(b̄/Ω) sin Ωt`, continued analytically through `Ω² ≤ 0`.
pub fn single_mode_exact(a: f64, b: C64, horizon: f64) -> SymplecticPropagator {
    let omega_sq = a * a - b.norm_sqr();
    let t = horizon;
    // (cos Ωt, sin(Ωt)/Ω) for either sign of Ω², Taylor series near Ω = 0.
    let x = omega_sq * t * t;
    let (cos_part, sinc_part) = if x.abs() < 1e-8 {
        (
            1.0 - x / 2.0 + x * x / 24.0,
            t * (1.0 - x / 6.0 + x * x / 120.0),
        )
    } else if omega_sq > 0.0 {
        let w = omega_sq.sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else {
        let k = (-omega_sq).sqrt();
        ((k * t).cosh(), (k * t).sinh() / k)
    };
    let alpha = C64::new(cos_part, -a * sinc_part);
    let beta = -I * b.conj() * sinc_part;
    let abar = alpha.conj();
    let phase = if omega_sq > 0.0 && x.abs() >= 1e-8 {
        // ᾱ(t) = cos φ + i (a/Ω) sin φ traces an ellipse; the phase passes
        // through multiples of π exactly when φ does.
        let w = omega_sq.sqrt();
        let phi = w * t;
        let k = (phi / std::f64::consts::PI).round();
        let r = phi - k * std::f64::consts::PI;
        k * std::f64::consts::PI * a.signum() + ((a / w) * r.sin()).atan2(r.cos())
    } else {
        // Re ᾱ > 0 throughout, no winding.
        abar.im.atan2(abar.re)
    };
    SymplecticPropagator {
        alpha: CMat::from_element(1, 1, alpha),
        beta: CMat::from_element(1, 1, beta),
        t,
        lambda: 1.0,
        logdet_abar: C64::new(abar.norm().ln(), phase),
        logdet_abar0: C64::new(0.0, a * t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn one(x: C64) -> CMat {
        CMat::from_element(1, 1, x)
    }

    #[test]
    fn generator_blocks() {
        let h = QuadraticHamiltonian::constant(one(c(0.7, 0.0)), one(c(0.4, 0.0)), 1.0).unwrap();
        let g0 = hamiltonian_generator(&h, 0.3, 0.0).unwrap();
        assert!((g0[(0, 0)] - c(0.0, 0.7)).norm() < 1e-15);
        assert!((g0[(1, 1)] - c(0.0, -0.7)).norm() < 1e-15);
        assert!(g0[(0, 1)].norm() == 0.0 && g0[(1, 0)].norm() == 0.0);

        let sq = QuadraticHamiltonian::single_mode_squeeze(c(0.4, 0.0), 1.0).unwrap();
        let g1 = hamiltonian_generator(&sq, 0.0, 1.0).unwrap();
        assert!((g1[(0, 1)] - c(0.0, 0.4)).norm() < 1e-15);
        assert!((g1[(1, 0)] - c(0.0, -0.4)).norm() < 1e-15);
        assert!(matches!(
            hamiltonian_generator(&sq, 0.0, 1.5),
            Err(Error::LambdaRange(_))
        ));
    }

    #[test]
    fn zero_horizon_is_identity() {
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.9, 0.0), 0.0).unwrap();
        let s = evolve(&h, 1.0, 1, false).unwrap().propagator;
        assert!((s.alpha[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(s.beta[(0, 0)].norm() < 1e-15);
        assert_eq!(s.logdet_abar, c(0.0, 0.0));
    }

    #[test]
    fn free_mode_phase_is_unwrapped() {
        // ωT = 20 winds det ᾱ about three times.
        let (omega, horizon) = (2.0, 10.0);
        let h =
            QuadraticHamiltonian::constant(one(c(omega, 0.0)), one(c(0.0, 0.0)), horizon).unwrap();
        let s = evolve(&h, 1.0, 8000, false).unwrap().propagator;
        assert!((s.alpha[(0, 0)] - (-I * omega * horizon).exp()).norm() < 1e-9);
        assert!((s.logdet_abar - c(0.0, omega * horizon)).norm() < 1e-9);
        assert!((s.logdet_abar0 - c(0.0, omega * horizon)).norm() < 1e-10);
    }

    #[test]
    fn defect_examples() {
        assert_eq!(
            symplectic_defect(&SymplecticPropagator::identity(3, 1.0)),
            0.0
        );
        let r: f64 = 0.83;
        let sq = SymplecticPropagator::from_blocks(
            one(c(r.cosh(), 0.0)),
            one(c(0.0, -r.sinh())),
            1.0,
            c(0.0, 0.0),
        )
        .unwrap();
        assert!(symplectic_defect(&sq) < 1e-15);
        let two =
            SymplecticPropagator::from_blocks(one(c(2.0, 0.0)), one(c(0.0, 0.0)), 1.0, c(0.0, 0.0))
                .unwrap();
        assert!((symplectic_defect(&two) - 3.0).abs() < 1e-15);
        assert!(matches!(reproject(&two), Err(Error::Unrecoverable { .. })));
    }

    #[test]
    fn reprojection_fixed_point_and_repair() {
        let r: f64 = 0.6;
        let exact = SymplecticPropagator::from_blocks(
            one(c(r.cosh(), 0.0)),
            one(c(0.0, -r.sinh())),
            1.0,
            c(0.0, 0.0),
        )
        .unwrap();
        let same = reproject(&exact).unwrap();
        assert!((&same.alpha - &exact.alpha).norm() < 1e-15);
        assert!((&same.beta - &exact.beta).norm() < 1e-15);

        let mut id = SymplecticPropagator::identity(2, 1.0);
        id.alpha[(0, 1)] += c(1e-8, 0.0);
        assert!(symplectic_defect(&id) > 1e-9);
        assert!(symplectic_defect(&reproject(&id).unwrap()) < 1e-14);

        let mut scaled = exact.clone();
        scaled.alpha *= C64::from(1.0 + 1e-6);
        scaled.logdet_abar = Factorized::new(&scaled.alpha_bar(), "a").unwrap().log_det();
        let fixed = reproject(&scaled).unwrap();
        assert!(symplectic_defect(&fixed) < 1e-12);
        let det = Factorized::new(&fixed.alpha_bar(), "a").unwrap().log_det();
        assert!((fixed.logdet_abar - det).norm() < 1e-13);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let r: f64 = 1.1;
        let s = SymplecticPropagator::from_blocks(
            one(c(r.cosh(), 0.0)),
            one(c(0.0, -r.sinh())),
            1.0,
            c(0.0, 0.0),
        )
        .unwrap();
        let inv = propagator_inverse(&s);
        assert!((inv.beta[(0, 0)] - c(0.0, r.sinh())).norm() < 1e-15);
        let prod = s.matrix() * inv.matrix();
        assert!((prod - linalg::identity(2)).norm() < 1e-12);
        let id = propagator_inverse(&SymplecticPropagator::identity(2, 1.0));
        assert!((id.matrix() - linalg::identity(4)).norm() == 0.0);
    }

    #[test]
    fn exact_single_mode_matches_integrator() {
        for &(a, b, t) in &[
            (1.3, c(0.4, 0.2), 7.0),
            (0.2, c(0.5, -0.3), 3.0),
            (0.5, c(0.5, 0.0), 2.0),
            (-2.0, c(0.3, 0.0), 9.0),
        ] {
            let h = QuadraticHamiltonian::constant(one(c(a, 0.0)), one(b), t).unwrap();
            let num = evolve(&h, 1.0, 4000, false).unwrap().propagator;
            let ex = single_mode_exact(a, b, t);
            assert!(
                (&num.alpha - &ex.alpha).norm() < 1e-9,
                "alpha for {a} {b} {t}"
            );
            assert!((&num.beta - &ex.beta).norm() < 1e-9, "beta for {a} {b} {t}");
            assert!(
                (num.logdet_abar - ex.logdet_abar).norm() < 1e-9,
                "logdet for {a} {b} {t}"
            );
            assert!((num.logdet_abar0 - ex.logdet_abar0).norm() < 1e-12);
        }
    }

    #[test]
    fn history_grid_and_csv() {
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.5, 0.0), 1.0).unwrap();
        let ev = evolve(&h, 1.0, 8, true).unwrap();
        let hist = ev.history.unwrap();
        assert_eq!(hist.len(), 9);
        assert_eq!(hist.index_of(0.25).unwrap(), 2);
        assert!(hist.index_of(0.3).is_err());
        let mut buf = Vec::new();
        hist.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("t,alpha_00_re,alpha_00_im,beta_00_re"));
    }
}
