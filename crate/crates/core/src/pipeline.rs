// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs on a [`Scenario`]: amplitude, verification suite, oracle
//! comparison and history dump. Each returns plain records; writing them is
//! the caller's job.

use crate::action::CoherentLabel;
use crate::amplitude;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::green::{self, GreenKernel};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CVec, Factorized, C64};
use crate::oracles;
use crate::propagator::{self, EvolveOptions, SymplecticPropagator};
use crate::report::{AmplitudeRecord, CompareRecord, SaddleRecord, VerifyRecord};
use crate::scenario::Scenario;

pub const DEFECT_TOL: f64 = 1e-9;
pub const GREEN_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-6;
pub const THETA_TOL: f64 = 1e-12;
pub const DSYM_TOL: f64 = 1e-6;
pub const DSYM_EPS: f64 = 1e-5;
pub const PHASE_ROUTE_TOL: f64 = 1e-7;
pub const DET_MAGNITUDE_TOL: f64 = 1e-8;
pub const VACUUM_SLACK: f64 = 1e-10;
pub const COMPARE_TOL: f64 = 1e-5;

/// Everything a run needs, built once from the scenario.
pub struct Prepared {
    pub name: String,
    pub h: QuadraticHamiltonian,
    pub v: CoherentLabel,
    pub w: CoherentLabel,
    pub lambda: f64,
    pub opts: EvolveOptions,
}

impl Prepared {
    pub fn new(sc: &Scenario) -> Result<Self> {
        let lambda = sc.integrator.lambda;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::LambdaRange(lambda));
        }
        let (v, w) = sc.labels()?;
        Ok(Self {
            name: sc.name.clone(),
            h: sc.hamiltonian()?,
            v,
            w,
            lambda,
            opts: sc.evolve_options(),
        })
    }

    pub fn evolve(&self) -> Result<SymplecticPropagator> {
        Ok(propagator::evolve_with(&self.h, self.lambda, &self.opts)?.propagator)
    }

    /// `H` with its pairing scaled by λ, so λ = 1 on it reproduces the run.
    pub fn scaled(&self) -> QuadraticHamiltonian {
        self.h.with_pairing_scale(self.lambda)
    }
}

pub struct AmplitudeReport {
    pub amplitude: AmplitudeRecord,
    pub saddle: Vec<SaddleRecord>,
}

pub fn run_amplitude(sc: &Scenario) -> Result<AmplitudeReport> {
    let p = Prepared::new(sc)?;
    let s = p.evolve()?;
    let amp = amplitude::transition_amplitude(&s, &p.v, &p.w)?;
    let (z_t, zbar_0) = amplitude::classical_saddle(&s, &p.v, &p.w)?;
    let det_log = -0.5 * s.log_det_ratio();
    let amplitude = AmplitudeRecord {
        scenario: p.name.clone(),
        log_re: amp.log_value.re,
        log_im: amp.log_value.im,
        value_re: amp.value.re,
        value_im: amp.value.im,
        overflow: amp.overflow,
        det_log_re: det_log.re,
        det_log_im: det_log.im,
        symplectic_defect: propagator::symplectic_defect(&s),
    };
    let saddle = (0..s.n())
        .map(|i| SaddleRecord {
            scenario: p.name.clone(),
            mode: i,
            z_t_re: z_t[i].re,
            z_t_im: z_t[i].im,
            zbar_0_re: zbar_0[i].re,
            zbar_0_im: zbar_0[i].im,
        })
        .collect();
    Ok(AmplitudeReport { amplitude, saddle })
}

fn record(name: &str, check: &str, residual: f64, tolerance: f64) -> VerifyRecord {
    VerifyRecord {
        scenario: name.to_string(),
        check: check.to_string(),
        residual,
        tolerance,
        passed: residual.is_finite() && residual < tolerance,
    }
}

/// `| |det(ᾱ₀⁻¹ᾱ)|² / det(id + ββ†) − 1 |`.
pub fn det_magnitude_residual(s: &SymplecticPropagator) -> Result<f64> {
    let gram = linalg::identity(s.n()) + &s.beta * s.beta.adjoint();
    let rhs = Factorized::new(&gram, "id + beta beta^dag")?.log_det().re;
    Ok((2.0 * s.log_det_ratio().re - rhs).exp_m1().abs())
}

/// `max(0, |ℐ(0,0)| − 1)`.
pub fn vacuum_excess(s: &SymplecticPropagator) -> f64 {
    ((-0.5 * s.log_det_ratio()).re.exp() - 1.0).max(0.0)
}

/// Relative residual between the Green-kernel trace and `tr(ᾱ⁻¹ dᾱ/dλ)`,
/// with a unit floor on the scale since both vanish at λ = 0. Also returns
/// the change under θ(0) ∈ {0, 1}.
pub fn trace_identity(h: &QuadraticHamiltonian, lambda: f64, steps: usize) -> Result<(f64, f64)> {
    let k = GreenKernel::build(h, lambda, steps)?;
    let via_green = green::trace_gn(&k)?;
    let direct = green::log_det_derivative(h, k.history())?;
    let rel = (via_green - direct).norm() / direct.norm().max(1.0);
    let mid = green::trace_gn_blocks(&k)?;
    let lo = green::trace_gn_blocks(&k.clone().with_theta0(0.0))?;
    let hi = green::trace_gn_blocks(&k.with_theta0(1.0))?;
    Ok((rel, (mid - lo).norm().max((mid - hi).norm())))
}

/// Max entrywise gap between `dS/dλ` and a central difference of step `eps`,
/// relative to `max(1, max|dS/dλ|)`.
pub fn dsym_fd_residual(
    h: &QuadraticHamiltonian,
    lambda: f64,
    steps: usize,
    eps: f64,
) -> Result<f64> {
    let analytic = green::ds_dlambda(h, lambda, steps)?;
    let opts = EvolveOptions::with_steps(steps);
    let at = |s: f64| -> Result<linalg::CMat> {
        Ok(
            propagator::evolve_with(&h.with_pairing_scale(s), 1.0, &opts)?
                .propagator
                .matrix(),
        )
    };
    let fd = (at(lambda + eps)? - at(lambda - eps)?) / C64::from(2.0 * eps);
    Ok(linalg::max_abs(&(&fd - &analytic)) / linalg::max_abs(&analytic).max(1.0))
}

/// `|−½(L − L₀)_tracked − λ-continuation|` for `H` at λ = 1.
pub fn phase_route_gap(
    h: &QuadraticHamiltonian,
    steps: usize,
    lambda_nodes: usize,
    exec: Execution,
) -> Result<f64> {
    let tracked = -0.5
        * propagator::evolve_with(h, 1.0, &EvolveOptions::with_steps(steps))?
            .propagator
            .log_det_ratio();
    let grid = amplitude::uniform_lambda_grid(lambda_nodes);
    let continued = amplitude::lambda_continuation_phase_with(h, &grid, steps, exec)?;
    Ok((tracked - continued).norm())
}

pub fn run_verify(sc: &Scenario, exec: Execution) -> Result<Vec<VerifyRecord>> {
    let p = Prepared::new(sc)?;
    let name = p.name.as_str();
    let steps = p.opts.steps;
    let s = p.evolve()?;
    let mut out = vec![record(
        name,
        "symplectic_defect",
        propagator::symplectic_defect(&s),
        DEFECT_TOL,
    )];

    let k = GreenKernel::build(&p.h, p.lambda, steps)?;
    let n = p.h.n();
    let c = CVec::from_fn(n, |i, _| C64::new(0.3 + 0.1 * i as f64, -0.2));
    let d = CVec::from_fn(n, |i, _| C64::new(-0.4, 0.25 * (i + 1) as f64));
    out.push(record(
        name,
        "green_function",
        green::manufactured_residual(&k, &c, &d)?,
        GREEN_TOL,
    ));

    let (trace, theta) = trace_identity(&p.h, p.lambda, steps)?;
    out.push(record(name, "trace_identity", trace, TRACE_TOL));
    out.push(record(name, "theta_convention", theta, THETA_TOL));

    let dsym = if p.lambda >= DSYM_EPS {
        dsym_fd_residual(&p.h, p.lambda, steps, DSYM_EPS)?
    } else {
        // One-sided at λ = 0 would lose an order; shift the stencil inward.
        dsym_fd_residual(&p.h, DSYM_EPS, steps, DSYM_EPS)?
    };
    out.push(record(name, "dsym_finite_difference", dsym, DSYM_TOL));
    out.push(record(
        name,
        "phase_route",
        phase_route_gap(&p.scaled(), steps, sc.integrator.lambda_nodes, exec)?,
        PHASE_ROUTE_TOL,
    ));
    out.push(record(
        name,
        "det_magnitude",
        det_magnitude_residual(&s)?,
        DET_MAGNITUDE_TOL,
    ));
    out.push(record(
        name,
        "vacuum_bound",
        vacuum_excess(&s),
        VACUUM_SLACK,
    ));
    Ok(out)
}

pub fn run_compare(sc: &Scenario, exec: Execution) -> Result<CompareRecord> {
    let p = Prepared::new(sc)?;
    let closed = amplitude::transition_amplitude(&p.evolve()?, &p.v, &p.w)?.value;
    let h = p.scaled();
    let fock = oracles::fock_matrix_element(&h, &p.v, &p.w, &sc.fock_config()?)?;
    let pi = &sc.path_integral;
    if pi.min_power > pi.max_power || pi.min_power < 1 {
        return Err(Error::Config(
            "path_integral powers must satisfy 1 <= min_power <= max_power".into(),
        ));
    }
    let study = oracles::convergence_study(&h, &p.v, &p.w, pi.min_power..=pi.max_power, exec)?;
    let finest = study.values().last().copied().expect("non-empty");
    let ext = study.extrapolated;
    let rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    Ok(CompareRecord {
        scenario: p.name,
        closed_re: closed.re,
        closed_im: closed.im,
        fock_re: fock.value.re,
        fock_im: fock.value.im,
        fock_leak: fock.leak,
        pi_re: finest.re,
        pi_im: finest.im,
        extrapolated_re: ext.re,
        extrapolated_im: ext.im,
        closed_vs_fock: rel(closed, fock.value),
        closed_vs_pi: rel(closed, ext),
        fock_vs_pi: rel(fock.value, ext),
    })
}

impl CompareRecord {
    pub fn agrees(&self, tol: f64) -> bool {
        [self.closed_vs_fock, self.closed_vs_pi, self.fock_vs_pi]
            .iter()
            .all(|d| d.is_finite() && *d < tol)
    }
}

/// History CSV of the scenario's evolution, every `stride`-th step.
pub fn run_evolve_dump(sc: &Scenario, stride: usize) -> Result<Vec<u8>> {
    let p = Prepared::new(sc)?;
    let mut opts = p.opts.clone().recording();
    opts.history_stride = stride.max(1);
    let ev = propagator::evolve_with(&p.h, p.lambda, &opts)?;
    let mut buf = Vec::new();
    ev.history.expect("recorded").write_csv(&mut buf)?;
    Ok(buf)
}
