// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Mode spaces and time-dependent quadratic Hamiltonians.
//!
//! A Hamiltonian is the pair `(A(t), B(t))` of n×n complex matrices with `A`
//! self-adjoint and `B` symmetric, defining the classical energy
//! `z̄ᵀ A z + ½ zᵀ B z + ½ z̄ᵀ B̄ z̄` and the normal-ordered operator
//! `Σ A_ab a†_a a_b + ½ Σ B_ab a_a a_b + ½ Σ B̄_ab a†_a a†_b`. Units are
//! natural (ħ = 1, frequencies in inverse time).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64};

/// Residual above which `A ≠ A†` or `B ≠ Bᵀ` is rejected.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Number of sample points used to validate callable profiles.
const CALLABLE_PROBES: usize = 65;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeSpace {
    n: usize,
}

impl ModeSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("mode count must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// One `cos(frequency·t + phase)` modulated contribution to `(A, B)`.
#[derive(Clone, Debug)]
pub struct HarmonicTerm {
    pub a: CMat,
    pub b: CMat,
    pub frequency: f64,
    pub phase: f64,
}

pub type ProfileFn = dyn Fn(f64) -> (CMat, CMat) + Send + Sync;

pub enum Profile {
    Constant {
        a: CMat,
        b: CMat,
    },
    /// Linear interpolation between nodes; constant beyond the ends.
    Tabulated {
        times: Vec<f64>,
        a: Vec<CMat>,
        b: Vec<CMat>,
    },
    Harmonic(Vec<HarmonicTerm>),
    /// Single oscillator `½(p² + ω(t)² q²)` with ω swept linearly from
    /// `omega0` to `omega1` over `duration`, written in the Fock basis of
    /// frequency `omega0`.
    ParametricSweep {
        omega0: f64,
        omega1: f64,
        duration: f64,
    },
    Function(Arc<ProfileFn>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant { .. } => f.write_str("Constant"),
            Profile::Tabulated { times, .. } => write!(f, "Tabulated({} nodes)", times.len()),
            Profile::Harmonic(terms) => write!(f, "Harmonic({} terms)", terms.len()),
            Profile::ParametricSweep { omega0, omega1, .. } => {
                write!(f, "ParametricSweep({omega0} -> {omega1})")
            }
            Profile::Function(_) => f.write_str("Function"),
        }
    }
}

impl Profile {
    fn sample(&self, n: usize, tau: f64) -> (CMat, CMat) {
        match self {
            Profile::Constant { a, b } => (a.clone(), b.clone()),
            Profile::Tabulated { times, a, b } => {
                let last = times.len() - 1;
                if tau <= times[0] {
                    return (a[0].clone(), b[0].clone());
                }
                if tau >= times[last] {
                    return (a[last].clone(), b[last].clone());
                }
                let k = times.partition_point(|&x| x <= tau) - 1;
                let s = (tau - times[k]) / (times[k + 1] - times[k]);
                let lerp = |m: &[CMat]| &m[k] * C64::from(1.0 - s) + &m[k + 1] * C64::from(s);
                (lerp(a), lerp(b))
            }
            Profile::Harmonic(terms) => {
                let mut a = CMat::zeros(n, n);
                let mut b = CMat::zeros(n, n);
                for term in terms {
                    let w = C64::from((term.frequency * tau + term.phase).cos());
                    a += &term.a * w;
                    b += &term.b * w;
                }
                (a, b)
            }
            Profile::ParametricSweep {
                omega0,
                omega1,
                duration,
            } => {
                let frac = if *duration > 0.0 { tau / duration } else { 0.0 };
                let omega = omega0 + (omega1 - omega0) * frac;
                let r = *omega0;
                let a = (r * r + omega * omega) / (2.0 * r);
                let b = (omega * omega - r * r) / (2.0 * r);
                (
                    CMat::from_element(1, 1, C64::from(a)),
                    CMat::from_element(1, 1, C64::from(b)),
                )
            }
            Profile::Function(f) => f(tau),
        }
    }

    fn is_time_independent(&self) -> bool {
        match self {
            Profile::Constant { .. } => true,
            Profile::Tabulated { times, .. } => times.len() == 1,
            Profile::Harmonic(terms) => terms.iter().all(|t| t.frequency == 0.0),
            Profile::ParametricSweep { omega0, omega1, .. } => omega0 == omega1,
            Profile::Function(_) => false,
        }
    }
}

/// How the caller's clock `t ∈ [0, T]` maps onto the profile clock, plus
/// global transformations of the coefficients.
#[derive(Clone, Copy, Debug)]
struct View {
    offset: f64,
    direction: f64,
    sign: f64,
    pairing_scale: f64,
    conjugate: bool,
}

impl Default for View {
    fn default() -> Self {
        Self {
            offset: 0.0,
            direction: 1.0,
            sign: 1.0,
            pairing_scale: 1.0,
            conjugate: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadraticHamiltonian {
    modes: ModeSpace,
    horizon: f64,
    profile: Arc<Profile>,
    view: View,
}

impl QuadraticHamiltonian {
    pub fn new(modes: ModeSpace, horizon: f64, profile: Profile) -> Result<Self> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(Error::Config(format!(
                "horizon must be finite and non-negative, got {horizon}"
            )));
        }
        let h = Self {
            modes,
            horizon,
            profile: Arc::new(profile),
            view: View::default(),
        };
        h.validate()?;
        Ok(h)
    }

    pub fn constant(a: CMat, b: CMat, horizon: f64) -> Result<Self> {
        let modes = ModeSpace::new(a.nrows())?;
        Self::new(modes, horizon, Profile::Constant { a, b })
    }

    /// Tabulated matrices; the horizon is the span of `times` and the first
    /// node is mapped to `t = 0`.
    pub fn tabulated(times: Vec<f64>, a: Vec<CMat>, b: Vec<CMat>) -> Result<Self> {
        if times.is_empty() || times.len() != a.len() || times.len() != b.len() {
            return Err(Error::Shape(format!(
                "tabulated profile needs equal, non-empty node lists (times {}, A {}, B {})",
                times.len(),
                a.len(),
                b.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "tabulated times must be strictly increasing".into(),
            ));
        }
        let modes = ModeSpace::new(a[0].nrows())?;
        let t0 = times[0];
        let horizon = times[times.len() - 1] - t0;
        let mut h = Self::new(modes, horizon, Profile::Tabulated { times, a, b })?;
        h.view.offset = t0;
        Ok(h)
    }

    pub fn harmonic(n: usize, terms: Vec<HarmonicTerm>, horizon: f64) -> Result<Self> {
        Self::new(ModeSpace::new(n)?, horizon, Profile::Harmonic(terms))
    }

    /// `A = 0`, `B = b` on a single mode.
    pub fn single_mode_squeeze(b: C64, horizon: f64) -> Result<Self> {
        Self::constant(CMat::zeros(1, 1), CMat::from_element(1, 1, b), horizon)
    }

    /// Parametric oscillator whose frequency sweeps linearly from `omega0` to
    /// `omega1`; pairing terms appear as soon as ω(t) departs from `omega0`.
    pub fn frequency_sweep(omega0: f64, omega1: f64, horizon: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega1 > 0.0) {
            return Err(Error::Config("sweep frequencies must be positive".into()));
        }
        Self::new(
            ModeSpace::new(1)?,
            horizon,
            Profile::ParametricSweep {
                omega0,
                omega1,
                duration: horizon,
            },
        )
    }

    pub fn from_fn<F>(n: usize, horizon: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> (CMat, CMat) + Send + Sync + 'static,
    {
        Self::new(ModeSpace::new(n)?, horizon, Profile::Function(Arc::new(f)))
    }

    pub fn modes(&self) -> ModeSpace {
        self.modes
    }

    pub fn n(&self) -> usize {
        self.modes.n()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn is_time_independent(&self) -> bool {
        self.profile.is_time_independent()
    }

    /// `(A(t), B(t))`. Times within a relative 1e-12 of the interval are
    /// clamped onto it.
    pub fn sample(&self, t: f64) -> Result<(CMat, CMat)> {
        let slack = 1e-12 * self.horizon.max(1.0);
        if !(t >= -slack && t <= self.horizon + slack) {
            return Err(Error::Domain {
                t,
                horizon: self.horizon,
            });
        }
        let t = t.clamp(0.0, self.horizon);
        let tau = self.view.offset + self.view.direction * t;
        let (mut a, mut b) = self.profile.sample(self.n(), tau);
        let n = self.n();
        if a.shape() != (n, n) || b.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "profile returned A {:?}, B {:?} for {n} modes",
                a.shape(),
                b.shape()
            )));
        }
        if self.view.conjugate {
            a = linalg::conj(&a);
            b = linalg::conj(&b);
        }
        if self.view.sign != 1.0 {
            a *= C64::from(self.view.sign);
            b *= C64::from(self.view.sign);
        }
        if self.view.pairing_scale != 1.0 {
            b *= C64::from(self.view.pairing_scale);
        }
        Ok((a, b))
    }

    /// The same dynamics restricted to `[t0, t1]`, re-based to start at 0.
    pub fn window(&self, t0: f64, t1: f64) -> Result<Self> {
        if !(0.0 <= t0 && t0 <= t1 && t1 <= self.horizon) {
            return Err(Error::Domain {
                t: if t0 < 0.0 { t0 } else { t1 },
                horizon: self.horizon,
            });
        }
        let mut h = self.clone();
        h.view.offset += self.view.direction * t0;
        h.horizon = t1 - t0;
        Ok(h)
    }

    /// `t ↦ H(T − t)`.
    pub fn reversed(&self) -> Self {
        let mut h = self.clone();
        h.view.offset += self.view.direction * self.horizon;
        h.view.direction = -self.view.direction;
        h
    }

    /// `(A, B) ↦ (−A, −B)`.
    pub fn negated(&self) -> Self {
        let mut h = self.clone();
        h.view.sign = -self.view.sign;
        h
    }

    /// `(A, B) ↦ (Ā, B̄)`.
    pub fn conjugated(&self) -> Self {
        let mut h = self.clone();
        h.view.conjugate = !self.view.conjugate;
        h
    }

    /// `B ↦ s·B`; `s = 0` gives the free reference, `s = λ` the λ-family.
    pub fn with_pairing_scale(&self, s: f64) -> Self {
        let mut h = self.clone();
        h.view.pairing_scale *= s;
        h
    }

    pub fn validate(&self) -> Result<()> {
        let check_at = |a: &CMat, b: &CMat, at: f64| -> Result<()> {
            let n = self.n();
            if a.shape() != (n, n) || b.shape() != (n, n) {
                return Err(Error::Shape(format!(
                    "expected {n}x{n} matrices, got A {:?}, B {:?}",
                    a.shape(),
                    b.shape()
                )));
            }
            if !a
                .iter()
                .chain(b.iter())
                .all(|z| z.re.is_finite() && z.im.is_finite())
            {
                return Err(Error::Validation {
                    invariant: "all coefficients finite".into(),
                    residual: f64::INFINITY,
                    at,
                });
            }
            let ra = linalg::hermiticity_residual(a);
            if ra > STRUCTURE_TOL * linalg::max_abs(a).max(1.0) {
                return Err(Error::Validation {
                    invariant: "A(t) self-adjoint (A = A†)".into(),
                    residual: ra,
                    at,
                });
            }
            let rb = linalg::symmetry_residual(b);
            if rb > STRUCTURE_TOL * linalg::max_abs(b).max(1.0) {
                return Err(Error::Validation {
                    invariant: "B(t) symmetric (B = Bᵀ)".into(),
                    residual: rb,
                    at,
                });
            }
            Ok(())
        };
        match self.profile.as_ref() {
            Profile::Constant { a, b } => check_at(a, b, 0.0),
            Profile::Tabulated { times, a, b } => {
                for ((t, a), b) in times.iter().zip(a).zip(b) {
                    check_at(a, b, *t)?;
                }
                Ok(())
            }
            Profile::Harmonic(terms) => {
                for term in terms {
                    if !(term.frequency.is_finite() && term.phase.is_finite()) {
                        return Err(Error::Config(
                            "harmonic term frequency/phase must be finite".into(),
                        ));
                    }
                    check_at(&term.a, &term.b, 0.0)?;
                }
                Ok(())
            }
            Profile::ParametricSweep { .. } => Ok(()),
            Profile::Function(_) => {
                for k in 0..CALLABLE_PROBES {
                    let t = self.horizon * k as f64 / (CALLABLE_PROBES - 1) as f64;
                    let (a, b) = self.sample(t)?;
                    check_at(&a, &b, t)?;
                }
                Ok(())
            }
        }
    }
}

/// Hermitian part `(M + M†)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::from(0.5)
}

/// Symmetric part `(M + Mᵀ)/2`.
pub fn symmetric_part(m: &CMat) -> CMat {
    (m + m.transpose()) * C64::from(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn m2(entries: [C64; 4]) -> CMat {
        CMat::from_row_slice(2, 2, &entries)
    }

    #[test]
    fn zero_modes_rejected() {
        assert!(ModeSpace::new(0).is_err());
    }

    #[test]
    fn non_hermitian_a_rejected() {
        let a = m2([c(1.0, 0.0), c(0.5, 1e-6), c(0.5, 0.0), c(2.0, 0.0)]);
        let err = QuadraticHamiltonian::constant(a, CMat::zeros(2, 2), 1.0).unwrap_err();
        assert!(err.to_string().contains("self-adjoint"), "{err}");
    }

    #[test]
    fn non_symmetric_b_rejected_at_tolerance() {
        let z = c(0.0, 0.0);
        let ok = m2([z, c(0.3, 0.1), c(0.3, 0.1) + c(5e-13, 0.0), z]);
        assert!(QuadraticHamiltonian::constant(CMat::zeros(2, 2), ok, 1.0).is_ok());
        let bad = m2([z, c(0.3, 0.1), c(0.3, 0.1) + c(1e-11, 0.0), z]);
        let err = QuadraticHamiltonian::constant(CMat::zeros(2, 2), bad, 1.0).unwrap_err();
        assert!(err.to_string().contains("symmetric"), "{err}");
    }

    #[test]
    fn domain_checked() {
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.5, 0.0), 2.0).unwrap();
        assert!(h.sample(2.0).is_ok());
        assert!(matches!(h.sample(2.1), Err(Error::Domain { .. })));
        assert!(matches!(h.sample(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let one = |x: f64| CMat::from_element(1, 1, c(x, 0.0));
        let h = QuadraticHamiltonian::tabulated(
            vec![1.0, 2.0, 4.0],
            vec![one(0.0), one(1.0), one(3.0)],
            vec![one(0.0), one(0.0), one(2.0)],
        )
        .unwrap();
        assert_eq!(h.horizon(), 3.0);
        let (a, b) = h.sample(2.0).unwrap();
        assert!((a[(0, 0)].re - 2.0).abs() < 1e-15);
        assert!((b[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn window_and_reverse_remap_time() {
        let h = QuadraticHamiltonian::frequency_sweep(1.0, 3.0, 2.0).unwrap();
        let w = h.window(0.5, 2.0).unwrap();
        let r = h.reversed();
        let (a_full, _) = h.sample(1.5).unwrap();
        let (a_win, _) = w.sample(1.0).unwrap();
        let (a_rev, _) = r.sample(0.5).unwrap();
        assert!((a_full[(0, 0)] - a_win[(0, 0)]).norm() < 1e-14);
        assert!((a_full[(0, 0)] - a_rev[(0, 0)]).norm() < 1e-14);
        assert!(w.window(0.5, 1.5).is_ok());
        assert!(h.window(1.0, 3.0).is_err());
    }

    #[test]
    fn sweep_has_no_pairing_at_start() {
        let h = QuadraticHamiltonian::frequency_sweep(2.0, 3.0, 1.0).unwrap();
        let (a, b) = h.sample(0.0).unwrap();
        assert!((a[(0, 0)].re - 2.0).abs() < 1e-15);
        assert!(b[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn callable_profile_validated() {
        let bad = QuadraticHamiltonian::from_fn(1, 1.0, |t| {
            (CMat::from_element(1, 1, c(1.0, t)), CMat::zeros(1, 1))
        });
        assert!(bad.is_err());
    }
}
