// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random Hamiltonians and labels. Every draw comes from a ChaCha
//! stream keyed by a single `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::action::CoherentLabel;
use crate::error::{Error, Result};
use crate::hamiltonian::{HarmonicTerm, QuadraticHamiltonian};
use crate::linalg::{CMat, CVec, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex normal deviate with `E|z|² = 1`.
fn gaussian_pair<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Hermitian matrix with entries of typical size `scale`.
pub fn hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| gaussian_pair(rng));
    (&g + g.adjoint()) * C64::from(0.5 * scale)
}

/// Complex symmetric matrix with entries of typical size `scale`.
pub fn symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| gaussian_pair(rng));
    (&g + g.transpose()) * C64::from(0.5 * scale)
}

/// Label with independent components uniform in the disc of `radius`.
pub fn label<R: Rng>(rng: &mut R, n: usize, radius: f64) -> CoherentLabel {
    let v = CVec::from_fn(n, |_, _| {
        let r = radius * rng.gen::<f64>().sqrt();
        let th = std::f64::consts::TAU * rng.gen::<f64>();
        C64::from_polar(r, th)
    });
    CoherentLabel::new(v).expect("non-empty")
}

#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub modes: usize,
    pub horizon: f64,
    pub a_scale: f64,
    pub b_scale: f64,
    /// Modulated harmonics on top of the constant part; 0 gives constant H.
    pub harmonics: usize,
    pub max_frequency: f64,
}

impl RandomSpec {
    pub fn constant(modes: usize, horizon: f64) -> Self {
        Self {
            modes,
            horizon,
            a_scale: 1.0,
            b_scale: 0.3,
            harmonics: 0,
            max_frequency: 0.0,
        }
    }

    pub fn time_dependent(modes: usize, horizon: f64) -> Self {
        Self {
            harmonics: 2,
            max_frequency: 3.0,
            ..Self::constant(modes, horizon)
        }
    }
}

/// Smooth random Hamiltonian: a constant part plus `harmonics` terms
/// `cos(ω t + φ)·(A_j, B_j)`.
pub fn random_hamiltonian(spec: &RandomSpec, seed: u64) -> Result<QuadraticHamiltonian> {
    if spec.modes == 0 {
        return Err(Error::Config(
            "random Hamiltonian needs at least one mode".into(),
        ));
    }
    let mut r = rng(seed);
    let n = spec.modes;
    let mut terms = vec![HarmonicTerm {
        a: hermitian(&mut r, n, spec.a_scale),
        b: symmetric(&mut r, n, spec.b_scale),
        frequency: 0.0,
        phase: 0.0,
    }];
    for _ in 0..spec.harmonics {
        let frequency = spec.max_frequency * r.gen_range(0.2..1.0);
        let phase = std::f64::consts::TAU * r.gen::<f64>();
        terms.push(HarmonicTerm {
            a: hermitian(&mut r, n, 0.5 * spec.a_scale),
            b: symmetric(&mut r, n, 0.5 * spec.b_scale),
            frequency,
            phase,
        });
    }
    QuadraticHamiltonian::harmonic(n, terms, spec.horizon)
}
