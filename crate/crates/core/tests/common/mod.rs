// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations that share no code path with the library's
// integrator: dense matrix exponentials and eigen-decompositions.

#![allow(dead_code)]

use coherent_path::hamiltonian::QuadraticHamiltonian;
use coherent_path::linalg::{c, CMat, CVec, C64};
use coherent_path::random::{self, RandomSpec};
use coherent_path::CoherentLabel;

pub const I: C64 = C64::new(0.0, 1.0);

/// `(α, β)` of `exp(−H T)`, `H = i[[A, B̄], [−B, −Ā]]`, for constant `A, B`.
pub fn dense_blocks(a: &CMat, b: &CMat, horizon: f64) -> (CMat, CMat) {
    let n = a.nrows();
    let mut g = CMat::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&(a * I));
    g.view_mut((0, n), (n, n))
        .copy_from(&(b.map(|z| z.conj()) * I));
    g.view_mut((n, 0), (n, n)).copy_from(&(b * -I));
    g.view_mut((n, n), (n, n))
        .copy_from(&(a.map(|z| z.conj()) * -I));
    let s = (g * C64::from(-horizon)).exp();
    (
        s.view((0, 0), (n, n)).into_owned(),
        s.view((n, 0), (n, n)).map(|z| z.conj()),
    )
}

/// `e^{−iAT}` through the eigenbasis of the Hermitian `A`.
pub fn free_evolution(a: &CMat, horizon: f64) -> CMat {
    let eig = a.clone().symmetric_eigen();
    let u = &eig.eigenvectors;
    let phases = CMat::from_diagonal(&eig.eigenvalues.map(|w| (-I * w * horizon).exp()));
    u * phases * u.adjoint()
}

pub fn bilinear(v: &CVec, m: &CMat, w: &CVec) -> C64 {
    (v.transpose() * m * w)[(0, 0)]
}

pub fn one(z: C64) -> CMat {
    CMat::from_element(1, 1, z)
}

pub fn label(rng: &mut impl rand::Rng, n: usize, radius: f64) -> CoherentLabel {
    random::label(rng, n, radius)
}

pub fn random_constant(n: usize, horizon: f64, seed: u64) -> QuadraticHamiltonian {
    random::random_hamiltonian(&RandomSpec::constant(n, horizon), seed).unwrap()
}

pub fn random_time_dependent(n: usize, horizon: f64, seed: u64) -> QuadraticHamiltonian {
    random::random_hamiltonian(&RandomSpec::time_dependent(n, horizon), seed).unwrap()
}

pub fn first_scenario_h() -> QuadraticHamiltonian {
    QuadraticHamiltonian::constant(one(c(1.0, 0.0)), one(c(0.3, 0.1)), 1.0).unwrap()
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
