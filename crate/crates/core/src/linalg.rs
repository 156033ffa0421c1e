// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix helpers shared by the propagator and the oracles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Pivot ratio below which a factorization is treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-14;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_max_abs(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_residual(a: &CMat) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn symmetry_residual(b: &CMat) -> f64 {
    max_abs(&(b - b.transpose()))
}

/// Bilinear (not sesquilinear) product `x^T y`.
pub fn dot(x: &CVec, y: &CVec) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

/// Bilinear form `x^T M y`.
pub fn form(x: &CVec, m: &CMat, y: &CVec) -> C64 {
    dot(x, &(m * y))
}

/// Assemble `[[a, b], [c, d]]` from four n×n blocks.
pub fn block2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let n = a.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

/// Extract block `(row, col)` (each 0 or 1) of a 2n×2n matrix.
pub fn block(m: &CMat, row: usize, col: usize) -> CMat {
    let n = m.nrows() / 2;
    m.view((row * n, col * n), (n, n)).into_owned()
}

/// LU factorization with a singularity guard and a principal-branch log-det.
pub struct Factorized {
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl Factorized {
    pub fn new(m: &CMat, what: &str) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(Error::Shape(format!(
                "{what}: {}x{} is not square",
                n,
                m.ncols()
            )));
        }
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Singular {
                what: what.to_string(),
                ratio: 0.0,
            });
        }
        let lu = m.clone().lu();
        let (lo, hi) = lu
            .u()
            .diagonal()
            .iter()
            .map(|z| z.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
        if n > 0 && ratio < SINGULAR_RATIO {
            return Err(Error::Singular {
                what: what.to_string(),
                ratio,
            });
        }
        Ok(Self { lu, n })
    }

    pub fn solve(&self, rhs: &CMat) -> CMat {
        self.lu
            .solve(rhs)
            .expect("factorization checked non-singular at construction")
    }

    pub fn solve_vec(&self, rhs: &CVec) -> CVec {
        self.lu
            .solve(rhs)
            .expect("factorization checked non-singular at construction")
    }

    pub fn inverse(&self) -> CMat {
        self.solve(&identity(self.n))
    }

    /// Sum of principal logs of the pivots, plus the permutation sign.
    /// Not branch-continuous; callers unwrap against a reference.
    pub fn log_det(&self) -> C64 {
        let mut acc: C64 = self.lu.u().diagonal().iter().map(|z| z.ln()).sum();
        if self.lu.p().determinant::<f64>() < 0.0 {
            acc += C64::new(0.0, std::f64::consts::PI);
        }
        acc
    }
}

/// Shift `candidate` by a multiple of 2πi so its imaginary part is closest to
/// that of `reference`.
pub fn unwrap_to(candidate: C64, reference: C64) -> C64 {
    let tau = std::f64::consts::TAU;
    let k = ((reference.im - candidate.im) / tau).round();
    C64::new(candidate.re, candidate.im + k * tau)
}

/// `log det(I + X)` continued from 0 along `s ↦ det(I + sX)`, s ∈ [0, 1].
pub fn log_det_identity_plus(x: &CMat) -> Result<C64> {
    let n = x.nrows();
    let id = identity(n);
    let mut acc = C64::new(0.0, 0.0);
    let mut prev = C64::new(0.0, 0.0);
    let mut s = 0.0f64;
    let mut h = 1.0f64;
    while s < 1.0 {
        let next = (s + h).min(1.0);
        let cur = Factorized::new(&(&id + x * C64::from(next)), "I + sX")?.log_det();
        let step = unwrap_to(cur - prev, C64::new(0.0, 0.0));
        if step.im.abs() > std::f64::consts::FRAC_PI_4 && h > 1e-6 {
            h *= 0.5;
            continue;
        }
        acc += step;
        prev = cur;
        s = next;
        h = (h * 2.0).min(1.0);
    }
    Ok(acc)
}
