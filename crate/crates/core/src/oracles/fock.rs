// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space evolution of the normal-ordered operator
//! `Ĥ = Σ A_ab a†_a a_b + ½ Σ B_ab a_a a_b + ½ Σ B̄_ab a†_a a†_b`.
//!
//! Coherent vectors are unnormalized: `|w⟩ = Σ_m w^m/√m! |m⟩`, so that
//! `⟨v|w⟩ = e^{v·w}` with no conjugation on `v`.

use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::action::CoherentLabel;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CMat, CVec, C64, I};

/// Largest basis the oracle will allocate.
pub const MAX_DIMENSION: usize = 4_000_000;

#[derive(Clone, Copy, Debug)]
pub struct FockConfig {
    /// Highest occupation kept in each mode.
    pub cutoff: usize,
    /// Time slices of the time-ordered product.
    pub substeps: usize,
    /// Boundary norm fraction above which the result is flagged.
    pub leak_tolerance: f64,
}

impl FockConfig {
    pub fn new(cutoff: usize, substeps: usize) -> Result<Self> {
        if cutoff < 1 || substeps < 1 {
            return Err(Error::Config(format!(
                "Fock cutoff ({cutoff}) and substeps ({substeps}) must be at least 1"
            )));
        }
        Ok(Self {
            cutoff,
            substeps,
            leak_tolerance: 1e-10,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FockResult {
    pub value: C64,
    /// Fraction of `‖U|w⟩‖²` sitting on states with some mode at the cutoff.
    pub leak: f64,
    pub truncation_warning: bool,
}

/// Product basis `{0..=cutoff}ⁿ`, mode 0 varying slowest.
#[derive(Clone, Debug)]
pub struct FockBasis {
    n: usize,
    cutoff: usize,
    dim: usize,
}

impl FockBasis {
    pub fn new(n: usize, cutoff: usize) -> Result<Self> {
        let dim = (cutoff + 1)
            .checked_pow(n as u32)
            .filter(|&d| d <= MAX_DIMENSION)
            .ok_or_else(|| {
                Error::Config(format!(
                    "Fock basis for {n} modes at cutoff {cutoff} is too large"
                ))
            })?;
        Ok(Self { n, cutoff, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn occupations(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.n];
        for a in (0..self.n).rev() {
            m[a] = idx % (self.cutoff + 1);
            idx /= self.cutoff + 1;
        }
        m
    }

    pub fn index(&self, m: &[usize]) -> usize {
        m.iter().fold(0, |acc, &k| acc * (self.cutoff + 1) + k)
    }

    /// Product-state coefficients `∏ c_a[m_a]`.
    fn product(&self, per_mode: &[Vec<C64>]) -> CVec {
        CVec::from_fn(self.dim, |idx, _| {
            self.occupations(idx)
                .iter()
                .zip(per_mode)
                .map(|(&k, t)| t[k])
                .product()
        })
    }

    /// `|w⟩` truncated to the basis.
    pub fn bargmann(&self, w: &CVec) -> CVec {
        let tables: Vec<Vec<C64>> = w.iter().map(|&x| self.powers(x)).collect();
        self.product(&tables)
    }

    fn powers(&self, x: C64) -> Vec<C64> {
        let mut t = vec![C64::new(1.0, 0.0); self.cutoff + 1];
        for k in 1..=self.cutoff {
            t[k] = t[k - 1] * x / (k as f64).sqrt();
        }
        t
    }
}

/// Apply `a_b` (`create = false`) or `a†_b` to occupation `m` in place,
/// returning the matrix-element factor, or None when the result leaves the
/// basis.
fn ladder(m: &mut [usize], mode: usize, create: bool, cutoff: usize) -> Option<f64> {
    if create {
        if m[mode] == cutoff {
            return None;
        }
        m[mode] += 1;
        Some((m[mode] as f64).sqrt())
    } else {
        if m[mode] == 0 {
            return None;
        }
        let f = (m[mode] as f64).sqrt();
        m[mode] -= 1;
        Some(f)
    }
}

/// Sparse matrix of `Ĥ` for given `A`, `B`; rows are gathered independently.
pub fn fock_hamiltonian(basis: &FockBasis, a: &CMat, b: &CMat, exec: Execution) -> CsrMatrix<C64> {
    let n = basis.n;
    let cut = basis.cutoff;
    let rows = exec.map_range(basis.dim, |row| {
        let target = basis.occupations(row);
        let mut entries: Vec<(usize, C64)> = Vec::new();
        // Each term is (coefficient, ops applied right to left as (mode, create)).
        let mut push = |coef: C64, ops: [(usize, bool); 2]| {
            if coef == C64::new(0.0, 0.0) {
                return;
            }
            // Source occupation: undo the net change of the ops on the target.
            let mut src: Vec<i64> = target.iter().map(|&k| k as i64).collect();
            for &(mode, create) in &ops {
                src[mode] += if create { -1 } else { 1 };
            }
            if src.iter().any(|&k| k < 0 || k > cut as i64) {
                return;
            }
            let src: Vec<usize> = src.into_iter().map(|k| k as usize).collect();
            let mut m = src.clone();
            let mut f = 1.0;
            for &(mode, create) in &ops {
                match ladder(&mut m, mode, create, cut) {
                    Some(x) => f *= x,
                    None => return,
                }
            }
            entries.push((basis.index(&src), coef * f));
        };
        for x in 0..n {
            for y in 0..n {
                push(a[(x, y)], [(y, false), (x, true)]);
                push(b[(x, y)] * 0.5, [(y, false), (x, false)]);
                push(b[(x, y)].conj() * 0.5, [(y, true), (x, true)]);
            }
        }
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, C64)> = Vec::with_capacity(entries.len());
        for (col, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == col => last.1 += v,
                _ => merged.push((col, v)),
            }
        }
        merged
    });
    let mut coo = CooMatrix::new(basis.dim, basis.dim);
    for (row, entries) in rows.into_iter().enumerate() {
        for (col, v) in entries {
            coo.push(row, col, v);
        }
    }
    CsrMatrix::from(&coo)
}

fn row_sum_bound(h: &CsrMatrix<C64>) -> f64 {
    h.row_iter()
        .map(|r| r.values().iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn apply(h: &CsrMatrix<C64>, psi: &CVec) -> CVec {
    let mut out = CVec::zeros(psi.len());
    for (i, row) in h.row_iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            acc += v * psi[j];
        }
        out[i] = acc;
    }
    out
}

/// `ψ ← exp(−i Ĥ dt) ψ` by Taylor series, splitting `dt` so that each piece
/// has `‖Ĥ‖ dt ≤ ½`.
fn exp_step(h: &CsrMatrix<C64>, psi: &mut CVec, dt: f64) {
    let pieces = (row_sum_bound(h) * dt.abs() / 0.5).ceil().max(1.0) as usize;
    let tau = C64::from(dt / pieces as f64) * (-I);
    for _ in 0..pieces {
        let mut term = psi.clone();
        let mut sum = psi.clone();
        for k in 1..80 {
            term = apply(h, &term) * (tau / k as f64);
            sum += &term;
            if linalg::vec_max_abs(&term) <= 1e-18 * linalg::vec_max_abs(&sum) {
                break;
            }
        }
        *psi = sum;
    }
}

/// `U(T)|w⟩` on the truncated basis, `Ĥ` sampled at slice midpoints.
pub fn evolve_state(
    h: &QuadraticHamiltonian,
    basis: &FockBasis,
    w: &CVec,
    cfg: &FockConfig,
) -> Result<CVec> {
    let mut psi = basis.bargmann(w);
    let dt = h.horizon() / cfg.substeps as f64;
    if dt == 0.0 {
        return Ok(psi);
    }
    let exec = Execution::default();
    let mut fixed = None;
    if h.is_time_independent() {
        let (a, b) = h.sample(0.0)?;
        fixed = Some(fock_hamiltonian(basis, &a, &b, exec));
    }
    for s in 0..cfg.substeps {
        match &fixed {
            Some(op) => exp_step(op, &mut psi, dt),
            None => {
                let (a, b) = h.sample((s as f64 + 0.5) * dt)?;
                exp_step(&fock_hamiltonian(basis, &a, &b, exec), &mut psi, dt);
            }
        }
    }
    Ok(psi)
}

fn leak_fraction(basis: &FockBasis, psi: &CVec) -> f64 {
    let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let edge: f64 = psi
        .iter()
        .enumerate()
        .filter(|(idx, _)| basis.occupations(*idx).contains(&basis.cutoff))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    edge / total
}

pub fn fock_matrix_element(
    h: &QuadraticHamiltonian,
    v: &CoherentLabel,
    w: &CoherentLabel,
    cfg: &FockConfig,
) -> Result<FockResult> {
    if v.n() != h.n() || w.n() != h.n() {
        return Err(Error::Shape(
            "label and Hamiltonian mode counts differ".into(),
        ));
    }
    let basis = FockBasis::new(h.n(), cfg.cutoff)?;
    let psi = evolve_state(h, &basis, w.components(), cfg)?;
    let bra = basis.bargmann(v.components());
    let value = bra.iter().zip(psi.iter()).map(|(x, y)| x * y).sum();
    let leak = leak_fraction(&basis, &psi);
    Ok(FockResult {
        value,
        leak,
        truncation_warning: leak > cfg.leak_tolerance,
    })
}

/// `|‖U|w⟩‖² − e^{|w|²}| / e^{|w|²}`.
pub fn unitarity_check(
    h: &QuadraticHamiltonian,
    w: &CoherentLabel,
    cfg: &FockConfig,
) -> Result<f64> {
    let basis = FockBasis::new(h.n(), cfg.cutoff)?;
    let psi = evolve_state(h, &basis, w.components(), cfg)?;
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let expect = w.components().norm_squared().exp();
    Ok((norm - expect).abs() / expect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn one(x: C64) -> CMat {
        CMat::from_element(1, 1, x)
    }

    fn label(x: C64) -> CoherentLabel {
        CoherentLabel::from_slice(&[x]).unwrap()
    }

    #[test]
    fn basis_roundtrip() {
        let b = FockBasis::new(3, 4).unwrap();
        assert_eq!(b.dim(), 125);
        for idx in [0, 7, 124] {
            assert_eq!(b.index(&b.occupations(idx)), idx);
        }
        assert!(FockBasis::new(8, 80).is_err());
    }

    #[test]
    fn number_operator_is_diagonal() {
        let basis = FockBasis::new(1, 5).unwrap();
        let h = fock_hamiltonian(
            &basis,
            &one(c(2.0, 0.0)),
            &one(c(0.0, 0.0)),
            Execution::Sequential,
        );
        let dense = nalgebra_sparse::convert::serial::convert_csr_dense(&h);
        for k in 0..6 {
            assert!((dense[(k, k)] - c(2.0 * k as f64, 0.0)).norm() < 1e-13);
        }
        assert_eq!(h.nnz(), 5);
    }

    #[test]
    fn pair_terms_are_adjoint() {
        let basis = FockBasis::new(2, 4).unwrap();
        let a = CMat::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.2, 0.3), c(0.2, -0.3), c(-0.5, 0.0)],
        );
        let b = CMat::from_row_slice(
            2,
            2,
            &[c(0.4, 0.1), c(0.3, -0.2), c(0.3, -0.2), c(0.0, 0.7)],
        );
        let h = fock_hamiltonian(&basis, &a, &b, Execution::default());
        let dense = nalgebra_sparse::convert::serial::convert_csr_dense(&h);
        // Hermitian away from the truncation edge.
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let (mi, mj) = (basis.occupations(i), basis.occupations(j));
                if mi.iter().chain(&mj).all(|&k| k < 3) {
                    assert!((dense[(i, j)] - dense[(j, i)].conj()).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn zero_time_and_free_mode() {
        let cfg = FockConfig::new(40, 16).unwrap();
        let still = QuadraticHamiltonian::single_mode_squeeze(c(0.3, 0.0), 0.0).unwrap();
        let (v, w) = (c(0.5, 0.2), c(-0.4, 0.6));
        let r = fock_matrix_element(&still, &label(v), &label(w), &cfg).unwrap();
        assert!((r.value - (v * w).exp()).norm() < 1e-14);

        let omega = 1.7;
        let free =
            QuadraticHamiltonian::constant(one(c(omega, 0.0)), one(c(0.0, 0.0)), 1.0).unwrap();
        let r = fock_matrix_element(&free, &label(c(1.0, 0.0)), &label(c(1.0, 0.0)), &cfg).unwrap();
        assert!((r.value - (-I * omega).exp().exp()).norm() < 1e-12);
        assert!(unitarity_check(&free, &label(c(1.0, 0.0)), &cfg).unwrap() < 1e-12);
        assert!(!r.truncation_warning);
    }

    #[test]
    fn squeezed_vacuum() {
        let cfg = FockConfig::new(60, 64).unwrap();
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.6, 0.0), 1.0).unwrap();
        let r = fock_matrix_element(&h, &label(c(0.0, 0.0)), &label(c(0.0, 0.0)), &cfg).unwrap();
        assert!((r.value - c(1.0 / 0.6f64.cosh().sqrt(), 0.0)).norm() < 1e-8);
        assert!(unitarity_check(&h, &label(c(0.5, 0.0)), &cfg).unwrap() < 1e-8);
    }

    #[test]
    fn small_cutoff_is_flagged() {
        let cfg = FockConfig::new(3, 8).unwrap();
        let h = QuadraticHamiltonian::single_mode_squeeze(c(1.0, 0.0), 1.0).unwrap();
        let r = fock_matrix_element(&h, &label(c(0.0, 0.0)), &label(c(1.0, 0.0)), &cfg).unwrap();
        assert!(r.truncation_warning && r.leak > 1e-3);
        assert!(FockConfig::new(0, 1).is_err());
    }
}
