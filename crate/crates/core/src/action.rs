// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Coherent labels, phase-space paths in the complexified space, and the
//! classical action with coherent boundary terms.
//!
//! A path is a pair of independent complex sequences `(z_k, z̄_k)` on a time
//! grid. The action is discretized with A, B sampled at interval midpoints and
//! forward differences for the kinetic term.

use crate::error::{Error, Result};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{self, CVec, C64, I};

#[derive(Clone, Debug, PartialEq)]
pub struct CoherentLabel(CVec);

impl CoherentLabel {
    pub fn new(components: CVec) -> Result<Self> {
        if !components
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::Config(
                "coherent label components must be finite".into(),
            ));
        }
        Ok(Self(components))
    }

    pub fn from_slice(components: &[C64]) -> Result<Self> {
        Self::new(CVec::from_column_slice(components))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CVec::zeros(n))
    }

    pub fn components(&self) -> &CVec {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }
}

#[derive(Clone, Debug)]
pub struct DiscretizedPath {
    grid: Vec<f64>,
    z: Vec<CVec>,
    zbar: Vec<CVec>,
}

impl DiscretizedPath {
    pub fn new(grid: Vec<f64>, z: Vec<CVec>, zbar: Vec<CVec>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::Shape("a path needs at least two grid nodes".into()));
        }
        if z.len() != grid.len() || zbar.len() != grid.len() {
            return Err(Error::Shape(format!(
                "grid has {} nodes but z has {} and z̄ has {}",
                grid.len(),
                z.len(),
                zbar.len()
            )));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Shape("path grid must be strictly increasing".into()));
        }
        let n = z[0].len();
        if z.iter().chain(zbar.iter()).any(|v| v.len() != n) {
            return Err(Error::Shape(
                "path components have inconsistent mode counts".into(),
            ));
        }
        Ok(Self { grid, z, zbar })
    }

    /// Sample `f(t) -> (z, z̄)` on `nodes + 1` uniform points over `[0, horizon]`.
    pub fn sample<F>(horizon: f64, nodes: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> (CVec, CVec),
    {
        let grid: Vec<f64> = (0..=nodes)
            .map(|k| horizon * k as f64 / nodes as f64)
            .collect();
        let (z, zbar) = grid.iter().map(|&t| f(t)).unzip();
        Self::new(grid, z, zbar)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn z(&self) -> &[CVec] {
        &self.z
    }

    pub fn zbar(&self) -> &[CVec] {
        &self.zbar
    }

    pub fn n(&self) -> usize {
        self.z[0].len()
    }

    /// Membership in the space X of fluctuations: `z_0 = 0` and `z̄_N = 0`.
    pub fn is_fluctuation(&self, tol: f64) -> bool {
        linalg::vec_max_abs(&self.z[0]) <= tol
            && linalg::vec_max_abs(&self.zbar[self.zbar.len() - 1]) <= tol
    }
}

/// `ℋ = z̄ᵀ A z + ½ zᵀ B z + ½ z̄ᵀ B̄ z̄` at time `t`.
pub fn classical_energy(h: &QuadraticHamiltonian, t: f64, z: &CVec, zbar: &CVec) -> Result<C64> {
    let (a, b) = h.sample(t)?;
    check_len(h, z)?;
    check_len(h, zbar)?;
    Ok(energy_with(&a, &b, z, zbar))
}

pub(crate) fn energy_with(a: &linalg::CMat, b: &linalg::CMat, z: &CVec, zbar: &CVec) -> C64 {
    let bbar = linalg::conj(b);
    linalg::form(zbar, a, z) + 0.5 * linalg::form(z, b, z) + 0.5 * linalg::form(zbar, &bbar, zbar)
}

fn check_len(h: &QuadraticHamiltonian, v: &CVec) -> Result<()> {
    if v.len() != h.n() {
        return Err(Error::Shape(format!(
            "vector of length {} for {} modes",
            v.len(),
            h.n()
        )));
    }
    Ok(())
}

fn check_span(h: &QuadraticHamiltonian, path: &DiscretizedPath) -> Result<()> {
    if path.n() != h.n() {
        return Err(Error::Shape(format!(
            "path has {} modes, Hamiltonian {}",
            path.n(),
            h.n()
        )));
    }
    let tol = 1e-12 * h.horizon().max(1.0);
    let (first, last) = (path.grid[0], path.grid[path.grid.len() - 1]);
    if first.abs() > tol || (last - h.horizon()).abs() > tol {
        return Err(Error::Shape(format!(
            "path grid spans [{first}, {last}], expected [0, {}]",
            h.horizon()
        )));
    }
    Ok(())
}

/// Phase-space action with coherent boundary terms,
/// `∫ [(1/2i)(ż̄·z − z̄·ż) − ℋ] dt + (1/2i)[z̄(T)·z(T) + z̄(0)·z(0)]`,
/// midpoint-sampled with forward differences.
pub fn evaluate_action(h: &QuadraticHamiltonian, path: &DiscretizedPath) -> Result<C64> {
    check_span(h, path)?;
    let half_over_i = C64::new(0.0, -0.5);
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..path.grid.len() - 1 {
        let dt = path.grid[k + 1] - path.grid[k];
        let tm = 0.5 * (path.grid[k] + path.grid[k + 1]);
        let zm = (&path.z[k] + &path.z[k + 1]) * C64::from(0.5);
        let zbm = (&path.zbar[k] + &path.zbar[k + 1]) * C64::from(0.5);
        let dz = (&path.z[k + 1] - &path.z[k]) / C64::from(dt);
        let dzb = (&path.zbar[k + 1] - &path.zbar[k]) / C64::from(dt);
        let kinetic = half_over_i * (linalg::dot(&dzb, &zm) - linalg::dot(&zbm, &dz));
        let (a, b) = h.sample(tm)?;
        acc += C64::from(dt) * (kinetic - energy_with(&a, &b, &zm, &zbm));
    }
    let last = path.grid.len() - 1;
    acc += half_over_i
        * (linalg::dot(&path.zbar[last], &path.z[last]) + linalg::dot(&path.zbar[0], &path.z[0]));
    Ok(acc)
}

/// Discrete `D_λ ζ = (i ζ̇ − A ζ − λ B̄ ζ̄,  −i ζ̄̇ − Ā ζ̄ − λ B ζ)` at every grid
/// node: central differences inside, three-point one-sided at the ends.
pub fn apply_d(
    h: &QuadraticHamiltonian,
    lambda: f64,
    path: &DiscretizedPath,
) -> Result<Vec<(CVec, CVec)>> {
    check_span(h, path)?;
    let g = &path.grid;
    let last = g.len() - 1;
    let deriv = |seq: &[CVec], k: usize| -> CVec {
        if g.len() == 2 {
            return (&seq[1] - &seq[0]) / C64::from(g[1] - g[0]);
        }
        if k == 0 {
            let h0 = g[1] - g[0];
            (&seq[0] * C64::from(-3.0) + &seq[1] * C64::from(4.0) - &seq[2]) / C64::from(2.0 * h0)
        } else if k == last {
            let h0 = g[last] - g[last - 1];
            (&seq[last] * C64::from(3.0) - &seq[last - 1] * C64::from(4.0) + &seq[last - 2])
                / C64::from(2.0 * h0)
        } else {
            (&seq[k + 1] - &seq[k - 1]) / C64::from(g[k + 1] - g[k - 1])
        }
    };
    let mut out = Vec::with_capacity(g.len());
    for (k, &t) in g.iter().enumerate() {
        let (a, b) = h.sample(t)?;
        let abar = linalg::conj(&a);
        let bbar = linalg::conj(&b);
        let lam = C64::from(lambda);
        let up = deriv(&path.z, k) * I - &a * &path.z[k] - &bbar * &path.zbar[k] * lam;
        let low = deriv(&path.zbar, k) * (-I) - &abar * &path.zbar[k] - &b * &path.z[k] * lam;
        out.push((up, low));
    }
    Ok(out)
}

/// Pairing `⟨ζ', ζ⟩ = ½ ∫ (ζ'_up · ζ̄ + ζ'_low · ζ) dt` between a dual path
/// (as returned by [`apply_d`]) and a path, trapezoid rule on the path grid.
pub fn pairing(dual: &[(CVec, CVec)], path: &DiscretizedPath) -> Result<C64> {
    if dual.len() != path.grid.len() {
        return Err(Error::Shape(format!(
            "dual has {} nodes, path {}",
            dual.len(),
            path.grid.len()
        )));
    }
    let f = |k: usize| {
        0.5 * (linalg::dot(&dual[k].0, &path.zbar[k]) + linalg::dot(&dual[k].1, &path.z[k]))
    };
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..path.grid.len() - 1 {
        acc += 0.5 * (path.grid[k + 1] - path.grid[k]) * (f(k) + f(k + 1));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMat};

    fn one(x: C64) -> CMat {
        CMat::from_element(1, 1, x)
    }

    fn v1(x: C64) -> CVec {
        CVec::from_element(1, x)
    }

    #[test]
    fn energy_single_term() {
        let omega = 1.7;
        let h = QuadraticHamiltonian::constant(one(c(omega, 0.0)), one(c(0.0, 0.0)), 1.0).unwrap();
        let e = classical_energy(&h, 0.5, &v1(c(1.0, 0.0)), &v1(c(1.0, 0.0))).unwrap();
        assert!((e - c(omega, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn energy_vanishes_at_origin_and_cancels() {
        let h = QuadraticHamiltonian::constant(one(c(0.0, 0.0)), one(c(0.8, 0.0)), 1.0).unwrap();
        let zero = v1(c(0.0, 0.0));
        assert_eq!(
            classical_energy(&h, 0.0, &zero, &zero).unwrap(),
            c(0.0, 0.0)
        );
        let e = classical_energy(&h, 0.0, &v1(c(1.0, 0.0)), &v1(c(0.0, 1.0))).unwrap();
        assert!(e.norm() < 1e-15);
    }

    #[test]
    fn energy_outside_horizon_is_domain_error() {
        let h = QuadraticHamiltonian::single_mode_squeeze(c(0.3, 0.0), 1.0).unwrap();
        let z = v1(c(1.0, 0.0));
        assert!(matches!(
            classical_energy(&h, 1.5, &z, &z),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn constant_paths() {
        let free = QuadraticHamiltonian::constant(one(c(0.0, 0.0)), one(c(0.0, 0.0)), 2.0).unwrap();
        let zero =
            DiscretizedPath::sample(2.0, 10, |_| (v1(c(0.0, 0.0)), v1(c(0.0, 0.0)))).unwrap();
        assert_eq!(evaluate_action(&free, &zero).unwrap(), c(0.0, 0.0));
        let cst = c(0.3, -1.2);
        let path = DiscretizedPath::sample(2.0, 10, |_| (v1(cst), v1(cst.conj()))).unwrap();
        let q = evaluate_action(&free, &path).unwrap();
        assert!((q - c(0.0, -cst.norm_sqr())).norm() < 1e-14);
    }

    #[test]
    fn mismatched_path_rejected() {
        let grid = vec![0.0, 0.5, 1.0];
        let z = vec![v1(c(0.0, 0.0)); 3];
        let zbar = vec![v1(c(0.0, 0.0)); 2];
        assert!(matches!(
            DiscretizedPath::new(grid, z, zbar),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn on_shell_action_converges_quadratically() {
        // z(t) = w e^{-it}, z̄(t) = v e^{-i(T-t)} solves D z = 0 for A = 1, B = 0;
        // substituting into the action leaves only the boundary terms, v w e^{-iT}/i.
        let (v, w, horizon) = (c(0.4, 0.3), c(-0.2, 0.9), 1.3);
        let h =
            QuadraticHamiltonian::constant(one(c(1.0, 0.0)), one(c(0.0, 0.0)), horizon).unwrap();
        let exact = v * w * (-I * horizon).exp() / I;
        let err = |nodes: usize| {
            let path = DiscretizedPath::sample(horizon, nodes, |t| {
                (v1(w * (-I * t).exp()), v1(v * (-I * (horizon - t)).exp()))
            })
            .unwrap();
            (evaluate_action(&h, &path).unwrap() - exact).norm()
        };
        let (e1, e2) = (err(200), err(400));
        assert!(e2 < 1e-5, "{e2}");
        assert!((e1 / e2 - 4.0).abs() < 0.2, "ratio {}", e1 / e2);
    }
}
