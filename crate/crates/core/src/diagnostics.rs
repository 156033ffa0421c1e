// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Cutoff scans over families of independent single modes.
//!
//! Mode `k` of a family carries its own `(A_k, B_k)`. For each cutoff `K` the
//! scan reports the partial sums over `k ≤ K` of `|β_k(T)|²` and of the
//! per-mode `log det(ᾱ₀⁻¹ᾱ)`, which give `|det|` and `|ℐ_K(0, 0)|`. Verdicts
//! come from Cauchy increments and the growth of `Σ|β|²` against `ln K`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hamiltonian::QuadraticHamiltonian;
use crate::linalg::{CMat, C64};
use crate::propagator::{self, single_mode_exact, EvolveOptions};

pub type ModeFn = dyn Fn(usize, f64) -> Result<QuadraticHamiltonian> + Send + Sync;

#[derive(Clone)]
pub enum ModeGenerator {
    /// `A_k = a_scale·k^a_power`, `B_k = b_scale·k^b_power`, constant in time.
    PowerLaw {
        a_scale: f64,
        a_power: f64,
        b_scale: C64,
        b_power: f64,
    },
    /// Mode `k` over horizon `T` as a single-mode Hamiltonian, integrated
    /// numerically with `steps`.
    Evolved { build: Arc<ModeFn>, steps: usize },
}

impl fmt::Debug for ModeGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeGenerator::PowerLaw {
                a_scale,
                a_power,
                b_scale,
                b_power,
            } => write!(
                f,
                "PowerLaw(A = {a_scale}·k^{a_power}, B = {b_scale}·k^{b_power})"
            ),
            ModeGenerator::Evolved { steps, .. } => write!(f, "Evolved({steps} steps)"),
        }
    }
}

impl ModeGenerator {
    pub fn power_law(a_scale: f64, a_power: f64, b_scale: C64, b_power: f64) -> Self {
        ModeGenerator::PowerLaw {
            a_scale,
            a_power,
            b_scale,
            b_power,
        }
    }

    /// `B_k` for a time-independent family.
    fn pairing(&self, k: usize) -> Option<C64> {
        match self {
            ModeGenerator::PowerLaw {
                b_scale, b_power, ..
            } => Some(b_scale * (k as f64).powf(*b_power)),
            ModeGenerator::Evolved { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModeFamily {
    pub name: String,
    pub generator: ModeGenerator,
    /// Strictly increasing mode counts.
    pub cutoffs: Vec<usize>,
    pub tolerance: f64,
}

impl ModeFamily {
    pub fn new(
        name: impl Into<String>,
        generator: ModeGenerator,
        cutoffs: Vec<usize>,
        tolerance: f64,
    ) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::Config("family needs at least one cutoff".into()));
        }
        if cutoffs[0] == 0 || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "cutoffs must be positive and strictly increasing".into(),
            ));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(Self {
            name: name.into(),
            generator,
            cutoffs,
            tolerance,
        })
    }

    pub fn max_cutoff(&self) -> usize {
        *self.cutoffs.last().expect("non-empty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "convergent")]
    Convergent,
    #[serde(rename = "divergent")]
    Divergent,
    #[serde(rename = "not implementable")]
    NotImplementable,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::NotImplementable => "not implementable",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub hs_norm_sq: f64,
    pub abs_det: f64,
    pub abs_vacuum_amplitude: f64,
    /// Change of `arg ℐ_K(0,0)` since the previous cutoff.
    pub phase_increment: f64,
    pub verdict: Verdict,
}

/// Per-mode `(|β_k|², log det(ᾱ₀⁻¹ᾱ)_k)`.
fn mode_data(generator: &ModeGenerator, k: usize, horizon: f64) -> Result<(f64, C64)> {
    match generator {
        ModeGenerator::PowerLaw {
            a_scale,
            a_power,
            b_scale,
            b_power,
        } => {
            let kf = k as f64;
            let s = single_mode_exact(
                a_scale * kf.powf(*a_power),
                b_scale * kf.powf(*b_power),
                horizon,
            );
            Ok((s.beta[(0, 0)].norm_sqr(), s.log_det_ratio()))
        }
        ModeGenerator::Evolved { build, steps } => {
            let h = build(k, horizon)?;
            if h.n() != 1 {
                return Err(Error::Shape(format!(
                    "mode {k} has {} modes, expected 1",
                    h.n()
                )));
            }
            let s =
                propagator::evolve_with(&h, 1.0, &EvolveOptions::with_steps(*steps))?.propagator;
            Ok((s.beta[(0, 0)].norm_sqr(), s.log_det_ratio()))
        }
    }
}

/// Classify the latest cutoff from the two most recent increments of a
/// partial sum `S(K)`.
fn classify(tol: f64, ks: &[usize], sums: &[f64], extra_small: bool, grow: Verdict) -> Verdict {
    let i = sums.len() - 1;
    if i == 0 {
        return Verdict::Inconclusive;
    }
    let inc = sums[i] - sums[i - 1];
    if inc.abs() < tol && extra_small {
        return Verdict::Convergent;
    }
    let rate = |j: usize| (sums[j] - sums[j - 1]) / ((ks[j] as f64).ln() - (ks[j - 1] as f64).ln());
    if i >= 2 && inc > tol && rate(i) >= 0.5 * rate(i - 1) {
        return grow;
    }
    Verdict::Inconclusive
}

pub fn implementability_scan(fam: &ModeFamily, horizon: f64) -> Result<Vec<ScanRow>> {
    implementability_scan_with(fam, horizon, Execution::default())
}

pub fn implementability_scan_with(
    fam: &ModeFamily,
    horizon: f64,
    exec: Execution,
) -> Result<Vec<ScanRow>> {
    let kmax = fam.max_cutoff();
    let per_mode = exec.try_map_range(kmax, |i| mode_data(&fam.generator, i + 1, horizon))?;

    let mut rows = Vec::with_capacity(fam.cutoffs.len());
    let mut hs = 0.0;
    let mut logdet = C64::new(0.0, 0.0);
    let mut next = 0;
    let mut hs_sums = Vec::new();
    let mut amp_sums = Vec::new();
    let mut prev_phase = 0.0;
    for &cut in &fam.cutoffs {
        for (b2, ld) in &per_mode[next..cut] {
            hs += b2;
            logdet += ld;
        }
        next = cut;
        let log_vac = -0.5 * logdet;
        let abs_vac = log_vac.re.exp();
        hs_sums.push(hs);
        amp_sums.push(abs_vac);
        let amp_small = amp_sums.len() >= 2
            && (amp_sums[amp_sums.len() - 1] - amp_sums[amp_sums.len() - 2]).abs() < fam.tolerance;
        let verdict = classify(
            fam.tolerance,
            &fam.cutoffs[..hs_sums.len()],
            &hs_sums,
            amp_small,
            Verdict::NotImplementable,
        );
        rows.push(ScanRow {
            k: cut,
            hs_norm_sq: hs,
            abs_det: logdet.re.exp(),
            abs_vacuum_amplitude: abs_vac,
            phase_increment: log_vac.im - prev_phase,
            verdict,
        });
        prev_phase = log_vac.im;
    }
    Ok(rows)
}

/// True when `|det|` has settled while the phase is still moving by more
/// than the tolerance per cutoff.
pub fn modulus_settles_phase_drifts(rows: &[ScanRow], tol: f64) -> bool {
    if rows.len() < 3 {
        return false;
    }
    let tail = &rows[rows.len() - 2..];
    let det_settled = (tail[1].abs_det - tail[0].abs_det).abs() < tol;
    let phase_moving = tail.iter().all(|r| r.phase_increment.abs() > tol);
    det_settled && phase_moving
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub partial_sum: f64,
    pub verdict: Verdict,
}

pub enum PairingSource<'a> {
    Matrix(&'a QuadraticHamiltonian),
    Family(&'a ModeFamily),
}

/// Partial sums of `Σ_ab |B_ab|²` per cutoff.
pub fn b_hs_check(source: PairingSource<'_>, cutoffs: &[usize], tol: f64) -> Result<Vec<HsRow>> {
    match source {
        PairingSource::Matrix(h) => {
            if !h.is_time_independent() {
                return Err(Error::Unsupported(
                    "the pairing Hilbert-Schmidt check needs a time-independent Hamiltonian".into(),
                ));
            }
            let (_, b): (CMat, CMat) = h.sample(0.0)?;
            let total: f64 = b.iter().map(|z| z.norm_sqr()).sum();
            Ok(vec![HsRow {
                k: h.n(),
                partial_sum: total,
                verdict: Verdict::Convergent,
            }])
        }
        PairingSource::Family(fam) => {
            if cutoffs.is_empty() || cutoffs[0] == 0 || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config(
                    "cutoffs must be positive and strictly increasing".into(),
                ));
            }
            if fam.generator.pairing(1).is_none() {
                return Err(Error::Unsupported(
                    "the pairing Hilbert-Schmidt check needs a time-independent family".into(),
                ));
            }
            let mut rows = Vec::with_capacity(cutoffs.len());
            let mut sums = Vec::new();
            let mut acc = 0.0;
            let mut next = 1;
            for &cut in cutoffs {
                for k in next..=cut {
                    acc += fam.generator.pairing(k).expect("checked").norm_sqr();
                }
                next = cut + 1;
                sums.push(acc);
                let verdict =
                    classify(tol, &cutoffs[..sums.len()], &sums, true, Verdict::Divergent);
                rows.push(HsRow {
                    k: cut,
                    partial_sum: acc,
                    verdict,
                });
            }
            Ok(rows)
        }
    }
}

/// Least-squares slope of `y` against `ln K` over the given rows.
pub fn log_slope(ks: &[usize], ys: &[f64]) -> f64 {
    let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn family(b_scale: f64, b_power: f64, cutoffs: Vec<usize>) -> ModeFamily {
        ModeFamily::new(
            "t",
            ModeGenerator::power_law(0.0, 0.0, c(b_scale, 0.0), b_power),
            cutoffs,
            1e-6,
        )
        .unwrap()
    }

    #[test]
    fn free_family_is_trivial() {
        let rows = implementability_scan(&family(0.0, 0.0, vec![10, 100]), 4.0).unwrap();
        for r in rows {
            assert_eq!(r.hs_norm_sq, 0.0);
            assert_eq!(r.abs_det, 1.0);
            assert_eq!(r.abs_vacuum_amplitude, 1.0);
        }
    }

    #[test]
    fn scan_matches_closed_form_products() {
        let rows = implementability_scan(&family(0.5, -2.0, vec![3]), 1.0).unwrap();
        let mut hs = 0.0;
        let mut amp = 1.0;
        for k in 1..=3 {
            let r = 0.5 / (k * k) as f64;
            hs += r.sinh().powi(2);
            amp /= r.cosh().sqrt();
        }
        assert!((rows[0].hs_norm_sq - hs).abs() < 1e-14);
        assert!((rows[0].abs_vacuum_amplitude - amp).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_cutoffs() {
        let g = ModeGenerator::power_law(0.0, 0.0, c(1.0, 0.0), -1.0);
        assert!(ModeFamily::new("e", g.clone(), vec![], 1e-6).is_err());
        assert!(ModeFamily::new("e", g, vec![10, 10], 1e-6).is_err());
    }

    #[test]
    fn pairing_series() {
        let conv = family(1.0, -1.0, vec![10, 100, 1000, 10000, 100000]);
        let rows = b_hs_check(PairingSource::Family(&conv), &conv.cutoffs, 1e-4).unwrap();
        let last = rows.last().unwrap();
        assert!((last.partial_sum - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-5);
        assert_eq!(last.verdict, Verdict::Convergent);

        let div = family(1.0, -0.5, vec![10, 100, 1000, 10000, 100000]);
        let rows = b_hs_check(PairingSource::Family(&div), &div.cutoffs, 1e-4).unwrap();
        assert_eq!(rows.last().unwrap().verdict, Verdict::Divergent);
    }

    #[test]
    fn time_dependent_matrix_is_unsupported() {
        let h = QuadraticHamiltonian::frequency_sweep(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            b_hs_check(PairingSource::Matrix(&h), &[], 1e-6),
            Err(Error::Unsupported(_))
        ));
        let fixed = QuadraticHamiltonian::single_mode_squeeze(c(0.5, 0.0), 1.0).unwrap();
        let rows = b_hs_check(PairingSource::Matrix(&fixed), &[], 1e-6).unwrap();
        assert_eq!(rows[0].verdict, Verdict::Convergent);
        assert!((rows[0].partial_sum - 0.25).abs() < 1e-15);
    }
}
