// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Versioned TOML schemas for scenario and mode-family files.
//!
//! A complex number is written either as a float or as `[re, im]`; matrices
//! are arrays of rows. Example scenario:
//!
//! ```toml
//! version = 1
//! name = "squeeze"
//! seed = 7
//!
//! [hamiltonian]
//! modes = 1
//! horizon = 1.0
//! kind = "single_mode_squeeze"
//! b = 0.6
//!
//! [labels]
//! v = [0.0]
//! w = [[0.0, 0.0]]
//!
//! [integrator]
//! steps = 1024
//! lambda = 1.0
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::CoherentLabel;
use crate::amplitude::DEFAULT_LAMBDA_NODES;
use crate::diagnostics::{ModeFamily, ModeGenerator};
use crate::error::{Error, Result};
use crate::hamiltonian::{HarmonicTerm, QuadraticHamiltonian};
use crate::linalg::{CMat, CVec, C64};
use crate::oracles::{DiscretePIConfig, FockConfig};
use crate::propagator::{EvolveOptions, DEFAULT_STEPS};
use crate::random::{self, RandomSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexEntry {
    pub fn value(self) -> C64 {
        match self {
            ComplexEntry::Real(x) => C64::new(x, 0.0),
            ComplexEntry::Pair([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for ComplexEntry {
    fn from(z: C64) -> Self {
        ComplexEntry::Pair([z.re, z.im])
    }
}

pub type MatrixEntry = Vec<Vec<ComplexEntry>>;

fn matrix(rows: &MatrixEntry, n: usize, what: &str) -> Result<CMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("{what} must be a {n}x{n} matrix")));
    }
    Ok(CMat::from_fn(n, n, |i, j| rows[i][j].value()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarmonicEntry {
    pub a: MatrixEntry,
    pub b: MatrixEntry,
    #[serde(default)]
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianKind {
    Constant {
        a: MatrixEntry,
        b: MatrixEntry,
    },
    Tabulated {
        times: Vec<f64>,
        a: Vec<MatrixEntry>,
        b: Vec<MatrixEntry>,
    },
    Harmonic {
        terms: Vec<HarmonicEntry>,
    },
    SingleModeSqueeze {
        b: ComplexEntry,
    },
    FrequencySweep {
        omega0: f64,
        omega1: f64,
    },
    /// Drawn from the scenario seed.
    Random {
        #[serde(default)]
        time_dependent: bool,
        #[serde(default = "one")]
        a_scale: f64,
        #[serde(default = "default_b_scale")]
        b_scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn default_b_scale() -> f64 {
    0.3
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HamiltonianSection {
    pub modes: usize,
    pub horizon: f64,
    #[serde(flatten)]
    pub kind: HamiltonianKind,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LabelSection {
    pub v: Option<Vec<ComplexEntry>>,
    pub w: Option<Vec<ComplexEntry>>,
    /// Draw missing labels uniformly in this disc, from the seed.
    pub random_radius: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegratorSection {
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "default_reproject")]
    pub reproject_every: usize,
    /// Uniform λ nodes for the continuation route in `verify`.
    #[serde(default = "default_lambda_nodes")]
    pub lambda_nodes: usize,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_reproject() -> usize {
    16
}

fn default_lambda_nodes() -> usize {
    DEFAULT_LAMBDA_NODES
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            lambda: 1.0,
            reproject_every: 16,
            lambda_nodes: DEFAULT_LAMBDA_NODES,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FockSection {
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
}

fn default_cutoff() -> usize {
    40
}

fn default_substeps() -> usize {
    256
}

impl Default for FockSection {
    fn default() -> Self {
        Self {
            cutoff: default_cutoff(),
            substeps: default_substeps(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathIntegralSection {
    /// Smallest and largest `k` in `N = 2^k`.
    #[serde(default = "default_min_power")]
    pub min_power: u32,
    #[serde(default = "default_max_power")]
    pub max_power: u32,
}

fn default_min_power() -> u32 {
    6
}

fn default_max_power() -> u32 {
    12
}

impl Default for PathIntegralSection {
    fn default() -> Self {
        Self {
            min_power: default_min_power(),
            max_power: default_max_power(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OutputSection {
    pub dir: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub hamiltonian: HamiltonianSection,
    #[serde(default)]
    pub labels: LabelSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub fock: FockSection,
    #[serde(default)]
    pub path_integral: PathIntegralSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported schema version {v}; expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text)?;
        check_version(s.version)?;
        s.check_finite()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    fn check_finite(&self) -> Result<()> {
        let h = &self.hamiltonian;
        if !h.horizon.is_finite() || !self.integrator.lambda.is_finite() {
            return Err(Error::Config("horizon and lambda must be finite".into()));
        }
        if self.integrator.steps == 0 {
            return Err(Error::Config("integrator steps must be at least 1".into()));
        }
        Ok(())
    }

    /// Build and validate the Hamiltonian.
    pub fn hamiltonian(&self) -> Result<QuadraticHamiltonian> {
        let sec = &self.hamiltonian;
        let n = sec.modes;
        let h = match &sec.kind {
            HamiltonianKind::Constant { a, b } => {
                QuadraticHamiltonian::constant(matrix(a, n, "A")?, matrix(b, n, "B")?, sec.horizon)?
            }
            HamiltonianKind::Tabulated { times, a, b } => {
                let a = a
                    .iter()
                    .map(|m| matrix(m, n, "A"))
                    .collect::<Result<Vec<_>>>()?;
                let b = b
                    .iter()
                    .map(|m| matrix(m, n, "B"))
                    .collect::<Result<Vec<_>>>()?;
                let h = QuadraticHamiltonian::tabulated(times.clone(), a, b)?;
                if (h.horizon() - sec.horizon).abs() > 1e-12 * sec.horizon.abs().max(1.0) {
                    return Err(Error::Config(format!(
                        "tabulated times span {} but horizon is {}",
                        h.horizon(),
                        sec.horizon
                    )));
                }
                h
            }
            HamiltonianKind::Harmonic { terms } => {
                let terms = terms
                    .iter()
                    .map(|t| {
                        Ok(HarmonicTerm {
                            a: matrix(&t.a, n, "A")?,
                            b: matrix(&t.b, n, "B")?,
                            frequency: t.frequency,
                            phase: t.phase,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                QuadraticHamiltonian::harmonic(n, terms, sec.horizon)?
            }
            HamiltonianKind::SingleModeSqueeze { b } => {
                one_mode(n)?;
                QuadraticHamiltonian::single_mode_squeeze(b.value(), sec.horizon)?
            }
            HamiltonianKind::FrequencySweep { omega0, omega1 } => {
                one_mode(n)?;
                QuadraticHamiltonian::frequency_sweep(*omega0, *omega1, sec.horizon)?
            }
            HamiltonianKind::Random {
                time_dependent,
                a_scale,
                b_scale,
            } => {
                let mut spec = if *time_dependent {
                    RandomSpec::time_dependent(n, sec.horizon)
                } else {
                    RandomSpec::constant(n, sec.horizon)
                };
                spec.a_scale = *a_scale;
                spec.b_scale = *b_scale;
                random::random_hamiltonian(&spec, self.seed)?
            }
        };
        h.validate()?;
        Ok(h)
    }

    /// `(v, w)`; missing labels are zero, or random when `random_radius` is set.
    pub fn labels(&self) -> Result<(CoherentLabel, CoherentLabel)> {
        let n = self.hamiltonian.modes;
        // Offset the stream so labels and a random Hamiltonian stay independent.
        let mut rng = random::rng(self.seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
        let mut make = |given: &Option<Vec<ComplexEntry>>, what: &str| -> Result<CoherentLabel> {
            match (given, self.labels.random_radius) {
                (Some(v), _) => {
                    if v.len() != n {
                        return Err(Error::Shape(format!(
                            "label {what} has {} entries, expected {n}",
                            v.len()
                        )));
                    }
                    CoherentLabel::new(CVec::from_iterator(n, v.iter().map(|e| e.value())))
                }
                (None, Some(r)) => Ok(random::label(&mut rng, n, r)),
                (None, None) => Ok(CoherentLabel::zeros(n)),
            }
        };
        let v = make(&self.labels.v, "v")?;
        let w = make(&self.labels.w, "w")?;
        Ok((v, w))
    }

    pub fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            steps: self.integrator.steps,
            reproject_every: self.integrator.reproject_every,
            ..EvolveOptions::default()
        }
    }

    pub fn fock_config(&self) -> Result<FockConfig> {
        FockConfig::new(self.fock.cutoff, self.fock.substeps)
    }

    pub fn path_integral_config(&self) -> Result<DiscretePIConfig> {
        DiscretePIConfig::new(1usize << self.path_integral.max_power)
    }
}

fn one_mode(n: usize) -> Result<()> {
    if n != 1 {
        return Err(Error::Config(format!(
            "this Hamiltonian kind has one mode, got modes = {n}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSection {
    PowerLaw {
        #[serde(default)]
        a_scale: f64,
        #[serde(default)]
        a_power: f64,
        b_scale: ComplexEntry,
        #[serde(default)]
        b_power: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub version: u32,
    pub name: String,
    pub horizon: f64,
    pub cutoffs: Vec<usize>,
    #[serde(default = "default_family_tol")]
    pub tolerance: f64,
    pub generator: GeneratorSection,
}

fn default_family_tol() -> f64 {
    1e-6
}

impl FamilyFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: FamilyFile = toml::from_str(text)?;
        check_version(f.version)?;
        if f.cutoffs.is_empty() {
            return Err(Error::Usage("family file lists no cutoffs".into()));
        }
        Ok(f)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn family(&self) -> Result<ModeFamily> {
        let generator = match &self.generator {
            GeneratorSection::PowerLaw {
                a_scale,
                a_power,
                b_scale,
                b_power,
            } => ModeGenerator::power_law(*a_scale, *a_power, b_scale.value(), *b_power),
        };
        ModeFamily::new(
            self.name.clone(),
            generator,
            self.cutoffs.clone(),
            self.tolerance,
        )
    }
}

/// Wrap a per-mode builder as an evolved family generator.
pub fn evolved_generator<F>(steps: usize, build: F) -> ModeGenerator
where
    F: Fn(usize, f64) -> Result<QuadraticHamiltonian> + Send + Sync + 'static,
{
    ModeGenerator::Evolved {
        build: Arc::new(build),
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUEEZE: &str = r#"
version = 1
name = "squeeze"

[hamiltonian]
modes = 1
horizon = 1.0
kind = "single_mode_squeeze"
b = 0.6

[labels]
v = [0.0]
w = [[0.0, 0.0]]
"#;

    #[test]
    fn parse_builtin() {
        let s = Scenario::parse(SQUEEZE).unwrap();
        assert_eq!(s.integrator.steps, DEFAULT_STEPS);
        let h = s.hamiltonian().unwrap();
        assert_eq!(h.sample(0.5).unwrap().1[(0, 0)], C64::new(0.6, 0.0));
        let (v, w) = s.labels().unwrap();
        assert_eq!(v.n(), 1);
        assert_eq!(w.components()[0], C64::new(0.0, 0.0));
        let again = Scenario::parse(&s.to_toml().unwrap()).unwrap();
        assert_eq!(again.name, "squeeze");
    }

    #[test]
    fn constant_and_validation() {
        let text = r#"
version = 1
name = "bad"
[hamiltonian]
modes = 2
horizon = 1.0
kind = "constant"
a = [[1.0, 0.0], [0.0, 2.0]]
b = [[0.0, 0.5], [0.1, 0.0]]
"#;
        let s = Scenario::parse(text).unwrap();
        match s.hamiltonian() {
            Err(Error::Validation { invariant, .. }) => assert!(invariant.contains("symmetric")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn version_and_random() {
        assert!(Scenario::parse(&SQUEEZE.replace("version = 1", "version = 2")).is_err());
        let text = r#"
version = 1
name = "rnd"
seed = 11
[hamiltonian]
modes = 2
horizon = 1.0
kind = "random"
time_dependent = true
[labels]
random_radius = 1.0
"#;
        let s = Scenario::parse(text).unwrap();
        let h = s.hamiltonian().unwrap();
        assert!(!h.is_time_independent());
        let (v1, w1) = s.labels().unwrap();
        let (v2, _) = s.labels().unwrap();
        assert_eq!(v1.components(), v2.components());
        assert_ne!(v1.components(), w1.components());
    }

    #[test]
    fn family_file() {
        let text = r#"
version = 1
name = "inverse_square"
horizon = 4.0
cutoffs = [10, 100, 1000]
[generator]
kind = "power_law"
b_scale = 0.5
b_power = -2.0
"#;
        let f = FamilyFile::parse(text).unwrap().family().unwrap();
        assert_eq!(f.max_cutoff(), 1000);
        assert!(FamilyFile::parse(&text.replace("[10, 100, 1000]", "[]")).is_err());
    }
}
