//! Experiment configuration: the JSON schema and its validation.

use std::path::{Path, PathBuf};

use griffiths_core::lattice::{realize_potential, Grid, Kinetic, Potential, PotentialKind};
use griffiths_core::verify::{ModelFamily, Tolerances};
use serde::{Deserialize, Serialize};

use crate::checks::CheckId;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub grid: GridSpec,
    pub potential: PotentialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    pub checks: Vec<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Coupling `λ` multiplying the potential.
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default)]
    pub kinetic: KineticSpec,
    /// Test functions (or pairs, or cone instances) drawn per check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Inverse temperature for the finite-β oracle.
    #[serde(default = "default_beta")]
    pub beta: f64,
}

fn default_coupling() -> f64 {
    1.0
}

fn default_samples() -> usize {
    50
}

fn default_beta() -> f64 {
    40.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    /// `yukawa_cutoff`, `yukawa_limit`, `gaussian_well` or `custom_fourier`.
    pub kind: String,
    #[serde(default)]
    pub params: PotentialParams,
    /// Transform values on the momentum nodes, for `custom_fourier`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hat_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub n_lo: u32,
    pub n_hi: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub inequality: Option<f64>,
    pub strict_margin: Option<f64>,
    pub conv_tol: Option<f64>,
    pub cone: Option<f64>,
    pub finite_beta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticSpec {
    #[default]
    Lattice,
    Spectral,
}

impl From<KineticSpec> for Kinetic {
    fn from(k: KineticSpec) -> Self {
        match k {
            KineticSpec::Lattice => Kinetic::Lattice,
            KineticSpec::Spectral => Kinetic::Spectral,
        }
    }
}

/// A validated configuration, ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub grid: Grid,
    pub kind: PotentialKind,
    pub potential: Potential,
    pub family: Option<ModelFamily>,
    pub checks: Vec<CheckId>,
    pub tolerances: Tolerances,
    pub digest: String,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn potential_kind(&self) -> Result<PotentialKind, CliError> {
        let p = &self.potential.params;
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| CliError::Config(format!("potential kind {} needs params.{name}", self.potential.kind)))
        };
        Ok(match self.potential.kind.as_str() {
            "yukawa_cutoff" => PotentialKind::YukawaCutoff {
                mass: need("mass", p.mass)?,
                cutoff: p
                    .cutoff
                    .ok_or_else(|| CliError::Config("potential kind yukawa_cutoff needs params.cutoff".into()))?,
            },
            "yukawa_limit" => PotentialKind::YukawaLimit {
                mass: need("mass", p.mass)?,
            },
            "gaussian_well" => PotentialKind::GaussianWell {
                depth: need("depth", p.depth)?,
                width: need("width", p.width)?,
            },
            "custom_fourier" => PotentialKind::CustomFourier {
                hat_values: self
                    .potential
                    .hat_values
                    .clone()
                    .ok_or_else(|| CliError::Config("potential kind custom_fourier needs hat_values".into()))?,
            },
            other => return Err(CliError::Config(format!("unknown potential kind {other:?}"))),
        })
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(o) = self.tolerances {
            t.inequality = o.inequality.unwrap_or(t.inequality);
            t.strict_margin = o.strict_margin.unwrap_or(t.strict_margin);
            t.conv_tol = o.conv_tol.unwrap_or(t.conv_tol);
            t.cone = o.cone.unwrap_or(t.cone);
            t.finite_beta = o.finite_beta.unwrap_or(t.finite_beta);
        }
        t
    }

    /// Validate everything that can be checked before any model is built.
    pub fn resolve(&self) -> Result<Experiment, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !(1..=3).contains(&self.grid.d) {
            return Err(CliError::Config(format!(
                "grid.d must be 1, 2 or 3 (got {})",
                self.grid.d
            )));
        }
        let grid = Grid::new(self.grid.d, self.grid.n, self.grid.l).map_err(CliError::from_model)?;
        if self.checks.is_empty() {
            return Err(CliError::Config("no checks requested".into()));
        }
        let checks = self
            .checks
            .iter()
            .map(|c| CheckId::parse(c))
            .collect::<Result<Vec<_>, _>>()?;
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return Err(CliError::Config(format!(
                "coupling must be > 0 (got {})",
                self.coupling
            )));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(CliError::Config(format!("beta must be > 0 (got {})", self.beta)));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be >= 1".into()));
        }
        let kind = self.potential_kind()?;
        let potential = realize_potential(kind.clone(), &grid)
            .and_then(|v| v.scaled(self.coupling))
            .map_err(CliError::from_model)?;
        let family = match self.family {
            Some(f) => {
                let mass = match kind {
                    PotentialKind::YukawaCutoff { mass, .. } | PotentialKind::YukawaLimit { mass } => mass,
                    _ => return Err(CliError::Config("family requires a Yukawa potential".into())),
                };
                let fam = ModelFamily::yukawa(&grid, mass, f.n_lo, f.n_hi)
                    .map_err(CliError::from_model)?
                    .with_coupling(self.coupling)
                    .with_kinetic(self.kinetic.into());
                Some(fam)
            }
            None => None,
        };
        for c in &checks {
            if c.needs_family() && family.is_none() {
                return Err(CliError::Config(format!(
                    "check {} needs a family {{n_lo, n_hi}}",
                    c.as_str()
                )));
            }
        }
        let canonical = serde_json::to_string(&ExperimentConfig {
            output: OutputSpec::default(),
            ..self.clone()
        })
        .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Experiment {
            config: self.clone(),
            grid,
            kind,
            potential,
            family,
            checks,
            tolerances: self.tolerances(),
            digest: griffiths_core::verify::digest(&canonical),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "schema_version": 1,
        "grid": {"d": 1, "N": 31, "L": 6.0},
        "potential": {"kind": "yukawa_cutoff", "params": {"mass": 1.0, "cutoff": 4}},
        "family": {"n_lo": 2, "n_hi": 5},
        "checks": ["first_inequality", "monotone_in_n"],
        "seed": 3,
        "tolerances": {"inequality": 1e-9},
        "output": {"csv_path": "out.csv"}
    }"#;

    #[test]
    fn parses_and_resolves() {
        let c = ExperimentConfig::parse(EXAMPLE).unwrap();
        let e = c.resolve().unwrap();
        assert_eq!(e.checks, vec![CheckId::FirstInequality, CheckId::MonotoneInN]);
        assert_eq!(e.tolerances.inequality, 1e-9);
        assert_eq!(e.tolerances.cone, Tolerances::default().cone);
        assert_eq!(c.samples, 50);
        assert!(e.family.is_some());
    }

    #[test]
    fn digest_ignores_output_paths() {
        let a = ExperimentConfig::parse(EXAMPLE).unwrap();
        let mut b = a.clone();
        b.output.json_path = Some("x.json".into());
        assert_eq!(a.resolve().unwrap().digest, b.resolve().unwrap().digest);
        b.seed += 1;
        assert_ne!(a.resolve().unwrap().digest, b.resolve().unwrap().digest);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::parse(&EXAMPLE.replace("\"seed\"", "\"sead\"")).is_err());
        let mut c = ExperimentConfig::parse(EXAMPLE).unwrap();
        c.family = None;
        assert!(matches!(c.resolve(), Err(CliError::Config(m)) if m.contains("needs a family")));
        let mut c = ExperimentConfig::parse(EXAMPLE).unwrap();
        c.potential = PotentialSpec {
            kind: "gaussian_well".into(),
            params: PotentialParams {
                depth: Some(1.0),
                width: Some(1.0),
                ..Default::default()
            },
            hat_values: None,
        };
        assert!(c.resolve().is_err());
        let mut c = ExperimentConfig::parse(EXAMPLE).unwrap();
        c.grid.d = 4;
        assert!(c.resolve().is_err());
    }
}
