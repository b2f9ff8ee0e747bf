//! Check ids accepted in configs and the verification calls behind them.

use griffiths_core::doubled::{check_momentum_doubling, check_potential_doubling, extended_semigroup_positivity, Sign};
use griffiths_core::lattice::{sample_test_functions, PotentialKind, TestFunctionClass};
use griffiths_core::spectral::LatticeModel;
use griffiths_core::verify::{
    verify_cone_theory, verify_first_inequality, verify_momentum_distribution, verify_momentum_monotone,
    verify_monotone_in_n, verify_negative_controls, verify_oracles, verify_positivity_structure,
    verify_potential_order, verify_second_inequality, VerificationReport,
};

use crate::config::Experiment;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    FirstInequality,
    SecondInequality,
    MonotoneInN,
    PotentialOrder,
    MomentumDistribution,
    Positivity,
    Cone,
    Doubling,
    Oracle,
    NegativeControl,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::FirstInequality,
        CheckId::SecondInequality,
        CheckId::MonotoneInN,
        CheckId::PotentialOrder,
        CheckId::MomentumDistribution,
        CheckId::Positivity,
        CheckId::Cone,
        CheckId::Doubling,
        CheckId::Oracle,
        CheckId::NegativeControl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::FirstInequality => "first_inequality",
            CheckId::SecondInequality => "second_inequality",
            CheckId::MonotoneInN => "monotone_in_n",
            CheckId::PotentialOrder => "potential_order",
            CheckId::MomentumDistribution => "momentum_distribution",
            CheckId::Positivity => "positivity",
            CheckId::Cone => "cone",
            CheckId::Doubling => "doubling",
            CheckId::Oracle => "oracle",
            CheckId::NegativeControl => "negative_control",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let known: Vec<_> = Self::ALL.iter().map(|c| c.as_str()).collect();
            CliError::Config(format!("unknown check id {s:?} (known: {})", known.join(", ")))
        })
    }

    pub fn needs_family(self) -> bool {
        self == CheckId::MonotoneInN
    }

    /// Run the check against an already-built model.
    pub fn run(self, exp: &Experiment, model: &LatticeModel) -> griffiths_core::Result<Vec<VerificationReport>> {
        let cfg = &exp.config;
        let tol = &exp.tolerances;
        let dg = exp.digest.as_str();
        let grid = &exp.grid;
        let even = || sample_test_functions(TestFunctionClass::AEven, cfg.samples, cfg.seed, grid);
        match self {
            CheckId::FirstInequality => verify_first_inequality(model, cfg.samples, cfg.seed, tol, dg),
            CheckId::SecondInequality => verify_second_inequality(model, cfg.samples, cfg.seed, tol, dg),
            CheckId::MonotoneInN => {
                let family = exp.family.as_ref().expect("family checked at resolve");
                verify_monotone_in_n(family, &even()?, tol, dg)
            }
            CheckId::PotentialOrder => {
                let upper = LatticeModel::new(grid, &exp.potential.scaled(2.0)?, cfg.kinetic.into())?;
                verify_potential_order(&upper, model, &even()?, tol, dg)
            }
            CheckId::MomentumDistribution => {
                let mut out = verify_momentum_distribution(model, tol, dg)?;
                if let Some(family) = &exp.family {
                    out.push(verify_momentum_monotone(family, tol, dg)?);
                }
                Ok(out)
            }
            CheckId::Positivity => verify_positivity_structure(model, 1.0, tol, dg),
            CheckId::Cone => verify_cone_theory(&[4, 8, 16], cfg.samples, cfg.seed, tol, dg),
            CheckId::Doubling => {
                let mut fs = vec![exp.potential.as_test_function()?];
                fs.extend(sample_test_functions(TestFunctionClass::AEven, 2, cfg.seed, grid)?);
                let mut out = Vec::new();
                for f in &fs {
                    for sign in [Sign::Plus, Sign::Minus] {
                        out.push(check_potential_doubling(f, sign, cfg.seed, dg)?);
                        out.push(check_momentum_doubling(f, sign, cfg.seed, dg)?);
                    }
                }
                out.extend(extended_semigroup_positivity(
                    model,
                    None,
                    &[0.5, 1.0, 2.0],
                    cfg.seed,
                    dg,
                )?);
                Ok(out)
            }
            CheckId::Oracle => verify_oracles(model, cfg.beta, cfg.seed, tol, dg),
            CheckId::NegativeControl => {
                let mass = match exp.kind {
                    PotentialKind::YukawaCutoff { mass, .. } | PotentialKind::YukawaLimit { mass } if mass > 0.0 => {
                        mass
                    }
                    _ => 1.0,
                };
                Ok(vec![verify_negative_controls(grid, mass, cfg.seed, tol, dg)?])
            }
        }
    }
}
