//! Orchestration: checks run on scoped threads, batches flow to one writer.

use std::path::PathBuf;
use std::sync::mpsc;
use std::thread;

use griffiths_core::lattice::{sample_test_functions, PotentialKind, TestFunctionClass};
use griffiths_core::spectral::{expectation_position, momentum_distribution, LatticeModel};
use griffiths_core::verify::{digest, verify_cone_theory, Tolerances, VerificationReport};

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{Batch, Writer};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    N,
    Lambda,
    GridPoints,
    Beta,
}

impl SweepParam {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "n" => Ok(SweepParam::N),
            "lambda" => Ok(SweepParam::Lambda),
            "N" => Ok(SweepParam::GridPoints),
            "beta" => Ok(SweepParam::Beta),
            _ => Err(CliError::Config(format!(
                "unknown sweep parameter {s:?} (known: n, lambda, N, beta)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::Lambda => "lambda",
            SweepParam::GridPoints => "N",
            SweepParam::Beta => "beta",
        }
    }

    /// Sweeps along which `ρ̂` and `⟨f⟩` must be nondecreasing.
    pub fn is_ordering(self) -> bool {
        matches!(self, SweepParam::N | SweepParam::Lambda)
    }

    fn integer(self, v: f64) -> Result<u32, CliError> {
        if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u32)
        } else {
            Err(CliError::Config(format!(
                "{} must be a positive integer (got {v})",
                self.name()
            )))
        }
    }

    pub fn apply(self, base: &ExperimentConfig, v: f64) -> Result<ExperimentConfig, CliError> {
        let mut c = base.clone();
        match self {
            SweepParam::N => {
                if c.potential.kind != "yukawa_cutoff" {
                    return Err(CliError::Config("sweeping n needs a yukawa_cutoff potential".into()));
                }
                c.potential.params.cutoff = Some(self.integer(v)?);
            }
            SweepParam::Lambda => c.coupling = v,
            SweepParam::GridPoints => c.grid.n = self.integer(v)? as usize,
            SweepParam::Beta => c.beta = v,
        }
        Ok(c)
    }
}

/// Output locations after command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub echo: bool,
}

type Point = (Option<(String, f64)>, Experiment);

struct Observables {
    rho: Vec<f64>,
    expectations: Vec<f64>,
}

fn observables(exp: &Experiment, model: &LatticeModel) -> griffiths_core::Result<Observables> {
    let gs = model.ground_state()?;
    let fs = sample_test_functions(TestFunctionClass::AEven, exp.config.samples, exp.config.seed, &exp.grid)?;
    Ok(Observables {
        rho: momentum_distribution(&gs)?,
        expectations: fs
            .iter()
            .map(|f| expectation_position(&gs, f))
            .collect::<griffiths_core::Result<_>>()?,
    })
}

fn ordering_reports(
    name: &str,
    points: &[Point],
    obs: &[Observables],
    tol: &Tolerances,
    dg: &str,
) -> Vec<VerificationReport> {
    let mut rho = VerificationReport::new("sweep.rho_hat_monotone", tol.inequality, dg);
    let mut exp = VerificationReport::new("sweep.expectation_monotone", tol.inequality, dg);
    for w in 0..obs.len().saturating_sub(1) {
        let a = points[w].0.as_ref().map(|p| p.1).unwrap_or_default();
        let b = points[w + 1].0.as_ref().map(|p| p.1).unwrap_or_default();
        for (k, (lo, hi)) in obs[w].rho.iter().zip(&obs[w + 1].rho).enumerate() {
            rho.record(format!("{name}={a}->{b} p{k}"), hi - lo);
        }
        for (i, (lo, hi)) in obs[w].expectations.iter().zip(&obs[w + 1].expectations).enumerate() {
            exp.record(format!("{name}={a}->{b} f{i}"), hi - lo);
        }
    }
    vec![rho.finish(), exp.finish()]
}

fn execute(
    points: Vec<Point>,
    ordering: Option<&str>,
    out: &Outputs,
    command: &str,
    dg: &str,
) -> Result<bool, CliError> {
    let mut expected: Vec<(usize, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(p, (_, e))| (0..e.checks.len()).map(move |c| (p, c)))
        .collect();
    if ordering.is_some() {
        expected.push((points.len(), 0));
    }
    let mut writer = Writer::new(out.csv.clone(), out.json.clone(), expected, out.echo)?;

    thread::scope(|s| {
        let (tx, rx) = mpsc::channel::<Result<Batch, CliError>>();
        let sink = s.spawn(move || -> Result<Writer, CliError> {
            for msg in rx {
                writer.accept(msg?)?;
            }
            Ok(writer)
        });

        let workers: Vec<_> = points
            .iter()
            .enumerate()
            .map(|(p, (param, exp))| {
                let tx = tx.clone();
                s.spawn(move || -> Result<Option<Observables>, CliError> {
                    let model = LatticeModel::new(&exp.grid, &exp.potential, exp.config.kinetic.into())?;
                    let obs = if ordering.is_some() {
                        Some(observables(exp, &model)?)
                    } else {
                        None
                    };
                    thread::scope(|inner| {
                        for (c, id) in exp.checks.iter().enumerate() {
                            let tx = tx.clone();
                            let model = &model;
                            inner.spawn(move || {
                                let batch = id
                                    .run(exp, model)
                                    .map(|reports| Batch {
                                        key: (p, c),
                                        parameter: param.clone(),
                                        reports,
                                    })
                                    .map_err(CliError::from);
                                let _ = tx.send(batch);
                            });
                        }
                    });
                    Ok(obs)
                })
            })
            .collect();

        let mut obs = Vec::new();
        let mut failure = None;
        for w in workers {
            match w.join().expect("worker panicked") {
                Ok(o) => obs.extend(o),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        if let (Some(name), None) = (ordering, &failure) {
            let tol = &points[0].1.tolerances;
            let reports = ordering_reports(name, &points, &obs, tol, dg);
            let _ = tx.send(Ok(Batch {
                key: (points.len(), 0),
                parameter: Some((
                    name.to_string(),
                    points
                        .last()
                        .and_then(|p| p.0.as_ref())
                        .map(|p| p.1)
                        .unwrap_or_default(),
                )),
                reports,
            }));
        }
        drop(tx);
        let writer = sink.join().expect("writer panicked")?;
        if let Some(e) = failure {
            return Err(e);
        }
        writer.finish(command, dg)
    })
}

fn outputs(cfg: &ExperimentConfig, out: &Outputs) -> Outputs {
    Outputs {
        csv: out.csv.clone().or_else(|| cfg.output.csv_path.clone()),
        json: out.json.clone().or_else(|| cfg.output.json_path.clone()),
        echo: out.echo,
    }
}

fn with_tol(mut cfg: ExperimentConfig, tol: Option<f64>) -> ExperimentConfig {
    if let Some(t) = tol {
        let mut o = cfg.tolerances.unwrap_or_default();
        o.inequality = Some(t);
        o.cone = Some(t);
        cfg.tolerances = Some(o);
    }
    cfg
}

/// Run every configured check once. `Ok(true)` iff all reports passed.
pub fn verify(cfg: &ExperimentConfig, tol: Option<f64>, out: &Outputs) -> Result<bool, CliError> {
    let cfg = with_tol(cfg.clone(), tol);
    let exp = cfg.resolve()?;
    let dg = exp.digest.clone();
    execute(vec![(None, exp)], None, &outputs(&cfg, out), "verify", &dg)
}

/// Run the configured checks at each parameter value.
pub fn sweep(
    cfg: &ExperimentConfig,
    param: SweepParam,
    values: &[f64],
    tol: Option<f64>,
    out: &Outputs,
) -> Result<bool, CliError> {
    let cfg = with_tol(cfg.clone(), tol);
    if values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    let mut values = values.to_vec();
    if param.is_ordering() {
        values.sort_by(f64::total_cmp);
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config(format!("repeated {} value in sweep", param.name())));
        }
    }
    let points = values
        .iter()
        .map(|&v| Ok((Some((param.name().to_string(), v)), param.apply(&cfg, v)?.resolve()?)))
        .collect::<Result<Vec<Point>, CliError>>()?;
    if param == SweepParam::N && !matches!(points[0].1.kind, PotentialKind::YukawaCutoff { .. }) {
        return Err(CliError::Config("sweeping n needs a yukawa_cutoff potential".into()));
    }
    let dg = digest(&format!(
        "{} sweep {:?} over {}",
        points[0].1.digest,
        param,
        values.len()
    ));
    let ordering = param.is_ordering().then_some(param.name());
    execute(points, ordering, &outputs(&cfg, out), "sweep", &dg)
}

/// The cone-theory suite at one matrix size.
pub fn cone(size: usize, seed: u64, instances: usize, tol: Option<f64>, out: &Outputs) -> Result<bool, CliError> {
    if size < 2 {
        return Err(CliError::Config(format!("cone size must be >= 2 (got {size})")));
    }
    let mut t = Tolerances::default();
    if let Some(x) = tol {
        t.inequality = x;
        t.cone = x;
    }
    let dg = digest(&format!("cone size={size} seed={seed} instances={instances}"));
    let mut writer = Writer::new(out.csv.clone(), out.json.clone(), vec![(0, 0)], out.echo)?;
    let reports = verify_cone_theory(&[size], instances, seed, &t, &dg)?;
    writer.accept(Batch {
        key: (0, 0),
        parameter: None,
        reports,
    })?;
    writer.finish("cone", &dg)
}
