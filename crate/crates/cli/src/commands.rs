//! Validated run configurations and their execution.

use std::path::PathBuf;
use std::time::Instant;

use repelcircle_core::identities::{brute_force, closed_form, relative_error, IdentityId};
use repelcircle_core::model::decompose;
use repelcircle_core::parallel::{map_blocks, REPLICA_BLOCK};
use repelcircle_core::rng::streams;
use repelcircle_core::samplers::{run_chain, LimitProcessSampler, McmcConfig};
use repelcircle_core::spectral::{
    build_a_row, check_increment_bounds, eigenvalues_closed_form, eigenvalues_dft, increment_covariance_table,
    relative_deviation,
};
use repelcircle_core::statistics::experiments::{
    clt_report, clt_samples, f_smallness_report, f_smallness_samples, functional_covariance_report,
    functional_covariance_rows, gaussian_batch, maxstat_report, maxstat_samples, psi_uniformity_report,
    psi_uniformity_samples,
};
use repelcircle_core::statistics::{CltSource, CltTolerances, ExperimentReport, FourierTestFunction};
use repelcircle_core::{EnsembleParams, RngSeed};
use serde::Serialize;

use crate::args::{Cli, Command, McmcArgs, Source};
use crate::gspec::g_spec_parse;
use crate::output::{header, num, stem, Format, Writer};

#[derive(Debug)]
pub enum CliError {
    /// Bad options or a precondition violated by them (exit 1).
    Config(String),
    /// Output could not be written (exit 3).
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<repelcircle_core::Error> for CliError {
    fn from(e: repelcircle_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Clone)]
pub enum Job {
    Identities { n_max: usize },
    Spectrum { params: EnsembleParams },
    SampleGauss { params: EnsembleParams, count: usize },
    SampleMcmc { params: EnsembleParams, cfg: McmcConfig },
    SampleLimit { beta: f64, truncation: usize, grid: usize, count: usize },
    Clt { params: EnsembleParams, g: FourierTestFunction, source: CltSource, replicas: usize },
    Maxstat { params: EnsembleParams, replicas: usize, truncation: usize, grid: usize },
    CovCheck { params: EnsembleParams, replicas: usize, grid: usize },
    FSmall { beta: f64, n_list: Vec<usize>, replicas: usize },
    PsiUniform { params: EnsembleParams, cfg: McmcConfig },
    Bounds { params: EnsembleParams, l_max: usize },
}

/// Everything a run needs, checked before any computation starts.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub name: &'static str,
    pub job: Job,
    pub beta: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: Format,
    pub threads: Option<usize>,
    pub record_runtime: bool,
}

fn mcmc_config(a: &McmcArgs, base: McmcConfig) -> Result<McmcConfig, CliError> {
    let cfg = McmcConfig {
        sweeps: a.sweeps.unwrap_or(base.sweeps),
        burn_in: a.burn_in.unwrap_or(base.burn_in),
        thin: a.thin.unwrap_or(base.thin),
        step_scale: a.step_scale.unwrap_or(base.step_scale),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn positive(name: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        Err(CliError::Config(format!("--{name} must be positive")))
    } else {
        Ok(v)
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<usize, CliError> {
    if v < min {
        Err(CliError::Config(format!("--{name} must be at least {min}, got {v}")))
    } else {
        Ok(v)
    }
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("REPELCIRCLE_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("REPELCIRCLE_THREADS must be a positive integer, got {s:?}"))),
        _ => Ok(None),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let c = &cli.common;
        if !(c.beta.is_finite() && c.beta > 0.0) {
            return Err(CliError::Config(format!("--beta must be positive and finite, got {}", c.beta)));
        }
        let params = || -> Result<EnsembleParams, CliError> {
            let n = c.n.ok_or_else(|| CliError::Config(format!("{} requires --n", cli.command.name())))?;
            Ok(EnsembleParams::new(n, c.beta)?)
        };
        let replicas = |default: usize| c.replicas.unwrap_or(default);
        let job = match &cli.command {
            Command::Identities { n_max } => Job::Identities {
                n_max: at_least("n-max", *n_max, 2)?,
            },
            Command::Spectrum => Job::Spectrum { params: params()? },
            Command::SampleGauss => Job::SampleGauss {
                params: params()?,
                count: positive("replicas", replicas(20_000))?,
            },
            Command::SampleMcmc(a) => Job::SampleMcmc {
                params: params()?,
                cfg: mcmc_config(a, McmcConfig::default())?,
            },
            Command::SampleLimit(l) => Job::SampleLimit {
                beta: c.beta,
                truncation: positive("truncation", l.truncation)?,
                grid: at_least("grid", l.grid, 2)?,
                count: positive("replicas", replicas(100))?,
            },
            Command::Clt { g_spec, source, mcmc } => {
                let params = params()?;
                let g = g_spec_parse(g_spec).map_err(|e| CliError::Config(e.to_string()))?;
                let (source, default) = match source {
                    Source::GaussianApprox => (CltSource::GaussianApprox, 20_000),
                    Source::Mcmc => (CltSource::Mcmc(mcmc_config(mcmc, McmcConfig::default())?), 100),
                };
                Job::Clt {
                    params,
                    g,
                    source,
                    replicas: at_least("replicas", replicas(default), 100)?,
                }
            }
            Command::Maxstat(l) => Job::Maxstat {
                params: params()?,
                replicas: at_least("replicas", replicas(10_000), 1000)?,
                truncation: positive("truncation", l.truncation)?,
                grid: at_least("grid", l.grid, 2)?,
            },
            Command::CovCheck { grid } => Job::CovCheck {
                params: params()?,
                replicas: at_least("replicas", replicas(20_000), 5000)?,
                grid: positive("grid", *grid)?,
            },
            Command::FSmall { n_list } => {
                if n_list.is_empty() || n_list.iter().any(|&n| n < 16) || n_list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Config(
                        "--n-list must be strictly increasing with every n at least 16".into(),
                    ));
                }
                Job::FSmall {
                    beta: c.beta,
                    n_list: n_list.clone(),
                    replicas: positive("replicas", replicas(200))?,
                }
            }
            Command::PsiUniform(a) => Job::PsiUniform {
                params: params()?,
                cfg: mcmc_config(
                    a,
                    McmcConfig {
                        sweeps: 60_000,
                        burn_in: 5_000,
                        thin: 10,
                        ..McmcConfig::default()
                    },
                )?,
            },
            Command::Bounds { l_max } => {
                let params = params()?;
                if *l_max == 0 || *l_max > params.n() {
                    return Err(CliError::Config(format!("--l-max must lie in [1, {}], got {l_max}", params.n())));
                }
                Job::Bounds { params, l_max: *l_max }
            }
        };
        let threads = match c.threads {
            Some(0) => return Err(CliError::Config("--threads must be positive".into())),
            Some(t) => Some(t),
            None => threads_from_env()?,
        };
        Ok(Self {
            name: cli.command.name(),
            job,
            beta: c.beta,
            seed: c.seed,
            out_dir: c.out_dir.clone(),
            format: c.format,
            threads,
            record_runtime: c.record_runtime,
        })
    }

    fn writer(&self, n_slot: usize) -> Writer {
        Writer::new(&self.out_dir, stem(self.name, n_slot, self.beta, self.seed), self.format)
    }

    fn seed(&self) -> RngSeed {
        RngSeed::new(self.seed, 0)
    }
}

/// JSON companion of a raw sample batch.
#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    experiment: &'a str,
    params: &'a EnsembleParams,
    seed: u64,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    acceptance_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_seconds: Option<f64>,
}

pub struct Outcome {
    pub pass: bool,
    pub files: Vec<PathBuf>,
}

fn x_header(n: usize, extra: &[&str]) -> Vec<String> {
    (0..n)
        .map(|j| format!("x_{j}"))
        .chain(extra.iter().map(|s| s.to_string()))
        .collect()
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| execute_job(cfg)),
        None => execute_job(cfg),
    }
}

fn finish(cfg: &RunConfig, w: &Writer, mut report: ExperimentReport, started: Instant, mut files: Vec<PathBuf>) -> Result<Outcome, CliError> {
    if cfg.record_runtime {
        report.insert("runtime_seconds", started.elapsed().as_secs_f64());
    }
    files.extend(w.json(&report)?);
    Ok(Outcome {
        pass: report.pass,
        files,
    })
}

fn execute_job(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let runtime = || cfg.record_runtime.then(|| started.elapsed().as_secs_f64());
    match &cfg.job {
        Job::Identities { n_max } => {
            let ids: Vec<IdentityId> = IdentityId::enumerate(*n_max).collect();
            let rows = ids
                .iter()
                .map(|id| {
                    let closed = closed_form(id);
                    brute_force(id).map(|brute| (*id, closed, brute, relative_error(closed, brute)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let max_err = rows.iter().map(|r| r.3).fold(0.0, f64::max);
            let w = cfg.writer(*n_max);
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["id", "n", "m", "closed", "brute", "rel_err"]),
                    rows.iter().map(|(id, c, b, e)| {
                        vec![
                            id.tag().as_str().to_string(),
                            id.n().to_string(),
                            id.m().map(|m| m.to_string()).unwrap_or_default(),
                            num(*c),
                            num(*b),
                            num(*e),
                        ]
                    }),
                )?
                .into_iter()
                .collect();
            let mut r = ExperimentReport::new("identities", EnsembleParams::new(*n_max, cfg.beta)?, rows.len());
            r.insert("max_rel_err", max_err).check("max_rel_err", 0.0, 1e-9);
            finish(cfg, &w, r, started, files)
        }
        Job::Spectrum { params } => {
            let closed = eigenvalues_closed_form(params);
            let dft = eigenvalues_dft(&build_a_row(params));
            let scale = closed.lambda.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let errs: Vec<f64> = closed
                .lambda
                .iter()
                .zip(&dft.lambda)
                .map(|(&c, &d)| if c == 0.0 { d.abs() / scale } else { relative_deviation(d, c) })
                .collect();
            let w = cfg.writer(params.n());
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["k", "lambda_closed", "lambda_dft", "rel_err"]),
                    (0..params.n()).map(|k| vec![k.to_string(), num(closed.lambda[k]), num(dft.lambda[k]), num(errs[k])]),
                )?
                .into_iter()
                .collect();
            let mut r = ExperimentReport::new("spectrum", *params, params.n());
            r.insert("max_rel_err", errs.iter().copied().fold(0.0, f64::max))
                .check("max_rel_err", 0.0, 1e-9);
            finish(cfg, &w, r, started, files)
        }
        Job::SampleGauss { params, count } => {
            let samples = gaussian_batch(params, cfg.seed(), *count, |x, _| x.into_values());
            let w = cfg.writer(params.n());
            let mut files: Vec<PathBuf> = w
                .csv(
                    &x_header(params.n(), &[]),
                    samples.iter().map(|s| s.iter().map(|&v| num(v)).collect()),
                )?
                .into_iter()
                .collect();
            files.extend(w.json(&Sidecar {
                experiment: cfg.name,
                params,
                seed: cfg.seed,
                count: *count,
                acceptance_rate: None,
                runtime_seconds: runtime(),
            })?);
            Ok(Outcome { pass: true, files })
        }
        Job::SampleMcmc { params, cfg: mc } => {
            // Columns hold x from the decomposition, then ψ.
            let mut xs = Vec::with_capacity(mc.emitted());
            let acc = run_chain(params, cfg.seed().with_stream(streams::MCMC), mc, |c| {
                let (x, psi) = decompose(c);
                let mut row: Vec<String> = x.values().iter().map(|&v| num(v)).collect();
                row.push(num(psi.psi()));
                xs.push(row);
            })?;
            let w = cfg.writer(params.n());
            let mut files = Vec::new();
            files.extend(w.csv(&x_header(params.n(), &["psi"]), xs)?);
            files.extend(w.json(&Sidecar {
                experiment: cfg.name,
                params,
                seed: cfg.seed,
                count: mc.emitted(),
                acceptance_rate: Some(acc),
                runtime_seconds: runtime(),
            })?);
            Ok(Outcome { pass: true, files })
        }
        Job::SampleLimit { beta, truncation, grid, count } => {
            let sampler = LimitProcessSampler::new(*beta, *truncation, *grid)?;
            let seed = cfg.seed();
            let paths = map_blocks(*count, REPLICA_BLOCK, |b, len| {
                let mut rng = seed.with_stream(streams::LIMIT + b as u32).rng();
                (0..len).map(|_| sampler.sample(&mut rng)).collect()
            });
            let w = cfg.writer(*truncation);
            let mut files: Vec<PathBuf> = w
                .csv(
                    &header(["path", "t", "value"]),
                    paths.iter().enumerate().flat_map(|(i, p)| {
                        p.grid()
                            .into_iter()
                            .zip(&p.values)
                            .map(move |(t, v)| vec![i.to_string(), num(t), num(*v)])
                            .collect::<Vec<_>>()
                    }),
                )?
                .into_iter()
                .collect();
            files.extend(w.json(&serde_json::json!({
                "experiment": cfg.name,
                "beta": beta,
                "truncation": truncation,
                "grid_points": grid,
                "seed": cfg.seed,
                "count": count,
                "runtime_seconds": runtime(),
            }))?);
            Ok(Outcome { pass: true, files })
        }
        Job::Clt { params, g, source, replicas } => {
            let data = clt_samples(params, g, *replicas, *source, cfg.seed())?;
            let tol = match source {
                CltSource::GaussianApprox => CltTolerances::gaussian_approx(),
                CltSource::Mcmc(_) => CltTolerances::mcmc(),
            };
            let r = clt_report(params, g, *replicas, &data, &tol)?;
            let w = cfg.writer(params.n());
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["index", "statistic"]),
                    data.values.iter().enumerate().map(|(i, v)| vec![i.to_string(), num(*v)]),
                )?
                .into_iter()
                .collect();
            finish(cfg, &w, r, started, files)
        }
        Job::Maxstat { params, replicas, truncation, grid } => {
            let data = maxstat_samples(params, *replicas, *truncation, *grid, cfg.seed())?;
            let r = maxstat_report(params, *replicas, *truncation, *grid, &data, 0.05)?;
            let w = cfg.writer(params.n());
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["index", "max_x_over_sqrt_n", "sup_abs_zeta"]),
                    data.finite_n
                        .iter()
                        .zip(&data.limit)
                        .enumerate()
                        .map(|(i, (a, b))| vec![i.to_string(), num(*a), num(*b)]),
                )?
                .into_iter()
                .collect();
            finish(cfg, &w, r, started, files)
        }
        Job::CovCheck { params, replicas, grid } => {
            let rows = functional_covariance_rows(params, *replicas, *grid, cfg.seed())?;
            let r = functional_covariance_report(params, *replicas, &rows, 0.1)?;
            let w = cfg.writer(params.n());
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["t", "empirical", "limit", "abs_error"]),
                    rows.iter()
                        .map(|row| vec![num(row.t), num(row.empirical), num(row.target), num(row.abs_error())]),
                )?
                .into_iter()
                .collect();
            finish(cfg, &w, r, started, files)
        }
        Job::FSmall { beta, n_list, replicas } => {
            let rows = f_smallness_samples(*beta, n_list, *replicas, cfg.seed())?;
            let r = f_smallness_report(*beta, *replicas, &rows)?;
            let w = cfg.writer(*n_list.last().expect("validated nonempty"));
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["n", "index", "f", "proxy"]),
                    rows.iter().flat_map(|row| {
                        row.f
                            .iter()
                            .zip(&row.proxy)
                            .enumerate()
                            .map(|(i, (f, p))| vec![row.n.to_string(), i.to_string(), num(*f), num(*p)])
                            .collect::<Vec<_>>()
                    }),
                )?
                .into_iter()
                .collect();
            finish(cfg, &w, r, started, files)
        }
        Job::PsiUniform { params, cfg: mc } => {
            let data = psi_uniformity_samples(params, mc, cfg.seed())?;
            let r = psi_uniformity_report(params, &data)?;
            let w = cfg.writer(params.n());
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["index", "n_psi_mod_2pi", "x_0"]),
                    data.n_psi
                        .iter()
                        .zip(&data.x0)
                        .enumerate()
                        .map(|(i, (p, x))| vec![i.to_string(), num(*p), num(*x)]),
                )?
                .into_iter()
                .collect();
            finish(cfg, &w, r, started, files)
        }
        Job::Bounds { params, l_max } => {
            let b = check_increment_bounds(params, *l_max, true)?;
            let xi_n = increment_covariance_table(params, params.n())
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.abs()));
            let w = cfg.writer(params.n());
            let files: Vec<PathBuf> = w
                .csv(
                    &header(["l", "d", "covariance", "bound", "ratio"]),
                    b.ratios.iter().map(|r| {
                        vec![r.l.to_string(), r.d.to_string(), num(r.covariance), num(r.bound), num(r.ratio)]
                    }),
                )?
                .into_iter()
                .collect();
            let mut r = ExperimentReport::new("bounds", *params, *l_max);
            r.insert("l_max", *l_max as f64)
                .insert("c_fit", b.c_fit)
                .insert("c_fit_normalized", b.c_fit_normalized)
                .insert("witness_l", b.witness_l as f64)
                .insert("witness_d", b.witness_d as f64)
                .insert("max_variance_ratio", b.max_variance_ratio)
                .insert("variance_ratio_slack", b.c_fit - b.max_variance_ratio)
                .insert("max_abs_xi_n_covariance", xi_n);
            r.check("c_fit", 0.0, 10.0).check("max_abs_xi_n_covariance", 0.0, 0.0);
            finish(cfg, &w, r, started, files)
        }
    }
}
