//! Command-line front end. Every subcommand is a seeded, reproducible run
//! that prints a table (or writes it, with a manifest, under `--out`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::area::{
    area_curve, estimate_area, estimate_design_area, estimate_separability_joint, grid_point, AreaEstimate,
    CurveRow, Design, EstimatorConfig, Method, PartitionScheme,
};
use crate::bounds::{cycle_count_f64, theorem1_area_bound, theorem2_area_bound, BoundParams};
use crate::designs::{choi_design, smp_design, ChoiConfig, ChoiRule, SmpConfig, SmpEvaluation};
use crate::error::{domain, Error, Result};
use crate::graph::{check_garp, TOL_EDGE_FILE};
use crate::io::{load_dataset, write_dataset_csv, write_rows, RunManifest};
use crate::lp::{solve_afriat, AfriatSystem};
use crate::sampling::{sample_simplex, PriceDistribution, RngStream, DEFAULT_TAIL_Q};
use crate::Dataset;

#[derive(Debug, Parser)]
#[command(
    name = "rpdim",
    version,
    about = "Revealed-preference tests and Area simulations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write results and a run manifest into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Location of log inverse prices.
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    /// Dispersion of log inverse prices.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub sigma: f64,
    /// Run presets at full scale instead of a tenth of the draws.
    #[arg(long, global = true)]
    pub full: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a dataset file for GARP and/or Afriat feasibility.
    Check(CheckArgs),
    /// Area at one (K, T) point.
    Area(AreaArgs),
    /// Area over a grid of K.
    Curve(CurveArgs),
    /// Area under weak and additive separability.
    Separability(SeparabilityArgs),
    /// Area of an experimental design.
    Design(DesignArgs),
    /// Closed-form lower bounds on the Area.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMethod {
    Garp,
    Lp,
    Both,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = CheckMethod::Both)]
    pub method: CheckMethod,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    /// Share draws per replication.
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 20)]
    pub replications: usize,
    /// Adaptive stopping half-width; 0 disables early stopping.
    #[arg(long, default_value_t = 0.005)]
    pub halfwidth: f64,
    #[arg(long, default_value_t = 0.95)]
    pub ci_level: f64,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[arg(long = "K", alias = "k")]
    pub k: usize,
    #[arg(long = "T", alias = "t")]
    pub t: usize,
    #[arg(long, value_enum, default_value_t = Method::Garp)]
    pub method: Method,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum CurvePreset {
    Fig3a,
    Fig3b,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub preset: Option<CurvePreset>,
    /// Observation counts.
    #[arg(long = "T", alias = "t", value_delimiter = ',', default_value = "10")]
    pub t: Vec<usize>,
    /// Goods grid as `lo:hi[:step]` or a comma list.
    #[arg(long = "K", alias = "k", default_value = "2:25")]
    pub k: String,
    /// Extra dispersions to sweep instead of `--sigma`.
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Vec<f64>,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SeparabilityPreset {
    Fig4,
}

#[derive(Debug, Args)]
pub struct SeparabilityArgs {
    #[arg(long, value_enum)]
    pub preset: Option<SeparabilityPreset>,
    #[arg(long = "K", alias = "k", default_value_t = 24)]
    pub k: usize,
    #[arg(long = "T", alias = "t", default_value_t = 10)]
    pub t: usize,
    /// Group sizes; each must divide K.
    #[arg(long = "G", alias = "g", value_delimiter = ',', default_value = "8")]
    pub g: Vec<usize>,
    /// Random equal partitions per price replication.
    #[arg(long, default_value_t = 100)]
    pub partitions: usize,
    /// Also solve the additive system.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub additive: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Choi,
    Smp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum DesignPreset {
    Fig5a,
    Fig5b,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(value_enum)]
    pub design: Option<DesignKind>,
    #[arg(long, value_enum)]
    pub preset: Option<DesignPreset>,
    #[arg(long = "K", alias = "k", default_value = "10")]
    pub k: String,
    #[arg(long = "T", alias = "t", default_value_t = 20)]
    pub t: usize,
    /// Lower end of the Choi intercept range.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Upper end of the Choi intercept range.
    #[arg(long, default_value_t = 100.0)]
    pub b: f64,
    /// Rejection rules to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub choi_rule: Vec<ChoiRule>,
    #[arg(long, value_enum, default_value_t = SmpEvaluation::FreshShares)]
    pub smp_evaluation: SmpEvaluation,
    /// Benchmark dispersions estimated alongside the design.
    #[arg(long, value_delimiter = ',')]
    pub benchmark: Vec<f64>,
    /// Also write this many generated datasets (needs `--out`).
    #[arg(long, default_value_t = 0)]
    pub emit_datasets: usize,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long = "T", alias = "t")]
    pub t: usize,
    #[arg(long = "K", alias = "k", default_value = "100")]
    pub k: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
}

/// Parses `lo:hi[:step]` or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    let bad = || domain(format!("bad grid `{spec}`: use lo:hi[:step] or a,b,c"));
    let grid: Vec<usize> = if spec.contains(':') {
        let parts: Vec<usize> = spec
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [lo, hi] if lo <= hi => (lo..=hi).collect(),
            [lo, hi, step] if lo <= hi && step > 0 => (lo..=hi).step_by(step).collect(),
            _ => return Err(bad()),
        }
    } else {
        spec.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if grid.is_empty() {
        return Err(bad());
    }
    Ok(grid)
}

impl McArgs {
    fn config(&self, g: &Global) -> EstimatorConfig {
        EstimatorConfig {
            max_draws: self.draws,
            replications: self.replications,
            ci_level: self.ci_level,
            target_halfwidth: (self.halfwidth > 0.0).then_some(self.halfwidth),
            seed: g.seed,
            grid_point: 0,
            method: Method::Garp,
            threads: g.threads,
        }
    }

    /// Preset scale: a tenth of the draws unless `full`.
    fn preset(draws_full: usize, replications: usize, full: bool) -> Self {
        McArgs {
            draws: if full { draws_full } else { draws_full / 10 },
            replications,
            halfwidth: 0.005,
            ci_level: 0.95,
        }
    }
}

/// A finished table plus the configuration that produced it.
struct Output {
    name: &'static str,
    config: serde_json::Value,
    body: Vec<u8>,
    extra: Vec<(PathBuf, Vec<u8>)>,
}

fn table<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_rows(rows, &mut buf)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, rows)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

fn distribution(g: &Global, sigma: f64) -> Result<PriceDistribution> {
    PriceDistribution::lognormal(g.mu, sigma)
}

fn cmd_area(g: &Global, args: &AreaArgs) -> Result<Output> {
    let cfg = EstimatorConfig {
        method: args.method,
        grid_point: grid_point(args.t, args.k),
        ..args.mc.config(g)
    };
    let est = estimate_area(args.k, args.t, &distribution(g, g.sigma)?, &cfg)?;
    let row = CurveRow::new(args.k, args.t, g.sigma, g.seed, &est);
    Ok(Output {
        name: "area",
        config: json!({ "K": args.k, "T": args.t, "mu": g.mu, "sigma": g.sigma, "estimator": cfg }),
        body: table(&[row], g.format)?,
        extra: Vec::new(),
    })
}

fn cmd_curve(g: &Global, args: &CurveArgs) -> Result<Output> {
    let (ts, ks, sigmas, mc) = match args.preset {
        Some(CurvePreset::Fig3a) => (
            vec![10, 20, 30, 40, 50],
            (2..=25).collect(),
            vec![1.0],
            McArgs::preset(50_000, 100, g.full),
        ),
        Some(CurvePreset::Fig3b) => (
            vec![25],
            (2..=100).collect(),
            vec![0.3, 0.5, 0.7, 0.9, 1.0, 1.1],
            McArgs::preset(50_000, 100, g.full),
        ),
        None => (
            args.t.clone(),
            parse_grid(&args.k)?,
            if args.sigmas.is_empty() {
                vec![g.sigma]
            } else {
                args.sigmas.clone()
            },
            args.mc.clone(),
        ),
    };
    let cfg = mc.config(g);
    let mut rows = Vec::new();
    for &sigma in &sigmas {
        let dist = distribution(g, sigma)?;
        for &t in &ts {
            for (k, est) in area_curve(&ks, t, &dist, &cfg)? {
                rows.push(CurveRow::new(k, t, sigma, g.seed, &est));
            }
        }
    }
    Ok(Output {
        name: "curve",
        config: json!({ "preset": args.preset, "T": ts, "K": ks, "mu": g.mu, "sigmas": sigmas, "estimator": cfg }),
        body: table(&rows, g.format)?,
        extra: Vec::new(),
    })
}

#[derive(Debug, Serialize)]
struct SeparabilityRow {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "G")]
    g: usize,
    sigma: f64,
    mode: &'static str,
    mean: f64,
    ci_lo: f64,
    ci_hi: f64,
    draws: usize,
    replications: usize,
    seed: u64,
}

fn cmd_separability(g: &Global, args: &SeparabilityArgs) -> Result<Output> {
    let (k, t, sizes, partitions, additive, mc) = match args.preset {
        Some(SeparabilityPreset::Fig4) => (
            24,
            10,
            vec![1, 2, 3, 4, 6, 8, 12, 24],
            100,
            true,
            McArgs::preset(10_000, 10, g.full),
        ),
        None => (
            args.k,
            args.t,
            args.g.clone(),
            args.partitions,
            args.additive,
            args.mc.clone(),
        ),
    };
    let cfg = EstimatorConfig {
        grid_point: grid_point(t, k),
        ..mc.config(g)
    };
    let dist = distribution(g, g.sigma)?;
    let mut rows = Vec::new();
    for &size in &sizes {
        let scheme = PartitionScheme::RandomEqual {
            size,
            per_replication: partitions,
        };
        let est = estimate_separability_joint(k, t, &dist, &scheme, additive, &cfg)?;
        let mut push = |e: &AreaEstimate| {
            rows.push(SeparabilityRow {
                k,
                t,
                g: size,
                sigma: g.sigma,
                mode: e.mode.as_str(),
                mean: e.mean,
                ci_lo: e.ci_lo,
                ci_hi: e.ci_hi,
                draws: e.draws(),
                replications: e.replications(),
                seed: g.seed,
            })
        };
        push(&est.unrestricted);
        push(&est.weak);
        if let Some(a) = &est.additive {
            push(a);
        }
    }
    Ok(Output {
        name: "separability",
        config: json!({
            "preset": args.preset, "K": k, "T": t, "G": sizes, "partitions_per_replication": partitions,
            "additive": additive, "mu": g.mu, "sigma": g.sigma, "estimator": cfg
        }),
        body: table(&rows, g.format)?,
        extra: Vec::new(),
    })
}

#[derive(Debug, Serialize)]
struct DesignRow {
    design: &'static str,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "T")]
    t: usize,
    sigma: Option<f64>,
    mode: &'static str,
    mean: f64,
    ci_lo: f64,
    ci_hi: f64,
    draws: usize,
    replications: usize,
    seed: u64,
}

impl DesignRow {
    fn new(
        design: &'static str,
        k: usize,
        t: usize,
        sigma: Option<f64>,
        seed: u64,
        e: &AreaEstimate,
    ) -> Self {
        DesignRow {
            design,
            k,
            t,
            sigma,
            mode: e.mode.as_str(),
            mean: e.mean,
            ci_lo: e.ci_lo,
            ci_hi: e.ci_hi,
            draws: e.draws(),
            replications: e.replications(),
            seed,
        }
    }
}

fn cmd_design(g: &Global, args: &DesignArgs) -> Result<Output> {
    let (kind, ks, t, benchmarks, mc) = match (args.preset, args.design) {
        (Some(DesignPreset::Fig5a), _) => (
            DesignKind::Choi,
            (2..=40).collect(),
            25,
            vec![0.3, 0.5, 0.7, 0.9, 1.0, 1.1],
            McArgs::preset(50_000, 100, g.full),
        ),
        (Some(DesignPreset::Fig5b), _) => (
            DesignKind::Smp,
            (2..=25).collect(),
            20,
            vec![1.0],
            McArgs::preset(50_000, 100, g.full),
        ),
        (None, Some(kind)) => (
            kind,
            parse_grid(&args.k)?,
            args.t,
            args.benchmark.clone(),
            args.mc.clone(),
        ),
        (None, None) => return Err(domain("name a design (choi or smp) or a preset")),
    };
    if args.emit_datasets > 0 && g.out.is_none() {
        return Err(domain("--emit-datasets needs --out"));
    }
    let rules = match args.preset {
        Some(DesignPreset::Fig5a) => vec![ChoiRule::All, ChoiRule::Any],
        _ => args.choi_rule.clone(),
    };
    let base = mc.config(g);
    let mut rows = Vec::new();
    let mut extra = Vec::new();
    for &k in &ks {
        let cfg = EstimatorConfig {
            grid_point: grid_point(t, k),
            ..base.clone()
        };
        let designs: Vec<(Design, &'static str, Option<f64>)> = match kind {
            DesignKind::Choi => rules
                .iter()
                .map(|&rule| {
                    let name = match rule {
                        ChoiRule::All => "choi-all",
                        ChoiRule::Any => "choi-any",
                    };
                    Ok((
                        Design::Choi(ChoiConfig::new(k, t, args.a, args.b, rule)?),
                        name,
                        None,
                    ))
                })
                .collect::<Result<_>>()?,
            DesignKind::Smp => vec![(
                Design::Smp(
                    SmpConfig::new(k, t, distribution(g, g.sigma)?)?.with_evaluation(args.smp_evaluation),
                ),
                "smp",
                Some(g.sigma),
            )],
        };
        for (design, name, sigma) in &designs {
            let est = match estimate_design_area(design, &cfg) {
                // the any rule accepts with probability about 2^-K
                Err(Error::RejectionCap(n)) if rules.len() > 1 => {
                    log::warn!("{name} at K = {k}: no design after {n} attempts, row skipped");
                    continue;
                }
                other => other?,
            };
            rows.push(DesignRow::new(name, k, t, *sigma, g.seed, &est));
            for n in 0..args.emit_datasets {
                let ds =
                    generated_dataset(design, RngStream::new(g.seed, grid_point(t, k) << 20 | n as u64))?;
                let mut buf = Vec::new();
                write_dataset_csv(&ds, &mut buf)?;
                extra.push((
                    PathBuf::from(format!("dataset_{name}_K{k}_T{t}_{:03}.csv", n + 1)),
                    buf,
                ));
            }
        }
        for &s in &benchmarks {
            let e = estimate_area(k, t, &distribution(g, s)?, &cfg)?;
            rows.push(DesignRow::new("logn", k, t, Some(s), g.seed, &e));
        }
    }
    Ok(Output {
        name: "design",
        config: json!({
            "preset": args.preset, "design": kind, "K": ks, "T": t, "a": args.a, "b": args.b,
            "choi_rules": rules, "smp_evaluation": args.smp_evaluation, "mu": g.mu,
            "sigma": g.sigma, "benchmarks": benchmarks, "estimator": base
        }),
        body: table(&rows, g.format)?,
        extra,
    })
}

/// One audit dataset: Choi budgets with one uniform share draw, or one SMP path.
fn generated_dataset(design: &Design, stream: RngStream) -> Result<Dataset> {
    let mut rng = stream.rng();
    match design {
        Design::Choi(c) => {
            let prices = choi_design(c, &mut rng)?;
            let shares: Vec<Vec<f64>> = (0..c.t).map(|_| sample_simplex(c.k, &mut rng)).collect();
            Dataset::from_rows(&prices, &shares)
        }
        Design::Smp(c) => smp_design(c, &mut rng),
    }
}

#[derive(Debug, Serialize)]
struct BoundsRow {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "T")]
    t: usize,
    theorem1: Option<f64>,
    theorem2: Option<f64>,
    #[serde(rename = "C_T")]
    c_t: f64,
    c1: Option<f64>,
    c2: Option<f64>,
    theorem1_raw: Option<f64>,
    theorem2_raw: Option<f64>,
}

fn cmd_bounds(g: &Global, args: &BoundsArgs) -> Result<Output> {
    let mut rows = Vec::new();
    let c_t = cycle_count_f64(args.t)?;
    for k in parse_grid(&args.k)? {
        let mut p = BoundParams::new(k, args.t, args.a, args.b)?;
        if let Some(eps) = args.eps {
            p = p.with_eps(eps)?;
        }
        if let Some(eta) = args.eta {
            p = p.with_eta(eta)?;
        }
        let t1 = args.eps.map(|_| theorem1_area_bound(&p)).transpose()?;
        let t2 = args.eta.map(|_| theorem2_area_bound(&p)).transpose()?;
        rows.push(BoundsRow {
            k,
            t: args.t,
            theorem1: t1.map(|b| b.value),
            theorem2: t2.map(|b| b.value),
            c_t,
            c1: args.eps.map(|_| p.c1()).transpose()?,
            c2: args.eta.map(|_| p.c2()).transpose()?,
            theorem1_raw: t1.map(|b| b.raw),
            theorem2_raw: t2.map(|b| b.raw),
        });
    }
    Ok(Output {
        name: "bounds",
        config: serde_json::to_value(args)?,
        body: table(&rows, g.format)?,
        extra: Vec::new(),
    })
}

/// Verdict report of `check`; witnesses are 1-based.
#[derive(Debug, Serialize)]
struct CheckReport {
    file: PathBuf,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "K")]
    k: usize,
    consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    garp: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lp: Option<serde_json::Value>,
}

fn cmd_check(args: &CheckArgs) -> Result<(CheckReport, bool)> {
    let ds = load_dataset(&args.file)?;
    let mut consistent = true;
    let garp = matches!(args.method, CheckMethod::Garp | CheckMethod::Both).then(|| {
        let v = check_garp(&ds, TOL_EDGE_FILE);
        consistent &= v.satisfied;
        json!({
            "satisfied": v.satisfied,
            "witness": v.witness.map(|c| c.into_iter().map(|i| i + 1).collect::<Vec<_>>()),
        })
    });
    let lp = match args.method {
        CheckMethod::Lp | CheckMethod::Both => {
            let w = solve_afriat(&AfriatSystem::from_dataset(&ds))?;
            consistent &= w.feasible;
            Some(serde_json::to_value(&w)?)
        }
        CheckMethod::Garp => None,
    };
    Ok((
        CheckReport {
            file: args.file.clone(),
            t: ds.t(),
            k: ds.k(),
            consistent,
            garp,
            lp,
        },
        consistent,
    ))
}

fn emit(g: &Global, command_line: &[String], out: Output, stdout: &mut dyn Write) -> Result<()> {
    match &g.out {
        None => stdout.write_all(&out.body)?,
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let ext = match g.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let main = PathBuf::from(format!("{}.{ext}", out.name));
            let mut outputs = vec![main.clone()];
            outputs.extend(out.extra.iter().map(|(p, _)| p.clone()));
            let config = json!({
                "global": g,
                "command": out.config,
                "price_tail_q": DEFAULT_TAIL_Q,
                "stopping_rule": "stop a replication once the Wilson half-width, checked every 100 draws, reaches the target",
                "interval": "normal interval across replications; Wilson interval for a single replication",
            });
            RunManifest::new(command_line.to_vec(), config, g.seed, outputs)
                .write(&dir.join("manifest.json"))?;
            write_file(dir, &main, &out.body)?;
            for (path, body) in &out.extra {
                write_file(dir, path, body)?;
            }
        }
    }
    Ok(())
}

fn write_file(dir: &Path, name: &Path, body: &[u8]) -> Result<()> {
    fs::write(dir.join(name), body)?;
    Ok(())
}

/// Runs a parsed command, writing tables to `stdout`. Exit code 0 on
/// success, 1 when `check` finds a violation, 2 on input errors.
pub fn run(cli: &Cli, command_line: &[String], stdout: &mut dyn Write) -> ExitCode {
    match dispatch(cli, command_line, stdout) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let hint = match &e {
                Error::Parse { .. } | Error::InvalidDataset(_) => {
                    " (expected columns obs,good,r,w or JSON {\"T\",\"K\",\"r\",\"w\"})"
                }
                _ => "",
            };
            eprintln!("error: {e}{hint}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli, command_line: &[String], stdout: &mut dyn Write) -> Result<bool> {
    let g = &cli.global;
    let out = match &cli.command {
        Command::Check(args) => {
            let (report, ok) = cmd_check(args)?;
            let mut body = serde_json::to_vec_pretty(&report)?;
            body.push(b'\n');
            emit(
                &Global {
                    format: Format::Json,
                    ..g.clone()
                },
                command_line,
                Output {
                    name: "check",
                    config: json!({ "file": args.file, "method": args.method }),
                    body,
                    extra: Vec::new(),
                },
                stdout,
            )?;
            return Ok(ok);
        }
        Command::Area(a) => cmd_area(g, a)?,
        Command::Curve(a) => cmd_curve(g, a)?,
        Command::Separability(a) => cmd_separability(g, a)?,
        Command::Design(a) => cmd_design(g, a)?,
        Command::Bounds(a) => cmd_bounds(g, a)?,
    };
    emit(g, command_line, out, stdout)?;
    Ok(true)
}
