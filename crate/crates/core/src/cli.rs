//! `swn` command line front end.
//!
//! Parameters are resolved in three layers: built-in defaults, then the JSON
//! file given by `--config`, then explicit flags. The seed falls back to the
//! `SWN_SEED` environment variable when neither the flags nor the config set
//! it. The fully resolved configuration is echoed at the top of every output,
//! and feeding that echo back through `--config` reproduces the output.
//!
//! Exit status: 0 success, 1 i/o failure, 2 usage error, 3 domain error,
//! 4 numerical failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::density::{density_params, sample_nonzero};
use crate::ensembles::{draw_instance, DictionaryKind};
use crate::error::{Error, Result};
use crate::experiments::{
    converse_energy_experiment, cs_mse_experiment, cs_region, noisy_region_curve, qq_experiment,
    sweep_min_sparsity, threshold_curve, Harness,
};
use crate::output::{fmt_f64, write_csv_metadata, write_json, Metadata, Table};
use crate::rng::stream;
use crate::solvers::{irls_min_l0, IrlsParams};
use crate::theory::{alpha_star, kappa_star, min_energy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "swn", version, about = "Sparse representations of white Gaussian noise")]
struct Cli {
    /// JSON configuration file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// 64-bit seed (falls back to SWN_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for Monte Carlo trials (default: all cores). Does not affect results.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Threshold point for --alpha, --kappa, or the energy law for both.
    Threshold(Params),
    /// Marginal density on a grid.
    Pdf(Params),
    /// Draws from the marginal density.
    Sample(Params),
    /// One IRLS run on a fresh instance.
    Sparsest(Params),
    /// IRLS sparsity sweep over n with quadratic extrapolation.
    Extrapolate(Params),
    /// QQ validation of synthesised noise.
    Qq(Params),
    /// Exhaustive-search minimal energy against the converse law.
    EnergyScan(Params),
    /// Noisy compressed-sensing decodable region.
    CsRegion(Params),
    /// Least-squares MSE on an oracle support.
    CsMse(Params),
    /// Threshold curve over an alpha grid.
    Curve(Params),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Threshold(_) => "threshold",
            Command::Pdf(_) => "pdf",
            Command::Sample(_) => "sample",
            Command::Sparsest(_) => "sparsest",
            Command::Extrapolate(_) => "extrapolate",
            Command::Qq(_) => "qq",
            Command::EnergyScan(_) => "energy-scan",
            Command::CsRegion(_) => "cs-region",
            Command::CsMse(_) => "cs-mse",
            Command::Curve(_) => "curve",
        }
    }

    fn params(&self) -> &Params {
        match self {
            Command::Threshold(p)
            | Command::Pdf(p)
            | Command::Sample(p)
            | Command::Sparsest(p)
            | Command::Extrapolate(p)
            | Command::Qq(p)
            | Command::EnergyScan(p)
            | Command::CsRegion(p)
            | Command::CsMse(p)
            | Command::Curve(p) => p,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
struct Params {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    kappa_x: Option<f64>,
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated atom counts.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Number of samples (sample).
    #[arg(long)]
    count: Option<usize>,
    /// `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    /// Weight the extrapolation fit by inverse variances.
    #[arg(long)]
    weighted: bool,
    /// Also write the drawn instance as CSV (sparsest).
    #[arg(long)]
    dump_instance: Option<String>,
    /// Comma-separated IRLS exponents.
    #[arg(long, value_delimiter = ',')]
    p_schedule: Option<Vec<f64>>,
    #[arg(long)]
    epsilon_init: Option<f64>,
    #[arg(long)]
    epsilon_decay: Option<f64>,
    #[arg(long)]
    epsilon_min: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    convergence_tol: Option<f64>,
    #[arg(long)]
    zero_tol: Option<f64>,
}

/// IRLS settings that may be overridden from the config or flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IrlsOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_schedule: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_init: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_decay: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_tol: Option<f64>,
}

impl IrlsOverrides {
    fn merge(&mut self, other: &IrlsOverrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(p_schedule, epsilon_init, epsilon_decay, epsilon_min, max_iters, convergence_tol, zero_tol);
    }

    pub fn apply(&self, base: IrlsParams) -> IrlsParams {
        IrlsParams {
            p_schedule: self.p_schedule.clone().unwrap_or(base.p_schedule),
            epsilon_init: self.epsilon_init.unwrap_or(base.epsilon_init),
            epsilon_decay: self.epsilon_decay.unwrap_or(base.epsilon_decay),
            epsilon_min: self.epsilon_min.unwrap_or(base.epsilon_min),
            max_iters: self.max_iters.unwrap_or(base.max_iters),
            convergence_tol: self.convergence_tol.unwrap_or(base.convergence_tol),
            zero_tol: self.zero_tol.unwrap_or(base.zero_tol),
            max_condition: base.max_condition,
        }
    }

    fn full(p: &IrlsParams) -> Self {
        IrlsOverrides {
            p_schedule: Some(p.p_schedule.clone()),
            epsilon_init: Some(p.epsilon_init),
            epsilon_decay: Some(p.epsilon_decay),
            epsilon_min: Some(p.epsilon_min),
            max_iters: Some(p.max_iters),
            convergence_tol: Some(p.convergence_tol),
            zero_tol: Some(p.zero_tol),
        }
    }
}

/// Parameters of one run. Fields irrelevant to the command stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<DictionaryKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irls: Option<IrlsOverrides>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_instance: Option<String>,
}

impl RunConfig {
    fn merge(&mut self, other: RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(command, alpha, kappa, kappa_x, snr, n, n_list, trials, count, grid, kind, weighted, seed, out, format, dump_instance);
        if let Some(o) = other.irls {
            self.irls.get_or_insert_with(Default::default).merge(&o);
        }
    }

    fn from_flags(cli: &Cli) -> Result<Self> {
        let p = cli.command.params();
        let irls = IrlsOverrides {
            p_schedule: p.p_schedule.clone(),
            epsilon_init: p.epsilon_init,
            epsilon_decay: p.epsilon_decay,
            epsilon_min: p.epsilon_min,
            max_iters: p.max_iters,
            convergence_tol: p.convergence_tol,
            zero_tol: p.zero_tol,
        };
        Ok(RunConfig {
            command: Some(cli.command.name().to_string()),
            alpha: p.alpha,
            kappa: p.kappa,
            kappa_x: p.kappa_x,
            snr: p.snr,
            n: p.n,
            n_list: p.n_list.clone(),
            trials: p.trials,
            count: p.count,
            grid: p.grid.clone(),
            kind: p.kind.as_deref().map(str::parse).transpose()?,
            weighted: p.weighted.then_some(true),
            seed: cli.seed,
            irls: (irls != IrlsOverrides::default()).then_some(irls),
            out: cli.out.as_ref().map(|p| p.display().to_string()),
            format: cli.format,
            dump_instance: p.dump_instance.clone(),
        })
    }

    fn require<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
        v.clone().ok_or_else(|| Error::Parse(format!("missing required parameter --{}", name.replace('_', "-"))))
    }
}

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("grid `{spec}` is not start:stop:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 50_000_000 {
        return Err(Error::Parse(format!("grid `{spec}` has too many points")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        Error::Domain(_) | Error::Dimension { .. } | Error::Budget(_) => EXIT_DOMAIN,
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
    }
}

/// Runs the CLI with process stdout / stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams; returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "swn: {e}");
            exit_code(&e)
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.merge(load_config(path)?);
    }
    let flags = RunConfig::from_flags(cli)?;
    if let (Some(a), Some(b)) = (&cfg.command, &flags.command) {
        if a != b {
            return Err(Error::Parse(format!("config is for `{a}`, not `{b}`")));
        }
    }
    cfg.merge(flags);
    if cfg.seed.is_none() {
        if let Ok(s) = std::env::var("SWN_SEED") {
            cfg.seed = Some(s.trim().parse().map_err(|_| Error::Parse(format!("SWN_SEED `{s}` is not a u64")))?);
        }
    }
    let harness = Harness::new(cli.jobs);
    let name = cli.command.name();
    let sink = Sink::new(&cfg, stdout);
    match name {
        "threshold" => cmd_threshold(cfg, sink),
        "pdf" => cmd_pdf(cfg, sink),
        "sample" => cmd_sample(cfg, sink),
        "sparsest" => cmd_sparsest(cfg, sink),
        "extrapolate" => cmd_extrapolate(cfg, sink, &harness),
        "qq" => cmd_qq(cfg, sink, &harness),
        "energy-scan" => cmd_energy_scan(cfg, sink, &harness),
        "cs-region" => cmd_cs_region(cfg, sink),
        "cs-mse" => cmd_cs_mse(cfg, sink, &harness),
        "curve" => cmd_curve(cfg, sink),
        _ => unreachable!("every subcommand is dispatched"),
    }
}

/// Destination of a command's primary output.
struct Sink<'a> {
    out: Option<PathBuf>,
    format: Option<Format>,
    stdout: &'a mut dyn Write,
}

impl<'a> Sink<'a> {
    fn new(cfg: &RunConfig, stdout: &'a mut dyn Write) -> Self {
        Sink {
            out: cfg.out.as_ref().map(PathBuf::from),
            format: cfg.format,
            stdout,
        }
    }

    /// Explicit format, else the output extension, else `default`.
    fn format(&self, default: Format) -> Format {
        self.format
            .or_else(|| {
                match self.out.as_ref()?.extension()?.to_str()? {
                    "csv" => Some(Format::Csv),
                    "json" => Some(Format::Json),
                    _ => None,
                }
            })
            .unwrap_or(default)
    }

    fn with_writer(&mut self, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                f(&mut w)?;
                w.flush()?;
                Ok(())
            }
            None => f(self.stdout),
        }
    }

    fn emit<T: Serialize>(&mut self, meta: &Metadata, body: &T, table: Option<&Table>, default: Format) -> Result<()> {
        match (self.format(default), table) {
            (Format::Csv, Some(t)) => self.with_writer(|w| t.write_csv(w, Some(meta))),
            (Format::Csv, None) => {
                let t = flat_table(&serde_json::to_value(body)?);
                self.with_writer(|w| t.write_csv(w, Some(meta)))
            }
            (Format::Json, _) => self.with_writer(|w| write_json(w, meta, body)),
        }
    }
}

/// One-row table from the numeric and boolean leaves of a JSON object.
fn flat_table(v: &serde_json::Value) -> Table {
    fn walk(prefix: &str, v: &serde_json::Value, cols: &mut Vec<String>, vals: &mut Vec<f64>) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, cols, vals);
                }
            }
            serde_json::Value::Number(n) => {
                cols.push(prefix.to_string());
                vals.push(n.as_f64().unwrap_or(f64::NAN));
            }
            serde_json::Value::Bool(b) => {
                cols.push(prefix.to_string());
                vals.push(if *b { 1.0 } else { 0.0 });
            }
            _ => {}
        }
    }
    let (mut cols, mut vals) = (Vec::new(), Vec::new());
    walk("", v, &mut cols, &mut vals);
    let mut t = Table::new(cols);
    t.push(vals);
    t
}

fn meta(cfg: &RunConfig) -> Result<Metadata> {
    Ok(Metadata::new(
        cfg.command.as_deref().unwrap_or(""),
        cfg.seed,
        serde_json::to_value(cfg)?,
    ))
}

fn seed_of(cfg: &mut RunConfig) -> u64 {
    *cfg.seed.get_or_insert(0)
}

#[derive(Serialize)]
struct AlphaThreshold {
    alpha: f64,
    xi: f64,
    kappa_star: f64,
}

#[derive(Serialize)]
struct KappaThreshold {
    kappa: f64,
    xi: f64,
    alpha_star: f64,
}

fn cmd_threshold(cfg: RunConfig, mut sink: Sink) -> Result<()> {
    let m = meta(&cfg)?;
    match (cfg.alpha, cfg.kappa) {
        (Some(a), None) => {
            let p = kappa_star(a)?;
            let body = AlphaThreshold { alpha: a, xi: p.xi, kappa_star: p.kappa_star };
            sink.emit(&m, &body, None, Format::Json)
        }
        (None, Some(k)) => {
            let p = alpha_star(k)?;
            let body = KappaThreshold { kappa: k, xi: p.xi, alpha_star: p.alpha_star };
            sink.emit(&m, &body, None, Format::Json)
        }
        (Some(a), Some(k)) => sink.emit(&m, &min_energy(a, k)?, None, Format::Json),
        (None, None) => Err(Error::Parse("threshold needs --alpha and/or --kappa".into())),
    }
}

fn cmd_pdf(mut cfg: RunConfig, mut sink: Sink) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let kappa = RunConfig::require(&cfg.kappa, "kappa")?;
    let params = density_params(kappa, alpha)?;
    let grid_spec = cfg.grid.get_or_insert_with(|| "-10:10:0.01".to_string()).clone();
    let grid = parse_grid(&grid_spec)?;
    let mut t = Table::new(["zeta", "p"]);
    for z in grid {
        t.push(vec![z, params.pdf(z)]);
    }
    let m = meta(&cfg)?;
    sink.emit(&m, &params, Some(&t), Format::Csv)
}

fn cmd_sample(mut cfg: RunConfig, mut sink: Sink) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let kappa = RunConfig::require(&cfg.kappa, "kappa")?;
    let count = *cfg.count.get_or_insert(10_000);
    let seed = seed_of(&mut cfg);
    let params = density_params(kappa, alpha)?;
    let mut rng = stream(seed, "sample", &[]);
    let mut t = Table::new(["zeta"]);
    for _ in 0..count {
        t.push(vec![sample_nonzero(&params, &mut rng)]);
    }
    let m = meta(&cfg)?;
    sink.emit(&m, &t.column("zeta"), Some(&t), Format::Csv)
}

fn irls_params(cfg: &mut RunConfig) -> Result<IrlsParams> {
    let p = cfg.irls.clone().unwrap_or_default().apply(IrlsParams::default());
    p.validate()?;
    cfg.irls = Some(IrlsOverrides::full(&p));
    Ok(p)
}

#[derive(Serialize)]
struct SparsestReport<'a> {
    n: usize,
    m: usize,
    alpha: f64,
    kind: DictionaryKind,
    kappa_theory: f64,
    #[serde(flatten)]
    solution: &'a crate::solvers::SparseSolution,
}

fn cmd_sparsest(mut cfg: RunConfig, mut sink: Sink) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let n = *cfg.n.get_or_insert(100);
    let kind = *cfg.kind.get_or_insert(DictionaryKind::Gaussian);
    let seed = seed_of(&mut cfg);
    let params = irls_params(&mut cfg)?;
    let inst = draw_instance(n, alpha, kind, seed)?;
    let sol = irls_min_l0(&inst, &params)?;
    let report = SparsestReport {
        n,
        m: inst.m,
        alpha,
        kind,
        kappa_theory: kappa_star(alpha)?.kappa_star,
        solution: &sol,
    };
    let m = meta(&cfg)?;
    if let Some(path) = &cfg.dump_instance {
        let mut w = BufWriter::new(File::create(path)?);
        inst.write_csv(&mut w)?;
        w.flush()?;
    }
    let mut t = Table::new(["index", "value"]);
    for (i, v) in sol.z.iter().enumerate() {
        t.push(vec![i as f64, *v]);
    }
    match (sink.format(Format::Json), sink.out.clone()) {
        (Format::Csv, Some(path)) => {
            // solution values, plus a JSON sidecar with the diagnostics
            let mut w = BufWriter::new(File::create(&path)?);
            write_csv_metadata(&mut w, &m)?;
            writeln!(w, "index,value")?;
            for (i, v) in sol.z.iter().enumerate() {
                writeln!(w, "{i},{}", fmt_f64(*v))?;
            }
            w.flush()?;
            let sidecar = path.with_extension("json");
            write_json(BufWriter::new(File::create(sidecar)?), &m, &report)
        }
        (Format::Csv, None) => sink.emit(&m, &report, Some(&t), Format::Csv),
        (Format::Json, _) => {
            #[derive(Serialize)]
            struct Full<'a> {
                #[serde(flatten)]
                report: SparsestReport<'a>,
                z: Vec<f64>,
            }
            let body = Full { z: sol.z.iter().copied().collect(), report };
            sink.emit(&m, &body, None, Format::Json)
        }
    }
}

fn cmd_extrapolate(mut cfg: RunConfig, mut sink: Sink, harness: &Harness) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let n_list = cfg.n_list.get_or_insert_with(|| vec![40, 60, 80, 120, 160, 200]).clone();
    let trials = *cfg.trials.get_or_insert(50);
    let weighted = *cfg.weighted.get_or_insert(false);
    let seed = seed_of(&mut cfg);
    let params = irls_params(&mut cfg)?;
    let report = sweep_min_sparsity(alpha, &n_list, trials, &params, seed, weighted, harness)?;
    let mut t = Table::new(["n", "inv_n", "mean_sparsity", "std_err", "trials_used", "failed", "fit", "kappa_theory"]);
    for p in &report.points {
        let x = 1.0 / p.n as f64;
        t.push(vec![
            p.n as f64,
            x,
            p.sparsity.mean,
            p.sparsity.std_err,
            p.sparsity.count as f64,
            p.failed_trials as f64,
            report.fit.eval(x),
            report.kappa_theory,
        ]);
    }
    t.push(vec![f64::INFINITY, 0.0, report.kappa_extrapolated, f64::NAN, 0.0, 0.0, report.kappa_extrapolated, report.kappa_theory]);
    let m = meta(&cfg)?;
    sink.emit(&m, &report, Some(&t), Format::Json)
}

fn cmd_qq(mut cfg: RunConfig, mut sink: Sink, harness: &Harness) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let kappa = RunConfig::require(&cfg.kappa, "kappa")?;
    let n = *cfg.n.get_or_insert(500);
    let trials = *cfg.trials.get_or_insert(10_000);
    let seed = seed_of(&mut cfg);
    let report = qq_experiment(alpha, kappa, n, trials, seed, harness)?;
    let m = meta(&cfg)?;
    #[derive(Serialize)]
    struct Full<'a> {
        #[serde(flatten)]
        report: &'a crate::experiments::QqReport,
        quantile_columns: &'a [String],
        quantile_rows: &'a [Vec<f64>],
    }
    let body = Full {
        report: &report,
        quantile_columns: &report.quantiles.columns,
        quantile_rows: &report.quantiles.rows,
    };
    sink.emit(&m, &body, Some(&report.quantiles), Format::Json)
}

fn cmd_energy_scan(mut cfg: RunConfig, mut sink: Sink, harness: &Harness) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let kappa = RunConfig::require(&cfg.kappa, "kappa")?;
    let n_list = cfg.n_list.get_or_insert_with(|| vec![8, 12, 16]).clone();
    let trials = *cfg.trials.get_or_insert(500);
    let seed = seed_of(&mut cfg);
    let report = converse_energy_experiment(alpha, kappa, &n_list, trials, seed, harness)?;
    let mut t = Table::new(["n", "m", "k", "mean_energy", "std_err", "theory"]);
    for r in &report.rows {
        t.push(vec![r.n as f64, r.m as f64, r.k as f64, r.energy.mean, r.energy.std_err, r.theory]);
    }
    let m = meta(&cfg)?;
    sink.emit(&m, &report, Some(&t), Format::Csv)
}

fn cmd_cs_region(cfg: RunConfig, mut sink: Sink) -> Result<()> {
    let m = meta(&cfg)?;
    if let Some(grid) = &cfg.grid {
        let t = noisy_region_curve(&parse_grid(grid)?)?;
        return sink.emit(&m, &t.rows, Some(&t), Format::Csv);
    }
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let kappa_x = RunConfig::require(&cfg.kappa_x, "kappa_x")?;
    sink.emit(&m, &cs_region(alpha, kappa_x)?, None, Format::Json)
}

fn cmd_cs_mse(mut cfg: RunConfig, mut sink: Sink, harness: &Harness) -> Result<()> {
    let alpha = RunConfig::require(&cfg.alpha, "alpha")?;
    let kappa_x = RunConfig::require(&cfg.kappa_x, "kappa_x")?;
    let snr = *cfg.snr.get_or_insert(10.0);
    let n = *cfg.n.get_or_insert(400);
    let trials = *cfg.trials.get_or_insert(200);
    let seed = seed_of(&mut cfg);
    let report = cs_mse_experiment(alpha, kappa_x, snr, n, trials, seed, harness)?;
    let m = meta(&cfg)?;
    sink.emit(&m, &report, None, Format::Json)
}

fn cmd_curve(mut cfg: RunConfig, mut sink: Sink) -> Result<()> {
    let grid = cfg.grid.get_or_insert_with(|| "0.01:1:0.01".to_string()).clone();
    let t = threshold_curve(&parse_grid(&grid)?)?;
    let m = meta(&cfg)?;
    sink.emit(&m, &t.rows, Some(&t), Format::Csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("swn").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-10:10:0.01").unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -10.0);
        assert!((g[2000] - 10.0).abs() < 1e-9);
        assert_eq!(parse_grid("0.1:0.3:0.1").unwrap().len(), 3);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["threshold", "--alpha", "0.5"]).0, EXIT_OK);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["threshold"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["threshold", "--alpha", "abc"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["threshold", "--alpha", "1.5"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("domain error"));
        assert_eq!(run_capture(&["pdf", "--alpha", "0.5", "--kappa", "0.1"]).0, EXIT_DOMAIN);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn threshold_json() {
        let (code, out, _) = run_capture(&["threshold", "--kappa", "0.1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["alpha_star"].as_f64().unwrap() - 0.4393).abs() < 1e-3);
        assert!(v["meta"]["version"].as_str().unwrap().starts_with("swn "));
    }

    #[test]
    fn config_layering() {
        let mut a = RunConfig { alpha: Some(0.3), trials: Some(5), ..Default::default() };
        a.merge(RunConfig { trials: Some(9), irls: Some(IrlsOverrides { zero_tol: Some(1e-3), ..Default::default() }), ..Default::default() });
        assert_eq!(a.alpha, Some(0.3));
        assert_eq!(a.trials, Some(9));
        assert_eq!(a.irls.unwrap().zero_tol, Some(1e-3));
        let bad: std::result::Result<RunConfig, _> = serde_json::from_str(r#"{"alhpa": 0.5}"#);
        assert!(bad.is_err());
    }
}
