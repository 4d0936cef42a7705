//! Command-line front end.
//!
//! Every run is described by a [`RunConfig`]. Values come from an optional
//! JSON file and are overridden by flags; the seed falls back to the
//! `MSLM_SEED` environment variable and then to 0.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::alpha::{check_condition7, lf_n_exponent, quasinorm, AlphaFunction, AlphaSpec, IntegrandFunction};
use crate::continuous::{dyadic_grid, simulate_sn, SegmentBasis};
use crate::integrals::{weighted_mslm, WeightFunction};
use crate::path::{write_ensemble_csv, PathGrid};
use crate::report::Record;
use crate::schemes::{simulate_stable_fclt, Scheme, SchemeConfig};
use crate::suite;
use crate::svg::{line_chart, Series};
use crate::verify::{try_ensemble, localisability_test, MonteCarlo};
use crate::{Error, RandomStream, Result};

pub const SEED_ENV: &str = "MSLM_SEED";

/// Exit status: all checks passed.
pub const EXIT_OK: i32 = 0;
/// Exit status: a verification suite or test failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status: bad flags, bad configuration or invalid parameters.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mslm", version, about = "Simulate and verify multistable Levy motions")]
pub struct Cli {
    /// JSON file with default values for the run; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate sample paths and write them as CSV, JSON or SVG.
    Simulate(SimulateArgs),
    /// Run acceptance checks and write a JSON report.
    Verify(VerifyArgs),
    /// Quasinorm of a function tabulated on a uniform grid of [0, 1].
    Norm(NormArgs),
    /// Localisability test at one point.
    Localize(LocalizeArgs),
    /// Trend diagnostic for the regularity condition on α.
    Condition7(Condition7Args),
    /// Divergence table of the approximating exponent of Example 1.
    Example1(Example1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Li,
    Lr,
    Lc,
    Sn,
    Stable,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct Common {
    /// α as JSON, e.g. '{"kind":"linear","intercept":1.2,"slope":0.6}'.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG chart next to the output.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeKind>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// Output grid level for `sn` (2^mesh cells); defaults to n + 4.
    #[arg(long)]
    pub mesh: Option<u32>,
    /// Weight values on a uniform grid of [0, 1] for `weighted`.
    #[arg(long, value_delimiter = ',')]
    pub weight: Option<Vec<f64>>,
    /// Reuse the draws of coarser dyadic levels.
    #[arg(long)]
    pub nested: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// `all`, or a comma-separated list of check names or ids.
    #[arg(long)]
    pub suite: Option<String>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub common: Common,
    /// Function values on a uniform grid of [0, 1].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct LocalizeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// Scales r = 2^-k for k in r_min_exp..=r_max_exp.
    #[arg(long)]
    pub r_min_exp: Option<i32>,
    #[arg(long)]
    pub r_max_exp: Option<i32>,
}

#[derive(Debug, Args)]
pub struct Condition7Args {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Example1Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub n_max: Option<u32>,
}

/// The fully resolved description of one run. It is embedded in every
/// artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub alpha: AlphaSpec,
    pub scheme: SchemeKind,
    pub n: u32,
    pub ensemble: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: bool,
    pub nested: bool,
    pub mesh: Option<u32>,
    pub weight: Option<Vec<f64>>,
    pub suite: String,
    pub values: Option<Vec<f64>>,
    pub x: f64,
    pub u: f64,
    pub r_min_exp: i32,
    pub r_max_exp: i32,
    pub b: f64,
    pub theta: f64,
    pub n_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            alpha: AlphaSpec::Linear { intercept: 1.2, slope: 0.6, domain: None },
            scheme: SchemeKind::Li,
            n: 10,
            ensemble: 1,
            seed: 0,
            out: None,
            format: Format::Csv,
            plot: false,
            nested: false,
            mesh: None,
            weight: None,
            suite: "all".into(),
            values: None,
            x: 0.5,
            u: 1.0,
            r_min_exp: 4,
            r_max_exp: 10,
            b: 1.8,
            theta: 1.0,
            n_max: 20,
        }
    }
}

impl RunConfig {
    pub fn alpha_function(&self) -> Result<AlphaFunction> {
        AlphaFunction::from_spec(self.alpha.clone())
    }
}

/// Merge the optional config file, the environment and the flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let (mut cfg, file_seed) = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            let raw: Value = serde_json::from_str(&text)?;
            let has_seed = raw.get("seed").is_some();
            (serde_json::from_value::<RunConfig>(raw)?, has_seed)
        }
        None => (RunConfig::default(), false),
    };
    if !file_seed {
        if let Ok(s) = std::env::var(SEED_ENV) {
            cfg.seed = s
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("{SEED_ENV}=`{s}` is not an unsigned integer")))?;
        }
    }
    let common = |cfg: &mut RunConfig, c: &Common| -> Result<()> {
        if let Some(a) = &c.alpha {
            cfg.alpha = serde_json::from_str(a)?;
        }
        set(&mut cfg.seed, c.seed);
        if c.out.is_some() {
            cfg.out = c.out.clone();
        }
        set(&mut cfg.format, c.format);
        cfg.plot |= c.plot;
        Ok(())
    };
    match &cli.command {
        Command::Simulate(a) => {
            cfg.command = "simulate".into();
            common(&mut cfg, &a.common)?;
            set(&mut cfg.scheme, a.scheme);
            set(&mut cfg.n, a.n);
            set(&mut cfg.ensemble, a.ensemble);
            if a.mesh.is_some() {
                cfg.mesh = a.mesh;
            }
            if a.weight.is_some() {
                cfg.weight = a.weight.clone();
            }
            cfg.nested |= a.nested;
        }
        Command::Verify(a) => {
            cfg.command = "verify".into();
            if cli.config.is_none() {
                cfg.format = Format::Json;
            }
            common(&mut cfg, &a.common)?;
            if let Some(s) = &a.suite {
                cfg.suite = s.clone();
            }
        }
        Command::Norm(a) => {
            cfg.command = "norm".into();
            common(&mut cfg, &a.common)?;
            if a.values.is_some() {
                cfg.values = a.values.clone();
            }
        }
        Command::Localize(a) => {
            cfg.command = "localize".into();
            if cli.config.is_none() {
                cfg.n = 16;
                cfg.ensemble = 10_000;
            }
            common(&mut cfg, &a.common)?;
            set(&mut cfg.x, a.x);
            set(&mut cfg.u, a.u);
            set(&mut cfg.n, a.n);
            set(&mut cfg.ensemble, a.ensemble);
            set(&mut cfg.r_min_exp, a.r_min_exp);
            set(&mut cfg.r_max_exp, a.r_max_exp);
        }
        Command::Condition7(a) => {
            cfg.command = "condition7".into();
            common(&mut cfg, &a.common)?;
        }
        Command::Example1(a) => {
            cfg.command = "example1".into();
            common(&mut cfg, &a.common)?;
            set(&mut cfg.b, a.b);
            set(&mut cfg.u, a.u);
            set(&mut cfg.theta, a.theta);
            set(&mut cfg.n_max, a.n_max);
        }
    }
    cfg.alpha_function()?;
    Ok(cfg)
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run(&cfg, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Execute a resolved run. Returns `false` when a verification failed.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<bool> {
    match cfg.command.as_str() {
        "simulate" => simulate(cfg, stdout).map(|_| true),
        "verify" => verify(cfg, stdout),
        "norm" => norm(cfg, stdout).map(|_| true),
        "localize" => localize(cfg, stdout),
        "condition7" => condition7(cfg, stdout).map(|_| true),
        "example1" => example1(cfg, stdout).map(|_| true),
        other => Err(Error::Domain(format!("unknown command `{other}`"))),
    }
}

fn emit(cfg: &RunConfig, stdout: &mut dyn Write, body: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn write_plot(cfg: &RunConfig, default_name: &str, svg: &str) -> Result<()> {
    let path = match &cfg.out {
        Some(p) => p.with_extension("svg"),
        None => PathBuf::from(default_name),
    };
    fs::write(path, svg)?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn simulate_one(cfg: &RunConfig, af: &AlphaFunction, stream: RandomStream) -> Result<PathGrid> {
    match cfg.scheme {
        SchemeKind::Li | SchemeKind::Lr | SchemeKind::Lc => {
            let scheme = match cfg.scheme {
                SchemeKind::Li => Scheme::Li,
                SchemeKind::Lr => Scheme::Lr,
                _ => Scheme::Lc,
            };
            let sc = SchemeConfig::new(cfg.n, af.clone(), stream)?.with_nested(cfg.nested);
            Ok(scheme.simulate(&sc))
        }
        SchemeKind::Sn => {
            let grid = dyadic_grid(cfg.mesh.unwrap_or(cfg.n + 4));
            simulate_sn(cfg.n, af, SegmentBasis::default(), stream, &grid)
        }
        SchemeKind::Stable => {
            if !af.is_constant() {
                return Err(Error::Domain("the `stable` scheme needs a constant alpha".into()));
            }
            if cfg.n > 30 {
                return Err(Error::Domain(format!("level {} exceeds 30", cfg.n)));
            }
            simulate_stable_fclt(af.lower(), 1u64 << cfg.n, stream)
        }
        SchemeKind::Weighted => {
            let w = match &cfg.weight {
                Some(v) => WeightFunction::new(IntegrandFunction::table(v.clone())?),
                None => WeightFunction::constant(1.0),
            };
            weighted_mslm(&w, af, cfg.n, stream)
        }
    }
}

fn simulate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let af = cfg.alpha_function()?;
    if cfg.ensemble == 0 {
        return Err(Error::Domain("ensemble must be at least 1".into()));
    }
    let root = RandomStream::new(cfg.seed, 0);
    let paths = if cfg.ensemble == 1 {
        vec![simulate_one(cfg, &af, root)?]
    } else {
        try_ensemble(cfg.ensemble, root, |s| simulate_one(cfg, &af, s))?
    };
    let body = match cfg.format {
        Format::Csv => {
            let mut buf = Vec::new();
            if paths.len() == 1 {
                paths[0].write_csv(&mut buf)?;
            } else {
                write_ensemble_csv(&paths, &mut buf)?;
            }
            if let Some(p) = &cfg.out {
                fs::write(sidecar(p), serde_json::to_string_pretty(&json!({"config": cfg}))? + "\n")?;
            }
            String::from_utf8(buf).expect("csv is ascii")
        }
        Format::Json => {
            let ps: Vec<Value> = paths.iter().map(|p| json!({"t": p.times(), "value": p.values()})).collect();
            serde_json::to_string_pretty(&json!({"config": cfg, "paths": ps}))? + "\n"
        }
        Format::Svg => paths_svg(cfg, &paths),
    };
    emit(cfg, stdout, &body)?;
    if cfg.plot && cfg.format != Format::Svg {
        write_plot(cfg, "paths.svg", &paths_svg(cfg, &paths))?;
    }
    Ok(())
}

fn paths_svg(cfg: &RunConfig, paths: &[PathGrid]) -> String {
    let labels: Vec<String> = (0..paths.len()).map(|i| format!("replicate {i}")).collect();
    let series: Vec<Series<'_>> = paths
        .iter()
        .zip(&labels)
        .take(6)
        .map(|(p, l)| Series { label: l, x: p.times(), y: p.values() })
        .collect();
    let title = format!("{:?} n={} seed={}", cfg.scheme, cfg.n, cfg.seed);
    line_chart(&title, &series)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: &'a RunConfig,
    pass: bool,
    results: BTreeMap<&'static str, Record>,
}

fn verify(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<bool> {
    let selected = suite::select(&cfg.suite)?;
    let mut results = BTreeMap::new();
    for c in selected {
        let start = Instant::now();
        let rec = (c.run)(cfg.seed)?;
        eprintln!(
            "[{}] {:>2} {:<24} {:>7.2}s",
            if rec.passed() { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            start.elapsed().as_secs_f64()
        );
        results.insert(c.name, rec);
    }
    let pass = results.values().all(Record::passed);
    let report = VerifyReport { config: cfg, pass, results };
    emit(cfg, stdout, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(pass)
}

fn norm(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let af = cfg.alpha_function()?;
    let values = cfg
        .values
        .clone()
        .ok_or_else(|| Error::Domain("`norm` needs --values".into()))?;
    let q = quasinorm(&IntegrandFunction::table(values)?, &af)?;
    match cfg.format {
        Format::Json => emit(cfg, stdout, &(serde_json::to_string_pretty(&json!({"config": cfg, "quasinorm": q}))? + "\n")),
        _ => emit(cfg, stdout, &format!("{q}\n")),
    }
}

fn localize(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<bool> {
    let af = cfg.alpha_function()?;
    if cfg.r_min_exp > cfg.r_max_exp {
        return Err(Error::Domain("r_min_exp must not exceed r_max_exp".into()));
    }
    let r: Vec<f64> = (cfg.r_min_exp..=cfg.r_max_exp).map(|k| 2f64.powi(-k)).collect();
    let mc = MonteCarlo::new(cfg.n, cfg.ensemble, RandomStream::new(cfg.seed, 0));
    let rep = localisability_test(&af, cfg.x, cfg.u, &r, &mc, None)?;
    let body = match cfg.format {
        Format::Csv => {
            let mut s = String::from("r,deviation\n");
            for (r, d) in rep.r.iter().zip(&rep.deviations) {
                s.push_str(&format!("{r},{d}\n"));
            }
            s
        }
        Format::Json | Format::Svg => serde_json::to_string_pretty(&json!({"config": cfg, "report": rep}))? + "\n",
    };
    emit(cfg, stdout, &body)?;
    if cfg.plot || cfg.format == Format::Svg {
        let lr: Vec<f64> = rep.r.iter().map(|r| r.log2()).collect();
        let svg = line_chart(
            &format!("CF deviation at x={} (seed {})", cfg.x, cfg.seed),
            &[Series { label: "deviation vs log2 r", x: &lr, y: &rep.deviations }],
        );
        write_plot(cfg, "localize.svg", &svg)?;
    }
    Ok(rep.pass)
}

fn condition7(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let af = cfg.alpha_function()?;
    let (lo, hi) = af.domain();
    let xs: Vec<f64> = (0..=256).map(|i| lo + (hi - lo) * i as f64 / 256.0).collect();
    let ts: Vec<f64> = (1..=20).map(|k| 2f64.powi(-k)).collect();
    let rep = check_condition7(&af, &xs, &ts);
    let body = match cfg.format {
        Format::Csv => {
            let mut s = String::from("t,value\n");
            for (t, v) in rep.t.iter().zip(&rep.values) {
                s.push_str(&format!("{t},{v}\n"));
            }
            s
        }
        _ => serde_json::to_string_pretty(&json!({"config": cfg, "report": rep}))? + "\n",
    };
    emit(cfg, stdout, &body)?;
    eprintln!("verdict: {:?}", rep.verdict);
    Ok(())
}

fn example1(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let af = AlphaFunction::example1(cfg.b)?;
    if cfg.n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let rows = (1..=cfg.n_max)
        .map(|n| Ok((n, lf_n_exponent(&af, cfg.u, cfg.theta, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let body = match cfg.format {
        Format::Json => {
            let t: Vec<Value> = rows.iter().map(|(n, e)| json!({"n": n, "exponent": e})).collect();
            serde_json::to_string_pretty(&json!({"config": cfg, "table": t}))? + "\n"
        }
        _ => {
            let mut s = String::from("n,exponent\n");
            for (n, e) in &rows {
                s.push_str(&format!("{n},{e}\n"));
            }
            s
        }
    };
    emit(cfg, stdout, &body)
}
