//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a verification check failed,
//! 64 usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::checks::{self, Check, PdeSetup, Tolerances};
use crate::closedform::{self, atom_state};
use crate::error::Error;
use crate::grid::{RadialGrid, Spacing};
use crate::mellin::ContourSpec;
use crate::model::ProblemParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "GROWFRAG_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "growfrag", version, about = "Explicit blow-up solution of a growth-fragmentation equation")]
struct Cli {
    /// Flat `key = value` config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for independent cases.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regular part on a grid, with the atom in the header.
    Profile(ProfileArgs),
    /// Moments and their blow-up scaling.
    Moments(MomentArgs),
    /// Scaled moment of one order along a list of times.
    Blowup(BlowupArgs),
    /// Mellin transform identities.
    VerifyMellin(VerifyMellinArgs),
    /// Finite-volume solver against the closed form.
    VerifyPde(VerifyPdeArgs),
    /// Weak-form residual of the closed form.
    VerifyWeak(VerifyWeakArgs),
    /// Roots and infimum of Phi.
    Phi(PhiArgs),
}

#[derive(Debug, Args, Default)]
struct ParamArgs {
    /// Growth exponent, > 0.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Kernel height, > 0 and != 1.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct TimeArgs {
    /// Absolute time.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Time as a fraction of the blow-up time 1/gamma.
    #[arg(long = "t-frac")]
    t_frac: Option<f64>,
    /// Comma-separated times as fractions of 1/gamma.
    #[arg(long = "t-list", value_delimiter = ',')]
    t_list: Option<Vec<f64>>,
}

#[derive(Debug, Args, Default)]
struct GridArgs {
    #[arg(long = "x-min")]
    x_min: Option<f64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long)]
    cells: Option<usize>,
    /// `log` or `uniform`.
    #[arg(long)]
    spacing: Option<String>,
}

#[derive(Debug, Args, Default)]
struct ContourArgs {
    /// Abscissa of the inversion line.
    #[arg(long)]
    s0: Option<f64>,
    /// Truncation height of the line.
    #[arg(long)]
    height: Option<f64>,
    /// Trapezoid nodes on [0, height].
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Debug, Args, Default)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
struct TolArgs {
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    time: TimeArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct MomentArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    time: TimeArgs,
    /// Comma-separated moment orders.
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BlowupArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    time: TimeArgs,
    #[arg(long)]
    r: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyMellinArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    time: TimeArgs,
    #[command(flatten)]
    contour: ContourArgs,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyPdeArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Start time as a fraction of 1/gamma.
    #[arg(long = "t0-frac")]
    t0_frac: Option<f64>,
    /// End time as a fraction of 1/gamma.
    #[arg(long = "t1-frac")]
    t1_frac: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    cfl: Option<f64>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyWeakArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Quadrature nodes per axis.
    #[arg(long)]
    nodes: Option<usize>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PhiArgs {
    #[command(flatten)]
    params: ParamArgs,
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("bad tolerance value in '{s}'"))?;
    Ok((k.trim().to_string(), v))
}

/// Errors surfaced by the front end, mapped to exit codes.
#[derive(Debug)]
enum CliError {
    Invalid(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

const CONFIG_KEYS: [&str; 21] = [
    "gamma", "theta", "t", "t_frac", "t_list", "x_min", "x_max", "cells", "spacing", "s0", "height",
    "nodes", "cfl", "r", "r_list", "t0_frac", "t1_frac", "output", "jobs", "quad_nodes", "contour_tolerance",
];

/// Validated run configuration: config file values overlaid by flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub values: BTreeMap<String, String>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment; `tol.<name>` sets a tolerance.
    pub fn parse(text: &str) -> crate::Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParam(format!("config line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if let Some(name) = k.strip_prefix("tol.") {
                let v: f64 = v
                    .parse()
                    .map_err(|_| Error::InvalidParam(format!("config line {}: bad tolerance '{v}'", lineno + 1)))?;
                cfg.tolerances.0.insert(name.to_string(), v);
            } else if CONFIG_KEYS.contains(&k) {
                cfg.values.insert(k.to_string(), v.to_string());
            } else {
                return Err(Error::InvalidParam(format!("config line {}: unknown key '{k}'", lineno + 1)));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParam(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set<T: ToString>(&mut self, key: &str, v: Option<T>) {
        if let Some(v) = v {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    fn set_list(&mut self, key: &str, v: &Option<Vec<f64>>) {
        if let Some(v) = v {
            let joined = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            self.values.insert(key.to_string(), joined);
        }
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Invalid(format!("invalid value '{v}' for {key}"))),
        }
    }

    fn get_or<T: std::str::FromStr>(&self, key: &str, default: T) -> CliResult<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> CliResult<T> {
        self.get(key)?
            .ok_or_else(|| CliError::Invalid(format!("missing required value '{key}'")))
    }

    fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| CliError::Invalid(format!("invalid list '{v}' for {key}"))),
        }
    }

    fn params(&self) -> CliResult<ProblemParams> {
        Ok(ProblemParams::new(self.require("gamma")?, self.require("theta")?)?)
    }

    /// Absolute times from `t`, `t_frac` or `t_list` (in that order of precedence).
    fn times(&self, params: &ProblemParams) -> CliResult<Vec<f64>> {
        let tb = params.blowup_time();
        let times = if let Some(t) = self.get::<f64>("t")? {
            vec![t]
        } else if let Some(f) = self.get::<f64>("t_frac")? {
            vec![f * tb]
        } else if let Some(list) = self.list("t_list")? {
            list.into_iter().map(|f| f * tb).collect()
        } else {
            return invalid("no time given (use --t, --t-frac or --t-list)");
        };
        for &t in &times {
            closedform::remaining(params, t)?;
        }
        Ok(times)
    }

    fn output(&self) -> Option<PathBuf> {
        self.values.get("output").map(PathBuf::from)
    }
}

fn overlay_params(cfg: &mut RunConfig, a: &ParamArgs) {
    cfg.set("gamma", a.gamma);
    cfg.set("theta", a.theta);
}

fn overlay_time(cfg: &mut RunConfig, a: &TimeArgs) {
    // a flag for one time form replaces the others from the file
    if a.t.is_some() || a.t_frac.is_some() || a.t_list.is_some() {
        for k in ["t", "t_frac", "t_list"] {
            cfg.values.remove(k);
        }
    }
    cfg.set("t", a.t);
    cfg.set("t_frac", a.t_frac);
    cfg.set_list("t_list", &a.t_list);
}

fn overlay_grid(cfg: &mut RunConfig, a: &GridArgs) {
    cfg.set("x_min", a.x_min);
    cfg.set("x_max", a.x_max);
    cfg.set("cells", a.cells);
    cfg.set("spacing", a.spacing.clone());
}

fn overlay_output(cfg: &mut RunConfig, a: &OutputArgs) {
    cfg.set("output", a.output.as_ref().map(|p| p.display().to_string()));
}

fn overlay_tol(cfg: &mut RunConfig, a: &TolArgs) {
    for (k, v) in &a.tol {
        cfg.tolerances.0.insert(k.clone(), *v);
    }
}

/// Runs the CLI with process stdout/stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing normal output to `out` and diagnostics to `err`.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(CliError::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn base_config(cli: &Cli) -> CliResult<RunConfig> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => RunConfig::load(&p)?,
        None => RunConfig::default(),
    };
    cfg.set("jobs", cli.jobs);
    Ok(cfg)
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let mut cfg = base_config(&cli)?;
    let jobs: usize = cfg.get_or("jobs", 1)?;
    if jobs == 0 {
        return invalid("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    match &cli.command {
        Command::Profile(a) => {
            overlay_params(&mut cfg, &a.params);
            overlay_time(&mut cfg, &a.time);
            overlay_grid(&mut cfg, &a.grid);
            overlay_output(&mut cfg, &a.out);
            let text = pool.install(|| profile(&cfg))?;
            emit(&cfg, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Moments(a) => {
            overlay_params(&mut cfg, &a.params);
            overlay_time(&mut cfg, &a.time);
            cfg.set_list("r_list", &a.r);
            overlay_output(&mut cfg, &a.out);
            let text = pool.install(|| moments(&cfg))?;
            emit(&cfg, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Blowup(a) => {
            overlay_params(&mut cfg, &a.params);
            overlay_time(&mut cfg, &a.time);
            cfg.set("r", a.r);
            overlay_output(&mut cfg, &a.out);
            let text = pool.install(|| blowup(&cfg))?;
            emit(&cfg, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::VerifyMellin(a) => {
            overlay_params(&mut cfg, &a.params);
            overlay_time(&mut cfg, &a.time);
            cfg.set("s0", a.contour.s0);
            cfg.set("height", a.contour.height);
            cfg.set("nodes", a.contour.nodes);
            overlay_tol(&mut cfg, &a.tol);
            overlay_output(&mut cfg, &a.out);
            let params = cfg.params()?;
            if !cfg.values.keys().any(|k| k == "t" || k == "t_frac" || k == "t_list") {
                cfg.values.insert("t_frac".into(), "0.5".into());
            }
            let t = cfg.times(&params)?[0];
            let contour = ContourSpec::with_tolerance(
                cfg.get_or("s0", 0.5)?,
                cfg.get_or("height", 400.0)?,
                cfg.get_or("nodes", 20_000)?,
                cfg.get_or("contour_tolerance", ContourSpec::DEFAULT_TOLERANCE)?,
            )?;
            let checks = pool.install(|| checks::mellin_suite(&params, t, &contour, &cfg.tolerances))?;
            report(&cfg, &checks, out)
        }
        Command::VerifyPde(a) => {
            overlay_params(&mut cfg, &a.params);
            cfg.set("t0_frac", a.t0_frac);
            cfg.set("t1_frac", a.t1_frac);
            overlay_grid(&mut cfg, &a.grid);
            cfg.set("cfl", a.cfl);
            overlay_tol(&mut cfg, &a.tol);
            overlay_output(&mut cfg, &a.out);
            let params = cfg.params()?;
            let tb = params.blowup_time();
            let setup = PdeSetup {
                t0: cfg.get_or("t0_frac", 0.2)? * tb,
                t1: cfg.get_or("t1_frac", 0.5)? * tb,
                x_min: cfg.get_or("x_min", 1e-3)?,
                x_max: cfg.get_or("x_max", 10.0)?,
                cells: cfg.get_or("cells", 4000)?,
                cfl: cfg.get_or("cfl", 0.9)?,
            };
            if setup.cells < 16 {
                return invalid("need at least 16 cells for the refinement study");
            }
            let checks = checks::pde_suite(&params, &setup, &cfg.tolerances)?;
            report(&cfg, &checks, out)
        }
        Command::VerifyWeak(a) => {
            overlay_params(&mut cfg, &a.params);
            cfg.set("quad_nodes", a.nodes);
            overlay_tol(&mut cfg, &a.tol);
            overlay_output(&mut cfg, &a.out);
            let params = cfg.params()?;
            let nodes = cfg.get_or("quad_nodes", 256)?;
            let checks = pool.install(|| checks::weak_suite(&params, nodes, &cfg.tolerances))?;
            report(&cfg, &checks, out)
        }
        Command::Phi(a) => {
            overlay_params(&mut cfg, &a.params);
            let theta: f64 = cfg.require("theta")?;
            let params = ProblemParams::new(cfg.get_or("gamma", 1.0)?, theta)?;
            let inf = params.phi_infimum();
            let mut s = String::new();
            let _ = writeln!(s, "theta = {}", params.theta);
            let _ = writeln!(s, "sigma1 = {}", params.sigma1);
            let _ = writeln!(s, "sigma2 = {}", params.sigma2);
            let _ = writeln!(s, "inf_phi = {:.10}", inf.value);
            let _ = writeln!(s, "argmin = {:.10}", inf.argmin);
            if theta > 1.0 {
                let _ = writeln!(s, "closed_form = {:.10}", 2.0 * (theta.sqrt() - 1.0));
            }
            let _ = writeln!(s, "kernel_second_moment = {:.10}", params.kernel_second_moment());
            let verdict = if inf.global_existence_condition { "satisfied" } else { "not satisfied" };
            let _ = writeln!(s, "global existence condition (inf Phi < 0): {verdict}");
            out.write_all(s.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match cfg.output() {
        Some(p) => std::fs::write(&p, text)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn report(cfg: &RunConfig, checks: &[Check], out: &mut dyn Write) -> CliResult<i32> {
    let mut lines = String::new();
    for c in checks {
        let _ = writeln!(lines, "{}", c.summary());
    }
    out.write_all(lines.as_bytes())?;
    if let Some(p) = cfg.output() {
        let mut csv = String::from("check,value,tolerance,status\n");
        for c in checks {
            let status = if c.passed() { "pass" } else { "fail" };
            let _ = writeln!(csv, "{},{:.16e},{:.16e},{status}", c.name, c.value, c.tolerance);
        }
        std::fs::write(&p, csv).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(if checks.iter().all(Check::passed) { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn profile(cfg: &RunConfig) -> CliResult<String> {
    let params = cfg.params()?;
    let times = cfg.times(&params)?;
    if times.len() != 1 {
        return invalid("profile takes a single time");
    }
    let t = times[0];
    let atom = atom_state(&params, t)?;
    let spacing: Spacing = cfg.get_or("spacing", "log".to_string())?.parse()?;
    let x_min = cfg.get_or("x_min", 1e-3)?;
    let x_max = cfg.get_or("x_max", 1.5 * atom.location)?;
    let grid = RadialGrid::new(x_min, x_max, cfg.get_or("cells", 1000)?, spacing)?;
    let values = grid
        .centers()
        .par_iter()
        .map(|&x| closedform::u_regular(&params, t, x))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut s = format!(
        "# gamma={} theta={} t={} atom_location={} atom_mass={}\nx,u_regular\n",
        params.gamma, params.theta, t, atom.location, atom.mass
    );
    for (x, v) in grid.centers().iter().zip(values) {
        let _ = writeln!(s, "{x:.16e},{v:.16e}");
    }
    Ok(s)
}

fn moments(cfg: &RunConfig) -> CliResult<String> {
    let params = cfg.params()?;
    let times = cfg.times(&params)?;
    let orders = cfg.list("r_list")?.unwrap_or_else(|| vec![2.0]);
    let cases: Vec<(f64, f64)> = times.iter().flat_map(|&t| orders.iter().map(move |&r| (t, r))).collect();
    let rows = cases
        .par_iter()
        .map(|&(t, r)| -> crate::Result<String> {
            let m = closedform::moment(&params, t, r)?;
            let (scaled, limit) = if r > 0.0 && t > 0.0 {
                (closedform::scaled_moment(&params, t, r)?, closedform::blowup_constant(&params, r)?)
            } else {
                (f64::NAN, f64::NAN)
            };
            let rel = (scaled / limit - 1.0).abs();
            Ok(format!("{t:.16e},{r},{m:.16e},{scaled:.16e},{limit:.16e},{rel:.16e}\n"))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(std::iter::once("t,r,moment,scaled_moment,limit_constant,rel_err\n".to_string()).chain(rows).collect())
}

fn blowup(cfg: &RunConfig) -> CliResult<String> {
    let params = cfg.params()?;
    let times = cfg.times(&params)?;
    let r: f64 = cfg.require("r")?;
    let limit = closedform::blowup_constant(&params, r)?;
    let rows = times
        .par_iter()
        .map(|&t| -> crate::Result<String> {
            let scaled = closedform::scaled_moment(&params, t, r)?;
            let rel = (scaled / limit - 1.0).abs();
            Ok(format!("{t:.16e},{scaled:.16e},{limit:.16e},{rel:.16e}\n"))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(std::iter::once("t,scaled_moment,blowup_constant,rel_err\n".to_string()).chain(rows).collect())
}
