//! Command-line front end. Each command renders its full output into a
//! string so the binary only has to route it to a file or stdout.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::entanglement::{
    crossover, fitted_temperature_ratio, reduced_state, sweep, SweepPoint, DEFAULT_BRACKET,
    DEFAULT_CROSSOVER_TOL,
};
use crate::error::{Error, Result};
use crate::fock::{Sector, Subsystem};
use crate::geometry::{BlackHoleParams, SqueezingParams, Statistics, DEFAULT_X_MIN};
use crate::states::{DEFAULT_EPS_TAIL, MAX_EPS_TAIL};

pub const CSV_HEADER: &str = "x,omega,mass,statistics,S_closed,S_numeric,gap,mean_occ,T_ratio,error";

#[derive(Debug, Parser)]
#[command(name = "collapse-ent", version, about = "Entanglement between Hawking radiation and infalling modes in Vaidya collapse")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy report for a single frequency.
    Entropy(EntropyArgs),
    /// Entropy reports over a frequency grid.
    Sweep(SweepArgs),
    /// Boson/fermion crossover frequency.
    Crossover(CrossoverArgs),
    /// Reduced out-state as JSON.
    State(StateArgs),
    /// Reduced out-state as JSON with occupation and temperature fit.
    Spectrum(StateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsChoice {
    Boson,
    Fermion,
    Both,
}

impl StatsChoice {
    fn expand(self) -> &'static [Statistics] {
        match self {
            StatsChoice::Boson => &[Statistics::Boson],
            StatsChoice::Fermion => &[Statistics::Fermion],
            StatsChoice::Both => &[Statistics::Boson, Statistics::Fermion],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridKind {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Black-hole mass (natural units).
    #[arg(long, allow_negative_numbers = true)]
    pub mass: f64,
    /// Advanced time of the collapsing shell.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
    /// Truncation tolerance for the bosonic oracle.
    #[arg(long, default_value_t = DEFAULT_EPS_TAIL)]
    pub eps_tail: f64,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mode frequency.
    #[arg(long, required_unless_present = "x", conflicts_with = "x", allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Dimensionless x = 4πmω, overriding --omega.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long = "stats", value_enum, default_value_t = StatsChoice::Both)]
    pub stats: StatsChoice,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_negative_numbers = true)]
    pub omega_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega_max: Option<f64>,
    /// Lower end of the grid in x, overriding --omega-min.
    #[arg(long, conflicts_with = "omega_min", allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    /// Upper end of the grid in x, overriding --omega-max.
    #[arg(long, conflicts_with = "omega_max", allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = GridKind::Log)]
    pub grid: GridKind,
    #[arg(long = "stats", value_enum, default_value_t = StatsChoice::Both)]
    pub stats: StatsChoice,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct CrossoverArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mass: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
    #[arg(long, default_value_t = DEFAULT_CROSSOVER_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_BRACKET.0)]
    pub lo: f64,
    #[arg(long, default_value_t = DEFAULT_BRACKET.1)]
    pub hi: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, required_unless_present = "x", conflicts_with = "x", allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long = "stats", value_enum)]
    pub stats: Statistics,
}

impl ValueEnum for Statistics {
    fn value_variants<'a>() -> &'a [Self] {
        &[Statistics::Boson, Statistics::Fermion]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.as_str()))
    }
}

/// Validated sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: BlackHoleParams,
    pub omegas: Vec<f64>,
    pub statistics: Vec<Statistics>,
    pub eps_tail: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

/// Rendered command output plus the exit code the binary should return.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub code: i32,
    pub output: Option<PathBuf>,
}

/// 17 significant digits, locale independent.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= MAX_EPS_TAIL {
        Ok(())
    } else {
        Err(Error::invalid(format!("--eps-tail must lie in (0, {MAX_EPS_TAIL:e}], got {eps}")))
    }
}

fn resolve_omega(params: &BlackHoleParams, omega: Option<f64>, x: Option<f64>) -> Result<f64> {
    let omega = match (omega, x) {
        (_, Some(x)) => params.omega_for_x(x),
        (Some(w), None) => w,
        (None, None) => return Err(Error::invalid("one of --omega or --x is required")),
    };
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid(format!("omega must be finite and > 0, got {omega}")));
    }
    Ok(omega)
}

fn grid(kind: GridKind, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match kind {
        GridKind::Log => crate::entanglement::log_grid(lo, hi, points),
        GridKind::Linear => {
            if points == 1 {
                return vec![lo];
            }
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (points - 1) as f64
                    }
                })
                .collect()
        }
    }
}

impl RunConfig {
    pub fn from_entropy_args(a: &EntropyArgs) -> Result<Self> {
        let params = BlackHoleParams::new(a.common.mass, a.common.v0)?;
        check_eps(a.common.eps_tail)?;
        let omega = resolve_omega(&params, a.omega, a.x)?;
        Ok(Self {
            params,
            omegas: vec![omega],
            statistics: a.stats.expand().to_vec(),
            eps_tail: a.common.eps_tail,
            output_format: a.format,
            output_path: a.common.output.clone(),
        })
    }

    pub fn from_sweep_args(a: &SweepArgs) -> Result<Self> {
        let params = BlackHoleParams::new(a.common.mass, a.common.v0)?;
        check_eps(a.common.eps_tail)?;
        if a.points == 0 {
            return Err(Error::invalid("--points must be at least 1"));
        }
        let lo = match (a.omega_min, a.x_min) {
            (_, Some(x)) => params.omega_for_x(x),
            (Some(w), None) => w,
            (None, None) => return Err(Error::invalid("--omega-min or --x-min is required")),
        };
        let hi = match (a.omega_max, a.x_max) {
            (_, Some(x)) => params.omega_for_x(x),
            (Some(w), None) => w,
            (None, None) if a.points == 1 => lo,
            (None, None) => return Err(Error::invalid("--omega-max or --x-max is required")),
        };
        if !(lo.is_finite() && lo > 0.0 && hi.is_finite()) {
            return Err(Error::invalid(format!("frequency bounds must be positive, got {lo}..{hi}")));
        }
        if a.points > 1 && !(lo < hi) {
            return Err(Error::invalid(format!("need omega_min < omega_max, got {lo} >= {hi}")));
        }
        Ok(Self {
            params,
            omegas: grid(a.grid, lo, hi, a.points),
            statistics: a.stats.expand().to_vec(),
            eps_tail: a.common.eps_tail,
            output_format: a.format,
            output_path: a.common.output.clone(),
        })
    }
}

#[derive(Debug, Serialize)]
struct Record {
    x: f64,
    omega: f64,
    mass: f64,
    statistics: Statistics,
    #[serde(rename = "S_closed")]
    s_closed: Option<f64>,
    #[serde(rename = "S_numeric")]
    s_numeric: Option<f64>,
    gap: Option<f64>,
    mean_occ: Option<f64>,
    #[serde(rename = "T_ratio")]
    t_ratio: Option<f64>,
    error: Option<String>,
}

impl Record {
    fn from_point(mass: f64, pt: &SweepPoint) -> Self {
        match &pt.outcome {
            Ok(r) => Record {
                x: r.x,
                omega: r.omega,
                mass: r.mass,
                statistics: r.statistics,
                s_closed: Some(r.entropy_closed_form),
                s_numeric: Some(r.entropy_numerical),
                gap: Some(r.abs_gap),
                mean_occ: Some(r.mean_occupation),
                t_ratio: r.fitted_temperature_ratio,
                error: None,
            },
            Err(e) => Record {
                x: pt.x,
                omega: pt.omega,
                mass,
                statistics: pt.statistics,
                s_closed: None,
                s_numeric: None,
                gap: None,
                mean_occ: None,
                t_ratio: None,
                error: Some(e.to_string()),
            },
        }
    }

    fn csv_fields(&self) -> [String; 10] {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        [
            fmt_f64(self.x),
            fmt_f64(self.omega),
            fmt_f64(self.mass),
            self.statistics.to_string(),
            opt(self.s_closed),
            opt(self.s_numeric),
            opt(self.gap),
            opt(self.mean_occ),
            opt(self.t_ratio),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

fn render_records(records: &[Record], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER.split(','))
                .and_then(|_| records.iter().try_for_each(|r| w.write_record(r.csv_fields())))
                .map_err(|e| Error::Io(e.to_string()))?;
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Evaluates every `(ω, statistics)` pair, rows interleaved per `ω`.
pub fn run_sweep(cfg: &RunConfig) -> Result<Rendered> {
    let mut per_stats = Vec::new();
    for &stats in &cfg.statistics {
        per_stats.push(sweep(&cfg.params, &cfg.omegas, stats, cfg.eps_tail)?);
    }
    let mut records = Vec::new();
    let mut first_error: Option<&Error> = None;
    let mut ok = 0usize;
    for i in 0..cfg.omegas.len() {
        for pts in &per_stats {
            let pt = &pts[i];
            match &pt.outcome {
                Ok(_) => ok += 1,
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
            records.push(Record::from_point(cfg.params.mass(), pt));
        }
    }
    let text = render_records(&records, cfg.output_format)?;
    let code = if ok > 0 { 0 } else { first_error.map_or(1, Error::exit_code) };
    Ok(Rendered {
        text,
        code,
        output: cfg.output_path.clone(),
    })
}

pub fn cmd_entropy(a: &EntropyArgs) -> Result<Rendered> {
    let cfg = RunConfig::from_entropy_args(a)?;
    let r = run_sweep(&cfg)?;
    if r.code != 0 {
        // a single point that failed is a command failure
        let pt = crate::entanglement::sweep_point(&cfg.params, cfg.omegas[0], cfg.statistics[0], cfg.eps_tail);
        pt.outcome?;
    }
    Ok(r)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Rendered> {
    run_sweep(&RunConfig::from_sweep_args(a)?)
}

pub fn cmd_crossover(a: &CrossoverArgs) -> Result<Rendered> {
    let params = BlackHoleParams::new(a.mass, a.v0)?;
    let c = crossover(a.tol, a.lo, a.hi)?;
    let omega_star = params.omega_for_x(c.x_star);
    let text = match a.format {
        OutputFormat::Csv => {
            let mut s = String::from("x_star,omega_star,mass,residual,iterations,bracket_lo,bracket_hi,sign_changes\n");
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_f64(c.x_star),
                fmt_f64(omega_star),
                fmt_f64(params.mass()),
                fmt_f64(c.residual),
                c.iterations,
                fmt_f64(c.bracket.0),
                fmt_f64(c.bracket.1),
                c.sign_changes
            ));
            s
        }
        OutputFormat::Json => {
            let v = json!({
                "x_star": c.x_star,
                "omega_star": omega_star,
                "mass": params.mass(),
                "residual": c.residual,
                "iterations": c.iterations,
                "bracket": [c.bracket.0, c.bracket.1],
                "sign_changes": c.sign_changes,
                "hawking_temperature": params.hawking_temperature(),
                "horizon_v": params.horizon_formation(),
            });
            to_json_text(&v)?
        }
    };
    Ok(Rendered {
        text,
        code: 0,
        output: a.output.clone(),
    })
}

fn to_json_text(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// JSON dump of the numerically reduced out-state; `with_fit` adds the
/// occupation, entropy and temperature fit.
pub fn state_json(a: &StateArgs, with_fit: bool) -> Result<Value> {
    let params = BlackHoleParams::new(a.common.mass, a.common.v0)?;
    check_eps(a.common.eps_tail)?;
    let omega = resolve_omega(&params, a.omega, a.x)?;
    let x = 4.0 * std::f64::consts::PI * params.mass() * omega;
    let s = SqueezingParams::with_floor(a.stats, x, DEFAULT_X_MIN)?;
    let rho = reduced_state(&s, a.common.eps_tail, Subsystem::Out)?;
    let mut v = json!({
        "squeezing": { "statistics": s.statistics(), "r": s.r(), "x": s.x() },
        "mass": params.mass(),
        "omega": omega,
    });
    let body = serde_json::to_value(rho.to_json()).map_err(|e| Error::Io(e.to_string()))?;
    let obj = v.as_object_mut().expect("object literal");
    if let Value::Object(fields) = body {
        obj.extend(fields);
    }
    if with_fit {
        let t_h = params.hawking_temperature();
        let ratio = fitted_temperature_ratio(&rho, s.x())?;
        obj.insert("entropy".into(), json!(rho.von_neumann_entropy()?));
        obj.insert("trace".into(), json!(rho.trace()));
        obj.insert("mean_occupation".into(), json!(rho.mean_occupation(Sector::Particle)?));
        obj.insert("hawking_temperature".into(), json!(t_h));
        obj.insert("fitted_temperature".into(), json!(ratio.map(|r| r * t_h)));
        obj.insert("fitted_temperature_ratio".into(), json!(ratio));
    }
    Ok(v)
}

pub fn cmd_state(a: &StateArgs, with_fit: bool) -> Result<Rendered> {
    Ok(Rendered {
        text: to_json_text(&state_json(a, with_fit)?)?,
        code: 0,
        output: a.common.output.clone(),
    })
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Entropy(a) => cmd_entropy(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Crossover(a) => cmd_crossover(a),
        Command::State(a) => cmd_state(a, false),
        Command::Spectrum(a) => cmd_state(a, true),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<Rendered>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::invalid(e.to_string()))?;
    run(&cli)
}
