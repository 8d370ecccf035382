//! Command-line front end: spectra, wavefunctions, phase diagrams and the
//! reference checks, written as CSV (or JSON) with a `# key=value` manifest.

use crate::dvr::{self, DvrConfig, SolverError};
use crate::hofd::{self, HofdConfig};
use crate::potentials::{self, HyperbolicParams, Potential, PotentialError, TrigParams};
use crate::tra::{self, TraError};
use crate::verify::{self, Suite, VerifyError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

const UNITS: &str = "atomic units (hbar = m = 1)";

#[derive(Debug, Parser)]
#[command(name = "ptbound", version, about = "Bound states of generalized Poschl-Teller potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies from DVR and/or HOFD.
    Spectrum(SpectrumArgs),
    /// Un-normalized series wavefunctions sampled on a grid.
    Wavefunction(WavefunctionArgs),
    /// Spectral phase classification over an (A, B) grid of the hyperbolic well.
    Spd(SpdArgs),
    /// Run reference checks; exit 1 if any fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Hyperbolic,
    #[value(alias = "trigonometric")]
    Trig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Dvr,
    Hofd,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Table1,
    Table2,
    Freebox,
    Polys,
    Tra,
    Isospectral,
    Spd,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Table1 => Suite::Table1,
            SuiteArg::Table2 => Suite::Table2,
            SuiteArg::Freebox => Suite::FreeBox,
            SuiteArg::Polys => Suite::Polys,
            SuiteArg::Tra => Suite::Tra,
            SuiteArg::Isospectral => Suite::Isospectral,
            SuiteArg::Spd => Suite::Spd,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Potential selection. Hyperbolic uses `V0, A, B, kappa`; trigonometric
/// uses `V0, C, D, a`.
#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long = "V0", allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long = "kappa", allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long = "D", allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Well width (trigonometric family).
    #[arg(long = "a", allow_hyphen_values = true)]
    pub width: Option<f64>,
    /// Use the mirror-image well (trigonometric family).
    #[arg(long)]
    pub reflected: bool,
}

/// Grid knobs; unset values fall back to each method's default.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Grid size M for the selected method(s).
    #[arg(long = "grid-M")]
    pub grid_m: Option<usize>,
    /// DVR box length b for the hyperbolic family.
    #[arg(long = "box-b")]
    pub box_b: Option<f64>,
    /// HOFD stencil half-width k.
    #[arg(long = "stencil-k")]
    pub stencil_k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    /// Number of levels; defaults to all bound states (hyperbolic) or 10.
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// State indices, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub states: Vec<usize>,
    /// Number of sample points, endpoints included (and then excluded).
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    /// Right end of the sampling range in units of kappa x (hyperbolic).
    #[arg(long = "x-max", default_value_t = 10.0)]
    pub x_max: f64,
    /// Solver providing the energies.
    #[arg(long, value_enum, default_value = "dvr")]
    pub method: MethodArg,
    /// Rescale each state to unit L2 norm over the samples.
    #[arg(long)]
    pub normalize: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpdArgs {
    #[arg(long = "V0", default_value_t = 10.0, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
    #[arg(long = "A-min", default_value_t = -60.0, allow_hyphen_values = true)]
    pub a_min: f64,
    #[arg(long = "A-max", default_value_t = 40.0, allow_hyphen_values = true)]
    pub a_max: f64,
    #[arg(long = "B-min", default_value_t = -60.0, allow_hyphen_values = true)]
    pub b_min: f64,
    #[arg(long = "B-max", default_value_t = 40.0, allow_hyphen_values = true)]
    pub b_max: f64,
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub which: SuiteArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Tra(#[from] TraError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Potential(_) => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        }
    }
}

/// A rendered table: manifest, column names, and rows of formatted cells.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub manifest: Vec<(String, String)>,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
    /// Unformatted values mirrored into JSON.
    #[serde(rename = "rows")]
    pub values: Vec<Vec<serde_json::Value>>,
}

impl Table {
    fn new(command: &str) -> Self {
        let mut t = Table {
            manifest: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            values: Vec::new(),
        };
        t.meta("command", command);
        t.meta("version", env!("CARGO_PKG_VERSION"));
        t.meta("units", UNITS);
        t
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.manifest.push((key.to_string(), value.to_string()));
    }

    fn push(&mut self, cells: Vec<(String, serde_json::Value)>) {
        let (text, json) = cells.into_iter().unzip();
        self.rows.push(text);
        self.values.push(json);
    }

    /// CSV body; the timestamp line goes first so the rest is reproducible.
    pub fn to_csv(&self, timestamp: u64) -> String {
        let mut s = format!("# timestamp_unix={timestamp}\n");
        for (k, v) in &self.manifest {
            let _ = writeln!(s, "# {k}={v}");
        }
        let _ = writeln!(s, "{}", csv_line(&self.columns));
        for row in &self.rows {
            let _ = writeln!(s, "{}", csv_line(row));
        }
        s
    }

    pub fn to_json(&self, timestamp: u64) -> Result<String, serde_json::Error> {
        let mut v = serde_json::to_value(self)?;
        v["timestamp_unix"] = timestamp.into();
        let manifest: serde_json::Map<String, serde_json::Value> =
            self.manifest.iter().map(|(k, v)| (k.clone(), v.clone().into())).collect();
        v["manifest"] = manifest.into();
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    quoted.join(",")
}

/// Decimal places: 12 for the hyperbolic well, 6 for the trigonometric one.
fn precision(p: &Potential) -> usize {
    match p {
        Potential::Hyperbolic(_) => 12,
        Potential::Trigonometric(_) => 6,
    }
}

fn cell(value: f64, decimals: usize) -> (String, serde_json::Value) {
    (format!("{value:.decimals$}"), json_number(value))
}

fn sci_cell(value: f64, digits: usize) -> (String, serde_json::Value) {
    (format!("{value:.prec$e}", prec = digits - 1), json_number(value))
}

fn int_cell(value: usize) -> (String, serde_json::Value) {
    (value.to_string(), value.into())
}

fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, Into::into)
}

fn required(value: Option<f64>, flag: &str, family: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for the {family} family")))
}

impl PotentialArgs {
    pub fn build(&self) -> Result<Potential, CliError> {
        match self.family {
            FamilyArg::Hyperbolic => {
                for (v, flag) in [(self.c, "C"), (self.d, "D"), (self.width, "a")] {
                    if v.is_some() {
                        return Err(CliError::Usage(format!("--{flag} does not apply to the hyperbolic family")));
                    }
                }
                if self.reflected {
                    return Err(CliError::Usage("--reflected applies to the trig family only".into()));
                }
                Ok(Potential::Hyperbolic(HyperbolicParams::new(
                    self.v0,
                    required(self.a, "A", "hyperbolic")?,
                    required(self.b, "B", "hyperbolic")?,
                    required(self.kappa, "kappa", "hyperbolic")?,
                )?))
            }
            FamilyArg::Trig => {
                for (v, flag) in [(self.a, "A"), (self.b, "B"), (self.kappa, "kappa")] {
                    if v.is_some() {
                        return Err(CliError::Usage(format!("--{flag} does not apply to the trig family")));
                    }
                }
                Ok(Potential::Trigonometric(TrigParams::new(
                    self.v0,
                    required(self.c, "C", "trig")?,
                    required(self.d, "D", "trig")?,
                    required(self.width, "a", "trig")?,
                )?))
            }
        }
    }

    fn describe(&self, p: &Potential, t: &mut Table) {
        match p {
            Potential::Hyperbolic(h) => {
                t.meta("family", "hyperbolic");
                t.meta("V0", h.v0());
                t.meta("A", h.a());
                t.meta("B", h.b());
                t.meta("kappa", h.kappa());
            }
            Potential::Trigonometric(tp) => {
                t.meta("family", "trig");
                t.meta("V0", tp.v0());
                t.meta("C", tp.c());
                t.meta("D", tp.d());
                t.meta("a", tp.width());
                t.meta("reflected", self.reflected);
            }
        }
    }
}

impl GridArgs {
    fn dvr_config(&self, p: &Potential) -> Result<DvrConfig, CliError> {
        match p {
            Potential::Hyperbolic(_) => {
                let d = DvrConfig::HYPERBOLIC_DEFAULT;
                Ok(DvrConfig::new(self.grid_m.unwrap_or(d.m), self.box_b.unwrap_or(d.length))
                    .map_err(|e| CliError::Usage(e.to_string()))?)
            }
            Potential::Trigonometric(tp) => {
                if self.box_b.is_some() {
                    return Err(CliError::Usage("--box-b applies to the hyperbolic family only".into()));
                }
                Ok(DvrConfig::new(self.grid_m.unwrap_or(DvrConfig::TRIG_DEFAULT_M), tp.width())
                    .map_err(|e| CliError::Usage(e.to_string()))?)
            }
        }
    }

    fn hofd_config(&self) -> Result<HofdConfig, CliError> {
        HofdConfig::new(
            self.grid_m.unwrap_or(HofdConfig::DEFAULT_M),
            self.stencil_k.unwrap_or(HofdConfig::DEFAULT_K),
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Upper bound on HOFD levels probed when counting hyperbolic bound states.
const HOFD_LEVEL_LIMIT: usize = 50;

fn dvr_levels(p: &Potential, cfg: &DvrConfig, count: Option<usize>, reflected: bool) -> Result<dvr::SpectrumResult, CliError> {
    Ok(match p {
        Potential::Hyperbolic(h) => {
            let mut r = dvr::hyperbolic_bound_states(h, cfg)?;
            if let Some(c) = count {
                r.eigenvalues.truncate(c);
            }
            r
        }
        Potential::Trigonometric(t) => dvr::trig_spectrum(t, cfg.m, count.unwrap_or(10), reflected)?,
    })
}

fn hofd_levels(p: &Potential, cfg: &HofdConfig, count: Option<usize>, reflected: bool) -> Result<dvr::SpectrumResult, CliError> {
    Ok(match p {
        Potential::Hyperbolic(h) => match count {
            Some(c) => {
                let mut r = hofd::hyperbolic_bound_states(h, cfg, c)?;
                r.eigenvalues.truncate(c);
                r
            }
            None => hofd::hyperbolic_bound_states(h, cfg, HOFD_LEVEL_LIMIT)?,
        },
        Potential::Trigonometric(t) => {
            let count = count.unwrap_or(10);
            if reflected {
                let op = hofd::box_operator_with(cfg, t.width(), |x| t.eval_unchecked(x, true))?;
                hofd::spectrum_of(&op, cfg, count)?
            } else {
                hofd::box_spectrum(t, cfg, count)?
            }
        }
    })
}

fn spectrum_table(args: &SpectrumArgs) -> Result<Table, CliError> {
    let p = args.potential.build()?;
    let reflected = args.potential.reflected;
    let mut t = Table::new("spectrum");
    args.potential.describe(&p, &mut t);
    t.meta("method", format!("{:?}", args.method).to_lowercase());
    let want_dvr = matches!(args.method, MethodArg::Dvr | MethodArg::Both);
    let want_hofd = matches!(args.method, MethodArg::Hofd | MethodArg::Both);
    let dvr_cfg = args.grid.dvr_config(&p)?;
    let hofd_cfg = args.grid.hofd_config()?;
    if args.count == Some(0) {
        t.meta("count", 0);
    }
    let mut columns = vec!["n".to_string()];
    let mut results = Vec::new();
    if want_dvr {
        let r = if args.count == Some(0) { None } else { Some(dvr_levels(&p, &dvr_cfg, args.count, reflected)?) };
        t.meta("dvr_M", dvr_cfg.m);
        if matches!(p, Potential::Hyperbolic(_)) {
            t.meta("dvr_box_b", dvr_cfg.length);
        }
        if let Some(r) = &r {
            t.meta("dvr_max_residual", format!("{:e}", r.max_residual));
            t.meta("dvr_matrix_norm", format!("{:e}", r.matrix_norm));
        }
        columns.push("E_dvr".into());
        results.push(r);
    }
    if want_hofd {
        let r = if args.count == Some(0) { None } else { Some(hofd_levels(&p, &hofd_cfg, args.count, reflected)?) };
        t.meta("hofd_M", hofd_cfg.m);
        t.meta("hofd_stencil_k", hofd_cfg.k);
        if let Some(r) = &r {
            t.meta("hofd_max_residual", format!("{:e}", r.max_residual));
            t.meta("hofd_matrix_norm", format!("{:e}", r.matrix_norm));
        }
        columns.push("E_hofd".into());
        results.push(r);
    }
    if matches!(p, Potential::Hyperbolic(_)) {
        t.meta("bound_state_cutoff", "E < 0");
    }
    let rows = results.iter().map(|r| r.as_ref().map_or(0, |r| r.eigenvalues.len())).max().unwrap_or(0);
    if results.len() == 2 {
        let counts: Vec<usize> = results.iter().map(|r| r.as_ref().map_or(0, |r| r.eigenvalues.len())).collect();
        if counts[0] != counts[1] {
            t.meta("warning", format!("dvr found {} levels, hofd found {}", counts[0], counts[1]));
        }
    }
    let decimals = precision(&p);
    t.columns = columns;
    for n in 0..rows {
        let mut cells = vec![int_cell(n)];
        for r in &results {
            let e = r.as_ref().and_then(|r| r.eigenvalues.get(n).copied());
            cells.push(match e {
                Some(e) => cell(e, decimals),
                None => (String::new(), serde_json::Value::Null),
            });
        }
        t.push(cells);
    }
    Ok(t)
}

fn wavefunction_table(args: &WavefunctionArgs) -> Result<Table, CliError> {
    let p = args.potential.build()?;
    if args.potential.reflected {
        return Err(CliError::Usage("series wavefunctions are built for the unreflected well".into()));
    }
    if args.method == MethodArg::Both {
        return Err(CliError::Usage("--method must be dvr or hofd for wavefunctions".into()));
    }
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    if args.states.is_empty() {
        return Err(CliError::Usage("--states must name at least one state".into()));
    }
    let highest = *args.states.iter().max().expect("non-empty");
    let count = match p {
        Potential::Hyperbolic(_) => None,
        Potential::Trigonometric(_) => Some(highest + 1),
    };
    let levels = match args.method {
        MethodArg::Hofd => hofd_levels(&p, &args.grid.hofd_config()?, count, false)?,
        _ => dvr_levels(&p, &args.grid.dvr_config(&p)?, count, false)?,
    }
    .eigenvalues;
    if highest >= levels.len() {
        return Err(CliError::Compute(format!(
            "state {highest} requested but only {} bound states were found",
            levels.len()
        )));
    }

    let mut t = Table::new("wavefunction");
    args.potential.describe(&p, &mut t);
    t.meta("energy_method", format!("{:?}", args.method).to_lowercase());
    t.meta("bound_state_count", levels.len());
    t.meta("normalization", if args.normalize { "L2 over samples" } else { "none (f0 = 1)" });

    let (x_grid, abscissa_name, scale) = match &p {
        Potential::Hyperbolic(h) => {
            if !(args.x_max > 0.0) {
                return Err(CliError::Usage("--x-max must be positive".into()));
            }
            let k = h.kappa();
            let xs: Vec<f64> = (0..args.samples)
                .map(|i| args.x_max * i as f64 / (args.samples - 1) as f64 / k)
                .collect();
            (xs, "kappa_x", k)
        }
        Potential::Trigonometric(tp) => {
            let a = tp.width();
            let xs: Vec<f64> = (0..args.samples).map(|i| a * i as f64 / (args.samples - 1) as f64).collect();
            (xs, "x_over_a", 1.0 / a)
        }
    };

    let mut columns = vec!["x".to_string(), abscissa_name.to_string()];
    let mut psis = Vec::new();
    let mut kept_x: Option<Vec<f64>> = None;
    let mut excluded = Vec::new();
    for &m in &args.states {
        let e = levels[m];
        let sol = tra::assemble_solution(&p, e)?;
        let mut wf = tra::eval_wavefunction(&sol, &p, &x_grid)?;
        if args.normalize {
            wf.normalize_l2();
        }
        let prefix = format!("state{m}");
        t.meta(&format!("{prefix}.energy"), format!("{e:.prec$}", prec = precision(&p)));
        t.meta(&format!("{prefix}.mu"), sol.basis.mu);
        t.meta(&format!("{prefix}.nu"), sol.basis.nu);
        t.meta(&format!("{prefix}.N"), sol.basis.n_max);
        t.meta(&format!("{prefix}.branch"), sol.series.branch.label());
        t.meta(&format!("{prefix}.z"), sol.series.z);
        t.meta(&format!("{prefix}.theta"), sol.series.theta);
        let coeffs: Vec<String> = sol.coeffs.iter().map(|c| format!("{c:e}")).collect();
        t.meta(&format!("{prefix}.coefficients"), coeffs.join(";"));
        t.meta(&format!("{prefix}.sign_changes_on_samples"), wf.node_count());
        columns.push(format!("psi_{m}"));
        excluded = wf.excluded.clone();
        kept_x.get_or_insert(wf.x.clone());
        psis.push(wf.psi);
    }
    if !excluded.is_empty() {
        let list: Vec<String> = excluded.iter().map(|x| x.to_string()).collect();
        t.meta("excluded_boundary_points", list.join(";"));
        eprintln!("note: {} grid point(s) on the domain boundary were excluded", excluded.len());
    }
    t.columns = columns;
    let xs = kept_x.unwrap_or_default();
    for (i, x) in xs.iter().enumerate() {
        let mut cells = vec![sci_cell(*x, 12), sci_cell(x * scale, 12)];
        for psi in &psis {
            cells.push(sci_cell(psi[i], 12));
        }
        t.push(cells);
    }
    Ok(t)
}

fn spd_table(args: &SpdArgs) -> Result<Table, CliError> {
    if args.resolution < 2 {
        return Err(CliError::Usage("--resolution must be at least 2".into()));
    }
    let grid = potentials::spd_grid(
        args.v0,
        args.kappa,
        (args.a_min, args.a_max),
        (args.b_min, args.b_max),
        args.resolution,
    )?;
    let mut t = Table::new("spd");
    t.meta("V0", args.v0);
    t.meta("kappa", args.kappa);
    t.meta("A_range", format!("{};{}", args.a_min, args.a_max));
    t.meta("B_range", format!("{};{}", args.b_min, args.b_max));
    t.meta("resolution", args.resolution);
    t.meta("tra_line_B", grid.tra_b_limit);
    t.meta("tra_line_A", grid.tra_a_limit);
    t.columns = vec!["A".into(), "B".into(), "phase".into()];
    for (i, a) in grid.a_values.iter().enumerate() {
        for (j, b) in grid.b_values.iter().enumerate() {
            let phase = grid.phases[i][j].label();
            t.push(vec![cell(*a, 6), cell(*b, 6), (phase.to_string(), phase.into())]);
        }
    }
    Ok(t)
}

fn verify_table(args: &VerifyArgs) -> Result<(Table, bool), CliError> {
    let checks = verify::run(args.which.into())?;
    let mut t = Table::new("verify");
    t.meta("suite", format!("{:?}", args.which).to_lowercase());
    t.columns = ["status", "criterion", "check", "measured", "expected", "error", "tolerance", "metric"]
        .map(String::from)
        .to_vec();
    let mut all_pass = true;
    for c in &checks {
        let status = match (c.passed(), c.diagnostic) {
            (_, true) => "INFO",
            (true, false) => "PASS",
            (false, false) => {
                all_pass = false;
                "FAIL"
            }
        };
        t.push(vec![
            (status.to_string(), status.into()),
            int_cell(c.criterion as usize),
            (c.name.clone(), c.name.clone().into()),
            sci_cell(c.measured, 15),
            sci_cell(c.expected, 15),
            sci_cell(c.error(), 3),
            sci_cell(c.tolerance, 2),
            (format!("{:?}", c.metric).to_lowercase(), format!("{:?}", c.metric).to_lowercase().into()),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    t.meta("checks", checks.len());
    t.meta("failed", failed);
    Ok((t, all_pass))
}

fn emit(t: &Table, out: &OutputArgs) -> Result<(), CliError> {
    let ts = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let body = match out.format {
        Format::Csv => t.to_csv(ts),
        Format::Json => t.to_json(ts)?,
    };
    match &out.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Spectrum(a) => spectrum_table(a).and_then(|t| emit(&t, &a.output)).map(|_| EXIT_OK),
        Command::Wavefunction(a) => wavefunction_table(a).and_then(|t| emit(&t, &a.output)).map(|_| EXIT_OK),
        Command::Spd(a) => spd_table(a).and_then(|t| emit(&t, &a.output)).map(|_| EXIT_OK),
        Command::Verify(a) => verify_table(a).and_then(|(t, pass)| {
            emit(&t, &a.output)?;
            Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ptbound").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn negative_values_parse() {
        let cli = parse(&["spectrum", "--family", "hyperbolic", "--V0", "10", "--A", "-20", "--B", "-30", "--kappa", "1"]);
        let Command::Spectrum(a) = cli.command else { panic!() };
        assert_eq!(a.potential.a, Some(-20.0));
        assert_eq!(a.method, MethodArg::Both);
        let p = a.potential.build().unwrap();
        assert!(matches!(p, Potential::Hyperbolic(_)));
    }

    #[test]
    fn family_flag_mismatch_is_usage_error() {
        let cli = parse(&["spectrum", "--family", "trig", "--V0", "5", "--A", "1", "--C", "-2", "--D", "2", "--a", "1"]);
        let Command::Spectrum(a) = cli.command else { panic!() };
        let err = a.potential.build().unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        let cli = parse(&["spectrum", "--family", "hyperbolic", "--V0", "5", "--A", "1", "--B", "2"]);
        let Command::Spectrum(a) = cli.command else { panic!() };
        assert!(matches!(a.potential.build(), Err(CliError::Usage(_))));
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("spectrum");
        t.columns = vec!["n".into(), "E_dvr".into()];
        t.push(vec![int_cell(0), cell(-1.5, 12)]);
        let csv = t.to_csv(7);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# timestamp_unix=7");
        assert!(lines.contains(&"# units=atomic units (hbar = m = 1)"));
        assert_eq!(lines[lines.len() - 2], "n,E_dvr");
        assert_eq!(lines[lines.len() - 1], "0,-1.500000000000");
        assert_eq!(csv_line(&["a,b".into(), "c\"d".into()]), "\"a,b\",\"c\"\"d\"");
        let json: serde_json::Value = serde_json::from_str(&t.to_json(7).unwrap()).unwrap();
        assert_eq!(json["rows"][0][1], -1.5);
        assert_eq!(json["manifest"]["command"], "spectrum");
    }

    #[test]
    fn count_zero_is_empty() {
        let cli = parse(&["spectrum", "--family", "trig", "--V0", "5", "--C", "-2", "--D", "2", "--a", "1", "--count", "0"]);
        let Command::Spectrum(a) = cli.command else { panic!() };
        let t = spectrum_table(&a).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(t.columns, vec!["n", "E_dvr", "E_hofd"]);
    }

    #[test]
    fn bad_grid_is_usage_error() {
        let cli = parse(&[
            "spectrum", "--family", "hyperbolic", "--V0", "10", "--A", "-20", "--B", "-30", "--kappa", "1", "--grid-M", "1",
        ]);
        let Command::Spectrum(a) = cli.command else { panic!() };
        assert_eq!(spectrum_table(&a).unwrap_err().exit_code(), EXIT_USAGE);
    }
}
