//! The `relaycap` command line.
//!
//! Exit codes: 0 success, 2 invalid input (flags, grids, ranges, output
//! path), 3 numerical failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use relaycap_core::capacity::{
    exact_capacity, fixed_alpha_limit, high_snr_affine, high_snr_char, lower_bound,
    lower_bound_highsnr, upper_bound, upper_bound_highsnr, HighSnrChar, QuadratureSpec,
};
use relaycap_core::eigenstats::{unordered_pdf, SystemConfig};

use crate::grid::{db_to_linear, linear_to_db, parse_grid, parse_int_grid, GridError};
use crate::output::{Cell, Format, Metadata, Table};
use crate::parallel::{Quantity, Runner};
use crate::tables::{self, Which};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<relaycap_core::Error> for CliError {
    fn from(e: relaycap_core::Error) -> Self {
        use relaycap_core::Error as E;
        match e {
            E::Domain(_) | E::Regime(_) | E::DegenerateSpectrum { .. } => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "relaycap",
    version,
    about = "Ergodic capacity of AF MIMO dual-hop relay channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unordered eigenvalue density, optionally against a simulated histogram.
    Pdf(PdfArgs),
    /// Exact capacity, both bounds and the high-SNR affine approximation over a ρ grid.
    Capacity(RhoGridArgs),
    /// Upper and lower bounds with their fixed-α large-ρ limits.
    Bounds(RhoGridArgs),
    /// High-SNR slope and power offset.
    Highsnr(HighSnrArgs),
    /// Monte Carlo estimates over a ρ grid.
    Mc(McArgs),
    /// Capacity and bounds over an α grid at fixed ρ.
    Sweep(SweepArgs),
    /// Published offset tables recomputed, with pass/fail.
    Tables(TablesArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("gain").required(true).args(["alpha", "alpha_over_rho"]))]
pub struct SystemArgs {
    #[arg(long)]
    pub ns: u32,
    #[arg(long)]
    pub nr: u32,
    #[arg(long)]
    pub nd: u32,
    /// Fixed relay gain α.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Couple the relay gain to the SNR as α = βρ.
    #[arg(long)]
    pub alpha_over_rho: Option<f64>,
}

impl SystemArgs {
    fn at(&self, rho: f64) -> CliResult<SystemConfig> {
        let alpha = match (self.alpha, self.alpha_over_rho) {
            (Some(a), None) => a,
            (None, Some(b)) => b * rho,
            _ => {
                return Err(CliError::Invalid(
                    "give exactly one of --alpha, --alpha-over-rho".into(),
                ))
            }
        };
        Ok(SystemConfig::new(self.ns, self.nr, self.nd, alpha, rho)?)
    }

    fn json(&self) -> serde_json::Value {
        json!({
            "n_s": self.ns, "n_r": self.nr, "n_d": self.nd,
            "alpha": self.alpha, "alpha_over_rho": self.alpha_over_rho,
        })
    }
}

#[derive(Debug, Args)]
pub struct RhoGridArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// SNR grid in dB: start:step:stop, a comma list or one value.
    #[arg(long, allow_hyphen_values = true)]
    pub rho_db: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PdfArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rho_db: f64,
    /// Eigenvalue grid (linear scale).
    #[arg(long, default_value = "0.05:0.05:5")]
    pub lambda: String,
    /// Channel draws for the histogram column; omitted leaves it empty.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HighSnrArgs {
    /// Source antennas (integer grid).
    #[arg(long)]
    pub ns: String,
    #[arg(long)]
    pub nr: String,
    #[arg(long)]
    pub nd: String,
    /// Ratio β = α/ρ (grid).
    #[arg(long)]
    pub beta: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McQuantity {
    Capacity,
    Det,
    Logdet,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub rho_db: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = McQuantity::Capacity)]
    pub quantity: McQuantity,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("alphas").required(true).args(["alpha", "alpha_db"]))]
pub struct SweepArgs {
    #[arg(long)]
    pub ns: u32,
    #[arg(long)]
    pub nr: u32,
    #[arg(long)]
    pub nd: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub rho_db: f64,
    /// Relay gain grid, linear.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Relay gain grid in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_db: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    NdSweep,
    NrSweep,
    Siso,
    All,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum, ignore_case = true, default_value_t = WhichArg::All)]
    pub which: WhichArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn check_positive(name: &str, x: f64) -> CliResult<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "{name} must be positive and finite"
        )))
    }
}

/// Collects per-point results in grid order, surfacing the first error.
fn collect<T>(v: Vec<CliResult<T>>) -> CliResult<Vec<T>> {
    v.into_iter().collect()
}

fn rho_grid(s: &str) -> CliResult<Vec<f64>> {
    Ok(parse_grid(s)?)
}

fn pdf(a: &PdfArgs, runner: &Runner) -> CliResult<(Table, Metadata)> {
    let rho = db_to_linear(a.rho_db);
    let cfg = a.system.at(rho)?;
    let grid = parse_grid(&a.lambda)?;
    if grid.iter().any(|x| *x < 0.0) {
        return Err(CliError::Invalid("lambda grid must be nonnegative".into()));
    }
    let series = unordered_pdf(&cfg);
    let analytic = collect(runner.map(&grid, |&l| series.eval(l).map_err(CliError::from)))?;
    let hist = match a.trials {
        None => vec![None; grid.len()],
        Some(n) => {
            let samples = runner.cascade_eigenvalues(&cfg, n, a.seed)?;
            histogram(&grid, &samples).into_iter().map(Some).collect()
        }
    };
    let mut t = Table::new(&["lambda", "analytic_pdf", "mc_density"]);
    for ((l, f), h) in grid.iter().zip(analytic).zip(hist) {
        t.push(vec![(*l).into(), f.into(), h.into()]);
    }
    let mut config = a.system.json();
    config["rho_db"] = json!(a.rho_db);
    config["trials"] = json!(a.trials);
    Ok((t, meta("pdf", a.trials.map(|_| a.seed), config)))
}

/// Density estimate at each grid point from bins bounded by the midpoints
/// between neighbours; end bins extend half the adjacent gap outward.
pub fn histogram(grid: &[f64], samples: &[f64]) -> Vec<f64> {
    let n = grid.len();
    if n == 0 || samples.is_empty() {
        return vec![0.0; n];
    }
    let mut sorted: Vec<f64> = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let half = |i: usize, j: usize| 0.5 * (sorted[j] - sorted[i]).abs();
    let edges: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let lo_gap = if i > 0 {
                half(i - 1, i)
            } else if n > 1 {
                half(0, 1)
            } else {
                0.5
            };
            let hi_gap = if i + 1 < n {
                half(i, i + 1)
            } else if n > 1 {
                half(n - 2, n - 1)
            } else {
                0.5
            };
            ((sorted[i] - lo_gap).max(0.0), sorted[i] + hi_gap)
        })
        .collect();
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let count_below = |x: f64| xs.partition_point(|s| *s < x);
    let total = xs.len() as f64;
    grid.iter()
        .map(|g| {
            let i = sorted.partition_point(|s| s < g);
            let (lo, hi) = edges[i];
            let c = count_below(hi) - count_below(lo);
            if hi > lo {
                c as f64 / (total * (hi - lo))
            } else {
                0.0
            }
        })
        .collect()
}

fn meta(command: &'static str, seed: Option<u64>, config: serde_json::Value) -> Metadata {
    Metadata {
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
    }
}

/// Offset characterisation for the affine column; β = α/ρ per point.
fn affine_char(sys: &SystemArgs, cfg: &SystemConfig) -> CliResult<HighSnrChar> {
    let beta = sys.alpha_over_rho.unwrap_or(cfg.alpha / cfg.rho);
    check_positive("alpha/rho", beta)?;
    Ok(high_snr_char(sys.ns, sys.nr, sys.nd, beta)?)
}

fn capacity(a: &RhoGridArgs, runner: &Runner) -> CliResult<(Table, Metadata)> {
    let grid = rho_grid(&a.rho_db)?;
    let rows = collect(runner.map(&grid, |&r| -> CliResult<Vec<Cell>> {
        let rho = db_to_linear(r);
        let cfg = a.system.at(rho)?;
        let exact = exact_capacity(&cfg, QuadratureSpec::default())?.value;
        let up = upper_bound(&cfg)?.value;
        let lo = lower_bound(&cfg)?.value;
        let aff = high_snr_affine(&affine_char(&a.system, &cfg)?, rho).value;
        Ok(vec![
            r.into(),
            exact.into(),
            up.into(),
            lo.into(),
            aff.into(),
        ])
    }))?;
    let mut t = Table::new(&["rho_db", "exact", "upper", "lower", "affine"]);
    rows.into_iter().for_each(|r| t.push(r));
    let mut config = a.system.json();
    config["rho_db"] = json!(grid);
    Ok((t, meta("capacity", None, config)))
}

fn bounds(a: &RhoGridArgs, runner: &Runner) -> CliResult<(Table, Metadata)> {
    let grid = rho_grid(&a.rho_db)?;
    let rows = collect(runner.map(&grid, |&r| -> CliResult<Vec<Cell>> {
        let cfg = a.system.at(db_to_linear(r))?;
        Ok(vec![
            r.into(),
            cfg.alpha.into(),
            upper_bound(&cfg)?.value.into(),
            lower_bound(&cfg)?.value.into(),
            upper_bound_highsnr(&cfg)?.value.into(),
            lower_bound_highsnr(&cfg)?.value.into(),
            fixed_alpha_limit(&cfg)?.value.into(),
        ])
    }))?;
    let mut t = Table::new(&[
        "rho_db",
        "alpha",
        "upper",
        "lower",
        "upper_limit",
        "lower_limit",
        "capacity_limit",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    let mut config = a.system.json();
    config["rho_db"] = json!(grid);
    Ok((t, meta("bounds", None, config)))
}

fn highsnr(a: &HighSnrArgs, runner: &Runner) -> CliResult<(Table, Metadata)> {
    let (ns, nr, nd) = (
        parse_int_grid(&a.ns)?,
        parse_int_grid(&a.nr)?,
        parse_int_grid(&a.nd)?,
    );
    let betas = parse_grid(&a.beta)?;
    for b in &betas {
        check_positive("beta", *b)?;
    }
    let mut points = Vec::new();
    for &s in &ns {
        for &r in &nr {
            for &d in &nd {
                for &b in &betas {
                    points.push((s, r, d, b));
                }
            }
        }
    }
    let rows = collect(
        runner.map(&points, |&(s, r, d, b)| -> CliResult<Vec<Cell>> {
            let ch = high_snr_char(s, r, d, b)?;
            Ok(vec![
                s.into(),
                r.into(),
                d.into(),
                b.into(),
                ch.slope.into(),
                ch.offset_3db.into(),
                ch.offset_db().into(),
            ])
        }),
    )?;
    let mut t = Table::new(&[
        "n_s",
        "n_r",
        "n_d",
        "beta",
        "slope",
        "offset_3db",
        "offset_db",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    let config = json!({"n_s": ns, "n_r": nr, "n_d": nd, "beta": betas});
    Ok((t, meta("highsnr", None, config)))
}

fn mc(a: &McArgs, runner: &Runner) -> CliResult<(Table, Metadata)> {
    let grid = rho_grid(&a.rho_db)?;
    let q = match a.quantity {
        McQuantity::Capacity => Quantity::Capacity,
        McQuantity::Det => Quantity::ExpectedDet,
        McQuantity::Logdet => Quantity::ExpectedLogdet,
    };
    let cfgs = collect(grid.iter().map(|&r| a.system.at(db_to_linear(r))).collect())?;
    // grid points run one after another; each is sharded across the pool
    let mut t = Table::new(&["rho_db", "mean", "stderr", "trials", "seed"]);
    for (r, cfg) in grid.iter().zip(&cfgs) {
        let e = runner.estimate(q, cfg, a.trials, a.seed)?;
        t.push(vec![
            (*r).into(),
            e.mean.into(),
            e.stderr.into(),
            e.n_trials.into(),
            a.seed.into(),
        ]);
    }
    let mut config = a.system.json();
    config["rho_db"] = json!(grid);
    config["trials"] = json!(a.trials);
    config["quantity"] = json!(format!("{:?}", a.quantity).to_lowercase());
    Ok((t, meta("mc", Some(a.seed), config)))
}

fn sweep(a: &SweepArgs, runner: &Runner) -> CliResult<(Table, Metadata)> {
    let alphas = match (&a.alpha, &a.alpha_db) {
        (Some(g), None) => parse_grid(g)?,
        (None, Some(g)) => parse_grid(g)?.into_iter().map(db_to_linear).collect(),
        _ => {
            return Err(CliError::Invalid(
                "give exactly one of --alpha, --alpha-db".into(),
            ))
        }
    };
    let rho = db_to_linear(a.rho_db);
    let rows = collect(runner.map(&alphas, |&alpha| -> CliResult<Vec<Cell>> {
        let cfg = SystemConfig::new(a.ns, a.nr, a.nd, alpha, rho)?;
        Ok(vec![
            alpha.into(),
            linear_to_db(alpha).into(),
            exact_capacity(&cfg, QuadratureSpec::default())?
                .value
                .into(),
            upper_bound(&cfg)?.value.into(),
            lower_bound(&cfg)?.value.into(),
        ])
    }))?;
    let mut t = Table::new(&["alpha", "alpha_db", "exact", "upper", "lower"]);
    rows.into_iter().for_each(|r| t.push(r));
    let config =
        json!({"n_s": a.ns, "n_r": a.nr, "n_d": a.nd, "rho_db": a.rho_db, "alpha": alphas});
    Ok((t, meta("sweep", None, config)))
}

fn tables_cmd(a: &TablesArgs) -> CliResult<(Table, Metadata)> {
    let which: &[Which] = match a.which {
        WhichArg::NdSweep => &[Which::NdSweep],
        WhichArg::NrSweep => &[Which::NrSweep],
        WhichArg::Siso => &[Which::Siso],
        WhichArg::All => &[Which::NdSweep, Which::NrSweep, Which::Siso],
    };
    let mut t = Table::new(&[
        "table",
        "n_s",
        "n_r",
        "n_d",
        "k",
        "beta",
        "value_db",
        "published_db",
        "tolerance_db",
        "status",
    ]);
    for w in which {
        for r in tables::rows(*w)? {
            t.push(vec![
                r.table.into(),
                r.n_s.into(),
                r.n_r.into(),
                r.n_d.into(),
                r.k.into(),
                r.beta.into(),
                r.value_db.into(),
                r.published_db.into(),
                r.tolerance_db.into(),
                if r.pass() { "PASS" } else { "FAIL" }.into(),
            ]);
        }
    }
    let config = json!({"which": format!("{:?}", a.which).to_lowercase()});
    Ok((t, meta("tables", None, config)))
}

fn execute<'a>(cmd: &'a Command, runner: &Runner) -> CliResult<(Table, Metadata, &'a OutputArgs)> {
    let ((t, m), o) = match cmd {
        Command::Pdf(a) => (pdf(a, runner)?, &a.out),
        Command::Capacity(a) => (capacity(a, runner)?, &a.out),
        Command::Bounds(a) => (bounds(a, runner)?, &a.out),
        Command::Highsnr(a) => (highsnr(a, runner)?, &a.out),
        Command::Mc(a) => (mc(a, runner)?, &a.out),
        Command::Sweep(a) => (sweep(a, runner)?, &a.out),
        Command::Tables(a) => (tables_cmd(a)?, &a.out),
    };
    Ok((t, m, o))
}

fn emit(t: &Table, m: &Metadata, o: &OutputArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Invalid(format!("cannot write output: {e}"));
    match &o.output {
        None => t.write(o.format, m, &mut *stdout).map_err(io),
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            t.write(o.format, m, &mut w).map_err(io)?;
            w.flush().map_err(io)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, runner: &Runner, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let result = execute(&cli.command, runner).and_then(|(t, m, o)| emit(&t, &m, o, stdout));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "relaycap: {e}");
            e.exit_code()
        }
    }
}
