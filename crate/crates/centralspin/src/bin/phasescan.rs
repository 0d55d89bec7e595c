use centralspin::analytic::segment_x;
use centralspin::exact::{bistable_pair, build_liouvillian, observables};
use centralspin::scan::{
    exact_point, gaussian_point, parse_twice_j, run_scan, spin_pumping_rate_probe, unix_timestamp, write_csv,
    write_json, Continuation, Format, InitialState, Mode, Phase, ProbeMethod, ScanConfig, ScanPointRecord,
};
use centralspin::{Error, ModelParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "phasescan", version, about = "Phase diagrams of the driven central spin model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep an (ω/ω₀, Ω/Ω₀) grid and write one record per point.
    Scan(ScanArgs),
    /// Evaluate a single point.
    Point(PointArgs),
    /// Extreme states of a quasi-degenerate null space (exact solver).
    Bistable(BistableArgs),
    /// Relaxation time towards the steady state relative to Ω = 0.
    PumpProbe(ProbeArgs),
    /// Closed-form solution on ω = ω₀, Ω ≤ Ω₀.
    SegmentX(SegmentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Gaussian,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Mixed,
    PolarizedUp,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Propagation,
    Spectral,
}

#[derive(Args)]
struct ScanArgs {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "omega-min")]
    omega_min: Option<f64>,
    #[arg(long = "omega-max")]
    omega_max: Option<f64>,
    #[arg(long = "omega-steps")]
    omega_steps: Option<usize>,
    #[arg(long = "Omega-min")]
    drive_min: Option<f64>,
    #[arg(long = "Omega-max")]
    drive_max: Option<f64>,
    #[arg(long = "Omega-steps")]
    drive_steps: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// γ/a
    #[arg(long)]
    gamma: Option<f64>,
    /// Nuclear spin J (integer or half-integer).
    #[arg(long = "J")]
    j: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Eigenvalues with |λ| below this count as null space.
    #[arg(long = "null-tol")]
    null_tol: Option<f64>,
    /// Omit the timestamp header line from CSV output.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Args)]
struct PointArgs {
    /// ω/ω₀
    #[arg(long)]
    omega: f64,
    /// Ω/Ω₀
    #[arg(long = "Omega")]
    drive: f64,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BistableArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long = "Omega")]
    drive: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long = "J")]
    j: String,
    #[arg(long = "null-tol", default_value_t = 1e-5)]
    null_tol: f64,
    /// Tolerated negative eigenvalue of the endpoint states.
    #[arg(long = "pos-tol", default_value_t = 1e-10)]
    pos_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long = "Omega")]
    drive: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long = "J")]
    j: String,
    #[arg(long, value_enum, default_value = "mixed")]
    initial: InitialArg,
    #[arg(long, value_enum, default_value = "propagation")]
    method: MethodArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long = "Omega")]
    drive: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config { line: 0, msg: msg.into() }
}

fn apply_common(cfg: &mut ScanConfig, c: &Common) -> Result<(), Error> {
    if let Some(g) = c.gamma {
        cfg.gamma = g;
    }
    if let Some(j) = &c.j {
        cfg.twice_j = Some(parse_twice_j(j).map_err(config_error)?);
    }
    if let Some(m) = c.mode {
        cfg.mode = match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Gaussian => Mode::Gaussian,
        };
    }
    if let Some(f) = c.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(o) = &c.out {
        cfg.out = Some(o.clone());
    }
    if let Some(t) = c.null_tol {
        cfg.null_tol = t;
    }
    if c.no_timestamp {
        cfg.timestamp = false;
    }
    Ok(())
}

fn load(config: &Option<PathBuf>) -> Result<ScanConfig, Error> {
    match config {
        Some(p) => ScanConfig::from_file(p),
        None => Ok(ScanConfig::default()),
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| config_error(format!("cannot create {}: {e}", p.display())))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_records(cfg: &ScanConfig, records: &[ScanPointRecord]) -> Result<(), Error> {
    let w = sink(&cfg.out)?;
    match cfg.format {
        Format::Csv => {
            let ts = cfg.timestamp.then(unix_timestamp);
            write_csv(w, records, ts.as_deref())
        }
        Format::Json => write_json(w, records),
    }
}

fn write_value(out: &Option<PathBuf>, v: &serde_json::Value) -> Result<(), Error> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Error::Numerical(e.to_string()))?;
    writeln!(w).map_err(|e| Error::Numerical(e.to_string()))
}

fn params(omega: f64, drive: f64, gamma: f64, j: &str) -> Result<ModelParams, Error> {
    let twice_j = parse_twice_j(j).map_err(config_error)?;
    ModelParams::from_ratios(omega, drive, gamma, twice_j).map_err(|e| config_error(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Scan(a) => {
            let mut cfg = load(&a.config)?;
            apply_common(&mut cfg, &a.common)?;
            let ax = [
                (&mut cfg.omega.min, a.omega_min),
                (&mut cfg.omega.max, a.omega_max),
                (&mut cfg.drive.min, a.drive_min),
                (&mut cfg.drive.max, a.drive_max),
            ];
            for (slot, v) in ax {
                if let Some(v) = v {
                    *slot = v;
                }
            }
            if let Some(n) = a.omega_steps {
                cfg.omega.steps = n;
            }
            if let Some(n) = a.drive_steps {
                cfg.drive.steps = n;
            }
            cfg.validate()?;
            let records = run_scan(&cfg)?;
            write_records(&cfg, &records)?;
            Ok(records.iter().all(|r| r.phase != Phase::Invalid))
        }
        Command::Point(a) => {
            let mut cfg = load(&a.config)?;
            apply_common(&mut cfg, &a.common)?;
            cfg.validate()?;
            let rec = match cfg.mode {
                Mode::Exact => exact_point(a.omega, a.drive, &cfg),
                Mode::Gaussian => gaussian_point(a.omega, a.drive, &cfg, &mut Continuation::default()),
            };
            write_records(&cfg, std::slice::from_ref(&rec))?;
            Ok(rec.phase != Phase::Invalid)
        }
        Command::Bistable(a) => {
            let p = params(a.omega, a.drive, a.gamma, &a.j)?;
            let l = build_liouvillian(&p)?;
            let pair = bistable_pair(&l, a.null_tol, a.pos_tol)?;
            let describe = |rho| {
                let o = observables(rho);
                json!({
                    "electron": o.spins.s,
                    "nuclear_over_j": o.spins.i_over_j,
                    "var_iz": o.nuclear_cov[2][2],
                    "purity": o.purity,
                })
            };
            let v = json!({
                "omega_over_omega0": a.omega,
                "Omega_over_Omega0": a.drive,
                "J": p.j(),
                "adr": [pair.adr.re, pair.adr.im],
                "lambda_range": [pair.lambda_range.0, pair.lambda_range.1],
                "rho_lo": describe(&pair.rho_lo),
                "rho_up": describe(&pair.rho_up),
                "rho0": describe(&pair.rho0),
            });
            write_value(&a.out, &v)?;
            Ok(true)
        }
        Command::PumpProbe(a) => {
            let p = params(a.omega, a.drive, a.gamma, &a.j)?;
            let init = match a.initial {
                InitialArg::Mixed => InitialState::Mixed,
                InitialArg::PolarizedUp => InitialState::PolarizedUp,
            };
            let method = match a.method {
                MethodArg::Propagation => ProbeMethod::Propagation,
                MethodArg::Spectral => ProbeMethod::Spectral,
            };
            let r = spin_pumping_rate_probe(&p, init, method)?;
            let v = json!({
                "omega_over_omega0": a.omega,
                "Omega_over_Omega0": a.drive,
                "J": p.j(),
                "time": r.time,
                "baseline_time": r.baseline_time,
                "speedup": r.speedup,
                "adr": [r.adr.re, r.adr.im],
                "baseline_adr": [r.baseline_adr.re, r.baseline_adr.im],
            });
            write_value(&a.out, &v)?;
            Ok(true)
        }
        Command::SegmentX(a) => {
            let p = ModelParams::from_ratios(1.0, a.drive, a.gamma, 2).map_err(|e| config_error(e.to_string()))?;
            let s = segment_x(&p)?;
            write_value(&a.out, &serde_json::to_value(s).map_err(|e| Error::Numerical(e.to_string()))?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e @ Error::Config { .. }) => {
            eprintln!("phasescan: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("phasescan: {e}");
            ExitCode::FAILURE
        }
    }
}
