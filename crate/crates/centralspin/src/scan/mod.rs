//! Phase-diagram scans over (ω, Ω) grids with either solver stack, phase
//! classification and CSV/JSON output.

mod config;
mod probe;

pub use config::{parse_twice_j, Axis, Format, Mode, ScanConfig};
pub use probe::{relaxation_time, spin_pumping_rate_probe, InitialState, ProbeMethod, PumpProbe};

use crate::error::{Error, Result};
use crate::exact::{analyze, build_liouvillian, observables, ExactOptions};
use crate::gaussian::{analyze_root, FluctuationReport};
use crate::params::ModelParams;
use crate::semiclassical::{find_roots_with, partner, Branch, RootSearch, SemiclassicalRoot};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::io::Write;

/// Bumped whenever the column set or order changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 23] = [
    "omega_over_omega0",
    "Omega_over_Omega0",
    "gamma_over_a",
    "J",
    "mode",
    "phase",
    "adr_re",
    "adr_im",
    "electron_x",
    "electron_y",
    "electron_z",
    "nuclear_over_j_x",
    "nuclear_over_j_y",
    "nuclear_over_j_z",
    "d_purity",
    "t_eff",
    "lambda_min",
    "c_witness",
    "bistable",
    "validity",
    "drift_re",
    "drift_im",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    A,
    B,
    C,
    D,
    #[serde(rename = "supercritical")]
    Supercritical,
    #[serde(rename = "invalid")]
    Invalid,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::A => "A",
            Phase::B => "B",
            Phase::C => "C",
            Phase::D => "D",
            Phase::Supercritical => "supercritical",
            Phase::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Validity {
    pub expansion_valid: bool,
    pub truncation_ok: bool,
    pub converged: bool,
    /// Gaussian stack sees more than one stable root (possible region C).
    pub bistable_suspect: bool,
}

impl Validity {
    pub fn flags(&self) -> String {
        let mut f = vec![];
        if self.expansion_valid {
            f.push("expansion-valid");
        }
        if self.truncation_ok {
            f.push("truncation-ok");
        }
        if self.converged {
            f.push("converged");
        }
        if self.bistable_suspect {
            f.push("bistable-suspect");
        }
        f.join(";")
    }
}

impl Serialize for Validity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.flags())
    }
}

/// One grid point. Exact-mode records take `adr`, `electron`, `nuclear_over_j`
/// and `c_witness` from the finite-J steady state; `d_purity`, `t_eff`,
/// `lambda_min` and `drift` always come from the matched Gaussian root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPointRecord {
    pub omega_over_omega0: f64,
    #[serde(rename = "Omega_over_Omega0")]
    pub drive_over_drive0: f64,
    pub gamma_over_a: f64,
    #[serde(rename = "J")]
    pub j: Option<f64>,
    pub mode: Mode,
    pub phase: Phase,
    pub adr_re: f64,
    pub adr_im: f64,
    pub electron: [f64; 3],
    pub nuclear_over_j: [f64; 3],
    pub d_purity: f64,
    pub t_eff: f64,
    pub lambda_min: f64,
    pub c_witness: f64,
    pub bistable: bool,
    pub validity: Validity,
    /// Leading Gaussian drift eigenvalue of the selected root.
    pub drift_re: f64,
    pub drift_im: f64,
    pub error: Option<String>,
    #[serde(skip)]
    pub beta: Option<Complex64>,
}

impl ScanPointRecord {
    fn empty(omega: f64, drive: f64, gamma: f64, twice_j: Option<u32>, mode: Mode) -> Self {
        let nan = f64::NAN;
        ScanPointRecord {
            omega_over_omega0: omega,
            drive_over_drive0: drive,
            gamma_over_a: gamma,
            j: twice_j.map(|t| t as f64 / 2.0),
            mode,
            phase: Phase::Invalid,
            adr_re: nan,
            adr_im: nan,
            electron: [nan; 3],
            nuclear_over_j: [nan; 3],
            d_purity: nan,
            t_eff: nan,
            lambda_min: nan,
            c_witness: nan,
            bistable: false,
            validity: Validity::default(),
            drift_re: nan,
            drift_im: nan,
            error: None,
            beta: None,
        }
    }

    fn fail(mut self, e: &Error) -> Self {
        self.phase = Phase::Invalid;
        self.error = Some(e.to_string());
        self
    }

    pub fn csv_row(&self) -> Vec<String> {
        let f = |x: f64| format!("{x:?}");
        let mut row = vec![
            f(self.omega_over_omega0),
            f(self.drive_over_drive0),
            f(self.gamma_over_a),
            self.j.map(f).unwrap_or_default(),
            match self.mode {
                Mode::Exact => "exact".into(),
                Mode::Gaussian => "gaussian".into(),
            },
            self.phase.as_str().into(),
            f(self.adr_re),
            f(self.adr_im),
        ];
        row.extend(self.electron.iter().map(|&x| f(x)));
        row.extend(self.nuclear_over_j.iter().map(|&x| f(x)));
        row.extend([
            f(self.d_purity),
            f(self.t_eff),
            f(self.lambda_min),
            f(self.c_witness),
            self.bistable.to_string(),
            self.validity.flags(),
            f(self.drift_re),
            f(self.drift_im),
            self.error.clone().unwrap_or_default(),
        ]);
        row
    }
}

/// Solver outputs needed to label a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInputs {
    pub mode: Mode,
    pub omega_over_omega0: f64,
    /// ⟨I_z⟩/J of the reported state.
    pub nuclear_z: f64,
    /// (stable, overdamped) of the selected Gaussian root, if one exists.
    pub drift: Option<(bool, bool)>,
    pub exact_bistable: bool,
    /// |Im| of the exact lowest eigenvalue pair.
    pub exact_adr_im: Option<f64>,
}

/// Tolerance on |Im λ| (units of a) for calling the exact lowest pair real.
pub const REAL_PAIR_TOL: f64 = 1e-3;

pub fn classify_phase(x: &PhaseInputs) -> Phase {
    if !x.nuclear_z.is_finite() {
        return Phase::Invalid;
    }
    if x.exact_bistable {
        // the Gaussian stack cannot certify bistability
        return if x.mode == Mode::Exact { Phase::C } else { Phase::Invalid };
    }
    match x.drift {
        Some((false, _)) if x.mode == Mode::Gaussian => return Phase::Invalid,
        None if x.mode == Mode::Gaussian => return Phase::Invalid,
        Some((true, true)) => {
            let real_pair = x.exact_adr_im.map_or(true, |im| im <= REAL_PAIR_TOL);
            if real_pair {
                return Phase::D;
            }
        }
        _ => {}
    }
    if x.omega_over_omega0 < 1.0 {
        Phase::Supercritical
    } else if x.nuclear_z < 0.0 {
        Phase::A
    } else {
        Phase::B
    }
}

/// Stable roots with their fluctuation reports, ordered by 𝒥₀ᶻ.
fn stable_roots(roots: &[SemiclassicalRoot], p: &ModelParams, j: Option<f64>) -> Vec<(SemiclassicalRoot, FluctuationReport)> {
    roots
        .iter()
        .filter(|r| !r.boundary)
        .filter_map(|r| analyze_root(r.beta, p, j).ok().map(|f| (r.clone(), f)))
        .filter(|(_, f)| f.drift.stable())
        .collect()
}

struct GaussianPick {
    root: SemiclassicalRoot,
    report: FluctuationReport,
    n_stable: usize,
    all: Vec<Complex64>,
}

/// Roots at `p`; a cheap continuation from `seeds` unless `fresh`, falling
/// back to the full multi-start when continuation finds no stable root.
fn gaussian_pick(
    p: &ModelParams,
    j: Option<f64>,
    seeds: &[Complex64],
    prev: Option<Complex64>,
    fresh: bool,
    grid: usize,
    target: Option<[f64; 3]>,
) -> Result<GaussianPick> {
    let hint = if p.omega_ratio() < 1.0 { Some(Branch::Normal) } else { None };
    let attempt = |g: usize| -> Result<(Vec<SemiclassicalRoot>, Vec<(SemiclassicalRoot, FluctuationReport)>)> {
        let roots = find_roots_with(p, &RootSearch { grid: g, ..RootSearch::default() }, seeds, hint)?;
        let st = stable_roots(&roots, p, j);
        Ok((roots, st))
    };
    let (roots, mut st) = match (fresh || seeds.is_empty(), attempt(1)) {
        (false, Ok((r, s))) if !s.is_empty() => (r, s),
        _ => attempt(grid)?,
    };
    if st.is_empty() {
        return Err(Error::Numerical("no stable semiclassical root".into()));
    }
    let n_stable = st.len();
    let key = |r: &SemiclassicalRoot| -> f64 {
        if let Some(t) = target {
            let d: f64 = (0..3).map(|i| (r.nuclear0[i] - t[i]).powi(2)).sum();
            d.sqrt()
        } else if let Some(b) = prev {
            (r.beta - b).norm()
        } else {
            r.nuclear0.z
        }
    };
    st.sort_by(|a, b| key(&a.0).total_cmp(&key(&b.0)));
    let (root, report) = st.swap_remove(0);
    let all = roots.iter().map(|r| r.beta).collect();
    Ok(GaussianPick { root, report, n_stable, all })
}

fn fill_gaussian(rec: &mut ScanPointRecord, g: &GaussianPick) {
    let d = g.report.drift.adr();
    rec.drift_re = d.re;
    rec.drift_im = d.im;
    if let Some(cv) = g.report.covariance {
        rec.d_purity = cv.d_purity;
        rec.t_eff = cv.t_eff;
        rec.lambda_min = cv.lambda_min;
    }
    rec.beta = Some(g.root.beta);
    rec.validity.expansion_valid = g.report.expansion_valid;
    rec.validity.bistable_suspect = g.n_stable > 1;
}

/// Continuation state carried along one Ω sweep.
#[derive(Debug, Clone, Default)]
pub struct Continuation {
    seeds: Vec<Complex64>,
    prev: Option<Complex64>,
    count: usize,
}

pub fn gaussian_point(
    omega: f64,
    drive: f64,
    cfg: &ScanConfig,
    cont: &mut Continuation,
) -> ScanPointRecord {
    let mut rec = ScanPointRecord::empty(omega, drive, cfg.gamma, cfg.twice_j, Mode::Gaussian);
    let p = match ModelParams::from_ratios(omega, drive, cfg.gamma, cfg.twice_j.unwrap_or(2)) {
        Ok(p) => p,
        Err(e) => return rec.fail(&e),
    };
    let fresh = cont.count % cfg.refresh == 0;
    cont.count += 1;
    let j = cfg.twice_j.map(|t| t as f64 / 2.0);
    let g = match gaussian_pick(&p, j, &cont.seeds, cont.prev, fresh, cfg.grid, None) {
        Ok(g) => g,
        Err(e) => {
            cont.prev = None;
            return rec.fail(&e);
        }
    };
    fill_gaussian(&mut rec, &g);
    rec.electron = g.root.electron.into();
    rec.nuclear_over_j = g.root.nuclear0.into();
    let d = g.report.drift.adr();
    rec.adr_re = d.re;
    rec.adr_im = d.im;
    rec.c_witness = g.report.witness.map_or(f64::NAN, |w| w.c);
    rec.validity.truncation_ok = true;
    rec.validity.converged = g.root.residual <= 1e-10;
    rec.phase = classify_phase(&PhaseInputs {
        mode: Mode::Gaussian,
        omega_over_omega0: omega,
        nuclear_z: g.root.nuclear0.z,
        drift: Some((g.report.drift.stable(), g.report.drift.overdamped)),
        exact_bistable: false,
        exact_adr_im: None,
    });
    cont.prev = Some(g.root.beta);
    cont.seeds = g.all.iter().flat_map(|&b| [b, partner(b)]).collect();
    rec
}

pub fn exact_point(omega: f64, drive: f64, cfg: &ScanConfig) -> ScanPointRecord {
    let rec = ScanPointRecord::empty(omega, drive, cfg.gamma, cfg.twice_j, Mode::Exact);
    let Some(twice_j) = cfg.twice_j else {
        return rec.fail(&Error::Precondition("exact mode requires J".into()));
    };
    let run = || -> Result<ScanPointRecord> {
        let p = ModelParams::from_ratios(omega, drive, cfg.gamma, twice_j)?;
        let l = build_liouvillian(&p)?;
        let opts = ExactOptions { null_tol: cfg.null_tol, ..ExactOptions::default() };
        let an = analyze(&l, &opts)?;
        drop(l);
        let obs = observables(&an.steady.rho);
        let mut rec = rec.clone();
        rec.adr_re = an.spectrum.adr.re;
        rec.adr_im = an.spectrum.adr.im;
        rec.electron = obs.spins.s;
        rec.nuclear_over_j = obs.spins.i_over_j;
        rec.c_witness = obs.witness();
        rec.bistable = an.spectrum.null_multiplicity >= 2;
        rec.validity.truncation_ok = true;
        rec.validity.converged = an.steady.residual <= 1e-8 * p.a.max(1.0);
        let g = gaussian_pick(&p, Some(p.j()), &[], None, true, cfg.grid, Some(obs.spins.i_over_j)).ok();
        if let Some(g) = &g {
            fill_gaussian(&mut rec, g);
            rec.validity.bistable_suspect = false;
        } else {
            rec.validity.expansion_valid = false;
        }
        rec.phase = classify_phase(&PhaseInputs {
            mode: Mode::Exact,
            omega_over_omega0: omega,
            nuclear_z: obs.spins.i_over_j[2],
            drift: g.as_ref().map(|g| (g.report.drift.stable(), g.report.drift.overdamped)),
            exact_bistable: rec.bistable,
            exact_adr_im: Some(an.spectrum.adr.im.abs()),
        });
        Ok(rec)
    };
    match run() {
        Ok(r) => r,
        Err(e) => rec.fail(&e),
    }
}

/// All grid points, sorted by (ω, Ω). Gaussian rows run in parallel, each
/// row sweeping Ω upward with root continuation; exact points run serially
/// to bound memory.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanPointRecord>> {
    cfg.validate()?;
    let omegas = cfg.omega.values();
    let drives = cfg.drive.values();
    let records = match cfg.mode {
        Mode::Gaussian => omegas
            .par_iter()
            .map(|&w| {
                let mut cont = Continuation::default();
                drives.iter().map(|&d| gaussian_point(w, d, cfg, &mut cont)).collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .concat(),
        Mode::Exact => omegas
            .iter()
            .flat_map(|&w| drives.iter().map(move |&d| (w, d)))
            .map(|(w, d)| exact_point(w, d, cfg))
            .collect(),
    };
    Ok(records)
}

pub fn write_csv<W: Write>(w: W, records: &[ScanPointRecord], timestamp: Option<&str>) -> Result<()> {
    let io = |e: std::io::Error| Error::Numerical(format!("write failed: {e}"));
    let mut w = w;
    if let Some(ts) = timestamp {
        writeln!(w, "# phasescan schema v{CSV_SCHEMA_VERSION} generated {ts}").map_err(io)?;
    }
    let mut csv = csv::Writer::from_writer(w);
    let cerr = |e: csv::Error| Error::Numerical(format!("csv write failed: {e}"));
    csv.write_record(CSV_COLUMNS).map_err(cerr)?;
    for r in records {
        csv.write_record(r.csv_row()).map_err(cerr)?;
    }
    csv.flush().map_err(io)
}

pub fn write_json<W: Write>(w: W, records: &[ScanPointRecord]) -> Result<()> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, records).map_err(|e| Error::Numerical(format!("json write failed: {e}")))?;
    writeln!(w).map_err(|e| Error::Numerical(format!("write failed: {e}")))
}

/// Seconds since the Unix epoch, for the CSV header line.
pub fn unix_timestamp() -> String {
    let t = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix={t}")
}
