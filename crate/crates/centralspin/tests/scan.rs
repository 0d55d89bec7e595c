use centralspin::scan::{
    classify_phase, gaussian_point, run_scan, spin_pumping_rate_probe, write_csv, write_json, Axis, Continuation,
    Format, InitialState, Mode, Phase, PhaseInputs, ProbeMethod, ScanConfig, CSV_COLUMNS,
};
use centralspin::{Error, ModelParams};
use std::process::Command;

fn gaussian_cfg(omega: Axis, drive: Axis) -> ScanConfig {
    ScanConfig { omega, drive, ..ScanConfig::default() }
}

fn csv_bytes(cfg: &ScanConfig) -> Vec<u8> {
    let recs = run_scan(cfg).unwrap();
    let mut out = vec![];
    write_csv(&mut out, &recs, None).unwrap();
    out
}

#[test]
fn config_grammar() {
    let text = "# grid\nomega_min = 0.5\nomega_max = 1.5 # inline\nomega_steps = 3\n\nOmega_steps = 0\nmode = exact\nJ = 7.5\nformat = json\ntimestamp = no\n";
    let cfg = ScanConfig::parse(text).unwrap();
    assert_eq!(cfg.omega.values(), vec![0.5, 1.0, 1.5]);
    assert!(cfg.drive.values().is_empty());
    assert_eq!(cfg.mode, Mode::Exact);
    assert_eq!(cfg.twice_j, Some(15));
    assert_eq!(cfg.format, Format::Json);
    assert!(!cfg.timestamp);
}

#[test]
fn config_errors_carry_line_numbers() {
    let cases = [
        ("gamma = 1\nfoo = 2\n", 2),
        ("\n\ngamma = x\n", 3),
        ("J = 1.25\n", 1),
        ("gamma = 1\ngamma = 2\n", 2),
        ("mode = fast\n", 1),
        ("just text\n", 1),
    ];
    for (text, line) in cases {
        match ScanConfig::parse(text) {
            Err(Error::Config { line: l, msg }) => {
                assert_eq!(l, line, "{text:?}: {msg}");
                assert!(Error::Config { line: l, msg }.to_string().contains(&format!("line {line}")));
            }
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    assert!(matches!(ScanConfig::parse("mode = exact\n"), Err(Error::Config { line: 0, .. })));
    assert!(matches!(ScanConfig::parse("omega_min = 2\nomega_max = 1\n"), Err(Error::Config { .. })));
    assert!(matches!(ScanConfig::parse("gamma = 0\n"), Err(Error::Config { .. })));
}

#[test]
fn empty_grid_writes_header_only() {
    let cfg = gaussian_cfg(Axis { min: 0.0, max: 1.0, steps: 0 }, Axis { min: 0.0, max: 1.0, steps: 5 });
    let text = String::from_utf8(csv_bytes(&cfg)).unwrap();
    assert_eq!(text, format!("{}\n", CSV_COLUMNS.join(",")));
    let mut json = vec![];
    write_json(&mut json, &[]).unwrap();
    assert_eq!(String::from_utf8(json).unwrap().trim(), "[]");
}

#[test]
fn scans_are_deterministic() {
    let cfg = gaussian_cfg(Axis { min: 0.5, max: 1.5, steps: 3 }, Axis { min: 0.0, max: 2.0, steps: 9 });
    let a = csv_bytes(&cfg);
    let b = csv_bytes(&cfg);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 27);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS.to_vec());
    let mut last = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for row in rdr.records() {
        let row = row.unwrap();
        let key: (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!(key > last);
        last = key;
    }
}

#[test]
fn phase_labels() {
    let cfg = ScanConfig::default();
    let at = |w: f64, d: f64| gaussian_point(w, d, &cfg, &mut Continuation::default());
    let r = at(0.5, 0.8);
    assert_eq!(r.phase, Phase::D);
    assert_eq!(r.drift_im, 0.0);
    assert_eq!(at(1.5, 0.5).phase, Phase::A);
    let b = at(1.5, 2.0);
    assert_eq!(b.phase, Phase::B);
    assert!(b.nuclear_over_j[2] > 0.0);
    assert_eq!(at(0.5, 2.0).phase, Phase::Supercritical);

    let base = PhaseInputs {
        mode: Mode::Exact,
        omega_over_omega0: 1.5,
        nuclear_z: -0.5,
        drift: Some((true, false)),
        exact_bistable: true,
        exact_adr_im: Some(0.0),
    };
    assert_eq!(classify_phase(&base), Phase::C);
    assert_eq!(classify_phase(&PhaseInputs { mode: Mode::Gaussian, ..base }), Phase::Invalid);
    assert_eq!(classify_phase(&PhaseInputs { nuclear_z: f64::NAN, ..base }), Phase::Invalid);
    let plain = PhaseInputs { exact_bistable: false, ..base };
    assert_eq!(classify_phase(&plain), Phase::A);
    assert_eq!(classify_phase(&PhaseInputs { drift: Some((true, true)), exact_adr_im: Some(0.2), ..plain }), Phase::A);
    assert_eq!(classify_phase(&PhaseInputs { drift: Some((true, true)), ..plain }), Phase::D);
    assert_eq!(classify_phase(&PhaseInputs { mode: Mode::Gaussian, drift: Some((false, false)), ..plain }), Phase::Invalid);
}

#[test]
fn normal_and_anomalous_records_are_stable() {
    let cfg = gaussian_cfg(Axis { min: 1.5, max: 1.5, steps: 1 }, Axis { min: 0.0, max: 2.5, steps: 51 });
    let recs = run_scan(&cfg).unwrap();
    for r in &recs {
        if matches!(r.phase, Phase::A | Phase::B) {
            assert!(r.drift_re < 0.0, "{r:?}");
        }
    }
    // past their minimum near Ω = 2Ω₀ the fluctuations grow with the drive
    let b: Vec<f64> = recs.iter().filter(|r| r.drive_over_drive0 >= 2.0 - 1e-9).map(|r| r.d_purity).collect();
    assert!(b.windows(2).all(|w| w[1] > w[0]), "{b:?}");
}

#[test]
fn pump_probe_follows_decay_rate() {
    let p = ModelParams::from_ratios(0.5, 1.0, 0.1, 40).unwrap();
    let r = spin_pumping_rate_probe(&p, InitialState::Mixed, ProbeMethod::Propagation).unwrap();
    let adr_ratio = r.adr.re / r.baseline_adr.re;
    assert!(r.speedup > 1.0);
    assert!((r.speedup / adr_ratio - 1.0).abs() <= 0.25, "speedup {} vs ADR ratio {adr_ratio}", r.speedup);
    let s = spin_pumping_rate_probe(&p, InitialState::Mixed, ProbeMethod::Spectral).unwrap();
    assert!((s.speedup - adr_ratio).abs() < 1e-9 * adr_ratio);
    let too_big = ModelParams::from_ratios(0.5, 1.0, 0.1, 100).unwrap();
    assert!(matches!(
        spin_pumping_rate_probe(&too_big, InitialState::Mixed, ProbeMethod::Propagation),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn pump_probe_speedup_in_enhanced_wedge() {
    let p = ModelParams::from_ratios(0.5, 1.0, 0.1, 80).unwrap();
    let r = spin_pumping_rate_probe(&p, InitialState::Mixed, ProbeMethod::Propagation).unwrap();
    assert!(r.speedup >= 3.0, "speedup {}", r.speedup);
    assert!(r.baseline_time > r.time);
}

fn phasescan(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_phasescan")).args(args).output().unwrap()
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = phasescan(&[
        "scan", "--omega-min", "1.5", "--omega-max", "1.5", "--omega-steps", "1", "--Omega-min", "0.5",
        "--Omega-max", "2.0", "--Omega-steps", "4", "--no-timestamp", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("omega_over_omega0,Omega_over_Omega0,"));
    assert_eq!(text.lines().count(), 5);

    let o = phasescan(&["scan", "--omega-steps", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("# phasescan schema v1 generated unix="));
    assert_eq!(stdout.lines().count(), 2);

    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "gamma = 1\nspeed = 3\n").unwrap();
    let o = phasescan(&["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = phasescan(&["point", "--omega", "1.5", "--Omega", "0.5", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(2));
    let o = phasescan(&["point", "--omega", "1.5", "--Omega", "0.5", "--J", "0.3"]);
    assert_eq!(o.status.code(), Some(2));

    // an exact point beyond the memory budget is reported, not attempted
    let o = phasescan(&["point", "--omega", "1", "--Omega", "0.5", "--mode", "exact", "--J", "5000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["phase"], "invalid");
    assert!(v[0]["error"].as_str().unwrap().contains("memory budget"));

    let o = phasescan(&["point", "--omega", "1.0", "--Omega", "0.5", "--mode", "exact", "--J", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["J"], 10.0);
    assert!((v[0]["electron"][2].as_f64().unwrap() + 0.5).abs() < 0.05);

    let o = phasescan(&["segment-x", "--Omega", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["xi_y2"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let o = phasescan(&["segment-x", "--Omega", "1.2"]);
    assert_eq!(o.status.code(), Some(1));

    let o = phasescan(&["pump-probe", "--omega", "0.5", "--Omega", "1.0", "--gamma", "0.1", "--J", "5", "--method", "spectral"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["speedup"].as_f64().unwrap() > 0.0);

    let o = phasescan(&["bistable", "--omega", "1.5", "--Omega", "1.3", "--J", "20", "--null-tol", "1.0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["rho_lo"]["nuclear_over_j"][2].as_f64().unwrap() <= v["rho_up"]["nuclear_over_j"][2].as_f64().unwrap());
}
