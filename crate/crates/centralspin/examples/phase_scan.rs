//! Gaussian phase scan along omega = 1.5 omega0, written as CSV to stdout.
use centralspin::scan::{run_scan, write_csv, Axis, ScanConfig};

fn main() -> centralspin::Result<()> {
    let cfg = ScanConfig {
        omega: Axis { min: 1.5, max: 1.5, steps: 1 },
        drive: Axis { min: 0.0, max: 2.5, steps: 26 },
        ..ScanConfig::default()
    };
    let records = run_scan(&cfg)?;
    for r in &records {
        eprintln!("Omega/Omega0 = {:.2}: {:?}", r.drive_over_drive0, r.phase);
    }
    write_csv(&mut std::io::stdout().lock(), &records, None)?;
    Ok(())
}
