//! Coarse 2D shock runs checked against stored solutions.
//! `HWENO_BLESS=1` rewrites the stored files from the current build.

use std::path::{Path, PathBuf};
use std::process::Command;

use hweno_bench::output::Table;

fn golden(name: &str, args: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hweno-bench"))
        .args(args)
        .args(["--dump-solution", "--out", dir.path().to_str().unwrap()])
        .env_remove("HWENO_WORKERS")
        .output()
        .expect("binary runs");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let got = dir.path().join("solution.csv");
    let stored: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var("HWENO_BLESS").is_ok_and(|v| v == "1") {
        std::fs::copy(&got, &stored).unwrap();
        return;
    }
    let (a, b) = (Table::read(&got).unwrap(), Table::read(&stored).unwrap());
    assert_eq!(a.header, b.header);
    assert_eq!(a.rows.len(), b.rows.len());
    for (k, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0), "{name} row {k}: {x} vs {y}");
        }
    }
}

#[test]
fn double_mach_reflection() {
    golden("dmr_48x12.csv", &["--problem", "dmr", "--nx", "48", "--ny", "12"]);
}

#[test]
fn forward_step() {
    golden("step_45x15_t1.csv", &["--problem", "step", "--nx", "45", "--ny", "15", "--t-end", "1"]);
}
