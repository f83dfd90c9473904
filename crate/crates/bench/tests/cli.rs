use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hweno_bench::output::{Table, CONVERGENCE_HEADER, HISTORY_HEADER};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hweno-bench"))
        .args(args)
        .env_remove("HWENO_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn lax_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["--problem", "lax", "--nx", "200", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.starts_with("lax 200 steps="), "{line}");
    assert!(line.contains("t=0.16"), "{line}");
}

#[test]
fn bad_arguments_name_the_offender() {
    let o = bench(&["--problem", "lax", "--scheme", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bogus") && err.contains("hybrid") && err.contains("limit-all"), "{err}");

    let o = bench(&["--problem", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere"));

    let o = bench(&["--problem", "lax", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--frobnicate"));

    let o = bench(&["--problem", "lax", "--nx", "many"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("many"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nproblem = burgers1d\nnx = 16\nt-end = 0.05\n").unwrap();
    let out = dir.path().join("o");
    let o = bench(&["--config", cfg.to_str().unwrap(), "--nx", "8", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("burgers1d 8 steps="), "{}", stdout(&o));
}

#[test]
fn solution_dump_shape_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&[
        "--problem",
        "burgers1d",
        "--nx",
        "4",
        "--t-end",
        "0.01",
        "--dump-solution",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.path().join("solution.csv");
    let text = read(&path);
    let t = Table::read(&path).unwrap();
    assert_eq!(t.header, ["x", "u_avg", "u_mom"]);
    assert_eq!(t.rows.len(), 4);
    assert!(t.rows.iter().all(|r| r.len() == 3));
    assert_eq!(t.to_csv(), text);
    let again = Table::parse(&t.to_csv(), "mem").unwrap();
    assert_eq!(again, t);
}

#[test]
fn two_d_dump_skips_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&[
        "--problem",
        "step",
        "--nx",
        "30",
        "--ny",
        "10",
        "--t-end",
        "0.01",
        "--dump-solution",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read(&dir.path().join("solution.csv")).unwrap();
    assert_eq!(t.header, ["x", "y", "rho_avg", "rhou_avg", "rhov_avg", "E_avg"]);
    // 30x10 cells, 24x2 of them inside the step
    assert_eq!(t.rows.len(), 300 - 48);
    assert!(t.rows.iter().all(|r| !(r[0] > 0.6 && r[1] < 0.2)));
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let run = |w: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = bench(&[
            "--problem",
            "shu-osher",
            "--nx",
            "200",
            "--t-end",
            "0.3",
            "--dump-solution",
            "--dump-troubled=full",
            "--workers",
            w,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        ["solution.csv", "troubled_history.csv", "troubled_cells.csv"].map(|f| read(&dir.path().join(f)))
    };
    let one = run("1");
    let three = run("3");
    assert_eq!(one, three);
    assert!(one[2].lines().count() > 1);
}

#[test]
fn zero_step_run_writes_header_only_history() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&[
        "--problem",
        "lax",
        "--nx",
        "50",
        "--t-end",
        "0",
        "--dump-troubled=full",
        "--dump-timings",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read(&dir.path().join("troubled_history.csv")), format!("{HISTORY_HEADER}\n"));
    assert_eq!(read(&dir.path().join("troubled_cells.csv")), "step,time,i\n");
    let timings = read(&dir.path().join("timings.csv"));
    assert_eq!(timings.lines().count(), 2);
    assert!(timings.starts_with("N,indicator,limit,reconstruct,flux,integrate,total,wall\n50,"));
}

#[test]
fn convergence_table_is_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["--problem", "burgers1d", "--convergence", "10,20,40", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
    let text = read(&dir.path().join("convergence.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CONVERGENCE_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["10", "20", "40"]);
    assert!(rows[0][2].is_empty() && rows[0][4].is_empty());
    for k in 1..3 {
        for (e, o) in [(1, 2), (3, 4)] {
            let coarse: f64 = rows[k - 1][e].parse().unwrap();
            let fine: f64 = rows[k][e].parse().unwrap();
            let written: f64 = rows[k][o].parse().unwrap();
            let recomputed = (coarse / fine).ln() / 2f64.ln();
            assert_eq!(format!("{recomputed:.5e}"), rows[k][o]);
            assert!((written - recomputed).abs() <= 5e-6 * recomputed.abs());
        }
        let l1_order: f64 = rows[k][2].parse().unwrap();
        assert!(l1_order > 4.0, "{l1_order}");
    }
}

#[test]
fn convergence_needs_an_exact_solution() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["--problem", "blast", "--convergence", "50,100", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("exact"), "{}", stderr(&o));
}

#[test]
fn runs_past_breaking_report_no_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["--problem", "burgers1d", "--nx", "40", "--t-end", "0.4775", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stdout(&o).contains("L1="));
}

#[test]
fn blowup_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["--problem", "blast", "--nx", "200", "--scheme", "linear-unlimited", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
