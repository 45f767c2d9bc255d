use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const FIG: &str = "g_se = 0.05\ng_ss = 0.03\nomega1 = 1.0\nomega2 = 1.1\ndt_s = 0.2\ngamma_frac = 0.95\n";

fn collsync(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_collsync"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> String {
    let out = dir.path().join("out");
    let path = dir.path().join(name);
    fs::write(&path, format!("{body}output = {:?}\n", out.to_str().unwrap())).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(dir: &TempDir, file: &str) -> String {
    fs::read_to_string(dir.path().join("out").join(file)).unwrap()
}

fn column(csv: &str, idx: usize) -> Vec<String> {
    csv.lines().skip(1).map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn reference_trace_files() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "fig.toml", &format!("{FIG}n_collisions = 2000\nwindow_width = 140\nwindow_overlap = 125\n"));
    let out = collsync(&["trace", &cfg], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let trace = read(&dir, "trace.csv");
    assert!(!trace.contains('\r'));
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("N,sx1,sx2,sy1,sy2,sz1,sz2,concurrence,mutual_info"));
    assert_eq!(lines.clone().count(), 2000);
    assert!(lines.next().unwrap().starts_with("1,"));
    for v in column(&trace, 1).iter().chain(&column(&trace, 2)) {
        let x: f64 = v.parse().unwrap();
        assert!((-1.0..=1.0).contains(&x));
    }

    let pearson = read(&dir, "pearson.csv");
    assert!(pearson.starts_with("window_start,c12\n"));
    let starts: Vec<usize> = column(&pearson, 0).iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(starts.len(), (2000 - 140) / 15 + 1);
    assert!(starts.iter().enumerate().all(|(k, &s)| s == 1 + 15 * k));
    let last: f64 = column(&pearson, 1).last().unwrap().parse().unwrap();
    assert!(last <= -0.9, "final C12 {last}");
}

#[test]
fn single_window_gives_one_pearson_row() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "one.toml", &format!("{FIG}n_collisions = 50\nwindow_width = 50\nwindow_overlap = 10\n"));
    assert!(collsync(&["trace", &cfg], &[]).status.success());
    assert_eq!(read(&dir, "pearson.csv").lines().count(), 2);
}

#[test]
fn free_precession_column() {
    let dir = TempDir::new().unwrap();
    let body = "g_se = 0\ng_ss = 0\nomega1 = 1.0\nomega2 = 1.1\ndt_s = 0.2\ngamma = 1.2\nn_collisions = 300\nwindow_width = 20\nwindow_overlap = 5\n";
    let cfg = write_config(&dir, "free.toml", body);
    assert!(collsync(&["trace", &cfg], &[]).status.success());
    let trace = read(&dir, "trace.csv");
    for (n, v) in column(&trace, 1).iter().enumerate() {
        let expected = ((n + 1) as f64 * 0.2).cos();
        assert!((v.parse::<f64>().unwrap() - expected).abs() <= 1e-10);
    }
}

#[test]
fn defaults_are_echoed() {
    let dir = TempDir::new().unwrap();
    let body = "g_se = 0.05\ng_ss = 0.03\nomega1 = 1\nomega2 = 1.1\ndt_s = 0.2\ngamma = 1.4923\nn_collisions = 30\nwindow_width = 10\nwindow_overlap = 5\n";
    let cfg = write_config(&dir, "d.toml", body);
    let out = collsync(&["trace", &cfg], &[]);
    assert!(out.status.success());
    let log = String::from_utf8_lossy(&out.stderr);
    for key in ["theta1", "phi1", "theta2", "phi2"] {
        assert!(log.contains(&format!("`{key}` not set")), "{log}");
    }
}

fn sweep_body() -> String {
    format!(
        "{FIG}n_collisions = 60\nwindow_width = 20\nwindow_overlap = 10\n[axis1]\nname = \"g_ss\"\nmin = 0.0\nmax = 0.05\ncount = 2\n[axis2]\nname = \"omega_ratio\"\nmin = 0.95\nmax = 1.05\ncount = 2\n"
    )
}

#[test]
fn sweep_is_reproducible_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    // Table keys must precede the tables, so `output` goes first here.
    let path = dir.path().join("s.toml");
    let out_dir = dir.path().join("out");
    fs::write(&path, format!("output = {:?}\n{}", out_dir.to_str().unwrap(), sweep_body())).unwrap();
    let cfg = path.to_str().unwrap();

    assert!(collsync(&["sweep", cfg], &[("COLLSYNC_THREADS", "1")]).status.success());
    let first = read(&dir, "sweep.csv");
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "axis1,axis2,c12");
    assert!(lines[1].starts_with("0.0000000000000000e0,9.4999999999999996e-1,"));
    assert!(lines[3].starts_with("5.0000000000000003e-2,"));

    assert!(collsync(&["sweep", cfg], &[("COLLSYNC_THREADS", "3")]).status.success());
    assert_eq!(read(&dir, "sweep.csv"), first);
    assert!(collsync(&["sweep", cfg], &[]).status.success());
    assert_eq!(read(&dir, "sweep.csv"), first);

    assert_eq!(collsync(&["sweep", cfg], &[("COLLSYNC_THREADS", "zero")]).status.code(), Some(1));
}

#[test]
fn paired_and_thermal_outputs() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "t.toml",
        &format!("{FIG}n_collisions = 80\nwindow_width = 40\nwindow_overlap = 20\ntemperatures = [[0, 0], [5, 5.5], [50, 55]]\n"),
    );
    assert!(collsync(&["compare-strategies", &cfg], &[]).status.success());
    for f in ["trace_keep.csv", "pearson_keep.csv", "trace_erase.csv", "pearson_erase.csv"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
    assert!(collsync(&["thermal-scan", &cfg], &[]).status.success());
    for k in 0..3 {
        assert_eq!(read(&dir, &format!("pearson_{k}.csv")).lines().count(), 4);
    }
    let summary = read(&dir, "thermal_scan.csv");
    assert_eq!(summary.lines().next(), Some("index,temp1,temp2,final_c12"));
    assert!(summary.lines().nth(2).unwrap().starts_with("1,5.0000000000000000e0,5.5000000000000000e0,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(collsync(&["--help"], &[]).status.code(), Some(0));
    assert_eq!(collsync(&["frobnicate"], &[]).status.code(), Some(1));
    assert_eq!(collsync(&["trace"], &[]).status.code(), Some(1));

    let bad = write_config(&dir, "bad.toml", &format!("{FIG}n_collisions = 200\nwindow_width = 140\nwindow_overlap = 140\n"));
    let out = collsync(&["trace", &bad], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window_overlap"));

    let run_cfg = write_config(&dir, "run.toml", &format!("{FIG}n_collisions = 30\nwindow_width = 10\nwindow_overlap = 5\n"));
    assert_eq!(collsync(&["sweep", &run_cfg], &[]).status.code(), Some(1));
    assert_eq!(collsync(&["thermal-scan", &run_cfg], &[]).status.code(), Some(1));

    let missing = dir.path().join("nope.toml");
    assert_eq!(collsync(&["trace", missing.to_str().unwrap()], &[]).status.code(), Some(2));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let unwritable = dir.path().join("u.toml");
    let target = Path::new(&blocker).join("sub");
    fs::write(&unwritable, format!("{FIG}n_collisions = 30\nwindow_width = 10\nwindow_overlap = 5\noutput = {:?}\n", target.to_str().unwrap())).unwrap();
    assert_eq!(collsync(&["trace", unwritable.to_str().unwrap()], &[]).status.code(), Some(2));
}
