use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ruggeri");

const E4: &str = "[system]\nkind = e4\nR = 1\nc = 1.5\neta = 10\neps = 1\n";
const L5: &str = "[system]\nkind = l5\nR = 1\nc = 1.5\neta = 1\neps = 1\ndelta = 1\nchi = 1\n";

fn ruggeri(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn summary(dir: &Path) -> Vec<(String, String)> {
    fs::read_to_string(dir.join("summary"))
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

const E4_ANALYZE: [&str; 14] = [
    "analyze", "--kind", "e4", "--R", "1", "--c", "1.5", "--eps", "1", "--rho", "1", "--theta", "1", "--sigma",
];

#[test]
fn analyze_e4_reports_fast_speed_and_nonzero_gnl() {
    let mut args = E4_ANALYZE.to_vec();
    args.push("0");
    let out = ruggeri(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let fast = text.lines().find(|l| l.starts_with("fast+")).unwrap();
    assert!(fast.contains("1.632993"), "{fast}");
    let gnl: f64 = fast.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!(gnl.abs() > 1.0);
}

#[test]
fn analyze_l5_prints_ordering_line() {
    let out = ruggeri(&[
        "analyze", "--kind", "l5", "--R", "1", "--c", "1.5", "--eps", "1", "--delta", "1", "--tau", "0.5", "--theta", "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("ordering: 0 < 0.4213 < 5 < 7.6667 < 7.9120 OK"));
}

#[test]
fn analyze_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("modes.csv");
    let mut args = E4_ANALYZE.to_vec();
    args.extend(["0.2", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&ruggeri(&args)), 0);
    let (header, rows) = parse_csv(&fs::read_to_string(&path).unwrap());
    assert_eq!(header[..4], ["mode", "lambda", "lambda_generic", "mu"]);
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let lambda: f64 = row[1].parse().unwrap();
        let generic: f64 = row[2].parse().unwrap();
        assert!((lambda - generic).abs() < 1e-9);
        assert_eq!(row.last().unwrap(), "true");
    }
}

#[test]
fn analyze_exit_codes() {
    // Missing --eps.
    let out = ruggeri(&["analyze", "--kind", "e4", "--R", "1", "--c", "1.5", "--rho", "1", "--theta", "1"]);
    assert_eq!(code(&out), 64);
    // Missing state flag for the kind.
    let out = ruggeri(&["analyze", "--kind", "l5", "--R", "1", "--c", "1.5", "--eps", "1", "--delta", "1", "--theta", "1"]);
    assert_eq!(code(&out), 64);
    // Inadmissible state.
    let mut args = E4_ANALYZE.to_vec();
    args.extend(["0", "--u", "-1"]);
    args[10] = "-1";
    let out = ruggeri(&args);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("rho"));
    // A zero residual tolerance cannot be met in floating point.
    let mut args = E4_ANALYZE.to_vec();
    args.extend(["0", "--residual-tol", "0"]);
    let out = ruggeri(&args);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("oracle disagreement"));
}

#[test]
fn usage_errors_exit_64_and_help_exits_0() {
    assert_eq!(code(&ruggeri(&[])), 64);
    assert_eq!(code(&ruggeri(&["frobnicate"])), 64);
    assert_eq!(code(&ruggeri(&["--help"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), E4);
    assert_eq!(code(&ruggeri(&["simulate", "--config", &cfg, "--set", "no-dot"])), 64);
}

#[test]
fn simulate_zero_amplitude_conserves_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{E4}[perturbation]\namplitude = 0\n[run]\nt_end = 0.5\nmax_snapshots = 3\n[grid]\nn_cells = 64\n"),
    );
    let out_dir = dir.path().join("out");
    let out = ruggeri(&["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let (header, rows) = parse_csv(&fs::read_to_string(out_dir.join("series.csv")).unwrap());
    assert_eq!(header, ["t", "max_slope_u", "max_slope_all", "mass", "momentum", "energy", "ball_dist"]);
    for col in 3..6 {
        let first: f64 = rows[0][col].parse().unwrap();
        for row in &rows {
            let v: f64 = row[col].parse().unwrap();
            assert!((v - first).abs() <= 1e-12 * first.abs().max(1.0));
        }
    }

    let keys: Vec<String> = summary(&out_dir).into_iter().map(|(k, _)| k).collect();
    assert_eq!(keys, ["status", "t_blowup_estimate", "max_ball_dist", "n_cells", "t_end_reached"]);
    assert_eq!(summary(&out_dir)[0].1, "smooth_until_t_end");

    let snaps: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("snapshot_"))
        .collect();
    assert!(!snaps.is_empty() && snaps.len() <= 3);
    let text = fs::read_to_string(out_dir.join(&snaps[0])).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,rho,u,theta,sigma");
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn simulate_detects_blowup() {
    let dir = tempfile::tempdir().unwrap();
    // A coarse grid cannot reach the default 50x growth, so the factor is lowered.
    let cfg = write_config(
        dir.path(),
        &format!("{E4}[perturbation]\namplitude = 0.3\n[run]\nblowup_slope_factor = 10\n[grid]\nn_cells = 256\n"),
    );
    let out_dir = dir.path().join("out");
    let out = ruggeri(&["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let s = summary(&out_dir);
    assert_eq!(s[0], ("status".into(), "blowup_detected".into()));
    let t_b: f64 = s[1].1.parse().unwrap();
    let t_end: f64 = s[4].1.parse().unwrap();
    assert!(t_b >= t_end && t_b < 10.0, "t_b {t_b}, t_end {t_end}");
    let dist: f64 = s[2].1.parse().unwrap();
    assert!(dist < 0.5);
}

#[test]
fn simulate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{E4}[perturbation]\namplitude = 0.45\n[grid]\nn_cells = 64\n"));
    let out = ruggeri(&["simulate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("perturbation exceeds ball radius"));

    let out = ruggeri(&["simulate", "--config", &cfg, "--set", "grid.n_celss=64"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("grid.n_celss"));

    let missing = dir.path().join("missing.cfg");
    let out = ruggeri(&["simulate", "--config", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("missing.cfg"));

    let out = ruggeri(&["simulate", "--config", &write_config(dir.path(), L5)]);
    assert_eq!(code(&out), 1);
}

#[test]
fn threshold_scan_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{L5}[scan]\nwhat = threshold\nthetas = 1\n"));
    let out = ruggeri(&["scan", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header[..3], ["theta", "tau_max_closed", "tau_max_bisect"]);
    let closed: f64 = rows[0][1].parse().unwrap();
    let bisect: f64 = rows[0][2].parse().unwrap();
    assert!((closed - 0.6f64.sqrt()).abs() < 1e-12);
    assert!((closed - bisect).abs() < 1e-8);
}

#[test]
fn one_point_scan_is_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{L5}[scan]\ntaus = 0.5\nthetas = 1\n"));
    let out = ruggeri(&["scan", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let lambda: f64 = rows[0][2].parse().unwrap();
    assert!((lambda * lambda - (25.0 + 505f64.sqrt()) / 6.0).abs() < 1e-12);
}

#[test]
fn fast_scan_below_threshold_keeps_sign() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{L5}[scan]\nmode = fast+\ntau_min = 0.05\ntau_max = 0.77\ntau_points = 40\n"),
    );
    let out_file = dir.path().join("scan.csv");
    let out = ruggeri(&["scan", "--config", &cfg, "--out", out_file.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = parse_csv(&fs::read_to_string(out_file).unwrap());
    let sign = header.iter().position(|h| h == "sign").unwrap();
    assert_eq!(rows.len(), 40);
    assert!(rows.iter().all(|r| r[sign] == "1"));
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{E4}[run]\nt_end = 0.3\n[grid]\nn_cells = 64\n[sweep]\namplitudes = 0, 0.01, 0.05\n"),
    );
    let run = |threads: &str| {
        Command::new(BIN)
            .args(["sweep", "--config", &cfg])
            .env("RUGGERI_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let (_, rows) = parse_csv(&stdout(&a));
    assert_eq!(rows.len(), 3);
    assert!(stderr(&a).contains("bracket: none"));

    assert_eq!(code(&run("zero")), 1);
    let unsorted = write_config(dir.path(), &format!("{E4}[grid]\nn_cells = 64\n[sweep]\namplitudes = 0.1, 0.05\n"));
    assert_eq!(code(&ruggeri(&["sweep", "--config", &unsorted])), 1);
}
