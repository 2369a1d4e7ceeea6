use std::fs;
use std::process::{Command, Output};

use obstacle1d::dump::read_dump;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstacle1d"))
        .args(args)
        .output()
        .expect("spawn cli")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_csv_shape_and_precision() {
    let out = stdout(&run(&[
        "table",
        "--f-list",
        "-6,-14",
        "--nodes",
        "81",
        "--uzawa-iters",
        "500",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(
        lines[0],
        "f,half_energy_err,energy_gap,energy_index,majorant,majorant_index,infeasibility"
    );
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 7);
        for c in cells {
            let (mantissa, _) = c.split_once('e').expect("scientific notation");
            let digits = mantissa.chars().filter(char::is_ascii_digit).count();
            assert!(digits >= 6, "{c}");
            c.parse::<f64>().unwrap();
        }
    }
    assert!(lines[1].starts_with("-6.00000e0,"));
    assert!(lines[2].starts_with("-1.40000e1,"));
}

#[test]
fn table_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = run(&[
            "table",
            "--nodes",
            "161",
            "--uzawa-iters",
            "300",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 17);
}

#[test]
fn failing_stage_is_named() {
    let o = run(&["solve", "--nodes", "2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("mesh failed"));

    let o = run(&["table", "--f-list", "-10", "--nodes", "41", "--rho", "-1"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(
        err.contains("table failed") && err.contains("f = -10"),
        "{err}"
    );

    let o = run(&[
        "table",
        "--nodes",
        "41",
        "--out",
        "/nonexistent-dir/x.csv",
        "--f-list",
        "-5",
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("csv output failed"));
}

#[test]
fn solve_dumps_snapshots_and_exact_solution() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "solve",
        "--f",
        "-14",
        "--nodes",
        "161",
        "--uzawa-iters",
        "50",
        "--snapshots",
        "1,2,50",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    stdout(&o);
    for name in [
        "v_iter_00001.dat",
        "v_iter_00002.dat",
        "v_iter_00050.dat",
        "u_exact.dat",
        "lambda_exact.dat",
        "v_final.dat",
        "mu_final.dat",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let d = read_dump(&dir.path().join("v_iter_00002.dat")).unwrap();
    assert_eq!(d.get("iteration"), Some("2"));
    assert_eq!(d.get("role"), Some("v"));
    assert_eq!(d.points.len(), 161);
    let lam = read_dump(&dir.path().join("lambda_exact.dat")).unwrap();
    assert_eq!(lam.points.len(), 160);
    assert_eq!(lam.get("kind"), Some("piecewise_constant"));
}

#[test]
fn majorant_history_csv_is_monotone_between_updates() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "majorant",
        "--f",
        "-14",
        "--nodes",
        "81",
        "--uzawa-iters",
        "100",
        "--majorant-iters",
        "400",
        "--beta-updates",
        "200,400",
        "--snapshots",
        "1,20,400",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let summary = stdout(&o);
    assert!(summary.contains("total,"));
    let hist = fs::read_to_string(dir.path().join("history.csv")).unwrap();
    let mut lines = hist.lines();
    assert_eq!(
        lines.next(),
        Some("iteration,beta,term_flux,term_residual,term_obstacle,total")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 400);
    for w in rows.windows(2) {
        if w[0][1] == w[1][1] {
            assert!(w[1][5] <= w[0][5] * (1.0 + 1e-5), "{:?}", w);
        }
    }
    for k in ["00001", "00020", "00400"] {
        assert!(dir.path().join(format!("tau_iter_{k}.dat")).exists());
        assert!(dir.path().join(format!("mu_iter_{k}.dat")).exists());
    }
}

#[test]
fn bench_exact_prints_dump() {
    let out = stdout(&run(&["bench-exact", "--f", "-6", "--nodes", "11"]));
    let d = obstacle1d::dump::parse_dump(&out).unwrap();
    assert_eq!(d.get("regime"), Some("inactive"));
    assert_eq!(d.points.len(), 11);
    let (x, u) = d.points[5];
    assert_eq!(x, 0.5);
    assert!((u - (-6.0 / 2.0 * 0.25)).abs() < 1e-15);
    assert!((d.get("energy").unwrap().parse::<f64>().unwrap() + 36.0 / 24.0).abs() < 1e-14);
}
