use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ritz-spline"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn column(csv: &str, col: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn project_writes_q_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["project", "--function", "x^6", "--p", "2", "--k", "1", "--q", "2", "--projector", "q", "--uniform", "0", "--out", "q.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = column(&fs::read_to_string(dir.path().join("q.csv")).unwrap(), 1);
    assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12 && (c[2] - 3.0).abs() < 1e-12);
    for f in ["q_knots.csv", "q_errors.csv", "q_boundary.csv", "q_moments.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn project_ritz_adds_e_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["project", "--function", "x6", "--p", "2", "--k", "1", "--q", "2", "--projector", "ritz", "--uniform", "0", "--out", "r.json", "--format", "json"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let e: Vec<f64> = serde_json::from_value(v["e_polynomial"].clone()).unwrap();
    assert!((e[0] - 9.0 / 28.0).abs() < 1e-10 && (e[1] + 33.0 / 14.0).abs() < 1e-10);
}

#[test]
fn validation_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["project", "--p", "2", "--k", "1", "--q", "2"],
        &["project", "--function", "x^6", "--p", "2", "--k", "1", "--q", "3"],
        &["project", "--function", "tanh(x)", "--p", "2", "--k", "1"],
        &["converge", "--function", "sin4x", "--p-list", "3", "--q", "2", "--l-list", "3"],
        &["constants", "--table", "c", "--p", "3", "--k", "5", "--r", "2"],
        &["eig", "--p", "1", "--elements", "8"],
    ];
    for args in cases {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["project", "--function", "x^6", "--p", "2", "--k", "1", "--q", "3"], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("q <= k+1"));
}

#[test]
fn converge_layouts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["converge", "--function", "sin(4*x)", "--p-list", "2,3,4", "--q", "2", "--l-list", "0,1", "--levels", "5", "--out-dir", "conv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("conv/error_q_p3_l0.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "h,err_l0,eoc_l0");
    assert_eq!(csv.lines().count(), 6);
    let eoc = csv.lines().last().unwrap().split(',').nth(2).unwrap().parse::<f64>().unwrap();
    assert!((eoc - 4.0).abs() < 0.15);
    assert!(fs::read_to_string(dir.path().join("conv/error_q.svg")).unwrap().contains("<svg"));

    let out = run(
        &["converge", "--function", "sin4x", "--p-list", "3", "--q", "2", "--l-list", "0", "--levels", "1", "--out-dir", "one"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("one/error_q_p3_l0.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "h,err_l0");

    let out = run(
        &["converge", "--function", "sin4x", "--p-list", "3,4", "--q", "2", "--l-list", "0,1", "--study", "rq-diff", "--out-dir", "rq"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("rq/rq-diff_p4_l1.csv").exists());
}

#[test]
fn constants_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["constants", "--table", "schultz-gap", "--q-max", "8"], dir.path());
    assert!(out.status.success());
    let gaps = column(&String::from_utf8(out.stdout).unwrap(), 2);
    assert_eq!(gaps.len(), 36);
    assert!(gaps.iter().all(|&g| g >= 0.0));

    let out = run(&["constants", "--table", "c", "--p", "3", "--k", "2", "--r", "2"], dir.path());
    let c = column(&String::from_utf8(out.stdout).unwrap(), 3);
    assert!((c[0] - 0.1013211836).abs() < 1e-10);

    let out = run(&["constants", "--table", "d", "--p", "0"], dir.path());
    assert_eq!(column(&String::from_utf8(out.stdout).unwrap(), 1), vec![0.0]);
}

#[test]
fn eig_report_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["eig", "--p", "3", "--elements", "20", "--out", "eig.csv"], dir.path());
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("eig.csv")).unwrap();
    let lam = column(&csv, 1);
    assert!((lam[0] / 500.56 - 1.0).abs() < 1e-3);
    assert!(dir.path().join("eig.svg").exists());

    let out = run(&["eig", "--p", "3", "--elements", "20", "--threshold", "1.0"], dir.path());
    let observed = column(&String::from_utf8(out.stdout).unwrap(), 5);
    assert!(observed.iter().all(|&f| f == 0.0));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["converge", "--function", "runge", "--p-list", "2,3", "--q", "1", "--l-list", "0,1", "--levels", "4", "--format", "json", "--out-dir"];
    let mut a = args.to_vec();
    a.push("a");
    let mut b = args.to_vec();
    b.push("b");
    assert!(run(&a, dir.path()).status.success());
    assert!(run(&b, dir.path()).status.success());
    for name in ["error_q_p2_l0.json", "error_q_p3_l1.json", "error_q.svg"] {
        let x = fs::read(dir.path().join("a").join(name)).unwrap();
        let y = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let e1 = run(&["eig", "--p", "4", "--elements", "12", "--format", "json"], dir.path()).stdout;
    let e2 = run(&["eig", "--p", "4", "--elements", "12", "--format", "json"], dir.path()).stdout;
    assert_eq!(e1, e2);
}
