use std::path::Path;

use massratio::cli::{run, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_OK};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["massratio"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eig_reports_every_route() {
    let (code, out, _) = call(&["eig", "--n", "1", "--eps", "0.1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("1.07115257"), "{out}");
    let (code, out, _) = call(&["eig", "--n", "2", "--eps", "1e-3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("0.279301662"), "{out}");
}

#[test]
fn solve_writes_profile() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("u.csv");
    let (code, out, err) = call(&[
        "solve",
        "--n",
        "1",
        "--eps",
        "0.1",
        "--d",
        "0.3",
        "--bc",
        "dirichlet",
        "--intervals",
        "256",
        "--out",
        path(&file),
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().next(), Some("r,u"));
    assert_eq!(text.lines().count(), 258);
}

#[test]
fn solve_above_threshold_is_invalid() {
    let (code, _, err) = call(&[
        "solve",
        "--n",
        "1",
        "--eps",
        "0.1",
        "--d",
        "2",
        "--bc",
        "dirichlet",
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(!err.is_empty());
}

#[test]
fn bad_arguments_are_invalid() {
    assert_eq!(call(&["eig", "--n", "1"]).0, EXIT_INVALID);
    assert_eq!(call(&["eig", "--n", "1", "--eps", "2"]).0, EXIT_INVALID);
    assert_eq!(call(&["frobnicate"]).0, EXIT_INVALID);
}

#[test]
fn verify_interval_passes_for_small_eps_only() {
    let (code, out, _) = call(&["verify", "--n", "1", "--eps", "1e-3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    let (code, out, _) = call(&["verify", "--n", "1", "--eps", "0.1"]);
    assert_eq!(code, EXIT_CHECK_FAILED, "{out}");
}

#[test]
fn verify_ball() {
    let (code, out, _) = call(&[
        "verify", "--n", "2", "--eps", "1e-3", "--c1", "0.05", "--c2", "0.2",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 6, "{out}");
    let (code, _, _) = call(&[
        "verify", "--n", "2", "--eps", "1e-3", "--c1", "0.5", "--c2", "0.5",
    ]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn region_lists_vertices() {
    let (code, out, _) = call(&["region", "--n", "3", "--point", "0.04,0.15"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("vertex")).count(), 3);
    assert!(out.contains("inside T_3"));
}

#[test]
fn sweep_is_reproducible_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let svg = dir.path().join("p.svg");
    for (file, plot) in [(&a, Some(&svg)), (&b, None)] {
        let mut args = vec![
            "sweep",
            "--mode",
            "1d",
            "--eps-decades",
            "1:3",
            "--out",
            path(file),
        ];
        if let Some(p) = plot {
            args.extend(["--plot", path(p)]);
        }
        let (code, out, err) = call(&args);
        assert_eq!(code, EXIT_OK, "{out}{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let chart = std::fs::read_to_string(&svg).unwrap();
    assert!(chart.starts_with("<?xml"));
    assert!(chart.contains("<polyline"));
    assert!(chart.trim_end().ends_with("</svg>"));
}

#[test]
fn sweep_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let (code, out, err) = call(&[
        "sweep",
        "--mode",
        "nd",
        "--n",
        "2",
        "--c1",
        "0.05",
        "--c2",
        "0.2",
        "--eps-decades",
        "2:4",
        "--out",
        path(&file),
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    let recs = massratio::sweep::from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(recs.len(), 3);
}

#[test]
fn bessel_selftest_passes() {
    let (code, out, _) = call(&["bessel-selftest", "--samples", "500"]);
    assert_eq!(code, EXIT_OK, "{out}");
}
