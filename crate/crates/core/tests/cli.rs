use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use avi::ModelFile;

fn avi(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avi"))
        .args(args)
        .current_dir(dir)
        .env_remove("AVI_RANK_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn four_points(dir: &Path) {
    fs::write(dir.join("p.csv"), "x1,x2\n1,0\n0,1\n-1,0\n0,-1\n").unwrap();
}

#[test]
fn fit_reduce_eval_round() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    four_points(d);
    let o = avi(&["fit", "p.csv", "-o", "m.json"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("total vanishing polynomials: 4"));

    let o = avi(&["reduce", "m.json", "p.csv"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let once = fs::read_to_string(d.join("m.json")).unwrap();
    let file = ModelFile::from_json(&once).unwrap();
    assert_eq!(file.reduction.as_ref().unwrap().kept.len(), 2);

    // Reducing again leaves the file unchanged.
    assert!(avi(&["reduce", "m.json", "p.csv"], d).status.success());
    assert_eq!(fs::read_to_string(d.join("m.json")).unwrap(), once);

    let o = avi(&["eval", "m.json", "p.csv", "--handles", "kept"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "d2_g0,d2_g1");
    for line in lines {
        for v in line.split(',') {
            assert!(v.parse::<f64>().unwrap().abs() <= 1e-10);
        }
    }
}

#[test]
fn eval_on_grid_and_all_handles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    four_points(d);
    assert!(avi(
        &["fit", "p.csv", "-o", "m.json", "--normalization", "vca"],
        d
    )
    .status
    .success());
    let o = avi(
        &[
            "eval",
            "m.json",
            "--grid",
            "-1,1,-1,1,3,4",
            "--handles",
            "all",
            "-o",
            "g.csv",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(d.join("g.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("x1,x2,d0_f0,d1_f0,d1_f1,d2_f0,d2_g0"));
    assert_eq!(csv.lines().count(), 1 + 12);
    // Keeping only reduced handles needs a reduction first.
    let o = avi(&["eval", "m.json", "p.csv", "--handles", "kept"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_threshold_rules() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    four_points(d);
    assert!(
        avi(&["fit", "p.csv", "-o", "m.json", "--epsilon", "0.01"], d)
            .status
            .success()
    );
    let o = avi(&["reduce", "m.json", "p.csv"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--threshold"));
    let o = avi(&["reduce", "m.json", "p.csv", "--threshold", "-1"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = avi(
        &[
            "reduce",
            "m.json",
            "p.csv",
            "--threshold",
            "1e-9",
            "-o",
            "r.json",
            "--report",
            "rep.json",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("rep.json")).unwrap()).unwrap();
    assert_eq!(rep["generator_policy"], "kept_lower_degree");
}

#[test]
fn empty_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("e.csv"), "").unwrap();
    let o = avi(&["fit", "e.csv", "-o", "m.json"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty point set"));
    fs::write(d.join("bad.csv"), "1,2\n3,oops\n").unwrap();
    let o = avi(&["fit", "bad.csv", "-o", "m.json"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert!(!d.join("m.json").exists());
    let o = avi(&["fit", "missing.csv", "-o", "m.json"], d);
    assert_eq!(o.status.code(), Some(1));
    let o = avi(&["frobnicate"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_features_diagnose_search() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let spec = r#"{"variety":{"type":"concentric_ellipses","radii":[[1.0,1.0]],"rotation":0.0},"samples":30,"seed":4}"#;
    fs::write(d.join("spec.json"), spec).unwrap();
    let o = avi(&["generate", "spec.json", "-o", "c.csv"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(d.join("c.csv")).unwrap().lines().count(),
        31
    );

    let o = avi(
        &[
            "epsilon-search",
            "c.csv",
            "--num-linear",
            "0",
            "--d-min",
            "2",
            "--num-at-dmin",
            "1",
            "-o",
            "s.json",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let s: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    assert_eq!(s["status"], "found");

    assert!(
        avi(&["fit", "c.csv", "-o", "m.json", "--max-degree", "3"], d)
            .status
            .success()
    );
    let o = avi(
        &[
            "features", "c.csv", "--model", "m.json", "--model", "m.json",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with("c0_d2_g0"));
    assert!(text.lines().next().unwrap().contains("c1_d2_g0"));

    let o = avi(
        &[
            "diagnose",
            "c.csv",
            "--translate",
            "0.5,-1",
            "--scale",
            "-3",
            "-o",
            "d.json",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("d.json")).unwrap()).unwrap();
    assert_eq!(r["counts_base"], r["counts_scaled"]);
    assert_eq!(r["counts_base"], r["counts_translated"]);
    let o = avi(&["diagnose", "c.csv", "--scale", "0"], d);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    four_points(d);
    let o = avi(
        &["fit", "p.csv", "-o", "v.json", "--normalization", "vca"],
        d,
    );
    assert!(stdout(&o).contains("total vanishing polynomials: 5"));

    let o = avi(&["diagnose", "p.csv", "--scale", "2", "-o", "r.json"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(r["counts_base"], r["counts_scaled"]);
    let ratios: Vec<f64> = r["eigenvalue_ratios"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|deg| deg.as_array().unwrap().iter().filter_map(|v| v.as_f64()))
        .collect();
    assert!(!ratios.is_empty());
    for q in ratios {
        assert!((q - 4.0).abs() <= 1e-9, "{q}");
    }

    let spec = r#"{"variety":{"type":"concentric_ellipses","radii":[[1.0,1.0]],"rotation":0.0},"samples":16,"noise_std_fraction":0.1,"seed":7}"#;
    fs::write(d.join("circle.json"), spec).unwrap();
    assert!(avi(&["generate", "circle.json", "-o", "a.csv"], d)
        .status
        .success());
    assert!(avi(&["generate", "circle.json", "-o", "b.csv"], d)
        .status
        .success());
    assert_eq!(
        fs::read(d.join("a.csv")).unwrap(),
        fs::read(d.join("b.csv")).unwrap()
    );

    assert!(avi(
        &["reduce", "v.json", "p.csv", "--reduction-threshold", "1e-9"],
        d
    )
    .status
    .success());
    let o = avi(&["eval", "v.json", "p.csv", "--handles", "G"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().next().unwrap().split(',').count(), 5);
}

#[test]
fn rank_tol_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    four_points(d);
    let o = Command::new(env!("CARGO_BIN_EXE_avi"))
        .args(["fit", "p.csv", "-o", "m.json"])
        .current_dir(d)
        .env("AVI_RANK_TOL", "1e-10")
        .output()
        .unwrap();
    assert!(o.status.success());
    let m = ModelFile::load(&d.join("m.json")).unwrap();
    assert_eq!(m.model.rank_tol, 1e-10);
}
