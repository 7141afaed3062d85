use std::process::{Command, Output};

fn simplexht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplexht"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dyadic_verify_succeeds() {
    let o = simplexht(&["verify", "--suite", "dyadic", "--n", "2", "--L", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = text(&o);
    assert!(out.contains("telescoping n=2 k=2 l=3 L=3 discrepancy=0"), "{out}");
    assert!(out.contains("failures=0"));
}

#[test]
fn missing_input_is_a_usage_error() {
    let o = simplexht(&["fit", "--input", "none.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("none.csv"));
    assert_eq!(simplexht(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(simplexht(&["sweep", "--model", "dyadic", "--n", "2", "--m", "4..2"]).status.code(), Some(2));
}

#[test]
fn sweep_fit_plot_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let csv = csv.to_str().unwrap();
    let o = simplexht(&[
        "sweep", "--model", "dyadic", "--n", "2", "--m", "1..4", "--L", "4", "--seeds", "2", "--max-iter", "10", "--out", csv,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = std::fs::read_to_string(csv).unwrap();
    assert_eq!(lines.lines().count(), 5);

    let fit_path = dir.path().join("fit.json");
    let o = simplexht(&["fit", "--input", csv, "--out", fit_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let fit: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&fit_path).unwrap()).unwrap();
    assert_eq!(fit["reference_exponent"], 0.5);
    assert!(fit["slope"].as_f64().unwrap() < 1.0);

    let plot = |name: &str| {
        let p = dir.path().join(name);
        let o = simplexht(&["plot", "--input", csv, "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(p).unwrap()
    };
    let a = plot("a.svg");
    assert_eq!(a, plot("b.svg"));
    assert_eq!(a.matches("class=\"marker\"").count(), 4);
}

#[test]
fn sweep_to_stdout_is_deterministic() {
    let args = ["sweep", "--model", "dyadic", "--n", "1", "--m", "1..3", "--L", "3", "--seeds", "2"];
    let (a, b) = (simplexht(&args), simplexht(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(text(&a), text(&b));
    assert!(text(&a).starts_with("model,n,abscissa,S,iters,seed,digest"));
}

#[test]
fn eval_prints_json() {
    let o = simplexht(&["eval", "--model", "dyadic", "--n", "1", "--L", "3", "--m", "2", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&text(&o)).unwrap();
    assert!(v["value"].as_f64().unwrap() <= v["bound_trivial"].as_f64().unwrap());
    assert_eq!(v["norms"].as_array().unwrap().len(), 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "model = dyadic\nn = 1\nm = 1..2\nL = 3\nseeds = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let base = simplexht(&["sweep", "--config", cfg]);
    assert_eq!(base.status.code(), Some(0), "{}", String::from_utf8_lossy(&base.stderr));
    assert_eq!(text(&base).lines().count(), 3);
    let wider = simplexht(&["sweep", "--config", cfg, "--m", "1..3"]);
    assert_eq!(text(&wider).lines().count(), 4);
}
