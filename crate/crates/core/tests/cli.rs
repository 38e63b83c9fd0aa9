use std::fs;
use std::path::Path;

use hawkes::cli::run;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hawkes(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hawkes").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PARAMS: &str = r#"{"lambda":0.5,"type":"exp","alpha":2,"beta":2.1}"#;

#[test]
fn simulate_writes_events_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let events = dir.path().join("e.txt");
    let o = hawkes(&[
        "simulate", "--algo", "cluster", "--params", r#"{"lambda":1,"type":"exp","alpha":1,"beta":1.2}"#,
        "--horizon", "100", "--seed", "7", "--output", path(&events),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let text = fs::read_to_string(&events).unwrap();
    let times: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert!(!times.is_empty() && times.windows(2).all(|w| w[0] < w[1]) && *times.last().unwrap() <= 100.0);
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("e.txt.json")).unwrap()).unwrap();
    assert_eq!(side["horizon"], 100.0);
    assert_eq!(side["seed"], 7);
}

#[test]
fn supercritical_cluster_request_is_a_data_error() {
    let o = hawkes(&[
        "simulate", "--algo", "cluster", "--params", r#"{"lambda":1,"type":"exp","alpha":2,"beta":1.2}"#,
        "--horizon", "100", "--seed", "7",
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("stationary"), "{}", o.stderr);
}

#[test]
fn outputs_are_byte_identical_for_equal_seeds() {
    for algo in ["thinning", "cluster", "inversion"] {
        let args = ["simulate", "--algo", algo, "--params", PARAMS, "--horizon", "50", "--seed", "3"];
        let a = hawkes(&args);
        let b = hawkes(&args);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
        let c = hawkes(&["simulate", "--algo", algo, "--params", PARAMS, "--horizon", "50", "--seed", "4"]);
        assert_ne!(a.stdout, c.stdout);
    }
}

#[test]
fn unsorted_file_is_rejected_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let events = dir.path().join("e.txt");
    fs::write(&events, "# comment\n1.0\n3.0\n2.0\n").unwrap();
    let o = hawkes(&["fit", "--events", path(&events), "--horizon", "100"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 4"), "{}", o.stderr);
    let beyond = hawkes(&["fit", "--events", path(&events), "--horizon", "2.5"]);
    assert_eq!(beyond.code, 2);
}

#[test]
fn fit_then_gof_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let events = dir.path().join("e.txt");
    let fit = dir.path().join("fit.json");
    assert_eq!(
        hawkes(&["simulate", "--params", PARAMS, "--horizon", "200", "--seed", "1", "--output", path(&events)]).code,
        0
    );
    let o = hawkes(&["fit", "--events", path(&events), "--output", path(&fit), "--strict"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(&fit).unwrap()).unwrap();
    for key in ["lambda", "alpha", "beta", "loglik", "branching_ratio", "converged"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }

    let qq = dir.path().join("qq.csv");
    let bm = dir.path().join("bm.csv");
    let ac = dir.path().join("ac.csv");
    let o = hawkes(&[
        "gof", "--events", path(&events), "--params", path(&fit), "--level", "0.05", "--emit-qq", path(&qq),
        "--emit-bm-path", path(&bm), "--emit-autocorr", path(&ac),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(report["ks_exp"]["p_value"].as_f64().unwrap() >= 0.0);
    assert!(report["arcsine"]["m_star"].is_number());
    assert!(fs::read_to_string(&qq).unwrap().starts_with("empirical,theoretical\n"));
    assert!(fs::read_to_string(&bm).unwrap().starts_with("s,m\n0,0\n"));
    assert!(fs::read_to_string(&ac).unwrap().lines().count() > 2);
}

#[test]
fn strict_fit_on_single_event_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let events = dir.path().join("e.txt");
    fs::write(&events, "1.5\n").unwrap();
    let o = hawkes(&["fit", "--events", path(&events), "--horizon", "10", "--strict"]);
    assert_eq!(o.code, 3);
    assert!(o.stdout.contains("\"converged\": false"));
    assert_eq!(hawkes(&["fit", "--events", path(&events), "--horizon", "10"]).code, 0);
}

#[test]
fn usage_errors_exit_one() {
    let o = hawkes(&["simulate", "--no-such-flag"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("Usage"));
    assert_eq!(hawkes(&["frobnicate"]).code, 1);
    assert_eq!(hawkes(&[]).code, 1);
    let o = hawkes(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("simulate"));
    assert_eq!(hawkes(&["--version"]).code, 0);
}

#[test]
fn intensity_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let events = dir.path().join("e.txt");
    fs::write(&events, "1\n2.5\n").unwrap();
    let o = hawkes(&["intensity", "--events", path(&events), "--params", PARAMS, "--horizon", "4", "--step", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "t,kind,intensity,compensator");
    // Grid 0..=4 plus two rows per event.
    assert_eq!(lines.len(), 1 + 5 + 4);
    let jump: Vec<f64> = lines
        .iter()
        .filter(|l| l.starts_with("1,event"))
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!((jump[1] - jump[0] - 2.0).abs() < 1e-9);
}

#[test]
fn spectrum_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec");
    let o = hawkes(&[
        "spectrum", "--params", PARAMS, "--max-lag", "2", "--lag-step", "1", "--max-omega", "1", "--omega-step", "0.5",
        "--out-dir", path(&out),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let cov = fs::read_to_string(out.join("covariance.csv")).unwrap();
    assert_eq!(cov.lines().next(), Some("tau,R"));
    assert!(cov.contains("1,209.017443566"));
    let psd = fs::read_to_string(out.join("psd.csv")).unwrap();
    assert_eq!(psd.lines().count(), 4);

    let o = hawkes(&[
        "spectrum", "--params", PARAMS, "--empirical", "--sim-horizon", "5000", "--max-lag", "1", "--bin-width", "0.25",
        "--seed", "2",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("tau,R,R_empirical,R_se"));

    let critical = hawkes(&["spectrum", "--params", r#"{"lambda":1,"alpha":2,"beta":2}"#]);
    assert_eq!(critical.code, 2);
}

#[test]
fn replicates_and_multivariate() {
    let o = hawkes(&["simulate", "--params", PARAMS, "--horizon", "20", "--replicates", "5", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["counts"].as_array().unwrap().len(), 5);

    let mv = r#"{"baselines":[1,1],"alphas":[[2,2],[2,2]],"betas":[[8,8],[8,8]]}"#;
    let o = hawkes(&["simulate", "--params", mv, "--horizon", "10", "--seed", "9"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let mut lines = o.stdout.lines();
    assert_eq!(lines.next(), Some("t,component"));
    let comps: Vec<usize> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(comps.contains(&0) && comps.contains(&1));
    assert_eq!(hawkes(&["simulate", "--algo", "cluster", "--params", mv, "--horizon", "10"]).code, 1);
}

#[test]
fn malformed_parameters_are_data_errors() {
    assert_eq!(hawkes(&["simulate", "--params", "{not json", "--horizon", "1"]).code, 2);
    assert_eq!(hawkes(&["simulate", "--params", r#"{"lambda":0,"alpha":1,"beta":2}"#, "--horizon", "1"]).code, 2);
    assert_eq!(hawkes(&["simulate", "--params", "/nonexistent/params.json", "--horizon", "1"]).code, 2);
    assert_eq!(hawkes(&["simulate", "--params", PARAMS, "--horizon", "-1"]).code, 1);
}
