use std::path::{Path, PathBuf};
use std::process::Command;

use askey_hankel::commutation::default_claim_samples;
use askey_hankel::families::Clause;
use askey_hankel_cli::{run_args, Output, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    let mut full = vec!["askey-hankel"];
    full.extend_from_slice(args);
    run_args(full).unwrap_or_else(|e| Output { text: String::new(), code: e.code, notes: vec![e.message] })
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let out = run(&a);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {:?}", out.notes);
    serde_json::from_str(&out.text).unwrap()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Compares against `tests/fixtures/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, text: &str) {
    let path = fixture(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(text, want, "{name} differs from the golden file");
}

#[test]
fn families_table() {
    let out = run(&["--format", "csv", "families"]);
    assert_eq!(csv_rows(&out.text).len(), 10);
    golden("families.csv", &out.text);
    let w = run(&["--format", "csv", "families", "W"]);
    let rows = csv_rows(&w.text);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "W");
    assert_eq!(run(&["families", "Q"]).code, EXIT_INPUT);
}

#[test]
fn commutant_dimensions() {
    let l = run(&["--format", "csv", "--K", "32", "commutant", "--family", "L", "--params", "alpha=0"]);
    assert_eq!(l.code, EXIT_OK);
    golden("commutant_laguerre.csv", &l.text);
    let rows = csv_rows(&l.text);
    assert_eq!((&rows[0][3], &rows[0][4], &rows[0][7]), ("2", "2", "agrees"));

    let c = json(&["commutant", "--family", "C", "--params", "a=1"]);
    assert_eq!(c["results"]["measured_dim"], 0);
    assert_eq!(c["results"]["instability"], false);

    let positional = json(&["commutant", "--family", "MP", "--params", "1/2,pi/3"]);
    assert_eq!(positional["results"]["measured_dim"], 2);
    assert!(positional["results"]["subspace_angle"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn hermite_disagreement_is_reported_not_fatal() {
    let out = run(&["--format", "csv", "commutant", "--family", "H"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(&csv_rows(&out.text)[0][7], "disagrees");
    assert!(out.notes.iter().any(|n| n.contains("predicts 2")), "{:?}", out.notes);
}

#[test]
fn solver_disagreement_exits_numerical() {
    let out = run(&["--tol", "1e-2", "commutant", "--family", "C", "--params", "a=1"]);
    assert_eq!(out.code, EXIT_NUMERICAL);
    assert!(out.notes.iter().any(|n| n.contains("solver disagreement")));
}

#[test]
fn input_errors() {
    for args in [
        &["commutant", "--family", "L", "--params", "alpha=-2"][..],
        &["commutant", "--family", "L", "--params", "beta=1"],
        &["commutant", "--family", "Z"],
        &["commutant"],
        &["--precision", "fast", "commutant", "--family", "H"],
        &["obstruct", "--family", "C", "--params", "a=1", "--m", "3"],
        &["obstruct", "--family", "C", "--params", "a=1", "--quantity", "delta9"],
        &["nonsense"],
    ] {
        assert_eq!(run(args).code, EXIT_INPUT, "{args:?}");
    }
}

#[test]
fn verify_filters_clauses() {
    let v = json(&["verify", "--clauses", "ii,vii"]);
    let want = default_claim_samples().iter().filter(|s| matches!(s.clause, Clause::II | Clause::VII)).count();
    let reports = v["results"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), want);
    assert_eq!(v["results"]["summary"]["disagreements"], 0);
}

#[test]
fn verify_verdicts_do_not_depend_on_precision() {
    let verdicts = |p: &str| -> Vec<(String, String, String)> {
        let out = run(&["--format", "csv", "--precision", p, "verify"]);
        assert_eq!(out.code, EXIT_OK, "{:?}", out.notes);
        csv_rows(&out.text).iter().map(|r| (r[0].to_string(), r[3].to_string(), r[7].to_string())).collect()
    };
    let base = verdicts("60");
    assert!(base.iter().any(|(f, _, a)| f.starts_with('H') && a == "disagrees"));
    assert_eq!(base, verdicts("80"));
}

#[test]
fn charlier_decay_fit() {
    let v = json(&["obstruct", "--family", "C", "--params", "a=1", "--decay"]);
    let r = &v["results"];
    let exponent = r["power_law"]["exponent"].as_f64().unwrap();
    assert!((exponent + 3.0).abs() < 0.1, "{exponent}");
    let k = r["fitted_coefficient"].as_f64().unwrap();
    assert!((k / 0.125 - 1.0).abs() < 0.05, "{k}");
}

#[test]
fn obstruction_grids() {
    let mp = json(&["obstruct", "--family", "MP", "--params", "lambda=1/2,phi=1"]);
    assert!(mp["results"]["max_relative"].as_f64().unwrap() < 1e-40);
    let c = json(&["obstruct", "--family", "C", "--params", "a=1"]);
    assert!(c["results"]["max_relative"].as_f64().unwrap() > 1e-10);

    let h =
        run(&["--format", "csv", "obstruct", "--family", "H", "--quantity", "delta2", "--m", "1..1", "--n", "4..4"]);
    let rows = csv_rows(&h.text);
    let d2: f64 = rows[0][2].parse().unwrap();
    assert!(d2 > 1e-3 && (d2 / 3.37e-3 - 1.0).abs() < 0.02, "{d2}");

    let w = json(&[
        "obstruct",
        "--family",
        "W",
        "--params",
        "3/4,3/4,1/4,1/4",
        "--quantity",
        "omega",
        "--omega",
        "1/16",
        "--n",
        "1..200",
    ]);
    assert!(w["results"]["max_relative"].as_f64().unwrap() < 1e-20);
}

#[test]
fn expansions() {
    let v = json(&["obstruct", "--family", "W", "--params", "1,2,3,4", "--expansions", "--omega", "1/16"]);
    let claims = v["results"]["claims"].as_array().unwrap();
    assert!(claims.iter().all(|c| c["pass"] == true), "{claims:?}");
    let exponent = v["results"]["omega_decay"]["power_law"]["exponent"].as_f64().unwrap();
    assert!((exponent + 2.0).abs() < 0.01, "{exponent}");
    assert_eq!(run(&["obstruct", "--family", "C", "--params", "a=1", "--expansions"]).code, EXIT_INPUT);
}

#[test]
fn hilbert_demo() {
    for t in ["1", "-0.5"] {
        let out = run(&["--format", "csv", "hilbert-demo", "--t", t]);
        assert_eq!(out.code, EXIT_OK);
        let r = &csv_rows(&out.text)[0];
        assert!(r[3].parse::<f64>().unwrap() <= 1e-12);
        assert!(r[5].parse::<f64>().unwrap() <= 1e-12);
    }
    assert_eq!(run(&["hilbert-demo", "--t", "-2"]).code, EXIT_INPUT);
}

#[test]
fn sweep_localizes_the_special_point() {
    let out = run(&["sweep", "--family", "L", "--vary", "alpha=-0.5..1.0:0.5"]);
    assert_eq!(out.code, EXIT_OK);
    golden("sweep_laguerre.csv", &out.text);
    let rows = csv_rows(&out.text);
    let dims: Vec<(&str, &str)> = rows.iter().map(|r| (r.get(0).unwrap(), r.get(1).unwrap())).collect();
    assert_eq!(dims, [("-0.5", "0"), ("0", "2"), ("0.5", "0"), ("1", "0")]);
}

#[test]
fn sweep_grids() {
    let out = run(&[
        "sweep",
        "--family",
        "M",
        "--params",
        "c=1/2",
        "--vary",
        "beta=0.5..1.5:0.5",
        "--vary",
        "c=0.25..0.5:0.25",
    ]);
    assert_eq!(out.code, EXIT_INPUT, "c cannot be fixed and varied");

    let out = run(&["sweep", "--family", "M", "--vary", "beta=0.5..1.5:0.5", "--vary", "c=0.25..0.5:0.25"]);
    let rows = csv_rows(&out.text);
    assert_eq!(rows.len(), 6);
    let two: Vec<(&str, &str)> =
        rows.iter().filter(|r| &r[2] == "2").map(|r| (r.get(0).unwrap(), r.get(1).unwrap())).collect();
    assert_eq!(two, [("1", "0.25"), ("1", "0.5")]);

    let out = run(&["sweep", "--family", "L", "--vary", "alpha=-2..0:1"]);
    let rows = csv_rows(&out.text);
    assert_eq!(rows.len(), 3);
    assert!(rows[0][1].is_empty() && rows[0][2].contains("constraint"), "{:?}", rows[0]);
    assert_eq!(&rows[2][1], "2");

    let md =
        run(&["sweep", "--family", "MP", "--params", "phi=1", "--vary", "lambda=0.4..0.6:0.1", "--metric", "max-D"]);
    let v: Vec<f64> = csv_rows(&md.text).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(v[1] < 1e-40 && v[0] > 1e-10 && v[2] > 1e-10, "{v:?}");

    let sv = run(&["sweep", "--family", "L", "--vary", "alpha=0..0.5:0.5", "--metric", "min-singular-value"]);
    let v: Vec<f64> = csv_rows(&sv.text).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(v[0] < 1e-40 && v[1] > 1e-10, "{v:?}");

    for bad in ["alpha=1..0:0.5", "alpha=0..1:-1", "gamma=0..1:1", "alpha"] {
        assert_eq!(run(&["sweep", "--family", "L", "--vary", bad]).code, EXIT_INPUT, "{bad}");
    }
}

#[test]
fn laurent_examples() {
    let classify = |name: &str| {
        let out = run(&["--format", "csv", "laurent-classify", fixture(name).to_str().unwrap()]);
        assert_eq!(out.code, EXIT_OK, "{:?}", out.notes);
        out.text
    };
    let i = classify("laurent_case_i.json");
    golden("laurent_case_i.csv", &i);
    let r = &csv_rows(&i)[0];
    assert_eq!(&r[0], "i");
    assert!((r[1].parse::<f64>().unwrap() - 4.0 / 15.0).abs() < 1e-6);
    let ii = classify("laurent_case_ii.json");
    let r = &csv_rows(&ii)[0];
    assert_eq!(&r[0], "ii");
    assert!((r[1].parse::<f64>().unwrap() + 4.0 / 15.0).abs() < 1e-6);
    assert_eq!(&csv_rows(&classify("laurent_degenerate.json"))[0][0], "degenerate");

    assert_eq!(run(&["laurent-classify", "/nonexistent.json"]).code, EXIT_INPUT);
    let f = fixture("laurent_case_i.json");
    assert_eq!(run(&["laurent-classify", f.to_str().unwrap(), "--radius", "0.5"]).code, EXIT_INPUT);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--format", "json", "verify", "--clauses", "i,vii"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.text, b.text);
    let serial = run(&["--jobs", "1", "--format", "json", "verify", "--clauses", "i,vii"]);
    let parallel = run(&["--jobs", "4", "--format", "json", "verify", "--clauses", "i,vii"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_str(&o.text).unwrap();
        v["config"] = Value::Null;
        v
    };
    assert_eq!(strip(&serial), strip(&parallel));

    let s1 = run(&["--jobs", "1", "sweep", "--family", "MP", "--params", "phi=pi/3", "--vary", "lambda=0.1..1.0:0.1"]);
    let s4 = run(&["--jobs", "4", "sweep", "--family", "MP", "--params", "phi=pi/3", "--vary", "lambda=0.1..1.0:0.1"]);
    assert_eq!(s1.text, s4.text);
}

#[test]
fn timings_only_on_request() {
    let plain = json(&["hilbert-demo", "--t", "1", "--grid", "8"]);
    assert!(plain.get("timings").is_none());
    let timed = json(&["--timings", "hilbert-demo", "--t", "1", "--grid", "8"]);
    assert!(timed["timings"]["wall_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = fixture("run_config.json");
    let cfg = cfg.to_str().unwrap();
    let out = run(&["--config", cfg, "commutant"]);
    let r = &csv_rows(&out.text)[0];
    assert_eq!((&r[0], &r[2], &r[3]), ("L(alpha=0)", "24", "2"));
    let out = run(&["--config", cfg, "--K", "16", "commutant", "--params", "alpha=1/2"]);
    let r = &csv_rows(&out.text)[0];
    assert_eq!((&r[0], &r[2], &r[3]), ("L(alpha=1/2)", "16", "0"));
}

#[test]
fn binary_exit_codes_and_out_file() {
    let exe = env!("CARGO_BIN_EXE_askey-hankel");
    let status = |args: &[&str]| Command::new(exe).args(args).output().unwrap();

    let ok = status(&["--format", "csv", "families"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(ok.stdout).unwrap().starts_with("id,"));

    let bad = status(&["commutant", "--family", "C", "--params", "a=-1"]);
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8(bad.stderr).unwrap().contains("error"));
    assert_eq!(status(&["--bogus"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(status(&["--help"]).status.code(), Some(EXIT_OK));

    let unstable = status(&["--tol", "1e-2", "commutant", "--family", "C", "--params", "a=1"]);
    assert_eq!(unstable.status.code(), Some(EXIT_NUMERICAL));

    let dir = std::env::temp_dir().join(format!("askey-hankel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let wrote = status(&["--format", "json", "--out", path.to_str().unwrap(), "hilbert-demo", "--grid", "8"]);
    assert_eq!(wrote.status.code(), Some(EXIT_OK));
    assert!(wrote.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "hilbert-demo");
    std::fs::remove_dir_all(&dir).unwrap();
}
