use askey_hankel_demo::{classify_json, commutant_json, families, hilbert_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn commutant_dimensions() {
    let l = parse(&commutant_json("L", "alpha=0", 32).unwrap());
    assert_eq!(l["measured_dim"], 2);
    assert_eq!(l["basis_head"].as_array().unwrap().len(), 2);
    let c = parse(&commutant_json("C", "1", 24).unwrap());
    assert_eq!(c["measured_dim"], 0);
    let h = parse(&commutant_json("H", "", 24).unwrap());
    assert_eq!(h["agreement"], "disagrees");
}

#[test]
fn page_examples_parse() {
    for (f, p) in [
        ("W", "3/4, 3/4, 1/4, 1/4"),
        ("CH", "1/4+0.3i, 3/4+0.3i"),
        ("MP", "lambda=1/2, phi=pi/3"),
        ("M", "c=1/2, beta=1"),
    ] {
        let v = parse(&commutant_json(f, p, 16).unwrap());
        assert_eq!(v["measured_dim"], 2, "{f} {p}");
    }
}

#[test]
fn commutant_rejects_bad_input() {
    assert!(commutant_json("L", "alpha=-3", 32).is_err());
    assert!(commutant_json("Q", "1", 32).is_err());
    assert!(commutant_json("L", "0", 1000).is_err());
}

#[test]
fn hilbert_residual_is_small() {
    let d = parse(&hilbert_json("2.7", 32).unwrap());
    assert!(d["grid_max_relative"].as_f64().unwrap() < 1e-20);
    assert!(hilbert_json("-3", 32).is_err());
}

#[test]
fn classification_cases() {
    let i = parse(&classify_json("", "0, 0, 1", "1/2", "2").unwrap());
    assert_eq!(i["case"], "i");
    assert!((i["limit_value"].as_f64().unwrap() - 4.0 / 15.0).abs() < 1e-6);
    let ii = parse(&classify_json("0 0 1", "1 0 1", "0.5", "2").unwrap());
    assert_eq!(ii["case"], "ii");
    assert_eq!(parse(&classify_json("", "", "1/2", "2").unwrap())["case"], "degenerate");
    assert!(classify_json("x", "", "1/2", "2").is_err());
}

#[test]
fn family_list() {
    let f = parse(&families());
    assert_eq!(f.as_array().unwrap().len(), 9);
    assert_eq!(f[0]["id"], "W");
}
