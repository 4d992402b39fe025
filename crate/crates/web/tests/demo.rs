use serde_json::Value;

use robust_knapsack_web::{alpha_curve_json, generate_and_sweep_json, policy_trace_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

#[test]
fn curve_endpoints() {
    let v = parse(&alpha_curve_json(0.1).unwrap());
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 11);
    assert_eq!(points[0]["alpha"].as_f64().unwrap(), 0.5);
    assert!((points[10]["alpha"].as_f64().unwrap() - 0.3578).abs() < 5e-4);
    assert!((v["kawase_deterministic"].as_f64().unwrap() - 0.0602).abs() < 5e-5);
    assert!(alpha_curve_json(0.0).is_err());
    assert!(alpha_curve_json(f64::NAN).is_err());
}

#[test]
fn sweep_then_trace() {
    let v = parse(&generate_and_sweep_json("planted", 6, 10, 7).unwrap());
    assert!(!v["start_list"].as_array().unwrap().is_empty());
    let rho = v["empirical_robustness"].as_f64().unwrap();
    assert!(rho >= v["alpha_bound"].as_f64().unwrap() - 1e-9);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());

    let instance = v["instance"].as_str().unwrap();
    for row in rows {
        let gamma = row["gamma"].as_u64().unwrap();
        let t = parse(&policy_trace_json(instance, gamma).unwrap());
        let pol = t["trace"]["value"].as_f64().unwrap();
        assert!((pol - row["policy_value"].as_f64().unwrap()).abs() < 1e-12);
        assert!(
            (t["opt"]["value"].as_f64().unwrap() - row["opt_value"].as_f64().unwrap()).abs()
                < 1e-12
        );
        assert!(pol >= t["agreedy"]["value"].as_f64().unwrap() - 1e-9);
    }
}

#[test]
fn input_errors() {
    assert!(generate_and_sweep_json("nope", 5, 10, 1).is_err());
    assert!(generate_and_sweep_json("modular", 40, 10, 1).is_err());
    assert!(policy_trace_json("{}", 3).is_err());
    let v = parse(&generate_and_sweep_json("modular", 4, 5, 1).unwrap());
    assert!(policy_trace_json(v["instance"].as_str().unwrap(), 0).is_err());
}
