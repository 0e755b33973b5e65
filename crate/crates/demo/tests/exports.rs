use ksieve_demo::{heyting, ks_contexts, ks_search, spin_one_sieve};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn members(v: &Value) -> Vec<String> {
    v["lattice"]["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|n| n["member"] == true)
        .map(|n| n["label"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn spin_one_middle_state() {
    // θ = 0 is (0, 1, 0)
    let v = parse(spin_one_sieve("Sx", 0b100, 0.0, 0.0, "o"));
    assert_eq!(v["classification"], "Intermediate");
    assert_eq!(members(&v), vec!["{-1,0,1}", "{-1,1}{0}"]);
    assert_eq!(v["lattice"]["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(v["lattice"]["edges"].as_array().unwrap().len(), 6);
    let p: Vec<f64> = v["probabilities"].as_array().unwrap().iter().map(|x| x["probability"].as_f64().unwrap()).collect();
    assert_eq!(p, vec![0.5, 0.0, 0.5]);

    let v = parse(spin_one_sieve("Sx", 0b101, 0.0, 0.0, "o"));
    assert_eq!(v["classification"], "TotallyTrue");
    let v = parse(spin_one_sieve("Sx", 0b100, 0.0, 0.0, "ostar"));
    assert_eq!(members(&v), vec!["{-1,1}{0}"]);
    assert_eq!(v["lattice"]["nodes"].as_array().unwrap().len(), 4);
}

#[test]
fn spin_one_eigenstate_of_sz() {
    // θ = π/2, φ = 0 is (1, 0, 0), the S_z = +1 eigenvector
    let v = parse(spin_one_sieve("Sz", 0b100, std::f64::consts::FRAC_PI_2, 0.0, "o"));
    assert_eq!(v["classification"], "TotallyTrue");
}

#[test]
fn spin_one_errors() {
    assert!(parse(spin_one_sieve("Sy", 1, 0.0, 0.0, "o"))["error"].is_string());
    assert!(parse(spin_one_sieve("Sx", 0b1000, 0.0, 0.0, "o"))["error"].is_string());
    assert!(parse(spin_one_sieve("Sx", 1, 0.0, 0.0, "x"))["error"].is_string());
}

#[test]
fn ks_demo() {
    let c = parse(ks_contexts());
    assert_eq!(c["contexts"].as_array().unwrap().len(), 9);
    let all = parse(ks_search(0x1ff));
    assert_eq!(all["colorable"], false);
    assert_eq!(all["minimal"].as_array().unwrap().len(), 9);
    for drop in 0..9 {
        let v = parse(ks_search(0x1ff & !(1 << drop)));
        assert_eq!(v["colorable"], true);
        assert_eq!(v["witness"].as_array().unwrap().len(), 8);
    }
    assert_eq!(parse(ks_search(0))["colorable"], true);
}

#[test]
fn heyting_demo() {
    let v = parse(heyting(3, "join", "{1,3}{2}", "{1}{2,3}", "o"));
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
    let v = parse(heyting(3, "not", "{1,3}{2}", "garbage", "o"));
    assert_eq!(v["classification"], "TotallyFalse");
    let v = parse(heyting(3, "implies", "{1,3}{2}", "{1,3}{2}", "o"));
    assert_eq!(v["classification"], "TotallyTrue");
    assert!(parse(heyting(3, "xor", "", "", "o"))["error"].is_string());
    assert!(parse(heyting(9, "meet", "", "", "o"))["error"].is_string());
}
