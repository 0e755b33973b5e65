//! Browser demo: thin `wasm-bindgen` wrappers that return JSON strings for
//! the page in `www/`. Every export also compiles natively, so the tests call
//! them directly.

use ksieve::files::{data, format_value, AtomSpec, ContextFile, System};
use ksieve::linalg::ComplexMatrix;
use ksieve::ks::{minimal_uncolorable_subfamily, search_dual_section};
use ksieve::partition::lattice;
use ksieve::{BorelSubset, GeneralizedValuation, Partition, Proposition, QuantumState, Sieve, SieveMode, Tolerances};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn mode_of(name: &str) -> Result<SieveMode, String> {
    match name {
        "o" => Ok(SieveMode::WithConstants),
        "ostar" => Ok(SieveMode::WithoutConstants),
        other => Err(format!("unknown mode `{other}`")),
    }
}

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Hasse diagram of the admissible partitions, with `member` flags from `s`
/// (if any). Level 0 is the finest partition.
fn lattice_json(k: usize, mode: SieveMode, s: Option<&Sieve>, name: &dyn Fn(usize) -> String) -> Result<Value, String> {
    let lat = lattice(k).map_err(|e| e.to_string())?;
    let parts = lat.partitions();
    let mut per_level = vec![0usize; k];
    let mut nodes = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if !mode.admits(p) {
            continue;
        }
        let level = k - p.block_count();
        nodes.push(json!({
            "id": i,
            "label": p.notation(name),
            "level": level,
            "pos": per_level[level],
            "member": s.is_some_and(|s| s.contains(p)),
        }));
        per_level[level] += 1;
    }
    let edges: Vec<[usize; 2]> = lat
        .covering_pairs()
        .into_iter()
        .filter(|&(a, b)| mode.admits(&parts[a]) && mode.admits(&parts[b]))
        .map(|(a, b)| [a, b])
        .collect();
    Ok(json!({ "nodes": nodes, "edges": edges, "levels": per_level }))
}

fn spin_one_impl(operator: &str, mask: u32, theta: f64, phi: f64, mode: &str) -> Result<Value, String> {
    let mode = mode_of(mode)?;
    let sys = System::parse(data::SPIN_ONE).map_err(|e| e.to_string())?;
    let a = sys.operator(operator).map_err(|e| e.to_string())?;
    let k = a.spectrum_len();
    if u64::from(mask) >> k != 0 {
        return Err(format!("subset mask {mask:#b} exceeds the {k} eigenvalues of {operator}"));
    }
    // real unit vector on the sphere, in the S_z basis
    let (s, c) = theta.sin_cos();
    let v = [s * phi.cos(), c, s * phi.sin()];
    let rows: Vec<Vec<f64>> = v.iter().map(|x| v.iter().map(|y| x * y).collect()).collect();
    let rho = ComplexMatrix::from_real_rows(&rows).map_err(|e| e.to_string())?;
    let psi = QuantumState::density(rho, &Tolerances::default()).map_err(|e| e.to_string())?;
    let delta = BorelSubset::from_mask(k, u64::from(mask));
    let p = Proposition::new(a.clone(), delta).map_err(|e| e.to_string())?;
    let sieve = GeneralizedValuation::state(psi.clone(), mode).evaluate(&p).map_err(|e| e.to_string())?;
    let probs: Vec<Value> = (0..k)
        .map(|i| {
            let pr = ksieve::spectral::prob(&psi, &a.projectors()[i]).unwrap_or(f64::NAN);
            json!({ "eigenvalue": format_value(a.eigenvalues()[i]), "probability": (pr * 1e6).round() / 1e6 })
        })
        .collect();
    let name = |i: usize| format_value(a.eigenvalues()[i]);
    Ok(json!({
        "operator": operator,
        "state": v.iter().map(|x| (x * 1e6).round() / 1e6).collect::<Vec<_>>(),
        "probabilities": probs,
        "classification": sieve.classify().to_string(),
        "lattice": lattice_json(k, mode, Some(&sieve), &name)?,
    }))
}

/// Evaluates `ν^ψ(A ∈ Δ)` on the spin-1 system for the real state
/// `(sin θ cos φ, cos θ, sin θ sin φ)`. `operator` is `Sx`, `Sz` or `Sx2`;
/// bit `i` of `mask` selects the `i`-th smallest eigenvalue.
#[wasm_bindgen]
pub fn spin_one_sieve(operator: &str, mask: u32, theta: f64, phi: f64, mode: &str) -> String {
    respond(spin_one_impl(operator, mask, theta, phi, mode))
}

fn ks_file() -> Result<ContextFile, String> {
    ContextFile::parse(data::KS18_DIM4).map_err(|e| e.to_string())
}

/// The bundled 18-vector contexts, as lists of ray names.
#[wasm_bindgen]
pub fn ks_contexts() -> String {
    respond(ks_file().map(|f| {
        let labels: Vec<Vec<String>> = f
            .contexts
            .iter()
            .map(|c| {
                c.iter()
                    .map(|a| match a {
                        AtomSpec::Ray(n) => n.clone(),
                        AtomSpec::Span(ns) => ns.join("+"),
                    })
                    .collect()
            })
            .collect();
        json!({ "contexts": labels })
    }))
}

fn ks_impl(enabled: u32) -> Result<Value, String> {
    let file = ks_file()?;
    let fam = file.build(&Tolerances::default()).map_err(|e| e.to_string())?;
    let keep: Vec<usize> = (0..fam.len()).filter(|&i| enabled >> i & 1 == 1).collect();
    if keep.is_empty() {
        return Ok(json!({ "enabled": keep, "colorable": true, "witness": [] }));
    }
    let sub = fam.subfamily(&keep).map_err(|e| e.to_string())?;
    match search_dual_section(&sub) {
        Some(w) => {
            let witness: Vec<Value> = keep
                .iter()
                .zip(&w.chosen)
                .map(|(&c, &a)| json!({ "context": c, "ray": fam.labels()[c][a] }))
                .collect();
            Ok(json!({ "enabled": keep, "colorable": true, "witness": witness }))
        }
        None => {
            let minimal: Vec<usize> = minimal_uncolorable_subfamily(&sub)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|i| keep[i])
                .collect();
            Ok(json!({ "enabled": keep, "colorable": false, "minimal": minimal }))
        }
    }
}

/// Searches the subfamily of the 18-vector contexts whose bits are set in
/// `enabled` for a two-valued colouring.
#[wasm_bindgen]
pub fn ks_search(enabled: u32) -> String {
    respond(ks_impl(enabled))
}

fn parse_sieve(k: usize, mode: SieveMode, text: &str) -> Result<Sieve, String> {
    let t = text.trim();
    if t == "top" {
        return Sieve::top(k, mode).map_err(|e| e.to_string());
    }
    let gens = t
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Partition::parse_one_based(k, s).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = gens.iter().find(|p| !mode.admits(p)) {
        return Err(format!("{p} is excluded in this mode"));
    }
    Sieve::up_closure(k, mode, gens).map_err(|e| e.to_string())
}

fn heyting_impl(k: usize, op: &str, left: &str, right: &str, mode: &str) -> Result<Value, String> {
    let mode = mode_of(mode)?;
    if !(1..=5).contains(&k) {
        return Err("k must be between 1 and 5".into());
    }
    let a = parse_sieve(k, mode, left)?;
    let b = if op == "not" { Sieve::bottom(k, mode).map_err(|e| e.to_string())? } else { parse_sieve(k, mode, right)? };
    let r = match op {
        "meet" => a.meet(&b),
        "join" => a.join(&b),
        "implies" => a.implies(&b),
        "not" => Ok(a.negate()),
        other => return Err(format!("unknown operation `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let name = |i: usize| (i + 1).to_string();
    Ok(json!({
        "left": a.members().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "right": b.members().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "result": r.members().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "classification": r.classify().to_string(),
        "lattice": lattice_json(k, mode, Some(&r), &name)?,
    }))
}

/// `∧`, `∨`, `⇒` or `¬` (`op` = `meet`, `join`, `implies`, `not`) of sieves
/// on a `k`-point spectrum, each given by `;`-separated 1-based generating
/// partitions (or `top`). `not` ignores `right`.
#[wasm_bindgen]
pub fn heyting(k: usize, op: &str, left: &str, right: &str, mode: &str) -> String {
    respond(heyting_impl(k, op, left, right, mode))
}
