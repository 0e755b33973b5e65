//! Brute-force reference computations, written independently of the
//! library's own algorithms.

use ksieve::contexts::{Element, SubalgebraPoset};
use ksieve::linalg::ComplexMatrix;
use ksieve::partition::{lattice, Partition};
use ksieve::sieve::{Sieve, SieveMode};
use ksieve::spectral::{spectral_projector, BorelSubset, SpectralOperator, ValueMap};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 1e-9;

fn le(p: &ComplexMatrix, q: &ComplexMatrix) -> bool {
    (&(q * p) - p).norm() <= EPS
}

/// A random sieve: the up-closure of a few random partitions.
pub fn random_sieve(rng: &mut ChaCha8Rng, k: usize, mode: SieveMode) -> Sieve {
    let parts = lattice(k).unwrap().partitions();
    let n = rng.gen_range(0..=3);
    let seed: Vec<Partition> = (0..n).map(|_| parts[rng.gen_range(0..parts.len())].clone()).collect();
    Sieve::up_closure(k, mode, seed).unwrap()
}

/// Names of the Heyting-algebra laws that fail on the triple `(a, b, c)`.
pub fn heyting_violations(a: &Sieve, b: &Sieve, c: &Sieve) -> Vec<&'static str> {
    let mut out = Vec::new();
    let top = Sieve::top(a.k(), a.mode()).unwrap();
    let dist = a.meet(&b.join(c).unwrap()).unwrap() == a.meet(b).unwrap().join(&a.meet(c).unwrap()).unwrap();
    if !dist {
        out.push("distributivity");
    }
    // c ≤ (a ⇒ b)  iff  c ∧ a ≤ b
    let adj = c.le(&a.implies(b).unwrap()).unwrap() == c.meet(a).unwrap().le(b).unwrap();
    if !adj {
        out.push("adjunction");
    }
    if !a.join(&a.negate()).unwrap().le(&top).unwrap() {
        out.push("excluded-middle bound");
    }
    if !a.le(&a.negate().negate()).unwrap() {
        out.push("double negation");
    }
    if a.le(b).unwrap() && !b.negate().le(&a.negate()).unwrap() {
        out.push("negation antitone");
    }
    if a.meet(&a.negate()).unwrap() != Sieve::bottom(a.k(), a.mode()).unwrap() {
        out.push("non-contradiction");
    }
    if a.implies(a).unwrap() != top {
        out.push("self implication");
    }
    for s in [a, b, c] {
        if !s.is_up_closed() {
            out.push("up-closure");
        }
    }
    out
}

/// `inf { Q ∈ W_{f(A)} : E[A ∈ Δ] ≤ Q }` by listing every element of the
/// algebra generated by the fibres of `f` and keeping the smallest
/// dominating one.
pub fn infimum_oracle(a: &SpectralOperator, f: &ValueMap, delta: &BorelSubset) -> ComplexMatrix {
    let k = a.spectrum_len();
    let mut values: Vec<f64> = f.values().to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|x, y| (*x - *y).abs() <= 1e-8);
    let fibres: Vec<Vec<usize>> = values
        .iter()
        .map(|v| (0..k).filter(|&i| (f.values()[i] - v).abs() <= 1e-8).collect())
        .collect();
    let target = spectral_projector(a, delta);
    let mut best: Option<ComplexMatrix> = None;
    for mask in 0..1u64 << fibres.len() {
        let idx: Vec<usize> =
            (0..fibres.len()).filter(|b| mask >> b & 1 == 1).flat_map(|b| fibres[b].clone()).collect();
        let q = spectral_projector(a, &BorelSubset::new(k, idx).unwrap());
        if le(&target, &q) {
            best = match best {
                Some(b) if b.trace().re <= q.trace().re => Some(b),
                _ => Some(q),
            };
        }
    }
    best.unwrap()
}

/// `ν^P(A ∈ Δ)` straight from its definition: `f` is a member when
/// `P ≤ E[f(A) ∈ f(Δ)]`.
pub fn projector_sieve_oracle(
    p: &ComplexMatrix,
    a: &SpectralOperator,
    delta: &BorelSubset,
    mode: SieveMode,
) -> Sieve {
    let k = a.spectrum_len();
    Sieve::from_predicate(k, mode, |pi| {
        let lumped: Vec<usize> = (0..k)
            .filter(|&i| delta.indices().iter().any(|&j| pi.block_of(i) == pi.block_of(j)))
            .collect();
        let e = spectral_projector(a, &BorelSubset::new(k, lumped).unwrap());
        Ok(le(p, &e))
    })
    .unwrap()
}

/// Least element of `W2` dominating `α`, by comparing matrices.
pub fn theta_oracle(poset: &SubalgebraPoset, w2: usize, alpha: Element) -> Element {
    let top = poset.top();
    let a = top.element(alpha);
    let dominating: Vec<Element> =
        poset.elements(w2).into_iter().filter(|&b| le(&a, &top.element(b))).collect();
    let least = dominating
        .iter()
        .copied()
        .find(|&b| dominating.iter().all(|&c| le(&top.element(b), &top.element(c))))
        .expect("a Boolean algebra has a least dominating element");
    least
}
