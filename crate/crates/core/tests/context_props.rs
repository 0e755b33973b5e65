mod common;

use std::collections::BTreeMap;

use common::oracles::theta_oracle;
use common::*;
use ksieve::contexts::{
    canonical_theta, check_cg_axioms, check_local_valuation, check_w_matching, evaluate_w, evaluate_w_with,
    BooleanContext, CanonicalCoarseGraining, CgAxiom, SubalgebraPoset, TableCoarseGraining, WSieve,
};
use ksieve::linalg::ComplexMatrix;
use ksieve::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A context on a random unitary basis whose atoms group basis vectors into
/// `atoms` nonempty blocks.
fn random_context(r: &mut ChaCha8Rng, dim: usize, atoms: usize) -> BooleanContext {
    let u = random_unitary(r, dim);
    let mut owner: Vec<usize> = (0..dim).map(|i| if i < atoms { i } else { r.gen_range(0..atoms) }).collect();
    use rand::seq::SliceRandom;
    owner.shuffle(r);
    let mats = (0..atoms)
        .map(|b| {
            (0..dim).filter(|&i| owner[i] == b).fold(ComplexMatrix::zeros(dim), |acc, i| {
                &acc + &ComplexMatrix::ray_projector(&u.column(i).into_owned()).unwrap()
            })
        })
        .collect();
    BooleanContext::new(mats, &tol()).unwrap()
}

fn table_from_canonical(poset: &SubalgebraPoset) -> TableCoarseGraining {
    let mut t = TableCoarseGraining::default();
    for &w1 in poset.nodes() {
        for w2 in poset.below(w1) {
            for a in poset.elements(w1) {
                t.table.insert((w1, w2, a), canonical_theta(poset, w1, w2, a).unwrap());
            }
        }
    }
    t
}

#[test]
fn canonical_theta_is_the_least_dominating_element() {
    let mut r = rng(41);
    for _ in 0..40 {
        let dim = r.gen_range(1..=5);
        let atoms = r.gen_range(1..=dim);
        let poset = SubalgebraPoset::new(random_context(&mut r, dim, atoms), SieveMode::WithConstants).unwrap();
        let top = poset.top_node();
        for w2 in poset.below(top) {
            for alpha in poset.elements(top) {
                assert_eq!(canonical_theta(&poset, top, w2, alpha).unwrap(), theta_oracle(&poset, w2, alpha));
            }
        }
    }
}

#[test]
fn canonical_theta_satisfies_the_axioms_on_four_and_five_atoms() {
    let mut r = rng(42);
    for (atoms, nodes) in [(4, 15), (5, 52)] {
        let u = random_unitary(&mut r, atoms);
        let poset = SubalgebraPoset::new(basis_context(&u), SieveMode::WithConstants).unwrap();
        assert_eq!(poset.node_count(), nodes);
        let rep = check_cg_axioms(&poset, &CanonicalCoarseGraining).unwrap();
        assert!(rep.passed(), "{:?}", &rep.violations[..rep.violations.len().min(5)]);
        assert!(rep.triples_checked > rep.pairs_checked);
    }
}

#[test]
fn without_constants_drops_the_trivial_node() {
    let poset = SubalgebraPoset::new(diagonal_context(4), SieveMode::WithoutConstants).unwrap();
    assert_eq!(poset.node_count(), 14);
    assert!(check_cg_axioms(&poset, &CanonicalCoarseGraining).unwrap().passed());
}

#[test]
fn mutated_theta_is_caught() {
    let poset = SubalgebraPoset::new(diagonal_context(4), SieveMode::WithConstants).unwrap();
    let table = table_from_canonical(&poset);
    assert!(check_cg_axioms(&poset, &table).unwrap().passed());

    let top = poset.top_node();
    let trivial = poset.node_of(&Partition::one_block(4)).unwrap();
    // sending an atom to 0 in the trivial algebra breaks domination
    let mut broken = table.clone();
    broken.table.insert((top, trivial, 0b0001), 0);
    let rep = check_cg_axioms(&poset, &broken).unwrap();
    assert!(rep.violations.iter().any(|v| v.axiom == CgAxiom::CoarseGraining));

    // not fixing an element of the smaller algebra breaks retraction
    let mut broken = table.clone();
    broken.table.insert((top, trivial, 0b1111), 0);
    let rep = check_cg_axioms(&poset, &broken).unwrap();
    assert!(rep.violations.iter().any(|v| v.axiom == CgAxiom::Retraction));

    let mut missing = table;
    missing.table.remove(&(top, trivial, 0b0001));
    assert!(check_cg_axioms(&poset, &missing).is_err());
}

#[test]
fn constant_one_theta_fails_retraction() {
    // θ(α) = 1 for every nonzero α is a coarse-graining that is monotone but
    // fails retraction wherever the smaller algebra is nontrivial
    let poset = SubalgebraPoset::new(diagonal_context(3), SieveMode::WithConstants).unwrap();
    let mut t = TableCoarseGraining::default();
    for &w1 in poset.nodes() {
        for w2 in poset.below(w1) {
            for a in poset.elements(w1) {
                t.table.insert((w1, w2, a), if a == 0 { 0 } else { 0b111 });
            }
        }
    }
    let rep = check_cg_axioms(&poset, &t).unwrap();
    assert!(rep.violations.iter().all(|v| v.axiom == CgAxiom::Retraction || v.axiom == CgAxiom::Identity));
    assert!(!rep.passed());
}

#[test]
fn state_valuations_are_local_valuations_and_match() {
    let mut r = rng(43);
    for _ in 0..20 {
        let u = random_unitary(&mut r, 4);
        let poset = SubalgebraPoset::new(basis_context(&u), SieveMode::WithConstants).unwrap();
        // a state diagonal in part of the basis makes some elements certain
        let rho = if r.gen_bool(0.5) {
            QuantumState::density(random_density(&mut r, 4), &tol()).unwrap()
        } else {
            let c0 = u.column(0).into_owned();
            let c1 = u.column(1).into_owned();
            let w = r.gen_range(0.0..1.0f64);
            QuantumState::vector(c0 * num_complex::Complex64::new(w.sqrt(), 0.0) + c1 * num_complex::Complex64::new((1.0 - w).sqrt(), 0.0))
                .unwrap()
        };
        for &w in poset.nodes() {
            let phi: BTreeMap<_, _> =
                poset.elements(w).into_iter().map(|a| (a, evaluate_w(&rho, &poset, w, a).unwrap())).collect();
            let rep = check_local_valuation(&poset, w, &phi).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.unit_ok);
        }
        assert!(check_w_matching(&rho, &poset).unwrap().is_empty());
    }
}

#[test]
fn constant_false_passes_local_axioms_but_not_unit() {
    let poset = SubalgebraPoset::new(diagonal_context(3), SieveMode::WithConstants).unwrap();
    let w = poset.top_node();
    let phi: BTreeMap<_, _> = poset
        .elements(w)
        .into_iter()
        .map(|a| (a, WSieve { base: w, members: Default::default() }))
        .collect();
    let rep = check_local_valuation(&poset, w, &phi).unwrap();
    assert!(rep.passed());
    assert!(!rep.unit_ok);
}

#[test]
fn table_theta_agrees_with_canonical_evaluation() {
    let poset = SubalgebraPoset::new(diagonal_context(3), SieveMode::WithConstants).unwrap();
    let table = table_from_canonical(&poset);
    let rho = pure(&[0.6, 0.8, 0.0]);
    for &w in poset.nodes() {
        for a in poset.elements(w) {
            assert_eq!(
                evaluate_w(&rho, &poset, w, a).unwrap(),
                evaluate_w_with(&rho, &poset, &table, w, a).unwrap()
            );
        }
    }
}

#[test]
fn evaluated_sieves_are_down_closed() {
    let mut r = rng(44);
    for _ in 0..20 {
        let poset = SubalgebraPoset::new(random_context(&mut r, 5, 4), SieveMode::WithoutConstants).unwrap();
        let rho = QuantumState::density(random_density(&mut r, 5), &tol()).unwrap();
        for &w in poset.nodes() {
            for a in poset.elements(w) {
                assert!(evaluate_w(&rho, &poset, w, a).unwrap().is_down_closed(&poset));
            }
        }
    }
}
