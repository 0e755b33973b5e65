mod common;

use common::oracles::{heyting_violations, random_sieve};
use common::rng;
use ksieve::partition::{lattice, CoarseGraining, Partition};
use ksieve::sieve::{all_sieves, Classification, Sieve, SieveMode};
use proptest::prelude::*;

const MODES: [SieveMode; 2] = [SieveMode::WithConstants, SieveMode::WithoutConstants];

#[test]
fn exhaustive_laws_on_three_point_spectrum() {
    for mode in MODES {
        let all = all_sieves(3, mode).unwrap();
        for a in &all {
            for b in &all {
                for c in &all {
                    let v = heyting_violations(a, b, c);
                    assert!(v.is_empty(), "{v:?} on {a:?} {b:?} {c:?}");
                }
            }
        }
    }
}

#[test]
fn sieve_counts_small_k() {
    // up-sets of the partition lattice of a 1-, 2-, 3-element set
    assert_eq!(all_sieves(1, SieveMode::WithConstants).unwrap().len(), 2);
    assert_eq!(all_sieves(2, SieveMode::WithConstants).unwrap().len(), 3);
    assert_eq!(all_sieves(3, SieveMode::WithConstants).unwrap().len(), 10);
    assert_eq!(all_sieves(1, SieveMode::WithoutConstants).unwrap().len(), 1);
}

#[test]
fn degenerate_stage_without_constants() {
    let top = Sieve::top(1, SieveMode::WithoutConstants).unwrap();
    assert!(top.is_empty());
    assert_eq!(top.classify(), Classification::TotallyFalse);
}

#[test]
fn negation_kills_sieves_containing_constants() {
    for s in all_sieves(3, SieveMode::WithConstants).unwrap() {
        if s.contains(&Partition::one_block(3)) {
            assert!(s.negate().is_empty());
        }
    }
    let bottom = Sieve::bottom(3, SieveMode::WithConstants).unwrap();
    assert_eq!(bottom.negate(), Sieve::top(3, SieveMode::WithConstants).unwrap());
    assert_eq!(bottom.implies(&bottom).unwrap().classify(), Classification::TotallyTrue);
}

#[test]
fn mode_mismatch_is_an_error() {
    let a = Sieve::top(3, SieveMode::WithConstants).unwrap();
    let b = Sieve::top(3, SieveMode::WithoutConstants).unwrap();
    assert!(a.meet(&b).is_err());
    assert!(a.join(&Sieve::top(2, SieveMode::WithConstants).unwrap()).is_err());
}

#[test]
fn random_laws_on_four_and_five() {
    let mut r = rng(7);
    let mut count = 0;
    for k in [4, 5] {
        for mode in MODES {
            for _ in 0..150 {
                let (a, b, c) = (random_sieve(&mut r, k, mode), random_sieve(&mut r, k, mode), random_sieve(&mut r, k, mode));
                let v = heyting_violations(&a, &b, &c);
                assert!(v.is_empty(), "{v:?}");
                count += 1;
            }
        }
    }
    assert!(count >= 500);
}

fn partition_strategy(k: usize) -> impl Strategy<Value = Partition> {
    let n = lattice(k).unwrap().partitions().len();
    (0..n).prop_map(move |i| lattice(k).unwrap().partitions()[i].clone())
}

fn labels_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    Just((0..n).map(|i| i as f64).collect::<Vec<f64>>())
        .prop_shuffle()
        .prop_map(|v| v.into_iter().map(|x| x * 1.25 - 3.0).collect())
}

proptest! {
    #[test]
    fn pullback_is_functorial(
        k in 1usize..=5,
        seed in proptest::collection::vec(any::<prop::sample::Index>(), 0..3),
        fi in any::<prop::sample::Index>(),
        gi in any::<prop::sample::Index>(),
        mode_bit in any::<bool>(),
    ) {
        let mode = if mode_bit { SieveMode::WithConstants } else { SieveMode::WithoutConstants };
        let parts = lattice(k).unwrap().partitions();
        let s = Sieve::up_closure(k, mode, seed.iter().map(|i| parts[i.index(parts.len())].clone())).unwrap();
        let f = CoarseGraining::canonical(parts[fi.index(parts.len())].clone());
        let m = f.codomain_len();
        let gparts = lattice(m).unwrap().partitions();
        let g = CoarseGraining::canonical(gparts[gi.index(gparts.len())].clone());
        let two_steps = s.pullback(&f).unwrap().pullback(&g).unwrap();
        let composite = f.compose(&g).unwrap();
        prop_assert_eq!(two_steps, s.pullback(&composite).unwrap());
        prop_assert!(s.pullback(&f).unwrap().is_up_closed());
        // a member morphism pulls back to the principal sieve
        if s.contains(f.partition()) {
            prop_assert_eq!(s.pullback(&f).unwrap(), Sieve::top(m, mode).unwrap());
        }
    }

    #[test]
    fn labels_do_not_matter(
        p in partition_strategy(4),
        seed in proptest::collection::vec(partition_strategy(4), 0..3),
        labels in labels_strategy(15),
    ) {
        let s = Sieve::up_closure(4, SieveMode::WithConstants, seed).unwrap();
        let a = CoarseGraining::canonical(p.clone());
        let b = CoarseGraining::new(p.clone(), labels[..p.block_count()].to_vec()).unwrap();
        prop_assert_eq!(s.pullback(&a).unwrap().members().len(), s.pullback(&b).unwrap().members().len());
        prop_assert_eq!(s.pullback(&a).unwrap().classify(), s.pullback(&b).unwrap().classify());
    }

    #[test]
    fn meet_and_join_stay_up_closed(
        a in proptest::collection::vec(partition_strategy(4), 0..4),
        b in proptest::collection::vec(partition_strategy(4), 0..4),
    ) {
        let sa = Sieve::up_closure(4, SieveMode::WithConstants, a).unwrap();
        let sb = Sieve::up_closure(4, SieveMode::WithConstants, b).unwrap();
        let top = Sieve::top(4, SieveMode::WithConstants).unwrap();
        let bottom = Sieve::bottom(4, SieveMode::WithConstants).unwrap();
        prop_assert!(sa.meet(&sb).unwrap().is_up_closed());
        prop_assert!(sa.join(&sb).unwrap().is_up_closed());
        prop_assert_eq!(sa.meet(&top).unwrap(), sa.clone());
        prop_assert_eq!(sa.join(&bottom).unwrap(), sa.clone());
    }
}
