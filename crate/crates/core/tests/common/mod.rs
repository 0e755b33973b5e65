//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use ksieve::contexts::BooleanContext;
use ksieve::files::{data, System};
use ksieve::linalg::{ComplexMatrix, Tolerances};
use ksieve::partition::CoarseGraining;
use ksieve::spectral::{spectral_projector, BorelSubset, QuantumState, SpectralOperator, ValueMap};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn spin_one() -> System {
    System::parse(data::SPIN_ONE).unwrap()
}

pub fn spin_half() -> System {
    System::parse(data::SPIN_HALF).unwrap()
}

pub fn cvec(xs: &[f64]) -> DVector<Complex64> {
    DVector::from_iterator(xs.len(), xs.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// A random unitary (Q factor of a random complex matrix).
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m.qr().q()
}

/// A random Hermitian operator on `dim` dimensions with exactly `k` distinct
/// eigenvalues, drawn from half-integers in `[-3, 3]`.
pub fn random_operator(rng: &mut ChaCha8Rng, dim: usize, k: usize) -> SpectralOperator {
    assert!(1 <= k && k <= dim);
    let mut pool: Vec<f64> = (-6..=6).map(|i| i as f64 * 0.5).collect();
    pool.shuffle(rng);
    let mut eigs: Vec<f64> = pool[..k].to_vec();
    eigs.sort_by(f64::total_cmp);
    // every eigenvalue used at least once, the rest at random
    let mut diag: Vec<f64> = eigs.clone();
    while diag.len() < dim {
        diag.push(eigs[rng.gen_range(0..k)]);
    }
    diag.shuffle(rng);
    let u = random_unitary(rng, dim);
    let d = DMatrix::from_fn(dim, dim, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::new(0.0, 0.0) });
    let m = ComplexMatrix::from_dmatrix(&u * d * u.adjoint()).unwrap();
    SpectralOperator::decompose(&m.symmetrized(), &tol()).unwrap()
}

pub fn random_dim_k(rng: &mut ChaCha8Rng, max_dim: usize, max_k: usize) -> (usize, usize) {
    let dim = rng.gen_range(1..=max_dim);
    let k = rng.gen_range(1..=dim.min(max_k));
    (dim, k)
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> DVector<Complex64> {
    DVector::from_fn(dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random density matrix of random rank.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let rank = rng.gen_range(1..=dim);
    let u = random_unitary(rng, dim);
    let mut w: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let mut m = DMatrix::zeros(dim, dim);
    for (i, wi) in w.iter().enumerate() {
        let c = u.column(i);
        m += (c * c.adjoint()).map(|z| z * *wi);
    }
    ComplexMatrix::from_dmatrix(m).unwrap().symmetrized()
}

/// A density matrix supported inside a random union of eigenspaces of `a`,
/// so that some propositions about `a` get probability one.
pub fn density_adapted_to(rng: &mut ChaCha8Rng, a: &SpectralOperator) -> ComplexMatrix {
    let k = a.spectrum_len();
    let mask = rng.gen_range(1..1u64 << k);
    let support = spectral_projector(a, &BorelSubset::from_mask(k, mask));
    let v = support.apply(&random_vector(rng, a.dim()));
    if v.norm() < 1e-6 {
        return support.scale(1.0 / support.trace().re);
    }
    let r1 = ComplexMatrix::ray_projector(&v).unwrap();
    let mix = rng.gen_range(0.0..1.0);
    let uniform = support.scale(1.0 / support.trace().re);
    (&r1.scale(mix) + &uniform.scale(1.0 - mix)).symmetrized()
}

/// Random projector of the given rank.
pub fn random_projector(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> ComplexMatrix {
    let u = random_unitary(rng, dim);
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..rank {
        let c = u.column(i);
        m += c * c.adjoint();
    }
    ComplexMatrix::from_dmatrix(m).unwrap().symmetrized()
}

/// A random real function on the spectrum taking at most `k` values.
pub fn random_value_map(rng: &mut ChaCha8Rng, a: &SpectralOperator) -> ValueMap {
    let k = a.spectrum_len();
    let m = rng.gen_range(1..=k);
    let vals: Vec<f64> = (0..m).map(|i| i as f64 * 1.5 - 2.0).collect();
    ValueMap((0..k).map(|_| vals[rng.gen_range(0..m)]).collect())
}

pub fn random_subset(rng: &mut ChaCha8Rng, k: usize) -> BorelSubset {
    BorelSubset::from_mask(k, rng.gen_range(0..1u64 << k))
}

pub fn canonical(p: &ksieve::Partition) -> CoarseGraining {
    CoarseGraining::canonical(p.clone())
}

/// Orthonormal-basis context of `dim` rank-one atoms from a unitary.
pub fn basis_context(u: &DMatrix<Complex64>) -> BooleanContext {
    let atoms = (0..u.ncols())
        .map(|i| ComplexMatrix::ray_projector(&u.column(i).into_owned()).unwrap())
        .collect();
    BooleanContext::new(atoms, &tol()).unwrap()
}

pub fn diagonal_context(n: usize) -> BooleanContext {
    let atoms = (0..n)
        .map(|i| {
            let mut d = vec![0.0; n];
            d[i] = 1.0;
            ComplexMatrix::diagonal(&d)
        })
        .collect();
    BooleanContext::new(atoms, &tol()).unwrap()
}

/// Pure state from real components.
pub fn pure(v: &[f64]) -> QuantumState {
    QuantumState::vector(cvec(v)).unwrap()
}

pub mod oracles;
