//! Finite spectral theory: decomposition of Hermitian matrices into distinct
//! eigenvalues and orthogonal spectral projectors, functions of operators,
//! coarse-grained projectors and quantum-mechanical probabilities.

use std::collections::BTreeSet;

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{sum_matrices, ComplexMatrix, Tolerances};
use crate::partition::CoarseGraining;

/// A Hermitian operator with resolved finite spectrum. Eigenvalues are
/// distinct and ascending; `projectors[i]` projects onto the eigenspace of
/// `eigenvalues[i]`.
#[derive(Clone, Debug)]
pub struct SpectralOperator {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
    tol: Tolerances,
}

impl SpectralOperator {
    /// Eigen-decomposes `m`, merging raw eigenvalues closer than `tol.group`.
    pub fn decompose(m: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if tol.group <= 0.0 {
            return Err(Error::Input("grouping tolerance must be positive".into()));
        }
        let deviation = m.hermitian_deviation();
        if deviation > tol.herm {
            return Err(Error::NotHermitian { deviation });
        }
        let dim = m.dim();
        let eig = SymmetricEigen::new(m.symmetrized().into_dmatrix());
        let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();

        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(c) if raw[i] - raw[*c.last().unwrap()] <= tol.group => c.push(i),
                _ => clusters.push(vec![i]),
            }
        }

        let mut eigenvalues = Vec::with_capacity(clusters.len());
        let mut projectors = Vec::with_capacity(clusters.len());
        for c in &clusters {
            let span = raw[*c.last().unwrap()] - raw[c[0]];
            if span > tol.group {
                return Err(Error::DegenerateClustering { span, epsilon: tol.group });
            }
            eigenvalues.push(c.iter().map(|&i| raw[i]).sum::<f64>() / c.len() as f64);
            let mut p = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
            for &i in c {
                let v = eig.eigenvectors.column(i);
                p += v * v.adjoint();
            }
            projectors.push(ComplexMatrix::from_dmatrix(p)?);
        }
        let op = SpectralOperator { matrix: m.clone(), eigenvalues, projectors, tol: *tol };
        op.validate()?;
        Ok(op)
    }

    /// Builds an operator from exact spectral data; the matrix is `Σ λ_i P_i`.
    /// Eigenvalues are sorted ascending together with their projectors.
    pub fn from_spectral_data(
        eigenvalues: Vec<f64>,
        projectors: Vec<ComplexMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.len() != projectors.len() {
            return Err(Error::InvalidSpectralData(format!(
                "{} eigenvalues for {} projectors",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidSpectralData("non-finite eigenvalue".into()));
        }
        let dim = projectors[0].dim();
        if let Some(p) = projectors.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        let mut pairs: Vec<(f64, ComplexMatrix)> = eigenvalues.into_iter().zip(projectors).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[1].0 - w[0].0 <= tol.group) {
            return Err(Error::InvalidSpectralData("eigenvalues are not distinct".into()));
        }
        let (eigenvalues, projectors): (Vec<f64>, Vec<ComplexMatrix>) = pairs.into_iter().unzip();
        let matrix = weighted_sum(dim, &eigenvalues, &projectors);
        let op = SpectralOperator { matrix, eigenvalues, projectors, tol: *tol };
        op.validate()?;
        Ok(op)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let tol = &self.tol;
        for (i, p) in self.projectors.iter().enumerate() {
            if !p.is_projector(tol.proj) {
                return Err(Error::InvalidSpectralData(format!("projector {i} is not a projector")));
            }
            if p.trace().re < 0.5 {
                return Err(Error::InvalidSpectralData(format!("projector {i} is zero")));
            }
            for (j, q) in self.projectors.iter().enumerate().skip(i + 1) {
                if (p * q).norm() > tol.proj {
                    return Err(Error::InvalidSpectralData(format!(
                        "projectors {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        let total = sum_matrices(dim, &self.projectors);
        if total.distance(&ComplexMatrix::identity(dim)) > tol.proj {
            return Err(Error::InvalidSpectralData("projectors do not resolve the identity".into()));
        }
        let rebuilt = weighted_sum(dim, &self.eigenvalues, &self.projectors);
        if rebuilt.distance(&self.matrix) > tol.rec {
            return Err(Error::InvalidSpectralData("Σ λ P does not reconstruct the matrix".into()));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Number of distinct eigenvalues.
    pub fn spectrum_len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Index of the eigenvalue within `tol.group` of `value`.
    pub fn index_of(&self, value: f64) -> Option<usize> {
        self.eigenvalues.iter().position(|&l| (l - value).abs() <= self.tol.group)
    }

    /// Writes `projector` as `E[A ∈ Δ]`, if it belongs to the spectral algebra.
    pub fn resolve_projector(&self, projector: &ComplexMatrix) -> Option<BorelSubset> {
        let mut delta = BTreeSet::new();
        for (i, p) in self.projectors.iter().enumerate() {
            let pq = projector * p;
            if pq.distance(p) <= self.tol.proj {
                delta.insert(i);
            } else if pq.norm() > self.tol.proj {
                return None;
            }
        }
        let subset = BorelSubset { len: self.spectrum_len(), indices: delta };
        if spectral_projector(self, &subset).distance(projector) <= self.tol.proj {
            Some(subset)
        } else {
            None
        }
    }
}

fn weighted_sum(dim: usize, values: &[f64], projectors: &[ComplexMatrix]) -> ComplexMatrix {
    let scaled: Vec<ComplexMatrix> = values.iter().zip(projectors).map(|(&l, p)| p.scale(l)).collect();
    sum_matrices(dim, &scaled)
}

/// A subset `Δ` of the eigenvalue indices of some operator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BorelSubset {
    len: usize,
    indices: BTreeSet<usize>,
}

impl BorelSubset {
    pub fn new(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index: bad, len });
        }
        Ok(BorelSubset { len, indices })
    }

    pub fn empty(len: usize) -> Self {
        BorelSubset { len, indices: BTreeSet::new() }
    }

    pub fn full(len: usize) -> Self {
        BorelSubset { len, indices: (0..len).collect() }
    }

    pub fn singleton(len: usize, i: usize) -> Result<Self> {
        Self::new(len, [i])
    }

    /// Subset from a bitmask over `0..len`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        BorelSubset { len, indices: (0..len).filter(|&i| mask >> i & 1 == 1).collect() }
    }

    /// Every subset of `0..len`, in bitmask order.
    pub fn all(len: usize) -> impl Iterator<Item = BorelSubset> {
        (0..1u64 << len).map(move |m| BorelSubset::from_mask(len, m))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn union(&self, other: &Self) -> Self {
        BorelSubset { len: self.len, indices: self.indices.union(&other.indices).copied().collect() }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        BorelSubset {
            len: self.len,
            indices: self.indices.intersection(&other.indices).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.indices.is_subset(&other.indices)
    }
}

/// A real function on the spectrum, given by its value at each eigenvalue index.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueMap(pub Vec<f64>);

impl ValueMap {
    pub fn identity(a: &SpectralOperator) -> Self {
        ValueMap(a.eigenvalues.clone())
    }

    pub fn constant(k: usize, r: f64) -> Self {
        ValueMap(vec![r; k])
    }

    /// `λ_i ↦ g(λ_i)`.
    pub fn from_fn<F: Fn(f64) -> f64>(a: &SpectralOperator, g: F) -> Self {
        ValueMap(a.eigenvalues.iter().map(|&l| g(l)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// The morphism `f(A) -> A` this map induces.
    pub fn coarse_graining(&self, epsilon: f64) -> Result<CoarseGraining> {
        CoarseGraining::from_values(&self.0, epsilon)
    }

    /// `g ∘ f`, where `g` is a value map on the spectrum of `f(A)` (indexed
    /// in ascending order of the distinct values of `f`).
    pub fn then(&self, g: &ValueMap, epsilon: f64) -> Result<ValueMap> {
        let cg = self.coarse_graining(epsilon)?;
        if g.0.len() != cg.codomain_len() {
            return Err(Error::DimensionMismatch { expected: cg.codomain_len(), found: g.0.len() });
        }
        Ok(ValueMap((0..self.0.len()).map(|i| g.0[cg.codomain_index(i)]).collect()))
    }
}

/// `E[A ∈ Δ] = Σ_{i∈Δ} P_i`.
pub fn spectral_projector(a: &SpectralOperator, delta: &BorelSubset) -> ComplexMatrix {
    debug_assert_eq!(delta.len(), a.spectrum_len());
    sum_matrices(a.dim(), delta.indices.iter().map(|&i| &a.projectors[i]))
}

fn check_map_len(a: &SpectralOperator, f: &ValueMap) -> Result<()> {
    if f.0.len() != a.spectrum_len() {
        return Err(Error::DimensionMismatch { expected: a.spectrum_len(), found: f.0.len() });
    }
    Ok(())
}

/// `f(A) = Σ f(λ_i) P_i`, with spectral data given by the fibres of `f`.
pub fn apply_function(a: &SpectralOperator, f: &ValueMap) -> Result<SpectralOperator> {
    check_map_len(a, f)?;
    let cg = f.coarse_graining(a.tol.group)?;
    apply_coarse_graining(a, &cg)
}

/// The codomain operator of a coarse-graining of `A`.
pub fn apply_coarse_graining(a: &SpectralOperator, cg: &CoarseGraining) -> Result<SpectralOperator> {
    if cg.base_len() != a.spectrum_len() {
        return Err(Error::DimensionMismatch { expected: a.spectrum_len(), found: cg.base_len() });
    }
    let eigenvalues = cg.codomain_eigenvalues();
    let projectors: Vec<ComplexMatrix> = (0..cg.codomain_len())
        .map(|j| sum_matrices(a.dim(), cg.fibre(j).iter().map(|&i| &a.projectors[i])))
        .collect();
    let matrix = weighted_sum(a.dim(), &eigenvalues, &projectors);
    Ok(SpectralOperator { matrix, eigenvalues, projectors, tol: a.tol })
}

/// Finds `f` with `A = f(M)`, by testing `A·Q_μ = c_μ·Q_μ` on every
/// spectral projector `Q_μ` of `M`. The returned map sends each eigenvalue
/// index of `M` to the corresponding eigenvalue of `A`.
pub fn is_function_of(a: &SpectralOperator, m: &SpectralOperator) -> Option<ValueMap> {
    if a.dim() != m.dim() {
        return None;
    }
    let tol = a.tol.proj.max(a.tol.rec);
    let mut values = Vec::with_capacity(m.spectrum_len());
    for q in &m.projectors {
        let aq = a.matrix() * q;
        let c = (aq.trace() / q.trace()).re;
        if aq.distance(&q.scale(c)) > tol * (1.0 + c.abs()) {
            return None;
        }
        let idx = a.index_of(c).or_else(|| {
            // snap to the nearest eigenvalue of A when the estimate is slightly off
            let (i, d) = a
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, &l)| (i, (l - c).abs()))
                .min_by(|x, y| x.1.total_cmp(&y.1))?;
            (d <= tol * (1.0 + c.abs()) * 10.0).then_some(i)
        })?;
        values.push(a.eigenvalues[idx]);
    }
    Some(ValueMap(values))
}

/// `E[f(A) ∈ f(Δ)]`: the sum of the `P_i` whose value `f(λ_i)` lies in `f(Δ)`.
pub fn coarse_grained_projector(
    a: &SpectralOperator,
    f: &ValueMap,
    delta: &BorelSubset,
) -> Result<ComplexMatrix> {
    check_map_len(a, f)?;
    let cg = f.coarse_graining(a.tol.group)?;
    Ok(coarse_grained_projector_cg(a, &cg, delta))
}

pub(crate) fn coarse_grained_projector_cg(
    a: &SpectralOperator,
    cg: &CoarseGraining,
    delta: &BorelSubset,
) -> ComplexMatrix {
    let image = cg.image(delta.indices());
    sum_matrices(
        a.dim(),
        (0..a.spectrum_len()).filter(|&i| image.contains(&cg.codomain_index(i))).map(|i| &a.projectors[i]),
    )
}

/// `inf { Q ∈ W_{f(A)} : E[A ∈ Δ] ≤ Q }`, computed by enumerating every
/// element of the spectral algebra of `f(A)` and multiplying together the
/// ones that dominate `E[A ∈ Δ]` (commuting projectors meet by product).
pub fn infimum_projector(
    a: &SpectralOperator,
    f: &ValueMap,
    delta: &BorelSubset,
) -> Result<ComplexMatrix> {
    let fa = apply_function(a, f)?;
    let target = spectral_projector(a, delta);
    let m = fa.spectrum_len();
    if m > 20 {
        return Err(Error::SpectrumTooLarge(m));
    }
    let mut inf = ComplexMatrix::identity(a.dim());
    for q in BorelSubset::all(m) {
        let qm = spectral_projector(&fa, &q);
        if target.projector_le(&qm, a.tol.proj) {
            inf = &inf * &qm;
        }
    }
    Ok(inf)
}

/// A quantum state: a vector, a density matrix, or a finite-rank projector
/// (read as the density matrix `P / rank P`).
#[derive(Clone, Debug)]
pub enum QuantumState {
    Vector(DVector<Complex64>),
    Density(ComplexMatrix),
    Projector(ComplexMatrix),
}

impl QuantumState {
    pub fn vector(v: DVector<Complex64>) -> Result<Self> {
        if v.is_empty() || v.norm_squared() <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidState("non-finite vector component".into()));
        }
        Ok(QuantumState::Vector(v))
    }

    pub fn density(rho: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !rho.is_hermitian(tol.herm) {
            return Err(Error::InvalidState("density matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidState(format!("density matrix has trace {}", tr.re)));
        }
        let eig = SymmetricEigen::new(rho.symmetrized().into_dmatrix());
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol.psd {
            return Err(Error::InvalidState(format!("density matrix has eigenvalue {min}")));
        }
        Ok(QuantumState::Density(rho))
    }

    pub fn projector(p: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !p.is_projector(tol.proj) {
            return Err(Error::InvalidState("not a Hermitian idempotent".into()));
        }
        if p.projector_rank() == 0 {
            return Err(Error::InvalidState("zero projector".into()));
        }
        Ok(QuantumState::Projector(p))
    }

    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Vector(v) => v.len(),
            QuantumState::Density(m) | QuantumState::Projector(m) => m.dim(),
        }
    }

    /// The density matrix of this state: `|ψ⟩⟨ψ|/⟨ψ,ψ⟩`, `ρ`, or `P/n`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        match self {
            QuantumState::Vector(v) => ComplexMatrix::ray_projector(v).expect("nonzero vector"),
            QuantumState::Density(rho) => rho.clone(),
            QuantumState::Projector(p) => p.scale(1.0 / p.projector_rank() as f64),
        }
    }
}

/// Born probability of the projector `p` in state `s`.
pub fn prob(s: &QuantumState, p: &ComplexMatrix) -> Result<f64> {
    if s.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: s.dim() });
    }
    let value = match s {
        QuantumState::Vector(v) => {
            let n2 = v.norm_squared();
            if n2 <= f64::MIN_POSITIVE {
                return Err(Error::ZeroNorm);
            }
            v.dotc(&p.apply(v)).re / n2
        }
        QuantumState::Density(rho) => (rho * p).trace().re,
        QuantumState::Projector(q) => (q * p).trace().re / q.projector_rank() as f64,
    };
    Ok(value)
}
