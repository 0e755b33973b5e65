//! Partial valuations and sieve-valued (generalized) valuations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{fingerprint, ComplexMatrix, Tolerances};
use crate::partition::{lattice, CoarseGraining, Partition};
use crate::sieve::{Classification, Sieve, SieveMode};
use crate::spectral::{
    apply_coarse_graining, apply_function, coarse_grained_projector_cg, is_function_of, prob, spectral_projector,
    BorelSubset, QuantumState, SpectralOperator, ValueMap,
};

/// The proposition `A ∈ Δ`.
#[derive(Clone, Debug)]
pub struct Proposition {
    pub operator: SpectralOperator,
    pub subset: BorelSubset,
}

impl Proposition {
    pub fn new(operator: SpectralOperator, subset: BorelSubset) -> Result<Self> {
        if subset.len() != operator.spectrum_len() {
            return Err(Error::DimensionMismatch { expected: operator.spectrum_len(), found: subset.len() });
        }
        Ok(Proposition { operator, subset })
    }

    /// `A = λ_i`.
    pub fn equals(operator: SpectralOperator, index: usize) -> Result<Self> {
        let subset = BorelSubset::singleton(operator.spectrum_len(), index)?;
        Ok(Proposition { operator, subset })
    }

    pub fn projector(&self) -> ComplexMatrix {
        spectral_projector(&self.operator, &self.subset)
    }
}

/// A FUNC-respecting assignment of eigenvalues to a function-closed set of
/// operators.
#[derive(Clone, Debug)]
pub enum PartialValuation {
    /// `V^{M,m}`: defined on every function of `M`, with `V(f(M)) = f(m)`.
    MaximalGenerated { operator: SpectralOperator, index: usize },
    /// Defined on every function of a listed operator.
    Explicit { assignments: Vec<(SpectralOperator, usize)> },
}

impl PartialValuation {
    pub fn maximal_generated(operator: SpectralOperator, index: usize) -> Result<Self> {
        if index >= operator.spectrum_len() {
            return Err(Error::IndexOutOfRange { index, len: operator.spectrum_len() });
        }
        Ok(PartialValuation::MaximalGenerated { operator, index })
    }

    /// Validates that the assignments agree on every projector that two of
    /// them can express. Two listed operators related by `B = f(A)` share
    /// `E[B ∈ Γ] = E[A ∈ f⁻¹(Γ)]`, so this also enforces `V(B) = f(V(A))`.
    pub fn explicit(assignments: Vec<(SpectralOperator, usize)>) -> Result<Self> {
        let mut seen: HashMap<Vec<i64>, (bool, usize)> = HashMap::new();
        for (j, (a, idx)) in assignments.iter().enumerate() {
            if *idx >= a.spectrum_len() {
                return Err(Error::IndexOutOfRange { index: *idx, len: a.spectrum_len() });
            }
            if let Some((prev, _)) = assignments[..j].iter().find(|(b, _)| b.dim() != a.dim()) {
                return Err(Error::DimensionMismatch { expected: prev.dim(), found: a.dim() });
            }
            if a.spectrum_len() > 16 {
                return Err(Error::SpectrumTooLarge(a.spectrum_len()));
            }
            for delta in BorelSubset::all(a.spectrum_len()) {
                let value = delta.contains(*idx);
                let key = fingerprint(&spectral_projector(a, &delta));
                match seen.get(&key) {
                    Some(&(v, other)) if v != value => {
                        return Err(Error::InconsistentValuation(format!(
                            "assignments {other} and {j} disagree on a shared projector"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, (value, j));
                    }
                }
            }
        }
        Ok(PartialValuation::Explicit { assignments })
    }

    /// `V(B)`, if `B ∈ dom V`.
    pub fn value(&self, b: &SpectralOperator) -> Option<f64> {
        match self {
            PartialValuation::MaximalGenerated { operator, index } => {
                is_function_of(b, operator).map(|f| f.values()[*index])
            }
            PartialValuation::Explicit { assignments } => assignments
                .iter()
                .find_map(|(a, idx)| is_function_of(b, a).map(|f| f.values()[*idx])),
        }
    }

    /// Index of `V(B)` in the spectrum of `B`.
    pub fn value_index(&self, b: &SpectralOperator) -> Option<usize> {
        self.value(b).and_then(|v| b.index_of(v))
    }

    pub fn in_domain(&self, b: &SpectralOperator) -> bool {
        self.value(b).is_some()
    }
}

#[derive(Clone, Debug)]
pub enum ValuationKind {
    /// `ν^V`.
    FromPartial(PartialValuation),
    /// `ν^ψ`, `ν^ρ`, or `ν^P` (through `ρ^P = P / rank P`).
    State(QuantumState),
    /// `ν^{r,ρ}`: probability at least `r`.
    Threshold { rho: QuantumState, r: f64 },
}

/// A sieve-valued valuation together with the sieve mode it lives in.
#[derive(Clone, Debug)]
pub struct GeneralizedValuation {
    pub kind: ValuationKind,
    pub mode: SieveMode,
}

impl GeneralizedValuation {
    pub fn from_partial(v: PartialValuation, mode: SieveMode) -> Self {
        GeneralizedValuation { kind: ValuationKind::FromPartial(v), mode }
    }

    pub fn state(s: QuantumState, mode: SieveMode) -> Self {
        GeneralizedValuation { kind: ValuationKind::State(s), mode }
    }

    /// `ν^P`, evaluated as `ν^{ρ^P}`.
    pub fn projector(p: ComplexMatrix, tol: &Tolerances, mode: SieveMode) -> Result<Self> {
        Ok(Self::state(QuantumState::projector(p, tol)?, mode))
    }

    pub fn threshold(rho: QuantumState, r: f64, mode: SieveMode) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidThreshold(r));
        }
        Ok(GeneralizedValuation { kind: ValuationKind::Threshold { rho, r }, mode })
    }

    pub fn is_from_partial(&self) -> bool {
        matches!(self.kind, ValuationKind::FromPartial(_))
    }

    /// Whether the morphism `f : f(A) -> A` belongs to `ν(A ∈ Δ)`. Any labels
    /// on `f` may be used; only its partition matters.
    pub fn member_at(&self, p: &Proposition, f: &CoarseGraining) -> Result<bool> {
        let a = &p.operator;
        let tol = a.tolerances();
        match &self.kind {
            ValuationKind::State(s) => {
                Ok(prob(s, &coarse_grained_projector_cg(a, f, &p.subset))? >= 1.0 - tol.one)
            }
            ValuationKind::Threshold { rho, r } => {
                Ok(prob(rho, &coarse_grained_projector_cg(a, f, &p.subset))? >= r - tol.one)
            }
            ValuationKind::FromPartial(v) => {
                let b = apply_coarse_graining(a, f)?;
                Ok(match v.value_index(&b) {
                    Some(j) => f.image(p.subset.indices()).contains(&j),
                    None => false,
                })
            }
        }
    }

    /// `ν(A ∈ Δ)` as a sieve on `A`.
    pub fn evaluate(&self, p: &Proposition) -> Result<Sieve> {
        let s = Sieve::from_predicate(p.operator.spectrum_len(), self.mode, |pi| {
            self.member_at(p, &CoarseGraining::canonical(pi.clone()))
        })?;
        assert!(s.is_up_closed(), "valuation produced a non-sieve");
        Ok(s)
    }

    /// `N^ν_A(P) = ν(A ∈ Δ_P)` for a projector `P` in the spectral algebra
    /// of `A`.
    pub fn evaluate_projector(&self, a: &SpectralOperator, projector: &ComplexMatrix) -> Result<Sieve> {
        let delta = a
            .resolve_projector(projector)
            .ok_or_else(|| Error::NotSubalgebra("projector is not in the spectral algebra".into()))?;
        self.evaluate(&Proposition::new(a.clone(), delta)?)
    }

    fn evaluate_all(&self, a: &SpectralOperator) -> Result<Vec<(BorelSubset, Sieve)>> {
        BorelSubset::all(a.spectrum_len())
            .map(|d| {
                let s = self.evaluate(&Proposition::new(a.clone(), d.clone())?)?;
                Ok((d, s))
            })
            .collect()
    }
}

/// Both sides of `ν(h(A) ∈ h(Δ)) = h*(ν(A ∈ Δ))`.
#[derive(Clone, Debug)]
pub struct FuncReport {
    pub at_image: Sieve,
    pub pulled_back: Sieve,
}

impl FuncReport {
    pub fn holds(&self) -> bool {
        self.at_image == self.pulled_back
    }
}

pub fn check_func(
    nu: &GeneralizedValuation,
    a: &SpectralOperator,
    h: &ValueMap,
    delta: &BorelSubset,
) -> Result<FuncReport> {
    let ha = apply_function(a, h)?;
    let cg = h.coarse_graining(a.tolerances().group)?;
    let image = BorelSubset::new(cg.codomain_len(), cg.image(delta.indices()))?;
    let at_image = nu.evaluate(&Proposition::new(ha, image)?)?;
    let pulled_back = nu.evaluate(&Proposition::new(a.clone(), delta.clone())?)?.pullback(&cg)?;
    Ok(FuncReport { at_image, pulled_back })
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub null_ok: bool,
    /// `(h, Δ)` pairs, `h` given by the partition it induces, where FUNC fails.
    pub func_violations: Vec<(Partition, BorelSubset)>,
    /// `Δ1 ⊆ Δ2` with `ν(Δ1) ⊄ ν(Δ2)`.
    pub monotonicity_violations: Vec<(BorelSubset, BorelSubset)>,
    /// Disjoint `Δ1, Δ2` both totally true.
    pub exclusivity_violations: Vec<(BorelSubset, BorelSubset)>,
    /// `ν(A ∈ σ(A))`, which may legitimately fall short of `true_A` for `ν^V`.
    pub unit: Sieve,
    pub unit_ok: bool,
}

impl AxiomReport {
    /// Null, FUNC, monotonicity and exclusivity (the unit condition is
    /// reported but not required).
    pub fn passed(&self) -> bool {
        self.null_ok
            && self.func_violations.is_empty()
            && self.monotonicity_violations.is_empty()
            && self.exclusivity_violations.is_empty()
    }
}

/// Exhaustive axiom check of `ν` at `A` over all pairs of subsets of `σ(A)`
/// and all coarse-grainings of `A`.
pub fn check_axioms(nu: &GeneralizedValuation, a: &SpectralOperator) -> Result<AxiomReport> {
    let k = a.spectrum_len();
    let all = nu.evaluate_all(a)?;
    let top = Sieve::top(k, nu.mode)?;
    let mut mono = Vec::new();
    let mut excl = Vec::new();
    for (d1, s1) in &all {
        for (d2, s2) in &all {
            if d1.is_subset(d2) && !s1.le(s2)? {
                mono.push((d1.clone(), d2.clone()));
            }
            let certain = |s: &Sieve| s.classify() == Classification::TotallyTrue;
            if d1 < d2 && d1.intersection(d2).is_empty() && certain(s1) && certain(s2) {
                excl.push((d1.clone(), d2.clone()));
            }
        }
    }
    let mut func = Vec::new();
    for pi in lattice(k)?.partitions() {
        let cg = CoarseGraining::canonical(pi.clone());
        let ha = apply_coarse_graining(a, &cg)?;
        for (d, s) in &all {
            let image = BorelSubset::new(cg.codomain_len(), cg.image(d.indices()))?;
            let lhs = nu.evaluate(&Proposition::new(ha.clone(), image)?)?;
            if lhs != s.pullback(&cg)? {
                func.push((pi.clone(), d.clone()));
            }
        }
    }
    let unit = all.last().expect("full subset enumerated last").1.clone();
    Ok(AxiomReport {
        null_ok: all[0].1.is_empty(),
        func_violations: func,
        monotonicity_violations: mono,
        exclusivity_violations: excl,
        unit_ok: unit == top,
        unit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisjunctionStrength {
    Equality,
    StrictInequality,
}

/// Compares `ν(A ∈ Δ1 ∪ Δ2)` with `ν(A ∈ Δ1) ∨ ν(A ∈ Δ2)`.
pub fn check_disjunction_strength(
    nu: &GeneralizedValuation,
    a: &SpectralOperator,
    d1: &BorelSubset,
    d2: &BorelSubset,
) -> Result<DisjunctionStrength> {
    let whole = nu.evaluate(&Proposition::new(a.clone(), d1.union(d2))?)?;
    let parts = nu
        .evaluate(&Proposition::new(a.clone(), d1.clone())?)?
        .join(&nu.evaluate(&Proposition::new(a.clone(), d2.clone())?)?)?;
    if whole == parts {
        Ok(DisjunctionStrength::Equality)
    } else if parts.le(&whole)? {
        Ok(DisjunctionStrength::StrictInequality)
    } else {
        Err(Error::InconsistentValuation("join of parts exceeds the disjunction".into()))
    }
}

/// `¬ν(p)`.
pub fn negation(nu: &GeneralizedValuation, p: &Proposition) -> Result<Sieve> {
    Ok(nu.evaluate(p)?.negate())
}

/// `V^ν` on a finite family: `(A, a)` is kept when `ν(A = a)` is totally
/// true.
pub fn extract_partial(nu: &GeneralizedValuation, family: &[SpectralOperator]) -> Result<PartialValuation> {
    let mut assignments = Vec::new();
    for a in family {
        let mut found = None;
        for i in 0..a.spectrum_len() {
            if nu.evaluate(&Proposition::equals(a.clone(), i)?)?.classify() == Classification::TotallyTrue {
                if found.is_some() {
                    return Err(Error::InconsistentValuation(
                        "two eigenvalues of one operator are totally true".into(),
                    ));
                }
                found = Some(i);
            }
        }
        if let Some(i) = found {
            assignments.push((a.clone(), i));
        }
    }
    PartialValuation::explicit(assignments)
}

/// The operators `f(A)`, one per partition of `σ(A)`, with canonical labels.
pub fn down_set_representatives(a: &SpectralOperator) -> Result<Vec<SpectralOperator>> {
    lattice(a.spectrum_len())?
        .partitions()
        .iter()
        .map(|p| apply_coarse_graining(a, &CoarseGraining::canonical(p.clone())))
        .collect()
}

/// `ν^ψ(p)` against `ν^{V^ψ}(p)`, where `V^ψ` is extracted on `↓A`.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub direct: Sieve,
    pub via_partial: Sieve,
    /// Members of `direct` missing from `via_partial`.
    pub lost: Vec<Partition>,
    /// Members of `via_partial` missing from `direct` (expected empty).
    pub gained: Vec<Partition>,
}

pub fn compare_chain(state: &QuantumState, p: &Proposition, mode: SieveMode) -> Result<ChainReport> {
    let nu = GeneralizedValuation::state(state.clone(), mode);
    let direct = nu.evaluate(p)?;
    let v = extract_partial(&nu, &down_set_representatives(&p.operator)?)?;
    let via_partial = GeneralizedValuation::from_partial(v, mode).evaluate(p)?;
    let lost = direct.members().difference(via_partial.members()).cloned().collect();
    let gained = via_partial.members().difference(direct.members()).cloned().collect();
    Ok(ChainReport { direct, via_partial, lost, gained })
}

#[derive(Clone, Debug, Default)]
pub struct NaturalityReport {
    /// `Δ` where the `N^ν` square fails.
    pub n_violations: Vec<BorelSubset>,
    /// Eigenvalue indices where the `V^ν` square fails.
    pub v_violations: Vec<usize>,
    /// Eigenvalue indices where `V^ν_A(a) ≠ N^ν_A(E[A = a])`.
    pub factorization_violations: Vec<usize>,
}

impl NaturalityReport {
    pub fn passed(&self) -> bool {
        self.n_violations.is_empty() && self.v_violations.is_empty() && self.factorization_violations.is_empty()
    }
}

/// Checks the naturality squares of `N^ν` and `V^ν` along `f(A) -> A`.
pub fn check_naturality(nu: &GeneralizedValuation, a: &SpectralOperator, f: &ValueMap) -> Result<NaturalityReport> {
    let fa = apply_function(a, f)?;
    let cg = f.coarse_graining(a.tolerances().group)?;
    let mut report = NaturalityReport::default();
    for delta in BorelSubset::all(a.spectrum_len()) {
        // N^ν_A applied to E[A ∈ Δ], then restricted along f
        let upper = nu.evaluate_projector(a, &spectral_projector(a, &delta))?.pullback(&cg)?;
        let image = BorelSubset::new(cg.codomain_len(), cg.image(delta.indices()))?;
        let lower = nu.evaluate_projector(&fa, &spectral_projector(&fa, &image))?;
        if upper != lower {
            report.n_violations.push(delta);
        }
    }
    for i in 0..a.spectrum_len() {
        let v_a = nu.evaluate(&Proposition::equals(a.clone(), i)?)?;
        let v_fa = nu.evaluate(&Proposition::equals(fa.clone(), cg.codomain_index(i))?)?;
        if v_a.pullback(&cg)? != v_fa {
            report.v_violations.push(i);
        }
        let singleton = BorelSubset::singleton(a.spectrum_len(), i)?;
        if nu.evaluate_projector(a, &spectral_projector(a, &singleton))? != v_a {
            report.factorization_violations.push(i);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn spin1_sx() -> SpectralOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, s, 0.0], vec![s, 0.0, s], vec![0.0, s, 0.0]]).unwrap();
        SpectralOperator::decompose(&m, &tol()).unwrap()
    }

    fn psi_010() -> QuantumState {
        QuantumState::vector(DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]))
        .unwrap()
    }

    #[test]
    fn spin1_sx_equals_one() {
        let sx = spin1_sx();
        let nu = GeneralizedValuation::state(psi_010(), SieveMode::WithConstants);
        let s = nu.evaluate(&Proposition::equals(sx.clone(), 2).unwrap()).unwrap();
        let pair = Partition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let expected = Sieve::up_closure(3, SieveMode::WithConstants, [pair]).unwrap();
        assert_eq!(s, expected);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn empty_subset_is_totally_false() {
        let sx = spin1_sx();
        let nu = GeneralizedValuation::state(psi_010(), SieveMode::WithConstants);
        let s = nu.evaluate(&Proposition::new(sx, BorelSubset::empty(3)).unwrap()).unwrap();
        assert_eq!(s.classify(), Classification::TotallyFalse);
    }

    #[test]
    fn explicit_rejects_contradiction() {
        let sx = spin1_sx();
        let sq = apply_function(&sx, &ValueMap::from_fn(&sx, |l| l * l)).unwrap();
        // S_x = 1 forces S_x² = 1, not 0
        assert!(PartialValuation::explicit(vec![(sx.clone(), 2), (sq.clone(), 0)]).is_err());
        assert!(PartialValuation::explicit(vec![(sx, 2), (sq, 1)]).is_ok());
    }

    #[test]
    fn threshold_range() {
        let rho = QuantumState::density(ComplexMatrix::diagonal(&[0.5, 0.5]), &tol()).unwrap();
        assert!(GeneralizedValuation::threshold(rho.clone(), 0.0, SieveMode::WithConstants).is_err());
        assert!(GeneralizedValuation::threshold(rho.clone(), 1.5, SieveMode::WithConstants).is_err());
        assert!(GeneralizedValuation::threshold(rho, 1.0, SieveMode::WithConstants).is_ok());
    }

    #[test]
    fn partial_valuation_is_label_independent() {
        let sx = spin1_sx();
        let nu = GeneralizedValuation::from_partial(
            PartialValuation::maximal_generated(sx.clone(), 0).unwrap(),
            SieveMode::WithConstants,
        );
        let p = Proposition::new(sx, BorelSubset::new(3, [0, 1]).unwrap()).unwrap();
        for part in lattice(3).unwrap().partitions() {
            let canon = nu.member_at(&p, &CoarseGraining::canonical(part.clone())).unwrap();
            let labels = (0..part.block_count()).map(|b| 10.0 - 3.5 * b as f64).collect();
            let other = CoarseGraining::new(part.clone(), labels).unwrap();
            assert_eq!(canon, nu.member_at(&p, &other).unwrap());
        }
    }
}
