//! Finite pieces of the operator category: the down-set of an operator, the
//! spectral algebra functor, the spectral presheaf and its global sections,
//! and the dual presheaf of two-valued homomorphisms.

use crate::contexts::{BooleanContext, Element};
use crate::error::{Error, Result};
use crate::linalg::Tolerances;
use crate::partition::{lattice, CoarseGraining, Partition, PartitionLattice};
use crate::sieve::SieveMode;
use crate::spectral::{
    apply_coarse_graining, apply_function, is_function_of, spectral_projector, BorelSubset, SpectralOperator,
    ValueMap,
};

/// `↓A`: every operator of the form `f(A)`, one per partition of `σ(A)`.
#[derive(Debug)]
pub struct DownSetCategory {
    top: SpectralOperator,
    mode: SieveMode,
    lattice: &'static PartitionLattice,
    objects: Vec<usize>,
}

impl DownSetCategory {
    pub fn new(top: SpectralOperator, mode: SieveMode) -> Result<Self> {
        let lattice = lattice(top.spectrum_len())?;
        let objects = (0..lattice.partitions().len()).filter(|&i| mode.admits(&lattice.partitions()[i])).collect();
        Ok(DownSetCategory { top, mode, lattice, objects })
    }

    pub fn top(&self) -> &SpectralOperator {
        &self.top
    }

    pub fn mode(&self) -> SieveMode {
        self.mode
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Partitions of `σ(A)` naming the objects, in lattice order.
    pub fn objects(&self) -> Vec<&Partition> {
        self.objects.iter().map(|&i| &self.lattice.partitions()[i]).collect()
    }

    /// A representative `f(A)` for the object `p`, with block labels
    /// `0, 1, ..` in block order.
    pub fn representative(&self, p: &Partition) -> Result<SpectralOperator> {
        apply_coarse_graining(&self.top, &CoarseGraining::canonical(p.clone()))
    }

    /// Non-identity morphisms `(from, to)`: `from` is a function of `to`,
    /// i.e. `to` refines `from`. Indices refer to [`Self::objects`].
    pub fn morphisms(&self) -> Vec<(usize, usize)> {
        let parts = self.objects();
        let mut out = Vec::new();
        for (t, pt) in parts.iter().enumerate() {
            for (f, pf) in parts.iter().enumerate() {
                if f != t && pt.refines(pf) {
                    out.push((f, t));
                }
            }
        }
        out
    }
}

/// The Boolean algebra `W_A` generated by the spectral projectors of `A`.
pub fn spectral_algebra(a: &SpectralOperator) -> BooleanContext {
    BooleanContext::new(a.projectors().to_vec(), a.tolerances())
        .expect("a validated spectral decomposition is a Boolean context")
}

/// `Σ(f)(λ_i) = f(λ_i)`.
pub fn sigma_value(f: &CoarseGraining, lambda_index: usize) -> f64 {
    f.value(lambda_index)
}

/// A homomorphism `W -> {0, 1}`: picks one atom, and an element is 1 iff it
/// contains that atom.
#[derive(Clone, Debug)]
pub struct TwoValuedHom {
    pub context: BooleanContext,
    pub chosen_atom: usize,
}

impl TwoValuedHom {
    pub fn new(context: BooleanContext, chosen_atom: usize) -> Result<Self> {
        if chosen_atom >= context.atom_count() {
            return Err(Error::IndexOutOfRange { index: chosen_atom, len: context.atom_count() });
        }
        Ok(TwoValuedHom { context, chosen_atom })
    }

    pub fn value(&self, element: Element) -> bool {
        element >> self.chosen_atom & 1 == 1
    }
}

/// `D(W)`: all two-valued homomorphisms on `W`, one per atom.
pub fn dual_homs(w: &BooleanContext) -> Vec<TwoValuedHom> {
    (0..w.atom_count()).map(|i| TwoValuedHom { context: w.clone(), chosen_atom: i }).collect()
}

/// `D(i_{W2 W1})(χ) = χ|_{W2}`.
pub fn dual_restriction(chi: &TwoValuedHom, w2: &BooleanContext, tol: &Tolerances) -> Result<TwoValuedHom> {
    let embedding = chi.context.embedding_of(w2, tol)?;
    let chosen = embedding
        .iter()
        .position(|m| m >> chi.chosen_atom & 1 == 1)
        .ok_or_else(|| Error::NotSubalgebra("no atom of the subalgebra covers the chosen atom".into()))?;
    Ok(TwoValuedHom { context: w2.clone(), chosen_atom: chosen })
}

/// One failed square of the transformation `T: Σ -> D∘W`.
#[derive(Clone, Debug, PartialEq)]
pub struct TSquareViolation {
    pub partition: Partition,
    pub lambda: usize,
    /// Offending subset of `σ(f(A))`; `None` when the chosen atoms differ.
    pub delta: Option<BorelSubset>,
}

#[derive(Clone, Debug, Default)]
pub struct NatTransReport {
    pub squares_checked: usize,
    pub violations: Vec<TSquareViolation>,
}

impl NatTransReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one square of `T` at the morphism `f(A) -> A` and eigenvalue
/// index `λ`: restricting `T_A(λ)` to `W_{f(A)}` must give `T_{f(A)}(f(λ))`,
/// both on the chosen atom and on every element `E[f(A) ∈ Δ]`.
pub fn t_square_violations(
    a: &SpectralOperator,
    f: &CoarseGraining,
    lambda: usize,
) -> Result<Vec<TSquareViolation>> {
    let b = apply_coarse_graining(a, f)?;
    let tol = a.tolerances();
    let t_a = TwoValuedHom::new(spectral_algebra(a), lambda)?;
    let restricted = dual_restriction(&t_a, &spectral_algebra(&b), tol)?;
    let f_lambda = b
        .index_of(sigma_value(f, lambda))
        .ok_or_else(|| Error::InvalidSpectralData("f(λ) is not an eigenvalue of f(A)".into()))?;
    let t_b = TwoValuedHom::new(spectral_algebra(&b), f_lambda)?;
    let mut out = Vec::new();
    if restricted.chosen_atom != t_b.chosen_atom {
        out.push(TSquareViolation { partition: f.partition().clone(), lambda, delta: None });
    }
    for delta in BorelSubset::all(b.spectrum_len()) {
        // E[f(A) ∈ Δ] read back as an element of W_A
        let in_a = a
            .resolve_projector(&spectral_projector(&b, &delta))
            .ok_or_else(|| Error::NotSubalgebra("W_f(A) does not embed in W_A".into()))?;
        let lhs = in_a.contains(lambda);
        let rhs = delta.contains(t_b.chosen_atom);
        if lhs != rhs {
            out.push(TSquareViolation { partition: f.partition().clone(), lambda, delta: Some(delta) });
        }
    }
    Ok(out)
}

/// Exhaustive naturality check of `T` over every partition of `σ(A)` and
/// every eigenvalue.
pub fn check_nat_trans_t(a: &SpectralOperator) -> Result<NatTransReport> {
    let lat = lattice(a.spectrum_len())?;
    let mut report = NatTransReport::default();
    for p in lat.partitions() {
        let f = CoarseGraining::canonical(p.clone());
        for lambda in 0..a.spectrum_len() {
            report.squares_checked += 1;
            report.violations.extend(t_square_violations(a, &f, lambda)?);
        }
    }
    Ok(report)
}

/// `B = f(A)` inside a family: `to` is `map` applied to `from`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalRelation {
    pub from: usize,
    pub to: usize,
    pub map: ValueMap,
}

/// Every ordered pair `(A, B)` of the family with `B` a function of `A`.
pub fn detect_relations(family: &[SpectralOperator]) -> Vec<FunctionalRelation> {
    let mut out = Vec::new();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            if i != j {
                if let Some(map) = is_function_of(b, a) {
                    out.push(FunctionalRelation { from: i, to: j, map });
                }
            }
        }
    }
    out
}

/// Confirms a declared relation by recomputing `f(A)` and comparing with `B`.
pub fn verify_relation(family: &[SpectralOperator], rel: &FunctionalRelation) -> Result<()> {
    let (a, b) = match (family.get(rel.from), family.get(rel.to)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::IndexOutOfRange { index: rel.from.max(rel.to), len: family.len() }),
    };
    let fa = apply_function(a, &rel.map)?;
    if fa.matrix().distance(b.matrix()) > a.tolerances().rec.max(b.tolerances().rec) * (1.0 + b.matrix().norm()) {
        return Err(Error::Input(format!("declared relation {} -> {} does not hold", rel.from, rel.to)));
    }
    Ok(())
}

/// A global section of `Σ` over a finite family: one eigenvalue index per
/// operator, in family order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionAssignment {
    pub values: Vec<usize>,
}

impl SectionAssignment {
    pub fn value(&self, family: &[SpectralOperator], i: usize) -> f64 {
        family[i].eigenvalues()[self.values[i]]
    }
}

/// Backtracking search for `γ` with `f(γ_A) = γ_B` for every detected
/// relation. Operators are tried in family order, eigenvalues ascending.
pub fn search_sigma_global_section(family: &[SpectralOperator]) -> Option<SectionAssignment> {
    search_sigma_global_section_with(family, &[]).expect("detected relations need no verification")
}

/// As [`search_sigma_global_section`], also enforcing declared relations
/// (each verified against the matrices first).
pub fn search_sigma_global_section_with(
    family: &[SpectralOperator],
    declared: &[FunctionalRelation],
) -> Result<Option<SectionAssignment>> {
    for rel in declared {
        verify_relation(family, rel)?;
    }
    let mut relations = detect_relations(family);
    relations.extend(declared.iter().cloned());
    // allowed[r][vi] = index of B forced by choosing vi for A
    let forced: Vec<Vec<Option<usize>>> = relations
        .iter()
        .map(|r| r.map.values().iter().map(|&v| family[r.to].index_of(v)).collect())
        .collect();
    let mut by_op: Vec<Vec<usize>> = vec![Vec::new(); family.len()];
    for (ri, r) in relations.iter().enumerate() {
        by_op[r.from.max(r.to)].push(ri);
    }
    let mut values = vec![0usize; family.len()];
    fn go(
        i: usize,
        family: &[SpectralOperator],
        relations: &[FunctionalRelation],
        forced: &[Vec<Option<usize>>],
        by_op: &[Vec<usize>],
        values: &mut Vec<usize>,
    ) -> bool {
        if i == family.len() {
            return true;
        }
        for v in 0..family[i].spectrum_len() {
            values[i] = v;
            let ok = by_op[i].iter().all(|&ri| forced[ri][values[relations[ri].from]] == Some(values[relations[ri].to]));
            if ok && go(i + 1, family, relations, forced, by_op, values) {
                return true;
            }
        }
        false
    }
    Ok(go(0, family, &relations, &forced, &by_op, &mut values).then_some(SectionAssignment { values }))
}
