//! Finite Boolean algebras of projectors and the poset of their subalgebras.
//!
//! A Boolean context is given by its atoms, mutually orthogonal projectors
//! summing to the identity. Every element is a sum of atoms and is stored as
//! a bitmask over the atom list. Below a fixed top context, a subalgebra is
//! the same thing as a partition of the top atoms (each block summed to one
//! atom of the subalgebra), and inclusion is coarsening.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{sum_matrices, ComplexMatrix, Tolerances};
use crate::partition::{lattice, Partition, PartitionLattice};
use crate::sieve::SieveMode;
use crate::spectral::{prob, QuantumState};

/// An element of a Boolean context: a set of atoms, as a bitmask.
pub type Element = u64;

/// A finite Boolean algebra of projectors, given by its atoms.
#[derive(Clone, Debug)]
pub struct BooleanContext {
    atoms: Vec<ComplexMatrix>,
    tol: Tolerances,
}

impl BooleanContext {
    pub fn new(atoms: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpectralData("context has no atoms".into()));
        }
        if atoms.len() > 63 {
            return Err(Error::SpectrumTooLarge(atoms.len()));
        }
        let dim = atoms[0].dim();
        for (i, a) in atoms.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
            }
            if !a.is_projector(tol.proj) || a.trace().re < 0.5 {
                return Err(Error::InvalidSpectralData(format!("atom {i} is not a nonzero projector")));
            }
            for (j, b) in atoms.iter().enumerate().skip(i + 1) {
                if (a * b).norm() > tol.proj {
                    return Err(Error::InvalidSpectralData(format!("atoms {i} and {j} are not orthogonal")));
                }
            }
        }
        if sum_matrices(dim, &atoms).distance(&ComplexMatrix::identity(dim)) > tol.proj {
            return Err(Error::InvalidSpectralData("atoms do not sum to the identity".into()));
        }
        Ok(BooleanContext { atoms, tol: *tol })
    }

    /// The two-element algebra `{0, 1}`.
    pub fn trivial(dim: usize) -> Self {
        BooleanContext { atoms: vec![ComplexMatrix::identity(dim)], tol: Tolerances::default() }
    }

    pub fn atoms(&self) -> &[ComplexMatrix] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Number of elements, `2^atoms`.
    pub fn size(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    pub fn full(&self) -> Element {
        (1u64 << self.atoms.len()) - 1
    }

    /// The projector `Σ_{i ∈ mask} atom_i`.
    pub fn element(&self, mask: Element) -> ComplexMatrix {
        sum_matrices(
            self.dim(),
            self.atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a),
        )
    }

    /// For each atom of `sub`, the mask of atoms of `self` it is the sum of.
    /// Fails unless `sub` is a subalgebra of `self`.
    pub fn embedding_of(&self, sub: &BooleanContext, tol: &Tolerances) -> Result<Vec<Element>> {
        if sub.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: sub.dim() });
        }
        let mut out = Vec::with_capacity(sub.atom_count());
        for (j, q) in sub.atoms.iter().enumerate() {
            let mut mask = 0;
            for (i, p) in self.atoms.iter().enumerate() {
                let qp = q * p;
                if qp.distance(p) <= tol.proj {
                    mask |= 1 << i;
                } else if qp.norm() > tol.proj {
                    return Err(Error::NotSubalgebra(format!(
                        "atom {j} of the smaller algebra cuts atom {i} of the larger"
                    )));
                }
            }
            if self.element(mask).distance(q) > tol.proj {
                return Err(Error::NotSubalgebra(format!("atom {j} is not a sum of atoms")));
            }
            out.push(mask);
        }
        Ok(out)
    }
}

/// All subalgebras of a top context, indexed like the partition lattice of
/// its atoms.
#[derive(Debug)]
pub struct SubalgebraPoset {
    top: BooleanContext,
    mode: SieveMode,
    lattice: &'static PartitionLattice,
    nodes: Vec<usize>,
}

/// A node of a [`SubalgebraPoset`], referenced by lattice index.
pub type Node = usize;

impl SubalgebraPoset {
    /// In `WithoutConstants` mode the trivial algebra is not a node.
    pub fn new(top: BooleanContext, mode: SieveMode) -> Result<Self> {
        let lattice = lattice(top.atom_count())?;
        let nodes = (0..lattice.partitions().len())
            .filter(|&i| mode.admits(&lattice.partitions()[i]))
            .collect();
        Ok(SubalgebraPoset { top, mode, lattice, nodes })
    }

    pub fn top(&self) -> &BooleanContext {
        &self.top
    }

    pub fn mode(&self) -> SieveMode {
        self.mode
    }

    /// Admissible nodes, in lattice order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// The top algebra itself (discrete partition of its atoms).
    pub fn top_node(&self) -> Node {
        self.lattice.index_of(&Partition::discrete(self.top.atom_count())).expect("discrete partition")
    }

    pub fn partition(&self, w: Node) -> &Partition {
        &self.lattice.partitions()[w]
    }

    pub fn node_of(&self, p: &Partition) -> Option<Node> {
        self.lattice.index_of(p).filter(|&i| self.mode.admits(&self.lattice.partitions()[i]))
    }

    fn check_node(&self, w: Node) -> Result<()> {
        if w >= self.lattice.partitions().len() || !self.mode.admits(self.partition(w)) {
            return Err(Error::NotSubalgebra(format!("node {w} is not in the poset")));
        }
        Ok(())
    }

    /// `W2 ⊆ W1`.
    pub fn is_subalgebra(&self, w2: Node, w1: Node) -> bool {
        self.partition(w1).refines(self.partition(w2))
    }

    /// Nodes below `w`, including `w`.
    pub fn below(&self, w: Node) -> Vec<Node> {
        self.lattice.coarsenings(w).iter().copied().filter(|&j| self.mode.admits(self.partition(j))).collect()
    }

    /// Atom masks (over the top atoms) of the atoms of node `w`.
    pub fn atoms_of(&self, w: Node) -> Vec<Element> {
        self.partition(w).blocks().iter().map(|b| b.iter().fold(0, |m, &i| m | 1 << i)).collect()
    }

    /// All elements of node `w`, as masks over the top atoms.
    pub fn elements(&self, w: Node) -> Vec<Element> {
        let atoms = self.atoms_of(w);
        (0..1u64 << atoms.len())
            .map(|sel| atoms.iter().enumerate().filter(|(b, _)| sel >> b & 1 == 1).fold(0, |m, (_, a)| m | a))
            .collect()
    }

    pub fn contains_element(&self, w: Node, alpha: Element) -> bool {
        self.atoms_of(w).iter().all(|a| alpha & a == 0 || alpha & a == *a) && alpha >> self.top.atom_count() == 0
    }

    /// The concrete Boolean context of node `w`.
    pub fn context(&self, w: Node) -> BooleanContext {
        BooleanContext {
            atoms: self.atoms_of(w).into_iter().map(|m| self.top.element(m)).collect(),
            tol: self.top.tol,
        }
    }
}

/// A coarse-graining operation `θ_{W1 W2} : W1 -> W2` on a subalgebra poset.
pub trait CoarseGrainingMap {
    fn theta(&self, poset: &SubalgebraPoset, w1: Node, w2: Node, alpha: Element) -> Result<Element>;
}

/// The least element of `W2` dominating `α`: the sum of the `W2`-atoms that
/// overlap `α`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalCoarseGraining;

impl CoarseGrainingMap for CanonicalCoarseGraining {
    fn theta(&self, poset: &SubalgebraPoset, w1: Node, w2: Node, alpha: Element) -> Result<Element> {
        canonical_theta(poset, w1, w2, alpha)
    }
}

pub fn canonical_theta(poset: &SubalgebraPoset, w1: Node, w2: Node, alpha: Element) -> Result<Element> {
    poset.check_node(w1)?;
    poset.check_node(w2)?;
    if !poset.is_subalgebra(w2, w1) {
        return Err(Error::NotSubalgebra(format!("node {w2} is not below node {w1}")));
    }
    if !poset.contains_element(w1, alpha) {
        return Err(Error::NotSubalgebra(format!("element {alpha:#b} is not in node {w1}")));
    }
    Ok(poset.atoms_of(w2).into_iter().filter(|a| a & alpha != 0).fold(0, |m, a| m | a))
}

/// A user-supplied coarse-graining, looked up in a table keyed by
/// `(W1, W2, α)`. Missing entries are errors.
#[derive(Clone, Debug, Default)]
pub struct TableCoarseGraining {
    pub table: BTreeMap<(Node, Node, Element), Element>,
}

impl CoarseGrainingMap for TableCoarseGraining {
    fn theta(&self, _poset: &SubalgebraPoset, w1: Node, w2: Node, alpha: Element) -> Result<Element> {
        self.table
            .get(&(w1, w2, alpha))
            .copied()
            .ok_or_else(|| Error::Input(format!("no coarse-graining entry for ({w1}, {w2}, {alpha:#b})")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CgAxiom {
    CoarseGraining,
    Identity,
    Monotonicity,
    Retraction,
    Composition,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CgViolation {
    pub axiom: CgAxiom,
    /// The nodes involved, largest first.
    pub nodes: Vec<Node>,
    pub elements: Vec<Element>,
}

#[derive(Clone, Debug, Default)]
pub struct CgReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<CgViolation>,
}

impl CgReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks the coarse-graining, monotonicity, retraction and
/// composition axioms of `theta` over every comparable pair and triple.
pub fn check_cg_axioms<T: CoarseGrainingMap>(poset: &SubalgebraPoset, theta: &T) -> Result<CgReport> {
    let mut report = CgReport::default();
    let mut v = Vec::new();
    for &w1 in poset.nodes() {
        let elems1 = poset.elements(w1);
        for w2 in poset.below(w1) {
            report.pairs_checked += 1;
            let image: BTreeMap<Element, Element> =
                elems1.iter().map(|&a| Ok((a, theta.theta(poset, w1, w2, a)?))).collect::<Result<_>>()?;
            for (&a, &t) in &image {
                if !poset.contains_element(w2, t) || a & !t != 0 {
                    v.push(CgViolation { axiom: CgAxiom::CoarseGraining, nodes: vec![w1, w2], elements: vec![a] });
                }
                if w1 == w2 && t != a {
                    v.push(CgViolation { axiom: CgAxiom::Identity, nodes: vec![w1], elements: vec![a] });
                }
            }
            for (&a, &ta) in &image {
                for (&b, &tb) in &image {
                    if a & !b == 0 && ta & !tb != 0 {
                        v.push(CgViolation {
                            axiom: CgAxiom::Monotonicity,
                            nodes: vec![w1, w2],
                            elements: vec![a, b],
                        });
                    }
                }
            }
            for a in poset.elements(w2) {
                if image.get(&a) != Some(&a) {
                    v.push(CgViolation { axiom: CgAxiom::Retraction, nodes: vec![w1, w2], elements: vec![a] });
                }
            }
            for w3 in poset.below(w2) {
                report.triples_checked += 1;
                for (&a, &t12) in &image {
                    let via = theta.theta(poset, w2, w3, t12)?;
                    let direct = theta.theta(poset, w1, w3, a)?;
                    if via != direct {
                        v.push(CgViolation {
                            axiom: CgAxiom::Composition,
                            nodes: vec![w1, w2, w3],
                            elements: vec![a],
                        });
                    }
                }
            }
        }
    }
    v.sort();
    report.violations = v;
    Ok(report)
}

/// A sieve on node `base`: a down-closed set of nodes below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSieve {
    pub base: Node,
    pub members: BTreeSet<Node>,
}

impl WSieve {
    /// `true_W`: every node below `base`.
    pub fn top(poset: &SubalgebraPoset, base: Node) -> WSieve {
        WSieve { base, members: poset.below(base).into_iter().collect() }
    }

    pub fn is_down_closed(&self, poset: &SubalgebraPoset) -> bool {
        self.members.iter().all(|&w| {
            poset.is_subalgebra(w, self.base) && poset.below(w).iter().all(|u| self.members.contains(u))
        })
    }

    pub fn is_top(&self, poset: &SubalgebraPoset) -> bool {
        *self == WSieve::top(poset, self.base)
    }

    /// Restriction to `W2 ⊆ base`: `↓W2 ∩ S`.
    pub fn restrict(&self, poset: &SubalgebraPoset, w2: Node) -> WSieve {
        let below: BTreeSet<Node> = poset.below(w2).into_iter().collect();
        WSieve { base: w2, members: self.members.intersection(&below).copied().collect() }
    }
}

/// `ν^ρ_W(α) = { W' ⊆ W : tr(ρ θ_{WW'}(α)) = 1 }` with the canonical
/// coarse-graining.
pub fn evaluate_w(rho: &QuantumState, poset: &SubalgebraPoset, w: Node, alpha: Element) -> Result<WSieve> {
    evaluate_w_with(rho, poset, &CanonicalCoarseGraining, w, alpha)
}

pub fn evaluate_w_with<T: CoarseGrainingMap>(
    rho: &QuantumState,
    poset: &SubalgebraPoset,
    theta: &T,
    w: Node,
    alpha: Element,
) -> Result<WSieve> {
    poset.check_node(w)?;
    if !poset.contains_element(w, alpha) {
        return Err(Error::NotSubalgebra(format!("element {alpha:#b} is not in node {w}")));
    }
    let tol_one = poset.top().tolerances().one;
    let mut members = BTreeSet::new();
    for w2 in poset.below(w) {
        let t = theta.theta(poset, w, w2, alpha)?;
        if prob(rho, &poset.top().element(t))? >= 1.0 - tol_one {
            members.insert(w2);
        }
    }
    let s = WSieve { base: w, members };
    debug_assert!(s.is_down_closed(poset));
    Ok(s)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LocalValuationReport {
    pub null_ok: bool,
    pub monotonicity_violations: Vec<(Element, Element)>,
    pub exclusivity_violations: Vec<(Element, Element)>,
    pub unit_ok: bool,
}

impl LocalValuationReport {
    /// Null, monotonicity and exclusivity hold (unit is informational).
    pub fn passed(&self) -> bool {
        self.null_ok && self.monotonicity_violations.is_empty() && self.exclusivity_violations.is_empty()
    }
}

/// Checks that `phi` (total on the elements of node `w`) is a valuation of
/// the Boolean algebra `W` in the Heyting algebra of sieves on `W`.
pub fn check_local_valuation(
    poset: &SubalgebraPoset,
    w: Node,
    phi: &BTreeMap<Element, WSieve>,
) -> Result<LocalValuationReport> {
    let elems = poset.elements(w);
    let get = |a: Element| {
        phi.get(&a).ok_or_else(|| Error::Input(format!("valuation undefined on element {a:#b}")))
    };
    let top = WSieve::top(poset, w);
    let full = poset.top().full();
    let mut report = LocalValuationReport {
        null_ok: get(0)?.members.is_empty(),
        unit_ok: *get(full)? == top,
        ..Default::default()
    };
    for &a in &elems {
        for &b in &elems {
            let (pa, pb) = (get(a)?, get(b)?);
            if a & !b == 0 && !pa.members.is_subset(&pb.members) {
                report.monotonicity_violations.push((a, b));
            }
            if a & b == 0 && *pa == top && *pb == top {
                report.exclusivity_violations.push((a, b));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MatchingViolation {
    pub w1: Node,
    pub w2: Node,
    pub alpha: Element,
}

/// Verifies `ν_{W2}(θ_{W1W2}(α)) = ↓W2 ∩ ν_{W1}(α)` for all comparable pairs
/// and all `α ∈ W1`. Returns the violations, sorted.
pub fn check_w_matching(rho: &QuantumState, poset: &SubalgebraPoset) -> Result<Vec<MatchingViolation>> {
    let mut out = Vec::new();
    for &w1 in poset.nodes() {
        for alpha in poset.elements(w1) {
            let upper = evaluate_w(rho, poset, w1, alpha)?;
            for w2 in poset.below(w1) {
                let t = canonical_theta(poset, w1, w2, alpha)?;
                if evaluate_w(rho, poset, w2, t)? != upper.restrict(poset, w2) {
                    out.push(MatchingViolation { w1, w2, alpha });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}
