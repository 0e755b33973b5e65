//! Exhaustive search for global sections of the dual presheaf over a finite
//! family of Boolean contexts, i.e. Kochen-Specker colourings.

use std::collections::{BTreeMap, HashMap};

use crate::categories::spectral_algebra;
use crate::contexts::{BooleanContext, Element};
use crate::error::{Error, Result};
use crate::linalg::{fingerprint, ComplexMatrix, Tolerances};
use crate::spectral::SpectralOperator;
use crate::valuations::PartialValuation;

/// A finite family of contexts in one Hilbert space, with an index of the
/// projectors that several contexts can express.
#[derive(Clone, Debug)]
pub struct ContextFamily {
    dim: usize,
    contexts: Vec<BooleanContext>,
    labels: Vec<Vec<String>>,
    /// Fingerprint of a subset-sum projector -> every `(context, mask)`
    /// producing it.
    shared: HashMap<Vec<i64>, Vec<(usize, Element)>>,
    /// For each context pair `(i, j)` with `i < j`, the mask pairs that
    /// name the same projector.
    links: BTreeMap<(usize, usize), Vec<(Element, Element)>>,
}

impl ContextFamily {
    pub fn new(contexts: Vec<BooleanContext>) -> Result<Self> {
        let labels = contexts
            .iter()
            .map(|c| (0..c.atom_count()).map(|i| format!("#{i}")).collect())
            .collect();
        Self::with_labels(contexts, labels)
    }

    /// `labels[c][i]` names atom `i` of context `c` in reports.
    pub fn with_labels(contexts: Vec<BooleanContext>, labels: Vec<Vec<String>>) -> Result<Self> {
        let first = contexts.first().ok_or_else(|| Error::Input("empty context family".into()))?;
        let dim = first.dim();
        if labels.len() != contexts.len() {
            return Err(Error::Input("one label list per context required".into()));
        }
        let mut shared: HashMap<Vec<i64>, Vec<(usize, Element)>> = HashMap::new();
        for (ci, c) in contexts.iter().enumerate() {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
            }
            if labels[ci].len() != c.atom_count() {
                return Err(Error::Input(format!("context {ci}: one label per atom required")));
            }
            if c.atom_count() > 16 {
                return Err(Error::SpectrumTooLarge(c.atom_count()));
            }
            // 0 and 1 are common to every context and carry no constraint
            for mask in 1..c.full() {
                shared.entry(fingerprint(&c.element(mask))).or_default().push((ci, mask));
            }
        }
        let mut links: BTreeMap<(usize, usize), Vec<(Element, Element)>> = BTreeMap::new();
        for occ in shared.values() {
            for (x, &(c1, m1)) in occ.iter().enumerate() {
                for &(c2, m2) in &occ[x + 1..] {
                    if c1 != c2 {
                        let (key, pair) = if c1 < c2 { ((c1, c2), (m1, m2)) } else { ((c2, c1), (m2, m1)) };
                        links.entry(key).or_default().push(pair);
                    }
                }
            }
        }
        for v in links.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        Ok(ContextFamily { dim, contexts, labels, shared, links })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contexts(&self) -> &[BooleanContext] {
        &self.contexts
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    /// Number of distinct projectors expressed by more than one context.
    pub fn shared_projector_count(&self) -> usize {
        self.shared.values().filter(|occ| occ.iter().any(|&(c, _)| c != occ[0].0)).count()
    }

    /// The family restricted to the listed context indices, in that order.
    pub fn subfamily(&self, indices: &[usize]) -> Result<ContextFamily> {
        let mut cs = Vec::with_capacity(indices.len());
        let mut ls = Vec::with_capacity(indices.len());
        for &i in indices {
            let c = self.contexts.get(i).ok_or(Error::IndexOutOfRange { index: i, len: self.len() })?;
            cs.push(c.clone());
            ls.push(self.labels[i].clone());
        }
        ContextFamily::with_labels(cs, ls)
    }
}

/// A global section: one atom per context, with the 0/1 value it induces on
/// every projector that appears in more than one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSectionWitness {
    pub chosen: Vec<usize>,
    pub shared_values: BTreeMap<Vec<i64>, bool>,
}

/// Depth-first search over atom choices in context order, atoms ascending.
/// Returns the first consistent choice, or `None` if the family admits no
/// global section.
pub fn search_dual_section(fam: &ContextFamily) -> Option<DualSectionWitness> {
    let n = fam.len();
    let mut earlier: Vec<Vec<(usize, &Vec<(Element, Element)>)>> = vec![Vec::new(); n];
    for (&(i, j), pairs) in &fam.links {
        earlier[j].push((i, pairs));
    }
    let mut chosen = vec![0usize; n];
    fn go(
        c: usize,
        fam: &ContextFamily,
        earlier: &[Vec<(usize, &Vec<(Element, Element)>)>],
        chosen: &mut Vec<usize>,
    ) -> bool {
        if c == fam.len() {
            return true;
        }
        for atom in 0..fam.contexts[c].atom_count() {
            let ok = earlier[c].iter().all(|&(i, pairs)| {
                pairs.iter().all(|&(mi, mc)| (mi >> chosen[i] & 1) == (mc >> atom & 1))
            });
            if ok {
                chosen[c] = atom;
                if go(c + 1, fam, earlier, chosen) {
                    return true;
                }
            }
        }
        false
    }
    if !go(0, fam, &earlier, &mut chosen) {
        return None;
    }
    let shared_values = fam
        .shared
        .iter()
        .filter(|(_, occ)| occ.iter().any(|&(c, _)| c != occ[0].0))
        .map(|(fp, occ)| {
            let (c, m) = occ[0];
            (fp.clone(), m >> chosen[c] & 1 == 1)
        })
        .collect();
    Some(DualSectionWitness { chosen, shared_values })
}

/// Independent check of a witness: every context has one valid chosen atom,
/// and any two subset-sums (from different contexts) that are equal as
/// matrices get the same value. Compares matrices directly rather than
/// through fingerprints.
pub fn verify_witness(fam: &ContextFamily, w: &DualSectionWitness, tol: &Tolerances) -> Result<()> {
    if w.chosen.len() != fam.len() {
        return Err(Error::DimensionMismatch { expected: fam.len(), found: w.chosen.len() });
    }
    for (c, &a) in fam.contexts.iter().zip(&w.chosen) {
        if a >= c.atom_count() {
            return Err(Error::IndexOutOfRange { index: a, len: c.atom_count() });
        }
    }
    let elems: Vec<Vec<(Element, ComplexMatrix)>> =
        fam.contexts.iter().map(|c| (0..c.size()).map(|m| (m, c.element(m))).collect()).collect();
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            for (mi, pi) in &elems[i] {
                for (mj, pj) in &elems[j] {
                    if pi.distance(pj) <= tol.proj && (mi >> w.chosen[i] & 1) != (mj >> w.chosen[j] & 1) {
                        return Err(Error::InconsistentValuation(format!(
                            "contexts {i} and {j} value a shared projector differently"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Greedily drops contexts whose removal keeps the family uncolourable.
/// Colourability is inherited by subfamilies, so one pass yields an
/// inclusion-minimal uncolourable subfamily. Returns the kept indices.
pub fn minimal_uncolorable_subfamily(fam: &ContextFamily) -> Result<Vec<usize>> {
    if search_dual_section(fam).is_some() {
        return Err(Error::StillColorable);
    }
    let mut keep: Vec<usize> = (0..fam.len()).collect();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if !trial.is_empty() && search_dual_section(&fam.subfamily(&trial)?).is_none() {
            keep = trial;
        } else {
            i += 1;
        }
    }
    Ok(keep)
}

/// `Σ_i (i + 1)·atom_i`: an operator whose spectral algebra is the context.
pub fn context_operator(c: &BooleanContext) -> Result<SpectralOperator> {
    let eigenvalues = (1..=c.atom_count()).map(|i| i as f64).collect();
    SpectralOperator::from_spectral_data(eigenvalues, c.atoms().to_vec(), c.tolerances())
}

/// Reads a witness as a partial valuation on `operators` (or, when empty, on
/// one maximal operator per context): each operator whose spectral algebra
/// lies inside some context gets the eigenvalue whose projector contains
/// that context's chosen atom.
pub fn section_to_partial_valuation(
    w: &DualSectionWitness,
    fam: &ContextFamily,
    operators: &[SpectralOperator],
) -> Result<PartialValuation> {
    let owned;
    let ops = if operators.is_empty() {
        owned = fam.contexts.iter().map(context_operator).collect::<Result<Vec<_>>>()?;
        &owned[..]
    } else {
        operators
    };
    let mut assignments = Vec::new();
    for op in ops {
        let w_op = spectral_algebra(op);
        let found = fam.contexts.iter().enumerate().find_map(|(ci, c)| {
            let emb = c.embedding_of(&w_op, op.tolerances()).ok()?;
            emb.iter().position(|m| m >> w.chosen[ci] & 1 == 1)
        });
        if let Some(idx) = found {
            assignments.push((op.clone(), idx));
        }
    }
    PartialValuation::explicit(assignments)
}
