//! Set partitions of a finite spectrum, the coarsening order between them, and
//! labelled coarse-grainings.
//!
//! A morphism `f(A) -> A` of the operator category is determined, up to
//! isomorphism of its domain, by which eigenvalues of `A` the function `f`
//! identifies. That is a partition of the eigenvalue indices `0..k`, so the
//! whole down-set below `A` is the partition lattice of `k` elements.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest spectrum size for which partition lattices are enumerated.
pub const MAX_SPECTRUM: usize = 7;

/// A partition of `{0, .., k-1}` in canonical form: elements sorted inside
/// each block, blocks sorted by least element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalises `blocks` as a partition of `0..k`.
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k];
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &i in &b {
                if i >= k {
                    return Err(Error::IndexOutOfRange { index: i, len: k });
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("element {i} occurs twice")));
                }
                seen[i] = true;
            }
            out.push(b);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {missing} is not covered")));
        }
        out.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { blocks: out })
    }

    /// Partition whose blocks are the fibres of `labels` (`labels[i]` is the
    /// block key of element `i`).
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut keys: HashMap<&T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let b = *keys.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
        }
        // first-occurrence numbering already orders blocks by least element
        Partition { blocks }
    }

    pub fn discrete(k: usize) -> Self {
        Partition { blocks: (0..k).map(|i| vec![i]).collect() }
    }

    pub fn one_block(k: usize) -> Self {
        Partition { blocks: vec![(0..k).collect()] }
    }

    /// Size of the ground set.
    pub fn ground_len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_one_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Block index of each element.
    pub fn assignment(&self) -> Vec<usize> {
        let mut a = vec![0; self.ground_len()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                a[i] = b;
            }
        }
        a
    }

    pub fn block_of(&self, element: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&element))
            .expect("element outside ground set")
    }

    /// `true` when every block of `self` lies inside a block of `other`,
    /// i.e. `other` is a coarsening of `self` (or equal to it).
    pub fn refines(&self, other: &Partition) -> bool {
        let a = other.assignment();
        self.blocks.iter().all(|b| b.iter().all(|&i| a[i] == a[b[0]]))
    }

    /// `true` when `other` is obtained from `self` by merging exactly two blocks.
    pub fn is_covered_by(&self, other: &Partition) -> bool {
        other.block_count() + 1 == self.block_count() && self.refines(other)
    }

    /// Block notation, e.g. `{0,2}{1}`, with a caller-supplied element printer.
    pub fn notation<F: Fn(usize) -> String>(&self, name: F) -> String {
        let mut s = String::new();
        for b in &self.blocks {
            s.push('{');
            let names: Vec<String> = b.iter().map(|&i| name(i)).collect();
            s.push_str(&names.join(","));
            s.push('}');
        }
        s
    }

    /// Parses block notation over `1..=k` (one-based), e.g. `{1,3}{2}`.
    pub fn parse_one_based(k: usize, text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::Input(format!("expected `{{` in partition `{text}`")))?;
            let close = open
                .find('}')
                .ok_or_else(|| Error::Input(format!("unclosed block in partition `{text}`")))?;
            let mut block = Vec::new();
            for item in open[..close].split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let n: usize = item
                    .parse()
                    .map_err(|_| Error::Input(format!("bad element `{item}` in partition `{text}`")))?;
                if n == 0 {
                    return Err(Error::Input("partition elements are numbered from 1".into()));
                }
                block.push(n - 1);
            }
            blocks.push(block);
            rest = open[close + 1..].trim_start();
        }
        Partition::new(k, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation(|i| (i + 1).to_string()))
    }
}

/// All partitions of `0..k`, sorted, via restricted growth strings.
pub fn enumerate_partitions(k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut rgs = vec![0usize; k];
    let mut max = vec![0usize; k];
    loop {
        out.push(Partition::from_labels(&rgs));
        // increment the rightmost position that can grow
        let mut i = k - 1;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            if rgs[i] <= max[i - 1] {
                rgs[i] += 1;
                break;
            }
            i -= 1;
        }
        for j in i + 1..k {
            rgs[j] = 0;
        }
        for j in i..k {
            max[j] = max[j - 1].max(rgs[j]);
        }
    }
}

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// The partition lattice of a `k`-element spectrum with its coarsening
/// relation precomputed.
#[derive(Debug)]
pub struct PartitionLattice {
    k: usize,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    coarser: Vec<Vec<usize>>,
}

impl PartitionLattice {
    fn build(k: usize) -> Self {
        let parts = enumerate_partitions(k);
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let coarser = parts
            .iter()
            .map(|p| {
                parts
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| p.refines(q))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        PartitionLattice { k, parts, index, coarser }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Indices of all coarsenings of partition `i`, including `i` itself.
    pub fn coarsenings(&self, i: usize) -> &[usize] {
        &self.coarser[i]
    }

    /// Covering pairs `(finer, coarser)` of the Hasse diagram.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            for &j in &self.coarser[i] {
                if p.is_covered_by(&self.parts[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Shared, lazily built lattice for spectra of size `k`.
pub fn lattice(k: usize) -> Result<&'static PartitionLattice> {
    static CACHE: [OnceLock<PartitionLattice>; MAX_SPECTRUM + 1] =
        [const { OnceLock::new() }; MAX_SPECTRUM + 1];
    if k == 0 || k > MAX_SPECTRUM {
        return Err(Error::SpectrumTooLarge(k));
    }
    Ok(CACHE[k].get_or_init(|| PartitionLattice::build(k)))
}

/// A concrete morphism `f(A) -> A`: a partition of `σ(A)` together with the
/// distinct value `f` takes on each block.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseGraining {
    partition: Partition,
    labels: Vec<f64>,
    rank: Vec<usize>,
}

impl CoarseGraining {
    pub fn new(partition: Partition, labels: Vec<f64>) -> Result<Self> {
        if labels.len() != partition.block_count() {
            return Err(Error::InvalidPartition(format!(
                "{} labels for {} blocks",
                labels.len(),
                partition.block_count()
            )));
        }
        if labels.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidPartition("non-finite label".into()));
        }
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].total_cmp(&labels[b]));
        if order.windows(2).any(|w| labels[w[0]] == labels[w[1]]) {
            return Err(Error::InvalidPartition("labels must be injective on blocks".into()));
        }
        let mut rank = vec![0; labels.len()];
        for (r, &b) in order.iter().enumerate() {
            rank[b] = r;
        }
        Ok(CoarseGraining { partition, labels, rank })
    }

    /// Groups eigenvalue indices by the value `values[i]`; values closer than
    /// `epsilon` are the same value.
    pub fn from_values(values: &[f64], epsilon: f64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPartition("non-finite function value".into()));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match groups.last_mut() {
                Some(g) if values[i] - values[*g.last().unwrap()] <= epsilon => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        let mut labels_by_elem = vec![0usize; values.len()];
        let mut group_label = Vec::with_capacity(groups.len());
        for (gi, g) in groups.iter().enumerate() {
            let span = values[*g.last().unwrap()] - values[g[0]];
            if span > epsilon {
                return Err(Error::DegenerateClustering { span, epsilon });
            }
            for &i in g {
                labels_by_elem[i] = gi;
            }
            group_label.push(g.iter().map(|&i| values[i]).sum::<f64>() / g.len() as f64);
        }
        let partition = Partition::from_labels(&labels_by_elem);
        let labels = partition
            .blocks()
            .iter()
            .map(|b| group_label[labels_by_elem[b[0]]])
            .collect();
        CoarseGraining::new(partition, labels)
    }

    /// The identity morphism of an operator with the given eigenvalues.
    pub fn identity(eigenvalues: &[f64]) -> Result<Self> {
        CoarseGraining::new(Partition::discrete(eigenvalues.len()), eigenvalues.to_vec())
    }

    /// The constant morphism `r·1 -> A`.
    pub fn constant(k: usize, r: f64) -> Result<Self> {
        CoarseGraining::new(Partition::one_block(k), vec![r])
    }

    /// Canonical labels `0, 1, ..` in block order.
    pub fn canonical(partition: Partition) -> Self {
        let labels = (0..partition.block_count()).map(|b| b as f64).collect();
        CoarseGraining::new(partition, labels).expect("distinct canonical labels")
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn base_len(&self) -> usize {
        self.partition.ground_len()
    }

    /// Size of the codomain spectrum, `|σ(f(A))|`.
    pub fn codomain_len(&self) -> usize {
        self.labels.len()
    }

    /// Distinct values of `f`, ascending: the spectrum of `f(A)`.
    pub fn codomain_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.labels.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `f(λ_i)`.
    pub fn value(&self, i: usize) -> f64 {
        self.labels[self.partition.block_of(i)]
    }

    /// Index of `f(λ_i)` in the ascending spectrum of `f(A)`.
    pub fn codomain_index(&self, i: usize) -> usize {
        self.rank[self.partition.block_of(i)]
    }

    /// Eigenvalue indices of `A` that `f` maps onto codomain index `j`.
    pub fn fibre(&self, j: usize) -> Vec<usize> {
        let b = self.rank.iter().position(|&r| r == j).expect("codomain index in range");
        self.partition.blocks()[b].clone()
    }

    /// Direct image `f(Δ)` as codomain indices.
    pub fn image(&self, delta: &BTreeSet<usize>) -> BTreeSet<usize> {
        delta.iter().map(|&i| self.codomain_index(i)).collect()
    }

    /// Composite `self ∘ inner : C -> A` where `self : B -> A` and
    /// `inner : C -> B`.
    pub fn compose(&self, inner: &CoarseGraining) -> Result<CoarseGraining> {
        if inner.base_len() != self.codomain_len() {
            return Err(Error::BaseMismatch);
        }
        let k = self.base_len();
        let keys: Vec<usize> = (0..k).map(|i| inner.codomain_index(self.codomain_index(i))).collect();
        let partition = Partition::from_labels(&keys);
        let labels = partition
            .blocks()
            .iter()
            .map(|b| inner.value(self.codomain_index(b[0])))
            .collect();
        CoarseGraining::new(partition, labels)
    }
}
