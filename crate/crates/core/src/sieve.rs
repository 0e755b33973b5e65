//! Sieves on an operator and the Heyting algebra they form.
//!
//! A sieve on `A` is a set of morphisms into `A` closed under precomposition.
//! Precomposing `f : B -> A` with `g : C -> B` coarsens the partition of
//! `σ(A)` that `f` induces, so a sieve is an up-closed set of partitions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{lattice, CoarseGraining, Partition, PartitionLattice};

/// Whether the constant morphisms `r·1 -> A` count as stages of truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SieveMode {
    /// All operators, including multiples of the identity.
    #[serde(rename = "o")]
    WithConstants,
    /// Multiples of the identity removed.
    #[serde(rename = "ostar")]
    WithoutConstants,
}

impl SieveMode {
    /// Whether partition `p` is a stage in this mode.
    pub fn admits(self, p: &Partition) -> bool {
        match self {
            SieveMode::WithConstants => true,
            SieveMode::WithoutConstants => !p.is_one_block(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SieveMode::WithConstants => "o",
            SieveMode::WithoutConstants => "ostar",
        }
    }
}

impl std::str::FromStr for SieveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "o" | "O" => Ok(SieveMode::WithConstants),
            "ostar" | "o*" | "O*" => Ok(SieveMode::WithoutConstants),
            other => Err(Error::Input(format!("unknown sieve mode `{other}` (expected o or ostar)"))),
        }
    }
}

/// Truth classification of a sieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    TotallyTrue,
    TotallyFalse,
    MinimallyTrue,
    Intermediate,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::TotallyTrue => "TotallyTrue",
            Classification::TotallyFalse => "TotallyFalse",
            Classification::MinimallyTrue => "MinimallyTrue",
            Classification::Intermediate => "Intermediate",
        };
        f.write_str(s)
    }
}

/// An up-closed set of partitions of a `k`-element spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sieve {
    k: usize,
    mode: SieveMode,
    members: BTreeSet<Partition>,
}

impl Sieve {
    /// Smallest sieve containing `seed` (members not admissible in `mode` are
    /// dropped).
    pub fn up_closure<I>(k: usize, mode: SieveMode, seed: I) -> Result<Sieve>
    where
        I: IntoIterator<Item = Partition>,
    {
        let lat = lattice(k)?;
        let mut members = BTreeSet::new();
        for p in seed {
            let i = lat
                .index_of(&p)
                .ok_or_else(|| Error::InvalidPartition(format!("{p} is not a partition of {k} elements")))?;
            for &j in lat.coarsenings(i) {
                let q = &lat.partitions()[j];
                if mode.admits(q) {
                    members.insert(q.clone());
                }
            }
        }
        Ok(Sieve { k, mode, members })
    }

    /// Builds a sieve from a membership predicate, which must already be
    /// up-closed.
    pub fn from_predicate<F>(k: usize, mode: SieveMode, mut member: F) -> Result<Sieve>
    where
        F: FnMut(&Partition) -> Result<bool>,
    {
        let lat = lattice(k)?;
        let mut members = BTreeSet::new();
        for p in lat.partitions().iter().filter(|p| mode.admits(p)) {
            if member(p)? {
                members.insert(p.clone());
            }
        }
        Ok(Sieve { k, mode, members })
    }

    /// `true_A`: every admissible partition.
    pub fn top(k: usize, mode: SieveMode) -> Result<Sieve> {
        Sieve::up_closure(k, mode, [Partition::discrete(k)])
    }

    /// `false_A`: the empty sieve.
    pub fn bottom(k: usize, mode: SieveMode) -> Result<Sieve> {
        lattice(k)?;
        Ok(Sieve { k, mode, members: BTreeSet::new() })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> SieveMode {
        self.mode
    }

    pub fn members(&self) -> &BTreeSet<Partition> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.contains(p)
    }

    fn lattice(&self) -> &'static PartitionLattice {
        lattice(self.k).expect("sieve built on a valid lattice")
    }

    /// Every admissible coarsening of every member is a member.
    pub fn is_up_closed(&self) -> bool {
        let lat = self.lattice();
        self.members.iter().all(|p| {
            let i = lat.index_of(p).expect("member of lattice");
            lat.coarsenings(i)
                .iter()
                .map(|&j| &lat.partitions()[j])
                .filter(|q| self.mode.admits(q))
                .all(|q| self.members.contains(q))
        })
    }

    /// Inclusion order of the Heyting algebra.
    pub fn le(&self, other: &Sieve) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    fn check_compatible(&self, other: &Sieve) -> Result<()> {
        if self.k != other.k || self.mode != other.mode {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    pub fn meet(&self, other: &Sieve) -> Result<Sieve> {
        self.check_compatible(other)?;
        Ok(Sieve {
            k: self.k,
            mode: self.mode,
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    pub fn join(&self, other: &Sieve) -> Result<Sieve> {
        self.check_compatible(other)?;
        Ok(Sieve {
            k: self.k,
            mode: self.mode,
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    /// Relative pseudo-complement: `π` is a member when every admissible
    /// coarsening of `π` lying in `self` also lies in `other`.
    pub fn implies(&self, other: &Sieve) -> Result<Sieve> {
        self.check_compatible(other)?;
        let lat = self.lattice();
        let mode = self.mode;
        Sieve::from_predicate(self.k, mode, |p| {
            let i = lat.index_of(p).expect("lattice member");
            Ok(lat
                .coarsenings(i)
                .iter()
                .map(|&j| &lat.partitions()[j])
                .filter(|q| mode.admits(q))
                .all(|q| !self.members.contains(q) || other.members.contains(q)))
        })
    }

    /// Pseudo-complement: partitions with no admissible coarsening in `self`.
    pub fn negate(&self) -> Sieve {
        let lat = self.lattice();
        let mode = self.mode;
        Sieve::from_predicate(self.k, mode, |p| {
            let i = lat.index_of(p).expect("lattice member");
            Ok(lat
                .coarsenings(i)
                .iter()
                .map(|&j| &lat.partitions()[j])
                .filter(|q| mode.admits(q))
                .all(|q| !self.members.contains(q)))
        })
        .expect("lattice exists")
    }

    /// Pull-back along `f : B -> A`: a partition `ρ` of `σ(B)` is a member
    /// when the composite partition of `σ(A)` is a member of `self`.
    pub fn pullback(&self, f: &CoarseGraining) -> Result<Sieve> {
        if f.base_len() != self.k {
            return Err(Error::BaseMismatch);
        }
        let m = f.codomain_len();
        let mode = self.mode;
        Sieve::from_predicate(m, mode, |rho| {
            let keys: Vec<usize> = (0..self.k).map(|i| rho.block_of(f.codomain_index(i))).collect();
            let composite = Partition::from_labels(&keys);
            Ok(self.members.contains(&composite))
        })
    }

    pub fn classify(&self) -> Classification {
        if self.members.is_empty() {
            return Classification::TotallyFalse;
        }
        if self.members.contains(&Partition::discrete(self.k)) {
            return Classification::TotallyTrue;
        }
        if self.mode == SieveMode::WithConstants
            && self.members.len() == 1
            && self.members.contains(&Partition::one_block(self.k))
        {
            return Classification::MinimallyTrue;
        }
        Classification::Intermediate
    }

    /// Members as block notation, with a per-index printer.
    pub fn notation<F: Fn(usize) -> String>(&self, name: F) -> Vec<String> {
        self.members.iter().map(|p| p.notation(&name)).collect()
    }
}

/// Every sieve on a `k`-element spectrum, as up-sets of the admissible
/// partitions. Exponential; meant for exhaustive law checks at small `k`.
pub fn all_sieves(k: usize, mode: SieveMode) -> Result<Vec<Sieve>> {
    let lat = lattice(k)?;
    let admissible: Vec<usize> =
        (0..lat.partitions().len()).filter(|&i| mode.admits(&lat.partitions()[i])).collect();
    if admissible.len() > 20 {
        return Err(Error::SpectrumTooLarge(k));
    }
    let mut out = Vec::new();
    'subsets: for mask in 0u32..1 << admissible.len() {
        let chosen: BTreeSet<usize> =
            (0..admissible.len()).filter(|b| mask >> b & 1 == 1).map(|b| admissible[b]).collect();
        for &i in &chosen {
            for &j in lat.coarsenings(i) {
                if mode.admits(&lat.partitions()[j]) && !chosen.contains(&j) {
                    continue 'subsets;
                }
            }
        }
        out.push(Sieve {
            k,
            mode,
            members: chosen.iter().map(|&i| lat.partitions()[i].clone()).collect(),
        });
    }
    Ok(out)
}
