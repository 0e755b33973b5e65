//! Sieve-valued truth for finite-dimensional quantum propositions.
//!
//! Operators are stored by their spectral decomposition. A coarse-graining
//! `f(A) -> A` is identified with the partition of `σ(A)` it induces, so the
//! truth values at stage `A` are up-closed sets of partitions ([`sieve`]).
//! [`valuations`] evaluates propositions `A ∈ Δ` into those sieves under
//! partial valuations, pure and mixed states, projectors and probability
//! thresholds. [`contexts`] holds the Boolean-algebra side, and [`ks`]
//! searches finite families of contexts for two-valued global sections.

pub mod categories;
pub mod contexts;
pub mod dot;
pub mod error;
pub mod files;
pub mod ks;
pub mod linalg;
pub mod partition;
pub mod sieve;
pub mod spectral;
pub mod valuations;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerances};
pub use partition::{CoarseGraining, Partition};
pub use sieve::{Classification, Sieve, SieveMode};
pub use spectral::{BorelSubset, QuantumState, SpectralOperator, ValueMap};
pub use valuations::{GeneralizedValuation, PartialValuation, Proposition};
