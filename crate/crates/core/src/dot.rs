//! Graphviz export of the partition lattice of an operator's spectrum.

use std::fmt::Write;

use crate::error::Result;
use crate::files::format_value;
use crate::partition::lattice;
use crate::sieve::{Sieve, SieveMode};
use crate::spectral::SpectralOperator;

/// Hasse diagram of the partitions of `σ(A)` admissible in `mode`, finer
/// partitions on top. Members of `highlight` are drawn filled.
pub fn lattice_dot(name: &str, a: &SpectralOperator, mode: SieveMode, highlight: Option<&Sieve>) -> Result<String> {
    let lat = lattice(a.spectrum_len())?;
    let eig = |i: usize| format_value(a.eigenvalues()[i]);
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", name.replace('"', "'")).unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for (i, p) in lat.partitions().iter().enumerate() {
        if !mode.admits(p) {
            continue;
        }
        let lit = highlight.is_some_and(|s| s.contains(p));
        let style = if lit { ", style=filled, fillcolor=\"#f2c14e\"" } else { "" };
        writeln!(out, "  n{i} [label=\"{}\"{style}];", p.notation(eig)).unwrap();
    }
    for (fine, coarse) in lat.covering_pairs() {
        if mode.admits(&lat.partitions()[fine]) && mode.admits(&lat.partitions()[coarse]) {
            writeln!(out, "  n{fine} -> n{coarse};").unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}
