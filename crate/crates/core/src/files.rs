//! JSON file formats for quantum systems and context families, the textual
//! valuation and proposition syntax, and the bundled example data.
//!
//! System file (`"format": "quantum-system/1"`):
//!
//! ```json
//! {
//!   "format": "quantum-system/1",
//!   "dimension": 2,
//!   "mode": "o",
//!   "tolerances": { "group": 1e-8 },
//!   "operators": {
//!     "Sz": { "matrix": [[0.5, 0], [0, -0.5]] },
//!     "Sx": { "matrix": [[0, 1], [1, 0]], "scale": 0.5 },
//!     "Q":  { "spectrum": { "eigenvalues": [0, 1], "projectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]] } }
//!   },
//!   "states": { "psi": { "vector": [1, [0, 1]] }, "rho": { "density": [[0.5, 0], [0, 0.5]] } }
//! }
//! ```
//!
//! Entries are real numbers or `[re, im]` pairs. Context file
//! (`"format": "contexts/1"`): named vectors with components given as
//! numbers, rational strings such as `"-1/2"`, or `[re, im]` pairs, and a
//! list of contexts, each a list of atoms; an atom is a vector name or a
//! list of mutually orthogonal vector names spanning it.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contexts::BooleanContext;
use crate::error::{Error, Result};
use crate::ks::ContextFamily;
use crate::linalg::{sum_matrices, ComplexMatrix, Tolerances};
use crate::sieve::SieveMode;
use crate::spectral::{BorelSubset, QuantumState, SpectralOperator};
use crate::valuations::{GeneralizedValuation, PartialValuation, Proposition};

pub const SYSTEM_FORMAT: &str = "quantum-system/1";
pub const CONTEXTS_FORMAT: &str = "contexts/1";

/// Bundled example files.
pub mod data {
    pub const SPIN_HALF: &str = include_str!("../data/spin_half.json");
    pub const SPIN_ONE: &str = include_str!("../data/spin_one.json");
    pub const KS18_DIM4: &str = include_str!("../data/ks18_dim4.json");
    pub const QUBIT_BASES: &str = include_str!("../data/qubit_bases.json");
}

/// A matrix or vector entry: a real number or an `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    pub fn value(self) -> Complex64 {
        match self {
            Scalar::Real(x) => Complex64::new(x, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub type MatrixSpec = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Matrix {
        matrix: MatrixSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    Spectrum {
        spectrum: SpectrumSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSpec {
    Vector(Vec<Scalar>),
    Density(MatrixSpec),
    Projector(MatrixSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub format: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<SieveMode>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    pub operators: BTreeMap<String, OperatorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, StateSpec>,
}

fn json_error(e: serde_json::Error) -> Error {
    // serde_json's message already carries the line and column
    Error::Input(format!("invalid JSON: {e}"))
}

fn build_matrix(spec: &MatrixSpec, dim: usize, what: &str) -> Result<ComplexMatrix> {
    if spec.len() != dim || spec.iter().any(|r| r.len() != dim) {
        return Err(Error::Input(format!("{what}: expected a {dim}x{dim} matrix")));
    }
    let rows: Vec<Vec<Complex64>> = spec.iter().map(|r| r.iter().map(|z| z.value()).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::Input(format!("{what}: {e}")))
}

fn matrix_spec(m: &ComplexMatrix) -> MatrixSpec {
    (0..m.dim())
        .map(|r| {
            (0..m.dim())
                .map(|c| {
                    let z = m.get(r, c);
                    if z.im == 0.0 {
                        Scalar::Real(z.re)
                    } else {
                        Scalar::Complex([z.re, z.im])
                    }
                })
                .collect()
        })
        .collect()
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: SystemFile = serde_json::from_str(text).map_err(json_error)?;
        if f.format != SYSTEM_FORMAT {
            return Err(Error::Input(format!("format: expected `{SYSTEM_FORMAT}`, found `{}`", f.format)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system file serializes")
    }

    /// Validates every operator and state.
    pub fn load(&self) -> Result<System> {
        let dim = self.dimension;
        if dim == 0 {
            return Err(Error::Input("dimension: must be positive".into()));
        }
        let mut tol = Tolerances::default();
        for (k, v) in &self.tolerances {
            tol.set(k, *v).map_err(|e| Error::Input(format!("tolerances.{k}: {e}")))?;
        }
        let mut operators = BTreeMap::new();
        for (name, spec) in &self.operators {
            let what = format!("operators.{name}");
            let op = match spec {
                OperatorSpec::Matrix { matrix, scale } => {
                    let m = build_matrix(matrix, dim, &what)?.scale(scale.unwrap_or(1.0));
                    SpectralOperator::decompose(&m, &tol)
                }
                OperatorSpec::Spectrum { spectrum } => {
                    let projs = spectrum
                        .projectors
                        .iter()
                        .enumerate()
                        .map(|(i, p)| build_matrix(p, dim, &format!("{what}.projectors[{i}]")))
                        .collect::<Result<Vec<_>>>()?;
                    SpectralOperator::from_spectral_data(spectrum.eigenvalues.clone(), projs, &tol)
                }
            }
            .map_err(|e| Error::Input(format!("{what}: {e}")))?;
            operators.insert(name.clone(), op);
        }
        let mut states = BTreeMap::new();
        for (name, spec) in &self.states {
            let what = format!("states.{name}");
            let s = match spec {
                StateSpec::Vector(v) => {
                    if v.len() != dim {
                        return Err(Error::Input(format!("{what}: expected {dim} components")));
                    }
                    QuantumState::vector(DVector::from_iterator(dim, v.iter().map(|z| z.value())))
                }
                StateSpec::Density(m) => QuantumState::density(build_matrix(m, dim, &what)?, &tol),
                StateSpec::Projector(m) => QuantumState::projector(build_matrix(m, dim, &what)?, &tol),
            }
            .map_err(|e| Error::Input(format!("{what}: {e}")))?;
            states.insert(name.clone(), s);
        }
        Ok(System { dimension: dim, mode: self.mode.unwrap_or(SieveMode::WithConstants), tol, operators, states })
    }
}

/// A loaded, validated system.
#[derive(Clone, Debug)]
pub struct System {
    pub dimension: usize,
    pub mode: SieveMode,
    pub tol: Tolerances,
    pub operators: BTreeMap<String, SpectralOperator>,
    pub states: BTreeMap<String, QuantumState>,
}

impl System {
    pub fn parse(text: &str) -> Result<Self> {
        SystemFile::parse(text)?.load()
    }

    pub fn operator(&self, name: &str) -> Result<&SpectralOperator> {
        self.operators.get(name).ok_or_else(|| Error::Input(format!("unknown operator `{name}`")))
    }

    pub fn state(&self, name: &str) -> Result<&QuantumState> {
        self.states.get(name).ok_or_else(|| Error::Input(format!("unknown state `{name}`")))
    }

    /// Writes the system back out, operators as matrices.
    pub fn to_file(&self) -> SystemFile {
        let d = Tolerances::default();
        let t = &self.tol;
        let mut tolerances = BTreeMap::new();
        for (k, v, dv) in [
            ("herm", t.herm, d.herm),
            ("proj", t.proj, d.proj),
            ("rec", t.rec, d.rec),
            ("psd", t.psd, d.psd),
            ("trace", t.trace, d.trace),
            ("group", t.group, d.group),
            ("one", t.one, d.one),
        ] {
            if v != dv {
                tolerances.insert(k.to_string(), v);
            }
        }
        SystemFile {
            format: SYSTEM_FORMAT.into(),
            dimension: self.dimension,
            mode: Some(self.mode),
            tolerances,
            operators: self
                .operators
                .iter()
                .map(|(n, op)| (n.clone(), OperatorSpec::Matrix { matrix: matrix_spec(op.matrix()), scale: None }))
                .collect(),
            states: self
                .states
                .iter()
                .map(|(n, s)| {
                    let spec = match s {
                        QuantumState::Vector(v) => StateSpec::Vector(
                            v.iter()
                                .map(|z| if z.im == 0.0 { Scalar::Real(z.re) } else { Scalar::Complex([z.re, z.im]) })
                                .collect(),
                        ),
                        QuantumState::Density(m) => StateSpec::Density(matrix_spec(m)),
                        QuantumState::Projector(m) => StateSpec::Projector(matrix_spec(m)),
                    };
                    (n.clone(), spec)
                })
                .collect(),
        }
    }
}

/// Parses a real number: decimal, or a rational `p/q`.
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Input(format!("bad number `{t}`"));
    let x = match t.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if !x.is_finite() {
        return Err(bad());
    }
    Ok(x)
}

/// An eigenvalue reference: `#i` (zero-based, ascending order) or a value
/// matched within the grouping tolerance.
pub fn parse_eigenvalue(op: &SpectralOperator, text: &str) -> Result<usize> {
    let t = text.trim();
    if let Some(idx) = t.strip_prefix('#') {
        let i: usize = idx.parse().map_err(|_| Error::Input(format!("bad eigenvalue index `{t}`")))?;
        if i >= op.spectrum_len() {
            return Err(Error::Input(format!("eigenvalue index {i} out of range (spectrum has {})", op.spectrum_len())));
        }
        return Ok(i);
    }
    let x = parse_number(t)?;
    op.index_of(x).ok_or_else(|| {
        let eigs: Vec<String> = op.eigenvalues().iter().map(|&l| format_value(l)).collect();
        Error::Input(format!("{t} is not an eigenvalue (spectrum: {})", eigs.join(", ")))
    })
}

/// Parses `NAME in {v, ..}`, `NAME in {}` or `NAME = v`.
pub fn parse_proposition(system: &System, text: &str) -> Result<Proposition> {
    let t = text.trim();
    let (name, values): (&str, Vec<&str>) = if let Some((name, rest)) = t.split_once(" in ") {
        let rest = rest.trim();
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Input(format!("proposition `{t}`: expected `{{...}}` after `in`")))?;
        (name.trim(), inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
    } else if let Some((name, v)) = t.split_once('=') {
        (name.trim(), vec![v.trim()])
    } else {
        return Err(Error::Input(format!("proposition `{t}`: expected `NAME in {{..}}` or `NAME=VALUE`")));
    };
    let op = system.operator(name)?;
    let idx = values.iter().map(|v| parse_eigenvalue(op, v)).collect::<Result<Vec<_>>>()?;
    Proposition::new(op.clone(), BorelSubset::new(op.spectrum_len(), idx)?)
}

/// Parses a valuation:
/// `vector NAME`, `density NAME`, `projector NAME`, `threshold R NAME`,
/// `maximal OP=VALUE` or `partial OP=VALUE[,OP=VALUE..]`.
pub fn parse_valuation(system: &System, text: &str, mode: SieveMode) -> Result<GeneralizedValuation> {
    let t = text.trim();
    let (kw, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
    let rest = rest.trim();
    let assignment = |s: &str| -> Result<(SpectralOperator, usize)> {
        let (op, v) = s
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("valuation: expected OP=VALUE, found `{s}`")))?;
        let op = system.operator(op.trim())?;
        Ok((op.clone(), parse_eigenvalue(op, v)?))
    };
    match kw {
        "vector" => match system.state(rest)? {
            s @ QuantumState::Vector(_) => Ok(GeneralizedValuation::state(s.clone(), mode)),
            _ => Err(Error::Input(format!("state `{rest}` is not a vector"))),
        },
        "density" => {
            let rho = QuantumState::density(system.state(rest)?.density_matrix(), &system.tol)?;
            Ok(GeneralizedValuation::state(rho, mode))
        }
        "projector" => match system.state(rest)? {
            s @ QuantumState::Projector(_) => Ok(GeneralizedValuation::state(s.clone(), mode)),
            _ => Err(Error::Input(format!("state `{rest}` is not a projector"))),
        },
        "threshold" => {
            let (r, name) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Input("valuation: expected `threshold R NAME`".into()))?;
            let rho = QuantumState::density(system.state(name.trim())?.density_matrix(), &system.tol)?;
            GeneralizedValuation::threshold(rho, parse_number(r)?, mode)
        }
        "maximal" => {
            let (op, i) = assignment(rest)?;
            Ok(GeneralizedValuation::from_partial(PartialValuation::maximal_generated(op, i)?, mode))
        }
        "partial" => {
            let assignments = rest.split(',').map(assignment).collect::<Result<Vec<_>>>()?;
            Ok(GeneralizedValuation::from_partial(PartialValuation::explicit(assignments)?, mode))
        }
        other => Err(Error::Input(format!(
            "unknown valuation kind `{other}` (expected vector, density, projector, threshold, maximal or partial)"
        ))),
    }
}

/// Short decimal form of an eigenvalue, with `-0` printed as `0`.
pub fn format_value(x: f64) -> String {
    let r = (x * 1e10).round() / 1e10;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// A vector component: number, rational string or `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Real(f64),
    Text(String),
    Complex([f64; 2]),
}

impl Component {
    pub fn value(&self) -> Result<Complex64> {
        Ok(match self {
            Component::Real(x) => Complex64::new(*x, 0.0),
            Component::Text(s) => Complex64::new(parse_number(s)?, 0.0),
            Component::Complex([re, im]) => Complex64::new(*re, *im),
        })
    }
}

/// One atom of a context: a single ray or the span of several.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomSpec {
    Ray(String),
    Span(Vec<String>),
}

impl AtomSpec {
    fn names(&self) -> Vec<&str> {
        match self {
            AtomSpec::Ray(n) => vec![n.as_str()],
            AtomSpec::Span(ns) => ns.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextFile {
    pub format: String,
    pub dim: usize,
    pub vectors: BTreeMap<String, Vec<Component>>,
    pub contexts: Vec<Vec<AtomSpec>>,
}

impl ContextFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: ContextFile = serde_json::from_str(text).map_err(json_error)?;
        if f.format != CONTEXTS_FORMAT {
            return Err(Error::Input(format!("format: expected `{CONTEXTS_FORMAT}`, found `{}`", f.format)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("context file serializes")
    }

    pub fn ray(&self, name: &str) -> Result<ComplexMatrix> {
        let comps = self.vectors.get(name).ok_or_else(|| Error::Input(format!("unknown vector `{name}`")))?;
        if comps.len() != self.dim {
            return Err(Error::Input(format!("vectors.{name}: expected {} components", self.dim)));
        }
        let v = comps.iter().map(Component::value).collect::<Result<Vec<_>>>()?;
        ComplexMatrix::ray_projector(&DVector::from_vec(v)).map_err(|e| Error::Input(format!("vectors.{name}: {e}")))
    }

    /// Builds the family; atoms must be orthogonal and resolve the identity.
    pub fn build(&self, tol: &Tolerances) -> Result<ContextFamily> {
        let mut contexts = Vec::with_capacity(self.contexts.len());
        let mut labels = Vec::with_capacity(self.contexts.len());
        for (ci, ctx) in self.contexts.iter().enumerate() {
            let mut atoms = Vec::with_capacity(ctx.len());
            let mut names = Vec::with_capacity(ctx.len());
            for atom in ctx {
                let rays = atom.names().into_iter().map(|n| self.ray(n)).collect::<Result<Vec<_>>>()?;
                atoms.push(sum_matrices(self.dim, &rays));
                names.push(atom.names().join("+"));
            }
            contexts.push(BooleanContext::new(atoms, tol).map_err(|e| Error::Input(format!("contexts[{ci}]: {e}")))?);
            labels.push(names);
        }
        ContextFamily::with_labels(contexts, labels)
    }
}
