//! Dense complex matrices and the numeric tolerances used throughout the crate.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numeric cut-offs. Every comparison against an exact identity of spectral
/// theory goes through one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity check, `|M - M^†|`.
    pub herm: f64,
    /// Idempotence, orthogonality and completeness of projectors.
    pub proj: f64,
    /// Reconstruction `Σ λ_i P_i = M`.
    pub rec: f64,
    /// Smallest admissible eigenvalue of a density matrix is `-psd`.
    pub psd: f64,
    /// Unit trace of a density matrix.
    pub trace: f64,
    /// Raw eigenvalues closer than this are merged into one.
    pub group: f64,
    /// "Probability equals one" means `p >= 1 - one`.
    pub one: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            proj: 1e-9,
            rec: 1e-9,
            psd: 1e-9,
            trace: 1e-9,
            group: 1e-8,
            one: 1e-9,
        }
    }
}

impl Tolerances {
    /// Overrides a single tolerance by key (`herm`, `proj`, `rec`, `psd`,
    /// `tr`, `group`, `one`).
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Input(format!("tolerance {key} must be positive, got {value}")));
        }
        let slot = match key {
            "herm" => &mut self.herm,
            "proj" => &mut self.proj,
            "rec" => &mut self.rec,
            "psd" => &mut self.psd,
            "tr" | "trace" => &mut self.trace,
            "group" => &mut self.group,
            "one" => &mut self.one,
            other => return Err(Error::Input(format!("unknown tolerance key `{other}`"))),
        };
        *slot = value;
        Ok(())
    }
}

/// A square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidSpectralData("zero-dimensional matrix".into()));
        }
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let z = m[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(ComplexMatrix(m))
    }

    /// Builds a matrix from rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Builds a matrix from rows of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        ComplexMatrix(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Rank-one projector onto the span of `v` (which need not be normalised).
    pub fn ray_projector(v: &DVector<Complex64>) -> Result<Self> {
        let norm2 = v.norm_squared();
        if norm2 <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        Self::from_dmatrix((v * v.adjoint()).map(|z| z / norm2))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Hermitian and idempotent within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (&self.0 * &self.0 - &self.0).norm() <= tol
    }

    /// Projector order `P <= Q`, tested as `QP = P`.
    pub fn projector_le(&self, other: &Self, tol: f64) -> bool {
        (&other.0 * &self.0 - &self.0).norm() <= tol
    }

    /// `(M + M^†)/2`.
    pub fn symmetrized(&self) -> Self {
        ComplexMatrix((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.0 * v
    }

    /// Rank of a projector, read off its trace.
    pub fn projector_rank(&self) -> usize {
        self.trace().re.round().max(0.0) as usize
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.0.as_slice())
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Sums a list of equally sized matrices; an empty list gives the zero matrix
/// of dimension `dim`.
pub fn sum_matrices<'a, I>(dim: usize, items: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut acc = DMatrix::zeros(dim, dim);
    for m in items {
        acc += &m.0;
    }
    ComplexMatrix(acc)
}

/// Projection-lattice fingerprint: Hermitian part rounded to a 1e-6 grid.
/// Equal projectors from different contexts map to the same key.
pub fn fingerprint(m: &ComplexMatrix) -> Vec<i64> {
    let h = m.symmetrized();
    let n = h.dim();
    let mut out = Vec::with_capacity(2 * n * n + 1);
    out.push(n as i64);
    for r in 0..n {
        for c in 0..n {
            let z = h.get(r, c);
            out.push((z.re * 1e6).round() as i64);
            out.push((z.im * 1e6).round() as i64);
        }
    }
    out
}
