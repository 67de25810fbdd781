//! Small dense complex linear algebra. Every matrix in this crate is at most
//! 9x9 (two qutrits), so everything is row-major `Vec` storage and naive loops.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Default absolute tolerance for structural predicates.
pub const TOL: f64 = 1e-12;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// e^{i x}
#[inline]
pub fn cis(x: f64) -> Complex {
    Complex::new(x.cos(), x.sin())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVector {
    data: Vec<Complex>,
}

impl CVector {
    pub fn new(data: Vec<Complex>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Invalid {
                what: "vector",
                reason: "dimension must be positive".into(),
            });
        }
        Ok(Self { data })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| r(x)).collect())
    }

    /// Unit vector e_k in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut data = vec![ZERO; dim];
        data[k] = ONE;
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// ⟨self|other⟩, conjugate-linear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op: "inner",
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op: "max_abs_diff",
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for CVector {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.data[i]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Invalid {
                what: "matrix",
                reason: format!("{rows}x{cols} with {} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from a row-major slice of real entries.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| r(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(entries: &[Complex]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            })
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: (self.rows, self.cols),
                right: (v.dim(), 1),
            });
        }
        let data = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.data[i * self.cols + j] * v[j]).sum())
            .collect();
        CVector::new(data)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Result<Complex> {
        let n = self.require_square("trace")?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    /// Kronecker product: block (i,j) of the result is self[i,j]·other.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.require_same_shape(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry deviation of M·M† and M†·M from the identity.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        let n = self.require_square("is_unitary")?;
        let id = Self::identity(n);
        let d = self.dagger();
        let left = self.matmul(&d)?.max_abs_diff(&id)?;
        let right = d.matmul(self)?.max_abs_diff(&id)?;
        Ok(left.max(right))
    }

    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        Ok(self.unitarity_deviation()? <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        self.require_square("is_hermitian")?;
        Ok(self.max_abs_diff(&self.dagger())? <= tol)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Result<Complex> {
        let n = self.require_square("det")?;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col] == ZERO {
                return Ok(ZERO);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= f * v;
                }
            }
        }
        Ok(det)
    }

    /// Numerical rank via row reduction with partial pivoting. Pivots below
    /// `tol` times the largest entry count as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let pivot = (rank..rows)
                .max_by(|&x, &y| a[x * cols + col].norm().total_cmp(&a[y * cols + col].norm()))
                .expect("nonempty pivot range");
            if a[pivot * cols + col].norm() <= tol * scale {
                continue;
            }
            for j in 0..cols {
                a.swap(pivot * cols + j, rank * cols + j);
            }
            let p = a[rank * cols + col];
            for row in rank + 1..rows {
                let f = a[row * cols + col] / p;
                if f == ZERO {
                    continue;
                }
                for j in col..cols {
                    let v = a[rank * cols + j];
                    a[row * cols + j] -= f * v;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `try_*`/`matmul` methods
// when shapes come from outside.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(r(-1.0))
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.tensor(b)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.dagger()
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> Result<bool> {
    m.is_unitary(tol)
}

/// [A,B] = AB − BA
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.require_square("commutator")?;
    b.require_square("commutator")?;
    a.require_same_shape(b, "commutator")?;
    (a * b).try_sub(&(b * a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpKind {
    /// A² = I
    Involution,
    /// A³ = A
    Cubic,
    Diagonal,
}

/// e^{xA} for the three matrix shapes whose power series collapse.
pub fn expm_structured(a: &CMatrix, x: Complex, kind: ExpKind) -> Result<CMatrix> {
    let n = a.require_square("expm_structured")?;
    let id = CMatrix::identity(n);
    match kind {
        ExpKind::Involution => {
            let deviation = (a * a).max_abs_diff(&id)?;
            if deviation > TOL {
                return Err(Error::Structure {
                    kind: "A^2 = I",
                    deviation,
                });
            }
            Ok(&id.scale(x.cosh()) + &a.scale(x.sinh()))
        }
        ExpKind::Cubic => {
            let a2 = a * a;
            let deviation = (&a2 * a).max_abs_diff(a)?;
            if deviation > TOL {
                return Err(Error::Structure {
                    kind: "A^3 = A",
                    deviation,
                });
            }
            Ok(&(&id + &a.scale(x.sinh())) + &a2.scale(x.cosh() - ONE))
        }
        ExpKind::Diagonal => {
            let deviation = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a.get(i, j).norm())
                .fold(0.0, f64::max);
            if deviation > TOL {
                return Err(Error::Structure {
                    kind: "diagonal",
                    deviation,
                });
            }
            Ok(CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    (x * a.get(i, i)).exp()
                } else {
                    ZERO
                }
            }))
        }
    }
}

/// Pauli matrices σ₁, σ₂, σ₃ (k = 1, 2, 3).
pub fn pauli(k: usize) -> Result<CMatrix> {
    let m = match k {
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => {
            return Err(Error::Invalid {
                what: "pauli index",
                reason: format!("{k} not in 1..=3"),
            })
        }
    };
    CMatrix::new(2, 2, m.to_vec())
}

/// Gell-Mann matrices λ₁..λ₈.
pub fn gell_mann(k: usize) -> Result<CMatrix> {
    let s3 = 1.0 / 3f64.sqrt();
    let mut m = CMatrix::zeros(3, 3);
    match k {
        1 => {
            m[(0, 1)] = ONE;
            m[(1, 0)] = ONE;
        }
        2 => {
            m[(0, 1)] = -I;
            m[(1, 0)] = I;
        }
        3 => {
            m[(0, 0)] = ONE;
            m[(1, 1)] = -ONE;
        }
        4 => {
            m[(0, 2)] = ONE;
            m[(2, 0)] = ONE;
        }
        5 => {
            m[(0, 2)] = -I;
            m[(2, 0)] = I;
        }
        6 => {
            m[(1, 2)] = ONE;
            m[(2, 1)] = ONE;
        }
        7 => {
            m[(1, 2)] = -I;
            m[(2, 1)] = I;
        }
        8 => {
            m[(0, 0)] = r(s3);
            m[(1, 1)] = r(s3);
            m[(2, 2)] = r(-2.0 * s3);
        }
        _ => {
            return Err(Error::Invalid {
                what: "gell-mann index",
                reason: format!("{k} not in 1..=8"),
            })
        }
    }
    Ok(m)
}

/// Truncated power series Σ_{n<terms} (xA)^n / n!. Reference path for tests.
pub fn exp_taylor(a: &CMatrix, x: Complex, terms: usize) -> Result<CMatrix> {
    let n = a.require_square("exp_taylor")?;
    let xa = a.scale(x);
    let mut term = CMatrix::identity(n);
    let mut sum = term.clone();
    for k in 1..terms {
        term = (&term * &xa).scale(r(1.0 / k as f64));
        sum = &sum + &term;
    }
    Ok(sum)
}
