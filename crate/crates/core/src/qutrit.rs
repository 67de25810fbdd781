//! Three-strategy games: permutation strategies, the two-qutrit entangler
//! J(β) = exp(iβZ) and the commutant test behind the no-commensurability
//! result. Trit labels are 0-based and |ij⟩ sits at index 3i + j.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{cis, r, CMatrix, CVector, Complex, ONE, TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Permutation {
    I3,
    S12,
    S13,
    S23,
    /// S12·S13: (0 1 2) → (1 2 0)
    C123,
    /// S13·S12: (0 1 2) → (2 0 1)
    C132,
}

impl Permutation {
    pub const ALL: [Permutation; 6] = [
        Permutation::I3,
        Permutation::S12,
        Permutation::S13,
        Permutation::S23,
        Permutation::C123,
        Permutation::C132,
    ];

    pub fn integer_matrix(self) -> [[i64; 3]; 3] {
        match self {
            Self::I3 => [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            Self::S12 => [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
            Self::S13 => [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
            Self::S23 => [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
            Self::C123 => [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
            Self::C132 => [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        }
    }

    pub fn from_integer_matrix(m: &[[i64; 3]; 3]) -> Option<Self> {
        Self::ALL.into_iter().find(|p| &p.integer_matrix() == m)
    }

    /// Product self·other, which is again a permutation.
    pub fn compose(self, other: Self) -> Self {
        let p = int_mul(&self.integer_matrix(), &other.integer_matrix());
        Self::from_integer_matrix(&p).expect("S3 is closed")
    }
}

pub fn perm_matrix(which: Permutation) -> CMatrix {
    int_to_complex(&which.integer_matrix())
}

fn int_mul<const N: usize>(a: &[[i64; N]; N], b: &[[i64; N]; N]) -> [[i64; N]; N] {
    let mut out = [[0; N]; N];
    for i in 0..N {
        for k in 0..N {
            for j in 0..N {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn int_kron(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 9]; 9] {
    let mut out = [[0; 9]; 9];
    for i in 0..9 {
        for j in 0..9 {
            out[i][j] = a[i / 3][j / 3] * b[i % 3][j % 3];
        }
    }
    out
}

fn int_to_complex<const N: usize>(m: &[[i64; N]; N]) -> CMatrix {
    CMatrix::from_fn(N, N, |i, j| r(m[i][j] as f64))
}

/// X = C132 ⊗ C132 takes |00⟩ to |11⟩ and its transpose takes |00⟩ to |22⟩.
pub fn x_integer() -> [[i64; 9]; 9] {
    let c = Permutation::C132.integer_matrix();
    int_kron(&c, &c)
}

/// Z = X + Xᵀ in exact integers.
pub fn z_integer() -> [[i64; 9]; 9] {
    let x = x_integer();
    let mut z = [[0; 9]; 9];
    for i in 0..9 {
        for j in 0..9 {
            z[i][j] = x[i][j] + x[j][i];
        }
    }
    z
}

/// Z² − Z − 2I evaluated in exact integers; all zero for a valid Z.
pub fn z_quadratic_residual() -> [[i64; 9]; 9] {
    let z = z_integer();
    let z2 = int_mul(&z, &z);
    let mut out = [[0; 9]; 9];
    for i in 0..9 {
        for j in 0..9 {
            out[i][j] = z2[i][j] - z[i][j] - if i == j { 2 } else { 0 };
        }
    }
    out
}

pub fn build_z() -> CMatrix {
    int_to_complex(&z_integer())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QutritEntanglerCoeffs {
    pub a: Complex,
    pub b: Complex,
}

/// exp(iβZ) = a(β)·I + b(β)·Z because Z² = Z + 2I.
pub fn qutrit_entangler_coeffs(beta: f64) -> QutritEntanglerCoeffs {
    let pre = cis(-beta) / 3.0;
    let e3 = cis(3.0 * beta);
    QutritEntanglerCoeffs {
        a: pre * (e3 + 2.0),
        b: pre * (e3 - 1.0),
    }
}

pub fn qutrit_entangler(beta: f64) -> CMatrix {
    let QutritEntanglerCoeffs { a, b } = qutrit_entangler_coeffs(beta);
    &CMatrix::identity(9).scale(a) + &build_z().scale(b)
}

/// J(β)|00⟩ = a|00⟩ + b(|11⟩ + |22⟩).
pub fn entangled_vacuum(beta: f64) -> TwoQutritState {
    let v = qutrit_entangler(beta).apply(&CVector::basis(9, 0)).expect("9x9");
    TwoQutritState::new(v).expect("unitary keeps norm")
}

/// |e^{3iβ}+2|² − |e^{3iβ}−1|² = 3 + 6cos(3β).
fn max_ent_residual(beta: f64) -> f64 {
    3.0 + 6.0 * (3.0 * beta).cos()
}

/// Smallest β in (0, π/2] where all three amplitudes of J(β)|00⟩ have equal
/// modulus.
pub fn max_entangling_beta() -> f64 {
    const SCAN: usize = 1024;
    let mut lo = 0.0;
    let mut hi = FRAC_PI_2;
    for k in 1..=SCAN {
        let b = FRAC_PI_2 * k as f64 / SCAN as f64;
        if max_ent_residual(b) <= 0.0 {
            hi = b;
            lo = FRAC_PI_2 * (k - 1) as f64 / SCAN as f64;
            break;
        }
    }
    while hi - lo > f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if max_ent_residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn max_entangling_residual(beta: f64) -> f64 {
    let e3 = cis(3.0 * beta);
    (e3 + 2.0).norm() - (e3 - 1.0).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TritState {
    amplitudes: [Complex; 3],
}

impl TritState {
    pub fn new(amplitudes: [Complex; 3]) -> Result<Self> {
        let n: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n - 1.0).abs() > TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(k: usize) -> Self {
        let mut a = [Complex::default(); 3];
        a[k] = ONE;
        Self { amplitudes: a }
    }

    pub fn amplitudes(&self) -> &[Complex; 3] {
        &self.amplitudes
    }
}

/// Coefficients v_ij over |ij⟩, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQutritState {
    amplitudes: CVector,
}

impl TwoQutritState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.dim() != 9 {
            return Err(Error::DimensionMismatch {
                op: "two-qutrit state",
                left: (amplitudes.dim(), 1),
                right: (9, 1),
            });
        }
        let n = amplitudes.norm_sqr();
        if (n - 1.0).abs() > TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex {
        self.amplitudes[3 * i + j]
    }
}

pub fn qutrit_tensor(q1: &TritState, q2: &TritState) -> TwoQutritState {
    let a = CVector::new(q1.amplitudes.to_vec()).expect("dim 3");
    let b = CVector::new(q2.amplitudes.to_vec()).expect("dim 3");
    TwoQutritState::new(a.tensor(&b)).expect("product of unit vectors")
}

/// Rank-one test: every 2x2 minor of the coefficient grid vanishes.
pub fn is_qutrit_product(s: &TwoQutritState, tol: f64) -> bool {
    for i in 0..3 {
        for k in i + 1..3 {
            for j in 0..3 {
                for l in j + 1..3 {
                    let minor = s.coeff(i, j) * s.coeff(k, l) - s.coeff(i, l) * s.coeff(k, j);
                    if minor.norm() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Coefficient grid C with C·C† = I/3, i.e. both reduced states maximally mixed.
pub fn is_qutrit_max_entangled(s: &TwoQutritState, tol: f64) -> bool {
    for i in 0..3 {
        for k in 0..3 {
            let g: Complex = (0..3).map(|j| s.coeff(i, j) * s.coeff(k, j).conj()).sum();
            let want = if i == k { 1.0 / 3.0 } else { 0.0 };
            if (g - want).norm() > tol {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutantReport {
    /// Only multiples of the identity commute with every generator.
    pub scalar_only: bool,
    /// Dimension of {A : [A, G] = 0 for all G}.
    pub dimension: usize,
}

/// Solves [A, G] = 0 for all generators as a linear system in the d² entries
/// of A. With row-major vec, vec(AG) = (I⊗Gᵀ)vec(A) and vec(GA) = (G⊗I)vec(A).
pub fn commutant_is_scalar(generators: &[CMatrix], dim: usize) -> Result<CommutantReport> {
    let id = CMatrix::identity(dim);
    let d2 = dim * dim;
    let mut rows: Vec<Complex> = Vec::with_capacity(generators.len() * d2 * d2);
    for g in generators {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::DimensionMismatch {
                op: "commutant",
                left: (g.rows(), g.cols()),
                right: (dim, dim),
            });
        }
        let block = &id.tensor(&g.transpose()) - &g.tensor(&id);
        rows.extend_from_slice(block.as_slice());
    }
    let rank = if rows.is_empty() {
        0
    } else {
        CMatrix::new(generators.len() * d2, d2, rows)?.rank(1e-10)
    };
    let dimension = d2 - rank;
    Ok(CommutantReport {
        scalar_only: dimension == 1,
        dimension,
    })
}

/// Every product of two of the six permutation matrices is again one of them.
pub fn s3_is_closed() -> bool {
    Permutation::ALL.iter().all(|&a| {
        Permutation::ALL.iter().all(|&b| {
            let p = int_mul(&a.integer_matrix(), &b.integer_matrix());
            Permutation::from_integer_matrix(&p).is_some()
        })
    })
}

/// Normalization identity (|e^{3iβ}+2|² + 2|e^{3iβ}−1|²)/9 = 1.
pub fn vacuum_norm_identity(beta: f64) -> f64 {
    let e3 = cis(3.0 * beta);
    ((e3 + 2.0).norm_sqr() + 2.0 * (e3 - 1.0).norm_sqr()) / 9.0
}

pub fn random_trit<R: rand::Rng + ?Sized>(rng: &mut R) -> TritState {
    let mut a = [Complex::default(); 3];
    for z in &mut a {
        *z = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    TritState::new(a.map(|z| z / n)).expect("normalized")
}

pub const TWO_PI_OVER_NINE: f64 = TAU / 9.0;
