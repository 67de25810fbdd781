//! Referee entanglers J and named two-qubit states.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::num::{c, commutator, r, CMatrix, CVector, Complex, ONE, TOL, ZERO};
use crate::strategy::{classical_gate, ClassicalGate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglerFamily {
    /// cos(β/2)·I + i·sin(β/2)·Y⊗Y; sends |00⟩ to |ψ₊⟩ at β=π/2.
    J1,
    /// Sends |00⟩ to the triplet |T⟩ at β=π/2.
    J2,
    #[serde(alias = "none")]
    Identity,
}

impl FromStr for EntanglerFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "j1" => Ok(Self::J1),
            "j2" => Ok(Self::J2),
            "none" | "identity" => Ok(Self::Identity),
            _ => Err(Error::Invalid {
                what: "entangler",
                reason: format!("`{s}` is not one of j1, j2, none"),
            }),
        }
    }
}

impl fmt::Display for EntanglerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::J1 => "j1",
            Self::J2 => "j2",
            Self::Identity => "none",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglerSpec {
    family: EntanglerFamily,
    beta: f64,
}

impl EntanglerSpec {
    /// β ∈ [0, π/2], maximal entanglement at π/2. Ignored for `Identity`.
    pub fn new(family: EntanglerFamily, beta: f64) -> Result<Self> {
        let beta = if family == EntanglerFamily::Identity {
            0.0
        } else {
            check_range("beta", beta, 0.0, FRAC_PI_2)?
        };
        Ok(Self { family, beta })
    }

    pub fn j1(beta: f64) -> Result<Self> {
        Self::new(EntanglerFamily::J1, beta)
    }

    pub fn family(&self) -> EntanglerFamily {
        self.family
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn matrix(&self) -> CMatrix {
        build_entangler(self)
    }
}

pub fn build_entangler(spec: &EntanglerSpec) -> CMatrix {
    let (s, co) = (spec.beta / 2.0).sin_cos();
    let (cc, ss, is) = (r(co), r(s), c(0.0, s));
    let data = match spec.family {
        EntanglerFamily::J1 => vec![
            cc, ZERO, ZERO, is, //
            ZERO, cc, -is, ZERO, //
            ZERO, -is, cc, ZERO, //
            is, ZERO, ZERO, cc,
        ],
        EntanglerFamily::J2 => vec![
            ZERO, cc, ZERO, -ss, //
            cc, ZERO, -ss, ZERO, //
            ss, ZERO, cc, ZERO, //
            ZERO, ss, ZERO, cc,
        ],
        EntanglerFamily::Identity => return CMatrix::identity(4),
    };
    CMatrix::new(4, 4, data).expect("4x4")
}

pub fn yy() -> CMatrix {
    let y = classical_gate(ClassicalGate::Y);
    y.tensor(&y)
}

/// Unit-norm state over |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    amplitudes: [Complex; 4],
}

impl TwoQubitState {
    pub fn new(amplitudes: [Complex; 4]) -> Result<Self> {
        let n: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n - 1.0).abs() > TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_vector(v: &CVector) -> Result<Self> {
        let a: [Complex; 4] = v.as_slice().try_into().map_err(|_| Error::DimensionMismatch {
            op: "two-qubit state",
            left: (v.dim(), 1),
            right: (4, 1),
        })?;
        Self::new(a)
    }

    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.amplitudes
    }

    pub fn to_vector(&self) -> CVector {
        CVector::new(self.amplitudes.to_vec()).expect("dim 4")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    T,
    S,
}

pub fn bell_state(which: BellState) -> TwoQubitState {
    let h = r(FRAC_1_SQRT_2);
    let ih = c(0.0, FRAC_1_SQRT_2);
    let a = match which {
        BellState::PsiPlus => [h, ZERO, ZERO, ih],
        BellState::PsiMinus => [h, ZERO, ZERO, -ih],
        BellState::T => [ZERO, h, h, ZERO],
        BellState::S => [ZERO, h, -h, ZERO],
    };
    TwoQubitState::new(a).expect("normalized")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartialFamily {
    PsiPlus,
    T,
}

/// ψ₊(γ) = cos(γ/2)|00⟩ + sin(γ/2)|11⟩ and T(γ) = cos(γ/2)|01⟩ + sin(γ/2)|10⟩.
///
/// The real superposition; J₁(β)|00⟩ differs from ψ₊(β) only by the phase i
/// on |11⟩.
pub fn partial_state(family: PartialFamily, gamma: f64) -> Result<TwoQubitState> {
    check_range("gamma", gamma, 0.0, PI)?;
    let (s, co) = (gamma / 2.0).sin_cos();
    let a = match family {
        PartialFamily::PsiPlus => [r(co), ZERO, ZERO, r(s)],
        PartialFamily::T => [ZERO, r(co), r(s), ZERO],
    };
    TwoQubitState::new(a)
}

/// [Y⊗Y, J] = 0 within `tol`, the condition under which classical plays
/// reproduce classical outcomes.
pub fn is_classically_commensurate(j: &CMatrix, tol: f64) -> Result<bool> {
    if j.rows() != 4 || j.cols() != 4 {
        return Err(Error::DimensionMismatch {
            op: "is_classically_commensurate",
            left: (j.rows(), j.cols()),
            right: (4, 4),
        });
    }
    let deviation = j.unitarity_deviation()?;
    if deviation > TOL.max(tol) {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(commutator(&yy(), j)?.max_abs() <= tol)
}

/// Product test: the coefficient grid [[a,b],[c,d]] has rank one iff ad − bc = 0.
pub fn is_product_state(s: &TwoQubitState, tol: f64) -> bool {
    let [a, b, c, d] = s.amplitudes;
    (a * d - b * c).norm() <= tol
}

/// J|00⟩, the state the players act on.
pub fn entangled_vacuum(spec: &EntanglerSpec) -> TwoQubitState {
    let v = spec.matrix().apply(&CVector::basis(4, 0)).expect("4x4");
    TwoQubitState::from_vector(&v).expect("unitary keeps norm")
}

impl Default for TwoQubitState {
    fn default() -> Self {
        Self {
            amplitudes: [ONE, ZERO, ZERO, ZERO],
        }
    }
}
