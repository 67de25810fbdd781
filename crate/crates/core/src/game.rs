//! Classical 2x2 tables, the quantization protocol |Ψ⟩ = J†(U₁⊗U₂)J|00⟩,
//! payoffs and the closed-form amplitude formulas.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{check_range, Error, Result};
use crate::num::{c, CMatrix, CVector, Complex, TOL};
use crate::strategy::StrategyAngles;

/// Payoff bimatrix. `u1[r][c]` is player 1's payoff when player 1 plays gate
/// r (0 = I, 1 = Y) and player 2 plays gate c.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameTable {
    pub name: String,
    pub u1: [[f64; 2]; 2],
    pub u2: [[f64; 2]; 2],
}

impl GameTable {
    pub fn new(name: impl Into<String>, u1: [[f64; 2]; 2], u2: [[f64; 2]; 2]) -> Result<Self> {
        let t = Self {
            name: name.into(),
            u1,
            u2,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for (label, u) in [("u1", &self.u1), ("u2", &self.u2)] {
            for (i, row) in u.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if !x.is_finite() {
                        return Err(Error::Field {
                            field: format!("{label}[{i}][{j}]"),
                            reason: "entry must be finite".into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The prisoner's dilemma in negative years: (C,C) = (−4,−4),
    /// (D,D) = (−5,−5), sucker −6 against temptation −2.
    pub fn prisoners_dilemma() -> Self {
        Self {
            name: "prisoners_dilemma".into(),
            u1: [[-4.0, -6.0], [-2.0, -5.0]],
            u2: [[-4.0, -2.0], [-6.0, -5.0]],
        }
    }

    /// Asymmetric variant where player 1 walks free on mutual confession.
    pub fn da_brother() -> Self {
        Self {
            name: "da_brother".into(),
            u1: [[0.0, -10.0], [-1.0, -5.0]],
            u2: [[-2.0, -1.0], [-10.0, -5.0]],
        }
    }

    /// Second opponent type of the Bayesian version: player 2 is penalized
    /// six extra years for confessing.
    pub fn da_brother_type_ii() -> Self {
        Self {
            name: "da_brother_type_ii".into(),
            u1: [[0.0, -10.0], [-1.0, -5.0]],
            u2: [[-2.0, -7.0], [-10.0, -11.0]],
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "pd" | "prisoners_dilemma" => Some(Self::prisoners_dilemma()),
            "da" | "da_brother" => Some(Self::da_brother()),
            "da_brother_type_ii" => Some(Self::da_brother_type_ii()),
            _ => None,
        }
    }

    /// Dot product of the outcome probabilities with each table.
    #[inline]
    pub fn payoffs_from_sq(&self, sq: &[f64; 4]) -> PayoffPair {
        PayoffPair {
            p1: sq[0] * self.u1[0][0] + sq[1] * self.u1[0][1] + sq[2] * self.u1[1][0] + sq[3] * self.u1[1][1],
            p2: sq[0] * self.u2[0][0] + sq[1] * self.u2[0][1] + sq[2] * self.u2[1][0] + sq[3] * self.u2[1][1],
        }
    }

    pub fn outcome_payoff(&self, player: usize, outcome: Outcome) -> f64 {
        let (r, c) = outcome.gates();
        if player == 1 {
            self.u1[r][c]
        } else {
            self.u2[r][c]
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        Self::from_value(&v)
    }

    pub(crate) fn from_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Field {
            field: "<root>".into(),
            reason: "expected a JSON object".into(),
        })?;
        let name = match obj.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                return Err(Error::Field {
                    field: "name".into(),
                    reason: "expected a string".into(),
                })
            }
            None => {
                return Err(Error::Field {
                    field: "name".into(),
                    reason: "missing".into(),
                })
            }
        };
        let u1 = parse_grid(obj.get("u1"), "u1")?;
        let u2 = parse_grid(obj.get("u2"), "u2")?;
        Self::new(name, u1, u2)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn parse_grid(v: Option<&Value>, field: &str) -> Result<[[f64; 2]; 2]> {
    let err = |f: String, reason: &str| Error::Field {
        field: f,
        reason: reason.into(),
    };
    let rows = v
        .ok_or_else(|| err(field.into(), "missing"))?
        .as_array()
        .ok_or_else(|| err(field.into(), "expected a 2x2 array"))?;
    if rows.len() != 2 {
        return Err(err(field.into(), "expected exactly 2 rows"));
    }
    let mut out = [[0.0; 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .ok_or_else(|| err(format!("{field}[{i}]"), "expected an array"))?;
        if cols.len() != 2 {
            return Err(err(format!("{field}[{i}]"), "expected exactly 2 entries"));
        }
        for (j, x) in cols.iter().enumerate() {
            out[i][j] = x
                .as_f64()
                .ok_or_else(|| err(format!("{field}[{i}][{j}]"), "expected a number"))?;
        }
    }
    Ok(out)
}

pub fn load_game(path: impl AsRef<Path>) -> Result<GameTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    GameTable::from_json_str(&text)
}

pub fn save_game(game: &GameTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, game.to_json_string() + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Measurement outcome |kℓ⟩: k is player 1's bit, ℓ player 2's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// |00⟩, amplitude a
    CC,
    /// |01⟩, amplitude b
    CD,
    /// |10⟩, amplitude c
    DC,
    /// |11⟩, amplitude d
    DD,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::CC, Outcome::CD, Outcome::DC, Outcome::DD];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn gates(self) -> (usize, usize) {
        let k = self.index();
        (k >> 1, k & 1)
    }
}

/// Final state (a, b, c, d) over |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeVector(pub [Complex; 4]);

impl AmplitudeVector {
    pub fn new(amps: [Complex; 4]) -> Result<Self> {
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self(amps))
    }

    pub fn sq(&self) -> [f64; 4] {
        self.0.map(|z| z.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sq().iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffPair {
    pub p1: f64,
    pub p2: f64,
}

impl PayoffPair {
    pub fn sum(&self) -> f64 {
        self.p1 + self.p2
    }
}

impl fmt::Display for PayoffPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p1, self.p2)
    }
}

pub fn payoffs(amps: &AmplitudeVector, game: &GameTable) -> PayoffPair {
    game.payoffs_from_sq(&amps.sq())
}

/// J†(U(g1)⊗U(g2))J|00⟩.
pub fn final_state(j: &CMatrix, g1: &StrategyAngles, g2: &StrategyAngles) -> Result<AmplitudeVector> {
    if j.rows() != 4 || j.cols() != 4 {
        return Err(Error::DimensionMismatch {
            op: "final_state",
            left: (j.rows(), j.cols()),
            right: (4, 4),
        });
    }
    let deviation = j.unitarity_deviation()?;
    if deviation > TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(final_state_unchecked(j, g1, g2))
}

pub(crate) fn final_state_unchecked(j: &CMatrix, g1: &StrategyAngles, g2: &StrategyAngles) -> AmplitudeVector {
    let u = g1.matrix().tensor(&g2.matrix());
    let psi = j.apply(&CVector::basis(4, 0)).expect("4x4");
    let psi = u.apply(&psi).expect("4x4");
    let psi = j.dagger().apply(&psi).expect("4x4");
    AmplitudeVector(psi.as_slice().try_into().expect("dim 4"))
}

/// Maximally entangled vacua with a known closed form for |a|²..|d|².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// J|00⟩ = |ψ₊⟩, i.e. J₁(π/2).
    PsiPlus,
    /// J|00⟩ = |T⟩, i.e. J₂(π/2).
    Triplet,
}

impl FromStr for ClosedForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi_plus" | "j1" => Ok(Self::PsiPlus),
            "triplet" | "j2" => Ok(Self::Triplet),
            _ => Err(Error::Invalid {
                what: "closed form",
                reason: format!("`{s}` is not psi_plus or triplet"),
            }),
        }
    }
}

struct Halves {
    c1: f64,
    s1: f64,
    c2: f64,
    s2: f64,
}

fn halves(g1: &StrategyAngles, g2: &StrategyAngles) -> Halves {
    let (s1, c1) = (g1.theta() / 2.0).sin_cos();
    let (s2, c2) = (g2.theta() / 2.0).sin_cos();
    Halves { c1, s1, c2, s2 }
}

/// (|a|², |b|², |c|², |d|²) at maximal entanglement, straight trig formulas.
pub fn closed_form_sq_amplitudes(form: ClosedForm, g1: &StrategyAngles, g2: &StrategyAngles) -> [f64; 4] {
    let Halves { c1, s1, c2, s2 } = halves(g1, g2);
    let (p1, a1, p2, a2) = (g1.phi(), g1.alpha(), g2.phi(), g2.alpha());
    let sq = |x: f64| x * x;
    match form {
        ClosedForm::PsiPlus => [
            sq(c1 * c2 * (p1 + p2).cos() - s1 * s2 * (a1 + a2).sin()),
            sq(c1 * s2 * (p1 - a2).cos() + s1 * c2 * (a1 - p2).sin()),
            sq(s1 * c2 * (a1 - p2).cos() - c1 * s2 * (p1 - a2).sin()),
            sq(c1 * c2 * (p1 + p2).sin() + s1 * s2 * (a1 + a2).cos()),
        ],
        ClosedForm::Triplet => [
            sq(c1 * c2 * (p1 - p2).cos() - s1 * s2 * (a1 - a2).cos()),
            sq(c1 * s2 * (p1 + a2).sin() + s1 * c2 * (a1 + p2).sin()),
            sq(s1 * s2 * (a1 - a2).sin() - c1 * c2 * (p1 - p2).sin()),
            sq(s1 * c2 * (a1 + p2).cos() + c1 * s2 * (p1 + a2).cos()),
        ],
    }
}

/// Complex amplitudes under J₁(β). Only the moduli agree with the matrix
/// route; the individual phases do not.
pub fn closed_form_amplitudes_partial(beta: f64, g1: &StrategyAngles, g2: &StrategyAngles) -> Result<AmplitudeVector> {
    check_range("beta", beta, 0.0, std::f64::consts::FRAC_PI_2)?;
    let Halves { c1, s1, c2, s2 } = halves(g1, g2);
    let (p1, a1, p2, a2) = (g1.phi(), g1.alpha(), g2.phi(), g2.alpha());
    let (sb, cb) = beta.sin_cos();
    let a = c(
        c1 * c2 * (p1 + p2).cos() - s1 * s2 * (a1 + a2).sin() * sb,
        c1 * c2 * (p1 + p2).sin() * cb,
    );
    let b = c(
        c1 * s2 * (p1 - a2).cos() + s1 * c2 * (a1 - p2).sin() * sb,
        c1 * s2 * (p1 - a2).sin() * cb,
    );
    let cc = c(
        s1 * c2 * (a1 - p2).cos() - c1 * s2 * (p1 - a2).sin() * sb,
        -s1 * c2 * (a1 - p2).sin() * cb,
    );
    let d = c(
        s1 * s2 * (a1 + a2).cos() + c1 * c2 * (p1 + p2).sin() * sb,
        -s1 * s2 * (a1 + a2).sin() * cb,
    );
    AmplitudeVector::new([a, b, cc, d])
}

/// Finite-support probability distribution over SU(2) strategies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy {
    support: Vec<(StrategyAngles, f64)>,
}

impl MixedStrategy {
    pub fn new(support: Vec<(StrategyAngles, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Invalid {
                what: "mixed strategy",
                reason: "empty support".into(),
            });
        }
        for (_, p) in &support {
            check_range("probability", *p, 0.0, 1.0)?;
        }
        let total: f64 = support.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid {
                what: "mixed strategy",
                reason: format!("probabilities sum to {total}"),
            });
        }
        Ok(Self { support })
    }

    pub fn pure(g: StrategyAngles) -> Self {
        Self {
            support: vec![(g, 1.0)],
        }
    }

    pub fn uniform(strategies: &[StrategyAngles]) -> Result<Self> {
        let p = 1.0 / strategies.len() as f64;
        Self::new(strategies.iter().map(|&g| (g, p)).collect())
    }

    pub fn support(&self) -> &[(StrategyAngles, f64)] {
        &self.support
    }
}

/// Σ p(g1) q(g2) P(g1, g2) over independent draws.
pub fn mixed_payoff(m1: &MixedStrategy, m2: &MixedStrategy, j: &CMatrix, game: &GameTable) -> Result<PayoffPair> {
    let mut acc = PayoffPair { p1: 0.0, p2: 0.0 };
    for (g1, p) in m1.support() {
        for (g2, q) in m2.support() {
            let pay = payoffs(&final_state(j, g1, g2)?, game);
            acc.p1 += p * q * pay.p1;
            acc.p2 += p * q * pay.p2;
        }
    }
    Ok(acc)
}
