//! Two-type Bayesian version of the DA-brother game at maximal entanglement.
//!
//! Player 2 is type I with probability μ and type II otherwise; player 1 does
//! not know which. Everything here is evaluated with the |ψ₊⟩ closed form.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::equilibrium::{analytic_response, MeshSpec, Responder, StrategyIndex};
use crate::error::{check_range, Error, Result};
use crate::game::{closed_form_sq_amplitudes, ClosedForm, GameTable, Outcome};
use crate::strategy::StrategyAngles;

/// Margin separating "origin is the grid maximum" from "something beats it".
pub const BAYES_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesSpec {
    mu: f64,
    #[serde(rename = "game_2I")]
    game_2i: GameTable,
    #[serde(rename = "game_2II")]
    game_2ii: GameTable,
}

impl BayesSpec {
    pub fn new(mu: f64, game_2i: GameTable, game_2ii: GameTable) -> Result<Self> {
        check_range("mu", mu, 0.0, 1.0)?;
        Ok(Self { mu, game_2i, game_2ii })
    }

    pub fn da_brother(mu: f64) -> Result<Self> {
        Self::new(mu, GameTable::da_brother(), GameTable::da_brother_type_ii())
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn game_2i(&self) -> &GameTable {
        &self.game_2i
    }

    pub fn game_2ii(&self) -> &GameTable {
        &self.game_2ii
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(mu, self.game_2i.clone(), self.game_2ii.clone())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        let obj = v.as_object().ok_or_else(|| Error::Field {
            field: "<root>".into(),
            reason: "expected a JSON object".into(),
        })?;
        let mu = obj.get("mu").and_then(Value::as_f64).ok_or_else(|| Error::Field {
            field: "mu".into(),
            reason: "expected a number".into(),
        })?;
        let table = |key: &str| -> Result<GameTable> {
            let v = obj.get(key).ok_or_else(|| Error::Field {
                field: key.into(),
                reason: "missing".into(),
            })?;
            GameTable::from_value(v).map_err(|e| match e {
                Error::Field { field, reason } => Error::Field {
                    field: format!("{key}.{field}"),
                    reason,
                },
                other => other,
            })
        };
        Self::new(mu, table("game_2I")?, table("game_2II")?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesProfile {
    pub g1: StrategyAngles,
    pub g2i: StrategyAngles,
    pub g2ii: StrategyAngles,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesPayoffs {
    pub p1: f64,
    pub p2i: f64,
    pub p2ii: f64,
}

/// Player 1 is paid by the μ-weighted mixture of the two matchups; each type
/// of player 2 only by its own matchup.
pub fn bayes_payoffs(spec: &BayesSpec, prof: &BayesProfile) -> BayesPayoffs {
    let form = ClosedForm::PsiPlus;
    let sq_i = closed_form_sq_amplitudes(form, &prof.g1, &prof.g2i);
    let sq_ii = closed_form_sq_amplitudes(form, &prof.g1, &prof.g2ii);
    let pi = spec.game_2i.payoffs_from_sq(&sq_i);
    let pii = spec.game_2ii.payoffs_from_sq(&sq_ii);
    BayesPayoffs {
        p1: spec.mu * pi.p1 + (1.0 - spec.mu) * pii.p1,
        p2i: pi.p2,
        p2ii: pii.p2,
    }
}

/// Type I wants (C,D): |b|² = 1.
pub fn bayes_best_response_2i(g1: &StrategyAngles) -> StrategyAngles {
    analytic_response(Responder::Two, ClosedForm::PsiPlus, Outcome::CD, g1)
}

/// Type II wants (C,C): |a|² = 1.
pub fn bayes_best_response_2ii(g1: &StrategyAngles) -> StrategyAngles {
    analytic_response(Responder::Two, ClosedForm::PsiPlus, Outcome::CC, g1)
}

/// The type strategies held fixed while player 1 deviates: the replies to
/// player 1 staying at the identity.
pub fn equilibrium_types() -> (StrategyAngles, StrategyAngles) {
    let o = StrategyAngles::identity();
    (bayes_best_response_2i(&o), bayes_best_response_2ii(&o))
}

/// Player 1's payoff for the default tables, against both types playing their
/// replies to the identity, as an explicit function of (φ₁, α₁, θ₁).
pub fn p1_given_best_responses(mu: f64, g1: &StrategyAngles) -> Result<f64> {
    check_range("mu", mu, 0.0, 1.0)?;
    let (s, c) = (g1.theta() / 2.0).sin_cos();
    let (sp, cp) = g1.phi().sin_cos();
    let (sa, ca) = g1.alpha().sin_cos();
    let sq = |x: f64| x * x;
    let nu = 1.0 - mu;
    Ok(-10.0 * (mu * sq(c * cp) + nu * sq(s * sa))
        - (mu * sq(c * sp) + nu * sq(s * ca))
        - 5.0 * (mu * sq(s * ca) + nu * sq(c * sp)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BayesVerdict {
    NeAtOrigin,
    NoNe,
    /// The grid produced a non-finite payoff.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesCheck {
    pub mu: f64,
    pub verdict: BayesVerdict,
    pub origin_p1: f64,
    pub max_p1: f64,
    pub argmax_index: StrategyIndex,
    pub argmax_angles: StrategyAngles,
    /// max_p1 − origin_p1; zero when the origin is the maximum.
    pub margin: f64,
}

/// Maximizes player 1's payoff over the mesh with the types fixed. Ties go to
/// the lowest index, and the identity is index 1.
pub fn bayes_ne_check(mu: f64, mesh: &MeshSpec) -> Result<BayesCheck> {
    check_range("mu", mu, 0.0, 1.0)?;
    grid_check(mu, mesh, |g| p1_given_best_responses(mu, g).expect("mu checked"))
}

/// Same check for arbitrary tables, through the mixture payoff with the types
/// held at [`equilibrium_types`].
pub fn bayes_ne_check_spec(spec: &BayesSpec, mesh: &MeshSpec) -> Result<BayesCheck> {
    let (g2i, g2ii) = equilibrium_types();
    grid_check(spec.mu, mesh, |&g1| {
        bayes_payoffs(spec, &BayesProfile { g1, g2i, g2ii }).p1
    })
}

fn grid_check<F>(mu: f64, mesh: &MeshSpec, p1: F) -> Result<BayesCheck>
where
    F: Fn(&StrategyAngles) -> f64 + Sync,
{
    let origin_p1 = p1(&StrategyAngles::identity());
    let n = mesh.num_strategies();
    let (best_i, max_p1) = (0..n)
        .into_par_iter()
        .map(|i| {
            let g = mesh
                .index_to_angles(StrategyIndex::new(i as u32 + 1))
                .expect("in range");
            (i, p1(&g))
        })
        .reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    let argmax_index = StrategyIndex::new(best_i as u32 + 1);
    let margin = max_p1 - origin_p1;
    let verdict = if !max_p1.is_finite() || !origin_p1.is_finite() {
        BayesVerdict::Inconclusive
    } else if margin > BAYES_TOL {
        BayesVerdict::NoNe
    } else {
        BayesVerdict::NeAtOrigin
    };
    Ok(BayesCheck {
        mu,
        verdict,
        origin_p1,
        max_p1,
        argmax_index,
        argmax_angles: mesh.index_to_angles(argmax_index)?,
        margin,
    })
}

/// a + b·μ, exact in its two coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearForm {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearForm {
    pub fn at(&self, mu: f64) -> f64 {
        self.intercept + self.slope * mu
    }

    /// μ where the two forms are equal, if the slopes differ.
    pub fn crossing(&self, other: &Self) -> Option<f64> {
        let ds = self.slope - other.slope;
        (ds != 0.0).then(|| (other.intercept - self.intercept) / ds)
    }
}

/// Classical expected payoffs of player 1 when type I plays D and type II
/// plays C (their dominant gates): (confess, stay silent).
pub fn classical_player1_forms(spec: &BayesSpec) -> (LinearForm, LinearForm) {
    let (u_i, u_ii) = (&spec.game_2i.u1, &spec.game_2ii.u1);
    // row 0 = I (confess), row 1 = Y; type I answers column 1, type II column 0
    let confess = LinearForm {
        intercept: u_ii[0][0],
        slope: u_i[0][1] - u_ii[0][0],
    };
    let silent = LinearForm {
        intercept: u_ii[1][0],
        slope: u_i[1][1] - u_ii[1][0],
    };
    (confess, silent)
}

pub fn classical_threshold(spec: &BayesSpec) -> Option<f64> {
    let (a, b) = classical_player1_forms(spec);
    a.crossing(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn origin() -> StrategyAngles {
        StrategyAngles::identity()
    }

    #[test]
    fn all_identity_profile() {
        let spec = BayesSpec::da_brother(0.1).unwrap();
        let p = bayes_payoffs(
            &spec,
            &BayesProfile {
                g1: origin(),
                g2i: origin(),
                g2ii: origin(),
            },
        );
        assert_eq!(
            p,
            BayesPayoffs {
                p1: 0.0,
                p2i: -2.0,
                p2ii: -2.0
            }
        );
    }

    #[test]
    fn equilibrium_profile_payoffs() {
        let mu = 0.1;
        let spec = BayesSpec::da_brother(mu).unwrap();
        let (t1, t2) = equilibrium_types();
        let p = bayes_payoffs(
            &spec,
            &BayesProfile {
                g1: origin(),
                g2i: t1,
                g2ii: t2,
            },
        );
        assert!((p.p1 + 10.0 * mu).abs() < 1e-14);
        assert!((p.p2i + 1.0).abs() < 1e-14);
        assert!((p.p2ii + 2.0).abs() < 1e-14);
    }

    #[test]
    fn mu_zero_ignores_type_one() {
        let spec = BayesSpec::da_brother(0.0).unwrap();
        let g1 = StrategyAngles::new(0.3, 1.0, 1.2).unwrap();
        let a = bayes_payoffs(
            &spec,
            &BayesProfile {
                g1,
                g2i: origin(),
                g2ii: origin(),
            },
        );
        let b = bayes_payoffs(
            &spec,
            &BayesProfile {
                g1,
                g2i: StrategyAngles::flip(),
                g2ii: origin(),
            },
        );
        assert_eq!(a.p1, b.p1);
    }

    #[test]
    fn spec_check_agrees_with_closed_form() {
        let mesh = MeshSpec::new(5, 9, 9).unwrap();
        for mu in [0.0, 0.1, 1.0 / 6.0, 0.5, 1.0] {
            let a = bayes_ne_check(mu, &mesh).unwrap();
            let b = bayes_ne_check_spec(&BayesSpec::da_brother(mu).unwrap(), &mesh).unwrap();
            assert_eq!(a.verdict, b.verdict, "mu={mu}");
            assert!((a.max_p1 - b.max_p1).abs() < 1e-12);
        }
    }

    #[test]
    fn type_replies_at_origin() {
        // φ idles at θ = π, so the reply is Y itself
        let r1 = bayes_best_response_2i(&origin());
        assert_eq!(r1.theta(), PI);
        assert!(r1.matrix().max_abs_diff(&StrategyAngles::flip().matrix()).unwrap() < 1e-15);
        let r2 = bayes_best_response_2ii(&origin());
        assert_eq!(r2.theta(), 0.0);
        assert!((r2.alpha()).abs() < 1e-15, "alpha idles at the pole");
        assert_eq!(r2.phi(), 0.0);
    }

    #[test]
    fn theta_deviation_leaks_amplitude() {
        let g1 = StrategyAngles::new(0.7, 1.9, 1.0).unwrap();
        let r = bayes_best_response_2i(&g1);
        let delta = 0.3;
        let moved = StrategyAngles::new(g1.phi(), g1.alpha(), g1.theta() + delta).unwrap();
        let sq = closed_form_sq_amplitudes(ClosedForm::PsiPlus, &moved, &r);
        assert!((sq[1] - (delta / 2.0).cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn explicit_formula_values() {
        let mu = 0.3;
        assert!((p1_given_best_responses(mu, &origin()).unwrap() + 10.0 * mu).abs() < 1e-15);
        let y = p1_given_best_responses(mu, &StrategyAngles::flip()).unwrap();
        assert!((y - (-1.0 - 4.0 * mu)).abs() < 1e-14);
        assert!(p1_given_best_responses(1.5, &origin()).is_err());
    }

    #[test]
    fn grid_verdicts() {
        let mesh = MeshSpec::new(9, 17, 17).unwrap();
        let lo = bayes_ne_check(0.1, &mesh).unwrap();
        assert_eq!(lo.verdict, BayesVerdict::NeAtOrigin);
        assert_eq!(lo.argmax_index, StrategyIndex::new(1));
        let hi = bayes_ne_check(0.5, &mesh).unwrap();
        assert_eq!(hi.verdict, BayesVerdict::NoNe);
        assert!(hi.margin > 1.0);
    }

    #[test]
    fn classical_crossing_at_one_sixth() {
        let spec = BayesSpec::da_brother(0.5).unwrap();
        let (confess, silent) = classical_player1_forms(&spec);
        assert_eq!(
            confess,
            LinearForm {
                intercept: 0.0,
                slope: -10.0
            }
        );
        assert_eq!(
            silent,
            LinearForm {
                intercept: -1.0,
                slope: -4.0
            }
        );
        assert_eq!(classical_threshold(&spec), Some(1.0 / 6.0));
        assert!(confess.at(0.1) > silent.at(0.1));
        assert!(confess.at(0.2) < silent.at(0.2));
    }

    #[test]
    fn spec_json() {
        let spec = BayesSpec::da_brother(0.25).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"game_2I\"") && s.contains("\"game_2II\""));
        assert_eq!(BayesSpec::from_json_str(&s).unwrap(), spec);
        let e = BayesSpec::from_json_str(r#"{"mu":0.2,"game_2I":{"name":"a","u1":[[0,0],[0,0]]},"game_2II":{}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("game_2I.u2"), "{e}");
        assert!(BayesSpec::from_json_str(r#"{"game_2I":{},"game_2II":{}}"#).is_err());
        assert!(BayesSpec::new(1.2, GameTable::da_brother(), GameTable::da_brother()).is_err());
    }
}
