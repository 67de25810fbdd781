//! Closed-form best responses at maximal entanglement.
//!
//! Under either maximally entangled vacuum each player can, against any fixed
//! opponent, steer the whole amplitude onto any one of the four outcomes. The
//! maps below give one such reply per (form, responder, outcome).

use std::f64::consts::{FRAC_PI_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::search::{Responder, TIE_TOL};
use crate::entangler::EntanglerSpec;
use crate::error::Result;
use crate::game::{closed_form_sq_amplitudes, mixed_payoff, ClosedForm, GameTable, MixedStrategy, Outcome, PayoffPair};
use crate::strategy::StrategyAngles;

/// Reply to `g_opp` that puts |target|² = 1.
pub fn analytic_response(
    responder: Responder,
    form: ClosedForm,
    target: Outcome,
    g_opp: &StrategyAngles,
) -> StrategyAngles {
    let (p, a, t) = (g_opp.phi(), g_opp.alpha(), g_opp.theta());
    let h = FRAC_PI_2;
    let (phi, alpha, theta) = match (form, responder, target) {
        (ClosedForm::PsiPlus, _, Outcome::CC) => (-p, -a - h, t),
        (ClosedForm::PsiPlus, _, Outcome::DD) => (h - p, -a, t),
        (ClosedForm::PsiPlus, Responder::Two, Outcome::CD) => (a - h, p, PI - t),
        (ClosedForm::PsiPlus, Responder::Two, Outcome::DC) => (a, p + h, PI - t),
        (ClosedForm::PsiPlus, Responder::One, Outcome::CD) => (a, p + h, PI - t),
        (ClosedForm::PsiPlus, Responder::One, Outcome::DC) => (a - h, p, PI - t),

        (ClosedForm::Triplet, _, Outcome::CC) => (p, a + PI, t),
        (ClosedForm::Triplet, _, Outcome::CD) => (h - a, h - p, PI - t),
        (ClosedForm::Triplet, _, Outcome::DD) => (-a, -p, PI - t),
        (ClosedForm::Triplet, Responder::Two, Outcome::DC) => (p + h, a - h, t),
        (ClosedForm::Triplet, Responder::One, Outcome::DC) => (p - h, a + h, t),
    };
    StrategyAngles::wrapped(phi, alpha, theta)
}

/// Prisoner's-dilemma reply: player 2 aims at (C,D), player 1 at (D,C),
/// each being that player's unique best outcome in the table.
pub fn analytic_best_response(responder: Responder, form: ClosedForm, g_opp: &StrategyAngles) -> StrategyAngles {
    let target = match responder {
        Responder::Two => Outcome::CD,
        Responder::One => Outcome::DC,
    };
    analytic_response(responder, form, target, g_opp)
}

/// Amplitude landing on the target outcome, evaluated by the closed form.
pub fn target_weight(responder: Responder, form: ClosedForm, target: Outcome, g_opp: &StrategyAngles) -> f64 {
    let g = analytic_response(responder, form, target, g_opp);
    let sq = match responder {
        Responder::Two => closed_form_sq_amplitudes(form, g_opp, &g),
        Responder::One => closed_form_sq_amplitudes(form, &g, g_opp),
    };
    sq[target.index()]
}

fn pay(form: ClosedForm, game: &GameTable, g1: &StrategyAngles, g2: &StrategyAngles) -> PayoffPair {
    game.payoffs_from_sq(&closed_form_sq_amplitudes(form, g1, g2))
}

fn best_reply_value(responder: Responder, form: ClosedForm, game: &GameTable, g_opp: &StrategyAngles) -> f64 {
    Outcome::ALL
        .iter()
        .map(|&k| {
            let g = analytic_response(responder, form, k, g_opp);
            match responder {
                Responder::Two => pay(form, game, g_opp, &g).p2,
                Responder::One => pay(form, game, &g, g_opp).p1,
            }
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// True iff at every sampled profile some player has a strictly better
/// analytic reply. Besides uniform random profiles, every analytic reply to
/// each sampled strategy is tested, since those are the only candidates for
/// a mutual best response.
pub fn no_psne_certificate(form: ClosedForm, game: &GameTable, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let improves = |g1: &StrategyAngles, g2: &StrategyAngles| {
        let here = pay(form, game, g1, g2);
        best_reply_value(Responder::One, form, game, g2) > here.p1 + TIE_TOL
            || best_reply_value(Responder::Two, form, game, g1) > here.p2 + TIE_TOL
    };
    for _ in 0..samples.max(1) {
        let g1 = StrategyAngles::random(&mut rng);
        let g2 = StrategyAngles::random(&mut rng);
        if !improves(&g1, &g2) {
            return false;
        }
        for k in Outcome::ALL {
            let r2 = analytic_response(Responder::Two, form, k, &g1);
            let r1 = analytic_response(Responder::One, form, k, &g2);
            if !improves(&g1, &r2) || !improves(&r1, &g2) {
                return false;
            }
        }
    }
    true
}

/// Four strategies chained by alternating prisoner's-dilemma best replies
/// under the |ψ₊⟩ vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedCycle {
    pub g1: StrategyAngles,
    pub g2: StrategyAngles,
    pub g1_prime: StrategyAngles,
    pub g2_prime: StrategyAngles,
    /// BR₁(g2'), which should reproduce g1.
    pub closure: StrategyAngles,
}

pub fn mixed_cycle(g1: &StrategyAngles) -> MixedCycle {
    let form = ClosedForm::PsiPlus;
    let g2 = analytic_best_response(Responder::Two, form, g1);
    let g1_prime = analytic_best_response(Responder::One, form, &g2);
    let g2_prime = analytic_best_response(Responder::Two, form, &g1_prime);
    let closure = analytic_best_response(Responder::One, form, &g2_prime);
    MixedCycle {
        g1: *g1,
        g2,
        g1_prime,
        g2_prime,
        closure,
    }
}

impl MixedCycle {
    /// The chain returns to g1 as a group element up to the sign −I, which
    /// no amplitude modulus can see. In angles this is (φ−π, α−π, θ).
    pub fn closes(&self, tol: f64) -> bool {
        self.closure.same_up_to_sign(&self.g1, tol)
    }

    /// Whether the closing angles equal g1 exactly modulo 2π.
    pub fn closes_in_angles(&self, tol: f64) -> bool {
        let d = |x: f64, y: f64| {
            let r = (x - y).rem_euclid(std::f64::consts::TAU);
            r.min(std::f64::consts::TAU - r)
        };
        d(self.closure.phi(), self.g1.phi()) <= tol
            && d(self.closure.alpha(), self.g1.alpha()) <= tol
            && (self.closure.theta() - self.g1.theta()).abs() <= tol
    }

    /// 50/50 over {g1, g1'} for player 1 and over {g2, g2'} for player 2.
    pub fn strategies(&self) -> (MixedStrategy, MixedStrategy) {
        (
            MixedStrategy::uniform(&[self.g1, self.g1_prime]).expect("two points"),
            MixedStrategy::uniform(&[self.g2, self.g2_prime]).expect("two points"),
        )
    }

    pub fn average_payoff(&self, game: &GameTable) -> Result<PayoffPair> {
        let (m1, m2) = self.strategies();
        let j = EntanglerSpec::j1(FRAC_PI_2)?.matrix();
        mixed_payoff(&m1, &m2, &j, game)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn every_map_hits_its_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = StrategyAngles::random(&mut rng);
            for form in [ClosedForm::PsiPlus, ClosedForm::Triplet] {
                for resp in [Responder::One, Responder::Two] {
                    for k in Outcome::ALL {
                        let w = target_weight(resp, form, k, &g);
                        assert!(w >= 1.0 - 1e-10, "{form:?} {resp:?} {k:?} {g}: {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn maps_work_at_the_poles() {
        for g in [StrategyAngles::identity(), StrategyAngles::flip()] {
            for form in [ClosedForm::PsiPlus, ClosedForm::Triplet] {
                for resp in [Responder::One, Responder::Two] {
                    for k in Outcome::ALL {
                        assert!(target_weight(resp, form, k, &g) >= 1.0 - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn origin_reply_for_player_two() {
        let g = analytic_best_response(Responder::Two, ClosedForm::PsiPlus, &StrategyAngles::identity());
        let sq = closed_form_sq_amplitudes(ClosedForm::PsiPlus, &StrategyAngles::identity(), &g);
        assert!((sq[1] - 1.0).abs() < 1e-15);
        assert_eq!(g.theta(), PI);
        assert!(g.matrix().max_abs_diff(&StrategyAngles::flip().matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn uncorrected_theta_map_misses() {
        // keeping θ₂ = θ₁ instead of π − θ₁ does not reach |b|² = 1
        let g1 = StrategyAngles::new(0.4, 1.3, 0.9).unwrap();
        let wrong = StrategyAngles::wrapped(g1.alpha() - FRAC_PI_2, g1.phi(), g1.theta());
        let sq = closed_form_sq_amplitudes(ClosedForm::PsiPlus, &g1, &wrong);
        assert!(sq[1] < 0.99);
    }

    #[test]
    fn certificate_pd_and_cooperative_table() {
        let pd = GameTable::prisoners_dilemma();
        assert!(no_psne_certificate(ClosedForm::PsiPlus, &pd, 200, 1));
        assert!(no_psne_certificate(ClosedForm::Triplet, &pd, 200, 1));
        assert!(no_psne_certificate(ClosedForm::PsiPlus, &pd, 1, 1));
        let coop = GameTable::new("coop", [[0.0, -3.0], [-2.0, -1.0]], [[0.0, -2.0], [-3.0, -1.0]]).unwrap();
        assert!(!no_psne_certificate(ClosedForm::PsiPlus, &coop, 10, 1));
        assert!(!no_psne_certificate(ClosedForm::PsiPlus, &coop, 1, 1));
    }

    #[test]
    fn cycle_closes_up_to_sign_only() {
        for g in [StrategyAngles::identity(), StrategyAngles::new(1.0, 2.0, 0.5).unwrap()] {
            let cyc = mixed_cycle(&g);
            assert!(cyc.closes(1e-9));
            if g.theta() > 0.0 {
                assert!(!cyc.closes_in_angles(1e-9));
            }
        }
    }

    #[test]
    fn cycle_average_is_four_years() {
        let cyc = mixed_cycle(&StrategyAngles::new(1.0, 2.0, 0.5).unwrap());
        let avg = cyc.average_payoff(&GameTable::prisoners_dilemma()).unwrap();
        assert!((avg.p1 + 4.0).abs() < 1e-12 && (avg.p2 + 4.0).abs() < 1e-12);
    }
}
