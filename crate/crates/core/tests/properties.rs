use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use qgame_core::bayes::{bayes_payoffs, equilibrium_types, p1_given_best_responses, BayesProfile, BayesSpec};
use qgame_core::entangler::{EntanglerFamily, EntanglerSpec};
use qgame_core::equilibrium::{analytic_response, mixed_cycle, MeshSpec, Responder, StrategyIndex};
use qgame_core::game::{closed_form_sq_amplitudes, final_state, ClosedForm, GameTable, Outcome};
use qgame_core::num::{c, Complex};
use qgame_core::qutrit::{is_qutrit_product, qutrit_entangler, qutrit_tensor, vacuum_norm_identity, TritState};
use qgame_core::strategy::{bloch_coords, StrategyAngles};

fn angles() -> impl Strategy<Value = StrategyAngles> {
    (0.0..TAU, 0.0..TAU, 0.0..=PI).prop_map(|(p, a, t)| StrategyAngles::new(p, a, t).unwrap())
}

fn family() -> impl Strategy<Value = EntanglerFamily> {
    prop_oneof![
        Just(EntanglerFamily::J1),
        Just(EntanglerFamily::J2),
        Just(EntanglerFamily::Identity)
    ]
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop::sample::select(Outcome::ALL.to_vec())
}

proptest! {
    #[test]
    fn strategy_matrices_are_special_unitary(g in angles()) {
        let u = g.matrix();
        prop_assert!(u.unitarity_deviation().unwrap() < 1e-12);
        prop_assert!((u.det().unwrap() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn protocol_preserves_norm(fam in family(), beta in 0.0..=FRAC_PI_2, g1 in angles(), g2 in angles()) {
        let j = EntanglerSpec::new(fam, beta).unwrap().matrix();
        prop_assert!(j.unitarity_deviation().unwrap() < 1e-12);
        let amps = final_state(&j, &g1, &g2).unwrap();
        prop_assert!((amps.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn payoffs_stay_inside_the_table(beta in 0.0..=FRAC_PI_2, g1 in angles(), g2 in angles()) {
        let game = GameTable::da_brother();
        let j = EntanglerSpec::j1(beta).unwrap().matrix();
        let p = game.payoffs_from_sq(&final_state(&j, &g1, &g2).unwrap().sq());
        let bounds = |u: &[[f64; 2]; 2]| {
            let v = u.iter().flatten();
            (v.clone().cloned().fold(f64::INFINITY, f64::min), v.cloned().fold(f64::NEG_INFINITY, f64::max))
        };
        let (lo1, hi1) = bounds(&game.u1);
        let (lo2, hi2) = bounds(&game.u2);
        prop_assert!(p.p1 >= lo1 - 1e-12 && p.p1 <= hi1 + 1e-12);
        prop_assert!(p.p2 >= lo2 - 1e-12 && p.p2 <= hi2 + 1e-12);
    }

    #[test]
    fn no_entanglement_factorizes(g1 in angles(), g2 in angles()) {
        // with J = I the outcome law is the product of single-qubit laws
        let j = EntanglerSpec::new(EntanglerFamily::Identity, 0.0).unwrap().matrix();
        let sq = final_state(&j, &g1, &g2).unwrap().sq();
        let q = |g: &StrategyAngles| (g.theta() / 2.0).sin().powi(2);
        let (q1, q2) = (q(&g1), q(&g2));
        let expect = [(1.0 - q1) * (1.0 - q2), (1.0 - q1) * q2, q1 * (1.0 - q2), q1 * q2];
        for k in 0..4 {
            prop_assert!((sq[k] - expect[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_replies_hit_target(g in angles(), t in outcome(), triplet in any::<bool>(), one in any::<bool>()) {
        let form = if triplet { ClosedForm::Triplet } else { ClosedForm::PsiPlus };
        let resp = if one { Responder::One } else { Responder::Two };
        let r = analytic_response(resp, form, t, &g);
        let sq = match resp {
            Responder::One => closed_form_sq_amplitudes(form, &r, &g),
            Responder::Two => closed_form_sq_amplitudes(form, &g, &r),
        };
        prop_assert!(sq[t.index()] >= 1.0 - 1e-10);
    }

    #[test]
    fn cycle_returns_to_start_up_to_sign(g in angles()) {
        prop_assert!(mixed_cycle(&g).closes(1e-9));
    }

    #[test]
    fn mesh_index_round_trip(nt in 3usize..8, np in 1usize..9, na in 1usize..9, pick in any::<prop::sample::Index>()) {
        let mesh = MeshSpec::new(nt, np, na).unwrap();
        let i = pick.index(mesh.num_strategies()) as u32 + 1;
        let g = mesh.index_to_angles(StrategyIndex::new(i)).unwrap();
        let back = mesh.angles_to_index(&g).unwrap();
        // azimuth endpoints 0 and 2π are the same matrix, so compare those
        let gb = mesh.index_to_angles(back).unwrap();
        prop_assert!(g.matrix().max_abs_diff(&gb.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn angles_display_round_trip(g in angles()) {
        let back: StrategyAngles = g.to_string().parse().unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn bayes_closed_form_matches_composition(mu in 0.0..=1.0f64, g1 in angles()) {
        let (t1, t2) = equilibrium_types();
        let spec = BayesSpec::da_brother(mu).unwrap();
        let composed = bayes_payoffs(&spec, &BayesProfile { g1, g2i: t1, g2ii: t2 }).p1;
        prop_assert!((composed - p1_given_best_responses(mu, &g1).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn bloch_vector_has_unit_length(g in angles()) {
        let u = g.matrix();
        let v = bloch_coords(u[(0, 0)], u[(1, 0)]).unwrap();
        prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qutrit_entangler_unitary(beta in 0.0..TAU) {
        prop_assert!(qutrit_entangler(beta).unitarity_deviation().unwrap() < 1e-12);
        prop_assert!((vacuum_norm_identity(beta) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qutrit_tensors_are_products(re in prop::array::uniform6(-1.0..1.0f64), re2 in prop::array::uniform6(-1.0..1.0f64)) {
        let mk = |x: [f64; 6]| {
            let v: [Complex; 3] = [c(x[0], x[1]), c(x[2], x[3]), c(x[4], x[5])];
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (n > 1e-3).then(|| TritState::new(v.map(|z| z / n)).unwrap())
        };
        if let (Some(a), Some(b)) = (mk(re), mk(re2)) {
            prop_assert!(is_qutrit_product(&qutrit_tensor(&a, &b), 1e-10));
        }
    }
}
