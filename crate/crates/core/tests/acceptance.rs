//! Exit criteria. One line per criterion; nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qgame_core::bayes::{
    bayes_ne_check, bayes_payoffs, classical_player1_forms, classical_threshold, equilibrium_types, BayesProfile,
    BayesSpec, BayesVerdict,
};
use qgame_core::entangler::{EntanglerFamily, EntanglerSpec};
use qgame_core::equilibrium::{find_pure_ne, linspace, mixed_cycle, sweep_beta, MeshSpec, StrategyIndex};
use qgame_core::game::{closed_form_amplitudes_partial, closed_form_sq_amplitudes, final_state, ClosedForm, GameTable};
use qgame_core::qutrit::{
    commutant_is_scalar, entangled_vacuum, max_entangling_beta, perm_matrix, z_quadratic_residual, Permutation,
};
use qgame_core::strategy::StrategyAngles;
use qgame_core::verify;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn mesh(s: &str) -> MeshSpec {
    s.parse().expect("mesh literal")
}

fn c1_mesh_cardinality() -> Outcome {
    let n = mesh("9,17,17").num_strategies();
    outcome(n == 2025, format!("N_S = {n}"))
}

fn c2_classical_recovery() -> Outcome {
    let res = find_pure_ne(
        &GameTable::da_brother(),
        &EntanglerSpec::j1(0.0).unwrap(),
        &mesh("9,17,17"),
    );
    let last = StrategyIndex::new(2025);
    let hit = res.pairs.iter().find(|p| p.i1 == last && p.i2 == last);
    match hit {
        Some(p) => outcome(
            p.p1 == -5.0 && p.p2 == -5.0,
            format!(
                "(Y,Y) pair (2025,2025) payoffs ({}, {}); {} pairs total",
                p.p1,
                p.p2,
                res.pairs.len()
            ),
        ),
        None => outcome(false, format!("(2025,2025) not among {} pairs", res.pairs.len())),
    }
}

fn c3_partial_entanglement() -> Outcome {
    let res = find_pure_ne(
        &GameTable::da_brother(),
        &EntanglerSpec::j1(1.0).unwrap(),
        &mesh("9,17,17"),
    );
    let near = |p1: f64, p2: f64| (p1 + 1.45).abs() <= 0.05 && (p2 + 2.83).abs() <= 0.05;
    let matching = res.pairs.iter().filter(|p| near(p.p1, p.p2)).count();
    let indexed = res.pairs.iter().any(|p| p.i1.get() == 1760 && p.i2.get() == 1868);
    let first = res
        .pairs
        .first()
        .map(|p| format!("first ({},{}) -> ({:.4}, {:.4})", p.i1, p.i2, p.p1, p.p2))
        .unwrap_or_else(|| "none".into());
    outcome(
        matching > 0,
        format!(
            "{} pairs, {matching} within 0.05 of (-1.45,-2.83); {first}; index pair (1760,1868) {}",
            res.pairs.len(),
            if indexed { "present" } else { "absent" }
        ),
    )
}

fn c4_no_ne_at_maximal() -> Outcome {
    let spec = EntanglerSpec::j1(FRAC_PI_2).unwrap();
    let mut counts = Vec::new();
    for m in ["9,17,17", "9,33,33"] {
        for game in [GameTable::prisoners_dilemma(), GameTable::da_brother()] {
            let res = find_pure_ne(&game, &spec, &mesh(m));
            counts.push(format!("{}@{m}={}", game.name, res.pairs.len()));
            if res.found {
                return outcome(false, counts.join(" "));
            }
        }
    }
    outcome(true, counts.join(" "))
}

fn c5_threshold() -> Outcome {
    let betas = linspace(0.0, FRAC_PI_2, 32);
    let report = sweep_beta(&GameTable::da_brother(), EntanglerFamily::J1, &mesh("9,17,17"), &betas).unwrap();
    let Some(bc) = report.beta_c else {
        return outcome(false, "no beta with an equilibrium");
    };
    let in_window = (1.05..=1.20).contains(&bc);
    let monotone = report.is_monotone(1e-9);
    outcome(
        in_window && monotone,
        format!(
            "last found beta = {bc:.4}; monotone = {monotone}; bracketed = {}",
            report.is_bracketed()
        ),
    )
}

fn c6_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let j1 = EntanglerSpec::j1(FRAC_PI_2).unwrap().matrix();
    let j2 = EntanglerSpec::new(EntanglerFamily::J2, FRAC_PI_2).unwrap().matrix();
    let err = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut worst = [0.0f64; 3];
    for _ in 0..1000 {
        let g1 = StrategyAngles::random(&mut rng);
        let g2 = StrategyAngles::random(&mut rng);
        let beta = rand::Rng::gen_range(&mut rng, 0.0..=FRAC_PI_2);
        let jb = EntanglerSpec::j1(beta).unwrap().matrix();
        worst[0] = worst[0].max(err(
            &closed_form_sq_amplitudes(ClosedForm::PsiPlus, &g1, &g2),
            &final_state(&j1, &g1, &g2).unwrap().sq(),
        ));
        worst[1] = worst[1].max(err(
            &closed_form_sq_amplitudes(ClosedForm::Triplet, &g1, &g2),
            &final_state(&j2, &g1, &g2).unwrap().sq(),
        ));
        worst[2] = worst[2].max(err(
            &closed_form_amplitudes_partial(beta, &g1, &g2).unwrap().sq(),
            &final_state(&jb, &g1, &g2).unwrap().sq(),
        ));
    }
    outcome(
        worst.iter().all(|&w| w <= 1e-10),
        format!(
            "max errors psi_plus {:.2e}, triplet {:.2e}, partial {:.2e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn c7_mixed_cycle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pd = GameTable::prisoners_dilemma();
    let mut closed = 0;
    let mut worst_avg = 0.0f64;
    for _ in 0..100 {
        let cyc = mixed_cycle(&StrategyAngles::random(&mut rng));
        if cyc.closes(1e-9) {
            closed += 1;
        }
        let avg = cyc.average_payoff(&pd).unwrap();
        worst_avg = worst_avg.max((avg.p1 + 4.0).abs()).max((avg.p2 + 4.0).abs());
    }
    outcome(
        closed == 100 && worst_avg <= 1e-12,
        format!("{closed}/100 closures (up to the sign of U); average off (-4,-4) by {worst_avg:.1e}"),
    )
}

fn c8_bayesian() -> Outcome {
    let m = mesh("9,17,17");
    let low = bayes_ne_check(0.1, &m).unwrap();
    let high = bayes_ne_check(0.5, &m).unwrap();
    let spec = BayesSpec::da_brother(0.1).unwrap();
    let (t1, t2) = equilibrium_types();
    let pay = bayes_payoffs(
        &spec,
        &BayesProfile {
            g1: StrategyAngles::identity(),
            g2i: t1,
            g2ii: t2,
        },
    );
    let threshold = classical_threshold(&spec);
    let (confess, silent) = classical_player1_forms(&spec);
    let eps = 1e-6;
    let flips = threshold.is_some_and(|t| (t - 1.0 / 6.0).abs() < 1e-15)
        && (confess.at(1.0 / 6.0 - eps) - silent.at(1.0 / 6.0 - eps)).signum()
            != (confess.at(1.0 / 6.0 + eps) - silent.at(1.0 / 6.0 + eps)).signum();
    let ok = low.verdict == BayesVerdict::NeAtOrigin
        && low.origin_p1 == -10.0 * 0.1
        && pay.p2i == -1.0
        && pay.p2ii == -2.0
        && high.verdict == BayesVerdict::NoNe
        && flips;
    outcome(
        ok,
        format!(
            "mu=0.1 {:?} origin {} types ({}, {}); mu=0.5 {:?} margin {:.4}; threshold {:?}",
            low.verdict, low.origin_p1, pay.p2i, pay.p2ii, high.verdict, high.margin, threshold
        ),
    )
}

fn c9_qutrit() -> Outcome {
    let b = max_entangling_beta();
    let v = entangled_vacuum(b);
    let worst = [0, 4, 8]
        .iter()
        .map(|&k| (v.amplitudes()[k].norm() - 1.0 / 3f64.sqrt()).abs())
        .fold(0.0, f64::max);
    let z_ok = z_quadratic_residual().iter().flatten().all(|&x| x == 0);
    let beta_err = (b - 2.0 * PI / 9.0).abs();
    outcome(
        beta_err <= 1e-12 && worst <= 1e-12 && z_ok,
        format!("beta off 2pi/9 by {beta_err:.1e}; amplitude error {worst:.1e}; Z^2=Z+2I {z_ok}"),
    )
}

fn c10_commutant() -> Outcome {
    let gens = [perm_matrix(Permutation::S12), perm_matrix(Permutation::S13)];
    let r = commutant_is_scalar(&gens, 3).unwrap();
    outcome(
        r.scalar_only && r.dimension == 1,
        format!(
            "dimension {} (scalar_only {}); the all-ones matrix also commutes, the 3-dim permutation action is reducible",
            r.dimension, r.scalar_only
        ),
    )
}

fn c11_property_suite() -> Outcome {
    let report = verify::run(7, 500);
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    outcome(
        failed.is_empty(),
        format!("{} checks, failed: {:?}", report.checks.len(), failed),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 mesh cardinality", c1_mesh_cardinality, Duration::from_secs(1)),
        ("2 classical recovery", c2_classical_recovery, Duration::from_secs(10)),
        (
            "3 partial-entanglement NE",
            c3_partial_entanglement,
            Duration::from_secs(10),
        ),
        (
            "4 no NE at maximal entanglement",
            c4_no_ne_at_maximal,
            Duration::from_secs(120),
        ),
        ("5 entanglement threshold", c5_threshold, Duration::from_secs(300)),
        ("6 closed-form equivalence", c6_closed_forms, Duration::from_secs(30)),
        ("7 mixed cycle", c7_mixed_cycle, Duration::from_secs(30)),
        ("8 bayesian", c8_bayesian, Duration::from_secs(60)),
        ("9 qutrit entangler", c9_qutrit, Duration::from_secs(1)),
        ("10 commutant is scalar", c10_commutant, Duration::from_secs(1)),
        ("11 property suite", c11_property_suite, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let passed = out.passed && took <= budget;
        if !passed {
            failures += 1;
        }
        println!(
            "[{}] {name}: {} ({:.2?}, budget {:?})",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            took,
            budget
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
