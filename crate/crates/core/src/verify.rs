//! Seeded invariant suite. Same seed, same report, regardless of thread count.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bayes::{
    bayes_best_response_2i, bayes_best_response_2ii, bayes_payoffs, equilibrium_types, p1_given_best_responses,
    BayesProfile, BayesSpec,
};
use crate::entangler::{EntanglerFamily, EntanglerSpec};
use crate::equilibrium::{find_pure_ne, mixed_cycle, target_weight, MeshSpec, Responder};
use crate::game::{
    closed_form_amplitudes_partial, closed_form_sq_amplitudes, final_state, ClosedForm, GameTable, Outcome,
};
use crate::num::{CMatrix, ONE};
use crate::qutrit::{
    commutant_is_scalar, perm_matrix, qutrit_entangler, s3_is_closed, z_quadratic_residual, Permutation,
};
use crate::strategy::{su3_from_angles, StrategyAngles, Su3Angles};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed={} samples={}\n", self.seed, self.samples);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

fn bound(name: &str, worst: f64, limit: f64, n: usize) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed: worst <= limit,
        detail: format!("max deviation {worst:.3e} (limit {limit:.0e}) over {n} cases"),
    }
}

fn flag(name: &str, ok: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed: ok,
        detail,
    }
}

fn random_beta(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.0..=FRAC_PI_2)
}

fn sq_err(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn run(seed: u64, samples: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples.max(1);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..n {
        let u = StrategyAngles::random(&mut rng).matrix();
        worst = worst.max(u.unitarity_deviation().expect("square"));
        worst = worst.max((u.det().expect("square") - ONE).norm());
    }
    checks.push(bound("su2 strategies unitary with det 1", worst, 1e-12, n));

    let mut worst = 0.0f64;
    for _ in 0..n {
        let beta = random_beta(&mut rng);
        for family in [EntanglerFamily::J1, EntanglerFamily::J2] {
            let j = EntanglerSpec::new(family, beta).expect("beta in range").matrix();
            worst = worst.max(j.unitarity_deviation().expect("square"));
        }
    }
    checks.push(bound("entanglers J1/J2 unitary", worst, 1e-12, 2 * n));

    let mut worst = 0.0f64;
    for _ in 0..n {
        let u = su3_from_angles(&Su3Angles::random(&mut rng));
        worst = worst.max(u.unitarity_deviation().expect("square"));
        worst = worst.max((u.det().expect("square") - ONE).norm());
    }
    checks.push(bound("su3 strategies unitary with det 1", worst, 1e-10, n));

    let mut worst = 0.0f64;
    for _ in 0..n.min(100) {
        let j = qutrit_entangler(rng.gen_range(0.0..std::f64::consts::TAU));
        worst = worst.max(j.unitarity_deviation().expect("square"));
    }
    checks.push(bound("qutrit entangler unitary", worst, 1e-12, n.min(100)));

    let mut worst = 0.0f64;
    for _ in 0..n {
        let family = [EntanglerFamily::J1, EntanglerFamily::J2, EntanglerFamily::Identity][rng.gen_range(0..3)];
        let j = EntanglerSpec::new(family, random_beta(&mut rng))
            .expect("in range")
            .matrix();
        let g1 = StrategyAngles::random(&mut rng);
        let g2 = StrategyAngles::random(&mut rng);
        let amps = final_state(&j, &g1, &g2).expect("unitary");
        worst = worst.max((amps.norm_sqr() - 1.0).abs());
    }
    checks.push(bound("protocol conserves norm", worst, 1e-12, n));

    let j1 = EntanglerSpec::j1(FRAC_PI_2).expect("in range").matrix();
    let j2 = EntanglerSpec::new(EntanglerFamily::J2, FRAC_PI_2)
        .expect("in range")
        .matrix();
    let mut worst = [0.0f64; 3];
    for _ in 0..n {
        let g1 = StrategyAngles::random(&mut rng);
        let g2 = StrategyAngles::random(&mut rng);
        let beta = random_beta(&mut rng);
        let jb = EntanglerSpec::j1(beta).expect("in range").matrix();
        worst[0] = worst[0].max(sq_err(
            &closed_form_sq_amplitudes(ClosedForm::PsiPlus, &g1, &g2),
            &final_state(&j1, &g1, &g2).expect("unitary").sq(),
        ));
        worst[1] = worst[1].max(sq_err(
            &closed_form_sq_amplitudes(ClosedForm::Triplet, &g1, &g2),
            &final_state(&j2, &g1, &g2).expect("unitary").sq(),
        ));
        worst[2] = worst[2].max(sq_err(
            &closed_form_amplitudes_partial(beta, &g1, &g2).expect("in range").sq(),
            &final_state(&jb, &g1, &g2).expect("unitary").sq(),
        ));
    }
    checks.push(bound("closed form psi_plus matches protocol", worst[0], 1e-10, n));
    checks.push(bound("closed form triplet matches protocol", worst[1], 1e-10, n));
    checks.push(bound("closed form partial J1 matches protocol", worst[2], 1e-10, n));

    let mut lowest = 1.0f64;
    for _ in 0..n {
        let g = StrategyAngles::random(&mut rng);
        for form in [ClosedForm::PsiPlus, ClosedForm::Triplet] {
            for resp in [Responder::One, Responder::Two] {
                for k in Outcome::ALL {
                    lowest = lowest.min(target_weight(resp, form, k, &g));
                }
            }
        }
        let b1 = bayes_best_response_2i(&g);
        let b2 = bayes_best_response_2ii(&g);
        lowest = lowest.min(closed_form_sq_amplitudes(ClosedForm::PsiPlus, &g, &b1)[1]);
        lowest = lowest.min(closed_form_sq_amplitudes(ClosedForm::PsiPlus, &g, &b2)[0]);
    }
    checks.push(bound(
        "analytic replies reach target amplitude",
        1.0 - lowest,
        1e-10,
        18 * n,
    ));

    let mut closed = 0;
    for _ in 0..n {
        if mixed_cycle(&StrategyAngles::random(&mut rng)).closes(1e-9) {
            closed += 1;
        }
    }
    checks.push(flag(
        "reply cycle closes up to sign",
        closed == n,
        format!("{closed}/{n} cycles closed"),
    ));

    let (t1, t2) = equilibrium_types();
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mu = rng.gen_range(0.0..=1.0);
        let g1 = StrategyAngles::random(&mut rng);
        let spec = BayesSpec::da_brother(mu).expect("mu in range");
        let composed = bayes_payoffs(&spec, &BayesProfile { g1, g2i: t1, g2ii: t2 }).p1;
        let explicit = p1_given_best_responses(mu, &g1).expect("mu in range");
        worst = worst.max((composed - explicit).abs());
    }
    checks.push(bound("bayes explicit payoff matches composition", worst, 1e-10, n));

    let beta = random_beta(&mut rng);
    let mesh = MeshSpec::new(7, 9, 9).expect("valid mesh");
    let spec = EntanglerSpec::j1(beta).expect("in range");
    let game = GameTable::da_brother();
    let pool = |t: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
    };
    let serial = pool(1).install(|| find_pure_ne(&game, &spec, &mesh));
    let parallel = pool(4).install(|| find_pure_ne(&game, &spec, &mesh));
    checks.push(flag(
        "nash search independent of thread count",
        serial == parallel,
        format!("beta={beta:.6} mesh {mesh}: {} pairs", serial.pairs.len()),
    ));

    let residual_zero = z_quadratic_residual().iter().flatten().all(|&x| x == 0);
    checks.push(flag("Z^2 = Z + 2I exactly", residual_zero, "integer arithmetic".into()));
    checks.push(flag(
        "permutations closed under product",
        s3_is_closed(),
        "36 products".into(),
    ));
    let gens: Vec<CMatrix> = [Permutation::S12, Permutation::S13].map(perm_matrix).to_vec();
    let comm = commutant_is_scalar(&gens, 3).expect("square generators");
    checks.push(flag(
        "commutant of S12, S13 spanned by identity and all-ones",
        !comm.scalar_only && comm.dimension == 2,
        format!("dimension {}", comm.dimension),
    ));

    VerifyReport {
        seed,
        samples: n,
        checks,
    }
}
