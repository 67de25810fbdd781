use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgame_core::bayes::{bayes_ne_check, bayes_ne_check_spec, BayesCheck, BayesSpec};
use qgame_core::entangler::{EntanglerFamily, EntanglerSpec};
use qgame_core::equilibrium::{find_pure_ne_with, linspace, mixed_cycle, sweep_beta_with, Backend, MeshSpec, NePair};
use qgame_core::game::{final_state, load_game, GameTable, PayoffPair};
use qgame_core::num::Complex;
use qgame_core::qutrit::{entangled_vacuum, is_qutrit_max_entangled, max_entangling_beta, qutrit_entangler_coeffs};
use qgame_core::strategy::StrategyAngles;
use qgame_core::verify;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "qgame",
    version,
    about = "Quantized 2x2 games: payoffs, equilibria and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Outcome probabilities and payoffs for one strategy pair.
    Payoff {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        ent: EntArgs,
        #[arg(long)]
        p1: StrategyAngles,
        #[arg(long)]
        p2: StrategyAngles,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Pure Nash equilibria on the strategy mesh.
    SearchNe {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        ent: EntArgs,
        #[arg(long, default_value = "9,17,17")]
        mesh: MeshSpec,
        #[arg(long, default_value = "closed-form")]
        backend: Backend,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Equilibrium search over an evenly spaced grid of β.
    SweepBeta {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value = "j1")]
        entangler: EntanglerFamily,
        #[arg(long, default_value_t = 0.0)]
        beta_min: f64,
        #[arg(long, default_value_t = FRAC_PI_2)]
        beta_max: f64,
        #[arg(long, default_value_t = 32)]
        beta_steps: usize,
        #[arg(long, default_value = "9,17,17")]
        mesh: MeshSpec,
        #[arg(long, default_value = "closed-form")]
        backend: Backend,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Whether player 1 staying at the identity is an equilibrium of the
    /// two-type game.
    Bayes {
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long, default_value = "9,17,17")]
        mesh: MeshSpec,
        /// JSON file {"mu", "game_2I", "game_2II"}; --mu overrides its mu.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Four-step best-reply cycle at maximal entanglement and its 50/50 average.
    MixedDemo {
        #[arg(long, default_value = "pd")]
        game: String,
        /// Player 1's starting strategy.
        #[arg(long, default_value = "1,2,0.5")]
        p1: StrategyAngles,
    },
    /// Two-qutrit entangler exp(iβZ) acting on |00⟩.
    QutritEntangler {
        #[arg(long, required_unless_present = "find_max", conflicts_with = "find_max")]
        beta: Option<f64>,
        #[arg(long)]
        find_max: bool,
    },
    /// Seeded invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Game JSON file, or one of the built-in names pd, da.
    #[arg(long, default_value = "da")]
    game: String,
}

#[derive(Args, Debug)]
struct EntArgs {
    #[arg(long, default_value = "j1")]
    entangler: EntanglerFamily,
    /// Required for j1 and j2.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    /// Bad flags or input files.
    Usage(String),
    /// A computed result broke an invariant.
    Invariant(String),
}

impl From<qgame_core::Error> for Failure {
    fn from(e: qgame_core::Error) -> Self {
        use qgame_core::Error::*;
        match e {
            NotUnitary { .. } | NotNormalized { .. } | Structure { .. } => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn load(game: &str) -> Result<GameTable, Failure> {
    if Path::new(game).exists() {
        return Ok(load_game(game)?);
    }
    GameTable::builtin(game).ok_or_else(|| {
        Failure::Usage(format!(
            "`{game}` is neither a readable file nor a built-in game (pd, da)"
        ))
    })
}

fn entangler(args: &EntArgs) -> Result<EntanglerSpec, Failure> {
    let beta = match (args.entangler, args.beta) {
        (EntanglerFamily::Identity, b) => b.unwrap_or(0.0),
        (_, Some(b)) => b,
        (f, None) => return Err(Failure::Usage(format!("--beta is required with --entangler {f}"))),
    };
    Ok(EntanglerSpec::new(args.entangler, beta)?)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"
}

#[derive(Serialize)]
struct PayoffRecord<'a> {
    game: &'a str,
    entangler: EntanglerSpec,
    p1: StrategyAngles,
    p2: StrategyAngles,
    sq_amplitudes: [f64; 4],
    payoffs: PayoffPair,
}

fn cmd_payoff(game: &GameArgs, ent: &EntArgs, p1: StrategyAngles, p2: StrategyAngles, format: Format) -> Out {
    let table = load(&game.game)?;
    let spec = entangler(ent)?;
    let amps = final_state(&spec.matrix(), &p1, &p2)?;
    let sq = amps.sq();
    let norm = amps.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Failure::Invariant(format!("final state norm^2 = {norm}")));
    }
    let payoffs = table.payoffs_from_sq(&sq);
    Ok(match format {
        Format::Json => json(&PayoffRecord {
            game: &table.name,
            entangler: spec,
            p1,
            p2,
            sq_amplitudes: sq,
            payoffs,
        }),
        Format::Csv => format!(
            "a2,b2,c2,d2,p1,p2\n{},{},{},{},{},{}\n",
            sq[0], sq[1], sq[2], sq[3], payoffs.p1, payoffs.p2
        ),
    })
}

#[derive(Serialize)]
struct NeRecord<'a> {
    game: &'a str,
    entangler: EntanglerSpec,
    mesh: String,
    num_strategies: usize,
    found: bool,
    best: Option<NePair>,
    pairs: &'a [NePair],
}

fn cmd_search_ne(game: &GameArgs, ent: &EntArgs, mesh: &MeshSpec, backend: Backend, format: Format) -> Out {
    let table = load(&game.game)?;
    let spec = entangler(ent)?;
    let res = find_pure_ne_with(&table, &spec, mesh, backend);
    Ok(match format {
        Format::Json => json(&NeRecord {
            game: &table.name,
            entangler: spec,
            mesh: mesh.to_string(),
            num_strategies: mesh.num_strategies(),
            found: res.found,
            best: res.best().copied(),
            pairs: &res.pairs,
        }),
        Format::Csv => {
            let mut out = String::from("i1,i2,p1,p2\n");
            for p in &res.pairs {
                writeln!(out, "{},{},{},{}", p.i1, p.i2, p.p1, p.p2).expect("writing to a String");
            }
            out
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    game: &GameArgs,
    family: EntanglerFamily,
    min: f64,
    max: f64,
    steps: usize,
    mesh: &MeshSpec,
    backend: Backend,
    format: Format,
) -> Out {
    if steps == 0 {
        return Err(Failure::Usage("--beta-steps must be at least 1".into()));
    }
    if max < min {
        return Err(Failure::Usage(format!("--beta-max {max} is below --beta-min {min}")));
    }
    let table = load(&game.game)?;
    let report = sweep_beta_with(&table, family, mesh, &linspace(min, max, steps), backend)?;
    Ok(match format {
        Format::Csv => report.to_csv(),
        Format::Json => json(&report),
    })
}

fn cmd_bayes(mu: Option<f64>, mesh: &MeshSpec, spec: Option<&str>) -> Out {
    let check: BayesCheck = match spec {
        Some(path) => {
            let mut s = BayesSpec::load(path)?;
            if let Some(mu) = mu {
                s = s.with_mu(mu)?;
            }
            bayes_ne_check_spec(&s, mesh)?
        }
        None => {
            let mu = mu.ok_or_else(|| Failure::Usage("--mu is required without --spec".into()))?;
            bayes_ne_check(mu, mesh)?
        }
    };
    Ok(json(&check))
}

#[derive(Serialize)]
struct CycleRecord<'a> {
    game: &'a str,
    g1: StrategyAngles,
    g2: StrategyAngles,
    g1_prime: StrategyAngles,
    g2_prime: StrategyAngles,
    closure: StrategyAngles,
    closes_up_to_sign: bool,
    closes_in_angles: bool,
    average_payoffs: PayoffPair,
}

fn cmd_mixed(game: &str, g1: StrategyAngles) -> Out {
    let table = load(game)?;
    let cyc = mixed_cycle(&g1);
    let avg = cyc.average_payoff(&table)?;
    if !cyc.closes(1e-9) {
        return Err(Failure::Invariant(format!("cycle from {g1} ends at {}", cyc.closure)));
    }
    Ok(json(&CycleRecord {
        game: &table.name,
        g1: cyc.g1,
        g2: cyc.g2,
        g1_prime: cyc.g1_prime,
        g2_prime: cyc.g2_prime,
        closure: cyc.closure,
        closes_up_to_sign: true,
        closes_in_angles: cyc.closes_in_angles(1e-9),
        average_payoffs: avg,
    }))
}

#[derive(Serialize)]
struct QutritRecord {
    beta: f64,
    a: Complex,
    b: Complex,
    amplitudes_of_j00: Vec<Complex>,
    is_max_entangled: bool,
}

fn cmd_qutrit(beta: Option<f64>, find_max: bool) -> Out {
    let beta = match (beta, find_max) {
        (_, true) => max_entangling_beta(),
        (Some(b), false) if b.is_finite() => b,
        (Some(b), false) => return Err(Failure::Usage(format!("beta = {b} is not finite"))),
        (None, false) => return Err(Failure::Usage("give --beta or --find-max".into())),
    };
    let coeffs = qutrit_entangler_coeffs(beta);
    let state = entangled_vacuum(beta);
    Ok(json(&QutritRecord {
        beta,
        a: coeffs.a,
        b: coeffs.b,
        amplitudes_of_j00: state.amplitudes().as_slice().to_vec(),
        is_max_entangled: is_qutrit_max_entangled(&state, 1e-12),
    }))
}

fn cmd_verify(seed: u64, samples: usize, format: Format) -> Out {
    let report = verify::run(seed, samples);
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("name,passed,detail\n");
            for c in &report.checks {
                writeln!(out, "\"{}\",{},\"{}\"", c.name, c.passed, c.detail).expect("writing to a String");
            }
            out
        }
    };
    if report.all_passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Invariant(format!(
            "{} of {} checks failed",
            report.checks.iter().filter(|c| !c.passed).count(),
            report.checks.len()
        )))
    }
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Payoff {
            game,
            ent,
            p1,
            p2,
            format,
        } => cmd_payoff(&game, &ent, p1, p2, format),
        Command::SearchNe {
            game,
            ent,
            mesh,
            backend,
            format,
        } => cmd_search_ne(&game, &ent, &mesh, backend, format),
        Command::SweepBeta {
            game,
            entangler,
            beta_min,
            beta_max,
            beta_steps,
            mesh,
            backend,
            format,
        } => cmd_sweep(&game, entangler, beta_min, beta_max, beta_steps, &mesh, backend, format),
        Command::Bayes { mu, mesh, spec } => cmd_bayes(mu, &mesh, spec.as_deref()),
        Command::MixedDemo { game, p1 } => cmd_mixed(&game, p1),
        Command::QutritEntangler { beta, find_max } => cmd_qutrit(beta, find_max),
        Command::Verify { seed, samples, format } => cmd_verify(seed, samples, format),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on its own parse errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(1)
        }
    }
}
