//! Command-line surface: build, verify, dilate, search, classify and
//! bound every artifact of the toolkit, with seeded determinism and JSON
//! payloads on every path. Exit codes: 0 pass, 1 failing verdict,
//! 2 parse/dimension/internal errors (with a machine-readable object).

use clap::{Args, Parser, Subcommand};
use qns_core::colouring::{
    kd2_generators, lovasz_theta, orth_rep_search, rank_bounds, OrthRepOptions,
};
use qns_core::correlations::{
    sample_brown_rep, sample_matrix_unit_family, sample_semiclassical_som, MirrorGameSpec,
    QnsCorrelation,
};
use qns_core::dilation::dilate_semiclassical;
use qns_core::games::{
    check_perfect_strategy_par, colouring_game, concurrency_game, homomorphism_game,
    is_concurrent_game, is_mirror, is_synchronous, Rule, SupportRuleGame,
};
use qns_core::json::{
    CorrelationJson, DilationJson, GameJson, GraphJson, MatrixJson, SomJson, SubspaceJson,
};
use qns_core::quantum_graphs::SymmetricSkewSubspace;
use qns_core::{CVec, Graph, SeedRng};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "qns", about = "Quantum non-local games toolkit", version)]
struct Cli {
    /// Seed controlling all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Verification tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads for rule batches.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a strategy file against a game file.
    Verify {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        game: PathBuf,
    },
    /// Construct strategies and games.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Dilate a semi-classical stochastic operator matrix.
    Dilate {
        #[arg(long)]
        som: PathBuf,
    },
    /// Search for an orthogonal representation of a graph.
    Search {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
    /// Lovász theta and the derived rank bounds.
    Theta {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Classify a game: synchronous, mirror, concurrent.
    Classify {
        #[arg(long)]
        game: PathBuf,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// Tracial QNS strategy of a Haar-random block unitary.
    Brown(BrownArgs),
    /// Tracial CQNS strategy of a Haar-random matrix unit family.
    Mus(MusArgs),
    /// The K_{d²} strategy with d answers.
    Kd2 {
        #[arg(long)]
        d: usize,
    },
    /// Mirror strategy of a seeded consistent spec.
    Mirror(MusArgs),
    /// Local strategy from an orthogonal representation found by search.
    LocalOrthrep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
    /// Quantum strategy from a pair of sampled semi-classical matrices.
    SomPair(SomPairArgs),
    /// The colouring game of a graph.
    ColouringGame {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = false)]
        relaxed: bool,
    },
    /// The concurrency game.
    ConcurrencyGame {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        a: usize,
    },
    /// The quantum graph homomorphism game of two subspace files.
    HomomorphismGame {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
    },
    /// The rank-one mirror game matching `build mirror` at the same seed.
    MirrorGame(MusArgs),
}

#[derive(Args)]
struct BrownArgs {
    #[arg(long)]
    x: usize,
    #[arg(long, default_value_t = 1)]
    aux: usize,
}

#[derive(Args)]
struct MusArgs {
    #[arg(long)]
    x: usize,
    #[arg(long)]
    a: usize,
    #[arg(long, default_value_t = 1)]
    aux: usize,
}

#[derive(Args)]
struct SomPairArgs {
    #[arg(long)]
    x: usize,
    #[arg(long)]
    y: usize,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long, default_value_t = 1)]
    aux: usize,
}

#[derive(Serialize)]
struct ErrorJson {
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct ChannelJson {
    ok: bool,
    min_choi_eigenvalue: f64,
    tp_deviation: f64,
}

#[derive(Serialize)]
struct NsJson {
    ok: bool,
    max_violation: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    verdict: bool,
    max_violation: f64,
    worst_rule: Option<usize>,
    violations: Vec<f64>,
    channel: ChannelJson,
    no_signalling: NsJson,
}

#[derive(Serialize)]
struct ClassifyReport {
    synchronous: Option<bool>,
    mirror: Option<bool>,
    mirror_f: Option<Vec<usize>>,
    mirror_g: Option<Vec<usize>>,
    concurrent: bool,
}

#[derive(Serialize)]
struct SearchReport {
    found: bool,
    k: usize,
    objective: Option<f64>,
    vectors: Option<Vec<MatrixJson>>,
}

#[derive(Serialize)]
struct ThetaReport {
    theta: f64,
    theta_complement: f64,
    xi_q_lower: f64,
    xi_cstar_lower: f64,
    residual: f64,
    converged: bool,
}

#[derive(Serialize)]
struct DilateReport {
    compression_error: f64,
    dilation: DilationJson,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            let payload = ErrorJson {
                error: ErrorBody {
                    kind: error_kind(&err),
                    message: err.to_string(),
                },
            };
            let text = serde_json::to_string_pretty(&payload).expect("error serializes");
            if emit(&cli.out, &text).is_err() {
                eprintln!("{text}");
            }
            eprintln!("error: {err}");
            2
        }
    }
}

fn error_kind(err: &qns_core::Error) -> &'static str {
    use qns_core::Error::*;
    match err {
        DimensionMismatch { .. } => "dimension-mismatch",
        InvalidArgument(_) => "invalid-argument",
        NotPsd { .. } => "not-psd",
        InvariantViolation(_) => "invariant-violation",
        UndecidableWithoutWitness => "undecidable-without-witness",
        NotHomomorphism { .. } => "not-homomorphism",
        NotGraphHomomorphism { .. } => "not-graph-homomorphism",
        NotAChannel(_) => "not-a-channel",
        RankBookkeeping(_) => "rank-bookkeeping",
        Json(_) => "json",
        Io(_) => "io",
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> qns_core::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> qns_core::Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_graph(path: &Path) -> qns_core::Result<Graph> {
    let j: GraphJson = read_json(path)?;
    Graph::try_from(&j)
}

fn load_game(path: &Path) -> qns_core::Result<SupportRuleGame> {
    let j: GameJson = read_json(path)?;
    SupportRuleGame::try_from(&j)
}

fn load_strategy(path: &Path) -> qns_core::Result<QnsCorrelation> {
    let j: CorrelationJson = read_json(path)?;
    QnsCorrelation::try_from(&j)
}

/// Channel/NS gate applied to every built strategy before emission.
fn gate_strategy(corr: &QnsCorrelation, tol: f64) -> qns_core::Result<()> {
    let ch = corr.channel_report(tol.max(1e-9));
    if !ch.ok {
        return Err(qns_core::Error::NotAChannel(format!(
            "built strategy fails the channel check (min eig {:.3e}, tp dev {:.3e})",
            ch.min_choi_eigenvalue, ch.tp_deviation
        )));
    }
    let ns = corr.ns_report(tol.max(1e-9));
    if !ns.ok {
        return Err(qns_core::Error::NotAChannel(format!(
            "built strategy signals (violation {:.3e})",
            ns.max_violation
        )));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> qns_core::Result<i32> {
    match &cli.cmd {
        Cmd::Verify { strategy, game } => {
            let corr = load_strategy(strategy)?;
            let game = load_game(game)?;
            let ch = corr.channel_report(cli.tol.max(1e-9));
            let ns = corr.ns_report(cli.tol.max(1e-9));
            let (verdict, max_violation, worst_rule, violations) = if ch.ok {
                let report = check_perfect_strategy_par(&corr, &game, cli.tol, cli.threads)?;
                (
                    report.verdict && ns.ok,
                    report.max_violation,
                    report.worst_rule,
                    report.violations,
                )
            } else {
                (false, f64::INFINITY, None, vec![])
            };
            let report = VerifyReport {
                verdict,
                max_violation,
                worst_rule,
                violations,
                channel: ChannelJson {
                    ok: ch.ok,
                    min_choi_eigenvalue: ch.min_choi_eigenvalue,
                    tp_deviation: ch.tp_deviation,
                },
                no_signalling: NsJson {
                    ok: ns.ok,
                    max_violation: ns.max_violation,
                },
            };
            emit(&cli.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(if report.verdict { 0 } else { 1 })
        }
        Cmd::Build { kind } => {
            let text = build_payload(kind, cli)?;
            emit(&cli.out, &text)?;
            Ok(0)
        }
        Cmd::Dilate { som } => {
            let j: SomJson = read_json(som)?;
            let input = qns_core::correlations::StochasticOperatorMatrix::try_from(&j)?;
            let result = dilate_semiclassical(&input)?;
            let report = DilateReport {
                compression_error: result.compression_error(&input),
                dilation: DilationJson::from(&result),
            };
            emit(&cli.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
        Cmd::Search { graph, k, restarts } => {
            if *k == 0 {
                return Err(qns_core::Error::InvalidArgument(
                    "search dimension k must be at least 1".into(),
                ));
            }
            let g = load_graph(graph)?;
            let opts = OrthRepOptions {
                restarts: *restarts,
                ..OrthRepOptions::default()
            };
            let found = orth_rep_search(&g, *k, cli.seed, opts);
            let report = match found {
                Some(vectors) => {
                    let objective: f64 = g
                        .edges
                        .iter()
                        .map(|&(u, v)| vectors[u].inner(&vectors[v]).norm_sqr())
                        .sum();
                    SearchReport {
                        found: true,
                        k: *k,
                        objective: Some(objective),
                        vectors: Some(vectors.iter().map(MatrixJson::from).collect()),
                    }
                }
                None => SearchReport {
                    found: false,
                    k: *k,
                    objective: None,
                    vectors: None,
                },
            };
            emit(&cli.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
        Cmd::Theta { graph } => {
            let g = load_graph(graph)?;
            let theta = lovasz_theta(&g, 1e-9)?;
            let bounds = rank_bounds(&g, 1e-9)?;
            let report = ThetaReport {
                theta: bounds.theta,
                theta_complement: bounds.theta_complement,
                xi_q_lower: bounds.xi_q_lower,
                xi_cstar_lower: bounds.xi_cstar_lower,
                residual: theta.residual,
                converged: theta.converged,
            };
            emit(&cli.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
        Cmd::Classify { game } => {
            let g = load_game(game)?;
            let (synchronous, mirror, mirror_f, mirror_g) =
                if g.classical_inputs && g.dims.x == g.dims.y && g.dims.a == g.dims.b {
                    let sync = is_synchronous(&g)?;
                    let (m, maps) = is_mirror(&g)?;
                    let (f, gg) = match maps {
                        Some((f, gg)) => (Some(f), Some(gg)),
                        None => (None, None),
                    };
                    (Some(sync), Some(m), f, gg)
                } else {
                    (None, None, None, None)
                };
            let report = ClassifyReport {
                synchronous,
                mirror,
                mirror_f,
                mirror_g,
                concurrent: is_concurrent_game(&g)?,
            };
            emit(&cli.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
    }
}

fn build_payload(kind: &BuildKind, cli: &Cli) -> qns_core::Result<String> {
    match kind {
        BuildKind::Brown(args) => {
            let rep = sample_brown_rep(args.x, args.aux, cli.seed);
            let corr = QnsCorrelation::tracial_from_brown_rep(&rep)?;
            gate_strategy(&corr, cli.tol)?;
            Ok(serde_json::to_string_pretty(&CorrelationJson::from(&corr))?)
        }
        BuildKind::Mus(args) => {
            let fam = sample_matrix_unit_family(args.x, args.a, args.aux, cli.seed);
            let corr = QnsCorrelation::tracial_cqns_from_mus(&fam)?;
            gate_strategy(&corr, cli.tol)?;
            Ok(serde_json::to_string_pretty(&CorrelationJson::from(&corr))?)
        }
        BuildKind::Kd2 { d } => {
            let rep = kd2_generators(*d)?;
            let corr = QnsCorrelation::tracial_cqns_from_mus(&rep.rep)?;
            gate_strategy(&corr, cli.tol)?;
            Ok(serde_json::to_string_pretty(&CorrelationJson::from(&corr))?)
        }
        BuildKind::Mirror(args) => {
            let spec = MirrorGameSpec::sampled(args.x, args.a, args.aux, cli.seed);
            let corr = spec.strategy()?;
            gate_strategy(&corr, cli.tol)?;
            Ok(serde_json::to_string_pretty(&CorrelationJson::from(&corr))?)
        }
        BuildKind::LocalOrthrep { graph, k, restarts } => {
            if *k == 0 {
                return Err(qns_core::Error::InvalidArgument(
                    "search dimension k must be at least 1".into(),
                ));
            }
            let g = load_graph(graph)?;
            let opts = OrthRepOptions {
                restarts: *restarts,
                ..OrthRepOptions::default()
            };
            let vectors = orth_rep_search(&g, *k, cli.seed, opts).ok_or_else(|| {
                qns_core::Error::InvalidArgument(format!(
                    "no orthogonal representation found in dimension {k}"
                ))
            })?;
            let corr = QnsCorrelation::local_from_orthogonal_rep(&vectors)?;
            gate_strategy(&corr, cli.tol)?;
            Ok(serde_json::to_string_pretty(&CorrelationJson::from(&corr))?)
        }
        BuildKind::SomPair(args) => {
            let e = sample_semiclassical_som(args.x, args.a, args.aux, cli.seed);
            let f = sample_semiclassical_som(args.y, args.b, args.aux, cli.seed ^ 0x5151);
            let mut rng = SeedRng::new(cli.seed ^ 0xA0A0);
            let xi: CVec = rng.unit_vector(args.aux * args.aux);
            let corr = QnsCorrelation::from_som_pair(&e, &f, &xi)?;
            gate_strategy(&corr, cli.tol)?;
            Ok(serde_json::to_string_pretty(&CorrelationJson::from(&corr))?)
        }
        BuildKind::ColouringGame { graph, a, relaxed } => {
            let g = load_graph(graph)?;
            let game = colouring_game(&g, *a, *relaxed)?;
            Ok(serde_json::to_string_pretty(&GameJson::from(&game))?)
        }
        BuildKind::ConcurrencyGame { x, a } => {
            let game = concurrency_game(*x, *a);
            Ok(serde_json::to_string_pretty(&GameJson::from(&game))?)
        }
        BuildKind::HomomorphismGame { u, v } => {
            let uj: SubspaceJson = read_json(u)?;
            let vj: SubspaceJson = read_json(v)?;
            let us = SymmetricSkewSubspace::try_from(&uj)?;
            let vs = SymmetricSkewSubspace::try_from(&vj)?;
            let game = homomorphism_game(&us, &vs)?;
            Ok(serde_json::to_string_pretty(&GameJson::from(&game))?)
        }
        BuildKind::MirrorGame(args) => {
            let spec = MirrorGameSpec::sampled(args.x, args.a, args.aux, cli.seed);
            let rules = spec
                .game_rules()?
                .into_iter()
                .map(|(q, r)| Rule { q, r })
                .collect();
            let dims = qns_core::correlations::GameDims::square(args.x, args.a);
            let game = SupportRuleGame::new(dims, rules, true)?;
            Ok(serde_json::to_string_pretty(&GameJson::from(&game))?)
        }
    }
}
