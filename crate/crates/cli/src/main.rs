//! `qpe`: batch front end for the positive-evidence order library.
//!
//! Exit codes: 0 the predicate holds or the computation succeeded, 1 the
//! predicate fails, 2 invalid input, 3 marginal or inconclusive.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qpe_core::bayes::{
    fls_update, is_agreeing, reconstruct_effect, sequential_transitivity_demo, sequential_update, UpdateFamily,
};
use qpe_core::channel::{channel_max_divergence, channel_qpe_leq, entanglement_fidelity};
use qpe_core::divergence::{renyi_divergence, renyi_entropy};
use qpe_core::domain::{way_below_witness, WayBelowVerdict};
use qpe_core::io::{ChannelDocument, ChannelRepr, MatrixDocument, MatrixKind};
use qpe_core::oracle::{counterexample_suite, partial_trace_counterexample};
use qpe_core::orders::{classical_pe_leq, is_majorized_by};
use qpe_core::random::{random_channel, random_state, seeded};
use qpe_core::{lev_leq, primed_leq, qpe_leq, Alpha, Channel, DensityMatrix, Error, LogBase, OrderVerdict};
use qpe_core::{ProbabilityVector, ToleranceConfig};
use serde_json::json;

use report::{number, relation_name, verdict_json, verdict_report, Report, Status};

#[derive(Parser)]
#[command(name = "qpe", version, about = "Positive-evidence order, Bayesian updates and max-divergence tools")]
struct Cli {
    /// PSD slack, scaled by max(1, ||A||)
    #[arg(long, global = true, env = "QPE_DEFAULT_TOL")]
    tol: Option<f64>,
    /// Relative width for grouping eigenvalues into eigenspaces
    #[arg(long, global = true)]
    cluster: Option<f64>,
    /// Relative cutoff below which eigenvalues count as zero
    #[arg(long = "rank-cutoff", global = true)]
    rank_cutoff: Option<f64>,
    #[arg(long = "log-base", global = true, value_enum, default_value = "e")]
    log_base: BaseArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Order predicates between two states
    #[command(subcommand)]
    Order(OrderCmd),
    /// Sandwiched Rényi divergence D_alpha(A || B)
    Divergence {
        #[arg(long, default_value = "inf")]
        alpha: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Rényi entropy H_alpha(A)
    Entropy {
        #[arg(long, default_value = "1")]
        alpha: String,
        a: PathBuf,
    },
    #[command(subcommand)]
    Bayes(BayesCmd),
    #[command(subcommand)]
    Domain(DomainCmd),
    #[command(subcommand)]
    Channel(ChannelCmd),
    #[command(subcommand)]
    Demo(DemoCmd),
    #[command(subcommand)]
    Random(RandomCmd),
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Exit 0 when A is below B in the chosen relation
    Check {
        #[arg(long, value_enum, default_value = "qpe")]
        relation: RelationArg,
        a: PathBuf,
        b: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Qpe,
    Lev,
    Primed,
    Classical,
    /// A ≺ B
    Majorization,
}

impl RelationArg {
    fn name(self) -> &'static str {
        match self {
            RelationArg::Qpe => "qpe",
            RelationArg::Lev => "lev",
            RelationArg::Primed => "primed",
            RelationArg::Classical => "classical",
            RelationArg::Majorization => "majorization",
        }
    }
}

#[derive(Subcommand)]
enum BayesCmd {
    /// Posterior of PRIOR on observing EFFECT
    Update {
        #[arg(long, value_enum, default_value = "fls")]
        rule: RuleArg,
        prior: PathBuf,
        effect: PathBuf,
    },
    /// Agreeing effect carrying PRIOR to POSTERIOR under the FLS rule
    Effect { prior: PathBuf, posterior: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Fls,
    Seq,
}

#[derive(Subcommand)]
enum DomainCmd {
    /// Certificate for RHO way-below SIGMA
    Waybelow {
        rho: PathBuf,
        sigma: PathBuf,
        /// States already known to be way-below SIGMA
        #[arg(long)]
        certified: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Exit 0 when channel A is below channel B
    Order { a: PathBuf, b: PathBuf },
    /// D_inf(J(A) || J(B))
    Divergence { a: PathBuf, b: PathBuf },
    /// Largest entanglement fidelity of A
    Fidelity { a: PathBuf },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Replays the majorization and entropy counterexamples
    Counterexamples,
    /// Partial trace is not monotone
    PartialTrace {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
    },
    /// Two agreeing sequential updates no single one reproduces
    SequentialTransitivity {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        commuting: bool,
    },
}

#[derive(Subcommand)]
enum RandomCmd {
    State {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: Option<usize>,
    },
    Channel {
        #[arg(long = "in-dim")]
        in_dim: usize,
        #[arg(long = "out-dim")]
        out_dim: usize,
        #[arg(long = "kraus-rank", default_value_t = 1)]
        kraus_rank: usize,
        #[arg(long, value_enum, default_value = "choi")]
        repr: ReprArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    Choi,
    Kraus,
}

fn config(cli: &Cli) -> qpe_core::Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = cli.tol {
        cfg.psd_slack = t;
    }
    if let Some(c) = cli.cluster {
        cfg.cluster_width = c;
    }
    if let Some(r) = cli.rank_cutoff {
        cfg.rank_cutoff = r;
    }
    cfg.log_base = match cli.log_base {
        BaseArg::E => LogBase::Natural,
        BaseArg::Two => LogBase::Two,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read(path: &Path) -> qpe_core::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidDocument(format!("cannot read {}: {e}", path.display())))
}

fn matrix(path: &Path) -> qpe_core::Result<MatrixDocument> {
    MatrixDocument::parse(&read(path)?)
}

fn state(path: &Path, cfg: &ToleranceConfig) -> qpe_core::Result<DensityMatrix> {
    matrix(path)?.to_state(cfg)
}

fn vector(path: &Path) -> qpe_core::Result<ProbabilityVector> {
    matrix(path)?.to_probability_vector()
}

fn channel(path: &Path, cfg: &ToleranceConfig) -> qpe_core::Result<Channel> {
    ChannelDocument::parse(&read(path)?)?.to_channel(cfg)
}

fn state_doc(rho: &DensityMatrix) -> MatrixDocument {
    MatrixDocument::from_state(rho)
}

fn order_check(relation: RelationArg, a: &Path, b: &Path, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    let verdict = match relation {
        RelationArg::Qpe => qpe_leq(&state(a, cfg)?, &state(b, cfg)?, cfg)?,
        RelationArg::Lev => lev_leq(&state(a, cfg)?, &state(b, cfg)?, cfg)?,
        RelationArg::Primed => primed_leq(&state(a, cfg)?, &state(b, cfg)?, cfg)?,
        RelationArg::Classical => classical_pe_leq(&vector(a)?, &vector(b)?, cfg)?,
        RelationArg::Majorization => {
            let holds = is_majorized_by(vector(a)?.as_slice(), vector(b)?.as_slice())?;
            OrderVerdict::structural(holds, None)
        }
    };
    Ok(verdict_report(relation.name(), &verdict))
}

fn divergence(alpha: &str, a: &Path, b: &Path, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    let d = renyi_divergence(&state(a, cfg)?, &state(b, cfg)?, Alpha::parse(alpha)?, cfg)?;
    let json = serde_json::to_value(d)?;
    Ok(Report::new(json, format!("D_{alpha}(A||B) = {}", d.value), Status::Success))
}

fn entropy(alpha: &str, a: &Path, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    let parsed = Alpha::parse(alpha)?;
    let h = renyi_entropy(&state(a, cfg)?, parsed, cfg);
    let json = json!({ "alpha": parsed, "value": number(h), "base": cfg.log_base });
    Ok(Report::new(json, format!("H_{alpha}(A) = {h}"), Status::Success))
}

fn bayes(cmd: &BayesCmd, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    match cmd {
        BayesCmd::Update { rule, prior, effect } => {
            let rho = state(prior, cfg)?;
            let e = matrix(effect)?.to_effect(cfg)?;
            if !is_agreeing(&rho, &e, cfg)? {
                log_note("effect does not agree with the prior");
            }
            let post = match rule {
                RuleArg::Fls => fls_update(&rho, &e, cfg)?,
                RuleArg::Seq => sequential_update(&rho, &e, cfg)?,
            };
            Ok(Report::document(&state_doc(&post)))
        }
        BayesCmd::Effect { prior, posterior } => {
            let rho = state(prior, cfg)?;
            let e = reconstruct_effect(&rho, &state(posterior, cfg)?, cfg)?;
            Ok(Report::document(&MatrixDocument::from_hermitian(
                e.matrix(),
                Some(MatrixKind::Effect),
                vec![e.dim()],
            )))
        }
    }
}

fn log_note(msg: &str) {
    eprintln!("note: {msg}");
}

fn domain(cmd: &DomainCmd, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    let DomainCmd::Waybelow { rho, sigma, certified } = cmd;
    let kappas = certified.iter().map(|p| state(p, cfg)).collect::<qpe_core::Result<Vec<_>>>()?;
    let verdict = way_below_witness(&state(rho, cfg)?, &state(sigma, cfg)?, &kappas, cfg)?;
    let status = match verdict {
        WayBelowVerdict::CertifiedBelow { .. } => Status::Success,
        WayBelowVerdict::NotBelow { .. } => Status::Fails,
        WayBelowVerdict::Unknown => Status::Inconclusive,
    };
    let json = serde_json::to_value(verdict)?;
    let text = format!("{verdict:?}");
    Ok(Report::new(json, text, status))
}

fn channel_cmd(cmd: &ChannelCmd, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    match cmd {
        ChannelCmd::Order { a, b } => {
            let v = channel_qpe_leq(&channel(a, cfg)?, &channel(b, cfg)?, cfg)?;
            Ok(verdict_report("channel_qpe", &v))
        }
        ChannelCmd::Divergence { a, b } => {
            let d = channel_max_divergence(&channel(a, cfg)?, &channel(b, cfg)?, cfg)?;
            Ok(Report::new(
                serde_json::to_value(d)?,
                format!("D_inf(J(A)||J(B)) = {}", d.value),
                Status::Success,
            ))
        }
        ChannelCmd::Fidelity { a } => {
            let phi = channel(a, cfg)?;
            let f = entanglement_fidelity(&phi, cfg)?;
            let input = MatrixDocument::from_hermitian(
                f.optimal_input.matrix(),
                Some(MatrixKind::State),
                vec![phi.out_dim(), phi.in_dim()],
            );
            let json = json!({
                "value": f.value,
                "in_dim": phi.in_dim(),
                "out_dim": phi.out_dim(),
                "optimal_input": input,
            });
            Ok(Report::new(json, format!("||J(A)|| = {}", f.value), Status::Success))
        }
    }
}

fn demo(cmd: &DemoCmd, seed: u64, cfg: &ToleranceConfig) -> qpe_core::Result<Report> {
    match cmd {
        DemoCmd::Counterexamples => {
            let r = counterexample_suite(cfg)?;
            let m = &r.majorization;
            let e = &r.entropy;
            let reproduced = m.qpe == qpe_core::Relation::Holds
                && !m.x_majorized_by_y
                && !m.y_majorized_by_x
                && e.qpe == qpe_core::Relation::Holds
                && e.entropy_increases;
            let text = format!(
                "pair 1: qpe {}, x≺y {}, y≺x {}\npair 2: qpe {}, S(x) = {:.12}, S(y) = {:.12}",
                relation_name(m.qpe),
                m.x_majorized_by_y,
                m.y_majorized_by_x,
                relation_name(e.qpe),
                e.entropy_x,
                e.entropy_y
            );
            let status = if reproduced { Status::Success } else { Status::Fails };
            Ok(Report::new(serde_json::to_value(&r)?, text, status))
        }
        DemoCmd::PartialTrace { dim, t } => {
            let r = partial_trace_counterexample(*dim, *t, &mut seeded(seed), cfg)?;
            let json = json!({
                "n": dim,
                "t": t,
                "seed": seed,
                "certified": r.certified(),
                "upstairs": verdict_json("qpe", &r.upstairs),
                "reduced_entangled_gap": r.reduced_entangled_gap,
                "downstairs": verdict_json("qpe", &r.downstairs),
                "rho": state_doc(&r.rho),
                "reduced_rho": state_doc(&r.reduced_rho),
            });
            let text = format!(
                "rho ⊑ P: {}\n||tr2 P - bottom|| = {:e}\ntr2 rho ⊑ bottom: {}",
                relation_name(r.upstairs.relation),
                r.reduced_entangled_gap,
                relation_name(r.downstairs.relation)
            );
            let status = if r.certified() { Status::Success } else { Status::Fails };
            Ok(Report::new(json, text, status))
        }
        DemoCmd::SequentialTransitivity { dim, budget, commuting } => {
            let family = if *commuting { UpdateFamily::Commuting } else { UpdateFamily::Generic };
            let r = match sequential_transitivity_demo(*dim, *budget, family, &mut seeded(seed), cfg) {
                Err(Error::SearchBudgetExhausted(n)) => {
                    let json = json!({ "found": false, "budget": n });
                    return Ok(Report::new(json, format!("no witness in {n} trials"), Status::Inconclusive));
                }
                other => other?,
            };
            let effect = |e: &qpe_core::Effect| {
                MatrixDocument::from_hermitian(e.matrix(), Some(MatrixKind::Effect), vec![e.dim()])
            };
            let json = json!({
                "found": true,
                "overlap": r.overlap,
                "composable": r.composable,
                "residual": r.residual,
                "prior": state_doc(&r.prior),
                "first": effect(&r.first),
                "second": effect(&r.second),
                "posterior": state_doc(&r.posterior),
                "composed": effect(&r.composed),
            });
            let text = format!(
                "composable {}, top-space overlap {:e}, residual {:e}",
                r.composable, r.overlap, r.residual
            );
            Ok(Report::new(json, text, Status::Success))
        }
    }
}

fn random(cmd: &RandomCmd, seed: u64) -> qpe_core::Result<Report> {
    let mut rng = seeded(seed);
    match cmd {
        RandomCmd::State { dim, rank } => {
            let rho = random_state(*dim, rank.unwrap_or(*dim), &mut rng)?;
            Ok(Report::document(&state_doc(&rho)))
        }
        RandomCmd::Channel {
            in_dim,
            out_dim,
            kraus_rank,
            repr,
        } => {
            let ch = random_channel(*in_dim, *out_dim, *kraus_rank, &mut rng)?;
            let repr = match repr {
                ReprArg::Choi => ChannelRepr::Choi,
                ReprArg::Kraus => ChannelRepr::Kraus,
            };
            let doc = ChannelDocument::from_channel(&ch, repr);
            let text = format!(
                "channel {in_dim} -> {out_dim}, Choi state:\n{}",
                report::render_matrix(ch.choi().matrix().as_matrix())
            );
            Ok(Report::new(serde_json::to_value(doc)?, text, Status::Success))
        }
    }
}

fn run(cli: &Cli) -> qpe_core::Result<Report> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Order(OrderCmd::Check { relation, a, b }) => order_check(*relation, a, b, &cfg),
        Command::Divergence { alpha, a, b } => divergence(alpha, a, b, &cfg),
        Command::Entropy { alpha, a } => entropy(alpha, a, &cfg),
        Command::Bayes(cmd) => bayes(cmd, &cfg),
        Command::Domain(cmd) => domain(cmd, &cfg),
        Command::Channel(cmd) => channel_cmd(cmd, &cfg),
        Command::Demo(cmd) => demo(cmd, cli.seed, &cfg),
        Command::Random(cmd) => random(cmd, cli.seed),
    }
}

/// Errors that answer the question negatively rather than reject the input.
fn failure_status(e: &Error) -> Option<Status> {
    match e {
        Error::NotBelow | Error::SupportViolation => Some(Status::Fails),
        Error::RouteMismatch(_) | Error::SearchBudgetExhausted(_) => Some(Status::Inconclusive),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => match failure_status(&e) {
            Some(status) => Report::new(json!({ "error": e.to_string() }), e.to_string(), status),
            None => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize")),
        Format::Text => println!("{}", report.text),
    }
    ExitCode::from(report.status.code() as u8)
}
