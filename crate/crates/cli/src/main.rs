//! `dynnet` command-line frontend.
//!
//! Exit codes: 0 success or property holds, 1 infeasible or violated, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dynnet::adversary::{
    gen_expander_sequence, gen_good_sequence, gen_stable_majinf_sequence, random_sequence, scenario, validate_good,
    validate_majinf, validate_sigma, validate_stable, FeasibilityReport, GoodStyle, MajinfVariant, ScenarioParams,
    DEFAULT_SIGMA_CAP,
};
use dynnet::dyngraph::{
    enumerate_vsrcs, is_d_bounded, is_h_network_bounded, GraphSequence, InfluenceTable, SeqParams,
};
use dynnet::par::{self, Exec};
use dynnet::sim::{
    check_agreement, check_lock_provenance, check_termination, check_validity, run_batch, Algorithm, Job,
    PropertyReport, Trace,
};

#[derive(Parser)]
#[command(name = "dynnet", version, about = "Directed dynamic networks: generate, validate, simulate, check")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph sequence.
    Gen(GenArgs),
    /// Check a graph sequence against an adversary.
    Validate(ValidateArgs),
    /// Simulate an algorithm on one or more sequences.
    Run(RunArgs),
    /// Evaluate a property on a trace.
    Check(CheckArgs),
    /// Print VSRCs, boundedness and the majority-influence relation.
    Analyze(AnalyzeArgs),
    /// Materialize a named construction.
    Scenario(ScenarioArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Good,
    StableMajinf,
    Expander,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Random,
    Expander,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Partition,
    MergeChain,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    adversary: GenKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    /// Stability window length.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long = "D")]
    big_d: Option<u32>,
    #[arg(long)]
    rst: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "random")]
    style: Style,
    #[arg(long, value_enum, default_value = "partition")]
    variant: Variant,
    /// Prefix length for `random` and `expander`.
    #[arg(long)]
    rounds: Option<u32>,
    /// Edge probability for `random`.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Root size for `expander` (default n).
    #[arg(long)]
    root_size: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValidateKind {
    Good,
    Stable,
    Majinf,
    Sigma,
}

/// Parameters omitted on the command line fall back to the file's metadata.
#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    adversary: ValidateKind,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long = "D")]
    big_d: Option<u32>,
    #[arg(long = "H", alias = "h")]
    big_h: Option<u32>,
    #[arg(long)]
    rst: Option<u32>,
    /// Search budget for `sigma`.
    #[arg(long, default_value_t = DEFAULT_SIGMA_CAP)]
    cap: u64,
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoKind {
    Consensus,
    SetAgreement,
    Kset,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algo: AlgoKind,
    /// Comma-separated inputs, one per process (default: the process ids).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    inputs: Option<Vec<i64>>,
    #[arg(long = "D")]
    big_d: Option<u32>,
    #[arg(long = "H", alias = "h")]
    big_h: Option<u32>,
    /// Output trace file; a directory when several sequences are given.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Worker threads for several sequences (0 = all cores, 1 = sequential).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Agreement,
    Validity,
    Termination,
    LockProvenance,
    All,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    property: Property,
    /// Allowed number of distinct decisions.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Latest allowed decision round.
    #[arg(long)]
    bound: Option<u32>,
    /// Sequence the trace was run on (needed for lock provenance).
    #[arg(long)]
    seq: Option<PathBuf>,
    #[arg(long = "D")]
    big_d: Option<u32>,
    #[arg(long = "H", alias = "h")]
    big_h: Option<u32>,
    #[arg(long)]
    json: bool,
    trace: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Bound to test D-boundedness with and to build the influence relation.
    #[arg(long = "D")]
    big_d: Option<u32>,
    /// Bound to test network boundedness with.
    #[arg(long = "H", alias = "h")]
    big_h: Option<u32>,
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rounds: Option<u32>,
    #[arg(long)]
    kappa: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rst: Option<u32>,
    #[arg(long = "H", alias = "h")]
    big_h: Option<u32>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    phase_len: Option<u32>,
    #[arg(long)]
    center: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` maps to exit code 1.
fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Validate(a) => validate(a),
        Cmd::Run(a) => run(a),
        Cmd::Check(a) => check(a),
        Cmd::Analyze(a) => analyze(a),
        Cmd::Scenario(a) => materialize(a),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("missing --{flag}"))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_seq(path: &Path) -> Result<GraphSequence> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GraphSequence::from_json(&s).with_context(|| format!("parsing {}", path.display()))
}

fn load_trace(path: &Path) -> Result<Trace> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Trace::from_json(&s).with_context(|| format!("parsing {}", path.display()))
}

fn gen(a: GenArgs) -> Result<bool> {
    let seq = match a.adversary {
        GenKind::Good => {
            let style = match a.style {
                Style::Random => GoodStyle::Random,
                Style::Expander => GoodStyle::Expander,
            };
            gen_good_sequence(a.n, need(a.d, "d")?, need(a.rst, "rst")?, a.seed, style)?
        }
        GenKind::StableMajinf => {
            let variant = match a.variant {
                Variant::Partition => MajinfVariant::Partition,
                Variant::MergeChain => MajinfVariant::MergeChain,
            };
            let big_d = a.big_d.unwrap_or(a.n as u32 - 1);
            gen_stable_majinf_sequence(a.n, need(a.k, "k")?, big_d, need(a.rst, "rst")?, a.seed, variant)?
        }
        GenKind::Expander => gen_expander_sequence(
            a.n,
            a.root_size.unwrap_or(a.n),
            a.alpha.unwrap_or(0.0),
            a.rounds.unwrap_or(2 * a.n as u32),
            a.seed,
        )?,
        GenKind::Random => random_sequence(a.n, need(a.rounds, "rounds")?, a.p, a.seed)?,
    };
    emit(&seq.to_json()?, a.out.as_deref())?;
    Ok(true)
}

fn validate(a: ValidateArgs) -> Result<bool> {
    let seq = load_seq(&a.file)?;
    let meta: SeqParams = seq.metadata.as_ref().map(|m| m.params.clone()).unwrap_or_default();
    let k = || need(a.k.or(meta.k), "k");
    let d = || need(a.d.or(meta.d), "d");
    let big_d = || need(a.big_d.or(meta.big_d), "D");
    let big_h = || need(a.big_h.or(meta.big_h), "H");
    let rst = || need(a.rst.or(meta.r_st), "rst");
    let report: FeasibilityReport = match a.adversary {
        ValidateKind::Good => validate_good(&seq, d()?, big_h()?, rst()?)?,
        ValidateKind::Stable => validate_stable(&seq, k()?, d()?, big_d()?, big_h()?, rst()?)?,
        ValidateKind::Majinf => validate_majinf(&seq, k()?, big_d()?)?,
        ValidateKind::Sigma => validate_sigma(&seq, a.cap)?,
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{report}");
    }
    Ok(report.feasible)
}

fn run(a: RunArgs) -> Result<bool> {
    let algorithm = match a.algo {
        AlgoKind::Consensus => Algorithm::Consensus { d: need(a.big_d, "D")?, h: need(a.big_h, "H")? },
        AlgoKind::SetAgreement => Algorithm::SetAgreement,
        AlgoKind::Kset => Algorithm::KSet { d: need(a.big_d, "D")? },
    };
    let mut jobs = Vec::with_capacity(a.files.len());
    for f in &a.files {
        let seq = load_seq(f)?;
        let inputs = match &a.inputs {
            Some(v) => v.clone(),
            None => (1..=seq.n() as i64).collect(),
        };
        jobs.push(Job { seq, algorithm, inputs });
    }
    let exec = if a.jobs == 1 { Exec::Sequential } else { Exec::Parallel };
    let traces = par::with_jobs(a.jobs, || run_batch(exec, &jobs));
    let single = a.files.len() == 1;
    if !single {
        if let Some(dir) = &a.trace {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    for (f, t) in a.files.iter().zip(traces) {
        let t = t.with_context(|| format!("simulating {}", f.display()))?;
        let json = t.to_json()?;
        match (&a.trace, single) {
            (Some(p), true) => emit(&json, Some(p))?,
            (Some(dir), false) => {
                let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "seq".into());
                emit(&json, Some(&dir.join(format!("{stem}.trace.json"))))?;
            }
            (None, _) => {
                let vals: Vec<String> = t.decisions.iter().map(|d| format!("{}@{}={}", d.process, d.round, d.value)).collect();
                println!("{}: {:?} {}", f.display(), t.outcome, vals.join(" "));
            }
        }
    }
    Ok(true)
}

fn check(a: CheckArgs) -> Result<bool> {
    let trace = load_trace(&a.trace)?;
    let mut reports: Vec<PropertyReport> = Vec::new();
    let want = |p: Property| a.property == p || a.property == Property::All;
    if want(Property::Agreement) {
        reports.push(check_agreement(&trace, a.k));
    }
    if want(Property::Validity) {
        reports.push(check_validity(&trace));
    }
    if want(Property::Termination) {
        reports.push(check_termination(&trace, a.bound));
    }
    let is_consensus = matches!(trace.params.algorithm, Algorithm::Consensus { .. });
    if a.property == Property::LockProvenance || a.property == Property::All && is_consensus && a.seq.is_some() {
        let seq = load_seq(&need(a.seq.clone(), "seq")?)?;
        let (d, h) = match (trace.params.algorithm, a.big_d, a.big_h) {
            (_, Some(d), Some(h)) => (d, h),
            (Algorithm::Consensus { d, h }, dd, hh) => (dd.unwrap_or(d), hh.unwrap_or(h)),
            _ => bail!("lock provenance needs a consensus trace"),
        };
        reports.push(check_lock_provenance(&trace, &seq, d, h)?);
    }
    if a.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            println!("{r}");
        }
    }
    Ok(reports.iter().all(|r| r.holds))
}

fn analyze(a: AnalyzeArgs) -> Result<bool> {
    let seq = load_seq(&a.file)?;
    let vsrcs = enumerate_vsrcs(&seq);
    let d_bounded: Option<Vec<bool>> = a.big_d.map(|d| vsrcs.iter().map(|v| is_d_bounded(&seq, v, d)).collect());
    let h_bounded: Option<Vec<bool>> = match a.big_h {
        Some(h) => Some(vsrcs.iter().map(|v| is_h_network_bounded(&seq, &[*v], h)).collect::<dynnet::Result<_>>()?),
        None => None,
    };
    let relation = a.big_d.map(|d| {
        let table = InfluenceTable::new(&seq, &vsrcs, d);
        let pairs: Vec<_> = table.majority_relation().into_iter().map(|(i, j)| (table.vsrcs[i], table.vsrcs[j])).collect();
        pairs
    });
    if a.json {
        let rows: Vec<serde_json::Value> = vsrcs
            .iter()
            .enumerate()
            .map(|(i, v)| {
                serde_json::json!({
                    "members": v.members,
                    "interval": v.interval,
                    "d_bounded": d_bounded.as_ref().map(|b| b[i]),
                    "h_network_bounded": h_bounded.as_ref().map(|b| b[i]),
                })
            })
            .collect();
        let rel: Option<Vec<serde_json::Value>> = relation.as_ref().map(|r| {
            r.iter().map(|(c, s)| serde_json::json!({ "from": c, "to": s })).collect()
        });
        println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "vsrcs": rows, "majority_influence": rel }))?);
        return Ok(true);
    }
    println!("{} rounds, n = {}, {} VSRCs", seq.len(), seq.n(), vsrcs.len());
    for (i, v) in vsrcs.iter().enumerate() {
        let mut line = format!("  {v} len {}", v.len());
        if let (Some(b), Some(d)) = (&d_bounded, a.big_d) {
            line += &format!(" {}-bounded={}", d, b[i]);
        }
        if let (Some(b), Some(h)) = (&h_bounded, a.big_h) {
            line += &format!(" {}-network-bounded={}", h, b[i]);
        }
        println!("{line}");
    }
    if let (Some(rel), Some(d)) = (&relation, a.big_d) {
        println!("majority influence among VSRCs of length >= {}:", 2 * d + 1);
        for (c, s) in rel {
            println!("  {c} -> {s}");
        }
    }
    Ok(true)
}

fn materialize(a: ScenarioArgs) -> Result<bool> {
    let params = ScenarioParams {
        n: a.n,
        rounds: a.rounds,
        kappa: a.kappa,
        t: a.t,
        k: a.k,
        r_st: a.rst,
        h: a.big_h,
        pattern: a.pattern,
        phase_len: a.phase_len,
        center: a.center,
    };
    let seq = scenario(&a.name, &params)?;
    emit(&seq.to_json()?, a.out.as_deref())?;
    Ok(true)
}
