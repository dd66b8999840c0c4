use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use orbcalc::bounds::{
    comparatively_small_bound, counting_lower_bound, flag_exceptional_factor, lower_bound_sixth, subadditive_threshold,
    upper_bound_equiv, upper_bound_orb, zeta, ExceptionalFactor, GroupData,
};
use orbcalc::compressionbody::{classify_exceptional, is_trivial, ExceptionalClass, Triviality};
use orbcalc::decomposition::{fundamental_identity, validate, Decomposition, IdentityCheck};
use orbcalc::harness::campaign::{identity_campaign, integrality_campaign, move_campaign};
use orbcalc::harness::enumerate::check_enumeration;
use orbcalc::harness::examples::{run_named_example, ExampleError, ExampleParams};
use orbcalc::harness::generator::FuzzConfig;
use orbcalc::moves::{replay, MoveDescriptor, ThinningSequence};
use orbcalc::{Rational, Weight};

#[derive(Parser, Debug)]
#[command(name = "orbcalc", version, about = "Exact invariants, moves and bounds for 3-orbifold decompositions")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a decomposition file.
    Validate { file: PathBuf },
    /// netX, netι, per-piece N and classifications.
    Invariants { file: PathBuf },
    /// Apply a move script to a decomposition and replay it.
    Moves {
        file: PathBuf,
        script: PathBuf,
        /// Write the recorded sequence here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Evaluate a bound formula.
    #[command(subcommand)]
    Bounds(Bound),
    /// Run a named worked example.
    Example {
        name: String,
        #[command(flatten)]
        params: ExampleArgs,
    },
    /// Seeded random campaigns.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Campaign::Identity)]
        campaign: Campaign,
        /// Accepted moves to collect in the move campaign.
        #[arg(long, default_value_t = 1000)]
        moves: usize,
        /// Full generator configuration as JSON; overrides seed and count.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
    },
    /// Exhaustively enumerate small compressionbodies and cross-check them.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        max_handles: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,inf")]
        weights: Vec<Weight>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Campaign {
    Identity,
    Moves,
    Integrality,
}

#[derive(Subcommand, Debug)]
enum Bound {
    /// Lower bound from `n` thick components.
    Counting {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        noncyclic: bool,
    },
    /// `n/6`.
    Sixth {
        #[arg(long)]
        n: u64,
    },
    /// Upper bound on x for a sum along `n_s` summing spheres.
    UpperOrb {
        #[arg(long, allow_hyphen_values = true)]
        x_factors: Rational,
        #[arg(long, allow_hyphen_values = true)]
        x_s: Rational,
        #[arg(long, default_value_t = 1)]
        n_s: u64,
        #[arg(long, default_value_t = 1)]
        c: i64,
    },
    /// Equivariant genus upper bound.
    UpperEquiv {
        #[arg(long, allow_hyphen_values = true)]
        g_factors: Rational,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        noncyclic: bool,
    },
    /// Bound when the summing sphere is comparatively small.
    Small {
        #[arg(long, allow_hyphen_values = true)]
        x_factors: Rational,
        #[arg(long, allow_hyphen_values = true)]
        x_s: Rational,
    },
    Zeta {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        w: Weight,
        #[arg(long)]
        n: u64,
    },
    /// Smallest weight making the tunnel bound subadditive.
    Threshold {
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        t2: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        b: u64,
    },
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    w: Option<Weight>,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<i64>,
    #[arg(long)]
    k: Option<Weight>,
    #[arg(long)]
    a: Option<Weight>,
    #[arg(long)]
    t1: Option<u64>,
    #[arg(long)]
    t2: Option<u64>,
    #[arg(long)]
    t_sum: Option<u64>,
    #[arg(long)]
    b_sum: Option<u64>,
}

impl ExampleArgs {
    fn params(&self) -> ExampleParams {
        let d = ExampleParams::default();
        ExampleParams {
            t: self.t.unwrap_or(d.t),
            w: self.w.unwrap_or(d.w),
            n: self.n.unwrap_or(d.n),
            q: self.q.unwrap_or(d.q),
            k: self.k.unwrap_or(d.k),
            a: self.a.unwrap_or(d.a),
            t1: self.t1.unwrap_or(d.t1),
            t2: self.t2.unwrap_or(d.t2),
            t_sum: self.t_sum.unwrap_or(d.t_sum),
            b_sum: self.b_sum.unwrap_or(d.b_sum),
        }
    }
}

/// Bad arguments that clap cannot catch on its own.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

/// What a subcommand produced: rendered output and whether it succeeded.
struct Outcome {
    text: String,
    ok: bool,
}

fn emit<T: Serialize>(json: bool, value: &T, text: String, ok: bool) -> Result<Outcome> {
    let text = if json { serde_json::to_string_pretty(value)? + "\n" } else { text };
    Ok(Outcome { text, ok })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct PieceInvariants {
    id: String,
    n: Rational,
    triviality: Triviality,
    class: ExceptionalClass,
}

#[derive(Serialize)]
struct Invariants {
    net_x: Rational,
    net_iota: i64,
    boundary_x: Rational,
    identity: IdentityCheck,
    pieces: Vec<PieceInvariants>,
    exceptional_factor: Option<ExceptionalFactor>,
}

fn invariants(d: &Decomposition, json: bool) -> Result<Outcome> {
    let report = validate(d);
    if !report.passed() {
        return emit(json, &report, format!("invalid: {}\n", report.summary()), false);
    }
    let identity = fundamental_identity(d)?;
    let mut pieces = Vec::new();
    for (id, p) in &d.pieces {
        let c = p.assemble()?;
        pieces.push(PieceInvariants {
            id: id.clone(),
            n: c.n_value(),
            triviality: is_trivial(&c),
            class: classify_exceptional(&c),
        });
    }
    let inv = Invariants {
        net_x: d.net_x_unchecked(),
        net_iota: d.net_iota_unchecked(),
        boundary_x: d.boundary().orb_char(),
        identity,
        pieces,
        exceptional_factor: flag_exceptional_factor(d),
    };
    let mut s = String::new();
    writeln!(s, "netX      {}", inv.net_x)?;
    writeln!(s, "netIota   {}", inv.net_iota)?;
    writeln!(s, "x(dM)     {}", inv.boundary_x)?;
    let verdict = if inv.identity.holds { "holds" } else { "FAILS" };
    writeln!(s, "identity  {} = {} ({verdict})", inv.identity.lhs, inv.identity.rhs)?;
    for p in &inv.pieces {
        writeln!(s, "piece {:<10} N = {:<8} {:?} {:?}", p.id, p.n.to_string(), p.triviality, p.class)?;
    }
    if let Some(f) = inv.exceptional_factor {
        writeln!(s, "exceptional factor shape: {f:?}")?;
    }
    let ok = inv.identity.holds;
    emit(json, &inv, s, ok)
}

fn moves(d: Decomposition, script: &[MoveDescriptor], out: Option<&Path>, json: bool) -> Result<Outcome> {
    let seq = match ThinningSequence::run(d, script) {
        Ok(seq) => seq,
        Err((step, e)) => {
            let msg = format!("move {step} failed: {e}");
            return emit(json, &serde_json::json!({ "error": msg }), msg + "\n", false);
        }
    };
    let replayed = replay(&seq);
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&seq)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    let mut s = String::new();
    writeln!(s, "{:<4} {:<18} {:>10} {:>8}", "step", "move", "dnetX", "dnetIota")?;
    for (i, r) in seq.records.iter().enumerate() {
        let kind = serde_json::to_value(r.kind)?.as_str().unwrap_or_default().to_string();
        writeln!(s, "{i:<4} {kind:<18} {:>10} {:>8}", r.delta_net_x.to_string(), r.delta_net_iota)?;
    }
    let final_x = seq.final_.thick().orb_char();
    writeln!(s, "total dnetX {}", seq.total_delta_net_x())?;
    writeln!(s, "final x(thick) {final_x}")?;
    writeln!(s, "final netX {}", seq.final_.net_x_unchecked())?;
    match &replayed {
        Ok(_) => writeln!(s, "replay ok")?,
        Err(e) => writeln!(s, "replay FAILED: {e}")?,
    }
    let value = serde_json::json!({
        "records": seq.records,
        "total_delta_net_x": seq.total_delta_net_x(),
        "final_thick_x": final_x,
        "final_net_x": seq.final_.net_x_unchecked(),
        "replay_ok": replayed.is_ok(),
    });
    emit(json, &value, s, replayed.is_ok())
}

fn bound(b: &Bound, json: bool) -> Result<Outcome> {
    let group = |order: u64, noncyclic: bool| GroupData::new(order, !noncyclic);
    let (name, value) = match b {
        Bound::Counting { n, order, noncyclic } => ("counting_lower_bound", counting_lower_bound(*n, &group(*order, *noncyclic)?)),
        Bound::Sixth { n } => ("lower_bound_sixth", lower_bound_sixth(*n)),
        Bound::UpperOrb { x_factors, x_s, n_s, c } => ("upper_bound_orb", upper_bound_orb(x_factors, x_s, *n_s, *c)),
        Bound::UpperEquiv { g_factors, n, order, noncyclic } => {
            ("upper_bound_equiv", upper_bound_equiv(g_factors, *n, &group(*order, *noncyclic)?))
        }
        Bound::Small { x_factors, x_s } => ("comparatively_small_bound", comparatively_small_bound(x_factors, x_s)),
        Bound::Zeta { t, w, n } => ("zeta", zeta(*t, *w, *n)),
        Bound::Threshold { t1, t2, t, b } => {
            let th = subadditive_threshold(*t1, *t2, *t, *b)?;
            let s = format!(
                "k                 {}\n2(t1 + t2 - b/k)  {}\n2t(K)             {}\n",
                th.k, th.factor_bound, th.sum_bound
            );
            return emit(json, &th, s, true);
        }
    };
    let value_json = serde_json::json!({ "bound": name, "value": value });
    emit(json, &value_json, format!("{name} = {value}\n"), true)
}

fn fuzz(cfg: FuzzConfig, campaign: Campaign, target: usize, json: bool) -> Result<Outcome> {
    match campaign {
        Campaign::Identity | Campaign::Integrality => {
            let r = match campaign {
                Campaign::Identity => identity_campaign(&cfg),
                _ => integrality_campaign(&cfg),
            };
            let mut s = format!(
                "{} cases, {} generator errors, {} failures\n",
                r.cases,
                r.generator_errors.len(),
                r.failures.len()
            );
            for f in r.generator_errors.iter().chain(&r.failures).take(20) {
                writeln!(s, "  {f}")?;
            }
            let ok = r.passed();
            emit(json, &r, s, ok)
        }
        Campaign::Moves => {
            let r = move_campaign(&cfg, target);
            let mut s = format!("{} cases, {} attempted, {} accepted\n", r.cases, r.attempted, r.accepted);
            for (k, n) in &r.by_kind {
                writeln!(s, "  {k:<18} {n}")?;
            }
            writeln!(s, "{} violations", r.violations.len())?;
            for v in r.violations.iter().take(20) {
                writeln!(s, "  {v}")?;
            }
            let ok = r.passed();
            emit(json, &r, s, ok)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let json = cli.json;
    match cli.command {
        Command::Validate { file } => {
            let d: Decomposition = read_json(&file)?;
            let r = validate(&d);
            let text = if r.passed() { "valid\n".to_string() } else { format!("invalid: {}\n", r.summary()) };
            let ok = r.passed();
            emit(json, &r, text, ok)
        }
        Command::Invariants { file } => invariants(&read_json(&file)?, json),
        Command::Moves { file, script, out } => {
            let d: Decomposition = read_json(&file)?;
            let script: Vec<MoveDescriptor> = read_json(&script)?;
            moves(d, &script, out.as_deref(), json)
        }
        Command::Bounds(b) => bound(&b, json),
        Command::Example { name, params } => {
            let r = run_named_example(&name, &params.params()).map_err(|e| match e {
                ExampleError::UnknownExample(_) => anyhow::Error::new(UsageError(e.to_string())),
                other => other.into(),
            })?;
            let ok = r.passed();
            emit(json, &r, r.to_string(), ok)
        }
        Command::Fuzz { seed, count, campaign, moves, config } => {
            let cfg = match config {
                Some(path) => read_json(&path)?,
                None => FuzzConfig { seed, count, ..Default::default() },
            };
            fuzz(cfg, campaign, moves, json)
        }
        Command::Enumerate { max_handles, weights } => {
            if max_handles == 0 || max_handles > 4 {
                return Err(UsageError(format!("--max-handles must be between 1 and 4, got {max_handles}")).into());
            }
            let r = check_enumeration(max_handles, &weights);
            let mut s = format!(
                "{} assemblies, {} with N < 0, {} closed with N = 0\n",
                r.cases, r.negative_n, r.zero_n_closed
            );
            for f in r.negative_not_trivial.iter().chain(&r.zero_unclassified).chain(&r.disagreements).take(20) {
                writeln!(s, "  {f}")?;
            }
            writeln!(s, "{}", if r.passed() { "oracle agrees" } else { "oracle DISAGREES" })?;
            let ok = r.passed();
            emit(json, &r, s, ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<UsageError>().is_some();
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
