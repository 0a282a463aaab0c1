//! `asymcenter`: asymptotic centers and radii from the command line.
//!
//! Exit codes: 0 success, 1 property violation, 2 invalid input, 3 sequence
//! kind does not fit the requested space.

mod campaigns;
mod compute;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asymcenter::io::parse_instance;
use asymcenter::{rational, RepresentableSeq};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use campaigns::Campaign;
use report::{compute_error, emit, Failure, Report};

#[derive(Parser)]
#[command(name = "asymcenter", version, about = "Asymptotic centers and radii of eventually periodic sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Sup,
    Euclid,
    C0,
    C,
    Linf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Sup,
    Euclid,
    L1,
}

impl NormArg {
    pub fn name(self) -> &'static str {
        match self {
            NormArg::Sup => "sup",
            NormArg::Euclid => "euclid",
            NormArg::L1 => "l1",
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write the JSON report to this path (`-` for stdout instead of the table).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(short, long, value_name = "FILE")]
    input: PathBuf,
    /// Model to read the sequences in; defaults to each sequence's own kind.
    #[arg(long, value_enum)]
    space: Option<Space>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Asymptotic radius, with the oracle value and their difference.
    Radius(InstanceArgs),
    /// Center set and canonical selector.
    Center(InstanceArgs),
    /// Envelope functions (sup, c0) or the Lim quantities (c, linf).
    Envelope(InstanceArgs),
    /// Tail pseudometric between two sequences.
    Distance {
        /// File holding the first sequence (or both, if B is omitted).
        a: PathBuf,
        b: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "sup")]
        norm: NormArg,
        #[command(flatten)]
        out: Output,
    },
    /// Compare closed forms with the oracles on random instances.
    Crosscheck {
        #[arg(long, value_enum)]
        space: Space,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
    /// Run a property suite on random instances.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value = "1")]
        delta: String,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
    /// Exploratory searches.
    Fuzz {
        #[command(subcommand)]
        target: FuzzTarget,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Holder,
    BpSets,
    Cac,
    LimIdentities,
    Axioms,
}

#[derive(Subcommand)]
enum FuzzTarget {
    /// Look for pairs with d > 0 whose centers and radii agree under every
    /// sampled norm.
    Conjecture {
        #[arg(long, default_value_t = 4)]
        norm_family_size: usize,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
}

fn read_instance(path: &Path) -> Result<(Vec<RepresentableSeq>, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Schema(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Schema(format!("{} is not UTF-8", path.display())))?;
    let seqs = parse_instance(&text).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))?;
    Ok((seqs, report::digest(&bytes)))
}

type Op = fn(&RepresentableSeq, Space, &mut Report, &str) -> Result<Value, asymcenter::Error>;

fn per_sequence(name: &str, args: &InstanceArgs, op: Op) -> Result<Report, Failure> {
    let (seqs, digest) = read_instance(&args.input)?;
    let spaces = seqs
        .iter()
        .map(|s| compute::resolve_space(args.space, s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::new(name);
    rep.input_digest = Some(digest);
    let mut results = Vec::new();
    for (i, (seq, space)) in seqs.iter().zip(spaces).enumerate() {
        let label = if seqs.len() > 1 { format!("[{i}] ") } else { String::new() };
        let v = op(seq, space, &mut rep, &label).map_err(|e| compute_error(e, &rep))?;
        results.push(v);
    }
    rep.results = json!({ "sequences": results });
    Ok(rep)
}

fn campaign(args: &CampaignArgs) -> Result<Campaign, Failure> {
    if args.trials == 0 {
        return Err(Failure::Schema("--trials must be at least 1".into()));
    }
    Ok(Campaign {
        trials: args.trials,
        seed: args.seed,
        dim: args.dim,
    })
}

/// Writes the first failing instance next to the working directory for replay.
fn save_witness(rep: &Report) {
    if let Some(f) = rep.results.get("first_failure") {
        let trial = f["trial"].as_u64().unwrap_or(0);
        let name = format!(
            "{}-seed{}-trial{trial}.json",
            rep.command.split_whitespace().take(2).collect::<Vec<_>>().join("-"),
            rep.seed.unwrap_or(0)
        );
        let mut text = serde_json::to_string_pretty(&f["instance"]).expect("serializes");
        text.push('\n');
        if std::fs::write(&name, text).is_ok() {
            eprintln!("failing instance written to {name}");
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (rep, out) = match &cli.command {
        Command::Radius(a) => (per_sequence("radius", a, compute::radius)?, &a.out),
        Command::Center(a) => (per_sequence("center", a, compute::center)?, &a.out),
        Command::Envelope(a) => (per_sequence("envelope", a, compute::envelope)?, &a.out),
        Command::Distance { a, b, norm, out } => {
            let (mut seqs, mut digest) = read_instance(a)?;
            if let Some(b) = b {
                let (more, d2) = read_instance(b)?;
                seqs.truncate(1);
                seqs.push(more.into_iter().next().expect("parse_instance returns at least one"));
                digest = report::digest(format!("{digest}{d2}").as_bytes());
            }
            if seqs.len() < 2 {
                return Err(Failure::Schema("distance needs two sequences".into()));
            }
            let mut rep = Report::new("distance");
            rep.input_digest = Some(digest);
            rep.results = compute::distance(&seqs[0], &seqs[1], *norm, &mut rep)?;
            (rep, out)
        }
        Command::Crosscheck { space, campaign: c } => (campaigns::crosscheck(&campaign(c)?, *space), &c.out),
        Command::Verify { suite, delta, campaign: c } => {
            let camp = campaign(c)?;
            let rep = match suite {
                Suite::Holder => campaigns::holder(&camp),
                Suite::BpSets => campaigns::bp_sets(&camp),
                Suite::Cac => {
                    let d = rational::parse(delta).map_err(|e| Failure::Schema(format!("--delta: {e}")))?;
                    if d < rational::int(0) || d > rational::int(1) {
                        return Err(Failure::Schema("--delta must lie in [0, 1]".into()));
                    }
                    campaigns::cac(&camp, &d)
                }
                Suite::LimIdentities => campaigns::lim_identities(&camp),
                Suite::Axioms => campaigns::axioms(&camp),
            };
            (rep, &c.out)
        }
        Command::Fuzz {
            target: FuzzTarget::Conjecture { norm_family_size, campaign: c },
        } => (campaigns::conjecture(&campaign(c)?, *norm_family_size), &c.out),
    };
    emit(&rep, out.json.as_deref())?;
    if !rep.ok {
        save_witness(&rep);
        return Err(Failure::Violation(Box::new(rep)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Schema(m) => eprintln!("error: {m}"),
                Failure::Mismatch(m) => eprintln!("error: {m}"),
                Failure::Violation(rep) => {
                    if let Some(e) = rep.results.get("error") {
                        print!("{}", rep.render_table());
                        eprintln!("error: {}", e.as_str().unwrap_or_default());
                    } else {
                        eprintln!("property violated, see report");
                    }
                }
            }
            ExitCode::from(failure.code())
        }
    }
}
