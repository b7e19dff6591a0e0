//! `twa`: encodings, builders, reductions, evaluators and differential
//! campaigns from the command line.

mod commands;
mod error;
mod fuzz;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use twa_core::config::Config;
use twa_core::ExperimentManifest;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "twa", version, about = "Two-way finite automata workbench")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output as JSON lines or human-readable text.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write a replayable run manifest here.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    /// Cap file; defaults to ./twa.toml when present.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub cap_enumeration: Option<usize>,
    #[arg(long, global = true, value_name = "LEN")]
    pub cap_unary: Option<u64>,
    #[arg(long, global = true, value_name = "STATES")]
    pub cap_flat: Option<usize>,
    #[arg(long, global = true, value_name = "STATES")]
    pub cap_states: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Codec {
    /// Text over {0,1,#,⊥} to bits.
    Quaternary,
    /// Edge list to ⟨G⟩.
    Graph,
    /// Edge list to the prime-block encoding.
    Prime,
    /// Edge list to the unary length, as a factor list.
    Unary,
    /// Machine JSON to ⟨M⟩.
    Automaton,
    /// Integer to `bin_s`.
    Bin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Fixpoint when the machine has ∀ states, reachability otherwise.
    Auto,
    Nfa,
    Afa,
    Leveled,
    /// Brute-force reference evaluators.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    /// 2NFA and input to the reachability instance.
    NfaToGraph,
    /// Bundled DTM to a narrow 2AFA for one input length.
    DtmToAfa,
    /// Removes stationary moves.
    Stationary,
    /// Merges accepting states into one entered only at `$`.
    Normalize,
    /// ⟨G⟩ to the prime-block encoding, streaming.
    GraphToPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Chain {
    /// Random graph, ⟨G⟩, solver, verdict against reachability.
    Graph,
    /// Random simple 2NFA, reachability instance, solver, verdict.
    Nfa,
    /// Bundled DTM, narrow 2AFA, leveled evaluation, verdict.
    Dtm,
    /// Random graph, prime encoding, compressed unary solver, verdict.
    Unary,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a file (or stdin) with one of the codecs.
    Encode {
        #[arg(value_enum)]
        codec: Codec,
        /// Input file; stdin when absent or `-`.
        input: Option<PathBuf>,
        /// Branching bound for ⟨M⟩.
        #[arg(long, default_value_t = 3)]
        c: usize,
        /// Block width for `bin`.
        #[arg(long)]
        width: Option<usize>,
    },
    /// Decode a file (or stdin) with one of the codecs.
    Decode {
        #[arg(value_enum)]
        codec: Codec,
        input: Option<PathBuf>,
        /// Vertex count for prime and unary inputs.
        #[arg(long)]
        n: Option<usize>,
        /// Machine JSON supplying states and alphabet for ⟨M⟩.
        #[arg(long)]
        skeleton: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        c: usize,
    },
    /// Build a machine family member and print its JSON document.
    Build {
        /// validator | solver | unary-solver | dtm-afa[:name]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a machine on an input word.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Apply a reduction.
    Reduce {
        #[arg(value_enum)]
        kind: Reduction,
        #[arg(long)]
        machine: Option<PathBuf>,
        /// Input word, or a ⟨G⟩ file for graph-to-prime.
        #[arg(long)]
        input: Option<String>,
        /// Bundled DTM name for dtm-to-afa.
        #[arg(long, default_value = "block-copy")]
        dtm: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure, level widths and narrowness of a run.
    Measure {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        /// Level depth; defaults to |Q|·(|x|+2).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Seeded differential campaign; failures are minimized and saved.
    Fuzz {
        #[arg(value_enum)]
        target: Option<fuzz::Target>,
        #[arg(long, required_unless_present = "replay")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Re-check a saved counterexample instead.
        #[arg(long, conflicts_with_all = ["target", "seed"])]
        replay: Option<PathBuf>,
    },
    /// Run a seeded pipeline of constructions against the oracles.
    Verify {
        #[arg(value_enum, required_unless_present = "spec")]
        chain: Option<Chain>,
        #[arg(long, required_unless_present = "spec")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Pipeline description in JSON.
        #[arg(long, conflicts_with = "chain")]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "block-copy")]
        dtm: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// State-count table for a machine family.
    Report {
        family: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Seed for the narrowness samples.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long)]
        csv: bool,
        /// Also write one DOT file per row here.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Graphviz rendering of a machine or of its leveled computation graph.
    ExportDot {
        #[arg(long, conflicts_with = "family")]
        machine: Option<PathBuf>,
        #[arg(long, requires = "n")]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Render the computation graph on this input instead.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unary and prime-encoded reachability.
    #[command(subcommand)]
    Unary(UnaryCommand),
}

#[derive(Debug, Subcommand)]
pub enum UnaryCommand {
    /// Decide reachability on a unary or prime-encoded instance.
    Solve {
        /// Edge-list graph; the verdict is also checked against reachability.
        #[arg(long, group = "instance")]
        graph: Option<PathBuf>,
        /// ⟨G⟩ file, translated to prime blocks.
        #[arg(long, group = "instance")]
        binary: Option<PathBuf>,
        /// Prime-block file; needs --n.
        #[arg(long, group = "instance", requires = "n")]
        prime: Option<PathBuf>,
        /// Unary length as a decimal or a factor list like 2*3*5; needs --n.
        #[arg(long, group = "instance", requires = "n")]
        length: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Also run the solver on the written-out tape when within the cap.
        #[arg(long)]
        materialize: bool,
    },
    /// Sweep-compress a unary machine and report the flat size.
    Compress {
        #[arg(long, conflicts_with = "solver")]
        machine: Option<PathBuf>,
        /// Use the unary solver for --n.
        #[arg(long)]
        solver: bool,
        #[arg(long)]
        n: usize,
        /// Write the flat prime-input machine here when it was emitted.
        #[arg(long)]
        flat_out: Option<PathBuf>,
    },
    /// Tail and cycle of the sweep map from each state.
    Rho {
        #[arg(long, conflicts_with = "solver")]
        machine: Option<PathBuf>,
        /// Use the unary solver for this n.
        #[arg(long)]
        solver: Option<usize>,
        /// Only this state (by name).
        #[arg(long)]
        state: Option<String>,
        /// Also report the state after a sweep of this length.
        #[arg(long)]
        length: Option<String>,
    },
}

/// What a command produced: a JSON record, its text rendering, and the
/// facts a manifest needs.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub seed: Option<u64>,
    pub inputs: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    pub fn new(json: Value, text: impl Into<String>) -> Self {
        Outcome { json, text: text.into(), seed: None, inputs: Vec::new() }
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn input(mut self, name: impl Into<String>, bytes: Vec<u8>) -> Self {
        self.inputs.push((name.into(), bytes));
        self
    }
}

fn config(g: &Global) -> Result<Config, CliError> {
    let mut cfg = Config::discover(g.config.as_deref()).map_err(|e| CliError::Usage(e.to_string()))?;
    let caps = &mut cfg.caps;
    if let Some(v) = g.cap_enumeration {
        caps.enumeration_n = v;
    }
    if let Some(v) = g.cap_unary {
        caps.unary_materialization = v;
    }
    if let Some(v) = g.cap_flat {
        caps.flat_emission = v;
    }
    if let Some(v) = g.cap_states {
        caps.build_states = v;
    }
    Ok(cfg)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Encode { .. } => "encode",
        Command::Decode { .. } => "decode",
        Command::Build { .. } => "build",
        Command::Run { .. } => "run",
        Command::Reduce { .. } => "reduce",
        Command::Measure { .. } => "measure",
        Command::Fuzz { .. } => "fuzz",
        Command::Verify { .. } => "verify",
        Command::Report { .. } => "report",
        Command::ExportDot { .. } => "export-dot",
        Command::Unary(UnaryCommand::Solve { .. }) => "unary solve",
        Command::Unary(UnaryCommand::Compress { .. }) => "unary compress",
        Command::Unary(UnaryCommand::Rho { .. }) => "unary rho",
    }
}

/// Arguments minus the manifest destination, so the parameter record does
/// not depend on where the manifest is written.
fn manifest_params(args: &[String]) -> Value {
    let mut kept = Vec::new();
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--manifest" {
            it.next();
        } else if !a.starts_with("--manifest=") {
            kept.push(a.clone());
        }
    }
    json!({ "argv": kept })
}

fn dispatch(cmd: Command, g: &Global, cfg: &Config) -> Result<Outcome, CliError> {
    use commands::*;
    match cmd {
        Command::Encode { codec, input, c, width } => encode(codec, input.as_deref(), c, width),
        Command::Decode { codec, input, n, skeleton, c } => {
            decode(codec, input.as_deref(), n, skeleton.as_deref(), c)
        }
        Command::Build { family, n, out } => build(&family, n, out.as_deref(), cfg),
        Command::Run { machine, input, mode } => run(&machine, &input, mode),
        Command::Reduce { kind, machine, input, dtm, n, out } => {
            reduce(kind, machine.as_deref(), input.as_deref(), &dtm, n, out.as_deref())
        }
        Command::Measure { machine, input, depth } => measure(&machine, &input, depth),
        Command::Fuzz { target, seed, trials, out_dir, replay } => match replay {
            Some(path) => fuzz_replay(&path),
            None => {
                let target = target.ok_or_else(|| CliError::Usage("fuzz needs a target".into()))?;
                fuzz_campaign(target, seed.expect("clap enforces --seed"), trials, &out_dir)
            }
        },
        Command::Verify { chain, seed, trials, spec, dtm, out_dir } => {
            verify(chain, seed, trials, spec.as_deref(), &dtm, &out_dir)
        }
        Command::Report { family, from, to, seed, samples, csv, dot_dir } => {
            report(&family, from..=to, seed, samples, csv, dot_dir.as_deref(), cfg)
        }
        Command::ExportDot { machine, family, n, input, out } => {
            export_dot(machine.as_deref(), family.as_deref(), n, input.as_deref(), out.as_deref())
        }
        Command::Unary(u) => unary(u, g, cfg),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    // Usage errors exit 1; 2 is reserved for malformed input.
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let name = command_name(&cli.command);
    let result = config(&cli.global).and_then(|cfg| dispatch(cli.command, &cli.global, &cfg));
    let (outcome, code) = match result {
        Ok(o) => (o, ExitCode::SUCCESS),
        Err(e) => {
            eprintln!("twa {name}: {e}");
            let code = e.exit_code();
            let kind = match e {
                CliError::Format(_) => "format",
                CliError::Disagreement(_) => "disagreement",
                _ => "error",
            };
            (Outcome::new(json!({ "error": kind, "message": e.to_string() }), ""), code)
        }
    };
    match cli.global.format {
        Format::Json => println!("{}", outcome.json),
        Format::Text if !outcome.text.is_empty() => print!("{}", outcome.text),
        Format::Text => {}
    }
    if let Some(path) = &cli.global.manifest {
        let mut m = ExperimentManifest::new(name, manifest_params(&args), outcome.seed);
        for (k, bytes) in &outcome.inputs {
            m.add_input(k.clone(), bytes);
        }
        let m = m.with_outcome(outcome.json);
        if let Err(e) = std::fs::write(path, m.to_json()) {
            eprintln!("twa: writing manifest {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn manifest_params_drop_destination() {
        let a: Vec<String> = ["twa", "fuzz", "afa", "--manifest", "m.json", "--seed", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(manifest_params(&a), json!({ "argv": ["fuzz", "afa", "--seed", "1"] }));
        let b: Vec<String> = ["twa", "--manifest=x.json", "run"].iter().map(|s| s.to_string()).collect();
        assert_eq!(manifest_params(&b), json!({ "argv": ["run"] }));
    }

    #[test]
    fn seeds_are_mandatory() {
        assert!(Cli::try_parse_from(["twa", "fuzz", "afa"]).is_err());
        assert!(Cli::try_parse_from(["twa", "verify", "nfa"]).is_err());
        assert!(Cli::try_parse_from(["twa", "report", "solver", "--from", "2", "--to", "3"]).is_err());
        assert!(Cli::try_parse_from(["twa", "fuzz", "afa", "--seed", "3"]).is_ok());
    }
}
