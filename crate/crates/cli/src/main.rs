use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bfgp::commands::{
    cmd_gen, cmd_synth, cmd_translate, cmd_validate, GenArgs, SynthArgs, TranslateArgs,
    ValidateArgs,
};
use bfgp_core::domains::InstanceSet;

/// Generalized-planning toolkit: synthesizes planning programs over
/// pointer-extended domains, validates them, generates benchmark
/// instances, and translates STRIPS PDDL.
#[derive(Parser)]
#[command(name = "bfgp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    Synthesis,
    Validation,
}

impl From<SetArg> for InstanceSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::Synthesis => InstanceSet::Synthesis,
            SetArg::Validation => InstanceSet::Validation,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a program solving every instance of a problem.
    Synth(SynthCli),
    /// Run a program on an instance set and check every goal.
    Validate(ValidateCli),
    /// Write a built-in benchmark's domain and instance files.
    Gen(GenCli),
    /// Translate a STRIPS PDDL domain and problems.
    Translate(TranslateCli),
}

#[derive(Args)]
struct SynthCli {
    /// Built-in benchmark name or a directory with domain.txt and
    /// instance files.
    #[arg(long)]
    domain: String,
    /// Program length, end line included (built-in default otherwise).
    #[arg(long)]
    lines: Option<usize>,
    /// Pointer declaration: a count, or `type:count,...`.
    #[arg(long)]
    pointers: Option<String>,
    /// Comma-separated evaluation key, e.g. `f5,f7`.
    #[arg(long, default_value = "f5,f7")]
    eval: String,
    /// Wall-clock budget in seconds (default 3600; env
    /// BFGP_TIMEOUT_SECS).
    #[arg(long)]
    timeout: Option<u64>,
    /// Open-list watermark (env BFGP_MAX_NODES).
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Cap on arithmetic results during synthesis (default 100; env
    /// BFGP_VALUE_BOUND).
    #[arg(long)]
    bound: Option<i64>,
    /// Instance-generator seed (default 1).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of instances to generate (built-in domains).
    #[arg(long)]
    count: Option<usize>,
    /// Extra instance files.
    #[arg(long = "instance")]
    instance: Vec<PathBuf>,
    /// Write the solution program here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a JSON run report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct ValidateCli {
    /// Built-in benchmark name or a directory with domain.txt and
    /// instance files.
    #[arg(long)]
    domain: String,
    /// Program file to validate.
    #[arg(long)]
    program: PathBuf,
    /// Which generated set to validate built-in domains on.
    #[arg(long, value_enum, default_value_t = SetArg::Validation)]
    set: SetArg,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pointers: Option<String>,
    /// Extra instance files.
    #[arg(long = "instance")]
    instance: Vec<PathBuf>,
    /// Detect repeated program states instead of bounding steps.
    #[arg(long = "infinite-detection", value_enum, default_value_t = Toggle::Off)]
    infinite_detection: Toggle,
    /// Cap on arithmetic results (default 1e9; env BFGP_VALUE_BOUND).
    #[arg(long)]
    bound: Option<i64>,
    /// Step budget when detection is off (default 1e7; env
    /// BFGP_STEP_LIMIT).
    #[arg(long = "step-limit")]
    step_limit: Option<u64>,
    /// Write a JSON run report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct GenCli {
    /// Built-in benchmark name.
    #[arg(long)]
    domain: String,
    #[arg(long, value_enum, default_value_t = SetArg::Synthesis)]
    set: SetArg,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct TranslateCli {
    /// PDDL domain file.
    #[arg(long = "pddl-domain")]
    pddl_domain: PathBuf,
    /// PDDL problem files.
    #[arg(long = "pddl-problem", required = true)]
    pddl_problem: Vec<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Synth(a) => cmd_synth(&SynthArgs {
            domain: a.domain,
            lines: a.lines,
            pointers: a.pointers,
            eval: a.eval,
            timeout: a.timeout,
            max_nodes: a.max_nodes,
            bound: a.bound,
            seed: a.seed,
            count: a.count,
            instance_paths: a.instance,
            out: a.out,
            json: a.json,
            quiet: a.quiet,
        }),
        Command::Validate(a) => cmd_validate(&ValidateArgs {
            domain: a.domain,
            program: a.program,
            set: a.set.into(),
            count: a.count,
            seed: a.seed,
            pointers: a.pointers,
            instance_paths: a.instance,
            infinite_detection: matches!(a.infinite_detection, Toggle::On),
            bound: a.bound,
            step_limit: a.step_limit,
            json: a.json,
            quiet: a.quiet,
        }),
        Command::Gen(a) => cmd_gen(&GenArgs {
            domain: a.domain,
            set: a.set.into(),
            count: a.count,
            seed: a.seed,
            out: a.out,
            quiet: a.quiet,
        }),
        Command::Translate(a) => cmd_translate(&TranslateArgs {
            pddl_domain: a.pddl_domain,
            pddl_problems: a.pddl_problem,
            out: a.out,
            quiet: a.quiet,
        }),
    };
    ExitCode::from(code as u8)
}
