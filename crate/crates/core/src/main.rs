use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cusco_core::cli::{parse_spec, run, Command, Options};
use cusco_core::minimal::Envelope;
use cusco_core::rat::parse_rat;
use cusco_core::Rat;

/// Exact checks and constructions for piecewise functions and set-valued maps.
///
/// Exit status: 0 when the property holds or the construction succeeds, 1 when
/// it fails or the construction is rejected, 2 on input errors.
#[derive(Parser)]
#[command(name = "cusco", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Target {
    /// Specification file.
    file: PathBuf,
    /// Entity name inside the file.
    name: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quasicontinuity of a function or planar curve.
    CheckQc(Target),
    /// Subcontinuity of a function or planar curve.
    CheckSubcont(Target),
    /// Hyperplane minimality of a function or planar curve.
    CheckHpmin(Target),
    /// Upper semicontinuity with compact values.
    CheckUsco(Target),
    /// Usco with convex values.
    CheckCusco(Target),
    CheckMinUsco(Target),
    CheckMinCusco(Target),
    /// Cluster set of a function at a point.
    Csc {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_parser = rat_arg)]
        at: Rat,
    },
    /// Minimal cusco generated by a selection.
    ConstructMinCusco(Target),
    /// The minimal usco inside a map, when it is unique.
    ExtractMinUsco(Target),
    /// A minimal usco inside a map, built from one envelope.
    WithinMinUsco {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "inf")]
        variant: Envelope,
    },
    /// A minimal cusco inside a map, built from one envelope.
    WithinMinCusco {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "inf")]
        variant: Envelope,
    },
    /// Subdifferential of a convex piecewise affine function.
    Subdiff(Target),
    /// Compare the closed-form checks against definition-level oracles.
    OracleAgree {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = cusco_core::oracle::DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Tabulate on a grid as CSV.
    Sample {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_parser = rat_arg)]
        step: Rat,
    },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options::default();
    let (command, target) = match cli.command {
        Cmd::CheckQc(t) => (Command::CheckQc, t),
        Cmd::CheckSubcont(t) => (Command::CheckSubcont, t),
        Cmd::CheckHpmin(t) => (Command::CheckHpmin, t),
        Cmd::CheckUsco(t) => (Command::CheckUsco, t),
        Cmd::CheckCusco(t) => (Command::CheckCusco, t),
        Cmd::CheckMinUsco(t) => (Command::CheckMinUsco, t),
        Cmd::CheckMinCusco(t) => (Command::CheckMinCusco, t),
        Cmd::Csc { target, at } => {
            opts.at = Some(at);
            (Command::Csc, target)
        }
        Cmd::ConstructMinCusco(t) => (Command::ConstructMinCusco, t),
        Cmd::ExtractMinUsco(t) => (Command::ExtractMinUsco, t),
        Cmd::WithinMinUsco { target, variant } => {
            opts.envelope = variant;
            (Command::WithinMinUsco, target)
        }
        Cmd::WithinMinCusco { target, variant } => {
            opts.envelope = variant;
            (Command::WithinMinCusco, target)
        }
        Cmd::Subdiff(t) => (Command::Subdiff, t),
        Cmd::OracleAgree { target, depth } => {
            opts.depth = depth;
            (Command::OracleAgree, target)
        }
        Cmd::Sample { target, step } => {
            opts.step = Some(step);
            (Command::Sample, target)
        }
    };

    let fail = |msg: String| {
        if cli.json {
            println!("{}", serde_json::json!({ "command": command.name(), "error": msg, "exit_code": 2 }));
        } else {
            eprintln!("error: {msg}");
        }
        ExitCode::from(2)
    };
    let text = match std::fs::read_to_string(&target.file) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", target.file.display())),
    };
    let doc = match parse_spec(&text) {
        Ok(d) => d,
        Err(e) => return fail(format!("{}:\n{e}", target.file.display())),
    };
    match run(command, &doc, &target.name, &opts) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => fail(e.to_string()),
    }
}
