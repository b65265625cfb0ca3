mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use commands::{AuditParams, PieceInput, TowerMode};
use report::{RunReport, Status};

const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "concc", version, about = "Verification suites for conjugacy-class constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON run report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a relator family.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Build or re-verify conjugating towers.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Certified checks on small HNN extensions.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Free-product path audits.
    #[command(subcommand)]
    Relpaths(RelpathsCmd),
    /// Small cancellation diagnostics.
    #[command(subcommand)]
    Smallcanc(SmallcancCmd),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// C'(1/8) and Dehn checks for the R-family at a given scale.
    HypSpecGen {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        scale: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnumOrder {
    Shortlex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Ncc,
    Coset,
}

#[derive(Subcommand, Debug)]
enum TowerCmd {
    /// Build a tower prefix with certificates.
    Build {
        /// Number of conjugacy classes (ncc mode only).
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=16))]
        classes: Option<u64>,
        #[arg(long, default_value_t = 50)]
        stages: usize,
        #[arg(long = "enum", value_enum, default_value_t = EnumOrder::Shortlex)]
        enumeration: EnumOrder,
        #[arg(long, value_enum, default_value_t = Mode::Ncc)]
        mode: Mode,
        /// Accepted for explicitness; the build never uses randomness.
        #[arg(long)]
        seedless: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Replay a tower certificate file or a run report.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// t and t^-1 in the Klein bottle group.
    KleinBottle {
        /// Exponent bound for Britton membership searches.
        #[arg(long, default_value_t = concc_core::hnn::DEFAULT_BOUND)]
        bound: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Powers of t in BS(1,2).
    Bs12 {
        #[arg(long, default_value_t = concc_core::hnn::DEFAULT_BOUND)]
        bound: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum RelpathsCmd {
    /// Isolation and regularity audits over random cycles.
    Audit {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Random trivial cycles for the isolation audit.
        #[arg(long, default_value_t = 10_000)]
        instances: usize,
        /// Random instances for the regularity audit.
        #[arg(long, default_value_t = 1_000)]
        regularity: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum SmallcancCmd {
    /// Longest piece and the C'(lambda) verdict.
    Pieces {
        /// Use the R-family at this scale.
        #[arg(long, conflicts_with = "relator", required_unless_present = "relator")]
        scale: Option<u64>,
        /// A relator, e.g. "a b a^-1 b^-1"; repeatable.
        #[arg(long)]
        relator: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        generators: Vec<String>,
        #[arg(long, default_value = "1/8", value_parser = parse_lambda)]
        lambda: Ratio<u64>,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_lambda(s: &str) -> Result<Ratio<u64>, String> {
    let r: Ratio<u64> = s.parse().map_err(|_| format!("`{s}` is not a fraction p/q"))?;
    if *r.numer() == 0 || r > Ratio::from_integer(1) {
        return Err("lambda must lie in (0, 1]".into());
    }
    Ok(r)
}

fn run(cmd: Command, report: &mut RunReport) -> Result<Option<PathBuf>, String> {
    let out = match cmd {
        Command::Verify(VerifyCmd::HypSpecGen { scale, output }) => {
            commands::hyp_spec_gen(report, scale);
            output.out
        }
        Command::Tower(TowerCmd::Build {
            classes,
            stages,
            enumeration: EnumOrder::Shortlex,
            mode,
            seedless: _,
            output,
        }) => {
            let mode = match (mode, classes) {
                (Mode::Ncc, c) => TowerMode::Ncc {
                    classes: c.unwrap_or(3) as usize,
                },
                (Mode::Coset, None) => TowerMode::Coset,
                (Mode::Coset, Some(_)) => return Err("--classes applies to --mode ncc only".into()),
            };
            commands::tower_build(report, &mode, stages);
            output.out
        }
        Command::Tower(TowerCmd::Verify { file, output }) => {
            match std::fs::read_to_string(&file) {
                Ok(text) => commands::reverify_file(report, &text),
                Err(e) => report.check("read", || (Status::Fail, format!("{}: {e}", file.display()), None)),
            }
            output.out
        }
        Command::Check(CheckCmd::KleinBottle { bound, output }) => {
            commands::klein_bottle(report, bound);
            output.out
        }
        Command::Check(CheckCmd::Bs12 { bound, output }) => {
            commands::bs12(report, bound);
            output.out
        }
        Command::Relpaths(RelpathsCmd::Audit {
            seed,
            instances,
            regularity,
            output,
        }) => {
            report.seed = Some(seed);
            commands::relpaths_audit(
                report,
                &AuditParams {
                    seed,
                    instances,
                    regularity,
                },
            );
            output.out
        }
        Command::Smallcanc(SmallcancCmd::Pieces {
            scale,
            relator,
            generators,
            lambda,
            output,
        }) => {
            let input = match scale {
                Some(s) => PieceInput::Family { scale: s.max(1) },
                None => PieceInput::Relators {
                    generators,
                    relators: relator,
                },
            };
            commands::smallcanc_pieces(report, &input, lambda);
            output.out
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let start = Instant::now();
    let mut report = RunReport::new(std::env::args().skip(1).collect(), None);
    let out = match run(cli.command, &mut report) {
        Ok(out) => out,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    report.finish(start.elapsed().as_millis() as u64);
    for c in &report.checks {
        eprintln!("{:<7} {}: {}", format!("{:?}", c.status).to_uppercase(), c.name, c.detail);
    }
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, report.to_json() + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}
