use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use curvelct::{batch, parse_field, run, CliResult, Method, OutputFormat, RunConfig, Verdict};

#[derive(Parser)]
#[command(name = "curvelct", version, about = "Log canonical thresholds of plane curve branches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the threshold of one branch at the origin.
    Compute {
        /// `q` or `fp:<p>`.
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        poly: String,
        /// formula, howald, resolution or all.
        #[arg(long, default_value = "all")]
        method: String,
        /// Evaluate the formula on smooth branches as well.
        #[arg(long)]
        allow_smooth: bool,
        /// Search depth for Farey multiplicities of resolution divisors.
        #[arg(long, default_value_t = 0)]
        probe_depth: u32,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        /// Write the resolution dual graph as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Seed for the randomized spot check.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run `<field> <polynomial>` lines from a file.
    Batch {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        allow_smooth: bool,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Compute { field, poly, method, allow_smooth, probe_depth, json, dot, seed } => {
            let mut config = RunConfig::new(parse_field(&field)?, poly).with_methods(Method::parse_list(&method)?);
            config.allow_smooth = allow_smooth;
            config.probe_depth = probe_depth;
            config.seed = seed;
            config.output = match (json, &dot) {
                (true, _) => OutputFormat::Json,
                (_, Some(_)) => OutputFormat::Dot,
                _ => OutputFormat::Text,
            };
            let config = config.with_env()?;
            let report = run(&config)?;
            match config.output {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
                OutputFormat::Dot => {
                    let res = report
                        .resolution
                        .as_ref()
                        .ok_or_else(|| curvelct::CliError::Config("--dot needs the resolution method".into()))?;
                    std::fs::write(dot.expect("set for dot output"), res.tree.to_dot())?;
                    print!("{}", report.to_text());
                }
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            Ok(report.verdict.exit_code() as u8)
        }
        Command::Batch { file, json, allow_smooth } => {
            let text = std::fs::read_to_string(&file)?;
            let template = RunConfig::new(curvelct_core::Field::Rational, "").allow_smooth(allow_smooth).with_env()?;
            let mut code = 0u8;
            for item in batch(&text, &template) {
                match item.result {
                    Ok(report) => {
                        if report.verdict == Verdict::Disagree {
                            code = code.max(2);
                        }
                        if json {
                            println!("{}", serde_json::to_string(&report).expect("serializable"));
                        } else {
                            println!("{}: {}", item.line, report.summary());
                        }
                    }
                    Err(e) => {
                        code = code.max(1);
                        if json {
                            println!("{}", serde_json::json!({ "line": item.line, "error": e.to_string() }));
                        } else {
                            println!("{}: error: {e}", item.line);
                        }
                    }
                }
            }
            Ok(code)
        }
    }
}
