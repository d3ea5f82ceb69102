use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tlg_cli::commands::{self, CliError, Format, Options, Output, Stage, EXIT_ERROR};
use tlg_core::grammar::{load_grammar, Grammar};
use tlg_core::mm::DEFAULT_REWRITE_BUDGET;
use tlg_core::reading::Engine;

#[derive(Parser)]
#[command(name = "tlg", version, about = "Proof-net theorem proving for type-logical grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Grammar file.
    #[arg(long, short)]
    grammar: Option<PathBuf>,
    #[arg(long, short, default_value = "mm", value_parser = parse_engine)]
    engine: Engine,
    /// Structural rules: `none`, `all`, or a comma-separated list of rule
    /// names (`ass` adds associativity). Defaults to the grammar's rules.
    #[arg(long)]
    rules: Option<String>,
    #[arg(long, short, value_enum, default_value_t = Format::Sem)]
    format: Format,
    #[arg(long)]
    max_proofs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_REWRITE_BUDGET)]
    rewrite_budget: usize,
    /// Goal formula instead of the grammar's goals.
    #[arg(long)]
    goal: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and print its readings.
    Parse {
        #[command(flatten)]
        common: Common,
        sentence: String,
    },
    /// Decide a sequent such as `a/a b, b/a c |- a/a c`.
    Prove {
        #[command(flatten)]
        common: Common,
        /// Cross-check the verdict with an independent method.
        #[arg(long)]
        oracle: bool,
        sequent: String,
    },
    /// Compare the engine's criterion with the independent one on every
    /// complete structure of a sequent (or of a sentence's first entries).
    Oracle {
        #[command(flatten)]
        common: Common,
        input: String,
    },
    /// Graphviz output for a sequent or sentence.
    ExportDot {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Stage::Net)]
        stage: Stage,
        input: String,
    },
    /// Serve interactive sessions over HTTP.
    Serve {
        #[arg(long, short)]
        grammar: Option<PathBuf>,
        #[arg(long, short, default_value_t = 8080)]
        port: u16,
    },
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    s.parse()
}

fn grammar(path: Option<&PathBuf>) -> Result<Option<Grammar>, CliError> {
    path.map(load_grammar).transpose().map_err(CliError::from)
}

fn options(c: &Common, oracle: bool) -> Options {
    Options {
        engine: c.engine,
        rules: c.rules.clone(),
        format: c.format,
        max_proofs: c.max_proofs,
        rewrite_budget: c.rewrite_budget,
        goal: c.goal.clone(),
        oracle,
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Parse { common, sentence } => {
            let g = grammar(common.grammar.as_ref())?
                .ok_or_else(|| CliError::Usage("parse needs --grammar".into()))?;
            commands::parse(&g, &sentence, &options(&common, false))
        }
        Command::Prove { common, oracle, sequent } => {
            let g = grammar(common.grammar.as_ref())?;
            commands::prove(&sequent, g.as_ref(), &options(&common, oracle))
        }
        Command::Oracle { common, input } => {
            let g = grammar(common.grammar.as_ref())?;
            commands::oracle(&input, g.as_ref(), &options(&common, false))
        }
        Command::ExportDot { common, stage, input } => {
            let g = grammar(common.grammar.as_ref())?;
            commands::export_dot(&input, g.as_ref(), &options(&common, false), stage)
        }
        Command::Serve { grammar: path, port } => {
            let g = grammar(path.as_ref())?;
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Usage(e.to_string()))?;
            rt.block_on(tlg_cli::serve::serve(g, port))
                .map_err(|e| CliError::Usage(format!("cannot serve on port {port}: {e}")))?;
            Ok(Output {
                text: String::new(),
                code: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
