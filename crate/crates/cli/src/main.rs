use clap::{Parser, Subcommand, ValueEnum};
use semikit::star_algebra::Tol;
use semikit_cli::{
    cmd_green_julg, cmd_kcheck, cmd_property_suite, cmd_validate, exit_code_for, Outcome,
    EXIT_FAIL, EXIT_INPUT, EXIT_PASS,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Parser)]
#[command(
    name = "semikit",
    version,
    about = "Finite inverse semigroups, crossed products, and K0 pipelines"
)]
struct Cli {
    /// Base seed for all randomized constructions
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Override the homomorphism-check tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure checks on the named corpus (Cayley axioms, spectrum,
    /// translation order isomorphisms)
    Validate {
        /// Comma-separated corpus names, or "all"
        #[arg(long, default_value = "all")]
        corpus: String,
    },
    /// Cross-check the block structure of C*(S) (envelope, Munn, groupoid,
    /// Kasparov-Sieben)
    Kcheck {
        #[arg(long, default_value = "all")]
        corpus: String,
    },
    /// Functorial property suite on random bimodule instances
    PropertySuite {
        /// Comma-separated corpus names; defaults to a small built-in list
        #[arg(long)]
        corpus: Option<String>,
        /// Number of random instances
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Compute the Green-Julg class of a cycle file over (C, A)
    GreenJulg {
        /// Path to a cycle JSON file
        file: String,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let mut tol = Tol::default();
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t < 1.0) {
            eprintln!("error: --tol must be in (0, 1)");
            std::process::exit(EXIT_INPUT);
        }
        tol.hom = t;
    }

    let result = match &cli.command {
        Command::Validate { corpus } => cmd_validate(corpus),
        Command::Kcheck { corpus } => cmd_kcheck(corpus, cli.seed, &tol),
        Command::PropertySuite { corpus, count } => {
            cmd_property_suite(corpus.as_deref(), cli.seed, *count, &tol)
        }
        Command::GreenJulg { file } => cmd_green_julg(file, cli.seed, &tol),
    };

    match result {
        Ok(Outcome { json, human, pass }) => {
            match cli.format {
                Format::Human => print!("{human}"),
                Format::Json => println!("{}", serde_json::to_string(&json).unwrap()),
            }
            std::process::exit(if pass { EXIT_PASS } else { EXIT_FAIL });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}
