use std::process::ExitCode;

use clap::{Parser, Subcommand};
use traintrack_cli::commands::{
    self, CheckArgs, CliError, Format, MeasureArgs, Normalize, Outcome, PathSelection, VectorSpec,
    VerifyArgs,
};

#[derive(Parser)]
#[command(
    name = "ttm",
    version,
    about = "Train track maps, graph towers and invariant measures"
)]
struct Cli {
    /// Reserved; no command uses randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train track, expanding, homotopy equivalence and repetition report.
    Check {
        file: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 6)]
        rep_cap: usize,
        /// Tower level searched for a repetition bound.
        #[arg(long, default_value_t = 1)]
        rep_level: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Block form, eigenvalues and distinguished eigenvectors as JSON.
    Spectrum {
        file: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 15)]
        digits: usize,
    },
    /// Values of the invariant measure attached to an eigenvector.
    Measure {
        file: String,
        #[arg(long)]
        map: String,
        /// `auto` or comma-separated entries such as `3/2,1`.
        #[arg(long, default_value = "auto")]
        vector: VectorSpec,
        #[arg(long, value_enum, default_value = "min")]
        normalize: Normalize,
        /// Comma-separated paths, e.g. `a b,~a`.
        #[arg(
            long,
            conflicts_with = "table_up_to",
            required_unless_present = "table_up_to"
        )]
        paths: Option<String>,
        #[arg(long)]
        table_up_to: Option<usize>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        /// Print rational interval endpoints instead of decimals.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Flip, Kirchhoff, switch, eigen-equation and oracle checks.
    Verify {
        file: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "auto")]
        vector: VectorSpec,
        #[arg(long, value_enum, default_value = "min")]
        normalize: Normalize,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value = "1e-12")]
        tol: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Measures attached to the distinguished eigenvectors of a substitution.
    Ergodic {
        file: String,
        #[arg(long)]
        subst: String,
        #[arg(long, default_value_t = 12)]
        digits: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Reprint a file in canonical form.
    Fmt { file: String },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.cmd {
        Cmd::Check {
            file,
            map,
            rep_cap,
            rep_level,
            format,
        } => commands::check(
            &commands::load(&file)?,
            &map,
            &CheckArgs {
                rep_cap,
                rep_level,
                format,
            },
        ),
        Cmd::Spectrum { file, map, digits } => {
            commands::spectrum(&commands::load(&file)?, &map, digits)
        }
        Cmd::Measure {
            file,
            map,
            vector,
            normalize,
            paths,
            table_up_to,
            format,
            exact,
            digits,
        } => {
            let paths = match (paths, table_up_to) {
                (Some(p), _) => PathSelection::List(p),
                (None, Some(l)) => PathSelection::UpTo(l),
                (None, None) => unreachable!("clap requires one of them"),
            };
            commands::measure(
                &commands::load(&file)?,
                &map,
                &MeasureArgs {
                    vector,
                    normalize,
                    paths,
                    format,
                    exact,
                    digits,
                },
            )
        }
        Cmd::Verify {
            file,
            map,
            vector,
            normalize,
            max_len,
            tol,
            format,
        } => commands::verify(
            &commands::load(&file)?,
            &map,
            &VerifyArgs {
                vector,
                normalize,
                max_len,
                tol,
                format,
            },
        ),
        Cmd::Ergodic {
            file,
            subst,
            digits,
            format,
        } => commands::ergodic(&commands::load(&file)?, &subst, digits, format),
        Cmd::Fmt { file } => Ok(commands::format_document(&commands::load(&file)?)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            print!("{}", o.out);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("ttm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
