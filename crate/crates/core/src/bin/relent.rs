use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relent::commands::{self, CommandError, CommandOutput, Common, Format};
use relent::Scalar;

#[derive(Parser)]
#[command(name = "relent", version, about = "Entropy, periodic orbits and well-alignedness of closed relations on intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct Shared {
    /// Relation file, or gallery:<name>
    #[arg(long)]
    relation: String,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value_t = 10)]
    max_m: usize,
    #[arg(long, default_value_t = 12)]
    max_period: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Fmt>,
    /// Discriminant of the scalar field ℚ(√d)
    #[arg(long)]
    d: Option<u32>,
    /// Gallery parameter overrides, e.g. --param a=1+sqrt(2) b=1/3
    #[arg(long, num_args = 1.., value_name = "KEY=SCALAR")]
    param: Vec<String>,
    /// Extra level hints for the certificate search
    #[arg(long, value_name = "SCALAR")]
    hint: Vec<Scalar>,
}

#[derive(Subcommand)]
enum Command {
    /// Box counts N_m, infimum estimate min a_m/m and spectral enclosure
    Entropy {
        #[command(flatten)]
        shared: Shared,
        /// Report spectral estimates over these grid sizes instead
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
    },
    /// Periodic-orbit census
    Orbits(Shared),
    /// Search for a well-aligned pair
    Certify(Shared),
    /// Map a relation through a piecewise-affine homeomorphism
    Conjugate {
        #[command(flatten)]
        shared: Shared,
        #[arg(long)]
        homeo: PathBuf,
    },
    /// SVG of the relation, or of Mahavier prefixes with --prefix-m
    Plot {
        #[command(flatten)]
        shared: Shared,
        #[arg(long)]
        prefix_m: Option<usize>,
    },
    /// Embedding verdict with proof levels
    Report(Shared),
    /// List gallery entries, or print one as a relation file
    Gallery {
        name: Option<String>,
        #[arg(long, num_args = 1.., value_name = "KEY=SCALAR")]
        param: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn common(s: &Shared) -> Result<Common, CommandError> {
    Ok(Common {
        relation: s.relation.clone(),
        grid: s.grid,
        max_m: s.max_m,
        max_period: s.max_period,
        format: s.format.map(|f| match f {
            Fmt::Json => Format::Json,
            Fmt::Csv => Format::Csv,
            Fmt::Svg => Format::Svg,
        }),
        d: s.d,
        params: commands::parse_params(&s.param)?,
        hints: s.hint.clone(),
    })
}

fn run(cli: Cli) -> Result<(CommandOutput, Option<PathBuf>), CommandError> {
    Ok(match cli.command {
        Command::Entropy { shared, sweep } => {
            let c = common(&shared)?;
            let out = if sweep.is_empty() { commands::cmd_entropy(&c)? } else { commands::cmd_sweep(&c, &sweep)? };
            (out, shared.out)
        }
        Command::Orbits(s) => (commands::cmd_orbits(&common(&s)?)?, s.out),
        Command::Certify(s) => (commands::cmd_certify(&common(&s)?)?, s.out),
        Command::Conjugate { shared, homeo } => (commands::cmd_conjugate(&common(&shared)?, &homeo)?, shared.out),
        Command::Plot { shared, prefix_m } => (commands::cmd_plot(&common(&shared)?, prefix_m)?, shared.out),
        Command::Report(s) => (commands::cmd_report(&common(&s)?)?, s.out),
        Command::Gallery { name, param, out } => (commands::cmd_gallery(name.as_deref(), &commands::parse_params(&param)?)?, out),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((output, out)) => {
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &output.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", output.text),
            }
            ExitCode::from(output.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
