use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use gamma_forest::cli::{cmd_enumerate, cmd_poly, cmd_symfunc, Basis, Family, Format, Mode};
use gamma_forest::verify::{cmd_verify, Suite};
use gamma_forest::Config;

#[derive(Parser)]
#[command(
    name = "gamma-forest",
    version,
    about = "Tree Eulerian polynomials, their gamma-vectors and the objects that count them"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "GAMMA_FOREST_THREADS")]
    threads: Option<usize>,
    /// Allow enumeration past the default size caps
    #[arg(long, global = true)]
    cap_override: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Re-check the identities up to a size bound
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        /// Include per-check elapsed times
        #[arg(long)]
        timings: bool,
    },
    /// Print T_n(t) in the standard or gamma basis
    Poly {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Basis::Standard)]
        basis: Basis,
    },
    /// List objects of a family with a statistic, or tally the statistic
    Enumerate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        stat: String,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Print the comb-type expansion in elementary symmetric functions
    Symfunc {
        #[arg(long)]
        n: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let config = Config {
        threads: cli.run.threads,
        cap_override: cli.run.cap_override,
    };
    let format = cli.run.format;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Verify {
            suite,
            n_max,
            timings,
        } => {
            let suite: Suite = suite.parse()?;
            let report = cmd_verify(suite, n_max, &config)?;
            let text = match format {
                Format::Text => report.render_text(timings),
                Format::Json => report.render_json(timings),
                Format::Csv => report.render_csv(timings),
            };
            writeln!(out, "{text}")?;
            if format != Format::Text {
                eprintln!("{}", report.summary());
            }
            return Ok(report.is_success());
        }
        Command::Poly { n, basis } => writeln!(out, "{}", cmd_poly(n, basis, format)?)?,
        Command::Enumerate {
            family,
            n,
            stat,
            mode,
        } => {
            cmd_enumerate(&mut out, family, n, &stat, format, mode, &config)?;
        }
        Command::Symfunc { n } => writeln!(out, "{}", cmd_symfunc(n, format, &config)?)?,
    }
    out.flush().context("flushing output")?;
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
