//! `powerkit`: voting power tables, Council history and budget-share fits.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use render::{Format, RenderSpec, MAX_PRECISION};

#[derive(Debug, Parser)]
#[command(name = "powerkit", version, about = "Voting power in the Council of Ministers and budget-share regressions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal places, rounded half-even.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=MAX_PRECISION as i64))]
    precision: u32,
}

impl Output {
    fn spec(&self) -> RenderSpec {
        RenderSpec {
            format: self.format,
            precision: self.precision,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Power indices of one game file.
    Power {
        game: PathBuf,
        /// Comma-separated: ssi, banzhaf, johnston, deegan-packel, public-good, nucleolus.
        #[arg(long, value_delimiter = ',', default_value = "ssi,nucleolus")]
        index: Vec<String>,
        /// Print exact fractions next to the decimals.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Power tables for every Council configuration, checked against the
    /// printed reference values.
    EuHistory {
        /// Configuration directory; defaults to $POWERKIT_DATA or the shipped data.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Periods to compute, each given by any year it covers.
        #[arg(long, value_delimiter = ',')]
        periods: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "ssi,nucleolus")]
        indices: Vec<String>,
        /// Reference CSV (period,country,index,value).
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Allowlist CSV (period,country,index,note).
        #[arg(long)]
        allowlist: Option<PathBuf>,
        #[arg(long, conflicts_with = "allowlist")]
        no_allowlist: bool,
        /// Absolute tolerance on three-decimal values. Defaults to 0.0005
        /// before 2003 and 0.002 from 2003.
        #[arg(long)]
        tolerance: Option<String>,
        /// Skip the reference comparison.
        #[arg(long)]
        no_check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Joins budget shares with the 1976-2012 power panel.
    Panel {
        /// Configuration directory; defaults to $POWERKIT_DATA or the shipped data.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Budget CSV: country,year,exp,exp_adj,agri,income.
        #[arg(long, required_unless_present = "synthetic", conflicts_with = "synthetic")]
        shares: Option<PathBuf>,
        /// Generate synthetic budget shares instead of reading them.
        #[arg(long)]
        synthetic: bool,
        #[arg(long, default_value_t = 2012, requires = "synthetic")]
        seed: u64,
        /// Also write the synthetic budget shares here.
        #[arg(long, requires = "synthetic")]
        write_shares: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fits the budget-share equation on a panel CSV.
    Fit {
        #[arg(long)]
        panel: PathBuf,
        #[arg(long, value_enum, default_value_t = Dep::Exp)]
        dep: Dep,
        #[arg(long, value_enum, default_value_t = Power::Ssi)]
        power: Power,
        #[arg(long, value_enum, default_value_t = Model::Ols)]
        model: Model,
        #[arg(long, value_enum, default_value_t = Cluster::Country)]
        cluster: Cluster,
        /// Append marginal effects of power, agri and income.
        #[arg(long)]
        margins: bool,
        #[arg(long, value_enum, default_value_t = At::Average)]
        at: At,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dep {
    Exp,
    ExpAdj,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Power {
    Ssi,
    Nucl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    /// Pooled least squares.
    Ols,
    /// Least squares with enlargement dummies and power interactions.
    OlsD,
    /// Fractional probit.
    Glm,
    /// Heteroskedastic fractional probit with enlargement terms.
    Fhetprob,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cluster {
    Country,
    None,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum At {
    Average,
    Means,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(out) = e.output() {
                print!("{out}");
            }
            eprintln!("powerkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
