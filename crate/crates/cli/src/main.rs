use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use curvimom::quadrature::QuadratureConfig;
use curvimom_cli::config::{Format, RunConfig, Units};
use curvimom_cli::{check, commands, Failure, Outcome};

/// Canonical momentum operators in curvilinear coordinates, verified by quadrature.
#[derive(Parser)]
#[command(name = "curvimom", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Units::Atomic)]
    units: Units,
    /// JSON file `{"hbar": …, "m": …, "e2": …}`; required with `--units si`.
    #[arg(long, global = true, value_name = "PATH")]
    si_constants: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 120)]
    radial_order: usize,
    #[arg(long, global = true, default_value_t = 64)]
    theta_order: usize,
    #[arg(long, global = true, default_value_t = 32)]
    phi_order: usize,
    /// Defaults: json for expect, csv for tables, text for check.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Expectation value of one momentum operator, e.g. `expect canonical:r hydrogen:n=2,L=1,M=0`.
    Expect {
        /// `canonical:<coord>` or `naive:<coord>`.
        operator: String,
        /// `hydrogen:n=…,L=…,M=…` or `trial:seed=…[,system=…]`.
        state: String,
    },
    /// Hydrogen ⟨1/r²⟩, ⟨1/r³⟩, force balance and bound-state momenta for n ≤ nmax.
    HydrogenTable {
        #[arg(long, default_value_t = 6)]
        nmax: u32,
    },
    /// Runs every invariant suite; exit 0 iff all pass.
    Check,
    /// ⟨p_θ⟩ on every Y_LM with L ≤ lmax.
    PThetaScan {
        #[arg(long, default_value_t = 6)]
        lmax: u32,
    },
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let g = cli.global;
    let quadrature = QuadratureConfig {
        radial_order: g.radial_order,
        theta_order: g.theta_order,
        phi_order: g.phi_order,
    };
    let cfg = RunConfig::new(g.units, quadrature, g.format, g.seed, g.si_constants.as_deref())?;
    match cli.command {
        Command::Expect { operator, state } => commands::expect(&operator, &state, &cfg),
        Command::HydrogenTable { nmax } => commands::hydrogen_table(nmax, &cfg),
        Command::Check => check::check(&cfg),
        Command::PThetaScan { lmax } => commands::p_theta_scan(lmax, &cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(curvimom_cli::exit::SUITE_FAILURE);
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("curvimom: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
