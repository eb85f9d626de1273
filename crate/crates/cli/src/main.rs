//! `knaster`: command-line access to the knaster-core operations.
//!
//! Every verb prints one JSON document on standard output. Domain errors exit
//! with status 1 and print `ErrorName: message` on standard error; malformed
//! invocations exit with status 2.

mod input;
mod ops;

use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::ops::CliError;

#[derive(Parser, Debug)]
#[command(name = "knaster", version, about = "Pointed linear graphs, their amalgams, Ramsey witnesses and PL interval maps")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker count; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Re-verify a previously emitted output of this verb instead of printing a new one.
    #[arg(long, global = true, value_name = "FILE")]
    pub check: Option<String>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CategoryArg {
    K,
    Kstar,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Verb {
    /// Check a value string against the morphism definition.
    Validate {
        #[arg(long)]
        values: String,
        #[arg(long)]
        cod: usize,
    },
    /// Compose two morphisms, outer after inner.
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        outer_cod: usize,
        #[arg(long)]
        inner: String,
        #[arg(long)]
        inner_cod: usize,
    },
    /// List or count the morphisms between two graphs.
    Enumerate {
        #[arg(long)]
        dom: usize,
        #[arg(long)]
        cod: usize,
        #[arg(long)]
        degree: Option<usize>,
        /// Print at most this many morphisms.
        #[arg(long)]
        limit: Option<usize>,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Amalgamate two morphisms with a common codomain.
    Amalgamate {
        #[arg(long)]
        f: String,
        #[arg(long)]
        f_cod: usize,
        #[arg(long)]
        g: String,
        #[arg(long)]
        g_cod: usize,
    },
    /// A common preimage of two graphs.
    JointProject {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Build a generic tower by discharging requests.
    GenericBuild {
        #[arg(long, value_enum, default_value = "k")]
        category: CategoryArg,
        #[arg(long)]
        budget: usize,
        /// Continue a previously built tower (same seed and size bound).
        #[arg(long, value_name = "FILE")]
        resume: Option<String>,
    },
    /// Re-check every bond and certificate of a tower.
    GenericVerify {
        #[arg(long, value_name = "FILE")]
        tower: String,
    },
    /// Separate the fibers of two vertices of a tower level.
    Separate {
        #[arg(long, value_name = "FILE")]
        tower: String,
        #[arg(long)]
        level: usize,
        #[arg(short = 'x')]
        x: usize,
        #[arg(short = 'y')]
        y: usize,
        /// Levels added to the tower budget first.
        #[arg(long, default_value_t = 1)]
        extra_budget: usize,
    },
    /// Stage-one data of an automorphism of degree p/q.
    RealizeDegree {
        #[arg(long, value_name = "FILE")]
        tower: Option<String>,
        #[arg(short = 'p')]
        p: usize,
        #[arg(short = 'q')]
        q: usize,
        /// Levels added to the tower budget first.
        #[arg(long, default_value_t = 1)]
        extra_budget: usize,
    },
    /// Least n with the Ramsey property for increasing injections.
    RamseyNumber {
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'd')]
        d: usize,
        #[arg(long, env = "KNASTER_RAMSEY_CAP", default_value_t = 10)]
        cap: usize,
    },
    /// Witness object C for weighted objects A and B.
    RamseyWitness {
        #[arg(long)]
        a_size: usize,
        #[arg(long, default_value = "1")]
        a_weight: String,
        #[arg(long)]
        b_size: usize,
        #[arg(long, default_value = "1")]
        b_weight: String,
        #[arg(short = 'd')]
        d: usize,
        #[arg(long, env = "KNASTER_RAMSEY_CAP", default_value_t = 10)]
        cap: usize,
    },
    /// Find g: C -> B with Epi(B, A) ∘ g monochromatic.
    MonoSearch {
        #[arg(long)]
        a_size: usize,
        #[arg(long, default_value = "1")]
        a_weight: String,
        #[arg(long)]
        b_size: usize,
        #[arg(long, default_value = "1")]
        b_weight: String,
        #[arg(long)]
        c_size: usize,
        #[arg(long, default_value = "1")]
        c_weight: String,
        #[arg(short = 'd')]
        d: usize,
        /// `random`, `const:COLOR`, or `@FILE` holding a coloring.
        #[arg(long, default_value = "random")]
        coloring: String,
    },
    /// rho(deg f) mod n.
    DegreeColor {
        #[arg(long)]
        values: String,
        #[arg(long)]
        cod: usize,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Check that the degree coloring attains all n colors.
    InfiniteDegree {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        c_size: usize,
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// The standard tent map of degree d.
    Tent {
        #[arg(short = 'd')]
        d: usize,
    },
    /// Discretize a PL map over two uniform chains.
    Discretize {
        /// Tent degree; alternative to --map.
        #[arg(long, conflicts_with = "map")]
        degree: Option<usize>,
        #[arg(long, value_name = "FILE")]
        map: Option<String>,
        #[arg(long)]
        fine: usize,
        #[arg(long)]
        coarse: usize,
        #[arg(long, default_value = "1/6")]
        overlap: String,
    },
    /// The PL map of a morphism.
    Lift {
        #[arg(long)]
        values: String,
        #[arg(long)]
        cod: usize,
    },
    /// Build and validate a chain tower over tent maps.
    ChainTower {
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long)]
        levels: usize,
        /// Include every link in the output.
        #[arg(long)]
        full: bool,
    },
    /// Whether the tent maps of degrees c and d commute.
    Commute {
        #[arg(short = 'c')]
        c: usize,
        #[arg(short = 'd')]
        d: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match ops::run(&cli) {
        Ok(value) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            }
            .expect("JSON values serialize");
            match writeln!(std::io::stdout().lock(), "{text}") {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain { name, message }) => {
            eprintln!("{name}: {message}");
            ExitCode::from(1)
        }
    }
}
