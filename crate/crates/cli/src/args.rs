use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "halting-lab", version)]
#[command(about = "Universal functions, halting sets and natural densities over counter machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A program given either as a `.cm` file or by Gödel index.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ProgramSource {
    /// Counter-machine program file
    #[arg(long, value_name = "FILE")]
    pub program: Option<PathBuf>,

    /// Gödel index of the program
    #[arg(long, value_name = "G")]
    pub index: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a program, or a universal function, on one input
    Eval {
        /// Counter-machine program file
        #[arg(long, value_name = "FILE", conflicts_with = "universal")]
        program: Option<PathBuf>,

        /// base_v, square_embed, phi_pullback or mixed:<file.cm>
        #[arg(long, required_unless_present = "program")]
        universal: Option<String>,

        #[arg(long)]
        input: String,

        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[command(flatten)]
        output: Output,
    },

    /// Print the Gödel index of a program
    Encode {
        #[arg(long, value_name = "FILE")]
        program: PathBuf,

        #[command(flatten)]
        output: Output,
    },

    /// Print the program named by a Gödel index
    Decode {
        #[arg(long, value_name = "G")]
        index: String,

        #[command(flatten)]
        output: Output,
    },

    /// Exact density of a decidable set on [1, N]
    Density {
        /// Registry name or program:<file.cm>
        #[arg(long)]
        set: String,

        /// One or more N, comma separated
        #[arg(long, required = true, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
        n: Vec<u64>,

        /// Step budget for program-decided sets (mandatory for them)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        predicate_budget: Option<u64>,

        #[command(flatten)]
        output: Output,
    },

    /// Budgeted lower bound on the density of a halting set
    HaltingDensity {
        #[arg(long)]
        universal: String,

        /// One or more N, comma separated
        #[arg(long, required = true, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
        n: Vec<u64>,

        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[command(flatten)]
        output: Output,
    },

    /// Check an almost-decidability witness (R, d) against budgeted halting
    Witness {
        #[command(flatten)]
        witness: WitnessArgs,

        #[command(flatten)]
        output: Output,
    },

    /// Witness check plus |p_N(R) - r| <= tolerance
    RCheck {
        #[command(flatten)]
        witness: WitnessArgs,

        /// Target density r, e.g. 1/2
        #[arg(long)]
        r_density: String,

        #[arg(long, default_value = "1/100")]
        tolerance: String,

        #[command(flatten)]
        output: Output,
    },

    /// Dovetail-search compiler: find y <= k*x with U(y) = F(x)
    CompileCu {
        #[arg(long)]
        universal: String,

        #[command(flatten)]
        function: ProgramSource,

        /// Inputs x, comma separated
        #[arg(long, required = true, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
        x: Vec<u64>,

        /// Linear bound; defaults to 2^(2*bitlen(g)+1)
        #[arg(long)]
        k: Option<u64>,

        /// Dovetail round cap
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[command(flatten)]
        output: Output,
    },

    /// Exhaustively search y <= k*x with U(y) = F(x) for x in [1, x-max]
    ProbeProgrammable {
        #[arg(long)]
        universal: String,

        #[command(flatten)]
        function: ProgramSource,

        #[arg(long)]
        k: u64,

        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x_max: u64,

        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[command(flatten)]
        output: Output,
    },

    /// List the first elements of a halting set in dovetail order
    EnumerateDomain {
        #[arg(long)]
        universal: String,

        /// How many elements to emit
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,

        /// Dovetail round cap
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[command(flatten)]
        output: Output,
    },

    /// End-to-end experiments
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub universal: String,

    /// Decidable set R: registry name or program:<file.cm>
    #[arg(long)]
    pub r: String,

    /// Decider d for R ∩ Halt(U)
    #[arg(long)]
    pub d: String,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,

    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    /// Step budget for program-decided sets (mandatory for them)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub predicate_budget: Option<u64>,

    /// Density claimed for R, recorded in the report
    #[arg(long, default_value = "1")]
    pub claimed_density: String,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// n in Halt(V) => theta(n) in nonsquares ∩ Halt(U_phi), on sampled n
    PhiReduction {
        /// Scan n in [1, N] for halting indices
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,

        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,

        /// Shuffle the halting indices before sampling
        #[arg(long)]
        seed: Option<u64>,

        #[command(flatten)]
        output: Output,
    },

    /// The nonsquares as a witness for the square embedding
    SquareEmbed {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,

        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,

        #[command(flatten)]
        output: Output,
    },
}
