use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cycnorm_core::perm::DEFAULT_SUBGROUP_CAP;
use cycnorm_core::scheme::DEFAULT_AUT_DEGREE_CAP;

#[derive(Parser, Debug)]
#[command(name = "cycnorm", version, about = "Cyclotomic association schemes over finite commutative rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Omit the generation timestamp so output is byte-reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Largest ring on which the brute-force automorphism search runs.
    #[arg(long, global = true, default_value_t = DEFAULT_AUT_DEGREE_CAP)]
    pub max_aut: usize,

    /// Largest unit group whose subgroups are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBGROUP_CAP)]
    pub subgroup_cap: usize,

    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a ring: units, radical, socle, ideals, automorphisms.
    Ring {
        #[arg(long)]
        ring: String,
    },
    /// List the subgroups of the unit group.
    Subgroups {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Print the color matrix of Cyc(K, R).
    Scheme(Instance),
    /// Compute the automorphism group of Cyc(K, R).
    Aut {
        #[command(flatten)]
        instance: Instance,
        /// Also list every group element (refused above 10^6 elements).
        #[arg(long)]
        elements: bool,
    },
    /// Classify normality by theorem and by brute force.
    Classify(Selection),
    /// Run property suites.
    Verify {
        /// Suite name or alias; repeatable; "all" runs every suite.
        #[arg(long, required = true)]
        suite: Vec<String>,
        #[command(flatten)]
        selection: Selection,
    },
}

#[derive(Args, Debug)]
pub struct Instance {
    #[arg(long)]
    pub ring: String,
    /// Subgroup: all, 1, gens:<e1>,<e2>,... or elems:<e1>,<e2>,...
    #[arg(long = "K", default_value = "all")]
    pub k: String,
}

#[derive(Args, Debug)]
pub struct Selection {
    /// Ring spec; repeatable.
    #[arg(long)]
    pub ring: Vec<String>,
    /// Restrict to one subgroup; every subgroup when omitted.
    #[arg(long = "K")]
    pub k: Option<String>,
    /// Use the built-in ring list when no --ring is given.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, value_enum, default_value_t = Filter::All)]
    pub filter: Filter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    PureOnly,
}

/// A malformed request that the core library did not see.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}
