use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use secant_core::exactla::{Sampling, Seed, DEFAULT_PRIMES};
use secant_core::horace::DEFAULT_DIRECT_CAP;

#[derive(Parser, Debug)]
#[command(name = "secant", version, about = "Dimensions of secant varieties of Segre products of lines")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Primes for modular sampling, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Independent random samples per prime.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[arg(long, global = true, env = "SECANT_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Include wall-clock runtimes in the output. Output is then no longer
    /// reproducible byte for byte.
    #[arg(long, global = true)]
    pub timings: bool,
}

impl Common {
    pub fn seed(&self) -> Seed {
        self.seed.map(Seed).unwrap_or_default()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec())
    }

    pub fn sampling(&self) -> Sampling {
        Sampling::new(self.primes(), self.trials as usize, self.seed())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Terracini,
    Fatpoints,
    Certified,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Terracini => "terracini",
            Method::Fatpoints => "fatpoints",
            Method::Certified => "certified",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Fixcomp,
    Lemzero,
    Substitution,
    Residue,
    Trace,
    Appendix,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension and defect of one secant variety.
    Secdim {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
    },
    /// Defect table over a range of n, with s from 1 to e*+1.
    Table {
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Largest s per row block; defaults to e*+1.
        #[arg(long)]
        s_max: Option<u32>,
        /// Cross-checks to run besides Terracini sampling.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "terracini")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = DEFAULT_DIRECT_CAP)]
        cap: u64,
    },
    /// Hilbert function of a scheme file in one degree.
    Fatpoints {
        #[arg(long)]
        file: PathBuf,
        /// Overrides the degree given in the file.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Certificate tree for the main theorem at odd s.
    Certify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u64,
        /// Direct rank computation is used when C(2d, d) is at most this.
        #[arg(long, default_value_t = DEFAULT_DIRECT_CAP)]
        cap: u64,
        /// Exit 0 when the tree has bound-only nodes but no failures.
        #[arg(long)]
        allow_bound_only: bool,
    },
    /// Individual lemma checks and the appendix sweep.
    Lemmas {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        x: Option<u32>,
        #[arg(long)]
        y: Option<u32>,
        #[arg(long)]
        i: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 5)]
        n_min: u32,
        #[arg(long, default_value_t = 64)]
        n_max: u32,
        /// The residue instance with an extra pair of simple points on a
        /// plane through e_1 and e_4.
        #[arg(long)]
        v2: bool,
        /// Number of random schemes for `lemzero`.
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
}
