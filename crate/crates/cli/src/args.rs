use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mixcay",
    version,
    about = "Integrality and exact spectra of mixed Cayley graphs over finite abelian groups"
)]
pub struct Cli {
    /// Output format; each command accepts a subset.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(flatten)]
    pub limits: LimitArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Largest group order for dense spectrum and matrix operations.
    #[arg(long, global = true, env = "MIXCAY_MAX_ORDER", default_value_t = 4096)]
    pub max_order: u64,

    /// Largest group order accepted by `enumerate`.
    #[arg(long, global = true, env = "MIXCAY_MAX_ENUMERATION_ORDER", default_value_t = 64)]
    pub max_enumeration_order: u64,

    /// Largest number of symbol sets `enumerate` will list.
    #[arg(long, global = true, env = "MIXCAY_MAX_SETS", default_value_t = 1 << 20)]
    pub max_sets: u64,
}

impl LimitArgs {
    pub fn limits(&self) -> mixcay::Limits {
        mixcay::Limits {
            max_dense_order: self.max_order,
            max_enumeration_order: self.max_enumeration_order,
            max_enumerated_sets: self.max_sets,
        }
    }
}

#[derive(Debug, Args)]
pub struct GroupSetArgs {
    /// Group, e.g. `Z12` or `Z2xZ4`.
    pub group: String,

    /// Symbol set: elements separated by `;`, coordinates by `,`
    /// (`1,1;1,3` in Z2xZ4). Cyclic groups also accept `1,2`. Empty means ∅.
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    ExhaustiveSkew,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, exponent, |Γ(4)| and the numbers of atoms and classes.
    GroupInfo { group: String },

    /// The atoms [x]: generators of each cyclic subgroup.
    Atoms { group: String },

    /// The classes ⟦x⟧ for x of order divisible by 4.
    Classes { group: String },

    /// Structural integrality verdict with witnesses.
    Check {
        #[command(flatten)]
        target: GroupSetArgs,

        /// Also decide integrality from the exact spectrum and compare.
        #[arg(long)]
        spectral_verify: bool,
    },

    /// Exact eigenvalues, one per character.
    Spectrum {
        #[command(flatten)]
        target: GroupSetArgs,

        /// Also run the Jacobi eigensolver and report the largest gap.
        #[arg(long)]
        numeric_oracle: bool,
    },

    /// Every integral symbol set, by size then lexicographically.
    Enumerate {
        group: String,

        /// Print only the number of integral sets.
        #[arg(long)]
        count_only: bool,
    },

    /// Compare the structural and spectral verdicts over many symbol sets.
    Crosscheck {
        group: String,

        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,

        /// Random: number of samples (default 500). Exhaustive: upper bound
        /// on the number of sets (default 2^20).
        #[arg(long)]
        budget: Option<u64>,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Also compare each exact spectrum with the Jacobi eigenvalues.
        #[arg(long)]
        numeric_oracle: bool,

        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },

    /// Verdicts and spectra of random sets and their images under the
    /// Chinese-remainder isomorphism between two groups.
    Isocheck {
        source: String,
        target: String,

        #[arg(long, default_value_t = 100)]
        samples: u64,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Hermitian adjacency matrix as DOT.
    ExportDot {
        #[command(flatten)]
        target: GroupSetArgs,
    },

    /// Hermitian adjacency matrix as CSV over {0, 1, i, -i}.
    ExportCsv {
        #[command(flatten)]
        target: GroupSetArgs,
    },
}
