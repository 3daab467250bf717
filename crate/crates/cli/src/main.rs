mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{emit_error, emit_report};

#[derive(Parser, Debug)]
#[command(name = "weilres", version, about = "Weil restriction calculator: orbit decompositions, polynomial maps, binomial rings, Brauer data")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Include wall-clock timing in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct ContextArgs {
    /// Galois context file (JSON).
    #[arg(long)]
    pub context: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbits of G on label functions G/H -> {1..n}.
    Orbits {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        n: u32,
        /// Bound on n^[G:H] for explicit enumeration.
        #[arg(long, default_value_t = weilres::orbit::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Decomposition of the restriction of l^n.
    Restrict {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        n: u32,
        /// Render coefficients as U_R(..) for this ring label (text output only).
        #[arg(long)]
        ring_label: Option<String>,
    },
    /// Image of the class sum m_i [l] under restriction.
    RestrictClass {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Comma-separated multiplicities, e.g. 2,1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        m: Vec<i64>,
    },
    /// Which intermediate fields occur as orbit stabilizers.
    Coverage {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        n: u32,
    },
    /// Checks sum over orbits of [G:stab] = n^d.
    Dimcheck {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        n: u32,
    },
    /// Decomposition for a scheme with a full exceptional collection.
    Excoll {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        scheme: String,
        /// Length of the exceptional collection.
        #[arg(long)]
        n: u32,
        /// Dimension of the scheme, for the Artin-Tate ambient.
        #[arg(long)]
        dim: Option<u32>,
    },
    /// Degree certificate, extension and evaluation of a polynomial map.
    Polymap(PolymapArgs),
    /// Binomial operations and axiom checks in a binomial ring.
    Binom(BinomArgs),
    /// Central simple algebras and Brauer models.
    Csa {
        /// Extra model file (single model or {"schema_version":1,"models":[..]}).
        #[arg(long, global = true)]
        models: Option<PathBuf>,
        #[command(subcommand)]
        op: CsaOp,
    },
}

#[derive(Args, Debug)]
pub struct PolymapArgs {
    /// Stages joined by `>>`: pow:<d>, scale:<c>, const:<c>, mul, id, zero, restrict-class.
    #[arg(long)]
    pub expr: String,
    /// Needed by the restrict-class stage.
    #[arg(long)]
    pub context: Option<PathBuf>,
    /// Alphabet size for the restrict-class stage.
    #[arg(long)]
    pub n: Option<u32>,
    /// Integer point(s) at which to evaluate the extension; repeatable, e.g. --eval -2 --eval 3,1.
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Vec<String>,
    /// Binomial ring for scalar extension (z, q, zloc:<r>, zp:<p>:<K>[:<guard>]).
    #[arg(long)]
    pub ring: Option<String>,
    /// Point(s) of the ring at which to evaluate; comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub r#box: u32,
    #[arg(long, default_value_t = 8)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct BinomArgs {
    /// z, q, zloc:<r>, zp:<p>:<K>[:<guard>]
    #[arg(long, default_value = "z")]
    pub ring: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Run the sampled axiom suite.
    #[arg(long)]
    pub axioms: bool,
    /// Run torsion-freeness and closure checks.
    #[arg(long)]
    pub sanity: bool,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum CsaOp {
    /// Generator of Hom(U(A), U(B)), optionally checking a value.
    Hom {
        #[arg(long)]
        field: String,
        /// Source object as <class>[:<degree>]; degree defaults to the index.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
    },
    /// Weil restriction of a division object from l to k.
    Restrict {
        /// Base field model.
        #[arg(long)]
        k: String,
        /// Extension field model.
        #[arg(long)]
        l: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        class: String,
        /// Also restrict this hom value out of U(l).
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
    },
    /// Base change of a hom along a declared restriction map.
    Basechange {
        #[arg(long)]
        field: String,
        #[arg(long)]
        to_field: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// Whether U(A) and U(B) are isomorphic.
    Iso {
        #[arg(long)]
        field: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match commands::run(&cli.command) {
        Ok(out) => {
            let elapsed = cli.timing.then(|| started.elapsed());
            emit_report(&out, cli.format, elapsed);
            ExitCode::SUCCESS
        }
        Err(err) => {
            emit_error(&err, cli.format);
            ExitCode::from(err.exit_code())
        }
    }
}
