//! `sftlab`: exact invariants of one-sided topological Markov shifts.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "sftlab", version, about = "Exact invariants of one-sided topological Markov shifts")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Validate a matrix file and print its irreducibility certificate.
    Validate { matrix: PathBuf },
    /// Count and list the admissible words of length k.
    Words {
        matrix: PathBuf,
        k: usize,
        /// Print at most this many words.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Smith normal form U M V = D of any matrix file.
    Snf { matrix: PathBuf },
    /// Bowen-Franks group, pointed K0 group, det(I - A) and spectral bounds.
    Invariants { matrix: PathBuf },
    /// Flow equivalence verdict.
    FlowEquiv { a: PathBuf, b: PathBuf },
    /// Continuous orbit equivalence verdict.
    Coe { a: PathBuf, b: PathBuf },
    /// Cohomology of locally constant functions.
    Cohom {
        #[command(subcommand)]
        op: CohomOp,
    },
    /// Circle actions given by their classifiers.
    Action {
        #[command(subcommand)]
        op: ActionOp,
    },
    /// Finite-state transducers between shift spaces.
    Transducer {
        #[command(subcommand)]
        op: TransducerOp,
    },
    /// Expansion of a vertex shift at a vertex.
    Expand {
        matrix: PathBuf,
        /// Vertex label.
        #[arg(long, default_value = "1")]
        vertex: String,
    },
    /// Elementary equivalence A = CD, B = DC.
    Elementary {
        c: PathBuf,
        d: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Lex)]
        order: Order,
    },
    /// Transfer maps of moves.
    Transfer {
        #[command(subcommand)]
        op: TransferOp,
    },
    /// Bounded search for a chain of elementary equivalences.
    SseSearch {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 3)]
        inner_dim: usize,
        #[arg(long, default_value_t = 2)]
        entry: u32,
        #[arg(long, default_value_t = 3)]
        chain: usize,
    },
    /// Randomized lemma suite.
    Selftest {
        /// Instances per check.
        #[arg(long, default_value_t = 25)]
        instances: usize,
    },
}

#[derive(Subcommand)]
pub enum CohomOp {
    /// Whether [f] = [g] (or [f] = 0 without g), with a witness.
    ClassEqual { matrix: PathBuf, f: PathBuf, g: Option<PathBuf> },
    /// Whether [f] is in the positive cone and whether it is an order unit.
    Positive { matrix: PathBuf, f: PathBuf },
    /// Sum of f over one period of the periodic point (word)^inf.
    OrbitSum { matrix: PathBuf, f: PathBuf, cycle: String },
}

#[derive(Subcommand)]
pub enum ActionOp {
    /// Classifier of the product action.
    Compose { matrix: PathBuf, f: PathBuf, g: PathBuf },
    /// Cocycle conjugacy with its witness.
    Equivalent { matrix: PathBuf, f: PathBuf, g: PathBuf },
    /// Positivity of the action and whether it is an order unit.
    Positive { matrix: PathBuf, f: PathBuf },
    /// Phase exponent of S_mu, optionally evaluated at a point and time.
    Phase {
        matrix: PathBuf,
        f: PathBuf,
        word: String,
        /// Point `u(v)` following the word.
        #[arg(long)]
        point: Option<String>,
        /// Rational time `p/q`.
        #[arg(long)]
        t: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum TransducerOp {
    /// Image of an eventually periodic point `u(v)`.
    Apply { domain: PathBuf, codomain: PathBuf, transducer: PathBuf, point: String },
    /// Composition `second o first`.
    Compose {
        first_domain: PathBuf,
        middle: PathBuf,
        last_codomain: PathBuf,
        first: PathBuf,
        second: PathBuf,
    },
    /// Whether two transducers define the same map.
    Equiv {
        domain: PathBuf,
        codomain: PathBuf,
        t1: PathBuf,
        t2: PathBuf,
        #[arg(long)]
        delay_bound: Option<usize>,
    },
    /// Verify a transducer pair as an orbit equivalence and compare with the
    /// invariant verdict.
    VerifyCoe(VerifyCoeArgs),
    /// Transfer map Psi_h(f) for a transducer with orbit data k1, l1.
    Psi {
        domain: PathBuf,
        codomain: PathBuf,
        transducer: PathBuf,
        k1: PathBuf,
        l1: PathBuf,
        f: PathBuf,
    },
}

#[derive(Args)]
pub struct VerifyCoeArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub forward: PathBuf,
    pub forward_k1: PathBuf,
    pub forward_l1: PathBuf,
    pub inverse: PathBuf,
    pub inverse_k1: PathBuf,
    pub inverse_l1: PathBuf,
}

#[derive(Subcommand)]
pub enum TransferOp {
    /// phi: functions on X_{CD} to functions on X_{DC}.
    Phi { c: PathBuf, d: PathBuf, f: PathBuf },
    /// psi: functions on X_{DC} to functions on X_{CD}.
    Psi { c: PathBuf, d: PathBuf, g: PathBuf },
    /// Psi_xi: functions on the expansion to functions on the base.
    PsiXi {
        matrix: PathBuf,
        f: PathBuf,
        #[arg(long, default_value = "1")]
        vertex: String,
    },
    /// Psi_eta: functions on the base to functions on the expansion.
    PsiEta {
        matrix: PathBuf,
        f: PathBuf,
        #[arg(long, default_value = "1")]
        vertex: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Order {
    Lex,
    ReverseLex,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command, cli.seed) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&outcome.report.json()).expect("serializable"));
            } else {
                print!("{}", outcome.report.text());
            }
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_status(&e))
        }
    }
}
