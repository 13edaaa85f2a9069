//! `cauchon`: command-line front end for totally nonnegative cells,
//! Cauchon diagrams, restricted permutations, quantum matrices and the
//! Poisson bracket on matrices.
//!
//! Exit status: 0 affirmative verdict, 1 negative verdict or failed check,
//! 2 usage or input error, 3 enumeration guard exceeded.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::Report;

#[derive(Parser)]
#[command(name = "cauchon", version, about = "Exact tools for totally nonnegative matrices and Cauchon diagrams")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Backend {
    Exact,
    Probabilistic,
    Prefiltered,
}

#[derive(Args, Clone, Copy, Debug)]
pub struct ZeroTestArgs {
    /// How identically vanishing minors are decided.
    #[arg(long, value_enum, default_value_t = Backend::Exact)]
    backend: Backend,
    /// Evaluation points for the probabilistic backend.
    #[arg(long, default_value_t = 3)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ZeroTestArgs {
    pub fn zero_test(self) -> cauchon::derivations::ZeroTest {
        use cauchon::derivations::ZeroTest;
        match self.backend {
            Backend::Exact => ZeroTest::Exact,
            Backend::Probabilistic => ZeroTest::Probabilistic { points: self.points, seed: self.seed },
            Backend::Prefiltered => ZeroTest::Prefiltered { seed: self.seed },
        }
    }
}

#[derive(Args, Clone, Copy, Debug)]
pub struct Shape {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: usize,
}

#[derive(Args, Clone, Copy, Debug)]
pub struct QShape {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List all minors (or the initial minors) of a matrix.
    Minors {
        /// CSV or JSON file, or inline rows like `1,2;3,4`.
        matrix: String,
        #[arg(long)]
        initial: bool,
    },
    /// Total positivity through the initial minors.
    TpCheck { matrix: String },
    /// Total nonnegativity by brute force and by deleting derivations.
    TnnCheck {
        matrix: String,
        #[arg(long, value_enum, default_value_t = TnnMethod::Both)]
        method: TnnMethod,
    },
    /// Run the restoration algorithm.
    Restore {
        matrix: String,
        /// Print every intermediate matrix.
        #[arg(long)]
        trace: bool,
    },
    /// Run the deleting-derivations algorithm.
    Delete {
        matrix: String,
        #[arg(long)]
        trace: bool,
    },
    /// The matrix T_C of a diagram.
    Tc {
        #[arg(long)]
        diagram: String,
        /// Generic entries t[i,a] on the white cells.
        #[arg(long, conflicts_with = "ones")]
        symbolic: bool,
        /// All white entries equal to 1.
        #[arg(long)]
        ones: bool,
    },
    /// Minors of T_C that vanish identically.
    Vanish {
        #[arg(long)]
        diagram: String,
        #[command(flatten)]
        zero: ZeroTestArgs,
    },
    #[command(subcommand)]
    Diagram(DiagramCmd),
    #[command(subcommand)]
    Network(NetworkCmd),
    #[command(subcommand)]
    Perm(PermCmd),
    #[command(subcommand)]
    Cells(CellsCmd),
    #[command(subcommand)]
    Quantum(QuantumCmd),
    #[command(subcommand)]
    Poisson(PoissonCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TnnMethod {
    Brute,
    Derivations,
    Both,
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// All m x p Cauchon diagrams.
    Enum {
        #[command(flatten)]
        shape: Shape,
        /// Only print the count.
        #[arg(long)]
        count: bool,
    },
    /// Whether a black/white grid is a Cauchon diagram.
    Check { diagram: String },
}

#[derive(Subcommand)]
enum NetworkCmd {
    /// The planar network of a diagram (DOT in text mode).
    FromDiagram {
        #[arg(long)]
        diagram: String,
    },
    /// Weighted path matrix of a network.
    PathMatrix {
        #[arg(long)]
        network: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Compare minors of the path matrix with non-intersecting path counts.
    Lindstrom {
        #[arg(long)]
        network: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
        /// A single minor such as `[1,2|1,2]`; all minors when omitted.
        #[arg(long, conflicts_with_all = ["rows", "cols"])]
        minor: Option<String>,
        /// Sources of a single minor, e.g. `1,2` (with `--cols`).
        #[arg(long, requires = "cols")]
        rows: Option<String>,
        #[arg(long, requires = "rows")]
        cols: Option<String>,
    },
}

#[derive(Subcommand)]
enum PermCmd {
    /// The restricted permutations S(m,p).
    Enum {
        #[command(flatten)]
        shape: Shape,
    },
    /// Permutation of a diagram's pipe dream.
    Pipedream {
        #[arg(long)]
        diagram: String,
    },
    /// The diagram whose pipe dream gives a permutation.
    Inverse {
        #[command(flatten)]
        shape: Shape,
        perm: String,
    },
    /// The minor family M(w).
    Mw {
        #[command(flatten)]
        shape: Shape,
        perm: String,
    },
    /// Compare two permutations in Bruhat order, or print the rank
    /// profile of S(m,p) when none are given.
    Bruhat {
        #[command(flatten)]
        shape: Shape,
        u: Option<String>,
        w: Option<String>,
    },
}

#[derive(Subcommand)]
enum CellsCmd {
    /// All admissible families with their diagrams and permutations.
    Enum {
        #[command(flatten)]
        shape: Shape,
    },
    /// Whether a family of minors is admissible.
    Admissible {
        #[command(flatten)]
        shape: Shape,
        /// Family such as `[2|2]` or `{[1|2],[2|1]}`; empty for none.
        family: String,
    },
    /// The cell of a TNN matrix.
    Of { matrix: String },
    /// Check vanishing families, M(w) and witness matrices agree.
    Verify {
        m: usize,
        p: usize,
        #[command(flatten)]
        zero: ZeroTestArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// Normal form of an expression in the generators.
    Nf {
        expr: String,
        #[command(flatten)]
        shape: QShape,
    },
    /// A quantum minor.
    Minor {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
        #[command(flatten)]
        shape: QShape,
    },
    /// The commutator fg - gf.
    Comm {
        f: String,
        g: String,
        #[command(flatten)]
        shape: QShape,
    },
}

#[derive(Subcommand)]
enum PoissonCmd {
    /// The bracket {f, g}.
    Bracket {
        f: String,
        g: String,
        #[command(flatten)]
        shape: QShape,
    },
    /// The Jacobi sum of three polynomials.
    Jacobi {
        f: String,
        g: String,
        h: String,
        #[command(flatten)]
        shape: QShape,
    },
    /// Compare commutators of quantum generators with the bracket.
    Semiclassical {
        #[command(flatten)]
        shape: QShape,
    },
    /// Check a path is an integral curve of a Hamiltonian.
    Flow {
        #[arg(long)]
        path: String,
        #[arg(long = "H", visible_alias = "hamiltonian")]
        h: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every cross-check at one shape.
    All {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        zero: ZeroTestArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn set_jobs(jobs: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn dispatch(cmd: Command) -> anyhow::Result<Report> {
    use commands as c;
    match cmd {
        Command::Minors { matrix, initial } => c::minors(&matrix, initial),
        Command::TpCheck { matrix } => c::tp_check(&matrix),
        Command::TnnCheck { matrix, method } => c::tnn_check(&matrix, method),
        Command::Restore { matrix, trace } => c::restore(&matrix, trace),
        Command::Delete { matrix, trace } => c::delete(&matrix, trace),
        Command::Tc { diagram, ones, .. } => c::tc(&diagram, ones),
        Command::Vanish { diagram, zero } => c::vanish(&diagram, zero.zero_test()),
        Command::Diagram(DiagramCmd::Enum { shape, count }) => c::diagram_enum(shape.m, shape.p, count),
        Command::Diagram(DiagramCmd::Check { diagram }) => c::diagram_check(&diagram),
        Command::Network(NetworkCmd::FromDiagram { diagram }) => c::network_from_diagram(&diagram),
        Command::Network(NetworkCmd::PathMatrix { network, diagram }) => {
            c::path_matrix(network.as_deref(), diagram.as_deref())
        }
        Command::Network(NetworkCmd::Lindstrom { network, diagram, minor, rows, cols }) => {
            let minor = match (minor, rows, cols) {
                (Some(m), _, _) => Some(m),
                (None, Some(r), Some(c)) => Some(format!("[{r}|{c}]")),
                _ => None,
            };
            c::lindstrom(network.as_deref(), diagram.as_deref(), minor.as_deref())
        }
        Command::Perm(PermCmd::Enum { shape }) => c::perm_enum(shape.m, shape.p),
        Command::Perm(PermCmd::Pipedream { diagram }) => c::pipedream(&diagram),
        Command::Perm(PermCmd::Inverse { shape, perm }) => c::perm_inverse(shape.m, shape.p, &perm),
        Command::Perm(PermCmd::Mw { shape, perm }) => c::mw(shape.m, shape.p, &perm),
        Command::Perm(PermCmd::Bruhat { shape, u, w }) => c::bruhat(shape.m, shape.p, u.as_deref(), w.as_deref()),
        Command::Cells(CellsCmd::Enum { shape }) => c::cells_enum(shape.m, shape.p),
        Command::Cells(CellsCmd::Admissible { shape, family }) => c::admissible(shape.m, shape.p, &family),
        Command::Cells(CellsCmd::Of { matrix }) => c::cell_of(&matrix),
        Command::Cells(CellsCmd::Verify { m, p, zero, jobs }) => {
            set_jobs(jobs)?;
            c::cells_verify(m, p, zero.zero_test())
        }
        Command::Quantum(QuantumCmd::Nf { expr, shape }) => c::quantum_nf(shape.m, shape.p, &expr),
        Command::Quantum(QuantumCmd::Minor { rows, cols, shape }) => c::quantum_minor(shape.m, shape.p, &rows, &cols),
        Command::Quantum(QuantumCmd::Comm { f, g, shape }) => c::quantum_comm(shape.m, shape.p, &f, &g),
        Command::Poisson(PoissonCmd::Bracket { f, g, shape }) => c::poisson_bracket(shape.m, shape.p, &f, &g),
        Command::Poisson(PoissonCmd::Jacobi { f, g, h, shape }) => c::poisson_jacobi(shape.m, shape.p, &f, &g, &h),
        Command::Poisson(PoissonCmd::Semiclassical { shape }) => c::semiclassical(shape.m, shape.p),
        Command::Poisson(PoissonCmd::Flow { path, h, samples }) => c::flow(&path, &h, samples),
        Command::Verify(VerifyCmd::All { shape, zero, jobs }) => {
            set_jobs(jobs)?;
            c::verify_all(shape.m, shape.p, zero.zero_test())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> (i32, &'static str) {
    match err.downcast_ref::<cauchon::Error>() {
        Some(cauchon::Error::Resource(_)) => (3, "resource"),
        Some(cauchon::Error::NotTnn { .. }) => (1, "not_tnn"),
        Some(cauchon::Error::Invariant(_)) => (1, "invariant"),
        Some(cauchon::Error::Parse(_)) => (2, "parse"),
        _ => (2, "usage"),
    }
}

fn main() {
    let cli = Cli::parse();
    let format = cli.format;
    let code = match dispatch(cli.command) {
        Ok(report) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serialisable")),
                Format::Text => print!("{}", report.text),
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(err) => {
            let (code, kind) = exit_code(&err);
            if format == Format::Json {
                println!("{}", json!({ "error": kind, "message": format!("{err:#}") }));
            }
            eprintln!("error: {err:#}");
            code
        }
    };
    std::process::exit(code);
}
