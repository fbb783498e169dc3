//! `qhs-lab`: colourings of right-angled polytopes and the rational homology
//! spheres they define.
//!
//! Exit status is 0 for an affirmative verdict, 1 for a negative one and 2
//! for unusable input.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qhs-lab", version, about = "Colourings of right-angled polytopes and rational homology spheres")]
struct Cli {
    /// Worker threads (default: available parallelism). QHS_LAB_THREADS
    /// takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Properness, orientability, Betti numbers and the QHS verdict.
    Check {
        #[command(flatten)]
        input: ColouringInput,
        /// Fail unless the colouring defines a rational homology sphere.
        #[arg(long)]
        qhs: bool,
        #[arg(long)]
        json: bool,
    },
    /// Rational Betti numbers of the manifold and of every `K_ω`.
    Betti {
        #[command(flatten)]
        input: ColouringInput,
        #[arg(long)]
        json: bool,
    },
    /// Automorphisms of the polytope, or the admissible group of a colouring.
    Symmetries {
        #[arg(long)]
        polytope: Option<String>,
        #[arg(long)]
        colouring: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// One representative per class of proper odd-column colourings.
    Enumerate {
        #[arg(long)]
        polytope: String,
        #[arg(long)]
        rank: usize,
        /// Keep only rational homology spheres.
        #[arg(long)]
        qhs: bool,
        /// Append the number of classes per admissible group.
        #[arg(long)]
        classify_sym: bool,
        /// Keep only classes whose admissible group has at least this order.
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        /// Disable two-colour cycle pruning.
        #[arg(long)]
        no_prune: bool,
        /// Vertex (1-based) whose facets receive e1, e2, e3.
        #[arg(long, default_value_t = 1)]
        base_vertex: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        out: Format,
    },
    /// Colourings invariant under a given symmetry.
    Construct {
        #[arg(long)]
        polytope: String,
        /// Facet permutation (cycles or image list, 1-based), or a rotation
        /// axis `face:F`, `edge:F,G`, `vertex:F,G,H`.
        #[arg(long)]
        symmetry: String,
        #[arg(long)]
        rank: usize,
        /// Lines `F colour`: 1-based facet and a column bit string.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long)]
        qhs: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        out: Format,
    },
    /// Check the admissible group of a QHS colouring against the known
    /// restrictions.
    Audit {
        #[command(flatten)]
        input: ColouringInput,
        /// Report defects as warnings and exit 0.
        #[arg(long)]
        audit_soft: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct ColouringInput {
    /// cube, dodecahedron, simplex3, lobell:<N> or file:<path>. Optional
    /// when the colouring file has a `polytope:` header.
    #[arg(long)]
    polytope: Option<String>,
    #[arg(long)]
    colouring: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

fn init_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let env = match std::env::var("QHS_LAB_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| anyhow::anyhow!("QHS_LAB_THREADS={v:?} is not a count"))?),
        Err(_) => None,
    };
    if let Some(n) = env.or(flag) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verdict = init_threads(cli.threads).and_then(|()| commands::run(cli.command));
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(commands::take_output().as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        _ => {}
    }
    match verdict {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
