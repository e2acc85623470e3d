//! `superlie` command-line workbench.
//!
//! Exit codes: 0 when every check passes, 1 for usage or input errors,
//! 2 when a mathematical check fails (nonzero residual, oracle mismatch).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "superlie", version, about = "Exact computations with Lie superalgebras")]
struct Cli {
    /// Directory for `<command>.json` and `<command>.txt` reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "SUPERLIE_JOBS")]
    jobs: Option<usize>,
    /// Print the JSON report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or verify a structure-constant table.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Quadratic and cubic Casimir elements, the operator A.
    #[command(subcommand)]
    Casimir(CasimirCmd),
    /// Kac-Moody extensions.
    #[command(subcommand)]
    Loop(LoopCmd),
    /// Shapovalov determinants and the product formula.
    #[command(subcommand)]
    Shapovalov(ShapovalovCmd),
}

#[derive(Args, Debug, Clone)]
struct AlgebraArg {
    /// Family string such as `poi(0|4)`, `sl(2|1)`, `q(2)`, or a TOML/JSON file.
    #[arg(long)]
    algebra: String,
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    Build(AlgebraArg),
    Verify(AlgebraArg),
}

#[derive(Subcommand, Debug)]
enum CasimirCmd {
    Quadratic(AlgebraArg),
    Cubic(AlgebraArg),
    Amap(AlgebraArg),
}

#[derive(Subcommand, Debug)]
enum LoopCmd {
    /// Checks that `Ω` commutes with every `tᵐe_k`, `|m| ≤ window`, and with `u`, `z`.
    Check {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Twist order `r`; `r > 1` needs a grading.
        #[arg(long, default_value_t = 1)]
        twist: u32,
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Attach the parity grading (`r = 2`) before twisting.
        #[arg(long)]
        parity_grading: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Oracle {
    Formula,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Rule {
    Literal,
    IsotropicAvoiding,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum MethodArg {
    Auto,
    Exact,
    Lines,
}

#[derive(Subcommand, Debug)]
enum ShapovalovCmd {
    /// Gram determinant on the weight `−χ` slice, factored.
    Det {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Weight literal such as `2a1 + a2`; repeatable.
        #[arg(long, required = true)]
        chi: Vec<String>,
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
        /// Extra candidate linear factor, e.g. `h1 - 1/2`; repeatable.
        #[arg(long)]
        candidate: Vec<String>,
        #[arg(long, value_enum, default_value = "literal")]
        rule: Rule,
    },
    /// The closed-form product, already factored.
    Formula {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, required = true)]
        chi: Vec<String>,
        #[arg(long, value_enum, default_value = "literal")]
        rule: Rule,
    },
    /// Singular vectors of weight `λ − χ` in the Verma module `M^λ`.
    Singular {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, required = true)]
        chi: Vec<String>,
        /// Values of the even Cartan generators, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Measures the factorization conjectures on a target.
    Conjecture {
        /// `poi03`, `poi05`, `poi_odd(n)` or `loop_poi(n,cutoff)`.
        #[arg(long)]
        target: String,
        #[arg(long, required = true)]
        chi: Vec<String>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> Result<Report, superlie::Error> {
    use commands::*;
    match &cli.command {
        Command::Algebra(AlgebraCmd::Build(a)) => algebra_build(&a.algebra),
        Command::Algebra(AlgebraCmd::Verify(a)) => algebra_verify(&a.algebra),
        Command::Casimir(CasimirCmd::Quadratic(a)) => casimir_quadratic(&a.algebra),
        Command::Casimir(CasimirCmd::Cubic(a)) => casimir_cubic(&a.algebra),
        Command::Casimir(CasimirCmd::Amap(a)) => casimir_amap(&a.algebra),
        Command::Loop(LoopCmd::Check {
            algebra,
            twist,
            window,
            parity_grading,
        }) => loop_check(&algebra.algebra, *twist, *window, *parity_grading),
        Command::Shapovalov(ShapovalovCmd::Det {
            algebra,
            chi,
            oracle,
            candidate,
            rule,
        }) => shapovalov_det(&algebra.algebra, chi, oracle.is_some(), candidate, *rule),
        Command::Shapovalov(ShapovalovCmd::Formula { algebra, chi, rule }) => {
            shapovalov_formula(&algebra.algebra, chi, *rule)
        }
        Command::Shapovalov(ShapovalovCmd::Singular { algebra, chi, lambda }) => {
            shapovalov_singular(&algebra.algebra, chi, lambda)
        }
        Command::Shapovalov(ShapovalovCmd::Conjecture {
            target,
            chi,
            method,
            seed,
        }) => conjecture(target, chi, *method, *seed),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Algebra(AlgebraCmd::Build(_)) => "algebra-build",
        Command::Algebra(AlgebraCmd::Verify(_)) => "algebra-verify",
        Command::Casimir(CasimirCmd::Quadratic(_)) => "casimir-quadratic",
        Command::Casimir(CasimirCmd::Cubic(_)) => "casimir-cubic",
        Command::Casimir(CasimirCmd::Amap(_)) => "casimir-amap",
        Command::Loop(_) => "loop-check",
        Command::Shapovalov(ShapovalovCmd::Det { .. }) => "shapovalov-det",
        Command::Shapovalov(ShapovalovCmd::Formula { .. }) => "shapovalov-formula",
        Command::Shapovalov(ShapovalovCmd::Singular { .. }) => "shapovalov-singular",
        Command::Shapovalov(ShapovalovCmd::Conjecture { .. }) => "shapovalov-conjecture",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(dir) = &cli.out {
        if let Err(e) = report.write(dir, command_name(&cli.command)) {
            eprintln!("error: cannot write reports to {}: {e}", dir.display());
            return ExitCode::from(1);
        }
    }
    if cli.json {
        println!("{}", report.json_string());
    } else {
        print!("{}", report.text);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
