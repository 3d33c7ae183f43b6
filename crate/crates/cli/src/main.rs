//! `ordfem`: runs the convergence and stability studies and writes CSV or
//! JSON reports.
//!
//! Exit status is 0 on success, 1 on usage or runtime errors and 2 when
//! `--check` finds a study outside its acceptance window.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ordfem::analysis::{
    convergence_study, decomposition_study, hypotheses_study, infsup_study, manufactured_solution, CoefficientPreset,
    Pairing, SolverChoice, StudyOptions,
};
use ordfem::assembly::ProblemKind;
use ordfem::report::{Format, Study};

const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser, Debug)]
#[command(name = "ordfem", version, about = "Mixed finite element verification studies on the unit cube")]
struct Cli {
    #[command(subcommand)]
    study: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the manufactured problem on each mesh and fit convergence rates.
    Convergence {
        #[arg(long, default_value = "bilaplacian")]
        problem: ProblemKind,
        /// Comma-separated mesh sizes (cells per cube edge).
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
        n: Vec<usize>,
        /// `unit`, `bump`, or a positive constant.
        #[arg(long, default_value = "unit")]
        coefficient: CoefficientPreset,
        #[arg(long, default_value = "direct")]
        solver: SolverChoice,
        /// Quadrature degree used for assembly.
        #[arg(long)]
        quad_degree: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Discrete inf-sup constants of the curl or div pairing.
    Infsup {
        #[arg(long, default_value = "curl")]
        pair: Pairing,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        n: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Minimal-norm regular decompositions of random targets.
    Decomposition {
        #[arg(long, default_value = "curl")]
        pair: Pairing,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Interpolation bound, kernel coercivity and inf-sup constant of a problem.
    Hypotheses {
        #[arg(long, default_value = "bilaplacian")]
        problem: ProblemKind,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 2 if the study misses an acceptance window.
    #[arg(long)]
    check: bool,
}

fn check_meshes(ns: &[usize]) -> Result<(), String> {
    if ns.is_empty() {
        return Err("--n: at least one mesh size is required".into());
    }
    if let Some(n) = ns.iter().find(|&&n| n < 2) {
        return Err(format!("--n: mesh size {n} leaves no interior degrees of freedom; use n >= 2"));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("--n: mesh sizes must be strictly increasing, got {ns:?}"));
    }
    Ok(())
}

fn run(cmd: Command) -> ordfem::Result<(Study, Output)> {
    Ok(match cmd {
        Command::Convergence { problem, n, coefficient, solver, quad_degree, output } => {
            let mut p = manufactured_solution(problem, coefficient);
            if let Some(d) = quad_degree {
                p.spec.quad_degree = d;
            }
            let opts = StudyOptions { solver, ..StudyOptions::default() };
            (Study::Convergence(convergence_study(&p, &n, &opts)?), output)
        }
        Command::Infsup { pair, n, output } => (Study::InfSup(infsup_study(pair, &n)?), output),
        Command::Decomposition { pair, n, samples, seed, output } => {
            (Study::Decomposition(decomposition_study(pair, &n, samples, seed)?), output)
        }
        Command::Hypotheses { problem, n, samples, seed, output } => {
            (Study::Hypotheses(hypotheses_study(problem, &n, samples, seed)?), output)
        }
    })
}

fn meshes(cmd: &Command) -> &[usize] {
    match cmd {
        Command::Convergence { n, .. }
        | Command::Infsup { n, .. }
        | Command::Decomposition { n, .. }
        | Command::Hypotheses { n, .. } => n,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("ORDFEM_THREADS") else { return Ok(()) };
    let threads: usize = v.trim().parse().map_err(|_| format!("ORDFEM_THREADS: expected a number, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| format!("ORDFEM_THREADS: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = check_meshes(meshes(&cli.study)).and_then(|_| configure_threads()) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let (study, output) = match run(cli.study) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = match study.render(output.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &output.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    if output.check {
        let violations = study.violations();
        if !violations.is_empty() {
            for v in &violations {
                eprintln!("check failed: {v}");
            }
            return ExitCode::from(2);
        }
    }
    ExitCode::SUCCESS
}
