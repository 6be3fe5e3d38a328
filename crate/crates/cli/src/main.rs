//! `hdx` — build coset complexes over truncated polynomial rings and check
//! their structural and spectral properties, writing JSON certificates.
//!
//! Exit status: 0 all checks pass, 2 a check failed, 3 the request was
//! infeasible (bad parameters, caps, missing caches), 4 an iterative
//! eigensolve did not converge.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hdx_core::group::DEFAULT_CLOSURE_CAP;
use hdx_core::spectral::Solver;

mod cache;
mod certificate;
mod commands;

use commands::{CmdError, ExportKind, Params};

#[derive(Parser)]
#[command(
    name = "hdx",
    version,
    about = "Coset-complex expander construction and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Dense,
    Iterative,
    Auto,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Solver {
        match s {
            SolverArg::Dense => Solver::Dense,
            SolverArg::Iterative => Solver::Iterative,
            SolverArg::Auto => Solver::Auto,
        }
    }
}

#[derive(Clone, Debug, clap::Args)]
struct ParamArgs {
    /// Base prime of the coefficient field
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Truncation depth: coefficients live in F_p[t]/(t^s)
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Matrix dimension; the complex has d vertex types
    #[arg(long, default_value_t = 3)]
    d: u32,
    /// Face level for descent bounds; must satisfy 1 <= k < d when given
    #[arg(long)]
    k: Option<u32>,
    /// Abort any closure that exceeds this many elements
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
    /// Eigensolver tolerance (dense off-diagonal mass / iterative residual)
    #[arg(long, default_value_t = 1e-11)]
    tol: f64,
    /// Eigensolver selection
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    solver: SolverArg,
    /// Directory for certificates and reports
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Directory for cached group enumerations
    #[arg(long, default_value = "cache")]
    cache: PathBuf,
}

impl From<&ParamArgs> for Params {
    fn from(a: &ParamArgs) -> Params {
        Params {
            p: a.p,
            s: a.s,
            d: a.d,
            k: a.k,
            cap: a.cap,
            tol: a.tol,
            solver: a.solver.into(),
            out: a.out.clone(),
            cache: a.cache.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExportWhat {
    /// All faces of the complex with their balanced weights
    Complex,
    /// The 1-skeleton as a weighted edge list plus a label sidecar
    Graph,
    /// The cached group enumerations (full group and vertex subgroups)
    Group,
}

impl Command {
    fn params(&self) -> &ParamArgs {
        match self {
            Command::Build(a)
            | Command::VerifyGroups(a)
            | Command::VerifyComplex(a)
            | Command::Spectra(a)
            | Command::Affine(a)
            | Command::Trickle(a)
            | Command::ReportAll(a)
            | Command::Export { params: a, .. } => a,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the group and its vertex subgroups, cache the dumps
    Build(ParamArgs),
    /// Closure/intersection/regeneration identities among the subgroups
    VerifyGroups(ParamArgs),
    /// Build the complex and verify purity, balance, and partiteness
    VerifyComplex(ParamArgs),
    /// Spectral report of the complex 1-skeleton
    Spectra(ParamArgs),
    /// Points-lines graph B_q, its induced subgraph A, and the link match
    Affine(ParamArgs),
    /// One-level descent inequalities between links and skeleton (d = 3)
    Trickle(ParamArgs),
    /// Groups, complex, link certification, identities — one certificate
    ReportAll(ParamArgs),
    /// Write built objects to plain-text files
    Export {
        #[command(flatten)]
        params: ParamArgs,
        /// What to export
        #[arg(long, value_enum)]
        what: ExportWhat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.params();
    if let Some(k) = args.k {
        if k == 0 || k >= args.d {
            return fail(CmdError::Infeasible(format!(
                "--k must satisfy 1 <= k < d; got k = {k} with d = {}",
                args.d
            )));
        }
    }
    let result = match &cli.command {
        Command::Build(a) => commands::cmd_build(&Params::from(a)),
        Command::VerifyGroups(a) => commands::cmd_verify_groups(&Params::from(a)),
        Command::VerifyComplex(a) => commands::cmd_verify_complex(&Params::from(a)),
        Command::Spectra(a) => commands::cmd_spectra(&Params::from(a)),
        Command::Affine(a) => commands::cmd_affine(&Params::from(a)),
        Command::Trickle(a) => commands::cmd_trickle(&Params::from(a)),
        Command::ReportAll(a) => commands::cmd_report_all(&Params::from(a)),
        Command::Export { params, what } => {
            let kind = match what {
                ExportWhat::Complex => ExportKind::Complex,
                ExportWhat::Graph => ExportKind::Graph,
                ExportWhat::Group => ExportKind::Group,
            };
            let params = Params::from(params);
            let out = params.out.clone();
            return match commands::cmd_export(&params, kind, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            };
        }
    };
    match result {
        Ok(cert) if cert.pass => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => fail(e),
    }
}

fn fail(e: CmdError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        CmdError::Infeasible(_) => ExitCode::from(3),
        CmdError::NonConvergence(_) => ExitCode::from(4),
    }
}
