//! Command-line front-end: analyze channel documents, decompose them into
//! extreme points, emit catalog examples, and run face-dimension censuses.
//!
//! Exit codes: 0 success, 1 usage/IO/parse error, 2 non-membership.

mod formats;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use choi_faces::constructions::{catalog_entry, CatalogEntry, CatalogParams, CATALOG_NAMES};
use choi_faces::{
    check_membership, decompose, face_dimension_census, face_report, Complex64, ComplexMatrix,
    MembershipReport, Tolerances,
};

use formats::{
    choi_to_file, decomposition_to_file, encode_matrix, to_choi, ChannelFile, DecompositionFile,
};

const EXIT_USAGE: u8 = 1;
const EXIT_NONMEMBER: u8 = 2;

#[derive(Parser)]
#[command(
    name = "choi-faces",
    version,
    about = "Convex-geometric analysis of quantum channels via Choi matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct TolArgs {
    /// Relative eigenvalue/singular-value cutoff for rank decisions
    #[arg(long = "tol-rank", global = true)]
    tol_rank: Option<f64>,
    /// Allowance on the most negative eigenvalue in PSD tests
    #[arg(long = "tol-psd", global = true)]
    tol_psd: Option<f64>,
    /// Entrywise comparison tolerance
    #[arg(long = "tol-eq", global = true)]
    tol_eq: Option<f64>,
}

impl TolArgs {
    /// Defaults, optionally overridden by the CHOI_FACES_TOL environment
    /// variable ("rank_rel,psd_abs,equality_abs") and then by flags.
    fn resolve(&self) -> Result<Tolerances, String> {
        let mut base = Tolerances::default();
        if let Ok(raw) = std::env::var("CHOI_FACES_TOL") {
            let parts: Vec<&str> = raw.split(',').collect();
            if parts.len() != 3 {
                return Err(format!(
                    "CHOI_FACES_TOL must be three comma-separated numbers, got '{raw}'"
                ));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad tolerance '{s}' in CHOI_FACES_TOL"))
            };
            base = Tolerances::new(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)
                .map_err(|e| e.to_string())?;
        }
        Tolerances::new(
            self.tol_rank.unwrap_or(base.rank_rel),
            self.tol_psd.unwrap_or(base.psd_abs),
            self.tol_eq.unwrap_or(base.equality_abs),
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report membership, rank, kernel and face data for a channel document
    Analyze {
        /// Path to a channel document, or '-' for standard input
        input: String,
        /// Emit a JSON document instead of the human-readable table
        #[arg(long = "json-style")]
        json_style: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Decompose a member into a convex combination of extreme points
    Decompose {
        /// Path to a channel document, or '-' for standard input
        input: String,
        /// Emit a JSON document instead of the human-readable summary
        #[arg(long = "json-style")]
        json_style: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Emit a named example as a channel document
    Example {
        /// One of: p, a3, a3-extreme-x, a3-extreme-x1, an, case-iia,
        /// embed-rank1, rank2-n2, random
        name: String,
        /// Channel dimension for the parametric examples
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Rank for the random example (defaults to n^2)
        #[arg(long)]
        rank: Option<usize>,
        /// Seed for the random example
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parameter c of the rank2-n2 family
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Real part of parameter s of the rank2-n2 family
        #[arg(long, default_value_t = 0.0)]
        s_re: f64,
        /// Imaginary part of parameter s of the rank2-n2 family
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
        /// Real part of parameter y of the rank2-n2 family
        #[arg(long, default_value_t = 0.0)]
        y_re: f64,
        /// Imaginary part of parameter y of the rank2-n2 family
        #[arg(long, default_value_t = 0.0)]
        y_im: f64,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Histogram of face dimensions over seeded random members
    Census {
        /// Channel dimension n
        #[arg(long)]
        n: usize,
        /// Rank of the sampled members
        #[arg(long)]
        rank: usize,
        /// Number of samples
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Base seed; sample i derives its own stream from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit a JSON document instead of the table
        #[arg(long = "json-style")]
        json_style: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Serialize)]
struct AnalysisOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    dim: usize,
    hermitian_residual: f64,
    min_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_residual: Option<f64>,
    is_member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    face_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_extreme: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    choi_criterion_extreme: Option<bool>,
}

fn main() -> ExitCode {
    // die quietly when the downstream end of a pipe closes early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Analyze {
            input,
            json_style,
            tol,
        } => cmd_analyze(&input, json_style, &tol),
        Command::Decompose {
            input,
            json_style,
            tol,
        } => cmd_decompose(&input, json_style, &tol),
        Command::Example {
            name,
            n,
            rank,
            seed,
            c,
            s_re,
            s_im,
            y_re,
            y_im,
            tol,
        } => {
            let params = CatalogParams {
                n,
                rank: rank.unwrap_or(n * n),
                seed,
                c,
                s: Complex64::new(s_re, s_im),
                y: Complex64::new(y_re, y_im),
            };
            cmd_example(&name, &params, &tol)
        }
        Command::Census {
            n,
            rank,
            samples,
            seed,
            json_style,
            tol,
        } => cmd_census(n, rank, samples, seed, json_style, &tol),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn read_document(input: &str) -> Result<ChannelFile, String> {
    let raw = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))?
    };
    serde_json::from_str(&raw).map_err(|e| format!("parsing {input}: {e}"))
}

/// Spectrum endpoints of the symmetrized matrix, for diagnosing inputs
/// that may not be Hermitian at all.
fn symmetrized_min_eigenvalue(m: &ComplexMatrix, tol: &Tolerances) -> f64 {
    let relaxed = Tolerances::new(tol.rank_rel, tol.psd_abs, f64::MAX).expect("positive");
    choi_faces::hermitian_eigen(&m.symmetrized(), &relaxed)
        .map(|e| e.eigenvalues.last().copied().unwrap_or(0.0))
        .unwrap_or(f64::NAN)
}

fn membership_output(n: usize, dim: usize, report: &MembershipReport) -> AnalysisOutput {
    AnalysisOutput {
        n: Some(n),
        dim,
        hermitian_residual: report.hermitian_residual,
        min_eigenvalue: report.min_eigenvalue,
        trace_residual: Some(report.max_trace_condition_residual),
        is_member: report.is_member,
        rank: None,
        kernel_dim: None,
        face_dim: None,
        is_extreme: None,
        choi_criterion_extreme: None,
    }
}

fn print_analysis(out: &AnalysisOutput, json_style: bool) {
    if json_style {
        println!("{}", serde_json::to_string_pretty(out).expect("serializable"));
        return;
    }
    let yesno = |b: bool| if b { "yes" } else { "no" };
    match out.n {
        Some(n) => println!("{:<26}{}", "n:", n),
        None => println!("{:<26}none (dimension is not a perfect square)", "n:"),
    }
    println!("{:<26}{}", "matrix dimension:", out.dim);
    println!("{:<26}{:e}", "hermitian residual:", out.hermitian_residual);
    println!("{:<26}{:e}", "min eigenvalue:", out.min_eigenvalue);
    if let Some(t) = out.trace_residual {
        println!("{:<26}{:e}", "trace residual:", t);
    }
    println!("{:<26}{}", "member:", yesno(out.is_member));
    if let Some(rank) = out.rank {
        println!("{:<26}{}", "rank:", rank);
    }
    if let Some(k) = out.kernel_dim {
        println!("{:<26}{}", "kernel dimension:", k);
    }
    if let Some(f) = out.face_dim {
        println!("{:<26}{}", "face dimension:", f);
    }
    if let Some(e) = out.is_extreme {
        println!("{:<26}{}", "extreme:", yesno(e));
    }
    if let Some(e) = out.choi_criterion_extreme {
        println!("{:<26}{}", "extreme (kraus products):", yesno(e));
    }
}

fn cmd_analyze(input: &str, json_style: bool, tol_args: &TolArgs) -> ExitCode {
    let tol = match tol_args.resolve() {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    let doc = match read_document(input) {
        Ok(d) => d,
        Err(e) => return usage_error(&e),
    };
    let parsed = match to_choi(&doc) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    match parsed {
        Ok(choi) => {
            let report = check_membership(&choi, &tol);
            let mut out = membership_output(choi.n(), choi.dim(), &report);
            if report.is_member {
                match face_report(&choi, &tol) {
                    Ok(f) => {
                        out.rank = Some(f.rank);
                        out.kernel_dim = Some(f.kernel_dim);
                        out.face_dim = Some(f.face_dim);
                        out.is_extreme = Some(f.is_extreme);
                        out.choi_criterion_extreme = Some(f.choi_criterion_extreme);
                    }
                    Err(e) => return usage_error(&e.to_string()),
                }
            }
            print_analysis(&out, json_style);
            if report.is_member {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NONMEMBER)
            }
        }
        Err(bare) => {
            // square but not n^2 for any n: spectral diagnostics only
            let out = AnalysisOutput {
                n: None,
                dim: bare.rows(),
                hermitian_residual: bare.hermitian_residual(),
                min_eigenvalue: symmetrized_min_eigenvalue(&bare, &tol),
                trace_residual: None,
                is_member: false,
                rank: None,
                kernel_dim: None,
                face_dim: None,
                is_extreme: None,
                choi_criterion_extreme: None,
            };
            print_analysis(&out, json_style);
            ExitCode::from(EXIT_NONMEMBER)
        }
    }
}

fn print_decomposition(file: &DecompositionFile, json_style: bool) {
    if json_style {
        println!(
            "{}",
            serde_json::to_string_pretty(file).expect("serializable")
        );
        return;
    }
    println!("{:<26}{}", "n:", file.n);
    println!("{:<26}{}", "extreme points:", file.terms.len());
    println!("{:<26}{:e}", "reconstruction residual:", file.residual);
    for (k, term) in file.terms.iter().enumerate() {
        println!("point {k}: weight {:.12}", term.weight);
        if let ChannelFile::Choi { data, .. } = &term.point {
            for row in data {
                let cells: Vec<String> = row
                    .iter()
                    .map(|[re, im]| format!("{re:+.6}{im:+.6}i"))
                    .collect();
                println!("  {}", cells.join("  "));
            }
        }
    }
}

fn cmd_decompose(input: &str, json_style: bool, tol_args: &TolArgs) -> ExitCode {
    let tol = match tol_args.resolve() {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    let doc = match read_document(input) {
        Ok(d) => d,
        Err(e) => return usage_error(&e),
    };
    let choi = match to_choi(&doc) {
        Ok(Ok(c)) => c,
        Ok(Err(bare)) => {
            eprintln!(
                "error: {}x{} matrix is not a Choi matrix of any channel dimension",
                bare.rows(),
                bare.cols()
            );
            return ExitCode::from(EXIT_NONMEMBER);
        }
        Err(e) => return usage_error(&e),
    };
    let report = check_membership(&choi, &tol);
    if !report.is_member {
        eprintln!("error: not a member of C_{}: {report}", choi.n());
        return ExitCode::from(EXIT_NONMEMBER);
    }
    match decompose(&choi, &tol) {
        Ok(d) => {
            print_decomposition(&decomposition_to_file(choi.n(), &d), json_style);
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn cmd_example(name: &str, params: &CatalogParams, tol_args: &TolArgs) -> ExitCode {
    let tol = match tol_args.resolve() {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    match catalog_entry(name, params, &tol) {
        Ok(CatalogEntry::Choi(c)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&choi_to_file(&c)).expect("serializable")
            );
            ExitCode::SUCCESS
        }
        Ok(CatalogEntry::Matrix(m)) => {
            let file = ChannelFile::Matrix {
                data: encode_matrix(&m),
            };
            println!("{}", serde_json::to_string_pretty(&file).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(choi_faces::Error::UnknownExample { name, .. }) => usage_error(&format!(
            "unknown example '{name}'; available: {}",
            CATALOG_NAMES.join(", ")
        )),
        Err(e) => usage_error(&e.to_string()),
    }
}

#[derive(Serialize)]
struct CensusOutput {
    n: usize,
    rank: usize,
    samples: usize,
    seed: u64,
    histogram: std::collections::BTreeMap<usize, usize>,
}

fn cmd_census(
    n: usize,
    rank: usize,
    samples: usize,
    seed: u64,
    json_style: bool,
    tol_args: &TolArgs,
) -> ExitCode {
    let tol = match tol_args.resolve() {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    if n == 0 || rank == 0 || rank > n * n {
        return usage_error(&format!(
            "need 1 <= rank <= n^2; got n = {n}, rank = {rank}"
        ));
    }
    match face_dimension_census(n, rank, samples, seed, &tol) {
        Ok(histogram) => {
            let out = CensusOutput {
                n,
                rank,
                samples,
                seed,
                histogram,
            };
            if json_style {
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            } else {
                println!("face dimension histogram (n = {n}, rank = {rank}, samples = {samples}, seed = {seed})");
                println!("{:>14}  {:>8}", "face dimension", "count");
                for (dim, count) in &out.histogram {
                    println!("{dim:>14}  {count:>8}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}
