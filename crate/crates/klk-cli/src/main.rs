//! Command-line surface: compute, convert, gray, transfer, curv, table and
//! verify. All output is deterministic UTF-8 JSON (or CSV for table export)
//! on stdout; diagnostics go to stderr. Exit codes: 0 success, 1 internal
//! consistency or verification failure, 2 parse/usage errors.

mod expr;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use klk_core::gray::{gray_normal_form, gray_pairing, realize, GrayAlgebra};
use klk_core::json;
use klk_core::space_forms::SpaceForm;
use klk_core::valuations::{FlatTag, ValAlgebra};
use klk_core::verify;
use klk_core::{curv, GradedPoly};

#[derive(Parser)]
#[command(
    name = "klk",
    about = "Exact hermitian integral geometry: double forms, the Gray algebra, unitary valuations, space forms and curvature measures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Monomial,
    Mu,
    Tau,
}

impl BasisArg {
    fn tag(self) -> FlatTag {
        match self {
            BasisArg::Monomial => FlatTag::Monomial,
            BasisArg::Mu => FlatTag::Mu,
            BasisArg::Tau => FlatTag::Tau,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an expression in s, t (with pi/lambda coefficients) in Val^U(n)
    Compute(ComputeArgs),
    /// Convert a flat valuation (JSON on stdin or --input) between bases
    Convert(ConvertArgs),
    /// Gray algebra: normal forms, pairings and concrete realizations
    Gray(GrayArgs),
    /// Transfer maps into the curved algebra V^n_lambda
    Transfer(TransferArgs),
    /// Curvature measures: R_lambda expansions and globalization
    Curv(CurvArgs),
    /// CSV export of pairing matrices
    Table(TableArgs),
    /// Run a verification suite and print a JSON report
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    n: usize,
    /// Expression, e.g. "s*t" or "2*t^2 - s/pi"
    #[arg(long)]
    expr: String,
    /// Output basis
    #[arg(long, value_enum, default_value = "monomial")]
    basis: BasisArg,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    n: usize,
    /// Target basis
    #[arg(long, value_enum)]
    to: BasisArg,
    /// Input file with a flat-valuation JSON; stdin when omitted
    #[arg(long)]
    input: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct GrayArgs {
    #[arg(long)]
    n: usize,
    /// Normal form of a rational expression in s, t
    #[arg(long)]
    nf: Option<String>,
    /// Pairing of two complementary-degree expressions
    #[arg(long, num_args = 2)]
    pairing: Option<Vec<String>>,
    /// Concrete double-form realization of a homogeneous expression
    #[arg(long)]
    realize: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransferWhat {
    /// r_lambda(mu_(k,p)) in the mu^lambda basis
    #[value(name = "r_mu")]
    RMu,
    /// r_lambda(tau_(k,q)) in the tau^lambda basis
    #[value(name = "r_tau")]
    RTau,
    /// r_lambda of an expression
    R,
    /// J_lambda of an expression
    J,
    /// sigma_lambda as a flat valuation
    Sigma,
    /// curved monomial s^k t^p in mu^lambda coordinates
    Monomial,
}

#[derive(Args)]
struct TransferArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    what: TransferWhat,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    p: usize,
    /// Expression for --what r / j
    #[arg(long)]
    expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurvWhat {
    /// R_lambda(Delta_(k,q))
    #[value(name = "r_delta")]
    RDelta,
    /// R_lambda(N_(k,q))
    #[value(name = "r_n")]
    RN,
    /// Lipschitz-Killing measure sum_p Delta_(k,p)
    Lk,
    /// Flat globalization of a curvature element (JSON on stdin or --input)
    #[value(name = "glob_flat")]
    GlobFlat,
    /// Curved globalization of a curvature element
    #[value(name = "glob_curved")]
    GlobCurved,
    /// The valid Delta/N index sets
    Basis,
}

#[derive(Args)]
struct CurvArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    what: CurvWhat,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
    #[arg(long)]
    input: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableWhat {
    /// Gray pairing matrices per degree
    Gray,
    /// Unitary pairing Gram blocks per degree
    Val,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    what: TableWhat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: gray, weyl, unitary, transfer, glob, kinematic, serialization, all
    #[arg(long)]
    suite: String,
    /// Dimension bound
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Seed for the randomized draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(ErrorExit::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(ErrorExit::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum ErrorExit {
    Parse(String),
    Internal(String),
}

fn core_err(e: klk_core::Error) -> ErrorExit {
    // malformed invocations and inputs exit 2; only engine-side consistency
    // failures exit 1
    match &e {
        klk_core::Error::InternalConsistency(_) | klk_core::Error::ModuleUnavailable(_) => {
            ErrorExit::Internal(e.to_string())
        }
        _ => ErrorExit::Parse(e.to_string()),
    }
}

fn parse_expr(input: &str) -> Result<expr::ScalarPoly, ErrorExit> {
    expr::parse(input).map_err(ErrorExit::Parse)
}

fn rational_expr(input: &str) -> Result<GradedPoly, ErrorExit> {
    parse_expr(input)?.as_rational_poly().map_err(ErrorExit::Parse)
}

fn read_input(path: &Option<std::path::PathBuf>) -> Result<String, ErrorExit> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| ErrorExit::Parse(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| ErrorExit::Parse(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ErrorExit> {
    match cli.command {
        Command::Compute(args) => {
            let alg = ValAlgebra::get(args.n).map_err(core_err)?;
            let poly = parse_expr(&args.expr)?;
            let reduced = alg.reduce_scalar_poly(poly.terms.iter());
            let converted = alg.convert(&reduced, args.basis.tag()).map_err(core_err)?;
            println!("{}", json::flat_valuation_to_string(&converted));
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert(args) => {
            let alg = ValAlgebra::get(args.n).map_err(core_err)?;
            let text = read_input(&args.input)?;
            let v = json::flat_valuation_from_str(&text).map_err(core_err)?;
            if v.n != args.n {
                return Err(ErrorExit::Parse(format!(
                    "input has n = {}, expected {}",
                    v.n, args.n
                )));
            }
            let converted = alg.convert(&v, args.to.tag()).map_err(core_err)?;
            println!("{}", json::flat_valuation_to_string(&converted));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gray(args) => {
            let selected = [args.nf.is_some(), args.pairing.is_some(), args.realize.is_some()]
                .iter()
                .filter(|x| **x)
                .count();
            if selected != 1 {
                return Err(ErrorExit::Parse(
                    "gray takes exactly one of --nf, --pairing, --realize".into(),
                ));
            }
            if let Some(e) = &args.nf {
                let poly = rational_expr(e)?;
                let nf = gray_normal_form(args.n, &poly).map_err(core_err)?;
                println!("{}", json::graded_poly_to_string(&nf.reduced));
            } else if let Some(pair) = &args.pairing {
                let x = rational_expr(&pair[0])?;
                let y = rational_expr(&pair[1])?;
                let v = gray_pairing(args.n, &x, &y).map_err(core_err)?;
                println!("{}", json::rational_to_string(&v));
            } else if let Some(e) = &args.realize {
                let poly = rational_expr(e)?;
                let r = realize(args.n, &poly).map_err(core_err)?;
                println!("{}", json::double_form_to_string(&r.form));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Transfer(args) => {
            let sf = SpaceForm::get(args.n).map_err(core_err)?;
            match args.what {
                TransferWhat::RMu => {
                    let v = klk_core::space_forms::expand_r_mu(args.n, args.k, args.p)
                        .map_err(core_err)?;
                    println!("{}", json::curved_valuation_to_string(&v));
                }
                TransferWhat::RTau => {
                    let v = klk_core::space_forms::expand_r_tau(args.n, args.k, args.p)
                        .map_err(core_err)?;
                    println!("{}", json::curved_valuation_to_string(&v));
                }
                TransferWhat::R | TransferWhat::J => {
                    let e = args.expr.as_ref().ok_or_else(|| {
                        ErrorExit::Parse("--what r/j needs --expr".into())
                    })?;
                    let alg = ValAlgebra::get(args.n).map_err(core_err)?;
                    let poly = parse_expr(e)?;
                    let x = alg.reduce_scalar_poly(poly.terms.iter());
                    let v = match args.what {
                        TransferWhat::R => sf.r_apply(&x),
                        _ => sf.j_lambda(&x),
                    }
                    .map_err(core_err)?;
                    println!("{}", json::curved_valuation_to_string(&v));
                }
                TransferWhat::Sigma => {
                    println!("{}", json::flat_valuation_to_string(&sf.sigma_lambda()));
                }
                TransferWhat::Monomial => {
                    let v = sf
                        .curved_monomial_to_mu_lambda(args.k as u64, args.p as u64)
                        .map_err(core_err)?;
                    println!("{}", json::curved_valuation_to_string(&v));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Curv(args) => {
            match args.what {
                CurvWhat::RDelta => {
                    let x = curv::r_lambda_delta(args.n, args.k, args.q).map_err(core_err)?;
                    println!("{}", json::curv_element_to_string(&x));
                }
                CurvWhat::RN => {
                    let x = curv::r_lambda_n(args.n, args.k, args.q).map_err(core_err)?;
                    println!("{}", json::curv_element_to_string(&x));
                }
                CurvWhat::Lk => {
                    let x = curv::lk_measure(args.n, args.k).map_err(core_err)?;
                    println!("{}", json::curv_element_to_string(&x));
                }
                CurvWhat::GlobFlat | CurvWhat::GlobCurved => {
                    let text = read_input(&args.input)?;
                    let x = json::curv_element_from_str(&text).map_err(core_err)?;
                    if x.n != args.n {
                        return Err(ErrorExit::Parse(format!(
                            "input has n = {}, expected {}",
                            x.n, args.n
                        )));
                    }
                    match args.what {
                        CurvWhat::GlobFlat => println!(
                            "{}",
                            json::flat_valuation_to_string(&curv::glob_flat(&x))
                        ),
                        _ => println!(
                            "{}",
                            json::curved_valuation_to_string(&curv::glob_curved(&x))
                        ),
                    }
                }
                CurvWhat::Basis => {
                    let b = curv::curv_basis(args.n).map_err(core_err)?;
                    let delta: Vec<_> = b.delta.iter().map(|&(k, q)| vec![k, q]).collect();
                    let enn: Vec<_> = b.enn.iter().map(|&(k, q)| vec![k, q]).collect();
                    println!(
                        "{}",
                        serde_json::json!({"n": args.n, "Delta": delta, "N": enn})
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table(args) => {
            match args.what {
                TableWhat::Gray => {
                    let alg = GrayAlgebra::get(args.n).map_err(core_err)?;
                    // one block per degree p <= n: <basis_p x basis_(2n-p)>
                    println!("# Gray pairing matrices for n = {}", args.n);
                    for p in 0..=args.n {
                        let left = alg.basis(p).to_vec();
                        let right = alg.basis(2 * args.n - p).to_vec();
                        println!("# degree {p} x degree {}", 2 * args.n - p);
                        for &(a1, b1) in &left {
                            let mut row = Vec::with_capacity(right.len());
                            for &(a2, b2) in &right {
                                let x = GradedPoly::monomial(a1, b1, klk_core::scalar::rat_i64(1));
                                let y = GradedPoly::monomial(a2, b2, klk_core::scalar::rat_i64(1));
                                let v = alg.pairing(&x, &y).map_err(core_err)?;
                                row.push(json::rational_to_string(&v));
                            }
                            println!("{}", row.join(","));
                        }
                    }
                }
                TableWhat::Val => {
                    let alg = ValAlgebra::get(args.n).map_err(core_err)?;
                    println!("# Poincare pairing Gram blocks for n = {}", args.n);
                    for k in 0..=(2 * args.n) {
                        let block = alg.gram_block(k).map_err(core_err)?;
                        println!("# degree {k} x degree {}", 2 * args.n - k);
                        for row in &block {
                            let cells: Vec<String> = row
                                .iter()
                                .map(|v| {
                                    let s = json::scalar_to_string(v);
                                    format!("\"{}\"", s.replace('"', "\"\""))
                                })
                                .collect();
                            println!("{}", cells.join(","));
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let table_env = std::env::var("KLK_MODULE_TABLE").ok();
            let table_path = table_env.as_ref().map(std::path::Path::new);
            let checks = verify::run_suite(&args.suite, args.n, args.seed, table_path)
                .ok_or_else(|| {
                    ErrorExit::Parse(format!(
                        "unknown suite {:?}; expected gray, weyl, unitary, transfer, glob, kinematic, serialization or all",
                        args.suite
                    ))
                })?;
            let mut passed = 0usize;
            let mut failed = 0usize;
            let mut skipped = 0usize;
            let mut check_values = Vec::new();
            for c in &checks {
                match c.status {
                    verify::Status::Pass => passed += 1,
                    verify::Status::Fail => failed += 1,
                    verify::Status::Skip => skipped += 1,
                }
                check_values.push(serde_json::json!({
                    "id": c.id,
                    "status": c.status.name(),
                    "witness": c.witness,
                }));
            }
            let report = serde_json::json!({
                "suite": args.suite,
                "n": args.n,
                "seed": args.seed,
                "checks": check_values,
                "passed": passed,
                "failed": failed,
                "skipped": skipped,
            });
            println!("{report}");
            if failed == 0 {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
