use std::path::PathBuf;
use std::process::ExitCode;

use blowup_core::blowup_harness::{run_blowup, write_outputs, ExperimentConfig};
use blowup_core::bohr::enumerate_bohr;
use blowup_core::operator_engine::{calibrate_k0, verify_kernel_lemma, KernelSpec, LemmaSetup};
use blowup_core::rational_core::{parse_rational, solve_moment_orthogonal, RationalVector};
use blowup_core::subspace_lab::{build_gamma_family_exact, check_nondegenerate};
use blowup_core::symbol_forge::{
    check_mikhlin, log_polar_grid, make_carleson_region, make_control_symbol, make_paraproduct_symbol,
    make_trilinear_sgn_symbol, Symbol,
};
use blowup_core::subspace_lab::Subspace;
use blowup_core::witness_functions::Bump;
use blowup_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "blowup", version, about = "Exact hash vectors, Bohr sets, symbols and blow-up experiments")]
struct Cli {
    /// Print a single JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized sample points; overrides the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the exact moment-orthogonality system for a node vector
    SolveHash(SolveHashArgs),
    /// Enumerate a Bohr set and compare it with the counting bound
    Bohr(BohrArgs),
    /// Build the rational subspace family and certify non-degeneracy
    CheckGamma(CheckGammaArgs),
    /// Build a symbol, evaluate it and optionally estimate Mikhlin constants
    BuildSymbol(BuildSymbolArgs),
    /// Check the far-block kernel lower bound over a range of k
    VerifyKernelLemma(LemmaArgs),
    /// Run a blow-up experiment from a TOML config
    RunBlowup(RunArgs),
}

#[derive(Args)]
struct SolveHashArgs {
    /// Comma-separated distinct nonzero rationals, e.g. 1,2,3 or 1/2,3
    #[arg(long)]
    q: String,
    /// Comma-separated integer exponents m with sum tilde_j q_j^m = 0
    #[arg(long, allow_hyphen_values = true)]
    exponents: String,
    /// Exponent whose moment must stay nonzero
    #[arg(long, allow_hyphen_values = true)]
    forbidden: Option<i64>,
}

#[derive(Args)]
struct BohrArgs {
    /// Comma-separated frequencies
    #[arg(long)]
    freqs: String,
    /// Radius in (0, 1/2]
    #[arg(long)]
    rho: f64,
    /// Horizon: members are taken from 1..=N
    #[arg(short = 'N', long = "horizon")]
    horizon: u64,
}

#[derive(Args)]
struct CheckGammaArgs {
    /// Comma-separated distinct nonzero rationals
    #[arg(long)]
    q: String,
    /// Rational family parameter
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    /// Codimension
    #[arg(long)]
    d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymbolKind {
    One,
    Carleson,
    Sign,
    Paraproduct,
    TrilinearSgn,
    Control,
}

#[derive(Args)]
struct BuildSymbolArgs {
    #[arg(long, value_enum)]
    kind: SymbolKind,
    /// Arity for the constant symbol
    #[arg(long, default_value_t = 2)]
    arity: usize,
    /// Comma-separated direction (carleson, sign, control)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Upper cut on the last variable (carleson)
    #[arg(long, allow_hyphen_values = true)]
    cut: Option<f64>,
    /// Number of scales (paraproduct, trilinear-sgn)
    #[arg(long, default_value_t = 8)]
    k_max: u32,
    /// Transition width (control)
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Evaluation points separated by ';', coordinates by ','
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Additional random points drawn uniformly from [-8, 8]^n
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Estimate Mikhlin constants up to this order on a log-polar grid (two variables)
    #[arg(long)]
    mikhlin: Option<usize>,
}

#[derive(Args)]
struct LemmaArgs {
    /// Dilations are 1/q_j^2 and 1/q_j^3
    #[arg(long, default_value = "1,2,3,4,5")]
    q: String,
    /// Block size A
    #[arg(long, default_value_t = 8)]
    a: u64,
    /// First k; calibrated when omitted
    #[arg(long)]
    k0: Option<i64>,
    #[arg(long, default_value_t = 128)]
    k_max: i64,
    /// Fraction of D/(Ak) the imaginary part must reach
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    /// Bump half-width
    #[arg(long, default_value_t = 0.5)]
    h: f64,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runtime failure as opposed to bad input.
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Quadrature(_) | Error::Unbounded(_) => 4,
        _ => 3,
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("{t:?}: {e}"))))
        .collect()
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Config(format!("{t:?}: {e}"))))
        .collect()
}

struct Report {
    value: Value,
    text: String,
    pass: bool,
}

fn solve_hash(a: &SolveHashArgs) -> Result<Report, Error> {
    let q = RationalVector::parse_csv(&a.q)?;
    let exps = parse_ints(&a.exponents)?;
    let h = solve_moment_orthogonal(&q, &exps, a.forbidden)?;
    let checks: Vec<Value> = h
        .checks()
        .iter()
        .map(|(m, v)| json!({"exponent": m, "moment": v.to_string()}))
        .collect();
    let tilde = h.tilde.to_strings();
    let value = json!({
        "q": q.to_strings(),
        "exponents": exps,
        "forbidden": a.forbidden,
        "tilde": tilde,
        "checks": checks,
        "pass": true,
    });
    let mut text = format!("tilde = ({})\n", tilde.join(", "));
    for (m, v) in h.checks() {
        text.push_str(&format!("  moment {m}: {v}\n"));
    }
    Ok(Report { value, text, pass: true })
}

fn bohr(a: &BohrArgs) -> Result<Report, Error> {
    let freqs = parse_floats(&a.freqs)?;
    let set = enumerate_bohr(&freqs, a.rho, a.horizon)?;
    let text = format!(
        "{} members in 1..={} (bound {}): {:?}\n",
        set.members.len(),
        set.horizon,
        set.bound,
        set.members
    );
    let pass = set.pass;
    Ok(Report {
        value: serde_json::to_value(&set).expect("serializable"),
        text,
        pass,
    })
}

fn check_gamma(a: &CheckGammaArgs) -> Result<Report, Error> {
    let q = RationalVector::parse_csv(&a.q)?;
    let alpha = parse_rational(&a.alpha)?;
    let gamma = build_gamma_family_exact(&q, &alpha, a.d, q.len())?;
    let cert = check_nondegenerate(&gamma);
    let normals: Vec<Vec<String>> = gamma
        .exact
        .as_ref()
        .map(|ns| ns.iter().map(|v| v.to_strings()).collect())
        .unwrap_or_default();
    let text = match &cert.failing_chain {
        None => format!("non-degenerate: {} chains checked\n", cert.chains_checked),
        Some(c) => format!("degenerate: minor vanishes for chain {c:?}\n"),
    };
    let pass = cert.pass;
    Ok(Report {
        value: json!({
            "q": q.to_strings(),
            "alpha": alpha.to_string(),
            "d": a.d,
            "normals": normals,
            "certificate": cert,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn parse_points(s: &str, n: usize) -> Result<Vec<Vec<f64>>, Error> {
    let pts = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_floats)
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = pts.iter().find(|p| p.len() != n) {
        return Err(Error::Config(format!("point {p:?} has {} coordinates, expected {n}", p.len())));
    }
    Ok(pts)
}

fn build_symbol(a: &BuildSymbolArgs, seed: u64) -> Result<Report, Error> {
    let direction = || -> Result<Vec<f64>, Error> {
        let s = a.alpha.as_deref().ok_or_else(|| Error::Config("--alpha is required for this kind".into()))?;
        parse_floats(s)
    };
    let sym = match a.kind {
        SymbolKind::One => Symbol::One { arity: a.arity },
        SymbolKind::Carleson => make_carleson_region(direction()?, a.cut),
        SymbolKind::Sign => Symbol::Sign { normal: direction()? },
        SymbolKind::Paraproduct => make_paraproduct_symbol(a.k_max)?,
        SymbolKind::TrilinearSgn => make_trilinear_sgn_symbol(make_paraproduct_symbol(a.k_max)?),
        SymbolKind::Control => {
            if !(a.width > 0.0) {
                return Err(Error::Config("--width must be positive".into()));
            }
            make_control_symbol(direction()?, a.width)
        }
    };
    let n = sym.arity().expect("fixed arity");
    let mut points = match &a.at {
        Some(s) => parse_points(s, n)?,
        None => Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..a.samples {
        points.push((0..n).map(|_| rng.random_range(-8.0..8.0)).collect());
    }
    let evals: Vec<Value> = points
        .iter()
        .map(|p| {
            let v = sym.eval(p);
            json!({"xi": p, "re": v.re, "im": v.im})
        })
        .collect();
    let mut text = format!("{}-variable symbol, sup |m| <= {}\n", n, sym.sup_bound());
    for (p, e) in points.iter().zip(&evals) {
        text.push_str(&format!("  m({p:?}) = {} + {}i\n", e["re"], e["im"]));
    }
    let mikhlin = match a.mikhlin {
        Some(order) => {
            if n != 2 {
                return Err(Error::Config("--mikhlin needs a two-variable symbol".into()));
            }
            let report = check_mikhlin(&sym, &Subspace::origin(2), order, &log_polar_grid(0.25, 1024.0, 16, 64))?;
            for e in &report.entries {
                text.push_str(&format!("  C{:?} = {:.6}\n", e.multi_index, e.constant));
            }
            Some(report)
        }
        None => None,
    };
    Ok(Report {
        value: json!({
            "symbol": sym,
            "arity": n,
            "sup_bound": sym.sup_bound(),
            "evaluations": evals,
            "mikhlin": mikhlin,
            "seed": seed,
            "pass": true,
        }),
        text,
        pass: true,
    })
}

fn kernel_lemma(a: &LemmaArgs) -> Result<Report, Error> {
    let qs = parse_floats(&a.q)?;
    if qs.iter().any(|q| *q == 0.0) {
        return Err(Error::Config("q entries must be nonzero".into()));
    }
    let alpha: Vec<f64> = qs.iter().map(|q| 1.0 / (q * q)).collect();
    let beta: Vec<f64> = qs.iter().map(|q| 1.0 / (q * q * q)).collect();
    let bump = Bump::new(a.h)?;
    let kernel = KernelSpec::hilbert();
    let setup = LemmaSetup {
        bump: &bump,
        alpha: &alpha,
        beta: &beta,
        a: a.a,
        k1: &kernel,
        k2: &kernel,
    };
    let k0 = match a.k0 {
        Some(k) => k,
        None => calibrate_k0(&setup, a.theta, 8, a.k_max)?,
    };
    let report = verify_kernel_lemma(&setup, k0, k0..=a.k_max, a.theta)?;
    let failing = report.rows.iter().filter(|r| !r.pass).count() + report.halving.iter().filter(|r| !r.pass).count();
    let worst = report.halving.iter().map(|r| (r.ratio / 0.5 - 1.0).abs()).fold(0.0, f64::max);
    let text = format!(
        "D = {:.6e}, k0 = {}, {} rows, {} failing, worst halving deviation {:.2}%\n",
        report.d,
        report.k0,
        report.rows.len(),
        failing,
        100.0 * worst
    );
    let pass = report.pass;
    Ok(Report {
        value: serde_json::to_value(&report).expect("serializable"),
        text,
        pass,
    })
}

fn run(a: &RunArgs, seed: Option<u64>) -> Result<Report, Error> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let record = run_blowup(&cfg)?;
    let dir = a.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    if let Some(d) = &dir {
        write_outputs(&record, d)?;
    }
    let mut text = String::new();
    for r in &record.rows {
        text.push_str(&format!("N = {:>4}  R = {:.6e}\n", r.n, r.ratio));
    }
    if let Some(f) = &record.fit {
        text.push_str(&format!("slope {:.4e}, residual {:.4}\n", f.slope, f.residual));
    }
    for o in &record.assertions {
        text.push_str(&format!("{} {}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail));
    }
    let pass = record.pass;
    Ok(Report {
        value: serde_json::to_value(&record).expect("serializable"),
        text,
        pass,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match &cli.command {
        Command::SolveHash(a) => solve_hash(a),
        Command::Bohr(a) => bohr(a),
        Command::CheckGamma(a) => check_gamma(a),
        Command::BuildSymbol(a) => build_symbol(a, cli.seed.unwrap_or(0)),
        Command::VerifyKernelLemma(a) => kernel_lemma(a),
        Command::RunBlowup(a) => run(a, cli.seed),
    };
    match result {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.value).expect("serializable"));
            } else {
                print!("{}", r.text);
            }
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string(), "pass": false}));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
