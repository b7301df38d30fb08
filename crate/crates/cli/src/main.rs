use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use qhred::canonical::{omega0, omega1, phi};
use qhred::form::{eval_full, FormExpr};
use qhred::lie::{BackendKind, GroupPoint, LieBackend, Mat, Tangent};
use qhred::qham::genus_surface_space;
use qhred::report::Sampling;
use qhred::suites::{run, Suite};
use qhred::transgression::double_lagrangian;

const EXIT_FAILURES: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "qhred", version, about = "Verify identities between invariant forms on matrix Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Print a canonical form and its value at a point.
    Compute(ComputeArgs),
}

#[derive(Args)]
struct BackendArgs {
    /// sl2, so3, gl1, gl2, ... or gl together with --n.
    #[arg(long, default_value = "sl2")]
    backend: String,
    /// Matrix size for `--backend gl`.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, lie, forms, cech, torsor, transgression or qham.
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    /// omega0, omega1, phi, h0_torus or h0_genus(g).
    what: String,
    #[command(flatten)]
    backend: BackendArgs,
    /// Point as a JSON array of matrices (one per factor, row-major nested arrays).
    #[arg(long)]
    point: String,
    /// Tangent vectors as a JSON array; each is an array of matrices, one per factor.
    #[arg(long, default_value = "[]")]
    tangents: String,
    /// Lie algebra value of the slot `x` (omega0 only), as a matrix.
    #[arg(long)]
    slot: Option<String>,
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn backend(args: &BackendArgs) -> anyhow::Result<LieBackend> {
    let kind = BackendKind::parse(&args.backend, args.n).map_err(|e| usage(e.to_string()))?;
    if let (BackendKind::Gl(m), Some(n)) = (kind, args.n) {
        if m != n {
            return Err(usage(format!("--backend {} conflicts with --n {n}", args.backend)));
        }
    }
    LieBackend::new(kind).map_err(|e| usage(e.to_string()))
}

fn verify(args: &VerifyArgs) -> anyhow::Result<u8> {
    let suite: Suite = args.suite.parse().map_err(usage)?;
    let b = backend(&args.backend)?;
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if !(args.tol > 0.0 && args.tol <= 1e-3) {
        return Err(usage(format!("--tol must lie in (0, 1e-3], got {}", args.tol)));
    }
    let report = run(suite, &b, Sampling::new(args.trials, args.tol, args.seed));
    let text = report.to_json();
    match &args.output {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    let s = &report.summary;
    eprintln!("{} checks: {} passed, {} failed, {} inconclusive", s.total, s.passed, s.failed, s.inconclusive);
    Ok(if report.has_failures() { EXIT_FAILURES } else { 0 })
}

fn parse_matrix(v: &serde_json::Value, n: usize, what: &str) -> anyhow::Result<Mat> {
    let rows: Vec<Vec<f64>> = serde_json::from_value(v.clone()).map_err(|e| usage(format!("{what}: {e}")))?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(usage(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
}

fn form_for(what: &str) -> anyhow::Result<FormExpr> {
    let what = what.trim();
    Ok(match what {
        "omega0" => omega0(),
        "omega1" => omega1(),
        "phi" => phi(),
        "h0_torus" => double_lagrangian(),
        _ => {
            let g = what
                .strip_prefix("h0_genus")
                .map(|r| r.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == '='))
                .ok_or_else(|| usage(format!("unknown form `{what}` (omega0, omega1, phi, h0_torus, h0_genus(g))")))?;
            let g: usize = g.parse().map_err(|_| usage(format!("h0_genus needs a positive genus, got `{g}`")))?;
            let space = genus_surface_space(g).map_err(|e| usage(e.to_string()))?;
            space.as_group()?.h0.clone()
        }
    })
}

fn compute(args: &ComputeArgs) -> anyhow::Result<u8> {
    let b = backend(&args.backend)?;
    let form = form_for(&args.what)?;
    let n = b.matrix_size();
    let (k, p) = (form.arity(), form.degree());
    let point: Vec<serde_json::Value> =
        serde_json::from_str(&args.point).map_err(|e| usage(format!("--point: {e}")))?;
    if point.len() != k {
        return Err(usage(format!("{} is a {p}-form on G^{k}: expected {k} point factors, got {}", args.what, point.len())));
    }
    let coords = point.iter().map(|m| parse_matrix(m, n, "--point")).collect::<anyhow::Result<Vec<_>>>()?;
    let tangents: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(&args.tangents).map_err(|e| usage(format!("--tangents: {e}")))?;
    if tangents.len() != p {
        return Err(usage(format!("{} is a {p}-form on G^{k}: expected {p} tangents, got {}", args.what, tangents.len())));
    }
    let tangents = tangents
        .iter()
        .map(|t| {
            if t.len() != k {
                bail!(usage(format!("each tangent needs {k} components, got {}", t.len())));
            }
            let components = t.iter().map(|m| parse_matrix(m, n, "--tangents")).collect::<anyhow::Result<Vec<_>>>()?;
            Ok(Tangent { components })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut slots = HashMap::new();
    for name in form.slots() {
        let text = args.slot.as_ref().ok_or_else(|| usage(format!("{} needs --slot for `{name}`", args.what)))?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| usage(format!("--slot: {e}")))?;
        slots.insert(name, parse_matrix(&v, n, "--slot")?);
    }
    let value = eval_full(&form, &b, &GroupPoint::new(coords), &tangents, &slots).map_err(|e| usage(e.to_string()))?;
    let out = serde_json::json!({
        "form": args.what,
        "sexpr": form.to_sexpr(),
        "shape": form.shape().to_string(),
        "backend": b.name(),
        "value": value.to_json(),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Compute(a) => compute(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURES)
        }
    }
}
