//! Command-line front end for the certified factorization solver.
//!
//! Reads a polynomial — inline or from a JSON file — runs the solver, and
//! prints a single JSON document with the roots, the residual, and
//! optional verification, reference-solver comparison, and per-stage
//! statistics. Numbers are emitted with 17 significant digits so every
//! 64-bit float round-trips exactly, and repeated runs on identical input
//! produce bitwise-identical output.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 precision underflow
//! (the requested tolerance is unreachable in this arithmetic), 4 solver
//! runtime failure.

use clap::Parser;
use pathlift::oracle::{match_multisets, oracle_roots};
use pathlift::{factor_to_root_precision, residual_norm, solve, Error, Poly64, C64};
use serde_json::Value;
use std::path::PathBuf;
use std::process::ExitCode;

/// Certified epsilon-factorization of complex polynomials: finds d points
/// whose monic product is within epsilon of the input in the max
/// coefficient norm.
#[derive(Parser, Debug)]
#[command(name = "pathlift", version)]
#[command(group(
    clap::ArgGroup::new("source").required(true).args(["input", "coeffs"])
))]
struct Args {
    /// Target factorization precision (max coefficient-norm residual).
    #[arg(long, conflicts_with = "root_precision")]
    epsilon: Option<f64>,

    /// Desired root accuracy; epsilon is derived as (r/8d)^d.
    #[arg(long)]
    root_precision: Option<f64>,

    /// JSON input file: {"coeffs": [[re, im], ...], "epsilon": 1e-4}
    /// with coefficients ascending; "epsilon" is optional and bare reals
    /// are accepted in place of [re, im] pairs.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Inline ascending coefficient list, e.g. "[-1,0,1]" for z^2 - 1 or
    /// "[[re,im],...]" for complex coefficients.
    #[arg(long)]
    coeffs: Option<String>,

    /// Recompute the residual of the returned factorization and include
    /// it as "residual_verified".
    #[arg(long)]
    verify: bool,

    /// Solve independently with the reference root finder and include the
    /// optimal root-multiset distance as "oracle_distance".
    #[arg(long)]
    oracle_compare: bool,

    /// Include per-stage counters as "stages".
    #[arg(long)]
    stats: bool,
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(doc) => {
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type Failure = (u8, String);

/// Maps solver errors to the exit-code contract: invalid input is a usage
/// problem (2), an unreachable tolerance is 3, anything else that stops
/// the solver at runtime is 4.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::TauUnderflow { .. } => 3,
        _ => 4,
    }
}

fn solver_failure(e: Error) -> Failure {
    (exit_code(&e), e.to_string())
}

fn input_failure(msg: impl Into<String>) -> Failure {
    (2, msg.into())
}

fn run(args: Args) -> Result<String, Failure> {
    let (coeffs, file_epsilon) = load_input(&args)?;
    let phi = Poly64::new(coeffs);
    if phi.is_zero() {
        return Err(input_failure("the zero polynomial has no factorization"));
    }
    let leading = phi.leading();
    let monic = phi.monicized();

    let epsilon = if let Some(e) = args.epsilon {
        e
    } else if let Some(r) = args.root_precision {
        factor_to_root_precision(r, monic.degree().max(1)).map_err(solver_failure)?
    } else if let Some(e) = file_epsilon {
        e
    } else {
        return Err(input_failure(
            "no tolerance given: pass --epsilon or --root-precision, or put \"epsilon\" in the input file",
        ));
    };

    let out = solve(&monic, epsilon).map_err(solver_failure)?;

    // serde_json's map is sorted on serialization, so the document layout
    // is a pure function of its contents: identical runs byte-match.
    let mut doc = serde_json::Map::new();
    doc.insert("degree".into(), Value::from(monic.degree()));
    doc.insert("epsilon".into(), num(epsilon));
    doc.insert("leading_coefficient".into(), pair(leading));
    doc.insert("k".into(), num(out.k));
    doc.insert("tau".into(), num(out.tau));
    doc.insert(
        "roots".into(),
        Value::Array(out.roots.iter().map(|&r| pair(r)).collect()),
    );
    doc.insert("residual".into(), num(out.residual));

    if args.verify {
        let again = residual_norm(&monic, &out.roots).map_err(solver_failure)?;
        doc.insert("residual_verified".into(), num(again));
    }
    if args.oracle_compare {
        let oracle = oracle_roots(&monic).map_err(solver_failure)?;
        let dist = match_multisets(&out.roots, &oracle.roots).map_err(solver_failure)?;
        doc.insert("oracle_distance".into(), num(dist));
    }
    if args.stats {
        let stages: Vec<Value> = out
            .per_stage
            .iter()
            .map(|s| {
                let mut m = serde_json::Map::new();
                m.insert("degree".into(), Value::from(s.degree));
                m.insert("accepted".into(), Value::from(s.accepted));
                m.insert("quadrants_tried".into(), Value::from(s.quadrants_tried));
                m.insert("plm_iterations".into(), Value::from(s.plm_iterations));
                m.insert("polish_iterations".into(), Value::from(s.polish_iterations));
                m.insert("points_certified".into(), Value::from(s.points_certified));
                m.insert("points_weeded".into(), Value::from(s.points_weeded));
                m.insert("evaluations".into(), Value::from(s.evaluations));
                Value::Object(m)
            })
            .collect();
        doc.insert("stages".into(), Value::Array(stages));
    }

    serde_json::to_string_pretty(&Value::Object(doc))
        .map_err(|e| (4, format!("serialization failed: {e}")))
}

/// Reads the coefficient list (and optional epsilon) from the file or the
/// inline flag.
fn load_input(args: &Args) -> Result<(Vec<C64>, Option<f64>), Failure> {
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| input_failure(format!("{} is not valid JSON: {e}", path.display())))?;
        let obj = value
            .as_object()
            .ok_or_else(|| input_failure("input file must hold one JSON object"))?;
        let coeffs = obj
            .get("coeffs")
            .ok_or_else(|| input_failure("input object needs a \"coeffs\" array"))?;
        let epsilon = match obj.get("epsilon") {
            None => None,
            Some(v) => Some(
                v.as_f64()
                    .ok_or_else(|| input_failure("\"epsilon\" must be a number"))?,
            ),
        };
        Ok((parse_coeffs(coeffs)?, epsilon))
    } else {
        let text = args
            .coeffs
            .as_deref()
            .expect("clap enforces the source group");
        let value: Value = serde_json::from_str(text)
            .map_err(|e| input_failure(format!("--coeffs is not a valid JSON list: {e}")))?;
        Ok((parse_coeffs(&value)?, None))
    }
}

/// Accepts `[a0, a1, ...]` with each entry a real number or an
/// `[re, im]` pair, ascending by power.
fn parse_coeffs(v: &Value) -> Result<Vec<C64>, Failure> {
    let items = v
        .as_array()
        .ok_or_else(|| input_failure("coefficients must form a JSON array"))?;
    if items.is_empty() {
        return Err(input_failure("the coefficient list is empty"));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Value::Number(n) => n
                .as_f64()
                .map(|re| C64::new(re, 0.0))
                .ok_or_else(|| input_failure(format!("coefficient {i} is out of range"))),
            Value::Array(p) if p.len() == 2 => {
                let re = p[0].as_f64();
                let im = p[1].as_f64();
                match (re, im) {
                    (Some(re), Some(im)) => Ok(C64::new(re, im)),
                    _ => Err(input_failure(format!(
                        "coefficient {i} must be an [re, im] pair of numbers"
                    ))),
                }
            }
            _ => Err(input_failure(format!(
                "coefficient {i} must be a number or an [re, im] pair"
            ))),
        })
        .collect()
}

/// One float as a JSON number with 17 significant digits, the shortest
/// width that round-trips every 64-bit value.
fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&format!("{x:.16e}")).expect("a finite float formats as a JSON number")
    } else {
        Value::String(format!("{x}"))
    }
}

/// One complex value as an `[re, im]` array.
fn pair(z: C64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}
