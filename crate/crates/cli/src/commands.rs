//! Subcommand implementations. Each returns the text to print on success.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use quasifree::oracle::{run_suite, InvariantReport};
use quasifree::{
    apply_schrodinger, choi_exponential_form, entropy, exp_spectrum, fock, jamiolkowski_symbol,
    linalg, new_channel, random, validate_symbol, Channel64, ChannelKind, Complex64, Error,
    Symbol64,
};
use serde::Serialize;

use crate::document::{self, AnyDocument, MatrixDocument, ParseError};

/// Largest dimension accepted by `oracle-check`.
pub const ORACLE_CHECK_MAX_D: usize = 6;

const TOL: f64 = 1e-10;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Exit code for each library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidOrder(_) | Error::DimensionCap { .. } => 4,
        Error::NotCompletelyPositive { .. } => 5,
        _ => 3,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

type Out = Result<String, CliError>;

/// Formats `x` with 12 significant digits, switching to exponent notation
/// for very large or very small magnitudes.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..=15).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

fn symbol(path: &Path) -> Result<Symbol64, CliError> {
    Ok(validate_symbol(&document::read_matrix(path)?, TOL)?)
}

fn channel(path: &Path) -> Result<Channel64, CliError> {
    let (kind, a, b) = document::read_channel(path)?;
    Ok(new_channel(kind, a, b, TOL)?)
}

fn kind_name(kind: ChannelKind) -> &'static str {
    match kind {
        ChannelKind::Lambda => "lambda",
        ChannelKind::Gamma => "gamma",
    }
}

pub fn validate(path: &Path) -> Out {
    match document::read_any(path)? {
        AnyDocument::Matrix(m) => {
            let q = validate_symbol(&m, TOL)?;
            Ok(format!("valid symbol, d = {}", q.dim()))
        }
        AnyDocument::Channel(kind, a, b) => {
            let c = new_channel(kind, a, b, TOL)?;
            Ok(format!(
                "valid {} channel, d = {}",
                kind_name(kind),
                c.dim()
            ))
        }
    }
}

pub fn entropy(path: &Path, p: Option<f64>) -> Out {
    if let Some(p) = p {
        // Reject a bad order before touching the file.
        if !(p.is_finite() && p > 0.0 && p != 1.0) {
            return Err(Error::InvalidOrder(p).into());
        }
    }
    let q = symbol(path)?;
    let value = match p {
        Some(p) => entropy::renyi_entropy(&q, p)?,
        None => entropy::von_neumann_entropy(&q)?,
    };
    Ok(sig12(value))
}

pub fn relent(first: &Path, second: &Path) -> Out {
    let q1 = symbol(first)?;
    let q2 = symbol(second)?;
    Ok(sig12(entropy::relative_entropy(&q1, &q2)?))
}

pub fn evolve(channel_path: &Path, state: &Path, steps: usize) -> Out {
    let c = channel(channel_path)?;
    let mut q = symbol(state)?;
    if q.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: q.dim(),
        }
        .into());
    }
    for _ in 0..steps {
        q = apply_schrodinger(&c, &q)?;
    }
    Ok(document::to_json(&MatrixDocument::from_matrix(q.matrix())))
}

#[derive(Serialize)]
struct ExponentialDocument {
    scale: f64,
    argument: MatrixDocument,
}

pub fn choi(path: &Path) -> Out {
    let form = choi_exponential_form(&channel(path)?)?;
    let doc = ExponentialDocument {
        scale: form.scale,
        argument: MatrixDocument::from_matrix(&form.argument),
    };
    Ok(document::to_json(&doc))
}

pub fn jamiolkowski(path: &Path) -> Out {
    let js = jamiolkowski_symbol(&channel(path)?)?;
    Ok(document::to_json(&MatrixDocument::from_matrix(
        js.symbol.matrix(),
    )))
}

pub fn spectrum(path: &Path) -> Out {
    let x = document::read_matrix(path)?;
    let values: Vec<[f64; 2]> = exp_spectrum(&x)?.iter().map(|z| [z.re, z.im]).collect();
    Ok(document::to_json(&values))
}

fn report_line(r: &InvariantReport) -> String {
    let status = match (r.ran, r.passed()) {
        (false, _) => "SKIP",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    if r.ran {
        format!(
            "{status} {:<28} max deviation {:.3e} (tolerance {:.0e}, {} trials)",
            r.name, r.max_deviation, r.tolerance, r.trials
        )
    } else {
        format!("{status} {:<28} not run at this dimension", r.name)
    }
}

/// Runs the invariant suite. The flag is `true` when every invariant held.
pub fn oracle_check(d: usize, trials: usize, seed: u64) -> Result<(String, bool), CliError> {
    let cap = ORACLE_CHECK_MAX_D.min(fock::oracle_cap());
    if d == 0 || d > cap {
        return Err(Error::DimensionCap { modes: d, cap }.into());
    }
    let reports = run_suite(d, trials, seed);
    let mut lines = vec![format!(
        "oracle check: d = {d}, trials = {trials}, seed = {seed}"
    )];
    lines.extend(reports.iter().map(report_line));
    let failed = reports.iter().filter(|r| !r.passed()).count();
    lines.push(if failed == 0 {
        "all invariants passed".to_string()
    } else {
        format!("{failed} invariant(s) failed")
    });
    Ok((lines.join("\n"), failed == 0))
}

/// `2^d` written as `m.mme+N`.
fn power_of_two(d: usize) -> String {
    let log = d as f64 * std::f64::consts::LOG10_2;
    let exponent = log.floor();
    format!("{:.2}e{}", 10f64.powf(log - exponent), exponent as i64)
}

pub fn bench(dims: &[usize], seed: u64) -> Out {
    let mut rng = random::seeded(seed);
    let mut lines = vec![format!(
        "{:>6} {:>12} {:>12} {:>14}",
        "d", "entropy_s", "apply_s", "dense_dim"
    )];
    for &d in dims {
        let u = random::random_unitary::<f64, _>(&mut rng, d);
        let q: Vec<f64> = (0..d).map(|i| (i as f64 + 0.5) / d as f64).collect();
        let raw = linalg::hermitian_part(&linalg::reconstruct(&u, &q));
        let symbol = Symbol64::new(&raw)?;
        let a = linalg::scale(&u, Complex64::new(0.5, 0.0));
        let b = linalg::scale(&raw, Complex64::new(0.75, 0.0));
        let c = Channel64::lambda(a, b)?;

        let start = Instant::now();
        let s = entropy::von_neumann_entropy(&symbol)?;
        let entropy_time = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let image = apply_schrodinger(&c, &symbol)?;
        let apply_time = start.elapsed().as_secs_f64();
        debug_assert!(s.is_finite() && image.dim() == d);

        lines.push(format!(
            "{:>6} {:>12.6} {:>12.6} {:>14}",
            d,
            entropy_time,
            apply_time,
            power_of_two(d)
        ));
    }
    Ok(lines.join("\n"))
}
