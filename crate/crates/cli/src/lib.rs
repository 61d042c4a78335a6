//! Input parsing, dispatch and reporting for the `quatroots` binary.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use quatroots::baseline::solve_jo;
use quatroots::quaternion::ConjugacyClass;
use quatroots::solver::{solve_alg1, solve_alg1prime};
use quatroots::verify::{audit, compare, Agreement, VerificationReport, ZeroDescriptor, ACCEPT_TOL};
use quatroots::{Complex64, Quaternion, SimplePolynomial, Tolerances, ZeroSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Matching tolerance for comparing two zero sets.
pub const MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Discriminant method, first variant
    New,
    /// Discriminant method via the gcd of the derived polynomials
    NewPrime,
    /// Companion-polynomial method
    Jo,
    /// All three, with pairwise differences
    Compare,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::New => "new",
            Algorithm::NewPrime => "new-prime",
            Algorithm::Jo => "jo",
            Algorithm::Compare => "compare",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Zeros of simple quaternionic polynomials.
///
/// Input is a JSON document `{"coefficients": [[a0, a1, a2, a3], ...]}` with
/// the constant term first, or the shorthand `1 0 0 0; 0 0 0 1` with one row
/// per coefficient.
#[derive(Debug, Parser)]
#[command(name = "quatroots", version)]
pub struct Args {
    /// Problem files; `-` or none reads stdin
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Algorithm::Compare)]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 1e-5)]
    pub tol_real: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_zero: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_gcd: f64,
    #[arg(long, default_value_t = 8)]
    pub samples_per_class: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Treat coefficients as standing right of the powers
    #[arg(long)]
    pub right_sided: bool,
}

impl Args {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            real: self.tol_real,
            zero: self.tol_zero,
            gcd: self.tol_gcd,
            ..Tolerances::default()
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field { field: field.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub coefficients: Vec<[f64; 4]>,
    /// Zeros the result is checked against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Zeros>,
}

impl ProblemFile {
    pub fn polynomial(&self) -> SimplePolynomial {
        SimplePolynomial::from_arrays(&self.coefficients)
    }

    fn validate(self) -> Result<Self, ParseError> {
        let n = self.coefficients.len();
        if n < 2 {
            return Err(field("coefficients", format!("need at least 2 entries, found {n}")));
        }
        if self.coefficients[n - 1].iter().all(|&x| x == 0.0) {
            return Err(field(format!("coefficients[{}]", n - 1), "leading coefficient is zero"));
        }
        Ok(self)
    }
}

/// Parses a JSON problem or, if the input does not start with `{`, the
/// row shorthand.
pub fn parse_problem(src: &str) -> Result<ProblemFile, ParseError> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_rows(src)
    }
}

fn parse_json(src: &str) -> Result<ProblemFile, ParseError> {
    let doc: Value = serde_json::from_str(src).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| field("document", "expected an object"))?;
    let coeffs = obj
        .get("coefficients")
        .ok_or_else(|| field("coefficients", "missing"))?
        .as_array()
        .ok_or_else(|| field("coefficients", "expected an array"))?;
    let mut coefficients = Vec::with_capacity(coeffs.len());
    for (i, c) in coeffs.iter().enumerate() {
        let name = format!("coefficients[{i}]");
        let row = c.as_array().ok_or_else(|| field(&name, "expected an array of 4 numbers"))?;
        if row.len() != 4 {
            return Err(field(&name, format!("expected 4 components, found {}", row.len())));
        }
        let mut q = [0.0; 4];
        for (k, x) in row.iter().enumerate() {
            q[k] = x
                .as_f64()
                .ok_or_else(|| field(format!("{name}[{k}]"), format!("expected a number, found {x}")))?;
        }
        coefficients.push(q);
    }
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(field("name", "expected a string")),
    };
    let expected = match obj.get("expected") {
        None | Some(Value::Null) => None,
        Some(v) => Some(Zeros::deserialize(v).map_err(|e| field("expected", e.to_string()))?),
    };
    ProblemFile { name, coefficients, expected }.validate()
}

fn parse_rows(src: &str) -> Result<ProblemFile, ParseError> {
    let mut coefficients = Vec::new();
    let rows = src
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(';'))
        .map(str::trim)
        .filter(|r| !r.is_empty());
    for (i, row) in rows.enumerate() {
        let name = format!("row {}", i + 1);
        let parts: Vec<&str> = row.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        if parts.len() != 4 {
            return Err(field(&name, format!("expected 4 components, found {}", parts.len())));
        }
        let mut q = [0.0; 4];
        for (k, s) in parts.iter().enumerate() {
            q[k] = s.parse().map_err(|_| field(&name, format!("component {}: not a number: {s:?}", k + 1)))?;
        }
        coefficients.push(q);
    }
    ProblemFile { name: None, coefficients, expected: None }.validate()
}

/// Serializable view of a [`ZeroSet`]. Classes carry `re` and `modulus`
/// alongside the complex representative they are rebuilt from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Zeros {
    #[serde(default)]
    pub real: Vec<f64>,
    #[serde(default)]
    pub isolated: Vec<[f64; 4]>,
    #[serde(default)]
    pub spherical: Vec<Class>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Class {
    pub re: f64,
    pub modulus: f64,
    /// `[re, im]` with `im > 0`.
    pub representative: [f64; 2],
}

impl From<&ZeroSet> for Zeros {
    fn from(zs: &ZeroSet) -> Self {
        Zeros {
            real: zs.real_zeros.clone(),
            isolated: zs.isolated_zeros.iter().map(|q| q.to_array()).collect(),
            spherical: zs
                .spherical
                .iter()
                .map(|c| {
                    let z = c.representative();
                    Class { re: c.re(), modulus: c.modulus(), representative: [z.re, z.im] }
                })
                .collect(),
        }
    }
}

impl Zeros {
    /// `None` if a class representative is real.
    pub fn to_zero_set(&self) -> Option<ZeroSet> {
        let spherical = self
            .spherical
            .iter()
            .map(|c| ConjugacyClass::from_complex(Complex64::new(c.representative[0], c.representative[1])))
            .collect::<Option<Vec<_>>>()?;
        Some(ZeroSet {
            real_zeros: self.real.clone(),
            isolated_zeros: self.isolated.iter().map(|&a| Quaternion::from_array(a)).collect(),
            spherical,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub algorithm: Algorithm,
    pub zeros: Zeros,
    pub verification: VerificationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Difference {
    pub left: Algorithm,
    pub right: Algorithm,
    pub agreement: Agreement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub coefficients: Vec<[f64; 4]>,
    pub right_sided: bool,
    pub solutions: Vec<Solution>,
    /// Pairwise differences in compare mode.
    pub diff: Vec<Difference>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Agreement>,
    pub passed: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{input}: {err}")]
    Parse { input: String, err: ParseError },
    #[error("{input}: {algorithm} failed: {err}")]
    Solver { input: String, algorithm: &'static str, err: quatroots::Error },
    #[error("{input}: {err}")]
    Io { input: String, err: std::io::Error },
}

fn conj_descriptor(d: ZeroDescriptor) -> ZeroDescriptor {
    match d {
        ZeroDescriptor::Real { value } => ZeroDescriptor::Real { value },
        ZeroDescriptor::Isolated { zero } => ZeroDescriptor::Isolated { zero: zero.conj() },
        ZeroDescriptor::Spherical { class, point } => ZeroDescriptor::Spherical { class, point: point.conj() },
    }
}

fn solve_one(p: &SimplePolynomial, algorithm: Algorithm, args: &Args) -> quatroots::Result<(ZeroSet, VerificationReport)> {
    let tols = args.tolerances();
    // right-sided p(x) = sum x^j q_j has conj(p(x)) = sum conj(q_j) conj(x)^j
    let q = if args.right_sided { p.conj_coeffs() } else { p.clone() };
    let zs = match algorithm {
        Algorithm::New => solve_alg1(&q, &tols)?,
        Algorithm::NewPrime => solve_alg1prime(&q, &tols)?,
        Algorithm::Jo => solve_jo(&q, &tols)?,
        Algorithm::Compare => unreachable!("compare dispatches each algorithm"),
    };
    let mut report = audit(&q, &zs, args.samples_per_class);
    if args.right_sided {
        for e in &mut report.entries {
            e.zero = conj_descriptor(e.zero.clone());
        }
        return Ok((zs.conjugated(), report));
    }
    Ok((zs, report))
}

pub fn solve_problem(source: &str, problem: &ProblemFile, args: &Args) -> Result<Report, RunError> {
    let p = problem.polynomial();
    let algorithms: &[Algorithm] = match args.algorithm {
        Algorithm::Compare => &[Algorithm::New, Algorithm::NewPrime, Algorithm::Jo],
        ref a => std::slice::from_ref(a),
    };
    let mut sets = Vec::new();
    let mut solutions = Vec::new();
    for &a in algorithms {
        let (zs, verification) = solve_one(&p, a, args).map_err(|err| RunError::Solver {
            input: source.to_string(),
            algorithm: a.name(),
            err,
        })?;
        solutions.push(Solution { algorithm: a, zeros: Zeros::from(&zs), verification });
        sets.push(zs);
    }
    let mut diff = Vec::new();
    for i in 1..sets.len() {
        diff.push(Difference {
            left: algorithms[0],
            right: algorithms[i],
            agreement: compare(&sets[0], &sets[i], MATCH_TOL),
        });
    }
    let expected = match &problem.expected {
        None => None,
        Some(z) => {
            let want = z.to_zero_set().ok_or_else(|| RunError::Parse {
                input: source.to_string(),
                err: field("expected.spherical", "representative must be nonreal"),
            })?;
            Some(compare(&sets[0], &want, MATCH_TOL))
        }
    };
    let passed = solutions.iter().all(|s| s.verification.passed(ACCEPT_TOL))
        && diff.iter().all(|d| d.agreement.is_empty())
        && expected.as_ref().map_or(true, Agreement::is_empty);
    Ok(Report {
        source: source.to_string(),
        name: problem.name.clone(),
        coefficients: problem.coefficients.clone(),
        right_sided: args.right_sided,
        solutions,
        diff,
        expected,
        passed,
    })
}

fn g(x: f64) -> String {
    format!("{x:.16e}")
}

fn quaternion_text(q: [f64; 4]) -> String {
    format!("({}, {}, {}, {})", g(q[0]), g(q[1]), g(q[2]), g(q[3]))
}

fn descriptor_text(d: &ZeroDescriptor) -> String {
    match d {
        ZeroDescriptor::Real { value } => format!("real {}", g(*value)),
        ZeroDescriptor::Isolated { zero } => format!("isolated {}", quaternion_text(zero.to_array())),
        ZeroDescriptor::Spherical { class, .. } => {
            format!("spherical re {} modulus {}", g(class.re()), g(class.modulus()))
        }
    }
}

/// Human-readable report, every number with 17 significant digits.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let title = r.name.as_deref().unwrap_or(&r.source);
    let side = if r.right_sided { ", right-sided" } else { "" };
    let _ = writeln!(out, "== {title} (degree {}{side})", r.coefficients.len() - 1);
    for s in &r.solutions {
        let z = &s.zeros;
        let _ = writeln!(out, "[{}]", s.algorithm.name());
        let _ = writeln!(out, "  real zeros: {}", z.real.len());
        for x in &z.real {
            let _ = writeln!(out, "    {}", g(*x));
        }
        let _ = writeln!(out, "  isolated zeros: {}", z.isolated.len());
        for q in &z.isolated {
            let _ = writeln!(out, "    {}", quaternion_text(*q));
        }
        let _ = writeln!(out, "  spherical classes: {}", z.spherical.len());
        for c in &z.spherical {
            let _ = writeln!(
                out,
                "    re {} modulus {} representative {} + {}i",
                g(c.re),
                g(c.modulus),
                g(c.representative[0]),
                g(c.representative[1])
            );
        }
        let v = &s.verification;
        let verdict = if v.passed(ACCEPT_TOL) { "ok" } else { "FAILED" };
        let _ = writeln!(
            out,
            "  verification: {verdict}, max relative residual {}, {} points, count bounds {}",
            g(v.max_residual),
            v.entries.len(),
            if v.bounds_ok { "ok" } else { "violated" }
        );
    }
    if !r.diff.is_empty() {
        let _ = writeln!(out, "diff:");
        let mut any = false;
        for d in &r.diff {
            for z in &d.agreement.unmatched_left {
                any = true;
                let _ = writeln!(out, "  only {}: {}", d.left.name(), descriptor_text(z));
            }
            for z in &d.agreement.unmatched_right {
                any = true;
                let _ = writeln!(out, "  only {}: {}", d.right.name(), descriptor_text(z));
            }
        }
        if !any {
            let _ = writeln!(out, "  (none)");
        }
    }
    if let Some(e) = &r.expected {
        let _ = writeln!(out, "expected: {}", if e.is_empty() { "matched" } else { "MISMATCH" });
        for z in &e.unmatched_left {
            let _ = writeln!(out, "  unexpected {}", descriptor_text(z));
        }
        for z in &e.unmatched_right {
            let _ = writeln!(out, "  missing {}", descriptor_text(z));
        }
    }
    let _ = writeln!(out, "result: {}", if r.passed { "PASS" } else { "FAIL" });
    out
}

fn read_source(path: &PathBuf, stdin: &mut dyn Read) -> Result<(String, String), RunError> {
    let name = path.display().to_string();
    let res = if name == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    };
    let text = res.map_err(|err| RunError::Io { input: name.clone(), err })?;
    Ok((if name == "-" { "<stdin>".into() } else { name }, text))
}

/// Runs every problem and returns the exit status: 1 if any input failed to
/// parse or solve, else 2 if any report failed, else 0.
pub fn run(args: &Args, stdin: &mut dyn Read, stdout: &mut String, stderr: &mut String) -> i32 {
    let files = if args.files.is_empty() { vec![PathBuf::from("-")] } else { args.files.clone() };
    let mut reports = Vec::new();
    let mut errored = false;
    for path in &files {
        let result = read_source(path, stdin).and_then(|(source, text)| {
            let problem = parse_problem(&text).map_err(|err| RunError::Parse { input: source.clone(), err })?;
            solve_problem(&source, &problem, args)
        });
        match result {
            Ok(r) => reports.push(r),
            Err(e) => {
                errored = true;
                let _ = writeln!(stderr, "error: {e}");
            }
        }
    }
    match args.format {
        Format::Text => {
            for r in &reports {
                stdout.push_str(&render_text(r));
            }
        }
        Format::Json => {
            let doc = if files.len() == 1 && reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(&reports)
            };
            stdout.push_str(&doc.expect("reports serialize"));
            stdout.push('\n');
        }
    }
    if errored {
        EXIT_ERROR
    } else if reports.iter().any(|r| !r.passed) {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}
