//! Command-line front end and the machine-readable report.
//!
//! Exit codes: 0 ran (any verdict), 1 internal failure or failed `verify`,
//! 2 parse/usage/document error, 3 solver limits exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::{generator_matrices, orbit_membership_identity, polar_identity_check};
use crate::error::{Error, Result};
use crate::exactlin::{QMatrix, Q};
use crate::forms::{CubicForm, RankOnePoint, UndecidedReason};
use crate::localalg::{
    algebra_from_normal_form, cubic_from_pair, hilbert_profile, parse_rational, second_structure, validate_pair, AlgebraDocument,
    AlgebraPair,
};
use crate::normalform::{normal_vars, recognize, verify_certificate, NormalFormCertificate, Verdict};
use crate::polyring::groebner::GroebnerLimits;
use crate::polyring::{parse_poly, parse_poly_auto, var_list};

#[derive(Parser, Debug)]
#[command(name = "addcubic", version, about = "Additive structures on cubic hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Ordered variable list, comma separated (default: order of first appearance).
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Print the structured report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file with solver limits.
    #[arg(long, global = true, value_name = "FILE")]
    limits: Option<String>,
    /// Apply a seeded random unimodular change of variables first.
    #[arg(long, global = true, value_name = "SEED")]
    scramble: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verdict only.
    Decide { input: String },
    /// Verdict and normal-form certificate.
    Normalize { input: String },
    /// Certificate and the associated pair(s).
    Algebra { input: String },
    /// Pair and the generator matrices of the action.
    Action { input: String },
    /// Cubic of a pair given as an algebra document.
    FromAlgebra { file: String },
    /// Re-run every check on a saved JSON report.
    Verify { file: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleEcho {
    pub seed: u64,
    pub transform: Vec<Vec<String>>,
    pub polynomial: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub polynomial: String,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scramble: Option<ScrambleEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointEntry {
    pub p: Vec<String>,
    pub ell: Vec<String>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub vars: Vec<String>,
    pub normal_form: String,
    /// `x0^2*y0 + x0*(quadratic) + cubic`.
    pub layout: String,
    pub transform: Vec<Vec<String>>,
    pub scalar: String,
    pub square_coeffs: Vec<String>,
    pub point: PointEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraEntry {
    pub document: AlgebraDocument,
    pub hilbert_profile: Vec<usize>,
    pub cubic: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub params: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub generators: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unique: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionEntry>,
    pub checks: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Milliseconds.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            tool: "addcubic".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            verdict: "error".into(),
            ..Default::default()
        }
    }
}

/// Random integer matrix with entries in `[−3, 3]` and determinant ±1.
pub fn scramble_matrix(n: usize, seed: u64) -> QMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let data: Vec<Q> = (0..n * n).map(|_| Q::from_integer(rng.gen_range(-3i64..=3).into())).collect();
        let m = QMatrix::from_vec(n, n, data).expect("square");
        let det = m.determinant().expect("square");
        if det == Q::from_integer(1.into()) || det == Q::from_integer((-1).into()) {
            return m;
        }
    }
}

fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| m.row(i).iter().map(Q::to_string).collect()).collect()
}

fn vec_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(Q::to_string).collect()
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<QMatrix> {
    let n = rows.len();
    let parsed = rows.iter().map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    if parsed.iter().any(|r| r.len() != n) {
        return Err(Error::Document("matrix must be square".into()));
    }
    QMatrix::from_rows(&parsed, n)
}

fn parse_vec(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|x| parse_rational(x)).collect()
}

pub fn parse_limits_document(text: &str) -> Result<GroebnerLimits> {
    serde_json::from_str(text).map_err(|e| Error::Document(format!("limits: {e}")))
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{path}: {e}")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::NotDegreeThree
        | Error::ZeroForm
        | Error::Document(_)
        | Error::InvalidPair(_)
        | Error::DegreeMismatch(_)
        | Error::DimensionMismatch { .. } => 2,
        Error::Limit(_) => 3,
        _ => 1,
    }
}

fn layout(cert: &NormalFormCertificate) -> String {
    let h = cert.h_dim();
    let vars = cert.normal_poly.vars();
    let quad = cert.quad_part().to_poly(vars[1..=h].to_vec().into());
    let cubic = cert.cubic_part().into_poly();
    let mut out = format!("{}^2*{} + {}*({})", vars[0], vars[h + 1], vars[0], quad);
    if !cubic.is_zero() {
        let c = cubic.to_string();
        match c.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {c}")),
        }
    }
    out
}

fn certificate_entry(cert: &NormalFormCertificate) -> CertificateEntry {
    CertificateEntry {
        vars: cert.normal_poly.vars().to_vec(),
        normal_form: cert.normal_poly.to_string(),
        layout: layout(cert),
        transform: matrix_strings(&cert.transform),
        scalar: cert.scalar.to_string(),
        square_coeffs: vec_strings(&cert.square_coeffs),
        point: PointEntry { p: vec_strings(&cert.point.p), ell: vec_strings(&cert.point.ell), c: cert.point.c.to_string() },
    }
}

/// Rebuilds a certificate from its report entry and the verdict fields.
pub fn certificate_from_entry(e: &CertificateEntry, n: usize, k: usize, s: usize) -> Result<NormalFormCertificate> {
    if s + 1 > n {
        return Err(Error::Document("inconsistent n and s".into()));
    }
    let vars = normal_vars(s, n - 1 - s);
    Ok(NormalFormCertificate {
        n,
        k,
        s,
        transform: parse_matrix(&e.transform)?,
        square_coeffs: parse_vec(&e.square_coeffs)?,
        normal_poly: parse_poly(&e.normal_form, &vars)?,
        scalar: parse_rational(&e.scalar)?,
        point: RankOnePoint { p: parse_vec(&e.point.p)?, ell: parse_vec(&e.point.ell)?, c: parse_rational(&e.point.c)? },
    })
}

fn algebra_entry(p: &AlgebraPair) -> Result<AlgebraEntry> {
    Ok(AlgebraEntry {
        document: AlgebraDocument::from_pair(p),
        hilbert_profile: hilbert_profile(p)?.0,
        cubic: cubic_from_pair(p)?.poly().to_string(),
    })
}

fn pair_checks(report: &mut Report, prefix: &str, p: &AlgebraPair) {
    for c in validate_pair(p).checks {
        report.checks.insert(format!("{prefix}.{}", c.name), c.passed);
    }
    if let Ok(c) = cubic_from_pair(p) {
        report.checks.insert(format!("{prefix}.polar_identity"), polar_identity_check(p, &c));
        report.checks.insert(format!("{prefix}.orbit_membership"), orbit_membership_identity(p, &c).unwrap_or(false));
    }
}

struct Parsed {
    cubic: CubicForm,
}

fn parse_input(input: &str, opts: &Opts, report: &mut Report) -> Result<Parsed> {
    let text = match input.strip_prefix('@') {
        Some(path) => read_file(path)?,
        None => input.to_string(),
    };
    let poly = match &opts.vars {
        Some(v) => parse_poly(&text, &var_list(v))?,
        None => parse_poly_auto(&text)?.0,
    };
    report.input = Some(InputEcho { polynomial: poly.to_string(), vars: poly.vars().to_vec(), scramble: None });
    let mut cubic = CubicForm::new(poly)?;
    if let Some(seed) = opts.scramble {
        let t = scramble_matrix(cubic.dim(), seed);
        cubic = cubic.substitute_linear(&t)?;
        report.input.as_mut().expect("set above").scramble =
            Some(ScrambleEcho { seed, transform: matrix_strings(&t), polynomial: cubic.poly().to_string() });
    }
    report.n = Some(cubic.dim() - 1);
    Ok(Parsed { cubic })
}

fn run_input(cmd: &str, input: &str, opts: &Opts, limits: &GroebnerLimits, report: &mut Report) -> Result<i32> {
    let parsed = parse_input(input, opts, report)?;
    let rec = recognize(&parsed.cubic, limits)?;
    report.timings.insert("recognize".into(), rec.elapsed.as_secs_f64() * 1e3);
    report.verdict = rec.verdict.code().into();
    let mut code = 0;
    match &rec.verdict {
        Verdict::No(r) => report.reason = Some(r.code().into()),
        Verdict::Undecided(r) => {
            report.reason = Some(r.to_string());
            if matches!(r, UndecidedReason::Limit(_)) {
                code = 3;
            }
        }
        Verdict::Reducible => report.reason = Some("KGeqOne".into()),
        Verdict::Admits { certificate, unique, .. } => {
            report.k = Some(certificate.k);
            report.s = Some(certificate.s);
            report.unique = Some(*unique);
            if cmd != "decide" {
                report.certificate = Some(certificate_entry(certificate));
                report.checks.insert("certificate".into(), verify_certificate(&parsed.cubic, certificate));
            }
            if cmd == "algebra" || cmd == "action" {
                let start = Instant::now();
                let p = algebra_from_normal_form(certificate)?;
                report.algebras.push(algebra_entry(&p)?);
                pair_checks(report, "algebra[0]", &p);
                report.checks.insert("algebra[0].reproduces_normal_form".into(), cubic_from_pair(&p)?.poly() == &certificate.normal_poly);
                if cmd == "algebra" && !unique {
                    match second_structure(&p, certificate)? {
                        Some(q) => {
                            report.algebras.push(algebra_entry(&q)?);
                            pair_checks(report, "algebra[1]", &q);
                            report
                                .checks
                                .insert("algebra[1].reproduces_normal_form".into(), cubic_from_pair(&q)?.poly() == &certificate.normal_poly);
                        }
                        None => {
                            report.checks.insert("second_structure_found".into(), false);
                        }
                    }
                }
                report.timings.insert("algebra".into(), start.elapsed().as_secs_f64() * 1e3);
                if cmd == "action" {
                    let start = Instant::now();
                    let act = generator_matrices(&p)?;
                    report.checks.insert("action.identity_at_zero".into(), act.identity_at_zero());
                    report.checks.insert("action.group_law".into(), act.group_law_holds());
                    report.checks.insert("action.unipotent".into(), act.generators_unipotent());
                    report.action = Some(ActionEntry {
                        params: act.params.to_vec(),
                        matrix: act.matrix.entry_strings(),
                        generators: act.generators.iter().map(|g| g.entry_strings()).collect(),
                    });
                    report.timings.insert("action".into(), start.elapsed().as_secs_f64() * 1e3);
                }
            }
        }
    }
    Ok(code)
}

fn run_from_algebra(file: &str, limits: &GroebnerLimits, report: &mut Report) -> Result<i32> {
    let doc: AlgebraDocument = serde_json::from_str(&read_file(file)?).map_err(|e| Error::Document(e.to_string()))?;
    let p = doc.to_pair()?;
    let validation = validate_pair(&p);
    for c in &validation.checks {
        report.checks.insert(c.name.clone(), c.passed);
    }
    if let Some(e) = validation.error() {
        return Err(e);
    }
    let c = cubic_from_pair(&p)?;
    let q = validation.normalized.expect("valid");
    report.input = Some(InputEcho { polynomial: c.poly().to_string(), vars: c.vars().to_vec(), scramble: None });
    report.n = Some(c.dim() - 1);
    report.algebras.push(algebra_entry(&q)?);
    report.checks.insert("polar_identity".into(), polar_identity_check(&q, &c));
    report.checks.insert("orbit_membership".into(), orbit_membership_identity(&q, &c)?);
    let rec = recognize(&c, limits)?;
    report.verdict = rec.verdict.code().into();
    if let Verdict::Admits { certificate, unique, .. } = &rec.verdict {
        report.k = Some(certificate.k);
        report.s = Some(certificate.s);
        report.unique = Some(*unique);
        report.certificate = Some(certificate_entry(certificate));
    }
    Ok(0)
}

fn run_verify(file: &str, report: &mut Report) -> Result<i32> {
    let saved: Report = serde_json::from_str(&read_file(file)?).map_err(|e| Error::Document(e.to_string()))?;
    report.verdict = saved.verdict.clone();
    report.reason = saved.reason.clone();
    report.n = saved.n;
    report.k = saved.k;
    report.s = saved.s;
    report.unique = saved.unique;
    report.input = saved.input.clone();
    let cert = match (&saved.certificate, saved.n, saved.k, saved.s) {
        (Some(e), Some(n), Some(k), Some(s)) => Some(certificate_from_entry(e, n, k, s)?),
        (Some(_), ..) => return Err(Error::Document("certificate without n, k, s".into())),
        _ => None,
    };
    if let (Some(cert), Some(input)) = (&cert, &saved.input) {
        let poly = match &input.scramble {
            Some(sc) => parse_poly(&sc.polynomial, &var_list(&input.vars))?,
            None => parse_poly(&input.polynomial, &var_list(&input.vars))?,
        };
        if let Some(sc) = &input.scramble {
            let orig = CubicForm::new(parse_poly(&input.polynomial, &var_list(&input.vars))?)?;
            let moved = orig.substitute_linear(&parse_matrix(&sc.transform)?)?;
            report.checks.insert("scramble".into(), moved.poly() == &poly);
        }
        report.checks.insert("certificate".into(), verify_certificate(&CubicForm::new(poly)?, cert));
    }
    for (i, a) in saved.algebras.iter().enumerate() {
        let prefix = format!("algebra[{i}]");
        let p = a.document.to_pair()?;
        pair_checks(report, &prefix, &p);
        if let Some(cert) = &cert {
            let same = cubic_from_pair(&p).map(|c| c.poly() == &cert.normal_poly).unwrap_or(false);
            report.checks.insert(format!("{prefix}.reproduces_normal_form"), same);
        }
        let profile = hilbert_profile(&p).map(|h| h.0 == a.hilbert_profile).unwrap_or(false);
        report.checks.insert(format!("{prefix}.hilbert_profile"), profile);
    }
    Ok(if report.checks.values().all(|&b| b) { 0 } else { 1 })
}

fn render_vector(v: &[String], labels: &[String]) -> String {
    let mut terms = Vec::new();
    for (c, l) in v.iter().zip(labels) {
        match c.as_str() {
            "0" => {}
            "1" => terms.push(l.clone()),
            "-1" => terms.push(format!("-{l}")),
            _ => terms.push(format!("{c}*{l}")),
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

fn render_human(r: &Report) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    if let Some(i) = &r.input {
        line(format!("input: {}  [{}]", i.polynomial, i.vars.join(", ")));
        if let Some(sc) = &i.scramble {
            line(format!("scrambled (seed {}): {}", sc.seed, sc.polynomial));
        }
    }
    let mut v = format!("verdict: {}", r.verdict);
    if let Some(reason) = &r.reason {
        v.push_str(&format!(" ({reason})"));
    }
    if let (Some(k), Some(s), Some(n)) = (r.k, r.s, r.n) {
        v.push_str(&format!("  k={k} s={s} n={n}"));
    }
    if let Some(u) = r.unique {
        v.push_str(if u { "  unique" } else { "  not unique" });
    }
    line(v);
    if let Some(e) = &r.error {
        line(format!("error: {e}"));
    }
    if let Some(c) = &r.certificate {
        line(format!("normal form: {}", c.layout));
        if !c.square_coeffs.is_empty() {
            line(format!("square coefficients: {}", c.square_coeffs.join(", ")));
        }
        line(format!("scalar: {}", c.scalar));
        line("transform:".into());
        for row in &c.transform {
            line(format!("  [{}]", row.join(", ")));
        }
    }
    for (i, a) in r.algebras.iter().enumerate() {
        let profile: Vec<String> = a.hilbert_profile.iter().map(usize::to_string).collect();
        line(format!("algebra {}: Hilbert profile ({})", i + 1, profile.join(",")));
        for p in &a.document.products {
            line(format!("  {}*{} = {}", p.left, p.right, render_vector(&p.value, &a.document.basis)));
        }
        line(format!("  cubic: {}", a.cubic));
    }
    if let Some(act) = &r.action {
        line(format!("action exp({}):", act.params.iter().enumerate().map(|(i, t)| format!("{t}*h{}", i + 1)).collect::<Vec<_>>().join(" + ")));
        for row in &act.matrix {
            line(format!("  [{}]", row.join(", ")));
        }
    }
    if !r.checks.is_empty() {
        let failed: Vec<&String> = r.checks.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k).collect();
        if failed.is_empty() {
            line(format!("checks: all {} passed", r.checks.len()));
        } else {
            line(format!("checks failed: {}", failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")));
        }
    }
    out
}

/// Runs one invocation; returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let name = match &cli.command {
        Command::Decide { .. } => "decide",
        Command::Normalize { .. } => "normalize",
        Command::Algebra { .. } => "algebra",
        Command::Action { .. } => "action",
        Command::FromAlgebra { .. } => "from-algebra",
        Command::Verify { .. } => "verify",
    };
    let mut report = Report::new(name);
    let limits = match &cli.opts.limits {
        Some(path) => read_file(path).and_then(|t| parse_limits_document(&t)),
        None => Ok(GroebnerLimits::default()),
    };
    let res = limits.and_then(|l| match &cli.command {
        Command::Decide { input } | Command::Normalize { input } | Command::Algebra { input } | Command::Action { input } => {
            run_input(name, input, &cli.opts, &l, &mut report)
        }
        Command::FromAlgebra { file } => run_from_algebra(file, &l, &mut report),
        Command::Verify { file } => run_verify(file, &mut report),
    });
    let code = match res {
        Ok(c) => c,
        Err(e) => {
            if name != "verify" {
                report.verdict = if matches!(e, Error::Limit(_)) { "undecided".into() } else { "error".into() };
            }
            report.error = Some(e.to_string());
            exit_code(&e)
        }
    };
    report.timings.insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
    let text = if cli.opts.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        render_human(&report)
    };
    let _ = out.write_all(text.as_bytes());
    if code == 2 && !cli.opts.json {
        let _ = writeln!(err, "addcubic: {}", report.error.as_deref().unwrap_or("usage error"));
    }
    code
}
