//! The subcommands. Each returns the process exit code.

use std::io::Write;
use std::time::Instant;

use anyhow::Context;
use ml2v::asymptotics::best_asymptotic;
use ml2v::corpus::{self, CorpusEntry};
use ml2v::representations::{coincident_poles, contour_for_method, eval_representation, representation_kind};
use ml2v::selftest::{self, Suite};
use ml2v::{
    eval_auto, eval_double_series, eval_asymptotic, oracle_eval, validate_params, Complex64, ContourSpec, Error,
    Evaluation, Method, Parameters, SeriesBudget, TruncationOrders,
};

use crate::literal::{format_complex, linspace, parse_range};
use crate::record::{write_records, Format, ResultRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Largest |Δ| (relative to max(1, |value|)) accepted in a corpus replay.
pub const REPLAY_LIMIT: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Auto,
    Series,
    Lemma1,
    Lemma2,
    Remark1,
    Lemma3,
    Asymptotic,
    Oracle,
}

impl MethodArg {
    pub fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::Series => "series",
            MethodArg::Lemma1 => "lemma1",
            MethodArg::Lemma2 => "lemma2",
            MethodArg::Remark1 => "remark1",
            MethodArg::Lemma3 => "lemma3",
            MethodArg::Asymptotic => "asymptotic",
            MethodArg::Oracle => "oracle",
        }
    }

    fn representation(self) -> Option<Method> {
        match self {
            MethodArg::Lemma1 => Some(Method::Lemma1),
            MethodArg::Lemma2 => Some(Method::Lemma2),
            MethodArg::Remark1 => Some(Method::Remark1),
            MethodArg::Lemma3 => Some(Method::Lemma3),
            _ => None,
        }
    }
}

/// Everything a single evaluation needs besides the point.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub params: Parameters,
    pub method: MethodArg,
    pub tol: f64,
    pub orders: TruncationOrders,
    pub epsilon: Option<f64>,
    pub theta: Option<f64>,
    pub digits: u32,
}

impl Settings {
    pub fn new(params: Parameters, method: MethodArg, tol: f64) -> Self {
        Settings {
            params,
            method,
            tol,
            orders: TruncationOrders::default(),
            epsilon: None,
            theta: None,
            digits: 30,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Region(_)
        | Error::DegenerateDenominator(_)
        | Error::Geometry(_)
        | Error::MagnitudeFloor { .. } => EXIT_DOMAIN,
        Error::PoleProximity { .. } | Error::Quadrature { .. } | Error::BudgetExceeded { .. } => EXIT_NUMERIC,
    }
}

fn contour_spec(x: Complex64, y: Complex64, s: &Settings, method: Method) -> ml2v::Result<ContourSpec> {
    match (s.epsilon, s.theta) {
        (None, None) => contour_for_method(x, y, &s.params, method).map(|c| c.spec).ok_or_else(|| {
            Error::Region(format!("no admissible contour puts (x={x}, y={y}) under {method}"))
        }),
        (eps, theta) => {
            let (lo, hi) = s.params.theta_window();
            ContourSpec::new(eps.unwrap_or(1.0), theta.unwrap_or(0.5 * (lo + hi)))
        }
    }
}

/// One point with the requested method.
pub fn evaluate(x: Complex64, y: Complex64, s: &Settings) -> ml2v::Result<Evaluation> {
    let p = &s.params;
    match s.method {
        MethodArg::Auto => eval_auto(x, y, p, s.tol),
        MethodArg::Series => eval_double_series(x, y, p, SeriesBudget::new(s.tol, SeriesBudget::default().max_terms)?),
        MethodArg::Asymptotic => {
            let tau1 = s.theta.unwrap_or(p.theta_window().1);
            eval_asymptotic(x, y, p, s.orders, tau1)
        }
        MethodArg::Oracle => {
            let v = oracle_eval(x, y, p, s.digits)?.to_complex();
            Ok(Evaluation::new(v, v.norm() * f64::EPSILON, Method::Oracle))
        }
        m => {
            let want = m.representation().expect("integral method");
            let spec = contour_spec(x, y, s, want)?;
            let got = representation_kind(x, y, p, spec)?;
            if got != want {
                return Err(Error::Region(format!(
                    "contour eps={}, theta={} puts (x={x}, y={y}) under {got}, not {want}",
                    spec.epsilon, spec.theta
                )));
            }
            Ok(eval_representation(x, y, p, spec, s.tol)?.evaluation)
        }
    }
}

fn timed(x: Complex64, y: Complex64, s: &Settings) -> (ml2v::Result<Evaluation>, f64) {
    let t0 = Instant::now();
    let r = evaluate(x, y, s);
    (r, t0.elapsed().as_secs_f64() * 1e3)
}

pub fn cmd_eval<W: Write>(out: W, x: Complex64, y: Complex64, s: &Settings, format: Format) -> anyhow::Result<i32> {
    let (r, ms) = timed(x, y, s);
    match r {
        Ok(ev) => {
            write_records(out, &[ResultRecord::new(&s.params, x, y, &ev, ms)], format)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(exit_code(&e))
        }
    }
}

/// Rows for every (x, y) of the grid in x-major order; failed points get a
/// row with est_error = inf.
pub fn grid_records(xs: &[Complex64], ys: &[Complex64], s: &Settings) -> Vec<ResultRecord> {
    let mut rows = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            let (r, ms) = timed(x, y, s);
            rows.push(match r {
                Ok(ev) => ResultRecord::new(&s.params, x, y, &ev, ms),
                Err(e) => {
                    eprintln!("x={}, y={}: {e}", format_complex(x), format_complex(y));
                    ResultRecord::failed(&s.params, x, y, s.method.name().into(), ms)
                }
            });
        }
    }
    rows
}

pub fn cmd_grid<W: Write>(out: W, xs: &[Complex64], ys: &[Complex64], s: &Settings, format: Format) -> anyhow::Result<i32> {
    let rows = grid_records(xs, ys, s);
    write_records(out, &rows, format)?;
    Ok(EXIT_OK)
}

/// Outcome of one method in a comparison.
#[derive(Debug, Clone)]
pub enum Outcome {
    Value(Evaluation),
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct PointComparison {
    pub x: Complex64,
    pub y: Complex64,
    pub outcomes: Vec<(String, Outcome)>,
    /// (method a, method b, |Δ|, limit)
    pub pairs: Vec<(String, String, f64, f64)>,
}

impl PointComparison {
    pub fn flags(&self) -> usize {
        self.pairs.iter().filter(|p| !(p.2 <= p.3)).count()
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.0 == name).map(|o| &o.1)
    }
}

/// Every applicable method at one point and their pairwise differences.
pub fn compare_point(x: Complex64, y: Complex64, s: &Settings, with_oracle: bool) -> PointComparison {
    let p = &s.params;
    let mut outcomes = Vec::new();
    let series = evaluate(x, y, &Settings { method: MethodArg::Series, ..*s });
    outcomes.push(("series".to_string(), as_outcome(series)));

    let degenerate = coincident_poles(x, y, p);
    for m in [MethodArg::Lemma1, MethodArg::Lemma2, MethodArg::Remark1, MethodArg::Lemma3] {
        let name = m.name().to_string();
        if degenerate && m != MethodArg::Lemma1 {
            let why = if m == MethodArg::Lemma3 { "skipped: degenerate" } else { "skipped: poles coincide" };
            outcomes.push((name, Outcome::Skipped(why.into())));
            continue;
        }
        let want = m.representation().expect("integral method");
        if s.epsilon.is_none() && s.theta.is_none() && contour_for_method(x, y, p, want).is_none() {
            outcomes.push((name, Outcome::Skipped("not applicable".into())));
            continue;
        }
        outcomes.push((name, as_outcome(evaluate(x, y, &Settings { method: m, ..*s }))));
    }
    match best_asymptotic(x, y, p) {
        Some(ev) => outcomes.push(("asymptotic".into(), Outcome::Value(ev))),
        None => outcomes.push(("asymptotic".into(), Outcome::Skipped("not applicable".into()))),
    }
    if with_oracle {
        outcomes.push(("oracle".into(), as_outcome(evaluate(x, y, &Settings { method: MethodArg::Oracle, ..*s }))));
    }

    let mut pairs = Vec::new();
    let values: Vec<(&String, &Evaluation)> = outcomes
        .iter()
        .filter_map(|(n, o)| match o {
            Outcome::Value(ev) => Some((n, ev)),
            _ => None,
        })
        .collect();
    for (i, (na, a)) in values.iter().enumerate() {
        for (nb, b) in &values[i + 1..] {
            let delta = (a.value - b.value).norm();
            let limit = a.est_error + b.est_error + s.tol * a.value.norm().max(1.0);
            pairs.push(((*na).clone(), (*nb).clone(), delta, limit));
        }
    }
    PointComparison { x, y, outcomes, pairs }
}

fn as_outcome(r: ml2v::Result<Evaluation>) -> Outcome {
    match r {
        Ok(ev) => Outcome::Value(ev),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

pub fn cmd_compare<W: Write>(
    mut out: W,
    xs: &[Complex64],
    ys: &[Complex64],
    s: &Settings,
    with_oracle: bool,
) -> anyhow::Result<i32> {
    let mut flags = 0;
    let mut worst: f64 = 0.0;
    for &x in xs {
        for &y in ys {
            let cmp = compare_point(x, y, s, with_oracle);
            writeln!(out, "x={}  y={}", format_complex(x), format_complex(y))?;
            for (name, o) in &cmp.outcomes {
                match o {
                    Outcome::Value(ev) => writeln!(
                        out,
                        "  {name:<11} {:>25} {:>25}  est {:.2e}  [{}]",
                        format!("{:.16e}", ev.value.re),
                        format!("{:.16e}", ev.value.im),
                        ev.est_error,
                        ev.method
                    )?,
                    Outcome::Skipped(why) => writeln!(out, "  {name:<11} {why}")?,
                    Outcome::Failed(why) => writeln!(out, "  {name:<11} failed: {why}")?,
                }
            }
            for (a, b, d, lim) in &cmp.pairs {
                let mark = if d <= lim { "" } else { "  FLAG" };
                writeln!(out, "  |{a} - {b}| = {d:.3e} (limit {lim:.3e}){mark}")?;
                worst = worst.max(*d);
            }
            flags += cmp.flags();
        }
    }
    writeln!(out, "max |delta| = {worst:.3e}, flagged pairs = {flags}")?;
    Ok(if flags == 0 { EXIT_OK } else { EXIT_NUMERIC })
}

/// One replayed corpus entry.
#[derive(Debug, Clone)]
pub struct Replay {
    pub label: String,
    pub method: String,
    /// |Δ| / max(1, |oracle value|); infinite when the evaluation failed.
    pub delta: f64,
}

pub fn replay_entry(e: &CorpusEntry, tol: f64) -> Replay {
    let delta_of = |ev: &Evaluation| (ev.value - e.value()).norm() / e.value().norm().max(1.0);
    let r = e.parameters().and_then(|p| eval_auto(e.x(), e.y(), &p, tol));
    match r {
        Ok(ev) => Replay { label: e.label.clone(), method: ev.method.tag(), delta: delta_of(&ev) },
        Err(err) => Replay { label: e.label.clone(), method: format!("failed: {err}"), delta: f64::INFINITY },
    }
}

pub fn cmd_replay<W: Write>(mut out: W, entries: &[CorpusEntry], tol: f64) -> anyhow::Result<i32> {
    let mut worst: f64 = 0.0;
    let mut flags = 0;
    for e in entries {
        let r = replay_entry(e, tol);
        let mark = if r.delta <= REPLAY_LIMIT { "" } else { "  FLAG" };
        if !(r.delta <= REPLAY_LIMIT) {
            flags += 1;
        }
        worst = worst.max(r.delta);
        writeln!(out, "{:<26} {:<18} |delta| = {:.3e}{mark}", r.label, r.method, r.delta)?;
    }
    writeln!(out, "replayed {} entries, max |delta| = {worst:.3e}, flagged = {flags}", entries.len())?;
    Ok(if flags == 0 && !entries.is_empty() { EXIT_OK } else { EXIT_NUMERIC })
}

pub fn cmd_selftest<W: Write>(mut out: W, suites: &[Suite]) -> anyhow::Result<i32> {
    let suites = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.to_vec() };
    writeln!(out, "{:<12} {:>7} {:>9} {:>12}  status", "suite", "checks", "failures", "worst/limit")?;
    let mut ok = true;
    for suite in suites {
        let t0 = Instant::now();
        let r = selftest::run_suite(suite);
        let status = if r.passed() { "pass" } else { "FAIL" };
        ok &= r.passed();
        writeln!(
            out,
            "{:<12} {:>7} {:>9} {:>12.3e}  {status} ({:.1}s)",
            suite.name(),
            r.checks,
            r.failures,
            r.worst,
            t0.elapsed().as_secs_f64()
        )?;
        for (name, n, w) in &r.families {
            writeln!(out, "  {name:<10} {n:>7} {:>9} {w:>12.3e}", "")?;
        }
        for n in &r.notes {
            eprintln!("  {suite}: {n}");
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_SELFTEST })
}

pub fn cmd_freeze<W: Write>(mut out: W, digits: u32) -> anyhow::Result<i32> {
    let entries = corpus::freeze(digits).context("freezing the oracle corpus")?;
    out.write_all(corpus::to_jsonl(&entries).as_bytes())?;
    Ok(EXIT_OK)
}

/// Parameters plus the common request checks, mapped to the domain exit code.
pub fn parameters(alpha: f64, beta: f64, mu: Complex64) -> Result<Parameters, i32> {
    validate_params(alpha, beta, mu).map_err(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

/// Grid axis from "start:end" and a count.
pub fn axis(range: &str, n: usize) -> Result<Vec<Complex64>, String> {
    if n < 1 {
        return Err("grid counts must be at least 1".into());
    }
    let (a, b) = parse_range(range)?;
    Ok(linspace(a, b, n))
}
