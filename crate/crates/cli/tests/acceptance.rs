//! Acceptance run: one pass/fail line per criterion. Exits non-zero if any
//! criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use ml2v::corpus;
use ml2v::oracle::agreement_digits;
use ml2v::representations::{coincident_poles, contour_for_method, eval_integral_auto, eval_representation};
use ml2v::selftest::{self, Suite, SuiteReport};
use ml2v::{eval_double_series, oracle_eval, validate_params, Complex64, Method, SeriesBudget};
use ml2v_cli::commands::{replay_entry, REPLAY_LIMIT};

const SERIES_REL: f64 = 1e-10;
const INTEGRAL_REL: f64 = 1e-7;
const CROSS_ABS: f64 = 1e-7;
const ORACLE_DIGITS: f64 = 25.0;
const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Line {
    ok: bool,
    text: String,
}

fn report(n: usize, name: &str, ok: bool, detail: String, t0: Instant) -> Line {
    let status = if ok { "PASS" } else { "FAIL" };
    Line { ok, text: format!("criterion {n} [{name}] {status}: {detail} ({:.1}s)", t0.elapsed().as_secs_f64()) }
}

fn closed_form(x: Complex64, y: Complex64) -> Complex64 {
    if x == y {
        (1.0 + x) * x.exp()
    } else {
        (x * x.exp() - y * y.exp()) / (x - y)
    }
}

fn closed_form_points() -> Vec<(Complex64, Complex64)> {
    vec![
        (c(2.0, 0.0), c(1.0, 0.0)),
        (c(1.0, 0.0), c(2.0, 0.0)),
        (c(0.0, 0.0), c(0.0, 0.0)),
        (c(1.0, 0.0), c(1.0, 0.0)),
        (c(-1.5, 0.0), c(-1.5, 0.0)),
        (c(3.0, 0.0), c(-2.0, 0.0)),
        (c(-3.0, 0.0), c(4.0, 0.0)),
        (c(5.0, 0.0), c(5.0, 0.0)),
        (c(-5.0, 0.0), c(-5.0, 0.0)),
        (c(4.5, 0.0), c(-0.5, 0.0)),
        (c(-2.0, 0.0), c(-4.5, 0.0)),
        (c(0.5, 0.0), c(-5.0, 0.0)),
        (c(1.0, 2.0), c(-1.0, 1.0)),
        (c(3.0, -1.0), c(0.0, 2.0)),
        (c(-4.0, 2.0), c(1.0, -3.0)),
        (c(2.0, 2.0), c(2.0, 2.0)),
        (c(-1.0, -4.0), c(3.0, 1.0)),
        (c(5.0, 0.0), c(0.0, 0.0)),
        (c(0.0, 0.0), c(-5.0, 0.0)),
        (c(-2.5, 1.5), c(-2.5, -1.5)),
    ]
}

fn criterion_1() -> Line {
    let t0 = Instant::now();
    let p = validate_params(1.0, 1.0, c(1.0, 0.0)).unwrap();
    let budget = SeriesBudget::new(1e-13, SeriesBudget::default().max_terms).unwrap();
    let mut worst_series: f64 = 0.0;
    let mut worst_int: f64 = 0.0;
    let mut integral_checks = 0;
    let mut problems = Vec::new();
    for (x, y) in closed_form_points() {
        let want = closed_form(x, y);
        let rel = |v: Complex64| (v - want).norm() / want.norm();
        match eval_double_series(x, y, &p, budget) {
            Ok(ev) => worst_series = worst_series.max(rel(ev.value)),
            Err(e) => problems.push(format!("series at ({x}, {y}): {e}")),
        }
        for m in [Method::Lemma1, Method::Lemma2, Method::Remark1, Method::Lemma3] {
            let Some(choice) = contour_for_method(x, y, &p, m) else { continue };
            integral_checks += 1;
            match eval_representation(x, y, &p, choice.spec, TOL) {
                Ok(r) => worst_int = worst_int.max(rel(r.evaluation.value)),
                Err(e) => problems.push(format!("{m} at ({x}, {y}): {e}")),
            }
        }
    }
    let anchor = eval_double_series(c(2.0, 0.0), c(1.0, 0.0), &p, budget).map(|e| e.value.re).unwrap_or(f64::NAN);
    let e = std::f64::consts::E;
    let anchor_err = (anchor - (2.0 * e * e - e)).abs() / (2.0 * e * e - e);
    let ok = problems.is_empty() && worst_series <= SERIES_REL && worst_int <= INTEGRAL_REL && anchor_err <= SERIES_REL;
    for pr in &problems {
        eprintln!("  {pr}");
    }
    report(
        1,
        "closed form",
        ok,
        format!(
            "20 points, series max rel {worst_series:.2e} (<= {SERIES_REL:.0e}), {integral_checks} integral evaluations max rel \
             {worst_int:.2e} (<= {INTEGRAL_REL:.0e}), E(2,1) = {anchor:.15} vs 2e^2-e"
        ),
        t0,
    )
}

fn criterion_2() -> Line {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut coverage: BTreeMap<String, usize> = BTreeMap::new();
    let (mut checked, mut degenerate) = (0, 0);
    let mut problems = Vec::new();
    for p in selftest::grid_parameters() {
        for (x, y) in selftest::cross_method_grid() {
            if coincident_poles(x, y, &p) {
                degenerate += 1;
                continue;
            }
            checked += 1;
            let reference = eval_double_series(x, y, &p, SeriesBudget::default());
            let integral = eval_integral_auto(x, y, &p, TOL);
            match (integral, reference) {
                (Ok(i), Ok(s)) => {
                    *coverage.entry(i.method.tag()).or_default() += 1;
                    let d = (i.value - s.value).norm();
                    worst = worst.max(d);
                    if !(d <= CROSS_ABS) {
                        problems.push(format!("alpha={} beta={} ({x}, {y}): |delta| {d:.3e}", p.alpha(), p.beta()));
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    problems.push(format!("alpha={} beta={} ({x}, {y}): {e}", p.alpha(), p.beta()))
                }
            }
        }
    }
    let all_lemmas = ["lemma1", "lemma2", "remark1", "lemma3"].iter().all(|m| coverage.get(*m).is_some_and(|&n| n > 0));
    for pr in &problems {
        eprintln!("  {pr}");
    }
    let cov: Vec<String> = coverage.iter().map(|(k, v)| format!("{k} {v}")).collect();
    report(
        2,
        "cross-method grid",
        problems.is_empty() && all_lemmas,
        format!(
            "{checked} non-degenerate points ({degenerate} degenerate skipped), max |delta| {worst:.2e} (<= {CROSS_ABS:.0e}), \
             coverage: {}",
            cov.join(", ")
        ),
        t0,
    )
}

fn family_line(n: usize, name: &str, r: &SuiteReport, families: &[&str], t0: Instant) -> Line {
    let mut parts = Vec::new();
    let mut ok = r.passed();
    for f in families {
        match r.family(f) {
            Some((count, worst)) => {
                ok &= worst <= 1.0;
                parts.push(format!("{f}: {count} checks, worst residual/limit {worst:.2e}"));
            }
            None => {
                ok = false;
                parts.push(format!("{f}: no checks"));
            }
        }
    }
    for note in &r.notes {
        eprintln!("  {note}");
    }
    report(n, name, ok, parts.join("; "), t0)
}

fn criterion_5() -> Line {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for p in 1..=3 {
        match selftest::decay_profile(p) {
            Ok(profile) => {
                let seq: Vec<String> = profile.iter().map(|(_, g, _)| format!("{g:.2e}")).collect();
                let case4 = profile.iter().all(|(_, _, m)| *m == Method::Asymptotic(ml2v::AsymptoticCase::Case4));
                let mono = profile.windows(2).all(|w| w[1].1 <= selftest::DECAY_FACTOR * w[0].1);
                ok &= case4 && mono;
                parts.push(format!("p={p}: [{}]", seq.join(", ")));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("p={p}: {e}"));
            }
        }
    }
    report(5, "asymptotic decay", ok, format!("error*t^(2+p) at t=10,20,40,80 {}", parts.join(" ")), t0)
}

fn criterion_8() -> Line {
    let t0 = Instant::now();
    let entries = match corpus::frozen() {
        Ok(e) if !e.is_empty() => e,
        Ok(_) => return report(8, "oracle consistency", false, "frozen corpus is empty".into(), t0),
        Err(e) => return report(8, "oracle consistency", false, format!("corpus unreadable: {e}"), t0),
    };
    let mut min_digits = f64::INFINITY;
    let mut problems = Vec::new();
    for e in &entries {
        let r = e.parameters().and_then(|p| oracle_eval(e.x(), e.y(), &p, 30));
        match r {
            Ok(v) => {
                let d = agreement_digits(&v, &e.oracle_value());
                min_digits = min_digits.min(d);
                if !(d >= ORACLE_DIGITS) {
                    problems.push(format!("{}: {d:.1} digits", e.label));
                }
            }
            Err(err) => problems.push(format!("{}: {err}", e.label)),
        }
    }
    let mut max_delta: f64 = 0.0;
    for e in &entries {
        let r = replay_entry(e, TOL);
        max_delta = max_delta.max(r.delta);
        if !(r.delta <= REPLAY_LIMIT) {
            problems.push(format!("replay {}: {} |delta| {:.3e}", e.label, r.method, r.delta));
        }
    }
    for pr in &problems {
        eprintln!("  {pr}");
    }
    report(
        8,
        "oracle consistency",
        problems.is_empty(),
        format!(
            "{} entries, 30 vs 50 digits agree to >= {min_digits:.1} digits (>= {ORACLE_DIGITS}), replay max |delta| \
             {max_delta:.2e} (<= {REPLAY_LIMIT:.0e})",
            entries.len()
        ),
        t0,
    )
}

fn main() -> ExitCode {
    let mut lines = vec![criterion_1(), criterion_2()];

    let t0 = Instant::now();
    let gamma = selftest::run_suite(Suite::Gamma);
    lines.push(family_line(3, "reciprocal gamma contour", &gamma, &["hankel"], t0));

    let t0 = Instant::now();
    let contour = selftest::run_suite(Suite::Contour);
    lines.push(family_line(4, "contour deformation", &contour, &["deformation", "crossing"], t0));

    lines.push(criterion_5());

    let t0 = Instant::now();
    let expansion = selftest::run_suite(Suite::Expansion);
    lines.push(family_line(6, "expansion identity", &expansion, &["expansion"], t0));

    let t0 = Instant::now();
    let mut rec = selftest::run_suite(Suite::Recurrence);
    let sym = selftest::run_suite(Suite::Symmetry);
    rec.families.extend(sym.families.iter().cloned());
    rec.notes.extend(sym.notes.iter().cloned());
    rec.failures += sym.failures;
    rec.checks += sym.checks;
    lines.push(family_line(7, "recurrence and symmetry", &rec, &["recurrence", "symmetry"], t0));

    lines.push(criterion_8());

    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.ok).count();
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
