use std::f64::consts::PI;

use ml2v::corpus::{self, CorpusEntry};
use ml2v::oracle::agreement_digits;
use ml2v::representations::{eval_integral_auto, eval_representation};
use ml2v::{
    eval_asymptotic, eval_auto, eval_double_series, eval_lemma1, eval_lemma2, eval_lemma3, eval_ml_one, eval_remark1,
    oracle_eval, validate_params, AsymptoticCase, Complex64, ContourSpec, Error, Method, Parameters, PoleSource,
    SeriesBudget, TruncationOrders,
};

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real(x: f64) -> Complex64 {
    c(x, 0.0)
}

fn params(alpha: f64, beta: f64, mu: Complex64) -> Parameters {
    validate_params(alpha, beta, mu).unwrap()
}

fn unit() -> Parameters {
    params(1.0, 1.0, real(1.0))
}

fn series(x: Complex64, y: Complex64, p: &Parameters) -> Complex64 {
    eval_double_series(x, y, p, SeriesBudget::default()).unwrap().value
}

fn entry(label: &str) -> CorpusEntry {
    let all = corpus::frozen().unwrap();
    corpus::find(&all, label).unwrap_or_else(|| panic!("corpus entry {label} missing")).clone()
}

fn spec(eps: f64, theta: f64) -> ContourSpec {
    ContourSpec::new(eps, theta).unwrap()
}

fn close(a: Complex64, b: Complex64, tol: f64) {
    assert!((a - b).norm() <= tol, "{a} vs {b}: |delta| {:.3e} > {tol:.0e}", (a - b).norm());
}

#[test]
fn lemma1_negative_pair() {
    let p = unit();
    let ev = eval_lemma1(real(-2.0), real(-3.0), &p, spec(1.0, 0.75 * PI), TOL).unwrap();
    assert_eq!(ev.method, Method::Lemma1);
    close(ev.value, series(real(-2.0), real(-3.0), &p), 1e-8);
}

#[test]
fn lemma1_small_x_inside_disk() {
    let p = params(0.8, 0.9, real(1.3));
    let (x, y) = (c(0.05, -0.02), real(-2.5));
    let ev = eval_lemma1(x, y, &p, spec(1.0, 0.7 * PI), TOL).unwrap();
    close(ev.value, series(x, y, &p), 1e-8);
}

#[test]
fn lemma1_complex_mu_against_oracle() {
    let e = entry("negative-unit-complex-mu");
    let p = e.parameters().unwrap();
    let ev = eval_integral_auto(e.x(), e.y(), &p, TOL).unwrap();
    assert_eq!(ev.method, Method::Lemma1);
    close(ev.value, e.value(), 1e-7);
}

#[test]
fn lemma2_closed_form_point() {
    let p = unit();
    let (x, y) = (real(-1.0), real(2.0));
    let ev = eval_lemma2(x, y, &p, spec(1.0, 0.75 * PI), TOL).unwrap();
    close(ev.value, series(x, y, &p), 1e-8);
    let e = std::f64::consts::E;
    close(ev.value, real((-1.0 / e - 2.0 * e * e) / -3.0), 1e-8);
}

#[test]
fn lemma2_against_oracle() {
    let e = entry("y-pole-inside");
    let p = e.parameters().unwrap();
    let ev = eval_integral_auto(e.x(), e.y(), &p, TOL).unwrap();
    assert_eq!(ev.method, Method::Lemma2);
    close(ev.value, e.value(), 1e-7);
}

#[test]
fn lemma2_is_lemma1_continued() {
    // enlarging ε moves y back into Ω⁻; the residue accounts for the difference
    let p = unit();
    let (x, y) = (real(-1.0), real(2.0));
    let near = eval_representation(x, y, &p, spec(1.0, 0.75 * PI), TOL).unwrap();
    let far = eval_lemma1(x, y, &p, spec(3.0, 0.75 * PI), TOL).unwrap();
    assert_eq!(near.evaluation.method, Method::Lemma2);
    assert_eq!(near.residues.len(), 1);
    assert_eq!(near.residues[0].source, PoleSource::YPole);
    close(near.evaluation.value, far.value, 1e-8);
    close(far.value - near.integral, near.residues[0].value, 1e-8);
}

#[test]
fn remark1_against_series() {
    let p = params(1.2, 0.9, real(1.0));
    let (x, y) = (real(3.0), real(-2.0));
    let e = entry("x-pole-inside");
    let ev = eval_integral_auto(x, y, &p, TOL).unwrap();
    assert_eq!(ev.method, Method::Remark1);
    close(ev.value, series(x, y, &p), 1e-8);
    close(ev.value, e.value(), 1e-7);
}

#[test]
fn remark1_mirrors_lemma2() {
    let p = unit();
    let s = spec(1.0, 0.75 * PI);
    let a = eval_remark1(real(2.0), real(-1.0), &p, s, TOL).unwrap();
    let b = eval_lemma2(real(-1.0), real(2.0), &p.swapped(), s, TOL).unwrap();
    close(a.value, b.value, 1e-12);
}

#[test]
fn lemma3_closed_form_point() {
    let p = unit();
    let ev = eval_lemma3(real(2.0), real(3.0), &p, spec(1.0, 0.75 * PI), TOL).unwrap();
    let e = std::f64::consts::E;
    let want = 3.0 * e.powi(3) - 2.0 * e * e;
    assert!((want - 45.4785).abs() < 1e-4);
    close(ev.value, real(want), 1e-8);
    close(ev.value, entry("exp-2-3").value(), 1e-8);
}

#[test]
fn lemma3_against_oracle() {
    let e = entry("both-poles-inside");
    let p = e.parameters().unwrap();
    let ev = eval_integral_auto(e.x(), e.y(), &p, TOL).unwrap();
    assert_eq!(ev.method, Method::Lemma3);
    close(ev.value, e.value(), 1e-7);
}

#[test]
fn coincident_poles_are_degenerate() {
    let p = unit();
    let r = eval_lemma3(real(2.0), real(2.0), &p, spec(1.0, 0.75 * PI), TOL);
    assert!(matches!(r, Err(Error::DegenerateDenominator(_))), "{r:?}");
}

#[test]
fn wrong_lemma_is_a_region_error() {
    let p = unit();
    let r = eval_lemma1(real(2.0), real(3.0), &p, spec(1.0, 0.75 * PI), TOL);
    assert!(matches!(r, Err(Error::Region(_))), "{r:?}");
}

#[test]
fn swap_symmetry_for_each_method() {
    let p = params(0.7, 1.1, c(1.2, 0.3));
    for (x, y) in [(-2.0, -3.0), (-1.0, 2.5), (3.0, -1.5), (2.0, 3.0)] {
        let (x, y) = (real(x), real(y));
        let a = eval_integral_auto(x, y, &p, TOL).unwrap();
        let b = eval_integral_auto(y, x, &p.swapped(), TOL).unwrap();
        close(a.value, b.value, 1e-8 * a.value.norm().max(1.0));
        close(a.value, series(x, y, &p), 1e-8 * a.value.norm().max(1.0));
    }
}

#[test]
fn dispatcher_tags() {
    let p = params(0.8, 0.8, real(1.0));
    for (x, y) in [(0.0, 0.0), (1.0, -1.0), (0.3, 0.9)] {
        assert_eq!(eval_auto(real(x), real(y), &p, TOL).unwrap().method, Method::Series);
    }
    for (label, method) in [("negative-five", Method::Lemma1), ("positive-six-seven", Method::Lemma3)] {
        let e = entry(label);
        let ev = eval_auto(e.x(), e.y(), &p, TOL).unwrap();
        assert_eq!(ev.method, method, "{label}");
        let want = e.value();
        close(ev.value, want, 1e-7 * want.norm().max(1.0));
    }
}

#[test]
fn higher_order_expansion_is_closer() {
    let e = entry("decay-t20");
    let p = e.parameters().unwrap();
    let tau1 = p.theta_window().1;
    let err = |k| {
        let ev = eval_asymptotic(e.x(), e.y(), &p, TruncationOrders::uniform(k).unwrap(), tau1).unwrap();
        assert_eq!(ev.method, Method::Asymptotic(AsymptoticCase::Case4));
        (ev.value - e.value()).norm()
    };
    assert!(err(3) < err(2), "p=3 {:.3e}, p=2 {:.3e}", err(3), err(2));
}

#[test]
fn one_variable_against_oracle() {
    let e = entry("ml-one-m4");
    let ev = eval_ml_one(real(-4.0), 0.5, real(1.0), SeriesBudget::default()).unwrap();
    // terms peak near e^16 and cancel to 0.137, so rounding sets the floor
    assert!(ev.est_error < 1e-7);
    close(ev.value, e.value(), ev.est_error);
}

#[test]
fn oracle_precisions_agree() {
    let e = entry("negative-unit");
    let p = e.parameters().unwrap();
    let low = oracle_eval(e.x(), e.y(), &p, 30).unwrap();
    assert!(agreement_digits(&low, &e.oracle_value()) >= 25.0);
}

#[test]
fn raising_either_order_never_doubles_the_error() {
    for label in ["decay-t10", "decay-t20", "decay-t40", "decay-t80"] {
        let e = entry(label);
        let p = e.parameters().unwrap();
        let tau1 = p.theta_window().1;
        let err = |pa, pb| {
            let ev = eval_asymptotic(e.x(), e.y(), &p, TruncationOrders::new(pa, pb).unwrap(), tau1).unwrap();
            (ev.value - e.value()).norm()
        };
        for pa in 1..=4 {
            for pb in 1..=4 {
                let base = err(pa, pb);
                assert!(err(pa + 1, pb) <= 2.0 * base, "{label} p_alpha {pa}->{}", pa + 1);
                assert!(err(pa, pb + 1) <= 2.0 * base, "{label} p_beta {pb}->{}", pb + 1);
            }
        }
    }
}

#[test]
fn expansion_meets_integral_at_moderate_size() {
    for label in ["moderate-positive", "moderate-negative"] {
        let e = entry(label);
        let p = e.parameters().unwrap();
        let tau1 = p.theta_window().1;
        let asy = eval_asymptotic(e.x(), e.y(), &p, TruncationOrders::default(), tau1).unwrap();
        let auto = eval_auto(e.x(), e.y(), &p, TOL).unwrap();
        let limit = asy.est_error + auto.est_error + TOL * auto.value.norm().max(1.0);
        assert!((asy.value - auto.value).norm() <= limit, "{label}: {} vs {} ({})", asy.value, auto.value, auto.method);
    }
}
