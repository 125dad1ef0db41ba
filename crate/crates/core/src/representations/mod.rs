//! Hankel-contour integral representations.
//!
//! All variants share one integrand in the ζ-plane,
//!
//!   F(ζ) = (1/αβ) e^{ζ^{1/(αβ)}} ζ^{(1+α+β-μ)/(αβ) - 1} / ((ζ^{1/α} - y)(ζ^{1/β} - x)),
//!
//! and E = Σ residues of F inside Ω⁺ + (1/2πi) ∮_γ F dζ. A pole coming from
//! x sits at ζ = x^β on every sheet with |β(arg x + 2πk)| < π; the y poles are
//! analogous with α. Which poles lie in Ω⁺ selects the method tag.

mod dispatch;

pub use dispatch::{admissible_contours, contour_for_method, default_contour, eval_auto, eval_integral_auto, ContourChoice};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::{build_contour, integrate, ContourPoint, IntegrandSpec};
use crate::error::{Error, Result};
use crate::eval::{Evaluation, Method};
use crate::params::{classify_image, default_delta_b, ContourSpec, Parameters, RegionLabel};
use crate::polar::Polar;

/// Relative floor below which an x pole and a y pole are treated as coincident.
pub const DEGENERACY_FLOOR: f64 = 1e-6;
/// Pole-distance floor as a fraction of ε.
pub const POLE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleSource {
    XPole,
    YPole,
}

/// A pole of F in the cut ζ-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub source: PoleSource,
    /// Sheet index k of the preimage: arg = (arg x + 2πk)·β for x poles.
    pub sheet: i32,
    pub zeta: Complex64,
    pub region: RegionLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueTerm {
    pub source: PoleSource,
    pub sheet: i32,
    pub value: Complex64,
}

/// Integral, residues and total of one representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub evaluation: Evaluation,
    pub integral: Complex64,
    pub integral_error: f64,
    pub residues: Vec<ResidueTerm>,
    pub contour: ContourSpec,
    pub nodes: usize,
}

fn sheet_range(arg: f64, power: f64) -> std::ops::RangeInclusive<i32> {
    let lim = PI / power;
    let lo = ((-lim - arg) / (2.0 * PI)).ceil() as i32;
    let hi = ((lim - arg) / (2.0 * PI)).floor() as i32;
    lo..=hi
}

/// ζ-plane preimages of `v` under ζ ↦ ζ^{1/power} on the principal branch.
fn preimages(v: Complex64, power: f64) -> Vec<(i32, Polar)> {
    if v.norm() == 0.0 {
        return Vec::new();
    }
    let base = Polar::principal(v);
    sheet_range(base.arg, power)
        .filter_map(|k| {
            let phi = power * (base.arg + 2.0 * PI * k as f64);
            // arg = ±π exactly belongs to the principal branch only at +π
            if phi.abs() < PI || phi == PI {
                Some((k, Polar::new(base.r.powf(power), phi)))
            } else {
                None
            }
        })
        .collect()
}

pub fn integrand_poles(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec) -> Vec<Pole> {
    let mut out = Vec::new();
    for (source, v, power) in [
        (PoleSource::XPole, x, params.beta()),
        (PoleSource::YPole, y, params.alpha()),
    ] {
        for (k, p) in preimages(v, power) {
            let zeta = p.to_complex();
            let zeta = if p.arg == PI { Complex64::new(-p.r, 0.0) } else { zeta };
            let region = classify_image(zeta, spec.epsilon, spec.theta, default_delta_b(zeta));
            out.push(Pole { source, sheet: k, zeta, region });
        }
    }
    out
}

/// The residue of F at a pole, i.e. the closed-form term
/// (1/α) e^{X^{1/α}} X^{(1+β-μ)/α} / (X^{β/α} - y) for x poles on sheet k.
pub fn residue(x: Complex64, y: Complex64, params: &Parameters, source: PoleSource, sheet: i32) -> Complex64 {
    let (num, den) = residue_parts(x, y, params, source, sheet);
    num / den
}

/// Numerator and denominator of [`residue`].
pub fn residue_parts(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    source: PoleSource,
    sheet: i32,
) -> (Complex64, Complex64) {
    let (a, b, mu) = (params.alpha(), params.beta(), params.mu());
    let (v, other, pa, pb) = match source {
        PoleSource::XPole => (x, y, a, b),
        PoleSource::YPole => (y, x, b, a),
    };
    let pv = Polar::principal(v).sheet(sheet);
    // powers from the polar form keep x^{1/α} exact for exact inputs, which
    // matters because it is exponentiated
    let w = pv.powf(1.0 / pa).to_complex();
    let c = (1.0 + pb - mu) / pa;
    let num = if c.im == 0.0 && w.re < 700.0 {
        w.exp() * pv.pow_real(c.re)
    } else {
        (w + c * pv.ln()).exp()
    };
    (num / pa, pv.pow_real(pb / pa) - other)
}

/// True when some branch of x^β coincides with some branch of y^α, so that
/// no contour separates the two poles.
pub fn coincident_poles(x: Complex64, y: Complex64, params: &Parameters) -> bool {
    let spec = ContourSpec { epsilon: 1.0, theta: params.theta_window().1 };
    let poles = integrand_poles(x, y, params, spec);
    poles.iter().any(|p| {
        poles.iter().any(|q| {
            q.source != p.source
                && (p.zeta - q.zeta).norm() < DEGENERACY_FLOOR * (1.0 + p.zeta.norm() + q.zeta.norm())
        })
    })
}

fn check_degeneracy(poles: &[Pole]) -> Result<()> {
    for p in poles.iter().filter(|p| p.region == RegionLabel::OmegaPlus) {
        for q in poles.iter().filter(|q| q.source != p.source) {
            let gap = (p.zeta - q.zeta).norm();
            if gap < DEGENERACY_FLOOR * (1.0 + p.zeta.norm() + q.zeta.norm()) {
                return Err(Error::DegenerateDenominator(format!(
                    "x and y poles coincide at zeta = {:.6e}{:+.6e}i",
                    p.zeta.re, p.zeta.im
                )));
            }
        }
    }
    Ok(())
}

fn method_for(poles: &[Pole]) -> Method {
    let has = |s| poles.iter().any(|p| p.source == s && p.region == RegionLabel::OmegaPlus);
    match (has(PoleSource::XPole), has(PoleSource::YPole)) {
        (false, false) => Method::Lemma1,
        (false, true) => Method::Lemma2,
        (true, false) => Method::Remark1,
        (true, true) => Method::Lemma3,
    }
}

/// Method tag the representation would carry for this contour, if the
/// geometry is usable (no pole on the contour, no degenerate residue).
pub fn representation_kind(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec) -> Result<Method> {
    let poles = integrand_poles(x, y, params, spec);
    if let Some(p) = poles.iter().find(|p| p.region == RegionLabel::OnContour) {
        return Err(Error::PoleProximity { distance: 0.0, floor: default_delta_b(p.zeta) });
    }
    check_degeneracy(&poles)?;
    Ok(method_for(&poles))
}

/// Residues of the Ω⁺ poles for this contour.
pub fn residue_terms(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec) -> Result<Vec<ResidueTerm>> {
    let poles = integrand_poles(x, y, params, spec);
    check_degeneracy(&poles)?;
    Ok(poles
        .iter()
        .filter(|p| p.region == RegionLabel::OmegaPlus)
        .map(|p| ResidueTerm {
            source: p.source,
            sheet: p.sheet,
            value: residue(x, y, params, p.source, p.sheet),
        })
        .collect())
}

/// (1/2πi) ∮ F dζ along γ(ε;θ), without residues.
pub fn contour_integral(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    spec: ContourSpec,
    tol: f64,
) -> Result<(Complex64, f64, usize)> {
    let (a, b, mu) = (params.alpha(), params.beta(), params.mu());
    let d = params.decay();
    let c = (1.0 + a + b - mu) * d - 1.0;
    let poles: Vec<Complex64> = integrand_poles(x, y, params, spec).iter().map(|p| p.zeta).collect();
    let contour = build_contour(spec, d, 1e-3 * tol)?;
    let f = move |p: &ContourPoint| {
        let lz = p.polar().ln();
        let num = ((lz * d).exp() + c * lz).exp();
        num * d / (((lz / a).exp() - y) * ((lz / b).exp() - x))
    };
    let spec_f = IntegrandSpec::new(f, d).with_poles(poles, POLE_FLOOR * spec.epsilon);
    let q = integrate(&contour, &spec_f, tol * 2.0 * PI)?;
    Ok((q.value / Complex64::new(0.0, 2.0 * PI), q.est_error / (2.0 * PI), q.nodes))
}

/// Full representation for the given contour; the method tag follows from
/// which poles lie in Ω⁺.
pub fn eval_representation(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    spec: ContourSpec,
    tol: f64,
) -> Result<Representation> {
    let method = representation_kind(x, y, params, spec)?;
    let residues = residue_terms(x, y, params, spec)?;
    let (integral, integral_error, nodes) = contour_integral(x, y, params, spec, tol)?;
    let mut value = integral;
    let mut res_abs = 0.0;
    for r in &residues {
        value += r.value;
        res_abs += r.value.norm();
    }
    let est = integral_error + 8.0 * f64::EPSILON * res_abs;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Quadrature { estimate: f64::INFINITY, tol, nodes });
    }
    Ok(Representation {
        evaluation: Evaluation::new(value, est, method),
        integral,
        integral_error,
        residues,
        contour: spec,
        nodes,
    })
}

fn eval_as(
    want: Method,
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    spec: ContourSpec,
    tol: f64,
) -> Result<Evaluation> {
    let got = representation_kind(x, y, params, spec)?;
    if got != want {
        return Err(Error::Region(format!(
            "point (x={x}, y={y}) with contour eps={}, theta={} calls for {got}, not {want}",
            spec.epsilon, spec.theta
        )));
    }
    Ok(eval_representation(x, y, params, spec, tol)?.evaluation)
}

/// x and y both in Ω⁻: the contour integral alone.
pub fn eval_lemma1(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec, tol: f64) -> Result<Evaluation> {
    eval_as(Method::Lemma1, x, y, params, spec, tol)
}

/// x in Ω⁻, y in Ω⁺: y residue plus the contour integral.
pub fn eval_lemma2(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec, tol: f64) -> Result<Evaluation> {
    eval_as(Method::Lemma2, x, y, params, spec, tol)
}

/// x in Ω⁺, y in Ω⁻: x residue plus the contour integral.
pub fn eval_remark1(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec, tol: f64) -> Result<Evaluation> {
    eval_as(Method::Remark1, x, y, params, spec, tol)
}

/// Both in Ω⁺: both residues plus the contour integral.
pub fn eval_lemma3(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec, tol: f64) -> Result<Evaluation> {
    eval_as(Method::Lemma3, x, y, params, spec, tol)
}
