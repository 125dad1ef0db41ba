//! Contour selection and the regime dispatcher.

use num_complex::Complex64;

use super::{eval_representation, integrand_poles, representation_kind, Pole};
use crate::asymptotics::best_asymptotic;
use crate::error::{Error, Result};
use crate::eval::{Evaluation, Method};
use crate::params::{distance_to_contour, ContourSpec, Parameters, RegionLabel};
use crate::series::{eval_double_series, SeriesBudget};

/// Largest value of ε^{1/(αβ)} allowed on the arc; bounds e^{ζ^{1/(αβ)}} there.
const ARC_GROWTH_CAP: f64 = 6.0;
/// Looser cap for the fallback pass that sizes ε from the pole moduli.
const WIDE_GROWTH_CAP: f64 = 16.0;
/// Relative pole clearance accepted without looking further.
const GOOD_CLEARANCE: f64 = 0.15;
/// Relative pole clearance below which a contour is not used at all.
const MIN_CLEARANCE: f64 = 0.01;
const EPS_CANDIDATES: [f64; 9] = [1.0, 0.7, 1.4, 0.5, 2.0, 0.35, 2.8, 0.25, 4.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourChoice {
    pub spec: ContourSpec,
    pub method: Method,
    /// Smallest distance from a pole to the contour relative to max(ε, |ζ_p|).
    pub clearance: f64,
}

fn theta_candidates(params: &Parameters) -> Vec<f64> {
    let (lo, hi) = params.theta_window();
    let single = params.single_sheet_upper();
    let top = if single > lo * (1.0 + 1e-3) { single } else { hi };
    let first = (top * (1.0 - 1e-3)).max(lo * (1.0 + 1e-3)).min(top);
    vec![first, lo + 0.75 * (top - lo), lo + 0.5 * (top - lo)]
}

fn eps_candidates(params: &Parameters, extra: bool) -> Vec<f64> {
    let cap = ARC_GROWTH_CAP.powf(params.alpha() * params.beta());
    let mut v: Vec<f64> = EPS_CANDIDATES.to_vec();
    if extra {
        v.extend((0..24).map(|i| 0.1 * 1.25f64.powi(i)));
    }
    v.retain(|&e| e <= cap);
    v
}

// Radii just inside and outside each pole, so coincident poles can be
// enclosed together or left outside together.
fn pole_radii(x: Complex64, y: Complex64, params: &Parameters) -> Vec<f64> {
    let cap = WIDE_GROWTH_CAP.powf(params.alpha() * params.beta());
    let probe = ContourSpec { epsilon: 1.0, theta: theta_candidates(params)[0] };
    let mut v: Vec<f64> = integrand_poles(x, y, params, probe)
        .iter()
        .flat_map(|p| [1.3 * p.zeta.norm(), 0.75 * p.zeta.norm()])
        .filter(|&e| e > 0.0 && e <= cap)
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn clearance(poles: &[Pole], spec: ContourSpec) -> f64 {
    poles
        .iter()
        .map(|p| distance_to_contour(p.zeta, spec.epsilon, spec.theta) / spec.epsilon.max(p.zeta.norm()))
        .fold(f64::INFINITY, f64::min)
}

fn search(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    want: Option<Method>,
    radii: &[f64],
) -> Option<ContourChoice> {
    let mut best: Option<ContourChoice> = None;
    for theta in theta_candidates(params) {
        for &eps in radii {
            let Ok(spec) = ContourSpec::new(eps, theta) else { continue };
            let Ok(method) = representation_kind(x, y, params, spec) else { continue };
            if want.is_some_and(|w| w != method) {
                continue;
            }
            let poles = integrand_poles(x, y, params, spec);
            if poles.iter().any(|p| p.region == RegionLabel::OnContour) {
                continue;
            }
            let cl = clearance(&poles, spec);
            let choice = ContourChoice { spec, method, clearance: cl };
            if cl >= GOOD_CLEARANCE {
                return Some(choice);
            }
            if best.is_none_or(|b| cl > b.clearance) {
                best = Some(choice);
            }
        }
    }
    best.filter(|b| b.clearance >= MIN_CLEARANCE)
}

/// Contour used by the dispatcher: the largest θ of the window and the first
/// ε that keeps every pole well clear of the contour.
pub fn default_contour(x: Complex64, y: Complex64, params: &Parameters) -> Option<ContourChoice> {
    search(x, y, params, None, &eps_candidates(params, false))
        .or_else(|| search(x, y, params, None, &pole_radii(x, y, params)))
}

/// A contour for which the point falls under the given representation, if any.
pub fn contour_for_method(x: Complex64, y: Complex64, params: &Parameters, method: Method) -> Option<ContourChoice> {
    search(x, y, params, Some(method), &eps_candidates(params, true))
        .or_else(|| search(x, y, params, Some(method), &pole_radii(x, y, params)))
}

/// Every candidate contour on which the point has an admissible
/// representation with relative pole clearance at least `min_clearance`.
pub fn admissible_contours(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    min_clearance: f64,
) -> Vec<ContourChoice> {
    let mut radii = eps_candidates(params, true);
    radii.extend(pole_radii(x, y, params));
    let mut out = Vec::new();
    for theta in theta_candidates(params) {
        for &eps in &radii {
            let Ok(spec) = ContourSpec::new(eps, theta) else { continue };
            let Ok(method) = representation_kind(x, y, params, spec) else { continue };
            let poles = integrand_poles(x, y, params, spec);
            if poles.iter().any(|p| p.region == RegionLabel::OnContour) {
                continue;
            }
            let cl = clearance(&poles, spec);
            if cl >= min_clearance {
                out.push(ContourChoice { spec, method, clearance: cl });
            }
        }
    }
    out
}

/// The integral representation with the default contour, without any
/// series or asymptotic shortcut.
pub fn eval_integral_auto(x: Complex64, y: Complex64, params: &Parameters, tol: f64) -> Result<Evaluation> {
    let choice = default_contour(x, y, params)
        .ok_or_else(|| Error::Region("no admissible contour clears the poles".into()))?;
    Ok(eval_representation(x, y, params, choice.spec, tol)?.evaluation)
}

/// Regime dispatcher: series near the origin, asymptotics far out when the
/// error model allows it, integral representations otherwise, with the
/// series as the fallback for any failure. A result is accepted when its
/// estimate is within tol·max(1, |value|); absolute accuracy below the
/// rounding level of large values is out of reach for every method.
pub fn eval_auto(x: Complex64, y: Complex64, params: &Parameters, tol: f64) -> Result<Evaluation> {
    let budget = SeriesBudget { tol, ..SeriesBudget::default() };
    if x.norm() <= 1.0 && y.norm() <= 1.0 {
        return eval_double_series(x, y, params, budget);
    }
    let meets = |ev: &Evaluation, t: f64| ev.est_error <= t * ev.value.norm().max(1.0);
    if let Some(ev) = best_asymptotic(x, y, params) {
        if meets(&ev, 0.1 * tol) {
            return Ok(ev);
        }
    }
    let integral = eval_integral_auto(x, y, params, tol);
    if let Ok(ev) = integral {
        if meets(&ev, tol) {
            return Ok(ev);
        }
    }
    let series = eval_double_series(x, y, params, budget);
    match (integral, series) {
        (Ok(i), Ok(s)) => Ok(if s.est_error < i.est_error { s } else { i }),
        (Ok(i), Err(_)) => Ok(i),
        (Err(_), Ok(s)) => Ok(s),
        (Err(_), Err(e)) => Err(e),
    }
}
