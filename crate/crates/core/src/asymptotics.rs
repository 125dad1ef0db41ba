//! Large-argument expansions. Residues of the poles inside the sector
//! |arg ζ| ≤ τ₁ plus the finite sum Σ_{n≤p_β} Σ_{m≤p_α} x^{-n} y^{-m} / Γ(μ - αn - βm).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contour::{build_contour, integrate, ContourPoint, IntegrandSpec};
use crate::error::{Error, Result};
use crate::eval::{AsymptoticCase, Evaluation, Method};
use crate::gamma::recip_gamma;
use crate::oracle::oracle_eval;
use crate::params::{ContourSpec, Parameters};
use crate::polar::{principal_arg, Polar};
use crate::representations::{residue, residue_parts, PoleSource, DEGENERACY_FLOOR};

pub const MAGNITUDE_FLOOR: f64 = 5.0;
/// Highest truncation order the dispatcher tries.
pub const MAX_AUTO_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationOrders {
    pub p_alpha: usize,
    pub p_beta: usize,
}

impl Default for TruncationOrders {
    fn default() -> Self {
        TruncationOrders { p_alpha: 3, p_beta: 3 }
    }
}

impl TruncationOrders {
    pub fn new(p_alpha: usize, p_beta: usize) -> Result<Self> {
        if p_alpha < 1 || p_beta < 1 {
            return Err(Error::Domain("truncation orders must be at least 1".into()));
        }
        Ok(TruncationOrders { p_alpha, p_beta })
    }

    pub fn uniform(p: usize) -> Result<Self> {
        Self::new(p, p)
    }
}

/// How the error estimate of an expansion is formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorModel {
    /// Twice the magnitude of the next two shells of the double sum, plus a
    /// bound for exponentially small contributions of excluded poles.
    Shell,
    /// c·(|xy|⁻¹|x|^{-p_β} + |xy|⁻¹|y|^{-p_α}) with an oracle-calibrated c.
    Calibrated(f64),
}

pub fn classify_case(x: Complex64, y: Complex64, params: &Parameters, tau1: f64) -> AsymptoticCase {
    let x_in = principal_arg(x).abs() <= tau1 / params.beta();
    let y_in = principal_arg(y).abs() <= tau1 / params.alpha();
    match (x_in, y_in) {
        (true, true) => AsymptoticCase::Case1,
        (true, false) => AsymptoticCase::Case2,
        (false, true) => AsymptoticCase::Case3,
        (false, false) => AsymptoticCase::Case4,
    }
}

fn tail_term(x: Complex64, y: Complex64, params: &Parameters, n: usize, m: usize) -> Complex64 {
    let s = params.mu() - params.alpha() * n as f64 - params.beta() * m as f64;
    recip_gamma(s) / (x.powu(n as u32) * y.powu(m as u32))
}

pub fn asympt_tail_sum(x: Complex64, y: Complex64, params: &Parameters, orders: TruncationOrders) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=orders.p_beta {
        for m in 1..=orders.p_alpha {
            acc += tail_term(x, y, params, n, m);
        }
    }
    acc
}

struct SectorPole {
    source: PoleSource,
    sheet: i32,
    zeta: Polar,
}

fn sector_poles(x: Complex64, y: Complex64, params: &Parameters) -> Vec<SectorPole> {
    let mut out = Vec::new();
    for (source, v, power) in [
        (PoleSource::XPole, x, params.beta()),
        (PoleSource::YPole, y, params.alpha()),
    ] {
        let base = Polar::principal(v);
        let lim = PI / power;
        let lo = ((-lim - base.arg) / (2.0 * PI)).ceil() as i32;
        let hi = ((lim - base.arg) / (2.0 * PI)).floor() as i32;
        for k in lo..=hi {
            let phi = power * (base.arg + 2.0 * PI * k as f64);
            // (−π, π]: a pole on the negative axis belongs to one sheet only
            if phi > -PI && phi <= PI {
                out.push(SectorPole { source, sheet: k, zeta: Polar::new(base.r.powf(power), phi) });
            }
        }
    }
    out
}

pub fn eval_asymptotic(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    orders: TruncationOrders,
    tau1: f64,
) -> Result<Evaluation> {
    eval_asymptotic_with(x, y, params, orders, tau1, ErrorModel::Shell)
}

pub fn eval_asymptotic_with(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    orders: TruncationOrders,
    tau1: f64,
    model: ErrorModel,
) -> Result<Evaluation> {
    if x.norm() < MAGNITUDE_FLOOR || y.norm() < MAGNITUDE_FLOOR {
        return Err(Error::MagnitudeFloor { floor: MAGNITUDE_FLOOR });
    }
    let case = classify_case(x, y, params, tau1);
    let d = params.decay();
    let poles = sector_poles(x, y, params);
    let mut value = Complex64::new(0.0, 0.0);
    let mut res_abs = 0.0;
    let mut excluded = 0.0;
    for p in &poles {
        let inside = p.zeta.arg.abs() <= tau1;
        if inside {
            for q in poles.iter().filter(|q| q.source != p.source) {
                let (zp, zq) = (p.zeta.to_complex(), q.zeta.to_complex());
                if (zp - zq).norm() < DEGENERACY_FLOOR * (1.0 + zp.norm() + zq.norm()) {
                    return Err(Error::DegenerateDenominator(
                        "x^beta and y^alpha coincide inside the sector".into(),
                    ));
                }
            }
            let r = residue(x, y, params, p.source, p.sheet);
            value += r;
            res_abs += r.norm();
        } else if (p.zeta.arg * d).cos() < 0.0 {
            // exponentially small; bounded by the size of the residue numerator
            let (num, den) = residue_parts(x, y, params, p.source, p.sheet);
            excluded += 2.0 * num.norm() / den.norm().max(1.0);
        }
    }
    let mut tail_abs = 0.0;
    let mut shell = 0.0;
    for n in 1..=orders.p_beta + 2 {
        for m in 1..=orders.p_alpha + 2 {
            let t = tail_term(x, y, params, n, m);
            if n <= orders.p_beta && m <= orders.p_alpha {
                value += t;
                tail_abs += t.norm();
            } else {
                shell += t.norm();
            }
        }
    }
    let rounding = 8.0 * f64::EPSILON * (res_abs + tail_abs);
    let est = match model {
        ErrorModel::Shell => 2.0 * shell + excluded + rounding,
        ErrorModel::Calibrated(c) => c * model_unit(x, y, orders) + excluded + rounding,
    };
    Ok(Evaluation::new(value, est, Method::Asymptotic(case)))
}

/// |xy|⁻¹|x|^{-p_β} + |xy|⁻¹|y|^{-p_α}.
pub fn model_unit(x: Complex64, y: Complex64, orders: TruncationOrders) -> f64 {
    let (ax, ay) = (x.norm(), y.norm());
    (ax.powi(-(orders.p_beta as i32)) + ay.powi(-(orders.p_alpha as i32))) / (ax * ay)
}

/// Oracle-calibrated constant c of the error model for the ray
/// (x, y) = t·(dx, dy), probed at t = 10, 20, 40.
pub fn calibrate_constant(
    params: &Parameters,
    orders: TruncationOrders,
    direction: (Complex64, Complex64),
    tau1: f64,
) -> Result<f64> {
    let mut c: f64 = 0.0;
    for t in [10.0, 20.0, 40.0] {
        let (x, y) = (direction.0 * t, direction.1 * t);
        let approx = eval_asymptotic(x, y, params, orders, tau1)?;
        let exact = oracle_eval(x, y, params, 30)?.to_complex();
        c = c.max((approx.value - exact).norm() / model_unit(x, y, orders));
    }
    Ok(c)
}

/// Expansion with the order p = p_α = p_β that minimises the error estimate,
/// or None when the arguments are too small or a residue is degenerate.
pub fn best_asymptotic(x: Complex64, y: Complex64, params: &Parameters) -> Option<Evaluation> {
    if x.norm().min(y.norm()) < MAGNITUDE_FLOOR {
        return None;
    }
    let tau1 = params.theta_window().1;
    (1..=MAX_AUTO_ORDER)
        .filter_map(|p| eval_asymptotic(x, y, params, TruncationOrders::uniform(p).ok()?, tau1).ok())
        .min_by(|a, b| a.est_error.total_cmp(&b.est_error))
}

/// (1/2πi)(1/αβ) ∮ e^{ζ^{1/(αβ)}} ζ^{-s/(αβ) + 1/(αβ) - 1} dζ, which equals 1/Γ(s).
pub fn hankel_term(s: Complex64, params: &Parameters, spec: ContourSpec, tol: f64) -> Result<Complex64> {
    let d = params.decay();
    let c = -s * d + d - 1.0;
    let contour = build_contour(spec, d, 1e-3 * tol)?;
    let f = IntegrandSpec::new(
        move |p: &ContourPoint| {
            let lz = p.polar().ln();
            ((lz * d).exp() + c * lz).exp() * d
        },
        d,
    );
    let q = integrate(&contour, &f, tol * 2.0 * PI)?;
    Ok(q.value / Complex64::new(0.0, 2.0 * PI))
}

/// Both sides of the finite expansion
///
///   1/((a - x)(b - y)) = Σ_{n≤P} Σ_{m≤Q} a^{n-1} b^{m-1} / (x^n y^m)
///                      + (x^P b^Q + y^Q a^P - a^P b^Q) / (x^P y^Q (a - x)(b - y)),
///
/// with a = ζ^{1/β}, b = ζ^{1/α}, P = p_β, Q = p_α. Returns (left, right,
/// magnitude scale of the right-hand summands).
pub fn expansion_sides(
    zeta: Complex64,
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    orders: TruncationOrders,
) -> (Complex64, Complex64, f64) {
    let z = Polar::principal(zeta);
    let a = z.pow_real(1.0 / params.beta());
    let b = z.pow_real(1.0 / params.alpha());
    let (pp, qq) = (orders.p_beta as u32, orders.p_alpha as u32);
    let lhs = ((a - x) * (b - y)).inv();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for n in 1..=pp {
        for m in 1..=qq {
            let t = z.pow_real((n - 1) as f64 / params.beta() + (m - 1) as f64 / params.alpha())
                / (x.powu(n) * y.powu(m));
            sum += t;
            scale += t.norm();
        }
    }
    let (xp, yq, ap, bq) = (x.powu(pp), y.powu(qq), a.powu(pp), b.powu(qq));
    let rest = (xp * bq + yq * ap - ap * bq) / (xp * yq * (a - x) * (b - y));
    scale += rest.norm();
    (lhs, sum + rest, scale)
}
