//! Direct summation of the double series by anti-diagonal blocks n + m = k.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::eval::{Evaluation, Method};
use crate::gamma::{recip_gamma, POLE_SNAP};
use crate::params::Parameters;
use crate::sum::ComplexSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBudget {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesBudget {
    fn default() -> Self {
        SeriesBudget { tol: 1e-12, max_terms: 2000 }
    }
}

impl SeriesBudget {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol > 0.0) || max_terms < 4 {
            return Err(Error::Domain(format!(
                "series budget needs tol > 0 and max_terms >= 4 (got {tol:e}, {max_terms})"
            )));
        }
        Ok(SeriesBudget { tol, max_terms })
    }
}

struct Block {
    sum: Complex64,
    max: f64,
    abs: f64,
}

fn is_gamma_pole(s: Complex64) -> bool {
    let n = s.re.round();
    n <= 0.0 && (s - n).norm() < POLE_SNAP
}

/// One term x^n y^m / Γ(s), or None when it cannot be represented.
fn term(pow: Complex64, s: Complex64) -> Option<Complex64> {
    let r = recip_gamma(s);
    if r == Complex64::new(0.0, 0.0) && !is_gamma_pole(s) && pow.norm() > 1e250 {
        return None;
    }
    let t = pow * r;
    (t.re.is_finite() && t.im.is_finite()).then_some(t)
}

/// Shared driver: sums blocks until the geometric certificate holds and the
/// certified tail is negligible.
fn sum_blocks(
    mut block: impl FnMut(usize) -> Option<Block>,
    min_blocks: usize,
    budget: SeriesBudget,
) -> Result<Evaluation> {
    let mut total = ComplexSum::default();
    let mut abs_total = 0.0;
    let mut prev_max: Option<f64> = None;
    let mut streak = 0;
    for k in 0..budget.max_terms {
        let Some(b) = block(k) else {
            let partial = Evaluation::new(total.value(), f64::INFINITY, Method::Series);
            return Err(Error::budget(
                format!("series term not representable in double precision at block {k}"),
                Some(partial),
            ));
        };
        total.add(b.sum);
        abs_total += b.abs;
        match prev_max {
            Some(pm) if b.max <= 0.5 * pm => streak += 1,
            _ => streak = 0,
        }
        prev_max = Some(b.max);
        if streak >= 2 && k + 1 >= min_blocks {
            let tail = 2.0 * b.abs;
            if tail <= 1e-3 * budget.tol || tail <= 0.1 * f64::EPSILON * abs_total {
                let est = tail + 4.0 * f64::EPSILON * abs_total;
                return Ok(Evaluation::new(total.value(), est, Method::Series));
            }
        }
    }
    let partial = Evaluation::new(total.value(), f64::INFINITY, Method::Series);
    Err(Error::budget(
        format!("tail certificate not reached within {} blocks", budget.max_terms),
        Some(partial),
    ))
}

/// Blocks needed before 1/Γ can no longer vanish at a non-positive integer.
fn min_blocks(mu: Complex64, step: f64) -> usize {
    let k0 = if mu.re < 0.0 { (-mu.re / step).ceil() as usize } else { 0 };
    (k0 + 3).max(3)
}

pub fn eval_double_series(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    budget: SeriesBudget,
) -> Result<Evaluation> {
    let (alpha, beta, mu) = (params.alpha(), params.beta(), params.mu());
    let mut xp = vec![Complex64::new(1.0, 0.0)];
    let mut yp = vec![Complex64::new(1.0, 0.0)];
    let block = |k: usize| -> Option<Block> {
        if k > 0 {
            xp.push(xp[k - 1] * x);
            yp.push(yp[k - 1] * y);
        }
        let mut sum = ComplexSum::default();
        let (mut max, mut abs) = (0.0f64, 0.0);
        for n in 0..=k {
            let m = k - n;
            let s = mu + n as f64 * alpha + m as f64 * beta;
            let t = term(xp[n] * yp[m], s)?;
            let a = t.norm();
            max = max.max(a);
            abs += a;
            sum.add(t);
        }
        Some(Block { sum: sum.value(), max, abs })
    };
    sum_blocks(block, min_blocks(mu, alpha.min(beta)), budget)
}

/// The one-variable function E_ρ(z; κ) = Σ z^n / Γ(ρn + κ).
pub fn eval_ml_one(z: Complex64, rho: f64, kappa: Complex64, budget: SeriesBudget) -> Result<Evaluation> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let mut zp = Complex64::new(1.0, 0.0);
    let block = |k: usize| -> Option<Block> {
        if k > 0 {
            zp *= z;
        }
        let t = term(zp, kappa + k as f64 * rho)?;
        Some(Block { sum: t, max: t.norm(), abs: t.norm() })
    };
    sum_blocks(block, min_blocks(kappa, rho), budget)
}
