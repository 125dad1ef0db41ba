//! Extended-precision reference values of the double series.
//!
//! Summation runs over anti-diagonal blocks in a working precision that
//! covers the requested digits plus the cancellation measured between the
//! largest term and the result. When α and β are short decimals the
//! reciprocal gammas are generated by the recurrence 1/Γ(s+1) = 1/Γ(s)/s
//! along chains s = μ + r/Q + j.

pub mod big;
mod gamma;

use std::collections::HashMap;
use std::f64::consts::{LN_10, LN_2};

use astro_float::{BigFloat, Consts};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::params::Parameters;
use big::{format_sig, parse_dec, BigComplex, RM};
pub use gamma::recip_gamma_big;

pub const MIN_DIGITS: u32 = 20;
pub const MAX_DIGITS: u32 = 100;
/// Decimal digits carried beyond the requested ones.
const GUARD_DIGITS: f64 = 12.0;
/// Ceiling on the working precision in bits.
pub const MAX_WORKING_BITS: usize = 60_000;
const MAX_BLOCKS: usize = 200_000;
/// Denominators above this fall back to evaluating every 1/Γ directly.
const MAX_CHAIN_DENOMINATOR: i128 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub re: String,
    pub im: String,
    pub digits: u32,
    pub tail_bound: f64,
}

impl OracleValue {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.parse().unwrap_or(f64::NAN), self.im.parse().unwrap_or(f64::NAN))
    }
}

/// Number of agreeing significant digits between two oracle values,
/// -log10(|a - b| / |b|), computed in extended precision.
pub fn agreement_digits(a: &OracleValue, b: &OracleValue) -> f64 {
    let p = 512;
    let mut cc = Consts::new().expect("constants cache");
    let parse = |s: &str, cc: &mut Consts| parse_dec(s, p, cc);
    let (ar, ai) = (parse(&a.re, &mut cc), parse(&a.im, &mut cc));
    let (br, bi) = (parse(&b.re, &mut cc), parse(&b.im, &mut cc));
    let dr = ar.sub(&br, p, RM);
    let di = ai.sub(&bi, p, RM);
    let diff = big::log2_abs(&dr).max(big::log2_abs(&di));
    let mag = big::log2_abs(&br).max(big::log2_abs(&bi));
    if diff == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    if mag == f64::NEG_INFINITY {
        return -diff * LN_2 / LN_10;
    }
    (mag - diff) * LN_2 / LN_10
}

/// Exact rational p/q from the shortest decimal representation of v.
fn decimal_rational(v: f64) -> Option<(i128, i128)> {
    let s = format!("{v}");
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s.as_str(), ""),
    };
    if int.len() + frac.len() > 30 || int.starts_with('-') {
        return None;
    }
    let num: i128 = format!("{int}{frac}").parse().ok()?;
    let den: i128 = 10i128.checked_pow(frac.len() as u32)?;
    let g = gcd(num, den);
    Some((num / g, den / g))
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// Where 1/Γ(μ + nα + mβ) comes from.
enum GammaSource {
    /// α = A/Q, β = B/Q: chains over residues r = (nA + mB) mod Q.
    Chains { a: i128, b: i128, q: i128, chains: HashMap<i128, Vec<BigComplex>> },
    Direct { alpha: BigFloat, beta: BigFloat, cache: HashMap<(usize, usize), BigComplex> },
}

struct Context<'a> {
    p: usize,
    cc: &'a mut Consts,
    mu: BigComplex,
    source: GammaSource,
}

impl Context<'_> {
    fn recip(&mut self, n: usize, m: usize) -> BigComplex {
        let p = self.p;
        match &mut self.source {
            GammaSource::Chains { a, b, q, chains } => {
                let k = n as i128 * *a + m as i128 * *b;
                let (r, j) = (k % *q, (k / *q) as usize);
                let chain = chains.entry(r).or_default();
                let base = self.mu.add_real(
                    &BigFloat::from_i128(r, p).div(&BigFloat::from_i128(*q, p), p, RM),
                    p,
                );
                while chain.len() <= j {
                    let i = chain.len();
                    let next = if i == 0 {
                        recip_gamma_big(&base, p, self.cc)
                    } else {
                        let prev_s = base.add_real(&BigFloat::from_u64(i as u64 - 1, p), p);
                        if prev_s.is_zero() {
                            let s = base.add_real(&BigFloat::from_u64(i as u64, p), p);
                            recip_gamma_big(&s, p, self.cc)
                        } else {
                            chain[i - 1].div(&prev_s, p)
                        }
                    };
                    chain.push(next);
                }
                chain[j].clone()
            }
            GammaSource::Direct { alpha, beta, cache } => {
                if let Some(v) = cache.get(&(n, m)) {
                    return v.clone();
                }
                let shift = alpha
                    .mul(&BigFloat::from_u64(n as u64, p), p, RM)
                    .add(&beta.mul(&BigFloat::from_u64(m as u64, p), p, RM), p, RM);
                let s = self.mu.add_real(&shift, p);
                let v = recip_gamma_big(&s, p, self.cc);
                cache.insert((n, m), v.clone());
                v
            }
        }
    }
}

/// log|term| of the largest term of the series, in nats, from double-precision log-gamma.
fn max_log_term(x: Complex64, y: Complex64, params: &Parameters) -> f64 {
    let (lx, ly) = (x.norm().ln(), y.norm().ln());
    let mut best = f64::NEG_INFINITY;
    let mut k = 0usize;
    loop {
        let mut block = f64::NEG_INFINITY;
        for n in 0..=k {
            let m = k - n;
            let s = params.mu() + params.alpha() * n as f64 + params.beta() * m as f64;
            let mut l = -ln_gamma(s).re;
            if n > 0 {
                l += n as f64 * lx;
            }
            if m > 0 {
                l += m as f64 * ly;
            }
            if l.is_finite() {
                block = block.max(l);
            }
        }
        best = best.max(block);
        let past_peak = k > 8 && block < best - 50.0;
        if past_peak || k > MAX_BLOCKS {
            return best.max(0.0);
        }
        k += 1;
    }
}

struct Pass {
    value: BigComplex,
    tail_log2: f64,
    max_log2: f64,
}

fn sum_series(
    x: Complex64,
    y: Complex64,
    params: &Parameters,
    digits: u32,
    p: usize,
    cc: &mut Consts,
) -> Result<Pass> {
    let xb = BigComplex::from_decimal(x, p, cc);
    let yb = BigComplex::from_decimal(y, p, cc);
    let mu = BigComplex::from_decimal(params.mu(), p, cc);
    let source = match (decimal_rational(params.alpha()), decimal_rational(params.beta())) {
        (Some((an, ad)), Some((bn, bd))) if ad.max(bd) <= MAX_CHAIN_DENOMINATOR => {
            let q = ad / gcd(ad, bd) * bd;
            GammaSource::Chains { a: an * (q / ad), b: bn * (q / bd), q, chains: HashMap::new() }
        }
        _ => GammaSource::Direct {
            alpha: big::from_f64_decimal(params.alpha(), p, cc),
            beta: big::from_f64_decimal(params.beta(), p, cc),
            cache: HashMap::new(),
        },
    };
    let equal = params.alpha() == params.beta();
    let rmax = x.norm().max(y.norm());
    let mut ctx = Context { p, cc, mu, source };

    let target = -((digits as f64 + GUARD_DIGITS) * LN_10 / LN_2);
    let mut sum = BigComplex::zero(p);
    let mut max_log2 = f64::NEG_INFINITY;
    let mut prev_block = f64::INFINITY;
    let mut streak = 0;
    let mut xpow = vec![BigComplex::one(p)];
    let mut ypow = vec![BigComplex::one(p)];
    let mut h = BigComplex::one(p);
    let min_blocks = {
        let mu_re = params.mu().re;
        let step = params.alpha().min(params.beta());
        if mu_re < 0.0 { (-mu_re / step).ceil() as usize + 3 } else { 3 }
    };
    for k in 0..MAX_BLOCKS {
        let mut block_sum = BigComplex::zero(p);
        let mut block_max = f64::NEG_INFINITY;
        if equal {
            // Σ_{n+m=k} x^n y^m = h_k with h_k = y h_{k-1} + x^k
            if k > 0 {
                let xk = xpow[0].mul(&xb, p);
                xpow[0] = xk;
                h = h.mul(&yb, p).add(&xpow[0], p);
            }
            // h_k itself can vanish (conjugate x, y), so the tail test uses
            // the bound |h_k| ≤ (k+1)·max(|x|, |y|)^k
            let r = ctx.recip(k, 0);
            let grow = if k == 0 { 0.0 } else { k as f64 * rmax.log2() + ((k + 1) as f64).log2() };
            block_max = r.log2_mag() + grow;
            block_sum = h.mul(&r, p);
        } else {
            if k > 0 {
                let nx = xpow[k - 1].mul(&xb, p);
                let ny = ypow[k - 1].mul(&yb, p);
                xpow.push(nx);
                ypow.push(ny);
            }
            for n in 0..=k {
                let m = k - n;
                let t = xpow[n].mul(&ypow[m], p).mul(&ctx.recip(n, m), p);
                block_max = block_max.max(t.log2_mag());
                block_sum = block_sum.add(&t, p);
            }
        }
        sum = sum.add(&block_sum, p);
        max_log2 = max_log2.max(block_max);
        if block_max <= prev_block - 1.0 || block_max == f64::NEG_INFINITY {
            streak += 1;
        } else {
            streak = 0;
        }
        prev_block = block_max;
        // block magnitude bounded by (k+1)·max term; tail ≤ 2·block
        let block_bound = block_max + ((k + 1) as f64).log2() + 1.0;
        let scale = sum.log2_mag().max(max_log2 - (p as f64) * 0.5);
        if streak >= 2 && k + 1 >= min_blocks && block_bound - scale < target {
            return Ok(Pass { value: sum, tail_log2: block_bound, max_log2 });
        }
    }
    Err(Error::budget(format!("oracle did not converge in {MAX_BLOCKS} blocks"), None))
}

/// Extended-precision value of the double series with `digits` significant digits.
pub fn oracle_eval(x: Complex64, y: Complex64, params: &Parameters, digits: u32) -> Result<OracleValue> {
    if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        return Err(Error::Domain(format!("oracle digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}]")));
    }
    let mut cc = Consts::new().map_err(|e| Error::budget(format!("constants cache: {e:?}"), None))?;
    let want_bits = (digits as f64 + GUARD_DIGITS) * LN_10 / LN_2;
    let cancel_bits = max_log_term(x, y, params) / LN_2;
    let mut p = (want_bits + cancel_bits + 128.0).ceil() as usize;
    for _ in 0..4 {
        if p > MAX_WORKING_BITS {
            return Err(Error::budget(
                format!("oracle needs {p} working bits (cap {MAX_WORKING_BITS})"),
                None,
            ));
        }
        let pass = sum_series(x, y, params, digits, p, &mut cc)?;
        let result_log2 = pass.value.log2_mag();
        let lost = (pass.max_log2 - result_log2).max(0.0);
        let needed = (want_bits + lost + 64.0).ceil() as usize;
        if needed <= p || pass.value.is_zero() {
            let rounding = pass.max_log2 + 16.0 - p as f64 + lost.min(0.0);
            let tail = 2f64.powf(pass.tail_log2.min(1000.0)) + 2f64.powf(rounding.min(1000.0));
            return Ok(OracleValue {
                re: format_sig(&pass.value.re, digits as usize, &mut cc),
                im: format_sig(&pass.value.im, digits as usize, &mut cc),
                digits,
                tail_bound: tail,
            });
        }
        p = needed + 64;
    }
    Err(Error::budget("oracle precision did not stabilise", None))
}

/// 1/Γ(s) to `digits` significant digits.
pub fn oracle_recip_gamma(s: Complex64, digits: u32) -> Result<OracleValue> {
    let mut cc = Consts::new().map_err(|e| Error::budget(format!("constants cache: {e:?}"), None))?;
    let p = ((digits as f64 + GUARD_DIGITS) * LN_10 / LN_2).ceil() as usize + 64;
    let sb = BigComplex::from_decimal(s, p, &mut cc);
    let r = recip_gamma_big(&sb, p, &mut cc);
    Ok(OracleValue {
        re: format_sig(&r.re, digits as usize, &mut cc),
        im: format_sig(&r.im, digits as usize, &mut cc),
        digits,
        tail_bound: 2f64.powf(r.log2_mag() - p as f64 + 16.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rationals() {
        assert_eq!(decimal_rational(0.7), Some((7, 10)));
        assert_eq!(decimal_rational(1.2), Some((6, 5)));
        assert_eq!(decimal_rational(2.0), Some((2, 1)));
        assert_eq!(decimal_rational(0.5), Some((1, 2)));
    }

    #[test]
    fn equal_orders_with_vanishing_blocks() {
        // conjugate x, y make Σ_{n+m=k} x^n y^m vanish at k = 3, 7, 11, ...;
        // reference from an independent 40-digit summation
        let r = 2.0 * std::f64::consts::SQRT_2;
        let p = validate_params(0.7, 0.7, c(0.5, 0.3)).unwrap();
        let v = oracle_eval(c(r, -r), c(r, r), &p, 30).unwrap();
        let want = OracleValue {
            re: "110.966873327911319014873272476624020410741".into(),
            im: "-73.9009642471630736973965254245040501174889".into(),
            digits: 40,
            tail_bound: 0.0,
        };
        assert!(agreement_digits(&v, &want) >= 29.0, "{v:?}");
    }

    #[test]
    fn exponential_closed_form() {
        // 2e² - e to 40 digits
        let p = validate_params(1.0, 1.0, c(1.0, 0.0)).unwrap();
        let v = oracle_eval(c(2.0, 0.0), c(1.0, 0.0), &p, 30).unwrap();
        let want = OracleValue {
            re: "1.2059830369402255219100567449797353128603e1".into(),
            im: "0".into(),
            digits: 40,
            tail_bound: 0.0,
        };
        assert!(agreement_digits(&v, &want) >= 29.0, "{v:?}");
        assert!(v.tail_bound < 1e-25);
    }

    #[test]
    fn origin_gives_recip_gamma_mu() {
        let p = validate_params(0.7, 0.9, c(0.5, 0.0)).unwrap();
        let v = oracle_eval(c(0.0, 0.0), c(0.0, 0.0), &p, 30).unwrap();
        assert!(v.re.starts_with("5.64189583547756286948079451561"), "{}", v.re);
    }

    #[test]
    fn digits_range() {
        let p = validate_params(1.0, 1.0, c(1.0, 0.0)).unwrap();
        assert!(oracle_eval(c(1.0, 0.0), c(1.0, 0.0), &p, 10).is_err());
    }
}
