//! Extended-precision 1/Γ via the lower incomplete gamma series
//!
//!   Γ(s) ≈ N^s e^{-N} Σ_k N^k / (s(s+1)…(s+k)),
//!
//! with N large enough that the neglected upper part Γ(s, N) is below the
//! working precision, and upward recurrence for Re s < 1.

use std::f64::consts::{LN_2, PI};

use astro_float::{BigFloat, Consts};

use super::big::{BigComplex, RM};

pub fn recip_gamma_big(s: &BigComplex, p: usize, cc: &mut Consts) -> BigComplex {
    let sre = super::big::to_f64(&s.re);
    let k = if sre < 1.0 { (1.0 - sre).ceil() as usize } else { 0 };
    if k > 0 {
        // 1/Γ(s) = s(s+1)…(s+k-1) / Γ(s+k); exact zero at non-positive integers
        let mut prod = s.clone();
        for i in 1..k {
            let f = s.add_real(&BigFloat::from_u64(i as u64, p), p);
            prod = prod.mul(&f, p);
        }
        let shifted = s.add_real(&BigFloat::from_u64(k as u64, p), p);
        return prod.mul(&recip_gamma_series(&shifted, p, cc), p);
    }
    recip_gamma_series(s, p, cc)
}

fn recip_gamma_series(s: &BigComplex, p: usize, cc: &mut Consts) -> BigComplex {
    let t = super::big::to_f64(&s.im).abs();
    let sig = super::big::to_f64(&s.re);
    // extra bits: cancellation from |Γ(s)| ~ e^{-π|t|/2} and the size of the
    // largest series term relative to the sum
    let extra = ((PI * t / 2.0) / LN_2).ceil() as usize + 64;
    let wp = p + extra;
    let n_f = (p as f64 * LN_2 + PI * t / 2.0 + 2.0 * (sig.abs() + t) + 20.0).ceil();
    let n = BigFloat::from_u64(n_f as u64, wp);
    let s_w = BigComplex::new(s.re.clone(), s.im.clone());

    let mut term = BigComplex::one(wp).div(&s_w, wp);
    let mut sum = term.clone();
    let mut k: u64 = 1;
    let stop = -(wp as f64) - 8.0;
    loop {
        let den = s_w.add_real(&BigFloat::from_u64(k, wp), wp);
        term = term.mul_real(&n, wp).div(&den, wp);
        sum = sum.add(&term, wp);
        if k as f64 > n_f && term.log2_mag() - sum.log2_mag() < stop {
            break;
        }
        k += 1;
    }
    // Γ(s) = e^{s ln N - N} · sum
    let ln_n = n.ln(wp, RM, cc);
    let expo = BigComplex::new(s_w.re.mul(&ln_n, wp, RM).sub(&n, wp, RM), s_w.im.mul(&ln_n, wp, RM));
    let gamma = expo.exp(wp, cc).mul(&sum, wp);
    BigComplex::one(p).div(&gamma, p)
}
