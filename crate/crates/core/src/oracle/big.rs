//! Thin complex layer over astro-float plus decimal conversion helpers.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_complex::Complex64;

pub const RM: RoundingMode = RoundingMode::ToEven;

pub fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

/// Binary exponent e with |x| in [2^{e-1}, 2^e); None for zero.
pub fn exponent2(x: &BigFloat) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    x.exponent().map(|e| e as i64)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() || words.is_empty() {
        return 0.0;
    }
    let n = words.len();
    let top = words[n - 1] as f64;
    let next = if n > 1 { words[n - 2] as f64 } else { 0.0 };
    let m = top * 2f64.powi(-64) + next * 2f64.powi(-128);
    let v = ldexp(m, e as i64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// log2 |x|, or -inf for zero.
pub fn log2_abs(x: &BigFloat) -> f64 {
    match exponent2(x) {
        None => f64::NEG_INFINITY,
        Some(e) => {
            let Some((words, _, _, _, _)) = x.as_raw_parts() else {
                return f64::NAN;
            };
            let top = words[words.len() - 1] as f64 * 2f64.powi(-64);
            e as f64 + top.log2()
        }
    }
}

pub fn parse_dec(s: &str, p: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(s, Radix::Dec, p, RM, cc)
}

/// Shortest round-trip decimal form of an f64, read back exactly.
pub fn from_f64_decimal(v: f64, p: usize, cc: &mut Consts) -> BigFloat {
    parse_dec(&format!("{v}"), p, cc)
}

/// Decimal string with `digits` significant digits, e.g. "-1.2345e-7".
pub fn format_sig(x: &BigFloat, digits: usize, cc: &mut Consts) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let raw = x.format(Radix::Dec, RM, cc).unwrap_or_else(|_| "NaN".into());
    round_decimal(&raw, digits)
}

/// Round a decimal string of the form [-]d.ddd[e±x] to `digits` significant digits.
pub fn round_decimal(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw.strip_prefix('+').unwrap_or(raw)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    let Some(first) = all.iter().position(|&d| d != 0) else {
        return "0".into();
    };
    // value = 0.d1d2... × 10^(point), with the point after int_part
    let mut exp10 = exp + int_part.len() as i64 - first as i64 - 1;
    let sig = &all[first..];
    let mut kept: Vec<u8> = sig.iter().take(digits).copied().collect();
    while kept.len() < digits {
        kept.push(0);
    }
    if sig.len() > digits && sig[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exp10 += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + kept[0]) as char);
    if kept.len() > 1 {
        s.push('.');
        s.extend(kept[1..].iter().map(|&d| (b'0' + d) as char));
    }
    s.push_str(&format!("e{exp10}"));
    s
}

#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigFloat, p: usize) -> Self {
        BigComplex { re, im: BigFloat::from_word(0, p) }
    }

    pub fn zero(p: usize) -> Self {
        Self::real(BigFloat::from_word(0, p), p)
    }

    pub fn one(p: usize) -> Self {
        Self::real(BigFloat::from_word(1, p), p)
    }

    pub fn from_decimal(z: Complex64, p: usize, cc: &mut Consts) -> Self {
        BigComplex {
            re: from_f64_decimal(z.re, p, cc),
            im: from_f64_decimal(z.im, p, cc),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        BigComplex {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        BigComplex {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }

    pub fn add_real(&self, r: &BigFloat, p: usize) -> Self {
        BigComplex { re: self.re.add(r, p, RM), im: self.im.clone() }
    }

    pub fn mul_real(&self, r: &BigFloat, p: usize) -> Self {
        if self.is_real() {
            return BigComplex { re: self.re.mul(r, p, RM), im: self.im.clone() };
        }
        BigComplex {
            re: self.re.mul(r, p, RM),
            im: self.im.mul(r, p, RM),
        }
    }

    pub fn div_real(&self, r: &BigFloat, p: usize) -> Self {
        if self.is_real() {
            return BigComplex { re: self.re.div(r, p, RM), im: self.im.clone() };
        }
        BigComplex {
            re: self.re.div(r, p, RM),
            im: self.im.div(r, p, RM),
        }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        if o.is_real() {
            return self.mul_real(&o.re, p);
        }
        if self.is_real() {
            return o.mul_real(&self.re, p);
        }
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        BigComplex { re: ac.sub(&bd, p, RM), im: ad.add(&bc, p, RM) }
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        if o.is_real() {
            return self.div_real(&o.re, p);
        }
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let conj = BigComplex { re: o.re.clone(), im: o.im.neg() };
        self.mul(&conj, p).div_real(&den, p)
    }

    /// log2 of max(|re|, |im|); within half a bit of log2 |z|.
    pub fn log2_mag(&self) -> f64 {
        log2_abs(&self.re).max(log2_abs(&self.im))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// e^{re} (cos im + i sin im).
    pub fn exp(&self, p: usize, cc: &mut Consts) -> Self {
        let m = self.re.exp(p, RM, cc);
        if self.is_real() {
            return Self::real(m, p);
        }
        BigComplex {
            re: m.mul(&self.im.cos(p, RM, cc), p, RM),
            im: m.mul(&self.im.sin(p, RM, cc), p, RM),
        }
    }
}
