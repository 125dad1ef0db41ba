//! Reciprocal gamma function in double precision.
//!
//! Re s < 1/2 goes through the reflection formula, moderate arguments are
//! shifted down to [1/2, 3/2) and finished with a Lanczos sum (g = 607/128,
//! 15 terms), and large arguments use the logarithmic Lanczos form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contour::{build_contour, integrate, ContourPoint, IntegrandSpec};
use crate::error::{Error, Result};
use crate::params::ContourSpec;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Distance to a non-positive integer below which 1/Γ is snapped to zero.
pub const POLE_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaConfig {
    pub accuracy_target: f64,
}

impl Default for GammaConfig {
    fn default() -> Self {
        GammaConfig { accuracy_target: 1e-14 }
    }
}

impl GammaConfig {
    pub fn new(accuracy_target: f64) -> Result<Self> {
        if !(1e-15..=1e-6).contains(&accuracy_target) {
            return Err(Error::Domain(format!(
                "accuracy target {accuracy_target:e} outside [1e-15, 1e-6]"
            )));
        }
        Ok(GammaConfig { accuracy_target })
    }
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    a
}

/// ln Γ(s) for Re s ≥ 1/2 (any branch of the imaginary part).
fn ln_gamma_right(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// ln Γ(s) up to a multiple of 2πi in the imaginary part.
pub fn ln_gamma(s: Complex64) -> Complex64 {
    if s.re >= 0.5 {
        ln_gamma_right(s)
    } else {
        Complex64::new(PI.ln(), 0.0) - sin_pi(s).ln() - ln_gamma_right(1.0 - s)
    }
}

/// sin(πs), reduced so that the argument of the sine is small.
pub fn sin_pi(s: Complex64) -> Complex64 {
    let n = s.re.round();
    let v = ((s - n) * PI).sin();
    if n.rem_euclid(2.0) == 0.0 {
        v
    } else {
        -v
    }
}

fn near_nonpositive_integer(s: Complex64) -> bool {
    let n = s.re.round();
    n <= 0.0 && (s - n).norm() < POLE_SNAP
}

pub fn recip_gamma(s: Complex64) -> Complex64 {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    if near_nonpositive_integer(s) {
        return Complex64::new(0.0, 0.0);
    }
    if s.re < 0.5 {
        let w = 1.0 - s;
        return sin_pi(s) / PI * gamma_right(w);
    }
    recip_gamma_right(s)
}

/// Γ(w) for Re w ≥ 1/2, falling back to the log form once 1/Γ underflows.
fn gamma_right(w: Complex64) -> Complex64 {
    let r = recip_gamma_right(w);
    if r.norm() > 1e-300 {
        r.inv()
    } else {
        ln_gamma_right(w).exp()
    }
}

fn recip_gamma_right(s: Complex64) -> Complex64 {
    if s.im == 0.0 && s.re.fract() == 0.0 && s.re <= 171.0 {
        // (n-1)! is exact in f64 up to 22!, so small integers come out exact
        let n = s.re as u32;
        let fact: f64 = (2..n).map(f64::from).product();
        return Complex64::new(1.0 / fact, 0.0);
    }
    if s.re <= 60.0 && s.im.abs() <= 30.0 {
        let k = (s.re - 0.5).floor().max(0.0) as usize;
        let z = s - k as f64;
        let zm = z - 1.0;
        let t = zm + LANCZOS_G + 0.5;
        let gamma_z = (2.0 * PI).sqrt() * ((zm + 0.5) * t.ln() - t).exp() * lanczos_sum(zm);
        let mut prod = gamma_z;
        for i in 0..k {
            prod *= z + i as f64;
        }
        prod.inv()
    } else {
        (-ln_gamma_right(s)).exp()
    }
}

/// (1/2πi) ∮ e^u u^{-s} du along γ(ε;θ); equals 1/Γ(s) for θ > π/2.
pub fn recip_gamma_hankel(s: Complex64, contour: ContourSpec, tol: f64) -> Result<Complex64> {
    let c = build_contour(contour, 1.0, tol * 1e-3)?;
    let f = IntegrandSpec::new(move |p: &ContourPoint| (p.z - s * p.polar().ln()).exp(), 1.0);
    let q = integrate(&c, &f, tol * 2.0 * PI)?;
    Ok(q.value / Complex64::new(0.0, 2.0 * PI))
}
