//! Complex numbers carried with an explicit argument, so that fractional
//! powers can be taken on a chosen sheet instead of the principal one.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub r: f64,
    pub arg: f64,
}

/// Principal argument in (-π, π]; a negative zero imaginary part still maps
/// the negative real axis to +π.
pub fn principal_arg(z: Complex64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    }
}

impl Polar {
    pub fn new(r: f64, arg: f64) -> Self {
        Polar { r, arg }
    }

    pub fn principal(z: Complex64) -> Self {
        Polar {
            r: z.norm(),
            arg: principal_arg(z),
        }
    }

    /// Same modulus, argument shifted by 2πk.
    pub fn sheet(self, k: i32) -> Self {
        Polar {
            r: self.r,
            arg: self.arg + 2.0 * PI * k as f64,
        }
    }

    pub fn ln(self) -> Complex64 {
        Complex64::new(self.r.ln(), self.arg)
    }

    pub fn powf(self, p: f64) -> Polar {
        Polar {
            r: self.r.powf(p),
            arg: self.arg * p,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.r, self.arg)
    }

    /// z^p for real p on this sheet.
    pub fn pow_real(self, p: f64) -> Complex64 {
        if self.r == 0.0 {
            return if p == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        self.powf(p).to_complex()
    }

    /// z^c for complex c on this sheet.
    pub fn pow_complex(self, c: Complex64) -> Complex64 {
        if self.r == 0.0 {
            return if c == Complex64::new(0.0, 0.0) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        (c * self.ln()).exp()
    }
}
