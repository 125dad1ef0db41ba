//! Parameter validation, contour geometry and the Ω⁻/Ω⁺ classification.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::principal_arg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Standard,
    /// α = 2 or β = 2, admitted only for Re μ > 0.
    Lemma4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    alpha: f64,
    beta: f64,
    mu: Complex64,
    regime: Regime,
}

/// Width below which the admissible θ-window is reported as thin.
pub const THIN_WINDOW: f64 = 0.05 * PI;

pub fn validate_params(alpha: f64, beta: f64, mu: Complex64) -> Result<Parameters> {
    if !(alpha.is_finite() && beta.is_finite() && mu.re.is_finite() && mu.im.is_finite()) {
        return Err(Error::Domain("parameters must be finite".into()));
    }
    if alpha <= 0.0 || beta <= 0.0 {
        return Err(Error::Domain(format!(
            "alpha and beta must be positive (alpha={alpha}, beta={beta})"
        )));
    }
    if alpha > 2.0 || beta > 2.0 {
        return Err(Error::Domain(format!(
            "alpha and beta must not exceed 2 (alpha={alpha}, beta={beta})"
        )));
    }
    let regime = if alpha == 2.0 || beta == 2.0 {
        if mu.re <= 0.0 {
            return Err(Error::Domain(format!(
                "alpha = 2 or beta = 2 requires Re(mu) > 0 (mu={mu})"
            )));
        }
        Regime::Lemma4
    } else {
        Regime::Standard
    };
    if alpha * beta >= 2.0 {
        return Err(Error::Domain(format!(
            "alpha*beta = {} must be below 2",
            alpha * beta
        )));
    }
    Ok(Parameters {
        alpha,
        beta,
        mu,
        regime,
    })
}

impl Parameters {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Exponent d = 1/(αβ) of the factor exp(ζ^d) in the integrands.
    pub fn decay(&self) -> f64 {
        1.0 / (self.alpha * self.beta)
    }

    /// Open-closed window (παβ/2, min(π, παβ)] for the ray angle θ.
    pub fn theta_window(&self) -> (f64, f64) {
        let ab = self.alpha * self.beta;
        (PI * ab / 2.0, PI * ab.min(1.0))
    }

    /// Upper end of the sub-window on which every pole sits on the principal
    /// sheet of both ζ^{1/α} and ζ^{1/β}. Empty in the Lemma-4 regime.
    pub fn single_sheet_upper(&self) -> f64 {
        PI * 1f64.min(self.alpha * self.beta).min(self.alpha).min(self.beta)
    }

    pub fn thin_window(&self) -> bool {
        let (lo, hi) = self.theta_window();
        hi - lo < THIN_WINDOW
    }

    pub fn with_mu(&self, mu: Complex64) -> Result<Parameters> {
        validate_params(self.alpha, self.beta, mu)
    }

    /// The parameters with the roles of α and β exchanged.
    pub fn swapped(&self) -> Parameters {
        Parameters {
            alpha: self.beta,
            beta: self.alpha,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub epsilon: f64,
    pub theta: f64,
}

impl ContourSpec {
    pub fn new(epsilon: f64, theta: f64) -> Result<ContourSpec> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Geometry(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(theta > 0.0 && theta <= PI) {
            return Err(Error::Geometry(format!("theta must lie in (0, pi], got {theta}")));
        }
        Ok(ContourSpec { epsilon, theta })
    }

    /// Condition παβ/2 < θ ≤ min(π, παβ).
    pub fn admissible_for(&self, params: &Parameters) -> bool {
        let (lo, hi) = params.theta_window();
        self.theta > lo && self.theta <= hi * (1.0 + 1e-15)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedContour {
    pub eps_alpha: f64,
    pub eps_beta: f64,
    pub theta_alpha: f64,
    pub theta_beta: f64,
}

/// Images of γ(ε;θ) in the x-plane (ε^{1/β}, θ/β) and the y-plane (ε^{1/α}, θ/α).
pub fn derived_contour_params(spec: ContourSpec, params: &Parameters) -> DerivedContour {
    DerivedContour {
        eps_alpha: spec.epsilon.powf(1.0 / params.beta),
        eps_beta: spec.epsilon.powf(1.0 / params.alpha),
        theta_alpha: spec.theta / params.beta,
        theta_beta: spec.theta / params.alpha,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    OmegaMinus,
    OmegaPlus,
    OnContour,
}

pub fn default_delta_b(point: Complex64) -> f64 {
    1e-9 * point.norm().max(1.0)
}

/// Distance from `point` to γ(ε;θ) on the principal sheet. For θ > π (an
/// image contour in the x- or y-plane) only the circle remains on that sheet.
pub fn distance_to_contour(point: Complex64, epsilon: f64, theta: f64) -> f64 {
    let r = point.norm();
    let phi = principal_arg(point);
    if theta > PI {
        return (r - epsilon).abs();
    }
    let mut d = if phi.abs() <= theta {
        (r - epsilon).abs()
    } else {
        f64::INFINITY
    };
    for s in [-1.0, 1.0] {
        let u = Complex64::from_polar(1.0, s * theta);
        let w = point * u.conj();
        let ray = if w.re >= epsilon {
            w.im.abs()
        } else {
            (point - u * epsilon).norm()
        };
        d = d.min(ray);
    }
    d
}

pub fn classify_region(point: Complex64, contour: ContourSpec, delta_b: f64) -> RegionLabel {
    classify_image(point, contour.epsilon, contour.theta, delta_b)
}

/// Classification against a contour given by raw (ε, θ), allowing θ > π.
pub fn classify_image(point: Complex64, epsilon: f64, theta: f64, delta_b: f64) -> RegionLabel {
    if distance_to_contour(point, epsilon, theta) <= delta_b {
        return RegionLabel::OnContour;
    }
    if principal_arg(point).abs() < theta && point.norm() > epsilon {
        RegionLabel::OmegaPlus
    } else {
        RegionLabel::OmegaMinus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn regimes() {
        let p = validate_params(0.5, 0.8, c(1.0, 0.0)).unwrap();
        assert_eq!(p.regime(), Regime::Standard);
        let p = validate_params(2.0, 0.5, c(1.0, 0.0)).unwrap();
        assert_eq!(p.regime(), Regime::Lemma4);
        assert!(matches!(validate_params(1.5, 1.5, c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(validate_params(2.0, 0.5, c(-1.0, 0.0)).is_err());
        assert!(validate_params(0.0, 0.5, c(1.0, 0.0)).is_err());
        assert!(validate_params(2.5, 0.5, c(1.0, 0.0)).is_err());
        assert!(validate_params(2.0, 1.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn thin_window_flag() {
        assert!(validate_params(1.4, 1.4, c(1.0, 0.0)).unwrap().thin_window());
        assert!(!validate_params(0.5, 0.8, c(1.0, 0.0)).unwrap().thin_window());
    }

    #[test]
    fn derived_examples() {
        let p = validate_params(0.5, 0.5, c(1.0, 0.0)).unwrap();
        let d = derived_contour_params(ContourSpec::new(1.0, PI / 2.0).unwrap(), &p);
        assert_eq!((d.eps_alpha, d.eps_beta), (1.0, 1.0));
        assert!((d.theta_alpha - PI).abs() < 1e-15 && (d.theta_beta - PI).abs() < 1e-15);

        let p = validate_params(0.5, 1.0, c(1.0, 0.0)).unwrap();
        let d = derived_contour_params(ContourSpec::new(0.25, 0.6).unwrap(), &p);
        assert!((d.eps_alpha - 0.25).abs() < 1e-15);
        assert!((d.eps_beta - 0.0625).abs() < 1e-15);
        assert!((d.theta_alpha - 0.6).abs() < 1e-15);
        assert!((d.theta_beta - 1.2).abs() < 1e-15);

        let p = validate_params(1.0, 1.0, c(1.0, 0.0)).unwrap();
        let d = derived_contour_params(ContourSpec::new(1.0, PI).unwrap(), &p);
        assert_eq!((d.eps_alpha, d.eps_beta, d.theta_alpha, d.theta_beta), (1.0, 1.0, PI, PI));
    }

    #[test]
    fn classify_examples() {
        let g = ContourSpec::new(0.5, PI / 2.0).unwrap();
        assert_eq!(classify_region(c(-1.0, 0.0), g, 1e-9), RegionLabel::OmegaMinus);
        assert_eq!(classify_region(c(2.0, 0.0), g, 1e-9), RegionLabel::OmegaPlus);
        assert_eq!(classify_region(c(0.0, 0.5), g, 1e-9), RegionLabel::OnContour);
        assert_eq!(classify_region(c(0.1, 0.0), g, 1e-9), RegionLabel::OmegaMinus);
    }

    #[test]
    fn doubled_ray_at_pi() {
        let g = ContourSpec::new(1.0, PI).unwrap();
        assert_eq!(classify_region(c(-3.0, 0.0), g, 1e-9), RegionLabel::OnContour);
        assert_eq!(classify_region(c(-3.0, 0.1), g, 1e-9), RegionLabel::OmegaPlus);
    }
}
