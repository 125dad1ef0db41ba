//! Shared workloads for the criterion benches.

use ml2v::{validate_params, Complex64, Parameters};

pub fn params(alpha: f64, beta: f64, mu: f64) -> Parameters {
    validate_params(alpha, beta, Complex64::new(mu, 0.0)).expect("bench parameters are valid")
}

/// Points spread over the regimes the dispatcher distinguishes.
pub fn sample_points() -> Vec<(Complex64, Complex64)> {
    [(0.5, -0.3), (-3.0, -2.5), (3.0, -2.0), (2.0, 3.5), (6.0, 7.0), (-12.0, -9.0)]
        .iter()
        .map(|&(x, y)| (Complex64::new(x, 0.0), Complex64::new(y, 0.0)))
        .collect()
}
