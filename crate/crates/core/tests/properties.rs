use std::f64::consts::PI;

use ml2v::asymptotics::{expansion_sides, TruncationOrders};
use ml2v::contour::{build_contour, integrate, ContourPoint, IntegrandSpec};
use ml2v::gamma::sin_pi;
use ml2v::params::{classify_image, distance_to_contour};
use ml2v::representations::{coincident_poles, eval_integral_auto};
use ml2v::{
    classify_region, derived_contour_params, eval_double_series, eval_ml_one, recip_gamma,
    validate_params, Complex64, ContourSpec, Parameters, RegionLabel, SeriesBudget,
};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// Below α ≈ 0.4 the terms |x|^n/Γ(αn+μ) at these radii leave the f64 range
// before they start to decay, so plain summation has nothing to compare.
fn params() -> impl Strategy<Value = Parameters> {
    (0.4f64..1.95, 0.4f64..1.95, 0.2f64..3.0, -1.0f64..1.0)
        .prop_filter("alpha*beta < 2", |(a, b, _, _)| a * b < 1.95)
        .prop_map(|(a, b, mr, mi)| validate_params(a, b, c(mr, mi)).unwrap())
}

fn point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn contour() -> impl Strategy<Value = ContourSpec> {
    (0.2f64..4.0, 0.05f64..1.0).prop_map(|(e, t)| ContourSpec::new(e, t * PI).unwrap())
}

fn series(x: Complex64, y: Complex64, p: &Parameters) -> Complex64 {
    eval_double_series(x, y, p, SeriesBudget { tol: TOL, ..SeriesBudget::default() }).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn region_is_conjugate_symmetric(z in point(8.0), spec in contour()) {
        let d = 1e-9;
        prop_assert_eq!(classify_region(z, spec, d), classify_region(z.conj(), spec, d));
    }

    #[test]
    fn shrinking_delta_keeps_sides(z in point(8.0), spec in contour(), d in 1e-9f64..0.5, f in 0.0f64..1.0) {
        let wide = classify_region(z, spec, d);
        let narrow = classify_region(z, spec, d * f);
        if wide != RegionLabel::OnContour {
            prop_assert_eq!(wide, narrow);
        }
        if distance_to_contour(z, spec.epsilon, spec.theta) > d {
            prop_assert_ne!(wide, RegionLabel::OnContour);
        }
    }

    #[test]
    fn image_classification_matches_for_principal_window(z in point(8.0), spec in contour()) {
        prop_assert_eq!(classify_region(z, spec, 1e-9), classify_image(z, spec.epsilon, spec.theta, 1e-9));
    }

    #[test]
    fn derived_radii_round_trip(p in params(), spec in contour()) {
        let d = derived_contour_params(spec, &p);
        let e = spec.epsilon;
        prop_assert!((d.eps_alpha.powf(p.beta()) - e).abs() <= 8.0 * f64::EPSILON * e);
        prop_assert!((d.eps_beta.powf(p.alpha()) - e).abs() <= 8.0 * f64::EPSILON * e);
        prop_assert!((d.theta_alpha * p.beta() - spec.theta).abs() <= 4.0 * f64::EPSILON * spec.theta);
    }

    #[test]
    fn validation_keeps_regimes_apart(a in 0.0f64..2.5, b in 0.0f64..2.5, mr in -3.0f64..3.0) {
        match validate_params(a, b, c(mr, 0.0)) {
            Ok(p) => {
                prop_assert!(a > 0.0 && b > 0.0 && a <= 2.0 && b <= 2.0 && a * b < 2.0);
                prop_assert_eq!(p.alpha(), a);
            }
            Err(e) => {
                prop_assert!(e.is_domain());
                prop_assert!(a <= 0.0 || b <= 0.0 || a > 2.0 || b > 2.0 || a * b >= 2.0);
            }
        }
    }

    #[test]
    fn gamma_reflection(re in -6.0f64..6.0, im in -3.0f64..3.0) {
        let s = c(re, im);
        let sp = sin_pi(s);
        prop_assume!(sp.norm() > 1e-3);
        let lhs = recip_gamma(s) * recip_gamma(1.0 - s);
        let rhs = sp / PI;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0), "s={} lhs={} rhs={}", s, lhs, rhs);
    }

    #[test]
    fn gamma_recurrence(re in -6.0f64..6.0, im in -3.0f64..3.0) {
        let s = c(re, im);
        prop_assume!(s.norm() > 1e-3);
        let lhs = recip_gamma(s);
        let rhs = s * recip_gamma(s + 1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "s={} {} vs {}", s, lhs, rhs);
    }

    #[test]
    fn series_reduces_to_one_variable(p in params(), x in point(3.0)) {
        let two = series(x, c(0.0, 0.0), &p);
        let budget = SeriesBudget { tol: TOL, ..SeriesBudget::default() };
        let one = eval_ml_one(x, p.alpha(), p.mu(), budget).unwrap().value;
        prop_assert!((two - one).norm() <= 2.0 * TOL * one.norm().max(1.0), "{} vs {}", two, one);
    }

    #[test]
    fn series_swap_symmetry(p in params(), x in point(2.5), y in point(2.5)) {
        let u = series(x, y, &p);
        let v = series(y, x, &p.swapped());
        prop_assert!((u - v).norm() <= 2.0 * TOL * u.norm().max(1.0));
    }

    #[test]
    fn series_index_shift(p in params(), x in point(2.0), y in point(2.0)) {
        let (a, b, mu) = (p.alpha(), p.beta(), p.mu());
        let at = |m: Complex64| series(x, y, &p.with_mu(m).unwrap());
        let terms = [at(mu), recip_gamma(mu), x * at(mu + a), y * at(mu + b), x * y * at(mu + a + b)];
        let residual = (terms[0] - terms[1] - terms[2] - terms[3] + terms[4]).norm();
        let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
        prop_assert!(residual <= 4.0 * TOL * scale, "residual {:e}", residual);
    }

    #[test]
    fn series_row_decomposition(p in params(), x in point(1.5), y in point(2.5)) {
        let budget = SeriesBudget { tol: TOL, ..SeriesBudget::default() };
        let mut sum = c(0.0, 0.0);
        let mut scale: f64 = 1.0;
        let mut xn = c(1.0, 0.0);
        for n in 0..200 {
            let row = xn * eval_ml_one(y, p.beta(), p.alpha() * n as f64 + p.mu(), budget).unwrap().value;
            sum += row;
            scale = scale.max(row.norm());
            if n > 10 && row.norm() < 1e-18 * scale {
                break;
            }
            xn *= x;
        }
        let direct = series(x, y, &p);
        prop_assert!((sum - direct).norm() <= 4.0 * TOL * scale, "{} vs {}", sum, direct);
    }

    #[test]
    fn expansion_identity(
        p in params(),
        zeta in (0.2f64..5.0, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t)),
        x in (0.5f64..6.0, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t)),
        y in (0.5f64..6.0, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t)),
        pa in 1usize..=5,
        pb in 1usize..=5,
    ) {
        let orders = TruncationOrders::new(pa, pb).unwrap();
        let (lhs, rhs, scale) = expansion_sides(zeta, x, y, &p, orders);
        prop_assume!(lhs.norm().is_finite() && lhs.norm() < 1e6);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale, "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integral_matches_series(p in params(), x in point(3.5), y in point(3.5)) {
        prop_assume!(!coincident_poles(x, y, &p));
        let i = eval_integral_auto(x, y, &p, 1e-10).unwrap();
        let s = series(x, y, &p);
        prop_assert!((i.value - s).norm() <= 1e-7 * s.norm().max(1.0), "{}: {} vs {}", i.method, i.value, s);
    }

    #[test]
    fn integral_swap_symmetry(p in params(), x in point(3.5), y in point(3.5)) {
        prop_assume!(!coincident_poles(x, y, &p));
        let u = eval_integral_auto(x, y, &p, 1e-10).unwrap();
        let v = eval_integral_auto(y, x, &p.swapped(), 1e-10).unwrap();
        prop_assert!((u.value - v.value).norm() <= 2e-7 * u.value.norm().max(1.0));
    }

    #[test]
    fn deformation_of_a_pole_free_integrand(e1 in 0.3f64..1.0, e2 in 1.2f64..3.0, t in 0.55f64..1.0, s in -2.0f64..3.0) {
        // the Hankel integrand of 1/Γ(s) has no poles, so both contours agree
        let f = IntegrandSpec::new(move |p: &ContourPoint| (p.z - s * p.polar().ln()).exp(), 1.0);
        let tol = 1e-11;
        let q1 = integrate(&build_contour(ContourSpec::new(e1, t * PI).unwrap(), 1.0, 1e-14).unwrap(), &f, tol).unwrap();
        let q2 = integrate(&build_contour(ContourSpec::new(e2, t * PI).unwrap(), 1.0, 1e-14).unwrap(), &f, tol).unwrap();
        prop_assert!((q1.value - q2.value).norm() <= 2.0 * tol * 2.0 * PI);
        // real s gives a conjugate-symmetric integrand: (1/2πi)∮ is real
        prop_assert!((q1.value / c(0.0, 2.0 * PI)).im.abs() <= tol);
    }
}
