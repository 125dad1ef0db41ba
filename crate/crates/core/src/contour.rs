//! The Hankel contour γ(ε;θ): an in-ray at angle -θ from R down to ε, the
//! arc of radius ε from -θ to θ, and an out-ray at angle θ from ε to R.
//! Integration uses adaptive 15-point Gauss-Kronrod panels; rays start on
//! geometrically graded panels [ε·2^j, ε·2^{j+1}].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{distance_to_contour, ContourSpec};
use crate::polar::Polar;
use crate::sum::ComplexSum;

pub const DEFAULT_NODE_BUDGET: usize = 200_000;
pub const NODE_BUDGET_ENV: &str = "ML2V_NODE_BUDGET";
/// When set, replaces the tolerance passed to [`integrate`].
pub const QUAD_TOL_ENV: &str = "ML2V_QUAD_TOL";

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SegmentKind {
    InRay,
    Arc,
    OutRay,
}

/// A point on the contour with the argument it carries on the contour, which
/// for θ = π distinguishes the two passes along the negative axis.
#[derive(Debug, Clone, Copy)]
pub struct ContourPoint {
    pub z: Complex64,
    pub r: f64,
    pub arg: f64,
}

impl ContourPoint {
    pub fn polar(&self) -> Polar {
        Polar::new(self.r, self.arg)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone)]
pub struct DiscretizedContour {
    pub spec: ContourSpec,
    pub truncation_radius: f64,
    pub decay_exponent: f64,
    pub segments: Vec<Segment>,
    breaks_ray: Vec<f64>,
    breaks_arc: Vec<f64>,
}

pub fn build_contour(spec: ContourSpec, decay: f64, trunc_tol: f64) -> Result<DiscretizedContour> {
    let c = (spec.theta * decay).cos();
    if !(c < -1e-9) {
        return Err(Error::Geometry(format!(
            "cos(theta*decay) = {c:.3e} is not negative; the integrand does not decay on the rays"
        )));
    }
    let trunc_tol = tol_override().unwrap_or(trunc_tol);
    let eps = spec.epsilon;
    let log_tol = (1.0 / trunc_tol.clamp(1e-300, 0.5)).ln();
    let radius = (log_tol / -c).powf(1.0 / decay).max(2.0 * eps);
    if !radius.is_finite() {
        return Err(Error::Geometry("truncation radius is not finite".into()));
    }
    let mut breaks_ray = vec![eps];
    let mut t = eps;
    while t < radius {
        t = (2.0 * t).min(radius);
        breaks_ray.push(t);
    }
    let theta = spec.theta;
    let n_arc = ((theta * (1.0 + decay)) / (PI / 4.0)).ceil().max(2.0) as usize;
    let breaks_arc = (0..=n_arc)
        .map(|i| -theta + 2.0 * theta * i as f64 / n_arc as f64)
        .collect();
    Ok(DiscretizedContour {
        spec,
        truncation_radius: radius,
        decay_exponent: decay,
        segments: vec![
            Segment { kind: SegmentKind::InRay, start: radius, end: eps },
            Segment { kind: SegmentKind::Arc, start: -theta, end: theta },
            Segment { kind: SegmentKind::OutRay, start: eps, end: radius },
        ],
        breaks_ray,
        breaks_arc,
    })
}

impl DiscretizedContour {
    /// Contour point and dζ/dt (including orientation) at parameter t.
    fn point(&self, kind: SegmentKind, t: f64) -> (ContourPoint, Complex64) {
        let th = self.spec.theta;
        match kind {
            SegmentKind::InRay => {
                let u = Complex64::from_polar(1.0, -th);
                (ContourPoint { z: u * t, r: t, arg: -th }, -u)
            }
            SegmentKind::OutRay => {
                let u = Complex64::from_polar(1.0, th);
                (ContourPoint { z: u * t, r: t, arg: th }, u)
            }
            SegmentKind::Arc => {
                let eps = self.spec.epsilon;
                let z = Complex64::from_polar(eps, t);
                (ContourPoint { z, r: eps, arg: t }, Complex64::i() * z)
            }
        }
    }

    /// Minimum distance from `p` to the contour.
    pub fn distance(&self, p: Complex64) -> f64 {
        distance_to_contour(p, self.spec.epsilon, self.spec.theta)
    }
}

/// An integrand together with the poles the caller knows about.
pub struct IntegrandSpec<F> {
    pub f: F,
    pub decay: f64,
    pub poles: Vec<Complex64>,
    pub pole_floor: f64,
}

impl<F: Fn(&ContourPoint) -> Complex64> IntegrandSpec<F> {
    pub fn new(f: F, decay: f64) -> Self {
        IntegrandSpec { f, decay, poles: Vec::new(), pole_floor: 0.0 }
    }

    pub fn with_poles(mut self, poles: Vec<Complex64>, floor: f64) -> Self {
        self.poles = poles;
        self.pole_floor = floor;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub est_error: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    kind: SegmentKind,
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    at_floor: bool,
}

impl Panel {
    fn order_key(&self) -> (SegmentKind, f64) {
        match self.kind {
            SegmentKind::InRay => (self.kind, -self.a),
            _ => (self.kind, self.a),
        }
    }
}

struct HeapEntry(f64, usize);

impl PartialEq for HeapEntry {
    fn eq(&self, o: &Self) -> bool {
        self.0.total_cmp(&o.0) == Ordering::Equal && self.1 == o.1
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then_with(|| o.1.cmp(&self.1))
    }
}

fn gauss_kronrod<F: Fn(&ContourPoint) -> Complex64>(
    contour: &DiscretizedContour,
    f: &F,
    kind: SegmentKind,
    a: f64,
    b: f64,
) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let g = |t: f64| {
        let (p, dz) = contour.point(kind, t);
        let v = f(&p) * dz;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    fv[7] = g(center);
    for j in 0..7 {
        let dx = half * XGK[j];
        fv[j] = g(center - dx);
        fv[14 - j] = g(center + dx);
    }
    let mut resk = fv[7] * WGK[7];
    let mut resg = fv[7] * WG[3];
    let mut resabs = fv[7].norm() * WGK[7];
    for j in 0..7 {
        let pair = fv[j] + fv[14 - j];
        resk += pair * WGK[j];
        resabs += (fv[j].norm() + fv[14 - j].norm()) * WGK[j];
        if j % 2 == 1 {
            resg += pair * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fv[7] - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    let h = half.abs();
    let value = resk * half;
    resabs *= h;
    resasc *= h;
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    let at_floor = err <= floor;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        err = f64::INFINITY;
    }
    Panel { kind, a, b, value, err, at_floor }
}

pub fn node_budget() -> usize {
    std::env::var(NODE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 15)
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

fn tol_override() -> Option<f64> {
    std::env::var(QUAD_TOL_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|t| *t > 0.0)
}

/// ∮ f(ζ) dζ along the oriented contour (no 1/(2πi) factor).
pub fn integrate<F: Fn(&ContourPoint) -> Complex64>(
    contour: &DiscretizedContour,
    spec: &IntegrandSpec<F>,
    tol: f64,
) -> Result<Quadrature> {
    let tol = tol_override().unwrap_or(tol);
    for &p in &spec.poles {
        let d = contour.distance(p);
        if d < spec.pole_floor {
            return Err(Error::PoleProximity { distance: d, floor: spec.pole_floor });
        }
    }
    let f = &spec.f;
    let budget = node_budget();

    // Extend the rays while the integrand at the truncation radius is not negligible.
    let mut ray_breaks = contour.breaks_ray.clone();
    let mut radius = *ray_breaks.last().unwrap();
    let mut tail = 0.0;
    for _ in 0..64 {
        tail = [SegmentKind::InRay, SegmentKind::OutRay]
            .iter()
            .map(|&k| f(&contour.point(k, radius).0).norm() * radius)
            .fold(0.0, f64::max);
        if tail.is_nan() || tail <= 1e-3 * tol {
            break;
        }
        radius *= 2.0;
        ray_breaks.push(radius);
    }
    if tail.is_nan() {
        tail = f64::INFINITY;
    }

    let mut panels: Vec<Panel> = Vec::new();
    for kind in [SegmentKind::InRay, SegmentKind::OutRay] {
        for w in ray_breaks.windows(2) {
            panels.push(gauss_kronrod(contour, f, kind, w[0], w[1]));
        }
    }
    for w in contour.breaks_arc.windows(2) {
        panels.push(gauss_kronrod(contour, f, SegmentKind::Arc, w[0], w[1]));
    }
    let mut nodes = 15 * panels.len();
    let mut heap: BinaryHeap<HeapEntry> = panels
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.at_floor)
        .map(|(i, p)| HeapEntry(p.err, i))
        .collect();
    let total = |ps: &[Panel]| ps.iter().map(|p| p.err).sum::<f64>();
    let mut err_sum = total(&panels);
    let mut iter = 0usize;
    while err_sum > tol || err_sum.is_nan() {
        let Some(HeapEntry(_, idx)) = heap.pop() else {
            break;
        };
        if nodes + 30 > budget {
            return Err(Error::Quadrature { estimate: err_sum, tol, nodes });
        }
        let p = panels[idx];
        let mid = 0.5 * (p.a + p.b);
        if mid == p.a || mid == p.b {
            continue;
        }
        let left = gauss_kronrod(contour, f, p.kind, p.a, mid);
        let right = gauss_kronrod(contour, f, p.kind, mid, p.b);
        nodes += 30;
        err_sum += left.err + right.err - p.err;
        panels[idx] = left;
        panels.push(right);
        if !left.at_floor {
            heap.push(HeapEntry(left.err, idx));
        }
        if !right.at_floor {
            heap.push(HeapEntry(right.err, panels.len() - 1));
        }
        iter += 1;
        if iter % 64 == 0 {
            err_sum = total(&panels);
        }
    }
    err_sum = total(&panels);
    if err_sum.is_nan() || !err_sum.is_finite() {
        return Err(Error::Quadrature { estimate: f64::INFINITY, tol, nodes });
    }
    panels.sort_by(|p, q| {
        let (ka, ta) = p.order_key();
        let (kb, tb) = q.order_key();
        ka.cmp(&kb).then(ta.total_cmp(&tb))
    });
    let mut acc = ComplexSum::default();
    for p in &panels {
        acc.add(p.value);
    }
    Ok(Quadrature { value: acc.value(), est_error: err_sum + tail, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::recip_gamma;

    fn hankel(s: f64) -> IntegrandSpec<impl Fn(&ContourPoint) -> Complex64> {
        IntegrandSpec::new(
            move |p: &ContourPoint| (p.z - p.polar().ln() * s).exp(),
            1.0,
        )
    }

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * (WG[0] + WG[1] + WG[2]) + WG[3];
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_radius_example() {
        let c = build_contour(ContourSpec::new(1.0, 0.75 * PI).unwrap(), 1.0, 1e-16).unwrap();
        assert!((c.truncation_radius - 52.1).abs() < 0.05, "{}", c.truncation_radius);
    }

    #[test]
    fn zero_decay_is_rejected() {
        let spec = ContourSpec::new(1.0, PI / 2.0).unwrap();
        assert!(matches!(build_contour(spec, 1.0, 1e-16), Err(Error::Geometry(_))));
    }

    #[test]
    fn full_circle_at_pi() {
        let c = build_contour(ContourSpec::new(1.0, PI).unwrap(), 1.0, 1e-16).unwrap();
        assert!(c.truncation_radius.is_finite());
        let q = integrate(&c, &hankel(1.0), 1e-12).unwrap();
        let want = Complex64::new(0.0, 2.0 * PI);
        assert!((q.value - want).norm() < 1e-11);
    }

    #[test]
    fn hankel_value_at_one() {
        let c = build_contour(ContourSpec::new(1.0, 0.75 * PI).unwrap(), 1.0, 1e-16).unwrap();
        let q = integrate(&c, &hankel(1.0), 1e-12).unwrap();
        assert!((q.value - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-11, "{:?}", q);
    }

    #[test]
    fn hankel_value_at_two_and_a_half() {
        let c = build_contour(ContourSpec::new(1.0, 0.75 * PI).unwrap(), 1.0, 1e-16).unwrap();
        let q = integrate(&c, &hankel(2.5), 1e-12).unwrap();
        let want = Complex64::new(0.0, 2.0 * PI) * recip_gamma(Complex64::new(2.5, 0.0));
        assert!((q.value - want).norm() < 1e-11);
    }

    #[test]
    fn constant_integrand_cancels_between_contours() {
        // ∮ dζ over the closed difference of two contours vanishes; each open
        // contour integrates the decaying entire function e^ζ to zero.
        let f = IntegrandSpec::new(|p: &ContourPoint| p.z.exp(), 1.0);
        for eps in [0.5, 2.0] {
            let c = build_contour(ContourSpec::new(eps, 0.75 * PI).unwrap(), 1.0, 1e-16).unwrap();
            assert!(integrate(&c, &f, 1e-12).unwrap().value.norm() < 1e-11);
        }
    }

    #[test]
    fn pole_floor_is_enforced() {
        let c = build_contour(ContourSpec::new(1.0, 0.75 * PI).unwrap(), 1.0, 1e-16).unwrap();
        let f = hankel(1.0).with_poles(vec![Complex64::new(1.0 + 1e-5, 0.0)], 1e-3);
        assert!(matches!(integrate(&c, &f, 1e-10), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn conjugate_symmetric_integrand_gives_real_quotient() {
        let c = build_contour(ContourSpec::new(0.7, 0.8 * PI).unwrap(), 1.0, 1e-16).unwrap();
        let q = integrate(&c, &hankel(1.7), 1e-12).unwrap();
        let v = q.value / Complex64::new(0.0, 2.0 * PI);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn halving_panels_reduces_error_by_rule_order() {
        let c = build_contour(ContourSpec::new(6.0, 0.75 * PI).unwrap(), 1.0, 1e-16).unwrap();
        let f = |p: &ContourPoint| (p.z - p.polar().ln() * 1.3).exp();
        let run = |n: usize| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let a = -2.0 + 4.0 * i as f64 / n as f64;
                let b = -2.0 + 4.0 * (i + 1) as f64 / n as f64;
                acc += gauss_kronrod(&c, &f, SegmentKind::Arc, a, b).value;
            }
            acc
        };
        let exact = run(64);
        let e1 = (run(1) - exact).norm();
        let e2 = (run(2) - exact).norm();
        assert!(e1 > 1e-9, "{e1}");
        assert!(e2 * 2f64.powi(15) <= e1, "{e1} {e2}");
    }
}
