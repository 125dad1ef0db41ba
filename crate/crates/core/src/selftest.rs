//! Invariant suites shared by the `selftest` command and the acceptance run.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::asymptotics::{eval_asymptotic, expansion_sides, TruncationOrders};
use crate::corpus;
use crate::eval::{AsymptoticCase, Method};
use crate::gamma::{recip_gamma, recip_gamma_hankel, sin_pi};
use crate::oracle::oracle_recip_gamma;
use crate::params::{validate_params, ContourSpec, Parameters};
use crate::representations::{
    admissible_contours, contour_integral, default_contour, eval_representation, residue, PoleSource,
};
use crate::series::{eval_double_series, SeriesBudget};

/// Tolerance requested from every evaluation inside the suites.
pub const EVAL_TOL: f64 = 1e-10;
/// Tolerance of the series evaluations in the recurrence and symmetry suites.
pub const SERIES_TOL: f64 = 1e-12;
pub const HANKEL_LIMIT: f64 = 1e-8;
pub const DEFORMATION_LIMIT: f64 = 2e-7;
pub const CROSSING_LIMIT: f64 = 1e-6;
pub const EXPANSION_LIMIT: f64 = 1e-12;
/// Allowed growth of error·t^{2+p} between successive t.
pub const DECAY_FACTOR: f64 = 2.0;
pub const DECAY_T: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

const SEED: u64 = 0x6d6c_3276;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Gamma,
    Contour,
    Recurrence,
    Symmetry,
    Expansion,
    Asymptotic,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Gamma, Suite::Contour, Suite::Recurrence, Suite::Symmetry, Suite::Expansion, Suite::Asymptotic];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Contour => "contour",
            Suite::Recurrence => "recurrence",
            Suite::Symmetry => "symmetry",
            Suite::Expansion => "expansion",
            Suite::Asymptotic => "asymptotic",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one suite. `worst` is the largest residual divided by its limit,
/// so anything above 1 is a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failures: usize,
    pub worst: f64,
    /// (family, checks, worst residual/limit) per kind of check
    pub families: Vec<(&'static str, usize, f64)>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, checks: 0, failures: 0, worst: 0.0, families: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failures == 0
    }

    pub fn family(&self, name: &str) -> Option<(usize, f64)> {
        self.families.iter().find(|f| f.0 == name).map(|f| (f.1, f.2))
    }

    fn tally(&mut self, family: &'static str, ratio: f64) {
        self.checks += 1;
        self.worst = self.worst.max(ratio);
        match self.families.iter_mut().find(|f| f.0 == family) {
            Some(f) => {
                f.1 += 1;
                f.2 = f.2.max(ratio);
            }
            None => self.families.push((family, 1, ratio)),
        }
    }

    fn check(&mut self, family: &'static str, residual: f64, limit: f64, what: impl FnOnce() -> String) {
        let ratio = if residual.is_nan() { f64::INFINITY } else { residual / limit };
        self.tally(family, ratio);
        if !(ratio <= 1.0) {
            self.fail(format!("{}: residual {residual:.3e} > {limit:.1e}", what()));
        }
    }

    fn fail(&mut self, note: String) {
        self.failures += 1;
        if self.notes.len() < 8 {
            self.notes.push(note);
        }
    }

    fn error(&mut self, family: &'static str, what: String) {
        self.tally(family, f64::INFINITY);
        self.fail(what);
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    match suite {
        Suite::Gamma => gamma_suite(),
        Suite::Contour => contour_suite(),
        Suite::Recurrence => recurrence_suite(),
        Suite::Symmetry => symmetry_suite(),
        Suite::Expansion => expansion_suite(),
        Suite::Asymptotic => asymptotic_suite(),
    }
}

pub fn run_all() -> Vec<SuiteReport> {
    Suite::ALL.into_iter().map(run_suite).collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 5×4 grid with Re s ∈ [−3, 4] and Im s ∈ [−2, 2].
pub fn gamma_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..4 {
            out.push(c(-3.0 + 7.0 * i as f64 / 4.0, -2.0 + 4.0 * j as f64 / 3.0));
        }
    }
    out
}

/// Parameter sets of the cross-method grid.
pub const GRID_PARAMS: [(f64, f64, Complex64); 3] =
    [(0.5, 0.8, Complex64::new(1.0, 0.0)), (1.2, 0.9, Complex64::new(1.0, 0.0)), (0.7, 0.7, Complex64::new(0.5, 0.3))];

/// Points of the cross-method grid: the real 5×5 lattice on [−4, 4]² plus
/// every pair of the four complex corners 2√2(±1 ± i), which have modulus 4.
pub fn cross_method_grid() -> Vec<(Complex64, Complex64)> {
    let axis = [-4.0, -2.0, 0.0, 2.0, 4.0];
    let mut out = Vec::new();
    for &x in &axis {
        for &y in &axis {
            out.push((c(x, 0.0), c(y, 0.0)));
        }
    }
    let r = 2.0 * SQRT_2;
    let corners = [c(r, r), c(-r, r), c(-r, -r), c(r, -r)];
    for &x in &corners {
        for &y in &corners {
            out.push((x, y));
        }
    }
    out
}

pub fn grid_parameters() -> Vec<Parameters> {
    GRID_PARAMS.iter().map(|&(a, b, mu)| validate_params(a, b, mu).expect("grid parameters are valid")).collect()
}

fn gamma_suite() -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Gamma);
    let hankel = ContourSpec::new(1.0, 0.75 * PI).expect("valid contour");
    for s in gamma_grid() {
        let want = recip_gamma(s);
        match recip_gamma_hankel(s, hankel, 1e-10) {
            Ok(got) => r.check("hankel", (got - want).norm(), HANKEL_LIMIT, || format!("hankel s={s}")),
            Err(e) => r.error("hankel", format!("hankel s={s}: {e}")),
        }
        // reflection 1/(Γ(s)Γ(1−s)) = sin(πs)/π
        let lhs = want * recip_gamma(1.0 - s);
        let rhs = sin_pi(s) / PI;
        r.check("reflection", (lhs - rhs).norm(), 1e-12 * rhs.norm().max(1.0), || format!("reflection s={s}"));
        // 1/Γ(s) = s/Γ(s+1)
        let shifted = s * recip_gamma(s + 1.0);
        r.check("recurrence", (want - shifted).norm(), 1e-12 * want.norm().max(1.0), || format!("recurrence s={s}"));
    }
    for s in [c(0.5, 0.0), c(-2.5, 1.0), c(3.7, -1.9), c(12.0, 5.0)] {
        match oracle_recip_gamma(s, 30) {
            Ok(o) => {
                let want = o.to_complex();
                r.check("oracle", (recip_gamma(s) - want).norm(), 1e-13 * want.norm().max(1.0), || format!("oracle s={s}"));
            }
            Err(e) => r.error("oracle", format!("oracle s={s}: {e}")),
        }
    }
    r
}

fn pole_set(x: Complex64, y: Complex64, params: &Parameters, spec: ContourSpec) -> Vec<(PoleSource, i32)> {
    let mut v: Vec<(PoleSource, i32)> = crate::representations::residue_terms(x, y, params, spec)
        .map(|t| t.iter().map(|r| (r.source, r.sheet)).collect())
        .unwrap_or_default();
    v.sort_by_key(|&(s, k)| (s == PoleSource::YPole, k));
    v
}

fn far_apart(a: ContourSpec, b: ContourSpec) -> f64 {
    (a.theta - b.theta).abs() + (a.epsilon / b.epsilon).ln().abs()
}

fn contour_suite() -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Contour);
    let mut crossings = 0;
    for params in grid_parameters() {
        for (x, y) in cross_method_grid() {
            let Some(base) = default_contour(x, y, &params) else {
                r.error("deformation", format!("no contour for x={x}, y={y}"));
                continue;
            };
            let base_set = pole_set(x, y, &params, base.spec);
            let candidates = admissible_contours(x, y, &params, 0.05);

            // same residues, different contour: the full values must agree
            let other = candidates
                .iter()
                .filter(|ch| pole_set(x, y, &params, ch.spec) == base_set)
                .max_by(|a, b| far_apart(a.spec, base.spec).total_cmp(&far_apart(b.spec, base.spec)))
                .filter(|ch| far_apart(ch.spec, base.spec) > 0.05);
            if let Some(other) = other {
                let a = eval_representation(x, y, &params, base.spec, EVAL_TOL);
                let b = eval_representation(x, y, &params, other.spec, EVAL_TOL);
                match (a, b) {
                    (Ok(a), Ok(b)) => r.check(
                        "deformation",
                        (a.evaluation.value - b.evaluation.value).norm(),
                        DEFORMATION_LIMIT,
                        || format!("deformation x={x}, y={y}, {:?} vs {:?}", base.spec, other.spec),
                    ),
                    (Err(e), _) | (_, Err(e)) => r.error("deformation", format!("deformation x={x}, y={y}: {e}")),
                }
            }

            // one y pole changes side: the integrals differ by its residue
            let crossing = candidates.iter().find_map(|ch| {
                let set = pole_set(x, y, &params, ch.spec);
                let (big, small, sign) = if set.len() == base_set.len() + 1 {
                    (&set, &base_set, 1.0)
                } else if set.len() + 1 == base_set.len() {
                    (&base_set, &set, -1.0)
                } else {
                    return None;
                };
                let extra: Vec<_> = big.iter().filter(|p| !small.contains(p)).collect();
                (extra.len() == 1 && extra[0].0 == PoleSource::YPole && small.iter().all(|p| big.contains(p)))
                    .then(|| (ch.spec, extra[0].1, sign))
            });
            if let Some((spec, sheet, sign)) = crossing {
                crossings += 1;
                let a = contour_integral(x, y, &params, base.spec, EVAL_TOL);
                let b = contour_integral(x, y, &params, spec, EVAL_TOL);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        // E = R_base + I_base = R_other + I_other
                        let res = residue(x, y, &params, PoleSource::YPole, sheet);
                        let jump = sign * (a.0 - b.0);
                        r.check("crossing", (jump - res).norm(), CROSSING_LIMIT, || {
                            format!("crossing x={x}, y={y}, sheet {sheet}")
                        });
                    }
                    (Err(e), _) | (_, Err(e)) => r.error("crossing", format!("crossing x={x}, y={y}: {e}")),
                }
            }
        }
    }
    if crossings == 0 {
        r.error("crossing", "no pole crossing found on the grid".into());
    }
    r
}

fn random_params(rng: &mut StdRng) -> Parameters {
    loop {
        let a = rng.random_range(0.4..1.6);
        let b = rng.random_range(0.4..1.6);
        let mu_im = if rng.random_bool(0.5) { rng.random_range(-1.0..1.0) } else { 0.0 };
        let mu = c(rng.random_range(0.2..3.0), mu_im);
        if let Ok(p) = validate_params(a, b, mu) {
            return p;
        }
    }
}

fn random_point(rng: &mut StdRng, rmax: f64) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.0..rmax), rng.random_range(-PI..PI))
}

fn series_at(x: Complex64, y: Complex64, params: &Parameters) -> crate::error::Result<Complex64> {
    let budget = SeriesBudget::new(SERIES_TOL, SeriesBudget::default().max_terms)?;
    Ok(eval_double_series(x, y, params, budget)?.value)
}

fn recurrence_suite() -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Recurrence);
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let (x, y) = (random_point(&mut rng, 2.0), random_point(&mut rng, 2.0));
        let (a, b, mu) = (p.alpha(), p.beta(), p.mu());
        let shifted = |m: Complex64| p.with_mu(m).and_then(|q| series_at(x, y, &q));
        let vals = (series_at(x, y, &p), shifted(mu + a), shifted(mu + b), shifted(mu + a + b));
        let (Ok(e), Ok(ea), Ok(eb), Ok(eab)) = vals else {
            r.error("recurrence", format!("recurrence evaluation failed at x={x}, y={y}"));
            continue;
        };
        let terms = [e, recip_gamma(mu), x * ea, y * eb, x * y * eab];
        let residual = (terms[0] - terms[1] - terms[2] - terms[3] + terms[4]).norm();
        let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
        r.check("recurrence", residual, 4.0 * SERIES_TOL * scale, || {
            format!("recurrence x={x}, y={y}, alpha={a}, beta={b}, mu={mu}")
        });
    }
    r
}

fn symmetry_suite() -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Symmetry);
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let (x, y) = (random_point(&mut rng, 2.0), random_point(&mut rng, 2.0));
        match (series_at(x, y, &p), series_at(y, x, &p.swapped())) {
            (Ok(u), Ok(v)) => r.check("symmetry", (u - v).norm(), 2.0 * SERIES_TOL * u.norm().max(1.0), || {
                format!("symmetry x={x}, y={y}, alpha={}, beta={}", p.alpha(), p.beta())
            }),
            _ => r.error("symmetry", format!("symmetry evaluation failed at x={x}, y={y}")),
        }
    }
    r
}

fn expansion_suite() -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Expansion);
    let mut rng = StdRng::seed_from_u64(SEED ^ 2);
    let mut done = 0;
    while done < 100 {
        let p = random_params(&mut rng);
        let zeta = Complex64::from_polar(rng.random_range(0.2..5.0), rng.random_range(-PI..PI));
        let x = Complex64::from_polar(rng.random_range(0.5..6.0), rng.random_range(-PI..PI));
        let y = Complex64::from_polar(rng.random_range(0.5..6.0), rng.random_range(-PI..PI));
        let orders = TruncationOrders { p_alpha: rng.random_range(1..=4), p_beta: rng.random_range(1..=4) };
        let (lhs, rhs, scale) = expansion_sides(zeta, x, y, &p, orders);
        if !(lhs.norm().is_finite() && lhs.norm() < 1e6) {
            continue;
        }
        done += 1;
        r.check("expansion", (lhs - rhs).norm() / scale, EXPANSION_LIMIT, || {
            format!("expansion zeta={zeta}, x={x}, y={y}, orders {orders:?}")
        });
    }
    r
}

/// error·t^{2+p} of the expansion along x = y = −t, for α = β = 1/2, μ = 1,
/// against the frozen oracle values.
pub fn decay_profile(p: usize) -> crate::error::Result<Vec<(f64, f64, Method)>> {
    let entries = corpus::frozen()?;
    let params = validate_params(0.5, 0.5, c(1.0, 0.0))?;
    let tau1 = params.theta_window().1;
    let orders = TruncationOrders::uniform(p)?;
    DECAY_T
        .iter()
        .map(|&t| {
            let label = format!("decay-t{t}");
            let entry = corpus::find(&entries, &label)
                .ok_or_else(|| crate::error::Error::Domain(format!("corpus entry {label} missing")))?;
            let ev = eval_asymptotic(c(-t, 0.0), c(-t, 0.0), &params, orders, tau1)?;
            let err = (ev.value - entry.value()).norm();
            Ok((t, err * t.powi(2 + p as i32), ev.method))
        })
        .collect()
}

fn asymptotic_suite() -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Asymptotic);
    for p in 1..=3 {
        let profile = match decay_profile(p) {
            Ok(v) => v,
            Err(e) => {
                r.error("decay", format!("p={p}: {e}"));
                continue;
            }
        };
        for (t, _, m) in &profile {
            if *m != Method::Asymptotic(AsymptoticCase::Case4) {
                r.error("case", format!("p={p}, t={t}: expected case 4, got {m}"));
            }
        }
        for w in profile.windows(2) {
            let (t0, g0, _) = w[0];
            let (t1, g1, _) = w[1];
            // scaled error may only grow by the allowed factor
            r.check("decay", g1, DECAY_FACTOR * g0, || format!("decay p={p}, t {t0} -> {t1} ({g0:.3e} -> {g1:.3e})"));
        }
    }
    r
}
