//! Concrete maps, their cycles, and the delayed-feedback recurrence
//!
//! `z_m = a_1 f(z_{m-1}) + a_2 f(z_{m-1-T}) + ... + a_n f(z_{m-1-(n-1)T})`
//!
//! run next to the plain orbit.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::Config;
use crate::duality::{build_chi, AveragingSet};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::find_roots_with;
use crate::schur::schur_test_with;

/// Largest cycle length handled by [`find_cycles`].
pub const MAX_CYCLE_SEARCH: usize = 5;
/// A converged orbit must stay below the tolerance this many periods.
pub const RESIDENCE_PERIODS: usize = 10;
/// Smallest number of log-distances in a rate fit.
pub const MIN_FIT_SAMPLES: usize = 30;
/// Distances below this are round-off and excluded from the rate fit.
pub const NOISE_FLOOR: f64 = 1e-13;
/// `|f^T(s) - s|` accepted for a cycle point, relative to `max(1, |s|)`.
pub const CYCLE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    /// `z^2 + c`.
    QuadraticC { c: Complex64 },
    /// `lambda z (1 - z)`.
    Logistic { lambda: Complex64 },
    /// Ascending coefficients.
    Polynomial { coeffs: Vec<Complex64> },
}

impl MapSpec {
    pub fn quadratic(c: Complex64) -> Self {
        MapSpec::QuadraticC { c }
    }

    pub fn logistic(lambda: Complex64) -> Self {
        MapSpec::Logistic { lambda }
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        match Poly::new(coeffs.clone())?.true_degree() {
            Some(d) if d >= 2 => Ok(MapSpec::Polynomial { coeffs }),
            _ => Err(Error::Precondition("polynomial maps need degree >= 2".into())),
        }
    }

    pub fn poly(&self) -> Poly {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            MapSpec::QuadraticC { c } => Poly::new(vec![*c, zero, one]),
            MapSpec::Logistic { lambda } => Poly::new(vec![zero, *lambda, -*lambda]),
            MapSpec::Polynomial { coeffs } => Poly::new(coeffs.clone()),
        }
        .expect("non-empty")
        .trimmed()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            MapSpec::QuadraticC { c } => z * z + c,
            MapSpec::Logistic { lambda } => lambda * z * (1.0 - z),
            MapSpec::Polynomial { coeffs } => coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            MapSpec::QuadraticC { .. } => 2.0 * z,
            MapSpec::Logistic { lambda } => lambda * (1.0 - 2.0 * z),
            MapSpec::Polynomial { .. } => self.poly().eval_with_derivative(z).1,
        }
    }

    fn iterate(&self, z: Complex64, k: usize) -> Complex64 {
        (0..k).fold(z, |z, _| self.eval(z))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleInfo {
    pub points: Vec<Complex64>,
    /// Minimal period.
    pub period: usize,
    /// `f'(s_1) ... f'(s_T)`.
    pub multiplier: Complex64,
    pub repelling: bool,
}

impl CycleInfo {
    pub fn distance(&self, z: Complex64) -> f64 {
        self.points.iter().map(|s| (z - s).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Every cycle whose minimal period divides `t`, by period and then by the
/// real and imaginary parts of its first point.
pub fn find_cycles(map: &MapSpec, t: usize) -> Result<Vec<CycleInfo>> {
    find_cycles_with(map, t, &Config::default())
}

pub fn find_cycles_with(map: &MapSpec, t: usize, cfg: &Config) -> Result<Vec<CycleInfo>> {
    if t < 1 {
        return Err(Error::InvalidCycleLength(t));
    }
    if t > MAX_CYCLE_SEARCH {
        return Err(Error::Unsupported(format!(
            "cycle search is limited to T <= {MAX_CYCLE_SEARCH}, got {t}"
        )));
    }
    let f = map.poly();
    let iterate = (1..t).fold(f.clone(), |acc, _| f.compose(&acc));
    let g = &iterate - &Poly::z();
    let roots = find_roots_with(&g, cfg)?;

    let mut fixed: Vec<Complex64> = Vec::new();
    for z in roots.clusters.iter().map(|c| c.center) {
        let z = newton_polish(map, t, z);
        if fixed.iter().all(|s| (s - z).norm() > cfg.cluster_radius) {
            fixed.push(z);
        }
    }

    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-8 * a.norm().max(1.0);
    let mut taken = vec![false; fixed.len()];
    let mut cycles = Vec::new();
    for i in 0..fixed.len() {
        if taken[i] {
            continue;
        }
        let s = fixed[i];
        let period = (1..=t)
            .find(|&d| t.is_multiple_of(d) && close(map.iterate(s, d), s))
            .unwrap_or(t);
        let mut points = Vec::with_capacity(period);
        let mut z = s;
        for _ in 0..period {
            for (j, r) in fixed.iter().enumerate() {
                if close(*r, z) {
                    taken[j] = true;
                }
            }
            points.push(z);
            z = map.eval(z);
        }
        let start = (0..period)
            .min_by(|&a, &b| {
                (points[a].re, points[a].im)
                    .partial_cmp(&(points[b].re, points[b].im))
                    .expect("finite")
            })
            .unwrap_or(0);
        points.rotate_left(start);
        let multiplier: Complex64 = points.iter().map(|&s| map.derivative(s)).product();
        cycles.push(CycleInfo {
            points,
            period,
            multiplier,
            repelling: multiplier.norm() > 1.0,
        });
    }
    cycles.sort_by(|a, b| {
        (a.period, a.points[0].re, a.points[0].im)
            .partial_cmp(&(b.period, b.points[0].re, b.points[0].im))
            .expect("finite")
    });
    Ok(cycles)
}

/// Newton on `f^t(z) - z`, evaluated by iteration rather than from the
/// expanded coefficients.
fn newton_polish(map: &MapSpec, t: usize, mut z: Complex64) -> Complex64 {
    let residual = |z: Complex64| {
        let (mut w, mut dw) = (z, Complex64::new(1.0, 0.0));
        for _ in 0..t {
            dw *= map.derivative(w);
            w = map.eval(w);
        }
        (w - z, dw - 1.0)
    };
    for _ in 0..8 {
        let (v, d) = residual(z);
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let next = z - v / d;
        if !next.is_finite() || residual(next).0.norm() >= v.norm() {
            break;
        }
        z = next;
    }
    z
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRecord {
    pub points: Vec<Complex64>,
    /// Distance of each point to the nearest cycle point; empty for an
    /// unmeasured plain orbit.
    pub distances: Vec<f64>,
    pub converged: bool,
    /// First step of the final run below the convergence tolerance.
    pub steps_to_converge: Option<usize>,
    /// `|z| > escape_radius` or a non-finite state was reached.
    pub escaped: bool,
    /// Per-step geometric rate fitted to the distances.
    pub empirical_rate: Option<f64>,
    /// `(max |root of chi_T|)^(1/T)`.
    pub predicted_rate: Option<f64>,
    /// Points generated by plain iteration before the recurrence starts.
    pub seed_len: usize,
    #[serde(skip)]
    cycle: Option<CycleInfo>,
    #[serde(skip)]
    tolerance: f64,
}

impl TrajectoryRecord {
    fn new(points: Vec<Complex64>, escaped: bool, seed_len: usize, cfg: &Config) -> Self {
        TrajectoryRecord {
            points,
            distances: Vec::new(),
            converged: false,
            steps_to_converge: None,
            escaped,
            empirical_rate: None,
            predicted_rate: None,
            seed_len,
            cycle: None,
            tolerance: cfg.convergence_tolerance,
        }
    }

    /// Fills distances, convergence and the rate fit against `cycle`.
    pub fn measure(&mut self, cycle: &CycleInfo) {
        self.distances = self.points.iter().map(|&z| cycle.distance(z)).collect();
        self.cycle = Some(cycle.clone());
        let window = RESIDENCE_PERIODS * cycle.period;
        let below = self.distances.iter().rev().take_while(|&&d| d < self.tolerance).count();
        self.converged = !self.escaped && below >= window;
        self.steps_to_converge = (below > 0).then(|| self.distances.len() - below);
        self.empirical_rate = self.fit().ok();
    }

    /// The first `len` points, measured again.
    pub fn truncated(&self, len: usize) -> TrajectoryRecord {
        let mut out = self.clone();
        out.points.truncate(len);
        out.escaped = self.escaped && len >= self.points.len();
        if let Some(cycle) = &self.cycle {
            out.measure(cycle);
        }
        out
    }

    /// Least squares slope of `log d` over the final third of the
    /// pre-noise window, at least [`MIN_FIT_SAMPLES`] long.
    fn fit(&self) -> Result<f64> {
        let start = self.seed_len.min(self.distances.len());
        let end = self.distances[start..]
            .iter()
            .position(|&d| d <= NOISE_FLOOR)
            .map_or(self.distances.len(), |k| start + k);
        let available = end - start;
        if available < MIN_FIT_SAMPLES {
            return Err(Error::InsufficientTail(available, MIN_FIT_SAMPLES));
        }
        let len = (available / 3).max(MIN_FIT_SAMPLES);
        let xs: Vec<(f64, f64)> = (end - len..end).map(|j| (j as f64, self.distances[j].ln())).collect();
        let n = xs.len() as f64;
        let (mx, my) = xs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
        let (sxy, sxx) = xs
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        Ok((sxy / sxx).exp())
    }
}

/// The uncontrolled orbit `z_0, f(z_0), ...` with `steps + 1` points.
pub fn run_plain(map: &MapSpec, z0: Complex64, steps: usize) -> Result<TrajectoryRecord> {
    run_plain_with(map, z0, steps, &Config::default())
}

pub fn run_plain_with(map: &MapSpec, z0: Complex64, steps: usize, cfg: &Config) -> Result<TrajectoryRecord> {
    if steps < 1 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    let mut points = Vec::with_capacity(steps + 1);
    points.push(z0);
    let mut escaped = escapes(z0, cfg);
    while !escaped && points.len() <= steps {
        let z = map.eval(points[points.len() - 1]);
        points.push(z);
        escaped = escapes(z, cfg);
    }
    Ok(TrajectoryRecord::new(points, escaped, 1, cfg))
}

fn escapes(z: Complex64, cfg: &Config) -> bool {
    !z.is_finite() || z.norm() > cfg.escape_radius
}

/// The delayed-feedback orbit, seeded by `(n-1)T + 1` plain iterates of `z0`.
pub fn run_stabilized(
    map: &MapSpec,
    design: &AveragingSet,
    cycle: &CycleInfo,
    z0: Complex64,
    steps: usize,
) -> Result<TrajectoryRecord> {
    run_stabilized_with(map, design, cycle, z0, steps, &Config::default())
}

pub fn run_stabilized_with(
    map: &MapSpec,
    design: &AveragingSet,
    cycle: &CycleInfo,
    z0: Complex64,
    steps: usize,
    cfg: &Config,
) -> Result<TrajectoryRecord> {
    let t = design.cycle_length();
    if t != cycle.period {
        return Err(Error::PeriodMismatch { period: cycle.period, design: t });
    }
    if steps < 1 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    let a = design.a();
    let seed_len = design.chi_degree();
    let mut points = Vec::with_capacity(steps + 1);
    let mut images = Vec::with_capacity(steps + 1);
    points.push(z0);
    let mut escaped = escapes(z0, cfg);
    while !escaped && points.len() <= steps {
        let m = points.len();
        images.push(map.eval(points[m - 1]));
        let z = if m < seed_len {
            images[m - 1]
        } else {
            let mut z = a[0] * images[m - 1];
            for (k, ak) in a.iter().enumerate().skip(1) {
                z += ak * images[m - 1 - k * t];
            }
            z
        };
        points.push(z);
        escaped = escapes(z, cfg);
    }
    let mut record = TrajectoryRecord::new(points, escaped, seed_len.min(steps + 1), cfg);
    record.predicted_rate = match build_chi(design, cycle.multiplier) {
        Ok(chi) => Some(schur_test_with(&chi, cfg)?.max_modulus.powf(1.0 / t as f64)),
        Err(Error::ZeroMultiplier) => None,
        Err(e) => return Err(e),
    };
    record.measure(cycle);
    Ok(record)
}

/// Empirical rate within 20% of the predicted one.
pub fn rate_check(record: &TrajectoryRecord) -> Result<bool> {
    let empirical = record.fit()?;
    if !record.converged {
        return Err(Error::NotConverged);
    }
    let predicted = record
        .predicted_rate
        .ok_or_else(|| Error::Precondition("record carries no predicted rate".into()))?;
    Ok((empirical - predicted).abs() <= 0.2 * predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn minus_two_design() -> AveragingSet {
        let s3 = 3f64.sqrt();
        AveragingSet::from_real(&[s3 - 1.0, 2.0 - s3], 1).unwrap()
    }

    fn cycle_near(map: &MapSpec, t: usize, z: Complex64) -> CycleInfo {
        find_cycles(map, t)
            .unwrap()
            .into_iter()
            .filter(|cy| cy.period == t)
            .min_by(|a, b| a.distance(z).total_cmp(&b.distance(z)))
            .unwrap()
    }

    #[test]
    fn fixed_points_of_quadratics() {
        let cycles = find_cycles(&MapSpec::quadratic(c(0.0, 0.0)), 1).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles[0].points[0].norm() < 1e-12 && cycles[0].multiplier.norm() < 1e-12);
        assert!((cycles[1].points[0] - 1.0).norm() < 1e-12);
        assert!((cycles[1].multiplier - 2.0).norm() < 1e-12);

        let cycles = find_cycles(&MapSpec::quadratic(c(-2.0, 0.0)), 1).unwrap();
        assert!((cycles[0].points[0] + 1.0).norm() < 1e-12 && (cycles[0].multiplier + 2.0).norm() < 1e-12);
        assert!((cycles[1].points[0] - 2.0).norm() < 1e-12 && (cycles[1].multiplier - 4.0).norm() < 1e-12);
    }

    #[test]
    fn two_cycle_of_basilica() {
        let map = MapSpec::quadratic(c(-1.0, 0.0));
        let cycles = find_cycles(&map, 2).unwrap();
        let two: Vec<_> = cycles.iter().filter(|cy| cy.period == 2).collect();
        assert_eq!(two.len(), 1);
        assert!((two[0].points[0] + 1.0).norm() < 1e-12);
        assert!(two[0].points[1].norm() < 1e-12);
        assert_eq!(cycles.iter().filter(|cy| cy.period == 1).count(), 2);
    }

    #[test]
    fn cycle_invariants() {
        for (map, t) in [
            (MapSpec::quadratic(c(-1.3, 0.1)), 5),
            (MapSpec::logistic(c(3.9, 0.0)), 3),
            (MapSpec::polynomial(vec![c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap(), 2),
        ] {
            let cycles = find_cycles(&map, t).unwrap();
            let d = map.poly().degree();
            assert_eq!(cycles.iter().map(|cy| cy.period).sum::<usize>(), d.pow(t as u32));
            for cy in &cycles {
                assert_eq!(t % cy.period, 0);
                for i in 0..cy.period {
                    let next = cy.points[(i + 1) % cy.period];
                    assert!((map.eval(cy.points[i]) - next).norm() < CYCLE_TOLERANCE * next.norm().max(1.0));
                }
                for d in (1..cy.period).filter(|d| cy.period % d == 0) {
                    assert!((map.iterate(cy.points[0], d) - cy.points[0]).norm() > 1e-8);
                }
            }
        }
        assert!(find_cycles(&MapSpec::quadratic(c(0.0, 0.0)), 6).is_err());
    }

    #[test]
    fn plain_orbits() {
        let map = MapSpec::quadratic(c(0.0, 0.0));
        let r = run_plain(&map, c(1.0, 0.0), 50).unwrap();
        assert!(r.points.iter().all(|&z| z == c(1.0, 0.0)));
        assert_eq!(r.points.len(), 51);
        assert!(run_plain(&map, c(1.01, 0.0), 200).unwrap().escaped);
        let r = run_plain(&map, c(0.5, 0.0), 20).unwrap();
        assert!(r.points.last().unwrap().norm() < 1e-100);
    }

    #[test]
    fn minus_two_converges_at_predicted_rate() {
        let map = MapSpec::quadratic(c(-2.0, 0.0));
        let cycle = cycle_near(&map, 1, c(-1.0, 0.0));
        let r = run_stabilized(&map, &minus_two_design(), &cycle, c(-0.9, 0.0), 500).unwrap();
        assert!(r.converged);
        assert!(r.steps_to_converge.unwrap() <= 500);
        assert!((r.predicted_rate.unwrap() - (3f64.sqrt() - 1.0)).abs() < 1e-6);
        assert!(rate_check(&r).unwrap(), "{:?}", r.empirical_rate);
    }

    #[test]
    fn square_map_converges_at_predicted_rate() {
        let zeta = c(1.0 - 0.5 * 2f64.sqrt(), 0.5 * 2f64.sqrt());
        let a = vec![2.0 * zeta, -3.0 * zeta * zeta, 2.0 * zeta.powu(3), -zeta.powu(4) / 2.0];
        let design = AveragingSet::new(a, 1).unwrap();
        let map = MapSpec::quadratic(c(0.0, 0.0));
        let cycle = cycle_near(&map, 1, c(1.0, 0.0));
        for z0 in [1.002, 0.998] {
            let r = run_stabilized(&map, &design, &cycle, c(z0, 0.0), 1000).unwrap();
            assert!(r.converged, "z0 = {z0}");
            assert!((r.predicted_rate.unwrap() - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-6);
            assert!(rate_check(&r).unwrap(), "{:?}", r.empirical_rate);
        }
        // the quadruple root amplifies the seed transient; 1.02 is outside the basin
        let r = run_stabilized(&map, &design, &cycle, c(1.02, 0.0), 1000).unwrap();
        assert!(r.escaped && !r.converged);
    }

    #[test]
    fn trivial_design_is_the_plain_orbit() {
        let map = MapSpec::quadratic(c(0.0, 0.0));
        let cycle = cycle_near(&map, 1, c(1.0, 0.0));
        let design = AveragingSet::from_real(&[1.0], 1).unwrap();
        for z0 in [c(1.02, 0.0), c(0.3, 0.7), c(-0.99, 0.05)] {
            let s = run_stabilized(&map, &design, &cycle, z0, 300).unwrap();
            let p = run_plain(&map, z0, 300).unwrap();
            for (x, y) in s.points.iter().zip(&p.points) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
        let r = run_stabilized(&map, &design, &cycle, c(1.02, 0.0), 300).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn cycle_is_invariant_under_the_recurrence() {
        let map = MapSpec::quadratic(c(-1.3, 0.0));
        let cycle = cycle_near(&map, 2, c(0.0, 0.0));
        assert!(cycle.repelling);
        let design = AveragingSet::from_real(&[0.6, 0.3, 0.1], 2).unwrap();
        let r = run_stabilized(&map, &design, &cycle, cycle.points[0], 100).unwrap();
        assert!(r.distances.iter().all(|&d| d < 1e-10));
    }

    #[test]
    fn minus_two_local_basin() {
        let map = MapSpec::quadratic(c(-2.0, 0.0));
        let cycle = cycle_near(&map, 1, c(-1.0, 0.0));
        let design = minus_two_design();
        let mut tested = 0;
        for i in 0..8 {
            for j in 0..8 {
                let z0 = c(-1.0 + (i as f64 - 3.5) / 24.0, (j as f64 - 3.5) / 24.0);
                if (z0 + 1.0).norm() >= 1.0 / 6.0 {
                    continue;
                }
                tested += 1;
                let r = run_stabilized(&map, &design, &cycle, z0, 500).unwrap();
                assert!(r.converged, "z0 = {z0}");
            }
        }
        assert!(tested >= 32, "{tested}");
    }

    #[test]
    fn rate_check_errors() {
        let map = MapSpec::quadratic(c(-2.0, 0.0));
        let cycle = cycle_near(&map, 1, c(-1.0, 0.0));
        let r = run_stabilized(&map, &minus_two_design(), &cycle, c(-0.9, 0.0), 500).unwrap();
        assert!(matches!(rate_check(&r.truncated(20)), Err(Error::InsufficientTail(..))));
        assert!(matches!(rate_check(&r.truncated(45)), Err(Error::NotConverged)));
        let plain = MapSpec::quadratic(c(0.0, 0.0));
        let cycle = cycle_near(&plain, 1, c(1.0, 0.0));
        let design = AveragingSet::from_real(&[1.0], 1).unwrap();
        assert!(rate_check(&run_stabilized(&plain, &design, &cycle, c(1.02, 0.0), 300).unwrap()).is_err());
        let wrong = AveragingSet::from_real(&[0.5, 0.5], 2).unwrap();
        assert!(matches!(
            run_stabilized(&plain, &wrong, &cycle, c(1.0, 0.0), 10),
            Err(Error::PeriodMismatch { .. })
        ));
    }
}
