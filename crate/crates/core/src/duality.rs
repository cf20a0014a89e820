//! Designs, their characteristic polynomials, and the range-omission side of
//! the stability question.
//!
//! For a design `a_1..a_n` and cycle length `T`:
//!
//! * `p(z) = a_n + a_{n-1} z + ... + a_1 z^{n-1}` (coefficients reversed),
//! * `chi_T(z) = z^{(n-1)T+1} - mu p(z)^T`,
//! * `p*(z) = a_1 + a_2 z + ... + a_n z^{n-1}`,
//! * `q(z) = z p*(z)^T` and `q_root(z) = z p*(z^T)`.
//!
//! `chi_T` is Schur stable exactly when `q` omits `1/mu` on the closed unit
//! disk, equivalently when `q_root` omits every `T`-th root of `1/mu`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{n_inverse, t_root_transform, Poly};
use crate::schur::{schur_test_with, SchurVerdict};

/// Tolerance on `sum a_k = 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Averaging coefficients `a_1..a_n` for cycle length `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAveragingSet")]
pub struct AveragingSet {
    a: Vec<Complex64>,
    #[serde(rename = "T")]
    t: usize,
}

#[derive(Deserialize)]
struct RawAveragingSet {
    a: Vec<Complex64>,
    #[serde(rename = "T")]
    t: usize,
}

impl TryFrom<RawAveragingSet> for AveragingSet {
    type Error = Error;
    fn try_from(raw: RawAveragingSet) -> Result<Self> {
        AveragingSet::new(raw.a, raw.t)
    }
}

impl AveragingSet {
    pub fn new(a: Vec<Complex64>, t: usize) -> Result<Self> {
        if t < 1 {
            return Err(Error::InvalidCycleLength(t));
        }
        let Some(&a1) = a.first() else {
            return Err(Error::InvalidDesign("no coefficients".into()));
        };
        if a1 == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidDesign("a_1 must be nonzero".into()));
        }
        if a.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidDesign("non-finite coefficient".into()));
        }
        let sum: Complex64 = a.iter().sum();
        if (sum - 1.0).norm() > SUM_TOLERANCE {
            return Err(Error::InvalidDesign(format!(
                "coefficients sum to {sum}, expected 1"
            )));
        }
        Ok(AveragingSet { a, t })
    }

    /// Real coefficients.
    pub fn from_real(a: &[f64], t: usize) -> Result<Self> {
        Self::new(a.iter().map(|&x| Complex64::new(x, 0.0)).collect(), t)
    }

    /// Divides `a` by its sum first.
    pub fn normalized(a: Vec<Complex64>, t: usize) -> Result<Self> {
        let sum: Complex64 = a.iter().sum();
        if sum.norm() == 0.0 {
            return Err(Error::InvalidDesign("coefficients sum to zero".into()));
        }
        Self::new(a.into_iter().map(|c| c / sum).collect(), t)
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn cycle_length(&self) -> usize {
        self.t
    }

    pub fn with_cycle_length(&self, t: usize) -> Result<Self> {
        Self::new(self.a.clone(), t)
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().all(|c| c.im == 0.0)
    }

    /// `p(z) = a_n + a_{n-1} z + ... + a_1 z^{n-1}`.
    pub fn p(&self) -> Poly {
        Poly::new(self.a.iter().rev().copied().collect()).expect("non-empty")
    }

    /// `p*(z) = a_1 + a_2 z + ... + a_n z^{n-1}`.
    pub fn p_star(&self) -> Poly {
        Poly::new(self.a.clone()).expect("non-empty")
    }

    /// Degree `(n-1)T + 1` of the characteristic polynomial.
    pub fn chi_degree(&self) -> usize {
        (self.order() - 1) * self.t + 1
    }
}

/// `chi_T(z) = z^{(n-1)T+1} - mu p(z)^T`.
pub fn build_chi(design: &AveragingSet, mu: Complex64) -> Result<Poly> {
    if mu == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroMultiplier);
    }
    let lead = Poly::monomial(Complex64::new(1.0, 0.0), design.chi_degree());
    let feedback = design.p().pow(design.cycle_length()).scale(mu);
    Ok(&lead - &feedback)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityBundle {
    pub p: Poly,
    pub p_star: Poly,
    pub q: Poly,
    pub q_root: Poly,
}

pub fn build_duality(design: &AveragingSet) -> DualityBundle {
    let p = design.p();
    let p_star = n_inverse(&p, design.order() - 1).expect("degree of p is n - 1");
    let q = p_star.pow(design.cycle_length()).shift(1);
    let q_root = t_root_transform(&p_star, design.cycle_length()).expect("T >= 1");
    DualityBundle { p, p_star, q, q_root }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmissionVerdict {
    pub omitted: bool,
    /// Smallest sampled `|q(z) - w|` on the unit circle.
    pub min_boundary_distance: f64,
    /// Lower bound on the true boundary distance: distance to the sampled
    /// polygon minus the interpolation allowance between samples.
    pub certified_clearance: f64,
    /// Zeros of `q - w` in the unit disk, by the argument principle.
    pub winding_zero_count: i64,
    pub samples_used: usize,
    /// `w` is too close to the boundary image to decide.
    pub indeterminate: bool,
}

pub fn omission_test(q: &Poly, w: Complex64) -> Result<OmissionVerdict> {
    omission_test_with(q, w, &Config::default())
}

/// Decides `w` outside `q(closed unit disk)` for `q(0) = 0`.
pub fn omission_test_with(q: &Poly, w: Complex64, cfg: &Config) -> Result<OmissionVerdict> {
    if q.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("omission test needs q(0) = 0".into()));
    }
    // bound on |d^2/dtheta^2 q(e^{i theta})|
    let curvature: f64 = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (k * k) as f64 * c.norm())
        .sum();
    let sample = |j: usize, n: usize| q.eval(Complex64::from_polar(1.0, TAU * j as f64 / n as f64)) - w;

    let mut n = cfg.omission_initial_samples;
    let mut values: Vec<Complex64> = (0..n).into_par_iter().map(|j| sample(j, n)).collect();
    let mut history = vec![winding(&values)];
    loop {
        let settled = history.len() >= 3 && history[history.len() - 3..].iter().all(|&x| x == history[history.len() - 1]);
        let d = min_norm(&values);
        let h = TAU / n as f64;
        // chordal interpolation error of a C^2 curve, per component
        let clearance = min_chord_distance(&values) - std::f64::consts::SQRT_2 * h * h / 8.0 * curvature;
        let cleared = clearance > cfg.omission_tolerance || d <= cfg.omission_tolerance;
        if (settled && cleared) || 2 * n > cfg.omission_max_samples {
            let zeros = history[history.len() - 1];
            let indeterminate = clearance <= cfg.omission_tolerance;
            return Ok(OmissionVerdict {
                omitted: zeros == 0 && !indeterminate,
                min_boundary_distance: d,
                certified_clearance: clearance,
                winding_zero_count: zeros,
                samples_used: n,
                indeterminate,
            });
        }
        // reuse the old grid as the even samples of the new one
        let fresh: Vec<Complex64> = (0..n).into_par_iter().map(|j| sample(2 * j + 1, 2 * n)).collect();
        values = values
            .iter()
            .zip(&fresh)
            .flat_map(|(&even, &odd)| [even, odd])
            .collect();
        n *= 2;
        history.push(winding(&values));
    }
}

/// Distance from the origin to the closed polygon through `values`.
fn min_chord_distance(values: &[Complex64]) -> f64 {
    let n = values.len();
    (0..n)
        .map(|j| {
            let (a, b) = (values[j], values[(j + 1) % n]);
            let ab = b - a;
            let len2 = ab.norm_sqr();
            let t = if len2 > 0.0 { (-(a.conj() * ab).re / len2).clamp(0.0, 1.0) } else { 0.0 };
            (a + ab * t).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

fn min_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
}

fn winding(values: &[Complex64]) -> i64 {
    let n = values.len();
    let total: f64 = (0..n).map(|j| (values[(j + 1) % n] / values[j]).arg()).sum();
    (total / TAU).round() as i64
}

/// Both sides of the stability question for one multiplier.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub mu: Complex64,
    pub schur: SchurVerdict,
    /// `q` against `1/mu`.
    pub q_side: OmissionVerdict,
    /// `q_root` against each `T`-th root of `1/mu`.
    pub branches: Vec<OmissionVerdict>,
    /// All three verdicts coincide (they may legitimately differ only inside the agreement margin).
    pub methods_agree: bool,
}

pub fn in_stability_domain(design: &AveragingSet, mu: Complex64) -> Result<StabilityReport> {
    in_stability_domain_with(design, mu, &Config::default())
}

pub fn in_stability_domain_with(design: &AveragingSet, mu: Complex64, cfg: &Config) -> Result<StabilityReport> {
    let chi = build_chi(design, mu)?;
    let schur = schur_test_with(&chi, cfg)?;
    let bundle = build_duality(design);
    let w = mu.inv();
    let q_side = omission_test_with(&bundle.q, w, cfg)?;
    let t = design.cycle_length();
    let branches = t_th_roots(w, t)
        .into_iter()
        .map(|b| omission_test_with(&bundle.q_root, b, cfg))
        .collect::<Result<Vec<_>>>()?;
    let all_branches = branches.iter().all(|b| b.omitted);

    let schur_clear =
        (schur.max_modulus - (1.0 - cfg.strictness_tolerance)).abs() > cfg.agreement_margin.max(schur.root_sensitivity);
    let q_clear = !q_side.indeterminate && q_side.min_boundary_distance > cfg.agreement_margin;
    let branches_clear = branches
        .iter()
        .all(|b| !b.indeterminate && b.min_boundary_distance > cfg.agreement_margin);
    if schur_clear && q_clear && schur.stable != q_side.omitted {
        return Err(Error::MethodDisagreement(format!(
            "mu = {mu}: Schur margin {:.3e} says {}, omission of 1/mu (distance {:.3e}, {} zeros) says {}",
            schur.margin,
            if schur.stable { "stable" } else { "unstable" },
            q_side.min_boundary_distance,
            q_side.winding_zero_count,
            if q_side.omitted { "omitted" } else { "attained" },
        )));
    }
    if q_clear && branches_clear && all_branches != q_side.omitted {
        return Err(Error::MethodDisagreement(format!(
            "mu = {mu}: q and the T-root transform disagree on omission"
        )));
    }
    Ok(StabilityReport {
        stable: schur.stable,
        mu,
        methods_agree: schur.stable == q_side.omitted && q_side.omitted == all_branches,
        schur,
        q_side,
        branches,
    })
}

/// All `t` values of `w^(1/t)`.
pub fn t_th_roots(w: Complex64, t: usize) -> Vec<Complex64> {
    let r = w.norm().powf(1.0 / t as f64);
    let base = w.arg() / t as f64;
    (0..t)
        .map(|k| Complex64::from_polar(r, base + TAU * k as f64 / t as f64))
        .collect()
}
