//! Constructive designs and their end-to-end verification.
//!
//! Each family has a raw constructor returning the polynomial or the
//! averaging coefficients, and a `*_design` function returning a
//! [`DesignResult`] verified against the family's natural multiplier set.
//! [`auto_design`] picks a family and the smallest order for a requested set.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::domains::{fejer_halfplane, s_n_member, Membership, MultiplierSet};
use crate::duality::{in_stability_domain_with, AveragingSet};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::schur::schur_test_with;

/// Relative shrink applied to a family's critical multiplier when building its natural target.
pub const NATURAL_TARGET_SHRINK: f64 = 1e-3;
/// Samples per ray for the slit bound of the iterated starlike construction.
pub const RAY_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMethod {
    Simplest,
    Suffridge,
    Alexander,
    IteratedStarlike,
    Halfplane,
    Auto,
}

impl DesignMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DesignMethod::Simplest => "simplest",
            DesignMethod::Suffridge => "suffridge",
            DesignMethod::Alexander => "alexander",
            DesignMethod::IteratedStarlike => "iterated_starlike",
            DesignMethod::Halfplane => "halfplane",
            DesignMethod::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "simplest" => DesignMethod::Simplest,
            "suffridge" => DesignMethod::Suffridge,
            "alexander" => DesignMethod::Alexander,
            "iterated_starlike" | "iterated-starlike" => DesignMethod::IteratedStarlike,
            "halfplane" => DesignMethod::Halfplane,
            "auto" => DesignMethod::Auto,
            other => return Err(Error::Parse(format!("unknown design method {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct DesignRequest {
    pub target: MultiplierSet,
    pub t: usize,
    pub method: DesignMethod,
    pub max_order: usize,
}

/// `|q|` on the slit rays against the analytic bounds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SlitBound {
    pub sampled_max: f64,
    /// `((T+1)/(T+2))^m`.
    pub rho: f64,
    /// `2 N^(-gamma)` with `N = (T+1)^m`.
    pub two_n_gamma: f64,
    pub gamma: f64,
    pub nominal_degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignResult {
    pub design: AveragingSet,
    pub method_used: DesignMethod,
    pub target: MultiplierSet,
    /// Every probe is stable by the Schur test and by both omission tests.
    pub verified: bool,
    pub probes: Vec<Complex64>,
    pub probes_passed: usize,
    /// Smallest `1 - max |root of chi|` over the probes.
    pub margin: f64,
    /// Preimage of `mu` used by the simplest design.
    pub witness: Option<Complex64>,
    /// `tan^2(pi / (2(n+1)))` for Suffridge designs.
    pub lambda: Option<f64>,
    pub slit_bound: Option<SlitBound>,
}

impl DesignResult {
    fn bare(design: AveragingSet, method: DesignMethod, target: MultiplierSet) -> Self {
        DesignResult {
            design,
            method_used: method,
            target,
            verified: false,
            probes: Vec::new(),
            probes_passed: 0,
            margin: f64::NEG_INFINITY,
            witness: None,
            lambda: None,
            slit_bound: None,
        }
    }
}

/// Runs every probe of `target` through [`in_stability_domain_with`].
pub fn verify(design: &AveragingSet, target: &MultiplierSet, cfg: &Config) -> Result<(bool, Vec<Complex64>, usize, f64)> {
    let probes = target.probes(cfg);
    let reports = probes
        .par_iter()
        .map(|&mu| in_stability_domain_with(design, mu, cfg))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports
        .iter()
        .filter(|r| r.stable && r.q_side.omitted && r.branches.iter().all(|b| b.omitted))
        .count();
    let margin = reports.iter().map(|r| r.schur.margin).fold(f64::INFINITY, f64::min);
    Ok((passed == probes.len(), probes, passed, margin))
}

/// Cheap necessary screen: the Schur test alone on every probe.
fn schur_screen(design: &AveragingSet, target: &MultiplierSet, cfg: &Config) -> Result<bool> {
    target.probes(cfg).par_iter().try_fold(
        || true,
        |ok, &mu| Ok(ok && schur_test_with(&crate::duality::build_chi(design, mu)?, cfg)?.stable),
    ).try_reduce(|| true, |a, b| Ok(a && b))
}

fn finish(mut result: DesignResult, cfg: &Config) -> Result<DesignResult> {
    let (verified, probes, passed, margin) = verify(&result.design, &result.target, cfg)?;
    result.verified = verified;
    result.probes = probes;
    result.probes_passed = passed;
    result.margin = margin;
    Ok(result)
}

// ---- simplest polynomials ----

/// Coefficients of `p(z) = (z^n - (z - zeta)^n) / mu` in design order.
///
/// The characteristic polynomial of the result at `mu` is `(z - zeta)^n`.
pub fn simplest_coefficients(mu: Complex64, zeta: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    if mu == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroMultiplier);
    }
    // p_j = -binom(n, j) (-zeta)^(n-j) / mu for j < n, and a_k = p_{n-k}
    let mut binom = 1.0;
    let mut a = Vec::with_capacity(n);
    for k in 1..=n {
        binom *= (n - k + 1) as f64 / k as f64;
        // binom(n, n-k) = binom(n, k)
        a.push(-(-zeta).powu(k as u32) * binom / mu);
    }
    Ok(a)
}

pub fn simplest_design(mu: Complex64, n: usize) -> Result<DesignResult> {
    simplest_design_with(mu, n, &Config::default())
}

pub fn simplest_design_with(mu: Complex64, n: usize, cfg: &Config) -> Result<DesignResult> {
    if mu == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroMultiplier);
    }
    let member = s_n_member(mu, n)?;
    if member.status != Membership::Inside {
        return Err(Error::NotInStabilizationDomain { mu: mu.to_string(), n });
    }
    let design = AveragingSet::new(simplest_coefficients(mu, member.witness, n)?, 1)?;
    let mut result = DesignResult::bare(design, DesignMethod::Simplest, MultiplierSet::point(mu)?);
    result.witness = Some(member.witness);
    finish(result, cfg)
}

// ---- Suffridge polynomials ----

/// `tan^2(pi / (2(n+1)))`; the design of order `n` stabilizes `(-1/lambda, -1]`.
pub fn suffridge_lambda(n: usize) -> f64 {
    (PI / (2.0 * (n + 1) as f64)).tan().powi(2)
}

/// `q(z) = [2n(1 - cos(pi/(n+1)))/(n+1)] sum_k (1 - (k-1)/n) sin(k pi/(n+1))/sin(pi/(n+1)) z^k`.
pub fn suffridge_polynomial(n: usize) -> Result<Poly> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    let nf = n as f64;
    let angle = PI / (nf + 1.0);
    let norm = 2.0 * nf * (1.0 - angle.cos()) / (nf + 1.0);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        c.re = norm * (1.0 - (kf - 1.0) / nf) * (kf * angle).sin() / angle.sin();
    }
    Poly::new(coeffs)
}

/// Design coefficients `a_k = q_k` of a univalent `q = z p*(z)` with `q(1) = 1`.
fn design_from_q(q: &Poly, t: usize) -> Result<AveragingSet> {
    let a: Vec<Complex64> = q.coeffs()[1..].to_vec();
    match AveragingSet::new(a.clone(), t) {
        Ok(d) => Ok(d),
        // tiny rounding in q(1); rescale
        Err(Error::InvalidDesign(_)) => AveragingSet::normalized(a, t),
        Err(e) => Err(e),
    }
}

pub fn suffridge_design(n: usize) -> Result<DesignResult> {
    suffridge_design_with(n, &Config::default())
}

/// Verified against `[-(1 - 1e-3)/lambda(n), -1]`.
pub fn suffridge_design_with(n: usize, cfg: &Config) -> Result<DesignResult> {
    let lambda = suffridge_lambda(n);
    let target = MultiplierSet::real_segment(((1.0 - NATURAL_TARGET_SHRINK) / lambda).max(1.0))?;
    suffridge_for(n, target, cfg)
}

fn suffridge_set(n: usize) -> Result<AveragingSet> {
    design_from_q(&suffridge_polynomial(n)?, 1)
}

fn suffridge_for(n: usize, target: MultiplierSet, cfg: &Config) -> Result<DesignResult> {
    let mut result = DesignResult::bare(suffridge_set(n)?, DesignMethod::Suffridge, target);
    result.lambda = Some(suffridge_lambda(n));
    finish(result, cfg)
}

// ---- Alexander polynomial ----

/// `l(n) = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// `a_k = 1/(l(n) k)`.
pub fn alexander_coefficients(n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    let l = harmonic(n);
    Ok((1..=n).map(|k| 1.0 / (l * k as f64)).collect())
}

pub fn alexander_design(n: usize) -> Result<DesignResult> {
    alexander_design_with(n, &Config::default())
}

/// Verified against the sector `{|z| <= mu_M, |arg z| >= pi/2}` with the
/// largest `mu_M` the sampled image allows, shrunk by `1e-3`.
pub fn alexander_design_with(n: usize, cfg: &Config) -> Result<DesignResult> {
    let a = alexander_coefficients(n)?;
    let q = Poly::from_real(&std::iter::once(0.0).chain(a.iter().copied()).collect::<Vec<_>>())?;
    // largest |q| over the part of the boundary image in the closed left half-plane
    let samples = 8192;
    let rho = (0..samples)
        .map(|j| q.eval(Complex64::from_polar(1.0, TAU * j as f64 / samples as f64)))
        .filter(|w| w.re <= 0.0)
        .map(|w| w.norm())
        .fold(0.0, f64::max);
    let mu_m = if rho > 0.0 { (1.0 - NATURAL_TARGET_SHRINK) / rho } else { 1.0 };
    let target = MultiplierSet::sector(mu_m.max(1.0), PI / 2.0)?;
    alexander_for(n, target, cfg)
}

fn alexander_set(n: usize) -> Result<AveragingSet> {
    real_set(alexander_coefficients(n)?, 1)
}

fn alexander_for(n: usize, target: MultiplierSet, cfg: &Config) -> Result<DesignResult> {
    finish(DesignResult::bare(alexander_set(n)?, DesignMethod::Alexander, target), cfg)
}

/// Real coefficients rescaled to sum exactly to one.
fn real_set(a: Vec<f64>, t: usize) -> Result<AveragingSet> {
    AveragingSet::normalized(a.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), t)
}

// ---- iterated starlike construction ----

/// `q_1(z) = ((T+1)/(T+2)) z + (1/(T+2)) z^{T+1}` composed with itself `m` times.
pub fn iterated_starlike_polynomial(t: usize, m: usize) -> Result<Poly> {
    if t < 1 {
        return Err(Error::InvalidCycleLength(t));
    }
    if m < 1 {
        return Err(Error::InvalidOrder(m));
    }
    let tf = t as f64;
    let mut q1 = vec![Complex64::new(0.0, 0.0); t + 2];
    q1[1] = Complex64::new((tf + 1.0) / (tf + 2.0), 0.0);
    q1[t + 1] = Complex64::new(1.0 / (tf + 2.0), 0.0);
    let q1 = Poly::new(q1)?;
    let mut q = q1.clone();
    for _ in 1..m {
        q = q1.compose(&q);
    }
    Ok(q)
}

/// Design coefficients: `a_k` is the coefficient of `z^{(k-1)T+1}`.
pub fn iterated_starlike_coefficients(t: usize, m: usize) -> Result<Vec<f64>> {
    let q = iterated_starlike_polynomial(t, m)?;
    Ok((0..)
        .map(|j| j * t + 1)
        .take_while(|&k| k <= q.degree())
        .map(|k| q.coeff(k).re)
        .collect())
}

/// Samples `|q|` on the rays `r e^{i pi/T} w^k`, `0 <= r <= 1`.
pub fn slit_bound(t: usize, m: usize) -> Result<SlitBound> {
    let q = iterated_starlike_polynomial(t, m)?;
    let tf = t as f64;
    let sampled_max = (0..t)
        .flat_map(|k| {
            let dir = Complex64::from_polar(1.0, PI / tf + TAU * k as f64 / tf);
            let q = &q;
            (0..=RAY_SAMPLES).map(move |j| q.eval(dir * (j as f64 / RAY_SAMPLES as f64)).norm())
        })
        .fold(0.0, f64::max);
    let nominal_degree = (t + 1).pow(m as u32);
    let gamma = 1.0 / ((tf + 1.0) * (tf + 1.0).log2());
    Ok(SlitBound {
        sampled_max,
        rho: ((tf + 1.0) / (tf + 2.0)).powi(m as i32),
        two_n_gamma: 2.0 * (nominal_degree as f64).powf(-gamma),
        gamma,
        nominal_degree,
    })
}

pub fn iterated_starlike_design(t: usize, m: usize) -> Result<DesignResult> {
    iterated_starlike_design_with(t, m, &Config::default())
}

/// Verified against `[-(1 - 1e-3) rho^(-T), -1]` for cycles of length `T`.
pub fn iterated_starlike_design_with(t: usize, m: usize, cfg: &Config) -> Result<DesignResult> {
    let rho = ((t as f64 + 1.0) / (t as f64 + 2.0)).powi(m as i32);
    let target = MultiplierSet::real_segment(((1.0 - NATURAL_TARGET_SHRINK) * rho.powi(-(t as i32))).max(1.0))?;
    iterated_starlike_for(t, m, target, cfg)
}

fn iterated_starlike_for(t: usize, m: usize, target: MultiplierSet, cfg: &Config) -> Result<DesignResult> {
    if t < 2 {
        return Err(Error::Unsupported("the iterated starlike construction needs T >= 2".into()));
    }
    let a = iterated_starlike_coefficients(t, m)?;
    if a.len() > cfg.max_order {
        return Err(Error::DesignNotFound(cfg.max_order));
    }
    let mut result = DesignResult::bare(real_set(a, t)?, DesignMethod::IteratedStarlike, target);
    result.slit_bound = Some(slit_bound(t, m)?);
    finish(result, cfg)
}

// ---- half-plane design ----

/// `q = (2/n) sum_{k=1}^n (1 - k/(n+1)) z^k`, which keeps `Re q > -1/n` on
/// the disk and therefore omits the half-plane dual to a horocycle of size
/// below `n`.
pub fn halfplane_coefficients(n: usize) -> Result<Vec<f64>> {
    let f = fejer_halfplane(n)?;
    Ok(f.coeffs()[1..].iter().map(|c| 2.0 * c.re / n as f64).collect())
}

fn halfplane_set(n: usize) -> Result<AveragingSet> {
    real_set(halfplane_coefficients(n)?, 1)
}

// ---- dispatch ----

/// Smallest verified design for the requested multiplier set.
pub fn auto_design(req: &DesignRequest) -> Result<DesignResult> {
    auto_design_with(req, &Config::default())
}

pub fn auto_design_with(req: &DesignRequest, cfg: &Config) -> Result<DesignResult> {
    if req.max_order < 1 {
        return Err(Error::InvalidOrder(req.max_order));
    }
    if req.t < 1 {
        return Err(Error::InvalidCycleLength(req.t));
    }
    let mut cfg = cfg.clone();
    cfg.max_order = req.max_order;
    let cfg = &cfg;
    let t = req.t;
    let method = match (req.method, &req.target) {
        (DesignMethod::Auto, MultiplierSet::Point { .. }) => DesignMethod::Simplest,
        (DesignMethod::Auto, MultiplierSet::RealSegment { .. }) if t == 1 => DesignMethod::Suffridge,
        (DesignMethod::Auto, MultiplierSet::RealSegment { .. }) => DesignMethod::IteratedStarlike,
        (DesignMethod::Auto, MultiplierSet::HorocycleDisk { .. }) => DesignMethod::Halfplane,
        (DesignMethod::Auto, MultiplierSet::Sector { .. }) => DesignMethod::Alexander,
        (m, _) => m,
    };
    let target = req.target;
    let mu_m = target.mu_m();
    let not_found = Error::DesignNotFound(req.max_order);
    let fixed_point_only = |name: &str| {
        if t != 1 {
            Err(Error::Unsupported(format!("{name} designs are built for fixed points (T = 1)")))
        } else {
            Ok(())
        }
    };

    match method {
        DesignMethod::Simplest => {
            fixed_point_only("simplest")?;
            let MultiplierSet::Point { mu } = target else {
                return Err(Error::Unsupported("simplest designs target a single multiplier".into()));
            };
            for n in 1..=req.max_order {
                if s_n_member(mu, n)?.status == Membership::Inside {
                    let r = simplest_design_with(mu, n, cfg)?;
                    if r.verified {
                        return Ok(r);
                    }
                }
            }
            Err(not_found)
        }
        DesignMethod::Suffridge => {
            fixed_point_only("Suffridge")?;
            let start = (1..=req.max_order).find(|&n| 1.0 / suffridge_lambda(n) > mu_m).ok_or(not_found)?;
            search(start, req.max_order, target, DesignMethod::Suffridge, cfg, suffridge_set)
                .map(|mut r| {
                    r.lambda = Some(suffridge_lambda(r.design.order()));
                    r
                })
        }
        DesignMethod::Alexander => {
            fixed_point_only("Alexander")?;
            search(1, req.max_order, target, DesignMethod::Alexander, cfg, alexander_set)
        }
        DesignMethod::Halfplane => {
            fixed_point_only("half-plane")?;
            let start = mu_m.floor() as usize + 1;
            search(start, req.max_order, target, DesignMethod::Halfplane, cfg, halfplane_set)
        }
        DesignMethod::IteratedStarlike => {
            if t < 2 {
                return Err(Error::Unsupported("the iterated starlike construction needs T >= 2".into()));
            }
            let lambda = mu_m.powf(-1.0 / t as f64);
            let tf = t as f64;
            let mut m = 1;
            while ((tf + 1.0) / (tf + 2.0)).powi(m as i32) >= lambda {
                m += 1;
            }
            loop {
                let order = ((t + 1).pow(m as u32) - 1) / t + 1;
                if order > req.max_order {
                    return Err(Error::DesignNotFound(req.max_order));
                }
                let r = iterated_starlike_for(t, m, target, cfg)?;
                if r.verified {
                    return Ok(r);
                }
                m += 1;
            }
        }
        DesignMethod::Auto => unreachable!("resolved above"),
    }
}

/// Linear search over orders from `start`, screening with the Schur test first.
fn search(
    start: usize,
    max_order: usize,
    target: MultiplierSet,
    method: DesignMethod,
    cfg: &Config,
    build: impl Fn(usize) -> Result<AveragingSet>,
) -> Result<DesignResult> {
    for n in start.max(1)..=max_order {
        let design = build(n)?;
        if !schur_screen(&design, &target, cfg)? {
            continue;
        }
        let r = finish(DesignResult::bare(design, method, target), cfg)?;
        if r.verified {
            return Ok(r);
        }
    }
    Err(Error::DesignNotFound(max_order))
}

/// `Q(z) = (n/(n+1)) (z + z^n/n)`, a starlike univalent self-map of the disk.
pub fn starlike_q(n: usize) -> Result<Poly> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let c = n as f64 / (n as f64 + 1.0);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[1] += c;
    coeffs[n] += c / n as f64;
    Poly::new(coeffs)
}

/// `d/dtheta arg Q(e^{i theta}) = Re(z Q'(z) / Q(z))` at `z = e^{i theta}`.
pub fn arg_derivative(q: &Poly, theta: f64) -> f64 {
    let z = Complex64::from_polar(1.0, theta);
    let (v, dv) = q.eval_with_derivative(z);
    (z * dv / v).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::degree_lower_bound;
    use crate::duality::build_chi;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simplest_examples() {
        let s2 = 2f64.sqrt();
        let r = simplest_design(c(2.0, 0.0), 4).unwrap();
        assert!(r.verified);
        let expect = [
            c(2.0 - s2, s2),
            c(3.0 * (s2 - 1.0), -3.0 * (s2 - 1.0)),
            c(-2.0 * (s2 - 1.0), -2.0 * (3.0 - 2.0 * s2)),
            c(0.0, 3.0 - 2.0 * s2),
        ];
        for (a, e) in r.design.a().iter().zip(expect) {
            assert!((a - e).norm() < 1e-14, "{a} vs {e}");
        }
        let s3 = 3f64.sqrt();
        let r = simplest_design(c(-2.0, 0.0), 2).unwrap();
        assert!((r.design.a()[0] - c(s3 - 1.0, 0.0)).norm() < 1e-15);
        assert!((r.design.a()[1] - c(2.0 - s3, 0.0)).norm() < 1e-15);
        let r = simplest_design(c(0.5, 0.0), 1).unwrap();
        assert_eq!(r.design.a(), &[c(1.0, 0.0)]);
        assert!(r.verified);
        assert!(matches!(simplest_design(c(2.0, 0.0), 3), Err(Error::NotInStabilizationDomain { .. })));
    }

    #[test]
    fn simplest_chi_factorizes() {
        for (mu, n) in [(c(2.0, 0.0), 4), (c(-5.0, 3.0), 5), (c(30.0, -7.0), 8), (c(-100.0, 0.0), 9)] {
            let r = simplest_design(mu, n).unwrap();
            let zeta = r.witness.unwrap();
            let chi = build_chi(&r.design, mu).unwrap();
            let expect = Poly::from_roots(&vec![zeta; n]);
            assert!(chi.max_coeff_distance(&expect) < 1e-10, "mu = {mu}");
            assert!(r.verified);
            assert!((r.margin - (1.0 - zeta.norm())).abs() < 1e-9);
        }
    }

    #[test]
    fn suffridge_examples() {
        let q = suffridge_polynomial(2).unwrap();
        assert!(q.max_coeff_distance(&Poly::from_real(&[0.0, 2.0 / 3.0, 1.0 / 3.0]).unwrap()) < 1e-15);
        assert!((suffridge_lambda(2) - 1.0 / 3.0).abs() < 1e-15);
        let d = design_from_q(&q, 1).unwrap();
        let chi = build_chi(&d, c(-3.0, 0.0)).unwrap();
        assert!(chi.max_coeff_distance(&Poly::from_real(&[1.0, 2.0, 1.0]).unwrap()) < 1e-15);
        assert!(!in_stability_domain_with(&d, c(-3.0, 0.0), &Config::default()).unwrap().stable);
        assert!(in_stability_domain_with(&d, c(-2.9, 0.0), &Config::default()).unwrap().stable);
        assert!(suffridge_design(2).unwrap().verified);
        assert!(!suffridge_design(1).unwrap().verified);
        let lam = suffridge_lambda(10);
        let d = suffridge_set(10).unwrap();
        assert!(in_stability_domain_with(&d, c(-0.99 / lam, 0.0), &Config::default()).unwrap().stable);
    }

    #[test]
    fn suffridge_endpoints() {
        for n in 1..=20 {
            let q = suffridge_polynomial(n).unwrap();
            let lam = suffridge_lambda(n);
            assert!((q.eval(c(1.0, 0.0)) - 1.0).norm() < 1e-10);
            assert!((q.eval(c(-1.0, 0.0)) + lam).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(alexander_coefficients(1).unwrap(), vec![1.0]);
        let a = alexander_coefficients(3).unwrap();
        for (x, e) in a.iter().zip([6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0]) {
            assert!((x - e).abs() < 1e-15);
        }
        assert!(alexander_design(12).unwrap().verified);
    }

    #[test]
    fn iterated_starlike_examples() {
        let q = iterated_starlike_polynomial(2, 1).unwrap();
        assert!(q.max_coeff_distance(&Poly::from_real(&[0.0, 0.75, 0.0, 0.25]).unwrap()) < 1e-16);
        for j in 0..=100 {
            let r = j as f64 / 100.0;
            let v = q.eval(c(0.0, r)).norm();
            assert!((v - r * (0.75 - r * r / 4.0).abs()).abs() < 1e-15);
            assert!(v <= 0.75 * r + 1e-15);
        }
        let q = iterated_starlike_polynomial(3, 1).unwrap();
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / 3.0);
            assert!((q.eval(w) - w).norm() < 1e-15);
        }
        let b = slit_bound(2, 2).unwrap();
        assert_eq!(iterated_starlike_polynomial(2, 2).unwrap().degree(), 9);
        assert!(b.sampled_max <= b.rho + 1e-15 && b.rho <= b.two_n_gamma);
        assert!((b.rho - 9.0 / 16.0).abs() < 1e-15);
        for t in 2..=4 {
            for m in 1..=3 {
                let a = iterated_starlike_coefficients(t, m).unwrap();
                assert!(a.iter().all(|&x| x >= 0.0));
                assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
        let r = iterated_starlike_design(2, 2).unwrap();
        assert!(r.verified, "{:?}", r.probes_passed);
        assert!(iterated_starlike_design(1, 2).is_err());
    }

    #[test]
    fn starlike_q_argument_increases() {
        for n in 2..=12 {
            let q = starlike_q(n).unwrap();
            for j in 0..4096 {
                let theta = TAU * j as f64 / 4096.0;
                assert!(arg_derivative(&q, theta) >= -1e-9, "n = {n}, theta = {theta}");
            }
        }
    }

    fn request(target: MultiplierSet, t: usize) -> DesignRequest {
        DesignRequest {
            target,
            t,
            method: DesignMethod::Auto,
            max_order: 64,
        }
    }

    #[test]
    fn auto_dispatch() {
        let r = auto_design(&request(MultiplierSet::point(c(2.0, 0.0)).unwrap(), 1)).unwrap();
        assert_eq!((r.method_used, r.design.order()), (DesignMethod::Simplest, 4));
        let r = auto_design(&request(MultiplierSet::point(c(-2.0, 0.0)).unwrap(), 1)).unwrap();
        assert_eq!(r.design.order(), 2);
        let r = auto_design(&request(MultiplierSet::real_segment(3.0 - 1e-3).unwrap(), 1)).unwrap();
        assert_eq!((r.method_used, r.design.order()), (DesignMethod::Suffridge, 2));
        let r = auto_design(&request(MultiplierSet::horocycle(3.0).unwrap(), 1)).unwrap();
        assert_eq!((r.method_used, r.design.order()), (DesignMethod::Halfplane, 4));
        let r = auto_design(&request(MultiplierSet::sector(2.0, PI / 2.0).unwrap(), 1)).unwrap();
        assert_eq!(r.method_used, DesignMethod::Alexander);
        let r = auto_design(&request(MultiplierSet::real_segment(3.0).unwrap(), 2)).unwrap();
        assert_eq!(r.method_used, DesignMethod::IteratedStarlike);
        assert!(matches!(
            auto_design(&request(MultiplierSet::point(c(1.0, 0.0)).unwrap(), 1)),
            Err(Error::DesignNotFound(64))
        ));
        assert!(matches!(
            auto_design(&request(MultiplierSet::point(c(2.0, 0.0)).unwrap(), 2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn verified_orders_respect_lower_bounds() {
        let cases = [
            (MultiplierSet::point(c(2.0, 0.0)).unwrap(), 1),
            (MultiplierSet::point(c(-40.0, 9.0)).unwrap(), 1),
            (MultiplierSet::real_segment(50.0).unwrap(), 1),
            (MultiplierSet::horocycle(6.0).unwrap(), 1),
            (MultiplierSet::sector(1.5, 2.0).unwrap(), 1),
            (MultiplierSet::real_segment(4.0).unwrap(), 2),
        ];
        for (target, t) in cases {
            let r = auto_design(&request(target, t)).unwrap();
            assert!(r.verified && r.margin > 0.0);
            let b = degree_lower_bound(&target, t).unwrap();
            assert!(r.design.order() as f64 >= b.bound, "{target:?}");
        }
    }
}
