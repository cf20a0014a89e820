//! All-roots solver: Aberth–Ehrlich iteration with a companion-matrix
//! fallback, followed by multiplicity detection.
//!
//! Designs built from `(z - zeta)^n` produce exact multiple roots. In double
//! precision an `m`-fold root splits into a ring of radius about
//! `eps^(1/m)`, far wider than any fixed clustering radius once `m > 2`. The
//! ring's centroid, however, is accurate to `O(eps)`. Groups of nearby roots
//! are therefore merged when the polynomial is, to rounding level, the
//! product of `(z - c)^m` and a cofactor; groups closer than the configured
//! cluster radius are merged unconditionally.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::Poly;

const EPS: f64 = f64::EPSILON;
/// Relative backward error accepted for a root or a multiple-root cluster.
const CLUSTER_BACKWARD_ERROR: f64 = 1e-11;
/// Largest accepted root residual `|p(z)| / sum |c_k| |z|^k`.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Aberth,
    Companion,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    /// Every root, cluster centers repeated by multiplicity.
    pub roots: Vec<Complex64>,
    pub clusters: Vec<RootCluster>,
    /// Largest `|p(z)| / sum_k |c_k| |z|^k` over the reported roots.
    pub residual: f64,
    pub method: RootMethod,
    pub iterations: usize,
}

impl RootSet {
    pub fn max_modulus(&self) -> f64 {
        self.clusters.iter().map(|c| c.center.norm()).fold(0.0, f64::max)
    }
}

pub fn find_roots(p: &Poly) -> Result<RootSet> {
    find_roots_with(p, &Config::default())
}

pub fn find_roots_with(p: &Poly, cfg: &Config) -> Result<RootSet> {
    let degree = p.true_degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let trimmed = p.trimmed();
    // exact zero roots
    let zeros = trimmed
        .coeffs()
        .iter()
        .position(|c| *c != Complex64::new(0.0, 0.0))
        .unwrap_or(0);
    let reduced = Poly::new(trimmed.coeffs()[zeros..].to_vec())?;
    let lead = reduced.leading();
    let monic = reduced.scale(lead.inv());

    let mut clusters = Vec::new();
    if zeros > 0 {
        clusters.push(RootCluster {
            center: Complex64::new(0.0, 0.0),
            multiplicity: zeros,
        });
    }

    let (mut raw, method, iterations) = if monic.degree() == 0 {
        (Vec::new(), RootMethod::Aberth, 0)
    } else {
        match aberth(&monic, cfg.aberth_max_iterations) {
            Some((roots, it)) => (roots, RootMethod::Aberth, it),
            None => (companion_roots(&monic)?, RootMethod::Companion, 0),
        }
    };
    if raw.iter().any(|z| !z.is_finite()) {
        return Err(Error::RootFinderFailed("non-finite root estimate".into()));
    }
    raw.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    clusters.extend(detect_clusters(&monic, &raw, cfg.cluster_radius));

    let residual = clusters
        .iter()
        .map(|c| backward_error(&trimmed, c.center))
        .fold(0.0, f64::max);
    if residual > ROOT_RESIDUAL_TOLERANCE {
        return Err(Error::RootFinderFailed(format!(
            "residual {residual:.3e} above {ROOT_RESIDUAL_TOLERANCE:e}"
        )));
    }
    let roots = clusters
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.center, c.multiplicity))
        .collect();
    Ok(RootSet {
        roots,
        clusters,
        residual,
        method,
        iterations,
    })
}

/// `|p(z)| / sum |c_k| |z|^k`: the smallest relative coefficient perturbation making `z` a root.
pub fn backward_error(p: &Poly, z: Complex64) -> f64 {
    let scale = p.abs_eval(z.norm());
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(z).norm() / scale
}

/// Newton correction `p(z)/p'(z)` and a flag telling whether `|p(z)|` is at rounding level.
///
/// Outside the unit disk the reversed polynomial is evaluated at `1/z` so
/// that high degrees do not overflow.
fn newton_ratio(p: &Poly, rev: &Poly, z: Complex64) -> (Complex64, bool) {
    let n = p.degree() as f64;
    if z.norm() <= 1.0 {
        let (v, dv) = p.eval_with_derivative(z);
        let noise = 4.0 * EPS * p.abs_eval(z.norm()) * (n + 1.0);
        (v / dv, v.norm() <= noise)
    } else {
        let y = z.inv();
        let (v, dv) = rev.eval_with_derivative(y);
        let noise = 4.0 * EPS * rev.abs_eval(y.norm()) * (n + 1.0);
        (z * v / (v * n - y * dv), v.norm() <= noise)
    }
}

fn initial_guesses(monic: &Poly) -> Vec<Complex64> {
    let n = monic.degree();
    let cauchy = 1.0
        + monic.coeffs()[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    // Start inside the Cauchy disk on a circle whose radius matches the
    // geometric mean of the root moduli; fall back to the Cauchy radius
    // when the constant term vanishes.
    let c0 = monic.coeffs()[0].norm();
    let radius = if c0 > 0.0 {
        c0.powf(1.0 / n as f64).min(cauchy)
    } else {
        cauchy
    };
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            let wobble = 1.0 + 0.01 * ((k % 3) as f64 - 1.0);
            Complex64::from_polar(radius * wobble, theta)
        })
        .collect()
}

/// Gauss–Seidel Aberth–Ehrlich iteration. `None` when the iteration cap is hit.
fn aberth(monic: &Poly, max_iterations: usize) -> Option<(Vec<Complex64>, usize)> {
    let n = monic.degree();
    if n == 1 {
        return Some((vec![-monic.coeffs()[0]], 0));
    }
    let rev = Poly::new(monic.coeffs().iter().rev().copied().collect()).ok()?;
    let mut z = initial_guesses(monic);
    let mut done = vec![false; n];
    for it in 1..=max_iterations {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, at_noise) = newton_ratio(monic, &rev, z[i]);
            if at_noise {
                done[i] = true;
                continue;
            }
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !step.is_finite() {
                return None;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * EPS * z[i].norm().max(EPS) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done && done.iter().all(|&d| d) {
            return Some((z, it));
        }
    }
    None
}

fn companion_roots(monic: &Poly) -> Result<Vec<Complex64>> {
    let n = monic.degree();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic.coeffs()[i];
    }
    let schur = Schur::try_new(m, EPS, 100 * n.max(10))
        .ok_or_else(|| Error::RootFinderFailed("companion Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    // complex Schur form is upper triangular
    let rev = Poly::new(monic.coeffs().iter().rev().copied().collect())?;
    Ok((0..n)
        .map(|i| {
            let mut z = t[(i, i)];
            for _ in 0..3 {
                let (ratio, at_noise) = newton_ratio(monic, &rev, z);
                if at_noise || !ratio.is_finite() {
                    break;
                }
                z -= ratio;
            }
            z
        })
        .collect())
}

/// Coefficients of `p(c + w)` in powers of `w`, up to `w^upto`.
fn taylor_shift(p: &Poly, c: Complex64, upto: usize) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = p.coeffs().to_vec();
    let n = work.len() - 1;
    let mut out = Vec::with_capacity(upto + 1);
    for j in 0..=upto.min(n) {
        // synthetic division by (z - c), remainder is the j-th coefficient
        for k in (j..n).rev() {
            let v = work[k + 1];
            work[k] += c * v;
        }
        out.push(work[j]);
    }
    out.resize(upto + 1, Complex64::new(0.0, 0.0));
    out
}

fn abs_taylor(p: &Poly, x: f64, upto: usize) -> Vec<f64> {
    let abs = Poly::new(p.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect())
        .expect("non-empty");
    taylor_shift(&abs, Complex64::new(x, 0.0), upto)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Refines `c` as an `m`-fold root and reports whether `p` is, to rounding
/// level, divisible by `(z - c)^m`.
fn validate_cluster(p: &Poly, c: Complex64, m: usize, spread: f64) -> Option<Complex64> {
    let mut c = c;
    for _ in 0..8 {
        let t = taylor_shift(p, c, m);
        if t[m] == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = t[m - 1] / (t[m] * m as f64);
        if !step.is_finite() || step.norm() > spread {
            break;
        }
        c -= step;
        if step.norm() <= EPS * (1.0 + c.norm()) {
            break;
        }
    }
    let t = taylor_shift(p, c, m);
    let a = abs_taylor(p, c.norm(), m);
    let ok = (0..m).all(|j| t[j].norm() <= CLUSTER_BACKWARD_ERROR * a[j].max(f64::MIN_POSITIVE));
    ok.then_some(c)
}

fn single_linkage(points: &[Complex64], members: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..members.len()).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        let mut i = i;
        while label[i] != r {
            let next = label[i];
            label[i] = r;
            i = next;
        }
        r
    }
    for a in 0..members.len() {
        for b in (a + 1)..members.len() {
            let (za, zb) = (points[members[a]], points[members[b]]);
            let scale = 1.0f64.max(za.norm()).max(zb.norm());
            if (za - zb).norm() <= radius * scale {
                let (ra, rb) = (find(&mut label, a), find(&mut label, b));
                if ra != rb {
                    label[rb.max(ra)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index = std::collections::BTreeMap::new();
    for (a, &member) in members.iter().enumerate() {
        let r = find(&mut label, a);
        let g = *root_index.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(member);
    }
    groups
}

fn detect_clusters(monic: &Poly, raw: &[Complex64], cluster_radius: f64) -> Vec<RootCluster> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..raw.len()).collect();
    split_clusters(monic, raw, &all, 0.5, cluster_radius, &mut out);
    out
}

fn split_clusters(
    monic: &Poly,
    raw: &[Complex64],
    members: &[usize],
    radius: f64,
    floor: f64,
    out: &mut Vec<RootCluster>,
) {
    for group in single_linkage(raw, members, radius.max(floor)) {
        let m = group.len();
        let centroid = group.iter().map(|&i| raw[i]).sum::<Complex64>() / m as f64;
        if m == 1 {
            out.push(RootCluster {
                center: raw[group[0]],
                multiplicity: 1,
            });
        } else if radius <= floor {
            out.push(RootCluster {
                center: centroid,
                multiplicity: m,
            });
        } else if let Some(center) = validate_cluster(
            monic,
            centroid,
            m,
            group.iter().map(|&i| (raw[i] - centroid).norm()).fold(0.0, f64::max),
        ) {
            out.push(RootCluster {
                center,
                multiplicity: m,
            });
        } else {
            split_clusters(monic, raw, &group, radius / 4.0, floor, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn perfect_square_reports_double_root() {
        let p = Poly::from_real(&[1.0, 2.0, 1.0]).unwrap();
        let rs = find_roots(&p).unwrap();
        assert_eq!(rs.clusters.len(), 1);
        assert_eq!(rs.clusters[0].multiplicity, 2);
        assert_abs_diff_eq!(rs.clusters[0].center.re, -1.0, epsilon = 1e-12);
        assert_eq!(rs.roots.len(), 2);
    }

    #[test]
    fn zero_and_constant_polynomials_rejected() {
        assert!(matches!(find_roots(&Poly::zero()), Err(Error::ZeroPolynomial)));
        assert!(matches!(find_roots(&Poly::one()), Err(Error::ConstantPolynomial)));
    }

    #[test]
    fn trailing_zero_slots_do_not_count() {
        // 4-inverse of z: z^3 stored in five slots
        let p = crate::poly::n_inverse(&Poly::z(), 4).unwrap();
        let rs = find_roots(&p).unwrap();
        assert_eq!(rs.roots.len(), 3);
        assert!(rs.roots.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn high_multiplicity_cluster_is_recovered() {
        let zeta = c(0.3, -0.4);
        for m in [3usize, 6, 10, 16] {
            let p = Poly::from_roots(&vec![zeta; m]);
            let rs = find_roots(&p).unwrap();
            assert_eq!(rs.clusters.len(), 1, "m = {m}: {:?}", rs.clusters);
            assert_eq!(rs.clusters[0].multiplicity, m);
            assert!((rs.clusters[0].center - zeta).norm() < 1e-9, "m = {m}");
        }
    }

    #[test]
    fn mixed_multiplicities() {
        let roots = [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.7, 0.2), c(0.1, 0.9)];
        let rs = find_roots(&Poly::from_roots(&roots)).unwrap();
        let mut mults: Vec<usize> = rs.clusters.iter().map(|c| c.multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 1, 3]);
    }

    #[test]
    fn close_distinct_roots_stay_separate() {
        let roots = [c(0.2, 0.0), c(0.2 + 1e-4, 0.0), c(-0.5, 0.5)];
        let rs = find_roots(&Poly::from_roots(&roots)).unwrap();
        assert_eq!(rs.clusters.len(), 3);
    }

    #[test]
    fn companion_fallback_agrees() {
        let p = Poly::from_roots(&[c(0.2, 0.1), c(-1.5, 0.0), c(0.0, 2.0)]);
        let monic = p.scale(p.leading().inv());
        let mut ev = companion_roots(&monic).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(-1.5, 0.0)).norm() < 1e-10);
        assert!((ev[1] - c(0.0, 2.0)).norm() < 1e-10);
        assert!((ev[2] - c(0.2, 0.1)).norm() < 1e-10);
    }

    #[test]
    fn large_degree_unit_roots() {
        // z^200 - 1
        let mut coeffs = vec![c(0.0, 0.0); 201];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[200] = c(1.0, 0.0);
        let rs = find_roots(&Poly::new(coeffs).unwrap()).unwrap();
        assert_eq!(rs.roots.len(), 200);
        assert!(rs.roots.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }
}
