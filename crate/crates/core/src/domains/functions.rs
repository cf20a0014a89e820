use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::duality::omission_test;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::find_roots;

/// Relative slack on the binomial coefficient bound, which the extremal
/// polynomials attain with equality.
pub const COEFFICIENT_BOUND_SLACK: f64 = 1e-12;

/// Coefficients `c_0..=c_k_max` of `k_T(z) = 2^{2/T} z / (1 - z^T)^{2/T}`,
/// where `c_k` multiplies `z^{kT+1}`.
pub fn koebe_t_coefficients(t: usize, k_max: usize) -> Result<Vec<f64>> {
    if t < 1 {
        return Err(Error::InvalidCycleLength(t));
    }
    let a = 2.0 / t as f64;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut c = 2f64.powf(a);
    out.push(c);
    for k in 1..=k_max {
        // (-1)^k binom(-a, k) = (a)_k / k!
        c *= (a + (k - 1) as f64) / k as f64;
        out.push(c);
    }
    Ok(out)
}

/// Coefficient of `z^{kT+1}` in `k_T`. Real and positive.
pub fn koebe_t(t: usize, k: usize) -> Result<f64> {
    Ok(koebe_t_coefficients(t, k)?[k])
}

/// Smallest `C_T` with `c_k <= C_T k^{2/T - 1}` for every `k >= 1`.
///
/// `c_k k^{1 - 2/T}` is monotone in `k` once `k` passes a few terms, with
/// limit `2^{2/T} / Gamma(2/T)`; the supremum is the larger of that limit and
/// the largest early ratio.
pub fn koebe_growth_constant(t: usize) -> Result<f64> {
    let a = 2.0 / t.max(1) as f64;
    let coeffs = koebe_t_coefficients(t, 64)?;
    let early = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c / (k as f64).powf(a - 1.0))
        .fold(0.0, f64::max);
    Ok(early.max(2f64.powf(a) / gamma(a)))
}

/// Checks `|q_k| <= binom(N, k) |w|` for `q` of degree `N` omitting `w` in the open disk.
pub fn coefficient_bound_check(q: &Poly, w: Complex64) -> Result<bool> {
    if q.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("coefficient bound needs q(0) = 0".into()));
    }
    let Some(n) = q.true_degree() else {
        return Ok(true);
    };
    if !omits_in_open_disk(q, w)? {
        return Err(Error::Precondition(format!("q attains {w} in the unit disk")));
    }
    let mut binom = 1.0;
    for k in 1..=n {
        binom *= (n - k + 1) as f64 / k as f64;
        if q.coeff(k).norm() > binom * w.norm() * (1.0 + COEFFICIENT_BOUND_SLACK) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The closed-disk omission test decides most cases; when `w` lies on the
/// boundary image the zeros of `q - w` are located directly.
fn omits_in_open_disk(q: &Poly, w: Complex64) -> Result<bool> {
    if omission_test(q, w)?.omitted {
        return Ok(true);
    }
    let shifted = q - &Poly::constant(w);
    let roots = find_roots(&shifted)?;
    Ok(roots.roots.iter().all(|z| z.norm() >= 1.0 - 1e-9))
}

/// `pi * sum k |q_k|^2`: the area of `q(unit disk)` counted with multiplicity.
pub fn area_of_image(q: &Poly) -> Result<f64> {
    if q.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("area formula needs q(0) = 0".into()));
    }
    Ok(PI
        * q.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm_sqr())
            .sum::<f64>())
}

/// Fejér mean of `z/(1-z)`: `sum_{k=1}^n (1 - k/(n+1)) z^k`.
///
/// Its real part on the unit circle is `(F_n - 1)/2` with `F_n >= 0` the
/// Fejér kernel, so it maps the disk into `Re w > -1/2`.
pub fn fejer_halfplane(n: usize) -> Result<Poly> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = Complex64::new(1.0 - k as f64 / (n + 1) as f64, 0.0);
    }
    Poly::new(coeffs)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CaratheodoryReport {
    /// Sampled minimum of `Re f` on the unit circle.
    pub min_real_part: f64,
    pub max_coefficient: f64,
    pub maps_into_half_plane: bool,
    /// Every coefficient has modulus at most one.
    pub bound_holds: bool,
}

/// Samples `Re f` on the circle and compares with the coefficient bound for
/// maps into `Re w > -1/2`.
pub fn caratheodory_check(f: &Poly, samples: usize) -> Result<CaratheodoryReport> {
    if f.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("Caratheodory check needs f(0) = 0".into()));
    }
    let samples = samples.max(16);
    let min_real_part = (0..samples)
        .map(|j| f.eval(Complex64::from_polar(1.0, TAU * j as f64 / samples as f64)).re)
        .fold(f64::INFINITY, f64::min);
    let max_coefficient = f.coeffs().iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
    Ok(CaratheodoryReport {
        min_real_part,
        max_coefficient,
        maps_into_half_plane: min_real_part >= -0.5 - 1e-12,
        bound_holds: max_coefficient <= 1.0 + 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn koebe_examples() {
        assert_eq!(koebe_t(1, 2).unwrap(), 12.0);
        assert_eq!(koebe_t(1, 0).unwrap(), 4.0);
        assert!((koebe_t(2, 1).unwrap() - 2.0).abs() < 1e-15);
        assert!((koebe_t(2, 37).unwrap() - 2.0).abs() < 1e-13);
        assert!(koebe_t(0, 1).is_err());
    }

    #[test]
    fn koebe_growth() {
        for t in 1..=6 {
            let ct = koebe_growth_constant(t).unwrap();
            let a = 2.0 / t as f64;
            for (k, ck) in koebe_t_coefficients(t, 200).unwrap().iter().enumerate().skip(1) {
                assert!(*ck <= ct * (k as f64).powf(a - 1.0) * (1.0 + 1e-12), "T={t} k={k}");
            }
        }
        assert_eq!(koebe_growth_constant(1).unwrap(), 8.0);
    }

    #[test]
    fn coefficient_bound_equality_family() {
        let w = c(-0.3, 0.0);
        let n = 5;
        let one_minus_z = Poly::from_real(&[1.0, -1.0]).unwrap();
        let q = &Poly::constant(w) - &one_minus_z.pow(n).scale(w);
        assert!(coefficient_bound_check(&q, w).unwrap());
        let mut binom = 1.0;
        for k in 1..=n {
            binom *= (n - k + 1) as f64 / k as f64;
            assert!((q.coeff(k).norm() - binom * w.norm()).abs() < 1e-15);
        }
        assert!(coefficient_bound_check(&Poly::z(), c(2.0, 0.0)).unwrap());
        assert!(coefficient_bound_check(&Poly::z(), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn area_examples() {
        assert!((area_of_image(&Poly::z()).unwrap() - PI).abs() < 1e-15);
        let q = Poly::from_real(&[0.0, 2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((area_of_image(&q).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!(area_of_image(&Poly::one()).is_err());
    }

    #[test]
    fn fejer_maps_into_half_plane() {
        for n in 1..=40 {
            let r = caratheodory_check(&fejer_halfplane(n).unwrap(), 8192).unwrap();
            assert!(r.maps_into_half_plane, "n = {n}: {}", r.min_real_part);
            assert!(r.bound_holds);
        }
    }
}
