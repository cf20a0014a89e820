//! Dense complex polynomials in ascending coefficient order.
//!
//! A [`Poly`] may carry trailing zero coefficients on purpose: the
//! multiplicative `n`-inverse of a polynomial of degree below `n` has a
//! vanishing leading slot, and that slot is part of the value. Use
//! [`Poly::true_degree`] when the algebraic degree matters.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex polynomial, `coeffs[k]` multiplies `z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for Poly {
    type Error = Error;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<Complex64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        Ok(Poly { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Poly::constant(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Poly::constant(Complex64::new(1.0, 0.0))
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Poly {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// `prod (z - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Poly::one();
        for &r in roots {
            p = &p * &Poly { coeffs: vec![-r, Complex64::new(1.0, 0.0)] };
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the last stored coefficient, zero or not.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the last nonzero coefficient, `None` for the zero polynomial.
    pub fn true_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.true_degree().is_none()
    }

    /// Copy with trailing zero coefficients removed (keeps at least one slot).
    pub fn trimmed(&self) -> Poly {
        let end = self.true_degree().unwrap_or(0);
        Poly {
            coeffs: self.coeffs[..=end].to_vec(),
        }
    }

    /// Leading coefficient of the true degree (zero for the zero polynomial).
    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.true_degree().unwrap_or(0)]
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    /// Sum of coefficient moduli; bounds `|p|` on the closed unit disk.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `sum |c_k| r^k`, the natural scale for rounding errors of Horner at `|z| = r`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(inner(z))` by Horner on polynomials.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut rev = self.coeffs.iter().rev();
        let first = Poly::constant(*rev.next().expect("non-empty"));
        rev.fold(first, |acc, &c| &(&acc * inner) + &Poly::constant(c))
    }

    /// `self(z^k)`.
    pub fn substitute_power(&self, k: usize) -> Poly {
        assert!(k >= 1, "substitute_power needs k >= 1");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.degree() * k + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[j * k] = c;
        }
        Poly { coeffs }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// `p(r z)`.
    pub fn dilate(&self, r: f64) -> Poly {
        let mut rk = 1.0;
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| {
                    let v = c * rk;
                    rk *= r;
                    v
                })
                .collect(),
        }
    }

    /// Largest coefficientwise distance, treating missing slots as zero.
    pub fn max_coeff_distance(&self, other: &Poly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Coefficient of `z^k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Multiplicative `n`-inverse: `h_n + h_{n-1} z + ... + h_0 z^n`.
///
/// Defined for every polynomial of degree at most `n`, including those whose
/// `z^n` slot is zero; the result then has a zero constant term. Applying it
/// twice with the same `n` returns the input padded to `n + 1` slots.
pub fn n_inverse(p: &Poly, n: usize) -> Result<Poly> {
    let deg = p.true_degree().unwrap_or(0);
    if deg > n {
        return Err(Error::DegreeExceedsInverseOrder { degree: deg, n });
    }
    let coeffs = (0..=n).map(|k| p.coeff(n - k)).collect();
    Ok(Poly { coeffs })
}

/// `z * r(z^t)`: the T-root transform of `z * r(z)^t`.
///
/// Output spectrum lies in `t Z + 1`.
pub fn t_root_transform(r: &Poly, t: usize) -> Result<Poly> {
    if t < 1 {
        return Err(Error::InvalidCycleLength(t));
    }
    Ok(r.substitute_power(t).shift(1))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn add(self, rhs: &'a Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly {
            coeffs: (0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn sub(self, rhs: &'a Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly {
            coeffs: (0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_identity_and_known_root() {
        assert_eq!(Poly::z().eval(c(3.0, 4.0)), c(3.0, 4.0));
        let sq = Poly::from_real(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(sq.eval(c(-1.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn empty_coefficients_rejected() {
        assert!(matches!(Poly::new(vec![]), Err(Error::EmptyPolynomial)));
    }

    #[test]
    fn four_inverse_of_z_is_z_cubed() {
        let inv = n_inverse(&Poly::z(), 4).unwrap();
        assert_eq!(inv.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(inv.true_degree(), Some(3));
        assert_eq!(n_inverse(&Poly::one(), 0).unwrap(), Poly::one());
    }

    #[test]
    fn n_inverse_rejects_high_degree() {
        let p = Poly::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            n_inverse(&p, 1),
            Err(Error::DegreeExceedsInverseOrder { degree: 2, n: 1 })
        ));
    }

    #[test]
    fn t_root_transform_examples() {
        assert_eq!(t_root_transform(&Poly::one(), 3).unwrap().trimmed(), Poly::z());
        let r = Poly::from_real(&[0.75, 0.25]).unwrap();
        let q = t_root_transform(&r, 2).unwrap();
        assert_eq!(q.coeffs(), &[c(0.0, 0.0), c(0.75, 0.0), c(0.0, 0.0), c(0.25, 0.0)]);
        let r = Poly::new(vec![c(0.3, 0.1), c(0.7, -0.1)]).unwrap();
        let q = t_root_transform(&r, 1).unwrap();
        assert_eq!(q.coeffs(), &[c(0.0, 0.0), c(0.3, 0.1), c(0.7, -0.1)]);
        assert!(matches!(t_root_transform(&r, 0), Err(Error::InvalidCycleLength(0))));
    }

    #[test]
    fn compose_and_pow() {
        let p = Poly::from_real(&[1.0, 1.0]).unwrap();
        let sq = p.pow(2);
        assert_eq!(sq, Poly::from_real(&[1.0, 2.0, 1.0]).unwrap());
        let comp = sq.compose(&Poly::from_real(&[0.0, 2.0]).unwrap());
        assert_eq!(comp, Poly::from_real(&[1.0, 4.0, 4.0]).unwrap());
        assert_eq!(Poly::from_roots(&[c(-1.0, 0.0), c(-1.0, 0.0)]), sq);
    }

    fn naive_eval(p: &Poly, z: Complex64) -> Complex64 {
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, &ck)| ck * z.powu(k as u32))
            .sum()
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn horner_matches_power_sum(p in arb_poly(64), r in 0.0f64..2.0, th in 0.0f64..6.3) {
            let z = Complex64::from_polar(r, th);
            let h = p.eval(z);
            let n = naive_eval(&p, z);
            // relative to the absolute-value sum, which is what rounding scales with
            prop_assert!((h - n).norm() <= 1e-12 * (1.0 + p.abs_eval(r)));
        }

        #[test]
        fn n_inverse_is_an_involution(p in arb_poly(32), extra in 0usize..4) {
            let n = p.degree() + extra;
            let back = n_inverse(&n_inverse(&p, n).unwrap(), n).unwrap();
            prop_assert_eq!(back.coeffs()[..p.coeffs().len()].to_vec(), p.coeffs().to_vec());
            prop_assert!(back.coeffs()[p.coeffs().len()..].iter().all(|c| *c == Complex64::new(0.0, 0.0)));
        }
    }
}
