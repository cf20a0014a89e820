//! Schur stability: every root strictly inside the unit circle.
//!
//! Two independent verdicts are computed. The root-modulus check supplies
//! `max_modulus`; the Schur–Cohn recursion runs on `p((1 - tol) z)` so that it
//! answers exactly the same question, "are all roots below `1 - tol` in
//! modulus". The two must agree unless the largest root sits within the
//! agreement margin of the threshold.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{find_roots_with, RootSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchurMethod {
    Roots,
    SchurCohn,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurVerdict {
    pub stable: bool,
    pub max_modulus: f64,
    /// `1 - max_modulus`.
    pub margin: f64,
    /// Method whose answer is reported in `stable`.
    pub method: SchurMethod,
    /// Verdict of the Schur–Cohn recursion on the same question.
    pub schur_cohn_stable: bool,
    /// How far rounding can move the outermost root cluster. An `m`-fold root
    /// moves by roughly `eps^(1/m)`, so near the threshold the two methods may
    /// legitimately disagree within this radius.
    pub root_sensitivity: f64,
    #[serde(skip)]
    pub roots: RootSet,
}

pub fn schur_test(p: &Poly) -> Result<SchurVerdict> {
    schur_test_with(p, &Config::default())
}

pub fn schur_test_with(p: &Poly, cfg: &Config) -> Result<SchurVerdict> {
    let roots = find_roots_with(p, cfg)?;
    let max_modulus = roots.max_modulus();
    let threshold = 1.0 - cfg.strictness_tolerance;
    let by_roots = max_modulus < threshold;
    let by_recursion = schur_cohn(&p.trimmed().dilate(threshold));
    let root_sensitivity = outer_cluster_sensitivity(p, &roots);
    let margin = cfg.agreement_margin.max(root_sensitivity);
    if by_roots != by_recursion && (max_modulus - threshold).abs() > margin {
        return Err(Error::MethodDisagreement(format!(
            "root moduli give max {max_modulus:.17e} ({}) but the Schur-Cohn recursion says {}",
            if by_roots { "stable" } else { "unstable" },
            if by_recursion { "stable" } else { "unstable" },
        )));
    }
    Ok(SchurVerdict {
        stable: by_roots,
        max_modulus,
        margin: 1.0 - max_modulus,
        method: SchurMethod::Roots,
        schur_cohn_stable: by_recursion,
        root_sensitivity,
        roots,
    })
}

/// Relative coefficient error assumed for the recursion, per unit of degree.
const RECURSION_ROUNDING: f64 = 64.0 * f64::EPSILON;

/// First-order displacement of the outermost cluster of multiplicity `m` under a
/// relative coefficient perturbation `eps`: `(eps sum |c_k| |z|^k / |p^(m)(z) / m!|)^(1/m)`.
fn outer_cluster_sensitivity(p: &Poly, roots: &RootSet) -> f64 {
    let Some(outer) = roots.clusters.iter().max_by(|a, b| a.center.norm().total_cmp(&b.center.norm())) else {
        return 0.0;
    };
    let z = outer.center;
    let eps = RECURSION_ROUNDING * p.degree() as f64;
    let mut d = p.trimmed();
    let mut factorial = 1.0;
    for k in 1..=outer.multiplicity {
        d = d.derivative();
        factorial *= k as f64;
    }
    let taylor = d.eval(z).norm() / factorial;
    if taylor == 0.0 {
        return f64::INFINITY;
    }
    (eps * p.abs_eval(z.norm()) / taylor).powf(1.0 / outer.multiplicity as f64)
}

/// Schur–Cohn recursion: all roots in the open unit disk.
///
/// Each step requires `|a_n| > |a_0|` and replaces `p` by
/// `(conj(a_n) p - a_0 p#) / z`, where `p#(z) = z^n conj(p(1 / conj z))`.
pub fn schur_cohn(p: &Poly) -> bool {
    let Some(deg) = p.true_degree() else {
        return false;
    };
    let mut a: Vec<Complex64> = p.coeffs()[..=deg].to_vec();
    while a.len() > 1 {
        let n = a.len() - 1;
        let (lead, constant) = (a[n], a[0]);
        if lead.norm() <= constant.norm() {
            return false;
        }
        let next: Vec<Complex64> = (1..=n)
            .map(|k| lead.conj() * a[k] - constant * a[n - k].conj())
            .collect();
        let scale = next.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return false;
        }
        a = next.into_iter().map(|c| c / scale).collect();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_cases() {
        let v = schur_test(&Poly::from_real(&[-0.5, 1.0]).unwrap()).unwrap();
        assert!(v.stable);
        assert!((v.max_modulus - 0.5).abs() < 1e-15);
        let v = schur_test(&Poly::from_real(&[1.0, 2.0, 1.0]).unwrap()).unwrap();
        assert!(!v.stable);
        assert!(schur_test(&Poly::zero()).is_err());
    }

    #[test]
    fn recursion_matches_known_roots() {
        let c = Complex64::new;
        assert!(schur_cohn(&Poly::from_roots(&[c(0.9, 0.0), c(-0.3, 0.5), c(0.0, -0.99)])));
        assert!(!schur_cohn(&Poly::from_roots(&[c(0.9, 0.0), c(1.01, 0.0)])));
        assert!(!schur_cohn(&Poly::from_roots(&[c(0.0, 1.0)])));
    }

    #[test]
    fn random_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let deg = rng.random_range(1..=12);
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            // errors only on disagreement beyond the margin
            schur_test(&Poly::new(coeffs).unwrap()).unwrap();
        }
    }

    #[test]
    fn multiple_root_near_threshold() {
        let zeta = Complex64::new(0.935517593238931, -0.34951099604725683);
        let v = schur_test(&Poly::from_roots(&[zeta; 5])).unwrap();
        assert!(v.stable);
        assert!(v.root_sensitivity > 1e-3);
    }

    proptest! {
        #[test]
        fn verdict_tracks_modulus(re in -1.5f64..1.5, im in -1.5f64..1.5, k in 1usize..6) {
            let zeta = Complex64::new(re, im);
            let v = schur_test(&Poly::from_roots(&vec![zeta; k])).unwrap();
            prop_assert_eq!(v.stable, v.max_modulus < 1.0 - 1e-9);
            prop_assert!((v.max_modulus - zeta.norm()).abs() < 1e-9);
        }
    }
}
