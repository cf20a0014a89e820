//! Geometry of stabilization domains and multiplier sets.
//!
//! `S_n`, the set of multipliers some order-`n` design stabilizes at a fixed
//! point, is the image of the unit disk under `u_n(z) = 1 - (1 - z)^n`.

mod functions;
mod multiplier;

pub use functions::{
    area_of_image, caratheodory_check, coefficient_bound_check, fejer_halfplane, koebe_growth_constant,
    koebe_t, koebe_t_coefficients, CaratheodoryReport, COEFFICIENT_BOUND_SLACK,
};
pub use multiplier::{degree_lower_bound, BoundKind, DegreeBound, DomainGeometry, MStar, MultiplierSet};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Half-width of the band around `|zeta| = 1` classified as boundary.
pub const BOUNDARY_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SnMembership {
    pub status: Membership,
    /// Preimage `zeta` of `mu` under `u_n` with the smallest modulus.
    pub witness: Complex64,
}

/// Classifies `mu` against `S_n`.
pub fn s_n_member(mu: Complex64, n: usize) -> Result<SnMembership> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    let one = Complex64::new(1.0, 0.0);
    if mu == one {
        // the image point of the boundary point z = 1 only
        return Ok(SnMembership {
            status: Membership::Outside,
            witness: one,
        });
    }
    // Conjugate pairs tie in modulus; the upper one is preferred.
    let witness = crate::duality::t_th_roots(one - mu, n)
        .into_iter()
        .map(|w| one - w)
        .min_by(|a, b| {
            let (ra, rb) = (a.norm(), b.norm());
            if (ra - rb).abs() <= 1e-12 * ra.max(rb) {
                b.im.total_cmp(&a.im)
            } else {
                ra.total_cmp(&rb)
            }
        })
        .expect("n >= 1");
    let r = witness.norm();
    let status = if r < 1.0 - BOUNDARY_BAND {
        Membership::Inside
    } else if r <= 1.0 + BOUNDARY_BAND {
        Membership::Boundary
    } else {
        Membership::Outside
    };
    Ok(SnMembership { status, witness })
}

/// `u_n(z) = 1 - (1 - z)^n`.
pub fn u_n(z: Complex64, n: usize) -> Complex64 {
    Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - z).powu(n as u32)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCurve {
    pub n: usize,
    pub samples: Vec<(f64, Complex64)>,
}

/// `z(phi) = 1 - 2^n cos^n(phi/n) e^{i phi}` on `resolution` equally spaced
/// angles from `-pi` to `pi` inclusive.
pub fn s_n_boundary(n: usize, resolution: usize) -> Result<BoundaryCurve> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    if resolution < 16 {
        return Err(Error::Precondition(format!("resolution {resolution} is below 16")));
    }
    let samples = (0..resolution)
        .map(|j| {
            let phi = -PI + 2.0 * PI * j as f64 / (resolution - 1) as f64;
            (phi, boundary_point(n, phi))
        })
        .collect();
    Ok(BoundaryCurve { n, samples })
}

pub fn boundary_point(n: usize, phi: f64) -> Complex64 {
    let radius = (2.0 * (phi / n as f64).cos()).powi(n as i32);
    Complex64::new(1.0, 0.0) - Complex64::from_polar(radius, phi)
}
