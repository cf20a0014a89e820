use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};

/// A compact set of multipliers a single design must stabilize.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierSet {
    Point {
        mu: Complex64,
    },
    /// `[-mu_M, -1]` on the real axis.
    RealSegment {
        #[serde(rename = "mu_M")]
        mu_m: f64,
    },
    /// `|z + mu_M/2| <= mu_M/2`.
    HorocycleDisk {
        #[serde(rename = "mu_M")]
        mu_m: f64,
    },
    /// `|z| <= mu_M` and `|arg z| >= theta`.
    Sector {
        #[serde(rename = "mu_M")]
        mu_m: f64,
        theta: f64,
    },
}

/// Image `M* = {1/z : z in M}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MStar {
    Point { w: Complex64 },
    /// `[-1, -1/mu_M]`.
    Segment { from: f64, to: f64 },
    /// `Re w <= re_max`.
    HalfPlane { re_max: f64 },
    /// `|w| >= min_modulus` and `|arg w| >= min_arg`.
    SectorExterior { min_modulus: f64, min_arg: f64 },
}

impl MStar {
    pub fn contains(&self, w: Complex64) -> bool {
        match *self {
            MStar::Point { w: p } => w == p,
            MStar::Segment { from, to } => w.im == 0.0 && from <= w.re && w.re <= to,
            MStar::HalfPlane { re_max } => w.re <= re_max,
            MStar::SectorExterior { min_modulus, min_arg } => w.norm() >= min_modulus && w.arg().abs() >= min_arg,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DomainGeometry {
    pub m_star: MStar,
    /// Distance from the origin to `M*`, the complement of `Omega`.
    pub lambda_omega: f64,
    #[serde(rename = "mu_M")]
    pub mu_m: f64,
    #[serde(rename = "T")]
    pub t: usize,
}

impl DomainGeometry {
    /// `mu_M * lambda^T`, equal to one.
    pub fn duality_product(&self) -> f64 {
        self.mu_m * self.lambda_omega.powi(self.t as i32)
    }
}

impl MultiplierSet {
    pub fn point(mu: Complex64) -> Result<Self> {
        if mu == Complex64::new(0.0, 0.0) || !mu.is_finite() {
            return Err(Error::ZeroMultiplier);
        }
        Ok(MultiplierSet::Point { mu })
    }

    pub fn real_segment(mu_m: f64) -> Result<Self> {
        check_size(mu_m)?;
        Ok(MultiplierSet::RealSegment { mu_m })
    }

    pub fn horocycle(mu_m: f64) -> Result<Self> {
        check_size(mu_m)?;
        Ok(MultiplierSet::HorocycleDisk { mu_m })
    }

    pub fn sector(mu_m: f64, theta: f64) -> Result<Self> {
        check_size(mu_m)?;
        if !(theta > 0.0 && theta <= PI) {
            return Err(Error::Precondition(format!("sector angle {theta} outside (0, pi]")));
        }
        Ok(MultiplierSet::Sector { mu_m, theta })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MultiplierSet::Point { .. } => "point",
            MultiplierSet::RealSegment { .. } => "real_segment",
            MultiplierSet::HorocycleDisk { .. } => "horocycle_disk",
            MultiplierSet::Sector { .. } => "sector",
        }
    }

    /// `sup |z|` over the set.
    pub fn mu_m(&self) -> f64 {
        match *self {
            MultiplierSet::Point { mu } => mu.norm(),
            MultiplierSet::RealSegment { mu_m }
            | MultiplierSet::HorocycleDisk { mu_m }
            | MultiplierSet::Sector { mu_m, .. } => mu_m,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            MultiplierSet::Point { mu } => z == mu,
            MultiplierSet::RealSegment { mu_m } => z.im == 0.0 && -mu_m <= z.re && z.re <= -1.0,
            MultiplierSet::HorocycleDisk { mu_m } => (z + mu_m / 2.0).norm() <= mu_m / 2.0,
            MultiplierSet::Sector { mu_m, theta } => z.norm() <= mu_m && z.arg().abs() >= theta,
        }
    }

    pub fn m_star(&self) -> MStar {
        match *self {
            MultiplierSet::Point { mu } => MStar::Point { w: mu.inv() },
            MultiplierSet::RealSegment { mu_m } => MStar::Segment {
                from: -1.0,
                to: -1.0 / mu_m,
            },
            MultiplierSet::HorocycleDisk { mu_m } => MStar::HalfPlane { re_max: -1.0 / mu_m },
            MultiplierSet::Sector { mu_m, theta } => MStar::SectorExterior {
                min_modulus: 1.0 / mu_m,
                min_arg: theta,
            },
        }
    }

    pub fn geometry(&self, t: usize) -> Result<DomainGeometry> {
        if t < 1 {
            return Err(Error::InvalidCycleLength(t));
        }
        let mu_m = self.mu_m();
        Ok(DomainGeometry {
            m_star: self.m_star(),
            lambda_omega: mu_m.powf(-1.0 / t as f64),
            mu_m,
            t,
        })
    }

    /// Multipliers a design must pass: `probe_boundary_points` on the
    /// boundary of the set and `probe_interior_points` inside it. The origin,
    /// a boundary point of the horocycle and the sector, is never probed.
    pub fn probes(&self, cfg: &Config) -> Vec<Complex64> {
        let nb = cfg.probe_boundary_points.max(1);
        let ni = cfg.probe_interior_points;
        let c = Complex64::new;
        let frac = |j: usize, n: usize| (j as f64 + 0.5) / n as f64;
        match *self {
            MultiplierSet::Point { mu } => vec![mu],
            MultiplierSet::RealSegment { mu_m } => {
                // the segment is its own boundary; include both ends exactly
                let mut out: Vec<Complex64> = (0..nb)
                    .map(|j| {
                        let s = if nb == 1 { 1.0 } else { j as f64 / (nb - 1) as f64 };
                        c(-1.0 - s * (mu_m - 1.0), 0.0)
                    })
                    .collect();
                out.extend((0..ni).map(|j| c(-1.0 - frac(j, ni) * (mu_m - 1.0), 0.0)));
                out
            }
            MultiplierSet::HorocycleDisk { mu_m } => {
                let r = mu_m / 2.0;
                let mut out: Vec<Complex64> = (0..nb)
                    .map(|j| c(-r, 0.0) + Complex64::from_polar(r, TAU * frac(j, nb)))
                    .collect();
                out.extend((0..ni).map(|j| c(-r, 0.0) + Complex64::from_polar(r / 2.0, TAU * frac(j, ni))));
                out
            }
            MultiplierSet::Sector { mu_m, theta } => {
                let rays = nb / 4;
                let arc = nb - 2 * rays;
                let mut out = Vec::with_capacity(nb + ni);
                for j in 0..rays {
                    let r = mu_m * (j + 1) as f64 / rays as f64;
                    out.push(Complex64::from_polar(r, theta));
                    out.push(Complex64::from_polar(r, -theta));
                }
                // arc from theta through pi to -theta
                let sweep = 2.0 * (PI - theta);
                for j in 0..arc {
                    let s = if arc == 1 { 0.5 } else { j as f64 / (arc - 1) as f64 };
                    out.push(Complex64::from_polar(mu_m, theta + s * sweep));
                }
                let mid = theta + (PI - theta) / 2.0;
                for j in 0..ni {
                    let r = mu_m * frac(j / 2, ni.div_ceil(2).max(1));
                    let angle = if j % 2 == 0 { mid } else { -mid };
                    out.push(Complex64::from_polar(r, angle));
                }
                out
            }
        }
    }
}

fn check_size(mu_m: f64) -> Result<()> {
    if !(mu_m >= 1.0 && mu_m.is_finite()) {
        return Err(Error::Precondition(format!("mu_M = {mu_m} must be at least 1")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Proven necessary condition.
    Certified,
    /// Order-of-magnitude expectation without a proven constant.
    Advisory,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBound {
    /// Every design of order `n` stabilizing the set has `n >= bound`.
    pub bound: f64,
    pub kind: BoundKind,
    pub rule: &'static str,
    /// The set contains a real multiplier `mu >= 1`, which no real design stabilizes.
    pub real_obstruction: bool,
    pub advisory: Option<String>,
}

/// Necessary lower bound on the design order `n`.
///
/// The underlying estimates bound the degree `(n-1)T + 1` of `q`; they are
/// converted back to `n` here.
pub fn degree_lower_bound(m: &MultiplierSet, t: usize) -> Result<DegreeBound> {
    if t < 1 {
        return Err(Error::InvalidCycleLength(t));
    }
    let tf = t as f64;
    let from_q_degree = |d: f64| ((d - 1.0) / tf + 1.0).max(1.0);
    let mu_m = m.mu_m();
    Ok(match *m {
        MultiplierSet::Point { mu } => DegreeBound {
            // sum |q_k| >= q(1) = 1 against |q_k| <= binom(deg q, k) / |mu|
            bound: from_q_degree((mu.norm() + 1.0).log2()),
            kind: BoundKind::Certified,
            rule: "binomial coefficient bound: 2^deg(q) >= |mu| + 1",
            real_obstruction: mu.im == 0.0 && mu.re >= 1.0,
            advisory: None,
        },
        MultiplierSet::RealSegment { mu_m } => DegreeBound {
            bound: mu_m.sqrt() / (4.0 * tf),
            kind: BoundKind::Certified,
            rule: "T-slit domain: n >= 1/(4 T lambda^(T/2)), lambda = mu_M^(-1/T)",
            real_obstruction: false,
            advisory: None,
        },
        MultiplierSet::HorocycleDisk { mu_m } => DegreeBound {
            bound: from_q_degree(mu_m / 8.0),
            kind: BoundKind::Certified,
            rule: "half-plane: deg(q) >= 1/(8 lambda), lambda = 1/mu_M",
            real_obstruction: false,
            advisory: None,
        },
        MultiplierSet::Sector { theta, .. } => {
            if t != 1 {
                return Err(Error::Unsupported("sector lower bound is only known for fixed points (T = 1)".into()));
            }
            DegreeBound {
                bound: mu_m.sqrt() / (3.0 * 3f64.sqrt()),
                kind: BoundKind::Certified,
                rule: "simply connected Omega: n >= sqrt(mu_M)/(3 sqrt 3)",
                real_obstruction: false,
                advisory: Some(format!(
                    "order expected to grow like c(theta) exp(mu_M) = c({theta}) * {:.3e}; no constant is known",
                    mu_m.exp()
                )),
            }
        }
    })
}
