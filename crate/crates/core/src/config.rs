//! Tolerances and sampling resolutions shared by every module.
//!
//! The on-disk format is plain `key = value` lines; `#` starts a comment.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    /// A polynomial is Schur stable when its largest root modulus is below `1 - strictness`.
    pub strictness_tolerance: f64,
    /// Image-space clearance below which an omission verdict is indeterminate.
    pub omission_tolerance: f64,
    /// Margin above which the Schur and omission verdicts must agree.
    pub agreement_margin: f64,
    /// Boundary samples of the first winding-number pass.
    pub omission_initial_samples: usize,
    /// Cap for the adaptive boundary sampler.
    pub omission_max_samples: usize,
    /// Roots closer than this are merged into one cluster.
    pub cluster_radius: f64,
    pub aberth_max_iterations: usize,
    pub convergence_tolerance: f64,
    pub escape_radius: f64,
    pub max_order: usize,
    pub probe_boundary_points: usize,
    pub probe_interior_points: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            strictness_tolerance: 1e-9,
            omission_tolerance: 1e-8,
            agreement_margin: 1e-6,
            omission_initial_samples: 4096,
            omission_max_samples: 1 << 22,
            cluster_radius: 1e-6,
            aberth_max_iterations: 500,
            convergence_tolerance: 1e-8,
            escape_radius: 1e6,
            max_order: 64,
            probe_boundary_points: 64,
            probe_interior_points: 16,
        }
    }
}

impl Config {
    pub const KEYS: [&'static str; 12] = [
        "strictness_tolerance",
        "omission_tolerance",
        "agreement_margin",
        "omission_initial_samples",
        "omission_max_samples",
        "cluster_radius",
        "aberth_max_iterations",
        "convergence_tolerance",
        "escape_radius",
        "max_order",
        "probe_boundary_points",
        "probe_interior_points",
    ];

    pub fn load(path: impl AsRef<Path>) -> Result<Config> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut cfg = Config::default();
        cfg.merge_str(&text)?;
        Ok(cfg)
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        self.validate()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn real(v: &str) -> Result<f64> {
            v.parse().map_err(|_| Error::Config(format!("not a number: {v:?}")))
        }
        fn count(v: &str) -> Result<usize> {
            v.parse().map_err(|_| Error::Config(format!("not a count: {v:?}")))
        }
        match key {
            "strictness_tolerance" => self.strictness_tolerance = real(value)?,
            "omission_tolerance" => self.omission_tolerance = real(value)?,
            "agreement_margin" => self.agreement_margin = real(value)?,
            "omission_initial_samples" => self.omission_initial_samples = count(value)?,
            "omission_max_samples" => self.omission_max_samples = count(value)?,
            "cluster_radius" => self.cluster_radius = real(value)?,
            "aberth_max_iterations" => self.aberth_max_iterations = count(value)?,
            "convergence_tolerance" => self.convergence_tolerance = real(value)?,
            "escape_radius" => self.escape_radius = real(value)?,
            "max_order" => self.max_order = count(value)?,
            "probe_boundary_points" => self.probe_boundary_points = count(value)?,
            "probe_interior_points" => self.probe_interior_points = count(value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let tolerances = [
            ("strictness_tolerance", self.strictness_tolerance),
            ("omission_tolerance", self.omission_tolerance),
            ("agreement_margin", self.agreement_margin),
            ("cluster_radius", self.cluster_radius),
            ("convergence_tolerance", self.convergence_tolerance),
            ("escape_radius", self.escape_radius),
        ];
        for (name, v) in tolerances {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.omission_initial_samples < 16 || self.omission_max_samples < self.omission_initial_samples {
            return Err(Error::Config("omission sample counts are inconsistent".into()));
        }
        if self.max_order == 0 || self.aberth_max_iterations == 0 {
            return Err(Error::Config("max_order and aberth_max_iterations must be positive".into()));
        }
        Ok(())
    }
}
