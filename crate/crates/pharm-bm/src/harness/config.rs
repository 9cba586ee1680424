//! Config schema for the experiment harness (one JSON document with
//! `bodies` / `solver` / `experiment` / `output` sections).

use crate::convex::{random_body, SupportFn};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Disk {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        semi_axes: [f64; 2],
        #[serde(default = "default_ellipse_order")]
        kmax: usize,
    },
    Fourier {
        c0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Random {
        seed: u64,
        #[serde(default = "default_random_kmax")]
        kmax: usize,
        #[serde(default = "default_random_decay")]
        decay: f64,
        #[serde(default = "default_random_amplitude")]
        amplitude: f64,
    },
    /// The degenerate body `{0}`; usable only as a combination direction.
    Point,
}

fn default_ellipse_order() -> usize {
    48
}
fn default_random_kmax() -> usize {
    6
}
fn default_random_decay() -> f64 {
    2.0
}
fn default_random_amplitude() -> f64 {
    0.03
}

impl BodySpec {
    pub fn build(&self) -> Result<SupportFn> {
        match self {
            BodySpec::Disk { radius, center } => {
                SupportFn::disk(*radius, Vec2::new(center[0], center[1]))
            }
            BodySpec::Ellipse { semi_axes, kmax } => {
                SupportFn::ellipse(semi_axes[0], semi_axes[1], *kmax)
            }
            BodySpec::Fourier { c0, cos, sin } => {
                SupportFn::with_default_floor(*c0, cos.clone(), sin.clone())
            }
            BodySpec::Random {
                seed,
                kmax,
                decay,
                amplitude,
            } => random_body(*seed, *kmax, *decay, *amplitude),
            BodySpec::Point => Ok(SupportFn::origin_point()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodiesSection {
    pub k0: BodySpec,
    #[serde(default)]
    pub kprime: Option<BodySpec>,
    /// Seeds for generated body pairs in batch experiments.
    #[serde(default)]
    pub pair_seeds: Vec<u64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    pub angular: usize,
    pub radial: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub p: f64,
    pub mesh: MeshSpec,
    #[serde(default = "default_reg_delta")]
    pub reg_delta: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_reg_delta() -> f64 {
    crate::ring::DEFAULT_REG_DELTA
}
fn default_tol() -> f64 {
    crate::ring::DEFAULT_TOL
}
fn default_max_iter() -> usize {
    crate::ring::DEFAULT_MAX_ITER
}

/// How the inner boundary is constructed.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum InnerSpec {
    /// Inner body is `scale · K0`.
    #[serde(rename = "scale")]
    Scale(f64),
    /// Inner boundary is the given level of a presolve on a wider ring.
    #[serde(rename = "level_set")]
    LevelSet(f64),
}

/// Dirichlet-data semantics along body variations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Semantics {
    /// Common inner boundary with constant data.
    #[serde(rename = "fixed-inner")]
    FixedInner,
    /// Whole-configuration transport: data `u0(x/(1+t))` from a presolve.
    #[serde(rename = "transported")]
    Transported,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub inner: InnerSpec,
    #[serde(default = "default_eps0")]
    pub epsilon0: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    #[serde(default = "default_family_count")]
    pub family_count: usize,
    pub semantics: Semantics,
    #[serde(default = "default_s_levels")]
    pub s_levels: Vec<f64>,
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Scale of the presolve inner body for transported semantics.
    #[serde(default = "default_presolve_scale")]
    pub presolve_scale: f64,
    #[serde(default = "default_presolve_data")]
    pub presolve_data: f64,
    /// Inner radius and outer span (in multiples of it) for locality sweeps.
    #[serde(default = "default_locality_inner")]
    pub locality_inner_radius: f64,
    #[serde(default = "default_locality_span")]
    pub locality_span: [f64; 2],
    #[serde(default = "default_locality_points")]
    pub locality_points: usize,
}

fn default_eps0() -> f64 {
    1.0
}
fn default_tau() -> f64 {
    0.1
}
fn default_lambda_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}
fn default_family_count() -> usize {
    4
}
fn default_s_levels() -> Vec<f64> {
    vec![0.1, 0.05, 0.025]
}
fn default_probes() -> usize {
    10_000
}
fn default_presolve_scale() -> f64 {
    0.7
}
fn default_presolve_data() -> f64 {
    1.0
}
fn default_locality_inner() -> f64 {
    0.25
}
fn default_locality_span() -> [f64; 2] {
    [1.1, 12.0]
}
fn default_locality_points() -> usize {
    21
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub bodies: BodiesSection,
    pub solver: SolverSection,
    pub experiment: ExperimentSection,
    pub output: OutputSection,
}

impl ExperimentConfig {
    /// Parse and validate; JSON errors carry line and column positions.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.solver;
        if !(2.0..3.0).contains(&s.p) {
            return Err(Error::Config(format!("solver.p = {} outside [2, 3)", s.p)));
        }
        if s.mesh.angular < 8 || s.mesh.radial < 2 {
            return Err(Error::Config("solver.mesh too coarse".into()));
        }
        let e = &self.experiment;
        if !(e.epsilon0 > 0.0) {
            return Err(Error::Config("experiment.epsilon0 must be positive".into()));
        }
        if !(e.tau > 0.0 && e.tau < 1.0) {
            return Err(Error::Config("experiment.tau must lie in (0, 1)".into()));
        }
        if e.lambda_grid.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::Config("experiment.lambda_grid must lie in [0, 1]".into()));
        }
        match e.inner {
            InnerSpec::Scale(sc) if !(sc > 0.0 && sc < 1.0) => {
                return Err(Error::Config("experiment.inner.scale must lie in (0, 1)".into()))
            }
            InnerSpec::LevelSet(lv) if !(lv > 0.0 && lv < e.presolve_data) => {
                return Err(Error::Config(
                    "experiment.inner.level_set must lie in (0, presolve_data)".into(),
                ))
            }
            _ => {}
        }
        if e.s_levels.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("experiment.s_levels must be strictly decreasing".into()));
        }
        self.bodies.k0.build().map_err(|err| {
            Error::Config(format!("bodies.k0 does not define a valid body: {err}"))
        })?;
        Ok(())
    }

    pub fn mesh_dims(&self) -> (usize, usize) {
        (self.solver.mesh.angular, self.solver.mesh.radial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_config() {
        let text = r#"{
            "bodies": {"k0": {"kind": "disk", "radius": 1.0}},
            "solver": {"p": 2.5, "mesh": {"angular": 64, "radial": 32}},
            "experiment": {"inner": {"scale": 0.8}, "semantics": "fixed-inner"},
            "output": {"dir": "runs/demo"}
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.mesh_dims(), (64, 32));
        assert_eq!(cfg.experiment.lambda_grid.len(), 9);
        assert!(matches!(cfg.experiment.inner, InnerSpec::Scale(s) if (s - 0.8).abs() < 1e-15));
    }

    #[test]
    fn rejects_bad_exponent_with_message() {
        let text = r#"{
            "bodies": {"k0": {"kind": "disk", "radius": 1.0}},
            "solver": {"p": 3.4, "mesh": {"angular": 64, "radial": 32}},
            "experiment": {"inner": {"scale": 0.8}, "semantics": "fixed-inner"},
            "output": {"dir": "runs/demo"}
        }"#;
        let err = ExperimentConfig::from_json(text).unwrap_err();
        assert!(err.to_string().contains("outside [2, 3)"));
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = ExperimentConfig::from_json("{\n  \"bodies\": 3\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "message should locate the error: {msg}");
    }
}
