//! The p-Laplace Dirichlet problem on a convex ring.
//!
//! The ring is the region between a strictly nested inner body `I` and outer
//! body `K`; the solution carries the data on the inner boundary, vanishes on
//! the outer boundary, and minimizes the regularized p-Dirichlet energy over
//! a structured radial-angular triangulation.

mod field;
mod mesh;
mod solver;

pub use field::{BoundaryGradient, ScalarField, Side, SublevelRestartReport};
pub use mesh::RingMesh;
pub use solver::scaled_problem;

use crate::convex::SupportFn;
use crate::error::{Error, Result};

/// Dirichlet data on the inner boundary.
#[derive(Clone, Debug)]
pub enum InnerData {
    Const(f64),
    /// One value per angular mesh ray, `g(θ_i)`.
    Sampled(Vec<f64>),
}

impl InnerData {
    pub fn max(&self) -> f64 {
        match self {
            InnerData::Const(v) => *v,
            InnerData::Sampled(vs) => vs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            InnerData::Const(v) => *v,
            InnerData::Sampled(vs) => vs.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn at(&self, i: usize) -> f64 {
        match self {
            InnerData::Const(v) => *v,
            InnerData::Sampled(vs) => vs[i],
        }
    }
}

/// Continuation schedule for the gradient regularization δ.
pub const CONTINUATION_DELTAS: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const DEFAULT_REG_DELTA: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Clone, Debug)]
pub struct RingProblem {
    pub outer: SupportFn,
    pub inner: SupportFn,
    pub p: f64,
    pub inner_data: InnerData,
    /// `(M_angular, M_radial)`.
    pub mesh: (usize, usize),
    pub reg_delta: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl RingProblem {
    /// Validate nesting, data positivity and the exponent range `p ∈ [2, 3)`.
    pub fn new(
        outer: SupportFn,
        inner: SupportFn,
        p: f64,
        inner_data: InnerData,
        mesh: (usize, usize),
    ) -> Result<Self> {
        if !(2.0..3.0).contains(&p) {
            return Err(Error::InvalidProblem(format!("p = {p} outside [2, 3)")));
        }
        if inner_data.min() <= 0.0 {
            return Err(Error::InvalidProblem(
                "inner Dirichlet data must be strictly positive".into(),
            ));
        }
        if let InnerData::Sampled(vs) = &inner_data {
            if vs.len() != mesh.0 {
                return Err(Error::InvalidProblem(format!(
                    "sampled data length {} does not match angular mesh size {}",
                    vs.len(),
                    mesh.0
                )));
            }
        }
        if mesh.0 < 8 || mesh.1 < 2 {
            return Err(Error::InvalidProblem(format!(
                "mesh {mesh:?} too coarse (need at least 8 x 2)"
            )));
        }
        if inner.min_support() <= 0.0 {
            return Err(Error::OriginNotInterior);
        }
        // Strict containment with margin ≥ 1e-3 · diam(K).
        let margin = 1e-3 * outer.diameter();
        let gap = outer.series().combine(inner.series(), 1.0, -1.0);
        let (_, min_gap) = gap.global_min();
        if min_gap < margin {
            return Err(Error::InvalidProblem(format!(
                "inner body is not strictly contained (min support gap {min_gap:.3e} < margin {margin:.3e})"
            )));
        }
        Ok(RingProblem {
            outer,
            inner,
            p,
            inner_data,
            mesh,
            reg_delta: DEFAULT_REG_DELTA,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        })
    }

    pub fn with_solver_params(mut self, reg_delta: f64, tol: f64, max_iter: usize) -> Self {
        self.reg_delta = reg_delta;
        self.tol = tol;
        self.max_iter = max_iter;
        self
    }

    /// Build the structured radial-angular mesh for this ring.
    pub fn build_mesh(&self) -> Result<RingMesh> {
        RingMesh::build(&self.outer, &self.inner, self.mesh.0, self.mesh.1)
    }

    /// Solve the regularized p-Dirichlet minimization with δ-continuation.
    pub fn solve(&self) -> Result<ScalarField> {
        solver::solve(self)
    }
}
