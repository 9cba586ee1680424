//! Two-dimensional toolkit for p-harmonic measures on convex bodies.
//!
//! The crate is organized around a pipeline:
//!
//! - [`convex`]: planar convex bodies represented by truncated trigonometric
//!   support-function series, with exact derivatives, Minkowski combination,
//!   Gauss-map parameterization, projections and Hausdorff distance.
//! - [`ring`]: the p-Laplace Dirichlet problem on a convex ring (outer body
//!   minus inner body), solved by damped Newton on the regularized p-Dirichlet
//!   energy over a structured radial-angular triangulation.
//! - [`measure`]: the boundary measure with density `|∇u|^(p-1)`, its
//!   pushforward to the unit circle, the functional
//!   `T(K) = ∫_{∂K} (h∘g) dω`, and the vanishing-level ratio integrals.
//! - [`supcoord`]: the two-parameter support function `h(θ,t)` of the
//!   sublevel-set family, identity residuals, the p-Laplacian in support
//!   coordinates, and supremal-convolution subsolution checks.
//! - [`harness`]: config-driven experiments (Minkowski families, min-form
//!   Brunn-Minkowski margins, homogeneity, Hadamard variation, locality
//!   probes) with CSV/JSON/SVG reporting.
//! - [`exact`]: closed-form radial solutions on annuli, used as independent
//!   oracles throughout the test suites and by the `oracle` CLI command.

pub mod acceptance;
pub mod convex;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod harness;
pub mod measure;
pub mod plot;
pub mod ring;
pub mod supcoord;
pub mod trig;

pub use error::{Error, Result};
