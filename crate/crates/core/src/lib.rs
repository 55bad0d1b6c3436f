//! Geometry kernel for non-parametric surfaces `z = f(x, y)` in the
//! three-dimensional Heisenberg group with its standard left-invariant metric.
//!
//! The crate is organised bottom-up:
//!
//! * [`heisenberg`] — group law in exponential coordinates, the orthonormal
//!   left-invariant frame, metric, Levi-Civita connection and isometries.
//! * [`gans`] — the Gans model of the hyperbolic plane, where the Gauss map
//!   takes its values.
//! * [`expr`] — a small expression language for user-supplied `f(x, y)`,
//!   `u(x)`, `v(y)` with forward-mode jets up to the orders needed here.
//! * [`graph`] — fundamental forms, mean and Gauss curvature, and the
//!   minimal/flat residuals of a graph.
//! * [`gauss_map`] — the Gans-valued Gauss map, its Jacobian, the
//!   differential identity and isometry equivariance.
//! * [`translation`] — translation surfaces `u(x) + v(y) + xy/2`, the
//!   classified families and the residual reports.
//! * [`numerics`] — finite differences, an adaptive Dormand–Prince
//!   integrator with dense output, and convergence-order estimation.
//! * [`oracle`] — independent numerical routes (Brioschi, covariant
//!   derivatives, finite-difference Jacobians) used for cross-checking.
//! * [`verify`] — named verification suites built from the above.

pub mod error;
pub mod expr;
pub mod gans;
pub mod gauss_map;
pub mod graph;
pub mod heisenberg;
pub mod numerics;
pub mod oracle;
pub mod translation;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{CurveJet, Expr, Jet2, Scalar};
pub use graph::{Grid, SurfaceField, SurfacePatch};
