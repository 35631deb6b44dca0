//! Self-interaction force of a closed planar dislocation loop.
//!
//! Two regularizations of the singular line integral are supported: the
//! core cut-off force, which excises a ball of radius `eps` around the
//! evaluation point, and the non-singular force, which replaces the kernel
//! by a smoothed one. For both, the crate provides
//!
//! * reference values by adaptive quadrature ([`quadrature`]),
//! * the small-`eps` expansion with its nonlocal term ([`expansion`]),
//! * polygon schemes that work at mesh size `h` independent of `eps`
//!   ([`discrete`]),
//! * sweep harnesses that produce CSV tables ([`study`]).
//!
//! Vertex loops and sweeps run on rayon when the `parallel` feature is on
//! (the default); without it everything runs sequentially with identical
//! output.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod curve;
pub mod discrete;
pub mod error;
pub mod expansion;
pub mod fit;
pub mod geom;
pub mod kernel;
mod par;
pub mod quadrature;
pub mod study;

pub use curve::{ClosedCurve, CurveSpec, LocalFrame, PolygonLoop, TangentCircle, Traversal};
pub use discrete::{DiscreteFrame, ForceModel};
pub use error::{Error, Result};
pub use expansion::ForceBreakdown;
pub use geom::Vec2;
pub use kernel::ElasticModel;
pub use quadrature::QuadratureConfig;
