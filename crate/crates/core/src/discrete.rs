//! Polygon schemes for both forces.
//!
//! At vertex `x_i` of a loop with mesh size `h`, the cut-off force is
//!
//! ```text
//! F_i = kappa_h A(phi_h) / 2 * log(|x_{i+m} - x_i| |x_{i-m} - x_i| / eps^2)
//!     + sum_{j = m+1}^{N-m} I(x_{i+j-1} - x_i, x_{i+j} - x_i)
//! ```
//!
//! with `m = ceil(h^{-1/3})`, `I` the closed-form segment force and
//! `kappa_h`, `phi_h` from the three-point stencil at `x_i`. Vertices
//! `x_{i±2} .. x_{i±(m-1)}` do not enter. The non-singular force adds
//! `kappa_h C(phi_h)`.

use serde::{Deserialize, Serialize};

use crate::curve::PolygonLoop;
use crate::error::{Error, Result};
use crate::expansion::{const_a, const_c};
use crate::geom::{CompensatedSum, Vec2};
use crate::kernel::{segment_force, ElasticModel};
use crate::par;

/// `Q = [[0, 1], [-1, 0]]`.
#[inline]
fn q(v: Vec2) -> Vec2 {
    v.rot_cw()
}

/// Stencil curvature and normal at one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteFrame {
    pub kappa_h: f64,
    pub n_h: Vec2,
    pub phi_h: f64,
}

impl DiscreteFrame {
    /// From the difference vectors `y_- = x_{i-1} - x_i`, `y_+ = x_{i+1} - x_i`.
    pub fn from_stencil(y_minus: Vec2, y_plus: Vec2) -> Result<Self> {
        let kappa_h = discrete_curvature(y_minus, y_plus)?;
        let n_h = discrete_normal(y_minus, y_plus)?;
        Ok(DiscreteFrame {
            kappa_h,
            n_h,
            phi_h: n_h.angle(),
        })
    }

    pub fn at(poly: &PolygonLoop, i: usize) -> Result<Self> {
        let i = i as isize;
        let x = poly.point(i);
        Self::from_stencil(poly.point(i - 1) - x, poly.point(i + 1) - x)
    }
}

fn stencil_lengths(y_minus: Vec2, y_plus: Vec2) -> Result<(f64, f64)> {
    let (lm, lp) = (y_minus.norm(), y_plus.norm());
    if !(lm > 0.0 && lp > 0.0) {
        return Err(Error::DegenerateStencil("zero-length difference vector".into()));
    }
    Ok((lm, lp))
}

/// `2 (1/|y+| + 1/|y-|) (y- · Q y+) / (|y+| + |y-|)^2`.
pub fn discrete_curvature(y_minus: Vec2, y_plus: Vec2) -> Result<f64> {
    let (lm, lp) = stencil_lengths(y_minus, y_plus)?;
    let s = lp + lm;
    Ok(2.0 * (1.0 / lp + 1.0 / lm) * y_minus.dot(q(y_plus)) / (s * s))
}

/// Normalized `Q(|y-| y+/|y+| - |y+| y-/|y-|) / (|y+| + |y-|)`.
pub fn discrete_normal(y_minus: Vec2, y_plus: Vec2) -> Result<Vec2> {
    let (lm, lp) = stencil_lengths(y_minus, y_plus)?;
    let raw = q(y_plus * (lm / lp) - y_minus * (lp / lm)) / (lp + lm);
    let len = raw.norm();
    if !(len > 1e-14 * (lp + lm).min(1.0)) {
        return Err(Error::DegenerateStencil("stencil normal cannot be oriented".into()));
    }
    Ok(raw / len)
}

/// `ceil(h^{-1/3})`.
pub fn neighborhood_count(h: f64) -> Result<usize> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Parameter(format!("mesh size {h} outside (0, 1)")));
    }
    let m = h.cbrt().recip();
    // Snap exact cube roots (h = 1e-3 gives 10.000000000000002).
    let r = m.round();
    let m = if (m - r).abs() <= 1e-12 * r { r } else { m.ceil() };
    Ok(m as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceModel {
    Cutoff,
    Nonsingular,
}

/// Neighborhood size for the loop, checking `N > 2 m + 2`.
pub fn loop_neighborhood(poly: &PolygonLoop) -> Result<usize> {
    let m = neighborhood_count(poly.h)?;
    let n = poly.len();
    if n <= 2 * m + 2 {
        return Err(Error::MeshTooCoarse { n, m });
    }
    Ok(m)
}

fn cutoff_with_frame(poly: &PolygonLoop, i: usize, model: &ElasticModel, m: usize) -> Result<(f64, DiscreteFrame)> {
    let frame = DiscreteFrame::at(poly, i)?;
    let n = poly.len() as isize;
    let ii = i as isize;
    let mi = m as isize;
    let x = poly.point(ii);
    let d_plus = (poly.point(ii + mi) - x).norm();
    let d_minus = (poly.point(ii - mi) - x).norm();
    let local = 0.5
        * frame.kappa_h
        * const_a(frame.phi_h, model.nu)
        * (d_plus * d_minus / (model.eps * model.eps)).ln();
    let mut sum = CompensatedSum::new();
    for j in (mi + 1)..=(n - mi) {
        let a = poly.point(ii + j - 1) - x;
        let b = poly.point(ii + j) - x;
        let seg = segment_force(a, b, model.nu).map_err(|e| match e {
            Error::SingularSegment { .. } => Error::SingularSegmentAt {
                vertex: i,
                segment: (ii + j).rem_euclid(n) as usize,
            },
            other => other,
        })?;
        sum.add(seg);
    }
    Ok((local + sum.value(), frame))
}

/// Discrete cut-off force at vertex `i`.
pub fn force_cutoff_discrete(poly: &PolygonLoop, i: usize, model: &ElasticModel) -> Result<f64> {
    let m = loop_neighborhood(poly)?;
    cutoff_with_frame(poly, i, model, m).map(|(f, _)| f)
}

/// Discrete non-singular force at vertex `i`.
pub fn force_nonsingular_discrete(poly: &PolygonLoop, i: usize, model: &ElasticModel) -> Result<f64> {
    let m = loop_neighborhood(poly)?;
    let (f, frame) = cutoff_with_frame(poly, i, model, m)?;
    Ok(f + frame.kappa_h * const_c(frame.phi_h, model.nu))
}

pub fn force_discrete(poly: &PolygonLoop, i: usize, model: &ElasticModel, which: ForceModel) -> Result<f64> {
    match which {
        ForceModel::Cutoff => force_cutoff_discrete(poly, i, model),
        ForceModel::Nonsingular => force_nonsingular_discrete(poly, i, model),
    }
}

fn at_vertex(i: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::SingularSegmentAt { .. } => e,
        e => Error::AtVertex {
            index: i,
            source: Box::new(e),
        },
    }
}

/// Force at every vertex, evaluated in parallel when the `parallel`
/// feature is enabled. The first failing vertex (lowest index) is reported.
pub fn force_all_points(poly: &PolygonLoop, model: &ElasticModel, which: ForceModel) -> Result<Vec<f64>> {
    loop_neighborhood(poly)?;
    par::try_map_indices(poly.len(), |i| force_discrete(poly, i, model, which).map_err(at_vertex(i)))
}

/// Sequential version of [`force_all_points`].
pub fn force_all_points_sequential(poly: &PolygonLoop, model: &ElasticModel, which: ForceModel) -> Result<Vec<f64>> {
    loop_neighborhood(poly)?;
    (0..poly.len())
        .map(|i| force_discrete(poly, i, model, which).map_err(at_vertex(i)))
        .collect()
}
