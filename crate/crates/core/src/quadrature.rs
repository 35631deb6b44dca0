//! Globally adaptive Gauss–Kronrod (7, 15) integration and the reference
//! forces obtained by integrating the kernels directly along the curve.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::kernel::{kernel_g_eps, kernel_g_unchecked, ElasticModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections of an initial panel.
    pub max_depth: u32,
    /// Minimum number of dyadic break points placed on each side of a
    /// near-singular point.
    pub initial_splits_near_singularity: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 48,
            initial_splits_near_singularity: 8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Parameter("quadrature tolerances must be positive".into()));
        }
        if self.max_depth < 10 {
            return Err(Error::Parameter("quadrature max_depth must be at least 10".into()));
        }
        Ok(())
    }
}

/// Integral estimate with its error bound and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the center.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 panel: `(kronrod, gauss, integral of |f|)`.
pub(crate) fn kronrod15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, g * h, abs * h.abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
    depth: u32,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Self {
        let (k, g, abs) = kronrod15(f, a, b);
        let floor = 50.0 * f64::EPSILON * abs;
        Panel {
            a,
            b,
            value: k,
            error: (k - g).abs().max(floor),
            floor,
            depth,
        }
    }

    /// Error that refinement can still remove.
    fn excess(&self) -> f64 {
        self.error - self.floor
    }
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.excess() == o.excess()
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.excess().total_cmp(&o.excess())
    }
}

const MAX_PANELS: usize = 400_000;

/// Integrates `f` over `[a, b]` to `max(abs_tol, rel_tol |value|)`.
///
/// The error estimate of a panel is `|K15 - G7|`, floored at the rounding
/// level of the panel. When the remaining error is entirely at the
/// rounding floor, the estimate is accepted as converged.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], cfg).map(|r| r.value)
}

/// Like [`adaptive_integrate`], starting from the panels between
/// consecutive entries of `breaks` (which must be increasing).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    cfg.validate()?;
    if breaks.len() < 2 {
        return Err(Error::Parameter("need at least two break points".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(Panel::new(&f, w[0], w[1], 0));
        }
    }
    let mut evaluations = 15 * heap.len();
    let totals = |heap: &BinaryHeap<Panel>, done: &[Panel]| {
        heap.iter()
            .chain(done.iter())
            .fold((0.0, 0.0, 0.0), |(v, e, fl), p| (v + p.value, e + p.error, fl + p.floor))
    };
    let (mut value, mut error, mut floor) = totals(&heap, &done);
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps.is_multiple_of(512) {
            (value, error, floor) = totals(&heap, &done);
        }
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                estimate: value,
                error_bound: error,
            });
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tol || error - floor <= 0.01 * tol {
            (value, error, _) = totals(&heap, &done);
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NonConvergence {
                estimate: value,
                error_bound: error,
            });
        };
        if worst.depth >= cfg.max_depth || worst.excess() <= 0.0 {
            done.push(worst);
            continue;
        }
        if heap.len() + done.len() > MAX_PANELS {
            return Err(Error::NonConvergence {
                estimate: value,
                error_bound: error,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = Panel::new(&f, worst.a, mid, worst.depth + 1);
        let right = Panel::new(&f, mid, worst.b, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
    }
}

/// Geometric break points `start + dir * scale * 2^k` for `k = 0, 1, ...`
/// while they stay within `reach` of `start`, at least `min_count` of them
/// (clipped to `reach`).
pub(crate) fn dyadic_offsets(scale: f64, reach: f64, min_count: u32) -> Vec<f64> {
    let mut out = Vec::new();
    let mut off = scale;
    let mut k = 0;
    while off < reach || k < min_count {
        if off >= reach {
            break;
        }
        out.push(off);
        off *= 2.0;
        k += 1;
    }
    out
}

/// Break points on `[0, len]` clustered geometrically at 0.
fn one_sided_breaks(len: f64, scale: f64, min_count: u32) -> Vec<f64> {
    let mut breaks = vec![0.0];
    breaks.extend(dyadic_offsets(scale, 0.5 * len, min_count));
    breaks.push(len);
    breaks
}

/// Core cut-off force: the integral of `G(y - x) · tau(y)` over the curve
/// outside `B(x, eps)`, `x = p(t0)`.
///
/// The integrand is odd to leading order about `x`, so the two sides of
/// the excision are integrated as one: offset `s` from the upper exit is
/// paired with offset `s` from the lower exit, and the large opposite
/// contributions cancel inside the integrand rather than in the sum.
pub fn force_cutoff_reference(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    force_cutoff_reference_detail(curve, t0, model, cfg).map(|r| r.value)
}

pub fn force_cutoff_reference_detail(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let (d_minus, d_plus) = curve.excision_offsets(t0, model.eps)?;
    let half = 0.5 * (1.0 + d_minus - d_plus);
    let speed = curve.speed(t0 + d_plus).max(curve.speed(t0 + d_minus));
    let breaks = one_sided_breaks(half, model.eps / speed, cfg.initial_splits_near_singularity);
    let nu = model.nu;
    let f = |d: f64| kernel_g_unchecked(curve.chord(t0, d), nu).dot(curve.derivative(t0 + d, 1));
    integrate_with_breaks(|s| f(d_plus + s) + f(d_minus - s), &breaks, cfg)
}

/// Non-singular force: the integral of `G_eps(y - x) · tau(y)` over the
/// whole curve, `x = p(t0)`, with offsets `s` and `-s` from `t0` paired
/// and break points clustered at `s = 0`.
pub fn force_nonsingular_reference(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    force_nonsingular_reference_detail(curve, t0, model, cfg).map(|r| r.value)
}

pub fn force_nonsingular_reference_detail(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let breaks = one_sided_breaks(0.5, model.eps / curve.speed(t0), cfg.initial_splits_near_singularity);
    let f = |d: f64| kernel_g_eps(curve.chord(t0, d), model).dot(curve.derivative(t0 + d, 1));
    integrate_with_breaks(|s| f(s) + f(-s), &breaks, cfg)
}
