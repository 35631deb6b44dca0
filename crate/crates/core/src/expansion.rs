//! Small-`eps` expansions of both forces.
//!
//! At a point with curvature `kappa` and normal angle `phi`,
//!
//! ```text
//! F_eps  = kappa A log(1 / (eps |kappa|)) + kappa B + Psi + O(eps)
//! cF_eps = F_eps + kappa C + O(eps)
//! ```
//!
//! where `A`, `B`, `C` depend on `phi` through `cos^2 phi` only and `Psi`
//! is a nonlocal term. `Psi` is estimated at a finite radius by adding the
//! exact tangent-circle arc integral to the cut-off reference force; the
//! two singular parts cancel and the remainder is `Psi + O(eps)`.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::kernel::ElasticModel;
use crate::quadrature::{force_cutoff_reference, QuadratureConfig};

/// Default radius at which `Psi` is estimated.
pub const DEFAULT_PSI_EPS: f64 = 1e-3;

/// `1 + nu - 3 nu cos^2 phi`.
pub fn const_a(phi: f64, nu: f64) -> f64 {
    let c2 = phi.cos().powi(2);
    1.0 + nu - 3.0 * nu * c2
}

/// `2 (log 2 - (1 - log 2) nu - (3 log 2 - 2) nu cos^2 phi)`.
pub fn const_b(phi: f64, nu: f64) -> f64 {
    let c2 = phi.cos().powi(2);
    2.0 * (LN_2 - (1.0 - LN_2) * nu - (3.0 * LN_2 - 2.0) * nu * c2)
}

/// `(-3 - nu + 3 (1 + nu) cos^2 phi) / 2`, the shift constant without
/// its `A log 2` part.
pub fn const_c_base(phi: f64, nu: f64) -> f64 {
    let c2 = phi.cos().powi(2);
    0.5 * (-3.0 - nu + 3.0 * (1.0 + nu) * c2)
}

/// Limit of `(F_nonsingular - F_cutoff) / kappa` as `eps -> 0`:
/// [`const_c_base`] plus `A log 2`.
///
/// On the unit circle at `phi = 0`, `nu = 0.3` direct quadrature of both
/// forces gives a difference of `-0.57726`; [`const_c_base`] alone
/// gives `-0.3`.
pub fn const_c(phi: f64, nu: f64) -> f64 {
    const_c_base(phi, nu) + LN_2 * const_a(phi, nu)
}

/// `(kappa A log(1 / (eps |kappa|)), kappa B)`, both zero at `kappa = 0`.
pub fn local_terms(kappa: f64, phi: f64, eps: f64, nu: f64) -> (f64, f64) {
    if kappa == 0.0 {
        return (0.0, 0.0);
    }
    (
        kappa * const_a(phi, nu) * (1.0 / (eps * kappa.abs())).ln(),
        kappa * const_b(phi, nu),
    )
}

/// Integral of `G · tau` over the tangent circle with `B(x, eps)` removed.
///
/// The circle is traversed counter-clockwise for `kappa > 0` and clockwise
/// for `kappa < 0`; for `kappa = 0` (tangent line) the integral vanishes.
/// With `alpha = 2 asin(eps |kappa| / 2)` the value is
/// `kappa/4 [8 nu (1 - 2 cos^2 phi) cos(alpha/2) - 4 (3 nu cos^2 phi - nu - 1) log tan(alpha/4)]`.
pub fn circle_arc_integral(kappa: f64, phi: f64, eps: f64, nu: f64) -> Result<f64> {
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let ratio = eps * kappa.abs();
    if !(ratio < 2.0) {
        return Err(Error::Geometry(format!(
            "ball of radius {eps} covers the tangent circle of radius {}",
            1.0 / kappa.abs()
        )));
    }
    let alpha = 2.0 * (0.5 * ratio).asin();
    let c2 = phi.cos().powi(2);
    let sin_part = 4.0 * (0.5 * alpha).cos();
    let inv_sin_part = -4.0 * (0.25 * alpha).tan().ln();
    Ok(0.25 * kappa * (2.0 * nu * (1.0 - 2.0 * c2) * sin_part + (3.0 * nu * c2 - nu - 1.0) * inv_sin_part))
}

/// Finite-radius estimate of the nonlocal term at `p(t0)`:
/// the cut-off force at `eval_eps` plus the excised tangent-circle integral.
pub fn psi_estimate(
    curve: &ClosedCurve,
    t0: f64,
    eval_eps: f64,
    nu: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let model = ElasticModel::new(nu, eval_eps)?;
    let frame = curve.frame_at(t0)?;
    let far = force_cutoff_reference(curve, t0, &model, cfg)?;
    let arc = circle_arc_integral(frame.kappa, frame.phi, eval_eps, nu)?;
    Ok(far + arc)
}

/// Richardson combination `2 psi(eps/2) - psi(eps)`.
///
/// Only an `O(eps)` error is known for [`psi_estimate`], not a clean
/// leading coefficient, so this carries no accuracy guarantee.
pub fn psi_estimate_extrapolated(
    curve: &ClosedCurve,
    t0: f64,
    eval_eps: f64,
    nu: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let coarse = psi_estimate(curve, t0, eval_eps, nu, cfg)?;
    let fine = psi_estimate(curve, t0, 0.5 * eval_eps, nu, cfg)?;
    Ok(2.0 * fine - coarse)
}

/// Terms of an expansion-based force value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceBreakdown {
    pub kappa: f64,
    pub phi: f64,
    /// `kappa A log(1 / (eps |kappa|))`
    pub log_term: f64,
    /// `kappa B`
    pub local_term: f64,
    pub psi: f64,
    /// `kappa C` for the non-singular model, zero for the cut-off model.
    pub model_shift: f64,
    pub total: f64,
    pub psi_eval_eps: f64,
}

impl ForceBreakdown {
    fn new(kappa: f64, phi: f64, log_term: f64, local_term: f64, psi: f64, model_shift: f64, psi_eval_eps: f64) -> Self {
        ForceBreakdown {
            kappa,
            phi,
            log_term,
            local_term,
            psi,
            model_shift,
            total: log_term + local_term + psi + model_shift,
            psi_eval_eps,
        }
    }
}

/// Expansion of the cut-off force with `Psi` estimated at `psi_eps`.
pub fn force_cutoff_expansion(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    psi_eps: f64,
    cfg: &QuadratureConfig,
) -> Result<ForceBreakdown> {
    let frame = curve.frame_at(t0)?;
    let (log_term, local_term) = local_terms(frame.kappa, frame.phi, model.eps, model.nu);
    let psi = psi_estimate(curve, t0, psi_eps, model.nu, cfg)?;
    Ok(ForceBreakdown::new(frame.kappa, frame.phi, log_term, local_term, psi, 0.0, psi_eps))
}

/// Expansion of the non-singular force: the cut-off expansion plus
/// `kappa C`.
pub fn force_nonsingular_expansion(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    psi_eps: f64,
    cfg: &QuadratureConfig,
) -> Result<ForceBreakdown> {
    let base = force_cutoff_expansion(curve, t0, model, psi_eps, cfg)?;
    let shift = base.kappa * const_c(base.phi, model.nu);
    Ok(ForceBreakdown::new(
        base.kappa,
        base.phi,
        base.log_term,
        base.local_term,
        base.psi,
        shift,
        psi_eps,
    ))
}
