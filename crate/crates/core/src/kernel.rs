//! Interaction kernels, with the shear modulus and Burgers vector
//! normalized away (Burgers vector `e1`).
//!
//! With `M = [[0, -1], [1 - nu, 0]]`, the singular kernel is
//! `G(z) = (z^T M)^T / |z|^3`; the force density at `y` is `G(y - x) · tau(y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Poisson ratio and core radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticModel {
    pub nu: f64,
    pub eps: f64,
}

impl Default for ElasticModel {
    fn default() -> Self {
        ElasticModel { nu: 0.3, eps: 1e-4 }
    }
}

impl ElasticModel {
    /// Checks `nu ∈ (-1, 1/2)` and `eps > 0`.
    pub fn new(nu: f64, eps: f64) -> Result<Self> {
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::Parameter(format!("Poisson ratio {nu} outside (-1, 0.5)")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Parameter(format!("core radius {eps} must be positive")));
        }
        Ok(ElasticModel { nu, eps })
    }

    pub fn with_eps(self, eps: f64) -> Result<Self> {
        Self::new(self.nu, eps)
    }
}

pub fn kernel_g(z: Vec2, nu: f64) -> Result<Vec2> {
    if z == Vec2::ZERO {
        return Err(Error::Singularity);
    }
    Ok(kernel_g_unchecked(z, nu))
}

#[inline]
pub(crate) fn kernel_g_unchecked(z: Vec2, nu: f64) -> Vec2 {
    let r2 = z.norm_sq();
    let inv_r3 = 1.0 / (r2 * r2.sqrt());
    Vec2::new((1.0 - nu) * z.y * inv_r3, -z.x * inv_r3)
}

/// Regularized kernel: `G` with `|z|` replaced by `R = sqrt(|z|^2 + eps^2)`
/// plus `3 eps^2 (1 - nu) z2 / (2 R^5)` in the first component.
#[inline]
pub fn kernel_g_eps(z: Vec2, model: &ElasticModel) -> Vec2 {
    let e2 = model.eps * model.eps;
    let r2 = z.norm_sq() + e2;
    let inv_r3 = 1.0 / (r2 * r2.sqrt());
    let inv_r5 = inv_r3 / r2;
    let a = 1.0 - model.nu;
    Vec2::new(a * z.y * (inv_r3 + 1.5 * e2 * inv_r5), -z.x * inv_r3)
}

/// `∂₂G_eps,1 - ∂₁G_eps,2` in closed form.
pub fn curl_g_eps(y: Vec2, model: &ElasticModel) -> f64 {
    let nu = model.nu;
    let e2 = model.eps * model.eps;
    let (y1s, y2s) = (y.x * y.x, y.y * y.y);
    let r2 = y1s + y2s + e2;
    let r5 = r2 * r2 * r2.sqrt();
    let r7 = r5 * r2;
    ((2.0 - nu) * e2 - (1.0 + nu) * y1s - (1.0 - 2.0 * nu) * y2s) / r5
        - 3.0 * (1.0 - nu) * e2 * (4.0 * y2s - y1s - e2) / (2.0 * r7)
}

/// Relative threshold below which a segment counts as passing through the
/// origin.
pub const SINGULAR_SEGMENT_TOL: f64 = 1e-12;

/// Closed-form line integral of `G · tau` along the straight segment from
/// `x` to `y` (the evaluation point is the origin).
pub fn segment_force(x: Vec2, y: Vec2, nu: f64) -> Result<f64> {
    let (rx, ry) = (x.norm(), y.norm());
    let denominator = rx * ry + x.dot(y);
    if !(denominator >= SINGULAR_SEGMENT_TOL * rx * ry) || rx == 0.0 || ry == 0.0 {
        return Err(Error::SingularSegment { denominator });
    }
    let u = x / rx + y / ry;
    let w = y - x;
    // u^T M w with M = [[0, -1], [1 - nu, 0]]
    Ok((-u.x * w.y + (1.0 - nu) * u.y * w.x) / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive_integrate, QuadratureConfig};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn model(nu: f64, eps: f64) -> ElasticModel {
        ElasticModel { nu, eps }
    }

    #[test]
    fn kernel_g_examples() {
        assert_eq!(kernel_g(Vec2::new(1.0, 0.0), 0.3).unwrap(), Vec2::new(0.0, -1.0));
        let g = kernel_g(Vec2::new(0.0, 1.0), 0.3).unwrap();
        assert_abs_diff_eq!(g.x, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(g.y, 0.0);
        assert_eq!(kernel_g(Vec2::ZERO, 0.3), Err(Error::Singularity));
    }

    #[test]
    fn kernel_g_eps_examples() {
        let g = kernel_g_eps(Vec2::new(0.0, 1.0), &model(0.3, 1.0));
        assert_abs_diff_eq!(g.x, 7.0 * 0.7 / (8.0 * 2f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(g.x, 0.433103, epsilon = 1e-6);
        assert_abs_diff_eq!(g.y, 0.0);
        for z in [Vec2::new(0.3, -2.0), Vec2::new(1e-3, 4e-3)] {
            let a = kernel_g_eps(z, &model(0.2, 0.0));
            let b = kernel_g(z, 0.2).unwrap();
            assert!((a - b).norm() <= 1e-15 * b.norm());
        }
        // regular at the origin
        assert_eq!(kernel_g_eps(Vec2::ZERO, &model(0.3, 1e-3)), Vec2::ZERO);
    }

    #[test]
    fn regularization_error_is_quadratic() {
        let z = Vec2::new(0.4, -0.3);
        let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&e| (kernel_g_eps(z, &model(0.3, e)) - kernel_g(z, 0.3).unwrap()).norm())
            .collect();
        for w in errs.windows(2) {
            assert_abs_diff_eq!(w[0] / w[1], 4.0, epsilon = 0.01);
        }
        // |G_eps - G| <= C eps^2 / |z|^2 with a modest C
        assert!(errs[0] <= 10.0 * 1e-4 / z.norm_sq());
    }

    #[test]
    fn curl_at_origin() {
        // (2 - nu) / eps^3 + 3 (1 - nu) / (2 eps^3)
        let c = curl_g_eps(Vec2::ZERO, &model(0.3, 0.1));
        assert_abs_diff_eq!(c, (7.0 - 5.0 * 0.3) / (2.0 * 1e-3), epsilon = 1e-9);
    }

    fn fd_curl(y: Vec2, m: &ElasticModel, h: f64) -> f64 {
        let dx = Vec2::new(h, 0.0);
        let dy = Vec2::new(0.0, h);
        let d2g1 = (kernel_g_eps(y + dy, m).x - kernel_g_eps(y - dy, m).x) / (2.0 * h);
        let d1g2 = (kernel_g_eps(y + dx, m).y - kernel_g_eps(y - dx, m).y) / (2.0 * h);
        d2g1 - d1g2
    }

    #[test]
    fn curl_matches_finite_differences_at_second_order() {
        let m = model(0.25, 0.3);
        for y in [Vec2::new(0.2, 0.1), Vec2::new(-0.5, 0.35), Vec2::new(0.0, 0.0)] {
            let exact = curl_g_eps(y, &m);
            let e1 = (fd_curl(y, &m, 1e-2) - exact).abs();
            let e2 = (fd_curl(y, &m, 5e-3) - exact).abs();
            assert!(e2 < 1e-3 * exact.abs().max(1.0));
            assert_abs_diff_eq!(e1 / e2, 4.0, epsilon = 0.1);
        }
    }

    #[test]
    fn segment_force_examples() {
        assert_eq!(segment_force(Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0), 0.3).unwrap(), 0.0);
        let v = segment_force(Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0), 0.3).unwrap();
        // 0.7 ∫_0^1 (s^2 + 1)^{-3/2} ds = 0.7 / sqrt(2)
        assert_abs_diff_eq!(v, 0.7 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.494975, epsilon = 1e-6);
    }

    #[test]
    fn segment_through_origin_is_rejected() {
        let r = segment_force(Vec2::new(-1.0, 0.0), Vec2::new(2.0, 0.0), 0.3);
        assert!(matches!(r, Err(Error::SingularSegment { .. })));
        let r = segment_force(Vec2::ZERO, Vec2::new(2.0, 0.0), 0.3);
        assert!(matches!(r, Err(Error::SingularSegment { .. })));
    }

    #[test]
    fn segment_force_matches_quadrature() {
        let cfg = QuadratureConfig::default();
        let cases = [
            (Vec2::new(0.5, 0.5), Vec2::new(-0.2, 1.0), 0.3),
            (Vec2::new(2.0, -1.0), Vec2::new(2.0, 1.0), 0.1),
            (Vec2::new(-0.1, 0.05), Vec2::new(0.3, 0.04), -0.4),
        ];
        for (x, y, nu) in cases {
            let tau = (y - x).normalized();
            let len = (y - x).norm();
            let q = adaptive_integrate(
                |s| kernel_g(x + tau * s, nu).unwrap().dot(tau),
                0.0,
                len,
                &cfg,
            )
            .unwrap();
            assert_abs_diff_eq!(segment_force(x, y, nu).unwrap(), q, epsilon = 1e-9);
        }
    }

    #[test]
    fn model_validation() {
        assert!(ElasticModel::new(0.5, 1e-3).is_err());
        assert!(ElasticModel::new(-1.0, 1e-3).is_err());
        assert!(ElasticModel::new(0.3, 0.0).is_err());
        assert_eq!(ElasticModel::default(), ElasticModel::new(0.3, 1e-4).unwrap());
    }

    fn vec2() -> impl Strategy<Value = Vec2> {
        (-10.0..10.0f64, -10.0..10.0f64)
            .prop_filter("nonzero", |(x, y)| x.hypot(*y) > 1e-6)
            .prop_map(|(x, y)| Vec2::new(x, y))
    }

    proptest! {
        #[test]
        fn kernels_are_odd(z in vec2(), nu in -0.99..0.49f64, eps in 1e-6..1.0f64) {
            let g = kernel_g(z, nu).unwrap();
            let gm = kernel_g(-z, nu).unwrap();
            prop_assert!((g + gm).norm() <= 1e-14 * g.norm());
            let m = model(nu, eps);
            let g = kernel_g_eps(z, &m);
            prop_assert!((g + kernel_g_eps(-z, &m)).norm() <= 1e-14 * g.norm());
        }

        #[test]
        fn curl_is_even(y in vec2(), eps in 1e-3..1.0f64) {
            let m = model(0.3, eps);
            let c = curl_g_eps(y, &m);
            prop_assert!((c - curl_g_eps(-y, &m)).abs() <= 1e-14 * c.abs().max(1e-300));
        }

        #[test]
        fn segment_force_reverses_with_orientation(x in vec2(), y in vec2(), nu in -0.9..0.45f64) {
            prop_assume!(x.norm() * y.norm() + x.dot(y) > 1e-6 * x.norm() * y.norm());
            let f = segment_force(x, y, nu).unwrap();
            let b = segment_force(y, x, nu).unwrap();
            prop_assert!((f + b).abs() <= 1e-12 * f.abs().max(1.0));
        }
    }
}
