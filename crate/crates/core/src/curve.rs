//! Closed plane curves given by finite Fourier series, their local frames,
//! tangent circles, ball excision and polygon sampling.
//!
//! Sign conventions: the tangent `tau` points in the counter-clockwise
//! direction, the normal `n` is `tau` turned clockwise by a quarter turn
//! (outward for a counter-clockwise curve), and the curvature is negative on
//! a counter-clockwise circle. With `phi` the angle of `n`,
//! `tau = (-sin phi, cos phi)` and `n = (cos phi, sin phi)`.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::quadrature::kronrod15;

/// Grid used for the construction-time simplicity and regularity checks.
pub const VALIDATION_GRID: usize = 4096;

/// Default bound on `h_max / h_min` for polygon loops.
pub const DEFAULT_MESH_RATIO: f64 = 3.0;

/// One Fourier mode: `cos_coeff * cos(2πkt) + sin_coeff * sin(2πkt)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mode {
    pub cos: f64,
    pub sin: f64,
}

/// A closed curve `p(t) = Σ_k a_k cos(2πkt) + b_k sin(2πkt)`, `t ∈ [0, 1)`.
///
/// Construction checks that the curve is regular, simple and oriented
/// counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    x: Vec<Mode>,
    y: Vec<Mode>,
    samples: Vec<Vec2>,
}

impl ClosedCurve {
    /// Builds a curve from per-coordinate modes; index `k` of each slice is
    /// the mode with frequency `k` (the sine part of mode 0 is ignored).
    pub fn fourier(x: Vec<Mode>, y: Vec<Mode>) -> Result<Self> {
        if x.is_empty() && y.is_empty() {
            return Err(Error::InvalidCurve("no Fourier coefficients".into()));
        }
        let all = x.iter().chain(y.iter());
        if all.clone().any(|m| !m.cos.is_finite() || !m.sin.is_finite()) {
            return Err(Error::InvalidCurve("non-finite coefficient".into()));
        }
        let mut curve = ClosedCurve {
            x,
            y,
            samples: Vec::new(),
        };
        curve.validate()?;
        Ok(curve)
    }

    /// Builds a curve from cosine/sine coefficient lists per coordinate.
    pub fn from_coefficients(
        x_cos: &[f64],
        x_sin: &[f64],
        y_cos: &[f64],
        y_sin: &[f64],
    ) -> Result<Self> {
        let modes = |c: &[f64], s: &[f64]| {
            let n = c.len().max(s.len());
            (0..n)
                .map(|k| Mode {
                    cos: c.get(k).copied().unwrap_or(0.0),
                    sin: s.get(k).copied().unwrap_or(0.0),
                })
                .collect::<Vec<_>>()
        };
        Self::fourier(modes(x_cos, x_sin), modes(y_cos, y_sin))
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::ellipse(radius, radius)
    }

    /// Axis-aligned ellipse centered at the origin with `p(0) = (a, 0)`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "ellipse semi-axes must be positive, got ({a}, {b})"
            )));
        }
        Self::from_coefficients(&[0.0, a], &[], &[], &[0.0, b])
    }

    /// The three-lobed curve `r(θ) = 1 + 0.25 cos 3θ` in polar form.
    ///
    /// It has six inflection points, so the curvature takes both signs.
    pub fn blob() -> Self {
        let e = BLOB_AMPLITUDE / 2.0;
        Self::from_coefficients(
            &[0.0, 1.0, e, 0.0, e],
            &[],
            &[],
            &[0.0, 1.0, -e, 0.0, e],
        )
        .expect("blob preset is a valid curve")
    }

    pub fn x_modes(&self) -> &[Mode] {
        &self.x
    }

    pub fn y_modes(&self) -> &[Mode] {
        &self.y
    }

    pub fn translated(&self, offset: Vec2) -> Self {
        let mut c = self.clone();
        for (modes, d) in [(&mut c.x, offset.x), (&mut c.y, offset.y)] {
            if modes.is_empty() {
                modes.push(Mode::default());
            }
            modes[0].cos += d;
        }
        c.samples.iter_mut().for_each(|p| *p += offset);
        c
    }

    /// Rotation about the origin by `angle` (counter-clockwise).
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, co) = angle.sin_cos();
        let n = self.x.len().max(self.y.len());
        let get = |v: &[Mode], k: usize| v.get(k).copied().unwrap_or_default();
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for k in 0..n {
            let (mx, my) = (get(&self.x, k), get(&self.y, k));
            x.push(Mode {
                cos: co * mx.cos - s * my.cos,
                sin: co * mx.sin - s * my.sin,
            });
            y.push(Mode {
                cos: s * mx.cos + co * my.cos,
                sin: s * mx.sin + co * my.sin,
            });
        }
        ClosedCurve {
            x,
            y,
            samples: self.samples.iter().map(|p| p.rotated(angle)).collect(),
        }
    }

    pub fn eval(&self, t: f64) -> Vec2 {
        Vec2::new(series(&self.x, t, 0), series(&self.y, t, 0))
    }

    /// `order`-th derivative with respect to `t`.
    pub fn derivative(&self, t: f64, order: u32) -> Vec2 {
        Vec2::new(series(&self.x, t, order), series(&self.y, t, order))
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.derivative(t, 1).norm()
    }

    /// `p(t0 + delta) - p(t0)`, accurate to relative rounding even when
    /// `delta` is tiny.
    pub fn chord(&self, t0: f64, delta: f64) -> Vec2 {
        Vec2::new(series_diff(&self.x, t0, delta), series_diff(&self.y, t0, delta))
    }

    /// Signed enclosed area (positive for counter-clockwise curves), exact
    /// from the coefficients.
    pub fn signed_area(&self) -> f64 {
        let n = self.x.len().min(self.y.len());
        (1..n)
            .map(|k| k as f64 * (self.x[k].cos * self.y[k].sin - self.x[k].sin * self.y[k].cos))
            .sum::<f64>()
            * PI
    }

    pub fn frame_at(&self, t: f64) -> Result<LocalFrame> {
        let d1 = self.derivative(t, 1);
        let d2 = self.derivative(t, 2);
        let speed = d1.norm();
        if !(speed > SPEED_FLOOR * self.scale()) {
            return Err(Error::DegenerateParametrization { t, speed });
        }
        let tau = d1 / speed;
        let n = tau.rot_cw();
        let kappa = -d1.cross(d2) / speed.powi(3);
        Ok(LocalFrame {
            x: self.eval(t),
            tau,
            n,
            kappa,
            phi: n.angle(),
        })
    }

    /// Arc length of `t ∈ [a, b]`.
    pub fn arc_length(&self, a: f64, b: f64) -> f64 {
        let panels = 64;
        let w = (b - a) / panels as f64;
        (0..panels)
            .map(|j| {
                let lo = a + j as f64 * w;
                kronrod15(|t| self.speed(t), lo, lo + w).0
            })
            .sum()
    }

    pub fn length(&self) -> f64 {
        self.arc_length(0.0, 1.0)
    }

    /// Polygon with `n` vertices at equal arc-length spacing, starting at
    /// `t = 0`, using the default mesh-ratio bound.
    pub fn sample_polygon(&self, n: usize) -> Result<PolygonLoop> {
        self.sample_polygon_with(n, DEFAULT_MESH_RATIO)
    }

    pub fn sample_polygon_with(&self, n: usize, max_ratio: f64) -> Result<PolygonLoop> {
        if n < PolygonLoop::MIN_POINTS {
            return Err(Error::TooFewPoints {
                got: n,
                min: PolygonLoop::MIN_POINTS,
            });
        }
        let params = self.equal_arclength_params(n);
        let points = params.iter().map(|&t| self.eval(t)).collect();
        let mut poly = PolygonLoop::new(points, max_ratio)?;
        poly.params = Some(params);
        Ok(poly)
    }

    /// Parameters `t_0 = 0 < t_1 < ... < t_{n-1} < 1` splitting the curve
    /// into `n` arcs of equal length.
    pub fn equal_arclength_params(&self, n: usize) -> Vec<f64> {
        let panels = (4 * n).max(256);
        let w = 1.0 / panels as f64;
        let mut cumulative = Vec::with_capacity(panels + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for j in 0..panels {
            let lo = j as f64 * w;
            acc += kronrod15(|t| self.speed(t), lo, lo + w).0;
            cumulative.push(acc);
        }
        let total = acc;
        (0..n)
            .map(|i| {
                let s = total * i as f64 / n as f64;
                let j = cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(panels - 1);
                let t_lo = j as f64 * w;
                let mut t = t_lo + (s - cumulative[j]) / self.speed(t_lo).max(f64::MIN_POSITIVE);
                for _ in 0..50 {
                    let s_t = cumulative[j] + kronrod15(|u| self.speed(u), t_lo, t).0;
                    let step = (s_t - s) / self.speed(t);
                    t -= step;
                    if step.abs() < 1e-15 || (s_t - s).abs() < 1e-13 * total {
                        break;
                    }
                }
                t
            })
            .collect()
    }

    /// Parameters `(t_minus, t_plus)` with `t_minus < t0 < t_plus` (not
    /// wrapped) at which the curve leaves the ball `B(p(t0), eps)`.
    ///
    /// Fails when the distance to `p(t0)` is not monotone up to the exit
    /// points, when no exit is found within half a period, or when another
    /// part of the curve enters the ball.
    pub fn ball_exit_params(&self, t0: f64, eps: f64) -> Result<(f64, f64)> {
        let (dm, dp) = self.excision_offsets(t0, eps)?;
        Ok((t0 + dm, t0 + dp))
    }

    /// Offsets `(delta_minus, delta_plus)` from `t0` of the ball exit points.
    pub fn excision_offsets(&self, t0: f64, eps: f64) -> Result<(f64, f64)> {
        let fail = |reason: String| Error::Excision { t0, eps, reason };
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(fail("radius must be positive".into()));
        }
        let plus = self.exit_offset(t0, eps, 1.0).map_err(fail)?;
        let minus = self.exit_offset(t0, eps, -1.0).map_err(fail)?;
        if plus - minus >= 1.0 {
            return Err(fail("the ball contains the whole curve".into()));
        }
        // Any other part of the curve must stay outside the ball.
        let grid = self.samples.len();
        let x0 = self.eval(t0);
        for (i, p) in self.samples.iter().enumerate() {
            let t = i as f64 / grid as f64;
            let off = (t - t0 - minus).rem_euclid(1.0) + minus;
            if off > plus && off < 1.0 + minus && (*p - x0).norm() < eps {
                return Err(fail(format!("curve re-enters the ball near t = {t:.6}")));
            }
        }
        Ok((minus, plus))
    }

    fn exit_offset(&self, t0: f64, eps: f64, dir: f64) -> std::result::Result<f64, String> {
        let dist = |d: f64| self.chord(t0, d).norm();
        let mut prev = 0.0;
        let mut prev_dist = 0.0;
        loop {
            let speed = self.speed(t0 + prev).max(SPEED_FLOOR * self.scale());
            let step = (0.25 * (eps - prev_dist).max(0.25 * eps) / speed).min(1.0 / 64.0);
            let cur = prev + dir * step;
            if cur.abs() > 0.5 {
                return Err("no exit point within half a period".into());
            }
            let chord = self.chord(t0, cur);
            let d = chord.norm();
            let radial = dir * chord.dot(self.derivative(t0 + cur, 1));
            if !(radial > 0.0 && d > prev_dist) {
                return Err("distance to the center is not monotone inside the ball".into());
            }
            if d >= eps {
                return Ok(self.solve_exit(t0, eps, prev, cur, &dist));
            }
            prev = cur;
            prev_dist = d;
        }
    }

    /// Safeguarded Newton for `|chord(d)| = eps` with a sign change on
    /// `[lo, hi]` (in either order).
    fn solve_exit(&self, t0: f64, eps: f64, a: f64, b: f64, dist: &dyn Fn(f64) -> f64) -> f64 {
        // Keep `inside` where dist < eps and `outside` where dist >= eps.
        let (mut inside, mut outside) = (a, b);
        let mut d = b;
        for _ in 0..200 {
            let chord = self.chord(t0, d);
            let r = chord.norm();
            let f = r - eps;
            if f == 0.0 {
                return d;
            }
            if f < 0.0 {
                inside = d;
            } else {
                outside = d;
            }
            let df = chord.dot(self.derivative(t0 + d, 1)) / r;
            let newton = d - f / df;
            let (lo, hi) = if inside < outside {
                (inside, outside)
            } else {
                (outside, inside)
            };
            d = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (inside + outside)
            };
            if (outside - inside).abs() <= 4.0 * f64::EPSILON * d.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        // Pick the better of the last iterate and the bracket ends.
        [d, inside, outside]
            .into_iter()
            .min_by(|&p, &q| (dist(p) - eps).abs().total_cmp(&(dist(q) - eps).abs()))
            .unwrap()
    }

    fn scale(&self) -> f64 {
        self.x
            .iter()
            .chain(self.y.iter())
            .skip(1)
            .map(|m| m.cos.abs() + m.sin.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    fn validate(&mut self) -> Result<()> {
        let grid = VALIDATION_GRID;
        let scale = self.scale();
        for i in 0..grid {
            let t = i as f64 / grid as f64;
            let speed = self.speed(t);
            if !(speed > SPEED_FLOOR * scale) {
                return Err(Error::DegenerateParametrization { t, speed });
            }
        }
        let area = self.signed_area();
        if !(area > 0.0) {
            return Err(Error::NotCounterClockwise { area });
        }
        self.samples = (0..grid).map(|i| self.eval(i as f64 / grid as f64)).collect();
        if let Some((first, second)) = find_crossing(&self.samples) {
            return Err(Error::SelfIntersecting { first, second });
        }
        Ok(())
    }
}

const SPEED_FLOOR: f64 = 1e-10;
const BLOB_AMPLITUDE: f64 = 0.25;

fn series(modes: &[Mode], t: f64, order: u32) -> f64 {
    let mut acc = 0.0;
    for (k, m) in modes.iter().enumerate() {
        if order > 0 && k == 0 {
            continue;
        }
        let w = TAU * k as f64;
        let (s, c) = (w * t).sin_cos();
        let scale = w.powi(order as i32);
        // d^j/dt^j of (cos, sin) cycles through (c, s), (-s, c), (-c, -s), (s, -c).
        let (dc, ds) = match order % 4 {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        acc += scale * (m.cos * dc + m.sin * ds);
    }
    acc
}

fn series_diff(modes: &[Mode], t0: f64, delta: f64) -> f64 {
    let mut acc = 0.0;
    for (k, m) in modes.iter().enumerate().skip(1) {
        let kf = k as f64;
        let half = (PI * kf * delta).sin();
        let (s_mid, c_mid) = (PI * kf * (2.0 * t0 + delta)).sin_cos();
        acc += m.cos * (-2.0 * s_mid * half) + m.sin * (2.0 * c_mid * half);
    }
    acc
}

/// First pair of non-adjacent edges of the closed polyline that intersect.
fn find_crossing(points: &[Vec2]) -> Option<(usize, usize)> {
    let n = points.len();
    let seg = |i: usize| (points[i], points[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| {
        let (a, b) = seg(i);
        a.x.min(b.x)
    };
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let (a, b) = seg(i);
        let lo = a.x.min(b.x);
        active.retain(|&j| {
            let (c, d) = seg(j);
            c.x.max(d.x) >= lo
        });
        for &j in &active {
            let gap = (i + n - j) % n;
            if gap <= 1 || gap == n - 1 {
                continue;
            }
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    None
}

fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2, cr: f64| {
        cr == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4)
}

/// Point, unit tangent, outward normal, signed curvature and normal angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    pub x: Vec2,
    pub tau: Vec2,
    pub n: Vec2,
    pub kappa: f64,
    /// Angle of `n`, in `[0, 2π)`.
    pub phi: f64,
}

impl LocalFrame {
    /// Frame from a point, a normal direction (normalized here) and a
    /// curvature; the tangent is the normal turned counter-clockwise.
    pub fn from_normal(x: Vec2, n: Vec2, kappa: f64) -> Self {
        let n = n.normalized();
        LocalFrame {
            x,
            tau: n.rot_ccw(),
            n,
            kappa,
            phi: n.angle(),
        }
    }

    pub fn tangent_circle(&self) -> TangentCircle {
        tangent_circle(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    CounterClockwise,
    Clockwise,
}

/// Osculating circle of a frame, or its tangent line where `kappa = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentCircle {
    Circle {
        center: Vec2,
        radius: f64,
        traversal: Traversal,
    },
    Line {
        point: Vec2,
        direction: Vec2,
    },
}

/// Tangent circle with center `x + n / kappa`; it is traversed
/// counter-clockwise for `kappa > 0` and clockwise for `kappa < 0`.
pub fn tangent_circle(frame: &LocalFrame) -> TangentCircle {
    if frame.kappa == 0.0 {
        return TangentCircle::Line {
            point: frame.x,
            direction: frame.tau,
        };
    }
    TangentCircle::Circle {
        center: frame.x + frame.n / frame.kappa,
        radius: 1.0 / frame.kappa.abs(),
        traversal: if frame.kappa > 0.0 {
            Traversal::CounterClockwise
        } else {
            Traversal::Clockwise
        },
    }
}

/// Closed polygon `x_1 .. x_N` with periodic indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonLoop {
    points: Vec<Vec2>,
    /// Mean segment length.
    pub h: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Curve parameters of the vertices when sampled from a [`ClosedCurve`].
    pub params: Option<Vec<f64>>,
}

impl PolygonLoop {
    pub const MIN_POINTS: usize = 3;

    /// Validates counter-clockwise order and `h_max / h_min <= max_ratio`.
    /// Segment `i` joins `points[i - 1]` to `points[i]`.
    pub fn new(points: Vec<Vec2>, max_ratio: f64) -> Result<Self> {
        let n = points.len();
        if n < Self::MIN_POINTS {
            return Err(Error::TooFewPoints {
                got: n,
                min: Self::MIN_POINTS,
            });
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Parse("non-finite point coordinate".into()));
        }
        let lengths: Vec<f64> = (0..n)
            .map(|i| (points[i] - points[(i + n - 1) % n]).norm())
            .collect();
        let (mut shortest, mut longest) = (0, 0);
        for (i, &l) in lengths.iter().enumerate() {
            if l < lengths[shortest] {
                shortest = i;
            }
            if l > lengths[longest] {
                longest = i;
            }
        }
        let (h_min, h_max) = (lengths[shortest], lengths[longest]);
        if h_min == 0.0 {
            return Err(Error::Geometry(format!("segment {shortest} has zero length")));
        }
        let area: f64 = (0..n)
            .map(|i| points[i].cross(points[(i + 1) % n]))
            .sum::<f64>()
            * 0.5;
        if !(area > 0.0) {
            return Err(Error::NotCounterClockwise { area });
        }
        let ratio = h_max / h_min;
        if ratio > max_ratio {
            return Err(Error::MeshIrregular {
                ratio,
                limit: max_ratio,
                longest,
                shortest,
            });
        }
        let h = lengths.iter().sum::<f64>() / n as f64;
        Ok(PolygonLoop {
            points,
            h,
            h_min,
            h_max,
            params: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    /// `x_i` with `x_{i + N j} = x_i`.
    #[inline]
    pub fn point(&self, i: isize) -> Vec2 {
        self.points[i.rem_euclid(self.points.len() as isize) as usize]
    }

    pub fn translated(&self, offset: Vec2) -> Self {
        PolygonLoop {
            points: self.points.iter().map(|&p| p + offset).collect(),
            ..self.clone()
        }
    }

    /// Parses a point list: one `x y` pair per line; blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_points(text: &str, max_ratio: f64) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            match fields.as_slice() {
                [x, y] => points.push(Vec2::new(parse(x)?, parse(y)?)),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected two numbers, got {}",
                        lineno + 1,
                        fields.len()
                    )))
                }
            }
        }
        Self::new(points, max_ratio)
    }

    pub fn load(path: &Path, max_ratio: f64) -> Result<Self> {
        Self::parse_points(&std::fs::read_to_string(path)?, max_ratio)
    }

    /// Point-list text in the format read by [`PolygonLoop::parse_points`].
    pub fn to_point_text(&self) -> String {
        let mut out = String::with_capacity(self.points.len() * 48);
        for p in &self.points {
            out.push_str(&format!("{:.17e} {:.17e}\n", p.x, p.y));
        }
        out
    }
}

/// Curve description file.
///
/// ```toml
/// type = "ellipse"
/// a = 2.0
/// b = 1.0
/// ```
///
/// Accepted forms: `type = "circle"` with `radius`; `type = "ellipse"` with
/// `a`, `b`; `type = "fourier"` with any of `x_cos`, `x_sin`, `y_cos`,
/// `y_sin` (coefficient arrays indexed by frequency). `circle` and `ellipse`
/// take an optional `center = [x, y]`. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        radius: f64,
        #[serde(default)]
        center: Option<[f64; 2]>,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: Option<[f64; 2]>,
    },
    Fourier {
        #[serde(default)]
        x_cos: Vec<f64>,
        #[serde(default)]
        x_sin: Vec<f64>,
        #[serde(default)]
        y_cos: Vec<f64>,
        #[serde(default)]
        y_sin: Vec<f64>,
    },
}

impl CurveSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self) -> Result<ClosedCurve> {
        let shift = |c: ClosedCurve, center: &Option<[f64; 2]>| match center {
            Some([x, y]) => c.translated(Vec2::new(*x, *y)),
            None => c,
        };
        match self {
            CurveSpec::Circle { radius, center } => Ok(shift(ClosedCurve::circle(*radius)?, center)),
            CurveSpec::Ellipse { a, b, center } => Ok(shift(ClosedCurve::ellipse(*a, *b)?, center)),
            CurveSpec::Fourier {
                x_cos,
                x_sin,
                y_cos,
                y_sin,
            } => ClosedCurve::from_coefficients(x_cos, x_sin, y_cos, y_sin),
        }
    }
}

/// Named curves: `circle` (R = 1), `ellipse` (a = 2, b = 1) and `blob`.
pub fn preset(name: &str) -> Result<ClosedCurve> {
    match name {
        "circle" => ClosedCurve::circle(1.0),
        "ellipse" => ClosedCurve::ellipse(2.0, 1.0),
        "blob" | "fourier-blob" => Ok(ClosedCurve::blob()),
        other => Err(Error::Parameter(format!(
            "unknown preset {other:?} (expected circle, ellipse or blob)"
        ))),
    }
}
