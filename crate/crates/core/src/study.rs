//! Convergence studies and force reports, with CSV output.
//!
//! Every table is written as a single header row, data rows, and `#`-prefixed
//! `key = value` footer lines. Numbers use Rust's shortest round-trip
//! formatting, so identical inputs give byte-identical output regardless of
//! thread scheduling.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curve::ClosedCurve;
use crate::discrete::{force_all_points, DiscreteFrame, ForceModel};
use crate::error::{Error, Result};
use crate::expansion::{const_c, const_c_base, force_cutoff_expansion, force_nonsingular_expansion, ForceBreakdown};
use crate::fit::{log_log_slope, spread};
use crate::kernel::ElasticModel;
use crate::par;
use crate::quadrature::{force_cutoff_reference, force_nonsingular_reference, QuadratureConfig};

/// Header, rows and footer of a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub footer: Vec<(String, f64)>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.footer {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out
    }
}

fn in_row(context: String) -> impl Fn(Error) -> Error {
    move |e| Error::Parameter(format!("{context}: {e}"))
}

/// Checks that sweep values are non-empty, positive and strictly monotone.
pub fn validate_sweep(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Parameter(format!("empty {what} sweep")));
    }
    if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Parameter(format!("{what} sweep values must be positive")));
    }
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(Error::Parameter(format!("{what} sweep values must be sorted and distinct")));
    }
    Ok(())
}

fn validate_points(points: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Parameter("no evaluation points".into()));
    }
    if points.iter().any(|t| !t.is_finite()) {
        return Err(Error::Parameter("non-finite evaluation point".into()));
    }
    Ok(())
}

/// Reference values of both forces at one curve parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferencePair {
    pub t0: f64,
    pub cutoff: f64,
    pub nonsingular: f64,
}

/// Reference forces at many parameters, evaluated in parallel.
pub fn reference_values(
    curve: &ClosedCurve,
    params: &[f64],
    model: &ElasticModel,
    quad: &QuadratureConfig,
) -> Result<Vec<ReferencePair>> {
    par::try_map_indices(params.len(), |k| {
        let t0 = params[k];
        let ctx = || in_row(format!("reference at t0 = {t0}"));
        Ok::<_, Error>(ReferencePair {
            t0,
            cutoff: force_cutoff_reference(curve, t0, model, quad).map_err(ctx())?,
            nonsingular: force_nonsingular_reference(curve, t0, model, quad).map_err(ctx())?,
        })
    })
}

/// Reference values keyed by curve parameter, looked up with a tolerance
/// so that vertices shared by nested samplings are computed once.
#[derive(Debug, Clone, Default)]
pub struct ReferenceCache {
    entries: Vec<ReferencePair>,
}

impl ReferenceCache {
    const MATCH_TOL: f64 = 1e-11;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, t0: f64) -> Option<ReferencePair> {
        let t = t0.rem_euclid(1.0);
        let i = self.entries.partition_point(|e| e.t0 < t - Self::MATCH_TOL);
        [i, i + 1]
            .into_iter()
            .filter_map(|j| self.entries.get(j))
            .chain(self.entries.first())
            .chain(self.entries.last())
            .find(|e| {
                let d = (e.t0 - t).abs();
                d.min(1.0 - d) <= Self::MATCH_TOL
            })
            .copied()
    }

    /// Computes and stores references for every parameter not yet cached.
    pub fn fill(
        &mut self,
        curve: &ClosedCurve,
        params: &[f64],
        model: &ElasticModel,
        quad: &QuadratureConfig,
    ) -> Result<()> {
        let mut missing: Vec<f64> = params
            .iter()
            .map(|t| t.rem_euclid(1.0))
            .filter(|&t| self.get(t).is_none())
            .collect();
        missing.sort_by(f64::total_cmp);
        missing.dedup_by(|a, b| (*a - *b).abs() <= Self::MATCH_TOL);
        let fresh = reference_values(curve, &missing, model, quad)?;
        self.entries.extend(fresh);
        self.entries.sort_by(|a, b| a.t0.total_cmp(&b.t0));
        Ok(())
    }
}

/// Parameters of `n` points at equal arc-length spacing.
pub fn arc_length_points(curve: &ClosedCurve, n: usize) -> Vec<f64> {
    curve.equal_arclength_params(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsStudy {
    pub nu: f64,
    pub eps_values: Vec<f64>,
    pub points: Vec<f64>,
    /// Radius for the nonlocal term; `None` uses each row's `eps`.
    pub psi_eps: Option<f64>,
    pub quad: QuadratureConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsRow {
    pub eps: f64,
    pub t0: f64,
    pub f_ref: f64,
    pub f_exp: f64,
    pub cf_ref: f64,
    pub cf_exp: f64,
    pub err_f: f64,
    pub err_cf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsStudyResult {
    pub rows: Vec<EpsRow>,
    /// Log-log slopes against `eps` of the per-`eps` maximum errors.
    pub slope_f: Option<f64>,
    pub slope_cf: Option<f64>,
}

impl EpsStudyResult {
    pub const HEADER: [&'static str; 8] = ["eps", "t0", "F_ref", "F_exp", "cF_ref", "cF_exp", "err_F", "err_cF"];

    /// Per-`eps` maximum over points of `(err_F, err_cF)`, in sweep order.
    pub fn max_errors(&self) -> Vec<(f64, f64, f64)> {
        let mut out: Vec<(f64, f64, f64)> = Vec::new();
        for r in &self.rows {
            match out.last_mut() {
                Some(last) if last.0 == r.eps => {
                    last.1 = last.1.max(r.err_f);
                    last.2 = last.2.max(r.err_cf);
                }
                _ => out.push((r.eps, r.err_f, r.err_cf)),
            }
        }
        out
    }

    pub fn table(&self) -> Table {
        let mut footer = Vec::new();
        if let Some(s) = self.slope_f {
            footer.push(("slope_err_F".to_string(), s));
        }
        if let Some(s) = self.slope_cf {
            footer.push(("slope_err_cF".to_string(), s));
        }
        Table {
            header: Self::HEADER.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| vec![r.eps, r.t0, r.f_ref, r.f_exp, r.cf_ref, r.cf_exp, r.err_f, r.err_cf])
                .collect(),
            footer,
        }
    }
}

/// Expansion versus reference over an `eps` sweep.
pub fn study_eps(curve: &ClosedCurve, spec: &EpsStudy) -> Result<EpsStudyResult> {
    validate_sweep(&spec.eps_values, "eps")?;
    validate_points(&spec.points)?;
    let jobs: Vec<(f64, f64)> = spec
        .eps_values
        .iter()
        .flat_map(|&e| spec.points.iter().map(move |&t| (e, t)))
        .collect();
    let rows = par::try_map_indices(jobs.len(), |k| {
        let (eps, t0) = jobs[k];
        let ctx = || in_row(format!("row eps = {eps}, t0 = {t0}"));
        let model = ElasticModel::new(spec.nu, eps).map_err(ctx())?;
        let psi_eps = spec.psi_eps.unwrap_or(eps);
        let f_ref = force_cutoff_reference(curve, t0, &model, &spec.quad).map_err(ctx())?;
        let cf_ref = force_nonsingular_reference(curve, t0, &model, &spec.quad).map_err(ctx())?;
        let f_exp = force_cutoff_expansion(curve, t0, &model, psi_eps, &spec.quad).map_err(ctx())?;
        let cf_exp = f_exp.total + f_exp.kappa * const_c(f_exp.phi, spec.nu);
        Ok::<_, Error>(EpsRow {
            eps,
            t0,
            f_ref,
            f_exp: f_exp.total,
            cf_ref,
            cf_exp,
            err_f: (f_ref - f_exp.total).abs(),
            err_cf: (cf_ref - cf_exp).abs(),
        })
    })?;
    let mut res = EpsStudyResult {
        rows,
        slope_f: None,
        slope_cf: None,
    };
    let maxes = res.max_errors();
    let eps: Vec<f64> = maxes.iter().map(|m| m.0).collect();
    res.slope_f = log_log_slope(&eps, &maxes.iter().map(|m| m.1).collect::<Vec<_>>());
    res.slope_cf = log_log_slope(&eps, &maxes.iter().map(|m| m.2).collect::<Vec<_>>());
    Ok(res)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HStudy {
    pub nu: f64,
    pub eps: f64,
    pub n_values: Vec<usize>,
    pub max_mesh_ratio: f64,
    pub quad: QuadratureConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HRow {
    pub n: usize,
    pub h: f64,
    pub eps: f64,
    pub max_err_f: f64,
    pub mean_err_f: f64,
    pub max_err_cf: f64,
    /// `eps + h |log eps| + h^{2/3}`
    pub bound: f64,
    /// `max_err_f / bound`
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HStudyResult {
    pub rows: Vec<HRow>,
    pub max_ratio: f64,
    /// `max ratio / min ratio` over the sweep.
    pub ratio_spread: Option<f64>,
    /// Log-log slope of `max_err_F` against `h`.
    pub h_order: Option<f64>,
}

impl HStudyResult {
    pub const HEADER: [&'static str; 8] = [
        "N",
        "h",
        "eps",
        "max_err_F",
        "mean_err_F",
        "max_err_cF",
        "bound",
        "ratio",
    ];

    pub fn table(&self) -> Table {
        let mut footer = vec![("max_ratio".to_string(), self.max_ratio)];
        if let Some(s) = self.ratio_spread {
            footer.push(("ratio_spread".to_string(), s));
        }
        if let Some(s) = self.h_order {
            footer.push(("h_order".to_string(), s));
        }
        Table {
            header: Self::HEADER.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n as f64,
                        r.h,
                        r.eps,
                        r.max_err_f,
                        r.mean_err_f,
                        r.max_err_cf,
                        r.bound,
                        r.ratio,
                    ]
                })
                .collect(),
            footer,
        }
    }
}

/// `eps + h |log eps| + h^{2/3}`.
pub fn discretization_bound(eps: f64, h: f64) -> f64 {
    eps + h * eps.ln().abs() + h.powf(2.0 / 3.0)
}

/// Discrete scheme versus reference quadrature over a sweep in `N`.
pub fn study_h(curve: &ClosedCurve, spec: &HStudy) -> Result<HStudyResult> {
    let mut cache = ReferenceCache::new();
    study_h_cached(curve, spec, &mut cache)
}

/// [`study_h`] reusing (and extending) a reference cache.
pub fn study_h_cached(curve: &ClosedCurve, spec: &HStudy, cache: &mut ReferenceCache) -> Result<HStudyResult> {
    let ns: Vec<f64> = spec.n_values.iter().map(|&n| n as f64).collect();
    validate_sweep(&ns, "N")?;
    let model = ElasticModel::new(spec.nu, spec.eps)?;
    let mut loops = Vec::with_capacity(spec.n_values.len());
    for &n in &spec.n_values {
        let poly = curve
            .sample_polygon_with(n, spec.max_mesh_ratio)
            .map_err(in_row(format!("row N = {n}")))?;
        crate::discrete::loop_neighborhood(&poly).map_err(in_row(format!("row N = {n}")))?;
        loops.push(poly);
    }
    // Finest sampling first.
    let mut order: Vec<usize> = (0..loops.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(loops[k].len()));
    for &k in &order {
        let params = loops[k].params.as_ref().expect("sampled loops carry parameters");
        cache.fill(curve, params, &model, &spec.quad)?;
    }
    let mut rows = Vec::with_capacity(loops.len());
    for poly in &loops {
        let n = poly.len();
        let ctx = || in_row(format!("row N = {n}"));
        let fh = force_all_points(poly, &model, ForceModel::Cutoff).map_err(ctx())?;
        let cfh = force_all_points(poly, &model, ForceModel::Nonsingular).map_err(ctx())?;
        let params = poly.params.as_ref().expect("sampled loops carry parameters");
        let mut max_f: f64 = 0.0;
        let mut max_cf: f64 = 0.0;
        let mut sum_f = 0.0;
        for (i, &t) in params.iter().enumerate() {
            let r = cache.get(t).expect("reference filled above");
            let ef = (fh[i] - r.cutoff).abs();
            let ecf = (cfh[i] - r.nonsingular).abs();
            max_f = max_f.max(ef);
            max_cf = max_cf.max(ecf);
            sum_f += ef;
        }
        let bound = discretization_bound(spec.eps, poly.h);
        rows.push(HRow {
            n,
            h: poly.h,
            eps: spec.eps,
            max_err_f: max_f,
            mean_err_f: sum_f / n as f64,
            max_err_cf: max_cf,
            bound,
            ratio: max_f / bound,
        });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.max_err_f).collect();
    Ok(HStudyResult {
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        ratio_spread: spread(&ratios),
        h_order: log_log_slope(&hs, &errs),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub t0: f64,
    pub phi: f64,
    pub kappa: f64,
    /// Non-singular minus cut-off reference force.
    pub diff_ref: f64,
    pub kappa_c: f64,
    pub residual: f64,
    /// Residual against [`const_c_base`](crate::expansion::const_c_base).
    pub residual_base: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareResult {
    pub eps: f64,
    pub rows: Vec<CompareRow>,
    pub max_abs_residual: f64,
    pub max_abs_residual_base: f64,
}

impl CompareResult {
    pub const HEADER: [&'static str; 7] = ["t0", "phi", "kappa", "diff_ref", "kappaC", "residual", "residual_base_C"];

    pub fn table(&self) -> Table {
        Table {
            header: Self::HEADER.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| vec![r.t0, r.phi, r.kappa, r.diff_ref, r.kappa_c, r.residual, r.residual_base])
                .collect(),
            footer: vec![
                ("eps".to_string(), self.eps),
                ("max_abs_residual".to_string(), self.max_abs_residual),
                ("max_abs_residual_over_eps".to_string(), self.max_abs_residual / self.eps),
                ("max_abs_residual_base_C".to_string(), self.max_abs_residual_base),
            ],
        }
    }
}

/// Difference of the two reference forces against `kappa C(phi)`.
pub fn compare_models(
    curve: &ClosedCurve,
    model: &ElasticModel,
    points: &[f64],
    quad: &QuadratureConfig,
) -> Result<CompareResult> {
    validate_points(points)?;
    let refs = reference_values(curve, points, model, quad)?;
    let mut rows = Vec::with_capacity(points.len());
    for r in refs {
        let frame = curve.frame_at(r.t0)?;
        let diff_ref = r.nonsingular - r.cutoff;
        let kappa_c = frame.kappa * const_c(frame.phi, model.nu);
        rows.push(CompareRow {
            t0: r.t0,
            phi: frame.phi,
            kappa: frame.kappa,
            diff_ref,
            kappa_c,
            residual: diff_ref - kappa_c,
            residual_base: diff_ref - frame.kappa * const_c_base(frame.phi, model.nu),
        });
    }
    let max_abs_residual = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    let max_abs_residual_base = rows.iter().map(|r| r.residual_base.abs()).fold(0.0, f64::max);
    Ok(CompareResult {
        eps: model.eps,
        rows,
        max_abs_residual,
        max_abs_residual_base,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Reference,
    Expansion,
    Discrete,
}

/// Force values of both models at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForceReport {
    pub method: Method,
    /// Curve parameter (reference and expansion methods).
    pub t0: Option<f64>,
    /// Vertex index and loop size (discrete method).
    pub vertex: Option<usize>,
    pub n: Option<usize>,
    pub cutoff: f64,
    pub nonsingular: f64,
    pub cutoff_breakdown: Option<ForceBreakdown>,
    pub nonsingular_breakdown: Option<ForceBreakdown>,
    pub discrete_frame: Option<(f64, f64)>,
}

impl ForceReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "method = {:?}", self.method);
        if let Some(t) = self.t0 {
            let _ = writeln!(out, "t0 = {t}");
        }
        if let (Some(i), Some(n)) = (self.vertex, self.n) {
            let _ = writeln!(out, "vertex = {i}\nN = {n}");
        }
        if let Some((k, phi)) = self.discrete_frame {
            let _ = writeln!(out, "kappa_h = {k}\nphi_h = {phi}");
        }
        let _ = writeln!(out, "F = {}", self.cutoff);
        let _ = writeln!(out, "cF = {}", self.nonsingular);
        for (name, b) in [("F", &self.cutoff_breakdown), ("cF", &self.nonsingular_breakdown)] {
            if let Some(b) = b {
                let _ = writeln!(
                    out,
                    "{name}.kappa = {}\n{name}.phi = {}\n{name}.log_term = {}\n{name}.local_term = {}\n\
                     {name}.psi = {}\n{name}.model_shift = {}\n{name}.total = {}\n{name}.psi_eval_eps = {}",
                    b.kappa, b.phi, b.log_term, b.local_term, b.psi, b.model_shift, b.total, b.psi_eval_eps
                );
            }
        }
        out
    }
}

pub fn force_report_reference(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    quad: &QuadratureConfig,
) -> Result<ForceReport> {
    Ok(ForceReport {
        method: Method::Reference,
        t0: Some(t0),
        vertex: None,
        n: None,
        cutoff: force_cutoff_reference(curve, t0, model, quad)?,
        nonsingular: force_nonsingular_reference(curve, t0, model, quad)?,
        cutoff_breakdown: None,
        nonsingular_breakdown: None,
        discrete_frame: None,
    })
}

pub fn force_report_expansion(
    curve: &ClosedCurve,
    t0: f64,
    model: &ElasticModel,
    psi_eps: f64,
    quad: &QuadratureConfig,
) -> Result<ForceReport> {
    let f = force_cutoff_expansion(curve, t0, model, psi_eps, quad)?;
    let cf = force_nonsingular_expansion(curve, t0, model, psi_eps, quad)?;
    Ok(ForceReport {
        method: Method::Expansion,
        t0: Some(t0),
        vertex: None,
        n: None,
        cutoff: f.total,
        nonsingular: cf.total,
        cutoff_breakdown: Some(f),
        nonsingular_breakdown: Some(cf),
        discrete_frame: None,
    })
}

pub fn force_report_discrete(
    poly: &crate::curve::PolygonLoop,
    vertex: usize,
    model: &ElasticModel,
) -> Result<ForceReport> {
    if vertex >= poly.len() {
        return Err(Error::Parameter(format!(
            "vertex {vertex} out of range for N = {}",
            poly.len()
        )));
    }
    let frame = DiscreteFrame::at(poly, vertex)?;
    Ok(ForceReport {
        method: Method::Discrete,
        t0: poly.params.as_ref().map(|p| p[vertex]),
        vertex: Some(vertex),
        n: Some(poly.len()),
        cutoff: crate::discrete::force_cutoff_discrete(poly, vertex, model)?,
        nonsingular: crate::discrete::force_nonsingular_discrete(poly, vertex, model)?,
        cutoff_breakdown: None,
        nonsingular_breakdown: None,
        discrete_frame: Some((frame.kappa_h, frame.phi_h)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_validation() {
        assert!(validate_sweep(&[], "eps").is_err());
        assert!(validate_sweep(&[1e-2, -1e-3], "eps").is_err());
        assert!(validate_sweep(&[1e-2, 1e-3, 1e-2], "eps").is_err());
        assert!(validate_sweep(&[1e-2, 1e-3], "eps").is_ok());
        assert!(validate_sweep(&[64.0, 128.0], "N").is_ok());
    }

    #[test]
    fn empty_eps_sweep_is_a_usage_error() {
        let c = ClosedCurve::circle(1.0).unwrap();
        let spec = EpsStudy {
            nu: 0.3,
            eps_values: vec![],
            points: vec![0.0],
            psi_eps: None,
            quad: QuadratureConfig::default(),
        };
        assert!(matches!(study_eps(&c, &spec), Err(Error::Parameter(_))));
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            header: vec!["a", "b"],
            rows: vec![vec![1.0, 0.5], vec![64.0, 1e-7]],
            footer: vec![("slope".into(), 0.75)],
        };
        assert_eq!(t.to_csv(), "a,b\n1,0.5\n64,0.0000001\n# slope = 0.75\n");
    }

    #[test]
    fn cache_matches_nearby_parameters() {
        let c = ClosedCurve::circle(1.0).unwrap();
        let m = ElasticModel::new(0.3, 1e-2).unwrap();
        let mut cache = ReferenceCache::new();
        cache.fill(&c, &[0.0, 0.5], &m, &QuadratureConfig::default()).unwrap();
        assert_eq!(cache.len(), 2);
        assert!(cache.get(0.5 + 1e-13).is_some());
        assert!(cache.get(1.0 - 1e-13).is_some());
        assert!(cache.get(0.25).is_none());
        cache.fill(&c, &[0.0, 0.25], &m, &QuadratureConfig::default()).unwrap();
        assert_eq!(cache.len(), 3);
    }

    #[test]
    fn study_h_rejects_coarse_mesh() {
        let c = ClosedCurve::circle(0.2).unwrap();
        let spec = HStudy {
            nu: 0.3,
            eps: 1e-6,
            n_values: vec![6],
            max_mesh_ratio: 3.0,
            quad: QuadratureConfig::default(),
        };
        let err = study_h(&c, &spec).unwrap_err().to_string();
        assert!(err.contains("N = 6"), "{err}");
    }
}
