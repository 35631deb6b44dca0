use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use loopforce::curve::{preset, DEFAULT_MESH_RATIO};
use loopforce::expansion::{psi_estimate, DEFAULT_PSI_EPS};
use loopforce::study::{
    compare_models, force_report_discrete, force_report_expansion, force_report_reference, study_eps,
    study_h, EpsStudy, HStudy, Table,
};
use loopforce::{ClosedCurve, CurveSpec, ElasticModel, PolygonLoop, QuadratureConfig};

/// Self-interaction force of closed planar dislocation loops.
#[derive(Debug, Parser)]
#[command(name = "loopforce", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML config file; command-line flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Curve file (TOML: type = "circle" | "ellipse" | "fourier").
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "preset")]
    curve: Option<PathBuf>,
    /// Named curve: circle, ellipse, blob (alias fourier-blob).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Poisson ratio.
    #[arg(long, global = true, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// Core radius.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Radius at which the nonlocal term is estimated.
    #[arg(long, global = true)]
    psi_eps: Option<f64>,
    /// Vertex count for sampled polygons.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Evaluation points: comma-separated parameters in [0, 1), or
    /// `arc:K` for K points at equal arc-length spacing.
    #[arg(long, global = true)]
    points: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Largest allowed ratio of longest to shortest polygon segment.
    #[arg(long, global = true)]
    mesh_ratio: Option<f64>,
    /// Output file (default: standard output).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Force of both models at one point.
    Force {
        #[arg(long, value_enum, default_value_t = Method::Reference)]
        method: Method,
        /// Curve parameter (reference and expansion).
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Vertex index (discrete).
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Point-list file to use instead of sampling the curve (discrete).
        #[arg(long, value_name = "FILE")]
        polygon: Option<PathBuf>,
    },
    /// Finite-radius estimate of the nonlocal term at each point.
    Psi,
    /// Expansion against reference over a sweep in eps.
    StudyEps {
        /// Comma-separated eps values, sorted.
        #[arg(long)]
        eps_values: Option<String>,
    },
    /// Discrete scheme against reference over a sweep in N.
    StudyH {
        /// Comma-separated vertex counts, sorted.
        #[arg(long)]
        n_values: Option<String>,
    },
    /// Difference of the two models against kappa C.
    CompareModels,
    /// Sample the curve at equal arc length and write a point-list file.
    Sample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Reference,
    Expansion,
    Discrete,
}

/// Config file contents; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    curve: Option<PathBuf>,
    preset: Option<String>,
    nu: Option<f64>,
    eps: Option<f64>,
    psi_eps: Option<f64>,
    n: Option<usize>,
    points: Option<String>,
    mesh_ratio: Option<f64>,
    eps_values: Option<Vec<f64>>,
    n_values: Option<Vec<usize>>,
    quadrature: Option<QuadratureConfig>,
}

/// Resolved settings after merging flags, config file and defaults.
struct Settings {
    curve: ClosedCurve,
    nu: f64,
    eps: f64,
    psi_eps: Option<f64>,
    n: usize,
    points: String,
    mesh_ratio: f64,
    quad: QuadratureConfig,
    eps_values: Vec<f64>,
    n_values: Vec<usize>,
}

const DEFAULT_NU: f64 = 0.3;
const DEFAULT_EPS: f64 = 1e-4;
const DEFAULT_N: usize = 256;
const DEFAULT_POINTS: &str = "arc:8";
const DEFAULT_EPS_VALUES: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
const DEFAULT_N_VALUES: [usize; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("invalid {what} value {s:?}: {e}")))
        .collect()
}

fn load_config(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn resolve(common: &Common, command: &Command) -> Result<Settings> {
    let file = match &common.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let curve = if let Some(p) = &common.curve {
        CurveSpec::load(p)?.build()?
    } else if let Some(name) = &common.preset {
        preset(name)?
    } else if let Some(p) = &file.curve {
        CurveSpec::load(p)?.build()?
    } else {
        preset(file.preset.as_deref().unwrap_or("circle"))?
    };
    let mut quad = file.quadrature.unwrap_or_default();
    if let Some(t) = common.tol {
        quad.rel_tol = t;
    }
    quad.validate()?;
    let eps_values = match command {
        Command::StudyEps { eps_values: Some(s) } => parse_list(s, "eps")?,
        _ => file.eps_values.unwrap_or_else(|| DEFAULT_EPS_VALUES.to_vec()),
    };
    let n_values = match command {
        Command::StudyH { n_values: Some(s) } => parse_list(s, "N")?,
        _ => file.n_values.unwrap_or_else(|| DEFAULT_N_VALUES.to_vec()),
    };
    let settings = Settings {
        curve,
        nu: common.nu.or(file.nu).unwrap_or(DEFAULT_NU),
        eps: common.eps.or(file.eps).unwrap_or(DEFAULT_EPS),
        psi_eps: common.psi_eps.or(file.psi_eps),
        n: common.n.or(file.n).unwrap_or(DEFAULT_N),
        points: common
            .points
            .clone()
            .or(file.points)
            .unwrap_or_else(|| DEFAULT_POINTS.to_string()),
        mesh_ratio: common.mesh_ratio.or(file.mesh_ratio).unwrap_or(DEFAULT_MESH_RATIO),
        quad,
        eps_values,
        n_values,
    };
    ElasticModel::new(settings.nu, settings.eps)?;
    Ok(settings)
}

fn eval_points(curve: &ClosedCurve, spec: &str) -> Result<Vec<f64>> {
    if let Some(k) = spec.strip_prefix("arc:") {
        let k: usize = k.trim().parse().with_context(|| format!("invalid point count in {spec:?}"))?;
        if k == 0 {
            bail!("point count must be positive");
        }
        return Ok(curve.equal_arclength_params(k));
    }
    let pts: Vec<f64> = parse_list(spec, "point")?;
    if pts.is_empty() {
        bail!("no evaluation points given");
    }
    Ok(pts)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let s = resolve(&cli.common, &cli.command)?;
    let model = ElasticModel::new(s.nu, s.eps)?;
    let text = match &cli.command {
        Command::Force {
            method,
            t0,
            vertex,
            polygon,
        } => {
            let report = match method {
                Method::Reference => force_report_reference(&s.curve, *t0, &model, &s.quad)?,
                Method::Expansion => force_report_expansion(
                    &s.curve,
                    *t0,
                    &model,
                    s.psi_eps.unwrap_or(DEFAULT_PSI_EPS),
                    &s.quad,
                )?,
                Method::Discrete => {
                    let poly = match polygon {
                        Some(p) => PolygonLoop::load(p, s.mesh_ratio)?,
                        None => s.curve.sample_polygon_with(s.n, s.mesh_ratio)?,
                    };
                    force_report_discrete(&poly, *vertex, &model)?
                }
            };
            report.to_text()
        }
        Command::Psi => {
            let eval_eps = s.psi_eps.unwrap_or(s.eps);
            let mut rows = Vec::new();
            for t0 in eval_points(&s.curve, &s.points)? {
                let psi = psi_estimate(&s.curve, t0, eval_eps, s.nu, &s.quad)
                    .with_context(|| format!("psi at t0 = {t0}"))?;
                rows.push(vec![t0, eval_eps, psi]);
            }
            Table {
                header: vec!["t0", "eval_eps", "psi"],
                rows,
                footer: vec![],
            }
            .to_csv()
        }
        Command::StudyEps { .. } => {
            let res = study_eps(
                &s.curve,
                &EpsStudy {
                    nu: s.nu,
                    eps_values: s.eps_values.clone(),
                    points: eval_points(&s.curve, &s.points)?,
                    psi_eps: s.psi_eps,
                    quad: s.quad,
                },
            )?;
            res.table().to_csv()
        }
        Command::StudyH { .. } => {
            let res = study_h(
                &s.curve,
                &HStudy {
                    nu: s.nu,
                    eps: s.eps,
                    n_values: s.n_values.clone(),
                    max_mesh_ratio: s.mesh_ratio,
                    quad: s.quad,
                },
            )?;
            res.table().to_csv()
        }
        Command::CompareModels => {
            let points = eval_points(&s.curve, &s.points)?;
            compare_models(&s.curve, &model, &points, &s.quad)?.table().to_csv()
        }
        Command::Sample => s.curve.sample_polygon_with(s.n, s.mesh_ratio)?.to_point_text(),
    };
    emit(&cli.common.out, &text)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}
