use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate parametrization: |p'(t)| = {speed:e} at t = {t}")]
    DegenerateParametrization { t: f64, speed: f64 },

    #[error("curve is self-intersecting (sample arcs {first} and {second} cross)")]
    SelfIntersecting { first: usize, second: usize },

    #[error("curve is not counter-clockwise (signed area {area})")]
    NotCounterClockwise { area: f64 },

    #[error("invalid curve definition: {0}")]
    InvalidCurve(String),

    #[error(
        "mesh regularity violated: h_max/h_min = {ratio:.4} > {limit} \
         (longest segment {longest}, shortest segment {shortest})"
    )]
    MeshIrregular {
        ratio: f64,
        limit: f64,
        longest: usize,
        shortest: usize,
    },

    #[error("polygon needs at least {min} points, got {got}")]
    TooFewPoints { got: usize, min: usize },

    #[error("cannot excise ball of radius {eps} at t = {t0}: {reason}")]
    Excision { t0: f64, eps: f64, reason: String },

    #[error("kernel singular at z = 0")]
    Singularity,

    #[error("segment passes (nearly) through the evaluation point (denominator {denominator:e})")]
    SingularSegment { denominator: f64 },

    #[error("singular segment {segment} in sum at vertex {vertex}")]
    SingularSegmentAt { vertex: usize, segment: usize },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound:e}")]
    NonConvergence { estimate: f64, error_bound: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("degenerate stencil: {0}")]
    DegenerateStencil(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("mesh too coarse: N = {n} needs N > 2 m + 2 with m = {m}")]
    MeshTooCoarse { n: usize, m: usize },

    #[error("at vertex {index}: {source}")]
    AtVertex {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
