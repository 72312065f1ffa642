use thiserror::Error;

/// Errors raised by the geometry, curve and shooting routines.
#[derive(Debug, Error)]
pub enum GeoError {
    #[error("invalid point ({x}, {y}): {reason}")]
    InvalidPoint { x: f64, y: f64, reason: &'static str },

    #[error("point height {y:e} underflows the half-plane chart")]
    Underflow { y: f64 },

    #[error("tangent vectors are anchored at different base points")]
    BaseMismatch,

    #[error("inputs live on different manifold backends")]
    GeometryMismatch,

    #[error("expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("curve is not an immersion: speed {speed:e} at node {node}")]
    Immersion { node: usize, speed: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("geodesic propagation failed at s-step {step}, node {node}: {reason}")]
    Propagation { step: usize, node: usize, reason: String },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("shooting towards member {member} failed: {source}")]
    Member {
        member: usize,
        #[source]
        source: Box<GeoError>,
    },

    #[error("component {component} failed: {source}")]
    Component {
        component: usize,
        #[source]
        source: Box<GeoError>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GeoError {
    /// Innermost error, skipping member/component wrappers.
    pub fn root(&self) -> &GeoError {
        match self {
            GeoError::Member { source, .. } | GeoError::Component { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<serde_json::Error> for GeoError {
    fn from(e: serde_json::Error) -> Self {
        GeoError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GeoError>;
