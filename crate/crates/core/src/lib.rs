//! Elastic shape analysis of curves on two-dimensional Riemannian manifolds.

pub mod curve;
pub mod error;
pub mod geodesic;
pub mod io;
pub mod manifold;
pub mod radar;
pub mod shooting;
pub mod stats;

pub use curve::{CurveTangent, DiscreteCurve};
pub use error::{GeoError, Result};
pub use geodesic::{curve_exp, geodesic_distance, GeodesicPath};
pub use manifold::{Geometry, ManifoldPoint, TangentVector, Transport};
pub use shooting::{shoot, ShootingOptions, ShootingResult};
