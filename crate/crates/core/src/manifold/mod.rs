//! Two-dimensional Riemannian backends.
//!
//! Points carry a [`Geometry`] tag selecting either the hyperbolic upper
//! half-plane (metric `(dx² + dy²) / y²`, constant curvature −1) or the flat
//! Euclidean plane. The flat backend is a cross-validation oracle for the curve
//! algorithms: every closed form degenerates to vector arithmetic there.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};

pub mod hyperbolic;

pub use hyperbolic::MoebiusCoefficients;

/// Coordinates closer than this (relative to their magnitude) denote the same point.
pub const SAME_POINT_TOL: f64 = 1e-12;

/// Smallest admissible height on the half-plane.
pub const MIN_HEIGHT: f64 = 1e-12;

/// Manifold backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Hyperbolic,
    Euclidean,
}

impl Geometry {
    /// Constant sectional curvature of the backend.
    pub fn sectional_curvature(self) -> f64 {
        match self {
            Geometry::Hyperbolic => -1.0,
            Geometry::Euclidean => 0.0,
        }
    }

    pub fn point(self, x: f64, y: f64) -> Result<ManifoldPoint> {
        ManifoldPoint::new(self, x, y)
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Hyperbolic => "hyperbolic",
            Geometry::Euclidean => "euclidean",
        }
    }
}

/// A point of the manifold in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldPoint {
    x: f64,
    y: f64,
    geometry: Geometry,
}

impl ManifoldPoint {
    pub fn new(geometry: Geometry, x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(GeoError::InvalidPoint { x, y, reason: "non-finite coordinate" });
        }
        if geometry == Geometry::Hyperbolic {
            if y <= 0.0 {
                return Err(GeoError::InvalidPoint { x, y, reason: "half-plane requires y > 0" });
            }
            if y < MIN_HEIGHT {
                return Err(GeoError::Underflow { y });
            }
        }
        Ok(Self { x, y, geometry })
    }

    pub fn hyperbolic(x: f64, y: f64) -> Result<Self> {
        Self::new(Geometry::Hyperbolic, x, y)
    }

    pub fn euclidean(x: f64, y: f64) -> Result<Self> {
        Self::new(Geometry::Euclidean, x, y)
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    /// Same backend and same chart coordinates within [`SAME_POINT_TOL`].
    pub fn coincides(&self, other: &ManifoldPoint) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= SAME_POINT_TOL * a.abs().max(b.abs()).max(1.0);
        self.geometry == other.geometry && close(self.x, other.x) && close(self.y, other.y)
    }

    /// Conformal factor of the metric at this point.
    #[inline]
    pub(crate) fn metric_factor(&self) -> f64 {
        match self.geometry {
            Geometry::Hyperbolic => 1.0 / (self.y * self.y),
            Geometry::Euclidean => 1.0,
        }
    }
}

/// A tangent vector, stored as chart components at its base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: ManifoldPoint,
    pub dx: f64,
    pub dy: f64,
}

impl TangentVector {
    pub fn new(base: ManifoldPoint, dx: f64, dy: f64) -> Result<Self> {
        if !dx.is_finite() || !dy.is_finite() {
            return Err(GeoError::InvalidPoint { x: dx, y: dy, reason: "non-finite tangent component" });
        }
        Ok(Self { base, dx, dy })
    }

    #[inline]
    pub(crate) fn raw(base: ManifoldPoint, dx: f64, dy: f64) -> Self {
        Self { base, dx, dy }
    }

    #[inline]
    pub fn zero(base: ManifoldPoint) -> Self {
        Self { base, dx: 0.0, dy: 0.0 }
    }

    #[inline]
    pub fn base(&self) -> ManifoldPoint {
        self.base
    }

    pub fn components(&self) -> [f64; 2] {
        [self.dx, self.dy]
    }

    /// Metric inner product without the base-point check.
    #[inline]
    pub fn dot(&self, other: &TangentVector) -> f64 {
        debug_assert!(self.base.coincides(&other.base));
        (self.dx * other.dx + self.dy * other.dy) * self.base.metric_factor()
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }

    /// Same components re-anchored at `base` (no transport).
    #[inline]
    pub(crate) fn rebased(&self, base: ManifoldPoint) -> Self {
        Self { base, dx: self.dx, dy: self.dy }
    }

    /// Projection onto the unit vector `unit`: `⟨self, unit⟩ unit`.
    #[inline]
    pub fn along(&self, unit: &TangentVector) -> TangentVector {
        *unit * self.dot(unit)
    }
}

impl Add for TangentVector {
    type Output = TangentVector;
    #[inline]
    fn add(self, rhs: TangentVector) -> TangentVector {
        debug_assert!(self.base.coincides(&rhs.base));
        TangentVector { base: self.base, dx: self.dx + rhs.dx, dy: self.dy + rhs.dy }
    }
}

impl Sub for TangentVector {
    type Output = TangentVector;
    #[inline]
    fn sub(self, rhs: TangentVector) -> TangentVector {
        debug_assert!(self.base.coincides(&rhs.base));
        TangentVector { base: self.base, dx: self.dx - rhs.dx, dy: self.dy - rhs.dy }
    }
}

impl Neg for TangentVector {
    type Output = TangentVector;
    #[inline]
    fn neg(self) -> TangentVector {
        TangentVector { base: self.base, dx: -self.dx, dy: -self.dy }
    }
}

impl Mul<f64> for TangentVector {
    type Output = TangentVector;
    #[inline]
    fn mul(self, k: f64) -> TangentVector {
        TangentVector { base: self.base, dx: self.dx * k, dy: self.dy * k }
    }
}

impl Mul<TangentVector> for f64 {
    type Output = TangentVector;
    #[inline]
    fn mul(self, v: TangentVector) -> TangentVector {
        v * self
    }
}

impl AddAssign for TangentVector {
    #[inline]
    fn add_assign(&mut self, rhs: TangentVector) {
        *self = *self + rhs;
    }
}

impl SubAssign for TangentVector {
    #[inline]
    fn sub_assign(&mut self, rhs: TangentVector) {
        *self = *self - rhs;
    }
}

/// Linear isometry between two tangent spaces: a scaling followed by the
/// rotation `[[cos θ, sin θ], [−sin θ, cos θ]]` acting on chart components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transport {
    from: ManifoldPoint,
    to: ManifoldPoint,
    scale: f64,
    cos: f64,
    sin: f64,
}

impl Transport {
    pub fn identity(at: ManifoldPoint) -> Self {
        Self { from: at, to: at, scale: 1.0, cos: 1.0, sin: 0.0 }
    }

    pub(crate) fn new(from: ManifoldPoint, to: ManifoldPoint, scale: f64, angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self { from, to, scale, cos, sin }
    }

    pub fn from(&self) -> ManifoldPoint {
        self.from
    }

    pub fn to(&self) -> ManifoldPoint {
        self.to
    }

    /// Rotation angle θ of the transport.
    pub fn angle(&self) -> f64 {
        self.sin.atan2(self.cos)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn apply(&self, u: &TangentVector) -> TangentVector {
        debug_assert!(u.base.coincides(&self.from), "transport applied at the wrong base");
        let (a, b) = (u.dx, u.dy);
        TangentVector {
            base: self.to,
            dx: self.scale * (a * self.cos + b * self.sin),
            dy: self.scale * (-a * self.sin + b * self.cos),
        }
    }

    pub fn inverse(&self) -> Transport {
        Transport { from: self.to, to: self.from, scale: 1.0 / self.scale, cos: self.cos, sin: -self.sin }
    }

    /// Composite map: `self` followed by `next`.
    pub fn then(&self, next: &Transport) -> Transport {
        debug_assert!(self.to.coincides(&next.from));
        Transport {
            from: self.from,
            to: next.to,
            scale: self.scale * next.scale,
            cos: self.cos * next.cos - self.sin * next.sin,
            sin: self.sin * next.cos + self.cos * next.sin,
        }
    }
}

fn require_same_base(u: &TangentVector, v: &TangentVector) -> Result<()> {
    if u.base.coincides(&v.base) {
        Ok(())
    } else {
        Err(GeoError::BaseMismatch)
    }
}

fn require_same_geometry(p: &ManifoldPoint, q: &ManifoldPoint) -> Result<()> {
    if p.geometry == q.geometry {
        Ok(())
    } else {
        Err(GeoError::GeometryMismatch)
    }
}

/// Riemannian inner product of two vectors sharing a base point.
pub fn metric_inner(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    require_same_base(u, v)?;
    Ok(u.dot(v))
}

/// Endpoint of the geodesic leaving `u.base()` with initial velocity `u`.
pub fn exp_point(u: &TangentVector) -> Result<ManifoldPoint> {
    let p = u.base;
    if u.is_zero() {
        return Ok(p);
    }
    match p.geometry {
        Geometry::Euclidean => ManifoldPoint::euclidean(p.x + u.dx, p.y + u.dy),
        Geometry::Hyperbolic => {
            let (x, y) = hyperbolic::exp(p.x, p.y, u.dx, u.dy);
            if !(y >= MIN_HEIGHT) {
                return Err(GeoError::Underflow { y });
            }
            ManifoldPoint::hyperbolic(x, y)
        }
    }
}

/// Initial velocity of the geodesic from `p` reaching `q` at time one.
pub fn log_point(p: &ManifoldPoint, q: &ManifoldPoint) -> Result<TangentVector> {
    require_same_geometry(p, q)?;
    let [dx, dy] = match p.geometry {
        Geometry::Euclidean => [q.x - p.x, q.y - p.y],
        Geometry::Hyperbolic => hyperbolic::log(p.x, p.y, q.x, q.y),
    };
    TangentVector::new(*p, dx, dy)
}

/// Geodesic distance between two points.
pub fn distance(p: &ManifoldPoint, q: &ManifoldPoint) -> Result<f64> {
    require_same_geometry(p, q)?;
    Ok(match p.geometry {
        Geometry::Euclidean => (q.x - p.x).hypot(q.y - p.y),
        Geometry::Hyperbolic => hyperbolic::distance(p.x, p.y, q.x, q.y),
    })
}

/// Parallel transport along the unique geodesic from `from` to `to`.
pub fn transport_between(from: &ManifoldPoint, to: &ManifoldPoint) -> Result<Transport> {
    require_same_geometry(from, to)?;
    Ok(match from.geometry {
        Geometry::Euclidean => Transport::new(*from, *to, 1.0, 0.0),
        Geometry::Hyperbolic => {
            let (scale, angle) = hyperbolic::transport(from.x, from.y, to.x, to.y);
            Transport::new(*from, *to, scale, angle)
        }
    })
}

/// Parallel transport of `u` along the geodesic from its base to `dest`.
pub fn parallel_transport(u: &TangentVector, dest: &ManifoldPoint) -> Result<TangentVector> {
    if u.base.coincides(dest) {
        return Ok(u.rebased(*dest));
    }
    Ok(transport_between(&u.base, dest)?.apply(u))
}

/// `𝓡(x, y) z = K (⟨y, z⟩ x − ⟨x, z⟩ y)` without base checks.
#[inline]
pub(crate) fn riemann(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> TangentVector {
    let k = x.base.geometry.sectional_curvature();
    if k == 0.0 {
        return TangentVector::zero(x.base);
    }
    (*x * y.dot(z) - *y * x.dot(z)) * k
}

/// Riemann curvature tensor of a constant-curvature surface.
pub fn curvature_tensor(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> Result<TangentVector> {
    require_same_base(x, y)?;
    require_same_base(x, z)?;
    Ok(riemann(x, y, z))
}

/// Covariant derivative `(∇_j 𝓡)(x, y) z`; identically zero on both backends,
/// which are symmetric spaces.
pub fn curvature_derivative(
    j: &TangentVector,
    x: &TangentVector,
    y: &TangentVector,
    z: &TangentVector,
) -> Result<TangentVector> {
    require_same_base(j, x)?;
    require_same_base(j, y)?;
    require_same_base(j, z)?;
    Ok(TangentVector::zero(j.base))
}

/// Maps a univariate Gaussian `N(mean, sigma²)` with the Fisher metric onto
/// the half-plane: `(m, σ) ↦ (m / √2, σ)`.
pub fn gaussian_to_halfplane(mean: f64, sigma: f64) -> Result<ManifoldPoint> {
    if !(sigma > 0.0) {
        return Err(GeoError::Domain(format!("standard deviation must be positive, got {sigma}")));
    }
    ManifoldPoint::hyperbolic(mean / std::f64::consts::SQRT_2, sigma)
}

/// Cayley map `w = i (1 − z) / (1 + z)` from the open unit disk to the half-plane.
pub fn disk_to_halfplane(z: Complex64) -> Result<ManifoldPoint> {
    if !(z.norm() < 1.0) {
        return Err(GeoError::Domain(format!("|z| = {} is not inside the unit disk", z.norm())));
    }
    let w = Complex64::i() * (1.0 - z) / (1.0 + z);
    ManifoldPoint::hyperbolic(w.re, w.im)
}

/// Inverse Cayley map, half-plane to unit disk.
pub fn halfplane_to_disk(p: &ManifoldPoint) -> Complex64 {
    let w = Complex64::new(p.x, p.y);
    let i = Complex64::i();
    (i - w) / (i + w)
}
