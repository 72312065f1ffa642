//! Discrete curves on a uniform grid, covariant differences along them, the
//! square-root-velocity transform and the first-order Sobolev metric `G`.

use std::ops::{Add, Index, Sub};

use crate::error::{GeoError, Result};
use crate::manifold::{
    exp_point, log_point, parallel_transport, transport_between, Geometry, ManifoldPoint, TangentVector,
    Transport,
};

/// Default number of samples per curve.
pub const DEFAULT_SAMPLES: usize = 50;

/// Node speeds at or below this value violate the immersion condition.
pub const IMMERSION_TOL: f64 = 1e-8;

/// `n ≥ 3` samples of a curve at `t_j = j / (n − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    points: Vec<ManifoldPoint>,
}

impl DiscreteCurve {
    pub fn new(points: Vec<ManifoldPoint>) -> Result<Self> {
        if points.len() < 3 {
            return Err(GeoError::Degenerate(format!("a curve needs at least 3 samples, got {}", points.len())));
        }
        let g = points[0].geometry();
        if points.iter().any(|p| p.geometry() != g) {
            return Err(GeoError::GeometryMismatch);
        }
        Ok(Self { points })
    }

    pub fn from_coords(geometry: Geometry, coords: &[[f64; 2]]) -> Result<Self> {
        let points = coords.iter().map(|&[x, y]| ManifoldPoint::new(geometry, x, y)).collect::<Result<_>>()?;
        Self::new(points)
    }

    /// Samples `f(t_j)` on the uniform grid.
    pub fn from_fn(geometry: Geometry, n: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        if n < 3 {
            return Err(GeoError::Degenerate(format!("a curve needs at least 3 samples, got {n}")));
        }
        let points = (0..n)
            .map(|j| {
                let (x, y) = f(j as f64 / (n - 1) as f64);
                ManifoldPoint::new(geometry, x, y)
            })
            .collect::<Result<_>>()?;
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn geometry(&self) -> Geometry {
        self.points[0].geometry()
    }

    /// Grid spacing `1 / (n − 1)`.
    pub fn step(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| p.coords()).collect()
    }

    /// Exact geodesic transports from node `j` to node `j + 1`.
    pub fn segment_transports(&self) -> Result<Vec<Transport>> {
        self.points.windows(2).map(|w| transport_between(&w[0], &w[1])).collect()
    }

    /// Errors when any finite-difference node speed is at or below [`IMMERSION_TOL`].
    pub fn check_immersion(&self) -> Result<()> {
        finite_velocity(self).map(|_| ())
    }

    fn check_compatible(&self, other: &DiscreteCurve) -> Result<()> {
        if self.len() != other.len() {
            return Err(GeoError::LengthMismatch { expected: self.len(), found: other.len() });
        }
        if self.geometry() != other.geometry() {
            return Err(GeoError::GeometryMismatch);
        }
        Ok(())
    }
}

impl Index<usize> for DiscreteCurve {
    type Output = ManifoldPoint;
    fn index(&self, j: usize) -> &ManifoldPoint {
        &self.points[j]
    }
}

/// A vector field along a discrete curve, one tangent vector per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTangent {
    vectors: Vec<TangentVector>,
}

impl CurveTangent {
    /// Wraps `vectors`, checking that each one sits at the matching sample of `base`.
    pub fn new(base: &DiscreteCurve, vectors: Vec<TangentVector>) -> Result<Self> {
        if vectors.len() != base.len() {
            return Err(GeoError::LengthMismatch { expected: base.len(), found: vectors.len() });
        }
        if vectors.iter().zip(base.points()).any(|(v, p)| !v.base().coincides(p)) {
            return Err(GeoError::BaseMismatch);
        }
        Ok(Self { vectors })
    }

    pub(crate) fn from_vec(vectors: Vec<TangentVector>) -> Self {
        Self { vectors }
    }

    pub fn zero(base: &DiscreteCurve) -> Self {
        Self { vectors: base.points().iter().map(|&p| TangentVector::zero(p)).collect() }
    }

    pub fn from_components(base: &DiscreteCurve, comps: &[[f64; 2]]) -> Result<Self> {
        if comps.len() != base.len() {
            return Err(GeoError::LengthMismatch { expected: base.len(), found: comps.len() });
        }
        let vectors = base
            .points()
            .iter()
            .zip(comps)
            .map(|(&p, &[dx, dy])| TangentVector::new(p, dx, dy))
            .collect::<Result<_>>()?;
        Ok(Self { vectors })
    }

    /// Field `f(t_j, c(t_j))` given in chart components.
    pub fn from_fn(base: &DiscreteCurve, f: impl Fn(f64, &ManifoldPoint) -> [f64; 2]) -> Result<Self> {
        let h = base.step();
        let comps: Vec<[f64; 2]> = base.points().iter().enumerate().map(|(j, p)| f(j as f64 * h, p)).collect();
        Self::from_components(base, &comps)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[TangentVector] {
        &self.vectors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TangentVector> {
        self.vectors.iter()
    }

    pub fn components(&self) -> Vec<[f64; 2]> {
        self.vectors.iter().map(|v| v.components()).collect()
    }

    pub fn is_anchored_on(&self, c: &DiscreteCurve) -> bool {
        self.len() == c.len() && self.vectors.iter().zip(c.points()).all(|(v, p)| v.base().coincides(p))
    }

    pub fn scaled(&self, k: f64) -> CurveTangent {
        Self { vectors: self.vectors.iter().map(|&v| v * k).collect() }
    }

    /// Nodewise norms in the manifold metric.
    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| v.norm()).collect()
    }

    /// Largest nodewise norm.
    pub fn sup_norm(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn require_anchored(&self, c: &DiscreteCurve) -> Result<()> {
        if self.len() != c.len() {
            return Err(GeoError::LengthMismatch { expected: c.len(), found: self.len() });
        }
        if !self.is_anchored_on(c) {
            return Err(GeoError::BaseMismatch);
        }
        Ok(())
    }
}

impl Index<usize> for CurveTangent {
    type Output = TangentVector;
    fn index(&self, j: usize) -> &TangentVector {
        &self.vectors[j]
    }
}

impl Add for &CurveTangent {
    type Output = CurveTangent;
    fn add(self, rhs: &CurveTangent) -> CurveTangent {
        assert_eq!(self.len(), rhs.len());
        CurveTangent { vectors: self.vectors.iter().zip(&rhs.vectors).map(|(&a, &b)| a + b).collect() }
    }
}

impl Sub for &CurveTangent {
    type Output = CurveTangent;
    fn sub(self, rhs: &CurveTangent) -> CurveTangent {
        assert_eq!(self.len(), rhs.len());
        CurveTangent { vectors: self.vectors.iter().zip(&rhs.vectors).map(|(&a, &b)| a - b).collect() }
    }
}

/// Trapezoidal rule on the uniform grid of `values`.
pub(crate) fn trapezoid(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let h = 1.0 / (n - 1) as f64;
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Forward covariant difference of `w` using the given segment transports,
/// backward at the last node.
pub(crate) fn covariant_difference(transports: &[Transport], w: &[TangentVector]) -> Vec<TangentVector> {
    let n = w.len();
    let inv_h = (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    for j in 0..n - 1 {
        out.push((transports[j].inverse().apply(&w[j + 1]) - w[j]) * inv_h);
    }
    out.push((w[n - 1] - transports[n - 2].apply(&w[n - 2])) * inv_h);
    out
}

/// Discrete velocity `c_t`: forward logarithmic differences, backward at the end.
pub fn finite_velocity(c: &DiscreteCurve) -> Result<CurveTangent> {
    let n = c.len();
    let inv_h = (n - 1) as f64;
    let mut vectors = Vec::with_capacity(n);
    for j in 0..n - 1 {
        vectors.push(log_point(&c[j], &c[j + 1])? * inv_h);
    }
    vectors.push(-log_point(&c[n - 1], &c[n - 2])? * inv_h);
    for (j, v) in vectors.iter().enumerate() {
        let speed = v.norm();
        if !(speed > IMMERSION_TOL) {
            return Err(GeoError::Immersion { node: j, speed });
        }
    }
    Ok(CurveTangent { vectors })
}

/// Covariant derivative `∇_t w` along `c`.
pub fn covariant_derivative_along(c: &DiscreteCurve, w: &CurveTangent) -> Result<CurveTangent> {
    w.require_anchored(c)?;
    let transports = c.segment_transports()?;
    Ok(CurveTangent { vectors: covariant_difference(&transports, &w.vectors) })
}

/// Square-root-velocity transform `q = c_t / √‖c_t‖`.
pub fn srv_transform(c: &DiscreteCurve) -> Result<CurveTangent> {
    let ct = finite_velocity(c)?;
    Ok(CurveTangent { vectors: ct.vectors.iter().map(|&v| v * (1.0 / v.norm().sqrt())).collect() })
}

/// Rebuilds a curve from `origin` and an SRV field by stepping `c_{j+1} = exp(h ‖q_j‖ q_j)`.
/// Each `q_j` is carried to the current reconstructed node by parallel transport
/// from its own base point.
pub fn srv_reconstruct(origin: ManifoldPoint, q: &CurveTangent) -> Result<DiscreteCurve> {
    let n = q.len();
    if n < 3 {
        return Err(GeoError::Degenerate(format!("a curve needs at least 3 samples, got {n}")));
    }
    if let Some(j) = q.vectors.iter().position(|v| v.is_zero()) {
        return Err(GeoError::Degenerate(format!("SRV field vanishes at node {j}")));
    }
    if q[0].base().geometry() != origin.geometry() {
        return Err(GeoError::GeometryMismatch);
    }
    let h = 1.0 / (n - 1) as f64;
    let mut points = Vec::with_capacity(n);
    points.push(origin);
    for j in 0..n - 1 {
        let here = points[j];
        let qj = parallel_transport(&q[j], &here)?;
        points.push(exp_point(&(qj * (h * qj.norm())))?);
    }
    DiscreteCurve::new(points)
}

fn unit_tangents(ct: &CurveTangent) -> Vec<TangentVector> {
    ct.vectors.iter().map(|&v| v * (1.0 / v.norm())).collect()
}

/// Splits `w` into its component along the unit tangent of `c` and the normal remainder.
pub fn tangential_split(c: &DiscreteCurve, w: &CurveTangent) -> Result<(CurveTangent, CurveTangent)> {
    w.require_anchored(c)?;
    let v = unit_tangents(&finite_velocity(c)?);
    let tangential: Vec<_> = w.vectors.iter().zip(&v).map(|(wj, vj)| wj.along(vj)).collect();
    let normal: Vec<_> = w.vectors.iter().zip(&tangential).map(|(&wj, &tj)| wj - tj).collect();
    Ok((CurveTangent { vectors: tangential }, CurveTangent { vectors: normal }))
}

/// `G_c(h, k) = ⟨h(0), k(0)⟩ + ∫ ⟨∇_ℓ hᴺ, ∇_ℓ kᴺ⟩ + ¼ ⟨∇_ℓ hᵀ, ∇_ℓ kᵀ⟩ dℓ`.
pub fn metric_g(c: &DiscreteCurve, h: &CurveTangent, k: &CurveTangent) -> Result<f64> {
    h.require_anchored(c)?;
    k.require_anchored(c)?;
    let ct = finite_velocity(c)?;
    let transports = c.segment_transports()?;
    Ok(metric_g_with(&ct, &transports, h, k))
}

pub(crate) fn metric_g_with(ct: &CurveTangent, transports: &[Transport], h: &CurveTangent, k: &CurveTangent) -> f64 {
    let dh = covariant_difference(transports, &h.vectors);
    let dk = if std::ptr::eq(h, k) { dh.clone() } else { covariant_difference(transports, &k.vectors) };
    let integrand: Vec<f64> = ct
        .vectors
        .iter()
        .zip(dh.iter().zip(&dk))
        .map(|(c, (a, b))| {
            // ∇_ℓ = ∇_t / ‖c_t‖ and dℓ = ‖c_t‖ dt
            let speed_sq = c.norm_sq();
            let ta = a.dot(c);
            let tb = b.dot(c);
            let tangential = ta * tb / speed_sq;
            let full = a.dot(b);
            (full - tangential + 0.25 * tangential) / speed_sq.sqrt()
        })
        .collect();
    h[0].dot(&k[0]) + trapezoid(&integrand)
}

/// Nodewise logarithm `log_{c0(t_j)} c1(t_j)`.
pub fn pointwise_l2_log(c0: &DiscreteCurve, c1: &DiscreteCurve) -> Result<CurveTangent> {
    c0.check_compatible(c1)?;
    let vectors = c0.points().iter().zip(c1.points()).map(|(p, q)| log_point(p, q)).collect::<Result<_>>()?;
    Ok(CurveTangent { vectors })
}

/// Nodewise exponential `exp_{c(t_j)} w(t_j)`.
pub fn pointwise_l2_exp(c: &DiscreteCurve, w: &CurveTangent) -> Result<DiscreteCurve> {
    w.require_anchored(c)?;
    let points = w.vectors.iter().map(exp_point).collect::<Result<_>>()?;
    DiscreteCurve::new(points)
}

/// `L²` norm `(∫ ‖w(t)‖² dt)^{1/2}` by the trapezoidal rule.
pub fn l2_norm(w: &CurveTangent) -> f64 {
    let sq: Vec<f64> = w.vectors.iter().map(|v| v.norm_sq()).collect();
    trapezoid(&sq).sqrt()
}

/// Largest nodewise manifold distance between two sampled curves.
pub fn sup_distance(c0: &DiscreteCurve, c1: &DiscreteCurve) -> Result<f64> {
    c0.check_compatible(c1)?;
    c0.points()
        .iter()
        .zip(c1.points())
        .map(|(p, q)| crate::manifold::distance(p, q))
        .try_fold(0.0, |m, d| Ok(f64::max(m, d?)))
}
