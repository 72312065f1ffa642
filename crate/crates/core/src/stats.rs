//! Fréchet mean and variance of a set of curves.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::curve::{metric_g, CurveTangent, DiscreteCurve};
use crate::error::{GeoError, Result};
use crate::geodesic::curve_exp;
use crate::shooting::{shoot, ShootingOptions, DEFAULT_MAX_ITER, DEFAULT_SHOOTING_STEPS, DEFAULT_TOL};

/// `p ≥ 1` curves sharing their sample count and backend.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEnsemble {
    members: Vec<DiscreteCurve>,
}

impl CurveEnsemble {
    pub fn new(members: Vec<DiscreteCurve>) -> Result<Self> {
        let first = members.first().ok_or_else(|| GeoError::Degenerate("an ensemble needs at least one curve".into()))?;
        for c in &members[1..] {
            if c.len() != first.len() {
                return Err(GeoError::LengthMismatch { expected: first.len(), found: c.len() });
            }
            if c.geometry() != first.geometry() {
                return Err(GeoError::GeometryMismatch);
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[DiscreteCurve] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member indices sorted by their coordinates, a total order independent
    /// of the input order.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by(|&a, &b| compare_curves(&self.members[a], &self.members[b]).then(a.cmp(&b)));
        idx
    }
}

fn compare_curves(a: &DiscreteCurve, b: &DiscreteCurve) -> Ordering {
    for (p, q) in a.points().iter().zip(b.points()) {
        let o = p.x().total_cmp(&q.x()).then(p.y().total_cmp(&q.y()));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanOptions {
    /// Stopping threshold on the `G`-norm of the mean tangent.
    pub tol: f64,
    pub max_iter: usize,
    /// s-steps of the geodesics used for shooting and for the update.
    pub steps: usize,
    /// Iteration cap of every inner shooting problem.
    pub shooting_max_iter: usize,
}

impl Default for MeanOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, steps: DEFAULT_SHOOTING_STEPS, shooting_max_iter: DEFAULT_MAX_ITER }
    }
}

impl MeanOptions {
    fn shooting(&self) -> ShootingOptions {
        ShootingOptions { steps: self.steps, tol: self.tol / 10.0, max_iter: self.shooting_max_iter, freeze_jacobian: false }
    }
}

#[derive(Debug, Clone)]
pub struct MeanResult {
    pub mean: DiscreteCurve,
    /// Number of mean updates performed.
    pub iterations: usize,
    /// `G`-norm of the mean tangent at every visited mean.
    pub gradient_norms: Vec<f64>,
    /// `Σⱼ d(μ̄, μ⁽ʲ⁾)²` at every visited mean.
    pub functional: Vec<f64>,
}

/// Initial speeds of the geodesics from `mu` to every member, in member order.
fn shoot_all(mu: &DiscreteCurve, members: &[DiscreteCurve], opts: &ShootingOptions) -> Result<Vec<CurveTangent>> {
    members
        .par_iter()
        .enumerate()
        .map(|(k, c)| shoot(mu, c, opts).map(|r| r.speed).map_err(|e| GeoError::Member { member: k, source: Box::new(e) }))
        .collect()
}

/// Intrinsic mean by the fixed-point iteration `μ̄ ← exp_{μ̄}((1/p) Σ log_{μ̄} μ⁽ʲ⁾)`.
///
/// The iteration starts at the first member in [`CurveEnsemble::canonical_order`]
/// and accumulates tangents in that order, so the result does not depend on
/// the order in which members are supplied.
pub fn frechet_mean(e: &CurveEnsemble, opts: &MeanOptions) -> Result<MeanResult> {
    if !(opts.tol > 0.0) {
        return Err(GeoError::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let order = e.canonical_order();
    let members: Vec<DiscreteCurve> = order.iter().map(|&k| e.members[k].clone()).collect();
    let shooting = opts.shooting();
    let p = members.len() as f64;
    let mut mu = members[0].clone();
    let mut gradient_norms = Vec::new();
    let mut functional = Vec::new();
    let mut iterations = 0;
    loop {
        let speeds = shoot_all(&mu, &members, &shooting).map_err(|err| match err {
            GeoError::Member { member, source } => GeoError::Member { member: order[member], source },
            other => other,
        })?;
        let mut sum = CurveTangent::zero(&mu);
        let mut f = 0.0;
        for u in &speeds {
            sum = &sum + u;
            f += metric_g(&mu, u, u)?;
        }
        let grad = sum.scaled(1.0 / p);
        let gn = metric_g(&mu, &grad, &grad)?.max(0.0).sqrt();
        gradient_norms.push(gn);
        functional.push(f);
        log::debug!("mean iteration {iterations}: gradient {gn:e}, functional {f:e}");
        if gn < opts.tol {
            return Ok(MeanResult { mean: mu, iterations, gradient_norms, functional });
        }
        if iterations == opts.max_iter {
            return Err(GeoError::NonConvergence { iterations, residual: gn });
        }
        mu = curve_exp(&mu, &grad, opts.steps)?.end().clone();
        iterations += 1;
    }
}

/// `(1/p) Σⱼ d(μ̄, μ⁽ʲ⁾)²`.
pub fn frechet_variance(e: &CurveEnsemble, mean: &DiscreteCurve, opts: &MeanOptions) -> Result<f64> {
    let speeds = shoot_all(mean, &e.members, &opts.shooting())?;
    let mut total = 0.0;
    for u in &speeds {
        total += metric_g(mean, u, u)?;
    }
    Ok(total / e.len() as f64)
}
