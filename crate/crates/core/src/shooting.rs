//! Jacobi fields along curve-space geodesics and geodesic shooting.
//!
//! A Jacobi field `J = ∂ₐc` along a geodesic is propagated in s by the same
//! explicit scheme as the geodesic itself: every quantity of the slice
//! computation is differentiated in the variation direction `a`, with the
//! curvature commutators `[∇ₐ, ∇ₛ] = 𝓡(J, c_s)` and `[∇ₐ, ∇_t] = 𝓡(J, c_t)`.
//! The covariant derivative of the curvature tensor vanishes on both
//! backends, so no `∇_J 𝓡` terms appear.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::curve::{covariant_difference, l2_norm, pointwise_l2_log, CurveTangent, DiscreteCurve};
use crate::error::{GeoError, Result};
use crate::geodesic::{backward_integral, curve_exp, forward_cumulative, GeodesicPath, SliceFrame};
use crate::manifold::{riemann, TangentVector};

/// Default number of s-steps inside the shooting loop.
pub const DEFAULT_SHOOTING_STEPS: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_ITER: usize = 10;

/// Condition number above which the linear solve switches to Tikhonov regularisation.
pub const CONDITION_LIMIT: f64 = 1e12;
pub const TIKHONOV_LAMBDA: f64 = 1e-10;

/// Smallest damping factor tried before giving up on an iteration.
pub const MIN_DAMPING: f64 = 1.0 / 16.0;

/// A Jacobi field and its covariant s-derivative on one slice of the carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiState {
    pub field: CurveTangent,
    pub derivative: CurveTangent,
}

/// `∇ₛ∇ₛJ` on one slice.
fn jacobi_acceleration(f: &SliceFrame, jf: &[TangentVector], dsj: &[TangentVector]) -> Vec<TangentVector> {
    let n = jf.len();
    let tr = &f.transports;
    let y_a = covariant_difference(tr, jf); // ∇ₐc_t = ∇_t J
    let dt_dsj = covariant_difference(tr, dsj);

    struct Node {
        z: TangentVector,
        zs: TangentVector,
        dsv: TangentVector,
        dssv: TangentVector,
        alpha: f64,
        dalpha: f64,
    }

    let mut nodes = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for j in 0..n {
        let (a, v, ct, cs) = (f.speed[j], f.unit[j], f.velocity[j], f.speed_field[j]);
        let (y, q, dsq, ssct, r) = (f.dt_cs[j], f.srv[j], f.ds_srv[j], f.dss_ct[j], f.r[j]);
        let ya = y_a[j];
        let ya_s = dt_dsj[j] + riemann(&cs, &ct, &jf[j]); // ∇ₛ∇_t J

        let alpha = y.dot(&v);
        let dsv = (y - v * alpha) * (1.0 / a);
        let dalpha = ssct.dot(&v) + y.dot(&dsv);
        let dssv = (ssct - v * dalpha - dsv * (2.0 * alpha)) * (1.0 / a);
        let phi = a.powf(-0.5);
        let dphi = -0.5 * a.powf(-1.5) * alpha;

        let ya_v = ya.dot(&v);
        let z = (ya - v * (0.5 * ya_v)) * phi; // ∇ₐq
        let zs = (ya - v * (0.5 * ya_v)) * dphi
            + (ya_s - v * (0.5 * ya_s.dot(&v)) - v * (0.5 * ya.dot(&dsv)) - dsv * (0.5 * ya_v)) * phi; // ∇ₛ∇ₐq
        let da_dsq = zs + riemann(&jf[j], &cs, &q);
        let da_x = riemann(&z, &dsq, &cs) + riemann(&q, &da_dsq, &cs) + riemann(&q, &dsq, &dsj[j]);
        g.push(da_x - riemann(&ct, &jf[j], &r));
        nodes.push(Node { z, zs, dsv, dssv, alpha, dalpha });
    }
    let da_r = backward_integral(tr, &g);

    let mut integrand = Vec::with_capacity(n);
    for j in 0..n {
        let nd = &nodes[j];
        let (a, v, ct, cs) = (f.speed[j], f.unit[j], f.velocity[j], f.speed_field[j]);
        let (y, q, dsq, r, dscs) = (f.dt_cs[j], f.srv[j], f.ds_srv[j], f.r[j], f.ds_cs[j]);
        let ya = y_a[j];
        let sa = a.sqrt();
        let phi = 1.0 / sa;

        let r_v = r.dot(&v);
        let ya_v = ya.dot(&v);
        let da_ssq = -(da_r[j] + da_r[j].along(&v)) * sa
            - (v * r.dot(&ya) + ya * r_v + (r - v * (3.0 * r_v)) * (0.5 * ya_v)) * phi;
        let zss = da_ssq
            + riemann(&cs, &jf[j], &dsq) * 2.0
            + riemann(&dscs, &jf[j], &q)
            + riemann(&cs, &dsj[j], &q); // ∇ₛ∇ₛ∇ₐq

        // ∇ₐc_t = U + ⟨U, v⟩ v with U = √a ∇ₐq
        let d1 = 0.5 * nd.alpha / sa;
        let d2 = 0.5 * nd.dalpha / sa - 0.25 * nd.alpha * nd.alpha / (a * sa);
        let u = nd.z * sa;
        let us = nd.z * d1 + nd.zs * sa;
        let uss = nd.z * d2 + nd.zs * (2.0 * d1) + zss * sa;
        let w0 = u.dot(&v);
        let w1 = us.dot(&v) + u.dot(&nd.dsv);
        let w2 = uss.dot(&v) + 2.0 * us.dot(&nd.dsv) + u.dot(&nd.dssv);
        let ya_ss = uss + v * w2 + nd.dsv * (2.0 * w1) + nd.dssv * w0;

        integrand.push(
            ya_ss + riemann(&y, &cs, &jf[j]) + riemann(&ct, &dscs, &jf[j]) + riemann(&ct, &cs, &dsj[j]) * 2.0,
        );
    }
    let start = -da_r[0] + riemann(&f.speed_field[0], &jf[0], &f.speed_field[0]);
    forward_cumulative(tr, start, &integrand)
}

/// Propagates `J(0) = j0`, `∇ₛJ(0) = w0` along the carrier and returns the
/// state on the last slice.
pub fn jacobi_propagate_state(p: &GeodesicPath, j0: &CurveTangent, w0: &CurveTangent) -> Result<JacobiState> {
    let c0 = p.start();
    if !j0.is_anchored_on(c0) || !w0.is_anchored_on(c0) {
        return Err(GeoError::BaseMismatch);
    }
    let eps = p.step;
    let mut jf = j0.vectors().to_vec();
    let mut dsj = w0.vectors().to_vec();
    for (i, moves) in p.advances().iter().enumerate() {
        let acc = jacobi_acceleration(&p.frames()[i], &jf, &dsj);
        for k in 0..jf.len() {
            let nj = moves[k].apply(&(jf[k] + dsj[k] * eps));
            let nd = moves[k].apply(&(dsj[k] + acc[k] * eps));
            if !(nj.dx.is_finite() && nj.dy.is_finite() && nd.dx.is_finite() && nd.dy.is_finite()) {
                return Err(GeoError::Propagation { step: i, node: k, reason: "Jacobi field is not finite".into() });
            }
            jf[k] = nj;
            dsj[k] = nd;
        }
    }
    Ok(JacobiState { field: CurveTangent::from_vec(jf), derivative: CurveTangent::from_vec(dsj) })
}

/// `J(1)` for the Jacobi field with `J(0) = j0`, `∇ₛJ(0) = w0`.
pub fn jacobi_propagate(p: &GeodesicPath, j0: &CurveTangent, w0: &CurveTangent) -> Result<CurveTangent> {
    Ok(jacobi_propagate_state(p, j0, w0)?.field)
}

fn flatten(w: &CurveTangent) -> DVector<f64> {
    DVector::from_iterator(2 * w.len(), w.iter().flat_map(|v| [v.dx, v.dy]))
}

fn unflatten(c: &DiscreteCurve, x: &DVector<f64>) -> CurveTangent {
    CurveTangent::from_vec(c.points().iter().enumerate().map(|(j, &p)| TangentVector::raw(p, x[2 * j], x[2 * j + 1])).collect())
}

/// Matrix of `∇ₛJ(0) ↦ J(1)` with `J(0) = 0`, in chart components; column
/// `2j + α` is the image of the unit component `α` at node `j`.
pub fn assemble_phi(p: &GeodesicPath) -> Result<DMatrix<f64>> {
    let c0 = p.start();
    let n = c0.len();
    let zero = CurveTangent::zero(c0);
    let columns: Vec<DVector<f64>> = (0..2 * n)
        .into_par_iter()
        .map(|k| {
            let mut e = DVector::zeros(2 * n);
            e[k] = 1.0;
            jacobi_propagate(p, &zero, &unflatten(c0, &e)).map(|j1| flatten(&j1))
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_columns(&columns))
}

/// Least-squares solution of `φ x = b`, Tikhonov-regularised when `φ` is badly
/// conditioned. Returns the solution and the condition number.
pub fn solve_regularized(phi: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let svd = phi.clone().svd(true, true);
    let s = &svd.singular_values;
    let smax = s.max();
    let smin = s.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let lambda = if cond > CONDITION_LIMIT { TIKHONOV_LAMBDA } else { 0.0 };
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let utb = u.transpose() * b;
    let mut scaled = DVector::zeros(s.len());
    for i in 0..s.len() {
        let si = s[i];
        let den = si * si + lambda;
        scaled[i] = if den > 0.0 { si * utb[i] / den } else { 0.0 };
    }
    (vt.transpose() * scaled, cond)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// s-steps of every trial geodesic.
    pub steps: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Reuse the first assembled Jacobi matrix for all iterations.
    pub freeze_jacobian: bool,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { steps: DEFAULT_SHOOTING_STEPS, tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, freeze_jacobian: false }
    }
}

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub path: GeodesicPath,
    /// Converged initial speed `u`.
    pub speed: CurveTangent,
    /// Number of accepted corrections.
    pub iterations: usize,
    /// `L²` endpoint gap before the first and after every accepted correction.
    pub residuals: Vec<f64>,
    pub condition_numbers: Vec<f64>,
    pub damping: Vec<f64>,
}

impl ShootingResult {
    pub fn residual(&self) -> f64 {
        *self.residuals.last().unwrap()
    }
}

fn endpoint_gap(path: &GeodesicPath, target: &DiscreteCurve) -> Result<(CurveTangent, f64)> {
    let gap = pointwise_l2_log(path.end(), target)?;
    let res = l2_norm(&gap);
    Ok((gap, res))
}

/// Geodesic between `c0` and `c1` by Newton-type correction of the initial
/// speed through the inverse Jacobi map, starting from the nodewise logarithm.
pub fn shoot(c0: &DiscreteCurve, c1: &DiscreteCurve, opts: &ShootingOptions) -> Result<ShootingResult> {
    if !(opts.tol > 0.0) {
        return Err(GeoError::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let mut u = pointwise_l2_log(c0, c1)?;
    let mut path = curve_exp(c0, &u, opts.steps)?;
    let (mut gap, mut res) = endpoint_gap(&path, c1)?;
    let mut residuals = vec![res];
    let mut condition_numbers = Vec::new();
    let mut damping = Vec::new();
    let mut phi: Option<DMatrix<f64>> = None;
    let mut iterations = 0;
    while res >= opts.tol {
        if iterations == opts.max_iter {
            return Err(GeoError::NonConvergence { iterations, residual: res });
        }
        if phi.is_none() || !opts.freeze_jacobian {
            phi = Some(assemble_phi(&path)?);
        }
        let (x, cond) = solve_regularized(phi.as_ref().unwrap(), &flatten(&gap));
        condition_numbers.push(cond);
        let correction = unflatten(c0, &x);
        let mut alpha = 1.0;
        loop {
            let trial_u = &u + &correction.scaled(alpha);
            let trial = curve_exp(c0, &trial_u, opts.steps).and_then(|p| {
                let (g, r) = endpoint_gap(&p, c1)?;
                Ok((p, g, r))
            });
            if let Ok((p, g, r)) = trial {
                if r <= res {
                    u = trial_u;
                    path = p;
                    gap = g;
                    res = r;
                    break;
                }
            }
            if alpha <= MIN_DAMPING {
                return Err(GeoError::NonConvergence { iterations: iterations + 1, residual: res });
            }
            alpha *= 0.5;
        }
        damping.push(alpha);
        residuals.push(res);
        iterations += 1;
        log::debug!("shooting iteration {iterations}: residual {res:e}, damping {alpha}");
    }
    Ok(ShootingResult { path, speed: u, iterations, residuals, condition_numbers, damping })
}
