//! Exponential map on the space of immersed curves, path energy, geodesic
//! distance and the holonomy term `Ω`.
//!
//! A geodesic `s ↦ c(s, ·)` is propagated by explicit Euler steps of size
//! `ε = 1/m`. At every slice the SRV field `q`, its first and second
//! covariant s-derivatives and the acceleration `∇ₛc_s` are recovered from
//! the curve and its speed; the curve then moves nodewise along manifold
//! geodesics and the speed is carried along by parallel transport.

use crate::curve::{
    covariant_difference, finite_velocity, metric_g, trapezoid, CurveTangent, DiscreteCurve,
};
use crate::error::{GeoError, Result};
use crate::manifold::{exp_point, riemann, transport_between, TangentVector, Transport};

/// Default number of s-steps for reported paths.
pub const DEFAULT_STEPS: usize = 50;

/// `r_j = ∫_{t_j}^1 P^{τ,t_j} X(τ) dτ` by the trapezoidal rule, transports composed segmentwise.
pub(crate) fn backward_integral(transports: &[Transport], x: &[TangentVector]) -> Vec<TangentVector> {
    let n = x.len();
    let half = 0.5 / (n - 1) as f64;
    let mut out = vec![TangentVector::zero(x[n - 1].base()); n];
    for j in (0..n - 1).rev() {
        out[j] = transports[j].inverse().apply(&(out[j + 1] + x[j + 1] * half)) + x[j] * half;
    }
    out
}

/// Solves `∇_t z = g`, `z(0) = z0` with left-rectangle steps that match the
/// forward covariant difference exactly.
pub(crate) fn forward_cumulative(transports: &[Transport], z0: TangentVector, g: &[TangentVector]) -> Vec<TangentVector> {
    let n = g.len();
    let h = 1.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    out.push(z0);
    for j in 0..n - 1 {
        let next = transports[j].apply(&(out[j] + g[j] * h));
        out.push(next);
    }
    out
}

/// Cumulative transports from node 0 to every node of a curve.
pub(crate) fn transports_from_start(at_start: Transport, segments: &[Transport]) -> Vec<Transport> {
    let mut out = Vec::with_capacity(segments.len() + 1);
    out.push(at_start);
    for t in segments {
        let next = out.last().unwrap().then(t);
        out.push(next);
    }
    out
}

fn propagation_error(step: usize, e: GeoError) -> GeoError {
    match e {
        GeoError::Immersion { node, speed } => GeoError::Propagation {
            step,
            node,
            reason: format!("node speed {speed:e} fell below the immersion threshold"),
        },
        other => GeoError::Propagation { step, node: 0, reason: other.to_string() },
    }
}

/// Fields of one slice `c(sᵢ, ·)` of a geodesic.
#[derive(Debug, Clone)]
pub struct SliceFrame {
    /// Geodesic transports from node `j` to node `j + 1`.
    pub transports: Vec<Transport>,
    /// `c_t`
    pub velocity: Vec<TangentVector>,
    /// `‖c_t‖`
    pub speed: Vec<f64>,
    /// `c_t / ‖c_t‖`
    pub unit: Vec<TangentVector>,
    /// `c_s`
    pub speed_field: Vec<TangentVector>,
    /// `∇_t c_s = ∇ₛ c_t`
    pub dt_cs: Vec<TangentVector>,
    /// `q = c_t / √‖c_t‖`
    pub srv: Vec<TangentVector>,
    pub ds_srv: Vec<TangentVector>,
    /// `r(t) = ∫_t^1 𝓡(q, ∇ₛq) c_s dτ`
    pub r: Vec<TangentVector>,
    pub dss_srv: Vec<TangentVector>,
    pub dss_ct: Vec<TangentVector>,
    /// `∇ₛ c_s`
    pub ds_cs: Vec<TangentVector>,
}

impl SliceFrame {
    pub fn compute(curve: &DiscreteCurve, cs: &CurveTangent) -> Result<Self> {
        let n = curve.len();
        let transports = curve.segment_transports()?;
        let velocity = finite_velocity(curve)?.vectors().to_vec();
        let speed: Vec<f64> = velocity.iter().map(|v| v.norm()).collect();
        let unit: Vec<_> = velocity.iter().zip(&speed).map(|(&v, &a)| v * (1.0 / a)).collect();
        let cs = cs.vectors().to_vec();
        let y = covariant_difference(&transports, &cs);

        let mut srv = Vec::with_capacity(n);
        let mut ds_srv = Vec::with_capacity(n);
        for j in 0..n {
            let a = speed[j];
            let ct = velocity[j];
            srv.push(ct * a.powf(-0.5));
            ds_srv.push(y[j] * a.powf(-0.5) - ct * (0.5 * y[j].dot(&ct) * a.powf(-2.5)));
        }

        let x: Vec<_> = (0..n).map(|j| riemann(&srv[j], &ds_srv[j], &cs[j])).collect();
        let r = backward_integral(&transports, &x);

        let mut dss_srv = Vec::with_capacity(n);
        let mut dss_ct = Vec::with_capacity(n);
        for j in 0..n {
            let qn = speed[j].sqrt();
            let q2 = -(r[j] + r[j].along(&unit[j])) * qn;
            // c_t = ‖q‖ q differentiated twice in s
            let beta = ds_srv[j].dot(&srv[j]) / qn;
            let second = (q2.dot(&srv[j]) + ds_srv[j].norm_sq() - beta * beta) / qn;
            dss_ct.push(q2 * qn + ds_srv[j] * (2.0 * beta) + srv[j] * second);
            dss_srv.push(q2);
        }

        let rhs: Vec<_> = (0..n).map(|j| dss_ct[j] + riemann(&velocity[j], &cs[j], &cs[j])).collect();
        let ds_cs = forward_cumulative(&transports, -r[0], &rhs);

        Ok(Self { transports, velocity, speed, unit, speed_field: cs, dt_cs: y, srv, ds_srv, r, dss_srv, dss_ct, ds_cs })
    }

    /// `G(c_s, c_s) = ‖c_s(0)‖² + ∫ ‖∇ₛq‖² dt`.
    pub fn energy(&self) -> f64 {
        let sq: Vec<f64> = self.ds_srv.iter().map(|v| v.norm_sq()).collect();
        self.speed_field[0].norm_sq() + trapezoid(&sq)
    }
}

/// Output of the curve-space exponential map: `m + 1` curves `c(sᵢ, ·)` at
/// `sᵢ = i / m` with their speeds.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub curves: Vec<DiscreteCurve>,
    pub speeds: Vec<CurveTangent>,
    pub step: f64,
    /// `G(c_s, c_s)` at every slice.
    pub energies: Vec<f64>,
    frames: Vec<SliceFrame>,
    /// Nodewise transports from `c(sᵢ, t_j)` to `c(sᵢ₊₁, t_j)`.
    advances: Vec<Vec<Transport>>,
}

impl GeodesicPath {
    pub fn steps(&self) -> usize {
        self.curves.len() - 1
    }

    pub fn samples(&self) -> usize {
        self.curves[0].len()
    }

    pub fn start(&self) -> &DiscreteCurve {
        &self.curves[0]
    }

    pub fn end(&self) -> &DiscreteCurve {
        self.curves.last().unwrap()
    }

    pub fn initial_speed(&self) -> &CurveTangent {
        &self.speeds[0]
    }

    pub fn frames(&self) -> &[SliceFrame] {
        &self.frames
    }

    pub fn advances(&self) -> &[Vec<Transport>] {
        &self.advances
    }

    /// Largest relative deviation of the energy profile from its initial value.
    pub fn energy_variation(&self) -> f64 {
        let e0 = self.energies[0];
        if e0 == 0.0 {
            return self.energies.iter().fold(0.0, |m, e| f64::max(m, e.abs()));
        }
        self.energies.iter().map(|e| (e - e0).abs() / e0).fold(0.0, f64::max)
    }
}

/// Curve-space exponential `exp_{c0}(u)` integrated with `m` explicit Euler steps.
pub fn curve_exp(c0: &DiscreteCurve, u: &CurveTangent, m: usize) -> Result<GeodesicPath> {
    if m == 0 {
        return Err(GeoError::Domain("the number of s-steps must be positive".into()));
    }
    if !u.is_anchored_on(c0) {
        return Err(if u.len() != c0.len() {
            GeoError::LengthMismatch { expected: c0.len(), found: u.len() }
        } else {
            GeoError::BaseMismatch
        });
    }
    let eps = 1.0 / m as f64;
    let mut curves = vec![c0.clone()];
    let mut speeds = vec![u.clone()];
    let mut frames = Vec::with_capacity(m + 1);
    let mut advances = Vec::with_capacity(m);
    for i in 0..=m {
        let frame = SliceFrame::compute(&curves[i], &speeds[i]).map_err(|e| propagation_error(i, e))?;
        if i < m {
            let curve = &curves[i];
            let mut points = Vec::with_capacity(curve.len());
            let mut moves = Vec::with_capacity(curve.len());
            let mut next_speed = Vec::with_capacity(curve.len());
            for j in 0..curve.len() {
                let fail = |e: GeoError| GeoError::Propagation { step: i, node: j, reason: e.to_string() };
                let p = exp_point(&(frame.speed_field[j] * eps)).map_err(fail)?;
                let t = transport_between(&curve[j], &p).map_err(fail)?;
                next_speed.push(t.apply(&(frame.speed_field[j] + frame.ds_cs[j] * eps)));
                points.push(p);
                moves.push(t);
            }
            curves.push(DiscreteCurve::new(points)?);
            speeds.push(CurveTangent::from_vec(next_speed));
            advances.push(moves);
        }
        frames.push(frame);
    }
    let energies = frames.iter().map(SliceFrame::energy).collect();
    Ok(GeodesicPath { curves, speeds, step: eps, energies, frames, advances })
}

/// `E = ½ ∫₀¹ G(c_s, c_s) ds` by the trapezoidal rule in s.
pub fn path_energy(p: &GeodesicPath) -> f64 {
    0.5 * trapezoid(&p.energies)
}

/// `∫₀¹ √G(c_s, c_s) ds` by the trapezoidal rule in s.
pub fn path_length(p: &GeodesicPath) -> f64 {
    let speeds: Vec<f64> = p.energies.iter().map(|e| e.max(0.0).sqrt()).collect();
    trapezoid(&speeds)
}

/// Geodesic distance with default shooting options.
pub fn geodesic_distance(c0: &DiscreteCurve, c1: &DiscreteCurve) -> Result<f64> {
    geodesic_distance_with(c0, c1, &crate::shooting::ShootingOptions::default())
}

/// `√G(u, u)` for the initial speed `u` returned by shooting from `c0` to `c1`.
pub fn geodesic_distance_with(
    c0: &DiscreteCurve,
    c1: &DiscreteCurve,
    opts: &crate::shooting::ShootingOptions,
) -> Result<f64> {
    let shot = crate::shooting::shoot(c0, c1, opts)?;
    Ok(metric_g(c0, &shot.speed, &shot.speed)?.max(0.0).sqrt())
}

/// Transports from `c(sᵢ, 0)` back to `c(0, 0)` along the start-point track.
fn start_track_to_origin(p: &GeodesicPath) -> Vec<Transport> {
    let mut out = Vec::with_capacity(p.curves.len());
    out.push(Transport::identity(p.curves[0][0]));
    for i in 0..p.advances.len() {
        let back = p.advances[i][0].inverse().then(&out[i]);
        out.push(back);
    }
    out
}

/// `q̃(sᵢ, t_j)`: the SRV field carried to `c(0, 0)`, first along `t`, then along
/// the start-point track.
pub fn raise_srv(p: &GeodesicPath) -> Vec<Vec<TangentVector>> {
    let track = start_track_to_origin(p);
    p.frames
        .iter()
        .zip(&track)
        .map(|(f, back_s)| {
            let to_start = transports_from_start(Transport::identity(f.velocity[0].base()), &f.transports);
            f.srv.iter().zip(&to_start).map(|(q, t)| back_s.apply(&t.inverse().apply(q))).collect()
        })
        .collect()
}

/// Holonomy term `Ω(sᵢ, t_j)`, returned in the tangent space at `c(0, 0)`.
pub fn holonomy_term(p: &GeodesicPath, i: usize, j: usize) -> Result<TangentVector> {
    if i >= p.frames.len() || j >= p.samples() {
        return Err(GeoError::Domain(format!("index ({i}, {j}) outside the {}×{} path grid", p.frames.len(), p.samples())));
    }
    let track = start_track_to_origin(p);
    Ok(track[i].apply(&holonomy_at_slice(&p.frames[i], j)))
}

/// `∫₀^{t_j} P^{τ,0} 𝓡(c_τ, c_s) P^{t_j,τ} q dτ` at `c(sᵢ, 0)`.
fn holonomy_at_slice(f: &SliceFrame, j: usize) -> TangentVector {
    let base = f.velocity[0].base();
    let mut acc = TangentVector::zero(base);
    if j == 0 {
        return acc;
    }
    let h = 1.0 / (f.srv.len() - 1) as f64;
    let from_start = transports_from_start(Transport::identity(base), &f.transports);
    let q0 = from_start[j].inverse().apply(&f.srv[j]);
    for k in 0..=j {
        let w = if k == 0 || k == j { 0.5 * h } else { h };
        let v = from_start[k].apply(&q0);
        let term = riemann(&f.velocity[k], &f.speed_field[k], &v);
        acc += from_start[k].inverse().apply(&term) * w;
    }
    acc
}

/// All holonomy terms `Ω(sᵢ, t_j)` at `c(0, 0)`.
pub fn holonomy_grid(p: &GeodesicPath) -> Vec<Vec<TangentVector>> {
    let track = start_track_to_origin(p);
    p.frames
        .iter()
        .zip(&track)
        .map(|(f, back)| (0..f.srv.len()).map(|j| back.apply(&holonomy_at_slice(f, j))).collect())
        .collect()
}

/// Largest nodewise gap `|‖∇ₛq‖ − ‖∂ₛq̃ + Ω‖|` over interior slices, with `∂ₛq̃`
/// from central differences in s.
pub fn holonomy_identity_defect(p: &GeodesicPath) -> f64 {
    let raised = raise_srv(p);
    let omega = holonomy_grid(p);
    let m = p.steps();
    let mut worst: f64 = 0.0;
    for i in 1..m {
        for j in 0..p.samples() {
            let dq = (raised[i + 1][j] - raised[i - 1][j]) * (0.5 / p.step);
            let lhs = p.frames[i].ds_srv[j].norm();
            let rhs = (dq + omega[i][j]).norm();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// Splits `h` into the parallel field with value `h(0)` and the remainder,
/// which vanishes at `t = 0`.
pub fn horizontal_vertical_split(c: &DiscreteCurve, h: &CurveTangent) -> Result<(CurveTangent, CurveTangent)> {
    if !h.is_anchored_on(c) {
        return Err(GeoError::BaseMismatch);
    }
    let cum = transports_from_start(Transport::identity(c[0]), &c.segment_transports()?);
    let horizontal: Vec<_> = cum.iter().map(|t| t.apply(&h[0])).collect();
    let horizontal = CurveTangent::from_vec(horizontal);
    let vertical = h - &horizontal;
    Ok((horizontal, vertical))
}
