//! Closed-form geodesic operations on the upper half-plane.
//!
//! Non-vertical geodesics are Euclidean semicircles centred on the real axis.
//! Each one is the image of the positive imaginary axis under a Möbius map
//! `z = (a w + b) / (c w + d)` with `ad − bc = 1`, and unit-speed motion along
//! it becomes exponential motion `ȳ(t) = ȳ₀ eᵗ` of the pre-image height.
//! The routines below evaluate those maps through the gaps between a point and
//! the two ends of its semicircle, which avoids cancellation for short arcs
//! and for points close to the boundary.

/// Horizontal separation below which two points are treated as vertically aligned.
pub const VERTICAL_TOL: f64 = 1e-10;

/// Distances from `(x, y)` to the left and right ends of the semicircle whose
/// centre lies `offset` to the right of `x` (radius `radius`).
#[inline]
fn end_gaps(offset: f64, radius: f64, y: f64) -> (f64, f64) {
    if offset >= 0.0 {
        let right = radius + offset;
        (y * y / right, right)
    } else {
        let left = radius - offset;
        (left, y * y / left)
    }
}

/// Signed offset from `x0` to the centre of the semicircle through both points.
#[inline]
fn centre_offset(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let dx = x1 - x0;
    0.5 * dx + 0.5 * (y1 - y0) * (y1 + y0) / dx
}

pub(crate) fn distance(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let chord = (x1 - x0).hypot(y1 - y0);
    2.0 * (chord / (2.0 * (y0 * y1).sqrt())).asinh()
}

pub(crate) fn log(x0: f64, y0: f64, x1: f64, y1: f64) -> [f64; 2] {
    let dx = x1 - x0;
    if dx.abs() < VERTICAL_TOL {
        return [0.0, y0 * (y1 / y0).ln()];
    }
    let offset = centre_offset(x0, y0, x1, y1);
    let radius = offset.hypot(y0);
    let k = dx.signum() * distance(x0, y0, x1, y1);
    let scale = k * y0 / radius;
    [scale * y0, scale * offset]
}

pub(crate) fn exp(x0: f64, y0: f64, dx: f64, dy: f64) -> (f64, f64) {
    let speed = dx.hypot(dy);
    if dx.abs() < VERTICAL_TOL * speed {
        return (x0, y0 * (dy / y0).exp());
    }
    let offset = y0 * dy / dx;
    let radius = offset.hypot(y0);
    let (left, right) = end_gaps(offset, radius, y0);
    let rho0 = (left / right).sqrt();
    let kappa = dx.signum() * speed / y0;
    let rho1 = rho0 * kappa.exp();
    if !(rho1.is_finite() && rho1 > 0.0) || !(rho1 * rho1).is_finite() {
        // the endpoint sits on the boundary to machine precision
        return (x0, 0.0);
    }
    let x1 = x0 + left * (2.0 * kappa).exp_m1() / (1.0 + rho1 * rho1);
    let y1 = 2.0 * radius / (rho1 + 1.0 / rho1);
    (x1, y1)
}

/// Scale and rotation angle of parallel transport from `(x0, y0)` to `(x1, y1)`.
pub(crate) fn transport(x0: f64, y0: f64, x1: f64, y1: f64) -> (f64, f64) {
    let scale = y1 / y0;
    let dx = x1 - x0;
    if dx.abs() < VERTICAL_TOL {
        return (scale, 0.0);
    }
    let offset = centre_offset(x0, y0, x1, y1);
    let radius = offset.hypot(y0);
    let (left, right) = end_gaps(offset, radius, y0);
    let rho0 = (left / right).sqrt();
    let k = dx.signum() * distance(x0, y0, x1, y1);
    let rho1 = rho0 * k.exp();
    let angle = 2.0 * (rho1 - rho0).atan2(1.0 + rho0 * rho1);
    (scale, angle)
}

/// Möbius map sending the imaginary axis onto a semicircular geodesic,
/// normalised to `d = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub x_center: f64,
    pub radius: f64,
}

impl MoebiusCoefficients {
    fn anchored(x: f64, y: f64, offset: f64) -> Self {
        let radius = offset.hypot(y);
        let (left, right) = end_gaps(offset, radius, y);
        Self {
            a: (x + right) / (2.0 * radius),
            b: x - left,
            c: 1.0 / (2.0 * radius),
            d: 1.0,
            x_center: x + offset,
            radius,
        }
    }

    /// Map for the semicircle through two points; `None` when they are vertically aligned.
    pub fn through(x0: f64, y0: f64, x1: f64, y1: f64) -> Option<Self> {
        if (x1 - x0).abs() < VERTICAL_TOL {
            return None;
        }
        Some(Self::anchored(x0, y0, centre_offset(x0, y0, x1, y1)))
    }

    /// Map for the semicircle through `(x, y)` with tangent `(dx, dy)`;
    /// `None` for vertical tangents.
    pub fn from_tangent(x: f64, y: f64, dx: f64, dy: f64) -> Option<Self> {
        if dx.abs() < VERTICAL_TOL * dx.hypot(dy) {
            return None;
        }
        Some(Self::anchored(x, y, y * dy / dx))
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Image of `i ȳ`, evaluated from the real-coefficient expansion.
    pub fn point_at(&self, ybar: f64) -> (f64, f64) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let den = d * d + c * c * ybar * ybar;
        ((b * d + a * c * ybar * ybar) / den, ybar * self.determinant() / den)
    }

    /// Pre-image height `ȳ` of a point on the semicircle, through the inverse
    /// map `i ȳ = (d z − b) / (−c z + a)` in complex arithmetic.
    pub fn preimage_height(&self, x: f64, y: f64) -> f64 {
        use num_complex::Complex64;
        let z = Complex64::new(x, y);
        let w = (self.d * z - self.b) / (-self.c * z + self.a);
        w.im
    }

    /// Pre-image height computed from the gaps to the semicircle ends.
    pub fn preimage_height_stable(&self, x: f64, y: f64) -> f64 {
        let (left, right) = end_gaps(self.x_center - x, self.radius, y);
        2.0 * self.radius * (left / right).sqrt()
    }

    /// Rotation angle accumulated by parallel transport between two pre-image heights.
    pub fn rotation(&self, ybar0: f64, ybar1: f64) -> f64 {
        2.0 * ((self.c * ybar1 / self.d).atan() - (self.c * ybar0 / self.d).atan())
    }

    /// Logarithm written directly in terms of the map coefficients.
    pub fn log_via_preimage(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> [f64; 2] {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        debug_assert!((a * d - b * c - 1.0).abs() < 1e-9);
        let yb0 = self.preimage_height(x0, y0);
        let yb1 = self.preimage_height(x1, y1);
        let k = (yb1 / yb0).ln();
        let den = d * d + c * c * yb0 * yb0;
        let den2 = den * den;
        [k * 2.0 * c * d * yb0 * yb0 / den2, k * yb0 * (d * d - c * c * yb0 * yb0) / den2]
    }
}
