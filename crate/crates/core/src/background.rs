//! Expanding pressureless background: the multidimensional Burgers flow
//! `ubar(t, x) = u0(y)` with `x = y + t u0(y)`, evaluated by inverting the
//! characteristics, and the density it transports.

use crate::error::{Error, Result};
use crate::quad;

/// Point in `R^d` for `d <= 2`; the unused coordinate is zero.
pub type Point = [f64; 2];
/// Row-major `d x d` matrix, `m[i][j] = d_j f_i`.
pub type Mat = [[f64; 2]; 2];
/// Second derivatives, `h[i][j][k] = d_j d_k f_i`.
pub type Hessian = [[[f64; 2]; 2]; 2];

const ZERO_MAT: Mat = [[0.0; 2]; 2];

/// Initial velocity of the background flow.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialVelocity {
    /// `u0(y) = A y`.
    Linear { dim: usize, matrix: Mat },
    /// `u0_i(y) = slope y_i + amplitude tanh(y_i/scale)`.
    LinearTanh { dim: usize, slope: f64, amplitude: f64, scale: f64 },
    /// `u0(y) = slope y + amplitude y exp(-|y|^2/width^2)`.
    LinearBump { dim: usize, slope: f64, amplitude: f64, width: f64 },
}

impl InitialVelocity {
    /// `u0 = slope * y`.
    pub fn linear(dim: usize, slope: f64) -> Self {
        InitialVelocity::Linear { dim, matrix: [[slope, 0.0], [0.0, if dim == 2 { slope } else { 0.0 }]] }
    }

    /// Expansion combined with rotation, `Du0 = [[1, -omega], [omega, 1]]`.
    pub fn rotating(omega: f64) -> Self {
        InitialVelocity::Linear { dim: 2, matrix: [[1.0, -omega], [omega, 1.0]] }
    }

    pub fn dim(&self) -> usize {
        match *self {
            InitialVelocity::Linear { dim, .. }
            | InitialVelocity::LinearTanh { dim, .. }
            | InitialVelocity::LinearBump { dim, .. } => dim,
        }
    }

    pub fn value(&self, y: Point) -> Point {
        let d = self.dim();
        let mut out = [0.0; 2];
        match *self {
            InitialVelocity::Linear { ref matrix, .. } => {
                for i in 0..d {
                    out[i] = (0..d).map(|j| matrix[i][j] * y[j]).sum();
                }
            }
            InitialVelocity::LinearTanh { slope, amplitude, scale, .. } => {
                for i in 0..d {
                    out[i] = slope * y[i] + amplitude * (y[i] / scale).tanh();
                }
            }
            InitialVelocity::LinearBump { slope, amplitude, width, .. } => {
                let g = (-norm2(y, d) / (width * width)).exp();
                for i in 0..d {
                    out[i] = (slope + amplitude * g) * y[i];
                }
            }
        }
        out
    }

    pub fn jacobian(&self, y: Point) -> Mat {
        let d = self.dim();
        let mut m = ZERO_MAT;
        match *self {
            InitialVelocity::Linear { matrix, .. } => {
                for i in 0..d {
                    for j in 0..d {
                        m[i][j] = matrix[i][j];
                    }
                }
            }
            InitialVelocity::LinearTanh { slope, amplitude, scale, .. } => {
                for i in 0..d {
                    let th = (y[i] / scale).tanh();
                    m[i][i] = slope + amplitude / scale * (1.0 - th * th);
                }
            }
            InitialVelocity::LinearBump { slope, amplitude, width, .. } => {
                let w2 = width * width;
                let g = (-norm2(y, d) / w2).exp();
                for i in 0..d {
                    for j in 0..d {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        m[i][j] = slope * delta + amplitude * g * (delta - 2.0 * y[i] * y[j] / w2);
                    }
                }
            }
        }
        m
    }

    pub fn hessian(&self, y: Point) -> Hessian {
        let d = self.dim();
        let mut h = [ZERO_MAT; 2];
        match *self {
            InitialVelocity::Linear { .. } => {}
            InitialVelocity::LinearTanh { amplitude, scale, .. } => {
                for i in 0..d {
                    let th = (y[i] / scale).tanh();
                    h[i][i][i] = -2.0 * amplitude / (scale * scale) * th * (1.0 - th * th);
                }
            }
            InitialVelocity::LinearBump { amplitude, width, .. } => {
                let w2 = width * width;
                let g = (-norm2(y, d) / w2).exp();
                let kd = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let dg = -2.0 * y[k] / w2 * g;
                            h[i][j][k] = amplitude
                                * (dg * (kd(i, j) - 2.0 * y[i] * y[j] / w2)
                                    - 2.0 * g * (kd(i, k) * y[j] + y[i] * kd(j, k)) / w2);
                        }
                    }
                }
            }
        }
        h
    }
}

fn norm2(y: Point, d: usize) -> f64 {
    (0..d).map(|i| y[i] * y[i]).sum()
}

fn norm(y: Point, d: usize) -> f64 {
    norm2(y, d).sqrt()
}

fn identity(d: usize) -> Mat {
    let mut m = ZERO_MAT;
    for i in 0..d {
        m[i][i] = 1.0;
    }
    m
}

fn matmul(a: &Mat, b: &Mat, d: usize) -> Mat {
    let mut m = ZERO_MAT;
    for i in 0..d {
        for j in 0..d {
            m[i][j] = (0..d).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    m
}

fn inverse(a: &Mat, d: usize) -> Option<Mat> {
    match d {
        1 => (a[0][0] != 0.0).then(|| [[1.0 / a[0][0], 0.0], [0.0, 0.0]]),
        _ => {
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            (det != 0.0).then(|| [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
        }
    }
}

fn determinant(a: &Mat, d: usize) -> f64 {
    match d {
        1 => a[0][0],
        _ => a[0][0] * a[1][1] - a[0][1] * a[1][0],
    }
}

/// Maximum absolute entry.
pub fn mat_sup(a: &Mat) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// Complex eigenvalues `(re, im)` of a `1x1` or `2x2` matrix.
fn eigenvalues(a: &Mat, d: usize) -> Vec<(f64, f64)> {
    if d == 1 {
        return vec![(a[0][0], 0.0)];
    }
    let half_tr = 0.5 * (a[0][0] + a[1][1]);
    let disc = half_tr * half_tr - determinant(a, 2);
    if disc >= 0.0 {
        let r = disc.sqrt();
        vec![(half_tr - r, 0.0), (half_tr + r, 0.0)]
    } else {
        let r = (-disc).sqrt();
        vec![(half_tr, -r), (half_tr, r)]
    }
}

/// Distance from `re + i im` to the closed negative real half-line.
fn distance_to_negative_axis(re: f64, im: f64) -> f64 {
    if re <= 0.0 {
        im.abs()
    } else {
        re.hypot(im)
    }
}

/// Outcome of the non-degeneracy check on `Du0`.
#[derive(Debug, Clone, PartialEq)]
pub struct H3Estimate {
    /// Minimum distance of the spectrum of `Du0` from `(-inf, 0]`.
    pub gap: f64,
    /// Smallest real part of any eigenvalue seen.
    pub min_real_part: f64,
    /// Sample attaining the gap.
    pub worst_point: Point,
}

impl H3Estimate {
    pub fn holds(&self) -> bool {
        self.gap > 0.0 && self.gap.is_finite()
    }
}

/// Estimates the spectral gap of `Du0` from `(-inf, 0]` over sample points.
pub fn check_h3(u0: &InitialVelocity, samples: &[Point]) -> Result<H3Estimate> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no sample points for the spectral check".into()));
    }
    let d = u0.dim();
    let mut est = H3Estimate { gap: f64::INFINITY, min_real_part: f64::INFINITY, worst_point: samples[0] };
    for &y in samples {
        for (re, im) in eigenvalues(&u0.jacobian(y), d) {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite eigenvalue of Du0 at {y:?}")));
            }
            est.min_real_part = est.min_real_part.min(re);
            let gap = distance_to_negative_axis(re, im);
            if gap < est.gap {
                est.gap = gap;
                est.worst_point = y;
            }
        }
    }
    Ok(est)
}

/// Uniform sample points on `[-half_width, half_width]^d`.
pub fn sample_box(d: usize, half_width: f64, per_axis: usize) -> Vec<Point> {
    let n = per_axis.max(2);
    let coord = |i: usize| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
    match d {
        1 => (0..n).map(|i| [coord(i), 0.0]).collect(),
        _ => (0..n).flat_map(|i| (0..n).map(move |j| [coord(i), coord(j)])).collect(),
    }
}

/// Background velocity, its gradient and the rescaled deviation
/// `K = (1 + t)^2 (D ubar - I/(1 + t))` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundSample {
    pub velocity: Point,
    pub gradient: Mat,
    pub deviation: Mat,
}

/// Background fields consumed by the solver.
pub trait Background: Sync + Send {
    fn dim(&self) -> usize;
    fn sample(&self, t: f64, x: Point) -> Result<BackgroundSample>;
    /// Whether the background vanishes identically.
    fn is_quiescent(&self) -> bool {
        false
    }
}

/// Zero background velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quiescent {
    pub dim: usize,
}

impl Background for Quiescent {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, t: f64, _x: Point) -> Result<BackgroundSample> {
        let mut deviation = ZERO_MAT;
        for i in 0..self.dim {
            deviation[i][i] = -(1.0 + t);
        }
        Ok(BackgroundSample { velocity: [0.0; 2], gradient: ZERO_MAT, deviation })
    }

    fn is_quiescent(&self) -> bool {
        true
    }
}

/// Burgers flow generated by an initial velocity satisfying the
/// non-degeneracy condition.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundFlow {
    u0: InitialVelocity,
    h3: H3Estimate,
}

const NEWTON_MAX_ITER: usize = 60;

impl BackgroundFlow {
    /// Builds the flow after checking the spectral condition on `samples`.
    pub fn new(u0: InitialVelocity, samples: &[Point]) -> Result<Self> {
        if !(1..=2).contains(&u0.dim()) {
            return Err(Error::InvalidArgument(format!("background dimension {} not in 1..=2", u0.dim())));
        }
        let h3 = check_h3(&u0, samples)?;
        if !h3.holds() {
            return Err(Error::HypothesisViolated(format!(
                "Du0 has spectrum touching (-inf, 0] near {:?} (gap {:e})",
                h3.worst_point, h3.gap
            )));
        }
        Ok(Self { u0, h3 })
    }

    pub fn initial_velocity(&self) -> &InitialVelocity {
        &self.u0
    }

    pub fn h3(&self) -> &H3Estimate {
        &self.h3
    }

    /// Lagrangian label `y` with `y + t u0(y) = x`, by damped Newton.
    pub fn foot(&self, t: f64, x: Point) -> Result<Point> {
        let d = self.u0.dim();
        let fail = |reason: String| Error::CharacteristicInversion { x: x[..d].to_vec(), t, reason };
        if t < 0.0 || !t.is_finite() {
            return Err(fail("time must be finite and non-negative".into()));
        }
        let lam = self.h3.min_real_part.max(0.0);
        let mut y = [x[0] / (1.0 + t * lam), x[1] / (1.0 + t * lam)];
        let residual = |y: Point| -> Point {
            let u = self.u0.value(y);
            [y[0] + t * u[0] - x[0], y[1] + t * u[1] - x[1]]
        };
        let mut g = residual(y);
        for _ in 0..NEWTON_MAX_ITER {
            let j = self.u0.jacobian(y);
            let mut a = identity(d);
            for i in 0..d {
                for k in 0..d {
                    a[i][k] += t * j[i][k];
                }
            }
            let inv = inverse(&a, d).ok_or_else(|| fail("singular I + t Du0".into()))?;
            let mut step = [0.0; 2];
            for i in 0..d {
                step[i] = (0..d).map(|k| inv[i][k] * g[k]).sum();
            }
            let g_norm = norm(g, d);
            let mut alpha = 1.0;
            loop {
                let trial = [y[0] - alpha * step[0], y[1] - alpha * step[1]];
                let gt = residual(trial);
                if norm(gt, d) <= (1.0 - 1e-4 * alpha) * g_norm || alpha < 1e-3 || g_norm == 0.0 {
                    y = trial;
                    g = gt;
                    break;
                }
                alpha *= 0.5;
            }
            if norm(step, d) * alpha <= 1e-14 * (1.0 + norm(y, d)) {
                return Ok(y);
            }
        }
        if norm(g, d) <= 1e-11 * (1.0 + norm(x, d)) {
            return Ok(y);
        }
        Err(fail(format!("Newton did not converge (residual {:e})", norm(g, d))))
    }

    /// Characteristic position `X(tau; t, x) = y + tau u0(y)`.
    pub fn flow_map(&self, tau: f64, t: f64, x: Point) -> Result<Point> {
        let y = self.foot(t, x)?;
        Ok(self.position(tau, y))
    }

    fn position(&self, tau: f64, y: Point) -> Point {
        let u = self.u0.value(y);
        [y[0] + tau * u[0], y[1] + tau * u[1]]
    }

    /// Background quantities at time `t` along the characteristic labelled `y`.
    pub fn lagrangian_sample(&self, t: f64, y: Point) -> Result<BackgroundSample> {
        let d = self.u0.dim();
        let j = self.u0.jacobian(y);
        let a = self.stretch(t, &j);
        let inv = inverse(&a, d).ok_or_else(|| Error::CharacteristicInversion {
            x: self.position(t, y)[..d].to_vec(),
            t,
            reason: "singular I + t Du0".into(),
        })?;
        let gradient = matmul(&j, &inv, d);
        let mut deviation = ZERO_MAT;
        let s = (1.0 + t) * (1.0 + t);
        for i in 0..d {
            for k in 0..d {
                let id = if i == k { 1.0 / (1.0 + t) } else { 0.0 };
                deviation[i][k] = s * (gradient[i][k] - id);
            }
        }
        Ok(BackgroundSample { velocity: self.u0.value(y), gradient, deviation })
    }

    /// Second derivatives of `ubar` at time `t` along the characteristic `y`:
    /// `d_k D ubar = A^-1 (sum_l H_l (A^-1)_lk) A^-1` with `A = I + t Du0`.
    pub fn lagrangian_hessian(&self, t: f64, y: Point) -> Result<Hessian> {
        let d = self.u0.dim();
        let a = self.stretch(t, &self.u0.jacobian(y));
        let inv = inverse(&a, d).ok_or_else(|| Error::CharacteristicInversion {
            x: self.position(t, y)[..d].to_vec(),
            t,
            reason: "singular I + t Du0".into(),
        })?;
        let h = self.u0.hessian(y);
        let mut out = [ZERO_MAT; 2];
        for k in 0..d {
            let mut m = ZERO_MAT;
            for i in 0..d {
                for j in 0..d {
                    m[i][j] = (0..d).map(|l| h[i][j][l] * inv[l][k]).sum();
                }
            }
            let dk = matmul(&matmul(&inv, &m, d), &inv, d);
            for i in 0..d {
                for j in 0..d {
                    out[i][j][k] = dk[i][j];
                }
            }
        }
        Ok(out)
    }

    /// Second derivatives of `ubar` at `(t, x)`.
    pub fn hessian(&self, t: f64, x: Point) -> Result<Hessian> {
        let y = self.foot(t, x)?;
        self.lagrangian_hessian(t, y)
    }

    fn stretch(&self, t: f64, j: &Mat) -> Mat {
        let d = self.u0.dim();
        let mut a = identity(d);
        for i in 0..d {
            for k in 0..d {
                a[i][k] += t * j[i][k];
            }
        }
        a
    }

    /// Density carried by the background:
    /// `rho(t, x) = rho0(X(0; t, x)) exp(-int_0^t div ubar(tau, X(tau)) dtau)`,
    /// the time integral computed by adaptive quadrature along the characteristic.
    pub fn density_transport<F>(&self, rho0: F, t: f64, x: Point) -> Result<f64>
    where
        F: Fn(Point) -> f64,
    {
        let y = self.foot(t, x)?;
        let d = self.u0.dim();
        let divergence = quad::integrate(
            |tau| {
                let sample = self.evaluate(tau, self.position(tau, y))?;
                Ok((0..d).map(|i| sample.gradient[i][i]).sum())
            },
            0.0,
            t,
            1e-12,
        )?;
        Ok(rho0(y) * (-divergence).exp())
    }

    /// `ubar`, `D ubar` and `K` at `(t, x)`.
    pub fn evaluate(&self, t: f64, x: Point) -> Result<BackgroundSample> {
        let y = self.foot(t, x)?;
        self.lagrangian_sample(t, y)
    }

    /// `ln det(I + t Du0(y))`, the integrated divergence along a characteristic.
    pub fn log_jacobian(&self, t: f64, y: Point) -> f64 {
        let d = self.u0.dim();
        determinant(&self.stretch(t, &self.u0.jacobian(y)), d).ln()
    }
}

impl Background for BackgroundFlow {
    fn dim(&self) -> usize {
        self.u0.dim()
    }

    fn sample(&self, t: f64, x: Point) -> Result<BackgroundSample> {
        self.evaluate(t, x)
    }
}
