//! Special functions and quadrature.
//!
//! Everything here is a pure function of its arguments. Factorials are only ever
//! handled as logarithms so that sums over photon numbers stay finite well past
//! `n = 170`.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Length of the shared `ln(n!)` table. Larger arguments fall back to Stirling's series.
pub const LOG_FACTORIAL_TABLE_LEN: usize = 2048;

/// Default number of nodes per axis for [`gauss_quad_2d`].
pub const DEFAULT_QUAD_NODES: usize = 201;

/// Default half-width of the integration box for [`gauss_quad_2d`].
pub const DEFAULT_QUAD_RADIUS: f64 = 7.0;

/// Table of `ln(n!)` built by cumulative summation of `ln k`.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(len: usize) -> Self {
        let mut values = Vec::with_capacity(len.max(1));
        values.push(0.0);
        for k in 1..len {
            let prev = values[k - 1];
            values.push(prev + (k as f64).ln());
        }
        Self { values }
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn shared_table() -> &'static LogFactorialTable {
    static TABLE: OnceLock<LogFactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| LogFactorialTable::new(LOG_FACTORIAL_TABLE_LEN))
}

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    match shared_table().get(n) {
        Some(v) => v,
        None => ln_gamma_stirling(n as f64 + 1.0),
    }
}

// Only used for x > LOG_FACTORIAL_TABLE_LEN, where the truncated series is exact to f64.
fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `ln C(n, k)`.
pub fn log_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite_h(n: usize, x: Complex64) -> Complex64 {
    let two_x = 2.0 * x;
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = two_x;
    for k in 1..n {
        let next = two_x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(x) / sqrt(2^n n!)` for real `x`, evaluated without forming either factor.
///
/// Stays O(e^{x²/2}) for all `n`, so series such as Mehler's formula can be summed to
/// hundreds of terms.
pub fn hermite_scaled(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * x;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomial `P_n(x)` by Bonnet's recurrence.
pub fn legendre_p(n: usize, x: f64) -> f64 {
    legendre_with_prev(n, x).0
}

/// Returns `(P_n(x), P_{n-1}(x))`, with `P_{-1} = 0`.
fn legendre_with_prev(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// One-dimensional Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        // Roots are symmetric; solve for the upper half and mirror.
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, p_prev) = legendre_with_prev(n, x);
                let deriv = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / deriv;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, p_prev) = legendre_with_prev(n, x);
            let deriv = nf * (x * p - p_prev) / (x * x - 1.0);
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = x;
            weights[i] = w;
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[-half_width, half_width]`.
    pub fn scaled(&self, half_width: f64) -> (Vec<f64>, Vec<f64>) {
        (self.nodes.iter().map(|x| x * half_width).collect(), self.weights.iter().map(|w| w * half_width).collect())
    }
}

/// Tensor-product Gauss–Legendre rule over the box `[-rx, rx] × [-ry, ry]` of the
/// complex plane, with `z = x + iy`.
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub xs: Vec<f64>,
    pub wx: Vec<f64>,
    pub ys: Vec<f64>,
    pub wy: Vec<f64>,
}

impl TensorRule {
    pub fn new(rx: f64, nx: usize, ry: f64, ny: usize) -> Self {
        let (xs, wx) = GaussLegendre::new(nx).scaled(rx);
        let (ys, wy) = GaussLegendre::new(ny).scaled(ry);
        Self { xs, wx, ys, wy }
    }

    pub fn square(radius: f64, nodes: usize) -> Self {
        Self::new(radius, nodes, radius, nodes)
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `(z, weight)` pairs, x-major.
    pub fn points(&self) -> Vec<(Complex64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for (x, wx) in self.xs.iter().zip(&self.wx) {
            for (y, wy) in self.ys.iter().zip(&self.wy) {
                out.push((Complex64::new(*x, *y), wx * wy));
            }
        }
        out
    }

    /// `∫ dx dy f(x + iy)` over the box. Rows are reduced in a fixed order.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let rows: Vec<Complex64> = self
            .xs
            .par_iter()
            .zip(self.wx.par_iter())
            .map(|(x, wx)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (y, wy) in self.ys.iter().zip(&self.wy) {
                    acc += f(Complex64::new(*x, *y)) * *wy;
                }
                acc * *wx
            })
            .collect();
        rows.into_iter().sum()
    }
}

/// `∫ d²z f(z)` over the square `|Re z|, |Im z| ≤ radius` with a `nodes × nodes`
/// Gauss–Legendre tensor rule.
///
/// The integral is recomputed with twice the nodes; if the two disagree by more than
/// `tol` the call fails with [`Error::QuadratureNotConverged`]. On success the refined
/// value is returned.
pub fn gauss_quad_2d<F>(f: F, radius: f64, nodes: usize, tol: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("quadrature radius must be positive, got {radius}")));
    }
    if nodes < 32 {
        return Err(Error::InvalidArgument(format!("quadrature needs at least 32 nodes, got {nodes}")));
    }
    let coarse = TensorRule::square(radius, nodes).integrate(&f);
    let fine = TensorRule::square(radius, 2 * nodes).integrate(&f);
    let delta = (fine - coarse).norm();
    if !(delta <= tol) {
        return Err(Error::QuadratureNotConverged { delta, tol });
    }
    Ok(fine)
}

/// Stable `ln Σ exp(terms)`; returns `-∞` for an empty or all-`-∞` input.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// `k · ln(base)` with the convention `0 · ln 0 = 0`, so `base^0 = 1` for any base.
pub fn log_pow(base: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * base.ln()
    }
}

/// Closed forms that the evolved state's derivation relies on. Not used at runtime;
/// kept so property tests can check them against the numerics above.
pub mod identities {
    use num_complex::Complex64;

    use super::{hermite_scaled, log_factorial};

    /// `Σ_{n=0}^{terms-1} tⁿ/(2ⁿ n!) H_n(x) H_n(y)`.
    pub fn mehler_partial_sum(t: f64, x: f64, y: f64, terms: usize) -> f64 {
        let mut acc = 0.0;
        let mut tn = 1.0;
        for n in 0..terms {
            acc += tn * hermite_scaled(n, x) * hermite_scaled(n, y);
            tn *= t;
        }
        acc
    }

    /// `(1 − t²)^{-1/2} exp[(t²(x² + y²) − 2txy)/(t² − 1)]`, for `|t| < 1`.
    pub fn mehler_closed_form(t: f64, x: f64, y: f64) -> f64 {
        let t2 = t * t;
        (1.0 - t2).powf(-0.5) * ((t2 * (x * x + y * y) - 2.0 * t * x * y) / (t2 - 1.0)).exp()
    }

    /// `xⁿ Σ_{m=0}^{⌊n/2⌋} n!/(2^{2m} (m!)² (n−2m)!) (1 − 1/x²)^m`.
    pub fn legendre_power_series(n: usize, x: f64) -> f64 {
        let u = 1.0 - 1.0 / (x * x);
        let mut acc = 0.0;
        for m in 0..=n / 2 {
            let coeff = (log_factorial(n)
                - 2.0 * m as f64 * std::f64::consts::LN_2
                - 2.0 * log_factorial(m)
                - log_factorial(n - 2 * m))
            .exp();
            acc += coeff * u.powi(m as i32);
        }
        x.powi(n as i32) * acc
    }

    /// `∫ d²z/π exp(ζ|z|² + ξz + ηz* + f z² + g z*²)` in closed form.
    ///
    /// Valid when `Re(ζ ± f ± g) < 0` and `Re((ζ² − 4fg)/(ζ ± f ± g)) < 0`.
    pub fn gaussian_integral(zeta: Complex64, xi: Complex64, eta: Complex64, f: Complex64, g: Complex64) -> Complex64 {
        let det = zeta * zeta - 4.0 * f * g;
        ((-zeta * xi * eta + f * eta * eta + g * xi * xi) / det).exp() / det.sqrt()
    }

    /// Whether the convergence conditions of [`gaussian_integral`] hold.
    pub fn gaussian_integral_converges(zeta: Complex64, f: Complex64, g: Complex64) -> bool {
        let det = zeta * zeta - 4.0 * f * g;
        [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].iter().all(|&(sf, sg)| {
            let s = zeta + sf * f + sg * g;
            s.re < 0.0 && (det / s).re < 0.0
        })
    }
}
