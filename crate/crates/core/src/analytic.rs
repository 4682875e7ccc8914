//! Closed forms for the squeezed vacuum after the amplitude-damping channel.
//!
//! The evolved state is `W e^{(ß/2)a†²} e^{a†a ln g} e^{(ß/2)a²}` with
//! `T′ = 1 − e^{−2κt}`, `ß = e^{−2κt} tanh λ/(1 − T′² tanh² λ)`,
//! `W = sech λ/√(1 − T′² tanh² λ)` and `g = ß T′ tanh λ`. Everything below is a
//! function of those four numbers.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::t_prime;
use crate::error::{Error, Result};
use crate::fock::{cutoff_for_tail, FockDensityMatrix, QuadratureFrame};
use crate::specfun::{log_factorial, log_pow, log_sum_exp};

/// Squeezing `λ` and dimensionless decay time `κt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    lambda: f64,
    kappa_t: f64,
}

impl ChannelPoint {
    pub fn new(lambda: f64, kappa_t: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be finite and non-negative, got {lambda}")));
        }
        if !(kappa_t >= 0.0 && kappa_t.is_finite()) {
            return Err(Error::InvalidArgument(format!("kappa_t must be finite and non-negative, got {kappa_t}")));
        }
        Ok(Self { lambda, kappa_t })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kappa_t(&self) -> f64 {
        self.kappa_t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedParams {
    pub t_prime: f64,
    pub beta_s: f64,
    pub w: f64,
    pub g: f64,
}

pub fn evolved_params(p: ChannelPoint) -> EvolvedParams {
    let tp = t_prime(p.kappa_t);
    let th = p.lambda.tanh();
    let x = tp * th;
    let d = (1.0 - x) * (1.0 + x);
    let beta_s = (-2.0 * p.kappa_t).exp() * th / d;
    let w = 1.0 / p.lambda.cosh() / d.sqrt();
    EvolvedParams { t_prime: tp, beta_s, w, g: beta_s * x }
}

/// `W/√((g − 1)² − ß²)`, which is `Tr ρ(t)` and must equal 1.
pub fn trace_identity(ep: &EvolvedParams) -> Result<f64> {
    let rad = (ep.g - 1.0).powi(2) - ep.beta_s * ep.beta_s;
    if !(rad > 0.0) {
        return Err(Error::NonPositiveRadicand { context: "trace identity", value: rad });
    }
    Ok(ep.w / rad.sqrt())
}

/// `⟨a†a⟩ = (1 − g)/((g − 1)² − ß²) − 1`.
pub fn mean_photon(p: ChannelPoint) -> f64 {
    let ep = evolved_params(p);
    (1.0 - ep.g) / ((ep.g - 1.0).powi(2) - ep.beta_s * ep.beta_s) - 1.0
}

/// A photon-number probability together with whether it underflowed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonProb {
    pub value: f64,
    pub ln_value: f64,
    pub underflow: bool,
}

fn ln_photon_prob(n: usize, p: ChannelPoint, ep: &EvolvedParams) -> f64 {
    if p.kappa_t == 0.0 {
        if n % 2 == 1 {
            return f64::NEG_INFINITY;
        }
        let k = n / 2;
        // (2k)!/(4ᵏ k!²) sech λ tanh^{2k} λ
        return log_factorial(n) - 2.0 * log_factorial(k) - (n as f64) * std::f64::consts::LN_2 - p.lambda.cosh().ln()
            + log_pow(p.lambda.tanh(), n);
    }
    let half_beta = 0.5 * ep.beta_s;
    let terms: Vec<f64> = (0..=n / 2)
        .map(|m| {
            log_pow(ep.g, n - 2 * m) + log_pow(half_beta, 2 * m) + log_factorial(n)
                - log_factorial(n - 2 * m)
                - 2.0 * log_factorial(m)
        })
        .collect();
    ep.w.ln() + log_sum_exp(&terms)
}

/// `p(n, t) = W Σ_m g^{n−2m} (ß/2)^{2m} n!/((n − 2m)! m!²)`, term-by-term in the log domain.
/// At `κt = 0` the squeezed-vacuum distribution is used directly.
pub fn photon_prob_detailed(n: usize, p: ChannelPoint) -> PhotonProb {
    let ep = evolved_params(p);
    let ln_value = ln_photon_prob(n, p, &ep);
    let value = ln_value.exp();
    PhotonProb { value, ln_value, underflow: value == 0.0 && ln_value.is_finite() }
}

pub fn photon_prob(n: usize, p: ChannelPoint) -> f64 {
    photon_prob_detailed(n, p).value
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    pub probs: Vec<f64>,
    /// `1 − Σ probs`.
    pub tail: f64,
}

pub fn photon_dist(p: ChannelPoint, n_max: usize) -> PhotonDistribution {
    let probs: Vec<f64> = (0..=n_max).map(|n| photon_prob(n, p)).collect();
    let tail = 1.0 - probs.iter().sum::<f64>();
    PhotonDistribution { probs, tail }
}

/// Smallest `n_max` whose neglected mass is below `max_tail`. Damping thins the photon
/// number binomially, so the initial squeezed-vacuum tail bounds the evolved one.
pub fn adaptive_n_max(p: ChannelPoint, max_tail: f64) -> usize {
    cutoff_for_tail(p.lambda, max_tail)
}

pub fn photon_dist_adaptive(p: ChannelPoint, max_tail: f64) -> PhotonDistribution {
    photon_dist(p, adaptive_n_max(p, max_tail))
}

fn ln_element(m: usize, n: usize, ep: &EvolvedParams, ln_w: f64) -> Option<f64> {
    if (m + n) % 2 == 1 {
        return None;
    }
    let half_beta = 0.5 * ep.beta_s;
    let half_log_fact = 0.5 * (log_factorial(m) + log_factorial(n));
    let terms: Vec<f64> = ((m % 2)..=m.min(n))
        .step_by(2)
        .map(|l| {
            let (i, j) = ((m - l) / 2, (n - l) / 2);
            log_pow(half_beta, i + j) + log_pow(ep.g, l) + half_log_fact
                - log_factorial(l)
                - log_factorial(i)
                - log_factorial(j)
        })
        .collect();
    Some(ln_w + log_sum_exp(&terms))
}

/// Fock matrix of the closed-form state. All terms are positive, so the log-domain sum
/// is exact up to rounding; the neglected diagonal mass is recorded as the tail.
pub fn evolved_density_matrix(p: ChannelPoint, cutoff: usize) -> Result<FockDensityMatrix> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument(format!("cutoff must be at least 2, got {cutoff}")));
    }
    let ep = evolved_params(p);
    let ln_w = ep.w.ln();
    let dim = cutoff + 1;
    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|m| (0..dim).map(|n| ln_element(m, n, &ep, ln_w).map_or(0.0, f64::exp)).collect())
        .collect();
    let matrix = nalgebra::DMatrix::from_fn(dim, dim, |i, j| Complex64::new(rows[i][j], 0.0));
    let trace: f64 = (0..dim).map(|i| rows[i][i]).sum();
    Ok(FockDensityMatrix::from_parts(matrix, (1.0 - trace).max(0.0)))
}

/// Wigner function in the convention whose total integral is 1/2:
/// `W/(π√((1+g)² − ß²)) exp[2|α|² + 2(−2(1+g)|α|² + ß(α² + α*²))/((1+g)² − ß²)]`.
pub fn wigner_analytic(alpha: Complex64, p: ChannelPoint) -> f64 {
    let ep = evolved_params(p);
    let one_g = 1.0 + ep.g;
    let d = one_g * one_g - ep.beta_s * ep.beta_s;
    let r2 = alpha.norm_sqr();
    let re_a2 = (alpha * alpha).re;
    let exponent = 2.0 * r2 + 2.0 * (-2.0 * one_g * r2 + 2.0 * ep.beta_s * re_a2) / d;
    ep.w / (std::f64::consts::PI * d.sqrt()) * exponent.exp()
}

/// Tomogram of `ρ(t)` along the frame `(f, g)`:
/// `(W A²/√E) exp[q²ß(B² + B*²)/(E|B|⁴) + 2q²ß(T′τ + ß − ß(T′τ)²)/(E|B|²)]`
/// with `τ = tanh λ`, `B = f − ig` and `E = |1 + ßB/B*|² − (ßT′τ)²`.
pub fn tomogram_analytic(q: f64, frame: &QuadratureFrame, p: ChannelPoint) -> Result<f64> {
    let ep = evolved_params(p);
    let tau = p.lambda.tanh();
    let b = frame.b();
    let b2 = frame.norm_sqr();
    let x = ep.t_prime * tau;
    let e = (1.0 + ep.beta_s * b / b.conj()).norm_sqr() - (ep.beta_s * x).powi(2);
    if !(e > 0.0) {
        return Err(Error::NonPositiveRadicand { context: "tomogram E", value: e });
    }
    let q2 = q * q;
    let exponent = q2 * ep.beta_s * (b * b + b.conj() * b.conj()).re / (e * b2 * b2)
        + 2.0 * q2 * ep.beta_s * (x + ep.beta_s - ep.beta_s * x * x) / (e * b2);
    let a = frame.a_coeff(q);
    Ok(ep.w * a * a / e.sqrt() * exponent.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_channel;
    use crate::fock::{expect_number, squeezed_vacuum, squeezed_vacuum_with_max_tail};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn pt(l: f64, kt: f64) -> ChannelPoint {
        ChannelPoint::new(l, kt).unwrap()
    }

    #[test]
    fn channel_point_validation() {
        assert!(ChannelPoint::new(-0.1, 0.0).is_err());
        assert!(ChannelPoint::new(0.1, f64::INFINITY).is_err());
        assert!(ChannelPoint::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn params_limits() {
        let ep = evolved_params(pt(0.7, 0.0));
        assert_eq!(ep.t_prime, 0.0);
        assert_eq!(ep.beta_s, 0.7f64.tanh());
        assert_relative_eq!(ep.w, 1.0 / 0.7f64.cosh(), max_relative = 1e-15);
        let ep = evolved_params(pt(0.0, 1.3));
        assert_eq!((ep.beta_s, ep.w, ep.g), (0.0, 1.0, 0.0));
    }

    #[test]
    fn params_at_half_unit() {
        let ep = evolved_params(pt(1.0, 0.5));
        assert_relative_eq!(ep.t_prime, 0.632121, epsilon = 1e-6);
        assert_relative_eq!(ep.beta_s, 0.364699, epsilon = 1e-6);
        assert_relative_eq!(ep.w, 0.739374, epsilon = 1e-6);
        // ρ₀₀ of the Kraus-evolved state is W
        let kraus = apply_channel(&squeezed_vacuum_with_max_tail(1.0, 96, 1e-12).unwrap(), 0.5).unwrap();
        assert_relative_eq!(kraus.get(0, 0).re, ep.w, epsilon = 1e-13);
    }

    #[test]
    fn trace_identity_examples() {
        assert_eq!(trace_identity(&evolved_params(pt(0.0, 0.4))).unwrap(), 1.0);
        for (l, kt) in [(1.0, 0.5), (2.0, 0.1), (1.5, 0.0), (0.3, 7.0)] {
            let t = trace_identity(&evolved_params(pt(l, kt))).unwrap();
            assert!((t - 1.0).abs() <= 1e-12, "{l} {kt}: {t}");
        }
        let bad = EvolvedParams { t_prime: 0.5, beta_s: 1.5, w: 1.0, g: 0.5 };
        assert!(matches!(trace_identity(&bad), Err(Error::NonPositiveRadicand { .. })));
    }

    #[test]
    fn mean_photon_examples() {
        assert_relative_eq!(mean_photon(pt(0.8, 0.0)), 0.8f64.sinh().powi(2), epsilon = 1e-13);
        assert_eq!(mean_photon(pt(0.0, 2.0)), 0.0);
        assert_relative_eq!(mean_photon(pt(1.0, 0.5)), (-1f64).exp() * 1f64.sinh().powi(2), epsilon = 1e-13);
        assert_relative_eq!(mean_photon(pt(1.0, 0.5)), 0.508078, epsilon = 1e-6);
        let kraus = apply_channel(&squeezed_vacuum_with_max_tail(1.0, 96, 1e-12).unwrap(), 0.5).unwrap();
        assert_relative_eq!(expect_number(&kraus), mean_photon(pt(1.0, 0.5)), epsilon = 1e-9);
    }

    #[test]
    fn photon_prob_examples() {
        for k in 0..10 {
            assert_eq!(photon_prob(2 * k + 1, pt(1.0, 0.0)), 0.0);
        }
        assert_relative_eq!(
            photon_prob(2, pt(1.0, 0.0)),
            0.5 / 1f64.cosh() * 1f64.tanh().powi(2),
            max_relative = 1e-14
        );
        let p = pt(1.0, 0.5);
        assert_relative_eq!(photon_prob(0, p), evolved_params(p).w, max_relative = 1e-14);
        assert_relative_eq!(photon_prob(1, p), 0.129814, epsilon = 1e-6);
        assert_relative_eq!(photon_prob(2, p), 0.071962, epsilon = 1e-6);
        assert!(photon_prob(1, pt(1.0, 60.0)) < 1e-40);
        assert_eq!(photon_prob(0, pt(0.0, 0.0)), 1.0);
        assert_eq!(photon_prob(3, pt(0.0, 1.0)), 0.0);
    }

    #[test]
    fn photon_prob_flags_underflow() {
        let r = photon_prob_detailed(400, pt(0.2, 3.0));
        assert!(r.underflow && r.value == 0.0 && r.ln_value.is_finite());
        assert!(!photon_prob_detailed(2, pt(0.2, 3.0)).underflow);
    }

    #[test]
    fn photon_dist_matches_kraus_diagonal() {
        let p = pt(1.0, 0.5);
        let dist = photon_dist(p, 40);
        let kraus = apply_channel(&squeezed_vacuum_with_max_tail(1.0, 96, 1e-12).unwrap(), 0.5).unwrap();
        for (n, pn) in dist.probs.iter().enumerate() {
            assert!((pn - kraus.get(n, n).re).abs() <= 1e-12, "n={n}");
        }
        let at_zero = photon_dist(pt(1.0, 0.0), 40);
        // the neglected mass beyond n = 40 is the squeezed-vacuum tail, about 2e-6
        assert_relative_eq!(at_zero.tail, crate::fock::squeezed_tail(1.0, 40), max_relative = 1e-6);
        let rho0 = squeezed_vacuum(1.0, 64).unwrap();
        for n in 0..=40 {
            assert_relative_eq!(at_zero.probs[n], rho0.get(n, n).re, epsilon = 1e-14);
        }
        let late = photon_dist(pt(1.0, 2.0), 40);
        assert!(late.probs[0] > 0.95);
        let adaptive = photon_dist_adaptive(pt(1.5, 0.1), 1e-12);
        assert!(adaptive.tail.abs() <= 1e-9, "{}", adaptive.tail);
    }

    #[test]
    fn density_matrix_limits() {
        for l in [0.3, 1.0] {
            let closed = evolved_density_matrix(pt(l, 0.0), 64).unwrap();
            assert!(closed.max_abs_diff(&squeezed_vacuum(l, 64).unwrap()) <= 1e-12);
        }
        let late = evolved_density_matrix(pt(1.0, 10.0), 64).unwrap();
        assert!(late.max_abs_diff(&FockDensityMatrix::vacuum(64)) <= 1e-7);
        assert!(evolved_density_matrix(pt(1.0, 0.5), 1).is_err());
    }

    #[test]
    fn density_matrix_matches_kraus_leading_block() {
        let p = pt(1.0, 0.5);
        let closed = evolved_density_matrix(p, 64).unwrap();
        let big = squeezed_vacuum_with_max_tail(1.0, cutoff_for_tail(1.0, 1e-12), 1e-12).unwrap();
        let kraus = apply_channel(&big, 0.5).unwrap().leading_block(64).unwrap();
        let d = closed.max_abs_diff(&kraus);
        assert!(d <= 1e-12, "{d}");
        assert!(closed.odd_coherence_max() == 0.0);
    }

    #[test]
    fn wigner_limits() {
        let a = Complex64::new(0.4, -0.3);
        let l = 0.8f64;
        let initial = (-2.0 * a.norm_sqr() * (2.0 * l).cosh() + 2.0 * (a * a).re * (2.0 * l).sinh()).exp() / PI;
        assert_relative_eq!(wigner_analytic(a, pt(l, 0.0)), initial, max_relative = 1e-12);
        let vac = (-2.0 * a.norm_sqr()).exp() / PI;
        assert_relative_eq!(wigner_analytic(a, pt(l, 40.0)), vac, max_relative = 1e-12);
        assert_relative_eq!(wigner_analytic(Complex64::new(1.0, 0.0), pt(1.0, 0.0)), 0.242828, epsilon = 1e-6);
    }

    #[test]
    fn tomogram_limits() {
        let frame = QuadratureFrame::new(0.7, -0.4).unwrap();
        for q in [-2.0, 0.0, 0.9] {
            let a = frame.a_coeff(q);
            assert_relative_eq!(tomogram_analytic(q, &frame, pt(1.0, 40.0)).unwrap(), a * a, max_relative = 1e-12);
        }
        let r = tomogram_analytic(0.0, &QuadratureFrame::position(), pt(1.0, 0.0)).unwrap();
        assert_relative_eq!(r, PI.powf(-0.5) / 1f64.cosh() / (1.0 + 1f64.tanh()), max_relative = 1e-13);
        // initial position marginal is a Gaussian of variance e^{2λ}/2
        let var = |q1: f64| {
            let r0 = tomogram_analytic(0.0, &QuadratureFrame::position(), pt(1.0, 0.0)).unwrap();
            let r1 = tomogram_analytic(q1, &QuadratureFrame::position(), pt(1.0, 0.0)).unwrap();
            -q1 * q1 / (2.0 * (r1 / r0).ln())
        };
        assert_relative_eq!(var(0.7), var(1.9), max_relative = 1e-12);
        assert_relative_eq!(var(0.7), (2.0f64).exp() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn tomogram_integrates_to_one() {
        let p = pt(1.0, 0.5);
        let frame = QuadratureFrame::position();
        let (lo, hi, n) = (-15.0, 15.0, 3001);
        let h = (hi - lo) / (n - 1) as f64;
        let s: f64 = (0..n).map(|i| tomogram_analytic(lo + i as f64 * h, &frame, p).unwrap()).sum();
        assert_relative_eq!(h * s, 1.0, epsilon = 1e-10);
    }
}
