//! Tomograms `R(q) = ⟨q|ρ|q⟩` in the intermediate representation
//! `|q⟩_{f,g} = A exp[√2 q a†/B − (B*/2B) a†²]|0⟩`, `B = f − ig`.

use num_complex::Complex64;

use super::FockDensityMatrix;
use crate::error::{Error, Result};

/// Largest coherence allowed in the last two columns of `ρ`. The frame states are
/// delta-normalized, so their Fock amplitudes decay only like `n^{-1/4}`; what must be
/// small is the part of `ρ` they probe near the cutoff.
pub const EDGE_COHERENCE_TOL: f64 = 1e-9;

/// Quadrature frame `(f, g)`: the tomogram is the distribution of `f X + g P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureFrame {
    f: f64,
    g: f64,
}

impl QuadratureFrame {
    pub fn new(f: f64, g: f64) -> Result<Self> {
        if !(f.is_finite() && g.is_finite()) || f * f + g * g <= 0.0 {
            return Err(Error::InvalidArgument(format!("frame needs f² + g² > 0, got f={f}, g={g}")));
        }
        Ok(Self { f, g })
    }

    /// Position quadrature, `(f, g) = (1, 0)`.
    pub fn position() -> Self {
        Self { f: 1.0, g: 0.0 }
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `B = f − ig`.
    pub fn b(&self) -> Complex64 {
        Complex64::new(self.f, -self.g)
    }

    /// `f² + g² = |B|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.f * self.f + self.g * self.g
    }

    /// `φ = arg(B/B*)/2`.
    pub fn phi(&self) -> f64 {
        let b = self.b();
        (b / b.conj()).arg() / 2.0
    }

    /// `A = [π(f² + g²)]^{-1/4} exp[−q²/(2(f² + g²))]`.
    pub fn a_coeff(&self, q: f64) -> f64 {
        let s = self.norm_sqr();
        (std::f64::consts::PI * s).powf(-0.25) * (-q * q / (2.0 * s)).exp()
    }
}

/// Fock amplitudes `⟨n|q⟩_{f,g}` for `n ≤ cutoff`.
///
/// With `x = √2 q/B` and `y = −B*/(2B)` the generating function `e^{xs + ys²}` gives
/// `c_{n+1} = (x c_n + 2y √n c_{n−1}) / √(n+1)`, the rotated Hermite-function
/// recurrence, which is stable where the explicit double sum cancels catastrophically.
pub fn frame_state_amplitudes(q: f64, frame: &QuadratureFrame, cutoff: usize) -> Vec<Complex64> {
    let b = frame.b();
    let x = std::f64::consts::SQRT_2 * q / b;
    let y = -b.conj() / (2.0 * b);
    let mut c = Vec::with_capacity(cutoff + 1);
    c.push(Complex64::new(frame.a_coeff(q), 0.0));
    if cutoff >= 1 {
        c.push(x * c[0]);
    }
    for n in 1..cutoff {
        let nf = n as f64;
        let next = (x * c[n] + 2.0 * y * nf.sqrt() * c[n - 1]) / (nf + 1.0).sqrt();
        c.push(next);
    }
    c
}

fn edge_coherence(rho: &FockDensityMatrix) -> f64 {
    let n = rho.cutoff();
    let cols: &[usize] = if n >= 1 { &[n, n - 1] } else { &[n] };
    let mut worst = 0.0f64;
    for &col in cols {
        for m in 0..rho.dim() {
            worst = worst.max(rho.get(m, col).norm());
        }
    }
    worst
}

/// `R(q)_{f,g} = ⟨q|ρ|q⟩` summed over the truncated Fock basis.
///
/// Fails with [`Error::CutoffInsufficient`] when `ρ` carries coherences above
/// [`EDGE_COHERENCE_TOL`] in its last two columns.
pub fn tomogram_numeric(rho: &FockDensityMatrix, q: f64, frame: &QuadratureFrame) -> Result<f64> {
    let edge = edge_coherence(rho);
    if edge > EDGE_COHERENCE_TOL {
        return Err(Error::CutoffInsufficient { cutoff: rho.cutoff(), edge, max_edge: EDGE_COHERENCE_TOL });
    }
    let c = frame_state_amplitudes(q, frame, rho.cutoff());
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..rho.dim() {
            row += m[(i, j)] * c[j];
        }
        acc += c[i].conj() * row;
    }
    if acc.im.abs() > 1e-12 * acc.re.abs().max(1.0) {
        return Err(Error::ImaginaryResidue { residue: acc.im.abs() });
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{cutoff_for_tail, squeezed_vacuum, squeezed_vacuum_with_max_tail};
    use crate::specfun::log_factorial;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// `A √n! Σ_{j+2k=n} xʲ/j! yᵏ/k!`: the exponential series expanded directly.
    fn amplitudes_direct(q: f64, frame: &QuadratureFrame, cutoff: usize) -> Vec<Complex64> {
        let b = frame.b();
        let x = std::f64::consts::SQRT_2 * q / b;
        let y = -b.conj() / (2.0 * b);
        (0..=cutoff)
            .map(|n| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..=n / 2 {
                    let j = n - 2 * k;
                    let w = (0.5 * log_factorial(n) - log_factorial(j) - log_factorial(k)).exp();
                    acc += x.powu(j as u32) * y.powu(k as u32) * w;
                }
                acc * frame.a_coeff(q)
            })
            .collect()
    }

    #[test]
    fn frame_rejects_zero() {
        assert!(QuadratureFrame::new(0.0, 0.0).is_err());
        assert!(QuadratureFrame::new(f64::NAN, 1.0).is_err());
        let fr = QuadratureFrame::new(0.0, 1.0).unwrap();
        assert_eq!(fr.b(), Complex64::new(0.0, -1.0));
        assert_relative_eq!(fr.phi().abs(), PI / 2.0, epsilon = 1e-15);
        assert_eq!(QuadratureFrame::position().phi(), 0.0);
    }

    #[test]
    fn recurrence_matches_direct_series_where_it_is_accurate() {
        for (f, g) in [(1.0, 0.0), (0.0, 1.0), (0.6, -0.9)] {
            let frame = QuadratureFrame::new(f, g).unwrap();
            for q in [-1.0, 0.0, 0.4, 1.5] {
                let rec = frame_state_amplitudes(q, &frame, 24);
                let dir = amplitudes_direct(q, &frame, 24);
                for (n, (a, b)) in rec.iter().zip(&dir).enumerate() {
                    assert!((a - b).norm() < 1e-11, "f={f} g={g} q={q} n={n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn position_frame_gives_hermite_functions() {
        // ⟨n|q⟩ = π^{-1/4} e^{-q²/2} H_n(q)/√(2ⁿ n!)
        let q = 0.8;
        let amps = frame_state_amplitudes(q, &QuadratureFrame::position(), 10);
        for (n, a) in amps.iter().enumerate() {
            let h = crate::specfun::hermite_scaled(n, q);
            let expected = PI.powf(-0.25) * (-q * q / 2.0).exp() * h;
            assert!((a.re - expected).abs() < 1e-14 && a.im.abs() < 1e-14);
        }
    }

    #[test]
    fn vacuum_tomogram_is_a_squared() {
        let vac = FockDensityMatrix::vacuum(8);
        for (f, g) in [(1.0, 0.0), (0.5, 0.3), (0.0, 2.0)] {
            let frame = QuadratureFrame::new(f, g).unwrap();
            for q in [-2.0, 0.0, 1.3] {
                let r = tomogram_numeric(&vac, q, &frame).unwrap();
                assert_relative_eq!(r, frame.a_coeff(q).powi(2), max_relative = 1e-14);
            }
        }
        let r = tomogram_numeric(&vac, 0.7, &QuadratureFrame::position()).unwrap();
        assert_relative_eq!(r, PI.powf(-0.5) * (-0.49f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn squeezed_vacuum_origin_value() {
        let cutoff = cutoff_for_tail(1.0, 1e-22);
        let rho = squeezed_vacuum(1.0, cutoff).unwrap();
        let r = tomogram_numeric(&rho, 0.0, &QuadratureFrame::position()).unwrap();
        // π^{-1/2} sech λ/(1 + tanh λ) = π^{-1/2} e^{-λ}
        let oracle = PI.powf(-0.5) / 1f64.cosh() / (1.0 + 1f64.tanh());
        assert_relative_eq!(oracle, PI.powf(-0.5) * (-1f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(r, oracle, epsilon = 1e-9);
        assert_relative_eq!(r, 0.207554, epsilon = 1e-6);
    }

    #[test]
    fn insufficient_cutoff_is_reported() {
        let rho = squeezed_vacuum_with_max_tail(1.0, 64, 1e-6).unwrap();
        let err = tomogram_numeric(&rho, 0.0, &QuadratureFrame::position());
        assert!(matches!(err, Err(Error::CutoffInsufficient { .. })));
    }

    #[test]
    fn normalizes_to_one() {
        let rho = squeezed_vacuum(0.5, 96).unwrap();
        for (f, g) in [(1.0, 0.0), (0.0, 1.0), (1.2, 1.1), (0.3, 0.4)] {
            let frame = QuadratureFrame::new(f, g).unwrap();
            let (lo, hi, n) = (-14.0, 14.0, 1401);
            let h = (hi - lo) / (n - 1) as f64;
            let vals: Vec<f64> = (0..n).map(|i| tomogram_numeric(&rho, lo + i as f64 * h, &frame).unwrap()).collect();
            assert!(vals.iter().all(|v| *v >= -1e-15));
            let integral = h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[n - 1]));
            assert_relative_eq!(integral, 1.0, epsilon = 1e-9);
        }
    }
}
