//! Truncated Fock-space density matrices and the numerical observables computed on them.
//!
//! A [`FockDensityMatrix`] holds `ρ[m][n] = ⟨m|ρ|n⟩` for `m, n ≤ cutoff` together with the
//! population known to lie above the cutoff (its *tail*). States are never renormalized
//! behind the caller's back: `trace + tail ≈ 1` is the bookkeeping invariant.

mod tomogram;
pub mod wigner;

pub use tomogram::{frame_state_amplitudes, tomogram_numeric, QuadratureFrame, EDGE_COHERENCE_TOL};
pub use wigner::{wigner_numeric, wigner_numeric_direct, WignerQuadrature};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{log_factorial, log_sum_exp};

/// Tolerance for `ρ[m][n] = conj(ρ[n][m])`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues above this are treated as non-negative (truncation noise).
pub const POSITIVITY_TOL: f64 = -1e-10;
/// Largest tail a squeezed vacuum may leave above the cutoff by default.
pub const DEFAULT_MAX_TAIL: f64 = 1e-8;
/// Tail targeted when a cutoff is picked automatically.
pub const ADAPTIVE_TAIL: f64 = 1e-12;
/// Smallest cutoff chosen automatically.
pub const DEFAULT_CUTOFF: usize = 64;
/// Beyond this squeezing the automatic cutoff is refused; pass one explicitly.
pub const LAMBDA_GUARD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    elements: DMatrix<Complex64>,
    tail: f64,
}

impl FockDensityMatrix {
    /// Wraps a square matrix, rejecting non-Hermitian input.
    pub fn from_matrix(elements: DMatrix<Complex64>) -> Result<Self> {
        if elements.nrows() != elements.ncols() || elements.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "density matrix must be square and non-empty, got {}x{}",
                elements.nrows(),
                elements.ncols()
            )));
        }
        let rho = Self::from_parts(elements, 0.0);
        let defect = rho.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts(elements: DMatrix<Complex64>, tail: f64) -> Self {
        Self { elements, tail }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut m = DMatrix::zeros(cutoff + 1, cutoff + 1);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Self::from_parts(m, 0.0)
    }

    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::InvalidArgument(format!("number state |{n}⟩ above cutoff {cutoff}")));
        }
        let mut m = DMatrix::zeros(cutoff + 1, cutoff + 1);
        m[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self::from_parts(m, 0.0))
    }

    /// `|ψ⟩⟨ψ|` for the given Fock amplitudes (not normalized).
    pub fn pure(amplitudes: &[Complex64]) -> Self {
        let n = amplitudes.len();
        let m = DMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::from_parts(m, 0.0)
    }

    /// Records the population known to lie above the cutoff.
    pub fn with_tail(mut self, tail: f64) -> Self {
        self.tail = tail;
        self
    }

    pub fn cutoff(&self) -> usize {
        self.elements.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.elements[(m, n)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.elements
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn trace(&self) -> f64 {
        self.elements.diagonal().iter().map(|z| z.re).sum()
    }

    /// Explicitly rescaled to unit trace; the tail is dropped.
    pub fn renormalized(&self) -> Self {
        let t = self.trace();
        Self::from_parts(self.elements.map(|z| z / t), 0.0)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.elements.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.elements[(i, j)] - self.elements[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue from a Hermitian eigen-solve.
    ///
    /// Entries below `1e-40 · max|ρ|` are zeroed first. Strongly graded states (entries
    /// down to 1e-190) otherwise drive the QR iteration into NaN. By Weyl's inequality the
    /// flush moves every eigenvalue by at most `dim · 1e-40 · max|ρ|`.
    pub fn min_eigenvalue(&self) -> f64 {
        let floor = 1e-40 * self.elements.iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.elements
            .map(|z| if z.norm() < floor { Complex64::new(0.0, 0.0) } else { z })
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|ρ[m][n]|` with `m − n` odd.
    pub fn odd_coherence_max(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if (i + j) % 2 == 1 {
                    worst = worst.max(self.elements[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Max-norm distance. Both matrices must have the same cutoff.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "cutoff mismatch in max_abs_diff");
        self.elements.iter().zip(other.elements.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// The `(cutoff + 1)²` leading block. The discarded diagonal is added to the tail.
    pub fn leading_block(&self, cutoff: usize) -> Result<Self> {
        if cutoff > self.cutoff() {
            return Err(Error::InvalidArgument(format!(
                "block cutoff {cutoff} exceeds matrix cutoff {}",
                self.cutoff()
            )));
        }
        let dropped: f64 = (cutoff + 1..self.dim()).map(|k| self.elements[(k, k)].re).sum();
        let block = self.elements.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned();
        Ok(Self::from_parts(block, self.tail + dropped))
    }

    /// Checks Hermiticity, positivity and `trace + tail = 1` within `trace_tol`.
    pub fn validate(&self, trace_tol: f64) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < POSITIVITY_TOL {
            return Err(Error::PositivityLoss { min_eigenvalue: min_eig, threshold: POSITIVITY_TOL });
        }
        let bookkeeping = (self.trace() + self.tail - 1.0).abs();
        if bookkeeping > trace_tol {
            return Err(Error::InvalidState(format!("trace + tail differs from 1 by {bookkeeping:e}")));
        }
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be finite and non-negative, got {lambda}")));
    }
    Ok(())
}

/// `ln |c_{2k}|²` for the squeezed vacuum, `c_{2k} = sech^{1/2}λ √((2k)!)/(2^k k!) tanh^k λ`.
fn ln_squeezed_population(lambda: f64, k: usize) -> f64 {
    if k == 0 {
        return -lambda.cosh().ln();
    }
    let ln_tanh = lambda.tanh().ln();
    -lambda.cosh().ln() + 2.0 * k as f64 * ln_tanh + log_factorial(2 * k)
        - 2.0 * k as f64 * std::f64::consts::LN_2
        - 2.0 * log_factorial(k)
}

/// Population of the squeezed vacuum above `cutoff`, summed directly (not `1 − Σ`).
pub fn squeezed_tail(lambda: f64, cutoff: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let mut terms = Vec::new();
    let mut k = cutoff / 2 + 1;
    loop {
        let t = ln_squeezed_population(lambda, k);
        terms.push(t);
        // Successive ratios approach tanh²λ < 1; stop once the remainder is negligible.
        if t < terms[0] - 80.0 || t < -745.0 || terms.len() > 200_000 {
            break;
        }
        k += 1;
    }
    log_sum_exp(&terms).exp()
}

/// Smallest even cutoff (at least 16) whose squeezed-vacuum tail is `≤ max_tail`.
pub fn cutoff_for_tail(lambda: f64, max_tail: f64) -> usize {
    let mut cutoff = 16;
    while squeezed_tail(lambda, cutoff) > max_tail {
        cutoff += 2;
    }
    cutoff
}

/// Default oracle cutoff: at least [`DEFAULT_CUTOFF`], grown until the tail is below
/// [`ADAPTIVE_TAIL`]. Refused above [`LAMBDA_GUARD`].
pub fn default_cutoff(lambda: f64) -> Result<usize> {
    check_lambda(lambda)?;
    if lambda > LAMBDA_GUARD {
        return Err(Error::LambdaAboveGuard { lambda, guard: LAMBDA_GUARD });
    }
    Ok(cutoff_for_tail(lambda, ADAPTIVE_TAIL).max(DEFAULT_CUTOFF))
}

/// Fock amplitudes of the squeezed vacuum up to `cutoff` (log-domain evaluation).
pub fn squeezed_vacuum_amplitudes(lambda: f64, cutoff: usize) -> Vec<f64> {
    let mut amps = vec![0.0; cutoff + 1];
    for k in 0..=cutoff / 2 {
        amps[2 * k] = if lambda == 0.0 {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (0.5 * ln_squeezed_population(lambda, k)).exp()
        };
    }
    amps
}

/// Squeezed vacuum `sech^{1/2}λ Σ_k √((2k)!)/(2^k k!) tanh^k λ |2k⟩`, truncated at `cutoff`.
///
/// Fails with [`Error::CutoffTooSmall`] if more than [`DEFAULT_MAX_TAIL`] of the
/// population lies above the cutoff.
pub fn squeezed_vacuum(lambda: f64, cutoff: usize) -> Result<FockDensityMatrix> {
    squeezed_vacuum_with_max_tail(lambda, cutoff, DEFAULT_MAX_TAIL)
}

/// [`squeezed_vacuum`] with an explicit tail budget.
pub fn squeezed_vacuum_with_max_tail(lambda: f64, cutoff: usize, max_tail: f64) -> Result<FockDensityMatrix> {
    check_lambda(lambda)?;
    if cutoff < 2 || !cutoff.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("cutoff must be even and at least 2, got {cutoff}")));
    }
    let tail = squeezed_tail(lambda, cutoff);
    if tail > max_tail {
        return Err(Error::CutoffTooSmall { lambda, cutoff, tail, max_tail });
    }
    let amps: Vec<Complex64> =
        squeezed_vacuum_amplitudes(lambda, cutoff).into_iter().map(|a| Complex64::new(a, 0.0)).collect();
    Ok(FockDensityMatrix::pure(&amps).with_tail(tail))
}

/// `⟨a†a⟩ = Σ n ρ[n][n]`.
pub fn expect_number(rho: &FockDensityMatrix) -> f64 {
    rho.diagonal().iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

/// `Tr ρ²`.
pub fn purity(rho: &FockDensityMatrix) -> f64 {
    // Tr(ρρ) = Σ_{mn} ρ[m][n] ρ[n][m] = Σ |ρ[m][n]|² for Hermitian ρ.
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨a⟩`.
pub fn expect_a(rho: &FockDensityMatrix) -> Complex64 {
    // Tr(ρa) = Σ_n √n ρ[n][n−1]
    (1..rho.dim()).map(|n| rho.get(n, n - 1) * (n as f64).sqrt()).sum()
}

/// `⟨a²⟩`.
pub fn expect_a_squared(rho: &FockDensityMatrix) -> Complex64 {
    (2..rho.dim()).map(|n| rho.get(n, n - 2) * ((n * (n - 1)) as f64).sqrt()).sum()
}

/// Variance of `X_θ = (a e^{−iθ} + a† e^{iθ})/√2`.
pub fn quadrature_variance(rho: &FockDensityMatrix, theta: f64) -> f64 {
    let phase = Complex64::from_polar(1.0, -theta);
    let a = expect_a(rho);
    let a2 = expect_a_squared(rho);
    let n = expect_number(rho);
    let mean = std::f64::consts::SQRT_2 * (a * phase).re;
    let second = (2.0 * (a2 * phase * phase).re + 2.0 * n + 1.0) / 2.0;
    second - mean * mean
}
