//! The amplitude-damping channel on a truncated Fock space.
//!
//! Two unrelated numerical routes to `ρ(κt)`:
//!
//! - the operator sum `ρ = Σ_n M_n ρ₀ M_n†` with
//!   `M_n = √(T′ⁿ/n!) e^{−κt a†a} aⁿ`, `T′ = 1 − e^{−2κt}`;
//! - fixed-step RK4 integration of `dρ/ds = 2aρa† − a†aρ − ρa†a`, `s = κt`.
//!
//! Both act exactly on the truncated space: photons are only ever removed, so no
//! population leaks through the cutoff, and `M_n = 0` for `n > cutoff` makes the
//! family finite with no truncation of the sum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::FockDensityMatrix;
use crate::specfun::log_factorial;

/// Minimum eigenvalue below which an RK4 result is rejected.
pub const RK4_POSITIVITY_TOL: f64 = -1e-8;

/// Step used when the caller has no preference.
pub const DEFAULT_RK4_STEP: f64 = 1e-3;

/// One Kraus operator, stored by its only non-zero band: `⟨m|M_n|m+n⟩ = coeffs[m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausOperator {
    shift: usize,
    coeffs: Vec<f64>,
}

impl KrausOperator {
    /// The photon number `n` removed by this operator.
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `⟨row|M_n|col⟩`.
    pub fn element(&self, row: usize, col: usize) -> f64 {
        if col == row + self.shift {
            self.coeffs.get(row).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }

    pub fn to_dense(&self, dim: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(dim, dim);
        for (row, c) in self.coeffs.iter().enumerate() {
            if row + self.shift < dim {
                m[(row, row + self.shift)] = Complex64::new(*c, 0.0);
            }
        }
        m
    }
}

/// `M_0 … M_N` for a given `κt` on the space with cutoff `N`.
#[derive(Debug, Clone)]
pub struct KrausFamily {
    kappa_t: f64,
    t_prime: f64,
    cutoff: usize,
    operators: Vec<KrausOperator>,
}

fn check_kappa_t(kappa_t: f64) -> Result<()> {
    if !(kappa_t >= 0.0 && kappa_t.is_finite()) {
        return Err(Error::InvalidArgument(format!("kappa_t must be finite and non-negative, got {kappa_t}")));
    }
    Ok(())
}

/// `T′ = 1 − e^{−2κt}`, computed without cancellation at small `κt`.
pub fn t_prime(kappa_t: f64) -> f64 {
    -(-2.0 * kappa_t).exp_m1()
}

impl KrausFamily {
    pub fn new(kappa_t: f64, cutoff: usize) -> Result<Self> {
        check_kappa_t(kappa_t)?;
        let tp = t_prime(kappa_t);
        let ln_tp = tp.ln();
        let operators = (0..=cutoff)
            .map(|n| {
                let coeffs = (0..=cutoff - n)
                    .map(|m| {
                        if n == 0 {
                            return (-kappa_t * m as f64).exp();
                        }
                        if tp == 0.0 {
                            return 0.0;
                        }
                        // √(T′ⁿ/n!) e^{−κt m} √((m+n)!/m!)
                        (0.5 * (n as f64 * ln_tp - log_factorial(n)) - kappa_t * m as f64
                            + 0.5 * (log_factorial(m + n) - log_factorial(m)))
                        .exp()
                    })
                    .collect();
                KrausOperator { shift: n, coeffs }
            })
            .collect();
        Ok(Self { kappa_t, t_prime: tp, cutoff, operators })
    }

    pub fn kappa_t(&self) -> f64 {
        self.kappa_t
    }

    pub fn t_prime(&self) -> f64 {
        self.t_prime
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[KrausOperator] {
        &self.operators
    }

    pub fn operator(&self, n: usize) -> &KrausOperator {
        &self.operators[n]
    }

    /// `Σ_n M_n† M_n`, accumulated from the bands.
    pub fn completeness_sum(&self) -> DMatrix<Complex64> {
        let dim = self.cutoff + 1;
        let mut sum = DMatrix::zeros(dim, dim);
        for op in &self.operators {
            // (M†M)[k][k] = |⟨k−n|M_n|k⟩|², everything else vanishes
            for (row, c) in op.coeffs.iter().enumerate() {
                sum[(row + op.shift, row + op.shift)] += Complex64::new(c * c, 0.0);
            }
        }
        sum
    }

    /// `‖Σ_n M_n† M_n − I‖_max`.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.completeness_sum();
        let dim = self.cutoff + 1;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((sum[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// `Σ_n M_n ρ M_n†`. Rows are computed independently and each sum runs in
    /// increasing `n`, so the result is bit-reproducible.
    pub fn apply(&self, rho: &FockDensityMatrix) -> Result<FockDensityMatrix> {
        if rho.cutoff() != self.cutoff {
            return Err(Error::InvalidArgument(format!(
                "state cutoff {} does not match Kraus family cutoff {}",
                rho.cutoff(),
                self.cutoff
            )));
        }
        let dim = self.cutoff + 1;
        let input = rho.matrix();
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|m| {
                (0..dim)
                    .map(|mp| {
                        let top = dim - m.max(mp);
                        let mut acc = Complex64::new(0.0, 0.0);
                        for op in &self.operators[..top] {
                            let n = op.shift;
                            acc += input[(m + n, mp + n)] * (op.coeffs[m] * op.coeffs[mp]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let out = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
        Ok(FockDensityMatrix::from_parts(out, rho.tail()))
    }
}

/// Kraus family for `κt` on a space with the given cutoff.
pub fn kraus_family(kappa_t: f64, cutoff: usize) -> Result<KrausFamily> {
    KrausFamily::new(kappa_t, cutoff)
}

/// `ρ(κt) = Σ_n M_n ρ₀ M_n†`.
pub fn apply_channel(rho0: &FockDensityMatrix, kappa_t: f64) -> Result<FockDensityMatrix> {
    KrausFamily::new(kappa_t, rho0.cutoff())?.apply(rho0)
}

/// Right-hand side `2aρa† − a†aρ − ρa†a` of the master equation (κ = 1).
pub fn lindblad_generator(rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    DMatrix::from_fn(dim, dim, |m, n| {
        // (aρa†)[m][n] = √((m+1)(n+1)) ρ[m+1][n+1]
        let gain = if m + 1 < dim && n + 1 < dim {
            rho[(m + 1, n + 1)] * (2.0 * (((m + 1) * (n + 1)) as f64).sqrt())
        } else {
            Complex64::new(0.0, 0.0)
        };
        gain - rho[(m, n)] * ((m + n) as f64)
    })
}

/// Classic RK4 from `s = 0` to `s = kappa_t`. The step is shrunk so an integer number of
/// steps lands exactly on `kappa_t`. No positivity check.
pub fn lindblad_rk4_unchecked(rho0: &FockDensityMatrix, kappa_t: f64, dt: f64) -> Result<FockDensityMatrix> {
    check_kappa_t(kappa_t)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("RK4 step must be positive, got {dt}")));
    }
    let steps = (kappa_t / dt - 1e-9).ceil().max(0.0) as usize;
    let mut rho = rho0.matrix().clone();
    if steps > 0 {
        let h = kappa_t / steps as f64;
        for _ in 0..steps {
            let k1 = lindblad_generator(&rho);
            let k2 = lindblad_generator(&(&rho + &k1 * Complex64::new(0.5 * h, 0.0)));
            let k3 = lindblad_generator(&(&rho + &k2 * Complex64::new(0.5 * h, 0.0)));
            let k4 = lindblad_generator(&(&rho + &k3 * Complex64::new(h, 0.0)));
            let incr = (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
                * Complex64::new(h / 6.0, 0.0);
            rho += incr;
        }
    }
    Ok(FockDensityMatrix::from_parts(rho, rho0.tail()))
}

/// RK4 integration of the master equation; rejects results whose minimum eigenvalue
/// falls below [`RK4_POSITIVITY_TOL`] (step too large for the cutoff).
pub fn lindblad_rk4(rho0: &FockDensityMatrix, kappa_t: f64, dt: f64) -> Result<FockDensityMatrix> {
    let rho = lindblad_rk4_unchecked(rho0, kappa_t, dt)?;
    let min_eig = rho.min_eigenvalue();
    if !(min_eig >= RK4_POSITIVITY_TOL) {
        return Err(Error::PositivityLoss { min_eigenvalue: min_eig, threshold: RK4_POSITIVITY_TOL });
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expect_number, purity, squeezed_vacuum, squeezed_vacuum_with_max_tail};
    use approx::assert_relative_eq;

    #[test]
    fn identity_at_zero_time() {
        let fam = kraus_family(0.0, 12).unwrap();
        assert_eq!(fam.len(), 13);
        assert_eq!(fam.t_prime(), 0.0);
        assert!(fam.operator(0).coeffs().iter().all(|c| *c == 1.0));
        for op in &fam.operators()[1..] {
            assert!(op.coeffs().iter().all(|c| *c == 0.0));
        }
        let rho = squeezed_vacuum(0.8, 64).unwrap();
        assert_eq!(apply_channel(&rho, 0.0).unwrap(), rho);
    }

    #[test]
    fn element_formula() {
        let fam = kraus_family(0.5, 8).unwrap();
        let tp = 1.0 - (-1.0f64).exp();
        assert_relative_eq!(fam.t_prime(), tp, max_relative = 1e-15);
        assert_relative_eq!(fam.operator(1).element(0, 1), tp.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(fam.operator(1).element(0, 1), 0.795060, epsilon = 1e-6);
        // ⟨2|M_3|5⟩ = √(T′³/3!) e^{−2κt} √(5!/2!)
        let expected = (tp.powi(3) / 6.0).sqrt() * (-1.0f64).exp() * (60.0f64).sqrt();
        assert_relative_eq!(fam.operator(3).element(2, 5), expected, max_relative = 1e-14);
        assert_eq!(fam.operator(3).element(2, 4), 0.0);
    }

    #[test]
    fn completeness_is_exact_on_truncated_space() {
        let fam = kraus_family(0.3, 32).unwrap();
        assert!(fam.completeness_defect() <= 1e-12);
        // the same sum through dense matrix products
        let dim = 33;
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for op in fam.operators() {
            let m = op.to_dense(dim);
            sum += m.adjoint() * &m;
        }
        let defect = (sum - DMatrix::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(defect <= 1e-12, "{defect}");
    }

    #[test]
    fn long_time_limit_is_vacuum() {
        let rho = squeezed_vacuum(1.0, 64).unwrap();
        let out = apply_channel(&rho, 10.0).unwrap();
        let vac = FockDensityMatrix::vacuum(64);
        assert!(out.max_abs_diff(&vac) <= 1e-7);
    }

    #[test]
    fn vacuum_weight_after_half_unit() {
        let rho = squeezed_vacuum(1.0, 64).unwrap();
        let out = apply_channel(&rho, 0.5).unwrap();
        // sech λ / √(1 − T′² tanh² λ)
        let tp = 1.0 - (-1.0f64).exp();
        let w = 1.0 / 1f64.cosh() / (1.0 - tp * tp * 1f64.tanh().powi(2)).sqrt();
        assert_relative_eq!(out.get(0, 0).re, w, epsilon = 1e-8);
        assert_relative_eq!(out.get(0, 0).re, 0.739374, epsilon = 1e-6);
        let p = purity(&out);
        assert!(p > 0.0 && p < 1.0 - 1e-3, "purity {p}");
        assert!(out.odd_coherence_max() == 0.0);
        out.validate(1e-12).unwrap();
    }

    #[test]
    fn trace_and_number_decay() {
        let rho = squeezed_vacuum(0.9, 64).unwrap();
        for kt in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let out = apply_channel(&rho, kt).unwrap();
            assert!((out.trace() - rho.trace()).abs() <= 1e-12);
            assert_relative_eq!(expect_number(&out), (-2.0 * kt).exp() * expect_number(&rho), epsilon = 1e-10);
        }
    }

    #[test]
    fn rk4_agrees_with_kraus() {
        let rho = squeezed_vacuum_with_max_tail(1.0, 64, 1e-6).unwrap();
        let kraus = apply_channel(&rho, 0.5).unwrap();
        let rk4 = lindblad_rk4(&rho, 0.5, 1e-3).unwrap();
        assert!(kraus.max_abs_diff(&rk4) <= 1e-8, "{}", kraus.max_abs_diff(&rk4));
        assert!((rk4.trace() - rho.trace()).abs() <= 1e-10);
        assert_eq!(lindblad_rk4(&rho, 0.0, 1e-3).unwrap(), rho);
    }

    #[test]
    fn rk4_rejects_bad_step_and_flags_instability() {
        let rho = squeezed_vacuum(0.5, 32).unwrap();
        assert!(lindblad_rk4(&rho, 0.5, 0.0).is_err());
        assert!(lindblad_rk4(&rho, -1.0, 1e-3).is_err());
        // dt·(2N) far outside the RK4 stability region
        let r = lindblad_rk4(&squeezed_vacuum_with_max_tail(1.0, 64, 1e-6).unwrap(), 1.0, 0.1);
        assert!(matches!(r, Err(Error::PositivityLoss { .. })), "{r:?}");
    }

    #[test]
    fn cutoff_mismatch_is_rejected() {
        let fam = kraus_family(0.2, 8).unwrap();
        assert!(fam.apply(&FockDensityMatrix::vacuum(10)).is_err());
    }
}
