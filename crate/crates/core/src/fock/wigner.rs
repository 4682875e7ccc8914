//! Wigner function of a truncated density matrix by quadrature of the coherent-state
//! integral
//!
//! ```text
//! W(α) = e^{2|α|²} ∫ d²β/π² ⟨−β|ρ|β⟩ e^{−2(βα* − β*α)}.
//! ```
//!
//! Under this convention `∫ d²α W = 1/2` and the vacuum peaks at `1/π`.
//!
//! Evaluated as written, the `e^{2|α|²}` prefactor multiplies round-off in an
//! oscillatory integral; at `|α|² = 18` that is a factor `4·10¹⁵`. The default path
//! therefore uses the displaced but equal form
//!
//! ```text
//! W(α) = ∫ d²γ/π² e^{αγ* − α*γ} ⟨2α − γ|ρ|γ⟩,
//! ```
//!
//! whose integrand is bounded by `√Q(γ)` (Husimi function), so absolute errors stay at
//! the round-off level everywhere. [`wigner_numeric_direct`] keeps the literal form for
//! cross-checks at small `|α|`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::FockDensityMatrix;
use crate::error::{Error, Result};
use crate::specfun::{log_factorial, TensorRule};

/// Largest imaginary part tolerated in a Wigner value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;
/// Agreement required between the automatic rule and its 2× refinement.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Husimi level that bounds the integration box.
const HUSIMI_FLOOR: f64 = 1e-22;

/// `⟨n|γ⟩ = e^{−|γ|²/2} γⁿ/√n!` for `n ≤ cutoff`.
fn coherent_ket(gamma: Complex64, dim: usize, out: &mut [Complex64]) {
    let mut v = Complex64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    out[0] = v;
    for (n, slot) in out.iter_mut().enumerate().take(dim).skip(1) {
        v = v * gamma / (n as f64).sqrt();
        *slot = v;
    }
}

/// Husimi function `Q(γ) = ⟨γ|ρ|γ⟩`.
pub fn husimi(rho: &FockDensityMatrix, gamma: Complex64) -> f64 {
    let dim = rho.dim();
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    coherent_ket(gamma, dim, &mut v);
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..dim {
            row += m[(i, j)] * v[j];
        }
        acc += v[i].conj() * row;
    }
    acc.re
}

/// Half-widths `(rx, ry)` of a box outside which `Q < 1e−22`, found by scanning rays.
/// Outside it the displaced integrand is below `√Q = 1e−11`. A lower floor would chase
/// the Husimi signal of the truncation edge, `Q ~ ρ_NN` near `|γ|² ≈ N`.
pub fn integration_box(rho: &FockDensityMatrix) -> (f64, f64) {
    let r_max = (2.0 * rho.dim() as f64).sqrt() + 12.0;
    let step = 0.25;
    let rays = 32;
    let extents: Vec<(f64, f64)> = (0..rays)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / rays as f64;
            let dir = Complex64::from_polar(1.0, theta);
            let mut outer = 0.0;
            let mut r = 0.0;
            while r <= r_max {
                if husimi(rho, dir * r) >= HUSIMI_FLOOR {
                    outer = r;
                }
                r += step;
            }
            ((outer * dir.re).abs(), (outer * dir.im).abs())
        })
        .collect();
    let rx = extents.iter().map(|e| e.0).fold(0.0, f64::max);
    let ry = extents.iter().map(|e| e.1).fold(0.0, f64::max);
    (rx + 1.5, ry + 1.5)
}

fn nodes_for(half_width: f64) -> usize {
    (8.0 * half_width).ceil() as usize + 16
}

/// Nodes whose contribution is provably below this are dropped: `|⟨z|ρ|γ⟩| ≤ ‖ρ|γ⟩‖`.
const PRUNE_BOUND: f64 = 1e-18;

/// `e^{−|u|²/2} Σ_m u^m k_m` by Horner's rule; with `k_m = ⟨m|ρ|γ⟩/√m!` this is `⟨u*|ρ|γ⟩`.
fn horner_overlap(u: Complex64, scaled: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in scaled.iter().rev() {
        acc = acc * u + k;
    }
    acc * (-0.5 * u.norm_sqr()).exp()
}

/// Precomputed `ρ|γ_j⟩` on a Gauss–Legendre tensor grid; evaluates the Wigner
/// function at any number of points for `O(nodes · cutoff)` each.
#[derive(Debug, Clone)]
pub struct WignerQuadrature {
    /// Retained nodes and weights.
    points: Vec<(Complex64, f64)>,
    /// `⟨m|ρ|γ_j⟩/√m!`, row-major by node.
    kets: Vec<Complex64>,
    dim: usize,
    shape: (f64, usize, f64, usize),
}

impl WignerQuadrature {
    /// Box from the Husimi extent, roughly eight nodes per unit length.
    pub fn new(rho: &FockDensityMatrix) -> Self {
        let (rx, ry) = integration_box(rho);
        Self::with_rule(rho, rx, nodes_for(rx), ry, nodes_for(ry))
    }

    pub fn with_rule(rho: &FockDensityMatrix, rx: f64, nx: usize, ry: f64, ny: usize) -> Self {
        let rule = TensorRule::new(rx, nx, ry, ny);
        let all = rule.points();
        let dim = rho.dim();
        let m = rho.matrix();
        let inv_sqrt_fact: Vec<f64> = (0..dim).map(|n| (-0.5 * log_factorial(n)).exp()).collect();
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        // ρ·[|γ_j⟩ …] as dense products over column blocks
        let blocks: Vec<(Vec<(Complex64, f64)>, Vec<Complex64>)> = all
            .par_chunks(KET_BLOCK)
            .map(|chunk| {
                let mut v = DMatrix::<Complex64>::zeros(dim, chunk.len());
                for (c, (gamma, _)) in chunk.iter().enumerate() {
                    coherent_ket(*gamma, dim, v.column_mut(c).as_mut_slice());
                }
                let prod = m * v;
                let mut points = Vec::new();
                let mut kets = Vec::new();
                for (c, p) in chunk.iter().enumerate() {
                    let col = prod.column(c);
                    if p.1 * col.norm() / pi2 >= PRUNE_BOUND {
                        points.push(*p);
                        kets.extend(col.iter().zip(&inv_sqrt_fact).map(|(k, f)| k * *f));
                    }
                }
                (points, kets)
            })
            .collect();
        let mut points = Vec::new();
        let mut kets = Vec::new();
        for (p, k) in blocks {
            points.extend(p);
            kets.extend(k);
        }
        Self { points, kets, dim, shape: (rx, nx, ry, ny) }
    }

    /// Same box, `factor` times the nodes along each axis.
    pub fn refined(&self, rho: &FockDensityMatrix, factor: usize) -> Self {
        let (rx, nx, ry, ny) = self.shape;
        Self::with_rule(rho, rx, nx * factor, ry, ny * factor)
    }

    /// `(rx, nx, ry, ny)` of the tensor rule.
    pub fn shape(&self) -> (f64, usize, f64, usize) {
        self.shape
    }

    /// Number of nodes kept after pruning.
    pub fn active_nodes(&self) -> usize {
        self.points.len()
    }

    fn ket(&self, j: usize) -> &[Complex64] {
        &self.kets[j * self.dim..(j + 1) * self.dim]
    }

    /// Complex value of the displaced integral; the imaginary part is quadrature residue.
    pub fn eval_complex(&self, alpha: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (gamma, w)) in self.points.iter().enumerate() {
            // ⟨z|ρ|γ⟩ with z = 2α − γ
            let overlap = horner_overlap((2.0 * alpha - gamma).conj(), self.ket(j));
            let phase = Complex64::new(0.0, 2.0 * (alpha * gamma.conj()).im).exp();
            acc += overlap * phase * *w;
        }
        acc / (std::f64::consts::PI * std::f64::consts::PI)
    }

    /// The literal `e^{2|α|²}`-weighted integral on the same nodes.
    pub fn eval_direct_complex(&self, alpha: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (beta, w)) in self.points.iter().enumerate() {
            // ⟨−β|ρ|β⟩
            let overlap = horner_overlap(-beta.conj(), self.ket(j));
            let kernel = (-2.0 * (beta * alpha.conj() - beta.conj() * alpha)).exp();
            acc += overlap * kernel * *w;
        }
        acc * (2.0 * alpha.norm_sqr()).exp() / (std::f64::consts::PI * std::f64::consts::PI)
    }

    pub fn eval(&self, alpha: Complex64) -> Result<f64> {
        real_part(self.eval_complex(alpha))
    }

    /// Values at many points, evaluated in parallel; output order matches `alphas`.
    /// Points are processed in groups of four that share each pass over the nodes.
    pub fn eval_many(&self, alphas: &[Complex64]) -> Result<Vec<f64>> {
        let values: Vec<Complex64> = alphas.par_chunks(BATCH).flat_map_iter(|chunk| self.eval_batch(chunk)).collect();
        values.into_iter().map(real_part).collect()
    }

    fn eval_batch(&self, alphas: &[Complex64]) -> Vec<Complex64> {
        let n = alphas.len();
        let mut a = [Complex64::new(0.0, 0.0); BATCH];
        a[..n].copy_from_slice(alphas);
        let mut acc = [Complex64::new(0.0, 0.0); BATCH];
        for (j, (gamma, w)) in self.points.iter().enumerate() {
            let u: [Complex64; BATCH] = std::array::from_fn(|b| (2.0 * a[b] - gamma).conj());
            let mut h = [Complex64::new(0.0, 0.0); BATCH];
            for k in self.ket(j).iter().rev() {
                for b in 0..BATCH {
                    h[b] = h[b] * u[b] + k;
                }
            }
            for b in 0..BATCH {
                let phase = Complex64::new(0.0, 2.0 * (a[b] * gamma.conj()).im).exp();
                acc[b] += h[b] * (-0.5 * u[b].norm_sqr()).exp() * phase * *w;
            }
        }
        let norm = std::f64::consts::PI * std::f64::consts::PI;
        acc[..n].iter().map(|v| v / norm).collect()
    }
}

const BATCH: usize = 4;
const KET_BLOCK: usize = 1024;

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue { residue: z.im.abs() });
    }
    Ok(z.re)
}

fn converged(coarse: Complex64, fine: Complex64) -> Result<Complex64> {
    let delta = (fine - coarse).norm();
    if delta > CONVERGENCE_TOL {
        return Err(Error::QuadratureNotConverged { delta, tol: CONVERGENCE_TOL });
    }
    Ok(fine)
}

/// Wigner value (integral-1/2 convention) at one point, with a 2× node refinement check.
pub fn wigner_numeric(rho: &FockDensityMatrix, alpha: Complex64) -> Result<f64> {
    let quad = WignerQuadrature::new(rho);
    let fine = quad.refined(rho, 2);
    real_part(converged(quad.eval_complex(alpha), fine.eval_complex(alpha))?)
}

/// As [`wigner_numeric`] but through the literal `e^{2|α|²}` integrand. Loses about
/// `2|α|²/ln 10` digits; intended for `|α| ≲ 2`.
pub fn wigner_numeric_direct(rho: &FockDensityMatrix, alpha: Complex64) -> Result<f64> {
    let quad = WignerQuadrature::new(rho);
    let fine = quad.refined(rho, 2);
    real_part(converged(quad.eval_direct_complex(alpha), fine.eval_direct_complex(alpha))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::squeezed_vacuum;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn horner_matches_coherent_amplitudes() {
        // ⟨u|k⟩ = e^{-|u|²/2} Σ ū^m k_m/√m!, with k̃_m = k_m/√m! and the conjugate taken by the caller
        let k: Vec<Complex64> = (0..12).map(|m| Complex64::new(1.0 / (m + 1) as f64, 0.3 * m as f64 - 1.0)).collect();
        let scaled: Vec<Complex64> = k.iter().enumerate().map(|(m, z)| z / (0.5 * log_factorial(m)).exp()).collect();
        let u = Complex64::new(0.8, -1.1);
        let explicit: Complex64 = k
            .iter()
            .enumerate()
            .map(|(m, z)| z * u.powu(m as u32) * (-0.5 * u.norm_sqr() - 0.5 * log_factorial(m)).exp())
            .sum();
        let h = horner_overlap(u, &scaled);
        assert_relative_eq!(h.re, explicit.re, epsilon = 1e-13);
        assert_relative_eq!(h.im, explicit.im, epsilon = 1e-13);
    }

    #[test]
    fn vacuum_peak_is_one_over_pi() {
        let vac = FockDensityMatrix::vacuum(4);
        let w = wigner_numeric(&vac, Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(w, 1.0 / PI, epsilon = 1e-12);
        let a = Complex64::new(0.7, -0.4);
        assert_relative_eq!(wigner_numeric(&vac, a).unwrap(), (-2.0 * a.norm_sqr()).exp() / PI, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_integrates_to_one_half() {
        let vac = FockDensityMatrix::vacuum(4);
        let quad = WignerQuadrature::new(&vac);
        let rule = TensorRule::square(5.0, 48);
        let total = rule.integrate(|a| Complex64::new(quad.eval(a).unwrap(), 0.0));
        assert_relative_eq!(total.re, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn squeezed_vacuum_matches_initial_closed_form() {
        let rho = squeezed_vacuum(1.0, 128).unwrap();
        let w = wigner_numeric(&rho, Complex64::new(1.0, 0.0)).unwrap();
        // (1/π) exp[−2|α|² cosh 2λ + (α*² + α²) sinh 2λ] at α = 1, λ = 1
        let oracle = (-2.0 * 2f64.cosh() + 2.0 * 2f64.sinh()).exp() / PI;
        assert_relative_eq!(oracle, (-2.0 * (-2f64).exp()).exp() / PI, max_relative = 1e-14);
        assert_relative_eq!(w, oracle, epsilon = 1e-9);
        assert_relative_eq!(w, 0.242828, epsilon = 1e-6);
    }

    #[test]
    fn direct_and_displaced_forms_agree_near_origin() {
        let rho = squeezed_vacuum(0.6, 64).unwrap();
        let quad = WignerQuadrature::new(&rho);
        for a in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.3), Complex64::new(-1.0, 0.8)] {
            let direct = quad.eval_direct_complex(a);
            let displaced = quad.eval_complex(a);
            assert!((direct - displaced).norm() < 1e-9, "α={a}: {direct} vs {displaced}");
        }
    }

    #[test]
    fn number_state_has_negative_origin() {
        // |1⟩ in this convention: W(0) = −1/π
        let one = FockDensityMatrix::number_state(1, 6).unwrap();
        assert_relative_eq!(wigner_numeric(&one, Complex64::new(0.0, 0.0)).unwrap(), -1.0 / PI, epsilon = 1e-11);
    }

    #[test]
    fn box_tracks_squeezing_axis() {
        let rho = squeezed_vacuum(1.0, 96).unwrap();
        let (rx, ry) = integration_box(&rho);
        assert!(rx > ry, "anti-squeezed along Re γ: {rx} vs {ry}");
    }
}
