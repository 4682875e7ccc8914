//! The closed-form vs oracle validation suite behind `adc-sim validate`.

use std::collections::BTreeMap;
use std::time::Instant;

use adc_core::analytic::{
    evolved_density_matrix, evolved_params, mean_photon, photon_dist, photon_dist_adaptive, tomogram_analytic,
    trace_identity, wigner_analytic,
};
use adc_core::channel::{apply_channel, kraus_family, lindblad_rk4};
use adc_core::fock::{
    cutoff_for_tail, quadrature_variance, squeezed_tail, squeezed_vacuum_with_max_tail, tomogram_numeric,
    FockDensityMatrix, WignerQuadrature, LAMBDA_GUARD,
};
use adc_core::specfun::identities::{legendre_power_series, mehler_closed_form, mehler_partial_sum};
use adc_core::specfun::{gauss_quad_2d, legendre_p};
use adc_core::{ChannelPoint, Complex64, Error, QuadratureFrame};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::grid::GridSpec;

pub const SCHEMA: &str = "adc-validate/1";

/// Largest squeezed-vacuum tail accepted at a comparison cutoff.
pub const COMPARISON_MAX_TAIL: f64 = 1e-6;
/// Tail of the oracle input; the evolved state is compared on its leading block.
pub const ORACLE_TAIL: f64 = 1e-12;
/// Tail for states probed by frame states and coherent states far from the origin.
pub const PHASE_SPACE_TAIL: f64 = 1e-20;
pub const RK4_STEP: f64 = 1e-3;
pub const RK4_ORDER_STEPS: [f64; 3] = [0.004, 0.002, 0.001];
pub const FIG1_LAMBDAS: [f64; 5] = [0.0, 0.1, 0.3, 0.5, 1.0];
pub const FIG_KAPPA_TS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const RANDOM_SEED: u64 = 0x5eed_adc1;

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `value ≤ tolerance`
    AtMost,
    /// `value ≥ tolerance`
    AtLeast,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub criterion: u32,
    /// `None` when the computation itself failed; see `error`.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportConfig {
    pub lambdas: Vec<f64>,
    pub kappa_ts: Vec<f64>,
    pub cutoffs: Vec<usize>,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub schema: &'static str,
    pub passed: bool,
    pub elapsed_seconds: f64,
    pub config: ReportConfig,
    pub checks: BTreeMap<String, Check>,
    /// Diagnostics that are reported but not judged.
    pub info: BTreeMap<String, f64>,
}

impl Report {
    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, c)| !c.passed).map(|(k, _)| k.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (name, c) in &self.checks {
            let op = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            let value = c.value.map_or_else(|| "error".to_string(), |v| format!("{v:.3e}"));
            s.push_str(&format!(
                "{} [{:>2}] {name}: {value} {op} {:.1e}{}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.criterion,
                c.tolerance,
                c.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
            ));
        }
        s.push_str(&format!(
            "{} checks, {} failed, {:.1} s\n",
            self.checks.len(),
            self.failed_checks().len(),
            self.elapsed_seconds
        ));
        s
    }
}

#[derive(Default)]
struct Recorder {
    checks: BTreeMap<String, Check>,
    info: BTreeMap<String, f64>,
}

impl Recorder {
    fn record(&mut self, name: &str, criterion: u32, bound: Bound, tolerance: f64, value: Result<f64, Error>) {
        let check = match value {
            Ok(v) => {
                let passed = match bound {
                    Bound::AtMost => v <= tolerance,
                    Bound::AtLeast => v >= tolerance,
                };
                Check { criterion, value: Some(v), tolerance, bound, passed, error: None }
            }
            Err(e) => Check { criterion, value: None, tolerance, bound, passed: false, error: Some(e.to_string()) },
        };
        self.checks.insert(name.to_string(), check);
    }

    fn at_most(&mut self, name: &str, criterion: u32, tolerance: f64, value: Result<f64, Error>) {
        self.record(name, criterion, Bound::AtMost, tolerance, value);
    }

    fn at_least(&mut self, name: &str, criterion: u32, tolerance: f64, value: Result<f64, Error>) {
        self.record(name, criterion, Bound::AtLeast, tolerance, value);
    }

    /// A property that must hold everywhere; the value is the number of violations.
    fn holds(&mut self, name: &str, criterion: u32, violations: usize) {
        self.at_most(name, criterion, 0.0, Ok(violations as f64));
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn point(lambda: f64, kappa_t: f64) -> ChannelPoint {
    ChannelPoint::new(lambda, kappa_t).expect("grid values are validated up front")
}

fn pairs(lambdas: &[f64], kappa_ts: &[f64]) -> Vec<(f64, f64)> {
    lambdas.iter().flat_map(|&l| kappa_ts.iter().map(move |&k| (l, k))).collect()
}

/// Cutoff at which the closed form is compared with the oracles: 64, doubled until the
/// truncated squeezed vacuum misses less than [`COMPARISON_MAX_TAIL`].
pub fn comparison_cutoff(lambda: f64) -> usize {
    let mut cutoff = 64;
    while squeezed_tail(lambda, cutoff) > COMPARISON_MAX_TAIL {
        cutoff *= 2;
    }
    cutoff
}

/// Per-λ comparison cutoffs, checked against the guards before anything is computed.
pub fn resolve_cutoffs(cfg: &RunConfig) -> CliResult<Vec<usize>> {
    cfg.lambdas
        .iter()
        .map(|&lambda| {
            if lambda > LAMBDA_GUARD {
                return Err(Error::LambdaAboveGuard { lambda, guard: LAMBDA_GUARD }.into());
            }
            let cutoff = cfg.cutoff.unwrap_or_else(|| comparison_cutoff(lambda));
            squeezed_vacuum_with_max_tail(lambda, cutoff, COMPARISON_MAX_TAIL)?;
            Ok(cutoff)
        })
        .collect()
}

fn oracle_input(lambda: f64, cutoff: usize) -> Result<FockDensityMatrix, Error> {
    let big = cutoff.max(cutoff_for_tail(lambda, ORACLE_TAIL));
    squeezed_vacuum_with_max_tail(lambda, big + big % 2, ORACLE_TAIL)
}

/// Kraus-evolved state on the leading `cutoff` block, from an input with tail below 1e-12.
fn kraus_reference(input: &FockDensityMatrix, kappa_t: f64, cutoff: usize) -> Result<FockDensityMatrix, Error> {
    apply_channel(input, kappa_t)?.leading_block(cutoff)
}

pub fn run_validate(cfg: &RunConfig) -> CliResult<Report> {
    let cutoffs = resolve_cutoffs(cfg)?;
    let start = Instant::now();
    let mut rec = Recorder::default();
    let grid = pairs(&cfg.lambdas, &cfg.kappa_ts);

    let groups: [(&str, &dyn Fn(&mut Recorder)); 10] = [
        ("density_matrices", &|r| check_density_matrices(cfg, &cutoffs, r)),
        ("rk4", &|r| check_rk4(cfg, &cutoffs, r)),
        ("completeness", &|r| check_completeness(cfg, &cutoffs, r)),
        ("normalization", &|r| check_normalization(cfg, r)),
        ("mean_photon", &check_mean_photon),
        ("photon_statistics", &check_photon_statistics),
        ("wigner", &check_wigner),
        ("tomogram", &check_tomogram),
        ("squeezing", &|r| check_squeezing(cfg, &grid, r)),
        ("special_functions", &check_special_functions),
    ];
    for (name, group) in groups {
        let t = Instant::now();
        group(&mut rec);
        rec.info.insert(format!("seconds_{name}"), t.elapsed().as_secs_f64());
    }

    let passed = rec.checks.values().all(|c| c.passed);
    Ok(Report {
        schema: SCHEMA,
        passed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        config: ReportConfig { lambdas: cfg.lambdas.clone(), kappa_ts: cfg.kappa_ts.clone(), cutoffs, tol: cfg.tol },
        checks: rec.checks,
        info: rec.info,
    })
}

fn check_density_matrices(cfg: &RunConfig, cutoffs: &[usize], rec: &mut Recorder) {
    let results: Vec<Result<(f64, f64), Error>> = cfg
        .lambdas
        .par_iter()
        .zip(cutoffs)
        .map(|(&lambda, &cutoff)| {
            let input = oracle_input(lambda, cutoff)?;
            let truncated = squeezed_vacuum_with_max_tail(lambda, cutoff, COMPARISON_MAX_TAIL)?;
            let mut worst = 0.0f64;
            let mut same_cutoff = 0.0f64;
            for &kt in &cfg.kappa_ts {
                let closed = evolved_density_matrix(point(lambda, kt), cutoff)?;
                worst = worst.max(closed.max_abs_diff(&kraus_reference(&input, kt, cutoff)?));
                same_cutoff = same_cutoff.max(closed.max_abs_diff(&apply_channel(&truncated, kt)?));
            }
            Ok((worst, same_cutoff))
        })
        .collect();
    let merged: Result<Vec<_>, Error> = results.into_iter().collect();
    match merged {
        Ok(v) => {
            rec.at_most("closed_form_vs_kraus_max_diff", 1, cfg.tol, Ok(max_of(v.iter().map(|x| x.0))));
            rec.info.insert("closed_form_vs_kraus_same_cutoff_max_diff".into(), max_of(v.iter().map(|x| x.1)));
        }
        Err(e) => rec.at_most("closed_form_vs_kraus_max_diff", 1, cfg.tol, Err(e)),
    }
}

/// Integrates segment by segment through the sorted κt values, so each κt is reached
/// with steps of at most `RK4_STEP`.
fn rk4_vs_kraus(lambda: f64, cutoff: usize, kappa_ts: &[f64]) -> Result<f64, Error> {
    let rho0 = squeezed_vacuum_with_max_tail(lambda, cutoff, COMPARISON_MAX_TAIL)?;
    let mut times = kappa_ts.to_vec();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut state = rho0.clone();
    let mut now = 0.0;
    let mut worst = 0.0f64;
    for kt in times {
        state = lindblad_rk4(&state, kt - now, RK4_STEP)?;
        now = kt;
        worst = worst.max(state.max_abs_diff(&apply_channel(&rho0, kt)?));
    }
    Ok(worst)
}

/// Observed order `log2(e(h)/e(h/2))` at the two finest step pairs; returns the smaller.
pub fn rk4_order(lambda: f64, cutoff: usize, kappa_t: f64) -> Result<(f64, [f64; 3]), Error> {
    let rho0 = squeezed_vacuum_with_max_tail(lambda, cutoff, COMPARISON_MAX_TAIL)?;
    let reference = apply_channel(&rho0, kappa_t)?;
    let mut errors = [0.0; 3];
    for (e, dt) in errors.iter_mut().zip(RK4_ORDER_STEPS) {
        *e = lindblad_rk4(&rho0, kappa_t, dt)?.max_abs_diff(&reference);
    }
    let order = (errors[0] / errors[1]).log2().min((errors[1] / errors[2]).log2());
    Ok((order, errors))
}

fn check_rk4(cfg: &RunConfig, cutoffs: &[usize], rec: &mut Recorder) {
    let diffs: Result<Vec<f64>, Error> = cfg
        .lambdas
        .par_iter()
        .zip(cutoffs)
        .map(|(&lambda, &cutoff)| rk4_vs_kraus(lambda, cutoff, &cfg.kappa_ts))
        .collect();
    rec.at_most("kraus_vs_rk4_max_diff", 2, cfg.tol, diffs.map(max_of));
    match rk4_order(1.0, 64, 0.5) {
        Ok((order, errors)) => {
            for (dt, e) in RK4_ORDER_STEPS.iter().zip(errors) {
                rec.info.insert(format!("rk4_error_dt_{dt}"), e);
            }
            rec.at_least("rk4_convergence_order", 2, 3.8, Ok(order));
        }
        Err(e) => rec.at_least("rk4_convergence_order", 2, 3.8, Err(e)),
    }
}

fn check_completeness(cfg: &RunConfig, cutoffs: &[usize], rec: &mut Recorder) {
    let mut sizes: Vec<usize> = vec![16, 32, 64, 128];
    sizes.extend(cutoffs.iter().copied().filter(|c| *c <= 128));
    sizes.sort_unstable();
    sizes.dedup();
    let defects: Result<Vec<f64>, Error> = pairs(&cfg.kappa_ts, &sizes.iter().map(|s| *s as f64).collect::<Vec<_>>())
        .par_iter()
        .map(|&(kt, n)| Ok(kraus_family(kt, n as usize)?.completeness_defect()))
        .collect();
    rec.at_most("kraus_completeness_max_defect", 3, 1e-12, defects.map(max_of));
}

fn check_normalization(cfg: &RunConfig, rec: &mut Recorder) {
    let mut lambdas = cfg.lambdas.clone();
    lambdas.push(0.0);
    let mut kappa_ts = cfg.kappa_ts.clone();
    kappa_ts.push(5.0);
    let grid = pairs(&lambdas, &kappa_ts);
    let trace: Result<Vec<f64>, Error> =
        grid.iter().map(|&(l, k)| trace_identity(&evolved_params(point(l, k))).map(|t| (t - 1.0).abs())).collect();
    rec.at_most("trace_identity_max_defect", 4, 1e-12, trace.map(max_of));
    let dists: Vec<_> = grid.par_iter().map(|&(l, k)| photon_dist_adaptive(point(l, k), ORACLE_TAIL)).collect();
    rec.at_most("photon_dist_sum_max_defect", 4, 1e-9, Ok(max_of(dists.iter().map(|d| d.tail.abs()))));
    rec.holds("photon_dist_negative_entries", 4, dists.iter().flat_map(|d| &d.probs).filter(|p| **p < 0.0).count());
}

fn check_mean_photon(rec: &mut Recorder) {
    let times = GridSpec { min: 0.0, max: 10.0, count: 201 }.points();
    let curves: Vec<Vec<f64>> =
        FIG1_LAMBDAS.iter().map(|&l| times.iter().map(|&k| mean_photon(point(l, k))).collect()).collect();
    let law = FIG1_LAMBDAS
        .iter()
        .zip(&curves)
        .flat_map(|(&l, c)| times.iter().zip(c).map(move |(&k, m)| (m - (-2.0 * k).exp() * l.sinh().powi(2)).abs()));
    rec.at_most("mean_photon_decay_law_max_diff", 5, 1e-12, Ok(max_of(law)));
    let mut not_decreasing = 0;
    for (&l, c) in FIG1_LAMBDAS.iter().zip(&curves) {
        for w in c.windows(2) {
            let ok = if l == 0.0 { w[1] <= w[0] } else { w[1] < w[0] };
            not_decreasing += usize::from(!ok);
        }
    }
    rec.holds("mean_photon_not_decreasing_steps", 5, not_decreasing);
    let limit = max_of(FIG1_LAMBDAS.iter().map(|&l| mean_photon(point(l, 30.0)).abs()));
    rec.at_most("mean_photon_long_time_limit", 5, 1e-12, Ok(limit));
    let mut misordered = 0;
    for i in 0..times.len() {
        for pair in curves.windows(2) {
            misordered += usize::from(pair[1][i] <= pair[0][i]);
        }
    }
    rec.holds("mean_photon_lambda_misordered", 5, misordered);
}

/// `(2k)!/(4ᵏ k!²) sech λ tanh^{2k} λ` by direct products.
fn squeezed_even_prob(k: usize, lambda: f64) -> f64 {
    let mut central = 1.0;
    for j in 1..=k {
        central *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    central / lambda.cosh() * lambda.tanh().powi(2 * k as i32)
}

fn check_photon_statistics(rec: &mut Recorder) {
    let lambda = 1.0;
    let n_max = 40;
    let initial = photon_dist(point(lambda, 0.0), n_max);
    let odd = max_of(initial.probs.iter().skip(1).step_by(2).map(|p| p.abs()));
    rec.at_most("fig2_initial_odd_max", 6, 0.0, Ok(odd));
    let even = max_of((0..=n_max / 2).map(|k| (initial.probs[2 * k] - squeezed_even_prob(k, lambda)).abs()));
    rec.at_most("fig2_initial_even_max_diff", 6, 1e-12, Ok(even));
    let diag: Result<Vec<f64>, Error> = oracle_input(lambda, 64).and_then(|input| {
        FIG_KAPPA_TS
            .par_iter()
            .map(|&kt| {
                let kraus = apply_channel(&input, kt)?;
                let dist = photon_dist(point(lambda, kt), n_max);
                Ok(max_of(dist.probs.iter().enumerate().map(|(n, p)| (p - kraus.get(n, n).re).abs())))
            })
            .collect()
    });
    rec.at_most("fig2_kraus_diagonal_max_diff", 6, 1e-8, diag.map(max_of));
}

fn check_wigner(rec: &mut Recorder) {
    let lambda = 1.0;
    let axis = GridSpec { min: -3.0, max: 3.0, count: 21 }.points();
    let alphas: Vec<Complex64> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| Complex64::new(x, y))).collect();
    let mut worst: Result<f64, Error> = Ok(0.0);
    for &kt in &FIG_KAPPA_TS {
        let p = point(lambda, kt);
        let step = evolved_density_matrix(p, cutoff_for_tail(lambda, PHASE_SPACE_TAIL)).and_then(|rho| {
            let quad = WignerQuadrature::new(&rho);
            let numeric = quad.eval_many(&alphas)?;
            Ok(max_of(numeric.iter().zip(&alphas).map(|(w, a)| (w - wigner_analytic(*a, p)).abs())))
        });
        worst = match (worst, step) {
            (Ok(a), Ok(b)) => Ok(a.max(b)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
    }
    rec.at_most("wigner_analytic_vs_numeric_max_diff", 7, 1e-6, worst);

    let coarse = GridSpec { min: -6.0, max: 6.0, count: 121 };
    let h = coarse.step();
    let pts = coarse.points();
    let coarse_defect = max_of(FIG_KAPPA_TS.iter().map(|&kt| {
        let p = point(lambda, kt);
        let sum: f64 =
            pts.par_iter().map(|&x| pts.iter().map(|&y| wigner_analytic(Complex64::new(x, y), p)).sum::<f64>()).sum();
        (sum * h * h - 0.5).abs()
    }));
    rec.at_most("wigner_coarse_grid_integral_defect", 7, 1e-4, Ok(coarse_defect));
    let quad: Result<Vec<f64>, Error> = FIG_KAPPA_TS
        .iter()
        .map(|&kt| {
            let p = point(lambda, kt);
            Ok((gauss_quad_2d(|z| Complex64::new(wigner_analytic(z, p), 0.0), 9.0, 201, 1e-10)?.re - 0.5).abs())
        })
        .collect();
    rec.at_most("wigner_quadrature_integral_defect", 7, 1e-6, quad.map(max_of));
}

pub fn tomogram_frames() -> [QuadratureFrame; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [QuadratureFrame::position(), QuadratureFrame::new(0.0, 1.0).unwrap(), QuadratureFrame::new(s, s).unwrap()]
}

fn check_tomogram(rec: &mut Recorder) {
    let lambda = 1.0;
    let qs = GridSpec { min: -6.0, max: 6.0, count: 121 }.points();
    let frames = tomogram_frames();
    let agreement: Result<Vec<f64>, Error> = FIG_KAPPA_TS
        .par_iter()
        .map(|&kt| {
            let p = point(lambda, kt);
            let rho = evolved_density_matrix(p, cutoff_for_tail(lambda, PHASE_SPACE_TAIL))?;
            let mut worst = 0.0f64;
            for frame in &frames {
                for &q in &qs {
                    worst = worst.max((tomogram_numeric(&rho, q, frame)? - tomogram_analytic(q, frame, p)?).abs());
                }
            }
            Ok(worst)
        })
        .collect();
    rec.at_most("tomogram_analytic_vs_numeric_max_diff", 8, 1e-6, agreement.map(max_of));

    let wide = GridSpec { min: -12.0, max: 12.0, count: 241 };
    let h = wide.step();
    let norm: Result<Vec<f64>, Error> = FIG_KAPPA_TS
        .iter()
        .flat_map(|&kt| frames.iter().map(move |f| (kt, *f)))
        .map(|(kt, frame)| {
            let vals = wide
                .points()
                .iter()
                .map(|&q| tomogram_analytic(q, &frame, point(lambda, kt)))
                .collect::<Result<Vec<f64>, Error>>()?;
            let trapezoid = h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[vals.len() - 1]));
            Ok((trapezoid - 1.0).abs())
        })
        .collect();
    rec.at_most("tomogram_normalization_max_defect", 8, 1e-6, norm.map(max_of));

    let late: Result<Vec<f64>, Error> = frames
        .iter()
        .flat_map(|f| wide.points().into_iter().map(move |q| (*f, q)))
        .map(|(frame, q)| Ok((tomogram_analytic(q, &frame, point(lambda, 40.0))? - frame.a_coeff(q).powi(2)).abs()))
        .collect();
    rec.at_most("tomogram_vacuum_limit_max_diff", 8, 1e-8, late.map(max_of));
}

fn check_squeezing(cfg: &RunConfig, grid: &[(f64, f64)], rec: &mut Recorder) {
    let times = GridSpec { min: 0.1, max: 5.0, count: 50 }.points();
    let mut above = 0;
    let mut not_decreasing = 0;
    for &l in cfg.lambdas.iter().filter(|l| **l > 0.0) {
        let betas: Vec<f64> = times.iter().map(|&k| evolved_params(point(l, k)).beta_s).collect();
        above += betas.iter().filter(|b| **b >= l.tanh()).count();
        not_decreasing += betas.windows(2).filter(|w| w[1] >= w[0]).count();
    }
    rec.holds("squeezing_beta_not_below_tanh", 9, above);
    rec.holds("squeezing_beta_not_decreasing_steps", 9, not_decreasing);

    let theta = std::f64::consts::FRAC_PI_2;
    let diffs: Result<Vec<f64>, Error> = grid
        .par_iter()
        .map(|&(l, kt)| {
            let rho = apply_channel(&oracle_input(l, 64)?, kt)?;
            let decay = (-2.0 * kt).exp();
            let expected = decay * (-2.0 * l).exp() / 2.0 + (1.0 - decay) / 2.0;
            Ok((quadrature_variance(&rho, theta) - expected).abs())
        })
        .collect();
    rec.at_most("squeezed_quadrature_variance_max_diff", 9, 1e-8, diffs.map(max_of));
}

fn check_special_functions(rec: &mut Recorder) {
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    let mehler = max_of((0..100).map(|_| {
        let x = rng.random_range(-1.0..=1.0);
        let y = rng.random_range(-1.0..=1.0);
        let t = rng.random_range(-0.9..=0.9);
        (mehler_partial_sum(t, x, y, 201) - mehler_closed_form(t, x, y)).abs()
    }));
    rec.at_most("mehler_identity_max_error", 10, 1e-9, Ok(mehler));
    let legendre = max_of((0..100).map(|_| {
        let x = rng.random_range(1.05..=3.0);
        let n = rng.random_range(0..=12usize);
        let p = legendre_p(n, x);
        ((legendre_power_series(n, x) - p) / p).abs()
    }));
    rec.at_most("legendre_identity_max_rel_error", 10, 1e-10, Ok(legendre));
}
