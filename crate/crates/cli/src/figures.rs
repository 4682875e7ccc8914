//! Data behind the figures: mean photon number, photon statistics, Wigner function, tomogram.

use adc_core::analytic::{mean_photon, photon_prob, tomogram_analytic, wigner_analytic};
use adc_core::{ChannelPoint, Complex64};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Table;

/// Columns `kappa_t, lambda, mean_n`, one curve per λ.
pub fn run_fig1(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(vec!["kappa_t", "lambda", "mean_n"]);
    for &lambda in &cfg.lambdas {
        for &kt in &cfg.kappa_ts {
            let p = ChannelPoint::new(lambda, kt)?;
            table.push(vec![kt, lambda, mean_photon(p)]);
        }
    }
    Ok(table)
}

/// Columns `kappa_t, n, p` for `n = 0..=n_max` at each κt.
pub fn run_fig2(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(vec!["kappa_t", "n", "p"]);
    let lambda = cfg.lambdas[0];
    for &kt in &cfg.kappa_ts {
        let p = ChannelPoint::new(lambda, kt)?;
        for n in 0..=cfg.n_max {
            table.push(vec![kt, n as f64, photon_prob(n, p)]);
        }
    }
    Ok(table)
}

/// Columns `kappa_t, re_alpha, im_alpha, w` over the square α grid, Re α outermost.
pub fn run_wigner(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(vec!["kappa_t", "re_alpha", "im_alpha", "w"]);
    let axis = cfg.alpha_grid.points();
    let scale = if cfg.normalized { 2.0 } else { 1.0 };
    let lambda = cfg.lambdas[0];
    for &kt in &cfg.kappa_ts {
        let p = ChannelPoint::new(lambda, kt)?;
        let rows: Vec<Vec<f64>> = axis
            .par_iter()
            .flat_map_iter(|&x| {
                axis.iter().map(move |&y| vec![kt, x, y, scale * wigner_analytic(Complex64::new(x, y), p)])
            })
            .collect();
        table.rows.extend(rows);
    }
    Ok(table)
}

/// Columns `q, r` for one `(f, g, λ, κt)`.
pub fn run_tomogram(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(vec!["q", "r"]);
    let p = ChannelPoint::new(cfg.lambdas[0], cfg.kappa_ts[0])?;
    for q in cfg.q_grid.points() {
        table.push(vec![q, tomogram_analytic(q, &cfg.frame, p)?]);
    }
    Ok(table)
}
