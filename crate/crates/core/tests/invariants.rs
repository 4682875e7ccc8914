use adc_core::analytic::{
    evolved_density_matrix, evolved_params, mean_photon, photon_dist_adaptive, photon_prob, tomogram_analytic,
    trace_identity, wigner_analytic,
};
use adc_core::channel::{apply_channel, kraus_family};
use adc_core::fock::{expect_number, squeezed_vacuum_with_max_tail};
use adc_core::{ChannelPoint, Complex64, QuadratureFrame};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = ChannelPoint> {
    (0.0..1.5f64, 0.0..4.0f64).prop_map(|(l, k)| ChannelPoint::new(l, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completeness_holds(kt in 0.0..6.0f64, cutoff in 1usize..96) {
        prop_assert!(kraus_family(kt, cutoff).unwrap().completeness_defect() <= 1e-12);
    }

    #[test]
    fn channel_composes(l in 0.0..1.0f64, s in 0.0..1.5f64, t in 0.0..1.5f64) {
        let rho = squeezed_vacuum_with_max_tail(l, 48, 1e-6).unwrap();
        let two = apply_channel(&apply_channel(&rho, s).unwrap(), t).unwrap();
        let one = apply_channel(&rho, s + t).unwrap();
        prop_assert!(two.max_abs_diff(&one) <= 1e-12);
    }

    #[test]
    fn channel_output_is_a_state(l in 0.0..1.0f64, kt in 0.0..3.0f64) {
        let rho = squeezed_vacuum_with_max_tail(l, 48, 1e-6).unwrap();
        let out = apply_channel(&rho, kt).unwrap();
        prop_assert!((out.trace() - rho.trace()).abs() <= 1e-12);
        prop_assert!(out.hermiticity_defect() <= 1e-14);
        prop_assert!(out.min_eigenvalue() >= -1e-12);
        prop_assert!(out.odd_coherence_max() == 0.0);
        prop_assert!((expect_number(&out) - (-2.0 * kt).exp() * expect_number(&rho)).abs() <= 1e-11);
    }

    #[test]
    fn closed_form_parameters(p in point()) {
        let ep = evolved_params(p);
        prop_assert!((trace_identity(&ep).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!(ep.beta_s >= 0.0 && ep.beta_s <= p.lambda().tanh());
        prop_assert!(ep.w > 0.0 && ep.w <= 1.0);
        prop_assert!(ep.g >= 0.0);
    }

    #[test]
    fn photon_distribution_is_normalized(p in point()) {
        let d = photon_dist_adaptive(p, 1e-12);
        prop_assert!(d.probs.iter().all(|x| *x >= 0.0));
        prop_assert!((d.probs.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let mean: f64 = d.probs.iter().enumerate().map(|(n, x)| n as f64 * x).sum();
        prop_assert!((mean - mean_photon(p)).abs() <= 1e-8 * (1.0 + mean));
        prop_assert_eq!(photon_prob(3, p), d.probs[3]);
    }

    #[test]
    fn density_matrix_diagonal_is_distribution(p in point()) {
        let rho = evolved_density_matrix(p, 64).unwrap();
        for (n, x) in rho.diagonal().iter().enumerate().take(30) {
            prop_assert!((x - photon_prob(n, p)).abs() <= 1e-13);
        }
        prop_assert!(rho.odd_coherence_max() == 0.0);
        prop_assert!(rho.min_eigenvalue() >= -1e-12);
    }

    #[test]
    fn wigner_is_even_and_bounded(p in point(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let a = Complex64::new(x, y);
        let w = wigner_analytic(a, p);
        prop_assert!(w >= 0.0);
        prop_assert!(w <= std::f64::consts::FRAC_1_PI * (1.0 + 1e-12));
        prop_assert!((w - wigner_analytic(-a, p)).abs() <= 1e-15);
        prop_assert!((w - wigner_analytic(a.conj(), p)).abs() <= 1e-15);
    }

    #[test]
    fn tomogram_is_even_and_nonnegative(p in point(), q in -6.0..6.0f64, theta in 0.0..std::f64::consts::PI) {
        let frame = QuadratureFrame::new(theta.cos(), theta.sin()).unwrap();
        let r = tomogram_analytic(q, &frame, p).unwrap();
        prop_assert!(r >= 0.0);
        prop_assert!((r - tomogram_analytic(-q, &frame, p).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn closed_form_matches_kraus(l in 0.0..0.8f64, kt in 0.0..2.0f64) {
        let p = ChannelPoint::new(l, kt).unwrap();
        let rho0 = squeezed_vacuum_with_max_tail(l, 64, 1e-12).unwrap();
        let kraus = apply_channel(&rho0, kt).unwrap().leading_block(32).unwrap();
        prop_assert!(evolved_density_matrix(p, 32).unwrap().max_abs_diff(&kraus) <= 1e-10);
    }
}

#[test]
fn graded_state_has_finite_spectrum() {
    let p = ChannelPoint::new(0.515006, 3.307560).unwrap();
    let min = evolved_density_matrix(p, 64).unwrap().min_eigenvalue();
    assert!(min.is_finite() && min.abs() <= 1e-15, "{min}");
}
