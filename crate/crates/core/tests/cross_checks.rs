//! Public-API agreement between the fast library routes and the oracle.

use combcas::oracle;
use combcas::spectrum;
use combcas::thermal::delta_f;
use combcas::{CombModel, Complex64, ContourSpec};

#[test]
fn pt_amplitudes_match_the_ode() {
    let model = CombModel::poschl_teller(1.0, 0.6).unwrap();
    for k in [0.3, 1.7, 6.0] {
        let fast = model.amplitudes(Complex64::new(k, 0.0)).unwrap();
        let ode = oracle::transfer_matrix_amplitudes(0.6, k).unwrap();
        assert!((fast.t - ode.t).norm() < 1e-8, "k = {k}");
        assert!((fast.r_right - ode.r_right).norm() < 1e-8, "k = {k}");
    }
}

#[test]
fn band_edges_are_secular_roots_at_the_zone_ends() {
    let model = CombModel::delta_delta_prime(1.0, 2.0, 0.5).unwrap();
    let edges = spectrum::band_edges(&model, 100.0).unwrap().edges;
    let mut oracle_edges = oracle::secular_roots(&model, 1e-9, 10.0).unwrap();
    oracle_edges.extend(oracle::secular_roots(&model, std::f64::consts::PI - 1e-9, 10.0).unwrap());
    oracle_edges.sort_by(f64::total_cmp);
    assert_eq!(edges.len(), oracle_edges.len());
    for (a, b) in edges.iter().zip(&oracle_edges) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn negative_band_agrees_with_the_scan() {
    let model = CombModel::poschl_teller(1.0, 0.6).unwrap();
    let fast = spectrum::negative_band(&model).unwrap().unwrap();
    let slow = oracle::negative_band(&model).unwrap().unwrap();
    assert!((fast.kappa_min - slow.kappa_min).abs() < 1e-9);
    assert!((fast.theta_c - slow.theta_c).abs() < 1e-9);
}

#[test]
fn contour_free_energy_matches_the_band_sum() {
    let model = CombModel::delta_delta_prime(1.0, 3.0, -2.0).unwrap();
    let t = 0.5;
    let contour = delta_f(&model, t, &ContourSpec::for_model(&model).unwrap()).unwrap();
    let n = oracle::bands_needed(&model, t, 1e-10).unwrap();
    let sum = oracle::band_sum_free_energy(&model, t, n).unwrap();
    let tol = 1e-6 * sum.value.abs() + sum.tail_estimate + contour.error_estimate;
    assert!((contour.value - sum.value).abs() < tol, "{} vs {}", contour.value, sum.value);
}
