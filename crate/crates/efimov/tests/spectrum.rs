use std::f64::consts::PI;

use efimov::spectrum::{count_levels, efimov_spectrum_with, epsilon_n, solve_s0};
use efimov::specfun::{arg_gamma_one_plus_is, bessel_k_imag, QuadratureSpec};
use efimov::ModelGeometry;
use proptest::prelude::*;

#[test]
fn s0_and_theta_reference_values() {
    let c = solve_s0(1e-13).unwrap();
    assert!((c.s0 - 1.00623782510278).abs() < 1e-12);
    assert!((c.theta - arg_gamma_one_plus_is(c.s0)).abs() < 1e-14);
    assert!((c.geometric_ratio - (-2.0 * PI / c.s0).exp()).abs() < 1e-18);
}

#[test]
fn first_three_roots() {
    let c = solve_s0(1e-12).unwrap();
    let lv = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0).unwrap(), 3, 1e-13).unwrap();
    let expected = [6.5375e-2, 2.879e-3, 1.2687e-4];
    for (l, t) in lv.iter().zip(expected) {
        assert!((l.t_n / t - 1.0).abs() < 2e-4, "{} vs {t}", l.t_n);
        assert!(l.bracket.0 <= l.t_n && l.t_n <= l.bracket.1);
    }
    assert!((lv[0].e_n + 4.273955628e-3).abs() < 1e-11);
}

#[test]
fn roots_are_zeros_of_k_imag() {
    let c = solve_s0(1e-12).unwrap();
    let q = QuadratureSpec::with_tol(1e-300, 1e-13);
    let lv = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0).unwrap(), 4, 1e-13).unwrap();
    for l in &lv {
        // K_{is₀} oscillates with amplitude ~ e^{−πs₀/2}; compare with that scale
        let scale = (-PI * c.s0 / 2.0).exp();
        let v = bessel_k_imag(c.s0, l.t_n, &q).unwrap();
        assert!(v.abs() < 1e-10 * scale, "n = {}: {v}", l.n);
    }
}

#[test]
fn phase_series_matches_roots() {
    let c = solve_s0(1e-12).unwrap();
    let lv = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0).unwrap(), 5, 1e-14).unwrap();
    for l in &lv {
        let from_root = l.t_n / (2.0 * ((c.theta - l.n as f64 * PI) / c.s0).exp()) - 1.0;
        let eps = epsilon_n(&c, l.n).unwrap();
        assert!((eps - from_root).abs() < 1e-10, "n = {}: {eps} vs {from_root}", l.n);
        assert_eq!(eps, l.epsilon_n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energies_scale_as_inverse_square_radius(a in 0.05f64..20.0) {
        let c = solve_s0(1e-12).unwrap();
        let one = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0).unwrap(), 4, 1e-12).unwrap();
        let lv = efimov_spectrum_with(&c, &ModelGeometry::unitary(a).unwrap(), 4, 1e-12).unwrap();
        for (x, y) in one.iter().zip(&lv) {
            prop_assert!((y.e_n * a * a / x.e_n - 1.0).abs() < 1e-12);
            prop_assert_eq!(x.t_n, y.t_n);
        }
    }

    #[test]
    fn counting_between_levels(k in 1usize..7, f in 0.01f64..0.99) {
        let c = solve_s0(1e-12).unwrap();
        let lv = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0).unwrap(), 8, 1e-12).unwrap();
        // geometric interpolation between E_k and E_{k+1}
        let z = -((-lv[k - 1].e_n).ln() * (1.0 - f) + (-lv[k].e_n).ln() * f).exp();
        prop_assert_eq!(count_levels(z, &lv).unwrap(), k);
    }

    #[test]
    fn levels_decrease_geometrically(n in 2usize..9) {
        let c = solve_s0(1e-12).unwrap();
        let lv = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0).unwrap(), n, 1e-12).unwrap();
        let r = lv[n - 1].e_n / lv[n - 2].e_n;
        prop_assert!(r > 0.0 && (r / c.geometric_ratio - 1.0).abs() < 2e-3);
    }
}
