use std::f64::consts::PI;

use efimov::forms::{
    a1_constant, default_forms_spec, gamma_action, gamma_t3, h_kernel_l1, norm_l2, norm_l2w, phi1, phi2, phi3,
    phi4, phi_alpha, RadialCharge,
};
use efimov::kernels::{h_fn, KernelSeriesConfig};
use efimov::specfun::{gauss_legendre, QuadratureSpec};
use efimov::{Error, ModelGeometry};
use proptest::prelude::*;

fn geom() -> ModelGeometry {
    ModelGeometry::unitary(1.0).unwrap()
}

fn cfg(lambda: f64) -> KernelSeriesConfig {
    KernelSeriesConfig::new(lambda, 1.0).unwrap().with_ell_max(4096)
}

#[test]
fn forms_are_quadratic() {
    let g = geom();
    let q = default_forms_spec();
    let xi = RadialCharge::test_charge(1.0, 2, 1.0).unwrap();
    for c in [-1.0, 2.0, 0.3] {
        let s = xi.scaled(c);
        let c2 = c * c;
        let close = |a: f64, b: f64| (a - c2 * b).abs() <= 1e-12 * (c2 * b).abs();
        assert!(close(phi1(&s, &g, 1.0, &q).unwrap(), phi1(&xi, &g, 1.0, &q).unwrap()));
        assert!(close(phi2(&s, &g, 1.0, &q).unwrap(), phi2(&xi, &g, 1.0, &q).unwrap()));
        assert!(close(phi3(&s, &g, 1.0, 4096).unwrap(), phi3(&xi, &g, 1.0, 4096).unwrap()));
        assert!(close(phi4(&s, &g, &cfg(1.0), &q).unwrap(), phi4(&xi, &g, &cfg(1.0), &q).unwrap()));
    }
}

#[test]
fn alpha_enters_linearly_and_report_adds_up() {
    let q = default_forms_spec();
    let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
    let r0 = phi_alpha(&xi, &ModelGeometry::new(1.0, 2.0, 0.0).unwrap(), 1.0, &cfg(1.0), &q).unwrap();
    let r1 = phi_alpha(&xi, &ModelGeometry::new(1.0, 2.0, 0.7).unwrap(), 1.0, &cfg(1.0), &q).unwrap();
    let n2 = r0.norm_l2 * r0.norm_l2;
    assert!(((r1.phi_alpha - r0.phi_alpha) - 0.7 * n2).abs() < 1e-12 * r0.phi_alpha.abs().max(n2));
    let sum = (r1.alpha + 1.0 / (4.0 * PI)) * n2 + r1.phi1 + r1.phi2 + r1.phi3 + r1.phi4;
    assert_eq!(sum, r1.phi_alpha);
    assert!(r1.bound_flags.all(), "{:?}", r1.bound_flags);
}

#[test]
fn weighted_norm_equals_plain_norm_beyond_b() {
    let g = geom();
    let q = default_forms_spec();
    let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap().restricted(g.b).unwrap();
    let (w, p) = (norm_l2w(&xi, &g, &q).unwrap(), norm_l2(&xi, &q).unwrap());
    assert!((w / p - 1.0).abs() < 1e-9, "{w} {p}");
}

#[test]
fn weighted_norm_diverges_without_vanishing() {
    let xi = RadialCharge::new(1.0, 1.0, false, "e^-rho", |r: f64| Ok((-r).exp())).unwrap();
    assert!(matches!(norm_l2w(&xi, &geom(), &default_forms_spec()), Err(Error::Divergent(_))));
}

#[test]
fn phi3_and_a1_decrease_in_lambda() {
    let g = geom();
    let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
    let lams = [1.0, 10.0, 100.0];
    let p3: Vec<f64> = lams.iter().map(|&l| phi3(&xi, &g, l, 4096).unwrap()).collect();
    let a1: Vec<f64> = lams.iter().map(|&l| a1_constant(&g, l).unwrap()).collect();
    for w in p3.windows(2).chain(a1.windows(2)) {
        assert!(w[1] < w[0], "{p3:?} {a1:?}");
    }
    assert!(p3.iter().all(|&v| v > 0.0));
}

#[test]
fn large_lambda_lower_bound_constant() {
    let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
    let r = phi_alpha(&xi, &geom(), 100.0, &cfg(100.0), &default_forms_spec()).unwrap();
    assert!(r.empirical_a0() >= 1.0 / (8.0 * PI), "A0 = {}", r.empirical_a0());
}

#[test]
fn h_kernel_norm_scales_with_root_lambda() {
    let q = QuadratureSpec::with_tol(1e-15, 1e-12);
    assert!((h_kernel_l1(1.0, &q).unwrap() / (PI * PI) - 1.0).abs() < 1e-8);
    assert!((h_kernel_l1(4.0, &q).unwrap() / (2.0 * PI * PI) - 1.0).abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_increases_from_zero_to_one(t in 1e-3f64..40.0, dt in 1e-3f64..1.0) {
        let (h0, h1) = (h_fn(t).unwrap(), h_fn(t + dt).unwrap());
        prop_assert!(h0 > 0.0 && h0 < 1.0);
        prop_assert!(h1 >= h0);
        // strict where the gap to 1 is resolvable in double precision
        if 1.0 - h1 > 1e-12 {
            prop_assert!(h1 > h0);
        }
    }

    #[test]
    fn quadratic_forms_nonnegative(p in 1u32..=2, kappa in 0.5f64..2.0) {
        let g = geom();
        let q = default_forms_spec();
        let xi = RadialCharge::test_charge(1.0, p, kappa).unwrap();
        prop_assert!(phi1(&xi, &g, 1.0, &q).unwrap() > 0.0);
        prop_assert!(phi2(&xi, &g, 1.0, &q).unwrap() >= 0.0);
    }
}

/// 4π∫ρ² ζ(ρ)(Γξ)(ρ) dρ by Gauss-Legendre panels on the support of ζ.
fn pairing(zeta: &RadialCharge, xi: &RadialCharge, lambda: f64, edges: &[f64]) -> f64 {
    let (x, w) = gauss_legendre::<f64>(16);
    let mut nodes = Vec::new();
    for p in edges.windows(2) {
        let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
        nodes.extend(x.iter().zip(&w).map(|(&x, &w)| (c + h * x, h * w)));
    }
    let rhos: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let res = gamma_action(xi, &geom(), lambda, &rhos, 4096, &default_forms_spec()).unwrap();
    nodes
        .iter()
        .zip(&res)
        .map(|(&(r, wr), g)| 4.0 * PI * wr * r * r * zeta.eval(r).unwrap() * g.total)
        .sum()
}

#[test]
fn operator_action_pairs_to_the_form() {
    let lambda = 1.0;
    let xi = RadialCharge::test_charge(1.0, 1, 2.0).unwrap();
    let report = phi_alpha(&xi, &geom(), lambda, &cfg(lambda), &default_forms_spec()).unwrap();
    let edges = [1.0, 1.25, 1.5, 2.0, 3.0, 4.5, 7.0, 11.0, 18.0];
    let pair = pairing(&xi, &xi, lambda, &edges);
    assert!((pair / report.phi_alpha - 1.0).abs() < 1e-3, "{pair} vs {}", report.phi_alpha);
}

#[test]
fn operator_action_polarization_smoke() {
    let lambda = 1.0;
    let q = default_forms_spec();
    let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
    let zeta = RadialCharge::new(1.0, 1.0, true, "bump", |r: f64| {
        Ok(if (1.8..=2.2).contains(&r) { ((r - 1.8) * (2.2 - r)).powi(2) * 1e3 } else { 0.0 })
    })
    .unwrap();
    let form = |c: f64| phi_alpha(&xi.plus(&zeta, c).unwrap(), &geom(), lambda, &cfg(lambda), &q).unwrap().phi_alpha;
    let polar = (form(1.0) - form(-1.0)) / 4.0;
    let pair = pairing(&zeta, &xi, lambda, &[1.8, 2.0, 2.2]);
    assert!((pair / polar - 1.0).abs() < 0.1, "{pair} vs {polar}");
}

#[test]
fn t3_converges_under_refinement() {
    let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
    let vals: Vec<f64> = [1e-5, 1e-7, 1e-9, 1e-11]
        .iter()
        .map(|&tol| gamma_t3(&xi, 2.0, 1.0, &QuadratureSpec::with_tol(tol * 1e-3, tol)).unwrap())
        .collect();
    let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(diffs[2] <= diffs[0].max(1e-13), "{vals:?}");
    assert!(diffs[2] < 1e-8 * vals[3].abs(), "{vals:?}");
}
