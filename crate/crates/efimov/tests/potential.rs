use std::f64::consts::PI;

use efimov::eigenfunctions::{big_psi, xi, EigenfunctionSpec, HyperPoint};
use efimov::forms::RadialCharge;
use efimov::potential::{potential_g, potential_g_detailed, PotentialConfig};
use efimov::ModelGeometry;

#[test]
fn second_level_faddeev_identity() {
    let spec = EigenfunctionSpec::compute(2, 1.0).unwrap();
    let charge = RadialCharge::efimov(&spec).unwrap();
    let cfg = PotentialConfig::new(spec.mu(), spec.geometry).unwrap();
    for p in [
        HyperPoint::new([0.3, -1.1, 0.7], [1.1, 0.4, -0.2]),
        HyperPoint::new([5.0, 2.0, -1.0], [0.5, 6.0, 3.0]),
        HyperPoint::new([20.0, 1.0, 0.0], [-4.0, 30.0, 2.0]),
    ] {
        let g = potential_g(&charge, &p, &cfg).unwrap();
        let b = big_psi(&spec, &p).unwrap();
        assert!((g - b).abs() < 1e-6 * b.abs(), "{g} vs {b}");
    }
}

fn setup() -> (RadialCharge, RadialCharge, PotentialConfig) {
    let g = ModelGeometry::unitary(1.0).unwrap();
    let a = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
    let b = RadialCharge::test_charge(1.0, 2, 2.0).unwrap();
    (a, b, PotentialConfig::new(0.8, g).unwrap())
}

#[test]
fn potential_is_even_in_x() {
    let (xi, _, cfg) = setup();
    let p = HyperPoint::new([0.4, 0.9, -0.3], [1.2, -0.5, 0.8]);
    let m = HyperPoint::new([-0.4, -0.9, 0.3], [1.2, -0.5, 0.8]);
    let (u, v) = (potential_g(&xi, &p, &cfg).unwrap(), potential_g(&xi, &m, &cfg).unwrap());
    assert!((u - v).abs() < 1e-10 * u.abs(), "{u} vs {v}");
}

#[test]
fn potential_is_linear_in_the_charge() {
    let (a, b, cfg) = setup();
    let p = HyperPoint::new([1.0, 0.2, 0.3], [0.1, 1.5, -0.4]);
    let c = -0.7;
    let sum = potential_g(&a.plus(&b, c).unwrap(), &p, &cfg).unwrap();
    let parts = potential_g(&a, &p, &cfg).unwrap() + c * potential_g(&b, &p, &cfg).unwrap();
    assert!((sum - parts).abs() < 1e-9 * sum.abs().max(parts.abs()), "{sum} vs {parts}");
}

#[test]
fn singular_profile_near_a_plane() {
    // 4π r G^λξ → ξ(ρ) as r → 0 on the plane x = 0
    let spec = EigenfunctionSpec::compute(1, 1.0).unwrap();
    let charge = RadialCharge::efimov(&spec).unwrap();
    let cfg = PotentialConfig::new(spec.mu(), spec.geometry).unwrap().with_min_plane_distance(0.01);
    let rho = 2.0;
    let target = xi(&spec, rho).unwrap();
    for r in [0.05, 0.025] {
        let p = HyperPoint::new([0.0, r, 0.0], [rho, 0.0, 0.0]);
        let v = potential_g_detailed(&charge, &p, &cfg).unwrap();
        let lead = 4.0 * PI * r * v.planes[0];
        assert!((lead / target - 1.0).abs() < 0.05, "r = {r}: {lead} vs {target}");
    }
}

#[test]
fn certificates_are_small() {
    let (xi, _, cfg) = setup();
    let p = HyperPoint::new([1.0, 0.2, 0.3], [0.1, 1.5, -0.4]);
    let v = potential_g_detailed(&xi, &p, &cfg).unwrap();
    assert!(v.truncation_bound < 1e-12 * v.value.abs());
    assert!(v.series_tail < 1e-8 * v.value.abs());
    assert_eq!(v.value, v.planes[0] + v.planes[1] + v.planes[2]);
}

#[test]
fn rejects_core_points_and_mismatched_radius() {
    let (xi, _, cfg) = setup();
    assert!(potential_g(&xi, &HyperPoint::new([0.3, 0.1, 0.0], [0.0, 0.2, 0.4]), &cfg).is_err());
    let other = RadialCharge::test_charge(2.0, 1, 1.0).unwrap();
    assert!(potential_g(&other, &HyperPoint::new([2.0, 0.0, 0.0], [0.0, 2.0, 0.0]), &cfg).is_err());
}
