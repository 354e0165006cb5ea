use std::f64::consts::PI;

use efimov::eigenfunctions::{big_psi, psi, xi, EigenfunctionSpec, HyperPoint};
use proptest::prelude::*;

fn unit6() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-1.0f64..1.0).prop_filter("not too short", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.05)
}

fn at(u: [f64; 6], radius: f64) -> HyperPoint {
    let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s = radius / n;
    HyperPoint::new([u[0] * s, u[1] * s, u[2] * s], [u[3] * s, u[4] * s, u[5] * s])
}

fn off_planes(p: &HyperPoint) -> bool {
    p.pair_radii().iter().all(|&(r, rho)| r > 1e-3 && rho > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn big_psi_is_bosonic(u in unit6(), r in 1.05f64..8.0, n in 1usize..=2) {
        let spec = EigenfunctionSpec::compute(n, 1.0).unwrap();
        let p = at(u, r);
        prop_assume!(off_planes(&p));
        let v = big_psi(&spec, &p).unwrap();
        for q in [p.sigma12(), p.sigma23(), p.sigma31()] {
            let w = big_psi(&spec, &q).unwrap();
            prop_assert!((w - v).abs() <= 1e-11 * v.abs().max(1e-300), "{v} vs {w}");
        }
    }

    #[test]
    fn big_psi_vanishes_on_the_core(u in unit6(), n in 1usize..=3) {
        let spec = EigenfunctionSpec::compute(n, 1.0).unwrap();
        let p = at(u, 1.0);
        prop_assume!(off_planes(&p));
        let inside = big_psi(&spec, &at(u, 1.5)).unwrap();
        let v = big_psi(&spec, &p).unwrap();
        prop_assert!(v.abs() < 1e-8 * inside.abs().max(1.0));
    }

    #[test]
    fn psi_near_the_plane_is_coulombic(rho in 1.2f64..6.0, n in 1usize..=2) {
        // 4π r ψ(r, ρ) → ξ(ρ) as r → 0
        let spec = EigenfunctionSpec::compute(n, 1.0).unwrap();
        let target = xi(&spec, rho).unwrap();
        let v = 4.0 * PI * 1e-7 * psi(&spec, 1e-7, rho).unwrap();
        prop_assert!((v - target).abs() < 1e-5 * target.abs().max(1e-12), "{v} vs {target}");
    }
}

/// K_{is}(t) by integrating t²y″ + ty′ − (t² − s²)y = 0 inward from t = 40,
/// started on the large-t asymptotic series. Inward, K is the dominant
/// solution, so RK4 is stable.
fn kis_by_ode(s: f64, t_end: f64) -> f64 {
    let nu2 = -s * s;
    let start = 40.0;
    let series = |t: f64| {
        let (mut sum, mut dsum, mut term) = (1.0, 0.0, 1.0);
        for k in 1..12 {
            let kf = k as f64;
            term *= (4.0 * nu2 - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0);
            sum += term / t.powi(k);
            dsum += -kf * term / t.powi(k + 1);
        }
        let pre = (PI / (2.0 * t)).sqrt() * (-t).exp();
        (pre * sum, pre * (dsum - sum * (1.0 + 0.5 / t)))
    };
    let rhs = |t: f64, y: f64, dy: f64| (dy, -dy / t + (1.0 - s * s / (t * t)) * y);
    let (mut y, mut dy) = series(start);
    let n = 400_000;
    let h = (t_end - start) / n as f64;
    let mut t = start;
    for _ in 0..n {
        let k1 = rhs(t, y, dy);
        let k2 = rhs(t + h / 2.0, y + h / 2.0 * k1.0, dy + h / 2.0 * k1.1);
        let k3 = rhs(t + h / 2.0, y + h / 2.0 * k2.0, dy + h / 2.0 * k2.1);
        let k4 = rhs(t + h, y + h * k3.0, dy + h * k3.1);
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dy += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        t += h;
    }
    y
}

#[test]
fn psi_at_a_a_matches_ode_oracle() {
    let spec = EigenfunctionSpec::compute(1, 1.0).unwrap();
    let s0 = spec.constants.s0;
    let big_r = 2f64.sqrt();
    let k = kis_by_ode(s0, spec.kappa() * big_r);
    // ω = π/4: sinh(s₀π/4)/sinh(s₀π/2)
    let oracle = 1.0 / (4.0 * PI) * (s0 * PI / 4.0).sinh() / (s0 * PI / 2.0).sinh() * k;
    let v = psi(&spec, 1.0, 1.0).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-8, "{v} vs {oracle}");
}

#[test]
fn core_interior_is_rejected() {
    let spec = EigenfunctionSpec::compute(1, 1.0).unwrap();
    assert!(psi(&spec, 0.3, 0.4).is_err());
    assert!(xi(&spec, 0.9).is_err());
}
