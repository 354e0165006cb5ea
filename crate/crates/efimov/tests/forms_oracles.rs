//! Independent oracles for the quadratic forms on ξ(ρ) = (ρ−a)e^{−ρ}, a = 1.

use std::f64::consts::PI;

use efimov::forms::{gagliardo_seminorm_sq, phi1, phi2, phi3, phi4, RadialCharge};
use efimov::kernels::{g_kernel, rd_kernel, KernelSeriesConfig};
use efimov::specfun::{bessel_ik_scaled, gauss_legendre, integrate, Domain, QuadratureSpec};
use efimov::{HyperPoint, ModelGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn charge() -> RadialCharge {
    RadialCharge::test_charge(1.0, 1, 1.0).unwrap()
}

fn xi(rho: f64) -> f64 {
    (rho - 1.0) * (-rho).exp()
}

fn q_fn(t: f64) -> f64 {
    bessel_ik_scaled(1.0, t).unwrap().k_scaled * (-t).exp() / t
}

#[test]
fn phi1_matches_brute_force_double_integral() {
    // (λ/π) ∫_a^∞ ρξ² ∫_0^a ρ′[Q(κ(ρ−ρ′)) − Q(κ(ρ+ρ′))] dρ′ dρ
    let lambda = 1.0;
    let k = 1.0;
    let inner_q = QuadratureSpec::with_tol(1e-14, 1e-11);
    let outer_q = QuadratureSpec::with_tol(1e-14, 1e-10);
    let outer = integrate(
        |rho: f64| {
            if rho <= 1.0 {
                return 0.0;
            }
            let inner = integrate(
                |rp: f64| rp * (q_fn(k * (rho - rp)) - q_fn(k * (rho + rp))),
                Domain::finite(0.0, 1.0),
                &inner_q,
            )
            .unwrap()
            .value;
            rho * xi(rho).powi(2) * inner
        },
        Domain::half_line(1.0, 1.0),
        &outer_q,
    )
    .unwrap()
    .value;
    let oracle = lambda / PI * outer;
    let g = ModelGeometry::new(1.0, 2.0, 0.0).unwrap();
    let v = phi1(&charge(), &g, lambda, &QuadratureSpec::with_tol(1e-15, 1e-10)).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-6, "{v} vs {oracle}");
}

/// Mean and standard error of f over pairs (ρ, ρ′) drawn from the density
/// e^{−(ρ−a)} e^{−(ρ′−a)} on [a, ∞)².
fn monte_carlo(seed: u64, n: usize, f: impl Fn(f64, f64) -> f64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for i in 0..n {
        // the first coordinate is stratified into n equal-probability cells;
        // the plain-sampling error estimate below is then conservative
        let u1: f64 = 1.0 - (i as f64 + rng.gen::<f64>()) / n as f64;
        let u2: f64 = 1.0 - rng.gen::<f64>();
        let (rho, rp) = (1.0 - u1.ln(), 1.0 - u2.ln());
        let w = f(rho, rp) * (rho - 1.0).exp() * (rp - 1.0).exp();
        s += w;
        s2 += w * w;
    }
    let nf = n as f64;
    let mean = s / nf;
    (mean, ((s2 / nf - mean * mean) / nf).sqrt())
}

#[test]
fn phi2_and_seminorm_match_monte_carlo() {
    let n = 10_000_000;
    let q = QuadratureSpec::with_tol(1e-15, 1e-10);
    let g = ModelGeometry::unitary(1.0).unwrap();

    // seminorm: 16π² ∬ ρ²ρ′²(ξ−ξ′)²/(ρ²−ρ′²)² over [a,∞)²
    let (m, se) = monte_carlo(21, n, |r, s| {
        if r == s {
            return 0.0;
        }
        let d = xi(r) - xi(s);
        let den = r * r - s * s;
        r * r * s * s * d * d / (den * den)
    });
    let (oracle, err) = (16.0 * PI * PI * m, 16.0 * PI * PI * se);
    let v = gagliardo_seminorm_sq(&charge(), &q).unwrap();
    assert!((v - oracle).abs() < 3.0 * err, "seminorm {v} vs {oracle} ± {err}");

    // Φ₂: (λ/2π) ∬ ρρ′(ξ−ξ′)²[Q(κ|ρ−ρ′|) − Q(κ(ρ+ρ′))]
    let lambda = 1.0;
    let (m, se) = monte_carlo(22, n, |r, s| {
        if r == s {
            return 0.0;
        }
        let d = xi(r) - xi(s);
        r * s * d * d * (q_fn((r - s).abs()) - q_fn(r + s))
    });
    let (oracle, err) = (lambda / (2.0 * PI) * m, lambda / (2.0 * PI) * se);
    let v = phi2(&charge(), &g, lambda, &q).unwrap();
    assert!((v - oracle).abs() < 3.0 * err, "phi2 {v} vs {oracle} ± {err}");
}

/// Gauss-Legendre nodes on panels covering [lo, hi].
fn radial_nodes(edges: &[f64], per_panel: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre::<f64>(per_panel);
    let mut out = Vec::new();
    for p in edges.windows(2) {
        let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
        out.extend(x.iter().zip(&w).map(|(&xi, &wi)| (c + h * xi, h * wi)));
    }
    out
}

/// −c ∬ ρ²ρ′² ξξ′ ∫du K(ρ, ρ′, u), with c = 8π² times the form's prefactor.
fn angular_oracle(lo: f64, c: f64, kernel: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let edges = [lo, 1.5, 2.5, 4.5, 8.0, 13.0, 22.0];
    let nodes = radial_nodes(&edges, 12);
    let (u, wu) = gauss_legendre::<f64>(48);
    let mut total = 0.0;
    for &(r, wr) in &nodes {
        for &(s, ws) in &nodes {
            let ang: f64 = u.iter().zip(&wu).map(|(&u, &w)| w * kernel(r, s, u)).sum();
            total += wr * ws * r * r * s * s * xi(r) * xi(s) * ang;
        }
    }
    -c * 8.0 * PI * PI * total
}

fn y_point(rho: f64) -> HyperPoint {
    HyperPoint::new([0.0; 3], [0.0, 0.0, rho])
}

fn y_dir(rho: f64, u: f64) -> [f64; 3] {
    [rho * (1.0 - u * u).max(0.0).sqrt(), 0.0, rho * u]
}

// The g series converges like (a²/ρρ′)^ℓ, so the direct quadrature needs the
// charge held away from the core; both sides use the same restricted charge.
const LO: f64 = 1.1;

#[test]
fn phi3_matches_direct_angular_quadrature() {
    let g = ModelGeometry::unitary(1.0).unwrap();
    let lambda = 1.0;
    let cfg = KernelSeriesConfig::new(lambda, 1.0).unwrap().with_ell_max(512).with_tail_tol(1e-12);
    let oracle = angular_oracle(LO, 1.0, |r, s, u| {
        let xp = HyperPoint::new([0.0; 3], y_dir(s, u));
        g_kernel(&y_point(r), &xp, &cfg).unwrap().value
    });
    let v = phi3(&charge().restricted(LO).unwrap(), &g, lambda, 4096).unwrap();
    assert!(v > 0.0);
    assert!((v / oracle - 1.0).abs() < 1e-4, "{v} vs {oracle}");
}

#[test]
fn phi4_matches_direct_angular_quadrature() {
    let g = ModelGeometry::unitary(1.0).unwrap();
    let lambda = 1.0;
    let cfg = KernelSeriesConfig::new(lambda, 1.0).unwrap().with_ell_max(512).with_tail_tol(1e-12);
    let h = 3f64.sqrt() / 2.0;
    let oracle = angular_oracle(LO, 2.0, |r, s, u| {
        let d = y_dir(s, u);
        let xp = HyperPoint::new([h * d[0], h * d[1], h * d[2]], [-0.5 * d[0], -0.5 * d[1], -0.5 * d[2]]);
        rd_kernel(&y_point(r), &xp, &cfg).unwrap().value
    });
    let cfg = KernelSeriesConfig::new(lambda, 1.0).unwrap().with_ell_max(4096);
    let v = phi4(&charge().restricted(LO).unwrap(), &g, &cfg, &QuadratureSpec::with_tol(1e-15, 1e-10)).unwrap();
    assert!((v / oracle - 1.0).abs() < 1e-3, "{v} vs {oracle}");
}
