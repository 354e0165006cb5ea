//! Single-layer potential G^λξ = Σ_{ij} G_{ij}^λ ξ_{ij} of a radial charge
//! placed on the three coincidence hyperplanes.
//!
//! For the plane π_ij the charge point is X′ with |X′| = |y′| and
//! X·X′ = v_ij·y′, where v₁₂ = y, v₂₃ = −(√3/2)x − y/2, v₃₁ = (√3/2)x − y/2.
//! The angle of y′ about v is integrated in closed form for R₀ and term by
//! term for the Gegenbauer series of g.

use std::f64::consts::PI;

use crate::eigenfunctions::HyperPoint;
use crate::forms::{inner_spec, quad, PartialWaves, RadialCharge};
use crate::kernels::{q_fn, KernelSeriesConfig};
use crate::specfun::{bessel_ik_scaled, chebyshev_u, gegenbauer_c2};
use crate::{Domain, Error, ModelGeometry, QuadratureSpec, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialConfig {
    pub lambda: f64,
    pub geometry: ModelGeometry,
    pub kernel_cfg: KernelSeriesConfig,
    pub q: QuadratureSpec,
    /// Upper limit of the ρ′ integral of the R₀ part; `None` picks it from
    /// the charge's decay certificate.
    pub domain_truncation_radius: Option<f64>,
    /// Points closer than this to a coincidence hyperplane are rejected.
    pub min_plane_distance: f64,
}

impl PotentialConfig {
    pub fn new(lambda: f64, geometry: ModelGeometry) -> Result<Self> {
        let kernel_cfg = KernelSeriesConfig::new(lambda, geometry.a)?
            .with_ell_max(1024)
            .with_tail_tol(1e-10);
        Ok(Self {
            lambda,
            geometry,
            kernel_cfg,
            q: QuadratureSpec::with_tol(1e-15, 1e-10),
            domain_truncation_radius: None,
            min_plane_distance: 0.02 * geometry.a,
        })
    }

    pub fn with_min_plane_distance(self, d: f64) -> Self {
        Self {
            min_plane_distance: d,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub value: f64,
    /// Contributions of π₁₂, π₂₃, π₃₁.
    pub planes: [f64; 3],
    /// Bound on the R₀ part dropped beyond the truncation radius.
    pub truncation_bound: f64,
    /// Estimated remainder of the partial-wave sums.
    pub series_tail: f64,
}

/// The vectors v_ij with X·X′ = v_ij·y′.
pub fn plane_vectors(p: &HyperPoint) -> [[f64; 3]; 3] {
    let h = 3f64.sqrt() / 2.0;
    let (x, y) = (p.x, p.y);
    let mut v = [[0.0; 3]; 3];
    for i in 0..3 {
        v[0][i] = y[i];
        v[1][i] = -h * x[i] - 0.5 * y[i];
        v[2][i] = h * x[i] - 0.5 * y[i];
    }
    v
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// R₀(X, X′) integrated over the directions of y′ at |y′| = ρ′, times ρ′²:
/// (λρ′/(4π²|v|))[Q(κD₋) − Q(κD₊)], D∓ = √(R² + ρ′² ∓ 2|v|ρ′).
fn r0_shell(big_r: f64, v: f64, rp: f64, lambda: f64) -> Result<f64> {
    let k = lambda.sqrt();
    let s = big_r * big_r + rp * rp;
    if v <= 1e-12 * big_r {
        // limit v → 0 of the difference quotient
        let d2 = s;
        let t = k * d2.sqrt();
        let k2 = bessel_ik_scaled(2.0, t)?.k_scaled * (-t).exp();
        return Ok(lambda * rp / (4.0 * PI * PI) * 2.0 * k2 * rp / d2);
    }
    let dm = (s - 2.0 * v * rp).max(0.0).sqrt();
    let dp = (s + 2.0 * v * rp).sqrt();
    Ok(lambda * rp / (4.0 * PI * PI * v) * (q_fn(k * dm)? - q_fn(k * dp)?))
}

/// U_{ℓ+1}(w)/w, the angular factor of the even-ℓ terms.
fn f_ell(l: usize, w: f64) -> f64 {
    if w < 1e-300 {
        2.0 * gegenbauer_c2(l, 0.0)
    } else {
        chebyshev_u(l + 1, w) / w
    }
}

fn check_point(p: &HyperPoint, cfg: &PotentialConfig) -> Result<()> {
    let big_r = p.hyper_radius();
    if big_r < cfg.geometry.a * (1.0 - 1e-12) {
        return Err(Error::domain("potential point inside the hard core"));
    }
    for (r, _) in p.pair_radii() {
        if !(r >= cfg.min_plane_distance && r > 0.0) {
            return Err(Error::domain(format!(
                "point within {r:e} of a coincidence hyperplane (minimum {:e})",
                cfg.min_plane_distance
            )));
        }
    }
    Ok(())
}

/// R₀ part of one plane's potential, with the truncation bound.
fn plane_r0(xi: &RadialCharge, big_r: f64, v: f64, rt: f64, lambda: f64, q: &QuadratureSpec) -> Result<(f64, f64)> {
    let lo = xi.support_lo;
    let f = |rp: f64| -> Result<f64> { Ok(xi.eval(rp)? * r0_shell(big_r, v, rp, lambda)?) };
    let mid = v.clamp(lo, rt);
    let val = quad(f, Domain::finite(lo, mid), q)? + quad(f, Domain::finite(mid, rt), q)?;
    // Past rt: |ξ| ≤ M e^{−κ_d ρ′} and the shell factor is at most
    // (λρ′²/2π²)K₂(κD₋)/D₋² with D₋ ≥ ρ′ − R.
    let k = lambda.sqrt();
    let tail = if rt > big_r {
        quad(
            |rp| {
                let d = rp - big_r;
                let t = k * d;
                let k2 = bessel_ik_scaled(2.0, t)?.k_scaled * (-t).exp();
                Ok(xi.bound * (-xi.decay * rp).exp() * lambda * rp * rp / (2.0 * PI * PI) * k2 / (d * d))
            },
            Domain::half_line(rt, xi.scale()),
            &inner_spec(q),
        )?
    } else {
        f64::INFINITY
    };
    Ok((val, tail))
}

/// G^λξ at p, with per-plane contributions and error certificates.
pub fn potential_g_detailed(xi: &RadialCharge, p: &HyperPoint, cfg: &PotentialConfig) -> Result<PotentialValue> {
    cfg.kernel_cfg.validate()?;
    if (xi.a - cfg.geometry.a).abs() > 1e-12 * cfg.geometry.a {
        return Err(Error::domain("charge and geometry disagree on a"));
    }
    check_point(p, cfg)?;
    let lambda = cfg.lambda;
    let big_r = p.hyper_radius();
    let rt = cfg
        .domain_truncation_radius
        .unwrap_or_else(|| xi.cutoff(1e-18).max(big_r + 40.0 / lambda.sqrt()));
    let pw = PartialWaves::new(lambda, cfg.geometry.a, cfg.kernel_cfg.ell_max)?;
    let m = pw.moments(xi)?;
    let gq = pw.quotients(big_r)?;
    let vs = plane_vectors(p).map(|v| norm3(&v));

    let r0_parts: Vec<Result<(f64, f64)>> = std::thread::scope(|s| {
        let hs: Vec<_> = vs
            .iter()
            .map(|&v| s.spawn(move || plane_r0(xi, big_r, v, rt, lambda, &cfg.q)))
            .collect();
        hs.into_iter().map(|h| h.join().expect("plane worker panicked")).collect()
    });

    let mut planes = [0.0; 3];
    let mut truncation_bound = 0.0;
    let mut series_tail = 0.0f64;
    for (j, part) in r0_parts.into_iter().enumerate() {
        let (r0, tb) = part?;
        truncation_bound += tb;
        let w = (vs[j] / big_r).min(1.0);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut last = [0.0f64; 2];
        for l in (0..pw.len()).step_by(2) {
            let t = (l as f64 + 2.0) * f_ell(l, w) * pw.ik[l] * gq[l] * m[l];
            sum += t;
            abs_sum += t.abs();
            last = [last[1], t.abs()];
        }
        let n = pw.len() as f64;
        let rho_q = (cfg.geometry.a / big_r).powi(2) * ((n + 4.0) / (n + 2.0)).powi(2);
        let tail = last[0].max(last[1]) * rho_q / (1.0 - rho_q);
        if !(tail <= cfg.kernel_cfg.tail_tol * abs_sum.max(f64::MIN_POSITIVE)) {
            return Err(Error::no_conv(
                "potential partial waves",
                format!("tail {tail:e} vs sum {abs_sum:e} after {} orders", pw.len()),
            ));
        }
        series_tail = series_tail.max(tail / (PI * PI * big_r * big_r));
        planes[j] = r0 - sum / (PI * PI * big_r * big_r);
    }
    Ok(PotentialValue {
        value: planes[0] + planes[1] + planes[2],
        planes,
        truncation_bound,
        series_tail,
    })
}

/// G^λξ(p) = Σ over the three coincidence hyperplanes of ∫ R_D(X, X′) ξ.
pub fn potential_g(xi: &RadialCharge, p: &HyperPoint, cfg: &PotentialConfig) -> Result<f64> {
    Ok(potential_g_detailed(xi, p, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_vectors_are_projections() {
        let p = HyperPoint::new([0.3, -0.1, 0.7], [1.1, 0.4, -0.2]);
        let big_r = p.hyper_radius();
        let pr = p.pair_radii();
        for (v, (_, rho)) in plane_vectors(&p).iter().zip(pr) {
            let n = norm3(v);
            assert!(n <= big_r);
            assert!((n - rho).abs() < 1e-12, "{n} vs {rho}");
        }
    }

    #[test]
    fn f_ell_small_argument() {
        for l in [0usize, 2, 8] {
            assert!((f_ell(l, 1e-9) - f_ell(l, 0.0)).abs() < 1e-6 * f_ell(l, 0.0).abs().max(1.0));
        }
    }

    #[test]
    fn shell_limit_is_continuous() {
        let a = r0_shell(2.0, 0.0, 1.5, 1.0).unwrap();
        let b = r0_shell(2.0, 1e-6, 1.5, 1.0).unwrap();
        assert!((a / b - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_points_on_planes() {
        let g = ModelGeometry::unitary(1.0).unwrap();
        let cfg = PotentialConfig::new(1.0, g).unwrap();
        let xi = RadialCharge::test_charge(1.0, 1, 1.0).unwrap();
        let p = HyperPoint::new([0.0, 0.0, 0.0], [2.0, 0.0, 0.0]);
        assert!(potential_g(&xi, &p, &cfg).is_err());
    }
}
