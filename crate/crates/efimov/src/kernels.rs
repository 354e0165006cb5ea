//! Free resolvent kernel R₀^λ of −Δ + λ in ℝ⁶, its Gegenbauer expansion, the
//! hard-core correction g^λ and the Dirichlet kernel R_D^λ = R₀^λ + g^λ.
//!
//! Also hosts the one-variable functions that appear after the angular
//! integrals are done in closed form: Q(t) = K₁(t)/t, p₁(t) = 1/t² − K₁(t)/t
//! and h(t) = 1 − t²K₂(t)/2.

use std::f64::consts::PI;

use crate::eigenfunctions::HyperPoint;
use crate::specfun::gamma::digamma_int;
use crate::specfun::{bessel_ik_scaled, gegenbauer_c2_all, i_ratio_ladder, integrate, k_ratio_ladder};
use crate::{Domain, Error, Integral, QuadratureSpec, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSeriesConfig {
    pub lambda: f64,
    pub a: f64,
    pub ell_max: usize,
    /// Truncation threshold for the tail bound, relative to the sum of the
    /// absolute term envelopes.
    pub tail_tol: f64,
}

impl KernelSeriesConfig {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        let c = Self {
            lambda,
            a,
            ell_max: 64,
            tail_tol: 1e-12,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_ell_max(self, ell_max: usize) -> Self {
        Self { ell_max, ..self }
    }

    pub fn with_tail_tol(self, tail_tol: f64) -> Self {
        Self { tail_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::domain(format!("a must be positive, got {}", self.a)));
        }
        if self.ell_max == 0 {
            return Err(Error::domain("ell_max must be positive"));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::domain("tail_tol must be positive"));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        self.lambda.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub terms_used: usize,
    /// Bound on the neglected terms, absolute.
    pub tail_bound: f64,
    /// Σ of the term envelopes; the tail test is tail_bound ≤ tail_tol·scale.
    pub scale: f64,
}

/// K_ν(t) that flushes to zero instead of reporting underflow.
fn k_flush(nu: f64, t: f64) -> Result<f64> {
    let b = bessel_ik_scaled(nu, t)?;
    Ok(b.k_scaled * (-t).exp())
}

/// Q(t) = K₁(t)/t; the antiderivative of −K₂(t)/t.
pub fn q_fn(t: f64) -> Result<f64> {
    Ok(k_flush(1.0, t)? / t)
}

/// p₁(t) = 1/t² − K₁(t)/t, finite as t → 0 apart from a logarithm.
pub fn p1_fn(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("p1 needs t > 0"));
    }
    if t >= 2.0 {
        return Ok(1.0 / (t * t) - q_fn(t)?);
    }
    let x = t * t / 4.0;
    let l = (t / 2.0).ln();
    let mut w = 1.0; // x^k/(k!(k+1)!)
    let mut sum = 0.0;
    for k in 0..60usize {
        if k > 0 {
            w *= x / (k * (k + 1)) as f64;
        }
        let psi = digamma_int::<f64>(k + 1) + digamma_int::<f64>(k + 2);
        let term = w * (-0.5 * l + 0.25 * psi);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

/// h(t) = 1 − t²K₂(t)/2, increasing from 0 to 1.
pub fn h_fn(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("h needs t > 0"));
    }
    if t >= 2.0 {
        return Ok(1.0 - 0.5 * t * t * k_flush(2.0, t)?);
    }
    let x = t * t / 4.0;
    let l = 2.0 * (t / 2.0).ln();
    let mut w = 0.5; // x^k/(k!(k+2)!)
    let mut sum = 0.0;
    for k in 0..60usize {
        if k > 0 {
            w *= x / (k * (k + 2)) as f64;
        }
        let psi = digamma_int::<f64>(k + 1) + digamma_int::<f64>(k + 3);
        let term = w * (l - psi);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    Ok(x + x * x * sum)
}

/// h′(t) = t²K₁(t)/2.
pub fn h_prime(t: f64) -> Result<f64> {
    Ok(0.5 * t * t * k_flush(1.0, t)?)
}

fn diff_norm(x: &HyperPoint, xp: &HyperPoint) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        s += (x.x[i] - xp.x[i]).powi(2) + (x.y[i] - xp.y[i]).powi(2);
    }
    s.sqrt()
}

fn cosine(x: &HyperPoint, xp: &HyperPoint) -> f64 {
    (x.dot(xp) / (x.hyper_radius() * xp.hyper_radius())).clamp(-1.0, 1.0)
}

/// R₀^λ as a function of the distance d = |X − X′|.
pub fn r0_of_distance(d: f64, lambda: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("free kernel is singular at coincident points"));
    }
    let k = lambda.sqrt();
    Ok(lambda / (8.0 * PI.powi(3)) * k_flush(2.0, k * d)? / (d * d))
}

/// R₀^λ(X, X′) = λ/(2π)³ · K₂(√λ|X−X′|)/|X−X′|².
pub fn r0_kernel(x: &HyperPoint, xp: &HyperPoint, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda must be positive"));
    }
    r0_of_distance(diff_norm(x, xp), lambda)
}

/// I_ν(x) K_ν(y) for ν = 2, 3, …, 2+n−1, with x ≤ y, via ratio ladders.
pub fn ik_products(x: f64, y: f64, n: usize) -> Result<Vec<f64>> {
    let bx = bessel_ik_scaled(2.0, x)?;
    let by = bessel_ik_scaled(2.0, y)?;
    let ir = i_ratio_ladder(x, 2.0, n)?;
    let kr = k_ratio_ladder(y, 2.0, n)?;
    let mut out = Vec::with_capacity(n);
    let mut p = bx.i_scaled * by.k_scaled * (x - y).exp();
    for j in 0..n {
        out.push(p);
        p *= ir[j] * kr[j];
    }
    Ok(out)
}

/// K_ν(y)/K_ν(y_a) for ν = 2, …, 2+n−1; at most 1 when y ≥ y_a.
pub fn k_quotients(y: f64, y_a: f64, n: usize) -> Result<Vec<f64>> {
    let by = bessel_ik_scaled(2.0, y)?;
    let ba = bessel_ik_scaled(2.0, y_a)?;
    let ry = k_ratio_ladder(y, 2.0, n)?;
    let ra = k_ratio_ladder(y_a, 2.0, n)?;
    let mut out = Vec::with_capacity(n);
    let mut g = by.k_scaled / ba.k_scaled * (y_a - y).exp();
    for j in 0..n {
        out.push(g);
        g *= ry[j] / ra[j];
    }
    Ok(out)
}

/// Sums Σ_ℓ term(ℓ) with a geometric tail certificate. `env(ℓ)` bounds
/// |term(ℓ)| for every admissible angle; `q` is the asymptotic ratio.
fn sum_series(
    n_avail: usize,
    q: f64,
    tail_tol: f64,
    fixed: Option<usize>,
    mut term: impl FnMut(usize) -> (f64, f64),
) -> Result<KernelValue> {
    let mut sum = 0.0;
    let mut env_sum = 0.0;
    let mut prev_env = f64::NAN;
    let mut tail = f64::INFINITY;
    let limit = fixed.unwrap_or(n_avail).min(n_avail);
    for l in 0..limit {
        let (t, env) = term(l);
        sum += t;
        env_sum += env;
        if l >= 1 {
            tail = if env == 0.0 {
                0.0
            } else {
                let lf = l as f64;
                let rho_q = q * ((lf + 3.0) / (lf + 2.0)).powi(3);
                let rho = rho_q.max(env / prev_env);
                if rho < 1.0 {
                    2.0 * env * rho / (1.0 - rho)
                } else {
                    f64::INFINITY
                }
            };
            if fixed.is_none() && l >= 2 && tail <= tail_tol * env_sum {
                return Ok(KernelValue {
                    value: sum,
                    terms_used: l + 1,
                    tail_bound: tail,
                    scale: env_sum,
                });
            }
        }
        prev_env = env;
    }
    if fixed.is_some() {
        return Ok(KernelValue {
            value: sum,
            terms_used: limit,
            tail_bound: tail,
            scale: env_sum,
        });
    }
    Err(Error::no_conv(
        "kernel series",
        format!("tail bound {tail:e} after {limit} terms (scale {env_sum:e})"),
    ))
}

/// C_ℓ²(1) = (ℓ+1)(ℓ+2)(ℓ+3)/6.
fn c2_at_one(l: usize) -> f64 {
    let l = l as f64;
    (l + 1.0) * (l + 2.0) * (l + 3.0) / 6.0
}

fn r0_series_impl(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig, fixed: Option<usize>) -> Result<KernelValue> {
    cfg.validate()?;
    let (r1, r2) = (x.hyper_radius(), xp.hyper_radius());
    if (r1 - r2).abs() <= 1e-6 * cfg.a {
        return Err(Error::domain("free kernel series needs distinct hyper-radii"));
    }
    let (small, large) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    let k = cfg.kappa();
    let n = fixed.unwrap_or(cfg.ell_max + 1);
    let ik = ik_products(k * small, k * large, n)?;
    let c2 = gegenbauer_c2_all(n - 1, cosine(x, xp));
    let pref = 1.0 / (2.0 * PI.powi(3) * small * small * large * large);
    sum_series(n, small / large, cfg.tail_tol, fixed, |l| {
        let base = (l as f64 + 2.0) * ik[l] * pref;
        (base * c2[l], base * c2_at_one(l))
    })
}

/// Gegenbauer expansion of R₀^λ; I on the smaller hyper-radius, K on the larger.
pub fn r0_series(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig) -> Result<KernelValue> {
    r0_series_impl(x, xp, cfg, None)
}

/// The first `n_terms` terms of the R₀ series, with the tail bound at that cut.
pub fn r0_series_terms(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig, n_terms: usize) -> Result<KernelValue> {
    r0_series_impl(x, xp, cfg, Some(n_terms.max(2)))
}

fn g_kernel_impl(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig, fixed: Option<usize>) -> Result<KernelValue> {
    cfg.validate()?;
    let (r1, r2) = (x.hyper_radius(), xp.hyper_radius());
    let a = cfg.a;
    if r1 < a * (1.0 - 1e-12) || r2 < a * (1.0 - 1e-12) {
        return Err(Error::domain("g kernel needs both points outside the hard core"));
    }
    let (r1, r2) = (r1.max(a), r2.max(a));
    let k = cfg.kappa();
    let n = fixed.unwrap_or(cfg.ell_max + 1);
    // (I_ν/K_ν)(κa)·K_ν(κ|X|)·K_ν(κ|X′|) = [I_ν(κa)K_ν(κ|X|)]·[K_ν(κ|X′|)/K_ν(κa)]
    let ik = ik_products(k * a, k * r1, n)?;
    let kq = k_quotients(k * r2, k * a, n)?;
    let c2 = gegenbauer_c2_all(n - 1, cosine(x, xp));
    let pref = -1.0 / (2.0 * PI.powi(3) * r1 * r1 * r2 * r2);
    sum_series(n, (a / r1) * (a / r2), cfg.tail_tol, fixed, |l| {
        let base = (l as f64 + 2.0) * ik[l] * kq[l] * pref;
        (base * c2[l], base.abs() * c2_at_one(l))
    })
}

/// Series for the hard-core correction g^λ.
pub fn g_kernel(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig) -> Result<KernelValue> {
    g_kernel_impl(x, xp, cfg, None)
}

pub fn g_kernel_terms(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig, n_terms: usize) -> Result<KernelValue> {
    g_kernel_impl(x, xp, cfg, Some(n_terms.max(2)))
}

/// R_D^λ = R₀^λ (closed form) + g^λ (series).
pub fn rd_kernel(x: &HyperPoint, xp: &HyperPoint, cfg: &KernelSeriesConfig) -> Result<KernelValue> {
    let r0 = r0_kernel(x, xp, cfg.lambda)?;
    let g = g_kernel(x, xp, cfg)?;
    Ok(KernelValue {
        value: r0 + g.value,
        ..g
    })
}

/// ∫_{ℝ³} dy′ R₀^λ(x, y; x′, y′) as a function of δ = |x − x′|:
/// 4π ∫₀^∞ s² R₀(√(δ² + s²)) ds.
pub fn r0_marginal(delta: f64, lambda: f64, q: &QuadratureSpec) -> Result<Integral> {
    if !(delta > 0.0) {
        return Err(Error::domain("marginal needs delta > 0"));
    }
    let mut fail = None;
    let scale = delta.max(1.0 / lambda.sqrt());
    let r = integrate(
        |s| match r0_of_distance(delta.hypot(s), lambda) {
            Ok(v) => 4.0 * PI * s * s * v,
            Err(e) => {
                fail.get_or_insert(e);
                0.0
            }
        },
        Domain::half_line(0.0, scale),
        q,
    )?;
    fail.map_or(Ok(r), Err)
}

/// e^{−√λ δ}/(4πδ), the three-dimensional Yukawa kernel.
pub fn yukawa(delta: f64, lambda: f64) -> f64 {
    (-lambda.sqrt() * delta).exp() / (4.0 * PI * delta)
}
