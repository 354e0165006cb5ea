//! Quadratic forms Φ₁…Φ₄ and Φ_α^λ on radial charges, the norms they are
//! compared with, and the operator action Γ_α^λ.
//!
//! Every six-dimensional integral is reduced for radial ξ to radial
//! integrals over ρ, ρ′. The angular integrals of R₀ are elementary (see the
//! functions in [`crate::kernels`]); the g^λ parts go through partial-wave
//! moments M_ν = ∫ K_ν(κρ)/K_ν(κa) ξ(ρ) dρ, in which every even ℓ appears.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::eigenfunctions::{self, EigenfunctionSpec};
use crate::kernels::{ik_products, p1_fn, q_fn, KernelSeriesConfig};
use crate::specfun::{bessel_ik_scaled, chebyshev_u, gauss_legendre, integrate, k_ratio_ladder};
use crate::{Domain, Error, ModelGeometry, QuadratureSpec, Result};

type ChargeFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// Radial charge ξ(ρ) on [a, ∞) with an exponential decay certificate
/// |ξ(ρ)| ≤ bound·e^{−decay·ρ}.
#[derive(Clone)]
pub struct RadialCharge {
    pub a: f64,
    /// ξ vanishes identically below this radius; equals `a` unless restricted.
    pub support_lo: f64,
    pub decay: f64,
    pub bound: f64,
    pub vanishing_at_a: bool,
    pub label: String,
    f: Arc<ChargeFn>,
}

impl fmt::Debug for RadialCharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialCharge")
            .field("label", &self.label)
            .field("a", &self.a)
            .field("support_lo", &self.support_lo)
            .field("decay", &self.decay)
            .field("bound", &self.bound)
            .field("vanishing_at_a", &self.vanishing_at_a)
            .finish()
    }
}

impl RadialCharge {
    pub fn new<F>(a: f64, decay: f64, vanishing_at_a: bool, label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain("charge needs a > 0"));
        }
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(Error::domain("charge needs a positive decay rate"));
        }
        let mut c = Self {
            a,
            support_lo: a,
            decay,
            bound: 0.0,
            vanishing_at_a,
            label: label.into(),
            f: Arc::new(f),
        };
        let mut bound = 0.0f64;
        for k in 0..=240 {
            let rho = a + (k as f64 / 4.0) / decay;
            bound = bound.max(c.eval(rho)?.abs() * (decay * rho).exp());
        }
        c.bound = bound;
        if vanishing_at_a {
            let at_a = c.eval(a)?.abs();
            let peak = bound * (-decay * a).exp();
            if at_a > 1e-8 * peak.max(f64::MIN_POSITIVE) {
                return Err(Error::domain(format!("charge flagged vanishing but ξ(a) = {at_a:e}")));
            }
        }
        Ok(c)
    }

    /// (ρ−a)^p e^{−κρ}. The declared rate is κ/2 so that the certificate
    /// absorbs the polynomial factor.
    pub fn test_charge(a: f64, p: u32, kappa: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("test charges vanish at a, need p ≥ 1"));
        }
        Self::new(a, 0.5 * kappa, true, format!("(rho-a)^{p} exp(-{kappa} rho)"), move |rho| {
            Ok((rho - a).powi(p as i32) * (-kappa * rho).exp())
        })
    }

    /// The charge ξ_n(ρ) = (C/ρ)K_{is₀}(κ_n ρ) of an Efimov level.
    pub fn efimov(spec: &EigenfunctionSpec) -> Result<Self> {
        let s = *spec;
        Self::new(
            s.geometry.a,
            s.kappa(),
            true,
            format!("xi_{}", s.level.n),
            move |rho| eigenfunctions::xi(&s, rho),
        )
    }

    pub fn eval(&self, rho: f64) -> Result<f64> {
        if rho < self.a * (1.0 - 1e-12) {
            return Err(Error::domain(format!("charge evaluated at ρ = {rho} < a")));
        }
        if rho < self.support_lo {
            return Ok(0.0);
        }
        (self.f)(rho.max(self.a))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self {
            bound: self.bound * c.abs(),
            label: format!("{c}*{}", self.label),
            f: Arc::new(move |rho| Ok(c * f(rho)?)),
            ..self.clone()
        }
    }

    /// ξ + c·ζ.
    pub fn plus(&self, other: &RadialCharge, c: f64) -> Result<Self> {
        if self.a != other.a {
            return Err(Error::domain("charges live on different cores"));
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        let lo = self.support_lo.min(other.support_lo);
        let (lo_f, lo_g) = (self.support_lo, other.support_lo);
        Ok(Self {
            a: self.a,
            support_lo: lo,
            decay: self.decay.min(other.decay),
            bound: self.bound + c.abs() * other.bound,
            vanishing_at_a: self.vanishing_at_a && other.vanishing_at_a,
            label: format!("{} + {c}*{}", self.label, other.label),
            f: Arc::new(move |rho| {
                let u = if rho < lo_f { 0.0 } else { f(rho)? };
                let v = if rho < lo_g { 0.0 } else { g(rho)? };
                Ok(u + c * v)
            }),
        })
    }

    /// Same charge set to zero on [a, lo).
    pub fn restricted(&self, lo: f64) -> Result<Self> {
        if !(lo >= self.a) {
            return Err(Error::domain("restriction radius must be ≥ a"));
        }
        Ok(Self {
            support_lo: lo,
            vanishing_at_a: true,
            label: format!("{}|rho>={lo}", self.label),
            ..self.clone()
        })
    }

    /// Length over which the charge decays; sets the half-line maps.
    pub fn scale(&self) -> f64 {
        1.0 / self.decay
    }

    /// Radius past which |ξ| < bound·e^{−decay·ρ} is below `rel` of the bound at a.
    pub fn cutoff(&self, rel: f64) -> f64 {
        self.support_lo + (-rel.ln()) / self.decay
    }
}

/// Integrates a fallible integrand, reporting the first failure.
pub(crate) fn quad<F: FnMut(f64) -> Result<f64>>(mut f: F, dom: Domain, q: &QuadratureSpec) -> Result<f64> {
    let mut fail = None;
    let r = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                fail.get_or_insert(e);
                0.0
            }
        },
        dom,
        q,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    Ok(r?.value)
}

/// Tighter spec for inner integrals of nested quadratures.
pub(crate) fn inner_spec(q: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: q.abs_tol * 1e-2,
        rel_tol: (q.rel_tol * 1e-2).max(1e-14),
        ..*q
    }
}

pub fn default_forms_spec() -> QuadratureSpec {
    QuadratureSpec::with_tol(1e-15, 1e-9)
}

pub const DEFAULT_PARTIAL_WAVES: usize = 4096;

/// ‖ξ‖_{L²(B_a^c)}.
pub fn norm_l2(xi: &RadialCharge, q: &QuadratureSpec) -> Result<f64> {
    let v = quad(
        |rho| Ok(4.0 * PI * rho * rho * xi.eval(rho)?.powi(2)),
        Domain::half_line(xi.a, xi.scale()),
        q,
    )?;
    Ok(v.sqrt())
}

/// ∫_{B_b∖B_a} |ξ|²/(|y|−a) dy.
pub fn inner_weighted_sq(xi: &RadialCharge, g: &ModelGeometry, q: &QuadratureSpec) -> Result<f64> {
    check_core(xi, g)?;
    if !xi.vanishing_at_a {
        let at_a = xi.eval(g.a)?;
        if at_a != 0.0 {
            return Err(Error::Divergent(format!("weighted norm with ξ(a) = {at_a:e}")));
        }
    }
    quad(
        |rho| {
            let v = xi.eval(rho)?;
            Ok(4.0 * PI * rho * rho * v * v / (rho - g.a))
        },
        Domain::finite(g.a, g.b),
        q,
    )
}

/// ‖ξ‖_{L²_w} with w = (b−a)/(|y|−a) on B_b∖B_a and 1 outside.
pub fn norm_l2w(xi: &RadialCharge, g: &ModelGeometry, q: &QuadratureSpec) -> Result<f64> {
    let inner = inner_weighted_sq(xi, g, q)?;
    let outer = quad(
        |rho| Ok(4.0 * PI * rho * rho * xi.eval(rho)?.powi(2)),
        Domain::half_line(g.b, xi.scale()),
        q,
    )?;
    Ok(((g.b - g.a) * inner + outer).sqrt())
}

/// Regional Gagliardo seminorm ∬ |ξ(y)−ξ(y′)|²/|y−y′|⁴ over B_a^c × B_a^c;
/// the angular integral gives 16π² ∬ ρ²ρ′²(ξ−ξ′)²/(ρ²−ρ′²)².
pub fn gagliardo_seminorm_sq(xi: &RadialCharge, q: &QuadratureSpec) -> Result<f64> {
    let qi = inner_spec(q);
    let a = xi.a;
    let v = quad(
        |rho| {
            if rho <= a {
                return Ok(0.0);
            }
            let x0 = xi.eval(rho)?;
            let inner = quad(
                |rp| {
                    let d = x0 - xi.eval(rp)?;
                    let den = (rho - rp) * (rho + rp);
                    Ok(rp * rp * d * d / (den * den))
                },
                Domain::finite(a, rho),
                &qi,
            )?;
            Ok(rho * rho * inner)
        },
        Domain::half_line(a, xi.scale()),
        q,
    )?;
    Ok(32.0 * PI * PI * v)
}

/// ‖ξ‖_{H^{1/2}} = (‖ξ‖² + seminorm)^{1/2}.
pub fn norm_h_half(xi: &RadialCharge, q: &QuadratureSpec) -> Result<f64> {
    Ok((norm_l2(xi, q)?.powi(2) + gagliardo_seminorm_sq(xi, q)?).sqrt())
}

fn check_core(xi: &RadialCharge, g: &ModelGeometry) -> Result<()> {
    if (xi.a - g.a).abs() > 1e-12 * g.a {
        return Err(Error::domain("charge and geometry disagree on a"));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// ∫_{B_a} |y−y′|^{−4} dy′ for |y| = ρ > a.
pub fn ball_inverse_quartic(rho: f64, a: f64) -> f64 {
    let t = rho / a;
    if t <= 2.0 {
        let br = 1.0 / (t + 1.0) + (t - 1.0) / (2.0 * t) * ((t - 1.0) / (t + 1.0)).ln();
        return 2.0 * PI / (rho - a) * br;
    }
    // Same bracket expanded in 1/t; avoids the cancellation at large t.
    let x = 1.0 / t;
    let x2 = x * x;
    let mut p = x * x2;
    let mut s = 0.0;
    for k in 1..200 {
        let term = (2 * k) as f64 / (2 * k + 1) as f64 * p;
        s += term;
        if term < 1e-17 * s {
            break;
        }
        p *= x2;
    }
    2.0 * PI / rho * s
}

/// k(ρ, ρ′): R₀(0,y;0,y′) integrated over the direction of y′.
pub fn shell_kernel(rho: f64, rp: f64, lambda: f64) -> Result<f64> {
    let k = lambda.sqrt();
    let d = (rho - rp).abs();
    Ok(lambda / (4.0 * PI * PI * rho * rp) * (q_fn(k * d)? - q_fn(k * (rho + rp))?))
}

/// J(ρ) = ∫_{B_a} R₀(0,y;0,y′) dy′. Near the core it is the 1/|y−y′|⁴ ball
/// integral minus the smooth 𝓗 part; further out the direct radial integral.
pub fn ball_kernel_integral(rho: f64, a: f64, lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(rho > a) {
        return Err(Error::domain("ball integral needs |y| > a"));
    }
    let k = lambda.sqrt();
    if rho - a <= a {
        let jh = quad(
            |rp| Ok(rp * (p1_fn(k * (rho - rp))? - p1_fn(k * (rho + rp))?)),
            Domain::finite(0.0, a),
            q,
        )?;
        let jh = PI * lambda / rho * jh;
        Ok((ball_inverse_quartic(rho, a) - jh) / (4.0 * PI.powi(3)))
    } else {
        ball_kernel_direct(rho, a, lambda, q)
    }
}

/// ∫_0^a ρ′² k(ρ,ρ′) dρ′ without the split.
pub fn ball_kernel_direct(rho: f64, a: f64, lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    let k = lambda.sqrt();
    let v = quad(
        |rp| Ok(rp * (q_fn(k * (rho - rp))? - q_fn(k * (rho + rp))?)),
        Domain::finite(0.0, a),
        q,
    )?;
    Ok(lambda / (4.0 * PI * PI * rho) * v)
}

/// Φ₁ = ∫_{B_a^c} dy (∫_{B_a} R₀ dy′) |ξ(y)|².
pub fn phi1(xi: &RadialCharge, g: &ModelGeometry, lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    check_core(xi, g)?;
    check_lambda(lambda)?;
    let qi = inner_spec(q);
    quad(
        |rho| {
            let v = xi.eval(rho)?;
            if v == 0.0 || rho <= g.a {
                return Ok(0.0);
            }
            Ok(4.0 * PI * rho * rho * v * v * ball_kernel_integral(rho, g.a, lambda, &qi)?)
        },
        Domain::half_line(g.a, xi.scale()),
        q,
    )
}

/// Φ₂ = ½ ∬ R₀ |ξ(y)−ξ(y′)|² over B_a^c × B_a^c.
pub fn phi2(xi: &RadialCharge, g: &ModelGeometry, lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    check_core(xi, g)?;
    check_lambda(lambda)?;
    let qi = inner_spec(q);
    let a = g.a;
    let v = quad(
        |rho| {
            if rho <= a {
                return Ok(0.0);
            }
            let x0 = xi.eval(rho)?;
            let inner = quad(
                |rp| {
                    let d = x0 - xi.eval(rp)?;
                    Ok(rp * rp * shell_kernel(rho, rp, lambda)? * d * d)
                },
                Domain::finite(a, rho),
                &qi,
            )?;
            Ok(rho * rho * inner)
        },
        Domain::half_line(a, xi.scale()),
        q,
    )?;
    Ok(4.0 * PI * v)
}

/// Partial-wave data of g^λ at fixed λ and a, for orders ν = 2 … 2+n−1.
#[derive(Debug, Clone)]
pub struct PartialWaves {
    pub kappa: f64,
    pub a: f64,
    /// I_ν(κa)K_ν(κa).
    pub ik: Vec<f64>,
    ratios_a: Vec<f64>,
    k2a_scaled: f64,
}

impl PartialWaves {
    pub fn new(lambda: f64, a: f64, ell_max: usize) -> Result<Self> {
        check_lambda(lambda)?;
        let kappa = lambda.sqrt();
        let n = ell_max + 1;
        Ok(Self {
            kappa,
            a,
            ik: ik_products(kappa * a, kappa * a, n)?,
            ratios_a: k_ratio_ladder(kappa * a, 2.0, n)?,
            k2a_scaled: bessel_ik_scaled(2.0, kappa * a)?.k_scaled,
        })
    }

    pub fn len(&self) -> usize {
        self.ik.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ik.is_empty()
    }

    /// K_ν(κρ)/K_ν(κa) for every order; flushes to zero once negligible.
    pub fn quotients(&self, rho: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let y = self.kappa * rho;
        let ya = self.kappa * self.a;
        let ry = k_ratio_ladder(y, 2.0, n)?;
        let mut out = vec![0.0; n];
        let mut g = bessel_ik_scaled(2.0, y)?.k_scaled / self.k2a_scaled * (ya - y).exp();
        for j in 0..n {
            if g < 1e-300 {
                break;
            }
            out[j] = g;
            g *= ry[j] / self.ratios_a[j];
        }
        Ok(out)
    }

    /// M_ν = ∫ K_ν(κρ)/K_ν(κa) ξ(ρ) dρ on a graded Gauss–Legendre mesh.
    pub fn moments(&self, xi: &RadialCharge) -> Result<Vec<f64>> {
        let mut m = vec![0.0; self.len()];
        for (rho, w) in radial_mesh(xi) {
            let v = xi.eval(rho)?;
            if v == 0.0 {
                continue;
            }
            let gq = self.quotients(rho)?;
            for (mj, gj) in m.iter_mut().zip(gq) {
                *mj += w * v * gj;
            }
        }
        Ok(m)
    }
}

/// Composite 16-point Gauss–Legendre nodes on [support_lo, cutoff]: panels
/// shrink geometrically toward the start, where K_ν(κρ)/K_ν(κa) has width a/ν.
pub fn radial_mesh(xi: &RadialCharge) -> Vec<(f64, f64)> {
    let lo = xi.support_lo;
    let len = xi.a.min(xi.scale());
    let hi = xi.cutoff(1e-22);
    let mut edges = vec![lo];
    for k in (0..=34).rev() {
        edges.push(lo + len * 0.5f64.powi(k));
    }
    let mut step = len;
    let mut x = lo + len;
    while x < hi {
        step *= 1.25;
        x += step;
        edges.push(x);
    }
    let (nodes, weights) = gauss_legendre::<f64>(16);
    let mut out = Vec::with_capacity(edges.len() * 16);
    for w in edges.windows(2) {
        let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for (t, wt) in nodes.iter().zip(&weights) {
            out.push((c + h * t, h * wt));
        }
    }
    out
}

/// A partial-wave sum with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSum {
    pub value: f64,
    pub tail: f64,
    pub terms: usize,
}

/// Σ over even ℓ of `terms`, extrapolating the tail from the power law of the
/// last terms. A tail that decays no faster than 1/ν is reported as divergent.
fn even_wave_sum(terms: &[f64]) -> Result<WaveSum> {
    let mut sum = 0.0;
    for l in (0..terms.len()).step_by(2) {
        sum += terms[l];
    }
    let last = (terms.len() - 1) & !1;
    if last < 4 {
        return Err(Error::domain("need at least three even partial waves"));
    }
    let (t1, t0) = (terms[last], terms[last - 2]);
    let tail = if t1 == 0.0 || t0 == 0.0 {
        0.0
    } else {
        let (n1, n0) = (last as f64 + 2.0, last as f64);
        let p = (t0.abs() / t1.abs()).ln() / (n1 / n0).ln();
        if !(p > 1.05) {
            return Err(Error::Divergent(format!(
                "partial waves decay like nu^-{p:.3}; the charge must vanish at a"
            )));
        }
        t1 * n1 / (2.0 * (p - 1.0))
    };
    Ok(WaveSum {
        value: sum + tail,
        tail,
        terms: last / 2 + 1,
    })
}

/// ∫_{−1}^{1} C_ℓ²(u) du; ℓ+2 for even ℓ.
fn c_ell(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        (l + 2) as f64
    } else {
        0.0
    }
}

/// ∫_{−1}^{1} C_ℓ²(−u/2) du = U_{ℓ+1}(½) − U_{ℓ+1}(−½).
fn e_ell(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        2.0 * chebyshev_u(l + 1, 0.5)
    } else {
        0.0
    }
}

/// Φ₃ = −∬ g^λ(0,y;0,y′) ξ(y)ξ(y′) = (4/π) Σ (ℓ+2) c_ℓ I_νK_ν(κa) M_ν².
pub fn phi3_series(xi: &RadialCharge, g: &ModelGeometry, lambda: f64, ell_max: usize) -> Result<WaveSum> {
    check_core(xi, g)?;
    let pw = PartialWaves::new(lambda, g.a, ell_max)?;
    let m = pw.moments(xi)?;
    let terms: Vec<f64> = (0..pw.len())
        .map(|l| 4.0 / PI * (l as f64 + 2.0) * c_ell(l) * pw.ik[l] * m[l] * m[l])
        .collect();
    even_wave_sum(&terms)
}

pub fn phi3(xi: &RadialCharge, g: &ModelGeometry, lambda: f64, ell_max: usize) -> Result<f64> {
    Ok(phi3_series(xi, g, lambda, ell_max)?.value)
}

/// The ℓ = 0 term alone: (16/π)(I₂/K₂)(κa)(∫K₂(κρ)ξ dρ)².
pub fn phi3_monopole(xi: &RadialCharge, g: &ModelGeometry, lambda: f64) -> Result<f64> {
    check_core(xi, g)?;
    let pw = PartialWaves::new(lambda, g.a, 1)?;
    let m = pw.moments(xi)?;
    Ok(16.0 / PI * pw.ik[0] * m[0] * m[0])
}

/// D∓ = √(ρ² + ρ′² ∓ ρρ′), the extreme distances in the Φ₄ configuration.
fn d_pair(rho: f64, rp: f64) -> (f64, f64) {
    let s = rho * rho + rp * rp;
    ((s - rho * rp).sqrt(), (s + rho * rp).sqrt())
}

/// Φ₄ = −2∬ R_D(0,y; (√3/2)y′, −y′/2) ξξ′, with the R₀ part reduced in
/// closed form over the angle and the g part through partial waves.
pub fn phi4(xi: &RadialCharge, g: &ModelGeometry, cfg: &KernelSeriesConfig, q: &QuadratureSpec) -> Result<f64> {
    Ok(phi4_parts(xi, g, cfg, q)?.0)
}

/// (Φ₄, R₀ part, g part).
pub fn phi4_parts(xi: &RadialCharge, g: &ModelGeometry, cfg: &KernelSeriesConfig, q: &QuadratureSpec) -> Result<(f64, f64, f64)> {
    check_core(xi, g)?;
    cfg.validate()?;
    let lambda = cfg.lambda;
    let k = cfg.kappa();
    let qi = inner_spec(q);
    let lo = xi.support_lo;
    let r0 = quad(
        |rho| {
            let x0 = xi.eval(rho)?;
            if x0 == 0.0 {
                return Ok(0.0);
            }
            let inner = quad(
                |rp| {
                    let (dm, dp) = d_pair(rho, rp);
                    Ok(rp * xi.eval(rp)? * (q_fn(k * dm)? - q_fn(k * dp)?))
                },
                Domain::half_line(lo, xi.scale()),
                &qi,
            )?;
            Ok(rho * x0 * inner)
        },
        Domain::half_line(lo, xi.scale()),
        q,
    )?;
    let r0 = -4.0 * lambda / PI * r0;
    let pw = PartialWaves::new(lambda, g.a, cfg.ell_max)?;
    let m = pw.moments(xi)?;
    let terms: Vec<f64> = (0..pw.len())
        .map(|l| 8.0 / PI * (l as f64 + 2.0) * e_ell(l) * pw.ik[l] * m[l] * m[l])
        .collect();
    let gp = even_wave_sum(&terms)?.value;
    Ok((r0 + gp, r0, gp))
}

/// A₁(λ) = (1/4π²)[a + ((b²−a²)/2b) log((b−a)/(b+a))]·λ(a+b)K₂(√λ(a+b)).
pub fn a1_constant(g: &ModelGeometry, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (a, b) = (g.a, g.b);
    let br = a + (b * b - a * a) / (2.0 * b) * ((b - a) / (b + a)).ln();
    let t = lambda.sqrt() * (a + b);
    let k2 = bessel_ik_scaled(2.0, t)?.k_scaled * (-t).exp();
    Ok(br * lambda * (a + b) * k2 / (4.0 * PI * PI))
}

/// B₁ = 1/(4π²(b−a)).
pub fn b1_constant(g: &ModelGeometry) -> f64 {
    1.0 / (4.0 * PI * PI * (g.b - g.a))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundFlags {
    /// A₁(λ)·∫_{B_b∖B_a}|ξ|²/(|y|−a) < Φ₁.
    pub phi1_lower: bool,
    /// Φ₁ < B₁‖ξ‖²_{L²_w}.
    pub phi1_upper: bool,
    /// Φ₂ < seminorm/(8π³).
    pub phi2_upper: bool,
    /// 0 < Φ₃ < ‖ξ‖²/(5π²a).
    pub phi3_upper: bool,
    pub positivity: bool,
}

impl BoundFlags {
    pub fn all(&self) -> bool {
        self.phi1_lower && self.phi1_upper && self.phi2_upper && self.phi3_upper && self.positivity
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValues {
    pub phi1_lower: f64,
    pub phi1_upper: f64,
    pub phi2_upper: f64,
    pub phi3_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormReport {
    pub lambda: f64,
    pub alpha: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
    pub phi_alpha: f64,
    pub norm_l2: f64,
    pub norm_l2w: f64,
    pub norm_h_half: f64,
    pub seminorm_sq: f64,
    pub bounds: BoundValues,
    pub bound_flags: BoundFlags,
}

impl FormReport {
    /// Φ₀^λ/(√λ‖ξ‖²), the empirical constant of the large-λ lower bound.
    pub fn empirical_a0(&self) -> f64 {
        (self.phi_alpha - self.alpha * self.norm_l2.powi(2)) / (self.lambda.sqrt() * self.norm_l2.powi(2))
    }
}

/// Φ_α^λ = (α + √λ/4π)‖ξ‖² + Φ₁ + Φ₂ + Φ₃ + Φ₄ with α = `g.alpha`.
pub fn phi_alpha(
    xi: &RadialCharge,
    g: &ModelGeometry,
    lambda: f64,
    cfg: &KernelSeriesConfig,
    q: &QuadratureSpec,
) -> Result<FormReport> {
    check_lambda(lambda)?;
    let cfg = KernelSeriesConfig { lambda, ..*cfg };
    let phi1 = phi1(xi, g, lambda, q)?;
    let phi2 = phi2(xi, g, lambda, q)?;
    let phi3 = phi3(xi, g, lambda, cfg.ell_max)?;
    let phi4 = phi4(xi, g, &cfg, q)?;
    let norm_l2 = norm_l2(xi, q)?;
    let norm_l2w = norm_l2w(xi, g, q)?;
    let seminorm_sq = gagliardo_seminorm_sq(xi, q)?;
    let inner_w = inner_weighted_sq(xi, g, q)?;
    let n2 = norm_l2 * norm_l2;
    let phi_alpha = (g.alpha + lambda.sqrt() / (4.0 * PI)) * n2 + phi1 + phi2 + phi3 + phi4;
    let bounds = BoundValues {
        phi1_lower: a1_constant(g, lambda)? * inner_w,
        phi1_upper: b1_constant(g) * norm_l2w * norm_l2w,
        phi2_upper: seminorm_sq / (8.0 * PI.powi(3)),
        phi3_upper: n2 / (5.0 * PI * PI * g.a),
    };
    let bound_flags = BoundFlags {
        phi1_lower: bounds.phi1_lower < phi1,
        phi1_upper: phi1 < bounds.phi1_upper,
        phi2_upper: phi2 < bounds.phi2_upper,
        phi3_upper: phi3 < bounds.phi3_upper,
        positivity: phi1 > 0.0 && phi2 >= 0.0 && phi3 > 0.0,
    };
    Ok(FormReport {
        lambda,
        alpha: g.alpha,
        phi1,
        phi2,
        phi3,
        phi4,
        phi_alpha,
        norm_l2,
        norm_l2w,
        norm_h_half: (n2 + seminorm_sq).sqrt(),
        seminorm_sq,
        bounds,
        bound_flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResidual {
    pub rho: f64,
    /// The five addends T₁…T₅ of Γ_α^λ ξ at ρ.
    pub terms: [f64; 5],
    pub total: f64,
    pub scale: f64,
}

impl GammaResidual {
    fn from_terms(rho: f64, terms: [f64; 5]) -> Self {
        let mut total = 0.0;
        let mut scale = 0.0f64;
        for t in terms {
            total += t;
            scale = scale.max(t.abs());
        }
        Self { rho, terms, total, scale }
    }

    pub fn relative(&self) -> f64 {
        self.total.abs() / self.scale
    }
}

/// 𝓛/𝓗 evaluation of T₃ = ∫_{B_a^c} R₀(0,y;0,y′)(ξ(y) − ξ(y′)) dy′.
/// On [a, 2ρ−a] the 1/|y−y′|⁴ part is a principal value, folded about ρ;
/// the 𝓗 remainder is only logarithmically singular. Past 2ρ−a the exact
/// kernel is used.
pub fn gamma_t3(xi: &RadialCharge, rho: f64, lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    let a = xi.a;
    let k = lambda.sqrt();
    let x0 = xi.eval(rho)?;
    let f = |rp: f64| -> Result<f64> {
        let den = (rho - rp) * (rho + rp);
        Ok(rp * rp * (x0 - xi.eval(rp)?) / (den * den))
    };
    let half = rho - a;
    let folded = quad(|s| Ok(f(rho + s)? + f(rho - s)?), Domain::finite(0.0, half), q)?;
    let hpart = |rp: f64| -> Result<f64> {
        Ok(rp * (x0 - xi.eval(rp)?) * (p1_fn(k * (rho - rp).abs())? - p1_fn(k * (rho + rp))?))
    };
    let h = quad(hpart, Domain::finite(a, rho), q)? + quad(hpart, Domain::finite(rho, rho + half), q)?;
    let far = quad(
        |rp| Ok(rp * rp * shell_kernel(rho, rp, lambda)? * (x0 - xi.eval(rp)?)),
        Domain::half_line(rho + half, xi.scale().max(rho)),
        q,
    )?;
    Ok(folded / (PI * PI) - lambda / (4.0 * PI * PI * rho) * h + far)
}

/// Γ_α^λ ξ at each sample radius, term by term, with α = `g.alpha`.
pub fn gamma_action(
    xi: &RadialCharge,
    g: &ModelGeometry,
    lambda: f64,
    rho_samples: &[f64],
    ell_max: usize,
    q: &QuadratureSpec,
) -> Result<Vec<GammaResidual>> {
    check_core(xi, g)?;
    check_lambda(lambda)?;
    if !xi.vanishing_at_a {
        return Err(Error::domain("the operator action needs ξ(a) = 0"));
    }
    let k = lambda.sqrt();
    let pw = PartialWaves::new(lambda, g.a, ell_max)?;
    let m = pw.moments(xi)?;
    let mut out = Vec::with_capacity(rho_samples.len());
    for &rho in rho_samples {
        if !(rho > g.a) {
            return Err(Error::domain(format!("sample radius {rho} not outside the core")));
        }
        let x0 = xi.eval(rho)?;
        let t1 = (g.alpha + k / (4.0 * PI)) * x0;
        let t2 = x0 * ball_kernel_integral(rho, g.a, lambda, q)?;
        let t3 = gamma_t3(xi, rho, lambda, q)?;
        let gq = pw.quotients(rho)?;
        let n = pw.len();
        let t4_terms: Vec<f64> = (0..n)
            .map(|l| (l as f64 + 2.0) * c_ell(l) * pw.ik[l] * gq[l] * m[l] / (PI * PI * rho * rho))
            .collect();
        let t5_terms: Vec<f64> = (0..n)
            .map(|l| 2.0 * (l as f64 + 2.0) * e_ell(l) * pw.ik[l] * gq[l] * m[l] / (PI * PI * rho * rho))
            .collect();
        let t4 = even_wave_sum(&t4_terms)?.value;
        let t5_r0 = quad(
            |rp| {
                let (dm, dp) = d_pair(rho, rp);
                Ok(rp * xi.eval(rp)? * (q_fn(k * dm)? - q_fn(k * dp)?))
            },
            Domain::half_line(xi.support_lo, xi.scale()),
            q,
        )?;
        let t5 = -lambda / (PI * PI * rho) * t5_r0 + even_wave_sum(&t5_terms)?.value;
        out.push(GammaResidual::from_terms(rho, [t1, t2, t3, t4, t5]));
    }
    Ok(out)
}

/// ‖𝓗^λ‖_{L¹} = 4π√λ ∫₀^∞ h(t)/t² dt with h(t) = 1 − t²K₂(t)/2.
pub fn h_kernel_l1(lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    check_lambda(lambda)?;
    let v = quad(
        |t| Ok(crate::kernels::h_fn(t)? / (t * t)),
        Domain::half_line(0.0, 1.0),
        q,
    )?;
    Ok(4.0 * PI * lambda.sqrt() * v)
}
