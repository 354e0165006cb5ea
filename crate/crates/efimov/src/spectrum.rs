//! Universal constants s₀, θ and the Efimov levels E_n = −(t_n/a)², where t_n
//! are the positive zeros of K_{is₀}.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{arg_gamma_one_plus_is, bessel_k_imag, bisect_secant, QuadratureSpec};
use crate::{Error, Result};

/// Hard-core radius `a`, weight parameter `b > a` and boundary parameter `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelGeometry {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl ModelGeometry {
    pub fn new(a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain(format!("hard-core radius must be positive, got {a}")));
        }
        if !(b > a && b.is_finite()) {
            return Err(Error::domain(format!("need b > a, got a={a}, b={b}")));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("alpha must be finite"));
        }
        Ok(Self { a, b, alpha })
    }

    /// Unitary limit with b = 2a.
    pub fn unitary(a: f64) -> Result<Self> {
        Self::new(a, 2.0 * a, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConstants {
    pub s0: f64,
    /// arg Γ(1 + i s₀).
    pub theta: f64,
    /// e^{−2π/s₀}
    pub geometric_ratio: f64,
    /// F(s₀) as evaluated at the returned root.
    pub f_residual: f64,
    /// Final sign-change bracket of F.
    pub bracket: (f64, f64),
}

impl SpectralConstants {
    /// Leading-order root 2 e^{(θ − nπ)/s₀}.
    pub fn asymptotic_root(&self, n: usize) -> f64 {
        2.0 * ((self.theta - n as f64 * PI) / self.s0).exp()
    }

    /// Length ratio e^{π/s₀} between consecutive trimers.
    pub fn length_ratio(&self) -> f64 {
        (PI / self.s0).exp()
    }
}

/// F(s) = −s cosh(πs/2) + (8/√3) sinh(πs/6).
pub fn f_s0(s: f64) -> f64 {
    -s * (PI * s / 2.0).cosh() + 8.0 / 3f64.sqrt() * (PI * s / 6.0).sinh()
}

pub fn solve_s0(tol: f64) -> Result<SpectralConstants> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let root = bisect_secant(|s| Ok(f_s0(s)), 0.1, 2.0, 1e-16, 200)?;
    let fx = f_s0(root.x);
    if fx.abs() >= tol {
        return Err(Error::no_conv("s0", format!("|F(s0)| = {fx:e} not below {tol:e}")));
    }
    let s0 = root.x;
    Ok(SpectralConstants {
        s0,
        theta: arg_gamma_one_plus_is(s0),
        geometric_ratio: (-2.0 * PI / s0).exp(),
        f_residual: fx,
        bracket: (root.lo, root.hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfimovLevel {
    pub n: usize,
    pub t_n: f64,
    pub mu_n: f64,
    pub e_n: f64,
    /// t_n / (2 e^{(θ−nπ)/s₀}) − 1, from the convergent small-t series.
    pub epsilon_n: f64,
    /// Certified bracket of t_n: K_{is₀} changes sign across it.
    pub bracket: (f64, f64),
    /// K_{is₀}(t_n).
    pub k_at_root: f64,
}

/// Smallest t the root search will attempt.
const T_FLOOR: f64 = 1e-280;

fn kis_spec() -> QuadratureSpec<f64> {
    QuadratureSpec::with_tol(1e-15, 1e-13)
}

/// Roots t_1 > t_2 > … > t_{n_max} of K_{is₀}, each bracketed around its
/// asymptotic guess and refined to relative width `min(tol, 1e-14)`.
pub fn bessel_k_imag_roots(c: &SpectralConstants, n_max: usize, tol: f64) -> Result<Vec<crate::Root>> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let q = kis_spec();
    let k = |t: f64| bessel_k_imag(c.s0, t, &q);
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let guess = c.asymptotic_root(n);
        if guess < T_FLOOR {
            return Err(Error::Underflow(format!(
                "t_{n} ≈ {guess:e} is below the evaluable range; achievable n_max = {}",
                n - 1
            )));
        }
        let mut found = None;
        // Half-widths in log t, all below the half-spacing π/(2s₀) so that a
        // bracket never holds two roots.
        for frac in [0.25, 0.375, 0.49] {
            let w = (frac * PI / c.s0).exp();
            let (lo, hi) = (guess / w, guess * w);
            let (klo, khi) = (k(lo)?, k(hi)?);
            if klo * khi < 0.0 {
                found = Some((lo, hi));
                break;
            }
        }
        let (lo, hi) = found.ok_or(Error::Bracket { lo: guess, hi: guess })?;
        let root = bisect_secant(k, lo, hi, tol.min(1e-14), 400)?;
        if root.fx.abs() >= tol {
            return Err(Error::no_conv("K_is root", format!("|K(t_{n})| = {:e}", root.fx)));
        }
        out.push(root);
    }
    Ok(out)
}

/// Solves for the phase defect φ_n = s ln(t_n/2) − θ + nπ using the
/// convergent series of K_{is}; then t_n = 2e^{(θ−nπ)/s} e^{φ_n/s}.
///
/// Writing w_k = (t/2)^{2k}/k! and P_k = Π_{j≤k}(j + is), K_{is}(t) is a
/// positive multiple of −Σ_k w_k Im(e^{i(s ln(t/2) − θ)}/P_k), so the root
/// condition is sin φ + Σ_{k≥1} w_k Im(e^{iφ}/P_k) = 0.
pub fn phase_defect(s: f64, theta: f64, n: usize) -> Result<f64> {
    let base = 2.0 * ((theta - n as f64 * PI) / s).exp();
    if base > 1.0 {
        return Err(Error::domain("phase expansion needs t_n < 1"));
    }
    let tail = |phi: f64| {
        let half = 0.5 * base * (phi / s).exp();
        let x = half * half;
        let e = Complex64::from_polar(1.0, phi);
        let mut p = Complex64::new(1.0, 0.0);
        let mut w = 1.0;
        let mut acc = 0.0;
        for k in 1..200 {
            p *= Complex64::new(k as f64, s);
            w *= x / k as f64;
            let term = w * (e / p).im;
            acc += term;
            if term.abs() <= 1e-18 * acc.abs() || w == 0.0 {
                break;
            }
        }
        acc
    };
    let mut phi = 0.0;
    for _ in 0..100 {
        let next = (-tail(phi)).asin();
        if (next - phi).abs() <= 1e-16 * next.abs() || next == phi {
            return Ok(next);
        }
        phi = next;
    }
    Err(Error::no_conv("phase defect", format!("n={n}")))
}

/// ε_n = t_n / (2e^{(θ−nπ)/s₀}) − 1.
pub fn epsilon_n(c: &SpectralConstants, n: usize) -> Result<f64> {
    Ok((phase_defect(c.s0, c.theta, n)? / c.s0).exp_m1())
}

/// The leading sinusoidal form −√(π/(s sinh πs)) sin(s ln(t/2) − θ) of K_{is}(t) at small t.
pub fn kis_small_t(s: f64, theta: f64, t: f64) -> f64 {
    let amp = (PI / (s * (PI * s).sinh())).sqrt();
    -amp * (s * (t / 2.0).ln() - theta).sin()
}

pub fn efimov_spectrum(g: &ModelGeometry, n_max: usize, tol: f64) -> Result<Vec<EfimovLevel>> {
    let c = solve_s0(1e-12)?;
    efimov_spectrum_with(&c, g, n_max, tol)
}

pub fn efimov_spectrum_with(
    c: &SpectralConstants,
    g: &ModelGeometry,
    n_max: usize,
    tol: f64,
) -> Result<Vec<EfimovLevel>> {
    let roots = bessel_k_imag_roots(c, n_max, tol)?;
    roots
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let n = i + 1;
            let mu = (r.x / g.a).powi(2);
            Ok(EfimovLevel {
                n,
                t_n: r.x,
                mu_n: mu,
                e_n: -mu,
                epsilon_n: epsilon_n(c, n)?,
                bracket: (r.lo, r.hi),
                k_at_root: r.fx,
            })
        })
        .collect()
}

/// N(z) = #{n : E_n < z}. The levels must start at n = 1, be consecutive and
/// reach above z.
pub fn count_levels(z: f64, levels: &[EfimovLevel]) -> Result<usize> {
    if !(z < 0.0) {
        return Err(Error::domain(format!("z must be negative, got {z}")));
    }
    if levels.iter().enumerate().any(|(i, l)| l.n != i + 1) {
        return Err(Error::domain("levels must be n = 1, 2, … without gaps"));
    }
    match levels.last() {
        Some(last) if last.e_n >= z => Ok(levels.iter().filter(|l| l.e_n < z).count()),
        _ => Err(Error::domain(format!(
            "levels do not reach above z = {z:e}; extend n_max"
        ))),
    }
}

/// Least-squares slope of N(z) against |ln|z|| with z sampled at the geometric
/// midpoints −√(E_k E_{k+1}), k = k_lo..k_hi, where N(z) = k exactly.
pub fn counting_slope(levels: &[EfimovLevel], k_lo: usize, k_hi: usize) -> Result<f64> {
    if k_lo < 1 || k_hi <= k_lo || k_hi >= levels.len() {
        return Err(Error::domain("need 1 ≤ k_lo < k_hi < number of levels"));
    }
    let mut pts = Vec::new();
    for k in k_lo..=k_hi {
        let z = -(levels[k - 1].e_n * levels[k].e_n).sqrt();
        let n = count_levels(z, levels)? as f64;
        pts.push(((-z).ln().abs(), n));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
