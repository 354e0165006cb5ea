//! Modified Bessel functions I_ν, K_ν of real order ν ≥ 0.
//!
//! Temme's series for x < 2 and Steed's continued fraction CF2 otherwise give
//! K_μ, K_{μ+1} with |μ| ≤ 1/2; K is then recurred upward in order, and I is
//! recovered from the CF1 ratio and the Wronskian. Values are carried
//! exponentially scaled (I e^{−x}, K e^{x}) so that large arguments do not
//! overflow.

use crate::{Error, Real, Result};

const MAXIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselIK<T> {
    pub nu: T,
    pub x: T,
    /// I_ν(x) e^{−x}
    pub i_scaled: T,
    /// K_ν(x) e^{x}
    pub k_scaled: T,
    /// I'_ν(x) e^{−x}
    pub ip_scaled: T,
    /// K'_ν(x) e^{x}
    pub kp_scaled: T,
}

impl<T: Real> BesselIK<T> {
    pub fn i(&self) -> Result<T> {
        let v = self.i_scaled * self.x.exp();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("I_{}({})", self.nu, self.x)));
        }
        if v == T::zero() {
            return Err(Error::Underflow(format!("I_{}({})", self.nu, self.x)));
        }
        Ok(v)
    }

    pub fn k(&self) -> Result<T> {
        let v = self.k_scaled * (-self.x).exp();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("K_{}({})", self.nu, self.x)));
        }
        if v == T::zero() {
            return Err(Error::Underflow(format!("K_{}({})", self.nu, self.x)));
        }
        Ok(v)
    }

    /// K_{ν+1}(x) / K_ν(x).
    pub fn k_up_ratio(&self) -> T {
        self.nu / self.x - self.kp_scaled / self.k_scaled
    }
}

fn chebev<T: Real>(c: &[f64], x: T) -> T {
    let y2 = T::c(2.0) * x;
    let mut d = T::zero();
    let mut dd = T::zero();
    for &cj in c.iter().skip(1).rev() {
        let sv = d;
        d = y2 * d - dd + T::c(cj);
        dd = sv;
    }
    x * d - dd + T::c(0.5 * c[0])
}

/// (Γ₁, Γ₂, 1/Γ(1+μ), 1/Γ(1−μ)) for |μ| ≤ 1/2, from Chebyshev expansions.
fn beschb<T: Real>(mu: T) -> (T, T, T, T) {
    const C1: [f64; 7] = [
        -1.142_022_680_371_168,
        6.516_511_267_073_7e-3,
        3.087_090_173_086e-4,
        -3.470_626_964_9e-6,
        6.943_766_4e-9,
        3.677_95e-11,
        -1.356e-13,
    ];
    const C2: [f64; 8] = [
        1.843_740_587_300_905,
        -7.685_284_084_478_67e-2,
        1.271_927_136_654_6e-3,
        -4.971_736_704_2e-6,
        -3.312_611_98e-8,
        2.423_096e-10,
        -1.702e-13,
        -1.49e-15,
    ];
    let xx = T::c(8.0) * mu * mu - T::one();
    let gam1 = chebev(&C1, xx);
    let gam2 = chebev(&C2, xx);
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

pub fn bessel_ik_scaled<T: Real>(nu: T, x: T) -> Result<BesselIK<T>> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("Bessel argument must be positive, got {x}")));
    }
    if !(nu >= T::zero()) || !nu.is_finite() {
        return Err(Error::domain(format!("Bessel order must be non-negative, got {nu}")));
    }
    let eps = T::epsilon();
    let fpmin = T::min_positive_value() / eps;
    let big = T::one() / fpmin;
    let half = T::c(0.5);
    let nl = (nu + half).floor().to_usize().unwrap_or(0);
    let xmu = nu - T::from_usize_exact(nl);
    let xmu2 = xmu * xmu;
    let xi = T::one() / x;
    let xi2 = T::c(2.0) * xi;

    // CF1: h = I'_ν / I_ν.
    let mut h = (nu * xi).max(fpmin);
    let mut b = xi2 * nu;
    let mut d = T::zero();
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b = b + xi2;
        d = T::one() / (b + d);
        c = b + T::one() / c;
        let del = c * d;
        h = del * h;
        if (del - T::one()).abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::no_conv("Bessel CF1", format!("nu={nu}, x={x}")));
    }
    let mut ril = fpmin;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact = fact - xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > big {
            ril = ril * fpmin;
            ripl = ripl * fpmin;
            ril1 = ril1 * fpmin;
            rip1 = rip1 * fpmin;
        }
    }
    let f = ripl / ril;

    let (mut rkmu, mut rk1);
    if x < T::c(2.0) {
        let x2 = half * x;
        let pimu = T::PI() * xmu;
        let fact = if pimu.abs() < eps { T::one() } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < eps { T::one() } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = beschb(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = half * ee / gampl;
        let mut q = half / (ee * gammi);
        let mut c = T::one();
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = T::from_usize_exact(i);
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c = c * dd / fi;
            p = p / (fi - xmu);
            q = q / (fi + xmu);
            let del = c * ff;
            sum = sum + del;
            let del1 = c * (p - fi * ff);
            sum1 = sum1 + del1;
            if del.abs() < sum.abs() * eps {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::no_conv("Bessel Temme series", format!("nu={nu}, x={x}")));
        }
        let ex = x.exp();
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        let mut b = T::c(2.0) * (T::one() + x);
        let mut d = T::one() / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = T::zero();
        let mut q2 = T::one();
        let a1 = T::c(0.25) - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = T::one() + q * delh;
        let mut ok = false;
        for i in 2..MAXIT {
            let fi = T::from_usize_exact(i);
            a = a - T::c(2.0) * (fi - T::one());
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q = q + c * qnew;
            b = b + T::c(2.0);
            d = T::one() / (b + a * d);
            delh = (b * d - T::one()) * delh;
            h = h + delh;
            let dels = q * delh;
            s = s + dels;
            if (dels / s).abs() < eps {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::no_conv("Bessel CF2", format!("nu={nu}, x={x}")));
        }
        h = a1 * h;
        rkmu = (T::PI() / (T::c(2.0) * x)).sqrt() / s;
        rk1 = rkmu * (xmu + x + half - h) * xi;
    }
    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let i_scaled = rimu * ril1 / ril;
    let ip_scaled = rimu * rip1 / ril;
    for i in 1..=nl {
        let rktemp = (xmu + T::from_usize_exact(i)) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    if !rkmu.is_finite() || !rk1.is_finite() {
        return Err(Error::Overflow(format!("K_{nu}({x})")));
    }
    Ok(BesselIK {
        nu,
        x,
        i_scaled,
        k_scaled: rkmu,
        ip_scaled,
        kp_scaled: nu * xi * rkmu - rk1,
    })
}

/// K_ν(t).
pub fn bessel_k<T: Real>(nu: T, t: T) -> Result<T> {
    bessel_ik_scaled(nu, t)?.k()
}

/// I_ν(t).
pub fn bessel_i<T: Real>(nu: T, t: T) -> Result<T> {
    bessel_ik_scaled(nu, t)?.i()
}

/// Ratios K_{ν₀+j+1}(x)/K_{ν₀+j}(x) for j = 0..n, by forward recurrence
/// (stable for K). The ratios stay representable even when K itself does not.
pub fn k_ratio_ladder<T: Real>(x: T, nu0: T, n: usize) -> Result<Vec<T>> {
    let base = bessel_ik_scaled(nu0, x)?;
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let mut h = base.k_up_ratio();
    out.push(h);
    for j in 1..n {
        h = T::one() / h + T::c(2.0) * (nu0 + T::from_usize_exact(j)) / x;
        out.push(h);
    }
    Ok(out)
}

/// Ratios I_{ν₀+j+1}(x)/I_{ν₀+j}(x) for j = 0..n: continued fraction at the
/// top order, then backward recurrence (stable for I).
pub fn i_ratio_ladder<T: Real>(x: T, nu0: T, n: usize) -> Result<Vec<T>> {
    if !(x > T::zero()) {
        return Err(Error::domain("Bessel argument must be positive"));
    }
    let mut out = vec![T::zero(); n];
    if n == 0 {
        return Ok(out);
    }
    let tiny = T::min_positive_value() / T::epsilon();
    let top = nu0 + T::from_usize_exact(n - 1);
    let mut f = tiny;
    let mut c = f;
    let mut d = T::zero();
    let mut ok = false;
    for k in 1..MAXIT {
        let b = T::c(2.0) * (top + T::from_usize_exact(k)) / x;
        d = b + d;
        if d == T::zero() {
            d = tiny;
        }
        c = b + T::one() / c;
        if c == T::zero() {
            c = tiny;
        }
        d = T::one() / d;
        let del = c * d;
        f = f * del;
        if (del - T::one()).abs() < T::epsilon() {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::no_conv("I ratio continued fraction", format!("nu={top}, x={x}")));
    }
    out[n - 1] = f;
    for j in (1..n).rev() {
        out[j - 1] = T::one() / (T::c(2.0) * (nu0 + T::from_usize_exact(j)) / x + out[j]);
    }
    Ok(out)
}
