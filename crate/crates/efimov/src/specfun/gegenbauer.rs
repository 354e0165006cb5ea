//! Gegenbauer polynomials C_ℓ^{(2)} and Chebyshev polynomials of the second kind.

use crate::Real;

/// C_ℓ²(s) by the three-term recurrence
/// (ℓ+1) C_{ℓ+1} = 2(ℓ+2) s C_ℓ − (ℓ+3) C_{ℓ−1}, C₀ = 1, C₁ = 4s.
pub fn gegenbauer_c2<T: Real>(l: usize, s: T) -> T {
    let mut prev = T::one();
    if l == 0 {
        return prev;
    }
    let mut cur = T::c(4.0) * s;
    for k in 1..l {
        let kf = T::from_usize_exact(k);
        let next = (T::c(2.0) * (kf + T::c(2.0)) * s * cur - (kf + T::c(3.0)) * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// C_0²(s), …, C_{l_max}²(s).
pub fn gegenbauer_c2_all<T: Real>(l_max: usize, s: T) -> Vec<T> {
    let mut out = Vec::with_capacity(l_max + 1);
    out.push(T::one());
    if l_max == 0 {
        return out;
    }
    out.push(T::c(4.0) * s);
    for k in 1..l_max {
        let kf = T::from_usize_exact(k);
        let next = (T::c(2.0) * (kf + T::c(2.0)) * s * out[k] - (kf + T::c(3.0)) * out[k - 1]) / (kf + T::one());
        out.push(next);
    }
    out
}

/// U_n(x), with U_{-1} = 0, U_0 = 1, U_{n+1} = 2x U_n − U_{n−1}.
/// Since d/dx U_{ℓ+1} = 2 C_ℓ², it is the antiderivative used for angular
/// integrals of the Gegenbauer series.
pub fn chebyshev_u<T: Real>(n: usize, x: T) -> T {
    let mut prev = T::zero();
    let mut cur = T::one();
    for _ in 0..n {
        let next = T::c(2.0) * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_explicit() {
        for &s in &[-0.7f64, 0.0, 0.3, 1.0] {
            assert_eq!(gegenbauer_c2(0, s), 1.0);
            assert!((gegenbauer_c2(1, s) - 4.0 * s).abs() < 1e-15);
            assert!((gegenbauer_c2(2, s) - (12.0 * s * s - 2.0)).abs() < 1e-14);
            assert!((gegenbauer_c2(3, s) - (32.0 * s.powi(3) - 12.0 * s)).abs() < 1e-13);
        }
    }

    #[test]
    fn all_matches_single() {
        let v = gegenbauer_c2_all(30, 0.37f64);
        for (l, c) in v.iter().enumerate() {
            assert!((c - gegenbauer_c2(l, 0.37)).abs() <= 1e-12 * c.abs().max(1.0));
        }
    }

    #[test]
    fn chebyshev_derivative_relation() {
        let h = 1e-5;
        for l in 0..8 {
            let x = 0.31f64;
            let d = (chebyshev_u(l + 1, x + h) - chebyshev_u(l + 1, x - h)) / (2.0 * h);
            assert!((d - 2.0 * gegenbauer_c2(l, x)).abs() < 1e-6 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn chebyshev_trig_form() {
        let th = 0.9f64;
        for n in 0..12 {
            let want = (((n + 1) as f64) * th).sin() / th.sin();
            assert!((chebyshev_u(n, th.cos()) - want).abs() < 1e-12);
        }
    }
}
