//! Complex log-gamma (Lanczos, g = 7, nine terms) and arg Γ(1 + i s).

use num_complex::Complex;

use crate::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of ln Γ(z) for Re z ≥ 1/2, continuous along vertical lines.
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let zm = z - one;
    let mut x = Complex::new(T::c(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x = x + Complex::new(T::c(c), T::zero()) / (zm + Complex::new(T::from_usize_exact(i), T::zero()));
    }
    let t = zm + Complex::new(T::c(LANCZOS_G + 0.5), T::zero());
    let half_ln_2pi = T::c(0.5) * (T::c(2.0) * T::PI()).ln();
    Complex::new(half_ln_2pi, T::zero()) + (zm + Complex::new(T::c(0.5), T::zero())) * t.ln() - t + x.ln()
}

/// arg Γ(1 + i s) on the branch continuous from arg Γ(1) = 0.
pub fn arg_gamma_one_plus_is<T: Real>(s: T) -> T {
    ln_gamma_complex(Complex::new(T::one(), s)).im
}

/// |Γ(1 + i s)|² = π s / sinh(π s).
pub fn abs_gamma_one_plus_is_sq<T: Real>(s: T) -> T {
    if s == T::zero() {
        T::one()
    } else {
        T::PI() * s / (T::PI() * s).sinh()
    }
}

/// Digamma at a positive integer: ψ(n) = −γ + H_{n−1}.
pub fn digamma_int<T: Real>(n: usize) -> T {
    let euler = T::c(0.577_215_664_901_532_9);
    (1..n).fold(-euler, |acc, k| acc + T::one() / T::from_usize_exact(k))
}
