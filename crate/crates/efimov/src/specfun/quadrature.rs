//! One-dimensional quadrature: global adaptive Gauss-Kronrod (7/15) with
//! interval halving, and tanh-sinh / exp-sinh double-exponential rules.

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    AdaptiveHalving,
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Maximum number of halvings of one interval (Gauss-Kronrod) or of the
    /// step size (double exponential).
    pub max_refinement_depth: u32,
    pub scheme: Scheme,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::c(1e-12),
            rel_tol: T::c(1e-10),
            max_refinement_depth: 40,
            scheme: Scheme::AdaptiveHalving,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_refinement_depth: u32, scheme: Scheme) -> Result<Self> {
        let q = Self {
            abs_tol,
            rel_tol,
            max_refinement_depth,
            scheme,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_tol(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn double_exponential(self) -> Self {
        Self {
            scheme: Scheme::DoubleExponential,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v.is_finite() && v >= T::zero();
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::domain("tolerances must be finite and non-negative"));
        }
        if self.abs_tol == T::zero() && self.rel_tol == T::zero() {
            return Err(Error::domain("one of abs_tol, rel_tol must be positive"));
        }
        if self.max_refinement_depth == 0 {
            return Err(Error::domain("max_refinement_depth must be positive"));
        }
        Ok(())
    }

    /// Error level accepted for an integral of the given value.
    pub fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Integration domain. `HalfLine` is `[lo, ∞)`; `scale` is the length over
/// which the integrand decays and sets the compactifying map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Finite { lo: T, hi: T },
    HalfLine { lo: T, scale: T },
}

impl<T: Real> Domain<T> {
    pub fn finite(lo: T, hi: T) -> Self {
        Domain::Finite { lo, hi }
    }

    pub fn half_line(lo: T, scale: T) -> Self {
        Domain::HalfLine { lo, scale }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub err: T,
    pub evals: usize,
}

pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    domain: Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<Integral<T>> {
    q.validate()?;
    match domain {
        Domain::Finite { lo, hi } => {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::domain("finite domain needs finite endpoints"));
            }
            if lo == hi {
                return Ok(Integral {
                    value: T::zero(),
                    err: T::zero(),
                    evals: 0,
                });
            }
            let (a, b, sign) = if lo < hi { (lo, hi, T::one()) } else { (hi, lo, -T::one()) };
            let r = match q.scheme {
                Scheme::AdaptiveHalving => gauss_kronrod(&mut f, a, b, q)?,
                Scheme::DoubleExponential => tanh_sinh(&mut f, a, b, q)?,
            };
            Ok(Integral {
                value: sign * r.value,
                ..r
            })
        }
        Domain::HalfLine { lo, scale } => {
            if !(lo.is_finite() && scale.is_finite() && scale > T::zero()) {
                return Err(Error::domain("half line needs finite lo and positive scale"));
            }
            match q.scheme {
                Scheme::AdaptiveHalving => {
                    let one = T::one();
                    let mut g = |t: T| {
                        let u = one - t;
                        let x = lo + scale * t / u;
                        let v = f(x);
                        if v == T::zero() {
                            v
                        } else {
                            v * scale / (u * u)
                        }
                    };
                    gauss_kronrod(&mut g, T::zero(), one, q)
                }
                Scheme::DoubleExponential => exp_sinh(&mut f, lo, scale, q),
            }
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    err: T,
    depth: u32,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::c(0.5);
    let center = half * (a + b);
    let hl = half * (b - a);
    let fc = f(center);
    let mut resg = fc * T::c(WG[3]);
    let mut resk = fc * T::c(WGK[7]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = hl * T::c(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::c(WGK[j]);
        resk = resk + w * (f1 + f2);
        resabs = resabs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::c(WG[j / 2]) * (f1 + f2);
        }
    }
    let reskh = resk * half;
    let mut resasc = T::c(WGK[7]) * (fc - reskh).abs();
    for j in 0..7 {
        resasc = resasc + T::c(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hl;
    let resabs = resabs * hl.abs();
    let resasc = resasc * hl.abs();
    let mut err = ((resk - resg) * hl).abs();
    if resasc != T::zero() && err != T::zero() {
        let r = (T::c(200.0) * err / resasc).powf(T::c(1.5));
        err = resasc * r.min(T::one());
    }
    let floor = T::c(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::c(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    (value, err)
}

const MAX_SEGMENTS: usize = 1 << 14;

fn gauss_kronrod<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    a: T,
    b: T,
    q: &QuadratureSpec<T>,
) -> Result<Integral<T>> {
    let (v, e) = gk15(f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        err: e,
        depth: 0,
    }];
    let mut evals = 15;
    loop {
        let total: T = segs.iter().fold(T::zero(), |s, g| s + g.value);
        let err: T = segs.iter().fold(T::zero(), |s, g| s + g.err);
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::no_conv("quadrature", "non-finite integrand value"));
        }
        if err <= q.target(total) {
            return Ok(Integral {
                value: total,
                err,
                evals,
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, -T::one()), |(bi, be), (i, g)| if g.err > be { (i, g.err) } else { (bi, be) });
        if segs[worst].depth >= q.max_refinement_depth || segs.len() >= MAX_SEGMENTS {
            return Err(Error::no_conv(
                "quadrature",
                format!("estimate {total:?} with error {err:?} after {evals} evaluations"),
            ));
        }
        let s = segs.swap_remove(worst);
        let mid = T::c(0.5) * (s.a + s.b);
        if !(mid > s.a && mid < s.b) {
            return Err(Error::no_conv("quadrature", "interval below resolution"));
        }
        let (v1, e1) = gk15(f, s.a, mid);
        let (v2, e2) = gk15(f, mid, s.b);
        evals += 30;
        segs.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            err: e1,
            depth: s.depth + 1,
        });
        segs.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            err: e2,
            depth: s.depth + 1,
        });
    }
}

fn de_levels<T: Real>(q: &QuadratureSpec<T>) -> u32 {
    q.max_refinement_depth.min(12)
}

fn tanh_sinh<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    a: T,
    b: T,
    q: &QuadratureSpec<T>,
) -> Result<Integral<T>> {
    let half_pi = T::FRAC_PI_2();
    let width = b - a;
    let t_max = T::c(6.0);
    let mut evals = 0usize;
    // Node at parameter t >= 0 contributes the symmetric pair x = a + w d, b - w d.
    let mut pair = |t: T, evals: &mut usize| -> T {
        let v = half_pi * t.sinh();
        let d = T::one() / (T::one() + (v + v).exp());
        let w = width * T::PI() * t.cosh() * d * (T::one() - d);
        if w == T::zero() {
            return T::zero();
        }
        let xl = a + width * d;
        let xr = b - width * d;
        let mut s = T::zero();
        if xl > a && xl < b {
            s = s + f(xl);
            *evals += 1;
        }
        if t > T::zero() && xr < b && xr > a {
            s = s + f(xr);
            *evals += 1;
        }
        w * s
    };
    let mut h = T::one();
    let mut sum = pair(T::zero(), &mut evals);
    let mut k = 1usize;
    loop {
        let t = h * T::from_usize_exact(k);
        if t > t_max {
            break;
        }
        sum = sum + pair(t, &mut evals);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..de_levels(q) {
        h = h * T::c(0.5);
        let mut k = 1usize;
        loop {
            let t = h * T::from_usize_exact(k);
            if t > t_max {
                break;
            }
            sum = sum + pair(t, &mut evals);
            k += 2;
        }
        let next = sum * h;
        let err = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            return Err(Error::no_conv("tanh-sinh", "non-finite integrand value"));
        }
        if err <= q.target(estimate) {
            return Ok(Integral {
                value: estimate,
                err,
                evals,
            });
        }
    }
    Err(Error::no_conv("tanh-sinh", format!("estimate {estimate:?}")))
}

fn exp_sinh<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    lo: T,
    scale: T,
    q: &QuadratureSpec<T>,
) -> Result<Integral<T>> {
    let half_pi = T::FRAC_PI_2();
    let t_lo = T::c(-6.0);
    let t_hi = T::c(4.5);
    let mut evals = 0usize;
    let mut node = |t: T, evals: &mut usize| -> T {
        let e = (half_pi * t.sinh()).exp();
        let x = lo + scale * e;
        if !(x > lo) || !x.is_finite() {
            return T::zero();
        }
        let w = scale * e * half_pi * t.cosh();
        *evals += 1;
        let v = f(x);
        if v == T::zero() {
            v
        } else {
            w * v
        }
    };
    let mut h = T::c(0.5);
    let mut sum = T::zero();
    let mut k: i64 = (t_lo / h).to_i64().unwrap_or(0);
    loop {
        let t = h * T::from_i64(k).unwrap();
        if t > t_hi {
            break;
        }
        sum = sum + node(t, &mut evals);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..de_levels(q) {
        h = h * T::c(0.5);
        let mut k: i64 = (t_lo / h).to_i64().unwrap_or(0);
        if k % 2 == 0 {
            k += 1;
        }
        loop {
            let t = h * T::from_i64(k).unwrap();
            if t > t_hi {
                break;
            }
            sum = sum + node(t, &mut evals);
            k += 2;
        }
        let next = sum * h;
        let err = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            return Err(Error::no_conv("exp-sinh", "non-finite integrand value"));
        }
        if err <= q.target(estimate) {
            return Ok(Integral {
                value: estimate,
                err,
                evals,
            });
        }
    }
    Err(Error::no_conv("exp-sinh", format!("estimate {estimate:?}")))
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = T::from_usize_exact(n);
    for i in 0..n.div_ceil(2) {
        let mut z = (T::PI() * (T::from_usize_exact(i) + T::c(0.75)) / (nf + T::c(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let mut p1 = T::one();
            let mut p2 = T::zero();
            for j in 0..n {
                let jf = T::from_usize_exact(j);
                let p3 = p2;
                p2 = p1;
                p1 = ((T::c(2.0) * jf + T::one()) * z * p2 - jf * p3) / (jf + T::one());
            }
            dp = nf * (z * p1 - p2) / (z * z - T::one());
            let dz = p1 / dp;
            z = z - dz;
            if dz.abs() <= T::epsilon() {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = T::c(2.0) / ((T::one() - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
