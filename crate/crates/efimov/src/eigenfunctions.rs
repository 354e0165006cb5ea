//! Faddeev component ψ_n, charge ξ_n, symmetrized eigenvector Ψ_n and the
//! residual checks of the underlying boundary-value problem.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::specfun::{bessel_k_imag, integrate};
use crate::{Domain, QuadratureSpec};
use crate::spectrum::{efimov_spectrum_with, f_s0, solve_s0, EfimovLevel, ModelGeometry, SpectralConstants};
use crate::{Error, Result};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Point of ℝ⁶ in Jacobi coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperPoint {
    pub x: [f64; 3],
    pub y: [f64; 3],
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn comb(a: f64, u: &[f64; 3], b: f64, v: &[f64; 3]) -> [f64; 3] {
    [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]
}

impl HyperPoint {
    pub fn new(x: [f64; 3], y: [f64; 3]) -> Self {
        Self { x, y }
    }

    /// A point with |x| = r, |y| = ρ and x·y = rρ·cos_angle.
    pub fn from_radii(r: f64, rho: f64, cos_angle: f64) -> Self {
        let c = cos_angle.clamp(-1.0, 1.0);
        let s = (1.0 - c * c).sqrt();
        Self {
            x: [r * c, r * s, 0.0],
            y: [rho, 0.0, 0.0],
        }
    }

    pub fn r(&self) -> f64 {
        norm(&self.x)
    }

    pub fn rho(&self) -> f64 {
        norm(&self.y)
    }

    pub fn hyper_radius(&self) -> f64 {
        self.r().hypot(self.rho())
    }

    /// ω with (r, ρ) = (R sin ω, R cos ω).
    pub fn omega(&self) -> f64 {
        self.r().atan2(self.rho())
    }

    pub fn dot(&self, other: &HyperPoint) -> f64 {
        (0..3).map(|i| self.x[i] * other.x[i] + self.y[i] * other.y[i]).sum()
    }

    /// Exchange of particles 1 and 2.
    pub fn sigma12(&self) -> Self {
        Self {
            x: comb(-1.0, &self.x, 0.0, &self.y),
            y: self.y,
        }
    }

    /// Exchange of particles 2 and 3.
    pub fn sigma23(&self) -> Self {
        Self {
            x: comb(0.5, &self.x, SQRT3_2, &self.y),
            y: comb(SQRT3_2, &self.x, -0.5, &self.y),
        }
    }

    /// Exchange of particles 3 and 1.
    pub fn sigma31(&self) -> Self {
        self.sigma12().sigma23().sigma12()
    }

    /// (r, ρ) seen from each of the pairs (12), (23), (31).
    pub fn pair_radii(&self) -> [(f64, f64); 3] {
        let (x, y) = (&self.x, &self.y);
        [
            (norm(x), norm(y)),
            (norm(&comb(-0.5, x, SQRT3_2, y)), norm(&comb(SQRT3_2, x, 0.5, y))),
            (norm(&comb(0.5, x, SQRT3_2, y)), norm(&comb(SQRT3_2, x, -0.5, y))),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenfunctionSpec {
    pub level: EfimovLevel,
    pub geometry: ModelGeometry,
    pub constants: SpectralConstants,
    pub c_n: f64,
    /// Order s of K_{is}; equals s₀ except in negative controls.
    pub order: f64,
    pub q: QuadratureSpec,
}

impl EigenfunctionSpec {
    pub fn new(level: EfimovLevel, geometry: ModelGeometry, constants: SpectralConstants) -> Result<Self> {
        if !(level.t_n > 0.0) {
            return Err(Error::domain("level must carry a positive root"));
        }
        Ok(Self {
            level,
            geometry,
            constants,
            c_n: 1.0,
            order: constants.s0,
            q: QuadratureSpec::with_tol(1e-15, 1e-13),
        })
    }

    /// Solves for s₀ and the first n roots, and builds the spec of level n
    /// in the unitary geometry with radius a.
    pub fn compute(n: usize, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("level index starts at 1"));
        }
        let c = solve_s0(1e-12)?;
        let g = ModelGeometry::unitary(a)?;
        let levels = efimov_spectrum_with(&c, &g, n, 1e-12)?;
        Self::new(levels[n - 1], g, c)
    }

    pub fn with_order(self, s: f64) -> Self {
        Self { order: s, ..self }
    }

    pub fn with_normalization(self, c_n: f64) -> Result<Self> {
        if !(c_n > 0.0 && c_n.is_finite()) {
            return Err(Error::domain("normalization constant must be positive"));
        }
        Ok(Self { c_n, ..self })
    }

    /// κ_n = t_n / a.
    pub fn kappa(&self) -> f64 {
        self.level.t_n / self.geometry.a
    }

    pub fn mu(&self) -> f64 {
        self.level.mu_n
    }

    fn kis(&self, t: f64) -> Result<f64> {
        bessel_k_imag(self.order, t, &self.q)
    }

    /// Radial factor f(R) = K_{is}(κR).
    pub fn radial(&self, big_r: f64) -> Result<f64> {
        self.kis(self.kappa() * big_r)
    }

    fn check_outside_core(&self, big_r: f64) -> Result<()> {
        if big_r < self.geometry.a * (1.0 - 1e-12) {
            return Err(Error::domain(format!("hyper-radius {big_r} inside the hard core")));
        }
        Ok(())
    }

    /// sinh(s·arctan(ρ/r)) / (sinh(πs/2) · rρ).
    fn angular(&self, r: f64, rho: f64) -> f64 {
        let s = self.order;
        (s * rho.atan2(r)).sinh() / ((FRAC_PI_2 * s).sinh() * r * rho)
    }
}

/// ψ_n(r, ρ) = C/(4π rρ) · sinh(s₀ arctan(ρ/r))/sinh(πs₀/2) · K_{is₀}(κ√(r²+ρ²)).
pub fn psi(spec: &EigenfunctionSpec, r: f64, rho: f64) -> Result<f64> {
    if !(r > 0.0 && rho > 0.0) {
        return Err(Error::domain(format!("psi needs r, rho > 0, got ({r}, {rho})")));
    }
    let big_r = r.hypot(rho);
    spec.check_outside_core(big_r)?;
    Ok(spec.c_n / (4.0 * PI) * spec.angular(r, rho) * spec.radial(big_r)?)
}

/// ξ_n(ρ) = (C/ρ) K_{is₀}(κρ).
pub fn xi(spec: &EigenfunctionSpec, rho: f64) -> Result<f64> {
    spec.check_outside_core(rho)?;
    Ok(spec.c_n / rho * spec.radial(rho)?)
}

/// Ψ_n = ψ_n summed over the three pairs. The hyper-radius is the same for
/// all three terms, so K is evaluated once.
pub fn big_psi(spec: &EigenfunctionSpec, p: &HyperPoint) -> Result<f64> {
    let pairs = p.pair_radii();
    if pairs.iter().any(|&(r, rho)| !(r > 0.0 && rho > 0.0)) {
        return Err(Error::domain("point lies on a coincidence hyperplane"));
    }
    let big_r = p.hyper_radius();
    spec.check_outside_core(big_r)?;
    let ang: f64 = pairs.iter().map(|&(r, rho)| spec.angular(r, rho)).sum();
    Ok(spec.c_n / (4.0 * PI) * ang * spec.radial(big_r)?)
}

/// Central-difference residual of −(1/r²)∂_r(r²∂_r f) − (1/ρ²)∂_ρ(ρ²∂_ρ f) + μ f.
pub fn pde_residual_of<F: FnMut(f64, f64) -> Result<f64>>(
    mut f: F,
    r: f64,
    rho: f64,
    h: f64,
    mu: f64,
) -> Result<f64> {
    if !(h > 0.0) || r - h <= 0.0 || rho - h <= 0.0 {
        return Err(Error::domain("stencil leaves the quadrant"));
    }
    let c = f(r, rho)?;
    let (rp, rm) = (f(r + h, rho)?, f(r - h, rho)?);
    let (pp, pm) = (f(r, rho + h)?, f(r, rho - h)?);
    let h2 = h * h;
    let lap_r = (rp - 2.0 * c + rm) / h2 + (rp - rm) / (h * r);
    let lap_p = (pp - 2.0 * c + pm) / h2 + (pp - pm) / (h * rho);
    Ok(-lap_r - lap_p + mu * c)
}

/// The radial PDE residual of ψ_n with μ = μ_n.
pub fn pde_residual(spec: &EigenfunctionSpec, r: f64, rho: f64, h: f64) -> Result<f64> {
    let a = spec.geometry.a;
    if (r - h).hypot(rho - h) < a {
        return Err(Error::domain("stencil leaves the exterior of the hard core"));
    }
    pde_residual_of(|r, p| psi(spec, r, p), r, rho, h, spec.mu())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactResidual {
    pub rho: f64,
    /// lim_{r→0} [ψ(r,ρ) − ξ(ρ)/(4πr)].
    pub limit_term: f64,
    /// 2ψ(√3ρ/2, ρ/2).
    pub coupling_term: f64,
    pub residual: f64,
    /// Difference between the two highest extrapolation orders.
    pub extrapolation_err: f64,
}

impl ContactResidual {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.limit_term.abs().max(self.coupling_term.abs())
    }
}

/// Residual of the contact condition at ρ; the r → 0 limit is extracted by
/// Richardson extrapolation over r = r₀, r₀/2, r₀/4 with r₀ = 10⁻³a.
pub fn contact_bc_residual(spec: &EigenfunctionSpec, rho: f64) -> Result<ContactResidual> {
    let a = spec.geometry.a;
    if !(rho > a) {
        return Err(Error::domain(format!("need rho > a, got {rho}")));
    }
    let xi_rho = xi(spec, rho)?;
    let bracket = |r: f64| -> Result<f64> { Ok(psi(spec, r, rho)? - xi_rho / (4.0 * PI * r)) };
    let r0 = 1e-3 * a;
    let b = [bracket(r0)?, bracket(r0 / 2.0)?, bracket(r0 / 4.0)?];
    // Eliminate the O(r) and then the O(r²) term.
    let l1 = [2.0 * b[1] - b[0], 2.0 * b[2] - b[1]];
    let l2 = (4.0 * l1[1] - l1[0]) / 3.0;
    let limit = l2;
    let err = (l2 - l1[1]).abs();
    if !limit.is_finite() {
        return Err(Error::no_conv("contact extrapolation", format!("rho={rho}")));
    }
    let coupling = 2.0 * psi(spec, SQRT3_2 * rho, 0.5 * rho)?;
    Ok(ContactResidual {
        rho,
        limit_term: limit,
        coupling_term: coupling,
        residual: limit + coupling,
        extrapolation_err: err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularResidual {
    pub ode: f64,
    pub endpoint: f64,
    pub robin: f64,
}

/// Checks g₀(ω) = sinh(s(ω − π/2)) against g″ − s²g = 0, g(π/2) = 0 and
/// g′(0) + (8/√3)g(π/3) = 0. The Robin residual equals −F(s).
pub fn angular_solution_check(s: f64, omega: f64) -> Result<AngularResidual> {
    if !(s > 0.0) {
        return Err(Error::domain("s must be positive"));
    }
    if !(0.0..=FRAC_PI_2).contains(&omega) {
        return Err(Error::domain("omega must lie in [0, pi/2]"));
    }
    let g = |w: f64| (s * (w - FRAC_PI_2)).sinh();
    let g2 = s * s * g(omega);
    let nu = s * s;
    let dg0 = s * (s * -FRAC_PI_2).cosh();
    Ok(AngularResidual {
        ode: g2 - nu * g(omega),
        endpoint: g(FRAC_PI_2),
        robin: dg0 + 8.0 / 3f64.sqrt() * g(PI / 3.0),
    })
}

/// −F(s), the Robin residual in closed form.
pub fn robin_closed_form(s: f64) -> f64 {
    -f_s0(s)
}

/// Residual of f″ + f′/R + (s²/R² − μ)f for f(R) = K_{is}(κR).
pub fn radial_ode_residual_with(spec: &EigenfunctionSpec, big_r: f64, h: f64, mu: f64) -> Result<f64> {
    if !(h > 0.0) || big_r - 2.0 * h < spec.geometry.a {
        return Err(Error::domain("stencil leaves the exterior of the hard core"));
    }
    let f = |x: f64| spec.radial(x);
    let (c, p, m) = (f(big_r)?, f(big_r + h)?, f(big_r - h)?);
    let s2 = spec.order * spec.order;
    Ok((p - 2.0 * c + m) / (h * h) + (p - m) / (2.0 * h * big_r) + (s2 / (big_r * big_r) - mu) * c)
}

pub fn radial_ode_residual(spec: &EigenfunctionSpec, big_r: f64, h: f64) -> Result<f64> {
    radial_ode_residual_with(spec, big_r, h, spec.mu())
}

/// ∫_a^∞ R K_{is}(κR)² dR.
fn radial_mass(spec: &EigenfunctionSpec, q: &QuadratureSpec) -> Result<f64> {
    let a = spec.geometry.a;
    let scale = 1.0 / spec.kappa();
    let mut fail = None;
    let r = integrate(
        |x| match spec.radial(x) {
            Ok(k) => x * k * k,
            Err(e) => {
                fail.get_or_insert(e);
                0.0
            }
        },
        Domain::half_line(a, scale),
        q,
    )?;
    fail.map_or(Ok(r.value), Err)
}

/// ∫∫_{D_a} r²ρ² ψ_n² dr dρ, separated into radial and angular factors.
pub fn psi_square_integral(spec: &EigenfunctionSpec, q: &QuadratureSpec) -> Result<f64> {
    let s = spec.order;
    // ∫₀^{π/2} sinh²(s(π/2 − ω)) dω
    let ang = ((PI * s).sinh() / (2.0 * s) - FRAC_PI_2) / 2.0;
    let pref = (spec.c_n / (4.0 * PI * (FRAC_PI_2 * s).sinh())).powi(2);
    Ok(pref * ang * radial_mass(spec, q)?)
}

/// ‖Ψ_n‖² over ℝ⁶ ∖ B_a. With u the cosine between x and y,
/// d³x d³y = 8π² r²ρ² dr dρ du, and Ψ factorizes into K_{is}(κR)/R² times a
/// function of (ω, u). The angular integral has integrable peaks where the
/// (23) and (31) pairs coincide (u = ±1, ω = π/3), handled adaptively.
pub fn big_psi_norm_sq(spec: &EigenfunctionSpec, q: &QuadratureSpec) -> Result<f64> {
    let s = spec.order;
    let mut fail = None;
    let mut ang = |w: f64, gamma: f64| -> f64 {
        let (sw, cw) = w.sin_cos();
        let (sg, cg) = gamma.sin_cos();
        let p = HyperPoint::new([sw * cg, sw * sg, 0.0], [cw, 0.0, 0.0]);
        let sum: f64 = p
            .pair_radii()
            .iter()
            .map(|&(r, rho)| (s * rho.atan2(r)).sinh() / (r * rho))
            .sum();
        if !sum.is_finite() {
            fail.get_or_insert(Error::no_conv("angular norm", "hit a coincidence point"));
            return 0.0;
        }
        (sw * cw * sum).powi(2) * sg
    };
    let mut outer_fail = None;
    let mut outer = |w: f64| -> f64 {
        let r = integrate(|g| ang(w, g), Domain::finite(0.0, PI), q);
        match r {
            Ok(v) => v.value,
            Err(e) => {
                outer_fail.get_or_insert(e);
                0.0
            }
        }
    };
    let mut total = 0.0;
    for (lo, hi) in [(0.0, PI / 3.0), (PI / 3.0, FRAC_PI_2)] {
        total += integrate(&mut outer, Domain::finite(lo, hi), q)?.value;
    }
    if let Some(e) = outer_fail {
        return Err(e);
    }
    if let Some(e) = fail {
        return Err(e);
    }
    let pref = 8.0 * PI * PI * (spec.c_n / (4.0 * PI * (FRAC_PI_2 * s).sinh())).powi(2);
    Ok(pref * total * radial_mass(spec, q)?)
}

/// The constant C_n that makes ‖Ψ_n‖ = 1.
pub fn normalization_constant(spec: &EigenfunctionSpec, q: &QuadratureSpec) -> Result<f64> {
    let unit = spec.with_normalization(1.0)?;
    Ok(1.0 / big_psi_norm_sq(&unit, q)?.sqrt())
}
