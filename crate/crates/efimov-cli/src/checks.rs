//! The verification criteria. Each criterion returns a list of scalar checks
//! with the measured value and the bound it is held to; `verify` and the
//! acceptance target both run these.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use efimov::eigenfunctions::{
    big_psi, contact_bc_residual, pde_residual, psi, radial_ode_residual, EigenfunctionSpec, HyperPoint,
};
use efimov::forms::{gamma_action, h_kernel_l1, phi_alpha, RadialCharge};
use efimov::kernels::{g_kernel, r0_kernel, r0_marginal, r0_series, yukawa, KernelSeriesConfig};
use efimov::potential::{potential_g, PotentialConfig};
use efimov::spectrum::{counting_slope, efimov_spectrum_with, solve_s0};
use efimov::{ModelGeometry, QuadratureSpec, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Kernels,
    Eigenfunctions,
    Forms,
    Gamma,
    Potential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// measured < bound
    Below,
    /// measured > bound
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, bound: f64, relation: Relation) -> Self {
        let passed = match relation {
            Relation::Below => measured < bound,
            Relation::Above => measured > bound,
        };
        Self {
            name: name.into(),
            measured,
            bound,
            relation,
            passed,
        }
    }

    /// bound/measured for upper bounds, measured/bound for lower bounds;
    /// above 1 means the check passes with room to spare.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Below if self.measured <= 0.0 => f64::INFINITY,
            Relation::Below => self.bound / self.measured,
            Relation::Above => self.measured / self.bound,
        }
    }
}

/// Bound overrides keyed by check name.
#[derive(Debug, Clone, Default)]
pub struct Tolerances(pub BTreeMap<String, f64>);

impl Tolerances {
    fn get(&self, name: &str, default: f64) -> f64 {
        self.0.get(name).copied().unwrap_or(default)
    }

    fn below(&self, name: &str, measured: f64, default: f64) -> Check {
        Check::new(name, measured, self.get(name, default), Relation::Below)
    }

    fn above(&self, name: &str, measured: f64, default: f64) -> Check {
        Check::new(name, measured, self.get(name, default), Relation::Above)
    }
}

pub struct Criterion {
    pub id: u8,
    pub suite: Suite,
    pub title: &'static str,
    /// Wall-clock budget in seconds.
    pub budget_s: f64,
    run: fn(&Tolerances) -> Result<Vec<Check>>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub suite: Suite,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub numerical_error: bool,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

impl Outcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed_s < self.budget_s
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed) && self.within_budget()
    }
}

impl Criterion {
    pub fn run(&self, tol: &Tolerances) -> Outcome {
        let t = Instant::now();
        let r = (self.run)(tol);
        let elapsed_s = t.elapsed().as_secs_f64();
        let (checks, error, numerical_error) = match r {
            Ok(c) => (c, None, false),
            Err(e) => (Vec::new(), Some(e.to_string()), e.is_numerical()),
        };
        Outcome {
            id: self.id,
            suite: self.suite,
            title: self.title,
            checks,
            error,
            numerical_error,
            elapsed_s,
            budget_s: self.budget_s,
        }
    }
}

pub const CRITERIA: [Criterion; 14] = [
    Criterion { id: 1, suite: Suite::Specfun, title: "s0 root of the transcendental equation", budget_s: 1.0, run: c01 },
    Criterion { id: 2, suite: Suite::Specfun, title: "geometric law of the energies", budget_s: 10.0, run: c02 },
    Criterion { id: 3, suite: Suite::Specfun, title: "root asymptotics", budget_s: 60.0, run: c03 },
    Criterion { id: 4, suite: Suite::Specfun, title: "counting function slope", budget_s: 60.0, run: c04 },
    Criterion { id: 5, suite: Suite::Eigenfunctions, title: "Dirichlet condition on the hard core", budget_s: 60.0, run: c05 },
    Criterion { id: 6, suite: Suite::Eigenfunctions, title: "second-order stencil convergence", budget_s: 60.0, run: c06 },
    Criterion { id: 7, suite: Suite::Eigenfunctions, title: "contact condition", budget_s: 60.0, run: c07 },
    Criterion { id: 8, suite: Suite::Kernels, title: "kernel series and boundary identity", budget_s: 120.0, run: c08 },
    Criterion { id: 9, suite: Suite::Kernels, title: "marginal of the free kernel", budget_s: 60.0, run: c09 },
    Criterion { id: 10, suite: Suite::Forms, title: "L1 norm of the H kernel", budget_s: 60.0, run: c10 },
    Criterion { id: 11, suite: Suite::Forms, title: "form bounds on the charge suite", budget_s: 120.0, run: c11 },
    Criterion { id: 12, suite: Suite::Gamma, title: "eigenvalue condition", budget_s: 600.0, run: c12 },
    Criterion { id: 13, suite: Suite::Potential, title: "Faddeev identity", budget_s: 600.0, run: c13 },
    Criterion { id: 14, suite: Suite::Eigenfunctions, title: "bosonic symmetry", budget_s: 60.0, run: c14 },
];

pub fn criteria_for(suites: &[Suite]) -> Vec<&'static Criterion> {
    CRITERIA.iter().filter(|c| suites.contains(&c.suite)).collect()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0f64, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

fn c01(tol: &Tolerances) -> Result<Vec<Check>> {
    let c = solve_s0(1e-12)?;
    Ok(vec![
        tol.below("c01.s0_vs_1.00624", (c.s0 - 1.00624).abs(), 1e-5),
        tol.below("c01.f_residual", c.f_residual.abs(), 1e-12),
    ])
}

fn c02(tol: &Tolerances) -> Result<Vec<Check>> {
    let c = solve_s0(1e-12)?;
    let levels = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0)?, 9, 1e-12)?;
    let r = c.geometric_ratio;
    let dev = max_of((4..=8).map(|n| (levels[n].e_n / levels[n - 1].e_n - r).abs() / r));
    Ok(vec![tol.below("c02.ratio_rel_dev_n4_8", dev, 1e-4)])
}

fn c03(tol: &Tolerances) -> Result<Vec<Check>> {
    let c = solve_s0(1e-12)?;
    let levels = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0)?, 8, 1e-12)?;
    let eps: Vec<f64> = levels.iter().map(|l| l.epsilon_n.abs()).collect();
    let worst_step = max_of(eps.windows(2).map(|w| w[1] / w[0]));
    let from_root = max_of(
        levels
            .iter()
            .map(|l| ((l.t_n / c.asymptotic_root(l.n) - 1.0) - l.epsilon_n).abs()),
    );
    Ok(vec![
        tol.below("c03.eps_step_ratio", worst_step, 1.0),
        tol.below("c03.eps_max_n_ge_3", max_of(eps[2..].iter().copied()), 1e-4),
        tol.below("c03.series_vs_root", from_root, 1e-12),
    ])
}

fn c04(tol: &Tolerances) -> Result<Vec<Check>> {
    let c = solve_s0(1e-12)?;
    let levels = efimov_spectrum_with(&c, &ModelGeometry::unitary(1.0)?, 8, 1e-12)?;
    let slope = counting_slope(&levels, 3, 7)?;
    let target = c.s0 / (2.0 * PI);
    Ok(vec![tol.below("c04.slope_rel_dev", (slope / target - 1.0).abs(), 0.02)])
}

fn c05(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let spec = EigenfunctionSpec::compute(n, 1.0)?;
        let a = spec.geometry.a;
        let mut worst = 0.0f64;
        for k in 0..50 {
            let w = (k as f64 + 0.5) / 50.0 * PI / 2.0;
            let (r, rho) = (a * w.cos(), a * w.sin());
            let v = psi(&spec, r, rho)?;
            worst = worst.max(v.abs() * 4.0 * PI * r * rho / spec.c_n);
        }
        let k_root = spec.radial(a)?.abs();
        out.push(tol.below(&format!("c05.scaled_psi_n{n}"), worst, 1e-8));
        out.push(tol.below(&format!("c05.k_at_root_n{n}"), k_root, 1e-8));
        out.push(tol.below(&format!("c05.scaled_over_k_n{n}"), worst / k_root.max(f64::MIN_POSITIVE), 1.0 + 1e-9));
    }
    Ok(out)
}

/// Ten interior points with 1.3 ≤ R ≤ 3.7.
fn interior_points() -> Vec<(f64, f64)> {
    (0..10)
        .map(|k| {
            let w = (k as f64 + 0.5) * PI / 20.0;
            let big_r = 1.3 + 0.27 * k as f64;
            (big_r * w.cos(), big_r * w.sin())
        })
        .collect()
}

fn c06(tol: &Tolerances) -> Result<Vec<Check>> {
    let spec = EigenfunctionSpec::compute(1, 1.0)?;
    let h = 1e-2;
    let mut pde = 0.0f64;
    for (r, rho) in interior_points() {
        let q = pde_residual(&spec, r, rho, h)? / pde_residual(&spec, r, rho, h / 2.0)?;
        pde = pde.max((q - 4.0).abs());
    }
    let mut ode = 0.0f64;
    for k in 0..10 {
        let big_r = 1.2 + 0.4 * k as f64;
        let q = radial_ode_residual(&spec, big_r, h)? / radial_ode_residual(&spec, big_r, h / 2.0)?;
        ode = ode.max((q - 4.0).abs());
    }
    Ok(vec![
        tol.below("c06.pde_ratio_dev_from_4", pde, 0.5),
        tol.below("c06.ode_ratio_dev_from_4", ode, 0.5),
    ])
}

fn c07(tol: &Tolerances) -> Result<Vec<Check>> {
    let spec = EigenfunctionSpec::compute(1, 1.0)?;
    let wrong = spec.with_order(1.1 * spec.order);
    let mut worst = 0.0f64;
    let mut control = f64::INFINITY;
    for rho in [1.5, 2.0, 4.0] {
        let good = contact_bc_residual(&spec, rho)?.relative();
        let bad = contact_bc_residual(&wrong, rho)?.relative();
        worst = worst.max(good);
        control = control.min(bad / good.max(f64::MIN_POSITIVE));
    }
    Ok(vec![
        tol.below("c07.contact_rel_residual", worst, 1e-5),
        tol.above("c07.perturbed_over_true", control, 1e3),
    ])
}

fn unit6(rng: &mut ChaCha8Rng) -> [f64; 6] {
    loop {
        let v: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 {
            return v.map(|x| x / n);
        }
    }
}

fn point(u: [f64; 6], r: f64) -> HyperPoint {
    HyperPoint::new([u[0] * r, u[1] * r, u[2] * r], [u[3] * r, u[4] * r, u[5] * r])
}

fn c08(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut series = 0.0f64;
    for _ in 0..50 {
        let lambda = rng.gen_range(0.2..4.0);
        let r1 = rng.gen_range(0.3..3.0);
        let r2 = r1 * rng.gen_range(1.25..3.0);
        let (x, xp) = (point(unit6(&mut rng), r1), point(unit6(&mut rng), r2));
        let cfg = KernelSeriesConfig::new(lambda, 1.0)?.with_ell_max(400).with_tail_tol(1e-13);
        let s = r0_series(&x, &xp, &cfg)?.value;
        let c = r0_kernel(&x, &xp, lambda)?;
        series = series.max((s - c).abs() / c.abs());
    }
    let mut boundary = 0.0f64;
    for _ in 0..30 {
        let lambda = rng.gen_range(0.2..4.0);
        let a = rng.gen_range(0.5..2.0);
        let x = point(unit6(&mut rng), a);
        let xp = point(unit6(&mut rng), a * rng.gen_range(1.2..4.0));
        let cfg = KernelSeriesConfig::new(lambda, a)?.with_ell_max(2000).with_tail_tol(1e-13);
        let g = g_kernel(&x, &xp, &cfg)?.value;
        let r0 = r0_kernel(&x, &xp, lambda)?;
        boundary = boundary.max((g + r0).abs() / r0.abs());
    }
    Ok(vec![
        tol.below("c08.series_vs_closed", series, 1e-9),
        tol.below("c08.boundary_identity", boundary, 1e-8),
    ])
}

fn c09(tol: &Tolerances) -> Result<Vec<Check>> {
    let q = QuadratureSpec::with_tol(1e-300, 1e-12);
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.0, 4.0] {
        for delta in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let m = r0_marginal(delta, lambda, &q)?.value;
            worst = worst.max((m / yukawa(delta, lambda) - 1.0).abs());
        }
    }
    Ok(vec![tol.below("c09.marginal_rel", worst, 1e-8)])
}

fn c10(tol: &Tolerances) -> Result<Vec<Check>> {
    let q = QuadratureSpec::with_tol(1e-300, 1e-12);
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.0, 4.0] {
        let v = h_kernel_l1(lambda, &q)?;
        worst = worst.max((v / (PI * PI * lambda.sqrt()) - 1.0).abs());
    }
    Ok(vec![tol.below("c10.h_l1_rel", worst, 1e-8)])
}

/// (ρ−a)^p e^{−κρ} for p ∈ {1, 2}, κ ∈ {0.5, 1, 2}.
pub fn charge_suite(a: f64) -> Result<Vec<RadialCharge>> {
    let mut v = Vec::new();
    for p in [1, 2] {
        for kappa in [0.5, 1.0, 2.0] {
            v.push(RadialCharge::test_charge(a, p, kappa)?);
        }
    }
    Ok(v)
}

fn c11(tol: &Tolerances) -> Result<Vec<Check>> {
    let g = ModelGeometry::unitary(1.0)?;
    let lambda = 1.0;
    let cfg = KernelSeriesConfig::new(lambda, g.a)?.with_ell_max(efimov::forms::DEFAULT_PARTIAL_WAVES);
    let q = efimov::forms::default_forms_spec();
    let mut out = Vec::new();
    // worst ratio form/bound over the suite, so that < 1 is the claim
    let (mut p1l, mut p1u, mut p2u, mut p3u) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut neg = 0.0f64;
    for xi in charge_suite(g.a)? {
        let r = phi_alpha(&xi, &g, lambda, &cfg, &q)?;
        p1l = p1l.max(r.bounds.phi1_lower / r.phi1);
        p1u = p1u.max(r.phi1 / r.bounds.phi1_upper);
        p2u = p2u.max(r.phi2 / r.bounds.phi2_upper);
        p3u = p3u.max(r.phi3 / r.bounds.phi3_upper);
        neg = neg.max(-r.phi1.min(r.phi2).min(r.phi3));
    }
    out.push(tol.below("c11.phi1_lower_over_phi1", p1l, 1.0));
    out.push(tol.below("c11.phi1_over_upper", p1u, 1.0));
    out.push(tol.below("c11.phi2_over_upper", p2u, 1.0));
    out.push(tol.below("c11.phi3_over_upper", p3u, 1.0));
    out.push(tol.below("c11.negative_part_phi123", neg, 1e-300));
    Ok(out)
}

fn c12(tol: &Tolerances) -> Result<Vec<Check>> {
    let spec = EigenfunctionSpec::compute(1, 1.0)?;
    let xi = RadialCharge::efimov(&spec)?;
    let q = QuadratureSpec::with_tol(1e-300, 1e-9);
    let samples = [1.5, 2.0, 3.0];
    let mu = spec.mu();
    let at = gamma_action(&xi, &spec.geometry, mu, &samples, 4096, &q)?;
    let off = gamma_action(&xi, &spec.geometry, 1.5 * mu, &samples, 4096, &q)?;
    let worst = max_of(at.iter().map(|r| r.relative()));
    let control = off.iter().map(|r| r.relative()).fold(f64::INFINITY, f64::min);
    Ok(vec![
        tol.below("c12.eigen_residual", worst, 1e-2),
        tol.above("c12.control_over_residual", control / worst.max(f64::MIN_POSITIVE), 10.0),
    ])
}

/// Five points off the hyperplanes; the first has |x| = |y| = 2a, x ⟂ y.
pub fn faddeev_points() -> [HyperPoint; 5] {
    [
        HyperPoint::new([2.0, 0.0, 0.0], [0.0, 2.0, 0.0]),
        HyperPoint::new([0.3, -1.1, 0.7], [1.1, 0.4, -0.2]),
        HyperPoint::new([1.5, 0.2, 0.1], [-0.3, 0.9, 1.4]),
        HyperPoint::new([0.9, 0.8, -0.6], [0.2, -1.7, 0.5]),
        HyperPoint::new([3.0, 1.0, -2.0], [0.5, 4.0, 1.0]),
    ]
}

fn c13(tol: &Tolerances) -> Result<Vec<Check>> {
    let spec = EigenfunctionSpec::compute(1, 1.0)?;
    let xi = RadialCharge::efimov(&spec)?;
    let cfg = PotentialConfig::new(spec.mu(), spec.geometry)?;
    let mut worst = 0.0f64;
    for p in faddeev_points() {
        let g = potential_g(&xi, &p, &cfg)?;
        let b = big_psi(&spec, &p)?;
        worst = worst.max((g - b).abs() / b.abs());
    }
    Ok(vec![tol.below("c13.faddeev_rel", worst, 1e-3)])
}

fn c14(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [1, 2] {
        let spec = EigenfunctionSpec::compute(n, 1.0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let p = point(unit6(&mut rng), rng.gen_range(1.1..6.0));
            let v = big_psi(&spec, &p)?;
            for q in [p.sigma12(), p.sigma23()] {
                worst = worst.max((big_psi(&spec, &q)? - v).abs() / v.abs());
            }
        }
        out.push(tol.below(&format!("c14.symmetry_rel_n{n}"), worst, 1e-12));
    }
    Ok(out)
}
