//! Named verification suites. Each returns a [`Report`]; `all` runs every
//! suite and concatenates the cases.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::berg::{berg_eval, berg_limit, berg_multiplier, berg_ode_residual, BergFunction};
use crate::convex::{mixed_area_measure, mixed_spherical_lifting, surface_area_measure_relative, Polytope, Subspace, Vector, Zonotope};
use crate::error::{domain, Result};
use crate::flags::{
    exact, pi1_flag, pi1_sample, radon_down, radon_down_prime_sample, radon_up, radon_up_sample, uniform_sphere,
    Estimate, Flag, HalfSphere, McRng, SeededSampler, DEFAULT_NMC,
};
use crate::kernel::{
    rho, rho_closed_form, rho_multiplier, rho_ode_residual, rho_positivity_certificate, rho_spectral, KernelProfile,
    KernelRoute, RHO_MULTIPLIER_SCALE,
};
use crate::special::{quadrature, QuadratureKind};
use crate::valuations::{ks_minkowski, verify_theorem_lambda_ks, verify_theorem_llks, Case, MinkowskiValuationSpec, Report, VerifyConfig};
use crate::zonal::{multipliers, ZonalProfile};

/// Kernel pairs (n, i) covered by the kernel suites.
pub const KERNEL_PAIRS: [(usize, usize); 7] = [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 2)];
/// (n, j) pairs of the mean-section multiplier check.
pub const MEAN_SECTION_PAIRS: [(usize, usize); 3] = [(4, 3), (5, 3), (5, 4)];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Ambient dimension for suites that take one (llks).
    pub n: Option<usize>,
    pub n_mc: usize,
    pub seed: u64,
    /// Replaces the deterministic tolerance of a suite.
    pub tol: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { n: None, n_mc: DEFAULT_NMC, seed: 0, tol: None }
    }
}

type SuiteFn = fn(&SuiteConfig) -> Result<Report>;

/// Registered suites in run order.
pub const SUITES: [(&str, SuiteFn); 11] = [
    ("berg-ode", berg_ode),
    ("berg-endpoint", berg_endpoint),
    ("kernel-routes", kernel_routes),
    ("kernel-ode", kernel_ode),
    ("multipliers", multiplier_laws),
    ("mean-section", mean_section),
    ("lifting", lifting),
    ("llks", llks),
    ("lambda-ks", lambda_ks),
    ("radon", radon),
    ("projection-body", projection_body),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).chain(["all"]).collect()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    if name == "all" {
        let mut all = Report::new("all", cfg.seed, cfg.n_mc);
        for (sub, f) in SUITES {
            for mut c in f(cfg)?.cases {
                c.name = format!("{sub}: {}", c.name);
                all.cases.push(c);
            }
        }
        return Ok(all);
    }
    let f = SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| domain!("unknown suite '{name}'; known: {}", suite_names().join(", ")))?;
    f(cfg)
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

fn max_abs<I: Iterator<Item = Result<f64>>>(mut it: I) -> Result<f64> {
    it.try_fold(0.0f64, |m, v| Ok(m.max(v?.abs())))
}

pub fn berg_ode(cfg: &SuiteConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-8);
    let mut r = Report::new("berg-ode", cfg.seed, cfg.n_mc);
    for j in 2..=12 {
        let worst = max_abs(grid(-0.99, 0.99, 1001).map(|t| berg_ode_residual(j, t)))?;
        r.cases.push(Case::exact(format!("g_{j} residual"), worst, 0.0, tol));
    }
    Ok(r)
}

pub fn berg_endpoint(cfg: &SuiteConfig) -> Result<Report> {
    let rel = cfg.tol.unwrap_or(1e-2);
    let mut r = Report::new("berg-endpoint", cfg.seed, cfg.n_mc);
    for j in 4..=9 {
        for m in 0..=1 {
            let e = (j as f64 - 3.0) / 2.0 + m as f64;
            let scaled = |t: f64| -> Result<f64> { Ok((1.0 - t * t).powf(e) * berg_eval(j, t, m)?) };
            let lim = berg_limit(j, m, 1)?;
            r.cases.push(Case::exact(format!("g_{j}^({m}) at 1"), scaled(1.0 - 1e-6)?, lim, rel * lim.abs()));
            r.cases.push(Case::exact(format!("g_{j}^({m}) at -1"), scaled(-1.0 + 1e-6)?, 0.0, 1e-3));
        }
    }
    Ok(r)
}

pub fn kernel_routes(cfg: &SuiteConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-5);
    let mut r = Report::new("kernel-routes", cfg.seed, cfg.n_mc);
    for (n, i) in KERNEL_PAIRS {
        let closed = max_abs(grid(-0.9, 0.9, 181).map(|t| Ok(rho(n, i, t, 0)? - rho_closed_form(n, i, t)?)))?;
        let spectral = max_abs(grid(-0.9, 0.9, 181).map(|t| Ok(rho(n, i, t, 0)? - rho_spectral(n, i, t, 80)?)))?;
        r.cases.push(Case::exact(format!("rho_{n},{i} recursion vs closed form"), closed, 0.0, tol));
        r.cases.push(Case::exact(format!("rho_{n},{i} recursion vs spectral"), spectral, 0.0, tol));
    }
    Ok(r)
}

/// ∫ ρ_{3,1}(t) √(1−t²) dt.
pub fn green_constant() -> Result<f64> {
    let rule = quadrature(4096, QuadratureKind::ArcSubstituted);
    rho(3, 1, 0.0, 0)?;
    Ok(rule.integrate_weighted(0.5, |t| rho(3, 1, t, 0).unwrap_or(f64::NAN)))
}

pub fn kernel_ode(cfg: &SuiteConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-7);
    let mut r = Report::new("kernel-ode", cfg.seed, cfg.n_mc);
    for (n, i) in KERNEL_PAIRS {
        let w = (n as f64 - 2.0) / 2.0 + 2.0;
        let worst = max_abs(grid(-0.999, 0.999, 2001).map(|t| Ok(rho_ode_residual(n, i, t)? * (1.0 - t * t).powf(w))))?;
        r.cases.push(Case::exact(format!("rho_{n},{i} weighted residual"), worst, 0.0, tol));
        let p = rho_positivity_certificate(n, i, 10_000)?;
        let mut c = Case::exact(format!("rho_{n},{i} positivity (grid minimum)"), p.min_value, 0.0, f64::INFINITY);
        c.pass = p.pass;
        r.cases.push(c);
    }
    r.cases.push(Case::exact("Green constant of rho_3,1", green_constant()?, 0.25, 1e-6));
    Ok(r)
}

pub fn multiplier_laws(cfg: &SuiteConfig) -> Result<Report> {
    let mut r = Report::new("multipliers", cfg.seed, cfg.n_mc);
    for n in 3..=5 {
        for j in 2..=n {
            let g = BergFunction::new(j)?.profile(n);
            let a = multipliers(&g, 11)?;
            let mut worst: f64 = 0.0;
            for k in (0..=10).filter(|&k| k != 1) {
                let c = berg_multiplier(n, j, k)?;
                worst = worst.max(((a.values[k] - c) / c).abs());
            }
            r.cases.push(Case::exact(format!("a^{n}_k[g_{j}] quadrature vs closed form (rel)"), worst, 0.0, 1e-6));
            r.cases.push(Case::exact(format!("a^{}_k[g_{j}'] vs 2pi a^{n}_(k+1)[g_{j}] (rel)", n + 2), shift_gap(&g)?, 0.0, 1e-7));
        }
        let poly = ZonalProfile::polynomial(n, vec![0.3, -1.0, 0.5, 2.0, 0.0, -0.7]);
        r.cases.push(Case::exact(format!("a^{}_k[p'] vs 2pi a^{n}_(k+1)[p] (rel)", n + 2), shift_gap(&poly)?, 0.0, 1e-7));
    }
    for (n, i) in KERNEL_PAIRS {
        let q = multipliers(&KernelProfile::new(n, i, KernelRoute::Recursion)?.profile(), 10)?;
        let worst = (0..=10)
            .map(|k| {
                let e = RHO_MULTIPLIER_SCALE * rho_multiplier(n, i, k);
                ((q.values[k] - e) / e).abs()
            })
            .fold(0.0, f64::max);
        r.cases.push(Case::exact(format!("a_k[rho_{n},{i}] vs (pi/4) Gamma ratio (rel)"), worst, 0.0, 1e-6));
    }
    Ok(r)
}

/// Largest relative gap in a^{n+2}_k[g'] = 2π a^n_{k+1}[g] for k ≤ 8.
fn shift_gap(g: &ZonalProfile) -> Result<f64> {
    let a = multipliers(g, 9)?;
    let d = multipliers(&g.derivative(g.n + 2)?, 8)?;
    let floor = 1e-3 * a.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((0..=8)
        .map(|k| {
            let rhs = 2.0 * PI * a.values[k + 1];
            (d.values[k] - rhs).abs() / rhs.abs().max(floor)
        })
        .fold(0.0, f64::max))
}

/// Relative spread of a_k[g_j]·a_k[ρ_{n,n+1−j}]/a_k[g_{j−1}] over even k ≤ 10.
pub fn mean_section_ratios(n: usize, j: usize) -> Result<(f64, f64)> {
    let i = n + 1 - j;
    let gj = multipliers(&BergFunction::new(j)?.profile(n), 10)?;
    let gj1 = multipliers(&BergFunction::new(j - 1)?.profile(n), 10)?;
    let rho = multipliers(&KernelProfile::new(n, i, KernelRoute::Recursion)?.profile(), 10)?;
    let ratios: Vec<f64> = (0..=10).step_by(2).map(|k| gj.values[k] * rho.values[k] / gj1.values[k]).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean.abs();
    Ok((mean, spread))
}

pub fn mean_section(cfg: &SuiteConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-5);
    let mut r = Report::new("mean-section", cfg.seed, cfg.n_mc);
    for (n, j) in MEAN_SECTION_PAIRS {
        let (mean, spread) = mean_section_ratios(n, j)?;
        let mut c = Case::exact(format!("n={n} j={j} ratio spread (ratio {mean:.9})"), spread, 0.0, tol);
        c.rel_err = spread;
        r.cases.push(c);
    }
    Ok(r)
}

fn gauss(rng: &mut McRng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn lifting(cfg: &SuiteConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-10);
    let mut r = Report::new("lifting", cfg.seed, cfg.n_mc);
    let mut rng = SeededSampler::new(cfg.seed).rng();
    for t in 0..20 {
        let e = Subspace::span(3, &[gauss(&mut rng, 3), gauss(&mut rng, 3)])?;
        let c = gauss(&mut rng, 3);
        let p = Polytope::from_points((0..7).map(|_| &c + e.embed(&gauss(&mut rng, 2))).collect())?;
        let q = Zonotope::new((0..3).map(|_| gauss(&mut rng, 3)).collect(), gauss(&mut rng, 3))?.to_polytope()?;
        let perp = e.complement();
        let lhs = mixed_area_measure(&[&p, &q])?.restrict(|u| !perp.contains(u, 1e-9));
        let rhs = mixed_spherical_lifting(&e, &[&q], &surface_area_measure_relative(&p, &e)?)?.scaled(0.5);
        r.cases.push(Case::exact(format!("pair {t}: max atom difference"), lhs.max_atom_difference(&rhs), 0.0, tol));
    }
    Ok(r)
}

pub fn llks(cfg: &SuiteConfig) -> Result<Report> {
    let mut s = SeededSampler::new(cfg.seed);
    verify_theorem_llks(&mut s, &VerifyConfig { n: cfg.n.unwrap_or(3), n_mc: cfg.n_mc })
}

pub fn lambda_ks(cfg: &SuiteConfig) -> Result<Report> {
    let mut s = SeededSampler::new(cfg.seed);
    verify_theorem_lambda_ks(&mut s, &VerifyConfig { n: 3, n_mc: cfg.n_mc })
}

fn mc_case_capped(name: String, a: &Estimate, b: &Estimate, cap: f64) -> Case {
    let mut c = Case::mc(name, a, b);
    c.pass &= a.sigma <= cap && b.sigma <= cap;
    c
}

/// Both linear rules for the Radon transforms: π₁ commutes with RT_{k−1,k}
/// via RT′, and RT_{k+1,k} π₁ = ((k+1)/k) π₁ RT_{k+1,k}; 20 flags each.
pub fn radon(cfg: &SuiteConfig) -> Result<Report> {
    let mut r = Report::new("radon", cfg.seed, cfg.n_mc);
    let mut s = SeededSampler::new(cfg.seed);
    let mut rng = s.rng();
    for (n, k) in [(3usize, 2usize), (4, 3)] {
        for t in 0..10 {
            let (w, a) = (uniform_sphere(n, &mut rng), uniform_sphere(n, &mut rng));
            let zeta = exact(move |_: &Subspace, v: &Vector| w.dot(v) + 0.7 * a.dot(v).powi(2) + 0.2);
            let flag = Flag::random(n, k - 1, &mut rng)?;
            let pz = |f: &Subspace, y: &Vector, r: &mut McRng| pi1_sample(&zeta, f, y, r);
            let lhs = radon_down(&pz, &flag, &mut s, cfg.n_mc)?;
            let rt = |e: &Subspace, x: &Vector, r: &mut McRng| radon_down_prime_sample(&zeta, e, x, r);
            let rhs = pi1_flag(&rt, &flag, &mut s, cfg.n_mc);
            r.cases.push(mc_case_capped(format!("down n={n} k={k} flag {t}"), &lhs, &rhs, 1e-2));
        }
    }
    for (n, k) in [(3usize, 2usize), (4, 2)] {
        for t in 0..10 {
            let (w, a) = (uniform_sphere(n, &mut rng), uniform_sphere(n, &mut rng));
            let zeta = exact(move |_: &Subspace, v: &Vector| w.dot(v) + 0.7 * a.dot(v).powi(2) + 0.2);
            let flag = Flag::random(n, k + 1, &mut rng)?;
            let pz = |f: &Subspace, y: &Vector, r: &mut McRng| pi1_sample(&zeta, f, y, r);
            let lhs = radon_up(&pz, &flag, &mut s, cfg.n_mc)?;
            let rt = |e: &Subspace, x: &Vector, r: &mut McRng| radon_up_sample(&zeta, e, x, r);
            let rhs = pi1_flag(&rt, &flag, &mut s, cfg.n_mc).scaled((k + 1) as f64 / k as f64);
            r.cases.push(mc_case_capped(format!("up n={n} k={k} flag {t}"), &lhs, &rhs, 1e-2));
        }
    }
    Ok(r)
}

/// KS of the projection body map against ½‖v|(E⊥ ∨ u)‖ on 20 random
/// flag/direction pairs in R^3.
pub fn projection_body(cfg: &SuiteConfig) -> Result<Report> {
    let mut r = Report::new("projection-body", cfg.seed, cfg.n_mc);
    let mut s = SeededSampler::new(cfg.seed);
    let mut rng = s.rng();
    let spec = MinkowskiValuationSpec::projection_body(3, 1)?;
    for t in 0..20 {
        let flag = Flag::random(3, 2, &mut rng)?;
        let v = uniform_sphere(3, &mut rng);
        let est = ks_minkowski(&spec, &flag, &v, &mut s, cfg.n_mc)?;
        let target = 0.5 * HalfSphere::new(&flag).space().project(&v).norm();
        r.cases.push(Case::mc(format!("triple {t}"), &est, &Estimate::exact(target)));
    }
    Ok(r)
}
