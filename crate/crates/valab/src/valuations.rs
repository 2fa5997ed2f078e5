//! Valuations on polytopes: spherical and mixed-volume valuations, the
//! Lefschetz operators Λ and L (L both by sections and spectrally),
//! Klain–Schneider functions and the theorem drivers.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::convex::{
    mixed_area_measure, surface_area_measure, DiscreteSphericalMeasure, Polytope, Subspace, Vector, Zonotope,
};
use crate::error::{domain, Error, Result};
use crate::flags::{
    estimate, exact, hemispherical_convolve, mixed_projection, pi1_flag, radon_down, radon_up, radon_up_sample,
    uniform_sphere_in, weighted_projection, Estimate, Flag, McRng, SeededSampler,
};
use crate::kernel::{is_admissible, rho_multipliers};
use crate::special::{binomial, flag_coefficient, kappa, omega};
use crate::zonal::{multiplier, multipliers, project_linear, synthesized_profile, MultiplierSequence, ZonalProfile};

/// Zonotopal ball size used for area measures of intermediate degree.
pub const DEFAULT_BALL_M: usize = 200;
/// Truncation degree for the spectral Lefschetz route.
pub const DEFAULT_SPECTRAL_KMAX: usize = 160;
const CENTER_TOL: f64 = 1e-10;

/// φ(K) = ∫ f(⟨e_n,u⟩) S_i(K, du) for a zonal profile f.
#[derive(Debug, Clone)]
pub struct SphericalValuation {
    pub degree: usize,
    pub generator: ZonalProfile,
    pub label: String,
    /// Generator count of the zonotopal ball behind S_i for 0 < i < n−1.
    pub ball_m: usize,
}

impl SphericalValuation {
    /// Requires a centered generator (no linear component).
    pub fn new(degree: usize, generator: ZonalProfile, label: impl Into<String>) -> Result<Self> {
        let c = project_linear(&generator)?;
        if c.abs() > CENTER_TOL {
            return Err(domain!("generator '{}' has linear component {c:e}", generator.label));
        }
        Self::new_uncentered(degree, generator, label)
    }

    /// As [`new`](Self::new) without the centering check.
    pub fn new_uncentered(degree: usize, generator: ZonalProfile, label: impl Into<String>) -> Result<Self> {
        if degree >= generator.n {
            return Err(domain!("degree {degree} is out of range for S^{}", generator.n - 1));
        }
        Ok(Self { degree, generator, label: label.into(), ball_m: DEFAULT_BALL_M })
    }

    pub fn with_ball(mut self, m: usize) -> Self {
        self.ball_m = m;
        self
    }

    pub fn n(&self) -> usize {
        self.generator.n
    }
}

pub type WeightFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// K ↦ V(K^{[i]}, C, f) = ∫ f dS(K^{[i]}, C_1, …, C_{n−i−1}, ·).
#[derive(Clone)]
pub struct MixedVolumeValuation {
    pub n: usize,
    pub degree: usize,
    pub refs: Vec<Polytope>,
    pub weight: WeightFn,
    pub label: String,
}

impl fmt::Debug for MixedVolumeValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedVolumeValuation")
            .field("n", &self.n)
            .field("degree", &self.degree)
            .field("refs", &self.refs.len())
            .field("label", &self.label)
            .finish()
    }
}

impl MixedVolumeValuation {
    pub fn new<F>(n: usize, degree: usize, refs: Vec<Polytope>, weight: F, label: impl Into<String>) -> Result<Self>
    where
        F: Fn(&Vector) -> f64 + Send + Sync + 'static,
    {
        if degree == 0 || degree >= n || refs.len() + degree + 1 != n {
            return Err(domain!("degree {degree} in R^{n} needs {} reference bodies, got {}", n.saturating_sub(degree + 1), refs.len()));
        }
        if refs.iter().any(|r| r.ambient() != n) {
            return Err(domain!("reference bodies must lie in R^{n}"));
        }
        Ok(Self { n, degree, refs, weight: Arc::new(weight), label: label.into() })
    }

    pub fn measure(&self, k: &Polytope) -> Result<DiscreteSphericalMeasure> {
        let mut bodies: Vec<&Polytope> = vec![k; self.degree];
        bodies.extend(self.refs.iter());
        mixed_area_measure(&bodies)
    }
}

#[derive(Debug, Clone)]
pub enum Valuation {
    /// χ; 1 on nonempty bodies.
    Euler,
    /// V_i.
    Intrinsic(usize),
    /// V_n.
    Volume,
    Spherical(SphericalValuation),
    MixedVolume(MixedVolumeValuation),
}

impl Valuation {
    pub fn degree(&self, n: usize) -> usize {
        match self {
            Valuation::Euler => 0,
            Valuation::Intrinsic(i) => *i,
            Valuation::Volume => n,
            Valuation::Spherical(s) => s.degree,
            Valuation::MixedVolume(m) => m.degree,
        }
    }
}

/// S_i(K, ·) = S(K^{[i]}, B^{[n−1−i]}, ·) for 1 ≤ i ≤ n−1. Below n−1 the
/// ball is an m-segment zonotope and the measure is expanded
/// multilinearly over segment tuples, so the cost grows like C(m, n−1−i).
pub fn area_measure(k: &Polytope, i: usize, ball_m: usize) -> Result<DiscreteSphericalMeasure> {
    let n = k.ambient();
    if i == 0 || i >= n {
        return Err(domain!("area measure S_{i} needs 1 <= i <= {}", n - 1));
    }
    if i == n - 1 {
        return surface_area_measure(k);
    }
    let copies = n - 1 - i;
    let segs = Zonotope::ball(n, ball_m)?.segments();
    let fact: f64 = (1..=copies).map(|c| c as f64).product();
    let mut total = DiscreteSphericalMeasure::new(n);
    let mut idx: Vec<usize> = (0..copies).collect();
    let m = segs.len();
    if m < copies {
        return Ok(total);
    }
    loop {
        let mut bodies: Vec<&Polytope> = vec![k; i];
        bodies.extend(idx.iter().map(|&g| &segs[g]));
        total = total.plus(&mixed_area_measure(&bodies)?.scaled(fact));
        let mut p = copies;
        while p > 0 && idx[p - 1] == m - copies + p - 1 {
            p -= 1;
        }
        if p == 0 {
            return Ok(total);
        }
        idx[p - 1] += 1;
        for q in p..copies {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

pub fn evaluate(val: &Valuation, k: &Polytope) -> Result<f64> {
    match val {
        Valuation::Euler => Ok(1.0),
        Valuation::Intrinsic(i) => k.intrinsic_volume(*i),
        Valuation::Volume => Ok(k.ambient_volume()),
        Valuation::Spherical(s) => {
            let n = s.n();
            if k.ambient() != n {
                return Err(domain!("valuation on R^{n} applied to a body of R^{}", k.ambient()));
            }
            if s.degree == 0 {
                // S_0 is the spherical Lebesgue measure for every body
                return multiplier(&s.generator, 0);
            }
            let mu = area_measure(k, s.degree, s.ball_m)?;
            Ok(mu.integrate(|u| s.generator.eval(u[n - 1].clamp(-1.0, 1.0))))
        }
        Valuation::MixedVolume(m) => {
            if k.ambient() != m.n {
                return Err(domain!("valuation on R^{} applied to a body of R^{}", m.n, k.ambient()));
            }
            Ok(m.measure(k)?.integrate(|u| (m.weight)(u)))
        }
    }
}

/// How the affine hyperplanes of the L operator are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LDirectMethod {
    /// Normals uniform on S^{n−1}.
    Hyperplanes,
    /// Normals uniform on the sphere of the carrier E of K, with the
    /// flag-coefficient factor [n−1, d−1]/[n, d], d = dim E.
    Reduction,
}

/// (Lφ)(K) = ∫_{AGr_{n,n−1}} φ(K ∩ H) dH by Monte Carlo over affine
/// hyperplanes meeting K.
pub fn lefschetz_l_direct(val: &Valuation, k: &Polytope, method: LDirectMethod, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    let phi = |q: &Polytope| evaluate(val, q);
    lefschetz_l_direct_with(&phi, k, method, sampler, n_mc)
}

/// [`lefschetz_l_direct`] for an arbitrary functional on polytopes.
pub fn lefschetz_l_direct_with(
    phi: &(dyn Fn(&Polytope) -> Result<f64> + Sync),
    k: &Polytope,
    method: LDirectMethod,
    sampler: &mut SeededSampler,
    n_mc: usize,
) -> Result<Estimate> {
    let n = k.ambient();
    let (dirs, factor) = match method {
        LDirectMethod::Hyperplanes => (Subspace::whole(n), 1.0),
        LDirectMethod::Reduction => {
            let d = k.dim();
            if d < 2 {
                return Ok(Estimate::exact(0.0));
            }
            (k.carrier().clone(), flag_coefficient(n - 1, d - 1)? / flag_coefficient(n, d)?)
        }
    };
    phi(k)?;
    let est = estimate(sampler, n_mc, |rng| {
        let w = uniform_sphere_in(&dirs, rng);
        let hi = k.support_function(&w).expect("unit direction");
        let lo = -k.support_function(&-&w).expect("unit direction");
        if hi - lo <= 0.0 {
            return 0.0;
        }
        let s = rng.random_range(lo..hi);
        match k.intersect_hyperplane(&w, s) {
            Ok(Some(q)) => factor * (hi - lo) * phi(&q).unwrap_or(f64::NAN),
            Ok(None) => 0.0,
            Err(_) => f64::NAN,
        }
    });
    if !est.mean.is_finite() {
        return Err(Error::Numeric("a section could not be evaluated".into()));
    }
    Ok(est)
}

/// Multipliers of the generator of Lφ: a_k[f]·a_k[ρ_{n,i}], with the
/// linear mode removed.
pub fn lefschetz_l_multipliers(val: &SphericalValuation, kmax: usize) -> Result<MultiplierSequence> {
    let (n, i) = (val.n(), val.degree);
    if i == 0 || i + 1 >= n || !is_admissible(n, i) {
        return Err(domain!("the spectral L route needs 1 <= i < n−1, got i = {i}, n = {n}"));
    }
    let a = multipliers(&val.generator, kmax)?;
    let mut seq = a.convolve(&rho_multipliers(n, i, kmax))?;
    if kmax >= 1 {
        seq.values[1] = 0.0;
    }
    Ok(seq)
}

/// Lφ with generator f ∗ ρ_{n,i}, synthesized up to degree `kmax`. The
/// kernel ρ_{n,i} carries this crate's normalization; the true generator
/// differs by a constant factor depending only on (n, i).
pub fn lefschetz_l_spectral(val: &SphericalValuation, kmax: usize) -> Result<SphericalValuation> {
    let seq = lefschetz_l_multipliers(val, kmax)?;
    let (profile, _) = synthesized_profile(seq, format!("L {}", val.label));
    Ok(SphericalValuation { degree: val.degree + 1, generator: profile, label: format!("L {}", val.label), ball_m: val.ball_m })
}

/// Λφ with generator i·f.
pub fn lefschetz_lambda(val: &SphericalValuation) -> Result<SphericalValuation> {
    if val.degree == 0 {
        return Err(domain!("Λ lowers the degree; degree 0 has no image"));
    }
    Ok(SphericalValuation {
        degree: val.degree - 1,
        generator: val.generator.scaled(val.degree as f64),
        label: format!("Λ {}", val.label),
        ball_m: val.ball_m,
    })
}

/// KS_φ(E,u) = (1/C(n−1,i)) (π_{E,−i} f)(u) for a spherical valuation,
/// with (E, u) ∈ Fl_{n,i+1} and f read about e_n.
pub fn ks_spherical(val: &SphericalValuation, flag: &Flag, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    let (n, i) = (val.n(), val.degree);
    if flag.dim() != i + 1 || flag.e.ambient() != n {
        return Err(domain!("KS of a degree-{i} valuation lives on Fl_{{{n},{}}}", i + 1));
    }
    let g = val.generator.clone();
    let est = weighted_projection(flag, -(i as f64), move |v| g.eval(v[n - 1].clamp(-1.0, 1.0)), sampler, n_mc)?;
    Ok(est.scaled(1.0 / binomial((n - 1) as i64, i as i64)))
}

/// KS(E,u) = (1/C(n−1,i)) [(Id − π₁^E)(π_{E,C} f)](u) for (E, u) ∈
/// Fl_{n,i+1}; π₁^E is the orthogonal projection onto linear functions,
/// estimated over S^i(E).
pub fn ks_eval_mixed(val: &MixedVolumeValuation, flag: &Flag, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    let k = val.degree + 1;
    if flag.dim() != k || flag.e.ambient() != val.n {
        return Err(domain!("KS of a degree-{} valuation lives on Fl_{{{},{k}}}", val.degree, val.n));
    }
    let refs: Vec<&Polytope> = val.refs.iter().collect();
    let g = |u: &Vector| -> f64 {
        let fl = Flag { e: flag.e.clone(), u: u.clone() };
        mixed_projection(&fl, &refs, |v| (val.weight)(v)).unwrap_or(f64::NAN)
    };
    let c = 1.0 / binomial((val.n - 1) as i64, val.degree as i64);
    let at_u = g(&flag.u);
    let est = estimate(sampler, n_mc, |rng| {
        let x = uniform_sphere_in(&flag.e, rng);
        c * (at_u - k as f64 * flag.u.dot(&x) * g(&x))
    });
    if !est.mean.is_finite() {
        return Err(Error::Numeric("mixed projection failed".into()));
    }
    Ok(est)
}

/// One unbiased draw of KS_φ for a mixed-volume valuation, for use inside
/// other estimators.
pub fn ks_mixed_sample(val: &MixedVolumeValuation, e: &Subspace, u: &Vector, rng: &mut McRng) -> f64 {
    let refs: Vec<&Polytope> = val.refs.iter().collect();
    let g = |x: &Vector| -> f64 {
        let fl = Flag { e: e.clone(), u: x.clone() };
        mixed_projection(&fl, &refs, |v| (val.weight)(v)).unwrap_or(f64::NAN)
    };
    let k = e.dim() as f64;
    let x = uniform_sphere_in(e, rng);
    (g(u) - k * u.dot(&x) * g(&x)) / binomial((val.n - 1) as i64, val.degree as i64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinkowskiKind {
    ProjectionBody,
    MeanSection { j: usize, m_const: f64 },
    Custom,
}

/// A Minkowski valuation of degree i given by its generating function.
#[derive(Debug, Clone)]
pub struct MinkowskiValuationSpec {
    pub degree: usize,
    pub generator: ZonalProfile,
    pub kind: MinkowskiKind,
}

impl MinkowskiValuationSpec {
    /// Π_i, generated by ½|t|.
    pub fn projection_body(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(domain!("projection body map needs 1 <= i <= n−1"));
        }
        let g = ZonalProfile::new(n, "half abs", 0.0, 0.0, 0, |_, t| 0.5 * t.abs());
        Ok(Self { degree: i, generator: g, kind: MinkowskiKind::ProjectionBody })
    }

    /// The centered mean section operator of index j, degree n+1−j.
    pub fn mean_section(n: usize, j: usize, m_const: f64) -> Result<Self> {
        let g = crate::berg::mso_profile(n, j, m_const)?;
        Ok(Self { degree: n + 1 - j, generator: g, kind: MinkowskiKind::MeanSection { j, m_const } })
    }

    pub fn custom(degree: usize, generator: ZonalProfile) -> Self {
        Self { degree, generator, kind: MinkowskiKind::Custom }
    }
}

/// KS_Φ((E,u), v) = (1/C(n−1,i)) ∫_{H^{n−i−1}(E,u)} f_Φ(⟨v,w⟩) dw.
pub fn ks_minkowski(spec: &MinkowskiValuationSpec, flag: &Flag, v: &Vector, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    if flag.dim() != spec.degree + 1 {
        return Err(domain!("KS of a degree-{} Minkowski valuation lives on flags of dimension {}", spec.degree, spec.degree + 1));
    }
    hemispherical_convolve(flag, &spec.generator, v, sampler, n_mc)
}

/// h(Π_i K, v) for a polytope K of dimension i+1, from its facets within
/// the carrier E: Σ_F vol(F) · ½‖v|(E⊥ ∨ u_F)‖.
pub fn projection_body_support(k: &Polytope, v: &Vector) -> Result<f64> {
    if k.dim() < 2 {
        return Err(domain!("projection body support needs a body of dimension >= 2"));
    }
    let perp = k.carrier().complement();
    Ok(k.facets().iter().map(|f| f.area * 0.5 * perp.join(&f.normal).project(v).norm()).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub sigma: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl Case {
    /// Two estimates that must agree within three combined σ.
    pub fn mc(name: impl Into<String>, lhs: &Estimate, rhs: &Estimate) -> Self {
        let sigma = (lhs.sigma.powi(2) + rhs.sigma.powi(2)).sqrt();
        let abs_err = (lhs.mean - rhs.mean).abs();
        Self::build(name, lhs.mean, rhs.mean, sigma, abs_err <= 3.0 * sigma)
    }

    /// Deterministic values that must agree to `tol` (absolute).
    pub fn exact(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::build(name, lhs, rhs, 0.0, (lhs - rhs).abs() <= tol)
    }

    fn build(name: impl Into<String>, lhs: f64, rhs: f64, sigma: f64, pass: bool) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = if rhs != 0.0 { abs_err / rhs.abs() } else { abs_err };
        Self { name: name.into(), lhs, rhs, sigma, abs_err, rel_err, pass: pass && lhs.is_finite() && rhs.is_finite() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<Case>,
    pub seed: u64,
    pub n_mc: usize,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, n_mc: usize) -> Self {
        Self { suite: suite.into(), cases: Vec::new(), seed, n_mc }
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n: usize,
    pub n_mc: usize,
}

fn cube_in(n: usize, d: usize) -> Polytope {
    let lo = Vector::zeros(n);
    let hi = Vector::from_fn(n, |r, _| if r < d { 1.0 } else { 0.0 });
    Polytope::cuboid(&lo, &hi).expect("cube")
}

/// KS_{Lφ} = ([n−1,i+1]/[n,i+2]) RT_{i+1,i+2} KS_φ at i = 1, checked for
/// φ = V_1 (KS ≡ ½) and, in R^3, for a mixed-volume valuation with a
/// segment reference body. The left side evaluates Lφ on a polytope by
/// sections; the right side pairs the transformed KS function with the
/// polytope's surface area measure. Each section of the mixed case costs
/// several hulls, so that case runs on a quarter of `n_mc`.
pub fn verify_theorem_llks(sampler: &mut SeededSampler, cfg: &VerifyConfig) -> Result<Report> {
    let n = cfg.n;
    if n != 3 && n != 4 {
        return Err(domain!("the L–KS driver runs in R^3 and R^4, got n = {n}"));
    }
    let mut report = Report::new("llks", sampler.seed(), cfg.n_mc);
    let ratio = flag_coefficient(n - 1, 2)? / flag_coefficient(n, 3)?;
    let p = cube_in(n, 3);
    let area = p.surface_area();
    let direct = lefschetz_l_direct(&Valuation::Intrinsic(1), &p, LDirectMethod::Hyperplanes, sampler, cfg.n_mc)?.scaled(1.0 / area);
    let mut rng = sampler.rng();
    let u = uniform_sphere_in(p.carrier(), &mut rng);
    let flag = Flag::new(p.carrier().clone(), u)?;
    let rt = radon_up(&exact(|_, _| 0.5), &flag, sampler, cfg.n_mc)?.scaled(ratio);
    // ½ E‖u|F‖ over 2-planes F of a 3-space is ½·π/4
    let oracle = ratio * PI / 8.0;
    report.cases.push(Case::mc("KS_LV1: sections vs RT", &direct, &rt));
    report.cases.push(Case::mc("KS_LV1: sections vs closed form", &direct, &Estimate::exact(oracle)));
    report.cases.push(Case::mc("KS_LV1: RT vs closed form", &rt, &Estimate::exact(oracle)));

    if n == 3 {
        let seg = Polytope::segment(Vector::zeros(3), Vector::from_column_slice(&[0.2, 0.4, 1.0]))?;
        let phi = MixedVolumeValuation::new(3, 1, vec![seg], |u: &Vector| 1.0 + 0.5 * u[0] + u[2] * u[2], "V(.,seg,f)")?;
        let body = Polytope::from_points(vec![
            Vector::from_column_slice(&[0.0, 0.0, 0.0]),
            Vector::from_column_slice(&[1.0, 0.0, 0.1]),
            Vector::from_column_slice(&[0.2, 0.9, 0.0]),
            Vector::from_column_slice(&[0.3, 0.2, 0.8]),
        ])?;
        let n_mixed = (cfg.n_mc / 4).max(1000);
        let lhs = lefschetz_l_direct(&Valuation::MixedVolume(phi.clone()), &body, LDirectMethod::Hyperplanes, sampler, n_mixed)?;
        let whole = Subspace::whole(3);
        let facets: Vec<(Vector, f64)> = body.facets().iter().map(|f| (f.normal.clone(), f.area)).collect();
        let ks = |e: &Subspace, x: &Vector, r: &mut McRng| ks_mixed_sample(&phi, e, x, r);
        let rhs = estimate(sampler, n_mixed, |r| facets.iter().map(|(u, a)| a * radon_up_sample(&ks, &whole, u, r)).sum::<f64>());
        report.cases.push(Case::mc("L of mixed-volume valuation: sections vs RT", &lhs, &rhs.scaled(ratio)));
    }
    Ok(report)
}

/// KS_{Λφ} = ((n−i)ω_{n−i+1}/ω_{n−i}) (Id − π₁) RT_{i+1,i} KS_φ for
/// φ = V_2 in R^3, against the Steiner constant of ΛV_2 = c·V_1.
pub fn verify_theorem_lambda_ks(sampler: &mut SeededSampler, cfg: &VerifyConfig) -> Result<Report> {
    let (n, i) = (3usize, 2usize);
    let mut report = Report::new("lambda-ks", sampler.seed(), cfg.n_mc);
    let mut rng = sampler.rng();
    let flag = Flag::random(n, i, &mut rng)?;
    let half = exact(|_, _| 0.5);
    let rt = radon_down(&half, &flag, sampler, cfg.n_mc)?;
    report.cases.push(Case::exact("RT of constant KS", rt.mean, 0.5, 1e-12));
    let lin = pi1_flag(&half, &flag, sampler, cfg.n_mc);
    report.cases.push(Case::mc("linear part of constant KS", &lin, &Estimate::exact(0.0)));
    let prefactor = (n - i) as f64 * omega(n - i + 1) / omega(n - i);
    // KS_{V_{i-1}} ≡ ½, so the ratio of KS functions is the Steiner constant
    let route = prefactor * rt.mean / 0.5;
    let steiner = kappa(n - i + 1) / kappa(n - i) * binomial((n - i + 1) as i64, (n - i) as i64);
    report.cases.push(Case::exact("Steiner constant via RT", route, steiner, 1e-12));
    // d/dt V_2(K + tB) at 0 is the total mass of S(K, B, ·)
    let k = Polytope::cube(3);
    let deriv = area_measure(&k, 1, 400)?.total_mass();
    let v1 = k.intrinsic_volume(1)?;
    report.cases.push(Case::exact("Steiner derivative with zonotopal ball", deriv / v1, steiner, 1e-2 * steiner));
    Ok(report)
}
