//! Monte-Carlo integration on Grassmannians, flag manifolds and
//! half-spheres: weighted and mixed spherical projections, the Radon-type
//! transforms between flag manifolds, and hemispherical convolution.
//!
//! Every estimator is reproducible: a [`SeededSampler`] hands out stream
//! ids, and each fixed-size chunk of a stream gets its own ChaCha generator
//! keyed by (master seed, stream, chunk). Chunks run in parallel and are
//! reduced in chunk order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::{mixed_area_measure_in, Polytope, Subspace, Vector, MERGE_TOL};
use crate::error::{domain, Result};
use crate::special::{binomial, omega};
use crate::zonal::ZonalProfile;

pub type McRng = ChaCha8Rng;

/// Samples per replicate when the caller has no preference.
pub const DEFAULT_NMC: usize = 100_000;
/// Independent replicates per estimate.
pub const REPLICATES: usize = 3;
const CHUNK: usize = 2048;

/// Master seed plus a stream counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededSampler {
    seed: u64,
    counter: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_stream(&mut self) -> u64 {
        self.counter += 1;
        self.counter
    }

    fn chunk_rng(&self, stream: u64, chunk: u64) -> McRng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&stream.to_le_bytes());
        key[16..24].copy_from_slice(&chunk.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    /// A generator on a fresh stream, for sequential use.
    pub fn rng(&mut self) -> McRng {
        let s = self.next_stream();
        self.chunk_rng(s, u64::MAX)
    }
}

/// Mean with standard error. `sigma` uses the pooled sample variance of
/// all draws; `replicates` holds the per-replicate means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub sigma: f64,
    pub n: usize,
    pub replicates: Vec<f64>,
}

impl Estimate {
    pub fn exact(v: f64) -> Self {
        Self { mean: v, sigma: 0.0, n: 0, replicates: Vec::new() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            mean: c * self.mean,
            sigma: c.abs() * self.sigma,
            n: self.n,
            replicates: self.replicates.iter().map(|r| c * r).collect(),
        }
    }

    /// |mean − target| in units of σ (infinite for σ = 0 unless equal).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.sigma
        }
    }
}

/// E[f] over `n_mc` draws per replicate, [`REPLICATES`] replicates.
pub fn estimate<F>(sampler: &mut SeededSampler, n_mc: usize, f: F) -> Estimate
where
    F: Fn(&mut McRng) -> f64 + Sync,
{
    let n_mc = n_mc.max(2);
    let mut reps = Vec::with_capacity(REPLICATES);
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..REPLICATES {
        let stream = sampler.next_stream();
        let chunks = n_mc.div_ceil(CHUNK);
        let parts: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = sampler.chunk_rng(stream, c as u64);
                let len = CHUNK.min(n_mc - c * CHUNK);
                let (mut a, mut b) = (0.0, 0.0);
                for _ in 0..len {
                    let x = f(&mut rng);
                    a += x;
                    b += x * x;
                }
                (a, b)
            })
            .collect();
        let (a, b) = parts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        reps.push(a / n_mc as f64);
        s1 += a;
        s2 += b;
    }
    let total = (n_mc * REPLICATES) as f64;
    let mean = s1 / total;
    let var = ((s2 - total * mean * mean) / (total - 1.0)).max(0.0);
    Estimate { mean, sigma: (var / total).sqrt(), n: n_mc * REPLICATES, replicates: reps }
}

fn gaussian(n: usize, rng: &mut McRng) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Uniform point of S^{n−1}.
pub fn uniform_sphere(n: usize, rng: &mut McRng) -> Vector {
    loop {
        let g = gaussian(n, rng);
        let r = g.norm();
        if r > 1e-12 {
            return g / r;
        }
    }
}

/// Uniform point of the unit sphere of E.
pub fn uniform_sphere_in(e: &Subspace, rng: &mut McRng) -> Vector {
    e.embed(&uniform_sphere(e.dim(), rng))
}

/// Invariant random element of Gr_{n,k}.
pub fn sample_grassmann(n: usize, k: usize, rng: &mut McRng) -> Result<Subspace> {
    sample_grassmann_over(&Subspace::zero(n), k, rng)
}

/// Invariant random element of Gr^E_{n,k}: k-spaces containing E when
/// k ≥ dim E, k-spaces inside E otherwise.
pub fn sample_grassmann_over(e: &Subspace, k: usize, rng: &mut McRng) -> Result<Subspace> {
    let n = e.ambient();
    if k > n {
        return Err(domain!("no {k}-subspaces in R^{n}"));
    }
    if k < e.dim() {
        loop {
            let inner = Subspace::span(e.dim(), &(0..k).map(|_| gaussian(e.dim(), rng)).collect::<Vec<_>>())?;
            if inner.dim() == k {
                let frame = inner.frame().iter().map(|c| e.embed(c)).collect();
                return Subspace::from_orthonormal(n, frame);
            }
        }
    }
    let mut s = e.clone();
    while s.dim() < k {
        s = s.join(&gaussian(n, rng));
    }
    Ok(s)
}

/// (E, u) with u a unit vector of E.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub e: Subspace,
    pub u: Vector,
}

impl Flag {
    pub fn new(e: Subspace, u: Vector) -> Result<Self> {
        if (u.norm() - 1.0).abs() > 1e-12 || !e.contains(&u, 1e-12) {
            return Err(domain!("flag vector must be a unit vector of E"));
        }
        Ok(Self { e, u })
    }

    /// Invariant random element of Fl_{n,k}.
    pub fn random(n: usize, k: usize, rng: &mut McRng) -> Result<Self> {
        let e = sample_grassmann(n, k, rng)?;
        let u = uniform_sphere_in(&e, rng);
        Ok(Self { e, u })
    }

    pub fn dim(&self) -> usize {
        self.e.dim()
    }
}

/// H^{n−k}(E, u) = {v ∈ S^{n−1} ∖ E⊥ : pr_E v = u}, the open half of the
/// unit sphere of E⊥ ∨ u on the side of u.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSphere {
    space: Subspace,
    u: Vector,
}

impl HalfSphere {
    pub fn new(flag: &Flag) -> Self {
        Self { space: flag.e.complement().join(&flag.u), u: flag.u.clone() }
    }

    /// E⊥ ∨ u.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// Sphere dimension n − k.
    pub fn dim(&self) -> usize {
        self.space.dim() - 1
    }

    /// Hausdorff measure, ω_{n−k+1}/2.
    pub fn measure(&self) -> f64 {
        omega(self.space.dim()) / 2.0
    }

    pub fn sample(&self, rng: &mut McRng) -> Vector {
        let v = uniform_sphere_in(&self.space, rng);
        if v.dot(&self.u) < 0.0 {
            -v
        } else {
            v
        }
    }
}

/// A function on a flag manifold, possibly given through an unbiased
/// randomized evaluation.
pub type FlagFn<'a> = dyn Fn(&Subspace, &Vector, &mut McRng) -> f64 + Sync + 'a;

/// Wraps a deterministic ζ(E, u).
pub fn exact<F>(f: F) -> impl Fn(&Subspace, &Vector, &mut McRng) -> f64 + Sync
where
    F: Fn(&Subspace, &Vector) -> f64 + Sync,
{
    move |e, u, _| f(e, u)
}

fn check_weight(k: usize, m: f64) -> Result<()> {
    if m <= -(k as f64) {
        return Err(domain!("weight m = {m} must exceed −{k}"));
    }
    Ok(())
}

/// One draw of π_{E,m}f(u).
pub fn weighted_projection_sample<F: Fn(&Vector) -> f64>(h: &HalfSphere, k: usize, m: f64, f: &F, rng: &mut McRng) -> f64 {
    let v = h.sample(rng);
    h.measure() * f(&v) * v.dot(&h.u).powf(k as f64 + m - 1.0)
}

/// (π_{E,m}f)(u) = ∫_{H^{n−k}(E,u)} f(v)⟨u,v⟩^{k+m−1} dv.
pub fn weighted_projection<F>(flag: &Flag, m: f64, f: F, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate>
where
    F: Fn(&Vector) -> f64 + Sync,
{
    let k = flag.dim();
    check_weight(k, m)?;
    let h = HalfSphere::new(flag);
    Ok(estimate(sampler, n_mc, |rng| weighted_projection_sample(&h, k, m, &f, rng)))
}

/// (π_{E,C}f)(u): f integrated against the mixed area measure of C|(E⊥∨u)
/// relative to E⊥ ∨ u, over the open half-sphere H(E, u). Needs n − dim E
/// reference bodies.
pub fn mixed_projection<F: Fn(&Vector) -> f64>(flag: &Flag, refs: &[&Polytope], f: F) -> Result<f64> {
    let n = flag.e.ambient();
    if refs.len() + flag.dim() != n {
        return Err(domain!("mixed projection from a {}-space of R^{n} needs {} bodies", flag.dim(), n - flag.dim()));
    }
    let h = HalfSphere::new(flag);
    let nu = mixed_area_measure_in(h.space(), refs)?;
    Ok(nu.atoms().filter(|(v, _)| v.dot(&flag.u) > MERGE_TOL).map(|(v, w)| f(&v) * w).sum())
}

/// One draw of [π₁^{⟨k⟩}ζ](F, y) = (1/ω_k) ∫_{S^{k−1}(F)} ⟨y,x⟩ ζ(F,x) dx.
/// This is the orthogonal projection onto linear functions divided by k.
pub fn pi1_sample(zeta: &FlagFn, f: &Subspace, y: &Vector, rng: &mut McRng) -> f64 {
    let x = uniform_sphere_in(f, rng);
    y.dot(&x) * zeta(f, &x, rng)
}

/// [π₁^{⟨k⟩}ζ](E, u), normalized as in [`pi1_sample`].
pub fn pi1_flag(zeta: &FlagFn, flag: &Flag, sampler: &mut SeededSampler, n_mc: usize) -> Estimate {
    estimate(sampler, n_mc, |rng| pi1_sample(zeta, &flag.e, &flag.u, rng))
}

/// One draw of [RT_{k,k−1}ζ](E, u) for (E, u) ∈ Fl_{n,k−1}.
pub fn radon_down_sample(zeta: &FlagFn, e: &Subspace, u: &Vector, rng: &mut McRng) -> f64 {
    let base = e.meet_orthogonal(u);
    loop {
        let f = sample_grassmann_over(&base, e.dim(), rng).expect("dimensions checked");
        let r = u - f.project(u);
        let nr = r.norm();
        if nr > 1e-12 {
            return zeta(&f.join(u), &(r / nr), rng);
        }
    }
}

/// [RT_{k,k−1}ζ](E, u) = ∫_{Gr^{E∩u⊥}_{n,k−1}} ζ(F∨u, pr_{F⊥}u) dF, where
/// k − 1 = dim E.
pub fn radon_down(zeta: &FlagFn, flag: &Flag, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    if flag.dim() + 1 > flag.e.ambient() {
        return Err(domain!("radon_down needs dim E < n"));
    }
    Ok(estimate(sampler, n_mc, |rng| radon_down_sample(zeta, &flag.e, &flag.u, rng)))
}

/// One draw of [RT_{k,k+1}ζ](E, u) for (E, u) ∈ Fl_{n,k+1}.
pub fn radon_up_sample(zeta: &FlagFn, e: &Subspace, u: &Vector, rng: &mut McRng) -> f64 {
    loop {
        let f = sample_grassmann_over(e, e.dim() - 1, rng).expect("dimensions checked");
        let p = f.project(u);
        let np = p.norm();
        if np > 1e-12 {
            return zeta(&f, &(p / np), rng) * np;
        }
    }
}

/// [RT_{k,k+1}ζ](E, u) = ∫_{Gr^E_{n,k}} ζ(F, pr_F u) ‖u|F‖ dF, where
/// k + 1 = dim E.
pub fn radon_up(zeta: &FlagFn, flag: &Flag, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    if flag.dim() < 2 {
        return Err(domain!("radon_up needs dim E >= 2"));
    }
    Ok(estimate(sampler, n_mc, |rng| radon_up_sample(zeta, &flag.e, &flag.u, rng)))
}

/// Unit normal of E inside F ⊃ E with dim F = dim E + 1.
fn normal_within(e: &Subspace, f: &Subspace) -> Vector {
    f.frame()
        .iter()
        .map(|x| x - e.project(x))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .map(|w| w.normalize())
        .expect("F is not zero")
}

/// One draw of [π^F_{E,m}ζ(F,·)](u) for E ⊂ F of codimension one:
/// ∫_{H¹(F;E,u)} ζ(F,v)⟨u,v⟩^{dim E+m−1} dv over the half-circle.
fn relative_projection_sample(zeta: &FlagFn, e: &Subspace, f: &Subspace, u: &Vector, m: f64, rng: &mut McRng) -> f64 {
    let w = normal_within(e, f);
    let th: f64 = rng.random_range(-PI / 2.0..PI / 2.0);
    let v = u * th.cos() + &w * th.sin();
    PI * th.cos().powf(e.dim() as f64 + m - 1.0) * zeta(f, &v, rng)
}

/// [RT'_{k,k−1}ζ](E,u) = (ω_{n−k+1}ω_{n−k+3}ω_{k−1}/(ω²_{n−k+2}ω_k))
/// ∫_{Gr^E_{n,k}} [π^F_{E,1}ζ(F,·)](u) dF, estimated with `n_outer` planes
/// F per replicate and `n_inner` half-circle points per plane.
pub fn radon_down_prime(zeta: &FlagFn, flag: &Flag, sampler: &mut SeededSampler, n_outer: usize, n_inner: usize) -> Result<Estimate> {
    let n = flag.e.ambient();
    let k = flag.dim() + 1;
    if k > n {
        return Err(domain!("radon_down_prime needs dim E < n"));
    }
    let c = radon_down_prime_constant(n, k);
    let n_inner = n_inner.max(1);
    Ok(estimate(sampler, n_outer, |rng| {
        let f = sample_grassmann_over(&flag.e, k, rng).expect("dimensions checked");
        let s: f64 = (0..n_inner).map(|_| relative_projection_sample(zeta, &flag.e, &f, &flag.u, 1.0, rng)).sum();
        c * s / n_inner as f64
    }))
}

/// One draw of [RT'_{k,k−1}ζ](E, u): one plane F and one half-circle point.
pub fn radon_down_prime_sample(zeta: &FlagFn, e: &Subspace, u: &Vector, rng: &mut McRng) -> f64 {
    let n = e.ambient();
    let k = e.dim() + 1;
    let f = sample_grassmann_over(e, k, rng).expect("dimensions checked");
    radon_down_prime_constant(n, k) * relative_projection_sample(zeta, e, &f, u, 1.0, rng)
}

pub fn radon_down_prime_constant(n: usize, k: usize) -> f64 {
    omega(n - k + 1) * omega(n - k + 3) * omega(k - 1) / (omega(n - k + 2).powi(2) * omega(k))
}

/// RT_{k,k−1} through weighted projections:
/// (ω_{n−k+1}/ω_{n−k+2}) ∫_{Gr^E_{n,k}} [π^F_{E,n−2k+2}ζ(F,·)](u) dF.
pub fn radon_down_via_projection(zeta: &FlagFn, flag: &Flag, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    let n = flag.e.ambient();
    let k = flag.dim() + 1;
    if k > n {
        return Err(domain!("radon_down needs dim E < n"));
    }
    let c = omega(n - k + 1) / omega(n - k + 2);
    let m = n as f64 - 2.0 * k as f64 + 2.0;
    Ok(estimate(sampler, n_mc, |rng| {
        let f = sample_grassmann_over(&flag.e, k, rng).expect("dimensions checked");
        c * relative_projection_sample(zeta, &flag.e, &f, &flag.u, m, rng)
    }))
}

/// (1/C(n−1,i)) ∫_{H^{n−i−1}(E,u)} f(⟨v,w⟩) dw for (E,u) ∈ Fl_{n,i+1}.
pub fn hemispherical_convolve(flag: &Flag, f: &ZonalProfile, v: &Vector, sampler: &mut SeededSampler, n_mc: usize) -> Result<Estimate> {
    let n = flag.e.ambient();
    let i = flag.dim().checked_sub(1).ok_or_else(|| domain!("flag of dimension 0"))?;
    if i == 0 || i >= n {
        return Err(domain!("hemispherical convolution needs 1 <= i <= n−1, got i = {i}"));
    }
    let h = HalfSphere::new(flag);
    let c = h.measure() / binomial((n - 1) as i64, i as i64);
    Ok(estimate(sampler, n_mc, |rng| c * f.eval(v.dot(&h.sample(rng)).clamp(-1.0, 1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::basis;

    #[test]
    fn seeded_streams_are_reproducible() {
        let f = |rng: &mut McRng| rng.random::<f64>();
        let a = estimate(&mut SeededSampler::new(5), 5000, f);
        let b = estimate(&mut SeededSampler::new(5), 5000, f);
        let c = estimate(&mut SeededSampler::new(6), 5000, f);
        assert_eq!(a, b);
        assert_ne!(a.mean, c.mean);
        assert!(a.z_score(0.5) < 4.0);
        assert_eq!(a.replicates.len(), REPLICATES);
    }

    #[test]
    fn grassmann_over_contains_base() {
        let mut rng = SeededSampler::new(1).rng();
        let e = Subspace::coordinate(4, &[1]);
        let f = sample_grassmann_over(&e, 3, &mut rng).unwrap();
        assert_eq!(f.dim(), 3);
        assert!(f.contains_subspace(&e, 1e-12));
        assert_eq!(f.frame()[0], basis(4, 1));
        let g = sample_grassmann_over(&f, 2, &mut rng).unwrap();
        assert!(f.contains_subspace(&g, 1e-12));
    }

    #[test]
    fn weighted_projection_examples() {
        let mut s = SeededSampler::new(3);
        let flag = Flag::new(Subspace::coordinate(3, &[0, 1]), basis(3, 0)).unwrap();
        let one = weighted_projection(&flag, -1.0, |_| 1.0, &mut s, 1000).unwrap();
        assert!((one.mean - PI).abs() < 1e-12);
        let w = Vector::from_column_slice(&[0.3, -0.5, 0.8]);
        let lin = weighted_projection(&flag, 1.0, |v| w.dot(v), &mut s, 100_000).unwrap();
        assert!(lin.z_score(4.0 / 3.0 * 0.3) < 4.0, "{lin:?}");
        assert!(weighted_projection(&flag, -2.0, |_| 1.0, &mut s, 10).is_err());
    }

    #[test]
    fn mixed_projection_of_segment() {
        let flag = Flag::new(Subspace::coordinate(3, &[0, 1]), basis(3, 1)).unwrap();
        let seg = Polytope::segment(Vector::zeros(3), basis(3, 2)).unwrap();
        let v = mixed_projection(&flag, &[&seg], |x| 2.0 + x[1]).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
        assert_eq!(mixed_projection(&flag, &[&seg], |_| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn constant_transforms() {
        let mut s = SeededSampler::new(9);
        let flag = Flag::new(Subspace::whole(3), basis(3, 2)).unwrap();
        let r = radon_up(&exact(|_, _| 1.0), &flag, &mut s, 100_000).unwrap();
        assert!(r.z_score(PI / 4.0) < 4.0 && r.sigma < 5e-3, "{r:?}");
        let line = Flag::new(Subspace::coordinate(3, &[0]), basis(3, 0)).unwrap();
        let d = radon_down(&exact(|_, _| 2.5), &line, &mut s, 1000).unwrap();
        assert!((d.mean - 2.5).abs() < 1e-12);
    }
}
