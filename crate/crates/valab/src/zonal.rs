//! Zonal functions on S^{n−1}: multipliers, Funk–Hecke convolution,
//! the linear projection and the box operator.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::special::{binomial, legendre_table, omega, quadrature, QuadratureKind};

/// Default node count for multiplier quadrature.
pub const DEFAULT_NODES: usize = 4096;
/// Default truncation degree for spectral synthesis.
pub const DEFAULT_KMAX: usize = 64;
/// Marks a profile with derivatives of every order.
pub const ALL_ORDERS: usize = usize::MAX;

type ProfileFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A function t ↦ g(t) on (−1,1), read as the zonal function g(⟨e_n,·⟩).
#[derive(Clone)]
pub struct ZonalProfile {
    pub n: usize,
    pub label: String,
    /// Exponent α⁺ with (1−t)^{α⁺} g(t) bounded near t = 1.
    pub sing_pos: f64,
    /// Exponent α⁻ with (1+t)^{α⁻} g(t) bounded near t = −1.
    pub sing_neg: f64,
    pub derivative_order: usize,
    f: ProfileFn,
}

impl fmt::Debug for ZonalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZonalProfile")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("sing_pos", &self.sing_pos)
            .field("sing_neg", &self.sing_neg)
            .field("derivative_order", &self.derivative_order)
            .finish()
    }
}

impl ZonalProfile {
    /// `f(m, t)` must return the m-th derivative for m ≤ `derivative_order`.
    pub fn new<F>(n: usize, label: impl Into<String>, sing_pos: f64, sing_neg: f64, derivative_order: usize, f: F) -> Self
    where
        F: Fn(usize, f64) -> f64 + Send + Sync + 'static,
    {
        Self { n, label: label.into(), sing_pos, sing_neg, derivative_order, f: Arc::new(f) }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(0, t)
    }

    pub fn eval_deriv(&self, m: usize, t: f64) -> Result<f64> {
        if m > self.derivative_order {
            return Err(Error::Contract(format!(
                "profile '{}' has derivatives up to order {}, asked for {m}",
                self.label, self.derivative_order
            )));
        }
        Ok((self.f)(m, t))
    }

    /// The same function read on a sphere of another dimension.
    pub fn with_dim(&self, n: usize) -> Self {
        let mut p = self.clone();
        p.n = n;
        p
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self { f: Arc::new(move |m, t| c * f(m, t)), label: format!("{c}*{}", self.label), ..self.clone() }
    }

    /// t ↦ g(t) − c·t.
    pub fn minus_linear(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self {
            f: Arc::new(move |m, t| {
                let lin = match m {
                    0 => c * t,
                    1 => c,
                    _ => 0.0,
                };
                f(m, t) - lin
            }),
            label: format!("centered {}", self.label),
            ..self.clone()
        }
    }

    /// The derivative g' as a profile on S^{n'−1}.
    pub fn derivative(&self, n: usize) -> Result<Self> {
        if self.derivative_order == 0 {
            return Err(Error::Contract(format!("profile '{}' has no derivative", self.label)));
        }
        let f = self.f.clone();
        Ok(Self {
            n,
            label: format!("d/dt {}", self.label),
            sing_pos: self.sing_pos + 1.0,
            sing_neg: if self.sing_neg > 0.0 { self.sing_neg + 1.0 } else { 0.0 },
            derivative_order: self.derivative_order.saturating_sub(1),
            f: Arc::new(move |m, t| f(m + 1, t)),
        })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::new(n, format!("{c}"), 0.0, 0.0, ALL_ORDERS, move |m, _| if m == 0 { c } else { 0.0 })
    }

    /// Σ coeffs[p] t^p, with all derivatives.
    pub fn polynomial(n: usize, coeffs: Vec<f64>) -> Self {
        let label = format!("poly{coeffs:?}");
        Self::new(n, label, 0.0, 0.0, ALL_ORDERS, move |m, t| {
            let mut acc = 0.0;
            for p in (m..coeffs.len()).rev() {
                let mut fall = 1.0;
                for q in 0..m {
                    fall *= (p - q) as f64;
                }
                acc = acc * t + coeffs[p] * fall;
            }
            acc
        })
    }

    /// P^n_k as a profile on S^{n−1}.
    pub fn legendre(n: usize, k: usize) -> Self {
        Self::new(n, format!("P^{n}_{k}"), 0.0, 0.0, ALL_ORDERS, move |m, t| legendre_deriv(n, k, m, t))
    }

    /// max over t = 1−10^{−q}, q = 1..8, of (1−t)^{sing_pos}|g(t)|, and the
    /// same at −1. Useful to spot an understated singularity exponent.
    pub fn endpoint_envelope(&self) -> (f64, f64) {
        let mut pos: f64 = 0.0;
        let mut neg: f64 = 0.0;
        for q in 1..=8 {
            let d = 10f64.powi(-q);
            pos = pos.max(d.powf(self.sing_pos) * self.eval(1.0 - d).abs());
            neg = neg.max(d.powf(self.sing_neg) * self.eval(-1.0 + d).abs());
        }
        (pos, neg)
    }
}

/// m-th derivative of P^n_k, using (P^n_k)' = k(k+n−2)/(n−1) · P^{n+2}_{k−1}.
pub fn legendre_deriv(n: usize, k: usize, m: usize, t: f64) -> f64 {
    let mut scale = 1.0;
    let (mut nn, mut kk) = (n, k);
    for _ in 0..m {
        if kk == 0 {
            return 0.0;
        }
        scale *= (kk * (kk + nn - 2)) as f64 / (nn - 1) as f64;
        nn += 2;
        kk -= 1;
    }
    scale * legendre_table(nn, kk, t)[kk]
}

/// dim H^n_k = C(n+k−1,k) − C(n+k−3,k−2).
pub fn harmonic_dim(n: usize, k: usize) -> u64 {
    let (n, k) = (n as i64, k as i64);
    (binomial(n + k - 1, k) - binomial(n + k - 3, k - 2)) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierSource {
    ClosedForm,
    Quadrature,
}

/// k ↦ a^n_k for 0 ≤ k ≤ K_max.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSequence {
    pub n: usize,
    pub values: Vec<f64>,
    pub source: MultiplierSource,
}

impl MultiplierSequence {
    pub fn closed_form<F: Fn(usize) -> f64>(n: usize, kmax: usize, f: F) -> Self {
        Self { n, values: (0..=kmax).map(f).collect(), source: MultiplierSource::ClosedForm }
    }

    /// δ_{e_n}: every multiplier is 1.
    pub fn delta(n: usize, kmax: usize) -> Self {
        Self::closed_form(n, kmax, |_| 1.0)
    }

    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }

    /// Entrywise product: the multipliers of a convolution.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(domain!("cannot convolve multipliers of dimensions {} and {}", self.n, other.n));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        let source = if self.source == MultiplierSource::ClosedForm && other.source == MultiplierSource::ClosedForm {
            MultiplierSource::ClosedForm
        } else {
            MultiplierSource::Quadrature
        };
        Ok(Self { n: self.n, values, source })
    }

    /// Expansion coefficients c_k with γ = Σ c_k P^n_k, c_k = dim H^n_k a_k / ω_n.
    pub fn expansion_coefficients(&self) -> Vec<f64> {
        let w = omega(self.n);
        self.values.iter().enumerate().map(|(k, a)| harmonic_dim(self.n, k) as f64 * a / w).collect()
    }

    /// Truncated synthesis Σ_{k ≤ K_max} c_k P^n_k(t).
    pub fn synthesize(&self, t: f64) -> Synthesis {
        let c = self.expansion_coefficients();
        evaluate_series(self.n, &c, t, 0)
    }

    /// Synthesis of (1−t)^p γ from exactly transformed coefficients, then
    /// divided by (1−t)^p. Tames a singularity of γ at t = 1 at the cost
    /// of p degrees of the truncation.
    pub fn synthesize_weighted(&self, t: f64, p: usize) -> Synthesis {
        let mut c = self.expansion_coefficients();
        for _ in 0..p {
            c = one_minus_t_times(self.n, &c);
        }
        evaluate_series(self.n, &c, t, p)
    }
}

/// Value of a truncated expansion with the magnitude of its last term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synthesis {
    pub value: f64,
    pub tail: f64,
}

fn evaluate_series(n: usize, c: &[f64], t: f64, p: usize) -> Synthesis {
    let kmax = c.len() - 1;
    let pk = legendre_table(n, kmax, t);
    let s: f64 = c.iter().zip(&pk).map(|(a, b)| a * b).sum();
    let scale = (1.0 - t).powi(p as i32);
    Synthesis { value: s / scale, tail: (c[kmax] * pk[kmax]).abs() / scale }
}

/// Coefficients of (1−t)·f from those of f; the result is one shorter.
fn one_minus_t_times(n: usize, c: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    let alpha = |k: usize| (k as f64 + nf - 2.0) / (2.0 * k as f64 + nf - 2.0);
    let beta = |k: usize| k as f64 / (2.0 * k as f64 + nf - 2.0);
    let len = c.len() - 1;
    (0..len)
        .map(|m| {
            let lower = if m > 0 { alpha(m - 1) * c[m - 1] } else { 0.0 };
            let upper = beta(m + 1) * c[m + 1];
            c[m] - lower - upper
        })
        .collect()
}

fn check_integrable(g: &ZonalProfile) -> Result<()> {
    let bound = (g.n as f64 - 1.0) / 2.0;
    if g.n < 3 {
        return Err(domain!("zonal profiles need n >= 3, got {}", g.n));
    }
    if g.sing_pos >= bound || g.sing_neg >= bound {
        return Err(domain!(
            "profile '{}' with endpoint exponents ({}, {}) is not integrable on S^{}",
            g.label,
            g.sing_pos,
            g.sing_neg,
            g.n - 1
        ));
    }
    Ok(())
}

/// a^n_k[g] = ω_{n−1} ∫ P^n_k(t) (1−t²)^{(n−3)/2} g(t) dt.
pub fn multiplier(g: &ZonalProfile, k: usize) -> Result<f64> {
    Ok(multipliers_with(g, k, DEFAULT_NODES)?.values[k])
}

/// a^n_0[g], …, a^n_kmax[g] by arc-substituted quadrature on `nodes` nodes.
pub fn multipliers_with(g: &ZonalProfile, kmax: usize, nodes: usize) -> Result<MultiplierSequence> {
    check_integrable(g)?;
    let n = g.n;
    let rule = quadrature(nodes, QuadratureKind::ArcSubstituted);
    let alpha = (n as f64 - 3.0) / 2.0;
    let mut acc = vec![0.0; kmax + 1];
    for j in 0..rule.len() {
        let t = rule.nodes[j];
        if t >= 1.0 || t <= -1.0 {
            continue;
        }
        let w = rule.weights[j] * rule.sines[j].powf(2.0 * alpha) * g.eval(t);
        for (a, p) in acc.iter_mut().zip(legendre_table(n, kmax, t)) {
            *a += w * p;
        }
    }
    let s = omega(n - 1);
    Ok(MultiplierSequence { n, values: acc.into_iter().map(|a| a * s).collect(), source: MultiplierSource::Quadrature })
}

pub fn multipliers(g: &ZonalProfile, kmax: usize) -> Result<MultiplierSequence> {
    multipliers_with(g, kmax, DEFAULT_NODES)
}

/// Coefficient c with (π₁g)(u) = c⟨e_n,u⟩; equals 1 for g(t) = t.
pub fn project_linear(g: &ZonalProfile) -> Result<f64> {
    Ok(multiplier(g, 1)? * g.n as f64 / omega(g.n))
}

/// □̄_n g = (1/(n−1))(1−t²)g'' − t g' + g.
pub fn box_operator(g: &ZonalProfile) -> Result<ZonalProfile> {
    if g.derivative_order < 2 {
        return Err(Error::Contract(format!(
            "box operator needs two derivatives of '{}', have {}",
            g.label, g.derivative_order
        )));
    }
    let inner = g.clone();
    let c = 1.0 / (g.n as f64 - 1.0);
    Ok(ZonalProfile::new(
        g.n,
        format!("box {}", g.label),
        g.sing_pos + 1.0,
        g.sing_neg,
        g.derivative_order.saturating_sub(2),
        move |p, t| {
            let d = |m: usize| (inner.f)(m, t);
            let pf = p as f64;
            c * ((1.0 - t * t) * d(p + 2) - 2.0 * pf * t * d(p + 1) - pf * (pf - 1.0) * d(p))
                - (t * d(p + 1) + pf * d(p))
                + d(p)
        },
    ))
}

/// Funk–Hecke convolution g1 ∗ g2 realised spectrally up to degree `kmax`.
/// Returns the synthesized profile and the last-term tail bound at t = 0.
pub fn zonal_convolve(g1: &ZonalProfile, g2: &ZonalProfile, kmax: usize) -> Result<(ZonalProfile, f64)> {
    if g1.n != g2.n {
        return Err(domain!("profiles live on spheres of dimensions {} and {}", g1.n, g2.n));
    }
    let a = multipliers(g1, kmax)?;
    let b = multipliers(g2, kmax)?;
    let seq = a.convolve(&b)?;
    Ok(synthesized_profile(seq, format!("{} * {}", g1.label, g2.label)))
}

/// The profile t ↦ Σ c_k P^n_k(t) of a multiplier sequence.
pub fn synthesized_profile(seq: MultiplierSequence, label: String) -> (ZonalProfile, f64) {
    let tail = seq.synthesize(0.0).tail;
    let n = seq.n;
    let c = Arc::new(seq.expansion_coefficients());
    let kmax = c.len() - 1;
    let profile = ZonalProfile::new(n, label, 0.0, 0.0, ALL_ORDERS, move |m, t| {
        (0..=kmax).map(|k| c[k] * legendre_deriv(n, k, m, t)).sum()
    });
    (profile, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_dims() {
        for k in 0..6 {
            assert_eq!(harmonic_dim(3, k), 2 * k as u64 + 1);
        }
        for n in 2..8 {
            assert_eq!(harmonic_dim(n, 0), 1);
        }
        assert_eq!(harmonic_dim(4, 2), 9);
        assert_eq!(harmonic_dim(2, 5), 2);
    }

    #[test]
    fn multiplier_examples() {
        for n in 3..7 {
            let one = ZonalProfile::constant(n, 1.0);
            assert_relative_eq!(multiplier(&one, 0).unwrap(), omega(n), max_relative = 1e-12);
        }
        let lin = ZonalProfile::polynomial(3, vec![0.0, 1.0]);
        assert_relative_eq!(multiplier(&lin, 1).unwrap(), 4.0 * PI / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn multiplier_rejects_nonintegrable() {
        let g = ZonalProfile::new(3, "bad", 1.0, 0.0, 0, |_, t| 1.0 / (1.0 - t));
        assert!(matches!(multiplier(&g, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn project_linear_examples() {
        let even = ZonalProfile::polynomial(4, vec![1.0, 0.0, 3.0]);
        assert!(project_linear(&even).unwrap().abs() < 1e-13);
        let lin = ZonalProfile::polynomial(5, vec![0.0, 1.0]);
        assert_relative_eq!(project_linear(&lin).unwrap(), 1.0, max_relative = 1e-12);
        let cube = ZonalProfile::polynomial(3, vec![0.0, 0.0, 0.0, 1.0]);
        assert_relative_eq!(project_linear(&cube).unwrap(), 0.6, max_relative = 1e-12);
    }

    #[test]
    fn box_operator_examples() {
        let lin = box_operator(&ZonalProfile::polynomial(4, vec![0.0, 1.0])).unwrap();
        let one = box_operator(&ZonalProfile::constant(4, 1.0)).unwrap();
        for &t in &[-0.7, 0.0, 0.4] {
            assert!(lin.eval(t).abs() < 1e-15);
            assert_relative_eq!(one.eval(t), 1.0);
        }
        for n in 3..6 {
            for k in 0..7 {
                let p = ZonalProfile::legendre(n, k);
                let b = box_operator(&p).unwrap();
                let lam = 1.0 - (k * (k + n - 2)) as f64 / (n - 1) as f64;
                for &t in &[-0.9, -0.3, 0.2, 0.8] {
                    assert!((b.eval(t) - lam * p.eval(t)).abs() < 1e-12, "n={n} k={k}");
                }
            }
        }
        let short = ZonalProfile::new(3, "f", 0.0, 0.0, 1, |_, t| t);
        assert!(matches!(box_operator(&short), Err(Error::Contract(_))));
    }

    #[test]
    fn box_operator_multiplier_action() {
        let n = 4;
        let g = ZonalProfile::polynomial(n, vec![0.3, -0.2, 0.5, 0.1, -0.4, 0.0, 0.7]);
        let b = box_operator(&g).unwrap();
        let ag = multipliers(&g, 10).unwrap();
        let ab = multipliers(&b, 10).unwrap();
        for k in 0..=10 {
            let lam = 1.0 - (k * (k + n - 2)) as f64 / (n - 1) as f64;
            assert!((ab.values[k] - lam * ag.values[k]).abs() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn legendre_derivatives_match_difference_quotients() {
        let h = 1e-5;
        for n in 3..6 {
            for k in 0..8 {
                for &t in &[-0.6, 0.1, 0.7] {
                    let fd = (legendre_deriv(n, k, 0, t + h) - legendre_deriv(n, k, 0, t - h)) / (2.0 * h);
                    assert!((fd - legendre_deriv(n, k, 1, t)).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn polynomial_profile_derivatives() {
        let p = ZonalProfile::polynomial(3, vec![1.0, 2.0, 3.0, 4.0]);
        let t = 0.3;
        assert_relative_eq!(p.eval(t), 1.0 + 2.0 * t + 3.0 * t * t + 4.0 * t * t * t, epsilon = 1e-15);
        assert_relative_eq!(p.eval_deriv(1, t).unwrap(), 2.0 + 6.0 * t + 12.0 * t * t, epsilon = 1e-15);
        assert_relative_eq!(p.eval_deriv(2, t).unwrap(), 6.0 + 24.0 * t, epsilon = 1e-15);
        assert_relative_eq!(p.eval_deriv(3, t).unwrap(), 24.0, epsilon = 1e-15);
        assert_eq!(p.eval_deriv(4, t).unwrap(), 0.0);
    }

    #[test]
    fn convolution_with_delta_is_identity() {
        let n = 3;
        let g = ZonalProfile::polynomial(n, vec![0.1, 0.4, -0.3, 0.2]);
        let a = multipliers(&g, 8).unwrap();
        let d = MultiplierSequence::delta(n, 8);
        let conv = a.convolve(&d).unwrap();
        for &t in &[-0.5, 0.0, 0.9] {
            assert!((conv.synthesize(t).value - g.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_with_constant() {
        let n = 4;
        let one = ZonalProfile::constant(n, 1.0);
        let g = ZonalProfile::polynomial(n, vec![0.5, 1.0, 2.0]);
        let (c, _) = zonal_convolve(&one, &g, 6).unwrap();
        let a0 = multiplier(&g, 0).unwrap();
        for &t in &[-0.3, 0.6] {
            assert_relative_eq!(c.eval(t), a0, max_relative = 1e-12);
        }
    }

    #[test]
    fn convolution_of_legendre_with_itself() {
        let n = 5;
        let k = 3;
        let p = ZonalProfile::legendre(n, k);
        let (c, _) = zonal_convolve(&p, &p, 8).unwrap();
        let a = multiplier(&p, k).unwrap();
        let scale = a * a * harmonic_dim(n, k) as f64 / omega(n);
        for &t in &[-0.8, 0.2, 0.5] {
            assert!((c.eval(t) - scale * p.eval(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn weighted_synthesis_is_exact_on_polynomials() {
        let n = 4;
        let g = ZonalProfile::polynomial(n, vec![0.1, 0.4, -0.3, 0.2]);
        let a = multipliers(&g, 12).unwrap();
        for p in 0..4 {
            for &t in &[-0.5, 0.0, 0.7] {
                assert!((a.synthesize_weighted(t, p).value - g.eval(t)).abs() < 1e-11);
            }
        }
    }
}
