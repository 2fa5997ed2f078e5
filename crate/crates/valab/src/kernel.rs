//! The Lefschetz kernels ρ_{n,i}, (n,i) with n ≥ 3 and 1 ≤ i < n−1.
//!
//! ρ_{n,i} is the zonal distribution on S^{n−1} with multipliers
//! Γ((k+i)/2)Γ((k+n−i−1)/2) / (Γ((k+i+1)/2)Γ((k+n−i)/2)), read as a function
//! of t = ⟨e_n,·⟩. Evaluation uses ρ_{n,i} = ρ_{n,n−i−1}, the base case
//! ρ_{n,n−2} in terms of g_{n−1}, and ρ_{n+2,i+1} = ρ_{n,i}'/(2π).

use std::f64::consts::PI;

use serde::Serialize;

use crate::berg::{berg_arc_jet, berg_derivs_dd};
use crate::dd::{omega_dd, Dd};
use crate::error::{domain, Error, Result};
use crate::jet::Jet;
use crate::special::{assoc_legendre, gamma, gamma_ratio, omega, quadrature, QuadratureKind};
use crate::zonal::{MultiplierSequence, ZonalProfile, ALL_ORDERS};

pub fn is_admissible(n: usize, i: usize) -> bool {
    n >= 3 && i >= 1 && i + 1 < n
}

fn check(n: usize, i: usize) -> Result<()> {
    if !is_admissible(n, i) {
        return Err(domain!("(n, i) = ({n}, {i}) is not admissible; need n >= 3 and 1 <= i < n-1"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > -1.0 && t < 1.0) {
        return Err(domain!("kernel evaluation needs t in (-1,1), got {t}"));
    }
    Ok(())
}

/// How ρ_{n,i} traces back to a base case: ρ_{n,i}^{(q)} = (2π)^{−steps} ρ_{m,m−2}^{(steps+q)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelChain {
    pub n: usize,
    pub i: usize,
    /// The reflected index min(i, n−i−1).
    pub reflected: usize,
    pub base_dim: usize,
    pub steps: usize,
}

/// Reflect to i ≤ n−i−1, then walk (n,i) → (n−2,i−1) until i = 1, where
/// ρ_{m,1} = ρ_{m,m−2} is a base case.
pub fn resolve_chain(n: usize, i: usize) -> Result<KernelChain> {
    check(n, i)?;
    let reflected = i.min(n - i - 1);
    let (mut m, mut ii, mut steps) = (n, reflected, 0);
    while ii > 1 {
        m -= 2;
        ii -= 1;
        steps += 1;
        debug_assert!(is_admissible(m, ii));
    }
    if ii != 1 || !is_admissible(m, m - 2) {
        return Err(Error::Numeric(format!("kernel chain for ({n}, {i}) did not reach a base case")));
    }
    Ok(KernelChain { n, i, reflected, base_dim: m, steps })
}

/// ρ_{n,n−2}^{(0..=order)} by the Leibniz rule applied to
/// ((n−1)/(2(n−2))) □̄_n g_{n−1} + (n/(2ω_{n−1})) t.
fn base_derivs_dd(n: usize, t: f64, order: usize) -> Vec<Dd> {
    let g = berg_derivs_dd(n - 1, t, order + 2);
    let nf = n as f64;
    let den = 2.0 * (nf - 2.0);
    let td = Dd::from_f64(t);
    let w = Dd::sum(1.0, -t) * Dd::sum(1.0, t);
    let lin = Dd::from_f64(nf) / omega_dd(n - 1).mul_pow2(1);
    (0..=order)
        .map(|p| {
            let pf = p as f64;
            let mut v = w * g[p + 2] / den - td * g[p + 1] * ((2.0 * pf + nf - 1.0) / den)
                - g[p] * ((pf + nf - 1.0) * (pf - 1.0) / den);
            match p {
                0 => v = v + lin * td,
                1 => v = v + lin,
                _ => {}
            }
            v
        })
        .collect()
}

/// ρ_{n,n−2}(t).
pub fn rho_base(n: usize, t: f64) -> Result<f64> {
    check(n, n.saturating_sub(2))?;
    check_t(t)?;
    Ok(base_derivs_dd(n, t, 0)[0].to_f64())
}

/// ρ_{n,i}^{(0..=order)}(t) through the resolved chain.
pub fn rho_derivs(n: usize, i: usize, t: f64, order: usize) -> Result<Vec<f64>> {
    let chain = resolve_chain(n, i)?;
    check_t(t)?;
    let base = base_derivs_dd(chain.base_dim, t, chain.steps + order);
    let scale = (2.0 * PI).powi(-(chain.steps as i32));
    Ok(base[chain.steps..].iter().map(|v| v.to_f64() * scale).collect())
}

/// ρ_{n,i}^{(m)}(t).
pub fn rho(n: usize, i: usize, t: f64, m: usize) -> Result<f64> {
    Ok(rho_derivs(n, i, t, m)?[m])
}

/// ρ_{n,i} through the associated Legendre function,
/// Γ(i)Γ(n−i−1)/(4(2π)^{(n−2)/2}) · e^{iπ(n−2)/4} (1−t²)^{−(n−2)/4} P̃^{1−n/2}_{i−n/2}(−t).
pub fn rho_closed_form(n: usize, i: usize, t: f64) -> Result<f64> {
    check(n, i)?;
    check_t(t)?;
    let nf = n as f64;
    let h = (nf - 2.0) / 2.0;
    let p = assoc_legendre(i as f64 - nf / 2.0, 1.0 - nf / 2.0, -t)?;
    let phase = num_complex::Complex64::from_polar(1.0, PI * h / 2.0);
    let z = phase * p * ((1.0 - t) * (1.0 + t)).powf(-h / 2.0);
    if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
        return Err(Error::Numeric(format!("closed form for ({n}, {i}) left imaginary part {}", z.im)));
    }
    Ok(gamma(i as f64) * gamma((n - i - 1) as f64) / (4.0 * (2.0 * PI).powf(h)) * z.re)
}

/// The Gamma ratio Γ((k+i)/2)Γ((k+n−i−1)/2) / (Γ((k+i+1)/2)Γ((k+n−i)/2)).
pub fn rho_multiplier(n: usize, i: usize, k: usize) -> f64 {
    let (nf, i, k) = (n as f64, i as f64, k as f64);
    gamma_ratio(&[(k + i) / 2.0, (k + nf - i - 1.0) / 2.0], &[(k + i + 1.0) / 2.0, (k + nf - i) / 2.0])
}

/// a^n_k[ρ_{n,i}] / rho_multiplier(n, i, k). The function built from g_{n−1}
/// carries this extra factor: the box eigenvalue −(k−1)(k+n−1)/(n−1) times the
/// Berg multiplier of g_{n−1} gives (π/4) times the Gamma ratio for every k.
pub const RHO_MULTIPLIER_SCALE: f64 = PI / 4.0;

/// Multipliers a^n_0, …, a^n_kmax of the function ρ_{n,i}.
pub fn rho_multipliers(n: usize, i: usize, kmax: usize) -> MultiplierSequence {
    MultiplierSequence::closed_form(n, kmax, |k| RHO_MULTIPLIER_SCALE * rho_multiplier(n, i, k))
}

/// Truncated zonal synthesis of ρ_{n,i} up to degree `kmax`. The series is
/// summed for (1−t)^p ρ with p = ⌈(n−2)/2⌉ + 3 and then divided back.
pub fn rho_spectral(n: usize, i: usize, t: f64, kmax: usize) -> Result<f64> {
    check(n, i)?;
    check_t(t)?;
    Ok(rho_multipliers(n, i, kmax).synthesize_weighted(t, spectral_weight(n)).value)
}

fn spectral_weight(n: usize) -> usize {
    (n - 1) / 2 + 3
}

/// (1−t²)ρ'' − n t ρ' − i(n−i−1) ρ.
pub fn rho_ode_residual(n: usize, i: usize, t: f64) -> Result<f64> {
    let d = rho_derivs(n, i, t, 2)?;
    let nf = n as f64;
    Ok((1.0 - t) * (1.0 + t) * d[2] - nf * t * d[1] - (i * (n - i - 1)) as f64 * d[0])
}

/// lim_{t → ±1} (1−t²)^{(n−2)/2+m} ρ_{n,i}^{(m)}(t).
pub fn rho_endpoint_limit(n: usize, i: usize, m: usize, side: i32) -> Result<f64> {
    check(n, i)?;
    match side {
        -1 => Ok(0.0),
        1 => {
            let h = (n as f64 - 2.0) / 2.0;
            Ok(2f64.powi(m as i32 - 2) * gamma(h + m as f64) / PI.powf(h))
        }
        _ => Err(domain!("side must be +1 or -1, got {side}")),
    }
}

/// ρ_{n,i}(−1) = Γ(i)Γ(n−i−1)/(2^n π^{(n−2)/2} Γ(n/2)).
pub fn rho_at_minus_one(n: usize, i: usize) -> Result<f64> {
    check(n, i)?;
    let nf = n as f64;
    Ok(gamma(i as f64) * gamma((n - i - 1) as f64) / (2f64.powi(n as i32) * PI.powf((nf - 2.0) / 2.0) * gamma(nf / 2.0)))
}

/// Taylor jet of ρ̂_{n,i}(θ) = ρ_{n,i}(−cos θ) at θ ≠ 0.
fn rho_arc_jet(n: usize, i: usize, theta: f64, len: usize) -> Result<Jet> {
    let chain = resolve_chain(n, i)?;
    let m = chain.base_dim;
    let full = len + chain.steps;
    let g = berg_arc_jet(m - 1, theta, full + 2);
    let cos = Jet::cos(theta, full);
    let sin = Jet::sin(theta, full);
    let mf = m as f64;
    let g1 = g.deriv();
    let g2 = g1.deriv();
    let mut r = g2
        .scale(1.0 / (2.0 * (mf - 2.0)))
        .add(&g1.truncate(full).mul(&cos).div(&sin).scale(0.5))
        .add(&g.truncate(full).scale((mf - 1.0) / (2.0 * (mf - 2.0))))
        .sub(&cos.scale(mf / (2.0 * omega(m - 1))));
    for _ in 0..chain.steps {
        let k = r.len() - 1;
        r = r.deriv().div(&sin.truncate(k)).scale(1.0 / (2.0 * PI));
    }
    Ok(r.truncate(len))
}

/// ρ̂_{n,i}(θ) for θ ∈ (−π,π); θ = 0 gives ρ_{n,i}(−1).
pub fn rho_arc_eval(n: usize, i: usize, theta: f64) -> Result<f64> {
    check(n, i)?;
    if !(theta.abs() < PI) {
        return Err(domain!("rho_arc_eval needs θ in (-π,π), got {theta}"));
    }
    if theta == 0.0 {
        return rho_at_minus_one(n, i);
    }
    Ok(rho_arc_jet(n, i, theta, 1)?.value())
}

/// ρ̂_{n,i}^{(m)}(θ) for θ ∈ (−π,π)∖{0}.
pub fn rho_arc_deriv(n: usize, i: usize, theta: f64, m: usize) -> Result<f64> {
    check(n, i)?;
    if !(theta.abs() < PI) || theta == 0.0 {
        return Err(domain!("rho_arc_deriv needs θ in (-π,π) without 0, got {theta}"));
    }
    Ok(rho_arc_jet(n, i, theta, m + 1)?.derivative_at(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelRoute {
    Recursion,
    ClosedForm,
    Spectral,
}

/// ρ_{n,i} evaluated along a chosen route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelProfile {
    pub n: usize,
    pub i: usize,
    pub route: KernelRoute,
    /// Truncation degree of the spectral route.
    pub kmax: usize,
}

impl KernelProfile {
    pub fn new(n: usize, i: usize, route: KernelRoute) -> Result<Self> {
        check(n, i)?;
        Ok(Self { n, i, route, kmax: 80 })
    }

    pub fn sing_pos(&self) -> f64 {
        (self.n as f64 - 2.0) / 2.0
    }

    pub fn sing_neg(&self) -> f64 {
        0.0
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self.route {
            KernelRoute::Recursion => rho(self.n, self.i, t, 0),
            KernelRoute::ClosedForm => rho_closed_form(self.n, self.i, t),
            KernelRoute::Spectral => rho_spectral(self.n, self.i, t, self.kmax),
        }
    }

    /// Derivatives are exact on the recursion route only.
    pub fn eval_deriv(&self, m: usize, t: f64) -> Result<f64> {
        if m == 0 {
            return self.eval(t);
        }
        match self.route {
            KernelRoute::Recursion => rho(self.n, self.i, t, m),
            _ => Err(Error::Contract(format!("route {:?} provides no derivatives", self.route))),
        }
    }

    pub fn arc_eval(&self, theta: f64) -> Result<f64> {
        rho_arc_eval(self.n, self.i, theta)
    }

    /// ρ_{n,i} as a zonal profile on S^{n−1} (recursion route).
    pub fn profile(&self) -> ZonalProfile {
        let (n, i) = (self.n, self.i);
        ZonalProfile::new(n, format!("rho_{n},{i}"), self.sing_pos(), 0.0, ALL_ORDERS, move |m, t| {
            rho(n, i, t, m).unwrap_or(f64::NAN)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub n: usize,
    pub i: usize,
    pub grid_size: usize,
    pub min_value: f64,
    pub argmin: f64,
    /// (ρ(−1), lim_{t→1} (1−t²)^{(n−2)/2} ρ(t)).
    pub endpoint_limits: (f64, f64),
    pub pass: bool,
}

/// Minimum of ρ_{n,i} on a Chebyshev grid, together with both end point values.
pub fn rho_positivity_certificate(n: usize, i: usize, grid_size: usize) -> Result<PositivityReport> {
    check(n, i)?;
    if grid_size == 0 {
        return Err(domain!("positivity grid needs at least one point"));
    }
    let mut min_value = f64::INFINITY;
    let mut argmin = 0.0;
    for k in 0..grid_size {
        let t = ((2 * k + 1) as f64 * PI / (2 * grid_size) as f64).cos();
        let v = rho(n, i, t, 0)?;
        if !(v >= min_value) {
            min_value = v;
            argmin = t;
        }
    }
    let endpoint_limits = (rho_at_minus_one(n, i)?, rho_endpoint_limit(n, i, 0, 1)?);
    let pass = min_value > 0.0 && endpoint_limits.0 > 0.0 && endpoint_limits.1 > 0.0;
    Ok(PositivityReport { n, i, grid_size, min_value, argmin, endpoint_limits, pass })
}

/// ⟨(−Δ_{S^n} + i(n−i−1)) ψ, ρ_{n,i}⟩ − π ψ(1) for a zonal test profile ψ on
/// S^n, i.e. ω_n ∫ (−(1−t²)ψ'' + n t ψ' + i(n−i−1)ψ) ρ (1−t²)^{(n−2)/2} dt − π ψ(1).
pub fn green_residual(n: usize, i: usize, test: &ZonalProfile) -> Result<f64> {
    check(n, i)?;
    if test.derivative_order < 2 {
        return Err(Error::Contract(format!(
            "green_residual needs two derivatives of '{}', have {}",
            test.label, test.derivative_order
        )));
    }
    let nf = n as f64;
    let c = (i * (n - i - 1)) as f64;
    let rule = quadrature(4096, QuadratureKind::ArcSubstituted);
    let mut acc = 0.0;
    for (j, &t) in rule.nodes.iter().enumerate() {
        if t >= 1.0 || t <= -1.0 {
            continue;
        }
        let op = -(1.0 - t * t) * test.eval_deriv(2, t)? + nf * t * test.eval_deriv(1, t)? + c * test.eval(t);
        acc += rule.weights[j] * rule.sines[j].powi(n as i32 - 2) * op * rho(n, i, t, 0)?;
    }
    Ok(omega(n) * acc - PI * test.eval(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rho31(t: f64) -> f64 {
        (PI - t.acos()) / (4.0 * PI * (1.0 - t * t).sqrt())
    }

    #[test]
    fn every_pair_reaches_a_base_case() {
        for n in 3..=12 {
            for i in 1..n - 1 {
                let c = resolve_chain(n, i).unwrap();
                assert_eq!(c.base_dim, n - 2 * c.steps);
                assert!(c.base_dim >= 3);
                assert_eq!(c.steps + 1, i.min(n - i - 1));
            }
        }
        assert!(resolve_chain(3, 2).is_err());
        assert!(resolve_chain(2, 1).is_err());
        assert!(resolve_chain(5, 0).is_err());
    }

    #[test]
    fn lowest_kernel_is_explicit() {
        for &t in &[-0.97, -0.5, 0.0, 0.4, 0.95] {
            assert_relative_eq!(rho(3, 1, t, 0).unwrap(), rho31(t), max_relative = 1e-13);
            assert_relative_eq!(rho_closed_form(3, 1, t).unwrap(), rho31(t), max_relative = 1e-12);
        }
        assert!(rho_base(3, 1.0).is_err());
    }

    #[test]
    fn recurrence_and_reflection() {
        let h = 1e-5;
        for &t in &[-0.6, 0.1, 0.7] {
            let fd = (rho(3, 1, t + h, 0).unwrap() - rho(3, 1, t - h, 0).unwrap()) / (4.0 * PI * h);
            assert_relative_eq!(rho(5, 2, t, 0).unwrap(), fd, max_relative = 1e-8);
            assert_eq!(rho(4, 2, t, 0).unwrap(), rho(4, 1, t, 0).unwrap());
            assert_eq!(rho(7, 2, t, 1).unwrap(), rho(7, 4, t, 1).unwrap());
        }
    }

    #[test]
    fn endpoint_values() {
        assert_relative_eq!(rho_at_minus_one(3, 1).unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-14);
        assert_relative_eq!(rho_at_minus_one(4, 1).unwrap(), 1.0 / (16.0 * PI), max_relative = 1e-14);
        // the scaled value is still 4.5% short of 1/4 at t = 0.99
        let t: f64 = 0.9999;
        assert!(((1.0 - t * t).sqrt() * rho(3, 1, t, 0).unwrap() - 0.25).abs() < 0.005);
        let t = 1.0 - 1e-7;
        assert_relative_eq!((1.0 - t * t) * rho(4, 2, t, 0).unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-5);
        assert_relative_eq!(rho(4, 1, -1.0 + 1e-9, 0).unwrap(), 1.0 / (16.0 * PI), max_relative = 1e-6);
    }

    #[test]
    fn closed_form_matches_recursion() {
        for &(n, i) in &[(3, 1), (4, 1), (4, 2), (5, 2), (6, 2), (7, 3)] {
            for &t in &[0.0, 0.5, -0.5, 0.9, -0.9] {
                let a = rho(n, i, t, 0).unwrap();
                let b = rho_closed_form(n, i, t).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn multiplier_examples() {
        assert_relative_eq!(rho_multiplier(4, 1, 0), 2.0, max_relative = 1e-14);
        for k in 0..6 {
            assert_eq!(rho_multiplier(7, 2, k), rho_multiplier(7, 4, k));
        }
    }

    #[test]
    fn ode_examples() {
        for &(n, i, t) in &[(3, 1, 0.5), (4, 1, -0.9), (5, 2, 0.0)] {
            assert!(rho_ode_residual(n, i, t).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn arc_form() {
        for &(n, i) in &[(3, 1), (4, 1), (5, 2), (6, 2)] {
            for &th in &[0.3, 1.2, 2.5] {
                let a = rho_arc_eval(n, i, th).unwrap();
                assert_relative_eq!(a, rho(n, i, -th.cos(), 0).unwrap(), max_relative = 1e-10);
                assert_relative_eq!(a, rho_arc_eval(n, i, -th).unwrap(), max_relative = 1e-10);
            }
            let near = rho_arc_eval(n, i, 1e-4).unwrap();
            assert_relative_eq!(near, rho_arc_eval(n, i, 0.0).unwrap(), max_relative = 1e-6);
        }
    }

    #[test]
    fn green_constant_test() {
        let one = ZonalProfile::constant(4, 1.0);
        assert!(green_residual(3, 1, &one).unwrap().abs() < 1e-6);
        let p2 = ZonalProfile::legendre(4, 2);
        assert!(green_residual(3, 1, &p2).unwrap().abs() < 1e-5);
    }
}
