//! Berg functions g_j, their arc forms ĝ_j(θ) = g_j(−cos θ), and the
//! mean-section generating profiles.
//!
//! g_2 and g_3 are closed-form; higher indices follow from
//! g_{j+2} = (j+1)/(2π) g_j + (j+1)/(2π(j−1)) t g_j' + (j+1)/(2π ω_j) t.
//! Derivatives are carried through the m-times differentiated recurrence,
//! so each step up in j consumes one more derivative of the seed.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use crate::dd::{omega_dd, Dd, DD_LN2, DD_PI};
use crate::error::{domain, Result};
use crate::jet::Jet;
use crate::special::{gamma, omega};
use crate::zonal::{project_linear, ZonalProfile, ALL_ORDERS};

const G3_LINEAR: f64 = 4.0 / 3.0 - LN_2;
/// Below this t, g_2 is summed as a power series in 1+t.
const SERIES_SWITCH: f64 = -0.5;

/// The Berg function of index j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BergFunction {
    pub j: usize,
}

impl BergFunction {
    pub fn new(j: usize) -> Result<Self> {
        if j < 2 {
            return Err(domain!("Berg functions start at j = 2, got {j}"));
        }
        Ok(Self { j })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        berg_eval(self.j, t, 0)
    }

    pub fn eval_deriv(&self, m: usize, t: f64) -> Result<f64> {
        berg_eval(self.j, t, m)
    }

    pub fn arc_eval(&self, theta: f64) -> Result<f64> {
        berg_arc_eval(self.j, theta)
    }

    /// g_j as a zonal profile on S^{n−1}. The log singularity of g_3 is
    /// declared with a small positive exponent.
    pub fn profile(&self, n: usize) -> ZonalProfile {
        let j = self.j;
        let sing = match j {
            2 => 0.0,
            3 => 0.01,
            _ => (j as f64 - 3.0) / 2.0,
        };
        ZonalProfile::new(n, format!("g_{j}"), sing, 0.0, ALL_ORDERS, move |m, t| {
            berg_derivs(j, t, m).map(|d| d[m]).unwrap_or(f64::NAN)
        })
    }
}

/// Taylor coefficients in s = 1+t of h(t) = (π − arccos t)√(1−t²).
/// They satisfy (2k−1) b_k = (k−2) b_{k−1} for k ≥ 3.
fn h_series() -> &'static [Dd] {
    static B: OnceLock<Vec<Dd>> = OnceLock::new();
    B.get_or_init(|| {
        let mut b = vec![Dd::ZERO, Dd::from_f64(2.0), -(Dd::ONE / 3.0)];
        for k in 3..400 {
            let kf = k as f64;
            let prev = b[k - 1];
            b.push(prev * (kf - 2.0) / (2.0 * kf - 1.0));
        }
        b
    })
}

fn lin_deriv(t: f64, m: usize) -> f64 {
    match m {
        0 => t,
        1 => 1.0,
        _ => 0.0,
    }
}

/// h^{(0..=order)}(t) for h(t) = (π − arccos t)√(1−t²).
fn h_derivs(t: f64, order: usize) -> Vec<Dd> {
    if t <= SERIES_SWITCH {
        // exact for t ∈ [−1, −1/2]
        let s = 1.0 + t;
        let b = h_series();
        return (0..=order)
            .map(|m| {
                let mut sum = Dd::ZERO;
                let mut fall = Dd::ONE; // k!/(k−m)! at k = m
                for q in 1..=m {
                    fall = fall * q as f64;
                }
                let mut pw = Dd::ONE;
                for k in m..b.len() {
                    if k > m {
                        fall = fall * k as f64 / (k - m) as f64;
                        pw = pw * s;
                    }
                    let term = b[k] * pw * fall;
                    sum = sum + term;
                    if k > m + 8 && term.hi.abs() < 1e-33 * sum.hi.abs() {
                        break;
                    }
                }
                sum
            })
            .collect();
    }
    let td = Dd::from_f64(t);
    let w = Dd::sum(1.0, -t) * Dd::sum(1.0, t);
    let mut d = Vec::with_capacity(order + 1);
    d.push((DD_PI - td.acos()) * w.sqrt());
    for m in 0..order {
        let mf = m as f64;
        let rhs = match m {
            0 => w,
            1 => Dd::from_f64(-2.0 * t),
            2 => Dd::from_f64(-2.0),
            _ => Dd::ZERO,
        };
        let prev = if m > 0 { d[m - 1] } else { Dd::ZERO };
        d.push((rhs + d[m] * td * (2.0 * mf - 1.0) + prev * (mf * (mf - 2.0))) / w);
    }
    d
}

fn g2_derivs(t: f64, order: usize) -> Vec<Dd> {
    let h = h_derivs(t, order);
    let two_pi = DD_PI * 2.0;
    (0..=order).map(|m| (h[m] - Dd::from_f64(lin_deriv(t, m)).mul_pow2(-1)) / two_pi).collect()
}

fn g3_derivs(t: f64, order: usize) -> Vec<Dd> {
    // L = ln(1−t), L^{(k)} = −(k−1)!/(1−t)^k
    let u = Dd::sum(1.0, -t);
    let td = Dd::from_f64(t);
    let lin = Dd::from_f64(4.0) / 3.0 - DD_LN2;
    let mut l = Vec::with_capacity(order + 1);
    l.push(u.ln());
    let mut fact = 1.0;
    let mut upow = Dd::ONE;
    for k in 1..=order {
        if k > 1 {
            fact *= (k - 1) as f64;
        }
        upow = upow * u;
        l.push(-(Dd::from_f64(fact) / upow));
    }
    let two_pi = DD_PI * 2.0;
    (0..=order)
        .map(|m| {
            let mut v = td * l[m];
            if m >= 1 {
                v = v + l[m - 1] * m as f64;
            }
            match m {
                0 => v = v + lin * t + 1.0,
                1 => v = v + lin,
                _ => {}
            }
            v / two_pi
        })
        .collect()
}

fn check_args(j: usize, t: f64) -> Result<()> {
    if j < 2 {
        return Err(domain!("Berg functions start at j = 2, got {j}"));
    }
    if !(t > -1.0 && t < 1.0) {
        return Err(domain!("berg_eval needs t in (-1,1), got {t}; use berg_limit at the end points"));
    }
    Ok(())
}

pub(crate) fn berg_derivs_dd(j: usize, t: f64, order: usize) -> Vec<Dd> {
    let seed = 2 + j % 2;
    let steps = (j - seed) / 2;
    let mut d = if seed == 2 { g2_derivs(t, order + steps) } else { g3_derivs(t, order + steps) };
    let td = Dd::from_f64(t);
    let mut jj = seed;
    for _ in 0..steps {
        let top = d.len() - 1;
        let jf = jj as f64;
        let c = DD_PI.mul_pow2(1).recip() * (jf + 1.0);
        let w = omega_dd(jj);
        d = (0..top)
            .map(|m| {
                let mf = m as f64;
                let s = (d[m] * (jf + mf - 1.0) + td * d[m + 1]) / (jf - 1.0) + Dd::from_f64(lin_deriv(t, m)) / w;
                c * s
            })
            .collect();
        jj += 2;
    }
    d.truncate(order + 1);
    d
}

/// g_j^{(0)}(t), …, g_j^{(order)}(t). Carried internally in double-double.
pub fn berg_derivs(j: usize, t: f64, order: usize) -> Result<Vec<f64>> {
    check_args(j, t)?;
    Ok(berg_derivs_dd(j, t, order).into_iter().map(Dd::to_f64).collect())
}

/// g_j^{(m)}(t) for t ∈ (−1,1).
pub fn berg_eval(j: usize, t: f64, m: usize) -> Result<f64> {
    Ok(berg_derivs(j, t, m)?[m])
}

/// (1/(j−1))(1−t²) g_j'' − t g_j' + g_j + (j/ω_j) t, which vanishes identically.
pub fn berg_ode_residual(j: usize, t: f64) -> Result<f64> {
    check_args(j, t)?;
    let d = berg_derivs_dd(j, t, 2);
    let jf = j as f64;
    let td = Dd::from_f64(t);
    let w = Dd::sum(1.0, -t) * Dd::sum(1.0, t);
    let r = w * d[2] / (jf - 1.0) - td * d[1] + d[0] + td * jf / omega_dd(j);
    Ok(r.to_f64())
}

/// lim (1−t²)^{(j−3)/2+m} g_j^{(m)}(t) as t → side·1.
pub fn berg_limit(j: usize, m: usize, side: i32) -> Result<f64> {
    if j < 2 {
        return Err(domain!("Berg functions start at j = 2, got {j}"));
    }
    if m == 0 && (j == 2 || j == 3) {
        return Err(domain!("no scaled end point law for (j, m) = ({j}, 0)"));
    }
    match side {
        -1 => Ok(0.0),
        1 => {
            let jf = j as f64;
            let a = (jf - 3.0) / 2.0 + m as f64;
            Ok(-(jf - 1.0) * 2f64.powi(m as i32 - 2) * gamma(a) / PI.powf((jf - 1.0) / 2.0))
        }
        _ => Err(domain!("side must be +1 or -1, got {side}")),
    }
}

/// ĝ_j(0) from ĝ_{j+2}(0) = (j+1)/(2π(j−1)) (j ĝ_j(0) − (2j−1)/ω_j).
pub fn berg_arc_at_zero(j: usize) -> Result<f64> {
    if j < 2 {
        return Err(domain!("Berg functions start at j = 2, got {j}"));
    }
    let mut jj = 2 + j % 2;
    let mut v = if jj == 2 { 1.0 / (4.0 * PI) } else { -1.0 / (6.0 * PI) };
    while jj < j {
        let jf = jj as f64;
        v = (jf + 1.0) / (2.0 * PI * (jf - 1.0)) * (jf * v - (2.0 * jf - 1.0) / omega(jj));
        jj += 2;
    }
    Ok(v)
}

/// Taylor jet of ĝ_j at θ0 ≠ 0 with `len` terms, built with the arc recursion
/// ĝ_{j+2} = (j+1)/(2π) ĝ_j − (j+1)/(2π(j−1)) ĝ_j'/tan θ − (j+1)/(2π ω_j) cos θ.
pub(crate) fn berg_arc_jet(j: usize, theta: f64, len: usize) -> Jet {
    let seed = 2 + j % 2;
    let steps = (j - seed) / 2;
    let full = len + steps;
    let cos = Jet::cos(theta, full);
    let sin = Jet::sin(theta, full);
    let mut g = if seed == 2 {
        Jet::variable(theta, full).mul(&sin).scale(1.0 / (2.0 * PI)).add(&cos.scale(1.0 / (4.0 * PI)))
    } else {
        let log = cos.add_const(1.0).ln();
        cos.mul(&log).add(&cos.scale(G3_LINEAR)).scale(-1.0).add_const(1.0).scale(1.0 / (2.0 * PI))
    };
    let mut jj = seed as f64;
    for _ in 0..steps {
        let c = (jj + 1.0) / (2.0 * PI);
        let over_tan = g.deriv().mul(&cos).div(&sin);
        let k = g.len() - 1;
        g = g.truncate(k).scale(c).sub(&over_tan.scale(c / (jj - 1.0))).sub(&cos.truncate(k).scale(c / omega(jj as usize)));
        jj += 2.0;
    }
    g.truncate(len)
}

/// ĝ_j(θ) for θ ∈ (−π,π); θ = 0 goes through the limit recursion.
pub fn berg_arc_eval(j: usize, theta: f64) -> Result<f64> {
    if j < 2 {
        return Err(domain!("Berg functions start at j = 2, got {j}"));
    }
    if !(theta.abs() < PI) {
        return Err(domain!("berg_arc_eval needs θ in (-π,π), got {theta}"));
    }
    if theta == 0.0 {
        return berg_arc_at_zero(j);
    }
    Ok(berg_arc_jet(j, theta, 1).value())
}

/// ĝ_j^{(m)}(θ) for θ ∈ (−π,π)∖{0}.
pub fn berg_arc_deriv(j: usize, theta: f64, m: usize) -> Result<f64> {
    if j < 2 {
        return Err(domain!("Berg functions start at j = 2, got {j}"));
    }
    if !(theta.abs() < PI) || theta == 0.0 {
        return Err(domain!("berg_arc_deriv needs θ in (-π,π) without 0, got {theta}"));
    }
    Ok(berg_arc_jet(j, theta, m + 1).derivative_at(m))
}

/// Closed-form multiplier a^n_k[g_j] for k ≠ 1:
/// −π^{(n−j)/2}(j−1)/4 · Γ((n−j+2)/2)Γ((k−1)/2)Γ((k+j−1)/2) / (Γ((k+n−j+1)/2)Γ((k+n+1)/2)).
pub fn berg_multiplier(n: usize, j: usize, k: usize) -> Result<f64> {
    if k == 1 {
        return Err(domain!("the closed-form Berg multiplier excludes k = 1"));
    }
    if j < 2 || n < 3 {
        return Err(domain!("berg_multiplier needs j >= 2 and n >= 3, got j={j}, n={n}"));
    }
    let (nf, jf, kf) = (n as f64, j as f64, k as f64);
    let ratio = crate::special::gamma_ratio(
        &[(nf - jf + 2.0) / 2.0, (kf - 1.0) / 2.0, (kf + jf - 1.0) / 2.0],
        &[(kf + nf - jf + 1.0) / 2.0, (kf + nf + 1.0) / 2.0],
    );
    Ok(-PI.powf((nf - jf) / 2.0) * (jf - 1.0) / 4.0 * ratio)
}

/// m_const · (Id − π₁) g_j on S^{n−1}.
pub fn mso_profile(n: usize, j: usize, m_const: f64) -> Result<ZonalProfile> {
    if j < 2 || j > n {
        return Err(domain!("mean section profile needs 2 <= j <= n, got j={j}, n={n}"));
    }
    let g = BergFunction::new(j)?.profile(n);
    let c = project_linear(&g)?;
    let mut p = g.minus_linear(c).scaled(m_const);
    p.label = format!("mso_{j}");
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn values_at_zero() {
        assert_relative_eq!(berg_eval(2, 0.0, 0).unwrap(), 0.25, epsilon = 1e-15);
        assert_relative_eq!(berg_eval(3, 0.0, 0).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-15);
        // g_2 is continuous at 1 with value −1/(4π)
        let near = berg_eval(2, 1.0 - 1e-12, 0).unwrap();
        assert!((near + 1.0 / (4.0 * PI)).abs() < 1e-6);
        assert!(berg_eval(2, 1.0, 0).is_err());
        assert!(berg_eval(1, 0.0, 0).is_err());
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        for order in 0..8 {
            let a: Vec<f64> = h_derivs(SERIES_SWITCH - 1e-13, order).into_iter().map(Dd::to_f64).collect();
            let b: Vec<f64> = h_derivs(SERIES_SWITCH + 1e-13, order).into_iter().map(Dd::to_f64).collect();
            for m in 0..=order {
                assert!((a[m] - b[m]).abs() < 1e-10 * a[m].abs().max(1.0), "m={m}: {} vs {}", a[m], b[m]);
            }
        }
    }

    #[test]
    fn derivatives_match_difference_quotients() {
        let h = 1e-5;
        for j in 2..9 {
            for &t in &[-0.95, -0.6, -0.2, 0.3, 0.8] {
                let d = berg_derivs(j, t, 3).unwrap();
                let p = berg_derivs(j, t + h, 2).unwrap();
                let q = berg_derivs(j, t - h, 2).unwrap();
                for m in 0..3 {
                    let fd = (p[m] - q[m]) / (2.0 * h);
                    assert!((fd - d[m + 1]).abs() < 1e-5 * d[m + 1].abs().max(1.0), "j={j} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn ode_examples() {
        assert!(berg_ode_residual(2, 0.5).unwrap().abs() < 1e-10);
        assert!(berg_ode_residual(7, -0.9).unwrap().abs() < 1e-8);
        assert!(berg_ode_residual(3, 0.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn limits() {
        assert_eq!(berg_limit(5, 0, -1).unwrap(), 0.0);
        assert_relative_eq!(berg_limit(5, 0, 1).unwrap(), -1.0 / (PI * PI), max_relative = 1e-13);
        // j=4, m=1: −3·2^{−1}·Γ(3/2)/π^{3/2} = −3/(4π)
        assert_relative_eq!(berg_limit(4, 1, 1).unwrap(), -3.0 / (4.0 * PI), max_relative = 1e-13);
        assert!(berg_limit(2, 0, 1).is_err());
        assert!(berg_limit(3, 0, -1).is_err());
        assert!(berg_limit(4, 0, 0).is_err());
    }

    #[test]
    fn arc_examples() {
        assert_relative_eq!(berg_arc_eval(3, 0.0).unwrap(), -1.0 / (6.0 * PI), max_relative = 1e-14);
        assert_relative_eq!(berg_arc_eval(4, 0.0).unwrap(), -3.0 / (2.0 * PI * PI), max_relative = 1e-14);
        assert_relative_eq!(berg_arc_eval(2, PI / 2.0).unwrap(), 0.25, max_relative = 1e-14);
        assert!(berg_arc_eval(2, PI).is_err());
    }

    #[test]
    fn arc_limit_matches_nearby_flat_values() {
        for j in 2..10 {
            let flat = berg_eval(j, -1.0 + 1e-10, 0).unwrap();
            assert!((flat - berg_arc_at_zero(j).unwrap()).abs() < 1e-8, "j={j}");
        }
    }

    #[test]
    fn mso_profile_basics() {
        let p = mso_profile(4, 2, 1.0).unwrap();
        assert_relative_eq!(p.eval(0.0), 0.25, epsilon = 1e-14);
        assert!(mso_profile(3, 4, 1.0).is_err());
        assert!(mso_profile(3, 1, 1.0).is_err());
    }
}
