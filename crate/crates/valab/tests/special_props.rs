use valab::special::*;
use valab::zonal::harmonic_dim;

/// Rodrigues' formula for odd n, where (1−t²)^{k+(n−3)/2} is a polynomial:
/// P^n_k = (−1)^k Γ((n−1)/2)/(2^k Γ(k+(n−1)/2)) (1−t²)^{(3−n)/2} d^k/dt^k (1−t²)^{k+(n−3)/2}.
fn rodrigues_odd(n: usize, k: usize, t: f64) -> f64 {
    let e = k + (n - 3) / 2;
    // coefficients of (1−t²)^e
    let mut c = vec![0.0; 2 * e + 1];
    for m in 0..=e {
        c[2 * m] = binomial(e as i64, m as i64) * if m % 2 == 0 { 1.0 } else { -1.0 };
    }
    for _ in 0..k {
        c = (1..c.len()).map(|d| d as f64 * c[d]).collect();
    }
    let poly: f64 = c.iter().rev().fold(0.0, |acc, &a| acc * t + a);
    let nf = n as f64;
    let r = gamma((nf - 1.0) / 2.0) / (2f64.powi(k as i32) * gamma(k as f64 + (nf - 1.0) / 2.0));
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * r * poly / (1.0 - t * t).powi((n as i32 - 3) / 2)
}

/// Gegenbauer sum C^λ_k(t)/C^λ_k(1), λ = (n−2)/2.
fn gegenbauer(n: usize, k: usize, t: f64) -> f64 {
    let lam = (n as f64 - 2.0) / 2.0;
    let c = |t: f64| -> f64 {
        (0..=k / 2)
            .map(|m| {
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                s * gamma((k - m) as f64 + lam) / (gamma(lam) * gamma(m as f64 + 1.0) * gamma((k - 2 * m) as f64 + 1.0))
                    * (2.0 * t).powi((k - 2 * m) as i32)
            })
            .sum()
    };
    c(t) / c(1.0)
}

#[test]
fn legendre_matches_rodrigues_and_gegenbauer() {
    for n in 3..=8 {
        for k in 0..=10 {
            for s in 0..21 {
                let t = -0.95 + 0.095 * s as f64;
                let p = legendre_poly(n, k, t).unwrap();
                let g = gegenbauer(n, k, t);
                assert!((p - g).abs() < 1e-9, "n={n} k={k} t={t}: {p} vs {g}");
                if n % 2 == 1 {
                    let r = rodrigues_odd(n, k, t);
                    assert!((p - r).abs() < 1e-10, "n={n} k={k} t={t}: {p} vs {r}");
                }
            }
        }
    }
}

#[test]
fn legendre_orthogonality() {
    // ω_{n−1} ∫ P_k P_l (1−t²)^{(n−3)/2} dt = δ_{kl} ω_n / dim H^n_k
    let rule = quadrature(256, QuadratureKind::ArcSubstituted);
    for n in 3..=7 {
        let alpha = (n as f64 - 3.0) / 2.0;
        for k in 0..=8 {
            for l in 0..=8 {
                let v = omega(n - 1) * rule.integrate_weighted(alpha, |t| legendre_poly(n, k, t).unwrap() * legendre_poly(n, l, t).unwrap());
                let e = if k == l { omega(n) / harmonic_dim(n, k) as f64 } else { 0.0 };
                assert!((v - e).abs() < 1e-12, "n={n} k={k} l={l}: {v} vs {e}");
            }
        }
    }
}

#[test]
fn flag_coefficient_small_cases() {
    // [n,k] = C(n,k) κ_n/(κ_k κ_{n−k})
    assert!((flag_coefficient(3, 1).unwrap() - 2.0).abs() < 1e-14);
    assert!((flag_coefficient(2, 1).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    assert!(flag_coefficient(2, 3).is_err());
}
