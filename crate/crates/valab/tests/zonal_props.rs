use std::f64::consts::PI;

use valab::berg::BergFunction;
use valab::zonal::*;

/// a^{n+2}_k[g'] = 2π a^n_{k+1}[g].
fn check_shift(g: &ZonalProfile, kmax: usize, tol: f64) {
    let n = g.n;
    let a = multipliers(g, kmax + 1).unwrap();
    let d = multipliers(&g.derivative(n + 2).unwrap(), kmax).unwrap();
    for k in 0..=kmax {
        let rhs = 2.0 * PI * a.values[k + 1];
        let scale = rhs.abs().max(1e-3 * a.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        assert!((d.values[k] - rhs).abs() <= tol * scale, "{} n={n} k={k}: {} vs {rhs}", g.label, d.values[k]);
    }
}

#[test]
fn dimension_shift_polynomials() {
    for n in 3..=5 {
        check_shift(&ZonalProfile::polynomial(n, vec![0.3, -1.0, 0.5, 2.0, 0.0, -0.7]), 6, 1e-7);
        check_shift(&ZonalProfile::legendre(n, 4), 6, 1e-7);
    }
}

#[test]
fn dimension_shift_berg() {
    for n in 3..=5 {
        for j in 2..=n {
            check_shift(&BergFunction::new(j).unwrap().profile(n), 8, 1e-7);
        }
    }
}

#[test]
fn spectral_convolution_matches_multiplier_product() {
    let g = ZonalProfile::polynomial(3, vec![0.0, 0.0, 1.0, 0.5]);
    let (p, tail) = zonal_convolve(&g, &g, 8).unwrap();
    let a = multipliers(&g, 8).unwrap();
    let b = multipliers(&p, 8).unwrap();
    for k in 0..=8 {
        assert!((b.values[k] - a.values[k] * a.values[k]).abs() < 1e-10, "k={k}");
    }
    assert!(tail.abs() < 1e-12);
}
