use valab::kernel::*;
use valab::zonal::multipliers;

const PAIRS: [(usize, usize); 7] = [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 2)];

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

#[test]
fn routes_agree() {
    for &(n, i) in &PAIRS {
        let mut worst: (f64, f64) = (0.0, 0.0);
        for t in grid(-0.9, 0.9, 181) {
            let a = rho(n, i, t, 0).unwrap();
            let b = rho_closed_form(n, i, t).unwrap();
            let c = rho_spectral(n, i, t, 80).unwrap();
            worst.0 = worst.0.max((a - b).abs());
            worst.1 = worst.1.max((a - c).abs());
        }
        println!("({n},{i}) closed {:e} spectral {:e}", worst.0, worst.1);
        assert!(worst.0 < 1e-5 && worst.1 < 1e-5);
    }
}

#[test]
fn weighted_ode_residual() {
    for &(n, i) in &PAIRS {
        let mut worst: f64 = 0.0;
        for t in grid(-0.999, 0.999, 2001) {
            let w = (1.0 - t * t).powf((n as f64 - 2.0) / 2.0 + 2.0);
            worst = worst.max(rho_ode_residual(n, i, t).unwrap().abs() * w);
        }
        println!("({n},{i}) ode {worst:e}");
        assert!(worst < 1e-7);
    }
}

#[test]
fn quadrature_multipliers() {
    for &(n, i) in &PAIRS {
        let p = KernelProfile::new(n, i, KernelRoute::Recursion).unwrap().profile();
        let q = multipliers(&p, 12).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=12 {
            let e = RHO_MULTIPLIER_SCALE * rho_multiplier(n, i, k);
            worst = worst.max(((q.values[k] - e) / e).abs());
        }
        println!("({n},{i}) mult {worst:e}");
        assert!(worst < 1e-6);
    }
}

#[test]
fn positivity() {
    for &(n, i) in PAIRS.iter().chain(&[(6, 3), (8, 3)]) {
        let r = rho_positivity_certificate(n, i, 10_000).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
