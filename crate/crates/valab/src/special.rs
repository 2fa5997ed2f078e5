//! Special functions and quadrature.
//!
//! Gamma values come from `statrs` (a Lanczos approximation); everything
//! specific to spherical analysis is implemented here.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Volume and surface constants of the unit k-ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalConstants {
    pub k: usize,
    pub kappa: f64,
    pub omega: f64,
}

impl DimensionalConstants {
    pub fn new(k: usize) -> Self {
        Self { k, kappa: kappa(k), omega: omega(k) }
    }
}

/// Volume of the unit ball in R^k.
///
/// Uses κ_k = (2π/k) κ_{k−2}, which agrees with π^{k/2}/Γ(k/2+1).
pub fn kappa(k: usize) -> f64 {
    let mut v = if k % 2 == 0 { 1.0 } else { 2.0 };
    let mut j = 2 + k % 2;
    while j <= k {
        v *= 2.0 * PI / j as f64;
        j += 2;
    }
    v
}

/// Surface area of the unit sphere S^{k-1}, i.e. k·κ_k.
pub fn omega(k: usize) -> f64 {
    k as f64 * kappa(k)
}

/// Binomial coefficient with the convention C(n,k) = 0 outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r.round()
}

/// The flag coefficient C(n,k)·κ_n/(κ_k κ_{n−k}).
pub fn flag_coefficient(n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(domain!("flag coefficient needs 0 <= k <= n, got n={n}, k={k}"));
    }
    Ok(binomial(n as i64, k as i64) * kappa(n) / (kappa(k) * kappa(n - k)))
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn digamma(x: f64) -> f64 {
    statrs::function::gamma::digamma(x)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// 1/Γ(x), with the value 0 at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// ln|Γ(x)| together with the sign of Γ(x). Poles give (+∞, 0).
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 0.0);
    }
    if x > 0.0 {
        return (statrs::function::gamma::ln_gamma(x), 1.0);
    }
    // reflection: Γ(x)Γ(1−x) = π / sin(πx)
    let s = (PI * x).sin();
    let (lg, _) = ln_gamma_signed(1.0 - x);
    ((PI / s.abs()).ln() - lg, s.signum())
}

/// Π Γ(num) / Π Γ(den), evaluated through log-gamma to avoid overflow.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> f64 {
    let mut log = 0.0;
    let mut sign = 1.0;
    for &a in num {
        let (l, s) = ln_gamma_signed(a);
        if s == 0.0 {
            return f64::NAN;
        }
        log += l;
        sign *= s;
    }
    for &b in den {
        let (l, s) = ln_gamma_signed(b);
        if s == 0.0 {
            return 0.0;
        }
        log -= l;
        sign *= s;
    }
    sign * log.exp()
}

/// The Legendre polynomial P^n_k of dimension n, normalized by P^n_k(1) = 1.
///
/// Evaluated by (k+n−2) P_{k+1} = (2k+n−2) t P_k − k P_{k−1}.
pub fn legendre_poly(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 3 {
        return Err(domain!("legendre_poly needs n >= 3, got {n}"));
    }
    if !(t.abs() <= 1.0) {
        return Err(domain!("legendre_poly argument {t} outside [-1,1]"));
    }
    Ok(legendre_table(n, k, t)[k])
}

/// All values P^n_0(t), …, P^n_kmax(t). No argument checks.
pub fn legendre_table(n: usize, kmax: usize, t: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(1.0);
    if kmax == 0 {
        return p;
    }
    p.push(t);
    let nf = n as f64;
    for k in 1..kmax {
        let kf = k as f64;
        let next = ((2.0 * kf + nf - 2.0) * t * p[k] - kf * p[k - 1]) / (kf + nf - 2.0);
        p.push(next);
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureKind {
    GaussLegendre,
    /// Gauss–Legendre in θ ∈ (0,π) with t = cos θ.
    ArcSubstituted,
}

/// A quadrature rule for ∫_{−1}^{1} f(t) dt.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
    /// √(1−t²) at every node, exact for the arc rule (it is sin θ).
    pub sines: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated to rounding accuracy.
    pub fn exactness_degree(&self) -> usize {
        match self.kind {
            QuadratureKind::GaussLegendre => 2 * self.len() - 1,
            // a degree-d polynomial becomes a trigonometric polynomial of
            // degree d+1 in θ; half the node count is comfortably resolved
            QuadratureKind::ArcSubstituted => self.len() / 2,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// ∫ f(t) (1−t²)^alpha dt, with the weight formed from the stored sines.
    pub fn integrate_weighted<F: Fn(f64) -> f64>(&self, alpha: f64, f: F) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.len() {
            let t = self.nodes[j];
            if t >= 1.0 || t <= -1.0 {
                continue;
            }
            acc += self.weights[j] * self.sines[j].powf(2.0 * alpha) * f(t);
        }
        acc
    }
}

fn gauss_legendre_raw(npts: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; npts];
    let mut w = vec![0.0; npts];
    let nf = npts as f64;
    let m = npts.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 1..npts {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * z * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[npts - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[npts - 1 - i] = wi;
    }
    (x, w)
}

fn build_rule(npts: usize, kind: QuadratureKind) -> QuadratureRule {
    let (x, w) = gauss_legendre_raw(npts);
    match kind {
        QuadratureKind::GaussLegendre => {
            let sines = x.iter().map(|&t| ((1.0 - t) * (1.0 + t)).sqrt()).collect();
            QuadratureRule { nodes: x, weights: w, kind, sines }
        }
        QuadratureKind::ArcSubstituted => {
            let h = PI / 2.0;
            let mut nodes = Vec::with_capacity(npts);
            let mut weights = Vec::with_capacity(npts);
            let mut sines = Vec::with_capacity(npts);
            for (xi, wi) in x.iter().zip(&w) {
                let theta = h * (xi + 1.0);
                let s = theta.sin();
                nodes.push(theta.cos());
                weights.push(h * wi * s);
                sines.push(s);
            }
            QuadratureRule { nodes, weights, kind, sines }
        }
    }
}

/// Cached rule with `npts` nodes.
pub fn quadrature(npts: usize, kind: QuadratureKind) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, QuadratureKind), Arc<QuadratureRule>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(npts, kind)) {
        return r.clone();
    }
    let rule = Arc::new(build_rule(npts, kind));
    cache.lock().unwrap().insert((npts, kind), rule.clone());
    rule
}

const SERIES_EPS: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 200_000;

fn gauss_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() < SERIES_EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!(
        "2F1({a}, {b}; {c}; {x}) series did not converge in {SERIES_MAX_TERMS} terms"
    )))
}

fn terminating_series(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let m = (-a.min(b)).round() as usize;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..m {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
    }
    sum
}

/// The transformation to 1−x when c−a−b = m is a non-negative integer.
fn degenerate_transform(a: f64, b: f64, m: usize, x: f64) -> Result<f64> {
    let w = 1.0 - x;
    let lw = w.ln();
    let mf = m as f64;
    let c = a + b + mf;
    let mut finite = 0.0;
    if m > 0 {
        let pre = gamma(mf) * gamma(c) * rgamma(a + mf) * rgamma(b + mf);
        let mut term = 1.0;
        for k in 0..m {
            finite += term;
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((kf + 1.0) * (1.0 - mf + kf)) * w;
        }
        finite *= pre;
    }
    let pre = gamma(c) * rgamma(a) * rgamma(b) * (-w).powi(m as i32);
    if pre == 0.0 {
        return Ok(finite);
    }
    // term_k = (a+m)_k (b+m)_k / (k! (k+m)!) w^k
    let mut term = 1.0 / gamma(mf + 1.0);
    let mut sum = 0.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let bracket = lw - digamma(kf + 1.0) - digamma(kf + mf + 1.0)
            + digamma(a + kf + mf)
            + digamma(b + kf + mf);
        let contrib = term * bracket;
        sum += contrib;
        if contrib.abs() < SERIES_EPS * sum.abs() && k > 2 {
            return Ok(finite - pre * sum);
        }
        term *= (a + mf + kf) * (b + mf + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
    }
    Err(Error::Numeric(format!(
        "2F1 logarithmic continuation with (a,b,m)=({a},{b},{m}) did not converge"
    )))
}

/// Gauss hypergeometric function ₂F₁(a,b;c;x) for x ∈ [0,1).
///
/// The power series is used for x ≤ 1/2 and the linear transformation
/// to 1−x above, including the logarithmic case c−a−b ∈ ℤ.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(domain!("2F1 parameter c = {c} is a non-positive integer"));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(domain!("2F1 argument {x} outside [0,1)"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Ok(terminating_series(a, b, c, x));
    }
    if x <= 0.5 {
        return gauss_series(a, b, c, x);
    }
    let s = c - a - b;
    let sr = s.round();
    if (s - sr).abs() < 1e-12 {
        if sr < 0.0 {
            // Euler: F(a,b;c;x) = (1−x)^{c−a−b} F(c−a,c−b;c;x)
            return Ok((1.0 - x).powf(s) * hyp2f1(c - a, c - b, c, x)?);
        }
        return degenerate_transform(a, b, sr as usize, x);
    }
    let w = 1.0 - x;
    let ga = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b);
    let gb = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b);
    let f1 = if ga != 0.0 { gauss_series(a, b, 1.0 - s, w)? } else { 0.0 };
    let f2 = if gb != 0.0 { gauss_series(c - a, c - b, 1.0 + s, w)? } else { 0.0 };
    Ok(ga * f1 + gb * w.powf(s) * f2)
}

/// The associated Legendre function
/// P̃^μ_λ(t) = e^{iπμ/2}/Γ(1−μ) · ((1+t)/(1−t))^{μ/2} · ₂F₁(−λ, λ+1; 1−μ; (1−t)/2).
pub fn assoc_legendre(lambda: f64, mu: f64, t: f64) -> Result<Complex64> {
    if !(t.abs() < 1.0) {
        return Err(domain!("assoc_legendre argument {t} outside (-1,1)"));
    }
    if is_nonpositive_integer(1.0 - mu) {
        return Err(domain!("assoc_legendre needs 1-mu not a non-positive integer, mu = {mu}"));
    }
    let f = hyp2f1(-lambda, lambda + 1.0, 1.0 - mu, (1.0 - t) / 2.0)?;
    let real = rgamma(1.0 - mu) * ((1.0 + t) / (1.0 - t)).powf(mu / 2.0) * f;
    Ok(Complex64::from_polar(1.0, PI * mu / 2.0) * real)
}
