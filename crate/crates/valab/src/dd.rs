//! Double-double arithmetic (value = hi + lo, |lo| ≤ ulp(hi)/2), enough for
//! the Berg derivative engine where large terms cancel near t = 1.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const DD_PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
pub(crate) const DD_LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// a + b without rounding.
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// a · b without rounding.
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn mul_pow2(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        Self { hi: self.hi * s, lo: self.lo * s }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::ZERO;
        }
        let s = self.hi.sqrt();
        let r = self - Self::prod(s, s);
        Self::sum(s, r.hi / (2.0 * s))
    }

    /// (sin x, cos x) by Taylor series; meant for |x| ≤ 4.
    fn sin_cos(x: Dd) -> (Dd, Dd) {
        let x2 = x * x;
        let mut s = x;
        let mut c = Dd::ONE;
        let mut ts = x;
        let mut tc = Dd::ONE;
        let mut k = 1.0;
        loop {
            tc = -(tc * x2) / (k * (k + 1.0));
            ts = -(ts * x2) / ((k + 1.0) * (k + 2.0));
            c = c + tc;
            s = s + ts;
            k += 2.0;
            if tc.hi.abs() < 1e-34 && ts.hi.abs() < 1e-34 {
                break;
            }
        }
        (s, c)
    }

    /// arccos for |x| < 1: one Newton step from the f64 value.
    pub fn acos(self) -> Self {
        let th = Dd::from_f64(self.to_f64().acos());
        let (s, c) = Self::sin_cos(th);
        th + (c - self) / s
    }

    /// Natural log for x > 0: binary exponent plus 2 atanh((m−1)/(m+1)).
    pub fn ln(self) -> Self {
        let mut e = self.hi.log2().floor() as i32;
        let mut m = self.mul_pow2(-e);
        if m.hi > 1.5 {
            m = m.mul_pow2(-1);
            e += 1;
        } else if m.hi < 0.75 {
            m = m.mul_pow2(1);
            e -= 1;
        }
        let z = (m - Dd::ONE) / (m + Dd::ONE);
        let z2 = z * z;
        let mut pw = z;
        let mut sum = z;
        let mut k = 3.0;
        while pw.hi.abs() > 1e-34 {
            pw = pw * z2;
            sum = sum + pw / k;
            k += 2.0;
        }
        DD_LN2 * e as f64 + sum.mul_pow2(1)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, o: f64) -> Dd {
        let (s, e) = two_sum(self.hi, o);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, o: f64) -> Dd {
        self + (-o)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        let (hi, lo) = quick_two_sum(p, e + self.lo * o);
        Dd { hi, lo }
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, o: f64) -> Dd {
        self / Dd::from_f64(o)
    }
}

/// κ_k in double-double.
pub(crate) fn kappa_dd(k: usize) -> Dd {
    let mut v = if k % 2 == 0 { Dd::ONE } else { Dd::from_f64(2.0) };
    let mut i = 2 + k % 2;
    while i <= k {
        v = v * DD_PI * 2.0 / i as f64;
        i += 2;
    }
    v
}

/// ω_k = k κ_k in double-double.
pub(crate) fn omega_dd(k: usize) -> Dd {
    kappa_dd(k) * k as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, hi: f64, lo: f64, tol: f64) {
        let d = (a - Dd { hi, lo }).to_f64();
        assert!(d.abs() <= tol * hi.abs(), "{a:?} vs {hi} {lo}: {d:e}");
    }

    #[test]
    fn arithmetic() {
        let third = Dd::ONE / 3.0;
        close(third * 3.0, 1.0, 0.0, 1e-31);
        let q = Dd::from_f64(0.7) / Dd::from_f64(0.3);
        close(q * Dd::from_f64(0.3), 0.7, 0.0, 1e-31);
        let r = Dd::from_f64(2.0).sqrt();
        close(r * r, 2.0, 0.0, 1e-31);
    }

    #[test]
    fn transcendentals() {
        close(Dd::from_f64(0.5).acos(), 1.0471975511965979, -1.072081766451091e-16, 1e-30);
        close(Dd::from_f64(0.99).acos(), 0.1415394733244273, -7.861828222640801e-18, 1e-30);
        close(Dd::from_f64(-0.3).acos(), 1.8754889808102941, -2.1748551325047183e-17, 1e-30);
        close(Dd::from_f64(2.0).ln(), DD_LN2.hi, DD_LN2.lo, 1e-31);
        close(Dd::from_f64(0.01).ln(), -4.605170185988091, -4.332104933119537e-16, 1e-30);
        close(Dd::from_f64(1.7).ln(), 0.5306282510621704, -5.076541175216476e-18, 1e-30);
        close(omega_dd(2), 2.0 * DD_PI.hi, 2.0 * DD_PI.lo, 1e-31);
        close(kappa_dd(3), 4.188790204786391, -4.288327065804364e-16, 1e-30);
    }
}
