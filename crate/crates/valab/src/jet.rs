//! Truncated Taylor series in one variable, used for the arc forms.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Jet {
    /// c[k] = f^{(k)}(x0)/k!
    pub c: Vec<f64>,
}

impl Jet {
    pub fn variable(x0: f64, len: usize) -> Self {
        let mut c = vec![0.0; len];
        c[0] = x0;
        if len > 1 {
            c[1] = 1.0;
        }
        Self { c }
    }

    pub fn cos(x0: f64, len: usize) -> Self {
        let (s, co) = x0.sin_cos();
        let cycle = [co, -s, -co, s];
        Self::from_derivatives((0..len).map(|k| cycle[k % 4]))
    }

    pub fn sin(x0: f64, len: usize) -> Self {
        let (s, co) = x0.sin_cos();
        let cycle = [s, co, -s, -co];
        Self::from_derivatives((0..len).map(|k| cycle[k % 4]))
    }

    fn from_derivatives<I: Iterator<Item = f64>>(d: I) -> Self {
        let mut fact = 1.0;
        let c = d
            .enumerate()
            .map(|(k, v)| {
                if k > 0 {
                    fact *= k as f64;
                }
                v / fact
            })
            .collect();
        Self { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// f^{(k)}(x0).
    pub fn derivative_at(&self, k: usize) -> f64 {
        let mut f = 1.0;
        for j in 2..=k {
            f *= j as f64;
        }
        self.c[k] * f
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self { c: self.c[..len.min(self.len())].to_vec() }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { c: self.c.iter().map(|v| a * v).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        Self { c: (0..len).map(|k| self.c[k] + o.c[k]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn add_const(&self, a: f64) -> Self {
        let mut r = self.clone();
        r.c[0] += a;
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        let mut c = vec![0.0; len];
        for i in 0..len {
            for j in 0..len - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Self { c }
    }

    pub fn div(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        let mut q = vec![0.0; len];
        for k in 0..len {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= o.c[j] * q[k - j];
            }
            q[k] = s / o.c[0];
        }
        Self { c: q }
    }

    /// d/dx; the result is one term shorter.
    pub fn deriv(&self) -> Self {
        Self { c: (1..self.len()).map(|k| k as f64 * self.c[k]).collect() }
    }

    /// ln f, for f(x0) > 0.
    pub fn ln(&self) -> Self {
        let d = self.deriv().div(&self.truncate(self.len() - 1));
        let mut c = Vec::with_capacity(self.len());
        c.push(self.c[0].ln());
        for (k, v) in d.c.iter().enumerate() {
            c.push(v / (k + 1) as f64);
        }
        Self { c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_jets() {
        let x0 = 0.7;
        let s = Jet::sin(x0, 8);
        let c = Jet::cos(x0, 8);
        let one = s.mul(&s).add(&c.mul(&c));
        assert!((one.c[0] - 1.0).abs() < 1e-15);
        assert!(one.c[1..].iter().all(|v| v.abs() < 1e-15));
        let tan = s.div(&c);
        // d/dx tan = 1 + tan²
        let lhs = tan.deriv();
        let rhs = tan.mul(&tan).add_const(1.0).truncate(7);
        for k in 0..7 {
            assert!((lhs.c[k] - rhs.c[k]).abs() < 1e-12);
        }
        let l = c.add_const(1.0).ln();
        assert!((l.value() - (1.0 + x0.cos()).ln()).abs() < 1e-15);
        assert!((l.derivative_at(1) + x0.sin() / (1.0 + x0.cos())).abs() < 1e-15);
        assert_eq!(Jet::variable(x0, 3).derivative_at(1), 1.0);
    }
}
