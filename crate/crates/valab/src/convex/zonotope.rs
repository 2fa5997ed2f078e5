use std::f64::consts::PI;

use super::polytope::Polytope;
use super::subspace::{Subspace, Vector};
use crate::error::{domain, Result};
use crate::special::omega;

/// center + Σ_g [−g/2, g/2].
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    ambient: usize,
    generators: Vec<Vector>,
    center: Vector,
}

impl Zonotope {
    pub fn new(generators: Vec<Vector>, center: Vector) -> Result<Self> {
        let n = center.len();
        if generators.iter().any(|g| g.len() != n) {
            return Err(domain!("generators must lie in R^{n}"));
        }
        Ok(Self { ambient: n, generators, center })
    }

    pub fn centered(n: usize, generators: Vec<Vector>) -> Result<Self> {
        Self::new(generators, Vector::zeros(n))
    }

    /// A zonotope approximating the unit ball B^n: m segments with
    /// quasi-uniform directions, scaled so that the mean of h is 1.
    pub fn ball(n: usize, m: usize) -> Result<Self> {
        if n < 2 || m == 0 {
            return Err(domain!("ball approximation needs n >= 2 and m >= 1"));
        }
        let dirs = ball_directions(n, m);
        // E|⟨g,u⟩| over u uniform on S^{n−1}
        let mean_abs = 2.0 * omega(n - 1) / ((n - 1) as f64 * omega(n));
        let len = 2.0 / (m as f64 * mean_abs);
        Self::centered(n, dirs.into_iter().map(|d| d * len).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn support_function(&self, u: &Vector) -> f64 {
        self.center.dot(u) + 0.5 * self.generators.iter().map(|g| g.dot(u).abs()).sum::<f64>()
    }

    /// Σ_{|S|=n} |det(g_S)|.
    pub fn volume(&self) -> f64 {
        let n = self.ambient;
        let mut total = 0.0;
        let mut idx: Vec<usize> = (0..n).collect();
        let m = self.generators.len();
        if m < n {
            return 0.0;
        }
        loop {
            let mat = nalgebra::DMatrix::from_fn(n, n, |r, c| self.generators[idx[c]][r]);
            total += mat.determinant().abs();
            // next combination
            let mut k = n;
            while k > 0 && idx[k - 1] == m - n + k - 1 {
                k -= 1;
            }
            if k == 0 {
                return total;
            }
            idx[k - 1] += 1;
            for j in k..n {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// The segments [c − g/2, c + g/2], with the center put on the first.
    pub fn segments(&self) -> Vec<Polytope> {
        self.generators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let c = if k == 0 { self.center.clone() } else { Vector::zeros(self.ambient) };
                Polytope::segment(&c - g * 0.5, &c + g * 0.5).expect("segment")
            })
            .collect()
    }

    /// The zonotope as a V-polytope, by successive Minkowski sums.
    pub fn to_polytope(&self) -> Result<Polytope> {
        let mut p = Polytope::point(self.center.clone());
        for g in &self.generators {
            let s = Polytope::segment(-g * 0.5, g * 0.5)?;
            p = p.minkowski_sum(&s)?;
        }
        Ok(p)
    }

    /// Z|E in frame coordinates of E.
    pub fn project_coords(&self, e: &Subspace) -> Result<Zonotope> {
        Zonotope::new(self.generators.iter().map(|g| e.coords(g)).collect(), e.coords(&self.center))
    }
}

/// m directions in S^{n−1}: equally spaced in a half-circle for n = 2, a
/// Fibonacci lattice on the upper hemisphere for n = 3, and a fixed
/// pseudo-random Gaussian sample otherwise. Antipodal pairs are avoided since
/// segments are symmetric.
fn ball_directions(n: usize, m: usize) -> Vec<Vector> {
    match n {
        2 => (0..m)
            .map(|k| {
                let a = PI * (k as f64 + 0.5) / m as f64;
                Vector::from_column_slice(&[a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|k| {
                    let z = 1.0 - (k as f64 + 0.5) / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    Vector::from_column_slice(&[r * a.cos(), r * a.sin(), z])
                })
                .collect()
        }
        _ => {
            use rand::SeedableRng;
            use rand_distr::{Distribution, StandardNormal};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64);
            (0..m)
                .map(|_| {
                    let v = Vector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
                    let v = v.normalize();
                    if v[n - 1] < 0.0 {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        }
    }
}
