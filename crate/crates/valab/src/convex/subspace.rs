use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Result};

pub type Vector = DVector<f64>;

/// Relative threshold below which a Gram–Schmidt residual counts as dependent.
const RANK_TOL: f64 = 1e-10;

/// A linear subspace of R^n with an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    frame: Vec<Vector>,
}

fn orthonormalize_into(frame: &mut Vec<Vector>, v: &Vector, scale: f64) -> bool {
    let mut w = v.clone();
    // two passes keep the frame orthonormal to machine precision
    for _ in 0..2 {
        for e in frame.iter() {
            let c = e.dot(&w);
            w.axpy(-c, e, 1.0);
        }
    }
    let nw = w.norm();
    if nw <= RANK_TOL * scale.max(1e-300) {
        return false;
    }
    frame.push(w / nw);
    true
}

impl Subspace {
    /// span(vectors); linearly dependent vectors are dropped.
    pub fn span(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        let mut frame = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(domain!("vector of length {} in R^{ambient}", v.len()));
            }
            orthonormalize_into(&mut frame, v, v.norm());
        }
        Ok(Self { ambient, frame })
    }

    /// Wraps a frame that is already orthonormal (checked to 1e−12).
    pub fn from_orthonormal(ambient: usize, frame: Vec<Vector>) -> Result<Self> {
        for (a, u) in frame.iter().enumerate() {
            if u.len() != ambient {
                return Err(domain!("frame vector of length {} in R^{ambient}", u.len()));
            }
            for (b, v) in frame.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                if (u.dot(v) - target).abs() > 1e-12 {
                    return Err(domain!("frame is not orthonormal"));
                }
            }
        }
        Ok(Self { ambient, frame })
    }

    pub fn whole(n: usize) -> Self {
        Self { ambient: n, frame: (0..n).map(|i| basis(n, i)).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Self { ambient: n, frame: Vec::new() }
    }

    /// span(e_i : i ∈ idx).
    pub fn coordinate(n: usize, idx: &[usize]) -> Self {
        Self { ambient: n, frame: idx.iter().map(|&i| basis(n, i)).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &[Vector] {
        &self.frame
    }

    /// Orthogonal projection x|E, as a vector of R^n.
    pub fn project(&self, x: &Vector) -> Vector {
        let mut p = Vector::zeros(self.ambient);
        for e in &self.frame {
            p.axpy(e.dot(x), e, 1.0);
        }
        p
    }

    /// Coordinates of x|E in the frame.
    pub fn coords(&self, x: &Vector) -> Vector {
        Vector::from_iterator(self.dim(), self.frame.iter().map(|e| e.dot(x)))
    }

    /// The point of E with frame coordinates c.
    pub fn embed(&self, c: &Vector) -> Vector {
        let mut p = Vector::zeros(self.ambient);
        for (e, &ci) in self.frame.iter().zip(c.iter()) {
            p.axpy(ci, e, 1.0);
        }
        p
    }

    /// E⊥.
    pub fn complement(&self) -> Self {
        let mut frame = self.frame.clone();
        for i in 0..self.ambient {
            if frame.len() == self.ambient {
                break;
            }
            orthonormalize_into(&mut frame, &basis(self.ambient, i), 1.0);
        }
        Self { ambient: self.ambient, frame: frame.split_off(self.dim()) }
    }

    /// E ∨ x = span(E ∪ {x}).
    pub fn join(&self, x: &Vector) -> Self {
        let mut frame = self.frame.clone();
        orthonormalize_into(&mut frame, x, x.norm());
        Self { ambient: self.ambient, frame }
    }

    /// E ∩ x⊥ for x ∈ E.
    pub fn meet_orthogonal(&self, x: &Vector) -> Self {
        let c = self.coords(x);
        let inner = Subspace::span(self.dim(), &[c]).expect("dimensions match").complement();
        Self { ambient: self.ambient, frame: inner.frame.iter().map(|v| self.embed(v)).collect() }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        (x - self.project(x)).norm() <= tol * x.norm().max(1.0)
    }

    /// F ⊂ E, checked on the frame of F.
    pub fn contains_subspace(&self, f: &Subspace, tol: f64) -> bool {
        f.frame.iter().all(|v| self.contains(v, tol))
    }

    /// The image under an orthogonal matrix.
    pub fn rotate(&self, q: &DMatrix<f64>) -> Self {
        Self { ambient: self.ambient, frame: self.frame.iter().map(|v| q * v).collect() }
    }

    /// The d×n matrix with the frame as rows.
    pub fn frame_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.ambient);
        for (r, e) in self.frame.iter().enumerate() {
            m.set_row(r, &e.transpose());
        }
        m
    }
}

pub fn basis(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}
