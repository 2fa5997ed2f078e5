use std::f64::consts::PI;

use super::hull::hull;
use super::subspace::{Subspace, Vector};
use crate::error::{domain, Error, Result};

/// Merge tolerance for coincident points, relative to the coordinate scale.
pub const MERGE_TOL: f64 = 1e-10;

/// A facet of a polytope relative to its carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeFacet {
    /// Outer unit normal, lying in the carrier.
    pub normal: Vector,
    /// ⟨normal, x⟩ on the facet.
    pub offset: f64,
    /// Indices into the vertex list.
    pub vertices: Vec<usize>,
    /// (dim − 1)-volume.
    pub area: f64,
}

/// A convex polytope given by its extreme points, with the direction space
/// of its affine hull as carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<Vector>,
    carrier: Subspace,
    facets: Vec<PolytopeFacet>,
    volume: f64,
}

fn scale_of(points: &[Vector]) -> f64 {
    points.iter().flat_map(|p| p.iter().map(|x| x.abs())).fold(1.0, f64::max)
}

impl Polytope {
    /// conv(points). Non-extreme and repeated points are discarded.
    pub fn from_points(points: Vec<Vector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(domain!("empty point set"));
        };
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(domain!("points of mixed dimension"));
        }
        let tol = MERGE_TOL * scale_of(&points);
        let mut pts: Vec<Vector> = Vec::with_capacity(points.len());
        for p in points {
            if !pts.iter().any(|q| (q - &p).norm() <= tol) {
                pts.push(p);
            }
        }
        let origin = pts[0].clone();
        let diffs: Vec<Vector> = pts.iter().map(|p| p - &origin).collect();
        let carrier = affine_directions(ambient, &diffs, tol);
        let dim = carrier.dim();
        if dim == 0 {
            return Ok(Self { ambient, vertices: vec![origin], carrier, facets: Vec::new(), volume: 1.0 });
        }
        let local: Vec<Vector> = diffs.iter().map(|p| carrier.coords(p)).collect();
        let h = hull(&local)?;
        let vertices: Vec<Vector> = h.extreme.iter().map(|&k| pts[k].clone()).collect();
        let facets = h
            .facets
            .iter()
            .map(|f| {
                let normal = carrier.embed(&f.normal);
                let offset = f.offset + normal.dot(&origin);
                let verts = h.extreme.iter().enumerate().filter(|(_, k)| f.points.contains(k)).map(|(a, _)| a).collect();
                PolytopeFacet { normal, offset, vertices: verts, area: f.area }
            })
            .collect();
        Ok(Self { ambient, vertices, carrier, facets, volume: h.volume })
    }

    pub fn point(x: Vector) -> Self {
        let n = x.len();
        Self { ambient: n, vertices: vec![x], carrier: Subspace::zero(n), facets: Vec::new(), volume: 1.0 }
    }

    pub fn segment(a: Vector, b: Vector) -> Result<Self> {
        Self::from_points(vec![a, b])
    }

    /// [0,1]^n.
    pub fn cube(n: usize) -> Self {
        let lo = Vector::zeros(n);
        let hi = Vector::from_element(n, 1.0);
        Self::cuboid(&lo, &hi).expect("unit cube")
    }

    /// The axis-parallel box [lo, hi].
    pub fn cuboid(lo: &Vector, hi: &Vector) -> Result<Self> {
        let n = lo.len();
        let pts = (0..1usize << n)
            .map(|m| Vector::from_fn(n, |i, _| if (m >> i) & 1 == 1 { hi[i] } else { lo[i] }))
            .collect();
        Self::from_points(pts)
    }

    /// conv{0, e_1, …, e_n}.
    pub fn standard_simplex(n: usize) -> Self {
        let mut pts = vec![Vector::zeros(n)];
        pts.extend((0..n).map(|i| super::subspace::basis(n, i)));
        Self::from_points(pts).expect("simplex")
    }

    /// Regular m-gon of circumradius r in the 2-plane E, centred at c.
    pub fn regular_polygon(e: &Subspace, c: &Vector, r: f64, m: usize, phase: f64) -> Result<Self> {
        if e.dim() != 2 || m < 3 {
            return Err(domain!("regular polygon needs a 2-plane and m >= 3"));
        }
        let pts = (0..m)
            .map(|k| {
                let a = phase + 2.0 * PI * k as f64 / m as f64;
                c + (&e.frame()[0] * a.cos() + &e.frame()[1] * a.sin()) * r
            })
            .collect();
        Self::from_points(pts)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn facets(&self) -> &[PolytopeFacet] {
        &self.facets
    }

    /// Volume in the carrier (1 for a point).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// n-dimensional volume; 0 unless full-dimensional.
    pub fn ambient_volume(&self) -> f64 {
        if self.dim() == self.ambient {
            self.volume
        } else {
            0.0
        }
    }

    /// Boundary (dim − 1)-volume in the carrier.
    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    pub fn centroid(&self) -> Vector {
        self.vertices.iter().sum::<Vector>() / self.vertices.len() as f64
    }

    fn tol(&self) -> f64 {
        MERGE_TOL * scale_of(&self.vertices)
    }

    /// h_P(u) = max ⟨u, v⟩ over the vertices.
    pub fn support_function(&self, u: &Vector) -> Result<f64> {
        check_unit(u, self.ambient)?;
        Ok(self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// F(P, u).
    pub fn support_set(&self, u: &Vector) -> Result<Polytope> {
        let h = self.support_function(u)?;
        let tol = self.tol();
        let pts: Vec<Vector> = self.vertices.iter().filter(|v| v.dot(u) >= h - tol).cloned().collect();
        if pts.len() == 1 {
            return Ok(Polytope::point(pts[0].clone()));
        }
        Polytope::from_points(pts)
    }

    pub fn translate(&self, x: &Vector) -> Polytope {
        let mut p = self.clone();
        for v in &mut p.vertices {
            *v += x;
        }
        for f in &mut p.facets {
            f.offset += f.normal.dot(x);
        }
        p
    }

    pub fn scale(&self, lambda: f64) -> Result<Polytope> {
        Polytope::from_points(self.vertices.iter().map(|v| v * lambda).collect())
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient != other.ambient {
            return Err(domain!("Minkowski sum of bodies in R^{} and R^{}", self.ambient, other.ambient));
        }
        let pts = self.vertices.iter().flat_map(|a| other.vertices.iter().map(move |b| a + b)).collect();
        Polytope::from_points(pts)
    }

    pub fn sum_all(bodies: &[&Polytope]) -> Result<Polytope> {
        let Some((first, rest)) = bodies.split_first() else {
            return Err(domain!("empty Minkowski sum"));
        };
        rest.iter().try_fold((*first).clone(), |acc, b| acc.minkowski_sum(b))
    }

    /// P|E as a polytope of R^n.
    pub fn project(&self, e: &Subspace) -> Result<Polytope> {
        if e.ambient() != self.ambient {
            return Err(domain!("projection onto a subspace of R^{} from R^{}", e.ambient(), self.ambient));
        }
        Polytope::from_points(self.vertices.iter().map(|v| e.project(v)).collect())
    }

    /// P|E in the frame coordinates of E, a polytope of R^{dim E}.
    pub fn project_coords(&self, e: &Subspace) -> Result<Polytope> {
        Polytope::from_points(self.vertices.iter().map(|v| e.coords(v)).collect())
    }

    /// The frame-coordinate polytope of E lifted back to R^n.
    pub fn embed_from(&self, e: &Subspace) -> Result<Polytope> {
        Polytope::from_points(self.vertices.iter().map(|c| e.embed(c)).collect())
    }

    /// P ∩ {x : ⟨normal, x⟩ = offset}, or None when empty.
    pub fn intersect_hyperplane(&self, normal: &Vector, offset: f64) -> Result<Option<Polytope>> {
        if normal.len() != self.ambient {
            return Err(domain!("hyperplane normal has length {}, expected {}", normal.len(), self.ambient));
        }
        let tol = self.tol() * normal.norm();
        let s: Vec<f64> = self.vertices.iter().map(|v| v.dot(normal) - offset).collect();
        let mut pts: Vec<Vector> = Vec::new();
        for (a, va) in self.vertices.iter().enumerate() {
            if s[a].abs() <= tol {
                pts.push(va.clone());
            }
            for b in a + 1..self.vertices.len() {
                if (s[a] > tol && s[b] < -tol) || (s[a] < -tol && s[b] > tol) {
                    let lam = s[a] / (s[a] - s[b]);
                    pts.push(va + (&self.vertices[b] - va) * lam);
                }
            }
        }
        if pts.is_empty() {
            return Ok(None);
        }
        Polytope::from_points(pts).map(Some)
    }

    /// Intrinsic volume V_k for k ∈ {0, dim−1, dim} or k > dim; V_1 of a
    /// 3-polytope from edge lengths and exterior angles.
    pub fn intrinsic_volume(&self, k: usize) -> Result<f64> {
        let d = self.dim();
        if k > d {
            return Ok(0.0);
        }
        if k == d {
            return Ok(self.volume);
        }
        if k == 0 {
            return Ok(1.0);
        }
        if k + 1 == d {
            return Ok(self.surface_area() / 2.0);
        }
        if d == 3 && k == 1 {
            return Ok(self.mean_width_edges());
        }
        Err(Error::Unsupported(format!("intrinsic volume V_{k} of a {d}-polytope")))
    }

    /// Σ_edges length · (π − dihedral angle)/(2π), for dim 3.
    fn mean_width_edges(&self) -> f64 {
        let mut total = 0.0;
        for (a, f) in self.facets.iter().enumerate() {
            for g in &self.facets[a + 1..] {
                let common: Vec<usize> = f.vertices.iter().copied().filter(|k| g.vertices.contains(k)).collect();
                if common.len() >= 2 {
                    let pts: Vec<&Vector> = common.iter().map(|&k| &self.vertices[k]).collect();
                    let mut len: f64 = 0.0;
                    for p in &pts {
                        for q in &pts {
                            len = len.max((*p - *q).norm());
                        }
                    }
                    let ext = f.normal.dot(&g.normal).clamp(-1.0, 1.0).acos();
                    total += len * ext / (2.0 * PI);
                }
            }
        }
        total
    }
}

fn affine_directions(ambient: usize, diffs: &[Vector], tol: f64) -> Subspace {
    // greedy: always extend by the difference farthest from the current span
    let mut chosen: Vec<Vector> = Vec::new();
    let mut span = Subspace::zero(ambient);
    loop {
        let best = diffs
            .iter()
            .map(|d| (d - span.project(d)).norm())
            .enumerate()
            .fold((0, 0.0), |b, (k, r)| if r > b.1 { (k, r) } else { b });
        if best.1 <= tol || span.dim() == ambient {
            return span;
        }
        chosen.push(diffs[best.0].clone());
        span = span.join(&diffs[best.0]);
    }
}

pub(crate) fn check_unit(u: &Vector, n: usize) -> Result<()> {
    if u.len() != n {
        return Err(domain!("direction of length {} in R^{n}", u.len()));
    }
    if (u.norm() - 1.0).abs() > 1e-9 {
        return Err(domain!("direction must be a unit vector, |u| = {}", u.norm()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::subspace::basis;

    fn v(a: &[f64]) -> Vector {
        Vector::from_column_slice(a)
    }

    #[test]
    fn support_examples() {
        let c = Polytope::cube(3);
        assert_eq!(c.support_function(&basis(3, 0)).unwrap(), 1.0);
        let s = Polytope::segment(Vector::zeros(3), basis(3, 2)).unwrap();
        assert_eq!(s.support_function(&-basis(3, 2)).unwrap(), 0.0);
        let t = Polytope::standard_simplex(3);
        let d = v(&[1.0, 1.0, 1.0]) / 3f64.sqrt();
        assert!((t.support_function(&d).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let f = c.support_set(&basis(3, 0)).unwrap();
        assert_eq!(f.dim(), 2);
        assert!((f.volume() - 1.0).abs() < 1e-14);
        assert_eq!(c.support_set(&d).unwrap().dim(), 0);
        assert!(c.support_function(&v(&[1.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn sections_and_projections() {
        let c = Polytope::cube(3);
        let s = c.intersect_hyperplane(&basis(3, 2), 0.5).unwrap().unwrap();
        assert_eq!(s.dim(), 2);
        assert!((s.volume() - 1.0).abs() < 1e-14);
        assert!(c.intersect_hyperplane(&basis(3, 2), 2.0).unwrap().is_none());
        let t = Polytope::standard_simplex(3);
        let s = t.intersect_hyperplane(&v(&[1.0, 1.0, 1.0]), 0.5).unwrap().unwrap();
        assert!((s.volume() - 3f64.sqrt() / 8.0).abs() < 1e-14);
        let e = Subspace::coordinate(3, &[0, 1]);
        assert!((c.project(&e).unwrap().volume() - 1.0).abs() < 1e-14);
        let seg = Polytope::segment(Vector::zeros(3), basis(3, 2)).unwrap();
        assert_eq!(seg.project(&e).unwrap().dim(), 0);
    }

    #[test]
    fn intrinsic_volumes_of_cube() {
        let c = Polytope::cube(3);
        assert!((c.intrinsic_volume(2).unwrap() - 3.0).abs() < 1e-13);
        assert!((c.intrinsic_volume(1).unwrap() - 3.0).abs() < 1e-13);
        assert_eq!(c.intrinsic_volume(0).unwrap(), 1.0);
        let sq = c.support_set(&basis(3, 2)).unwrap();
        assert!((sq.intrinsic_volume(1).unwrap() - 2.0).abs() < 1e-14);
        let moved = c.translate(&v(&[3.0, -1.0, 2.0]));
        assert!((moved.volume() - 1.0).abs() < 1e-13);
        assert!((moved.support_function(&basis(3, 0)).unwrap() - 4.0).abs() < 1e-14);
    }
}
