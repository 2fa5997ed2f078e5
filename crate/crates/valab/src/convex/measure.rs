use serde::Serialize;

use super::polytope::{Polytope, MERGE_TOL};
use super::subspace::{Subspace, Vector};
use crate::error::{domain, Error, Result};

/// Highest dimension for hulls, volumes and mixed volumes.
pub const MAX_DIM: usize = 4;

/// A finite signed measure on S^{n−1}: a list of weighted atoms with
/// pairwise distinct directions.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DiscreteSphericalMeasure {
    ambient: usize,
    atoms: Vec<(Vec<f64>, f64)>,
}

impl DiscreteSphericalMeasure {
    pub fn new(ambient: usize) -> Self {
        Self { ambient, atoms: Vec::new() }
    }

    /// δ_u.
    pub fn dirac(u: &Vector) -> Self {
        let mut m = Self::new(u.len());
        m.add_atom(u, 1.0);
        m
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Vector, f64)> + '_ {
        self.atoms.iter().map(|(u, w)| (Vector::from_column_slice(u), *w))
    }

    fn find(&self, u: &Vector) -> Option<usize> {
        self.atoms.iter().position(|(a, _)| a.iter().zip(u.iter()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() <= MERGE_TOL)
    }

    /// Adds w·δ_u, merging with an existing atom within the merge tolerance.
    pub fn add_atom(&mut self, u: &Vector, w: f64) {
        match self.find(u) {
            Some(k) => self.atoms[k].1 += w,
            None => self.atoms.push((u.iter().copied().collect(), w)),
        }
    }

    pub fn weight_at(&self, u: &Vector) -> f64 {
        self.find(u).map(|k| self.atoms[k].1).unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// ∫ f dμ.
    pub fn integrate<F: Fn(&Vector) -> f64>(&self, f: F) -> f64 {
        self.atoms().map(|(u, w)| f(&u) * w).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { ambient: self.ambient, atoms: self.atoms.iter().map(|(u, w)| (u.clone(), c * w)).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (u, w) in other.atoms() {
            m.add_atom(&u, w);
        }
        m
    }

    /// The restriction to {u : keep(u)}.
    pub fn restrict<F: Fn(&Vector) -> bool>(&self, keep: F) -> Self {
        let atoms = self.atoms.iter().filter(|(u, _)| keep(&Vector::from_column_slice(u))).cloned().collect();
        Self { ambient: self.ambient, atoms }
    }

    /// Drops atoms with |w| ≤ tol.
    pub fn pruned(&self, tol: f64) -> Self {
        Self { ambient: self.ambient, atoms: self.atoms.iter().filter(|a| a.1.abs() > tol).cloned().collect() }
    }

    /// The pushforward under the isometric embedding of a subspace with
    /// frame coordinates.
    pub fn embed(&self, e: &Subspace) -> Self {
        let mut m = Self::new(e.ambient());
        for (u, w) in self.atoms() {
            m.add_atom(&e.embed(&u), w);
        }
        m
    }

    /// max over directions of |μ({u}) − ν({u})|; an atom missing on one
    /// side counts as weight 0.
    pub fn max_atom_difference(&self, other: &Self) -> f64 {
        let one = self.atoms().map(|(u, w)| (w - other.weight_at(&u)).abs());
        let two = other.atoms().filter(|(u, _)| self.find(u).is_none()).map(|(_, w)| w.abs());
        one.chain(two).fold(0.0, f64::max)
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::Unsupported(format!("dimension {n} is above the cap {MAX_DIM}")));
    }
    Ok(())
}

/// V(K_1, …, K_n) for n polytopes of R^n, by inclusion–exclusion over
/// Minkowski sums.
pub fn mixed_volume(bodies: &[&Polytope]) -> Result<f64> {
    let n = bodies.len();
    if n == 0 {
        return Err(domain!("mixed volume of no bodies"));
    }
    check_cap(n)?;
    if bodies.iter().any(|b| b.ambient() != n) {
        return Err(domain!("mixed volume in R^{n} needs {n} bodies of R^{n}"));
    }
    // vanishes unless the dimensions can fill R^n
    if bodies.iter().any(|b| b.dim() == 0) || bodies.iter().map(|b| b.dim()).sum::<usize>() < n {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for mask in 1usize..1 << n {
        let sel: Vec<&Polytope> = (0..n).filter(|k| (mask >> k) & 1 == 1).map(|k| bodies[k]).collect();
        let sign = if (n - sel.len()) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * Polytope::sum_all(&sel)?.ambient_volume();
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    Ok(total / fact)
}

/// Mixed volume relative to E of bodies lying in (a translate of) E.
pub fn mixed_volume_in(e: &Subspace, bodies: &[&Polytope]) -> Result<f64> {
    if bodies.len() != e.dim() {
        return Err(domain!("mixed volume in a {}-space needs {} bodies", e.dim(), e.dim()));
    }
    let local: Vec<Polytope> = bodies.iter().map(|b| b.project_coords(e)).collect::<Result<_>>()?;
    mixed_volume(&local.iter().collect::<Vec<_>>())
}

/// S(P_1, …, P_{n−1}, ·): atoms at facet normals u of ΣP_j with weight
/// V^{u⊥}(F(P_1,u), …, F(P_{n−1},u)).
pub fn mixed_area_measure(bodies: &[&Polytope]) -> Result<DiscreteSphericalMeasure> {
    let n = bodies.len() + 1;
    check_cap(n)?;
    if bodies.iter().any(|b| b.ambient() != n) {
        return Err(domain!("mixed area measure in R^{n} needs {} bodies of R^{n}", n - 1));
    }
    let sum = Polytope::sum_all(bodies)?;
    let normals: Vec<Vector> = if sum.dim() == n {
        sum.facets().iter().map(|f| f.normal.clone()).collect()
    } else if sum.dim() + 1 == n {
        let w = sum.carrier().complement().frame()[0].clone();
        vec![-&w, w]
    } else {
        Vec::new()
    };
    let mut m = DiscreteSphericalMeasure::new(n);
    for u in normals {
        let perp = Subspace::span(n, &[u.clone()])?.complement();
        let faces: Vec<Polytope> = bodies.iter().map(|b| b.support_set(&u)).collect::<Result<_>>()?;
        if faces.iter().any(|f| f.dim() == 0) || faces.iter().map(|f| f.dim()).sum::<usize>() < n - 1 {
            continue;
        }
        let w = mixed_volume_in(&perp, &faces.iter().collect::<Vec<_>>())?;
        m.add_atom(&u, w);
    }
    Ok(m)
}

/// The mixed area measure relative to W of the projections bodies|W, as a
/// measure on S^{n−1} supported in W. Needs dim W − 1 bodies.
pub fn mixed_area_measure_in(w: &Subspace, bodies: &[&Polytope]) -> Result<DiscreteSphericalMeasure> {
    if bodies.len() + 1 != w.dim() {
        return Err(domain!("mixed area measure in a {}-space needs {} bodies", w.dim(), w.dim().saturating_sub(1)));
    }
    let local: Vec<Polytope> = bodies.iter().map(|b| b.project_coords(w)).collect::<Result<_>>()?;
    Ok(mixed_area_measure(&local.iter().collect::<Vec<_>>())?.embed(w))
}

/// S^E_{dim E−1}(P, ·): facet normals of P within E weighted by facet volume.
pub fn surface_area_measure_relative(p: &Polytope, e: &Subspace) -> Result<DiscreteSphericalMeasure> {
    if p.dim() != e.dim() || !e.contains_subspace(p.carrier(), 1e-9) {
        return Err(domain!("polytope of dimension {} is not full-dimensional in a {}-space", p.dim(), e.dim()));
    }
    let mut m = DiscreteSphericalMeasure::new(p.ambient());
    for f in p.facets() {
        m.add_atom(&f.normal, f.area);
    }
    Ok(m)
}

/// S_{n−1}(P, ·) for a polytope of R^n: facet normals weighted by facet
/// volume, or ±ν with twice-counted volume when P lies in a hyperplane ν⊥.
pub fn surface_area_measure(p: &Polytope) -> Result<DiscreteSphericalMeasure> {
    let n = p.ambient();
    check_cap(n)?;
    let mut m = DiscreteSphericalMeasure::new(n);
    if p.dim() == n {
        for f in p.facets() {
            m.add_atom(&f.normal, f.area);
        }
    } else if p.dim() + 1 == n {
        let w = p.carrier().complement().frame()[0].clone();
        m.add_atom(&w, p.volume());
        m.add_atom(&-w, p.volume());
    }
    Ok(m)
}

/// The C-mixed spherical lifting of a measure μ on S(E): each atom w·δ_u
/// becomes w times S^{E⊥∨u}(C|(E⊥∨u), ·) restricted to the open half-sphere
/// {v : pr_E v = u}. Needs n − dim E reference bodies.
pub fn mixed_spherical_lifting(e: &Subspace, refs: &[&Polytope], mu: &DiscreteSphericalMeasure) -> Result<DiscreteSphericalMeasure> {
    let n = e.ambient();
    if refs.len() + e.dim() != n {
        return Err(domain!("lifting from a {}-space of R^{n} needs {} reference bodies", e.dim(), n - e.dim()));
    }
    let perp = e.complement();
    let mut out = DiscreteSphericalMeasure::new(n);
    for (u, w) in mu.atoms() {
        let wspace = perp.join(&u);
        let nu = mixed_area_measure_in(&wspace, refs)?;
        for (v, x) in nu.atoms() {
            if v.dot(&u) > MERGE_TOL {
                out.add_atom(&v, w * x);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::subspace::basis;

    #[test]
    fn mixed_volume_examples() {
        let c = Polytope::cube(3);
        assert!((mixed_volume(&[&c, &c, &c]).unwrap() - 1.0).abs() < 1e-13);
        let s: Vec<Polytope> = (0..3).map(|i| Polytope::segment(Vector::zeros(3), basis(3, i)).unwrap()).collect();
        assert!((mixed_volume(&[&s[0], &s[1], &s[2]]).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        // reduction: square K in span(e1,e2), segment C along e3
        let k = c.support_set(&basis(3, 2)).unwrap();
        let v = mixed_volume(&[&k, &k, &s[2]]).unwrap();
        assert!((v - 1.0 / 3.0 * 1.0 * 1.0).abs() < 1e-14);
        let big = Polytope::cube(5);
        assert!(matches!(mixed_volume(&[&big, &big, &big, &big, &big]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn square_and_segment() {
        let sq = Polytope::cube(3).support_set(&basis(3, 2)).unwrap();
        let seg = Polytope::segment(Vector::zeros(3), basis(3, 2)).unwrap();
        let m = mixed_area_measure(&[&sq, &seg]).unwrap().pruned(1e-14);
        assert_eq!(m.len(), 4);
        for i in 0..2 {
            assert!((m.weight_at(&basis(3, i)) - 0.5).abs() < 1e-14);
            assert!((m.weight_at(&-basis(3, i)) - 0.5).abs() < 1e-14);
        }
        assert_eq!(m.weight_at(&basis(3, 2)), 0.0);
        assert!((m.total_mass() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn diagonal_is_surface_measure() {
        let c = Polytope::cube(3);
        let m = mixed_area_measure(&[&c, &c]).unwrap();
        assert_eq!(m.len(), 6);
        assert!((m.total_mass() - 6.0).abs() < 1e-13);
        let e = Subspace::coordinate(3, &[0, 1]);
        let sq = c.support_set(&basis(3, 2)).unwrap();
        let r = surface_area_measure_relative(&sq, &e).unwrap();
        assert_eq!(r.len(), 4);
        assert!((r.total_mass() - 4.0).abs() < 1e-14);
        assert!(surface_area_measure_relative(&c, &e).is_err());
        let s = surface_area_measure(&c).unwrap();
        assert!(s.max_atom_difference(&m) < 1e-13);
        let flat = surface_area_measure(&sq).unwrap();
        assert_eq!(flat.len(), 2);
        assert!((flat.total_mass() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn measure_bookkeeping() {
        let mut m = DiscreteSphericalMeasure::new(2);
        m.add_atom(&basis(2, 0), 1.0);
        m.add_atom(&(basis(2, 0) + Vector::from_element(2, 1e-12)), 2.0);
        assert_eq!(m.len(), 1);
        assert_eq!(m.weight_at(&basis(2, 0)), 3.0);
        let d = DiscreteSphericalMeasure::dirac(&basis(2, 1));
        assert_eq!(m.max_atom_difference(&d), 3.0);
        assert_eq!(m.plus(&d).total_mass(), 4.0);
    }
}
