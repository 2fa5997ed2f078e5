//! Beneath–beyond convex hull of a full-dimensional point set in R^d.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::subspace::Vector;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Facet {
    /// Outward unit normal.
    pub normal: Vector,
    /// ⟨normal, x⟩ = offset on the facet.
    pub offset: f64,
    /// All input points on the facet.
    pub points: Vec<usize>,
    /// (d−1)-volume.
    pub area: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Hull {
    pub facets: Vec<Facet>,
    pub extreme: Vec<usize>,
    pub volume: f64,
}

struct Simplex {
    verts: Vec<usize>,
    normal: Vector,
    offset: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Unit normal to the hyperplane through d points of R^d, by cofactors.
fn hyperplane(pts: &[&Vector]) -> Option<(Vector, f64)> {
    let d = pts[0].len();
    let m = DMatrix::from_fn(d - 1, d, |r, c| pts[r + 1][c] - pts[0][c]);
    let mut nrm = Vector::zeros(d);
    for i in 0..d {
        let minor = m.clone().remove_column(i);
        let det = if d == 1 { 1.0 } else { minor.determinant() };
        nrm[i] = if i % 2 == 0 { det } else { -det };
    }
    let len = nrm.norm();
    if !(len > 0.0) {
        return None;
    }
    nrm /= len;
    let off = nrm.dot(pts[0]);
    Some((nrm, off))
}

/// (k)-volume of the simplex spanned by k+1 points.
pub(crate) fn simplex_volume(pts: &[&Vector]) -> f64 {
    let k = pts.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let g = DMatrix::from_fn(k, k, |a, b| (pts[a + 1] - pts[0]).dot(&(pts[b + 1] - pts[0])));
    g.determinant().max(0.0).sqrt() / factorial(k)
}

fn scale_of(points: &[Vector]) -> f64 {
    points.iter().flat_map(|p| p.iter().map(|x| x.abs())).fold(1.0, f64::max)
}

/// Indices of d+1 affinely independent points, chosen greedily.
fn initial_simplex(points: &[Vector], tol: f64) -> Option<Vec<usize>> {
    let d = points[0].len();
    let mut chosen = vec![0usize];
    let mut frame: Vec<Vector> = Vec::new();
    while chosen.len() < d + 1 {
        let base = &points[chosen[0]];
        let mut best = (0.0, usize::MAX, None);
        for (k, p) in points.iter().enumerate() {
            let mut w = p - base;
            for _ in 0..2 {
                for e in &frame {
                    let c = e.dot(&w);
                    w.axpy(-c, e, 1.0);
                }
            }
            let nw = w.norm();
            if nw > best.0 {
                best = (nw, k, Some(w));
            }
        }
        if best.0 <= tol {
            return None;
        }
        let w = best.2.unwrap();
        frame.push(&w / best.0);
        chosen.push(best.1);
    }
    Some(chosen)
}

/// Convex hull of points spanning R^d (d ≥ 1).
pub(crate) fn hull(points: &[Vector]) -> Result<Hull> {
    let d = points.first().map(|p| p.len()).unwrap_or(0);
    let tol = 1e-10 * scale_of(points);
    if d == 0 || points.len() < d + 1 {
        return Err(Error::Domain("hull needs at least d+1 points in R^d".into()));
    }
    if d == 1 {
        let (mut lo, mut hi) = (0, 0);
        for (k, p) in points.iter().enumerate() {
            if p[0] < points[lo][0] {
                lo = k;
            }
            if p[0] > points[hi][0] {
                hi = k;
            }
        }
        let len = points[hi][0] - points[lo][0];
        if len <= tol {
            return Err(Error::Domain("points do not span a line".into()));
        }
        let on = |x: f64| (0..points.len()).filter(|&k| (points[k][0] - x).abs() <= tol).collect::<Vec<_>>();
        let facets = vec![
            Facet { normal: Vector::from_element(1, -1.0), offset: -points[lo][0], points: on(points[lo][0]), area: 1.0 },
            Facet { normal: Vector::from_element(1, 1.0), offset: points[hi][0], points: on(points[hi][0]), area: 1.0 },
        ];
        return Ok(Hull { facets, extreme: vec![lo, hi], volume: len });
    }
    let start = initial_simplex(points, tol).ok_or_else(|| Error::Domain("points are not full-dimensional".into()))?;
    let centre: Vector = start.iter().map(|&k| &points[k]).sum::<Vector>() / (d + 1) as f64;
    let make = |verts: Vec<usize>| -> Option<Simplex> {
        let pts: Vec<&Vector> = verts.iter().map(|&k| &points[k]).collect();
        let (mut normal, mut offset) = hyperplane(&pts)?;
        if normal.dot(&centre) > offset {
            normal = -normal;
            offset = -offset;
        }
        Some(Simplex { verts, normal, offset })
    };
    let mut faces: Vec<Simplex> = (0..=d)
        .map(|skip| make(start.iter().enumerate().filter(|&(a, _)| a != skip).map(|(_, &k)| k).collect()).unwrap())
        .collect();

    let mut order: Vec<usize> = (0..points.len()).filter(|k| !start.contains(k)).collect();
    let dist = |k: usize| (&points[k] - &centre).norm();
    order.sort_by(|&a, &b| dist(b).total_cmp(&dist(a)));
    for p in order {
        let x = &points[p];
        let visible: Vec<bool> = faces.iter().map(|f| f.normal.dot(x) - f.offset > tol).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            for skip in 0..d {
                let mut r: Vec<usize> = f.verts.iter().enumerate().filter(|&(a, _)| a != skip).map(|(_, &k)| k).collect();
                r.sort_unstable();
                *ridges.entry(r).or_insert(0) += 1;
            }
        }
        let mut next: Vec<Simplex> = faces.into_iter().zip(visible).filter(|(_, v)| !v).map(|(f, _)| f).collect();
        for (r, count) in ridges {
            if count == 1 {
                let mut verts = r;
                verts.push(p);
                if let Some(s) = make(verts) {
                    next.push(s);
                }
            }
        }
        faces = next;
    }

    let mut volume = 0.0;
    let mut facets: Vec<Facet> = Vec::new();
    for s in &faces {
        let pts: Vec<&Vector> = s.verts.iter().map(|&k| &points[k]).collect();
        let area = simplex_volume(&pts);
        volume += area * (s.offset - s.normal.dot(&centre)) / d as f64;
        match facets.iter_mut().find(|f| f.normal.dot(&s.normal) > 1.0 - 1e-9 && (f.offset - s.offset).abs() <= 10.0 * tol) {
            Some(f) => f.area += area,
            None => facets.push(Facet { normal: s.normal.clone(), offset: s.offset, points: Vec::new(), area }),
        }
    }
    for f in &mut facets {
        f.points = (0..points.len()).filter(|&k| (f.normal.dot(&points[k]) - f.offset).abs() <= 10.0 * tol).collect();
    }
    let mut on_hull: Vec<usize> = faces.iter().flat_map(|s| s.verts.iter().copied()).collect();
    on_hull.sort_unstable();
    on_hull.dedup();
    let extreme = on_hull
        .into_iter()
        .filter(|&k| {
            let normals: Vec<&Vector> = facets.iter().filter(|f| f.points.contains(&k)).map(|f| &f.normal).collect();
            let m = DMatrix::from_fn(d, normals.len(), |r, c| normals[c][r]);
            m.rank(1e-9) == d
        })
        .collect();
    Ok(Hull { facets, extreme, volume })
}
