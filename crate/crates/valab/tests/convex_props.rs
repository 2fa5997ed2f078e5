use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use valab::convex::*;

fn gauss(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

fn random_plane(rng: &mut ChaCha8Rng) -> Subspace {
    Subspace::span(3, &[gauss(rng, 3), gauss(rng, 3)]).unwrap()
}

fn random_polygon(rng: &mut ChaCha8Rng, e: &Subspace) -> Polytope {
    let c = gauss(rng, 3);
    let pts = (0..7).map(|_| &c + e.embed(&gauss(rng, 2))).collect();
    Polytope::from_points(pts).unwrap()
}

fn random_zonotope(rng: &mut ChaCha8Rng, k: usize) -> Zonotope {
    let g = (0..k).map(|_| gauss(rng, 3)).collect();
    Zonotope::new(g, gauss(rng, 3)).unwrap()
}

#[test]
fn lifting_theorem_polytopal() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let e = random_plane(&mut rng);
        let p = random_polygon(&mut rng, &e);
        let q = random_zonotope(&mut rng, 3).to_polytope().unwrap();
        let perp = e.complement();
        let lhs = mixed_area_measure(&[&p, &q]).unwrap().restrict(|u| !perp.contains(u, 1e-9));
        let s1 = surface_area_measure_relative(&p, &e).unwrap();
        let rhs = mixed_spherical_lifting(&e, &[&q], &s1).unwrap().scaled(0.5);
        let d = lhs.max_atom_difference(&rhs);
        assert!(d < 1e-10, "atom mismatch {d:e}");
        assert!(lhs.len() > 4);
    }
}

#[test]
fn triangle_relative_measure() {
    let e = Subspace::coordinate(3, &[0, 1]);
    let h = 3f64.sqrt() / 2.0;
    let t = Polytope::from_points(vec![
        Vector::from_column_slice(&[0.0, 0.0, 0.0]),
        Vector::from_column_slice(&[1.0, 0.0, 0.0]),
        Vector::from_column_slice(&[0.5, h, 0.0]),
    ])
    .unwrap();
    let m = surface_area_measure_relative(&t, &e).unwrap();
    assert_eq!(m.len(), 3);
    for (u, w) in m.atoms() {
        assert!((w - 1.0).abs() < 1e-14);
        assert!(u[2].abs() < 1e-15);
    }
    assert!((m.weight_at(&-basis(3, 1)) - 1.0).abs() < 1e-14);
}

#[test]
fn mixed_volume_symmetry_and_multilinearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let z: Vec<Polytope> = (0..4).map(|_| random_zonotope(&mut rng, 2).to_polytope().unwrap()).collect();
        let v = mixed_volume(&[&z[0], &z[1], &z[2]]).unwrap();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let w = mixed_volume(&[&z[perm[0]], &z[perm[1]], &z[perm[2]]]).unwrap();
            assert!((v - w).abs() < 1e-10 * v.abs().max(1.0));
        }
        let s = z[0].minkowski_sum(&z[3]).unwrap();
        let lhs = mixed_volume(&[&s, &z[1], &z[2]]).unwrap();
        let rhs = v + mixed_volume(&[&z[3], &z[1], &z[2]]).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        let scaled = z[1].scale(2.5).unwrap();
        let hom = mixed_volume(&[&z[0], &scaled, &z[2]]).unwrap();
        assert!((hom - 2.5 * v).abs() < 1e-10 * hom.abs().max(1.0));
    }
}

#[test]
fn mixed_area_measure_multilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5 {
        let p = random_zonotope(&mut rng, 3).to_polytope().unwrap();
        let q1 = random_zonotope(&mut rng, 2).to_polytope().unwrap();
        let q2 = random_zonotope(&mut rng, 2).to_polytope().unwrap();
        let lhs = mixed_area_measure(&[&p, &q1.minkowski_sum(&q2).unwrap()]).unwrap();
        let rhs = mixed_area_measure(&[&p, &q1]).unwrap().plus(&mixed_area_measure(&[&p, &q2]).unwrap());
        assert!(lhs.max_atom_difference(&rhs) < 1e-9);
    }
}

#[test]
fn translation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = random_zonotope(&mut rng, 3).to_polytope().unwrap();
    let q = random_zonotope(&mut rng, 2).to_polytope().unwrap();
    let x = gauss(&mut rng, 3);
    let a = mixed_area_measure(&[&p, &q]).unwrap();
    let b = mixed_area_measure(&[&p.translate(&x), &q]).unwrap();
    assert!(a.max_atom_difference(&b) < 1e-10);
    let v1 = mixed_volume(&[&p, &p, &q]).unwrap();
    let v2 = mixed_volume(&[&p, &p.translate(&x), &q.translate(&-&x)]).unwrap();
    assert!((v1 - v2).abs() < 1e-10 * v1);
}

#[test]
fn zonotope_projection_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let z = random_zonotope(&mut rng, 4);
    let e = random_plane(&mut rng);
    let minors: f64 = {
        let g: Vec<Vector> = z.generators().iter().map(|g| e.coords(g)).collect();
        let mut s = 0.0;
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                s += (g[a][0] * g[b][1] - g[a][1] * g[b][0]).abs();
            }
        }
        s
    };
    let p = z.to_polytope().unwrap().project(&e).unwrap();
    assert!((p.volume() - minors).abs() < 1e-10 * minors);
}

#[test]
fn mixed_volume_in_four_dimensions() {
    let c = Polytope::cube(4);
    assert!((mixed_volume(&[&c, &c, &c, &c]).unwrap() - 1.0).abs() < 1e-12);
    let s: Vec<Polytope> = (0..4).map(|i| Polytope::segment(Vector::zeros(4), basis(4, i)).unwrap()).collect();
    assert!((mixed_volume(&[&s[0], &s[1], &s[2], &s[3]]).unwrap() - 1.0 / 24.0).abs() < 1e-14);
    let sm = mixed_area_measure(&[&c, &c, &c]).unwrap();
    assert_eq!(sm.len(), 8);
    assert!((sm.total_mass() - 8.0).abs() < 1e-12);
}
