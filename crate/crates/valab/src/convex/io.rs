//! JSON input for bodies.
//!
//! A body is either `{"vertices": [[x, y, z], ...]}` (a V-polytope) or
//! `{"generators": [[...], ...], "center": [...]}` (a zonotope; `center`
//! defaults to the origin).

use serde::Deserialize;

use super::polytope::Polytope;
use super::subspace::Vector;
use super::zonotope::Zonotope;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum BodyJson {
    Vertices { vertices: Vec<Vec<f64>> },
    Generators { generators: Vec<Vec<f64>>, center: Option<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Polytope(Polytope),
    Zonotope(Zonotope),
}

impl Body {
    pub fn to_polytope(&self) -> Result<Polytope> {
        match self {
            Body::Polytope(p) => Ok(p.clone()),
            Body::Zonotope(z) => z.to_polytope(),
        }
    }
}

fn vec_of(v: &[f64]) -> Vector {
    Vector::from_column_slice(v)
}

pub fn parse_body(text: &str) -> Result<Body> {
    let raw: BodyJson = serde_json::from_str(text).map_err(|e| domain!("body JSON: {e}"))?;
    match raw {
        BodyJson::Vertices { vertices } => Ok(Body::Polytope(Polytope::from_points(vertices.iter().map(|v| vec_of(v)).collect())?)),
        BodyJson::Generators { generators, center } => {
            let n = center.as_ref().map(|c| c.len()).or_else(|| generators.first().map(|g| g.len())).ok_or_else(|| domain!("zonotope without generators or center"))?;
            let c = center.map(|c| vec_of(&c)).unwrap_or_else(|| Vector::zeros(n));
            Ok(Body::Zonotope(Zonotope::new(generators.iter().map(|g| vec_of(g)).collect(), c)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_schemas() {
        let p = parse_body(r#"{"vertices": [[0,0],[1,0],[0,1],[0.2,0.2]]}"#).unwrap();
        assert!((p.to_polytope().unwrap().volume() - 0.5).abs() < 1e-15);
        let z = parse_body(r#"{"generators": [[1,0],[0,2]], "center": [5,5]}"#).unwrap();
        let Body::Zonotope(z) = z else { panic!() };
        assert_eq!(z.volume(), 2.0);
        assert!(parse_body(r#"{"points": []}"#).is_err());
        assert!(parse_body(r#"{"generators": [[1,0],[0,1,2]]}"#).is_err());
    }
}
