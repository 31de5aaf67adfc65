//! Brute-force search for degenerate faces over small extensions.

use rayon::prelude::*;
use serde::Serialize;

use super::ext::ExtField;
use super::field::FqElem;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::polytope::NewtonGeometry;

/// Outcome of the search. `NondegenerateUpTo` is not a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    DegenerateWitness {
        /// Active facet indices of the face.
        face: Vec<usize>,
        /// Point of `(F_{q^m}^×)^n` as element indices.
        point: Vec<u64>,
        m: usize,
    },
    NondegenerateUpTo(usize),
}

impl Verdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Verdict::DegenerateWitness { .. })
    }
}

/// For each face of `Δ` avoiding the origin, looks for a common zero of the
/// `E_i f_σ = x_i ∂f_σ/∂x_i` on `(F_{q^m}^×)^n`, `m = 1..=m_max`.
pub fn is_nondegenerate(f: &LaurentPoly<FqElem>, g: &NewtonGeometry, m_max: usize, cap: u128) -> Result<Verdict> {
    let n = f.n();
    let faces = g.faces_not_containing_origin();
    let Some(field) = f.terms().next().map(|(_, c)| c.field.clone()) else {
        return Ok(Verdict::NondegenerateUpTo(m_max));
    };
    for m in 1..=m_max {
        let ext = ExtField::new(&field, m)?;
        let units = ext.order();
        let total = (units as u128).pow(n as u32);
        if total > cap {
            return Err(Error::EnumerationCap { points: total, cap });
        }
        for face in &faces {
            let fs = f.face_restrict(face)?;
            let parts: Vec<Vec<(Vec<i64>, u32)>> = (1..=n)
                .map(|i| {
                    fs.log_derivative(i)
                        .expect("coordinate in range")
                        .terms()
                        .map(|(e, c)| (e.0.clone(), ext.embed(c)))
                        .filter(|(_, c)| *c != 0)
                        .collect()
                })
                .collect();
            let hit = (0..total).into_par_iter().find_first(|&idx| {
                let x = point(idx, n, units);
                parts.iter().all(|terms| eval(&ext, terms, &x) == 0)
            });
            if let Some(idx) = hit {
                return Ok(Verdict::DegenerateWitness {
                    face: face.active_facets.clone(),
                    point: point(idx, n, units).iter().map(|&v| v as u64).collect(),
                    m,
                });
            }
        }
    }
    Ok(Verdict::NondegenerateUpTo(m_max))
}

/// Torus point number `idx`, lexicographic over nonzero element indices.
fn point(mut idx: u128, n: usize, units: u64) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let v = (idx % units as u128) as u32 + 1;
            idx /= units as u128;
            v
        })
        .collect()
}

fn eval(ext: &ExtField, terms: &[(Vec<i64>, u32)], x: &[u32]) -> u32 {
    let mut acc = 0u32;
    for (e, c) in terms {
        let mut v = *c;
        for (xi, &ei) in x.iter().zip(e) {
            if ei != 0 {
                v = ext.mul(v, ext.pow_nonzero(*xi, ei));
            }
        }
        acc = ext.add(acc, v);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::field::make_field;
    use super::*;
    use crate::laurent::parse_laurent;
    use crate::polytope::build_geometry;

    fn verdict(p: u64, text: &str, n: usize, m_max: usize) -> Verdict {
        let fld = make_field(p, 1).unwrap();
        let f = parse_laurent(text, n, &fld).unwrap();
        let g = build_geometry(&f.support()).unwrap();
        is_nondegenerate(&f, &g, m_max, 10_000_000).unwrap()
    }

    #[test]
    fn characteristic_two_square_is_degenerate() {
        assert_eq!(verdict(2, "x1^2", 1, 2), Verdict::DegenerateWitness { face: vec![1], point: vec![1], m: 1 });
    }

    #[test]
    fn monomial_faces_are_fine() {
        assert_eq!(verdict(3, "x1 + x1^-1", 1, 2), Verdict::NondegenerateUpTo(2));
        assert_eq!(verdict(7, "x1 + x2 + x1^-1*x2^-1", 2, 2), Verdict::NondegenerateUpTo(2));
    }

    #[test]
    fn degenerate_edge_found() {
        // (x1 + x2)^2 on the edge of the simplex: both log-derivatives vanish at x2 = -x1.
        let v = verdict(5, "x1^2 + 2*x1*x2 + x2^2", 2, 1);
        assert!(v.is_degenerate());
    }
}
