//! Lattice and convex geometry of the Newton polyhedron `Δ(f)`: facets,
//! the cone `δ`, the weight function and its denominator `M`, faces,
//! volumes, and the semigroup combinatorics behind the cone algebra.

pub mod linalg;
mod semigroup;
mod volume;

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::ExponentVector;
use crate::{fmt_q, Q};
use linalg::{dot, nullspace, rank, to_q};

pub use semigroup::{
    dickson_minimal, semigroup_generators, toric_relations, weight_additive_decompose, Binomial,
    ToricRelations,
};
pub use volume::{is_commode, restricted_volumes, v_a, CommodeReport};

/// A facet inequality `<normal, x> <= offset` with `offset` in `{0, 1}`.
/// Normals vanish off the pivot coordinates of the linear span of `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Facet {
    pub fn through_origin(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn eval(&self, u: &[i64]) -> Q {
        dot(&self.normal, u)
    }
}

/// A face of `Δ`, identified by the set of facets on which it is tight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub dim: usize,
    pub active_facets: Vec<usize>,
    pub vertices: Vec<ExponentVector>,
    /// Exponents of the polynomial's support lying on the face.
    pub support_points: Vec<ExponentVector>,
    pub contains_origin: bool,
}

#[derive(Debug, Clone)]
pub struct NewtonGeometry {
    pub n: usize,
    pub dim: usize,
    /// Nonzero exponents of the support, lexicographically sorted.
    pub generators: Vec<ExponentVector>,
    /// The support as given (may contain the origin).
    pub support: Vec<ExponentVector>,
    pub vertices: Vec<ExponentVector>,
    pub facets: Vec<Facet>,
    /// Weight denominator: `M * w(u)` is an integer on `δ ∩ Z^n`.
    pub m: i64,
    /// Faces keyed by active facet set; `Δ` itself has the empty key.
    pub faces: Vec<FaceDescriptor>,
    span_eqs: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    bbox: (Vec<i64>, Vec<i64>),
    semigroup: Vec<ExponentVector>,
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Subsets of `items` in order of size, then lexicographic.
pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=items.len() {
        for c in combinations(items.len(), k) {
            out.push(c.iter().map(|&i| items[i]).collect());
        }
    }
    out
}

fn affine_rank(points: &[&ExponentVector], n: usize) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Q>> = points[1..].iter().map(|p| to_q(&p.sub(points[0]))).collect();
    rank(&rows, n)
}

/// Builds `Δ(f)` = conv(support ∪ {0}) with exact facet data.
pub fn build_geometry(support: &[ExponentVector]) -> Result<NewtonGeometry> {
    let n = support.first().map(|e| e.dim()).ok_or(Error::DegenerateGeometry)?;
    let mut generators: Vec<ExponentVector> = support.iter().filter(|e| !e.is_zero()).cloned().collect();
    generators.sort();
    generators.dedup();
    if generators.is_empty() {
        return Err(Error::DegenerateGeometry);
    }
    let grows: Vec<Vec<Q>> = generators.iter().map(|g| to_q(g)).collect();
    let (_, pivots) = linalg::rref(&grows, n);
    let dim = pivots.len();
    let span_eqs = nullspace(&grows, n);

    let mut points = vec![ExponentVector::zero(n)];
    points.extend(generators.iter().cloned());
    let proj = |x: &ExponentVector| -> Vec<i64> { pivots.iter().map(|&i| x[i]).collect() };
    let proj_pts: Vec<Vec<i64>> = points.iter().map(proj).collect();

    let mut facet_map: BTreeMap<(Vec<Q>, Q), ()> = BTreeMap::new();
    for combo in combinations(points.len(), dim) {
        let rows: Vec<Vec<Q>> = combo
            .iter()
            .map(|&i| {
                let mut r = to_q(&proj_pts[i]);
                r.push(Q::from_integer(-1));
                r
            })
            .collect();
        let ns = nullspace(&rows, dim + 1);
        if ns.len() != 1 {
            continue;
        }
        let mut a: Vec<Q> = ns[0][..dim].to_vec();
        let mut b = ns[0][dim];
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        let side: Vec<Q> = proj_pts.iter().map(|x| dot(&a, x) - b).collect();
        if side.iter().all(|s| !s.is_positive()) {
        } else if side.iter().all(|s| !s.is_negative()) {
            a = a.iter().map(|x| -x).collect();
            b = -b;
        } else {
            continue;
        }
        let key = if b.is_zero() {
            (linalg::primitive(&a), Q::zero())
        } else {
            (a.iter().map(|x| x / b).collect(), Q::from_integer(1))
        };
        facet_map.insert(key, ());
    }
    let facets: Vec<Facet> = facet_map
        .into_keys()
        .map(|(a, offset)| {
            let mut normal = vec![Q::zero(); n];
            for (k, &i) in pivots.iter().enumerate() {
                normal[i] = a[k];
            }
            Facet { normal, offset }
        })
        .collect();

    let tight = |x: &ExponentVector| -> Vec<usize> {
        facets.iter().enumerate().filter(|(_, f)| f.eval(x) == f.offset).map(|(i, _)| i).collect()
    };
    let mut vertices: Vec<ExponentVector> = points
        .iter()
        .filter(|x| {
            let rows: Vec<Vec<Q>> = tight(x).iter().map(|&i| facets[i].normal.clone()).collect();
            rank(&rows, n) == dim
        })
        .cloned()
        .collect();
    vertices.sort();

    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for v in &vertices {
        for i in 0..n {
            lo[i] = lo[i].min(v[i]);
            hi[i] = hi[i].max(v[i]);
        }
    }

    let mut g = NewtonGeometry {
        n,
        dim,
        generators,
        support: support.to_vec(),
        vertices,
        facets,
        m: 1,
        faces: Vec::new(),
        span_eqs,
        pivots,
        bbox: (lo, hi),
        semigroup: Vec::new(),
    };
    g.faces = g.enumerate_faces();
    g.semigroup = semigroup::zonotope_points(&g);
    g.m = g
        .semigroup
        .iter()
        .map(|s| *g.weight(s).expect("semigroup points lie in the cone").denom())
        .fold(1, |acc, d| acc.lcm(&d));
    Ok(g)
}

impl NewtonGeometry {
    /// Geometry of the zero polynomial: `Δ = δ = {0}`.
    pub fn point(n: usize) -> Self {
        let origin = ExponentVector::zero(n);
        NewtonGeometry {
            n,
            dim: 0,
            generators: Vec::new(),
            support: Vec::new(),
            vertices: vec![origin.clone()],
            facets: Vec::new(),
            m: 1,
            faces: vec![FaceDescriptor {
                dim: 0,
                active_facets: Vec::new(),
                vertices: vec![origin.clone()],
                support_points: Vec::new(),
                contains_origin: true,
            }],
            span_eqs: (0..n).map(|i| to_q(&ExponentVector::unit(n, i))).collect(),
            pivots: Vec::new(),
            bbox: (vec![0; n], vec![0; n]),
            semigroup: vec![origin],
        }
    }

    /// Geometry for an arbitrary support, falling back to [`Self::point`]
    /// when only the origin (or nothing) is present.
    pub fn for_support(n: usize, support: &[ExponentVector]) -> Result<Self> {
        if support.iter().all(|e| e.is_zero()) {
            let mut g = Self::point(n);
            g.support = support.to_vec();
            return Ok(g);
        }
        build_geometry(support)
    }

    pub fn in_span(&self, u: &[i64]) -> bool {
        self.span_eqs.iter().all(|e| dot(e, u).is_zero())
    }

    pub fn in_cone(&self, u: &[i64]) -> bool {
        self.in_span(u) && self.facets.iter().filter(|f| f.through_origin()).all(|f| !f.eval(u).is_positive())
    }

    /// Gauge `w(u) = inf{c >= 0 : u ∈ cΔ}`, as the maximum over facets
    /// not through the origin.
    pub fn weight(&self, u: &[i64]) -> Result<Q> {
        if u.len() != self.n || !self.in_cone(u) {
            return Err(Error::OutsideCone);
        }
        Ok(self
            .facets
            .iter()
            .filter(|f| !f.through_origin())
            .map(|f| f.eval(u))
            .fold(Q::zero(), |acc, x| if x > acc { x } else { acc }))
    }

    /// Lattice points of `δ` with `w(u) <= cutoff`, sorted by weight then lex.
    pub fn cone_points(&self, cutoff: Q) -> Vec<(ExponentVector, Q)> {
        if cutoff.is_negative() {
            return Vec::new();
        }
        let lo: Vec<i64> = self.bbox.0.iter().map(|&x| (cutoff * Q::from_integer(x)).floor().to_integer()).collect();
        let hi: Vec<i64> = self.bbox.1.iter().map(|&x| (cutoff * Q::from_integer(x)).ceil().to_integer()).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if let Ok(w) = self.weight(&cur) {
                if w <= cutoff {
                    out.push((ExponentVector(cur.clone()), w));
                }
            }
            let mut i = 0;
            loop {
                if i == self.n {
                    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
                    return out;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    /// Smallest weight attained on `δ ∩ Z^n` strictly above `cutoff`;
    /// `None` when the cone is `{0}`.
    pub fn next_weight(&self, cutoff: Q) -> Option<Q> {
        if self.generators.is_empty() {
            return None;
        }
        self.cone_points(cutoff + Q::from_integer(1)).into_iter().map(|(_, w)| w).find(|w| *w > cutoff)
    }

    /// The finite set `S` of lattice points `sum r_j w_j`, `0 <= r_j <= 1`.
    pub fn semigroup(&self) -> &[ExponentVector] {
        &self.semigroup
    }

    pub(crate) fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn on_face(&self, active: &[usize], x: &ExponentVector) -> bool {
        active.iter().all(|&i| self.facets[i].eval(x) == self.facets[i].offset)
    }

    fn make_face(&self, active: Vec<usize>) -> FaceDescriptor {
        let vertices: Vec<ExponentVector> = self.vertices.iter().filter(|v| self.on_face(&active, v)).cloned().collect();
        let refs: Vec<&ExponentVector> = vertices.iter().collect();
        let dim = affine_rank(&refs, self.n);
        let support_points = self.support.iter().filter(|x| self.on_face(&active, x)).cloned().collect();
        let contains_origin = active.iter().all(|&i| self.facets[i].through_origin());
        FaceDescriptor { dim, active_facets: active, vertices, support_points, contains_origin }
    }

    fn closure(&self, verts: &[ExponentVector]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| verts.iter().all(|v| self.facets[i].eval(v) == self.facets[i].offset)).collect()
    }

    fn enumerate_faces(&self) -> Vec<FaceDescriptor> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = Vec::new();
        seen.insert(Vec::new());
        for i in 0..self.facets.len() {
            let key = self.closure(&self.make_face(vec![i]).vertices);
            if seen.insert(key.clone()) {
                queue.push(key);
            }
        }
        while let Some(key) = queue.pop() {
            let face = self.make_face(key.clone());
            for i in 0..self.facets.len() {
                if key.contains(&i) {
                    continue;
                }
                let verts: Vec<ExponentVector> =
                    face.vertices.iter().filter(|v| self.facets[i].eval(v) == self.facets[i].offset).cloned().collect();
                if verts.is_empty() {
                    continue;
                }
                let sub = self.closure(&verts);
                if seen.insert(sub.clone()) {
                    queue.push(sub);
                }
            }
        }
        let mut faces: Vec<FaceDescriptor> = seen.into_iter().map(|k| self.make_face(k)).collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        faces
    }

    /// Faces on which the origin does not lie (all of them proper).
    pub fn faces_not_containing_origin(&self) -> Vec<FaceDescriptor> {
        self.faces.iter().filter(|f| !f.contains_origin).cloned().collect()
    }

    /// `n! Vol(Δ)`, by pulling triangulation of the face lattice.
    pub fn normalized_volume(&self) -> Result<i64> {
        if self.dim < self.n {
            return Err(Error::LowerDimensional { dim: self.dim, n: self.n });
        }
        Ok(volume::normalized_volume_full(self))
    }

    pub fn report(&self) -> GeometryReport {
        GeometryReport {
            n: self.n,
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.0.clone()).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetJson { normal: f.normal.iter().map(fmt_q).collect(), offset: fmt_q(&f.offset) })
                .collect(),
            m: self.m,
            volume: self.normalized_volume().ok(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceJson {
                    dim: f.dim,
                    active_facets: f.active_facets.clone(),
                    vertices: f.vertices.iter().map(|v| v.0.clone()).collect(),
                    contains_origin: f.contains_origin,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceJson {
    pub dim: usize,
    pub active_facets: Vec<usize>,
    pub vertices: Vec<Vec<i64>>,
    pub contains_origin: bool,
}

/// JSON geometry report.
#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub n: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<FacetJson>,
    #[serde(rename = "M")]
    pub m: i64,
    pub volume: Option<i64>,
    pub faces: Vec<FaceJson>,
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    fn geometries() -> Vec<NewtonGeometry> {
        let sets: [&[&[i64]]; 5] = [
            &[&[1, 0], &[0, 1], &[-1, -1]],
            &[&[2, 0], &[0, 3]],
            &[&[1, 0], &[-1, 0], &[0, 2]],
            &[&[1, 1], &[2, 2]],
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        ];
        sets.iter()
            .map(|pts| build_geometry(&pts.iter().map(|p| ExponentVector(p.to_vec())).collect::<Vec<_>>()).unwrap())
            .collect()
    }

    /// A random nonnegative integer combination of the support.
    fn cone_vector(g: &NewtonGeometry, coeffs: &[u8]) -> Vec<i64> {
        let mut u = vec![0i64; g.n];
        for (k, e) in g.support.iter().enumerate() {
            let c = coeffs[k % coeffs.len()] as i64;
            for (x, y) in u.iter_mut().zip(e.iter()) {
                *x += c * y;
            }
        }
        u
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn gauge_is_homogeneous_subadditive_with_denominator_m(
            which in 0usize..5,
            a in proptest::collection::vec(0u8..6, 4),
            b in proptest::collection::vec(0u8..6, 4),
            k in 0i64..5,
        ) {
            let g = &geometries()[which];
            let u = cone_vector(g, &a);
            let v = cone_vector(g, &b);
            let wu = g.weight(&u).unwrap();
            let wv = g.weight(&v).unwrap();
            let ku: Vec<i64> = u.iter().map(|x| x * k).collect();
            prop_assert_eq!(g.weight(&ku).unwrap(), wu * Q::from_integer(k));
            let uv: Vec<i64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
            prop_assert!(g.weight(&uv).unwrap() <= wu + wv);
            prop_assert!((wu * Q::from_integer(g.m)).is_integer());
            prop_assert!(wu >= Q::zero());
        }
    }
}
