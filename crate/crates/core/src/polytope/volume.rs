use std::collections::BTreeMap;

use serde::Serialize;

use super::{build_geometry, subsets, NewtonGeometry};
use crate::laurent::ExponentVector;
use crate::polytope::linalg::{det, to_q};
use crate::Q;

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

fn triangulate(g: &NewtonGeometry, face: usize) -> Vec<Vec<ExponentVector>> {
    let f = &g.faces[face];
    if f.dim == 0 {
        return vec![vec![f.vertices[0].clone()]];
    }
    let apex = &f.vertices[0];
    let mut out = Vec::new();
    for (i, sub) in g.faces.iter().enumerate() {
        if sub.dim + 1 != f.dim
            || !f.active_facets.iter().all(|a| sub.active_facets.contains(a))
            || sub.vertices.contains(apex)
        {
            continue;
        }
        for mut s in triangulate(g, i) {
            s.insert(0, apex.clone());
            out.push(s);
        }
    }
    out
}

/// `n! Vol(Δ)` for a full-dimensional geometry.
pub(crate) fn normalized_volume_full(g: &NewtonGeometry) -> i64 {
    let top = g.faces.iter().position(|f| f.active_facets.is_empty()).expect("Δ is a face of itself");
    triangulate(g, top)
        .iter()
        .map(|s| {
            let rows: Vec<Vec<Q>> = s[1..].iter().map(|v| to_q(&v.sub(&s[0]))).collect();
            let d = det(rows);
            assert!(d.is_integer());
            d.to_integer().abs()
        })
        .sum()
}

/// Support of `f_A` with the coordinates of `A` (1-based) dropped.
fn slice(support: &[ExponentVector], a: &[usize]) -> Vec<ExponentVector> {
    support
        .iter()
        .filter(|e| a.iter().all(|&j| e[j - 1] == 0))
        .map(|e| {
            let keep: Vec<i64> = (0..e.dim()).filter(|i| !a.contains(&(i + 1))).map(|i| e[i]).collect();
            ExponentVector(keep)
        })
        .collect()
}

/// `(n-|A|)! V_A(f)` for the slice `Δ ∩ R^n_A`; a point in `R^0` counts 1.
fn slice_normalized_volume(n: usize, support: &[ExponentVector], a: &[usize]) -> i64 {
    let m = n - a.len();
    if m == 0 {
        return 1;
    }
    match build_geometry(&slice(support, a)) {
        Ok(g) if g.dim == m => normalized_volume_full(&g),
        _ => 0,
    }
}

fn slice_dim(n: usize, support: &[ExponentVector], a: &[usize]) -> usize {
    if n == a.len() {
        return 0;
    }
    build_geometry(&slice(support, a)).map(|g| g.dim).unwrap_or(0)
}

/// `V_A(f)` for every `A ⊆ s_r` (1-based coordinates). Assumes `f` has no
/// poles along `s_r`, so each slice is the face `Δ(f_A)`.
pub fn restricted_volumes(g: &NewtonGeometry, s_r: &[usize]) -> BTreeMap<Vec<usize>, Q> {
    subsets(s_r)
        .into_iter()
        .map(|a| {
            let nv = slice_normalized_volume(g.n, &g.support, &a);
            let v = Q::new(nv, factorial(g.n - a.len()));
            (a, v)
        })
        .collect()
}

/// `v_A(f) = Σ_{B ⊆ A} (-1)^{|B|} (n-|B|)! V_B(f)`.
pub fn v_a(g: &NewtonGeometry, a: &[usize]) -> i64 {
    subsets(a)
        .iter()
        .map(|b| {
            let sign = if b.len() % 2 == 0 { 1 } else { -1 };
            sign * slice_normalized_volume(g.n, &g.support, b)
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct CommodeReport {
    pub commode: bool,
    pub r_tilde: usize,
    /// `(A, dim Δ(f_A))` for every `A ⊆ S_r`.
    pub dims: Vec<(Vec<usize>, usize)>,
}

/// Checks `dim Δ(f_A) = dim Δ(f_{S_r}) + |S_r - A|` for all `A ⊆ S_r`.
pub fn is_commode(n: usize, support: &[ExponentVector], s_r: &[usize]) -> CommodeReport {
    let r_tilde = slice_dim_keep(n, support, s_r);
    let mut commode = true;
    let mut dims = Vec::new();
    for a in subsets(s_r) {
        let d = slice_dim_keep(n, support, &a);
        if d != r_tilde + (s_r.len() - a.len()) {
            commode = false;
        }
        dims.push((a, d));
    }
    CommodeReport { commode, r_tilde, dims }
}

/// Dimension of `Δ(f_A)` (the dropped coordinates carry no information).
fn slice_dim_keep(n: usize, support: &[ExponentVector], a: &[usize]) -> usize {
    let pts = slice(support, a);
    if pts.iter().all(|e| e.is_zero()) {
        return 0;
    }
    slice_dim(n, support, a)
}
