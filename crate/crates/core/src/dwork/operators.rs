//! Operators on the weight-truncated space `{x^u : u ∈ δ, w(u) <= W}`,
//! basis ordered by `(w(u), lex)`.

use std::collections::HashMap;

use num_traits::Zero;

use super::matrix::Mat;
use super::series::ConeSeries;
use crate::laurent::ExponentVector;
use crate::padic::TowerParams;
use crate::polytope::{combinations, NewtonGeometry};
use crate::Q;

#[derive(Debug, Clone)]
pub struct TruncatedSpace {
    pub basis: Vec<(ExponentVector, Q)>,
    pub index: HashMap<ExponentVector, usize>,
    pub cutoff: Q,
    /// Smallest weight above the cutoff; `None` for the cone `{0}`.
    pub w_next: Option<Q>,
}

impl TruncatedSpace {
    pub fn new(g: &NewtonGeometry, cutoff: Q) -> Self {
        let basis = g.cone_points(cutoff);
        let index = basis.iter().enumerate().map(|(i, (u, _))| (u.clone(), i)).collect();
        TruncatedSpace { basis, index, cutoff, w_next: g.next_weight(cutoff) }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn weight(&self, k: usize) -> Q {
        self.basis[k].1
    }
}

/// `ψ_q ∘ (mult by s)`: entry `[v][u] = s_{qv-u}`.
pub fn frobenius_matrix(t: &TowerParams, sp: &TruncatedSpace, s: &ConeSeries, q: u64) -> Mat {
    Mat::from_fn(sp.len(), sp.len(), |r, c| {
        let v = &sp.basis[r].0;
        let u = &sp.basis[c].0;
        let e: Vec<i64> = v.iter().zip(u.iter()).map(|(x, y)| q as i64 * x - y).collect();
        s.coeff(&e).cloned().unwrap_or_else(|| t.zero())
    })
}

/// Multiplication by `s`: entry `[v][u] = s_{v-u}`.
pub fn multiplication_matrix(t: &TowerParams, sp: &TruncatedSpace, s: &ConeSeries) -> Mat {
    Mat::from_fn(sp.len(), sp.len(), |r, c| {
        let v = &sp.basis[r].0;
        let u = &sp.basis[c].0;
        let e: Vec<i64> = v.iter().zip(u.iter()).map(|(x, y)| x - y).collect();
        s.coeff(&e).cloned().unwrap_or_else(|| t.zero())
    })
}

/// `E_i = x_i ∂/∂x_i`, diagonal with entries `u_i`; `i` is 1-based.
pub fn euler_matrix(t: &TowerParams, sp: &TruncatedSpace, i: usize) -> Mat {
    let mut m = Mat::zeros(t, sp.len(), sp.len());
    for (k, (u, _)) in sp.basis.iter().enumerate() {
        m.set(k, k, t.from_int(u[i - 1]));
    }
    m
}

/// `E_i + (mult by s)`: `D̂_i` with `s = H_i`, `D_i` with `s = π E_i f̂`.
pub fn twisted_derivation(t: &TowerParams, sp: &TruncatedSpace, i: usize, s: &ConeSeries) -> Mat {
    euler_matrix(t, sp, i).add(t, &multiplication_matrix(t, sp, s))
}

/// Koszul boundaries `∂_k : K_k -> K_{k-1}` for `k = 1..=n`, with
/// `∂(ξ e_{i_1}∧…∧e_{i_k}) = Σ_j (-1)^{j-1} D_{i_j} ξ e_{i_1}∧…ê_{i_j}…∧e_{i_k}`.
/// Blocks are indexed by subsets in lexicographic order.
pub fn koszul_boundaries(t: &TowerParams, ops: &[Mat]) -> Vec<Mat> {
    let n = ops.len();
    let dim = ops.first().map_or(0, |m| m.rows);
    (1..=n)
        .map(|k| {
            let cols = combinations(n, k);
            let rows = combinations(n, k - 1);
            let mut m = Mat::zeros(t, rows.len() * dim, cols.len() * dim);
            for (ci, s) in cols.iter().enumerate() {
                for (j, &ij) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&x| x != ij).collect();
                    let ri = rows.iter().position(|r| *r == rest).expect("face of a subset");
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    m.put_block(t, ri * dim, ci * dim, &ops[ij], sign);
                }
            }
            m
        })
        .collect()
}

/// Checks `ord α[v][u] >= b (q w(v) - w(u))` on every entry.
pub fn entry_bound_holds(t: &TowerParams, sp: &TruncatedSpace, m: &Mat, b: Q, q: u64) -> bool {
    let cap = Q::from_integer(t.prec as i64);
    (0..sp.len()).all(|r| {
        (0..sp.len()).all(|c| {
            let bound = b * (Q::from_integer(q as i64) * sp.weight(r) - sp.weight(c));
            t.val(m.get(r, c)) >= bound.min(cap).max(Q::zero())
        })
    })
}
