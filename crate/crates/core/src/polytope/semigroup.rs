use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::linalg::{dot, nullspace, to_q};
use super::{combinations, NewtonGeometry};
use crate::error::{Error, Result};
use crate::laurent::ExponentVector;
use crate::Q;

/// Lattice points of the zonotope `Σ [0,1] w_j` inside the span of `Δ`.
pub(crate) fn zonotope_points(g: &NewtonGeometry) -> Vec<ExponentVector> {
    let n = g.n;
    let piv = g.pivots();
    let d = piv.len();
    let gens: Vec<Vec<i64>> = g.generators.iter().map(|w| piv.iter().map(|&i| w[i]).collect()).collect();
    let mut normals: Vec<Vec<Q>> = Vec::new();
    if d == 1 {
        normals.push(vec![Q::from_integer(1)]);
    } else {
        for c in combinations(gens.len(), d - 1) {
            let rows: Vec<Vec<Q>> = c.iter().map(|&i| to_q(&gens[i])).collect();
            let ns = nullspace(&rows, d);
            if ns.len() == 1 && !normals.contains(&ns[0]) {
                normals.push(ns[0].clone());
            }
        }
    }
    let slabs: Vec<(Vec<Q>, Q, Q)> = normals
        .into_iter()
        .map(|l| {
            let (mut lo, mut hi) = (Q::zero(), Q::zero());
            for w in &gens {
                let t = dot(&l, w);
                if t.is_negative() {
                    lo += t;
                } else {
                    hi += t;
                }
            }
            (l, lo, hi)
        })
        .collect();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for w in &g.generators {
        for i in 0..n {
            if w[i] < 0 {
                lo[i] += w[i];
            } else {
                hi[i] += w[i];
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if g.in_span(&cur) {
            let pc: Vec<i64> = piv.iter().map(|&i| cur[i]).collect();
            if slabs.iter().all(|(l, a, b)| {
                let t = dot(l, &pc);
                *a <= t && t <= *b
            }) {
                out.push(ExponentVector(cur.clone()));
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
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

/// The finite set `S = {Σ r_j w_j : 0 <= r_j <= 1} ∩ Z^n`, origin included.
pub fn semigroup_generators(g: &NewtonGeometry) -> Vec<ExponentVector> {
    g.semigroup().to_vec()
}

fn dominates(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Minimal elements of a finite set under coordinatewise order, sorted.
/// Scanning by coordinate sum, a point is minimal iff no minimal point
/// found so far lies below it.
pub fn dickson_minimal(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)));
    pts.dedup();
    let mut out: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        if !out.iter().any(|q| dominates(&p, q)) {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// `y^plus - y^minus` in variables indexed by `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binomial {
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
}

type Poly = BTreeMap<Vec<i64>, i64>;

#[derive(Debug, Clone)]
pub struct ToricRelations {
    /// `J_0`: minimal pairs `(a, b)` in both orientations.
    pub minimal_pairs: Vec<(Vec<i64>, Vec<i64>)>,
    /// One binomial per relation, oriented with `plus > minus`.
    pub binomials: Vec<Binomial>,
    /// Enumerated pairs whose rewriting was checked.
    pub checked_pairs: usize,
    pub all_rewrites_verified: bool,
}

fn deg(a: &[i64]) -> i64 {
    a.iter().sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn add_term(p: &mut Poly, m: Vec<i64>, c: i64) {
    let e = p.entry(m.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        p.remove(&m);
    }
}

fn monomials(l: usize, max_deg: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; l]];
    for i in 0..l {
        let mut next = Vec::new();
        for m in &out {
            let rest = max_deg - deg(m);
            for k in 0..=rest {
                let mut mm = m.clone();
                mm[i] = k;
                next.push(mm);
            }
        }
        out = next;
    }
    out
}

impl ToricRelations {
    /// Cofactors `g_i` with `Σ g_i (y^{a_i} - y^{b_i}) = y^a - y^b`, following
    /// the descent through a dominated minimal pair. `None` if no minimal pair
    /// is dominated at some step.
    pub fn rewrite(&self, a: &[i64], b: &[i64]) -> Option<BTreeMap<usize, Poly>> {
        let mut cof: BTreeMap<usize, Poly> = BTreeMap::new();
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        let mut mult = vec![0i64; a.len()];
        while a != b {
            let (i, (a0, b0)) = self
                .minimal_pairs
                .iter()
                .enumerate()
                .find(|(_, (a0, b0))| dominates(&a, a0) && dominates(&b, b0))?;
            if deg(a0) >= deg(b0) {
                add_term(cof.entry(i).or_default(), add(&mult, &sub(&a, a0)), 1);
                mult = add(&mult, b0);
            } else {
                add_term(cof.entry(i).or_default(), add(&mult, &sub(&b, b0)), 1);
                mult = add(&mult, a0);
            }
            a = sub(&a, a0);
            b = sub(&b, b0);
        }
        cof.retain(|_, p| !p.is_empty());
        Some(cof)
    }

    /// Checks the cofactor identity and the bound `deg g_i <= max(|a|,|b|)`.
    pub fn verify_rewrite(&self, a: &[i64], b: &[i64]) -> bool {
        let Some(cof) = self.rewrite(a, b) else { return false };
        let bound = deg(a).max(deg(b));
        let mut total: Poly = BTreeMap::new();
        for (i, g) in &cof {
            let (a0, b0) = &self.minimal_pairs[*i];
            for (m, c) in g {
                if deg(m) > bound {
                    return false;
                }
                add_term(&mut total, add(m, a0), *c);
                add_term(&mut total, add(m, b0), -*c);
            }
        }
        let mut want: Poly = BTreeMap::new();
        add_term(&mut want, a.to_vec(), 1);
        add_term(&mut want, b.to_vec(), -1);
        total == want
    }
}

/// Binomial relations among `s` with `|a|, |b| <= degree_bound`, reduced to
/// the minimal pairs, with the rewriting of every enumerated pair checked.
pub fn toric_relations(s: &[ExponentVector], degree_bound: u32) -> ToricRelations {
    let l = s.len();
    let n = s.first().map(|x| x.dim()).unwrap_or(0);
    let mut groups: HashMap<Vec<i64>, Vec<Vec<i64>>> = HashMap::new();
    for m in monomials(l, degree_bound as i64) {
        let mut img = vec![0i64; n];
        for (k, &e) in m.iter().enumerate() {
            for j in 0..n {
                img[j] += e * s[k][j];
            }
        }
        groups.entry(img).or_default().push(m);
    }
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for ms in groups.values() {
        for a in ms {
            for b in ms {
                if a != b {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
    }
    let concat: Vec<Vec<i64>> = pairs.iter().map(|(a, b)| [a.as_slice(), b.as_slice()].concat()).collect();
    let minimal_pairs: Vec<(Vec<i64>, Vec<i64>)> =
        dickson_minimal(&concat).into_iter().map(|v| (v[..l].to_vec(), v[l..].to_vec())).collect();
    let binomials = minimal_pairs
        .iter()
        .filter(|(a, b)| a > b)
        .map(|(a, b)| Binomial { plus: a.clone(), minus: b.clone() })
        .collect();
    let mut rel = ToricRelations { minimal_pairs, binomials, checked_pairs: 0, all_rewrites_verified: true };
    rel.all_rewrites_verified = pairs.iter().all(|(a, b)| rel.verify_rewrite(a, b));
    rel.checked_pairs = pairs.len();
    rel
}

/// Writes `u = Σ v_i s_i` with `s_i ∈ S` and all `s_i`, `u` on the cone over
/// one facet of `Δ` avoiding the origin, so that `w(u) = Σ v_i w(s_i)`.
pub fn weight_additive_decompose(g: &NewtonGeometry, u: &ExponentVector) -> Result<Vec<(ExponentVector, u64)>> {
    let wu = g.weight(u)?;
    if u.is_zero() {
        return Err(Error::NoDecomposition);
    }
    if g.semigroup().contains(u) {
        return Ok(vec![(u.clone(), 1)]);
    }
    for f in g.facets.iter().filter(|f| !f.through_origin() && f.eval(u) == wu) {
        let on_facet = |x: &[i64]| g.weight(x).map(|w| w == f.eval(x)).unwrap_or(false);
        let mut cands: Vec<(ExponentVector, Q)> = g
            .semigroup()
            .iter()
            .filter(|s| !s.is_zero() && on_facet(s))
            .map(|s| (s.clone(), f.eval(s)))
            .collect();
        cands.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut failed: HashSet<(usize, Vec<i64>)> = HashSet::new();
        let mut acc = Vec::new();
        if dfs(&cands, 0, u.clone(), &on_facet, &mut failed, &mut acc) {
            return Ok(acc);
        }
    }
    Err(Error::NoDecomposition)
}

fn dfs(
    cands: &[(ExponentVector, Q)],
    i: usize,
    r: ExponentVector,
    on_facet: &dyn Fn(&[i64]) -> bool,
    failed: &mut HashSet<(usize, Vec<i64>)>,
    acc: &mut Vec<(ExponentVector, u64)>,
) -> bool {
    if r.is_zero() {
        return true;
    }
    if i == cands.len() || failed.contains(&(i, r.0.clone())) {
        return false;
    }
    let s = &cands[i].0;
    let mut vmax = 0u64;
    let mut t = r.clone();
    loop {
        let next = t.sub(s);
        if !on_facet(&next) {
            break;
        }
        vmax += 1;
        t = next;
    }
    for v in (0..=vmax).rev() {
        let rest = r.sub(&s.scale(v as i64));
        if v > 0 {
            acc.push((s.clone(), v));
        }
        if dfs(cands, i + 1, rest, on_facet, failed, acc) {
            return true;
        }
        if v > 0 {
            acc.pop();
        }
    }
    failed.insert((i, r.0));
    false
}
