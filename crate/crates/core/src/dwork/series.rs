//! Series on the cone: `H`, `F_0`, `G`, `R`, `R^{-1}`, computed exactly
//! mod `p^N`. Every product factor is truncated by index at the point its
//! coefficients vanish mod `p^N`, never by weight, so the stored maps hold
//! all nonzero coefficients.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::FqElem;
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::padic::{
    gamma_partial_sums, gamma_root, pi_pow_div_factorial, splitting_coefficients, teichmuller_lift, SplittingKind,
    TowerElem, TowerParams,
};
use crate::polytope::NewtonGeometry;
use crate::Q;

/// A series `Σ a_u x^u` with the decay claim `ord a_u >= b·w(u) + c`.
#[derive(Debug, Clone)]
pub struct ConeSeries {
    pub coeffs: BTreeMap<ExponentVector, TowerElem>,
    pub decay: (Q, Q),
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayAudit {
    pub checked: usize,
    pub passed: bool,
    /// Smallest `ord a_u - (b w(u) + c)` among coefficients with
    /// `b w(u) + c < N` (only these are informative).
    pub min_margin: Option<String>,
    pub first_failure: Option<Vec<i64>>,
}

impl ConeSeries {
    pub fn coeff(&self, u: &[i64]) -> Option<&TowerElem> {
        self.coeffs.get(&ExponentVector(u.to_vec()))
    }

    /// Checks the decay claim on every stored coefficient. Past the
    /// precision only `ord >= N` is known, which satisfies any bound `>= N`.
    pub fn audit(&self, g: &NewtonGeometry, t: &TowerParams) -> Result<DecayAudit> {
        let (b, c) = self.decay;
        let cap = Q::from_integer(t.prec as i64);
        let mut min_margin: Option<Q> = None;
        let mut first_failure = None;
        for (u, a) in &self.coeffs {
            let w = g.weight(u)?;
            let bound = b * w + c;
            let v = t.val(a);
            if bound < cap {
                let m = v - bound;
                if min_margin.is_none_or(|x| m < x) {
                    min_margin = Some(m);
                }
            }
            if v < bound.min(cap) && first_failure.is_none() {
                first_failure = Some(u.0.clone());
            }
        }
        Ok(DecayAudit {
            checked: self.coeffs.len(),
            passed: first_failure.is_none(),
            min_margin: min_margin.map(|m| crate::fmt_q(&m)),
            first_failure,
        })
    }
}

/// `Π_k (Σ_j c_{k,j} x^{j·s_k})` over factors `(s_k, c_k)`, dropping zeros.
pub fn product_of_substitutions(t: &TowerParams, n: usize, factors: &[(ExponentVector, Vec<TowerElem>)]) -> BTreeMap<ExponentVector, TowerElem> {
    let mut cur: HashMap<Vec<i64>, TowerElem> = HashMap::new();
    cur.insert(vec![0; n], t.one());
    for (step, coeffs) in factors {
        let mut next: HashMap<Vec<i64>, TowerElem> = HashMap::with_capacity(cur.len() * 2);
        for (u, a) in &cur {
            for (j, c) in coeffs.iter().enumerate() {
                if t.is_zero(c) {
                    continue;
                }
                let e: Vec<i64> = u.iter().zip(step.iter()).map(|(x, s)| x + s * j as i64).collect();
                let prod = t.mul(a, c);
                match next.get_mut(&e) {
                    Some(v) => t.add_assign(v, &prod),
                    None => {
                        next.insert(e, prod);
                    }
                }
            }
        }
        next.retain(|_, v| !t.is_zero(v));
        cur = next;
    }
    cur.into_iter().map(|(k, v)| (ExponentVector(k), v)).collect()
}

fn series_mul_1(t: &TowerParams, a: &[TowerElem], b: &[TowerElem], len: usize) -> Vec<TowerElem> {
    (0..len)
        .map(|k| t.dot((0..=k).filter(|&i| i < a.len() && k - i < b.len()).map(|i| (&a[i], &b[k - i]))))
        .collect()
}

fn series_inv_1(t: &TowerParams, a: &[TowerElem], len: usize) -> Result<Vec<TowerElem>> {
    let inv0 = t.inv(&a[0])?;
    let mut out = vec![inv0.clone()];
    for k in 1..len {
        let s = t.dot((1..=k.min(a.len() - 1)).map(|i| (&a[i], &out[k - i])));
        out.push(t.neg(&t.mul(&s, &inv0)));
    }
    Ok(out)
}

/// Everything needed to build the Dwork series of `f̂`.
pub struct DworkData {
    pub tower: Arc<TowerParams>,
    pub geometry: NewtonGeometry,
    pub n: usize,
    /// `(w_j, â_j)`, Teichmüller-lifted coefficients; may include the origin.
    pub terms: Vec<(ExponentVector, TowerElem)>,
    pub gamma: TowerElem,
    /// `γ_l`, vanishing mod `p^N` past the end.
    pub gamma_l: Vec<TowerElem>,
    /// Artin–Hasse `λ_i`.
    pub lambda: Vec<TowerElem>,
}

pub fn b_f(p: u64, q: u64) -> Q {
    Q::new(p as i64, (q * (p - 1)) as i64)
}

pub fn b_g(p: u64, q: u64) -> Q {
    Q::new(p as i64 - 1, (p * q) as i64)
}

pub fn b_0(p: u64) -> Q {
    Q::new(1, p as i64 - 1).min(Q::new(p as i64 - 1, p as i64))
}

pub fn b_h(p: u64) -> Q {
    Q::new(1, p as i64 - 1)
}

impl DworkData {
    pub fn new(f: &LaurentPoly<FqElem>, geometry: NewtonGeometry, tower: Arc<TowerParams>) -> Result<Self> {
        let terms = f.terms().map(|(e, c)| (e.clone(), teichmuller_lift(&tower, c))).collect();
        let gamma = gamma_root(&tower)?;
        let gamma_l = gamma_partial_sums(&tower)?;
        let kind = SplittingKind::ArtinHasse;
        let lambda = splitting_coefficients(kind, kind.default_i_max(tower.p, tower.prec), &tower)?.lambda;
        Ok(DworkData { tower, geometry, n: f.n(), terms, gamma, gamma_l, lambda })
    }

    pub fn q(&self) -> u64 {
        self.tower.field.q
    }

    fn frobenius_product(&self, lambda: &[TowerElem]) -> BTreeMap<ExponentVector, TowerElem> {
        let t = &self.tower;
        let mut factors = Vec::new();
        for (w, ahat) in &self.terms {
            let mut ap = ahat.clone();
            let mut step = w.clone();
            for _ in 0..t.a {
                let mut pw = t.one();
                let coeffs = lambda
                    .iter()
                    .map(|l| {
                        let c = t.mul(l, &pw);
                        pw = t.mul(&pw, &ap);
                        c
                    })
                    .collect();
                factors.push((step.clone(), coeffs));
                ap = t.pow(&ap, t.p);
                step = step.scale(t.p as i64);
            }
        }
        product_of_substitutions(t, self.n, &factors)
    }

    /// `F_0 = Π_j Π_{i<a} θ((â_j x^{w_j})^{p^i})`.
    pub fn f0(&self) -> ConeSeries {
        ConeSeries { coeffs: self.frobenius_product(&self.lambda), decay: (b_f(self.tower.p, self.q()), Q::zero()) }
    }

    /// `G = exp(π(f̂(x) - f̂(x^q)))`, the same product over Dwork's splitting function.
    pub fn g_series(&self) -> Result<ConeSeries> {
        let t = &self.tower;
        let kind = SplittingKind::DworkExp;
        let lam = splitting_coefficients(kind, kind.default_i_max(t.p, t.prec), t)?.lambda;
        Ok(ConeSeries { coeffs: self.frobenius_product(&lam), decay: (b_g(t.p, self.q()), Q::zero()) })
    }

    fn h_weighted(&self, weight: impl Fn(&ExponentVector, usize) -> i64) -> BTreeMap<ExponentVector, TowerElem> {
        let t = &self.tower;
        let mut out: BTreeMap<ExponentVector, TowerElem> = BTreeMap::new();
        for (w, ahat) in &self.terms {
            let mut ap = ahat.clone();
            let mut step = w.clone();
            for (l, gl) in self.gamma_l.iter().enumerate() {
                let k = weight(w, l);
                let c = t.mul_int(&t.mul(gl, &ap), k);
                let e = out.entry(step.clone()).or_insert_with(|| t.zero());
                t.add_assign(e, &c);
                ap = t.pow(&ap, t.p);
                step = step.scale(t.p as i64);
            }
        }
        out.retain(|_, v| !t.is_zero(v));
        out
    }

    /// `H = Σ_j Σ_l γ_l (â_j x^{w_j})^{p^l}`.
    pub fn h(&self) -> ConeSeries {
        ConeSeries { coeffs: self.h_weighted(|_, _| 1), decay: (b_h(self.tower.p), Q::zero()) }
    }

    /// `H_i = E_i H`; `i` is 1-based.
    pub fn h_i(&self, i: usize) -> ConeSeries {
        let p = self.tower.p as i64;
        ConeSeries {
            coeffs: self.h_weighted(|w, l| w[i - 1] * p.pow(l as u32)),
            decay: (b_h(self.tower.p), Q::zero()),
        }
    }

    /// `π E_i f̂`; `i` is 1-based.
    pub fn pi_ei_f(&self, i: usize) -> ConeSeries {
        let t = &self.tower;
        let mut coeffs = BTreeMap::new();
        for (w, ahat) in &self.terms {
            let c = t.mul_int(&t.mul(&t.pi(), ahat), w[i - 1]);
            if !t.is_zero(&c) {
                coeffs.insert(w.clone(), c);
            }
        }
        ConeSeries { coeffs, decay: (Q::zero(), Q::zero()) }
    }

    /// `r(t) = exp(h(t) - πt) = exp(-πt) Π_{k>=0} θ(t^{p^k})` and its inverse,
    /// to the index past which `ord r_k >= b_0 k >= N`.
    pub fn r_one_variable(&self) -> Result<(Vec<TowerElem>, Vec<TowerElem>)> {
        let t = &self.tower;
        let len = (Q::from_integer(t.prec as i64) / b_0(t.p)).ceil().to_integer() as usize + 1;
        let mut r: Vec<TowerElem> = (0..len)
            .map(|m| {
                let c = pi_pow_div_factorial(t, m);
                if m % 2 == 1 {
                    t.neg(&c)
                } else {
                    c
                }
            })
            .collect();
        let mut pk = 1usize;
        while pk < len {
            let mut theta = vec![t.zero(); len];
            for (i, l) in self.lambda.iter().enumerate() {
                if i * pk < len {
                    theta[i * pk] = l.clone();
                }
            }
            r = series_mul_1(t, &r, &theta, len);
            pk *= t.p as usize;
        }
        let rinv = series_inv_1(t, &r, len)?;
        Ok((r, rinv))
    }

    /// `R = exp(H - πf̂) = Π_j r(â_j x^{w_j})` and `R^{-1}`.
    pub fn r_pair(&self) -> Result<(ConeSeries, ConeSeries)> {
        let t = &self.tower;
        let (r, rinv) = self.r_one_variable()?;
        let build = |s: &[TowerElem]| {
            let factors: Vec<(ExponentVector, Vec<TowerElem>)> = self
                .terms
                .iter()
                .map(|(w, ahat)| {
                    let mut pw = t.one();
                    let c = s
                        .iter()
                        .map(|x| {
                            let y = t.mul(x, &pw);
                            pw = t.mul(&pw, ahat);
                            y
                        })
                        .collect();
                    (w.clone(), c)
                })
                .collect();
            ConeSeries { coeffs: product_of_substitutions(t, self.n, &factors), decay: (b_0(t.p), Q::zero()) }
        };
        Ok((build(&r), build(&rinv)))
    }
}

/// Refuses series products whose cutoffs disagree.
pub fn check_cutoffs(a: Option<Q>, b: Option<Q>) -> Result<()> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::CutoffMismatch(format!("{} vs {}", crate::fmt_q(&x), crate::fmt_q(&y)))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;
    use crate::laurent::parse_laurent;
    use crate::polytope::build_geometry;

    fn data(p: u64, text: &str, n: usize, prec: u32) -> DworkData {
        let fld = make_field(p, 1).unwrap();
        let f = parse_laurent(text, n, &fld).unwrap();
        let g = build_geometry(&f.support()).unwrap();
        DworkData::new(&f, g, TowerParams::new(&fld, prec).unwrap()).unwrap()
    }

    #[test]
    fn f0_low_terms() {
        let d = data(3, "x1", 1, 8);
        let f0 = d.f0();
        let t = &d.tower;
        assert_eq!(f0.coeff(&[0]).unwrap(), &t.one());
        assert_eq!(f0.coeff(&[1]).unwrap(), &d.gamma);
        assert!(f0.audit(&d.geometry, t).unwrap().passed);
    }

    #[test]
    fn h_leading_term() {
        let d = data(5, "2*x1 + x1^-1", 1, 6);
        let h = d.h();
        let t = &d.tower;
        let a2 = teichmuller_lift(t, &FqElem::from_int(&t.field, 2));
        assert_eq!(h.coeff(&[1]).unwrap(), &t.mul(&d.gamma, &a2));
        assert!(h.audit(&d.geometry, t).unwrap().passed);
    }

    #[test]
    fn r_inverse_pair() {
        let d = data(3, "x1 + x1^-1", 1, 8);
        let t = &d.tower;
        let (r, rinv) = d.r_one_variable().unwrap();
        let prod = series_mul_1(t, &r, &rinv, r.len());
        assert_eq!(prod[0], t.one());
        assert!(prod[1..].iter().all(|c| t.is_zero(c)));
        let (rr, ri) = d.r_pair().unwrap();
        assert!(rr.audit(&d.geometry, t).unwrap().passed);
        assert!(ri.audit(&d.geometry, t).unwrap().passed);
    }

    #[test]
    fn g_decay() {
        let d = data(3, "x1 + x1^-1", 1, 6);
        let g = d.g_series().unwrap();
        assert!(g.audit(&d.geometry, &d.tower).unwrap().passed);
        let d = data(3, "x1", 1, 6);
        assert_eq!(d.g_series().unwrap().coeff(&[1]).unwrap(), &d.tower.pi());
    }
}
