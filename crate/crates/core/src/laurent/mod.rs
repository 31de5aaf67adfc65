//! Laurent polynomials `sum a_u x^u` over a pluggable coefficient ring.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{FieldParams, FqElem};
use crate::polytope::FaceDescriptor;

pub use parse::{max_variable_index, parse_coefficient, parse_laurent};

/// Integer exponent vector; its length is the ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Drops the coordinates listed in `drop` (0-based, sorted or not).
    pub fn without(&self, drop: &[usize]) -> Self {
        ExponentVector(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, &x)| x)
                .collect(),
        )
    }
}

impl Deref for ExponentVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

/// Minimal ring interface shared by `F_q`, `Q` and the p-adic tower.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug {
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn mul_int(&self, k: i64) -> Self;
}

impl CoeffRing for FqElem {
    fn add(&self, o: &Self) -> Self {
        FqElem::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        FqElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        FqElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        FqElem::is_zero(self)
    }
    fn mul_int(&self, k: i64) -> Self {
        FqElem::mul_int(self, k)
    }
}

impl CoeffRing for BigRational {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_int(&self, k: i64) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
}

/// A Laurent polynomial in `n` variables. No stored coefficient is zero and
/// terms iterate in lexicographic exponent order.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<R> {
    n: usize,
    terms: BTreeMap<ExponentVector, R>,
}

impl<R: CoeffRing> LaurentPoly<R> {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { n, terms: BTreeMap::new() }
    }

    pub fn monomial(e: ExponentVector, c: R) -> Self {
        let n = e.dim();
        let mut p = Self::zero(n);
        p.add_term(e, c);
        p
    }

    /// Builds from possibly repeated terms, combining like terms.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (ExponentVector, R)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            assert_eq!(e.dim(), n, "exponent length must equal n");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: ExponentVector, c: R) {
        debug_assert_eq!(e.dim(), self.n);
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&R> {
        self.terms.get(e)
    }

    /// Exponents of the nonzero terms, in lexicographic order.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1.add(e2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(e, c)| (e.clone(), c.mul_int(k))))
    }

    /// `E_i = x_i d/dx_i` with `i` 1-based: `x^u -> u_i x^u`.
    pub fn log_derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::AxisOutOfRange(i));
        }
        Ok(Self::from_terms(
            self.n,
            self.terms.iter().map(|(e, c)| (e.clone(), c.mul_int(e[i - 1]))),
        ))
    }

    /// Sets `x_j = 0` for each 1-based `j` in `coords`, dropping every term
    /// with a positive exponent there; the result lives in `n - |coords|`
    /// variables.
    pub fn specialize_zero(&self, coords: &[usize]) -> Result<Self> {
        let mut drop: Vec<usize> = Vec::new();
        for &j in coords {
            if j == 0 || j > self.n {
                return Err(Error::AxisOutOfRange(j));
            }
            if !drop.contains(&(j - 1)) {
                drop.push(j - 1);
            }
        }
        for e in self.terms.keys() {
            if let Some(&j) = drop.iter().find(|&&j| e[j] < 0) {
                return Err(Error::NegativeExponent(j + 1));
            }
        }
        let n = self.n - drop.len();
        Ok(Self::from_terms(
            n,
            self.terms
                .iter()
                .filter(|(e, _)| drop.iter().all(|&j| e[j] == 0))
                .map(|(e, c)| (e.without(&drop), c.clone())),
        ))
    }

    /// The sub-sum of terms whose exponents lie on `face`.
    pub fn face_restrict(&self, face: &FaceDescriptor) -> Result<Self> {
        if face.support_points.iter().any(|u| u.dim() != self.n || !self.terms.contains_key(u)) {
            return Err(Error::ForeignFace);
        }
        Ok(Self::from_terms(
            self.n,
            face.support_points.iter().map(|u| (u.clone(), self.terms[u].clone())),
        ))
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> LaurentPoly<S> {
        LaurentPoly::from_terms(self.n, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

impl<R: CoeffRing + fmt::Display> fmt::Display for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut factors = Vec::new();
                let cs = c.to_string();
                if cs != "1" || e.is_zero() {
                    factors.push(cs);
                }
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("x{}", i + 1)),
                        k => factors.push(format!("x{}^{}", i + 1, k)),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: CoeffRing> fmt::Debug for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Canonical JSON form `{"n":…, "terms":[{"e":[…],"c":"…"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<i64>,
    pub c: String,
}

impl<R: CoeffRing + fmt::Display> LaurentPoly<R> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| TermJson { e: e.0.clone(), c: c.to_string() }).collect(),
        }
    }
}

impl LaurentPoly<FqElem> {
    pub fn from_json(j: &PolyJson, field: &std::sync::Arc<FieldParams>) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.e.len() != j.n {
                return Err(Error::InvalidParams(format!("exponent {:?} has length != {}", t.e, j.n)));
            }
            terms.push((ExponentVector(t.e.clone()), parse_coefficient(&t.c, field)?));
        }
        Ok(Self::from_terms(j.n, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    fn fq(p: u64) -> std::sync::Arc<FieldParams> {
        make_field(p, 1).unwrap()
    }

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector(v.to_vec())
    }

    #[test]
    fn log_derivative_power_rule() {
        let f = parse_laurent("x1 + x1^-1", 1, &fq(5)).unwrap();
        let d = f.log_derivative(1).unwrap();
        assert_eq!(d, parse_laurent("x1 - x1^-1", 1, &fq(5)).unwrap());
        let c = parse_laurent("3", 1, &fq(5)).unwrap();
        assert!(c.log_derivative(1).unwrap().is_zero());
        // characteristic 2 kills 2*x^2
        let sq = parse_laurent("x1^2", 1, &fq(2)).unwrap();
        assert!(sq.log_derivative(1).unwrap().is_zero());
        assert_eq!(f.log_derivative(2).unwrap_err(), Error::AxisOutOfRange(2));
    }

    #[test]
    fn specialize_examples() {
        let k = fq(3);
        let f = parse_laurent("x1 + x1^-1 + x2^2", 2, &k).unwrap();
        assert_eq!(f.specialize_zero(&[2]).unwrap(), parse_laurent("x1 + x1^-1", 1, &k).unwrap());
        let g = parse_laurent("x2", 2, &k).unwrap();
        assert!(g.specialize_zero(&[2]).unwrap().is_zero());
        let h = parse_laurent("x1 + x1^-1*x2", 2, &k).unwrap();
        assert_eq!(h.specialize_zero(&[2]).unwrap(), parse_laurent("x1", 1, &k).unwrap());
        let bad = parse_laurent("x2^-1", 2, &k).unwrap();
        assert_eq!(bad.specialize_zero(&[2]).unwrap_err(), Error::NegativeExponent(2));
    }

    #[test]
    fn json_round_trip() {
        let k = make_field(3, 2).unwrap();
        let f = parse_laurent("(g+1)*x1^2*x2^-1 + 2*g + x2", 2, &k).unwrap();
        let j = f.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LaurentPoly::from_json(&back, &k).unwrap(), f);
        assert_eq!(j.terms[0].e, vec![0, 0]);
    }

    #[test]
    fn rational_ring_leibniz() {
        let q = |a: i64| BigRational::from_integer(BigInt::from(a));
        let f = LaurentPoly::from_terms(2, [(ev(&[1, 0]), q(2)), (ev(&[-1, 3]), q(-1))]);
        let g = LaurentPoly::from_terms(2, [(ev(&[0, 1]), q(5)), (ev(&[2, -2]), q(7))]);
        let lhs = f.mul(&g).log_derivative(2).unwrap();
        let rhs = f.log_derivative(2).unwrap().mul(&g).add(&f.mul(&g.log_derivative(2).unwrap()));
        assert_eq!(lhs, rhs);
    }
}
