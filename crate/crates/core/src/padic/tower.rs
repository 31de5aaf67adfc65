//! `Z_q[π]/(π^{p-1} + p)` modulo `p^N`. Coordinates live on the basis
//! `π^j θ^i` (`j < p-1`, `i < a`), stored at index `j·a + i`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::gfq::{FieldParams, FqElem};
use crate::Q;

#[derive(Debug)]
pub struct TowerParams {
    pub p: u64,
    pub a: usize,
    /// Absolute precision: coordinates are reduced mod `p^prec`.
    pub prec: u32,
    /// `p^prec`, below `2^63`.
    pub pn: u64,
    /// Ramification index `p - 1`.
    pub e: usize,
    pub dim: usize,
    pub field: Arc<FieldParams>,
    /// Lift of the residue-field modulus, monic, low-to-high.
    pub unram: Vec<u64>,
    sigma_theta: OnceLock<TowerElem>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerElem {
    pub c: Vec<u64>,
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

/// Valuation normalized by `ord(p) = 1`. Past the precision only a lower
/// bound is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(Q),
    AtLeast(Q),
}

impl Valuation {
    pub fn lower(&self) -> Q {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => *v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{}", crate::fmt_q(v)),
            Valuation::AtLeast(v) => write!(f, ">={}", crate::fmt_q(v)),
        }
    }
}

pub fn ord_p_u64(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    k
}

#[inline]
fn mulmod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

impl TowerParams {
    pub fn new(field: &Arc<FieldParams>, prec: u32) -> Result<Arc<Self>> {
        let p = field.p;
        let pn = p
            .checked_pow(prec)
            .filter(|&x| x < (1u64 << 63))
            .ok_or(Error::PrecisionTooLarge { p, prec })?;
        if prec == 0 {
            return Err(Error::InvalidParams("precision must be positive".into()));
        }
        let e = (p - 1) as usize;
        Ok(Arc::new(TowerParams {
            p,
            a: field.a,
            prec,
            pn,
            e,
            dim: e * field.a,
            field: field.clone(),
            unram: field.modulus.clone(),
            sigma_theta: OnceLock::new(),
        }))
    }

    /// Same residue field, different precision.
    pub fn with_prec(&self, prec: u32) -> Result<Arc<Self>> {
        Self::new(&self.field, prec)
    }

    pub fn zero(&self) -> TowerElem {
        TowerElem { c: vec![0; self.dim] }
    }

    pub fn from_int(&self, n: i64) -> TowerElem {
        let mut z = self.zero();
        z.c[0] = (n as i128).rem_euclid(self.pn as i128) as u64;
        z
    }

    pub fn one(&self) -> TowerElem {
        self.from_int(1)
    }

    pub fn from_bigint(&self, n: &BigInt) -> TowerElem {
        let mut z = self.zero();
        z.c[0] = n.mod_floor(&BigInt::from(self.pn)).to_u64().expect("reduced below p^N");
        z
    }

    /// Rational with denominator prime to `p`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<TowerElem> {
        let m = BigInt::from(self.pn);
        let d = den.mod_floor(&m);
        let g = d.extended_gcd(&m);
        if !g.gcd.is_one() {
            return Err(Error::NotUnit);
        }
        Ok(self.from_bigint(&(num * g.x)))
    }

    /// Coordinates of an `F_q` element placed on the `π^0` block.
    pub fn from_fq(&self, x: &FqElem) -> TowerElem {
        let mut z = self.zero();
        z.c[..self.a].copy_from_slice(&x.c);
        z
    }

    /// Residue mod `π`.
    pub fn residue(&self, x: &TowerElem) -> FqElem {
        FqElem { field: self.field.clone(), c: x.c[..self.a].iter().map(|v| v % self.p).collect() }
    }

    /// `π^k = (-p)^{k div e} π^{k mod e}`.
    pub fn pi_pow(&self, k: usize) -> TowerElem {
        let mut z = self.zero();
        let (d, r) = (k / self.e, k % self.e);
        if d as u32 >= self.prec {
            return z;
        }
        let mag = self.p.pow(d as u32);
        z.c[r * self.a] = if d % 2 == 0 { mag } else { (self.pn - mag) % self.pn };
        z
    }

    pub fn pi(&self) -> TowerElem {
        self.pi_pow(1)
    }

    pub fn theta(&self) -> TowerElem {
        let mut z = self.zero();
        if self.a == 1 {
            // θ is a root of the degree-one lift x + c0.
            z.c[0] = (self.pn - self.unram[0]) % self.pn;
        } else {
            z.c[1] = 1;
        }
        z
    }

    pub fn is_zero(&self, x: &TowerElem) -> bool {
        x.c.iter().all(|&v| v == 0)
    }

    pub fn add(&self, x: &TowerElem, y: &TowerElem) -> TowerElem {
        TowerElem { c: x.c.iter().zip(&y.c).map(|(&u, &v)| (u + v) % self.pn).collect() }
    }

    pub fn add_assign(&self, x: &mut TowerElem, y: &TowerElem) {
        for (u, &v) in x.c.iter_mut().zip(&y.c) {
            *u = (*u + v) % self.pn;
        }
    }

    pub fn sub(&self, x: &TowerElem, y: &TowerElem) -> TowerElem {
        TowerElem { c: x.c.iter().zip(&y.c).map(|(&u, &v)| (u + self.pn - v) % self.pn).collect() }
    }

    pub fn neg(&self, x: &TowerElem) -> TowerElem {
        TowerElem { c: x.c.iter().map(|&u| (self.pn - u) % self.pn).collect() }
    }

    pub fn mul_int(&self, x: &TowerElem, k: i64) -> TowerElem {
        let k = (k as i128).rem_euclid(self.pn as i128) as u64;
        TowerElem { c: x.c.iter().map(|&u| mulmod(u, k, self.pn)).collect() }
    }

    /// Unreduced product accumulated into a `(2e-1) × (2a-1)` array.
    fn mul_raw(&self, x: &TowerElem, y: &TowerElem, acc: &mut [u128]) {
        let (a, e) = (self.a, self.e);
        let w = 2 * a - 1;
        for j1 in 0..e {
            for i1 in 0..a {
                let xv = x.c[j1 * a + i1];
                if xv == 0 {
                    continue;
                }
                for j2 in 0..e {
                    for i2 in 0..a {
                        let yv = y.c[j2 * a + i2];
                        if yv == 0 {
                            continue;
                        }
                        let idx = (j1 + j2) * w + i1 + i2;
                        let s = acc[idx] + xv as u128 * yv as u128;
                        acc[idx] = if s >> 127 != 0 { s % self.pn as u128 } else { s };
                    }
                }
            }
        }
    }

    fn reduce_raw(&self, acc: &[u128]) -> TowerElem {
        let (a, e, m) = (self.a, self.e, self.pn);
        let w = 2 * a - 1;
        let h = 2 * e - 1;
        let mut r: Vec<u64> = acc.iter().map(|&v| (v % m as u128) as u64).collect();
        if a > 1 {
            for j in 0..h {
                for i in (a..w).rev() {
                    let c = r[j * w + i];
                    if c == 0 {
                        continue;
                    }
                    for k in 0..a {
                        let t = mulmod(c, self.unram[k], m);
                        let idx = j * w + i - a + k;
                        r[idx] = (r[idx] + m - t) % m;
                    }
                    r[j * w + i] = 0;
                }
            }
        }
        for j in e..h {
            for i in 0..a {
                let c = r[j * w + i];
                if c != 0 {
                    let t = mulmod(c, self.p, m);
                    let idx = (j - e) * w + i;
                    r[idx] = (r[idx] + m - t) % m;
                }
            }
        }
        let mut out = self.zero();
        for j in 0..e {
            for i in 0..a {
                out.c[j * a + i] = r[j * w + i];
            }
        }
        out
    }

    pub fn raw_len(&self) -> usize {
        (2 * self.e - 1) * (2 * self.a - 1)
    }

    pub fn mul(&self, x: &TowerElem, y: &TowerElem) -> TowerElem {
        let mut acc = vec![0u128; self.raw_len()];
        self.mul_raw(x, y, &mut acc);
        self.reduce_raw(&acc)
    }

    /// `Σ x_k y_k` with a single reduction.
    pub fn dot<'a>(&self, pairs: impl IntoIterator<Item = (&'a TowerElem, &'a TowerElem)>) -> TowerElem {
        let mut acc = vec![0u128; self.raw_len()];
        for (x, y) in pairs {
            self.mul_raw(x, y, &mut acc);
        }
        self.reduce_raw(&acc)
    }

    pub fn pow(&self, x: &TowerElem, mut e: u64) -> TowerElem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn valuation(&self, x: &TowerElem) -> Valuation {
        let cap = Q::from_integer(self.prec as i64);
        let mut best: Option<Q> = None;
        for j in 0..self.e {
            for i in 0..self.a {
                let c = x.c[j * self.a + i];
                if c == 0 {
                    continue;
                }
                let v = Q::new(ord_p_u64(c, self.p) as i64 * self.e as i64 + j as i64, self.e as i64);
                if best.is_none_or(|b| v < b) {
                    best = Some(v);
                }
            }
        }
        match best {
            Some(v) if v < cap => Valuation::Exact(v),
            _ => Valuation::AtLeast(cap),
        }
    }

    /// Valuation capped at the precision.
    pub fn val(&self, x: &TowerElem) -> Q {
        self.valuation(x).lower()
    }

    pub fn is_unit(&self, x: &TowerElem) -> bool {
        x.c[..self.a].iter().any(|v| v % self.p != 0)
    }

    pub fn inv(&self, x: &TowerElem) -> Result<TowerElem> {
        if !self.is_unit(x) {
            return Err(Error::NotUnit);
        }
        let r = self.residue(x).inv().ok_or(Error::NotUnit)?;
        let mut y = self.from_fq(&r);
        let one = self.one();
        for _ in 0..64 {
            let err = self.sub(&one, &self.mul(x, &y));
            if self.is_zero(&err) {
                return Ok(y);
            }
            y = self.add(&y, &self.mul(&y, &err));
        }
        Err(Error::NoConvergence("unit inverse".into()))
    }

    /// `x / p^k`, exact on coordinates; the top `k` digits of the result
    /// are not determined by `x`.
    pub fn div_p_pow(&self, x: &TowerElem, k: u32) -> Result<TowerElem> {
        let d = self.p.pow(k);
        if x.c.iter().any(|&v| v % d != 0) {
            return Err(Error::InexactDivision);
        }
        Ok(TowerElem { c: x.c.iter().map(|&v| v / d).collect() })
    }

    /// Reduces into a tower of lower (or equal) precision over the same field.
    pub fn reduce_to(&self, x: &TowerElem, target: &TowerParams) -> TowerElem {
        debug_assert!(target.p == self.p && target.a == self.a && target.prec <= self.prec);
        TowerElem { c: x.c.iter().map(|&v| v % target.pn).collect() }
    }

    /// Embeds an element of the `a = 1` tower over `F_p` (same precision
    /// or higher) into this tower.
    pub fn embed_prime(&self, x: &TowerElem, src: &TowerParams) -> TowerElem {
        debug_assert!(src.a == 1 && src.p == self.p);
        let mut z = self.zero();
        for j in 0..self.e {
            z.c[j * self.a] = x.c[j] % self.pn;
        }
        z
    }

    fn sigma_theta(&self) -> &TowerElem {
        self.sigma_theta.get_or_init(|| {
            // Hensel: root of the lifted modulus congruent to θ^p.
            let eval = |r: &TowerElem, coeffs: &[u64]| {
                let mut acc = self.zero();
                for &c in coeffs.iter().rev() {
                    acc = self.add(&self.mul(&acc, r), &self.from_int(c as i64));
                }
                acc
            };
            let deriv: Vec<u64> = (1..self.unram.len()).map(|k| self.unram[k] * k as u64).collect();
            let mut r = self.pow(&self.theta(), self.p);
            for _ in 0..=(self.prec as usize * self.e) {
                let fr = eval(&r, &self.unram);
                if self.is_zero(&fr) {
                    break;
                }
                let d = self.inv(&eval(&r, &deriv)).expect("separable residue modulus");
                r = self.sub(&r, &self.mul(&fr, &d));
            }
            r
        })
    }

    /// Absolute Frobenius on `Z_q`, identity on `π`.
    pub fn frobenius(&self, x: &TowerElem) -> TowerElem {
        if self.a == 1 {
            return x.clone();
        }
        let s = self.sigma_theta().clone();
        let mut powers = vec![self.one()];
        for i in 1..self.a {
            powers.push(self.mul(&powers[i - 1], &s));
        }
        let mut out = self.zero();
        for j in 0..self.e {
            let mut block = self.zero();
            for i in 0..self.a {
                let c = x.c[j * self.a + i];
                if c != 0 {
                    block = self.add(&block, &self.mul(&powers[i], &self.from_int_u64(c)));
                }
            }
            out = self.add(&out, &self.mul(&block, &self.pi_pow(j)));
        }
        out
    }

    fn from_int_u64(&self, c: u64) -> TowerElem {
        let mut z = self.zero();
        z.c[0] = c % self.pn;
        z
    }

    /// Coordinate matrix (rows `π^j`) followed by the valuation.
    pub fn describe(&self, x: &TowerElem) -> String {
        let rows: Vec<String> =
            (0..self.e).map(|j| format!("{:?}", &x.c[j * self.a..(j + 1) * self.a])).collect();
        format!("[{}] val {}", rows.join(", "), self.valuation(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    fn tower(p: u64, a: usize, n: u32) -> Arc<TowerParams> {
        TowerParams::new(&make_field(p, a).unwrap(), n).unwrap()
    }

    #[test]
    fn defining_relation() {
        for p in [2, 3, 5, 7] {
            let t = tower(p, 1, 6);
            let lhs = t.mul(&t.pi(), &t.pi_pow((p - 2) as usize));
            assert_eq!(lhs, t.from_int(-(p as i64)));
        }
    }

    #[test]
    fn valuations() {
        let t = tower(5, 1, 6);
        let x = t.mul(&t.from_int(5), &t.pi());
        assert_eq!(t.valuation(&x), Valuation::Exact(Q::new(5, 4)));
        assert_eq!(t.valuation(&t.zero()), Valuation::AtLeast(Q::from_integer(6)));
        // (1+π)^p - 1 - π^p has valuation at least p/(p-1) + ... > p/(p-1)
        let u = t.add(&t.one(), &t.pi());
        let d = t.sub(&t.sub(&t.pow(&u, 5), &t.one()), &t.pi_pow(5));
        assert!(t.val(&d) >= Q::new(5, 4));
    }

    #[test]
    fn inverse_and_units() {
        let t = tower(3, 2, 8);
        let x = t.add(&t.theta(), &t.mul(&t.pi(), &t.from_int(7)));
        let y = t.inv(&x).unwrap();
        assert_eq!(t.mul(&x, &y), t.one());
        assert_eq!(t.inv(&t.pi()).unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn frobenius_has_order_a() {
        let t = tower(3, 3, 6);
        let x = t.add(&t.theta(), &t.mul(&t.pi(), &t.pow(&t.theta(), 2)));
        let mut y = x.clone();
        for _ in 0..3 {
            y = t.frobenius(&y);
        }
        assert_eq!(y, x);
        assert_ne!(t.frobenius(&x), x);
        assert_eq!(t.frobenius(&t.from_int(17)), t.from_int(17));
        let s = t.frobenius(&t.theta());
        assert_eq!(t.residue(&s), t.residue(&t.pow(&t.theta(), 3)));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::gfq::make_field;
    use crate::padic::teichmuller_lift;

    fn tower(p: u64, a: usize) -> Arc<TowerParams> {
        TowerParams::new(&make_field(p, a).unwrap(), 5).unwrap()
    }

    fn elem(t: &TowerParams) -> impl Strategy<Value = TowerElem> {
        proptest::collection::vec(0..t.pn, t.dim).prop_map(|c| TowerElem { c })
    }

    fn case() -> impl Strategy<Value = (Arc<TowerParams>, TowerElem, TowerElem, TowerElem)> {
        prop_oneof![Just((3u64, 2usize)), Just((5, 1)), Just((2, 3)), Just((7, 1))].prop_flat_map(|(p, a)| {
            let t = tower(p, a);
            (Just(t.clone()), elem(&t), elem(&t), elem(&t))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms((t, x, y, z) in case()) {
            prop_assert_eq!(t.mul(&x, &y), t.mul(&y, &x));
            prop_assert_eq!(t.mul(&t.mul(&x, &y), &z), t.mul(&x, &t.mul(&y, &z)));
            prop_assert_eq!(t.mul(&x, &t.add(&y, &z)), t.add(&t.mul(&x, &y), &t.mul(&x, &z)));
            prop_assert_eq!(t.add(&x, &t.neg(&x)), t.zero());
            prop_assert_eq!(t.mul(&x, &t.one()), x);
        }

        #[test]
        fn valuation_additive((t, x, y, _z) in case()) {
            if let (Valuation::Exact(a), Valuation::Exact(b)) = (t.valuation(&x), t.valuation(&y)) {
                if a + b < Q::from_integer(t.prec as i64) {
                    prop_assert_eq!(t.valuation(&t.mul(&x, &y)), Valuation::Exact(a + b));
                }
            }
        }

        #[test]
        fn units_invert((t, x, _y, _z) in case()) {
            if t.is_unit(&x) {
                prop_assert_eq!(t.mul(&x, &t.inv(&x).unwrap()), t.one());
            }
        }

        #[test]
        fn frobenius_has_order_a((t, x, y, _z) in case()) {
            let mut fx = x.clone();
            for _ in 0..t.a {
                fx = t.frobenius(&fx);
            }
            prop_assert_eq!(fx, x.clone());
            prop_assert_eq!(t.frobenius(&t.mul(&x, &y)), t.mul(&t.frobenius(&x), &t.frobenius(&y)));
        }

        #[test]
        fn teichmuller_multiplicative(i in 0u64..9, j in 0u64..9) {
            let t = tower(3, 2);
            let (x, y) = (FqElem::from_index(&t.field, i), FqElem::from_index(&t.field, j));
            let (lx, ly) = (teichmuller_lift(&t, &x), teichmuller_lift(&t, &y));
            prop_assert_eq!(teichmuller_lift(&t, &x.mul(&y)), t.mul(&lx, &ly));
            prop_assert_eq!(t.pow(&lx, 9), lx.clone());
            prop_assert_eq!(t.residue(&lx), x);
        }
    }
}
