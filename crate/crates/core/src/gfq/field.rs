//! Prime fields, their extensions `F_q = F_p[g]/(modulus)`, and dense
//! polynomial helpers over `F_p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Trial-division primality check; desk-scale inputs only.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn pow_u64(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Polynomials over `F_p`, coefficients low-to-high, no trailing zeros.
pub mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    fn inv_mod(x: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = x % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                r[k + i] = (r[k + i] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        result
    }

    /// Rabin-style test: `f` of degree `d` is irreducible iff
    /// `gcd(f, x^(p^i) - x) = 1` for all `1 <= i <= d/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=d / 2 {
            xp = powmod(&xp, p as u128, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// `F_q` with `q = p^a`, presented as `F_p[g]/(modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub p: u64,
    pub a: usize,
    /// Monic, low-to-high, length `a + 1`.
    pub modulus: Vec<u64>,
    pub q: u64,
}

/// Lexicographically smallest (coefficients compared low-to-high) monic
/// irreducible polynomial of degree `deg` over `F_p`.
pub fn smallest_irreducible(p: u64, deg: usize) -> Vec<u64> {
    let total = p.pow(deg as u32);
    for idx in 0..total {
        // c_0 is the most significant digit of the lex order.
        let mut coeffs = vec![0u64; deg + 1];
        let mut rest = idx;
        for i in (0..deg).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[deg] = 1;
        if fp_poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds `F_{p^a}` with the lexicographically smallest irreducible modulus.
pub fn make_field(p: u64, a: usize) -> Result<Arc<FieldParams>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a == 0 {
        return Err(Error::InvalidParams("extension degree must be >= 1".into()));
    }
    let q = pow_u64(p, a as u32)
        .filter(|&q| q < (1 << 32))
        .ok_or_else(|| Error::InvalidParams(format!("q = {p}^{a} too large")))?;
    let modulus = smallest_irreducible(p, a);
    debug_assert!(fp_poly::is_irreducible(&modulus, p));
    Ok(Arc::new(FieldParams { p, a, modulus, q }))
}

/// An element of `F_q`, as the coefficient vector of a polynomial in `g`.
#[derive(Clone)]
pub struct FqElem {
    pub field: Arc<FieldParams>,
    /// Length `a`, entries in `[0, p)`.
    pub c: Vec<u64>,
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field.p == other.field.p
    }
}
impl Eq for FqElem {}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FqElem {
    pub fn zero(field: &Arc<FieldParams>) -> Self {
        FqElem { field: field.clone(), c: vec![0; field.a] }
    }

    pub fn from_int(field: &Arc<FieldParams>, n: i64) -> Self {
        let p = field.p as i64;
        let mut c = vec![0; field.a];
        c[0] = n.rem_euclid(p) as u64;
        FqElem { field: field.clone(), c }
    }

    /// The generator `g` (the class of the indeterminate).
    pub fn generator(field: &Arc<FieldParams>) -> Self {
        let mut e = Self::zero(field);
        if field.a == 1 {
            // g is the root of the degree-one modulus x + c0.
            e.c[0] = (field.p - field.modulus[0]) % field.p;
        } else {
            e.c[1] = 1;
        }
        e
    }

    fn from_poly(field: &Arc<FieldParams>, mut v: Vec<u64>) -> Self {
        v.resize(field.a, 0);
        FqElem { field: field.clone(), c: v }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// Base-`p` index `sum c_i p^i`; the enumeration order of field elements.
    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0, |acc, &x| acc * self.field.p + x)
    }

    pub fn from_index(field: &Arc<FieldParams>, mut idx: u64) -> Self {
        let mut c = vec![0; field.a];
        for ci in c.iter_mut() {
            *ci = idx % field.p;
            idx /= field.p;
        }
        FqElem { field: field.clone(), c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.field.p;
        let c = self.c.iter().zip(&o.c).map(|(x, y)| (x + y) % p).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        let c = self.c.iter().map(|x| (p - x) % p).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        let mut a = self.c.clone();
        let mut b = o.c.clone();
        fp_poly::trim(&mut a);
        fp_poly::trim(&mut b);
        Self::from_poly(f, fp_poly::mulmod(&a, &b, &f.modulus, f.p))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(&self.field, k))
    }

    pub fn pow(&self, e: u64) -> Self {
        let f = &self.field;
        let mut a = self.c.clone();
        fp_poly::trim(&mut a);
        Self::from_poly(f, fp_poly::powmod(&a, e as u128, &f.modulus, f.p))
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(self.field.q - 2))
    }

    /// Absolute trace `Tr_{F_q/F_p}` as an integer in `[0, p)`.
    pub fn trace(&self) -> u64 {
        let mut acc = Self::zero(&self.field);
        let mut x = self.clone();
        for _ in 0..self.field.a {
            acc = acc.add(&x);
            x = x.pow(self.field.p);
        }
        acc.c[0]
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.a == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let terms: Vec<String> = (0..self.field.a)
            .rev()
            .filter(|&i| self.c[i] != 0)
            .map(|i| match (i, self.c[i]) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            })
            .collect();
        match terms.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", terms[0]),
            _ => write!(f, "({})", terms.join(" + ")),
        }
    }
}
