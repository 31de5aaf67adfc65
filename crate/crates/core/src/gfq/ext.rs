//! `F_{q^m}` as a single extension of `F_p`, with exp/log/trace tables.
//! Elements are addressed by their base-`p` index.

use super::field::{fp_poly, pow_u64, prime_factors, smallest_irreducible, FieldParams, FqElem};
use crate::error::{Error, Result};

/// Largest field size for which tables are built.
pub const MAX_TABLE_SIZE: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct ExtField {
    pub p: u64,
    pub degree: usize,
    pub size: u64,
    pub modulus: Vec<u64>,
    /// `exp[k]` = index of `ρ^k` for a fixed primitive element `ρ`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`.
    log: Vec<u32>,
    /// Absolute trace to `F_p`, by index.
    trace: Vec<u8>,
    /// Index of the image of the base-field generator `g`.
    base_gen: u32,
    base: FieldParams,
}

fn to_poly(idx: u64, p: u64, deg: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg);
    let mut r = idx;
    for _ in 0..deg {
        v.push(r % p);
        r /= p;
    }
    fp_poly::trim(&mut v);
    v
}

fn to_index(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl ExtField {
    /// `F_{q^m}` for `F_q` given by `base`.
    pub fn new(base: &FieldParams, m: usize) -> Result<Self> {
        let p = base.p;
        let degree = base.a * m;
        let size = pow_u64(p, degree as u32)
            .filter(|&s| s <= MAX_TABLE_SIZE)
            .ok_or(Error::EnumerationCap { points: u128::MAX, cap: MAX_TABLE_SIZE as u128 })?;
        let modulus = if m == 1 { base.modulus.clone() } else { smallest_irreducible(p, degree) };
        let order = size - 1;
        let factors = prime_factors(order);
        let prim = (1..size)
            .find(|&i| {
                let x = to_poly(i, p, degree);
                factors.iter().all(|&l| {
                    let y = fp_poly::powmod(&x, (order / l) as u128, &modulus, p);
                    y != vec![1]
                })
            })
            .expect("multiplicative group is cyclic");
        let rho = to_poly(prim, p, degree);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; size as usize];
        let mut cur = vec![1u64];
        for k in 0..order {
            let idx = to_index(&cur, p);
            exp.push(idx as u32);
            log[idx as usize] = k as u32;
            cur = fp_poly::mulmod(&cur, &rho, &modulus, p);
        }
        // Trace is F_p-linear: tabulate on the power basis, then extend.
        let basis_tr: Vec<u64> = (0..degree)
            .map(|i| {
                let mut e = vec![0u64; i + 1];
                e[i] = 1;
                let mut acc = vec![];
                let mut y = fp_poly::rem(&e, &modulus, p);
                for _ in 0..degree {
                    acc = fp_poly::sub(&acc, &fp_poly::sub(&[], &y, p), p);
                    y = fp_poly::powmod(&y, p as u128, &modulus, p);
                }
                acc.first().copied().unwrap_or(0)
            })
            .collect();
        let trace = (0..size)
            .map(|idx| {
                let mut r = idx;
                let mut t = 0u64;
                for b in &basis_tr {
                    t += (r % p) * b;
                    r /= p;
                }
                (t % p) as u8
            })
            .collect();
        let mut f = ExtField {
            p,
            degree,
            size,
            modulus,
            exp,
            log,
            trace,
            base_gen: 0,
            base: base.clone(),
        };
        f.base_gen = if base.a == 1 {
            0
        } else {
            (1..size as u32)
                .find(|&x| {
                    let mut acc = 0u32;
                    for c in base.modulus.iter().rev() {
                        acc = f.add(f.mul(acc, x), f.from_fp(*c));
                    }
                    acc == 0
                })
                .expect("F_q embeds in F_{q^m}")
        };
        Ok(f)
    }

    pub fn order(&self) -> u64 {
        self.size - 1
    }

    pub fn from_fp(&self, c: u64) -> u32 {
        (c % self.p) as u32
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        let (mut x, mut y) = (x as u64, y as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let k = (self.log[x as usize] as u64 + self.log[y as usize] as u64) % self.order();
        self.exp[k as usize]
    }

    pub fn log(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        self.log[x as usize]
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % self.order()) as usize]
    }

    pub fn trace(&self, x: u32) -> u64 {
        self.trace[x as usize] as u64
    }

    /// `x^e` for `x != 0`, any integer `e`.
    pub fn pow_nonzero(&self, x: u32, e: i64) -> u32 {
        let o = self.order() as i128;
        let k = (self.log[x as usize] as i128 * e as i128).rem_euclid(o);
        self.exp[k as usize]
    }

    /// Image of an `F_q` element.
    pub fn embed(&self, x: &FqElem) -> u32 {
        debug_assert_eq!(x.field.modulus, self.base.modulus);
        if self.base.a == 1 {
            return self.from_fp(x.c[0]);
        }
        let mut acc = 0u32;
        for &c in x.c.iter().rev() {
            acc = self.add(self.mul(acc, self.base_gen), self.from_fp(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::make_field;
    use super::*;

    #[test]
    fn tables_consistent() {
        let f = make_field(3, 2).unwrap();
        let e = ExtField::new(&f, 2).unwrap();
        assert_eq!(e.size, 81);
        for x in 1..81u32 {
            assert_eq!(e.exp(e.log(x) as u64), x);
            assert_eq!(e.pow_nonzero(x, 80), 1);
        }
        // Tr(1) = degree mod p.
        assert_eq!(e.trace(1), 4 % 3);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f = make_field(2, 2).unwrap();
        let e = ExtField::new(&f, 3).unwrap();
        let elems: Vec<FqElem> = (0..4).map(|i| FqElem::from_index(&f, i)).collect();
        for x in &elems {
            for y in &elems {
                assert_eq!(e.embed(&x.mul(y)), e.mul(e.embed(x), e.embed(y)));
                assert_eq!(e.embed(&x.add(y)), e.add(e.embed(x), e.embed(y)));
            }
        }
    }

    #[test]
    fn trace_restricts_to_base_trace_times_m() {
        let f = make_field(3, 2).unwrap();
        let e = ExtField::new(&f, 2).unwrap();
        for i in 0..9 {
            let x = FqElem::from_index(&f, i);
            assert_eq!(e.trace(e.embed(&x)), (2 * x.trace()) % 3);
        }
    }
}
