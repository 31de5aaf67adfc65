//! `Z[ζ_p]` on the basis `1, ζ, …, ζ^{p-2}`, and power series over it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    pub p: u64,
    pub coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// `ζ^k`, reduced.
    pub fn zeta_pow(p: u64, k: u64) -> Self {
        let mut counts = vec![0u64; p as usize];
        counts[(k % p) as usize] = 1;
        Self::from_counts(&counts)
    }

    /// `Σ_j c_j ζ^j` for residue counts `c_0..c_{p-1}`.
    pub fn from_counts(counts: &[u64]) -> Self {
        let p = counts.len() as u64;
        let last = BigInt::from(counts[p as usize - 1]);
        CycInt { p, coeffs: counts[..p as usize - 1].iter().map(|&c| BigInt::from(c) - &last).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer this equals, if any.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        let last = full[p - 1].clone();
        CycInt { p: self.p, coeffs: full[..p - 1].iter().map(|c| c - &last).collect() }
    }

    /// Exact division by a nonzero integer.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt { p: self.p, coeffs })
    }

    /// Coefficient strings for JSON output.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let s = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for s in &parts[1..] {
            if let Some(rest) = s.strip_prefix('-') {
                out += &format!(" - {rest}");
            } else {
                out += &format!(" + {s}");
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Truncated power series `Σ c_k t^k` over `Z[ζ_p]`.
pub type CycSeries = Vec<CycInt>;

pub fn series_mul(a: &[CycInt], b: &[CycInt], len: usize) -> CycSeries {
    let p = a[0].p;
    (0..len)
        .map(|k| {
            let mut acc = CycInt::zero(p);
            for i in 0..=k {
                if i < a.len() && k - i < b.len() {
                    acc = acc.add(&a[i].mul(&b[k - i]));
                }
            }
            acc
        })
        .collect()
}

/// Inverse of a series with constant term 1.
pub fn series_inv(a: &[CycInt], len: usize) -> CycSeries {
    let p = a[0].p;
    assert!(a[0] == CycInt::one(p));
    let mut out = vec![CycInt::one(p)];
    for k in 1..len {
        let mut acc = CycInt::zero(p);
        for i in 1..=k.min(a.len() - 1) {
            acc = acc.sub(&a[i].mul(&out[k - i]));
        }
        out.push(acc);
    }
    out
}

/// `L_0..L_{len-1}` of `exp(Σ S_m t^m / m)` from `sums = [S_1, S_2, …]`,
/// via `k L_k = Σ_{m=1}^{k} S_m L_{k-m}`.
pub fn lfun_series_from_sums(sums: &[CycInt], len: usize) -> Result<CycSeries> {
    if sums.len() + 1 < len {
        return Err(Error::InsufficientCoefficients { requested: len, available: sums.len() + 1 });
    }
    let p = sums.first().map(|s| s.p).unwrap_or(2);
    let mut l = vec![CycInt::one(p)];
    for k in 1..len {
        let mut acc = CycInt::zero(p);
        for m in 1..=k {
            acc = acc.add(&sums[m - 1].mul(&l[k - m]));
        }
        l.push(acc.div_exact(&BigInt::from(k)).ok_or(Error::NonIntegral(k))?);
    }
    Ok(l)
}

/// Serializable view of one sum.
#[derive(Debug, Clone, Serialize)]
pub struct SumJson {
    pub m: usize,
    pub counts: Vec<u64>,
    pub cyc: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_relations() {
        let z = CycInt::zeta_pow(5, 1);
        let mut acc = CycInt::one(5);
        for _ in 0..5 {
            acc = acc.mul(&z);
        }
        assert_eq!(acc, CycInt::one(5));
        let sum = (0..5).fold(CycInt::zero(5), |s, k| s.add(&CycInt::zeta_pow(5, k)));
        assert!(sum.is_zero());
        assert_eq!(CycInt::zeta_pow(2, 1), CycInt::from_int(2, -1));
    }

    #[test]
    fn series_from_constant_sums() {
        let s: Vec<CycInt> = (0..6).map(|_| CycInt::from_int(5, -1)).collect();
        let l = lfun_series_from_sums(&s, 6).unwrap();
        assert_eq!(l[1], CycInt::from_int(5, -1));
        assert!(l[2..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn series_of_trivial_torus_sum() {
        let q = 3i64;
        let s: Vec<CycInt> = (1..=6).map(|m| CycInt::from_int(3, q.pow(m) - 1)).collect();
        let l = lfun_series_from_sums(&s, 6).unwrap();
        // (1 - t)/(1 - qt) = 1 + Σ_{k≥1} (q^k - q^{k-1}) t^k
        for k in 1..6u32 {
            assert_eq!(l[k as usize], CycInt::from_int(3, q.pow(k) - q.pow(k - 1)));
        }
    }

    #[test]
    fn non_integral_is_flagged() {
        let s = vec![CycInt::from_int(3, 1), CycInt::from_int(3, 0)];
        assert_eq!(lfun_series_from_sums(&s, 3).unwrap_err(), Error::NonIntegral(2));
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![CycInt::one(3), CycInt::zeta_pow(3, 1), CycInt::from_int(3, 2)];
        let b = series_inv(&a, 5);
        let c = series_mul(&a, &b, 5);
        assert_eq!(c[0], CycInt::one(3));
        assert!(c[1..].iter().all(|x| x.is_zero()));
    }
}
