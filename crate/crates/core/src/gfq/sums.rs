//! Exact exponential sums `S_m(X, f) = Σ_{x ∈ X(F_{q^m})} ψ(Tr f(x))`.

use rayon::prelude::*;
use serde::Serialize;

use super::cyc::CycInt;
use super::ext::ExtField;
use super::field::FqElem;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Default cap on enumerated points per sum.
pub const DEFAULT_POINT_CAP: u128 = 50_000_000;

/// `T^r × A^{n-r}`: coordinates `1..=r` are torus, the rest affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpaceSpec {
    pub n: usize,
    pub r: usize,
}

impl SpaceSpec {
    pub fn torus(n: usize) -> Self {
        SpaceSpec { n, r: n }
    }

    /// 1-based affine coordinates `S_r = {r+1, …, n}`.
    pub fn affine_coords(&self) -> Vec<usize> {
        (self.r + 1..=self.n).collect()
    }

    /// `|X(F_Q)|`.
    pub fn point_count(&self, size: u64) -> u128 {
        (size as u128 - 1).pow(self.r as u32) * (size as u128).pow((self.n - self.r) as u32)
    }
}

/// Residue tallies `c_j = #{x : Tr f(x) = j}` and the reduced sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSum {
    pub m: usize,
    pub counts: Vec<u64>,
    pub value: CycInt,
}

/// Rejects terms with a pole along an affine coordinate.
pub fn check_no_affine_poles(space: &SpaceSpec, f: &LaurentPoly<FqElem>) -> Result<()> {
    for (e, _) in f.terms() {
        if let Some(i) = (space.r..space.n).find(|&i| e[i] < 0) {
            return Err(Error::PoleInAffine(i + 1));
        }
    }
    Ok(())
}

/// `S_m(X, f)` by full enumeration, tallying absolute traces. Trace is
/// additive, so each term contributes independently.
pub fn exp_sum(space: &SpaceSpec, f: &LaurentPoly<FqElem>, m: usize, cap: u128) -> Result<ExpSum> {
    let field = f.terms().next().map(|(_, c)| c.field.clone());
    if f.n() != space.n || space.r > space.n {
        return Err(Error::InvalidParams(format!("polynomial in {} variables on a space of dimension {}", f.n(), space.n)));
    }
    check_no_affine_poles(space, f)?;
    let Some(field) = field else {
        return Err(Error::InvalidParams("zero polynomial carries no field; use exp_sum_in".into()));
    };
    exp_sum_in(space, f, &ExtField::new(&field, m)?, m, cap)
}

/// As [`exp_sum`], over an explicitly given `F_{q^m}` (works for `f = 0`).
pub fn exp_sum_in(space: &SpaceSpec, f: &LaurentPoly<FqElem>, ext: &ExtField, m: usize, cap: u128) -> Result<ExpSum> {
    check_no_affine_poles(space, f)?;
    let size = ext.size;
    let total = space.point_count(size);
    if total > cap {
        return Err(Error::EnumerationCap { points: total, cap });
    }
    let p = ext.p as usize;
    let n = space.n;
    let terms: Vec<(Vec<i64>, u32)> =
        f.terms().map(|(e, c)| (e.0.clone(), ext.embed(c))).filter(|(_, c)| *c != 0).collect();
    let order = ext.order() as i128;
    let radices: Vec<u64> = (0..n).map(|i| if i < space.r { size - 1 } else { size }).collect();
    let chunk = 4096u128;
    let nchunks = total.div_ceil(chunk);
    let counts = (0..nchunks)
        .into_par_iter()
        .fold(
            || vec![0u64; p],
            |mut acc, ci| {
                let start = ci * chunk;
                let end = (start + chunk).min(total);
                // Coordinates: torus entries hold discrete logs, affine entries hold indices.
                let mut coord = vec![0u64; n];
                let mut r = start;
                for i in 0..n {
                    coord[i] = (r % radices[i] as u128) as u64;
                    r /= radices[i] as u128;
                }
                for _ in start..end {
                    let mut tr = 0u64;
                    'term: for (e, c) in &terms {
                        let mut k = ext.log(*c) as i128;
                        for i in 0..n {
                            if e[i] == 0 {
                                continue;
                            }
                            let l = if i < space.r {
                                coord[i] as i128
                            } else if coord[i] == 0 {
                                continue 'term;
                            } else {
                                ext.log(coord[i] as u32) as i128
                            };
                            k += l * e[i] as i128;
                        }
                        tr += ext.trace(ext.exp(k.rem_euclid(order) as u64));
                    }
                    acc[(tr % p as u64) as usize] += 1;
                    for i in 0..n {
                        coord[i] += 1;
                        if coord[i] < radices[i] {
                            break;
                        }
                        coord[i] = 0;
                    }
                }
                acc
            },
        )
        .reduce(|| vec![0u64; p], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let value = CycInt::from_counts(&counts);
    Ok(ExpSum { m, counts, value })
}

/// `S_1..S_{m_max}`.
pub fn exp_sums(
    space: &SpaceSpec,
    f: &LaurentPoly<FqElem>,
    base: &super::FieldParams,
    m_max: usize,
    cap: u128,
) -> Result<Vec<ExpSum>> {
    (1..=m_max).map(|m| exp_sum_in(space, f, &ExtField::new(base, m)?, m, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::field::make_field;
    use super::*;
    use crate::laurent::parse_laurent;

    #[test]
    fn torus_examples() {
        let f5 = make_field(5, 1).unwrap();
        let x = parse_laurent("x1", 1, &f5).unwrap();
        let s = exp_sum(&SpaceSpec::torus(1), &x, 1, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(s.value, CycInt::from_int(5, -1));
        let f3 = make_field(3, 1).unwrap();
        let k = parse_laurent("x1 + x1^-1", 1, &f3).unwrap();
        let s = exp_sum(&SpaceSpec::torus(1), &k, 1, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(s.counts, vec![0, 1, 1]);
        assert_eq!(s.value, CycInt::zeta_pow(3, 1).add(&CycInt::zeta_pow(3, 2)));
    }

    #[test]
    fn zero_polynomial_counts_points() {
        let f = make_field(3, 2).unwrap();
        let z = LaurentPoly::<FqElem>::zero(1);
        for m in 1..=2 {
            let s = exp_sums(&SpaceSpec::torus(1), &z, &f, m, DEFAULT_POINT_CAP).unwrap();
            assert_eq!(s[m - 1].value, CycInt::from_int(3, 9i64.pow(m as u32) - 1));
        }
    }

    #[test]
    fn affine_pole_rejected_and_cap_enforced() {
        let f = make_field(3, 1).unwrap();
        let g = parse_laurent("x1 + x2^-1", 2, &f).unwrap();
        assert_eq!(exp_sum(&SpaceSpec { n: 2, r: 1 }, &g, 1, 100).unwrap_err(), Error::PoleInAffine(2));
        assert!(matches!(exp_sum(&SpaceSpec::torus(2), &g, 3, 10).unwrap_err(), Error::EnumerationCap { .. }));
    }

    #[test]
    fn disjoint_union_additivity() {
        // A^1 = T^1 ⊔ {0}.
        let f = make_field(5, 1).unwrap();
        let g = parse_laurent("x1^2 + 3*x1", 1, &f).unwrap();
        for m in 1..=2 {
            let a = exp_sum(&SpaceSpec { n: 1, r: 0 }, &g, m, DEFAULT_POINT_CAP).unwrap();
            let t = exp_sum(&SpaceSpec::torus(1), &g, m, DEFAULT_POINT_CAP).unwrap();
            assert_eq!(a.value, t.value.add(&CycInt::one(5)));
            assert_eq!(a.counts.iter().sum::<u64>(), 5u64.pow(m as u32));
        }
    }
}
