//! The root `γ` of `Σ t^{p^i}/p^i`, the Artin–Hasse splitting function
//! `θ(t) = E(γt)`, and Dwork's `exp(π(t - t^p))`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::tower::{TowerElem, TowerParams};
use crate::error::{Error, Result};
use crate::gfq::make_field;
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplittingKind {
    ArtinHasse,
    DworkExp,
}

impl fmt::Display for SplittingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingKind::ArtinHasse => "artin-hasse",
            SplittingKind::DworkExp => "dwork-exp",
        })
    }
}

impl FromStr for SplittingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "artin-hasse" | "ah" => Ok(SplittingKind::ArtinHasse),
            "dwork-exp" | "dwork" => Ok(SplittingKind::DworkExp),
            _ => Err(Error::InvalidParams(format!("unknown splitting function {s:?}"))),
        }
    }
}

impl SplittingKind {
    /// Proven slope of `ord λ_i` in `i`.
    pub fn slope(&self, p: u64) -> Q {
        let p = p as i64;
        match self {
            SplittingKind::ArtinHasse => Q::new(1, p - 1),
            SplittingKind::DworkExp => Q::new(p - 1, p * p),
        }
    }

    /// Smallest `i` past which every coefficient vanishes mod `p^prec`.
    pub fn default_i_max(&self, p: u64, prec: u32) -> usize {
        (Q::from_integer(prec as i64) / self.slope(p)).ceil().to_integer() as usize
    }
}

/// Number of terms `I` of `Σ_{i≤I} t^{p^i}/p^i` that matter mod `p^prec`
/// near `t = γ`: later terms have valuation `p^i/(p-1) - i >= prec`.
pub fn series_terms(p: u64, prec: u32) -> u32 {
    let mut i = 0u32;
    loop {
        let next = i + 1;
        let v = Q::new(p.pow(next) as i64, p as i64 - 1) - Q::from_integer(next as i64);
        if v >= Q::from_integer(prec as i64) {
            return i;
        }
        i = next;
    }
}

fn truncate(t: &TowerParams, x: &TowerElem, digits: u32) -> TowerElem {
    let m = t.p.pow(digits);
    TowerElem { c: x.c.iter().map(|v| v % m).collect() }
}

/// Solves in the prime tower at precision `prec + I + 1`, returning `γ`
/// correct mod `p^{prec+1}` together with that tower.
fn gamma_aux(p: u64, prec: u32, newton: bool) -> Result<(Arc<TowerParams>, TowerElem, u32)> {
    let terms = series_terms(p, prec + 1);
    let keep = prec + 1;
    let t1 = TowerParams::new(&make_field(p, 1)?, keep + terms)?;
    let powers = |x: &TowerElem| -> Result<Vec<TowerElem>> {
        let mut out = vec![x.clone()];
        for i in 1..=terms as usize {
            out.push(t1.pow(&out[i - 1], p));
        }
        Ok(out)
    };
    let mut x = if newton { t1.pi() } else { t1.add(&t1.pi(), &t1.pi_pow(2)) };
    let cap = if newton { 200 } else { 64 + 4 * (keep as usize) * t1.e };
    for _ in 0..cap {
        let pw = powers(&x)?;
        let mut next;
        if newton {
            let mut g = t1.zero();
            let mut dg = t1.zero();
            for i in 0..=terms as usize {
                g = t1.add(&g, &t1.div_p_pow(&pw[i], i as u32)?);
                let exp = p.pow(i as u32) - 1;
                dg = t1.add(&dg, &t1.pow(&x, exp));
            }
            next = t1.sub(&x, &t1.mul(&g, &t1.inv(&dg)?));
        } else {
            next = t1.zero();
            for i in 1..=terms as usize {
                next = t1.sub(&next, &t1.div_p_pow(&pw[i], i as u32)?);
            }
        }
        next = truncate(&t1, &next, keep);
        if next == x {
            return Ok((t1, x, terms));
        }
        x = next;
    }
    Err(Error::NoConvergence("root of the Artin-Hasse exponent series".into()))
}

/// `γ` by Newton iteration from `π`, embedded in `t`.
pub fn gamma_root(t: &TowerParams) -> Result<TowerElem> {
    let (t1, g, _) = gamma_aux(t.p, t.prec, true)?;
    Ok(t.embed_prime(&g, &t1))
}

/// `γ` by the fixed-point iteration `t ← -Σ_{i≥1} t^{p^i}/p^i` from `π + π^2`.
pub fn gamma_fixed_point(t: &TowerParams) -> Result<TowerElem> {
    let (t1, g, _) = gamma_aux(t.p, t.prec, false)?;
    Ok(t.embed_prime(&g, &t1))
}

/// Residual `Σ_{i≤I} γ^{p^i}/p^i` at the output precision (should vanish).
pub fn gamma_series_residual(t: &TowerParams, gamma: &TowerElem) -> Result<TowerElem> {
    Ok(partial_sums_of(t, gamma, series_terms(t.p, t.prec))?.pop().expect("nonempty"))
}

/// `γ_l = Σ_{i≤l} γ^{p^i}/p^i` for `l = 0..=L`, where `γ_l ≡ 0` mod `p^prec`
/// for all `l > L`.
pub fn gamma_partial_sums(t: &TowerParams) -> Result<Vec<TowerElem>> {
    let p = t.p;
    let mut last = 0u32;
    while {
        let l1 = last + 1;
        Q::new(p.pow(l1) as i64, p as i64 - 1) - Q::from_integer(l1 as i64) < Q::from_integer(t.prec as i64)
    } {
        last += 1;
    }
    partial_sums_of(t, &gamma_root(t)?, last)
}

fn partial_sums_of(t: &TowerParams, gamma: &TowerElem, last: u32) -> Result<Vec<TowerElem>> {
    // Quotients by p^i need i extra digits; γ mod p^prec fixes γ^{p^i}/p^i mod p^prec.
    let hi = TowerParams::new(&make_field(t.p, 1)?, t.prec + last)?;
    let mut g = hi.zero();
    for j in 0..hi.e {
        g.c[j] = gamma.c[j * t.a];
    }
    let mut out = Vec::new();
    let mut acc = hi.zero();
    let mut pw = g;
    for i in 0..=last {
        if i > 0 {
            pw = hi.pow(&pw, t.p);
        }
        acc = hi.add(&acc, &hi.div_p_pow(&pw, i)?);
        out.push(t.embed_prime(&acc, &hi));
    }
    Ok(out)
}

/// Artin–Hasse coefficients `E_0..E_{count-1}` from `i E_i = Σ_j E_{i-p^j}`.
pub fn artin_hasse_coeffs(p: u64, count: usize) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for i in 1..count {
        let mut acc = BigRational::zero();
        let mut pj = 1usize;
        while pj <= i {
            acc += &e[i - pj];
            pj *= p as usize;
        }
        e.push(acc / BigRational::from_integer(BigInt::from(i)));
    }
    e
}

/// `π^k / k!`, exactly: with `k! = p^v u`, this is `(-1)^v π^{k - v(p-1)} / u`.
pub fn pi_pow_div_factorial(t: &TowerParams, k: usize) -> TowerElem {
    let p = t.p as usize;
    let mut v = 0usize;
    let mut u = t.one();
    for i in 2..=k {
        let mut m = i;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        u = t.mul_int(&u, m as i64);
    }
    let r = t.mul(&t.pi_pow(k - v * (p - 1)), &t.inv(&u).expect("prime-to-p factorial part"));
    if v % 2 == 1 {
        t.neg(&r)
    } else {
        r
    }
}

#[derive(Debug, Clone)]
pub struct SplittingCoeffs {
    pub kind: SplittingKind,
    /// `λ_0..λ_{i_max}`; all later coefficients vanish at this precision.
    pub lambda: Vec<TowerElem>,
}

/// `θ(t) = Σ λ_i t^i` for the chosen splitting function.
pub fn splitting_coefficients(kind: SplittingKind, i_max: usize, t: &TowerParams) -> Result<SplittingCoeffs> {
    let default = kind.default_i_max(t.p, t.prec);
    if i_max > 4 * default + 8 {
        return Err(Error::InvalidParams(format!(
            "i_max = {i_max} exceeds what precision {} can resolve (about {default})",
            t.prec
        )));
    }
    let lambda = match kind {
        SplittingKind::ArtinHasse => {
            let gamma = gamma_root(t)?;
            let e = artin_hasse_coeffs(t.p, i_max + 1);
            let mut gp = t.one();
            let mut out = Vec::with_capacity(i_max + 1);
            for ei in &e {
                out.push(t.mul(&t.from_ratio(ei.numer(), ei.denom())?, &gp));
                gp = t.mul(&gp, &gamma);
            }
            out
        }
        SplittingKind::DworkExp => {
            // exp(π(t - t^p)) = Σ_k π^k/k! Σ_j C(k,j) (-1)^j t^{k + j(p-1)}
            let e = t.e;
            let pk: Vec<TowerElem> = (0..=i_max).map(|k| pi_pow_div_factorial(t, k)).collect();
            (0..=i_max)
                .map(|i| {
                    let mut acc = t.zero();
                    let mut j = 0usize;
                    while j * e <= i {
                        let k = i - j * e;
                        if j <= k {
                            let c = num_integer::binomial(BigInt::from(k), BigInt::from(j));
                            let c = if j % 2 == 1 { -c } else { c };
                            acc = t.add(&acc, &t.mul(&pk[k], &t.from_bigint(&c)));
                        }
                        j += 1;
                    }
                    acc
                })
                .collect()
        }
    };
    Ok(SplittingCoeffs { kind, lambda })
}

impl SplittingCoeffs {
    /// `θ(1) = Σ λ_i`, the image of `ζ_p`.
    pub fn theta_one(&self, t: &TowerParams) -> TowerElem {
        self.lambda.iter().fold(t.zero(), |acc, l| t.add(&acc, l))
    }
}

/// `Φ_p(z) = 1 + z + … + z^{p-1}`.
pub fn cyclotomic_value(t: &TowerParams, z: &TowerElem) -> TowerElem {
    let mut acc = t.zero();
    let mut pw = t.one();
    for _ in 0..t.p {
        acc = t.add(&acc, &pw);
        pw = t.mul(&pw, z);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    fn tower(p: u64, a: usize, n: u32) -> Arc<TowerParams> {
        TowerParams::new(&make_field(p, a).unwrap(), n).unwrap()
    }

    #[test]
    fn gamma_two_solvers_agree() {
        for p in [2, 3, 5, 7] {
            let t = tower(p, 1, 6);
            let g = gamma_root(&t).unwrap();
            assert_eq!(g, gamma_fixed_point(&t).unwrap());
            let d = t.sub(&g, &t.pi());
            assert!(t.val(&d) >= Q::new(2, p as i64 - 1));
            assert!(t.is_zero(&gamma_series_residual(&t, &g).unwrap()));
        }
    }

    #[test]
    fn artin_hasse_low_terms() {
        let e = artin_hasse_coeffs(3, 5);
        assert_eq!(e[1], BigRational::one());
        assert_eq!(e[2], BigRational::new(1.into(), 2.into()));
        // E_3 = 1/6 + 1/3
        assert_eq!(e[3], BigRational::new(1.into(), 2.into()));
        for c in &e {
            assert!(c.denom() % BigInt::from(3) != BigInt::zero());
        }
    }

    #[test]
    fn lambda_low_terms_and_theta_one() {
        for p in [2, 3, 5] {
            for kind in [SplittingKind::ArtinHasse, SplittingKind::DworkExp] {
                let t = tower(p, 1, 8);
                let s = splitting_coefficients(kind, kind.default_i_max(p, 8), &t).unwrap();
                assert_eq!(s.lambda[0], t.one());
                let z = s.theta_one(&t);
                assert!(t.is_zero(&cyclotomic_value(&t, &z)), "{kind} p={p}");
                assert_ne!(z, t.one());
                let slope = kind.slope(p);
                for (i, l) in s.lambda.iter().enumerate() {
                    let bound = (slope * Q::from_integer(i as i64)).min(Q::from_integer(8));
                    assert!(t.val(l) >= bound);
                }
            }
        }
    }

    #[test]
    fn splitting_functions_share_zeta() {
        let t = tower(5, 1, 8);
        let a = splitting_coefficients(SplittingKind::ArtinHasse, 40, &t).unwrap();
        let d = splitting_coefficients(SplittingKind::DworkExp, 60, &t).unwrap();
        assert_eq!(a.theta_one(&t), d.theta_one(&t));
        assert_eq!(a.lambda[1], gamma_root(&t).unwrap());
        assert_eq!(d.lambda[1], t.pi());
    }

    #[test]
    fn partial_sums() {
        let t = tower(3, 1, 8);
        let g = gamma_partial_sums(&t).unwrap();
        assert_eq!(g[0], gamma_root(&t).unwrap());
        for (l, gl) in g.iter().enumerate() {
            let bound = Q::new(3i64.pow(l as u32 + 1), 2) - Q::from_integer(l as i64 + 1);
            assert!(t.val(gl) >= bound.min(Q::from_integer(8)));
        }
    }
}
