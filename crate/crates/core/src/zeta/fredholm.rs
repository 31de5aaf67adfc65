use rayon::prelude::*;

use super::certseries::CertSeries;
use crate::dwork::Mat;
use crate::error::Result;
use crate::padic::{ord_p_u64, TowerElem, TowerParams};
use crate::Q;

/// Guard digits lost to the divisions in Newton's identities up to `t_deg`.
pub fn guard_digits(p: u64, t_deg: usize) -> u32 {
    (1..=t_deg as u64).map(|k| ord_p_u64(k, p)).sum::<u32>() + 1
}

/// `Tr(M^j)` for `j = 1..=count`, from powers up to `ceil(count/2)`.
pub fn power_traces(t: &TowerParams, m: &Mat, count: usize) -> Vec<TowerElem> {
    let half = count.div_ceil(2);
    let mut powers = vec![Mat::identity(t, m.rows)];
    for k in 1..=half {
        let next = if k == 1 { m.clone() } else { powers[k - 1].mul(t, m) };
        powers.push(next);
    }
    (1..=count)
        .into_par_iter()
        .map(|j| {
            let hi = j.div_ceil(2);
            let lo = j / 2;
            if lo == 0 {
                powers[hi].trace(t)
            } else {
                powers[hi].trace_of_product(t, &powers[lo])
            }
        })
        .collect()
}

/// `det(I - tM)` to order `t^{t_deg}` by Newton's identities
/// `s c_s = -Σ_{j=1}^{s} Tr(M^j) c_{s-j}`. `t` must carry the guard digits;
/// `cert` is the truncation floor per coefficient.
pub fn fredholm_det(t: &TowerParams, m: &Mat, t_deg: usize, cert: Vec<Q>) -> Result<CertSeries> {
    let traces = power_traces(t, m, t_deg);
    let mut c = vec![t.one()];
    for s in 1..=t_deg {
        let acc = t.neg(&t.dot((1..=s).map(|j| (&traces[j - 1], &c[s - j]))));
        let v = ord_p_u64(s as u64, t.p);
        let unit = (s as u64 / t.p.pow(v)) as i64;
        let shifted = t.div_p_pow(&acc, v)?;
        c.push(t.mul(&shifted, &t.inv(&t.from_int(unit))?));
    }
    Ok(CertSeries { coeffs: c, cert })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;
    use crate::polytope::combinations;

    /// Coefficient of `t^s` as `(-1)^s Σ` of principal `s`-minors (Laplace expansion).
    fn minor_oracle(t: &TowerParams, m: &Mat, s: usize) -> TowerElem {
        fn det(t: &TowerParams, rows: &[Vec<TowerElem>]) -> TowerElem {
            if rows.is_empty() {
                return t.one();
            }
            let mut acc = t.zero();
            for (j, x) in rows[0].iter().enumerate() {
                let minor: Vec<Vec<TowerElem>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = t.mul(x, &det(t, &minor));
                acc = if j % 2 == 0 { t.add(&acc, &term) } else { t.sub(&acc, &term) };
            }
            acc
        }
        let mut acc = t.zero();
        for idx in combinations(m.rows, s) {
            let rows: Vec<Vec<TowerElem>> =
                idx.iter().map(|&r| idx.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
            acc = t.add(&acc, &det(t, &rows));
        }
        if s % 2 == 1 {
            t.neg(&acc)
        } else {
            acc
        }
    }

    #[test]
    fn zero_matrix_gives_one() {
        let t = TowerParams::new(&make_field(3, 1).unwrap(), 6).unwrap();
        let m = Mat::zeros(&t, 3, 3);
        let d = fredholm_det(&t, &m, 4, vec![Q::from_integer(5); 5]).unwrap();
        assert_eq!(d.coeffs[0], t.one());
        assert!(d.coeffs[1..].iter().all(|c| t.is_zero(c)));
    }

    #[test]
    fn newton_identities_match_minors() {
        let t = TowerParams::new(&make_field(3, 1).unwrap(), 10).unwrap();
        let vals = [[1, 3, -2, 5], [0, 2, 7, 1], [4, -1, 3, 9], [2, 6, 0, -3]];
        let mut m = Mat::zeros(&t, 4, 4);
        for (r, row) in vals.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let x = t.add(&t.from_int(v), &t.mul(&t.pi(), &t.from_int(r as i64 + c as i64)));
                m.set(r, c, x);
            }
        }
        let tdeg = 4;
        let d = fredholm_det(&t, &m, tdeg, vec![Q::from_integer(10); tdeg + 1]).unwrap();
        let low = t.with_prec(10 - guard_digits(3, tdeg)).unwrap();
        for s in 1..=tdeg {
            let a = t.reduce_to(&d.coeffs[s], &low);
            let b = t.reduce_to(&minor_oracle(&t, &m, s), &low);
            assert_eq!(a, b, "t^{s}");
        }
        assert_eq!(d.coeffs[1], t.neg(&m.trace(&t)));
    }
}
