use num_traits::Zero;

use crate::padic::{TowerElem, TowerParams};
use crate::Q;

/// Truncated power series in `t` with a certified valuation per coefficient:
/// `val(true_k - coeffs[k]) >= cert[k]`.
#[derive(Debug, Clone)]
pub struct CertSeries {
    pub coeffs: Vec<TowerElem>,
    pub cert: Vec<Q>,
}

impl CertSeries {
    pub fn one(t: &TowerParams, len: usize, cert: Q) -> Self {
        let mut coeffs = vec![t.zero(); len];
        if len > 0 {
            coeffs[0] = t.one();
        }
        CertSeries { coeffs, cert: vec![cert; len] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lower bound on the valuation of the true coefficient.
    pub fn nu(&self, t: &TowerParams, k: usize) -> Q {
        t.val(&self.coeffs[k]).min(self.cert[k])
    }

    /// Computed valuation is below the certificate, so the true coefficient is nonzero.
    pub fn provably_nonzero(&self, t: &TowerParams, k: usize) -> bool {
        t.val(&self.coeffs[k]) < self.cert[k]
    }

    pub fn certified_zero(&self, t: &TowerParams, k: usize) -> bool {
        !self.provably_nonzero(t, k)
    }

    pub fn mul(&self, t: &TowerParams, o: &Self) -> Self {
        let len = self.len().min(o.len());
        let nu_a: Vec<Q> = (0..len).map(|k| self.nu(t, k)).collect();
        let nu_b: Vec<Q> = (0..len).map(|k| o.nu(t, k)).collect();
        let mut coeffs = Vec::with_capacity(len);
        let mut cert = Vec::with_capacity(len);
        for s in 0..len {
            coeffs.push(t.dot((0..=s).map(|i| (&self.coeffs[i], &o.coeffs[s - i]))));
            let c = (0..=s)
                .map(|i| (self.cert[i] + nu_b[s - i]).min(nu_a[i] + o.cert[s - i]))
                .min()
                .expect("nonempty");
            cert.push(c);
        }
        CertSeries { coeffs, cert }
    }

    /// Inverse of a series whose constant term is exactly 1.
    pub fn inv(&self, t: &TowerParams) -> Self {
        debug_assert!(self.cert.first().is_none_or(|c| !c.is_zero()));
        let len = self.len();
        let nu_a: Vec<Q> = (0..len).map(|k| self.nu(t, k)).collect();
        let mut out = CertSeries::one(t, len, self.cert.first().copied().unwrap_or_default());
        for s in 1..len {
            let acc = t.dot((1..=s).map(|i| (&self.coeffs[i], &out.coeffs[s - i])));
            out.coeffs[s] = t.neg(&acc);
            let c = (1..=s)
                .map(|i| {
                    let nu_b = t.val(&out.coeffs[s - i]).min(out.cert[s - i]);
                    (self.cert[i] + nu_b).min(nu_a[i] + out.cert[s - i])
                })
                .min()
                .expect("nonempty");
            out.cert[s] = c;
        }
        out
    }

    /// `self^k` for `k ∈ Z` (negative powers via [`Self::inv`]).
    pub fn pow(&self, t: &TowerParams, k: i64) -> Self {
        let base = if k < 0 { self.inv(t) } else { self.clone() };
        let mut acc = CertSeries::one(t, self.len(), self.cert.iter().copied().max().unwrap_or_default());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(t, &base);
        }
        acc
    }

    /// `t ↦ q^i t`: coefficient `s` gains `q^{is}`.
    pub fn subst_q_power(&self, t: &TowerParams, i: u32) -> Self {
        let q = t.field.q as i64;
        let a = t.a as i64;
        let mut coeffs = Vec::with_capacity(self.len());
        let mut cert = Vec::with_capacity(self.len());
        let mut scale = t.one();
        let step = t.pow(&t.from_int(q), i as u64);
        for s in 0..self.len() {
            coeffs.push(t.mul(&self.coeffs[s], &scale));
            cert.push(self.cert[s] + Q::from_integer(i as i64 * a * s as i64));
            scale = t.mul(&scale, &step);
        }
        CertSeries { coeffs, cert }
    }

    /// Caps every certificate.
    pub fn cap(mut self, c: Q) -> Self {
        for x in &mut self.cert {
            *x = (*x).min(c);
        }
        self
    }

    /// Logarithmic-derivative sums `S_m` from `L = exp(Σ S_m t^m / m)`:
    /// `S_m = m L_m - Σ_{k<m} S_k L_{m-k}`.
    pub fn power_sums(&self, t: &TowerParams) -> CertSeries {
        let len = self.len();
        let p = t.p;
        let mut coeffs = vec![t.zero(); len];
        let mut cert = vec![Q::zero(); len];
        for m in 1..len {
            let mut acc = t.mul_int(&self.coeffs[m], m as i64);
            let mut c = self.cert[m] + Q::from_integer(crate::padic::ord_p_u64(m as u64, p) as i64);
            for k in 1..m {
                acc = t.sub(&acc, &t.mul(&coeffs[k], &self.coeffs[m - k]));
                let nu_s = t.val(&coeffs[k]).min(cert[k]);
                c = c.min((cert[k] + self.nu(t, m - k)).min(nu_s + self.cert[m - k]));
            }
            coeffs[m] = acc;
            cert[m] = c;
        }
        CertSeries { coeffs, cert }
    }

    /// `val(self_k - other_k)` against `min(cert)` for each `k`.
    pub fn agrees_with(&self, t: &TowerParams, o: &Self) -> Vec<(Q, Q)> {
        (0..self.len().min(o.len()))
            .map(|k| (t.val(&t.sub(&self.coeffs[k], &o.coeffs[k])), self.cert[k].min(o.cert[k])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    #[test]
    fn inverse_of_one_minus_qt() {
        let t = TowerParams::new(&make_field(3, 1).unwrap(), 6).unwrap();
        let mut s = CertSeries::one(&t, 5, Q::from_integer(6));
        s.coeffs[1] = t.from_int(-3);
        let inv = s.inv(&t);
        for k in 0..5 {
            assert_eq!(inv.coeffs[k], t.from_int(3i64.pow(k as u32)));
        }
        let back = inv.mul(&t, &s);
        assert_eq!(back.coeffs[1], t.zero());
    }

    #[test]
    fn power_sums_of_geometric() {
        // 1/(1-3t): S_m = 3^m
        let t = TowerParams::new(&make_field(3, 1).unwrap(), 8).unwrap();
        let mut s = CertSeries::one(&t, 5, Q::from_integer(8));
        s.coeffs[1] = t.from_int(-3);
        let ps = s.inv(&t).power_sums(&t);
        for m in 1..5 {
            assert_eq!(ps.coeffs[m], t.from_int(3i64.pow(m as u32)));
            assert!(ps.cert[m] >= Q::from_integer(8));
        }
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::gfq::make_field;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inverse_is_two_sided(c in proptest::collection::vec(-50i64..50, 1..6), k in 0u32..3) {
            let t = TowerParams::new(&make_field(5, 1).unwrap(), 6).unwrap();
            let mut s = CertSeries::one(&t, 6, Q::from_integer(6));
            for (i, &x) in c.iter().enumerate() {
                s.coeffs[i + 1] = t.from_int(x);
            }
            s.coeffs[0] = t.one();
            let s = s.subst_q_power(&t, k);
            let prod = s.mul(&t, &s.inv(&t));
            prop_assert_eq!(&prod.coeffs[0], &t.one());
            for j in 1..6 {
                prop_assert!(t.is_zero(&prod.coeffs[j]));
                prop_assert!(prod.cert[j] >= Q::from_integer(6));
            }
        }
    }
}
