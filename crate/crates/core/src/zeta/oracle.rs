use super::lfun::{zeta_p, LFunctionReport, OracleLine};
use crate::error::Result;
use crate::fmt_q;
use crate::gfq::CycInt;
use crate::padic::{TowerElem, TowerParams};

/// `Σ c_i ζ_p^i ↦ Σ c_i θ(1)^i`.
pub fn embed_cyclotomic(t: &TowerParams, zeta: &TowerElem, x: &CycInt) -> TowerElem {
    let mut acc = t.zero();
    let mut pw = t.one();
    for c in &x.coeffs {
        acc = t.add(&acc, &t.mul(&pw, &t.from_bigint(c)));
        pw = t.mul(&pw, zeta);
    }
    acc
}

/// Compares the coefficients of `d/dt log L` (the sums `S_m`, read off
/// `L` by Newton's identities) against exact sums `S_1, S_2, …`, for
/// `m <= min(len, t_deg)`. Stores and returns the per-`m` lines.
pub fn verify_against_oracle(report: &mut LFunctionReport, sums: &[CycInt]) -> Result<Vec<OracleLine>> {
    let t = report.tower.clone();
    let zeta = zeta_p(&t)?;
    let ps = report.l_series.power_sums(&t).cap(crate::Q::from_integer(report.params.prec as i64));
    let mut out = Vec::new();
    for (i, s) in sums.iter().enumerate() {
        let m = i + 1;
        if m >= ps.len() {
            break;
        }
        let resid = t.sub(&ps.coeffs[m], &embed_cyclotomic(&t, &zeta, s));
        let v = t.val(&resid);
        let floor = ps.cert[m];
        out.push(OracleLine { m, residual_val: fmt_q(&v), floor: fmt_q(&floor), pass: v >= floor });
    }
    report.oracle = out.clone();
    Ok(out)
}
