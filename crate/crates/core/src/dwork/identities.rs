//! Truncated forms of the exact operator identities, checked as residual
//! valuation floors. For a product `A B` truncated to `w <= W`, the lost
//! terms run over intermediate `z` with `w(z) >= w_next`; each floor below
//! bounds those terms for a fixed source column `u`.

use num_traits::Zero;
use serde::Serialize;

use super::matrix::Mat;
use super::operators::{frobenius_matrix, koszul_boundaries, multiplication_matrix, twisted_derivation, TruncatedSpace};
use super::series::{b_0, b_f, DworkData};
use crate::error::Result;
use crate::gfq::FqElem;
use crate::padic::TowerParams;
use crate::{fmt_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `α∘D̂_i - q D̂_i∘α`
    ChainMap,
    /// `α_1 - R α R^{-1}`
    Conjugation,
    /// `D_i - R D̂_i R^{-1}`
    DerivationConjugation,
    /// `[D̂_i, D̂_j]`
    HatCommutator,
    /// `[D_i, D_j]`
    PiCommutator,
    /// `∂_k ∂_{k+1}` on the `D̂` Koszul complex
    KoszulSquare,
}

/// Residual floor for source column of weight `wu`, capped at `N`.
pub fn floor(id: Identity, t: &TowerParams, sp: &TruncatedSpace, wu: Q) -> Q {
    let cap = Q::from_integer(t.prec as i64);
    let Some(wn) = sp.w_next else { return cap };
    let p = t.p;
    let q = t.field.q;
    let qq = Q::from_integer(q as i64);
    let inv_e = Q::new(1, p as i64 - 1);
    let bf = b_f(p, q);
    let b0 = b_0(p);
    let v = match id {
        Identity::ChainMap => (inv_e * (wn - wu)).min(Q::from_integer(t.a as i64) + bf * (qq * wn - wu)),
        Identity::Conjugation => (b0 * (wn - wu)).min(bf.min(b0) * (qq * wn - wu)),
        Identity::DerivationConjugation => b0 * (wn - wu),
        Identity::HatCommutator | Identity::KoszulSquare => inv_e * (wn - wu),
        Identity::PiCommutator => {
            if wu + Q::from_integer(1) <= sp.cutoff {
                cap
            } else {
                Q::new(2, p as i64 - 1)
            }
        }
    };
    v.min(cap)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualCheck {
    pub identity: Identity,
    pub label: String,
    pub columns: usize,
    /// Columns whose floor is positive (the safe sub-basis).
    pub safe_columns: usize,
    pub passed: bool,
    /// Smallest `val - floor` over safe columns.
    pub worst_margin: Option<String>,
    pub failures: Vec<String>,
}

/// Compares each column of `residual` against the floor; `dim` is the
/// basis size (columns of block matrices are reduced mod `dim`).
pub fn check_residual(id: Identity, label: &str, t: &TowerParams, sp: &TruncatedSpace, residual: &Mat) -> ResidualCheck {
    let dim = sp.len();
    let mut safe = 0;
    let mut worst: Option<Q> = None;
    let mut failures = Vec::new();
    for c in 0..residual.cols {
        let fl = floor(id, t, sp, sp.weight(c % dim));
        if fl <= Q::zero() {
            continue;
        }
        safe += 1;
        let v = residual.column_val(t, c);
        let m = v - fl;
        if worst.is_none_or(|w| m < w) {
            worst = Some(m);
        }
        if v < fl && failures.len() < 8 {
            failures.push(format!("column {c}: val {} < floor {}", fmt_q(&v), fmt_q(&fl)));
        }
    }
    ResidualCheck {
        identity: id,
        label: label.to_string(),
        columns: residual.cols,
        safe_columns: safe,
        passed: failures.is_empty(),
        worst_margin: worst.map(|w| fmt_q(&w)),
        failures,
    }
}

/// All operator identities on the space truncated at `cutoff`.
pub fn operator_identities(d: &DworkData, cutoff: Q) -> Result<Vec<ResidualCheck>> {
    let t = &d.tower;
    let sp = TruncatedSpace::new(&d.geometry, cutoff);
    let q = d.q();
    let qt = t.from_int(q as i64);
    let alpha = frobenius_matrix(t, &sp, &d.f0(), q);
    let alpha1 = frobenius_matrix(t, &sp, &d.g_series()?, q);
    let (r, rinv) = d.r_pair()?;
    let rm = multiplication_matrix(t, &sp, &r);
    let rim = multiplication_matrix(t, &sp, &rinv);
    let dhat: Vec<Mat> = (1..=d.n).map(|i| twisted_derivation(t, &sp, i, &d.h_i(i))).collect();
    let dpi: Vec<Mat> = (1..=d.n).map(|i| twisted_derivation(t, &sp, i, &d.pi_ei_f(i))).collect();
    let mut out = Vec::new();
    for (i, dh) in dhat.iter().enumerate() {
        let res = alpha.mul(t, dh).sub(t, &dh.mul(t, &alpha).scale(t, &qt));
        out.push(check_residual(Identity::ChainMap, &format!("alpha*Dhat_{0} - q*Dhat_{0}*alpha", i + 1), t, &sp, &res));
    }
    let conj = rm.mul(t, &alpha).mul(t, &rim);
    out.push(check_residual(Identity::Conjugation, "alpha_1 - R*alpha*R^-1", t, &sp, &alpha1.sub(t, &conj)));
    for i in 0..d.n {
        let c = rm.mul(t, &dhat[i]).mul(t, &rim);
        out.push(check_residual(
            Identity::DerivationConjugation,
            &format!("D_{0} - R*Dhat_{0}*R^-1", i + 1),
            t,
            &sp,
            &dpi[i].sub(t, &c),
        ));
    }
    for i in 0..d.n {
        for j in i + 1..d.n {
            let ch = dhat[i].mul(t, &dhat[j]).sub(t, &dhat[j].mul(t, &dhat[i]));
            out.push(check_residual(Identity::HatCommutator, &format!("[Dhat_{}, Dhat_{}]", i + 1, j + 1), t, &sp, &ch));
            let cp = dpi[i].mul(t, &dpi[j]).sub(t, &dpi[j].mul(t, &dpi[i]));
            out.push(check_residual(Identity::PiCommutator, &format!("[D_{}, D_{}]", i + 1, j + 1), t, &sp, &cp));
        }
    }
    let bd = koszul_boundaries(t, &dhat);
    for k in 0..bd.len().saturating_sub(1) {
        let sq = bd[k].mul(t, &bd[k + 1]);
        out.push(check_residual(Identity::KoszulSquare, &format!("d_{} d_{}", k + 1, k + 2), t, &sp, &sq));
    }
    Ok(out)
}

/// Rank mod `π` of a matrix, over the residue field (an experiment on the
/// unit-valuation part of `α`, not an invariant).
pub fn rank_mod_pi(t: &TowerParams, m: &Mat) -> usize {
    let mut rows: Vec<Vec<FqElem>> =
        (0..m.rows).map(|r| (0..m.cols).map(|c| t.residue(m.get(r, c))).collect()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][c].inv().expect("nonzero");
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = rows[r][c].mul(&inv);
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&factor.mul(y));
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;
    use crate::laurent::parse_laurent;
    use crate::polytope::build_geometry;

    #[test]
    fn kloosterman_identities_hold() {
        let fld = make_field(3, 1).unwrap();
        let f = parse_laurent("x1 + x1^-1", 1, &fld).unwrap();
        let g = build_geometry(&f.support()).unwrap();
        let t = TowerParams::new(&fld, 8).unwrap();
        let d = DworkData::new(&f, g, t).unwrap();
        let checks = operator_identities(&d, Q::from_integer(4)).unwrap();
        for c in &checks {
            assert!(c.passed, "{c:?}");
            assert!(c.safe_columns > 0);
        }
    }

    #[test]
    fn zero_polynomial_conjugation_exact() {
        let fld = make_field(3, 1).unwrap();
        let t = TowerParams::new(&fld, 6).unwrap();
        let f = crate::laurent::LaurentPoly::<FqElem>::zero(1);
        let g = crate::polytope::NewtonGeometry::point(1);
        let d = DworkData::new(&f, g, t.clone()).unwrap();
        let checks = operator_identities(&d, Q::from_integer(3)).unwrap();
        let conj = checks.iter().find(|c| c.identity == Identity::Conjugation).unwrap();
        assert!(conj.passed);
    }
}
