use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::certseries::CertSeries;
use super::floor::{auto_cutoff, check_cutoff, decay_rate, fredholm_floor};
use super::fredholm::{fredholm_det, guard_digits};
use super::slopes::{newton_slopes, HullPoint, Slopes};
use crate::dwork::{frobenius_matrix, DworkData, TruncatedSpace};
use crate::error::{Error, Result};
use crate::gfq::{check_no_affine_poles, is_nondegenerate, FieldParams, FqElem, SpaceSpec, Verdict};
use crate::laurent::LaurentPoly;
use crate::padic::{splitting_coefficients, SplittingKind, TowerElem, TowerParams};
use crate::polytope::{is_commode, subsets, v_a, CommodeReport, NewtonGeometry};
use crate::{fmt_q, Q};

/// Knobs shared by every L-function computation.
#[derive(Debug, Clone)]
pub struct LParams {
    /// Target `p`-adic precision `N` (digits).
    pub prec: u32,
    /// Weight cutoff `W`; `None` picks the certified minimum.
    pub cutoff: Option<Q>,
    pub t_deg: usize,
    pub splitting: SplittingKind,
    /// Extension degrees searched for degenerate faces.
    pub m_max: usize,
    pub point_cap: u128,
}

impl Default for LParams {
    fn default() -> Self {
        LParams {
            prec: 8,
            cutoff: None,
            t_deg: 4,
            splitting: SplittingKind::ArtinHasse,
            m_max: 2,
            point_cap: crate::gfq::DEFAULT_POINT_CAP,
        }
    }
}

/// One torus stratum `T^{n-|A|}` with `f_A`.
#[derive(Debug, Clone)]
pub struct Stratum {
    /// 1-based coordinates set to zero.
    pub coords: Vec<usize>,
    pub n: usize,
    pub f: LaurentPoly<FqElem>,
    pub cutoff: Q,
    pub basis_size: usize,
    /// `det(I - tα)`.
    pub fredholm: CertSeries,
    /// `L(T^{n_A}, f_A, t)^{(-1)^{n_A-1}}`.
    pub poly: CertSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeStatus {
    Pass,
    Mismatch,
    /// `t_deg` does not reach past the expected degree.
    InsufficientTerms,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeCheck {
    pub expected: Option<i64>,
    pub detected: Option<usize>,
    pub status: DegreeStatus,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleLine {
    pub m: usize,
    pub residual_val: String,
    pub floor: String,
    pub pass: bool,
}

/// Everything computed for `L(X, f, t)` on `X = T^r × A^{n-r}`.
#[derive(Debug, Clone)]
pub struct LFunctionReport {
    pub space: SpaceSpec,
    pub f: LaurentPoly<FqElem>,
    pub params: LParams,
    /// Working tower (`N` plus guard digits).
    pub tower: Arc<TowerParams>,
    pub strata: Vec<Stratum>,
    /// `L` as a power series to `t^{t_deg}`.
    pub l_series: CertSeries,
    /// `P = L^{(-1)^{n-1}}`.
    pub poly: CertSeries,
    pub sign: i32,
    pub nondegeneracy: Option<Verdict>,
    pub commode: Option<CommodeReport>,
    pub volume_check: VolumeCheck,
    pub slopes: Slopes,
    pub oracle: Vec<OracleLine>,
}

impl LFunctionReport {
    /// Largest index whose coefficient is provably nonzero.
    pub fn detected_degree(&self) -> Option<usize> {
        (0..self.poly.len()).rev().find(|&k| self.poly.provably_nonzero(&self.tower, k))
    }

    pub fn oracle_passed(&self) -> bool {
        self.oracle.iter().all(|o| o.pass)
    }

    /// Degree check passed or legitimately skipped, and every oracle line passed.
    pub fn passed(&self) -> bool {
        matches!(self.volume_check.status, DegreeStatus::Pass | DegreeStatus::Skipped) && self.oracle_passed()
    }

    pub fn cutoff(&self) -> Q {
        self.strata.first().map_or_else(Q::zero, |s| s.cutoff)
    }
}

fn working_tower(field: &Arc<FieldParams>, params: &LParams) -> Result<Arc<TowerParams>> {
    if params.prec == 0 || params.t_deg == 0 {
        return Err(Error::InvalidParams("N and t_deg must be positive".into()));
    }
    TowerParams::new(field, params.prec + guard_digits(field.p, params.t_deg))
}

/// `θ(1)`, the image of `ζ_p`.
pub(crate) fn zeta_p(t: &TowerParams) -> Result<TowerElem> {
    let kind = SplittingKind::ArtinHasse;
    Ok(splitting_coefficients(kind, kind.default_i_max(t.p, t.prec), t)?.theta_one(t))
}

/// Cutoff that `params` resolves to for `f` on `T^n`.
pub fn resolve_cutoff(g: &NewtonGeometry, field: &FieldParams, params: &LParams) -> Result<Q> {
    let b = decay_rate(params.splitting, field.p, field.q);
    match params.cutoff {
        Some(w) => {
            check_cutoff(g, b, field.q, params.prec, w)?;
            Ok(w)
        }
        None => Ok(auto_cutoff(g, b, field.q, params.prec)),
    }
}

fn torus_stratum(
    t: &Arc<TowerParams>,
    f: &LaurentPoly<FqElem>,
    coords: Vec<usize>,
    params: &LParams,
) -> Result<Stratum> {
    let n = f.n();
    let cap = Q::from_integer(params.prec as i64);
    let len = params.t_deg + 1;
    if n == 0 {
        // a point: L = 1/(1 - εt), ε = ζ_p^{Tr c}
        let tr = f.terms().next().map_or(0, |(_, c)| c.trace());
        let eps = t.pow(&zeta_p(t)?, tr);
        let mut poly = CertSeries::one(t, len, cap);
        poly.coeffs[1] = t.neg(&eps);
        return Ok(Stratum {
            coords,
            n,
            f: f.clone(),
            cutoff: Q::zero(),
            basis_size: 1,
            fredholm: poly.clone(),
            poly,
        });
    }
    let g = NewtonGeometry::for_support(n, &f.support())?;
    let field = t.field.clone();
    let cutoff = resolve_cutoff(&g, &field, params)?;
    let q = field.q;
    let b = decay_rate(params.splitting, field.p, q);
    let data = DworkData::new(f, g, t.clone())?;
    let series = match params.splitting {
        SplittingKind::ArtinHasse => data.f0(),
        SplittingKind::DworkExp => data.g_series()?,
    };
    let sp = TruncatedSpace::new(&data.geometry, cutoff);
    let alpha = frobenius_matrix(t, &sp, &series, q);
    let weights: Vec<Q> = (0..sp.len()).map(|k| sp.weight(k)).collect();
    let floors = fredholm_floor(b, q, &weights, sp.w_next, params.prec, params.t_deg);
    let fredholm = fredholm_det(t, &alpha, params.t_deg, floors)?;
    // P = Π_i det(I - q^i tα)^{(-1)^i C(n,i)}
    let mut poly = CertSeries::one(t, len, cap);
    for i in 0..=n {
        let e = num_integer::binomial(n as i64, i as i64) * if i % 2 == 0 { 1 } else { -1 };
        poly = poly.mul(t, &fredholm.subst_q_power(t, i as u32).pow(t, e));
    }
    Ok(Stratum { coords, n, f: f.clone(), cutoff, basis_size: sp.len(), fredholm, poly: poly.cap(cap) })
}

/// `L(T^n, f, t)`.
pub fn l_function_torus(f: &LaurentPoly<FqElem>, field: &Arc<FieldParams>, params: &LParams) -> Result<LFunctionReport> {
    l_function_mixed(&SpaceSpec::torus(f.n()), f, field, params)
}

/// `L(T^r × A^{n-r}, f, t) = Π_{A ⊆ S_r} L(T^{n-|A|}, f_A, t)`.
pub fn l_function_mixed(
    space: &SpaceSpec,
    f: &LaurentPoly<FqElem>,
    field: &Arc<FieldParams>,
    params: &LParams,
) -> Result<LFunctionReport> {
    if f.n() != space.n || space.r > space.n {
        return Err(Error::InvalidParams(format!("space T^{} x A^{} does not match n = {}", space.r, space.n - space.r, f.n())));
    }
    check_no_affine_poles(space, f)?;
    let t = working_tower(field, params)?;
    let cap = Q::from_integer(params.prec as i64);
    let s_r = space.affine_coords();
    let mut strata = Vec::new();
    for a in subsets(&s_r) {
        let fa = f.specialize_zero(&a)?;
        let st = torus_stratum(&t, &fa, a.clone(), params)
            .map_err(|e| Error::Stratum { stratum: a.clone(), source: Box::new(e) })?;
        strata.push(st);
    }
    // P = L^{(-1)^{n-1}} = Π_A P_A^{(-1)^{|A|}}
    let mut poly = CertSeries::one(&t, params.t_deg + 1, cap);
    for st in &strata {
        let e = if st.coords.len() % 2 == 0 { 1 } else { -1 };
        poly = poly.mul(&t, &st.poly.pow(&t, e));
    }
    let poly = poly.cap(cap);
    let sign = if space.n % 2 == 1 { 1 } else { -1 };
    let l_series = if sign == 1 { poly.clone() } else { poly.inv(&t).cap(cap) };

    let g = NewtonGeometry::for_support(space.n, &f.support())?;
    let (nondegeneracy, commode, expected, reason) = expected_degree(space, f, &g, &s_r, params)?;
    let mut report = LFunctionReport {
        space: *space,
        f: f.clone(),
        params: params.clone(),
        tower: t,
        strata,
        l_series,
        poly,
        sign,
        nondegeneracy,
        commode,
        volume_check: VolumeCheck { expected, detected: None, status: DegreeStatus::Skipped, reason },
        slopes: Slopes { slopes: Vec::new(), ambiguous: Vec::new() },
        oracle: Vec::new(),
    };
    let detected = report.detected_degree();
    report.volume_check.detected = detected;
    if let Some(d) = expected {
        report.volume_check.status = if d as usize >= params.t_deg {
            DegreeStatus::InsufficientTerms
        } else if detected == Some(d as usize) {
            DegreeStatus::Pass
        } else {
            DegreeStatus::Mismatch
        };
    }
    let top = match report.volume_check.status {
        DegreeStatus::Pass => detected.unwrap_or(0),
        _ => detected.unwrap_or(0).min(params.t_deg),
    };
    let tw = &report.tower;
    let points: Vec<HullPoint> = (0..=top)
        .map(|k| {
            if report.poly.provably_nonzero(tw, k) {
                HullPoint::Exact(tw.val(&report.poly.coeffs[k]))
            } else {
                HullPoint::AtLeast(report.poly.cert[k])
            }
        })
        .collect();
    report.slopes = newton_slopes(&points, tw.a as i64);
    Ok(report)
}

type Expectation = (Option<Verdict>, Option<CommodeReport>, Option<i64>, String);

fn expected_degree(
    space: &SpaceSpec,
    f: &LaurentPoly<FqElem>,
    g: &NewtonGeometry,
    s_r: &[usize],
    params: &LParams,
) -> Result<Expectation> {
    if g.dim == 0 {
        return Ok((None, None, None, "Newton polyhedron is a point".into()));
    }
    let verdict = is_nondegenerate(f, g, params.m_max, params.point_cap)?;
    if verdict.is_degenerate() {
        return Ok((Some(verdict), None, None, "degenerate face found".into()));
    }
    if s_r.is_empty() {
        if g.dim < space.n {
            return Ok((Some(verdict), None, None, format!("dim Δ = {} < n = {}", g.dim, space.n)));
        }
        let v = g.normalized_volume()?;
        return Ok((Some(verdict), None, Some(v), "n! Vol(Δ)".into()));
    }
    let c = is_commode(space.n, &f.support(), s_r);
    if !c.commode {
        return Ok((Some(verdict), Some(c), None, "not commode".into()));
    }
    let v = v_a(g, s_r);
    Ok((Some(verdict), Some(c), Some(v), "v_{S_r}(f)".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffJson {
    pub t_deg: usize,
    /// Coordinates mod `p^N`, rows indexed by powers of `π`.
    pub coeff: Vec<Vec<u64>>,
    pub certified_val: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumJson {
    pub coords: Vec<usize>,
    pub n: usize,
    pub poly: String,
    #[serde(rename = "W")]
    pub cutoff: String,
    pub basis_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub space: SpaceSpec,
    pub poly: String,
    pub p: u64,
    pub a: usize,
    #[serde(rename = "N")]
    pub prec: u32,
    #[serde(rename = "W")]
    pub cutoff: String,
    pub splitting: SplittingKind,
    pub sign: i32,
    #[serde(rename = "L_series")]
    pub l_series: Vec<CoeffJson>,
    #[serde(rename = "P_series")]
    pub p_series: Vec<CoeffJson>,
    pub degree: Option<usize>,
    pub volume_check: VolumeCheck,
    pub nondegeneracy: Option<Verdict>,
    pub commode: Option<bool>,
    pub oracle: Vec<OracleLine>,
    pub slopes: Slopes,
    pub strata: Vec<StratumJson>,
    pub passed: bool,
}

fn coeffs_json(t: &TowerParams, s: &CertSeries, prec: u32) -> Vec<CoeffJson> {
    let low = t.with_prec(prec).expect("lower precision is representable");
    (0..s.len())
        .map(|k| {
            let x = t.reduce_to(&s.coeffs[k], &low);
            CoeffJson {
                t_deg: k,
                coeff: (0..t.e).map(|j| x.c[j * t.a..(j + 1) * t.a].to_vec()).collect(),
                certified_val: fmt_q(&s.cert[k]),
            }
        })
        .collect()
}

impl LFunctionReport {
    pub fn to_json(&self) -> ReportJson {
        let t = &self.tower;
        ReportJson {
            space: self.space,
            poly: self.f.to_string(),
            p: t.p,
            a: t.a,
            prec: self.params.prec,
            cutoff: fmt_q(&self.cutoff()),
            splitting: self.params.splitting,
            sign: self.sign,
            l_series: coeffs_json(t, &self.l_series, self.params.prec),
            p_series: coeffs_json(t, &self.poly, self.params.prec),
            degree: self.volume_check.detected,
            volume_check: self.volume_check.clone(),
            nondegeneracy: self.nondegeneracy.clone(),
            commode: self.commode.as_ref().map(|c| c.commode),
            oracle: self.oracle.clone(),
            slopes: self.slopes.clone(),
            strata: self
                .strata
                .iter()
                .map(|s| StratumJson {
                    coords: s.coords.clone(),
                    n: s.n,
                    poly: s.f.to_string(),
                    cutoff: fmt_q(&s.cutoff),
                    basis_size: s.basis_size,
                })
                .collect(),
            passed: self.passed(),
        }
    }
}

/// One coefficient of a comparison between two reports.
#[derive(Debug, Clone, Serialize)]
pub struct Agreement {
    pub t_deg: usize,
    pub diff_val: String,
    pub floor: String,
    pub pass: bool,
}

/// Compares the `L` series of two reports for the same `f` at the shared
/// certified precision (reducing into the lower-precision tower).
pub fn agreement(a: &LFunctionReport, b: &LFunctionReport) -> Vec<Agreement> {
    let (lo, hi) = if a.tower.prec <= b.tower.prec { (a, b) } else { (b, a) };
    let t = &lo.tower;
    (0..lo.l_series.len().min(hi.l_series.len()))
        .map(|k| {
            let x = hi.tower.reduce_to(&hi.l_series.coeffs[k], t);
            let v = t.val(&t.sub(&lo.l_series.coeffs[k], &x));
            let floor = lo.l_series.cert[k].min(hi.l_series.cert[k]);
            Agreement { t_deg: k, diff_val: fmt_q(&v), floor: fmt_q(&floor), pass: v >= floor }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::{exp_sums, make_field};
    use crate::laurent::parse_laurent;
    use crate::zeta::verify_against_oracle;

    fn run(p: u64, n: usize, r: usize, text: &str, params: &LParams) -> LFunctionReport {
        let fld = make_field(p, 1).unwrap();
        let f = parse_laurent(text, n, &fld).unwrap();
        let space = SpaceSpec { n, r };
        let mut rep = l_function_mixed(&space, &f, &fld, params).unwrap();
        let sums: Vec<_> =
            exp_sums(&space, &f, &fld, params.t_deg, 1 << 24).unwrap().into_iter().map(|s| s.value).collect();
        verify_against_oracle(&mut rep, &sums).unwrap();
        rep
    }

    #[test]
    fn linear_on_torus() {
        let rep = run(5, 1, 1, "x1", &LParams::default());
        let t = &rep.tower;
        assert!(t.val(&t.add(&rep.poly.coeffs[1], &t.one())) >= rep.poly.cert[1]);
        assert_eq!(rep.poly.cert[1], Q::from_integer(8));
        assert_eq!(rep.volume_check.status, DegreeStatus::Pass, "{:?}", rep.volume_check);
        assert!(rep.oracle_passed(), "{:?}", rep.oracle);
        assert_eq!(rep.slopes.slopes, vec!["0"]);
    }

    #[test]
    fn zero_on_torus() {
        let rep = run(3, 1, 1, "0", &LParams::default());
        let t = &rep.tower;
        // (1 - t)/(1 - qt) = 1 + (q-1)t + (q^2-q)t^2 + ...
        assert_eq!(rep.l_series.coeffs[1], t.from_int(2));
        assert_eq!(rep.l_series.coeffs[2], t.from_int(6));
        assert!(rep.oracle_passed());
    }

    #[test]
    fn zero_on_affine_line() {
        let rep = run(3, 1, 0, "0", &LParams::default());
        let t = &rep.tower;
        for k in 0..5 {
            assert_eq!(rep.l_series.coeffs[k], t.from_int(3i64.pow(k as u32)));
        }
        assert!(rep.oracle_passed());
    }

    #[test]
    fn kloosterman_p3() {
        let rep = run(3, 1, 1, "x1 + x1^-1", &LParams::default());
        assert_eq!(rep.cutoff(), Q::from_integer(7));
        assert_eq!(rep.volume_check.expected, Some(2));
        assert_eq!(rep.volume_check.status, DegreeStatus::Pass, "{:?}", rep.volume_check);
        assert!(rep.oracle_passed(), "{:?}", rep.oracle);
        let s = rep.slopes.values();
        assert_eq!(s.iter().copied().sum::<Q>(), Q::from_integer(1));
    }

    #[test]
    fn degenerate_skips_degree() {
        let rep = run(2, 1, 1, "x1^2", &LParams::default());
        assert!(rep.nondegeneracy.as_ref().unwrap().is_degenerate());
        assert_eq!(rep.volume_check.status, DegreeStatus::Skipped);
        assert!(rep.oracle_passed(), "{:?}", rep.oracle);
    }

    #[test]
    fn low_cutoff_refused() {
        let fld = make_field(3, 1).unwrap();
        let f = parse_laurent("x1 + x1^-1", 1, &fld).unwrap();
        let params = LParams { cutoff: Some(Q::from_integer(3)), ..LParams::default() };
        let e = l_function_torus(&f, &fld, &params).unwrap_err();
        assert!(matches!(e, Error::Stratum { .. }), "{e}");
    }
}
