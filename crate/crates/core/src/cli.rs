//! Command-line front end: `polytope`, `sums`, `lfun`, `verify`.
//!
//! Precedence is flags, then `DWORKZETA_*` environment variables, then
//! defaults. Exit codes: 0 ok, 1 usage, 2 parse, 3 geometry, 4 cap or
//! certification, 5 verification failure.

use std::ffi::OsString;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dwork::{operator_identities, DworkData};
use crate::error::{Error, Result};
use crate::gfq::{exp_sums, make_field, FieldParams, FqElem, SpaceSpec, SumJson, DEFAULT_POINT_CAP};
use crate::laurent::{max_variable_index, parse_laurent, LaurentPoly};
use crate::padic::{gamma_root, splitting_coefficients, teichmuller_lift, SplittingKind, TowerParams};
use crate::polytope::{is_commode, restricted_volumes, v_a, GeometryReport, NewtonGeometry};
use crate::zeta::{agreement, l_function_mixed, resolve_cutoff, verify_against_oracle, LFunctionReport, LParams};
use crate::{fmt_q, parse_q, Q};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GEOMETRY: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "dworkzeta", version, about = "L-functions of exponential sums via Dwork's p-adic trace formula")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text", env = "DWORKZETA_FORMAT")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polyhedron, faces, weight denominator, volumes, commode check.
    Polytope(PolyArgs),
    /// Exact exponential sums by enumeration.
    Sums {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, env = "DWORKZETA_ORACLE_M", default_value_t = 4)]
        oracle_m: usize,
        #[arg(long, env = "DWORKZETA_CAP", default_value_t = DEFAULT_POINT_CAP)]
        cap: u128,
    },
    /// Full pipeline: Fredholm determinant, L-function, degree, oracle.
    Lfun {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        prec: PrecArgs,
    },
    /// Invariant suite: decay audits, operator identities, splitting cross-check.
    Verify {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        prec: PrecArgs,
        /// Largest index for the splitting-coefficient bound audit.
        #[arg(long, env = "DWORKZETA_LAMBDA_MAX", default_value_t = 50)]
        lambda_max: usize,
        #[arg(long, env = "DWORKZETA_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    #[arg(long, env = "DWORKZETA_P", default_value_t = 3)]
    pub p: u64,
    #[arg(long, env = "DWORKZETA_A", default_value_t = 1)]
    pub a: usize,
    /// Number of variables; defaults to the largest index in `--poly`.
    #[arg(long, env = "DWORKZETA_N")]
    pub n: Option<usize>,
    /// Torus rank; coordinates `r+1..=n` are affine. Defaults to `n`.
    #[arg(long, env = "DWORKZETA_R")]
    pub r: Option<usize>,
    #[arg(long, env = "DWORKZETA_POLY")]
    pub poly: String,
}

#[derive(Debug, Clone, Args)]
pub struct PrecArgs {
    /// p-adic precision in digits.
    #[arg(long = "N", env = "DWORKZETA_PREC", default_value_t = 8)]
    pub prec: u32,
    /// Weight cutoff, a rational or `auto`.
    #[arg(long = "W", env = "DWORKZETA_W", default_value = "auto")]
    pub cutoff: String,
    #[arg(long, env = "DWORKZETA_T_DEG", default_value_t = 4)]
    pub t_deg: usize,
    #[arg(long, env = "DWORKZETA_M_MAX", default_value_t = 2)]
    pub m_max: usize,
    /// Exact sums to compare against; defaults to `t_deg`.
    #[arg(long, env = "DWORKZETA_ORACLE_M")]
    pub oracle_m: Option<usize>,
    #[arg(long, env = "DWORKZETA_SPLITTING", default_value = "artin-hasse")]
    pub splitting: SplittingKind,
    #[arg(long, env = "DWORKZETA_CAP", default_value_t = DEFAULT_POINT_CAP)]
    pub cap: u128,
}

/// Resolved inputs of one job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub field: Arc<FieldParams>,
    pub space: SpaceSpec,
    pub f: LaurentPoly<FqElem>,
    pub params: LParams,
    pub oracle_m: usize,
}

fn parse_poly(args: &PolyArgs) -> Result<(Arc<FieldParams>, SpaceSpec, LaurentPoly<FqElem>)> {
    let field = make_field(args.p, args.a)?;
    let n = match args.n {
        Some(n) => n,
        None => max_variable_index(&args.poly)?.max(1),
    };
    let r = args.r.unwrap_or(n);
    if r > n {
        return Err(Error::InvalidParams(format!("torus rank {r} exceeds n = {n}")));
    }
    let f = parse_laurent(&args.poly, n, &field)?;
    Ok((field, SpaceSpec { n, r }, f))
}

fn parse_cutoff(s: &str) -> Result<Option<Q>> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(None);
    }
    parse_q(s).map(Some).ok_or_else(|| Error::InvalidParams(format!("bad weight cutoff {s:?}")))
}

impl JobConfig {
    pub fn new(poly: &PolyArgs, prec: &PrecArgs) -> Result<Self> {
        let (field, space, f) = parse_poly(poly)?;
        let params = LParams {
            prec: prec.prec,
            cutoff: parse_cutoff(&prec.cutoff)?,
            t_deg: prec.t_deg,
            splitting: prec.splitting,
            m_max: prec.m_max,
            point_cap: prec.cap,
        };
        let oracle_m = prec.oracle_m.unwrap_or(prec.t_deg).min(prec.t_deg);
        Ok(JobConfig { field, space, f, params, oracle_m })
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::VariableOutOfRange { .. } | Error::NotInField(_) => EXIT_PARSE,
        Error::DegenerateGeometry
        | Error::LowerDimensional { .. }
        | Error::OutsideCone
        | Error::ForeignFace
        | Error::PoleInAffine(_)
        | Error::NegativeExponent(_) => EXIT_GEOMETRY,
        Error::EnumerationCap { .. } | Error::Certification { .. } | Error::PrecisionTooLarge { .. } => EXIT_CAP,
        Error::Stratum { source, .. } => exit_code(source),
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Serialize)]
struct PolytopeOut {
    poly: String,
    space: SpaceSpec,
    geometry: GeometryReport,
    restricted_volumes: Vec<(Vec<usize>, String)>,
    v_s_r: Option<i64>,
    commode: Option<bool>,
}

fn cmd_polytope(args: &PolyArgs) -> Result<PolytopeOut> {
    let (_, space, f) = parse_poly(args)?;
    let g = NewtonGeometry::for_support(space.n, &f.support())?;
    if g.dim == 0 {
        return Err(Error::DegenerateGeometry);
    }
    let s_r = space.affine_coords();
    let (rv, v, commode) = if s_r.is_empty() {
        (Vec::new(), None, None)
    } else {
        let rv = restricted_volumes(&g, &s_r).into_iter().map(|(k, v)| (k, fmt_q(&v))).collect();
        (rv, Some(v_a(&g, &s_r)), Some(is_commode(space.n, &f.support(), &s_r).commode))
    };
    Ok(PolytopeOut { poly: f.to_string(), space, geometry: g.report(), restricted_volumes: rv, v_s_r: v, commode })
}

fn polytope_text(o: &PolytopeOut) -> String {
    let g = &o.geometry;
    let mut s = format!("f = {}\ndim = {} (n = {})\nM = {}\n", o.poly, g.dim, g.n, g.m);
    match g.volume {
        Some(v) => s += &format!("normalized volume = {v}\n"),
        None => s += "normalized volume = n/a (lower-dimensional)\n",
    }
    s += &format!("vertices = {:?}\n", g.vertices);
    for f in &g.facets {
        s += &format!("facet [{}] . u = {}\n", f.normal.join(", "), f.offset);
    }
    s += &format!("faces = {}\n", g.faces.len());
    for (a, v) in &o.restricted_volumes {
        s += &format!("V_{a:?} = {v}\n");
    }
    if let Some(v) = o.v_s_r {
        s += &format!("v_S_r = {v}\n");
    }
    if let Some(c) = o.commode {
        s += &format!("commode = {c}\n");
    }
    s
}

fn cmd_sums(args: &PolyArgs, oracle_m: usize, cap: u128) -> Result<Vec<SumJson>> {
    let (field, space, f) = parse_poly(args)?;
    let sums = exp_sums(&space, &f, &field, oracle_m, cap)?;
    Ok(sums.into_iter().map(|s| SumJson { m: s.m, cyc: s.value.to_strings(), counts: s.counts }).collect())
}

/// Runs the full pipeline and the oracle comparison.
pub fn run_lfun(cfg: &JobConfig) -> Result<LFunctionReport> {
    let mut rep = l_function_mixed(&cfg.space, &cfg.f, &cfg.field, &cfg.params)?;
    if cfg.oracle_m > 0 {
        let sums: Vec<_> = exp_sums(&cfg.space, &cfg.f, &cfg.field, cfg.oracle_m, cfg.params.point_cap)?
            .into_iter()
            .map(|s| s.value)
            .collect();
        verify_against_oracle(&mut rep, &sums)?;
    }
    Ok(rep)
}

fn lfun_text(rep: &LFunctionReport) -> String {
    let j = rep.to_json();
    let mut s = format!(
        "f = {} on T^{} x A^{}\np = {}, a = {}, N = {}, W = {}, splitting = {}\n",
        j.poly,
        rep.space.r,
        rep.space.n - rep.space.r,
        j.p,
        j.a,
        j.prec,
        j.cutoff,
        j.splitting
    );
    s += &format!("P = L^{}\n", if rep.sign == 1 { "1" } else { "-1" });
    for c in &j.p_series {
        s += &format!("  P[{}] = {:?}  certified to {}\n", c.t_deg, c.coeff, c.certified_val);
    }
    if let Some(v) = &rep.nondegeneracy {
        s += &format!("nondegeneracy: {v:?}\n");
    }
    let vc = &rep.volume_check;
    s += &format!(
        "degree: detected {:?}, expected {:?} ({}), status {:?}\n",
        vc.detected, vc.expected, vc.reason, vc.status
    );
    s += &format!("slopes: [{}]", j.slopes.slopes.join(", "));
    if !j.slopes.ambiguous.is_empty() {
        s += &format!(" ambiguous at {:?}", j.slopes.ambiguous);
    }
    s += "\n";
    for o in &rep.oracle {
        s += &format!(
            "oracle m={}: residual val {} floor {} {}\n",
            o.m,
            o.residual_val,
            o.floor,
            if o.pass { "pass" } else { "FAIL" }
        );
    }
    s += if rep.passed() { "status: pass\n" } else { "status: FAIL\n" };
    s
}

/// One line of the invariant suite.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

/// The invariant suite behind `verify`.
pub fn run_verify(cfg: &JobConfig, lambda_max: usize, seed: u64) -> Result<Vec<Check>> {
    let field = &cfg.field;
    let p = field.p;
    let prec = cfg.params.prec;
    let t = TowerParams::new(field, prec)?;
    let g = NewtonGeometry::for_support(cfg.space.n, &cfg.f.support())?;
    let cutoff = resolve_cutoff(&g, field, &cfg.params)?;
    let mut out = Vec::new();

    for kind in [SplittingKind::ArtinHasse, SplittingKind::DworkExp] {
        let slope = kind.slope(p);
        // enough digits that the bound stays informative up to lambda_max
        let lprec = (slope * Q::from_integer(lambda_max as i64)).to_integer() as u32 + 2;
        let tl = t.with_prec(lprec.max(prec))?;
        let lam = splitting_coefficients(kind, lambda_max, &tl)?.lambda;
        let cap = Q::from_integer(tl.prec as i64);
        let bad = (0..lam.len()).find(|&i| tl.val(&lam[i]) < (slope * Q::from_integer(i as i64)).min(cap));
        out.push(check(
            format!("{kind} coefficient bound i <= {lambda_max}"),
            bad.is_none(),
            bad.map_or(format!("ord >= {} i", fmt_q(&slope)), |i| format!("fails at i = {i}")),
        ));
    }
    let gamma = gamma_root(&t)?;
    let vg = t.val(&t.sub(&gamma, &t.pi()));
    out.push(check("ord(gamma - pi) >= 2/(p-1)", vg >= Q::new(2, p as i64 - 1), format!("val {}", fmt_q(&vg))));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut teich_ok = true;
    for _ in 0..32 {
        let x = FqElem::from_index(field, rng.gen_range(0..field.q));
        let y = FqElem::from_index(field, rng.gen_range(0..field.q));
        let (lx, ly) = (teichmuller_lift(&t, &x), teichmuller_lift(&t, &y));
        teich_ok &= teichmuller_lift(&t, &x.mul(&y)) == t.mul(&lx, &ly);
        teich_ok &= t.pow(&lx, field.q) == lx;
    }
    out.push(check("Teichmuller lift multiplicative and fixed by x^q", teich_ok, format!("32 random pairs, seed {seed}")));

    if g.dim > 0 {
        let data = DworkData::new(&cfg.f, g.clone(), t.clone())?;
        let (r, rinv) = data.r_pair()?;
        let audits = [
            ("F0", data.f0()),
            ("G", data.g_series()?),
            ("H", data.h()),
            ("R", r),
            ("R^-1", rinv),
        ];
        for (name, s) in audits {
            let a = s.audit(&g, &t)?;
            out.push(check(
                format!("{name} decay >= {} w(u)", fmt_q(&s.decay.0)),
                a.passed,
                format!("{} coefficients, min margin {}", a.checked, a.min_margin.unwrap_or_else(|| "-".into())),
            ));
        }
        for c in operator_identities(&data, cutoff)? {
            out.push(check(
                format!("{} (W = {})", c.label, fmt_q(&cutoff)),
                c.passed,
                format!(
                    "{} safe columns, worst margin {}",
                    c.safe_columns,
                    c.worst_margin.clone().unwrap_or_else(|| "-".into())
                ),
            ));
        }
    }

    let ah = l_function_mixed(&cfg.space, &cfg.f, field, &LParams { splitting: SplittingKind::ArtinHasse, ..cfg.params.clone() })?;
    let de = l_function_mixed(
        &cfg.space,
        &cfg.f,
        field,
        &LParams { splitting: SplittingKind::DworkExp, cutoff: None, ..cfg.params.clone() },
    )?;
    let ag = agreement(&ah, &de);
    let bad: Vec<usize> = ag.iter().filter(|a| !a.pass).map(|a| a.t_deg).collect();
    out.push(check(
        "artin-hasse and dwork-exp L-series agree",
        bad.is_empty(),
        if bad.is_empty() { format!("{} coefficients", ag.len()) } else { format!("differ at t^{bad:?}") },
    ));
    Ok(out)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => text(),
    }
}

/// Parses `args`, runs the command, and returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return if code == EXIT_OK { (code, e.to_string(), String::new()) } else { (code, String::new(), e.to_string()) };
        }
    };
    match dispatch(&cli) {
        Ok((code, out)) => (code, out, String::new()),
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let fmt = cli.format;
    match &cli.command {
        Command::Polytope(a) => {
            let o = cmd_polytope(a)?;
            Ok((EXIT_OK, emit(fmt, &o, || polytope_text(&o))))
        }
        Command::Sums { poly, oracle_m, cap } => {
            let s = cmd_sums(poly, *oracle_m, *cap)?;
            Ok((
                EXIT_OK,
                emit(fmt, &s, || {
                    s.iter().map(|x| format!("S_{} = [{}]  counts {:?}\n", x.m, x.cyc.join(", "), x.counts)).collect()
                }),
            ))
        }
        Command::Lfun { poly, prec } => {
            let cfg = JobConfig::new(poly, prec)?;
            let rep = run_lfun(&cfg)?;
            let code = if rep.passed() { EXIT_OK } else { EXIT_VERIFY };
            Ok((code, emit(fmt, &rep.to_json(), || lfun_text(&rep))))
        }
        Command::Verify { poly, prec, lambda_max, seed } => {
            let cfg = JobConfig::new(poly, prec)?;
            let checks = run_verify(&cfg, *lambda_max, *seed)?;
            let code = if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_VERIFY };
            Ok((
                code,
                emit(fmt, &checks, || {
                    checks
                        .iter()
                        .map(|c| format!("{} {}: {}\n", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail))
                        .collect()
                }),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytope_kloosterman() {
        let (code, out, _) = run(["dworkzeta", "--format", "json", "polytope", "--p", "3", "--n", "1", "--poly", "x1+x1^-1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["geometry"]["volume"], 2);
        assert_eq!(v["geometry"]["M"], 1);
    }

    #[test]
    fn polytope_triangle_and_parse_error() {
        let (code, out, _) = run(["dworkzeta", "polytope", "--n", "2", "--poly", "x1+x2+x1^-1*x2^-1"]);
        assert_eq!(code, 0);
        assert!(out.contains("normalized volume = 3"));
        let (code, _, err) = run(["dworkzeta", "polytope", "--poly", "x1+*x2"]);
        assert_eq!(code, EXIT_PARSE);
        assert!(err.contains("position"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["dworkzeta", "lfun"]).0, EXIT_USAGE);
        assert_eq!(run(["dworkzeta", "polytope", "--p", "4", "--poly", "x1"]).0, EXIT_USAGE);
    }

    #[test]
    fn lfun_linear_passes() {
        let (code, out, err) = run(["dworkzeta", "lfun", "--p", "5", "--poly", "x1"]);
        assert_eq!(code, 0, "{out}{err}");
        assert!(out.contains("status Pass"));
    }

    #[test]
    fn lfun_degenerate_exit_zero() {
        let (code, out, _) = run(["dworkzeta", "--format", "json", "lfun", "--p", "2", "--poly", "x1^2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["volume_check"]["status"], "skipped");
        assert!(v["nondegeneracy"]["DegenerateWitness"].is_object());
    }

    #[test]
    fn verify_low_cutoff_refused() {
        let (code, _, err) = run(["dworkzeta", "verify", "--p", "3", "--poly", "x1+x1^-1", "--W", "2"]);
        assert_eq!(code, EXIT_CAP, "{err}");
    }

    #[test]
    fn json_is_deterministic() {
        let args = ["dworkzeta", "--format", "json", "lfun", "--p", "3", "--poly", "x1+x1^-1"];
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
