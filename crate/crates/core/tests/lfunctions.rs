use dworkzeta::gfq::{exp_sums, make_field, CycInt, SpaceSpec};
use dworkzeta::laurent::parse_laurent;
use dworkzeta::zeta::{l_function_mixed, l_function_torus, verify_against_oracle, DegreeStatus, LParams};
use dworkzeta::Q;

fn sums(space: &SpaceSpec, text: &str, p: u64, a: usize, m: usize) -> Vec<CycInt> {
    let field = make_field(p, a).unwrap();
    let f = parse_laurent(text, space.n, &field).unwrap();
    exp_sums(space, &f, &field, m, 1 << 26).unwrap().into_iter().map(|s| s.value).collect()
}

#[test]
fn affine_line_zeta_closed_form() {
    // L(A^1, 0, t) = 1/(1 - qt)
    let field = make_field(5, 1).unwrap();
    let f = parse_laurent("0", 1, &field).unwrap();
    let space = SpaceSpec { n: 1, r: 0 };
    let mut rep = l_function_mixed(&space, &f, &field, &LParams::default()).unwrap();
    let t = rep.tower.clone();
    for k in 0..5 {
        assert_eq!(rep.l_series.coeffs[k], t.from_int(5i64.pow(k as u32)));
    }
    verify_against_oracle(&mut rep, &sums(&space, "0", 5, 1, 4)).unwrap();
    assert!(rep.passed());
}

#[test]
fn kloosterman_over_f9() {
    let field = make_field(3, 2).unwrap();
    let f = parse_laurent("x1 + x1^-1", 1, &field).unwrap();
    let mut rep = l_function_torus(&f, &field, &LParams::default()).unwrap();
    verify_against_oracle(&mut rep, &sums(&SpaceSpec::torus(1), "x1 + x1^-1", 3, 2, 4)).unwrap();
    assert_eq!(rep.volume_check.status, DegreeStatus::Pass);
    assert!(rep.oracle_passed(), "{:?}", rep.oracle);
    // constant term 1, leading coefficient q = 9 has ord_q 1
    let s = rep.slopes.values();
    assert_eq!(s.iter().copied().sum::<Q>(), Q::from_integer(1));
}

#[test]
fn lower_dimensional_support_matches_oracle() {
    let space = SpaceSpec::torus(2);
    let field = make_field(3, 1).unwrap();
    let f = parse_laurent("x1*x2 + x1^-1*x2^-1", 2, &field).unwrap();
    let mut rep = l_function_torus(&f, &field, &LParams::default()).unwrap();
    verify_against_oracle(&mut rep, &sums(&space, "x1*x2 + x1^-1*x2^-1", 3, 1, 3)).unwrap();
    assert_eq!(rep.volume_check.status, DegreeStatus::Skipped);
    assert!(rep.oracle_passed(), "{:?}", rep.oracle);
}

#[test]
fn constant_on_torus() {
    // S_m = (q^m - 1) ζ^{m Tr c}
    let space = SpaceSpec::torus(1);
    let field = make_field(5, 1).unwrap();
    let f = parse_laurent("3", 1, &field).unwrap();
    let mut rep = l_function_torus(&f, &field, &LParams::default()).unwrap();
    verify_against_oracle(&mut rep, &sums(&space, "3", 5, 1, 4)).unwrap();
    assert!(rep.oracle_passed(), "{:?}", rep.oracle);
}

#[test]
fn affine_plane_polynomial() {
    let space = SpaceSpec { n: 2, r: 0 };
    let field = make_field(3, 1).unwrap();
    let f = parse_laurent("x1^2 + x2^2 + x1*x2^2", 2, &field).unwrap();
    let mut rep = l_function_mixed(&space, &f, &field, &LParams { t_deg: 3, ..LParams::default() }).unwrap();
    verify_against_oracle(&mut rep, &sums(&space, "x1^2 + x2^2 + x1*x2^2", 3, 1, 3)).unwrap();
    assert_eq!(rep.strata.len(), 4);
    assert!(rep.oracle_passed(), "{:?}", rep.oracle);
}

#[test]
fn slopes_of_quadratic_sum() {
    // f = x^2 on T^1 over F_5: P = (1 - t)(1 + g t) with the Gauss sum g, ord g = 1/2
    let field = make_field(5, 1).unwrap();
    let f = parse_laurent("x1^2", 1, &field).unwrap();
    let mut rep = l_function_torus(&f, &field, &LParams::default()).unwrap();
    verify_against_oracle(&mut rep, &sums(&SpaceSpec::torus(1), "x1^2", 5, 1, 4)).unwrap();
    assert!(rep.passed(), "{:?} {:?}", rep.volume_check, rep.oracle);
    assert_eq!(rep.detected_degree(), Some(2));
    assert_eq!(rep.slopes.slopes, vec!["0", "1/2"]);
}
