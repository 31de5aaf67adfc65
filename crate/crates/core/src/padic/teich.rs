use super::tower::{TowerElem, TowerParams};
use crate::gfq::FqElem;

/// The root of unity (or zero) lifting `x`, by iterating `y ← y^q` until stable.
pub fn teichmuller_lift(t: &TowerParams, x: &FqElem) -> TowerElem {
    let mut y = t.from_fq(x);
    let q = t.field.q;
    for _ in 0..=t.prec {
        let z = t.pow(&y, q);
        if z == y {
            break;
        }
        y = z;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    #[test]
    fn examples() {
        let f = make_field(5, 1).unwrap();
        let t = TowerParams::new(&f, 4).unwrap();
        assert_eq!(teichmuller_lift(&t, &FqElem::from_int(&f, 1)), t.one());
        assert_eq!(teichmuller_lift(&t, &FqElem::from_int(&f, 0)), t.zero());
        let w = teichmuller_lift(&t, &FqElem::from_int(&f, 2));
        assert_eq!(w, t.from_int(182));
        assert_eq!(t.pow(&w, 4), t.one());
    }

    #[test]
    fn multiplicative_in_extension() {
        let f = make_field(3, 2).unwrap();
        let t = TowerParams::new(&f, 6).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (x, y) = (FqElem::from_index(&f, i), FqElem::from_index(&f, j));
                let lhs = teichmuller_lift(&t, &x.mul(&y));
                let rhs = t.mul(&teichmuller_lift(&t, &x), &teichmuller_lift(&t, &y));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
