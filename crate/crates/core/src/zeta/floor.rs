//! Certified precision of truncated Fredholm coefficients.
//!
//! A principal `s`-minor of `α` on exponents `S` has valuation at least
//! `b(q-1) Σ_{u∈S} w(u)`, so the coefficient of `t^s` changes under
//! truncation at `W` by terms of valuation at least
//! `b(q-1)(w_next + sum of the s-1 smallest basis weights)`.

use num_traits::Zero;

use crate::dwork::{b_f, b_g};
use crate::error::{Error, Result};
use crate::padic::SplittingKind;
use crate::polytope::NewtonGeometry;
use crate::Q;

/// Entry decay rate `b` of the Frobenius series for a splitting path.
pub fn decay_rate(kind: SplittingKind, p: u64, q: u64) -> Q {
    match kind {
        SplittingKind::ArtinHasse => b_f(p, q),
        SplittingKind::DworkExp => b_g(p, q),
    }
}

/// Per-coefficient certified valuation for `s = 0..=t_deg`, capped at `n_prec`.
/// `weights` are the basis weights in ascending order.
pub fn fredholm_floor(b: Q, q: u64, weights: &[Q], w_next: Option<Q>, n_prec: u32, t_deg: usize) -> Vec<Q> {
    let cap = Q::from_integer(n_prec as i64);
    let Some(wn) = w_next else { return vec![cap; t_deg + 1] };
    let scale = b * Q::from_integer(q as i64 - 1);
    let mut out = vec![cap];
    let mut prefix = Q::zero();
    for s in 1..=t_deg {
        if s >= 2 {
            prefix += weights.get(s - 2).copied().unwrap_or(wn);
        }
        out.push((scale * (wn + prefix)).min(cap));
    }
    out
}

/// Smallest cutoff `W` (an attained weight) with `b(q-1) w_next(W) >= N`.
pub fn auto_cutoff(g: &NewtonGeometry, b: Q, q: u64, n_prec: u32) -> Q {
    if g.dim == 0 {
        return Q::zero();
    }
    let target = Q::from_integer(n_prec as i64) / (b * Q::from_integer(q as i64 - 1));
    g.cone_points(target).iter().map(|(_, w)| *w).filter(|w| *w < target).max().unwrap_or_else(Q::zero)
}

/// Refuses a cutoff whose first Fredholm coefficient is not certified to `N`.
pub fn check_cutoff(g: &NewtonGeometry, b: Q, q: u64, n_prec: u32, given: Q) -> Result<()> {
    if g.dim == 0 {
        return Ok(());
    }
    let required = auto_cutoff(g, b, q, n_prec);
    if given < required {
        return Err(Error::Certification { given, required });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;
    use crate::laurent::parse_laurent;
    use crate::polytope::build_geometry;

    #[test]
    fn kloosterman_cutoff() {
        let f = parse_laurent("x1 + x1^-1", 1, &make_field(3, 1).unwrap()).unwrap();
        let g = build_geometry(&f.support()).unwrap();
        let b = decay_rate(SplittingKind::ArtinHasse, 3, 3);
        assert_eq!(auto_cutoff(&g, b, 3, 8), Q::from_integer(7));
        assert!(check_cutoff(&g, b, 3, 8, Q::from_integer(6)).is_err());
        let bg = decay_rate(SplittingKind::DworkExp, 3, 3);
        assert_eq!(auto_cutoff(&g, bg, 3, 8), Q::from_integer(17));
    }

    #[test]
    fn floors_grow_with_s() {
        let w: Vec<Q> = [0, 1, 1, 2].iter().map(|&x| Q::from_integer(x)).collect();
        let fl = fredholm_floor(Q::new(1, 2), 3, &w, Some(Q::from_integer(3)), 50, 4);
        assert_eq!(fl[1], Q::from_integer(3));
        assert_eq!(fl[2], Q::from_integer(3));
        assert_eq!(fl[3], Q::from_integer(4));
        assert_eq!(fl[4], Q::from_integer(5));
    }
}
