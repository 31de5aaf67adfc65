//! L-functions of exponential sums of Laurent polynomials over finite fields,
//! computed with Dwork's p-adic trace formula on weight-truncated cone spaces
//! and checked against exact character sums.
//!
//! Layout:
//! - [`laurent`]: Laurent polynomials over a pluggable coefficient ring, text parser.
//! - [`polytope`]: Newton polyhedron, cone, weight function, volumes, semigroup combinatorics.
//! - [`gfq`]: finite fields, exact exponential sums in `Z[zeta_p]`, nondegeneracy search.
//! - [`padic`]: the truncated tower `Z_q[pi]/(pi^(p-1)+p)` mod `p^N`, Teichmuller lifts, splitting functions.
//! - [`dwork`]: the series `H`, `F0`, `G`, `R`, twisted derivations, Frobenius matrices, operator identities.
//! - [`zeta`]: Fredholm determinants, L-function assembly, oracle comparison, Newton slopes.
//! - [`cli`]: job configuration and the subcommand drivers used by the binary.

pub mod cli;
pub mod dwork;
pub mod error;
pub mod gfq;
pub mod laurent;
pub mod padic;
pub mod polytope;
pub mod zeta;

pub use error::{Error, Result};

/// Exact rationals used for weights, valuations and volumes.
pub type Q = num_rational::Ratio<i64>;

/// Formats a rational as `a` or `a/b`.
pub fn fmt_q(x: &Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            (b != 0).then(|| Q::new(a, b))
        }
        None => s.parse::<i64>().ok().map(Q::from_integer),
    }
}
