//! Finite fields, exact exponential sums in `Z[ζ_p]`, and the brute-force
//! nondegeneracy search. This is the independent oracle for the p-adic side.

pub mod cyc;
pub mod ext;
pub mod field;
pub mod nondeg;
pub mod sums;

pub use cyc::{lfun_series_from_sums, series_inv, series_mul, CycInt, CycSeries, SumJson};
pub use ext::ExtField;
pub use field::{is_prime, make_field, FieldParams, FqElem};
pub use nondeg::{is_nondegenerate, Verdict};
pub use sums::{exp_sum, exp_sum_in, check_no_affine_poles, exp_sums, ExpSum, SpaceSpec, DEFAULT_POINT_CAP};
