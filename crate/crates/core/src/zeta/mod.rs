//! Fredholm determinants of the truncated Frobenius, assembly of
//! `L(X, f, t)` over torus strata, degree and Newton-polygon analysis, and
//! comparison against exact sums.

mod certseries;
mod floor;
mod fredholm;
mod lfun;
mod oracle;
mod slopes;

pub use certseries::CertSeries;
pub use floor::{auto_cutoff, check_cutoff, decay_rate, fredholm_floor};
pub use fredholm::{fredholm_det, guard_digits, power_traces};
pub use lfun::{
    agreement, l_function_mixed, l_function_torus, Agreement, resolve_cutoff, CoeffJson, DegreeStatus, LFunctionReport, LParams, OracleLine,
    ReportJson, Stratum, StratumJson, VolumeCheck,
};
pub use oracle::{embed_cyclotomic, verify_against_oracle};
pub use slopes::{newton_slopes, HullPoint, Slopes};
