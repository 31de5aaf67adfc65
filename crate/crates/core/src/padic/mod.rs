//! Truncated p-adic arithmetic: the tower `Z_q[π]/(π^{p-1}+p)` mod `p^N`,
//! Teichmüller lifts, `γ`, and splitting-function coefficients.

pub mod splitting;
pub mod teich;
pub mod tower;

pub use splitting::{
    artin_hasse_coeffs, cyclotomic_value, gamma_fixed_point, gamma_partial_sums, gamma_root, gamma_series_residual,
    pi_pow_div_factorial, splitting_coefficients, SplittingCoeffs, SplittingKind,
};
pub use teich::teichmuller_lift;
pub use tower::{ord_p_u64, TowerElem, TowerParams, Valuation};
