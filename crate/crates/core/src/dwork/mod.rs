//! Dwork's operators on weight-truncated cone spaces: the series `H`, `F_0`,
//! `G`, `R`, the Frobenius matrices `α = ψ_q∘F_0` and `α_1 = ψ_q∘G`, the
//! twisted derivations and their Koszul complex.

pub mod identities;
pub mod matrix;
pub mod operators;
pub mod series;

pub use identities::{check_residual, floor, operator_identities, rank_mod_pi, Identity, ResidualCheck};
pub use matrix::{dump_matrix, load_matrix, Mat};
pub use operators::{
    entry_bound_holds, euler_matrix, frobenius_matrix, koszul_boundaries, multiplication_matrix, twisted_derivation,
    TruncatedSpace,
};
pub use series::{b_0, b_f, b_g, b_h, product_of_substitutions, ConeSeries, DecayAudit, DworkData};
