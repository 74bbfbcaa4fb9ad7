//! Extended form class groups of imaginary quadratic fields.
//!
//! Forms of discriminant `d_K` with leading coefficient prime to `N` are
//! classified up to the congruence subgroup determined by `(N, T)`. The
//! resulting group is realized on fractional ideals and its class
//! invariants are evaluated numerically to recover integral class polynomials.

pub mod arith;
pub mod cli;
pub mod error;
pub mod extended;
pub mod field;
pub mod forms;
pub mod golden;
pub mod modular;
mod serde_int;

pub use error::{Error, Result};
pub use extended::{
    enumerate_mq_classes, equivalent_mod_gamma, gamma_member, gamma_q_table, lift_bottom_row,
    make_prime_to_n, phi_gamma, representatives, row_equivalent, witness_search, ExtClassGroup,
    GammaQTable, RowVec, SubgroupT,
};
pub use field::{AlgebraicNum, FracIdeal, ImagQuadField};
pub use forms::{enumerate_reduced, QuadForm, Surd, Unimodular};
