//! Subschemes of `P^n` made of fat points and linear spaces, their
//! conditions on forms of a given degree, and the residual/trace calculus.

mod calculus;
mod conditions;
mod file;
mod monomials;
mod scheme;
mod transfer;

pub use calculus::{project_cone_from_point, project_from_point, residual, trace, Hyperplane};
pub use conditions::{
    conditions_matrix, conditions_matrix_with, ideal_dim, ideal_dim_at, linear_space_row_count, Assembly, Conditions,
    IdealDimReport, MAX_DEGREE, MAX_MONOMIALS,
};
pub use file::{PointEntry, SchemeFile, SpanItem, SubspaceEntry};
pub use monomials::{binomial, monomial_count, monomials, monomials_capped, Exponent};
pub use scheme::{FatPoint, JPair, LinearSpace, PointTag, ProjPoint, SchemeSpec};
pub use transfer::{fatpoint_scheme, segre_to_fatpoints, transfer_consistency, TransferReport, TransferSample};
