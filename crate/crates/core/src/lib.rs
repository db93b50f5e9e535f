//! Exact weight distributions of polar codes.
//!
//! The weight enumerator of a code is assembled from the weight enumerators
//! of polar cosets, which obey a short recursion over even and odd bit
//! positions. For decreasing monomial codes the number of cosets can be cut
//! further by exploiting the lower-triangular affine group.

pub mod code_model;
pub mod coset_wef;
pub mod error;
pub mod monomial_algebra;
pub mod oracle;
pub mod polar_transform;
pub mod wd_engine;
pub mod wef_poly;

pub use code_model::{BitStatus, CodeSpec, FreezeConstraint, Profile};
pub use coset_wef::{calc_a, coset_wef, CosetCache, PolarCosetSpec};
pub use error::{Error, Result};
pub use monomial_algebra::{compare, Monomial, MonomialOrder};
pub use oracle::{brute_force_coset_wef, brute_force_wef};
pub use polar_transform::{encode, BitVector};
pub use wd_engine::{
    estimate_cost, wef_auto, wef_direct, wef_lta, CostEstimate, EngineConfig, Report, Route,
    Strategy, WdEngine,
};
pub use wef_poly::WeightEnumerator;
