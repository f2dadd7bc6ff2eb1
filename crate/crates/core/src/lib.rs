//! Exact symbolic engine for a free-field realization of the subregular
//! W-algebra of type `A_{N-1}`.
//!
//! Scalars live in `Q(K)` ([`scalar::ScalarQ`]); states are finite sums of
//! Fock monomials ([`fock::FockState`]); [`fields::Engine`] computes mode
//! actions and `n`-th products; [`wgen`] builds the generators and
//! [`verify`] runs the identity checks.

pub mod error;
pub mod fields;
pub mod fock;
pub mod scalar;
pub mod verify;
pub mod wgen;

pub use error::{Error, Result};
pub use fields::{Engine, OperatorExpr, DEFAULT_BUDGET};
pub use fock::{
    Basis, Charge, FockMonomial, FockState, GramForm, KMode, Orientation, WeightVector,
};
pub use scalar::{IntPoly, ScalarQ};
