//! Exact-arithmetic toolkit for the equation `a^p + 2^α·b^p + c^p = 0`.
//!
//! - [`frey`]: Frey curves of solutions and their conductors in closed form
//! - [`tate`]: Tate's algorithm, used as an independent conductor oracle
//! - [`denes`]: Dénes's criterion (regularity, order of 2, Wieferich)
//! - [`traces`]: traces of Frobenius and mod-`p` trace comparison
//! - [`search`]: bounded-height searches checked against known results
//!
//! Integers are [`arith::ExactInt`] throughout. The `parallel` feature
//! (default) runs scans on rayon; output is identical without it.

pub mod arith;
pub mod denes;
pub mod error;
pub mod frey;
pub mod model;
pub mod par;
pub mod search;
pub mod tate;
pub mod traces;

pub use error::{Error, Result};
