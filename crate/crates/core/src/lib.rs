//! Exact computation of both sides of reflection identities between
//! dihedral and Frobenius field counts.
//!
//! [`quadforms`] and [`cubicforms`] provide two independent routes to cubic
//! field counts (class groups and form enumeration). [`reflection`] turns
//! class group data into predicted discriminants and counts of degree `ℓ`
//! Frobenius fields, and [`fieldtables`] reconciles those predictions with
//! external field tables.

pub mod arith;
pub mod cubicforms;
pub mod error;
pub mod fieldtables;
pub mod quadforms;
pub mod reflection;

pub use arith::{factorize, Factorization, FundamentalDiscriminant};
pub use error::{Error, Result};
