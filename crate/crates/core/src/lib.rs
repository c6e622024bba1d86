//! Minimum-weight polynomials with a prescribed nonzero root multiplicity.
//!
//! The crate computes weight lower bounds from root multiplicities, constructs
//! the extremal polynomials explicitly, counts monic multiples of `(x + 1)^k`
//! of each weight over finite fields in closed form, and checks all of it
//! against exhaustive enumeration.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod counting;
pub mod error;
pub mod ff;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
pub use ff::{make_field, Field, FieldDescriptor, FieldElement};
pub use poly::Polynomial;

/// Serializes a big integer as a decimal string.
pub(crate) fn serde_decimal<S: serde::Serializer>(
    n: &num_bigint::BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}
