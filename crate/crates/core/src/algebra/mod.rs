//! Exact arithmetic: prime fields, truncated polynomial rings, and cubic
//! extension fields.

pub mod ext;
pub mod fp;
pub mod truncated;

pub use ext::{find_irreducible, is_irreducible, ExtElem, ExtField, FpPoly};
pub use fp::{is_prime, FpElem, PrimeField};
pub use truncated::TruncPoly;
