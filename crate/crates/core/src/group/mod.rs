//! Matrix groups over truncated polynomial rings: elementary generators,
//! closure enumeration, explicit subgroup membership, and coset tables.

pub mod cosets;
pub mod enumerate;
pub mod matrix;

pub use cosets::{coset_intersects, enumerate_cosets, CosetTable};
pub use enumerate::{
    bfs_closure, ks_membership, special_linear_bruteforce, GeneratorSet, GroupEnumeration,
    BRUTEFORCE_DOMAIN_CAP, DEFAULT_CLOSURE_CAP,
};
pub use matrix::RingMatrix;
