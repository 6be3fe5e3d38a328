//! Coset complexes of unipotent matrix groups over truncated polynomial
//! rings, with exact structural verification and spectral certification of
//! their expansion properties at desk scale.
//!
//! The layers, bottom to top:
//!
//! * [`algebra`] — F_p, R = F_p[t]/(t^s), and cubic extensions F_{p^3};
//!   everything exact.
//! * [`group`] — d x d matrices over R, elementary subgroups, BFS closure,
//!   coset enumeration.
//! * [`complex`] — the simplicial complex whose vertices are cosets of the
//!   maximal subgroups, with exact rational balanced weights and links.
//! * [`spectral`] — weighted graphs, normalized adjacency spectra (dense
//!   Jacobi and iterative), local-spectral certification, and the
//!   trickle-down and descent bound computations.
//! * [`affine`] — the bipartite point/line incidence graphs over F_q used
//!   as the base case, and the identification of small links with them.
//!
//! Exact quantities (group orders, face counts, weights) use integer and
//! rational arithmetic throughout; floating point enters only at the
//! eigensolver boundary, where every solver is generic over the scalar via
//! `num-traits`. The crate-level aliases pin the default concrete types.

pub mod affine;
pub mod algebra;
pub mod complex;
pub mod error;
pub mod group;
pub mod spectral;

/// Exact weight scalar used for face weights and graph edge weights.
pub type Weight = num_rational::Ratio<i128>;

/// Default floating-point scalar at the spectral boundary.
pub type Real = f64;

#[must_use]
pub fn weight(num: i128, den: i128) -> Weight {
    Weight::new(num, den)
}
