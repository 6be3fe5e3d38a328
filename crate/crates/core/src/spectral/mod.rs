//! Weighted graphs and their normalized-adjacency spectra.
//!
//! Graphs carry exact rational weights; the spectral side works in floating
//! point on the symmetrized operator S = D^{-1/2} A D^{-1/2}, which shares
//! its spectrum with the random-walk operator but is symmetric, so dense
//! Jacobi sweeps and certified power iteration both apply.

pub mod certify;
pub mod dense;
pub mod graph;
pub mod identities;
pub mod iterative;
pub mod report;

pub use dense::{normalized_spectrum, normalized_spectrum_bipartite_gram, DenseSym};
pub use graph::WeightedGraph;
pub use certify::{descent_bounds, hdx_certify, trickle_down_check, DescentBounds, HdxCertificate, TrickleReport, TRICKLE_TOL};
pub use identities::{local_decomposition, operator_identities};
pub use iterative::{eig_extremes_iterative, CsrMatrix, DEFAULT_ITERATIVE_TOL};
pub use report::{spectral_report, BoundCheck, Solver, SpectralReport, DENSE_CROSSOVER, GRAM_CROSSOVER};
