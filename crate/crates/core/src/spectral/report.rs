//! One-stop spectral summaries of weighted graphs.
//!
//! A [`SpectralReport`] packages the numbers every downstream check reads off
//! a 1-skeleton: λ₂, λ_min, λ_max of the normalized adjacency, connectivity,
//! and any named bounds the caller wants recorded next to them.  The report
//! is the unit of serialization — certificates are lists of these.

use serde::Serialize;

use crate::error::SpectralError;
use crate::spectral::dense::{normalized_spectrum, normalized_spectrum_bipartite_gram};
use crate::spectral::graph::WeightedGraph;
use crate::spectral::iterative::eig_extremes_iterative;
use crate::Real;

/// Largest graph handed to the dense solver when choosing automatically.
pub const DENSE_CROSSOVER: usize = 6000;

/// Above this size, a dense solve of a bipartite graph goes through the
/// half-size Gram matrix instead of the full normalized adjacency.
pub const GRAM_CROSSOVER: usize = 3000;

/// Eigensolver selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Full spectrum by cyclic Jacobi, whatever the size.
    Dense,
    /// Extreme eigenvalues by certified power iteration.
    Iterative,
    /// Dense up to [`DENSE_CROSSOVER`] vertices, iterative beyond.
    Auto,
}

/// A named scalar bound and whether the measured spectrum satisfied it.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: Real,
    pub satisfied: bool,
}

/// Spectral facts about one graph, ready for JSON.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub graph_id: String,
    pub n: usize,
    #[serde(rename = "lambda2")]
    pub lambda_2: Real,
    pub lambda_min: Real,
    pub lambda_max: Real,
    pub is_connected: bool,
    pub bounds: Vec<BoundCheck>,
    pub solver: String,
    pub tol: Real,
}

impl SpectralReport {
    /// λ(G) in the expander sense: max{λ₂, |λ_min|}.  Kept separate from
    /// λ₂ itself, which bounds only the one-sided direction.
    pub fn two_sided_lambda(&self) -> Real {
        self.lambda_2.max(self.lambda_min.abs())
    }

    /// Record a named bound together with the caller's verdict on it.
    pub fn add_bound(&mut self, name: impl Into<String>, value: Real, satisfied: bool) {
        self.bounds.push(BoundCheck {
            name: name.into(),
            value,
            satisfied,
        });
    }
}

/// Measure λ₂, λ_min, λ_max of the normalized adjacency of `g`.
///
/// Solver choice: `Auto` takes the dense path up to [`DENSE_CROSSOVER`]
/// vertices and the iterative path beyond; a dense solve of a bipartite
/// graph above [`GRAM_CROSSOVER`] vertices goes through the half-size Gram
/// matrix (recorded as `"dense-gram"`).  Disconnected graphs are not an
/// error: they are flagged and λ₂ = 1 (the eigenvalue 1 has multiplicity
/// equal to the number of components), with the full spectrum still taken
/// densely since the iterative certificates assume connectivity.
pub fn spectral_report(
    g: &WeightedGraph,
    graph_id: impl Into<String>,
    solver: Solver,
    tol: Real,
) -> Result<SpectralReport, SpectralError> {
    let n = g.n();
    let connected = g.is_connected()?;

    let use_dense = match solver {
        Solver::Dense => true,
        Solver::Iterative => false,
        Solver::Auto => n <= DENSE_CROSSOVER,
    } || !connected;

    let (lambda_2, lambda_min, lambda_max, solver_name) = if use_dense {
        let gram = n > GRAM_CROSSOVER && g.bipartition().is_some();
        let spectrum = if gram {
            normalized_spectrum_bipartite_gram(g, tol)?
        } else {
            normalized_spectrum(g, tol)?
        };
        (
            spectrum[1],
            spectrum[n - 1],
            spectrum[0],
            if gram { "dense-gram" } else { "dense" },
        )
    } else {
        let (l2, lmin) = eig_extremes_iterative(g, tol)?;
        // Connected graph: the top of the normalized spectrum is exactly 1.
        (l2, lmin, 1.0, "iterative")
    };

    Ok(SpectralReport {
        graph_id: graph_id.into(),
        n,
        lambda_2,
        lambda_min,
        lambda_max,
        is_connected: connected,
        bounds: Vec::new(),
        solver: solver_name.to_string(),
        tol,
    })
}
