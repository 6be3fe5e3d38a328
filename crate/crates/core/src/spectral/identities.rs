//! Randomized sanity checks of the operator identities the spectra rely on.
//!
//! Two families of identities are exercised on concrete graphs and
//! complexes, with random test functions standing in for "for all f, g":
//!
//! * the random-walk operator A of a weighted graph is self-adjoint in the
//!   stationary inner product ⟨f,g⟩ = Σ_u μ(u)f(u)g(u), and fixes constants;
//! * on a complex, the global quadratic form ⟨Af,g⟩ decomposes as the
//!   μ₀-average of the links' local forms — the identity that lets expansion
//!   descend from links to the skeleton.
//!
//! Both are exact statements about rational weights; the functions here
//! report the worst floating-point discrepancy over the requested number of
//! random pairs, which callers assert against a tolerance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use crate::complex::WeightedComplex;
use crate::error::CertifyError;
use crate::spectral::graph::WeightedGraph;
use crate::{Real, Weight};

fn weight_to_real(w: Weight) -> Real {
    *w.numer() as Real / *w.denom() as Real
}

/// Worst-case errors of the walk operator's defining identities on `g`.
///
/// Returns `(self_adjointness, constant_fixing)`: the largest observed
/// |⟨Af,g⟩_μ − ⟨f,Ag⟩_μ| over `trials` random pairs, and the largest
/// |（A𝟙)(u) − 1| over vertices.  Both are zero in exact arithmetic.
pub fn operator_identities(g: &WeightedGraph, trials: usize, seed: u64) -> (Real, Real) {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // (Af)(u) = Σ_v w(u,v)/w(u) · f(v); μ(u) = w(u)/Σw.
    let total: Real = (0..n)
        .map(|u| weight_to_real(g.vertex_weight(u as u32)))
        .sum();
    let apply = |f: &[Real]| -> Vec<Real> {
        (0..n)
            .map(|u| {
                let wu = weight_to_real(g.vertex_weight(u as u32));
                g.neighbors(u as u32)
                    .iter()
                    .map(|&(v, w)| weight_to_real(w) * f[v as usize])
                    .sum::<Real>()
                    / wu
            })
            .collect()
    };
    let inner = |f: &[Real], h: &[Real]| -> Real {
        (0..n)
            .map(|u| weight_to_real(g.vertex_weight(u as u32)) / total * f[u] * h[u])
            .sum()
    };

    let ones = vec![1.0; n];
    let const_err = apply(&ones)
        .iter()
        .map(|x| (x - 1.0).abs())
        .fold(0.0, Real::max);

    let mut adj_err: Real = 0.0;
    for _ in 0..trials {
        let f: Vec<Real> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h: Vec<Real> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let diff = (inner(&apply(&f), &h) - inner(&f, &apply(&h))).abs();
        adj_err = adj_err.max(diff);
    }
    (adj_err, const_err)
}

/// Worst-case error of the local decomposition of the skeleton form on `x`.
///
/// For random f, g on the vertices, compares the global edge sum
/// ½·Σ_{uv} w₁(uv)·(f(u)g(v) + f(v)g(u)) against Σ_v w₀(v)·(the same form
/// on the link of v), returning the largest absolute difference over
/// `trials` pairs.  The two sides agree exactly in rationals because each
/// triangle's weight is shared once per vertex it contains.
pub fn local_decomposition(
    x: &WeightedComplex,
    trials: usize,
    seed: u64,
) -> Result<Real, CertifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = x.faces(0)?;
    let n = vertices.len();
    let index: HashMap<_, usize> = vertices.iter().zip(0..).collect();

    // Global side: the skeleton's edges carry the balanced level-1 weights.
    let mut global_edges = Vec::new();
    for e in x.faces(1)? {
        let w = x.weight(e)?;
        let ends = e.subsets(1);
        global_edges.push((index[&ends[0]], index[&ends[1]], weight_to_real(w)));
    }

    // Local side: for each vertex, its weight and its link's level-1 edges
    // mapped back to global vertex indices.
    let mut local_terms = Vec::new();
    for (base, link) in x.links_at_level(0)? {
        let w0 = weight_to_real(x.weight(&base)?);
        let mut edges = Vec::new();
        for (k, e) in link.faces(1)?.iter().enumerate() {
            let w = weight_to_real(link.weights(1)?[k]);
            let ends = e.subsets(1);
            edges.push((index[&ends[0]], index[&ends[1]], w));
        }
        local_terms.push((w0, edges));
    }

    let form = |edges: &[(usize, usize, Real)], f: &[Real], h: &[Real]| -> Real {
        edges
            .iter()
            .map(|&(u, v, w)| 0.5 * w * (f[u] * h[v] + f[v] * h[u]))
            .sum()
    };

    let mut worst: Real = 0.0;
    for _ in 0..trials {
        let f: Vec<Real> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h: Vec<Real> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let global = form(&global_edges, &f, &h);
        let local: Real = local_terms
            .iter()
            .map(|(w0, edges)| w0 * form(edges, &f, &h))
            .sum();
        worst = worst.max((global - local).abs());
    }
    Ok(worst)
}
