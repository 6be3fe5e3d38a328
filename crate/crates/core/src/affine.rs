//! The points-lines graph over F_q and its polynomial-pair twin.
//!
//! Three constructions of (pieces of) the same object meet here:
//!
//! * [`build_bq`]: the bipartite graph B on F_q² + F_q² with
//!   (a,b) ~ (c,d) ⟺ ac = b + d, whose normalized spectrum is known in
//!   closed form ({±1, ±1/√q, 0} with fixed multiplicities);
//! * [`build_a`]: the graph A on pairs (ℓ, Q) of a linear and a quadratic
//!   polynomial over F_p, with (ℓ₁,Q₁) ~ (ℓ₂,Q₂) ⟺ ℓ₁ℓ₂ = Q₁ + Q₂ as exact
//!   polynomial identities — no modular reduction anywhere;
//! * the two-type local link of the coset complex at d = 3, whose cosets
//!   have canonical unipotent representatives that read off exactly such an
//!   (ℓ, Q) pair.
//!
//! [`induced_subgraph_check`] verifies that A sits inside B_{p³} as the
//! induced subgraph on the degree-≤1 first coordinates (under t ↦ y), and
//! [`link_bijection_check`] verifies that the local link *is* A under the
//! representative map with a sign flip on one side.  Together with
//! [`bq_spectrum_check`] and [`induced_eig_bound`] this turns the chain
//! "link = A ⊆ B, B has spectrum 1/√q, induced subgraphs inherit expansion"
//! into executable checks, ending at the 1/√p bound for the links.

use std::collections::HashSet;

use crate::algebra::{is_prime, ExtElem, ExtField, TruncPoly};
use crate::complex::{local_link_pair, LocalLink};
use crate::error::AffineError;
use crate::group::RingMatrix;
use crate::spectral::dense::normalized_spectrum;
use crate::spectral::graph::WeightedGraph;
use crate::spectral::report::{spectral_report, Solver, SpectralReport};
use crate::{Real, Weight};

fn cube_root_prime(q: u64) -> Result<u32, AffineError> {
    let p = (q as f64).cbrt().round() as u64;
    if p >= 2 && p * p * p == q && is_prime(p as u32) {
        Ok(p as u32)
    } else {
        Err(AffineError::NotPrimeCube { q })
    }
}

fn ext_label(e: &ExtElem) -> String {
    let mut parts = Vec::new();
    for (k, &c) in e.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        parts.push(match k {
            0 => format!("{c}"),
            1 => format!("{c}*y"),
            _ => format!("{c}*y^{k}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// The bipartite graph on F_q² + F_q² with (a,b) ~ (c,d) ⟺ ac = b + d.
///
/// Vertex (a,b) on the left has id index(a)·q + index(b); the right side is
/// offset by q².  The graph is q-regular with q³ unit-weight edges.
pub fn build_bq(q: u64) -> Result<WeightedGraph, AffineError> {
    let p = cube_root_prime(q)?;
    let field = ExtField::cubic(p)?;
    debug_assert_eq!(field.order(), q);

    let sq = (q * q) as u32;
    let mut edges = Vec::with_capacity((q * q * q) as usize);
    for a in field.elements() {
        for b in field.elements() {
            let left = (field.index(&a) * q + field.index(&b)) as u32;
            for c in field.elements() {
                let d = a.mul(&c)?.sub(&b)?;
                let right = sq + (field.index(&c) * q + field.index(&d)) as u32;
                edges.push((left, right, Weight::new(1, 1)));
            }
        }
    }

    let mut labels = Vec::with_capacity(2 * sq as usize);
    for side in ["L", "R"] {
        for a in field.elements() {
            for b in field.elements() {
                labels.push(format!("{side}({},{})", ext_label(&a), ext_label(&b)));
            }
        }
    }
    Ok(WeightedGraph::new(2 * sq as usize, edges)?.with_labels(labels)?)
}

/// Verify both closed-form descriptions of B_q: the two-step walk counts and
/// the full normalized spectrum.
///
/// Walk counts between left vertices (a,b), (c,d) must be q on the diagonal,
/// 1 when a ≠ c, 0 otherwise — checked exhaustively by merging sorted
/// neighbor lists.  The spectrum must be {±1, ±1/√q, 0} with multiplicities
/// {1, 1, q²−q, q²−q, 2(q−1)}, each eigenvalue within `tol` of its slot.
/// Returns the spectral report of B_q with the 1/√q bound recorded.
pub fn bq_spectrum_check(q: u64, tol: Real) -> Result<SpectralReport, AffineError> {
    let g = build_bq(q)?;
    let sq = (q * q) as usize;

    // Common right-neighbors of two left vertices, by sorted merge.
    let common = |u: u32, v: u32| -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        let (nu, nv) = (g.neighbors(u), g.neighbors(v));
        while i < nu.len() && j < nv.len() {
            match nu[i].0.cmp(&nv[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    };
    for u in 0..sq as u32 {
        for v in u..sq as u32 {
            let walks = common(u, v);
            let expected = if u == v {
                q as usize
            } else if u / q as u32 != v / q as u32 {
                1
            } else {
                0
            };
            if walks != expected {
                return Err(AffineError::WalkCountMismatch {
                    detail: format!(
                        "left pair ({}, {}): {walks} two-step walks, expected {expected}",
                        g.labels().map_or_else(|| u.to_string(), |l| l[u as usize].clone()),
                        g.labels().map_or_else(|| v.to_string(), |l| l[v as usize].clone()),
                    ),
                });
            }
        }
    }

    // Expected spectrum, descending: 1, (1/√q)^{q²−q}, 0^{2(q−1)}, …
    let root = 1.0 / (q as Real).sqrt();
    let mut expected = Vec::with_capacity(2 * sq);
    expected.push(1.0);
    expected.extend(std::iter::repeat(root).take(sq - q as usize));
    expected.extend(std::iter::repeat(0.0).take(2 * (q as usize - 1)));
    expected.extend(std::iter::repeat(-root).take(sq - q as usize));
    expected.push(-1.0);

    let spectrum = normalized_spectrum(&g, 1e-11)?;
    for (k, (&got, &want)) in spectrum.iter().zip(&expected).enumerate() {
        if (got - want).abs() > tol {
            return Err(AffineError::SpectrumMismatch {
                detail: format!("eigenvalue #{k}: measured {got}, closed form {want}"),
            });
        }
    }

    let mut report = spectral_report(&g, format!("B_{q}"), Solver::Dense, 1e-11)?;
    report.add_bound("lambda_2 <= 1/sqrt(q)", root, report.lambda_2 <= root + tol);
    Ok(report)
}

fn lin_index(p: u32, c: &[u32]) -> u32 {
    c[0] + c[1] * p
}

fn quad_index(p: u32, c: &[u32]) -> u32 {
    c[0] + (c[1] + c[2] * p) * p
}

/// The graph A on pairs (ℓ, Q), deg ℓ ≤ 1 and deg Q ≤ 2 over F_p, with
/// (ℓ₁,Q₁) ~ (ℓ₂,Q₂) ⟺ ℓ₁ℓ₂ = Q₁ + Q₂ as polynomials.
///
/// Both sides have p⁵ vertices — id (ℓ-index)·p³ + (Q-index), right side
/// offset by p⁵ — and the identity makes the graph p²-regular: fixing
/// (ℓ₁, Q₁) and ℓ₂ forces Q₂ = ℓ₁ℓ₂ − Q₁.  Degrees never exceed 2, so no
/// reduction is ever involved.
pub fn build_a(p: u32) -> Result<WeightedGraph, AffineError> {
    let side = p.pow(5);
    let mut edges = Vec::with_capacity((p.pow(7)) as usize);
    for a0 in 0..p {
        for a1 in 0..p {
            for q0 in 0..p {
                for q1 in 0..p {
                    for q2 in 0..p {
                        let left = lin_index(p, &[a0, a1]) * p.pow(3)
                            + quad_index(p, &[q0, q1, q2]);
                        for c0 in 0..p {
                            for c1 in 0..p {
                                // ℓ₁ℓ₂ by convolution, then Q₂ = ℓ₁ℓ₂ − Q₁.
                                let r0 = (a0 * c0) % p;
                                let r1 = (a0 * c1 + a1 * c0) % p;
                                let r2 = (a1 * c1) % p;
                                let d0 = (r0 + p - q0) % p;
                                let d1 = (r1 + p - q1) % p;
                                let d2 = (r2 + p - q2) % p;
                                let right = side
                                    + lin_index(p, &[c0, c1]) * p.pow(3)
                                    + quad_index(p, &[d0, d1, d2]);
                                edges.push((left, right, Weight::new(1, 1)));
                            }
                        }
                    }
                }
            }
        }
    }

    let mut labels = Vec::with_capacity(2 * side as usize);
    for side_tag in ["L", "R"] {
        for a0 in 0..p {
            for a1 in 0..p {
                let ell = TruncPoly::new(p, 3, &[a0 as i64, a1 as i64, 0])?;
                for q0 in 0..p {
                    for q1 in 0..p {
                        for q2 in 0..p {
                            let quad =
                                TruncPoly::new(p, 3, &[q0 as i64, q1 as i64, q2 as i64])?;
                            labels.push(format!("{side_tag}({ell},{quad})"));
                        }
                    }
                }
            }
        }
    }
    Ok(WeightedGraph::new(2 * side as usize, edges)?.with_labels(labels)?)
}

/// Verify that A is exactly the induced subgraph of B_{p³} on the vertices
/// whose first coordinate has degree ≤ 1, under t ↦ y.
///
/// Both containments are checked exhaustively: every A-edge appears in B,
/// and every B-edge between degree-capped vertices appears in A.
pub fn induced_subgraph_check(p: u32) -> Result<(), AffineError> {
    let q = (p as u64).pow(3);
    let field = ExtField::cubic(p)?;
    let b = build_bq(q)?;
    let a = build_a(p)?;
    let side = p.pow(5);

    // A-vertex → B-vertex: (ℓ, Q) ↦ (ℓ(y), Q(y)).  ids share the layout
    // (first coordinate)·(range of second) + (second), so this is arithmetic.
    let embed = |v: u32| -> u32 {
        let (offset, v) = if v >= side { ((q * q) as u32, v - side) } else { (0, v) };
        let (l, quad) = (v / p.pow(3), v % p.pow(3));
        let a_elem = field
            .elem(&[(l % p) as i64, (l / p) as i64, 0])
            .expect("linear coefficients are reduced");
        let b_elem = field
            .elem(&[
                (quad % p) as i64,
                (quad / p % p) as i64,
                (quad / (p * p)) as i64,
            ])
            .expect("quadratic coefficients are reduced");
        offset + (field.index(&a_elem) * q + field.index(&b_elem)) as u32
    };

    let b_edges: HashSet<(u32, u32)> = b.edges().iter().map(|&(u, v, _)| (u, v)).collect();
    let mut a_image = HashSet::with_capacity(a.edge_count());
    for &(u, v, _) in a.edges() {
        let (bu, bv) = (embed(u), embed(v));
        if !b_edges.contains(&(bu, bv)) {
            return Err(AffineError::EdgeMismatch {
                detail: format!(
                    "edge {} ~ {} of A is missing from B_{q}",
                    a.labels().unwrap()[u as usize],
                    a.labels().unwrap()[v as usize]
                ),
            });
        }
        a_image.insert((bu, bv));
    }

    // The degree-≤1 first coordinates are exactly the field indices < p².
    let capped = |v: u32| -> bool {
        let v = if v >= (q * q) as u32 { v - (q * q) as u32 } else { v };
        (v as u64 / q) < (p * p) as u64
    };
    for &(u, v, _) in b.edges() {
        if capped(u) && capped(v) && !a_image.contains(&(u, v)) {
            return Err(AffineError::EdgeMismatch {
                detail: format!(
                    "edge {} ~ {} of B_{q} joins degree-capped vertices but is not in A",
                    b.labels().unwrap()[u as usize],
                    b.labels().unwrap()[v as usize]
                ),
            });
        }
    }
    Ok(())
}

/// The canonical (ℓ, Q) read off a unipotent coset representative.
///
/// `which` selects the side: 1 clears the (2,3) entry (leaving
/// (ℓ, Q) = (x, z − xy), the M₂ normal form), 2 clears the (1,2) entry
/// (leaving (ℓ, Q) = (y, z), the M₁ normal form).
fn coset_pair(rep: &RingMatrix, which: u32) -> Result<(TruncPoly, TruncPoly), AffineError> {
    let (p, s, d) = rep.params();
    let (ell, quad) = match which {
        1 => {
            let y = rep.entry(1, 2);
            let m2 = rep.mul(&RingMatrix::elementary(p, s, d, 2, 3, &y.neg())?)?;
            (m2.entry(0, 1), m2.entry(0, 2))
        }
        _ => {
            let x = rep.entry(0, 1);
            let m1 = rep.mul(&RingMatrix::elementary(p, s, d, 1, 2, &x.neg())?)?;
            (m1.entry(1, 2), m1.entry(0, 2))
        }
    };
    Ok((ell, quad))
}

fn pair_to_a_vertex(p: u32, ell: &TruncPoly, quad: &TruncPoly) -> u32 {
    debug_assert!(ell.degree().is_none_or(|d| d <= 1));
    debug_assert!(quad.degree().is_none_or(|d| d <= 2));
    let l = ell.coeff(0) + ell.coeff(1) * p;
    let q = quad.coeff(0) + (quad.coeff(1) + quad.coeff(2) * p) * p;
    l * p.pow(3) + q
}

/// Verify that the two-type local link at d = 3 is exactly the graph A.
///
/// Every coset on the type-1 side has a unique representative with zero
/// (2,3) entry and every type-2 coset one with zero (1,2) entry; reading off
/// their (ℓ, Q) pairs — with Q negated on the type-1 side — must be a
/// bijection onto A's vertices carrying edges to edges, both ways.  Needs
/// s ≥ 3: below that, quadratics collapse mod t^s and the representatives
/// stop being faithful, so the comparison is refused rather than fudged.
pub fn link_bijection_check(p: u32, s: u32, cap: usize) -> Result<LocalLink, AffineError> {
    if s < 3 {
        return Err(AffineError::UnfaithfulTruncation { s });
    }
    let link = local_link_pair(p, s, 3, 1, 2, cap)?;
    let a = build_a(p)?;
    let side = p.pow(5);
    let (t1, t2) = link.side_tables();
    let left_count = link.left_count() as u32;

    if t1.count() != side as usize || t2.count() != side as usize {
        return Err(AffineError::BijectionFailure {
            detail: format!(
                "expected {side} cosets per side, found {} and {}",
                t1.count(),
                t2.count()
            ),
        });
    }

    // Type-1 cosets (of ⟨e₂₃⟩) carry M₂ forms and map to A's right side with
    // the sign flip; type-2 cosets (of ⟨e₁₂⟩) carry M₁ forms and map to the
    // left side as-is.
    let mut to_a = vec![0u32; link.graph().n()];
    let mut seen = HashSet::new();
    for c in 0..left_count {
        let (ell, quad) = coset_pair(t1.rep(c), 1)?;
        to_a[c as usize] = side + pair_to_a_vertex(p, &ell, &quad.neg());
        if !seen.insert(to_a[c as usize]) {
            return Err(AffineError::BijectionFailure {
                detail: format!("two type-1 cosets map to pair ({ell},{quad})"),
            });
        }
    }
    for c in 0..side {
        let (ell, quad) = coset_pair(t2.rep(c), 2)?;
        to_a[(left_count + c) as usize] = pair_to_a_vertex(p, &ell, &quad);
        if !seen.insert(to_a[(left_count + c) as usize]) {
            return Err(AffineError::BijectionFailure {
                detail: format!("two type-2 cosets map to pair ({ell},{quad})"),
            });
        }
    }

    let a_edges: HashSet<(u32, u32)> = a.edges().iter().map(|&(u, v, _)| (u, v)).collect();
    if link.graph().edge_count() != a_edges.len() {
        return Err(AffineError::BijectionFailure {
            detail: format!(
                "link has {} edges, A has {}",
                link.graph().edge_count(),
                a_edges.len()
            ),
        });
    }
    for &(u, v, _) in link.graph().edges() {
        // u is type-1 (→ A-right), v is type-2 (→ A-left).
        let (au, av) = (to_a[v as usize], to_a[u as usize]);
        if !a_edges.contains(&(au, av)) {
            return Err(AffineError::BijectionFailure {
                detail: format!(
                    "link edge between cosets {u} and {v} maps to {} ~ {}, absent from A",
                    a.labels().unwrap()[au as usize],
                    a.labels().unwrap()[av as usize]
                ),
            });
        }
    }

    // The identity cosets read off (0,0) on both sides, which A joins.
    let id = RingMatrix::identity(p, s, 3)?;
    let (u, v) = (t1.coset_of(&id)?, t2.coset_of(&id)?);
    if !link
        .graph()
        .neighbors(u)
        .iter()
        .any(|&(w, _)| w == left_count + v)
    {
        return Err(AffineError::BijectionFailure {
            detail: "identity cosets of the two sides are not adjacent".to_string(),
        });
    }
    Ok(link)
}

/// The eigenvalue bound a d-regular induced subgraph inherits from its
/// D-regular host: λ(X) ≤ D·λ(Y)/d.
pub fn induced_eig_bound(d: Real, big_d: Real, lambda: Real) -> Result<Real, AffineError> {
    if !(d > 0.0 && big_d >= d) {
        return Err(AffineError::BadDegrees { d, big_d });
    }
    Ok(big_d * lambda / d)
}
