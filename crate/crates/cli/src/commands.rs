//! The pipelines behind each subcommand.
//!
//! Every command builds what it needs, records its assertions into a
//! [`Certificate`], writes the JSON, and hands back the certificate so the
//! caller can turn `pass` into an exit status.  Stage timings are printed to
//! stdout only — the JSON must stay byte-identical across reruns.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use hdx_core::affine::{
    build_a, build_bq, bq_spectrum_check, induced_eig_bound, induced_subgraph_check,
    link_bijection_check,
};
use hdx_core::complex::{build_complex, WeightedComplex};
use hdx_core::error::{AffineError, CertifyError, ComplexError, GroupError, SpectralError};
use hdx_core::group::{
    bfs_closure, special_linear_bruteforce, GeneratorSet, GroupEnumeration, RingMatrix,
};
use hdx_core::spectral::{
    descent_bounds, eig_extremes_iterative, hdx_certify, local_decomposition,
    normalized_spectrum, operator_identities, spectral_report, trickle_down_check, Solver,
    WeightedGraph, TRICKLE_TOL,
};
use hdx_core::Real;

use crate::cache;
use crate::certificate::Certificate;

/// How a command run can go wrong, mapped to exit statuses by `main`.
#[derive(Debug)]
pub enum CmdError {
    /// Parameters out of range, caps exceeded, missing caches: exit 3.
    Infeasible(String),
    /// An eigensolver gave up before reaching its tolerance: exit 4.
    NonConvergence(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Infeasible(m) | CmdError::NonConvergence(m) => write!(f, "{m}"),
        }
    }
}

impl From<SpectralError> for CmdError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NonConvergence { .. } => CmdError::NonConvergence(e.to_string()),
            other => CmdError::Infeasible(other.to_string()),
        }
    }
}

impl From<GroupError> for CmdError {
    fn from(e: GroupError) -> Self {
        CmdError::Infeasible(e.to_string())
    }
}

impl From<ComplexError> for CmdError {
    fn from(e: ComplexError) -> Self {
        CmdError::Infeasible(e.to_string())
    }
}

impl From<CertifyError> for CmdError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Spectral(s) => s.into(),
            other => CmdError::Infeasible(other.to_string()),
        }
    }
}

impl From<AffineError> for CmdError {
    fn from(e: AffineError) -> Self {
        match e {
            AffineError::Spectral(s) => s.into(),
            other => CmdError::Infeasible(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Infeasible(e.to_string())
    }
}

/// Shared knob set, already defaulted by the flag parser.
#[derive(Clone, Debug)]
pub struct Params {
    pub p: u32,
    pub s: u32,
    pub d: u32,
    pub k: Option<u32>,
    pub cap: usize,
    pub tol: Real,
    pub solver: Solver,
    pub out: PathBuf,
    pub cache: PathBuf,
}

impl Params {
    fn config(&self) -> serde_json::Value {
        json!({
            "p": self.p, "s": self.s, "d": self.d, "k": self.k,
            "cap": self.cap, "tol": self.tol,
            "solver": solver_name(self.solver),
        })
    }

    fn stem(&self, command: &str) -> String {
        format!("{command}_p{}_s{}_d{}", self.p, self.s, self.d)
    }
}

fn solver_name(s: Solver) -> &'static str {
    match s {
        Solver::Dense => "dense",
        Solver::Iterative => "iterative",
        Solver::Auto => "auto",
    }
}

/// |SL_d(F_p)| = p^{d(d−1)/2} · Π_{k=2..d} (p^k − 1).
fn sl_order_mod_p(p: u32, d: u32) -> u128 {
    let p = p as u128;
    let mut order = p.pow(d * (d - 1) / 2);
    for k in 2..=d {
        order *= p.pow(k) - 1;
    }
    order
}

/// Order of the kernel of reduction mod t: p^{(s−1)(d²−1)} on determinant-1
/// matrices, times the base-field group order.
fn expected_group_order(p: u32, s: u32, d: u32) -> u128 {
    sl_order_mod_p(p, d) * (p as u128).pow((s - 1) * (d * d - 1))
}

fn elapsed(stage: &str, t: Instant) {
    println!("  [{stage}: {:.2?}]", t.elapsed());
}

/// Closure of an explicit element set by right multiplication.  The seeds
/// here are always whole subgroups, so inverse closure is automatic.
fn closure_from_elements(
    p: u32,
    s: u32,
    d: u32,
    seeds: &[RingMatrix],
    cap: usize,
) -> Result<HashSet<u128>, CmdError> {
    let mut frontier = vec![RingMatrix::identity(p, s, d)?];
    let mut seen: HashSet<u128> = frontier.iter().map(RingMatrix::key).collect();
    while let Some(cur) = frontier.pop() {
        for g in seeds {
            let next = cur.mul(g)?;
            if seen.insert(next.key()) {
                if seen.len() > cap {
                    return Err(GroupError::CapExceeded { cap }.into());
                }
                frontier.push(next);
            }
        }
    }
    Ok(seen)
}

fn skeleton_of(x: &WeightedComplex) -> Result<WeightedGraph, CmdError> {
    let mut links = x.links_at_level(-1)?;
    Ok(links.remove(0).1.skeleton_graph()?)
}

/// Nonempty strict subsets of 1..=d, by bitmask.
fn type_subsets(d: u32) -> Vec<Vec<u32>> {
    let mut subsets = Vec::new();
    for mask in 1..(1u32 << d) - 1 {
        subsets.push((1..=d).filter(|i| mask >> (i - 1) & 1 == 1).collect());
    }
    subsets
}

// --- build ------------------------------------------------------------

pub fn cmd_build(params: &Params) -> Result<Certificate, CmdError> {
    let Params { p, s, d, cap, .. } = *params;
    let mut cert = Certificate::new("build", params.config());

    let t = Instant::now();
    let g = bfs_closure(&GeneratorSet::full(p, s, d)?, cap)?;
    elapsed("closure of all families", t);
    cert.check_eq(
        "closure order matches |SL_d(F_p)| * p^((s-1)(d^2-1))",
        expected_group_order(p, s, d),
        g.order(),
    );
    let path = cache::store(&params.cache, &g)?;
    println!("  cached {}", path.display());

    let t = Instant::now();
    let mut orders = Vec::new();
    for i in 1..=d {
        let ki = bfs_closure(&GeneratorSet::omitting(p, s, d, &[i])?, cap)?;
        let contained = ki.elements().iter().all(|m| g.contains(m));
        cert.check_eq(format!("K_{i} is inside the full closure"), true, contained);
        orders.push(ki.order());
        let path = cache::store(&params.cache, &ki)?;
        println!("  cached {}", path.display());
    }
    elapsed("vertex subgroup closures", t);
    cert.check_eq(
        "all vertex subgroups share one order",
        orders[0],
        if orders.iter().all(|&o| o == orders[0]) {
            orders[0]
        } else {
            0
        },
    );

    cert.write(&params.out, &params.stem("build"))?;
    Ok(cert)
}

// --- verify-groups ----------------------------------------------------

pub fn cmd_verify_groups(params: &Params) -> Result<Certificate, CmdError> {
    let mut cert = Certificate::new("verify-groups", params.config());
    run_group_checks(&mut cert, params)?;
    cert.write(&params.out, &params.stem("verify-groups"))?;
    Ok(cert)
}

// --- verify-complex ---------------------------------------------------

pub fn cmd_verify_complex(params: &Params) -> Result<Certificate, CmdError> {
    let Params { p, s, d, cap, .. } = *params;
    let mut cert = Certificate::new("verify-complex", params.config());

    let t = Instant::now();
    let x = build_complex(p, s, d, cap)?;
    elapsed("complex construction", t);

    cert.check_eq(
        "top faces are in bijection with group elements",
        x.group_order(),
        x.face_count(x.dim())?,
    );
    let vertex_total: usize = (1..=d).map(|i| x.table(i).count()).sum();
    cert.check_eq(
        "vertex count is the sum of coset counts over types",
        vertex_total,
        x.face_count(0)?,
    );
    for level in 0..=x.dim() {
        println!("  level {level}: {} faces", x.face_count(level)?);
    }

    let t = Instant::now();
    for (name, result) in [
        ("balanced weights sum and recurse exactly", x.verify_balanced()),
        ("every face extends to a top face", x.verify_pure()),
        ("faces are partite across types", x.verify_partite()),
    ] {
        match result {
            Ok(()) => cert.check_eq(name, "holds", "holds"),
            Err(e) => cert.check_eq(name, "holds", format!("violated: {e}")),
        }
    }
    elapsed("structural verification", t);

    cert.write(&params.out, &params.stem("verify-complex"))?;
    Ok(cert)
}

// --- spectra ----------------------------------------------------------

pub fn cmd_spectra(params: &Params) -> Result<Certificate, CmdError> {
    let Params { p, s, d, cap, tol, solver, .. } = *params;
    let mut cert = Certificate::new("spectra", params.config());

    let t = Instant::now();
    let x = build_complex(p, s, d, cap)?;
    let g = skeleton_of(&x)?;
    elapsed("complex and skeleton", t);

    let t = Instant::now();
    let report = spectral_report(&g, format!("skeleton p={p} s={s} d={d}"), solver, tol)?;
    elapsed(&format!("eigensolve ({} path, n={})", report.solver, report.n), t);

    cert.check_eq("skeleton is connected", true, report.is_connected);
    cert.check(
        "top of the normalized spectrum is 1",
        1.0,
        report.lambda_max,
        1e-9,
        (report.lambda_max - 1.0).abs() <= 1e-9,
    );
    cert.check(
        "whole spectrum lies in [-1, 1]",
        "within 1e-9",
        format!("[{}, {}]", report.lambda_min, report.lambda_max),
        1e-9,
        report.lambda_min >= -1.0 - 1e-9 && report.lambda_max <= 1.0 + 1e-9,
    );
    if report.is_connected {
        let floor = -1.0 / (d as Real - 1.0);
        cert.check(
            "least eigenvalue sits on the partite floor -1/(d-1)",
            floor,
            report.lambda_min,
            1e-8,
            (report.lambda_min - floor).abs() <= 1e-8,
        );
    }
    println!(
        "  lambda_2 = {}, lambda_min = {}, lambda(G) = {}",
        report.lambda_2,
        report.lambda_min,
        report.two_sided_lambda()
    );

    cert.write(&params.out, &params.stem("spectra"))?;
    Ok(cert)
}

// --- affine -----------------------------------------------------------

/// Largest q for which the closed-form spectrum check runs densely.
const BQ_DENSE_MAX: u64 = 27;

pub fn cmd_affine(params: &Params) -> Result<Certificate, CmdError> {
    let Params { p, cap, .. } = *params;
    let mut cert = Certificate::new("affine", params.config());
    let q = (p as u64).pow(3);
    let root_q = 1.0 / (q as Real).sqrt();

    // B_q: full closed-form verification where dense is feasible, measured
    // extremes on the iterative path beyond.
    let t = Instant::now();
    let lambda_2_b = if q <= BQ_DENSE_MAX {
        match bq_spectrum_check(q, 1e-9) {
            Ok(report) => {
                cert.check_eq(
                    "two-step walk counts follow q*I + (J-I) (x) J",
                    "exact",
                    "exact",
                );
                cert.check(
                    "normalized spectrum is the closed-form multiset",
                    format!("{{±1, ±{root_q:.6}, 0}} with fixed multiplicities"),
                    "matched eigenvalue by eigenvalue",
                    1e-9,
                    true,
                );
                cert.check(
                    "lambda_2(B_q) = 1/sqrt(q)",
                    root_q,
                    report.lambda_2,
                    1e-9,
                    (report.lambda_2 - root_q).abs() <= 1e-9,
                );
                report.lambda_2
            }
            Err(AffineError::WalkCountMismatch { detail }) => {
                cert.check_eq("two-step walk counts follow q*I + (J-I) (x) J", "exact", detail);
                return finish_affine(cert, params);
            }
            Err(AffineError::SpectrumMismatch { detail }) => {
                cert.check_eq(
                    "normalized spectrum is the closed-form multiset",
                    "matched eigenvalue by eigenvalue",
                    detail,
                );
                return finish_affine(cert, params);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let b = build_bq(q)?;
        let report = spectral_report(&b, format!("B_{q}"), Solver::Iterative, 1e-10)?;
        cert.check(
            "lambda_2(B_q) = 1/sqrt(q)",
            root_q,
            report.lambda_2,
            1e-9,
            (report.lambda_2 - root_q).abs() <= 1e-9,
        );
        report.lambda_2
    };
    elapsed(&format!("B_{q}"), t);

    // Exhaustive structure comparisons, at the scales they are exhaustive.
    if p <= 3 {
        let t = Instant::now();
        match induced_subgraph_check(p) {
            Ok(()) => cert.check_eq(
                "A is the induced subgraph of B_q on degree-capped vertices",
                "edge sets equal",
                "edge sets equal",
            ),
            Err(AffineError::EdgeMismatch { detail }) => {
                cert.check_eq(
                    "A is the induced subgraph of B_q on degree-capped vertices",
                    "edge sets equal",
                    detail,
                );
            }
            Err(e) => return Err(e.into()),
        }
        match link_bijection_check(p, 3, cap) {
            Ok(_) => cert.check_eq(
                "consecutive-pair link equals A under the representative map",
                "graphs identical",
                "graphs identical",
            ),
            Err(AffineError::BijectionFailure { detail })
            | Err(AffineError::EdgeMismatch { detail }) => {
                cert.check_eq(
                    "consecutive-pair link equals A under the representative map",
                    "graphs identical",
                    detail,
                );
            }
            Err(e) => return Err(e.into()),
        }
        elapsed("exhaustive graph comparisons", t);
    } else {
        println!("  exhaustive subgraph/bijection comparisons run at p <= 3; skipped");
    }

    // Spectrum of A.  The dense path is deliberate even at p = 5 (6250
    // vertices): the bipartite Gram reduction keeps it tractable, and the
    // measured value is the point of the experiment.
    let t = Instant::now();
    let a = build_a(p)?;
    let solver = if params.solver == Solver::Auto {
        Solver::Dense
    } else {
        params.solver
    };
    let report = spectral_report(&a, format!("A_{p}"), solver, params.tol)?;
    elapsed(&format!("A_{p} eigensolve ({} path, n={})", report.solver, report.n), t);

    let root_p = 1.0 / (p as Real).sqrt();
    cert.check(
        "lambda_2(A) <= 1/sqrt(p)",
        format!("<= {root_p}"),
        report.lambda_2,
        1e-9,
        report.lambda_2 <= root_p + 1e-9,
    );
    let inherited = induced_eig_bound((p * p) as Real, (p * p * p) as Real, lambda_2_b)?;
    cert.check(
        "lambda_2(A) <= (p^3/p^2) * lambda_2(B_q), both measured",
        format!("<= {inherited}"),
        report.lambda_2,
        1e-9,
        report.lambda_2 <= inherited + 1e-9,
    );
    if report.solver == "dense" {
        // Full spectrum available: bipartite symmetry about zero.
        let spectrum = normalized_spectrum(&a, params.tol)?;
        let worst = (0..spectrum.len())
            .map(|k| (spectrum[k] + spectrum[spectrum.len() - 1 - k]).abs())
            .fold(0.0, Real::max);
        cert.check(
            "spectrum of A is symmetric about zero",
            "mirror pairs",
            format!("worst pair gap {worst:e}"),
            1e-9,
            worst <= 1e-9,
        );
    }

    finish_affine(cert, params)
}

fn finish_affine(cert: Certificate, params: &Params) -> Result<Certificate, CmdError> {
    cert.write(&params.out, &format!("affine_p{}", params.p))?;
    Ok(cert)
}

// --- trickle ----------------------------------------------------------

pub fn cmd_trickle(params: &Params) -> Result<Certificate, CmdError> {
    let Params { p, s, d, cap, tol, solver, .. } = *params;
    let mut cert = Certificate::new("trickle", params.config());

    let t = Instant::now();
    let x = build_complex(p, s, d, cap)?;
    let report = trickle_down_check(&x, solver, tol)?;
    elapsed("complex, links, and eigensolves", t);

    println!(
        "  lambda = {}, eta = {}, gamma+ = {}, gamma- = {}",
        report.lambda, report.eta, report.gamma_plus, report.gamma_minus
    );
    match report.plus_holds {
        Some(holds) => cert.check(
            "skeleton lambda_2 within the descent ceiling lambda/(1-lambda)",
            format!("<= {}", report.bound_plus),
            report.gamma_plus,
            TRICKLE_TOL,
            holds,
        ),
        None => cert.check_eq(
            "positive descent direction (needs connected skeleton)",
            "asserted",
            "skipped: skeleton disconnected, hypothesis unmet",
        ),
    }
    cert.check(
        "skeleton lambda_min above the descent floor eta/(1-eta)",
        format!(">= {}", report.bound_minus),
        report.gamma_minus,
        TRICKLE_TOL,
        report.minus_holds,
    );
    if (report.eta + 1.0).abs() <= 1e-9 {
        // Bipartite vertex links pin eta at −1; combined with d-partiteness
        // the skeleton floor is met exactly.
        let floor = -1.0 / (d as Real - 1.0);
        cert.check(
            "skeleton lambda_min equals -1/(d-1)",
            floor,
            report.gamma_minus,
            1e-8,
            (report.gamma_minus - floor).abs() <= 1e-8,
        );
    }

    cert.write(&params.out, &params.stem("trickle"))?;
    Ok(cert)
}

// --- report-all -------------------------------------------------------

pub fn cmd_report_all(params: &Params) -> Result<Certificate, CmdError> {
    let Params { p, s, d, cap, tol, solver, .. } = *params;
    let mut cert = Certificate::new("report-all", params.config());

    // Group identities (same checks as verify-groups, folded in).
    run_group_checks(&mut cert, params)?;

    let t = Instant::now();
    let x = build_complex(p, s, d, cap)?;
    elapsed("complex construction", t);
    cert.check_eq(
        "top faces are in bijection with group elements",
        x.group_order(),
        x.face_count(x.dim())?,
    );
    for (name, result) in [
        ("balanced weights sum and recurse exactly", x.verify_balanced()),
        ("every face extends to a top face", x.verify_pure()),
        ("faces are partite across types", x.verify_partite()),
    ] {
        match result {
            Ok(()) => cert.check_eq(name, "holds", "holds"),
            Err(e) => cert.check_eq(name, "holds", format!("violated: {e}")),
        }
    }

    // Full link certification: skeleton plus every link with a graph
    // 1-skeleton, certified at the measured worst link lambda_2.
    let t = Instant::now();
    let probe = hdx_certify(&x, 1.0, solver, tol)?;
    elapsed(
        &format!("eigensolves for {} link skeletons", probe.reports.len()),
        t,
    );
    cert.check_eq(
        "every link 1-skeleton is connected",
        "no failures",
        if probe.failures.is_empty() {
            "no failures".to_string()
        } else {
            probe.failures.join("; ")
        },
    );
    let lambda_star = probe.max_lambda_2;
    cert.check(
        "one-sided certificate at the measured worst link lambda_2",
        format!("all lambda_2 <= {lambda_star}"),
        format!("{} links certified", probe.reports.len()),
        0.0,
        probe.failures.is_empty(),
    );
    println!(
        "  max link lambda_2 = {lambda_star}, min link lambda_min = {}",
        probe.min_lambda_min
    );

    if d == 3 {
        // The probe already solved the skeleton and all vertex links; the
        // one-level descent quantities are read off its reports.
        let skeleton = &probe.reports[0];
        let (mut lambda, mut eta): (Real, Real) = (Real::NEG_INFINITY, Real::INFINITY);
        for r in &probe.reports[1..] {
            lambda = lambda.max(r.lambda_2);
            eta = eta.min(r.lambda_min);
        }
        let (bound_plus, bound_minus) = (lambda / (1.0 - lambda), eta / (1.0 - eta));
        if skeleton.is_connected {
            cert.check(
                "skeleton lambda_2 within the descent ceiling lambda/(1-lambda)",
                format!("<= {bound_plus}"),
                skeleton.lambda_2,
                TRICKLE_TOL,
                skeleton.lambda_2 <= bound_plus + TRICKLE_TOL,
            );
        }
        cert.check(
            "skeleton lambda_min above the descent floor eta/(1-eta)",
            format!(">= {bound_minus}"),
            skeleton.lambda_min,
            TRICKLE_TOL,
            skeleton.lambda_min >= bound_minus - TRICKLE_TOL,
        );
        let floor = -1.0 / (d as Real - 1.0);
        cert.check(
            "skeleton lambda_min equals -1/(d-1)",
            floor,
            skeleton.lambda_min,
            1e-8,
            (skeleton.lambda_min - floor).abs() <= 1e-8,
        );

        // Two-sided iterated-descent bound, instantiated with the measured
        // link quantities at the requested level.
        let k = params.k.unwrap_or(1);
        let bounds = descent_bounds(lambda, eta, d, k);
        let lambda_g = skeleton.two_sided_lambda();
        cert.check(
            format!("measured lambda(G) within the k={k} two-sided descent bound"),
            format!(
                "<= {}{}",
                bounds.two_sided,
                if bounds.two_sided_vacuous { " (vacuous)" } else { "" }
            ),
            lambda_g,
            1e-8,
            bounds.two_sided_vacuous || lambda_g <= bounds.two_sided + 1e-8,
        );
    }

    // Numerical hygiene on every built link skeleton plus the skeleton
    // itself: walk-operator identities and the local decomposition.
    let t = Instant::now();
    let skeleton_graph = skeleton_of(&x)?;
    let mut worst_adj: Real = 0.0;
    let mut worst_const: Real = 0.0;
    let mut probe_graphs = vec![skeleton_graph.clone()];
    for level in -1..=(d as i32 - 3) {
        for (_, link) in x.links_at_level(level)? {
            if level >= 0 {
                probe_graphs.push(link.skeleton_graph()?);
            }
        }
    }
    for (k, g) in probe_graphs.iter().enumerate() {
        let (adj, cons) = operator_identities(g, 100, 0x1D_u64 + k as u64);
        worst_adj = worst_adj.max(adj);
        worst_const = worst_const.max(cons);
    }
    cert.check(
        "walk operator self-adjoint in the stationary inner product",
        "0",
        format!("{worst_adj:e}"),
        1e-10,
        worst_adj <= 1e-10,
    );
    cert.check(
        "walk operator fixes constants",
        "0",
        format!("{worst_const:e}"),
        1e-12,
        worst_const <= 1e-12,
    );
    let decomp = local_decomposition(&x, 100, 0x2E)?;
    cert.check(
        "skeleton form decomposes over vertex links",
        "0",
        format!("{decomp:e}"),
        1e-10,
        decomp <= 1e-10,
    );
    elapsed("operator identities", t);

    // Solver cross-validation on the skeleton, when both paths run.
    if skeleton_graph.is_connected()? {
        let t = Instant::now();
        let dense = spectral_report(&skeleton_graph, "skeleton", Solver::Dense, tol)?;
        let (l2, lmin) = eig_extremes_iterative(&skeleton_graph, 1e-10)?;
        elapsed("dense vs iterative", t);
        cert.check(
            "dense and iterative solvers agree on lambda_2",
            dense.lambda_2,
            l2,
            1e-7,
            (dense.lambda_2 - l2).abs() <= 1e-7,
        );
        cert.check(
            "dense and iterative solvers agree on lambda_min",
            dense.lambda_min,
            lmin,
            1e-7,
            (dense.lambda_min - lmin).abs() <= 1e-7,
        );
    }

    cert.write(&params.out, &params.stem("report-all"))?;
    Ok(cert)
}

/// The verify-groups pipeline, recording into whichever certificate is at
/// hand (its own for the standalone command, the combined one for report-all).
fn run_group_checks(cert: &mut Certificate, params: &Params) -> Result<(), CmdError> {
    let Params { p, s, d, cap, .. } = *params;

    let t = Instant::now();
    let singles: Vec<GroupEnumeration> = (1..=d)
        .map(|i| bfs_closure(&GeneratorSet::omitting(p, s, d, &[i])?, cap))
        .collect::<Result<_, _>>()?;
    elapsed("vertex subgroup closures", t);

    let t = Instant::now();
    let subsets = type_subsets(d);
    let mut matched = 0usize;
    for set in &subsets {
        let ks = bfs_closure(&GeneratorSet::omitting(p, s, d, set)?, cap)?;
        let mut keys: HashSet<u128> = singles[set[0] as usize - 1]
            .elements()
            .iter()
            .map(RingMatrix::key)
            .collect();
        for &i in &set[1..] {
            keys.retain(|k| singles[i as usize - 1].contains_key(*k));
        }
        if ks.order() == keys.len() && ks.elements().iter().all(|m| keys.contains(&m.key())) {
            matched += 1;
        } else {
            println!(
                "  subset {set:?}: closure has {} elements, intersection {}",
                ks.order(),
                keys.len()
            );
        }
    }
    elapsed("closure vs intersection", t);
    cert.check_eq(
        "K_S closure equals the intersection of its vertex subgroups",
        format!("{}/{} subsets", subsets.len(), subsets.len()),
        format!("{matched}/{} subsets", subsets.len()),
    );

    let t = Instant::now();
    let small: Vec<&Vec<u32>> = subsets
        .iter()
        .filter(|set| set.len() <= (d - 2) as usize)
        .collect();
    let mut regenerated = 0usize;
    for set in &small {
        let ks = bfs_closure(&GeneratorSet::omitting(p, s, d, set)?, cap)?;
        let seeds: Vec<RingMatrix> = (1..=d)
            .filter(|i| !set.contains(i))
            .flat_map(|i| ks.intersection_elements(&singles[i as usize - 1]))
            .collect();
        let closure = closure_from_elements(p, s, d, &seeds, cap)?;
        if closure.len() == ks.order() {
            regenerated += 1;
        } else {
            println!(
                "  subset {set:?}: regenerated {} of {} elements",
                closure.len(),
                ks.order()
            );
        }
    }
    elapsed("regeneration from intersections", t);
    cert.check_eq(
        "K_S is generated by its intersections with the other vertex subgroups",
        format!("{}/{} subsets", small.len(), small.len()),
        format!("{regenerated}/{} subsets", small.len()),
    );

    // Where brute force is feasible, the closure of all families must be
    // exactly the determinant-1 matrices.
    let t = Instant::now();
    match special_linear_bruteforce(p, s, d) {
        Ok(bf) => {
            let g = bfs_closure(&GeneratorSet::full(p, s, d)?, cap)?;
            let same =
                g.order() == bf.order() && g.elements().iter().all(|m| bf.contains(m));
            cert.check_eq(
                "closure of all families equals determinant-1 brute force",
                format!("{} elements", bf.order()),
                if same {
                    format!("{} elements", g.order())
                } else {
                    format!("{} elements, sets differ", g.order())
                },
            );
            elapsed("brute-force cross-check", t);
        }
        Err(GroupError::BruteforceTooLarge { bits }) => {
            println!("  brute-force cross-check skipped: domain needs 2^{bits} keys");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

// --- export -----------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportKind {
    Complex,
    Graph,
    Group,
}

pub fn cmd_export(params: &Params, kind: ExportKind, path: &Path) -> Result<(), CmdError> {
    let Params { p, s, d, cap, .. } = *params;

    // Everything downstream of the group enumerations; exporting requires
    // them to have been built.
    let full = cache::load(&params.cache, p, s, d, &[], "full")
        .map_err(CmdError::Infeasible)?;

    fs::create_dir_all(path)?;
    match kind {
        ExportKind::Group => {
            let mut written = vec![write_group_dump(path, &full)?];
            for i in 1..=d {
                let ki = cache::load(&params.cache, p, s, d, &[i], &format!("k{i}"))
                    .map_err(CmdError::Infeasible)?;
                written.push(write_group_dump(path, &ki)?);
            }
            for w in written {
                println!("wrote {}", w.display());
            }
        }
        ExportKind::Complex => {
            let x = build_complex(p, s, d, cap)?;
            check_cache_consistency(&x, &full)?;
            let file = path.join(format!("faces_p{p}_s{s}_d{d}.txt"));
            let mut f = fs::File::create(&file)?;
            x.write_faces(&mut f)?;
            println!(
                "wrote {} ({} top faces)",
                file.display(),
                x.face_count(x.dim())?
            );
        }
        ExportKind::Graph => {
            let x = build_complex(p, s, d, cap)?;
            check_cache_consistency(&x, &full)?;
            let g = skeleton_of(&x)?;
            let file = path.join(format!("skeleton_p{p}_s{s}_d{d}.txt"));
            let mut f = fs::File::create(&file)?;
            g.write_edge_list(&mut f)?;
            let sidecar = path.join(format!("skeleton_p{p}_s{s}_d{d}.labels.json"));
            let labels: Vec<String> = g.labels().map(|l| l.to_vec()).unwrap_or_default();
            let body = serde_json::to_string_pretty(&json!({ "labels": labels }))
                .map_err(|e| CmdError::Infeasible(e.to_string()))?;
            fs::write(&sidecar, body + "\n")?;
            println!("wrote {} and {}", file.display(), sidecar.display());
        }
    }
    Ok(())
}

fn write_group_dump(dir: &Path, g: &GroupEnumeration) -> Result<PathBuf, CmdError> {
    let (p, s, d) = g.params();
    let file = dir.join(format!("group_p{p}_s{s}_d{d}_{}.txt", g.label()));
    let mut f = fs::File::create(&file)?;
    g.write_dump(&mut f)?;
    Ok(file)
}

fn check_cache_consistency(
    x: &WeightedComplex,
    cached_full: &GroupEnumeration,
) -> Result<(), CmdError> {
    if x.group_order() != cached_full.order() {
        return Err(CmdError::Infeasible(format!(
            "cached enumeration has {} elements but the rebuilt complex has {}; the cache \
             is stale — rerun `hdx build`",
            cached_full.order(),
            x.group_order()
        )));
    }
    Ok(())
}
