//! Expansion certificates for whole complexes.
//!
//! [`hdx_certify`] walks every link whose 1-skeleton is a graph — the empty
//! face and all faces up to two levels below the top — measures each
//! skeleton's spectrum, and renders the one-sided / two-sided verdicts at a
//! requested λ.  [`trickle_down_check`] instruments the one-level descent
//! inequalities γ⁺ ≤ λ/(1−λ) and γ⁻ ≥ η/(1−η) on 2-dimensional complexes,
//! and [`descent_bounds`] evaluates the closed-form bounds those inequalities
//! iterate into for higher dimensions.

use serde::Serialize;

use crate::complex::{Face, WeightedComplex};
use crate::error::CertifyError;
use crate::spectral::report::{spectral_report, Solver, SpectralReport};
use crate::Real;

/// Slack allowed when asserting the trickle-down inequalities.
pub const TRICKLE_TOL: Real = 1e-8;

/// Verdicts and per-link evidence from [`hdx_certify`].
#[derive(Clone, Debug, Serialize)]
pub struct HdxCertificate {
    /// The λ the verdicts were rendered at.
    pub lambda: Real,
    /// Every link 1-skeleton (empty face included) has λ₂ ≤ λ.
    pub onesided: bool,
    /// One-sided, and additionally every |λ_min| ≤ λ.
    pub two_sided: bool,
    /// Largest λ₂ seen across links — the smallest λ that would certify.
    pub max_lambda_2: Real,
    /// Smallest λ_min seen across links.
    pub min_lambda_min: Real,
    /// Human-readable reasons the verdicts failed, if they did.
    pub failures: Vec<String>,
    /// One report per analyzed link, empty face first, then by level.
    pub reports: Vec<SpectralReport>,
}

fn link_id(base: &Face) -> String {
    if base.is_empty() {
        "skeleton".to_string()
    } else {
        format!("link({base})")
    }
}

/// Measure every link 1-skeleton of `x` and certify expansion at `lambda`.
///
/// Links of faces at levels −1 (the whole skeleton) through d−3 have graphs
/// as 1-skeletons; each gets a [`SpectralReport`] with the λ bounds recorded.
/// A disconnected link never certifies: its λ₂ is 1 and the failure names
/// the offending face.
pub fn hdx_certify(
    x: &WeightedComplex,
    lambda: Real,
    solver: Solver,
    tol: Real,
) -> Result<HdxCertificate, CertifyError> {
    let (_, _, d) = x.params();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut max_lambda_2 = Real::NEG_INFINITY;
    let mut min_lambda_min = Real::INFINITY;

    for level in -1..=(d as i32 - 3) {
        for (base, link) in x.links_at_level(level)? {
            let g = link.skeleton_graph()?;
            let mut report = spectral_report(&g, link_id(&base), solver, tol)?;
            if !report.is_connected {
                failures.push(format!("{} is disconnected", link_id(&base)));
            }
            let l2_ok = report.lambda_2 <= lambda;
            let lmin_ok = report.lambda_min.abs() <= lambda;
            report.add_bound("lambda_2 <= lambda", lambda, l2_ok);
            report.add_bound("|lambda_min| <= lambda", lambda, lmin_ok);
            if !l2_ok {
                failures.push(format!(
                    "{}: lambda_2 = {} exceeds {lambda}",
                    link_id(&base),
                    report.lambda_2
                ));
            }
            max_lambda_2 = max_lambda_2.max(report.lambda_2);
            min_lambda_min = min_lambda_min.min(report.lambda_min);
            reports.push(report);
        }
    }

    let onesided = max_lambda_2 <= lambda && failures.is_empty();
    let two_sided = onesided && min_lambda_min >= -lambda;
    Ok(HdxCertificate {
        lambda,
        onesided,
        two_sided,
        max_lambda_2,
        min_lambda_min,
        failures,
        reports,
    })
}

/// Measured quantities and verdicts for the one-level descent inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct TrickleReport {
    /// λ₂ of the full 1-skeleton.
    pub gamma_plus: Real,
    /// λ_min of the full 1-skeleton.
    pub gamma_minus: Real,
    /// Worst (largest) λ₂ over all vertex links.
    pub lambda: Real,
    /// Worst (smallest) λ_min over all vertex links.
    pub eta: Real,
    /// λ/(1−λ): the ceiling the skeleton's γ⁺ must respect.
    pub bound_plus: Real,
    /// η/(1−η): the floor the skeleton's γ⁻ must respect.
    pub bound_minus: Real,
    /// None when the skeleton is disconnected — the positive direction
    /// needs connectivity, so it is reported but not asserted.
    pub plus_holds: Option<bool>,
    pub minus_holds: bool,
    pub tol: Real,
}

/// Instrument γ⁺ ≤ λ/(1−λ) and γ⁻ ≥ η/(1−η) on a 2-dimensional complex.
///
/// λ and η are taken over all vertex links, γ± from the full skeleton, all
/// measured with the requested solver; inequalities are asserted with
/// [`TRICKLE_TOL`] slack.  A disconnected skeleton voids the positive
/// direction (the descent argument needs a connected skeleton), which comes
/// back as `plus_holds: None`.
pub fn trickle_down_check(
    x: &WeightedComplex,
    solver: Solver,
    tol: Real,
) -> Result<TrickleReport, CertifyError> {
    let (_, _, d) = x.params();
    if d != 3 {
        return Err(CertifyError::NeedsDimensionThree { d });
    }

    let skeleton = x.links_at_level(-1)?.remove(0).1.skeleton_graph()?;
    let skeleton_report = spectral_report(&skeleton, "skeleton", solver, tol)?;

    let mut lambda = Real::NEG_INFINITY;
    let mut eta = Real::INFINITY;
    for (base, link) in x.links_at_level(0)? {
        let g = link.skeleton_graph()?;
        let r = spectral_report(&g, link_id(&base), solver, tol)?;
        lambda = lambda.max(r.lambda_2);
        eta = eta.min(r.lambda_min);
    }

    // λ = 1 (some disconnected link) degenerates the ceiling to +∞ and the
    // inequality to a tautology; the division-by-zero is deliberate.
    let bound_plus = lambda / (1.0 - lambda);
    let bound_minus = eta / (1.0 - eta);
    let plus_holds = if skeleton_report.is_connected {
        Some(skeleton_report.lambda_2 <= bound_plus + TRICKLE_TOL)
    } else {
        None
    };
    let minus_holds = skeleton_report.lambda_min >= bound_minus - TRICKLE_TOL;

    Ok(TrickleReport {
        gamma_plus: skeleton_report.lambda_2,
        gamma_minus: skeleton_report.lambda_min,
        lambda,
        eta,
        bound_plus,
        bound_minus,
        plus_holds,
        minus_holds,
        tol: TRICKLE_TOL,
    })
}

/// Closed-form expansion bounds implied by iterated descent.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DescentBounds {
    /// λ/(1−(d−2)λ): one-sided bound for the vertex links' λ.
    pub onesided: Real,
    /// The one-sided formula gives no information (≥ 1, or denominator ≤ 0).
    pub onesided_vacuous: bool,
    /// |η/(1−(d−2)η)|: the two-sided contribution descending from η.
    pub eta_descent: Real,
    /// 1/(d−k): the partiteness floor for the k-skeleton.
    pub floor: Real,
    /// max of the three components above.
    pub two_sided: Real,
    pub two_sided_vacuous: bool,
}

/// Evaluate the iterated-descent bounds for a d-dimensional complex whose
/// vertex-link spectra are pinched in [η, λ], reporting the two-sided bound
/// for its k-skeleton.
///
/// Out-of-range inputs (e.g. (d−2)λ ≥ 1, or k ≥ d) don't error — the
/// corresponding bound is flagged vacuous, matching how the closed forms
/// degenerate.
pub fn descent_bounds(lambda: Real, eta: Real, d: u32, k: u32) -> DescentBounds {
    let m = (d as Real) - 2.0;

    let denom = 1.0 - m * lambda;
    let onesided = lambda / denom;
    let onesided_vacuous = denom <= 0.0 || !(0.0 < onesided && onesided < 1.0);

    let eta_denom = 1.0 - m * eta;
    let eta_descent = (eta / eta_denom).abs();

    let floor = if k >= d {
        Real::INFINITY
    } else {
        1.0 / ((d - k) as Real)
    };

    let two_sided = onesided.max(eta_descent).max(floor);
    let two_sided_vacuous = onesided_vacuous || !(two_sided < 1.0);

    DescentBounds {
        onesided,
        onesided_vacuous,
        eta_descent,
        floor,
        two_sided,
        two_sided_vacuous,
    }
}
