//! Drives the finite-section scheme: computes section pseudoinverses over a
//! schedule of sizes, tracks the running supremum of their operator norms,
//! forms best-approximate-solution iterates, and classifies the run as
//! Convergent, Divergent, or Inconclusive.
//!
//! Work at different section sizes is independent and runs in parallel; the
//! trace and verdict are assembled in schedule order afterwards, so results
//! do not depend on execution order.

use crate::gallery::{
    apply, in_domain, oracle_pinv_apply, truncate, CoeffVector, GalleryError, SpectralModel,
    TruncationRequest,
};
use crate::linalg::{
    eig_sym, pinv_from_eig, resolvent_apply, vec_norm, EigenDecomposition, LinalgError,
    ToleranceContext,
};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("invalid run configuration: {0}")]
    ConfigInvalid(String),
    #[error("truncation size {got} too small: need at least {required} to capture the probe")]
    TruncationTooSmall { required: usize, got: usize },
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Schedule of section sizes and the thresholds used by the classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Strictly increasing section sizes; defaults to powers of two up to 1024.
    pub schedule: Vec<usize>,
    /// A running supremum above this is classified as divergent outright.
    pub divergence_threshold: f64,
    /// Largest allowed max/min ratio of the pseudoinverse norms over the
    /// second half of the schedule for a Convergent verdict.
    pub plateau_ratio: f64,
    /// Largest allowed final Cauchy gap for a Convergent verdict.
    pub residual_tol: f64,
    pub tolerance: ToleranceContext,
}

pub fn default_schedule() -> Vec<usize> {
    (1..=10).map(|i| 1usize << i).collect()
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schedule: default_schedule(),
            divergence_threshold: 1e8,
            plateau_ratio: 1.5,
            residual_tol: 1e-8,
            tolerance: ToleranceContext::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.schedule.is_empty() {
            return Err(EngineError::ConfigInvalid("schedule is empty".into()));
        }
        for &n in &self.schedule {
            TruncationRequest::new(n)
                .map_err(|_| EngineError::ConfigInvalid("schedule entries must be >= 1".into()))?;
        }
        for w in self.schedule.windows(2) {
            if w[1] <= w[0] {
                return Err(EngineError::ConfigInvalid(format!(
                    "schedule must be strictly increasing (got {} then {})",
                    w[0], w[1]
                )));
            }
        }
        if !(self.divergence_threshold > 0.0) || !self.divergence_threshold.is_finite() {
            return Err(EngineError::ConfigInvalid(
                "divergence threshold must be positive and finite".into(),
            ));
        }
        if !(self.plateau_ratio >= 1.0) || !self.plateau_ratio.is_finite() {
            return Err(EngineError::ConfigInvalid(
                "plateau ratio must be at least 1".into(),
            ));
        }
        if !(self.residual_tol > 0.0) || !self.residual_tol.is_finite() {
            return Err(EngineError::ConfigInvalid(
                "residual tolerance must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRecord {
    pub n: usize,
    pub pinv_norm: f64,
    /// Prefix maximum of `pinv_norm`, non-decreasing along the trace.
    pub running_sup: f64,
}

/// Per-size record of the pseudoinverse norms and their running supremum.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StabilityTrace {
    pub records: Vec<StabilityRecord>,
}

impl StabilityTrace {
    pub fn from_norms(norms: &[(usize, f64)]) -> Self {
        let mut records = Vec::with_capacity(norms.len());
        let mut sup = 0.0f64;
        for &(n, norm) in norms {
            sup = sup.max(norm);
            records.push(StabilityRecord {
                n,
                pinv_norm: norm,
                running_sup: sup,
            });
        }
        StabilityTrace { records }
    }

    pub fn final_sup(&self) -> Option<f64> {
        self.records.last().map(|r| r.running_sup)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Convergent => "Convergent",
            Verdict::Divergent => "Divergent",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Iterate at one schedule point.
#[derive(Debug, Clone)]
pub struct IterateRecord {
    pub n: usize,
    pub x: CoeffVector,
    /// Distance to the analytic best-approximate solution, when an exact
    /// oracle exists and the data lies in the pseudoinverse domain.
    pub oracle_err: Option<f64>,
    /// Distance to the previous iterate after zero-padding to the common
    /// length; the first record measures against the zero vector.
    pub cauchy_gap: f64,
}

/// Outcome of a best-approximate-solution run.
#[derive(Debug, Clone)]
pub struct BestApproxRun {
    pub trace: StabilityTrace,
    pub iterates: Vec<IterateRecord>,
    pub verdict: Verdict,
    pub verdict_reason: String,
    /// Schedule points skipped because the kernel computation failed there.
    pub failures: Vec<(usize, String)>,
}

/// Runs the scheme for `A x = y`: at every scheduled size, form the section,
/// its pseudoinverse, and the iterate applied to the truncated data.
pub fn run_best_approx(
    model: &SpectralModel,
    y: &CoeffVector,
    config: &RunConfig,
) -> Result<BestApproxRun, EngineError> {
    config.validate()?;

    struct PointResult {
        n: usize,
        outcome: Result<(f64, Vec<f64>), String>,
    }

    let points: Vec<PointResult> = config
        .schedule
        .par_iter()
        .map(|&n| {
            let outcome = (|| {
                let section = truncate(model, n);
                let eig = eig_sym(&section).map_err(|e| e.to_string())?;
                let p = pinv_from_eig(&eig, &config.tolerance).map_err(|e| e.to_string())?;
                let x = p.matrix.matvec(&y.truncated(n));
                Ok((p.norm, x))
            })();
            PointResult { n, outcome }
        })
        .collect();

    let oracle_target = match oracle_pinv_apply(model, y) {
        Ok(ans) if ans.exact => ans.value.as_vector().cloned(),
        _ => None,
    };

    let mut norms = Vec::new();
    let mut iterates: Vec<IterateRecord> = Vec::new();
    let mut failures = Vec::new();
    let mut previous: Option<CoeffVector> = None;
    for point in points {
        match point.outcome {
            Ok((norm, x)) => {
                norms.push((point.n, norm));
                let x = CoeffVector::from_coeffs(x)?;
                let cauchy_gap = match &previous {
                    Some(prev) => x.distance(prev),
                    None => vec_norm(x.head()),
                };
                let oracle_err = oracle_target.as_ref().map(|target| x.distance(target));
                previous = Some(x.clone());
                iterates.push(IterateRecord {
                    n: point.n,
                    x,
                    oracle_err,
                    cauchy_gap,
                });
            }
            Err(message) => failures.push((point.n, message)),
        }
    }

    let trace = StabilityTrace::from_norms(&norms);
    let final_gap = iterates.last().map(|r| r.cauchy_gap);
    let (verdict, mut verdict_reason) = classify(&trace, final_gap, config);
    if !failures.is_empty() {
        verdict_reason.push_str(&format!(
            "; {} schedule point(s) skipped after kernel errors",
            failures.len()
        ));
    }
    Ok(BestApproxRun {
        trace,
        iterates,
        verdict,
        verdict_reason,
        failures,
    })
}

/// Classifies a stability trace alone, with no iterate data: the Cauchy-gap
/// requirement of the Convergent verdict is waived.
pub fn stability_classify(trace: &StabilityTrace, config: &RunConfig) -> (Verdict, String) {
    classify(trace, None, config)
}

fn classify(
    trace: &StabilityTrace,
    final_cauchy_gap: Option<f64>,
    config: &RunConfig,
) -> (Verdict, String) {
    let records = &trace.records;
    if records.is_empty() {
        return (
            Verdict::Inconclusive,
            "no successful schedule points".into(),
        );
    }
    let final_sup = records.last().unwrap().running_sup;

    if final_sup > config.divergence_threshold {
        return (
            Verdict::Divergent,
            format!(
                "running supremum {final_sup:.6e} exceeds divergence threshold {:.6e}",
                config.divergence_threshold
            ),
        );
    }
    // Growth between the first and last quarter of the schedule.
    let quarter = (records.len() / 4).max(1);
    let early_sup = records[quarter - 1].running_sup;
    if early_sup > 0.0 && final_sup >= 10.0 * early_sup {
        return (
            Verdict::Divergent,
            format!(
                "running supremum grew from {early_sup:.6e} to {final_sup:.6e} \
                 (factor {:.3e} >= 10) across schedule quarters",
                final_sup / early_sup
            ),
        );
    }

    // Plateau of the raw norms over the second half of the schedule.
    let half = &records[records.len() / 2..];
    let max_norm = half.iter().map(|r| r.pinv_norm).fold(0.0f64, f64::max);
    let min_norm = half
        .iter()
        .map(|r| r.pinv_norm)
        .fold(f64::INFINITY, f64::min);
    let plateau_ok = if max_norm == 0.0 {
        true
    } else if min_norm == 0.0 {
        false
    } else {
        max_norm / min_norm <= config.plateau_ratio
    };
    if !plateau_ok {
        return (
            Verdict::Inconclusive,
            format!(
                "pseudoinverse norms over the last half of the schedule vary by a factor \
                 {:.3e}, above the plateau ratio {:.3}",
                if min_norm == 0.0 {
                    f64::INFINITY
                } else {
                    max_norm / min_norm
                },
                config.plateau_ratio
            ),
        );
    }

    match final_cauchy_gap {
        None => (
            Verdict::Convergent,
            format!(
                "running supremum {final_sup:.6e} bounded, norm plateau within {:.3} \
                 (trace-only classification)",
                config.plateau_ratio
            ),
        ),
        Some(gap) if gap < config.residual_tol => (
            Verdict::Convergent,
            format!(
                "running supremum {final_sup:.6e} bounded, norm plateau within {:.3}, \
                 final cauchy gap {gap:.6e} below {:.6e}",
                config.plateau_ratio, config.residual_tol
            ),
        ),
        Some(gap) => (
            Verdict::Inconclusive,
            format!(
                "norms stable but final cauchy gap {gap:.6e} is not below {:.6e}",
                config.residual_tol
            ),
        ),
    }
}

/// The explicit graph-norm witness: lifts a finitely supported domain vector
/// `u` to `u_n = (iI - A_n)^{-1} P_n (iI - A) u`, an element of the section
/// domain whose pair `(u_n, A_n u_n)` approximates `(u, A u)`.
///
/// For sections of this gallery the lift is real up to round-off, so the
/// imaginary component of the solve is discarded.
pub fn graph_lift(
    model: &SpectralModel,
    u: &CoeffVector,
    n: usize,
) -> Result<CoeffVector, EngineError> {
    let section = truncate(model, n);
    let eig = eig_sym(&section)?;
    graph_lift_with_eig(model, u, n, &eig)
}

/// [`graph_lift`] against a precomputed factorization of the size-`n` section.
pub(crate) fn graph_lift_with_eig(
    model: &SpectralModel,
    u: &CoeffVector,
    n: usize,
    eig: &EigenDecomposition,
) -> Result<CoeffVector, EngineError> {
    if !in_domain(model, u)? {
        return Err(GalleryError::DomainViolation(
            "graph lift requires a vector in the operator domain".into(),
        )
        .into());
    }
    let support = u.finite_support().ok_or_else(|| {
        GalleryError::DomainViolation("graph lift requires finitely supported input".into())
    })?;
    let required = (support + model.bandwidth()).max(1);
    if n < required {
        return Err(EngineError::TruncationTooSmall { required, got: n });
    }
    let image = apply(model, u)?;
    let shift = Complex64::new(0.0, 1.0);
    let rhs: Vec<Complex64> = (1..=n)
        .map(|k| shift * u.component(k) - image.component(k))
        .collect();
    let lifted = resolvent_apply(eig, shift, &rhs)?;
    Ok(CoeffVector::from_coeffs(
        lifted.iter().map(|z| z.re).collect(),
    )?)
}

/// Graph-convergence residual `||u_n - u|| + ||A_n u_n - A u||` for a lifted
/// vector, with both comparisons zero-padded to a common length.
pub fn graph_residual(
    model: &SpectralModel,
    u: &CoeffVector,
    u_n: &CoeffVector,
    n: usize,
) -> Result<f64, EngineError> {
    let section = truncate(model, n);
    let section_image = CoeffVector::from_coeffs(section.matvec(&u_n.truncated(n)))?;
    let exact_image = apply(model, u)?;
    Ok(u_n.distance(u) + section_image.distance(&exact_image))
}
