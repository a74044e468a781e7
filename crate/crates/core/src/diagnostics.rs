//! Reusable finite-evidence checks for the convergence statements behind the
//! scheme: resolvent consistency, graph convergence of the sections,
//! moving-target strong convergence, kernel/range projection convergence,
//! and the Moore-Penrose structural identities.
//!
//! Each check walks a schedule of section sizes with a set of probe vectors
//! (and shifts where relevant) and reports a residual per row. Quantifiers
//! over the whole space are witnessed by the finite probe set.

use crate::engine::{graph_lift_with_eig, graph_residual, EngineError};
use crate::gallery::{
    apply, in_domain, truncate, CoeffVector, GalleryError, PowerTail, SpectralModel,
};
use crate::linalg::{
    eig_sym, frobenius, frobenius_diff, mat_mul, resolvent_apply, LinalgError, SymMatrix,
    ToleranceContext,
};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiagnosticsError {
    #[error("unsupported model for this check: {0}")]
    UnsupportedModel(String),
    #[error("reference unavailable: {0}")]
    ReferenceUnavailable(String),
    #[error("schedule must be nonempty and strictly increasing")]
    InvalidSchedule,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Labeled probe vector.
#[derive(Debug, Clone)]
pub struct Probe {
    pub id: String,
    pub vector: CoeffVector,
}

impl Probe {
    pub fn new(id: impl Into<String>, vector: CoeffVector) -> Self {
        Probe {
            id: id.into(),
            vector,
        }
    }
}

/// Finite witnesses for the quantifiers "for all data" and "for all non-real
/// shifts".
#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub probes: Vec<Probe>,
    pub lambdas: Vec<Complex64>,
}

impl ProbeSet {
    pub fn new(probes: Vec<Probe>, lambdas: Vec<Complex64>) -> Result<Self, DiagnosticsError> {
        if lambdas.iter().any(|l| l.im == 0.0) {
            return Err(LinalgError::NonRealRequired.into());
        }
        Ok(ProbeSet { probes, lambdas })
    }

    /// Three basis vectors, two finitely truncated decay vectors, and the
    /// shifts `i`, `2i`, `1 + i`.
    pub fn default_probes() -> Self {
        let mut probes = Vec::new();
        for k in 1..=3 {
            probes.push(Probe::new(format!("e{k}"), CoeffVector::basis(k)));
        }
        for exponent in [2.0, 1.5] {
            let coeffs: Vec<f64> = (1..=64).map(|k| (k as f64).powf(-exponent)).collect();
            probes.push(Probe::new(
                format!("decay:{exponent}:64"),
                CoeffVector::from_coeffs(coeffs).expect("finite decay probe"),
            ));
        }
        ProbeSet {
            probes,
            lambdas: vec![
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(1.0, 1.0),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Resolvent,
    Graph,
    Projection,
    MovingTarget,
    MpIdentities,
}

impl SuiteKind {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::Resolvent => "resolvent",
            SuiteKind::Graph => "graph",
            SuiteKind::Projection => "projection",
            SuiteKind::MovingTarget => "moving-target",
            SuiteKind::MpIdentities => "mp-identities",
        }
    }
}

impl std::fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub n: usize,
    pub probe_id: String,
    pub lambda: Option<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSummary {
    /// Largest residual at the final schedule point across probe groups.
    pub max_final_residual: f64,
    /// Fraction of probe groups whose residuals are non-increasing in the
    /// section size, up to an absolute slack of 1e-12.
    pub monotone_fraction: f64,
}

/// Residuals grouped by probe (and shift), ascending in the section size
/// within each group.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTable {
    pub suite: SuiteKind,
    pub rows: Vec<ResidualRow>,
    pub summary: ResidualSummary,
}

impl ResidualTable {
    fn from_groups(
        suite: SuiteKind,
        groups: Vec<(String, Option<Complex64>, Vec<(usize, f64)>)>,
    ) -> Self {
        let mut rows = Vec::new();
        let mut max_final = 0.0f64;
        let mut monotone_groups = 0usize;
        let mut total_groups = 0usize;
        for (probe_id, lambda, series) in groups {
            if series.is_empty() {
                continue;
            }
            total_groups += 1;
            if let Some(&(_, last)) = series.last() {
                max_final = max_final.max(last);
            }
            let monotone = series.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
            if monotone {
                monotone_groups += 1;
            }
            for (n, residual) in series {
                rows.push(ResidualRow {
                    n,
                    probe_id: probe_id.clone(),
                    lambda,
                    residual,
                });
            }
        }
        let monotone_fraction = if total_groups == 0 {
            1.0
        } else {
            monotone_groups as f64 / total_groups as f64
        };
        ResidualTable {
            suite,
            rows,
            summary: ResidualSummary {
                max_final_residual: max_final,
                monotone_fraction,
            },
        }
    }
}

fn validate_schedule(schedule: &[usize]) -> Result<(), DiagnosticsError> {
    if schedule.is_empty() || schedule[0] == 0 {
        return Err(DiagnosticsError::InvalidSchedule);
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DiagnosticsError::InvalidSchedule);
    }
    Ok(())
}

fn complexify(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Strong resolvent consistency of the sections: at each scheduled size and
/// each probe/shift pair, the distance between the section resolvent applied
/// to the truncated probe and the resolvent of the full operator.
///
/// Diagonal models use the exact componentwise reference; Jacobi models use a
/// high-resolution reference section (four times the largest scheduled size)
/// solved directly as a complex tridiagonal system, guarded by a tail-mass
/// admissibility bound.
pub fn check_resolvent_consistency(
    model: &SpectralModel,
    probes: &ProbeSet,
    schedule: &[usize],
) -> Result<ResidualTable, DiagnosticsError> {
    validate_schedule(schedule)?;
    if probes.lambdas.iter().any(|l| l.im == 0.0) {
        return Err(LinalgError::NonRealRequired.into());
    }
    for probe in &probes.probes {
        if probe.vector.has_tail() {
            return Err(DiagnosticsError::ReferenceUnavailable(format!(
                "probe {} carries an infinite tail; resolvent references require finitely \
                 supported probes",
                probe.id
            )));
        }
    }
    let max_n = *schedule.last().unwrap();

    // Per-size implementation values, shared across probes and shifts.
    struct SizeSlice {
        n: usize,
        applied: Vec<Vec<Complex64>>, // indexed by (probe, lambda) flattened
    }
    let slices: Vec<SizeSlice> = schedule
        .par_iter()
        .map(|&n| -> Result<SizeSlice, DiagnosticsError> {
            let eig = eig_sym(&truncate(model, n))?;
            let mut applied = Vec::with_capacity(probes.probes.len() * probes.lambdas.len());
            for probe in &probes.probes {
                let rhs = complexify(&probe.vector.truncated(n));
                for &lambda in &probes.lambdas {
                    applied.push(resolvent_apply(&eig, lambda, &rhs)?);
                }
            }
            Ok(SizeSlice { n, applied })
        })
        .collect::<Result<_, _>>()?;

    // References per (probe, lambda), on a grid long enough to dominate every
    // comparison.
    enum Reference {
        Exact(Vec<Complex64>),
        Section { values: Vec<Complex64> },
    }
    let mut references = Vec::new();
    for probe in &probes.probes {
        let support = probe.vector.head_len();
        for &lambda in &probes.lambdas {
            let reference = match model {
                SpectralModel::Diagonal { rule, .. } => {
                    let len = max_n.max(support);
                    let values = (1..=len)
                        .map(|k| {
                            Complex64::new(probe.vector.component(k), 0.0)
                                / (lambda - rule.value(k))
                        })
                        .collect();
                    Reference::Exact(values)
                }
                SpectralModel::Jacobi {
                    diagonal,
                    offdiagonal,
                    ..
                } => {
                    let n_ref = (4 * max_n).max(4 * support).max(16);
                    let diag: Vec<f64> = (1..=n_ref).map(|k| diagonal.value(k)).collect();
                    let off: Vec<f64> = (1..n_ref).map(|k| offdiagonal.value(k)).collect();
                    let rhs = complexify(&probe.vector.truncated(n_ref));
                    let values = tridiagonal_resolvent_solve(&diag, &off, lambda, &rhs);
                    Reference::Section { values }
                }
            };
            references.push(reference);
        }
    }

    let mut groups = Vec::new();
    for (p_idx, probe) in probes.probes.iter().enumerate() {
        for (l_idx, &lambda) in probes.lambdas.iter().enumerate() {
            let flat = p_idx * probes.lambdas.len() + l_idx;
            let reference = &references[flat];
            let mut series = Vec::new();
            for slice in &slices {
                let implementation = &slice.applied[flat];
                let residual = match reference {
                    Reference::Exact(values) | Reference::Section { values } => {
                        let mut acc = 0.0;
                        for (k, r) in values.iter().enumerate() {
                            let lhs = implementation
                                .get(k)
                                .copied()
                                .unwrap_or(Complex64::new(0.0, 0.0));
                            acc += (lhs - r).norm_sqr();
                        }
                        acc.sqrt()
                    }
                };
                series.push((slice.n, residual));
            }
            if let Reference::Section { values } = reference {
                // Tail-mass admissibility: the reference section error must
                // sit well below the smallest residual it is asked to resolve.
                let quarter_start = values.len() - values.len() / 4;
                let tail_mass: f64 = values[quarter_start..]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let min_residual = series
                    .iter()
                    .map(|&(_, r)| r)
                    .fold(f64::INFINITY, f64::min);
                if tail_mass > 0.0 && 10.0 * tail_mass > min_residual {
                    return Err(DiagnosticsError::ReferenceUnavailable(format!(
                        "reference tail mass {tail_mass:.3e} for probe {} at shift \
                         {lambda} is not below a tenth of the smallest residual {min_residual:.3e}",
                        probe.id
                    )));
                }
            }
            groups.push((probe.id.clone(), Some(lambda), series));
        }
    }
    Ok(ResidualTable::from_groups(SuiteKind::Resolvent, groups))
}

/// Solves `(lambda I - T) w = rhs` for symmetric tridiagonal `T` by the
/// standard forward/backward sweep. The non-real shift keeps every pivot at
/// magnitude `>= |Im lambda|`, so no pivoting is needed.
fn tridiagonal_resolvent_solve(
    diag: &[f64],
    off: &[f64],
    lambda: Complex64,
    rhs: &[Complex64],
) -> Vec<Complex64> {
    let n = rhs.len();
    debug_assert!(lambda.im != 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut upper = vec![zero; n];
    let mut partial = vec![zero; n];
    let mut pivot = lambda - diag[0];
    if n > 1 {
        upper[0] = Complex64::new(-off[0], 0.0) / pivot;
    }
    partial[0] = rhs[0] / pivot;
    for i in 1..n {
        let sub = Complex64::new(-off[i - 1], 0.0);
        pivot = (lambda - diag[i]) - sub * upper[i - 1];
        if i + 1 < n {
            upper[i] = Complex64::new(-off[i], 0.0) / pivot;
        }
        partial[i] = (rhs[i] - sub * partial[i - 1]) / pivot;
    }
    let mut solution = vec![zero; n];
    solution[n - 1] = partial[n - 1];
    for i in (0..n - 1).rev() {
        solution[i] = partial[i] - upper[i] * solution[i + 1];
    }
    solution
}

/// Graph convergence through the explicit lift: residual
/// `||u_n - u|| + ||A_n u_n - A u||` per probe and size. Rows are omitted at
/// sizes too small to capture a probe.
pub fn check_graph_convergence(
    model: &SpectralModel,
    probes: &ProbeSet,
    schedule: &[usize],
) -> Result<ResidualTable, DiagnosticsError> {
    validate_schedule(schedule)?;
    for probe in &probes.probes {
        if probe.vector.has_tail() || !in_domain(model, &probe.vector)? {
            return Err(GalleryError::DomainViolation(format!(
                "graph probe {} must be finitely supported and in the operator domain",
                probe.id
            ))
            .into());
        }
    }
    let band = model.bandwidth();

    let per_size: Vec<Vec<(usize, usize, f64)>> = schedule
        .par_iter()
        .map(|&n| -> Result<Vec<(usize, usize, f64)>, DiagnosticsError> {
            let mut rows = Vec::new();
            let applicable: Vec<usize> = probes
                .probes
                .iter()
                .enumerate()
                .filter(|(_, p)| {
                    (p.vector.finite_support().unwrap_or(usize::MAX) + band).max(1) <= n
                })
                .map(|(i, _)| i)
                .collect();
            if applicable.is_empty() {
                return Ok(rows);
            }
            let eig = eig_sym(&truncate(model, n))?;
            for p_idx in applicable {
                let probe = &probes.probes[p_idx];
                let lifted = graph_lift_with_eig(model, &probe.vector, n, &eig)?;
                let residual = graph_residual(model, &probe.vector, &lifted, n)?;
                rows.push((p_idx, n, residual));
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;

    let mut groups: Vec<(String, Option<Complex64>, Vec<(usize, f64)>)> = probes
        .probes
        .iter()
        .map(|p| (p.id.clone(), None, Vec::new()))
        .collect();
    for rows in per_size {
        for (p_idx, n, residual) in rows {
            groups[p_idx].2.push((n, residual));
        }
    }
    Ok(ResidualTable::from_groups(SuiteKind::Graph, groups))
}

/// Convergence of the section kernel and range projections against the
/// analytically known kernel of a diagonal model. Every probe produces two
/// groups, `<id>/kernel` and `<id>/range`.
pub fn check_projection_convergence(
    model: &SpectralModel,
    probes: &ProbeSet,
    schedule: &[usize],
) -> Result<ResidualTable, DiagnosticsError> {
    validate_schedule(schedule)?;
    let rule = match model {
        SpectralModel::Diagonal { rule, .. } => rule,
        SpectralModel::Jacobi { .. } => {
            return Err(DiagnosticsError::UnsupportedModel(
                "projection check needs an analytically known kernel; \
                 Jacobi models do not provide one"
                    .into(),
            ))
        }
    };
    let tol = ToleranceContext::default();

    // Reference projections, built as coefficient vectors so power tails are
    // handled analytically.
    struct References {
        kernel: CoeffVector,
        range: CoeffVector,
    }
    let references: Vec<References> = probes
        .probes
        .iter()
        .map(|probe| -> Result<References, DiagnosticsError> {
            let x = &probe.vector;
            let head_len = match x.tail() {
                Some(_) => x.head_len().max(irregular_prefix_len(rule)),
                None => x.head_len(),
            };
            let mut kernel_head = Vec::with_capacity(head_len);
            let mut range_head = Vec::with_capacity(head_len);
            for k in 1..=head_len {
                if rule.value(k) == 0.0 {
                    kernel_head.push(x.component(k));
                    range_head.push(0.0);
                } else {
                    kernel_head.push(0.0);
                    range_head.push(x.component(k));
                }
            }
            let (kernel_tail, range_tail) = match x.tail() {
                None => (None, None),
                Some(t) => {
                    let (scale, _) = tail_power_of(rule);
                    if scale == 0.0 {
                        (Some(t), None)
                    } else {
                        (None, Some(t))
                    }
                }
            };
            let kernel = build_vector(kernel_head, kernel_tail)?;
            let range = build_vector(range_head, range_tail)?;
            Ok(References { kernel, range })
        })
        .collect::<Result<_, _>>()?;

    let per_size: Vec<Vec<(usize, f64, f64)>> = schedule
        .par_iter()
        .map(|&n| -> Result<Vec<(usize, f64, f64)>, DiagnosticsError> {
            let eig = eig_sym(&truncate(model, n))?;
            let range_matrix = crate::linalg::proj_range_from_eig(&eig, &tol)?;
            let mut rows = Vec::new();
            for (probe, reference) in probes.probes.iter().zip(references.iter()) {
                let truncated = probe.vector.truncated(n);
                let range_applied = range_matrix.matvec(&truncated);
                let kernel_applied: Vec<f64> = truncated
                    .iter()
                    .zip(range_applied.iter())
                    .map(|(x, r)| x - r)
                    .collect();
                let kernel_res =
                    CoeffVector::from_coeffs(kernel_applied)?.distance(&reference.kernel);
                let range_res =
                    CoeffVector::from_coeffs(range_applied)?.distance(&reference.range);
                rows.push((n, kernel_res, range_res));
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;

    let mut groups = Vec::new();
    for (p_idx, probe) in probes.probes.iter().enumerate() {
        let mut kernel_series = Vec::new();
        let mut range_series = Vec::new();
        for rows in &per_size {
            let (n, kernel_res, range_res) = rows[p_idx];
            kernel_series.push((n, kernel_res));
            range_series.push((n, range_res));
        }
        groups.push((format!("{}/kernel", probe.id), None, kernel_series));
        groups.push((format!("{}/range", probe.id), None, range_series));
    }
    Ok(ResidualTable::from_groups(SuiteKind::Projection, groups))
}

fn irregular_prefix_len(rule: &crate::gallery::EigenvalueRule) -> usize {
    use crate::gallery::EigenvalueRule::*;
    match rule {
        Linear | Harmonic => 0,
        KernelGap => 1,
        Custom { prefix, .. } => prefix.len(),
    }
}

fn tail_power_of(rule: &crate::gallery::EigenvalueRule) -> (f64, f64) {
    use crate::gallery::EigenvalueRule::*;
    match rule {
        Linear | KernelGap => (1.0, 1.0),
        Harmonic => (1.0, -1.0),
        Custom { tail, .. } => (*tail, 0.0),
    }
}

fn build_vector(head: Vec<f64>, tail: Option<PowerTail>) -> Result<CoeffVector, GalleryError> {
    match tail {
        Some(t) => CoeffVector::with_tail(head, t),
        None => CoeffVector::from_coeffs(head),
    }
}

/// Moving-target convergence: perturbs the section data by `(scale/n) e_1`
/// and measures `||A_n y_n - A y||`. Bounded models feed the raw truncated
/// data; unbounded models route the probe through the graph lift, since the
/// raw truncation need not approximate the image outside the domain of a
/// bounded operator.
pub fn check_moving_target(
    model: &SpectralModel,
    y: &CoeffVector,
    perturbation_scale: f64,
    schedule: &[usize],
) -> Result<ResidualTable, DiagnosticsError> {
    validate_schedule(schedule)?;
    if !(perturbation_scale >= 0.0) || !perturbation_scale.is_finite() {
        return Err(GalleryError::InvalidVector(
            "perturbation scale must be a finite non-negative value".into(),
        )
        .into());
    }
    if y.has_tail() || !in_domain(model, y)? {
        return Err(GalleryError::DomainViolation(
            "moving-target data must be finitely supported and in the operator domain".into(),
        )
        .into());
    }
    let exact_image = apply(model, y)?;
    let bounded = model.is_bounded();
    let support = y.finite_support().unwrap_or(0);
    let required = (support + model.bandwidth()).max(1);

    let series: Vec<Option<(usize, f64)>> = schedule
        .par_iter()
        .map(|&n| -> Result<Option<(usize, f64)>, DiagnosticsError> {
            let base = if bounded {
                y.truncated(n)
            } else {
                if n < required {
                    return Ok(None);
                }
                let eig = eig_sym(&truncate(model, n))?;
                graph_lift_with_eig(model, y, n, &eig)?.truncated(n)
            };
            let mut perturbed = base;
            perturbed[0] += perturbation_scale / n as f64;
            let section = truncate(model, n);
            let image = CoeffVector::from_coeffs(section.matvec(&perturbed))?;
            Ok(Some((n, image.distance(&exact_image))))
        })
        .collect::<Result<_, _>>()?;

    let series: Vec<(usize, f64)> = series.into_iter().flatten().collect();
    Ok(ResidualTable::from_groups(
        SuiteKind::MovingTarget,
        vec![("y".to_string(), None, series)],
    ))
}

/// Residuals of the Moore-Penrose structural identities for one symmetric
/// matrix, all in the Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpIdentityResiduals {
    /// `||A P A - A||`
    pub penrose_apa: f64,
    /// `||P A P - P||`
    pub penrose_pap: f64,
    /// `||(A P)^T - A P||`
    pub penrose_ap_symmetry: f64,
    /// `||(P A)^T - P A||`
    pub penrose_pa_symmetry: f64,
    /// `||A P - P_range||`
    pub range_left: f64,
    /// `||P A - P_range||`
    pub range_right: f64,
    /// `||P_kernel P||`
    pub kernel_annihilation: f64,
}

impl MpIdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.penrose_apa,
            self.penrose_pap,
            self.penrose_ap_symmetry,
            self.penrose_pa_symmetry,
            self.range_left,
            self.range_right,
            self.kernel_annihilation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("penrose-apa", self.penrose_apa),
            ("penrose-pap", self.penrose_pap),
            ("penrose-ap-symmetry", self.penrose_ap_symmetry),
            ("penrose-pa-symmetry", self.penrose_pa_symmetry),
            ("range-left", self.range_left),
            ("range-right", self.range_right),
            ("kernel-annihilation", self.kernel_annihilation),
        ]
    }
}

/// Checks the four Penrose conditions and the range/kernel identities for
/// one symmetric matrix under the given rank cut.
pub fn check_mp_identities(
    a: &SymMatrix,
    tol: &ToleranceContext,
) -> Result<MpIdentityResiduals, LinalgError> {
    let n = a.dim();
    let eig = eig_sym(a)?;
    let p = crate::linalg::pinv_from_eig(&eig, tol)?;
    let range = crate::linalg::proj_range_from_eig(&eig, tol)?;
    let kernel = crate::linalg::proj_kernel_from_eig(&eig, tol)?;

    let ap = mat_mul(n, a.entries(), p.matrix.entries());
    let pa = mat_mul(n, p.matrix.entries(), a.entries());
    let apa = mat_mul(n, &ap, a.entries());
    let pap = mat_mul(n, &pa, p.matrix.entries());

    let transpose = |m: &[f64]| -> Vec<f64> {
        let mut t = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                t[j * n + i] = m[i * n + j];
            }
        }
        t
    };

    Ok(MpIdentityResiduals {
        penrose_apa: frobenius_diff(n, &apa, a.entries()),
        penrose_pap: frobenius_diff(n, &pap, p.matrix.entries()),
        penrose_ap_symmetry: frobenius_diff(n, &transpose(&ap), &ap),
        penrose_pa_symmetry: frobenius_diff(n, &transpose(&pa), &pa),
        range_left: frobenius_diff(n, &ap, range.entries()),
        range_right: frobenius_diff(n, &pa, range.entries()),
        kernel_annihilation: frobenius(n, &mat_mul(n, kernel.entries(), p.matrix.entries())),
    })
}

/// Runs [`check_mp_identities`] over a schedule of section sizes and shapes
/// the result as a residual table (one group per identity).
pub fn check_mp_identities_over_schedule(
    model: &SpectralModel,
    schedule: &[usize],
    tol: &ToleranceContext,
) -> Result<ResidualTable, DiagnosticsError> {
    validate_schedule(schedule)?;
    let per_size: Vec<(usize, MpIdentityResiduals)> = schedule
        .par_iter()
        .map(|&n| -> Result<(usize, MpIdentityResiduals), DiagnosticsError> {
            let residuals = check_mp_identities(&truncate(model, n), tol)?;
            Ok((n, residuals))
        })
        .collect::<Result<_, _>>()?;

    let names = per_size
        .first()
        .map(|(_, r)| r.named().map(|(name, _)| name))
        .unwrap_or(["", "", "", "", "", "", ""]);
    let mut groups = Vec::new();
    for (idx, name) in names.iter().enumerate() {
        let series: Vec<(usize, f64)> = per_size
            .iter()
            .map(|(n, r)| (*n, r.named()[idx].1))
            .collect();
        groups.push((name.to_string(), None, series));
    }
    Ok(ResidualTable::from_groups(SuiteKind::MpIdentities, groups))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{CoeffRule, EigenvalueRule};

    fn linear() -> SpectralModel {
        SpectralModel::diagonal(EigenvalueRule::Linear)
    }

    fn kernel_gap() -> SpectralModel {
        SpectralModel::diagonal(EigenvalueRule::KernelGap)
    }

    fn constant_one() -> SpectralModel {
        SpectralModel::diagonal(EigenvalueRule::Custom {
            prefix: vec![],
            tail: 1.0,
        })
    }

    fn jacobi_free() -> SpectralModel {
        SpectralModel::jacobi(CoeffRule::Constant(0.0), CoeffRule::Constant(1.0))
    }

    fn schedule_to(max_exp: u32) -> Vec<usize> {
        (1..=max_exp).map(|i| 1usize << i).collect()
    }

    #[test]
    fn resolvent_residual_zero_on_captured_basis_probe() {
        let probes = ProbeSet::new(
            vec![Probe::new("e1", CoeffVector::basis(1))],
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let table = check_resolvent_consistency(&linear(), &probes, &schedule_to(5)).unwrap();
        for row in &table.rows {
            assert_eq!(row.residual, 0.0, "n={}", row.n);
        }
    }

    #[test]
    fn resolvent_residual_equals_exact_tail_sum() {
        // Probe u_k = k^-2 truncated at 64; the residual at size n is the
        // tail sum over n < k <= 64, computed here by direct real arithmetic.
        let coeffs: Vec<f64> = (1..=64).map(|k| (k as f64).powi(-2)).collect();
        let probes = ProbeSet::new(
            vec![Probe::new("decay", CoeffVector::from_coeffs(coeffs).unwrap())],
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let schedule = schedule_to(6);
        let table = check_resolvent_consistency(&linear(), &probes, &schedule).unwrap();
        for row in &table.rows {
            let mut expect_sq = 0.0;
            for k in (row.n + 1)..=64 {
                let kf = k as f64;
                expect_sq += kf.powi(-4) / (1.0 + kf * kf);
            }
            let expect = expect_sq.sqrt();
            assert!(
                (row.residual - expect).abs() <= 1e-12,
                "n={}: {} vs {}",
                row.n,
                row.residual,
                expect
            );
        }
        // Strictly decreasing over this schedule.
        for w in table.rows.windows(2) {
            assert!(w[1].residual < w[0].residual);
        }
        assert_eq!(table.summary.monotone_fraction, 1.0);
    }

    #[test]
    fn resolvent_zero_model_matches_scaled_identity() {
        let zero_model = SpectralModel::diagonal(EigenvalueRule::Custom {
            prefix: vec![],
            tail: 0.0,
        });
        let probes = ProbeSet::new(
            vec![Probe::new("x", CoeffVector::from_coeffs(vec![2.0, -1.0]).unwrap())],
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let table = check_resolvent_consistency(&zero_model, &probes, &[2, 4, 8]).unwrap();
        for row in &table.rows {
            assert!(row.residual <= 1e-15, "n={}", row.n);
        }
    }

    #[test]
    fn resolvent_jacobi_reference_converges() {
        let probes = ProbeSet::new(
            vec![Probe::new("e1", CoeffVector::basis(1))],
            vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0)],
        )
        .unwrap();
        let table = check_resolvent_consistency(&jacobi_free(), &probes, &schedule_to(7)).unwrap();
        assert!(table.summary.max_final_residual <= 1e-6);
        // Early residuals are genuinely nonzero for the banded model.
        assert!(table.rows.iter().any(|r| r.residual > 1e-8));
    }

    #[test]
    fn resolvent_rejects_real_shift() {
        let probes = ProbeSet {
            probes: vec![Probe::new("e1", CoeffVector::basis(1))],
            lambdas: vec![Complex64::new(1.0, 0.0)],
        };
        assert!(matches!(
            check_resolvent_consistency(&linear(), &probes, &[2, 4]),
            Err(DiagnosticsError::Linalg(LinalgError::NonRealRequired))
        ));
    }

    #[test]
    fn graph_residuals_zero_for_diagonal_models() {
        let probes = ProbeSet::new(
            vec![
                Probe::new("e1", CoeffVector::basis(1)),
                Probe::new("e3", CoeffVector::basis(3)),
            ],
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let table = check_graph_convergence(&linear(), &probes, &schedule_to(5)).unwrap();
        for row in &table.rows {
            assert_eq!(row.residual, 0.0, "probe {} n={}", row.probe_id, row.n);
            assert!(row.n >= 3 || row.probe_id == "e1");
        }
        assert_eq!(table.summary.monotone_fraction, 1.0);
    }

    #[test]
    fn graph_residuals_small_for_jacobi() {
        let probes = ProbeSet::new(
            vec![Probe::new("e2", CoeffVector::basis(2))],
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let table = check_graph_convergence(&jacobi_free(), &probes, &schedule_to(8)).unwrap();
        // Rows start once the section captures the banded image.
        assert_eq!(table.rows.first().unwrap().n, 4);
        assert!(table.summary.max_final_residual <= 1e-6);
    }

    #[test]
    fn projection_check_kernel_gap_is_exact() {
        let probes = ProbeSet::new(
            vec![
                Probe::new("x", CoeffVector::from_coeffs(vec![7.0, 2.0, 5.0]).unwrap()),
                Probe::new("e1", CoeffVector::basis(1)),
            ],
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let table = check_projection_convergence(&kernel_gap(), &probes, &[4, 8, 16]).unwrap();
        for row in &table.rows {
            assert!(
                row.residual <= 1e-12,
                "{} n={}: {}",
                row.probe_id,
                row.n,
                row.residual
            );
        }
    }

    #[test]
    fn projection_check_rejects_jacobi() {
        let probes = ProbeSet::default_probes();
        assert!(matches!(
            check_projection_convergence(&jacobi_free(), &probes, &[2, 4]),
            Err(DiagnosticsError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn moving_target_bounded_model_exact_decay() {
        let y = CoeffVector::basis(1);
        let table = check_moving_target(&constant_one(), &y, 1.0, &schedule_to(6)).unwrap();
        for row in &table.rows {
            assert!(
                (row.residual - 1.0 / row.n as f64).abs() <= 1e-14,
                "n={}: {}",
                row.n,
                row.residual
            );
        }
    }

    #[test]
    fn moving_target_zero_scale_vanishes_past_support() {
        let y = CoeffVector::basis(1);
        let table = check_moving_target(&jacobi_free(), &y, 0.0, &schedule_to(5)).unwrap();
        for row in &table.rows {
            assert!(row.residual <= 1e-14, "n={}", row.n);
        }
    }

    #[test]
    fn moving_target_jacobi_residual_is_one_over_n() {
        let y = CoeffVector::basis(2);
        let table = check_moving_target(&jacobi_free(), &y, 1.0, &schedule_to(6)).unwrap();
        for row in &table.rows {
            if row.n >= 3 {
                assert!(
                    (row.residual - 1.0 / row.n as f64).abs() <= 1e-14,
                    "n={}: {}",
                    row.n,
                    row.residual
                );
            }
        }
    }

    #[test]
    fn moving_target_scales_linearly() {
        let y = CoeffVector::basis(1);
        let ones = check_moving_target(&linear(), &y, 1.0, &schedule_to(5)).unwrap();
        let twos = check_moving_target(&linear(), &y, 2.0, &schedule_to(5)).unwrap();
        for (a, b) in ones.rows.iter().zip(twos.rows.iter()) {
            assert!(
                (b.residual - 2.0 * a.residual).abs() <= 1e-12 * b.residual.max(1e-300),
                "n={}",
                a.n
            );
        }
    }

    #[test]
    fn mp_identities_trivial_cases() {
        let tol = ToleranceContext::default();
        let a = SymMatrix::from_diagonal(&[2.0, 0.0]);
        let r = check_mp_identities(&a, &tol).unwrap();
        assert_eq!(r.max(), 0.0);

        let id = SymMatrix::identity(3);
        let r = check_mp_identities(&id, &tol).unwrap();
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn mp_identities_random_symmetric() {
        let n = 20;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (((i * 37 + j * 101 + 7) % 29) as f64 / 29.0) - 0.5;
            }
        }
        let a = SymMatrix::new(n, entries).unwrap();
        let r = check_mp_identities(&a, &ToleranceContext::default()).unwrap();
        assert!(r.max() <= 1e-9 * n as f64, "max residual {}", r.max());
    }
}
