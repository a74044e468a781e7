//! Dense real-symmetric and complex linear algebra kernels: spectral
//! factorization, tolerance-based pseudoinversion, resolvents at non-real
//! shifts, and orthogonal projections onto range and kernel.
//!
//! Everything here is a pure function over immutable values; all types are
//! plain data and safe to share across threads.

use num_complex::Complex64;
use thiserror::Error;

mod eig;

pub use eig::eig_sym;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    ShapeMismatch {
        dim: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("rank tolerance must be positive and finite, got {got}")]
    InvalidTolerance { got: f64 },
    #[error("requested rank {requested} exceeds dimension {dim}")]
    RankOutOfRange { requested: usize, dim: usize },
    #[error("eigenvalue iteration for index {index} exceeded the budget of {budget} sweeps")]
    IterationFailure { index: usize, budget: usize },
    #[error(
        "ambiguous rank cut at rank {rank}: kept |eigenvalue| {kept:e} is within 1e-14 \
         (relative) of dropped {dropped:e}"
    )]
    RankAmbiguity { rank: usize, kept: f64, dropped: f64 },
    #[error("resolvent shift must have a nonzero imaginary part")]
    NonRealRequired,
}

/// Dense real symmetric matrix, row-major storage.
///
/// Symmetry is enforced at construction, so `get(i, j) == get(j, i)` holds
/// exactly for every instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from row-major entries, averaging mismatched
    /// off-diagonal pairs so the result is exactly symmetric.
    pub fn new(dim: usize, mut entries: Vec<f64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(LinalgError::ShapeMismatch {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFiniteEntry);
        }
        for i in 0..dim {
            for j in 0..i {
                let m = 0.5 * (entries[i * dim + j] + entries[j * dim + i]);
                entries[i * dim + j] = m;
                entries[j * dim + i] = m;
            }
        }
        Ok(SymMatrix { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        SymMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = v;
        }
        m
    }

    /// Symmetric tridiagonal matrix from its diagonal and subdiagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let n = diag.len();
        assert!(off.len() + 1 == n, "subdiagonal must have length dim - 1");
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = diag[i];
            if i + 1 < n {
                m.entries[i * n + i + 1] = off[i];
                m.entries[(i + 1) * n + i] = off[i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }
}

/// Spectral factorization of a [`SymMatrix`]: ascending eigenvalues and an
/// orthonormal eigenvector matrix stored row-major with eigenvectors as
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub(crate) dim: usize,
    pub(crate) values: Vec<f64>,
    pub(crate) vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row-major matrix whose column `k` is the eigenvector for `values()[k]`.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Rank-cut policy for pseudoinverses and projections.
///
/// With `rank_rel_tol = r` (default `1e-12 * dim`), eigenvalues with
/// `|mu| <= r * max(1, max|mu|)` are treated as zero. Setting `exact_rank`
/// overrides the tolerance and keeps exactly that many largest-magnitude
/// eigenvalues.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ToleranceContext {
    pub rank_rel_tol: Option<f64>,
    pub exact_rank: Option<usize>,
}

impl ToleranceContext {
    pub fn with_rel_tol(rank_rel_tol: f64) -> Self {
        ToleranceContext {
            rank_rel_tol: Some(rank_rel_tol),
            exact_rank: None,
        }
    }

    pub fn with_exact_rank(rank: usize) -> Self {
        ToleranceContext {
            rank_rel_tol: None,
            exact_rank: Some(rank),
        }
    }

    pub fn effective_rel_tol(&self, dim: usize) -> f64 {
        self.rank_rel_tol.unwrap_or(1e-12 * dim as f64)
    }

    fn validate(&self, dim: usize) -> Result<(), LinalgError> {
        if let Some(tol) = self.rank_rel_tol {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(LinalgError::InvalidTolerance { got: tol });
            }
        }
        if let Some(rank) = self.exact_rank {
            if rank > dim {
                return Err(LinalgError::RankOutOfRange {
                    requested: rank,
                    dim,
                });
            }
        }
        Ok(())
    }
}

/// Moore-Penrose inverse of a symmetric matrix together with the quantities
/// the stability monitor needs: retained rank, the smallest retained
/// eigenvalue magnitude, and the operator norm `1 / sigma_min_pos`.
#[derive(Debug, Clone)]
pub struct PinvResult {
    pub matrix: SymMatrix,
    pub rank: usize,
    pub sigma_min_pos: f64,
    pub norm: f64,
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.entries[i * n + j] * x[j];
            }
            out[i] = acc;
        }
        out
    }
}

/// Indices of eigenvalues retained by the rank cut, ascending.
fn retained_indices(
    eig: &EigenDecomposition,
    tol: &ToleranceContext,
) -> Result<Vec<usize>, LinalgError> {
    let dim = eig.dim;
    tol.validate(dim)?;
    if let Some(rank) = tol.exact_rank {
        let mut by_magnitude: Vec<usize> = (0..dim).collect();
        by_magnitude.sort_by(|&i, &j| {
            eig.values[j]
                .abs()
                .total_cmp(&eig.values[i].abs())
                .then(i.cmp(&j))
        });
        if rank > 0 {
            let kept = eig.values[by_magnitude[rank - 1]].abs();
            let dropped = if rank < dim {
                eig.values[by_magnitude[rank]].abs()
            } else {
                0.0
            };
            if kept - dropped <= 1e-14 * kept {
                return Err(LinalgError::RankAmbiguity {
                    rank,
                    kept,
                    dropped,
                });
            }
        }
        let mut kept: Vec<usize> = by_magnitude[..rank].to_vec();
        kept.sort_unstable();
        Ok(kept)
    } else {
        let threshold = tol.effective_rel_tol(dim) * eig.max_abs_value().max(1.0);
        Ok((0..dim)
            .filter(|&k| eig.values[k].abs() > threshold)
            .collect())
    }
}

/// `sum_k w_k v_k v_k^T` over the given (index, weight) pairs, assembled as
/// an exactly symmetric matrix.
fn spectral_symmetric(eig: &EigenDecomposition, weights: &[(usize, f64)]) -> SymMatrix {
    let n = eig.dim;
    let mut entries = vec![0.0; n * n];
    for &(k, w) in weights {
        for i in 0..n {
            let vi = w * eig.vectors[i * n + k];
            if vi == 0.0 {
                continue;
            }
            for j in i..n {
                entries[i * n + j] += vi * eig.vectors[j * n + k];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            entries[i * n + j] = entries[j * n + i];
        }
    }
    SymMatrix { dim: n, entries }
}

/// Moore-Penrose inverse by spectral inversion on retained eigenvalues.
pub fn pinv(a: &SymMatrix, tol: &ToleranceContext) -> Result<PinvResult, LinalgError> {
    let eig = eig_sym(a)?;
    pinv_from_eig(&eig, tol)
}

/// Same as [`pinv`] but reuses an existing factorization.
pub fn pinv_from_eig(
    eig: &EigenDecomposition,
    tol: &ToleranceContext,
) -> Result<PinvResult, LinalgError> {
    let kept = retained_indices(eig, tol)?;
    let weights: Vec<(usize, f64)> = kept.iter().map(|&k| (k, 1.0 / eig.values[k])).collect();
    let matrix = spectral_symmetric(eig, &weights);
    let sigma_min_pos = kept
        .iter()
        .map(|&k| eig.values[k].abs())
        .fold(f64::INFINITY, f64::min);
    let (sigma_min_pos, norm) = if kept.is_empty() {
        (0.0, 0.0)
    } else {
        (sigma_min_pos, 1.0 / sigma_min_pos)
    };
    Ok(PinvResult {
        matrix,
        rank: kept.len(),
        sigma_min_pos,
        norm,
    })
}

/// Orthogonal projection onto the (numerical) range of `a`.
pub fn proj_range(a: &SymMatrix, tol: &ToleranceContext) -> Result<SymMatrix, LinalgError> {
    let eig = eig_sym(a)?;
    proj_range_from_eig(&eig, tol)
}

pub fn proj_range_from_eig(
    eig: &EigenDecomposition,
    tol: &ToleranceContext,
) -> Result<SymMatrix, LinalgError> {
    let kept = retained_indices(eig, tol)?;
    let weights: Vec<(usize, f64)> = kept.iter().map(|&k| (k, 1.0)).collect();
    Ok(spectral_symmetric(eig, &weights))
}

/// Orthogonal projection onto the kernel, the complement `I - P_range` in the
/// self-adjoint case.
pub fn proj_kernel(a: &SymMatrix, tol: &ToleranceContext) -> Result<SymMatrix, LinalgError> {
    let eig = eig_sym(a)?;
    proj_kernel_from_eig(&eig, tol)
}

pub fn proj_kernel_from_eig(
    eig: &EigenDecomposition,
    tol: &ToleranceContext,
) -> Result<SymMatrix, LinalgError> {
    let range = proj_range_from_eig(eig, tol)?;
    let n = range.dim;
    let mut entries = range.entries;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            entries[i * n + j] = target - entries[i * n + j];
        }
    }
    Ok(SymMatrix { dim: n, entries })
}

/// Resolvent `(lambda I - A)^{-1}` at a non-real shift, via the spectral
/// factorization. The result is complex symmetric and its operator norm is
/// bounded by `1 / |Im lambda|`.
pub fn resolvent(a: &SymMatrix, lambda: Complex64) -> Result<ComplexMatrix, LinalgError> {
    let eig = eig_sym(a)?;
    resolvent_from_eig(&eig, lambda)
}

pub fn resolvent_from_eig(
    eig: &EigenDecomposition,
    lambda: Complex64,
) -> Result<ComplexMatrix, LinalgError> {
    if lambda.im == 0.0 {
        return Err(LinalgError::NonRealRequired);
    }
    let n = eig.dim;
    let weights: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&mu| Complex64::new(1.0, 0.0) / (lambda - mu))
        .collect();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let w = weights[k];
        for i in 0..n {
            let vi = w * eig.vectors[i * n + k];
            for j in i..n {
                entries[i * n + j] += vi * eig.vectors[j * n + k];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            entries[i * n + j] = entries[j * n + i];
        }
    }
    Ok(ComplexMatrix { dim: n, entries })
}

/// Applies the resolvent to a vector in `O(dim^2)` without materializing the
/// matrix: `V diag(1/(lambda - mu_k)) V^T rhs`.
pub fn resolvent_apply(
    eig: &EigenDecomposition,
    lambda: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>, LinalgError> {
    if lambda.im == 0.0 {
        return Err(LinalgError::NonRealRequired);
    }
    let n = eig.dim;
    assert_eq!(rhs.len(), n);
    let mut coords = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += eig.vectors[i * n + k] * rhs[i];
        }
        coords[k] = acc / (lambda - eig.values[k]);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += eig.vectors[i * n + k] * coords[k];
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Operator norm of a symmetric matrix, i.e. its spectral radius.
pub fn op_norm(a: &SymMatrix) -> Result<f64, LinalgError> {
    Ok(eig_sym(a)?.max_abs_value())
}

// Dense helpers shared by the diagnostics module and by tests inside this
// crate.

pub(crate) fn mat_mul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

pub(crate) fn frobenius_diff(n: usize, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n * n {
        let d = a[i] - b[i];
        acc += d * d;
    }
    acc.sqrt()
}

pub(crate) fn frobenius(n: usize, a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n * n {
        acc += a[i] * a[i];
    }
    acc.sqrt()
}

pub(crate) fn vec_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_shape() {
        assert_eq!(SymMatrix::new(0, vec![]), Err(LinalgError::EmptyMatrix));
        assert!(matches!(
            SymMatrix::new(2, vec![1.0, 2.0]),
            Err(LinalgError::ShapeMismatch { .. })
        ));
        assert_eq!(
            SymMatrix::new(1, vec![f64::NAN]),
            Err(LinalgError::NonFiniteEntry)
        );
    }

    #[test]
    fn construction_symmetrizes() {
        let a = SymMatrix::new(2, vec![1.0, 3.0, 1.0, 2.0]).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 0));
        assert_eq!(a.get(0, 1), 2.0);
    }

    #[test]
    fn pinv_diagonal_with_zero() {
        let a = SymMatrix::from_diagonal(&[2.0, 0.0, -3.0]);
        let p = pinv(&a, &ToleranceContext::default()).unwrap();
        assert_eq!(p.rank, 2);
        assert_eq!(p.norm, 0.5);
        assert_eq!(p.sigma_min_pos, 2.0);
        assert_eq!(p.matrix.get(0, 0), 0.5);
        assert_eq!(p.matrix.get(1, 1), 0.0);
        assert!((p.matrix.get(2, 2) - (-1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn pinv_zero_matrix() {
        let a = SymMatrix::zeros(3);
        let p = pinv(&a, &ToleranceContext::default()).unwrap();
        assert_eq!(p.rank, 0);
        assert_eq!(p.norm, 0.0);
        assert_eq!(p.sigma_min_pos, 0.0);
        assert!(p.matrix.entries().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pinv_harmonic_diagonal_norm_is_n() {
        // Componentwise inversion oracle: pinv(diag(1, 1/2, ..., 1/n)) has
        // diagonal (1, 2, ..., n) and operator norm n.
        let n = 25;
        let diag: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
        let a = SymMatrix::from_diagonal(&diag);
        let p = pinv(&a, &ToleranceContext::default()).unwrap();
        assert_eq!(p.rank, n);
        assert!((p.norm - n as f64).abs() <= 1e-12 * n as f64);
        for k in 0..n {
            let expect = 1.0 / diag[k];
            assert!((p.matrix.get(k, k) - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn pinv_exact_rank_override() {
        let a = SymMatrix::from_diagonal(&[5.0, 1e-13, 0.0]);
        // Tolerance cut would keep only the 5; exact rank keeps two.
        let p = pinv(&a, &ToleranceContext::with_exact_rank(2)).unwrap();
        assert_eq!(p.rank, 2);
        assert_eq!(p.sigma_min_pos, 1e-13);
    }

    #[test]
    fn pinv_exact_rank_ambiguity_detected() {
        let a = SymMatrix::from_diagonal(&[1.0, 1.0, 0.5]);
        let err = pinv(&a, &ToleranceContext::with_exact_rank(1)).unwrap_err();
        assert!(matches!(err, LinalgError::RankAmbiguity { rank: 1, .. }));
        // Cutting between 1.0 and 0.5 is fine.
        assert!(pinv(&a, &ToleranceContext::with_exact_rank(2)).is_ok());
        // Keeping an exact zero is ill-posed.
        let b = SymMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            pinv(&b, &ToleranceContext::with_exact_rank(2)),
            Err(LinalgError::RankAmbiguity { .. })
        ));
    }

    #[test]
    fn pinv_rejects_bad_tolerances() {
        let a = SymMatrix::identity(2);
        assert!(matches!(
            pinv(&a, &ToleranceContext::with_rel_tol(0.0)),
            Err(LinalgError::InvalidTolerance { .. })
        ));
        assert!(matches!(
            pinv(&a, &ToleranceContext::with_exact_rank(3)),
            Err(LinalgError::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn resolvent_of_zero_matrix() {
        let a = SymMatrix::zeros(2);
        let r = resolvent(&a, Complex64::new(0.0, 1.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j {
                    Complex64::new(0.0, -1.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((r.get(i, j) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn resolvent_single_entry() {
        let a = SymMatrix::from_diagonal(&[1.0]);
        let r = resolvent(&a, Complex64::new(0.0, 1.0)).unwrap();
        let expect = Complex64::new(-0.5, -0.5);
        assert!((r.get(0, 0) - expect).norm() < 1e-15);
        assert!((r.get(0, 0).norm() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn resolvent_norm_matches_nearest_eigenvalue() {
        let a = SymMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let lambda = Complex64::new(0.0, 2.0);
        let r = resolvent(&a, lambda).unwrap();
        // Normal matrix: operator norm is max_k 1/|lambda - mu_k| = 1/sqrt(5).
        let expect = 1.0 / 5.0f64.sqrt();
        let got = (0..3).map(|i| r.get(i, i).norm()).fold(0.0f64, f64::max);
        assert!((got - expect).abs() < 1e-15);
    }

    #[test]
    fn resolvent_requires_non_real_shift() {
        let a = SymMatrix::identity(2);
        assert_eq!(
            resolvent(&a, Complex64::new(2.0, 0.0)).unwrap_err(),
            LinalgError::NonRealRequired
        );
        assert!(matches!(
            resolvent_apply(
                &eig_sym(&a).unwrap(),
                Complex64::new(2.0, 0.0),
                &[Complex64::new(1.0, 0.0); 2]
            ),
            Err(LinalgError::NonRealRequired)
        ));
    }

    #[test]
    fn resolvent_apply_matches_matrix() {
        let a = SymMatrix::new(3, vec![1.0, 0.5, 0.0, 0.5, -1.0, 0.25, 0.0, 0.25, 2.0]).unwrap();
        let lambda = Complex64::new(1.0, 1.0);
        let eig = eig_sym(&a).unwrap();
        let rhs: Vec<Complex64> = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(0.0, 3.0),
        ];
        let via_apply = resolvent_apply(&eig, lambda, &rhs).unwrap();
        let via_matrix = resolvent_from_eig(&eig, lambda).unwrap().matvec(&rhs);
        for (x, y) in via_apply.iter().zip(via_matrix.iter()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn projections_split_identity() {
        let a = SymMatrix::from_diagonal(&[0.0, 5.0]);
        let tol = ToleranceContext::default();
        let k = proj_kernel(&a, &tol).unwrap();
        let r = proj_range(&a, &tol).unwrap();
        assert_eq!(k.entries(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.entries(), &[0.0, 0.0, 0.0, 1.0]);

        let id = SymMatrix::identity(3);
        let r = proj_range(&id, &tol).unwrap();
        let k = proj_kernel(&id, &tol).unwrap();
        assert_eq!(r.entries(), SymMatrix::identity(3).entries());
        assert!(k.entries().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pinv_times_matrix_is_range_projection() {
        let a = SymMatrix::new(
            4,
            vec![
                1.0, 2.0, 0.0, 1.0, 2.0, 4.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 1.5,
            ],
        )
        .unwrap();
        let tol = ToleranceContext::default();
        let p = pinv(&a, &tol).unwrap();
        let pr = proj_range(&a, &tol).unwrap();
        let product = mat_mul(4, p.matrix.entries(), a.entries());
        assert!(frobenius_diff(4, &product, pr.entries()) < 1e-10);
    }

    #[test]
    fn op_norm_examples() {
        assert_eq!(op_norm(&SymMatrix::from_diagonal(&[-4.0, 3.0])).unwrap(), 4.0);
        assert_eq!(op_norm(&SymMatrix::zeros(2)).unwrap(), 0.0);
        let swap = SymMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((op_norm(&swap).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn norm_times_sigma_is_one() {
        let a = SymMatrix::from_diagonal(&[0.3, -7.0, 0.0]);
        let p = pinv(&a, &ToleranceContext::default()).unwrap();
        assert!((p.norm * p.sigma_min_pos - 1.0).abs() < 1e-14);
    }
}
