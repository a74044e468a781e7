//! Model operators on the sequence space and their finite sections.
//!
//! A [`SpectralModel`] is an exact, rule-based description of a self-adjoint
//! operator in the canonical basis: either diagonal (given by an eigenvalue
//! rule) or Jacobi (symmetric tridiagonal, given by coefficient rules). The
//! size-`n` section is the leading `n x n` block, and the diagonal models
//! also carry componentwise oracles for the pseudoinverse action, domain
//! membership, and section spectra.

use crate::linalg::SymMatrix;
use crate::series::tail_power_sum;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GalleryError {
    #[error("invalid coefficient vector: {0}")]
    InvalidVector(String),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("truncation size must be at least 1")]
    InvalidTruncation,
}

/// Hand-assigned stability label used by the classifier tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Stable,
    Unstable,
    StableWithKernel,
    Unknown,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Stable => "Stable",
            Classification::Unstable => "Unstable",
            Classification::StableWithKernel => "StableWithKernel",
            Classification::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Eigenvalue rule of a diagonal model; `value(k)` is exact for every `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenvalueRule {
    /// `lambda_k = k`
    Linear,
    /// `lambda_k = 1/k`
    Harmonic,
    /// `lambda_1 = 0`, `lambda_k = k` for `k >= 2`
    KernelGap,
    /// Finite prefix followed by a constant tail.
    Custom { prefix: Vec<f64>, tail: f64 },
}

impl EigenvalueRule {
    pub fn value(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        match self {
            EigenvalueRule::Linear => k as f64,
            EigenvalueRule::Harmonic => 1.0 / k as f64,
            EigenvalueRule::KernelGap => {
                if k == 1 {
                    0.0
                } else {
                    k as f64
                }
            }
            EigenvalueRule::Custom { prefix, tail } => {
                prefix.get(k - 1).copied().unwrap_or(*tail)
            }
        }
    }

    /// Index past which `value(k)` follows the pure power law returned by
    /// [`Self::tail_power`].
    fn irregular_prefix_len(&self) -> usize {
        match self {
            EigenvalueRule::Linear | EigenvalueRule::Harmonic => 0,
            EigenvalueRule::KernelGap => 1,
            EigenvalueRule::Custom { prefix, .. } => prefix.len(),
        }
    }

    /// `(scale, exponent)` with `value(k) = scale * k^exponent` exactly for
    /// `k > irregular_prefix_len()`.
    fn tail_power(&self) -> (f64, f64) {
        match self {
            EigenvalueRule::Linear | EigenvalueRule::KernelGap => (1.0, 1.0),
            EigenvalueRule::Harmonic => (1.0, -1.0),
            EigenvalueRule::Custom { tail, .. } => (*tail, 0.0),
        }
    }

    fn is_bounded(&self) -> bool {
        match self {
            EigenvalueRule::Linear | EigenvalueRule::KernelGap => false,
            EigenvalueRule::Harmonic | EigenvalueRule::Custom { .. } => true,
        }
    }
}

/// Coefficient rule for a Jacobi model: a constant, or a listed prefix with a
/// constant continuation.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffRule {
    Constant(f64),
    Listed { prefix: Vec<f64>, tail: f64 },
}

impl CoeffRule {
    pub fn value(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        match self {
            CoeffRule::Constant(c) => *c,
            CoeffRule::Listed { prefix, tail } => prefix.get(k - 1).copied().unwrap_or(*tail),
        }
    }

    fn as_constant(&self) -> Option<f64> {
        match self {
            CoeffRule::Constant(c) => Some(*c),
            CoeffRule::Listed { .. } => None,
        }
    }
}

/// Exact description of a self-adjoint model operator.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralModel {
    Diagonal {
        rule: EigenvalueRule,
        classification: Classification,
    },
    Jacobi {
        diagonal: CoeffRule,
        offdiagonal: CoeffRule,
        classification: Classification,
    },
}

impl SpectralModel {
    pub fn diagonal(rule: EigenvalueRule) -> Self {
        SpectralModel::Diagonal {
            rule,
            classification: Classification::Unknown,
        }
    }

    pub fn jacobi(diagonal: CoeffRule, offdiagonal: CoeffRule) -> Self {
        SpectralModel::Jacobi {
            diagonal,
            offdiagonal,
            classification: Classification::Unknown,
        }
    }

    pub fn with_classification(mut self, c: Classification) -> Self {
        match &mut self {
            SpectralModel::Diagonal { classification, .. } => *classification = c,
            SpectralModel::Jacobi { classification, .. } => *classification = c,
        }
        self
    }

    pub fn classification(&self) -> Classification {
        match self {
            SpectralModel::Diagonal { classification, .. } => *classification,
            SpectralModel::Jacobi { classification, .. } => *classification,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, SpectralModel::Diagonal { .. })
    }

    /// Bandwidth of the matrix representation: 0 for diagonal, 1 for Jacobi.
    pub fn bandwidth(&self) -> usize {
        match self {
            SpectralModel::Diagonal { .. } => 0,
            SpectralModel::Jacobi { .. } => 1,
        }
    }

    /// Whether the operator is bounded on the whole space.
    pub fn is_bounded(&self) -> bool {
        match self {
            SpectralModel::Diagonal { rule, .. } => rule.is_bounded(),
            SpectralModel::Jacobi { .. } => true,
        }
    }

    /// Eigenvalue `lambda_k` for diagonal models.
    pub fn eigenvalue(&self, k: usize) -> Option<f64> {
        match self {
            SpectralModel::Diagonal { rule, .. } => Some(rule.value(k)),
            SpectralModel::Jacobi { .. } => None,
        }
    }

    /// Exact kernel dimension of the size-`n` section, when analytically
    /// known. Constant Jacobi rules use the closed-form section spectrum
    /// `a + 2b cos(k pi / (n+1))`.
    pub fn truncation_kernel_dim(&self, n: usize) -> Option<usize> {
        match self {
            SpectralModel::Diagonal { rule, .. } => {
                Some((1..=n).filter(|&k| rule.value(k) == 0.0).count())
            }
            SpectralModel::Jacobi {
                diagonal,
                offdiagonal,
                ..
            } => {
                let a = diagonal.as_constant()?;
                let b = offdiagonal.as_constant()?;
                if b == 0.0 {
                    return Some(if a == 0.0 { n } else { 0 });
                }
                if a == 0.0 {
                    // cos(k pi/(n+1)) = 0 exactly iff n is odd (k = (n+1)/2).
                    Some(if n % 2 == 1 { 1 } else { 0 })
                } else if a.abs() > 2.0 * b.abs() {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }

    /// Ascending eigenvalues of the size-`n` section, when a closed form
    /// exists (any diagonal rule; constant Jacobi rules).
    pub fn oracle_truncation_eigenvalues(&self, n: usize) -> Option<Vec<f64>> {
        let mut values = match self {
            SpectralModel::Diagonal { rule, .. } => (1..=n).map(|k| rule.value(k)).collect::<Vec<_>>(),
            SpectralModel::Jacobi {
                diagonal,
                offdiagonal,
                ..
            } => {
                let a = diagonal.as_constant()?;
                let b = offdiagonal.as_constant()?;
                (1..=n)
                    .map(|k| a + 2.0 * b * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
                    .collect()
            }
        };
        values.sort_by(f64::total_cmp);
        Some(values)
    }

    /// Closed-form operator norm of the section pseudoinverse, when available.
    pub fn oracle_pinv_norm(&self, n: usize) -> Option<OracleAnswer> {
        let values = self.oracle_truncation_eigenvalues(n)?;
        let min_nonzero = values
            .iter()
            .map(|v| v.abs())
            .filter(|&v| v != 0.0)
            .fold(f64::INFINITY, f64::min);
        let norm = if min_nonzero.is_finite() {
            1.0 / min_nonzero
        } else {
            0.0
        };
        Some(OracleAnswer {
            value: OracleValue::Scalar(norm),
            exact: true,
            description: "reciprocal of smallest nonzero section eigenvalue magnitude".into(),
        })
    }
}

/// Size of a requested section; at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationRequest {
    n: usize,
}

impl TruncationRequest {
    pub fn new(n: usize) -> Result<Self, GalleryError> {
        if n == 0 {
            return Err(GalleryError::InvalidTruncation);
        }
        Ok(TruncationRequest { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

/// Size-`n` section of the model: `diag(lambda_1..lambda_n)` for diagonal
/// models, the leading symmetric tridiagonal block for Jacobi models.
pub fn truncate(model: &SpectralModel, n: usize) -> SymMatrix {
    assert!(n >= 1, "truncation size must be at least 1");
    match model {
        SpectralModel::Diagonal { rule, .. } => {
            let diag: Vec<f64> = (1..=n).map(|k| rule.value(k)).collect();
            SymMatrix::from_diagonal(&diag)
        }
        SpectralModel::Jacobi {
            diagonal,
            offdiagonal,
            ..
        } => {
            let diag: Vec<f64> = (1..=n).map(|k| diagonal.value(k)).collect();
            let off: Vec<f64> = (1..n).map(|k| offdiagonal.value(k)).collect();
            SymMatrix::tridiagonal(&diag, &off)
        }
    }
}

/// Power-law continuation of a coefficient vector: `x_k = scale * k^-exponent`
/// for every index past the explicit head.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTail {
    pub scale: f64,
    pub exponent: f64,
}

/// Element of the sequence space: explicit leading coefficients plus an
/// optional exact power-law tail. A tail exponent above 1/2 keeps the vector
/// square-summable.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    coeffs: Vec<f64>,
    tail: Option<PowerTail>,
}

impl CoeffVector {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self, GalleryError> {
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(GalleryError::InvalidVector(
                "coefficients must be finite".into(),
            ));
        }
        Ok(CoeffVector { coeffs, tail: None })
    }

    pub fn with_tail(coeffs: Vec<f64>, tail: PowerTail) -> Result<Self, GalleryError> {
        let mut v = Self::from_coeffs(coeffs)?;
        if !tail.scale.is_finite() || !tail.exponent.is_finite() {
            return Err(GalleryError::InvalidVector(
                "tail parameters must be finite".into(),
            ));
        }
        if tail.scale != 0.0 {
            if tail.exponent <= 0.5 {
                return Err(GalleryError::InvalidVector(format!(
                    "tail exponent must exceed 1/2 for square-summability, got {}",
                    tail.exponent
                )));
            }
            v.tail = Some(tail);
        }
        Ok(v)
    }

    /// Standard basis vector `e_k` (1-based).
    pub fn basis(k: usize) -> Self {
        assert!(k >= 1);
        let mut coeffs = vec![0.0; k];
        coeffs[k - 1] = 1.0;
        CoeffVector { coeffs, tail: None }
    }

    pub fn zero() -> Self {
        CoeffVector {
            coeffs: Vec::new(),
            tail: None,
        }
    }

    /// Component `x_k`, 1-based.
    pub fn component(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        if k <= self.coeffs.len() {
            self.coeffs[k - 1]
        } else if let Some(t) = self.tail {
            t.scale * (k as f64).powf(-t.exponent)
        } else {
            0.0
        }
    }

    pub fn head(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn head_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn tail(&self) -> Option<PowerTail> {
        self.tail
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    /// Index of the last nonzero explicit coefficient, or `None` when the
    /// vector carries an infinite tail.
    pub fn finite_support(&self) -> Option<usize> {
        if self.tail.is_some() {
            return None;
        }
        Some(
            self.coeffs
                .iter()
                .rposition(|&v| v != 0.0)
                .map_or(0, |i| i + 1),
        )
    }

    /// First `n` components (the image under the projection onto the leading
    /// coordinate subspace).
    pub fn truncated(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|k| self.component(k)).collect()
    }

    pub fn norm_sq(&self) -> f64 {
        let head: f64 = self.coeffs.iter().map(|v| v * v).sum();
        let tail = match self.tail {
            Some(t) => t.scale * t.scale * tail_power_sum(self.coeffs.len(), 2.0 * t.exponent),
            None => 0.0,
        };
        head + tail
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Distance in the sequence-space norm, with analytic handling of the
    /// power tails past the common explicit head.
    pub fn distance(&self, other: &CoeffVector) -> f64 {
        let head_len = self.coeffs.len().max(other.coeffs.len());
        let mut acc = 0.0;
        for k in 1..=head_len {
            let d = self.component(k) - other.component(k);
            acc += d * d;
        }
        match (self.tail, other.tail) {
            (None, None) => {}
            (Some(t), None) | (None, Some(t)) => {
                acc += t.scale * t.scale * tail_power_sum(head_len, 2.0 * t.exponent);
            }
            (Some(s), Some(t)) => {
                acc += s.scale * s.scale * tail_power_sum(head_len, 2.0 * s.exponent);
                acc += t.scale * t.scale * tail_power_sum(head_len, 2.0 * t.exponent);
                acc -= 2.0
                    * s.scale
                    * t.scale
                    * tail_power_sum(head_len, s.exponent + t.exponent);
            }
        }
        acc.max(0.0).sqrt()
    }
}

/// Ground-truth value produced by an analytic oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAnswer {
    pub value: OracleValue,
    pub exact: bool,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleValue {
    Vector(CoeffVector),
    Scalar(f64),
}

impl OracleValue {
    pub fn as_vector(&self) -> Option<&CoeffVector> {
        match self {
            OracleValue::Vector(v) => Some(v),
            OracleValue::Scalar(_) => None,
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            OracleValue::Scalar(s) => Some(*s),
            OracleValue::Vector(_) => None,
        }
    }
}

/// Exact action of the model operator on a vector.
///
/// Jacobi models require finitely supported input; diagonal models accept a
/// power tail as long as the image stays square-summable.
pub fn apply(model: &SpectralModel, x: &CoeffVector) -> Result<CoeffVector, GalleryError> {
    match model {
        SpectralModel::Diagonal { rule, .. } => {
            let head_len = match x.tail {
                Some(_) => x.head_len().max(rule.irregular_prefix_len()),
                None => x.head_len(),
            };
            let coeffs: Vec<f64> = (1..=head_len).map(|k| rule.value(k) * x.component(k)).collect();
            match x.tail {
                None => CoeffVector::from_coeffs(coeffs),
                Some(t) => {
                    let (scale, growth) = rule.tail_power();
                    let exponent = t.exponent - growth;
                    let tail_scale = scale * t.scale;
                    if tail_scale != 0.0 && exponent <= 0.5 {
                        return Err(GalleryError::DomainViolation(format!(
                            "image tail exponent {exponent} is not square-summable; \
                             input lies outside the operator domain"
                        )));
                    }
                    CoeffVector::with_tail(
                        coeffs,
                        PowerTail {
                            scale: tail_scale,
                            exponent,
                        },
                    )
                }
            }
        }
        SpectralModel::Jacobi {
            diagonal,
            offdiagonal,
            ..
        } => {
            if x.has_tail() {
                return Err(GalleryError::UnsupportedModel(
                    "banded application requires finitely supported input".into(),
                ));
            }
            let m = x.head_len();
            if m == 0 {
                return Ok(CoeffVector::zero());
            }
            let mut coeffs = vec![0.0; m + 1];
            for (k, c) in coeffs.iter_mut().enumerate().map(|(i, c)| (i + 1, c)) {
                let mut acc = diagonal.value(k) * x.component(k);
                if k >= 2 {
                    acc += offdiagonal.value(k - 1) * x.component(k - 1);
                }
                if k <= m {
                    acc += offdiagonal.value(k) * x.component(k + 1);
                }
                *c = acc;
            }
            CoeffVector::from_coeffs(coeffs)
        }
    }
}

/// Componentwise pseudoinverse action for diagonal models:
/// `x_k = y_k / lambda_k` on nonzero eigenvalues, zero on the kernel.
///
/// When the squared quotients fail to be summable the data lies outside the
/// pseudoinverse domain; the answer then carries `exact = false`, a domain
/// violation note, and the explicit head only.
pub fn oracle_pinv_apply(
    model: &SpectralModel,
    y: &CoeffVector,
) -> Result<OracleAnswer, GalleryError> {
    let rule = match model {
        SpectralModel::Diagonal { rule, .. } => rule,
        SpectralModel::Jacobi { .. } => {
            return Err(GalleryError::UnsupportedModel(
                "componentwise pseudoinverse oracle exists only for diagonal models".into(),
            ))
        }
    };
    let head_len = match y.tail {
        Some(_) => y.head_len().max(rule.irregular_prefix_len()),
        None => y.head_len(),
    };
    let head: Vec<f64> = (1..=head_len)
        .map(|k| {
            let lambda = rule.value(k);
            if lambda == 0.0 {
                0.0
            } else {
                y.component(k) / lambda
            }
        })
        .collect();
    match y.tail {
        None => Ok(OracleAnswer {
            value: OracleValue::Vector(CoeffVector::from_coeffs(head)?),
            exact: true,
            description: "componentwise inversion on nonzero eigenvalues".into(),
        }),
        Some(t) => {
            let (scale, growth) = rule.tail_power();
            if scale == 0.0 {
                // Constant-zero eigenvalue tail: the kernel swallows it.
                return Ok(OracleAnswer {
                    value: OracleValue::Vector(CoeffVector::from_coeffs(head)?),
                    exact: true,
                    description: "componentwise inversion; tail lies in the kernel".into(),
                });
            }
            let exponent = t.exponent + growth;
            let tail_scale = t.scale / scale;
            if tail_scale != 0.0 && exponent <= 0.5 {
                return Ok(OracleAnswer {
                    value: OracleValue::Vector(CoeffVector::from_coeffs(head)?),
                    exact: false,
                    description: format!(
                        "domain violation: squared quotients decay like k^{} and their sum \
                         diverges; data lies outside the pseudoinverse domain",
                        -2.0 * exponent
                    ),
                });
            }
            Ok(OracleAnswer {
                value: OracleValue::Vector(CoeffVector::with_tail(
                    head,
                    PowerTail {
                        scale: tail_scale,
                        exponent,
                    },
                )?),
                exact: true,
                description: "componentwise inversion on nonzero eigenvalues".into(),
            })
        }
    }
}

/// Analytic domain membership test: the image `A x` must stay
/// square-summable.
pub fn in_domain(model: &SpectralModel, x: &CoeffVector) -> Result<bool, GalleryError> {
    match model {
        SpectralModel::Diagonal { rule, .. } => match x.tail {
            None => Ok(true),
            Some(t) => {
                let (scale, growth) = rule.tail_power();
                Ok(scale == 0.0 || t.exponent - growth > 0.5)
            }
        },
        SpectralModel::Jacobi { .. } => {
            if x.has_tail() {
                Err(GalleryError::UnsupportedModel(
                    "domain test for banded models requires finitely supported input".into(),
                ))
            } else {
                Ok(true)
            }
        }
    }
}

/// Built-in model with a stable name for configs and listings.
#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub model: SpectralModel,
}

/// The labeled model gallery: classifications are assigned from the analytic
/// spectra of the sections.
pub fn builtin_gallery() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            name: "linear",
            model: SpectralModel::diagonal(EigenvalueRule::Linear)
                .with_classification(Classification::Stable),
        },
        GalleryEntry {
            name: "harmonic",
            model: SpectralModel::diagonal(EigenvalueRule::Harmonic)
                .with_classification(Classification::Unstable),
        },
        GalleryEntry {
            name: "kernel-gap",
            model: SpectralModel::diagonal(EigenvalueRule::KernelGap)
                .with_classification(Classification::StableWithKernel),
        },
        GalleryEntry {
            name: "jacobi-free",
            model: SpectralModel::jacobi(CoeffRule::Constant(0.0), CoeffRule::Constant(1.0))
                .with_classification(Classification::Unstable),
        },
        GalleryEntry {
            name: "jacobi-shifted3",
            model: SpectralModel::jacobi(CoeffRule::Constant(3.0), CoeffRule::Constant(1.0))
                .with_classification(Classification::Stable),
        },
    ]
}

pub fn find_builtin(name: &str) -> Option<GalleryEntry> {
    builtin_gallery().into_iter().find(|e| e.name == name)
}
