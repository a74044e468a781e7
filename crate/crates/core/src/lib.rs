//! Finite-section approximation of Moore-Penrose inverses of self-adjoint
//! operators on the canonical sequence space.
//!
//! The library is organized around a small pipeline:
//!
//! - [`linalg`]: dense symmetric eigendecomposition, tolerance-based
//!   pseudoinverses, resolvents at non-real shifts, and range/kernel
//!   projections.
//! - [`gallery`]: exact rule-based model operators (diagonal and Jacobi),
//!   their leading sections, and componentwise analytic oracles.
//! - [`engine`]: runs a schedule of section sizes for `A x = y`, tracks the
//!   running supremum of the section pseudoinverse norms, and classifies the
//!   run as Convergent, Divergent, or Inconclusive. Uniform boundedness of
//!   those norms is exactly the property that separates the convergent runs
//!   from the divergent ones.
//! - [`diagnostics`]: schedule-driven residual checks for resolvent
//!   consistency, graph convergence, projection convergence, moving-target
//!   convergence, and the Moore-Penrose identities.
//!
//! All types are immutable values and every operation is a pure function, so
//! everything here can be driven concurrently without coordination.

pub mod diagnostics;
pub mod engine;
pub mod gallery;
pub mod linalg;
mod series;

pub use num_complex::Complex64;

pub use diagnostics::{
    check_graph_convergence, check_moving_target, check_mp_identities,
    check_mp_identities_over_schedule, check_projection_convergence,
    check_resolvent_consistency, DiagnosticsError, MpIdentityResiduals, Probe, ProbeSet,
    ResidualRow, ResidualSummary, ResidualTable, SuiteKind,
};
pub use engine::{
    default_schedule, graph_lift, graph_residual, run_best_approx, stability_classify,
    BestApproxRun, EngineError, IterateRecord, RunConfig, StabilityRecord, StabilityTrace,
    Verdict,
};
pub use gallery::{
    apply, builtin_gallery, find_builtin, in_domain, oracle_pinv_apply, truncate, Classification,
    CoeffRule, CoeffVector, EigenvalueRule, GalleryEntry, GalleryError, OracleAnswer, OracleValue,
    PowerTail, SpectralModel, TruncationRequest,
};
pub use linalg::{
    eig_sym, op_norm, pinv, proj_kernel, proj_range, resolvent, resolvent_apply, ComplexMatrix,
    EigenDecomposition, LinalgError, PinvResult, SymMatrix, ToleranceContext,
};
