//! Scheme-level invariants across the labeled model gallery: the
//! stability/convergence dichotomy, graph-lift convergence with an
//! independent dense complex-solve oracle, Cauchy behavior of convergent
//! runs, moving-target routing, and the structural identities on every
//! gallery section.

use finsec_core::{
    builtin_gallery, check_graph_convergence, check_mp_identities, check_moving_target,
    check_resolvent_consistency, default_schedule, eig_sym, graph_lift, run_best_approx, truncate,
    Classification, CoeffVector, Complex64, PowerTail, Probe, ProbeSet, RunConfig, SpectralModel,
    SymMatrix, ToleranceContext, Verdict,
};

fn canonical_data(name: &str) -> CoeffVector {
    match name {
        "kernel-gap" => CoeffVector::from_coeffs(vec![7.0, 2.0]).unwrap(),
        "jacobi-free" => CoeffVector::basis(2),
        _ => CoeffVector::basis(1),
    }
}

fn schedule_to(max_exp: u32) -> Vec<usize> {
    (1..=max_exp).map(|i| 1usize << i).collect()
}

#[test]
fn labeled_gallery_dichotomy() {
    // Stable and StableWithKernel labels must classify Convergent, Unstable
    // labels Divergent, under the default configuration.
    for entry in builtin_gallery() {
        let config = RunConfig::default();
        let run = run_best_approx(&entry.model, &canonical_data(entry.name), &config).unwrap();
        let expected = match entry.model.classification() {
            Classification::Stable | Classification::StableWithKernel => Verdict::Convergent,
            Classification::Unstable => Verdict::Divergent,
            Classification::Unknown => continue,
        };
        assert_eq!(
            run.verdict, expected,
            "{}: {}",
            entry.name, run.verdict_reason
        );
        assert!(run.failures.is_empty(), "{}: {:?}", entry.name, run.failures);
    }
}

#[test]
fn pinv_norms_match_closed_forms_along_default_schedule() {
    for entry in builtin_gallery() {
        let run = run_best_approx(
            &entry.model,
            &canonical_data(entry.name),
            &RunConfig::default(),
        )
        .unwrap();
        for record in &run.trace.records {
            let oracle = entry
                .model
                .oracle_pinv_norm(record.n)
                .unwrap()
                .value
                .as_scalar()
                .unwrap();
            assert!(
                (record.pinv_norm - oracle).abs() <= 1e-9 * oracle.max(1.0),
                "{} n={}: {} vs oracle {}",
                entry.name,
                record.n,
                record.pinv_norm,
                oracle
            );
        }
    }
}

#[test]
fn graph_lift_gallery_invariant() {
    // Basis-vector probes: the lift residual must be at most 1e-6 by the end
    // of the default schedule, exactly zero for diagonal models once the
    // section covers the probe, and non-increasing (within 1e-12) throughout.
    let probes = ProbeSet::new(
        (1..=3)
            .map(|k| Probe::new(format!("e{k}"), CoeffVector::basis(k)))
            .collect(),
        vec![Complex64::new(0.0, 1.0)],
    )
    .unwrap();
    for entry in builtin_gallery() {
        let table = check_graph_convergence(&entry.model, &probes, &default_schedule()).unwrap();
        assert!(
            table.summary.max_final_residual <= 1e-6,
            "{}: final residual {}",
            entry.name,
            table.summary.max_final_residual
        );
        if entry.model.is_diagonal() {
            for row in &table.rows {
                assert_eq!(row.residual, 0.0, "{} {} n={}", entry.name, row.probe_id, row.n);
            }
        }
        assert_eq!(
            table.summary.monotone_fraction, 1.0,
            "{}: residuals not monotone within slack",
            entry.name
        );
    }
}

/// Dense complex Gaussian elimination with partial pivoting; the independent
/// oracle for the graph lift.
fn solve_dense_complex(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))
            .unwrap();
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        let d = a[col * n + col];
        for row in (col + 1)..n {
            let f = a[row * n + col] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[row * n + j] -= f * v;
            }
            let bv = b[col];
            b[row] -= f * bv;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for j in (row + 1)..n {
            acc -= a[row * n + j] * x[j];
        }
        x[row] = acc / a[row * n + row];
    }
    x
}

fn oracle_graph_residual(model: &SpectralModel, u: &CoeffVector, n: usize) -> f64 {
    let section = truncate(model, n);
    let image = finsec_core::apply(model, u).unwrap();
    let mut dense = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            dense[i * n + j] = Complex64::new(-section.get(i, j), if i == j { 1.0 } else { 0.0 });
        }
    }
    let rhs: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::new(-image.component(k), u.component(k)))
        .collect();
    let lifted = solve_dense_complex(dense, rhs);

    let mut first_sq = 0.0;
    for (k, z) in lifted.iter().enumerate() {
        first_sq += (z - u.component(k + 1)).norm_sqr();
    }
    let section_image: Vec<Complex64> = (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += section.get(i, j) * lifted[j];
            }
            acc
        })
        .collect();
    let len = n.max(image.head_len());
    let mut second_sq = 0.0;
    for k in 1..=len {
        let lhs = section_image
            .get(k - 1)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0));
        second_sq += (lhs - image.component(k)).norm_sqr();
    }
    first_sq.sqrt() + second_sq.sqrt()
}

#[test]
fn graph_lift_matches_dense_solve_oracle_on_jacobi_models() {
    for entry in builtin_gallery() {
        if entry.model.is_diagonal() {
            continue;
        }
        for probe_index in [1usize, 2] {
            let u = CoeffVector::basis(probe_index);
            for n in [8usize, 32, 128] {
                let lifted = graph_lift(&entry.model, &u, n).unwrap();
                let implementation =
                    finsec_core::graph_residual(&entry.model, &u, &lifted, n).unwrap();
                let oracle = oracle_graph_residual(&entry.model, &u, n);
                assert!(
                    (implementation - oracle).abs() <= 1e-10,
                    "{} e{probe_index} n={n}: {implementation} vs oracle {oracle}",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn convergent_runs_have_strictly_decreasing_cauchy_gaps() {
    // Linear model with power-law data: gaps are exact tail slices.
    let y = CoeffVector::with_tail(
        vec![],
        PowerTail {
            scale: 1.0,
            exponent: 2.0,
        },
    )
    .unwrap();
    let config = RunConfig {
        residual_tol: 1e-6,
        ..RunConfig::default()
    };
    let linear = builtin_gallery().remove(0).model;
    let run = run_best_approx(&linear, &y, &config).unwrap();
    assert_eq!(run.verdict, Verdict::Convergent, "{}", run.verdict_reason);
    let gaps: Vec<f64> = run.iterates.iter().map(|it| it.cauchy_gap).collect();
    for w in gaps[gaps.len() / 2..].windows(2) {
        assert!(w[1] < w[0], "gaps not strictly decreasing: {w:?}");
    }

    // Shifted Jacobi model with basis data on a schedule short enough that
    // the gaps stay above the round-off floor.
    let shifted = builtin_gallery().remove(4).model;
    let config = RunConfig {
        schedule: schedule_to(7),
        ..RunConfig::default()
    };
    let run = run_best_approx(&shifted, &CoeffVector::basis(1), &config).unwrap();
    assert_eq!(run.verdict, Verdict::Convergent, "{}", run.verdict_reason);
    let gaps: Vec<f64> = run.iterates.iter().map(|it| it.cauchy_gap).collect();
    for w in gaps[gaps.len() / 2..].windows(2) {
        assert!(w[1] < w[0], "gaps not strictly decreasing: {gaps:?}");
    }
}

#[test]
fn moving_target_routing_matches_analytic_envelope() {
    let schedule = schedule_to(8);
    // Unbounded diagonal model: the probe goes through the graph lift, and
    // the first-column perturbation contributes exactly scale/n here.
    let linear = SpectralModel::diagonal(finsec_core::EigenvalueRule::Linear);
    let table = check_moving_target(&linear, &CoeffVector::basis(1), 1.0, &schedule).unwrap();
    for row in &table.rows {
        assert!(
            (row.residual - 1.0 / row.n as f64).abs() <= 1e-14,
            "n={}: {}",
            row.n,
            row.residual
        );
    }
    // Kernel-gap model: the perturbation direction lies in the section
    // kernel, so the residual vanishes identically.
    let kernel_gap = SpectralModel::diagonal(finsec_core::EigenvalueRule::KernelGap);
    let table =
        check_moving_target(&kernel_gap, &CoeffVector::basis(2), 1.0, &schedule).unwrap();
    for row in &table.rows {
        assert!(row.residual <= 1e-14, "n={}: {}", row.n, row.residual);
    }
}

#[test]
fn resolvent_consistency_final_residuals_on_default_probes() {
    for entry in builtin_gallery() {
        let probes = ProbeSet::default_probes();
        let table =
            check_resolvent_consistency(&entry.model, &probes, &default_schedule()).unwrap();
        assert!(
            table.summary.max_final_residual <= 1e-6,
            "{}: {}",
            entry.name,
            table.summary.max_final_residual
        );
        if entry.model.is_diagonal() {
            assert_eq!(
                table.summary.monotone_fraction, 1.0,
                "{}: diagonal residuals must be non-increasing",
                entry.name
            );
        }
    }
}

#[test]
fn mp_identity_residuals_on_gallery_sections() {
    for entry in builtin_gallery() {
        let schedule: Vec<usize> = if entry.model.is_diagonal() {
            default_schedule()
        } else {
            schedule_to(8)
        };
        for n in schedule {
            let tol = match entry.model.truncation_kernel_dim(n) {
                Some(k) if k > 0 => ToleranceContext::with_exact_rank(n - k),
                _ => ToleranceContext::default(),
            };
            let residuals = check_mp_identities(&truncate(&entry.model, n), &tol).unwrap();
            assert!(
                residuals.max() <= 1e-9 * n as f64,
                "{} n={n}: {}",
                entry.name,
                residuals.max()
            );
        }
    }
}

#[test]
fn kernel_gap_sections_have_exact_kernel() {
    let kernel_gap = builtin_gallery().remove(2).model;
    for n in [2usize, 5, 32] {
        let section = truncate(&kernel_gap, n);
        let eig = eig_sym(&section).unwrap();
        assert_eq!(eig.values()[0], 0.0);
        let kernel =
            finsec_core::proj_kernel(&section, &ToleranceContext::default()).unwrap();
        // proj_kernel x = x_1 e_1 for every x.
        let x: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
        let projected = kernel.matvec(&x);
        assert!((projected[0] - 1.0).abs() <= 1e-12);
        for v in &projected[1..] {
            assert!(v.abs() <= 1e-12);
        }
    }
    let _ = SymMatrix::zeros(1); // keep the import exercised for small dims
}

#[test]
fn jacobi_free_eigenvalues_match_closed_form() {
    let free = builtin_gallery().remove(3).model;
    for n in [5usize, 50, 200] {
        let eig = eig_sym(&truncate(&free, n)).unwrap();
        let oracle = free.oracle_truncation_eigenvalues(n).unwrap();
        for (got, expect) in eig.values().iter().zip(oracle.iter()) {
            assert!(
                (got - expect).abs() <= 1e-10,
                "n={n}: {got} vs {expect}"
            );
        }
    }
}
