//! Symmetric eigendecomposition via Householder reduction and the implicit
//! QL algorithm (the classic EISPACK tred2/tql2 pair).
//!
//! Exactly tridiagonal input (which includes every diagonal matrix) skips the
//! Householder stage, so diagonal matrices come back with bit-exact
//! eigenvalues and an identity eigenvector matrix.

use super::{EigenDecomposition, LinalgError, SymMatrix};

/// QL iteration budget per eigenvalue. The classic recommendation is 30;
/// a little headroom costs nothing.
const MAX_QL_ITERATIONS: usize = 50;

/// Spectral factorization `A = V diag(values) V^T` of a real symmetric matrix.
///
/// Eigenvalues come back sorted ascending. Each eigenvector is normalized so
/// that its first component of non-negligible magnitude is positive, which
/// makes repeated factorizations reproducible.
pub fn eig_sym(a: &SymMatrix) -> Result<EigenDecomposition, LinalgError> {
    let n = a.dim();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut z;
    if is_tridiagonal(a) {
        z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
            d[i] = a.get(i, i);
            if i > 0 {
                e[i] = a.get(i, i - 1);
            }
        }
    } else {
        z = a.entries().to_vec();
        householder_tridiagonalize(&mut z, n, &mut d, &mut e);
    }
    tridiagonal_ql(&mut d, &mut e, &mut z, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        values.push(d[src]);
        for row in 0..n {
            vectors[row * n + col] = z[row * n + src];
        }
    }
    for col in 0..n {
        normalize_sign(&mut vectors, n, col);
    }
    Ok(EigenDecomposition {
        dim: n,
        values,
        vectors,
    })
}

fn is_tridiagonal(a: &SymMatrix) -> bool {
    let n = a.dim();
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            if a.get(i, j) != 0.0 {
                return false;
            }
        }
    }
    true
}

/// Flip the column so its first component with magnitude above
/// `1e-12 * max|component|` is positive.
fn normalize_sign(vectors: &mut [f64], n: usize, col: usize) {
    let mut max_abs = 0.0f64;
    for row in 0..n {
        max_abs = max_abs.max(vectors[row * n + col].abs());
    }
    let threshold = 1e-12 * max_abs;
    for row in 0..n {
        let v = vectors[row * n + col];
        if v.abs() > threshold {
            if v < 0.0 {
                for r in 0..n {
                    vectors[r * n + col] = -vectors[r * n + col];
                }
            }
            return;
        }
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
///
/// `a` holds the matrix row-major on entry and the accumulated orthogonal
/// transform on exit, so that `Q^T A Q = tridiag(d, e)` with the subdiagonal
/// stored in `e[1..]`.
fn householder_tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, with the
/// rotations accumulated into `z`.
///
/// On entry `d` holds the diagonal and `e[1..]` the subdiagonal; on success
/// `d` holds the (unsorted) eigenvalues and the columns of `z` the matching
/// eigenvectors.
fn tridiagonal_ql(
    d: &mut [f64],
    e: &mut [f64],
    z: &mut [f64],
    n: usize,
) -> Result<(), LinalgError> {
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(LinalgError::IterationFailure {
                    index: l,
                    budget: MAX_QL_ITERATIONS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate without finishing the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
