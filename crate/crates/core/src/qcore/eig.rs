//! Eigen-decomposition of small dense complex matrices.
//!
//! Non-Hermitian eigenproblems (the reduced coherence generators are complex
//! symmetric, not Hermitian) are solved by Givens reduction to Hessenberg
//! form followed by Wilkinson-shifted QR iterations to a complex Schur form
//! `a = Z T Z^H`. Eigenvectors come from back-substitution on `T`.

use std::cmp::Ordering;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Largest dimension accepted by [`eig_small`].
pub const EIG_MAX_DIM: usize = 8;
/// Default eigenpair residual bound, relative to the Frobenius norm of `a`.
pub const EIG_RESIDUAL_TOL: f64 = 1e-10;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues and unit-norm right eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// Largest ||a v_i - lambda_i v_i|| over the eigenpairs.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|k| {
                let v = self.vectors.column(k);
                let av = a.mul_vec(&v).expect("square");
                av.iter()
                    .zip(&v)
                    .map(|(x, y)| (x - self.values[k] * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Eigen-decomposition with the default residual tolerance.
pub fn eig_small(a: &ComplexMatrix) -> Result<Eigen> {
    eig_small_with(a, EIG_RESIDUAL_TOL)
}

/// Eigen-decomposition of a square matrix of dimension at most
/// [`EIG_MAX_DIM`]. Eigenvalues are ordered by descending imaginary part,
/// then ascending real part; eigenvectors have unit norm with their
/// largest-modulus component real and positive.
pub fn eig_small_with(a: &ComplexMatrix, residual_tol: f64) -> Result<Eigen> {
    if !a.is_square() {
        return Err(Error::arg("eigen-decomposition requires a square matrix"));
    }
    let n = a.rows();
    if n == 0 || n > EIG_MAX_DIM {
        return Err(Error::arg(format!("eig_small supports dimensions 1..={EIG_MAX_DIM}, got {n}")));
    }
    if !a.is_finite() {
        return Err(Error::arg("matrix has non-finite entries"));
    }
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(Eigen {
            values: vec![C64::new(0.0, 0.0); n],
            vectors: ComplexMatrix::identity(n),
        });
    }

    let (t, z) = schur(a)?;
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let tri_vecs = triangular_eigenvectors(&t);
    let mut vectors = z.dot(&tri_vecs);
    for k in 0..n {
        normalize_column(&mut vectors, k);
    }

    let order = eigen_order(&values, scale);
    let values: Vec<C64> = order.iter().map(|&k| values[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    let eig = Eigen { values, vectors };

    let residual = eig.residual(a);
    if !(residual <= residual_tol * scale) {
        return Err(Error::NoConvergence { residual });
    }
    Ok(eig)
}

/// Real eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let (t, _) = schur(h)?;
    let mut ev: Vec<f64> = (0..h.rows()).map(|i| t[(i, i)].re).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Singular values (descending) by one-sided Jacobi rotations. Small
/// singular values are resolved to absolute accuracy near
/// `eps * ||a||`, unlike the square roots of eigenvalues of `a^H a`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Rotate a_q's phase so the inner product is real, then apply
                // the real Jacobi rotation.
                let w = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let ap = cols[p][i];
                    let aq = cols[q][i] * w.conj();
                    cols[p][i] = ap * c - aq * s;
                    cols[q][i] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Complex Schur decomposition a = Z T Z^H with T upper triangular.
fn schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.rows();
    let mut h = a.clone();
    let mut z = ComplexMatrix::identity(n);

    // Hessenberg reduction by Givens rotations.
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let (c, s) = givens(h[(i - 1, j)], h[(i, j)]);
            rotate_rows(&mut h, i - 1, c, s, 0);
            rotate_cols(&mut h, i - 1, c, s, n);
            rotate_cols(&mut z, i - 1, c, s, n);
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }

    let norm = a.frobenius_norm();
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut l = hi;
        while l > 0 {
            let off = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == 0.0 {
                diag = norm;
            }
            if off <= eps * diag {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            let residual = (l + 1..=hi).map(|k| h[(k, k - 1)].norm()).fold(0.0, f64::max);
            return Err(Error::NoConvergence { residual });
        }

        let mu = if iter % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rotate_rows(&mut h, k, c, s, k);
            h[(k + 1, k)] = C64::new(0.0, 0.0);
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            rotate_cols(&mut h, k, c, s, (k + 2).min(hi) + 1);
            rotate_cols(&mut z, k, c, s, n);
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok((h, z))
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// Unitary [[c, s], [-conj(s), c]] (c real) mapping (x, y) to (r, 0).
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let nrm = (ax * ax + y.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let alpha = x / ax;
    (ax / nrm, alpha * y.conj() / nrm)
}

/// Left-multiplies rows (k, k+1) by the Givens matrix, columns `from..`.
fn rotate_rows(m: &mut ComplexMatrix, k: usize, c: f64, s: C64, from: usize) {
    for j in from..m.cols() {
        let h1 = m[(k, j)];
        let h2 = m[(k + 1, j)];
        m[(k, j)] = h1 * c + s * h2;
        m[(k + 1, j)] = -s.conj() * h1 + h2 * c;
    }
}

/// Right-multiplies columns (k, k+1) by the adjoint Givens matrix, rows `..to`.
fn rotate_cols(m: &mut ComplexMatrix, k: usize, c: f64, s: C64, to: usize) {
    for i in 0..to {
        let a = m[(i, k)];
        let b = m[(i, k + 1)];
        m[(i, k)] = a * c + b * s.conj();
        m[(i, k + 1)] = -a * s + b * c;
    }
}

/// Right eigenvectors of an upper-triangular matrix, as columns.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let small = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut x = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for m in j + 1..=k {
                acc += t[(j, m)] * x[(m, k)];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < small {
                denom = C64::new(small, 0.0);
            }
            x[(j, k)] = -acc / denom;
        }
    }
    x
}

fn normalize_column(m: &mut ComplexMatrix, k: usize) {
    let n = m.rows();
    let nrm = (0..n).map(|i| m[(i, k)].norm_sqr()).sum::<f64>().sqrt();
    let pivot = (0..n)
        .max_by(|&a, &b| m[(a, k)].norm().total_cmp(&m[(b, k)].norm()))
        .unwrap_or(0);
    let phase = m[(pivot, k)] / m[(pivot, k)].norm();
    let f = phase.conj() / nrm;
    for i in 0..n {
        m[(i, k)] *= f;
    }
}

/// Deterministic ordering: descending imaginary part, then ascending real
/// part. Imaginary parts are compared on a grid of `1e-12 * scale` so that
/// round-off in nominally real spectra does not reorder them.
fn eigen_order(values: &[C64], scale: f64) -> Vec<usize> {
    let quantum = 1e-12 * scale;
    let key = |z: C64| (z.im / quantum).round();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let (za, zb) = (values[a], values[b]);
        match key(zb).total_cmp(&key(za)) {
            Ordering::Equal => za.re.total_cmp(&zb.re),
            o => o,
        }
    });
    order
}
