use std::ops::Index;

use super::eig::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Tolerance on the norm of vectors labelled normalized.
pub const NORM_TOL: f64 = 1e-12;
/// Elementwise Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest admissible eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Pure state amplitudes in one of the fixed level bases.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(Vec<C64>);

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        Self(amplitudes)
    }

    /// Normalizes the amplitudes; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::arg("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self(amplitudes.into_iter().map(|z| z / n).collect()))
    }

    /// Computational basis vector |k> in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &StateVector) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &StateVector) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Copies the amplitudes into a larger space at the given level indices.
    pub fn embed(&self, dim: usize, levels: &[usize]) -> Self {
        debug_assert_eq!(levels.len(), self.dim());
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for (&lvl, &a) in levels.iter().zip(&self.0) {
            v[lvl] = a;
        }
        Self(v)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.0, &self.0)
    }
}

impl Index<usize> for StateVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Deviation of a density matrix from the physical set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physicality {
    pub trace_drift: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn within(&self, trace_tol: f64, herm_tol: f64, pos_tol: f64) -> bool {
        self.trace_drift <= trace_tol && self.hermiticity <= herm_tol && self.min_eigenvalue >= -pos_tol
    }

    /// Worst-case combination of two reports.
    pub fn worst(self, other: Physicality) -> Physicality {
        Physicality {
            trace_drift: self.trace_drift.max(other.trace_drift),
            hermiticity: self.hermiticity.max(other.hermiticity),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
        }
    }

    pub fn ideal() -> Physicality {
        Physicality {
            trace_drift: 0.0,
            hermiticity: 0.0,
            min_eigenvalue: f64::INFINITY,
        }
    }
}

/// A density matrix. Construction through [`DensityMatrix::new`] enforces
/// Hermiticity, unit trace and positivity at the module tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::arg("density matrix must be square"));
        }
        if !m.is_finite() {
            return Err(Error::arg("density matrix has non-finite entries"));
        }
        let rho = Self(m);
        let p = rho.physicality();
        if !p.within(TRACE_TOL, HERMITIAN_TOL, POSITIVITY_TOL) {
            return Err(Error::arg(format!(
                "not a physical state: trace drift {:e}, hermiticity {:e}, min eigenvalue {:e}",
                p.trace_drift, p.hermiticity, p.min_eigenvalue
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix produced by trusted evolution code without validating;
    /// use [`DensityMatrix::physicality`] to audit it.
    pub(crate) fn from_evolved(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn pure(psi: &StateVector) -> Result<Self> {
        if !psi.is_normalized() {
            return Err(Error::arg("pure state must be normalized"));
        }
        Ok(Self(psi.projector()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn physicality(&self) -> Physicality {
        let herm = self.0.hermiticity_residual();
        // Eigenvalues of the Hermitian part; the anti-Hermitian residue is
        // reported separately.
        let h = (&self.0 + &self.0.adjoint()).scale_real(0.5);
        let min_eig = hermitian_eigenvalues(&h)
            .map(|ev| ev.into_iter().fold(f64::INFINITY, f64::min))
            .unwrap_or(f64::NEG_INFINITY);
        Physicality {
            trace_drift: (self.0.trace() - C64::new(1.0, 0.0)).norm(),
            hermiticity: herm,
            min_eigenvalue: min_eig,
        }
    }

    /// Coherence <bra| rho |ket>.
    pub fn element(&self, bra: &StateVector, ket: &StateVector) -> C64 {
        self.0.sandwich(bra.amplitudes(), ket.amplitudes())
    }
}
