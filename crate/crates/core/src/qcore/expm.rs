use super::eig::eig_small;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Eigenvector-basis condition number above which the propagator switches
/// to the scaling-and-squaring series.
pub const EXPM_COND_LIMIT: f64 = 1e8;

/// Dense matrix exponential by scaling and squaring of a truncated Taylor
/// series.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::arg("expm requires a square matrix"));
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    if !norm.is_finite() {
        return Err(Error::arg("expm of a non-finite matrix"));
    }
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m.scale_real(0.5f64.powi(squarings));

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = term.dot(&scaled).scale_real(1.0 / k as f64);
        result += &term;
        if term.max_abs() <= f64::EPSILON * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}

/// Computes exp(-i a t) v0.
///
/// Uses the eigen-decomposition of `a` when its eigenvector basis is well
/// conditioned and falls back to [`expm`] otherwise.
pub fn matrix_exp_action(a: &ComplexMatrix, t: f64, v0: &[C64]) -> Result<Vec<C64>> {
    if !a.is_square() || a.cols() != v0.len() {
        return Err(Error::arg("matrix_exp_action: dimension mismatch"));
    }
    if !t.is_finite() {
        return Err(Error::arg("matrix_exp_action: non-finite time"));
    }
    if a.max_abs() == 0.0 || t == 0.0 {
        return Ok(v0.to_vec());
    }
    Propagator::new(a)?.apply(t, v0)
}

/// Reusable exp(-i a t) for one generator at many times.
#[derive(Clone, Debug)]
pub struct Propagator {
    generator: ComplexMatrix,
    spectral: Option<(Vec<C64>, ComplexMatrix, ComplexMatrix)>,
}

impl Propagator {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::arg("propagator requires a square generator"));
        }
        let spectral = match eig_small(a) {
            Ok(e) => {
                let cond = e.vectors.condition_number();
                if cond <= EXPM_COND_LIMIT {
                    let inv = e.vectors.inverse()?;
                    Some((e.values, e.vectors, inv))
                } else {
                    None
                }
            }
            Err(_) => None,
        };
        Ok(Self {
            generator: a.clone(),
            spectral,
        })
    }

    /// True when the eigenvector route is in use.
    pub fn is_spectral(&self) -> bool {
        self.spectral.is_some()
    }

    pub fn apply(&self, t: f64, v0: &[C64]) -> Result<Vec<C64>> {
        if v0.len() != self.generator.cols() {
            return Err(Error::arg("propagator: dimension mismatch"));
        }
        let out = match &self.spectral {
            Some((values, vectors, inv)) => {
                let coeffs = inv.mul_vec(v0)?;
                let evolved: Vec<C64> = coeffs
                    .iter()
                    .zip(values)
                    .map(|(c, &l)| c * (C64::new(0.0, -t) * l).exp())
                    .collect();
                vectors.mul_vec(&evolved)?
            }
            None => expm(&self.generator.scale(C64::new(0.0, -t)))?.mul_vec(v0)?,
        };
        if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric {
                time: Some(t),
                message: "propagated vector is not finite".into(),
            });
        }
        Ok(out)
    }
}
