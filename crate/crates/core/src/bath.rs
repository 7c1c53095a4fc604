//! Squeezed-vacuum reservoir: squeezing parameters, bath moments, ladder and
//! dressed jump operators, the dark state and its orthogonal partner, and
//! linear loop schedules for the squeezing phase.
//!
//! Level orderings are fixed crate-wide:
//!
//! | manifold | basis order |
//! |---|---|
//! | three levels | `|-1>, |0>, |1>` |
//! | four levels | `|-1>, |0>, |1>, |a>` |
//! | five levels | `|-1>, |0>, |1>, |-1'>, |1'>` |

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, Operator, StateVector};
use crate::C64;

/// Level indices in the fixed basis orders.
pub mod levels {
    pub const MINUS: usize = 0;
    pub const ZERO: usize = 1;
    pub const PLUS: usize = 2;
    /// Decoupled reference level of the four-level atom.
    pub const AUX: usize = 3;
    /// Primed levels of the five-level atom.
    pub const MINUS_PRIME: usize = 3;
    pub const PLUS_PRIME: usize = 4;
}

/// Largest accepted squeezing amplitude.
pub const R_MAX: f64 = 10.0;

/// Squeezing amplitude `r`, phase `phi` and bare decay rate `gamma` of one
/// reservoir channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezingParams {
    r: f64,
    phi: f64,
    gamma: f64,
}

impl SqueezingParams {
    pub fn new(r: f64, phi: f64, gamma: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::arg(format!("squeezing amplitude must be >= 0, got {r}")));
        }
        if r > R_MAX {
            return Err(Error::arg(format!("squeezing amplitude must be <= {R_MAX}, got {r}")));
        }
        if !phi.is_finite() {
            return Err(Error::arg("squeezing phase must be finite"));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::arg(format!("decay rate must be positive and finite, got {gamma}")));
        }
        Ok(Self { r, phi, gamma })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same amplitude and rate at a different phase.
    pub fn with_phi(&self, phi: f64) -> Self {
        Self { phi, ..*self }
    }

    /// cosh r / sqrt(cosh 2r)
    pub fn c(&self) -> f64 {
        self.r.cosh() / (2.0 * self.r).cosh().sqrt()
    }

    /// sinh r / sqrt(cosh 2r)
    pub fn s(&self) -> f64 {
        self.r.sinh() / (2.0 * self.r).cosh().sqrt()
    }

    /// Dressed decay rate gamma cosh 2r of the orthogonal state.
    pub fn gamma_tilde(&self) -> f64 {
        self.gamma * (2.0 * self.r).cosh()
    }

    fn phase_factor(&self) -> C64 {
        C64::from_polar(1.0, self.phi)
    }
}

/// Validated constructor for [`SqueezingParams`].
pub fn make_squeezing(r: f64, phi: f64, gamma: f64) -> Result<SqueezingParams> {
    SqueezingParams::new(r, phi, gamma)
}

/// Second moments of the broadband squeezed vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathMoments {
    /// <a^dagger a> = sinh^2 r
    pub n_thermal: f64,
    /// <a a> = e^{i phi} sinh r cosh r
    pub m_anomalous: C64,
}

impl BathMoments {
    /// |M|^2 - N (N + 1); zero for a pure squeezed vacuum.
    pub fn purity_defect(&self) -> f64 {
        self.m_anomalous.norm_sqr() - self.n_thermal * (self.n_thermal + 1.0)
    }
}

pub fn bath_moments(p: &SqueezingParams) -> BathMoments {
    let (sh, ch) = (p.r.sinh(), p.r.cosh());
    BathMoments {
        n_thermal: sh * sh,
        m_anomalous: p.phase_factor() * (sh * ch),
    }
}

/// The two levels (`|-1>`-like, `|1>`-like) coupled by `channel`.
pub fn channel_levels(level_count: usize, channel: u8) -> Result<(usize, usize)> {
    use levels::*;
    match (level_count, channel) {
        (3..=5, 1) => Ok((MINUS, PLUS)),
        (5, 2) => Ok((MINUS_PRIME, PLUS_PRIME)),
        _ => Err(Error::arg(format!(
            "no channel {channel} in a {level_count}-level atom"
        ))),
    }
}

/// Lowering operator S = |-1><0| + |0><1| (channel 1) or
/// S' = |-1'><0| + |0><1'| (channel 2, five levels only).
pub fn ladder_operator(level_count: usize, channel: u8) -> Result<Operator> {
    let (low, high) = channel_levels(level_count, channel)?;
    let mut s = ComplexMatrix::zeros(level_count, level_count);
    s[(low, levels::ZERO)] = C64::new(1.0, 0.0);
    s[(levels::ZERO, high)] = C64::new(1.0, 0.0);
    Ok(s)
}

/// Dressed jump operator R = S cosh r + e^{i phi} S^dagger sinh r.
pub fn dressed_operator(p: &SqueezingParams, s_op: &Operator) -> Operator {
    let ch = C64::new(p.r.cosh(), 0.0);
    let sh = p.phase_factor() * p.r.sinh();
    let mut r = s_op.scale(ch);
    r += &s_op.adjoint().scale(sh);
    r
}

/// Dark state c|-1> - e^{i phi} s|1> in the three-level basis.
pub fn dark_state(p: &SqueezingParams) -> StateVector {
    StateVector::new(dark_amplitudes(p, 3, (levels::MINUS, levels::PLUS)))
}

/// Orthogonal partner s|-1> + e^{i phi} c|1> in the three-level basis.
pub fn orthogonal_state(p: &SqueezingParams) -> StateVector {
    StateVector::new(orthogonal_amplitudes(p, 3, (levels::MINUS, levels::PLUS)))
}

/// Dark state of `channel` embedded in a `level_count`-level atom.
pub fn dark_state_in(p: &SqueezingParams, level_count: usize, channel: u8) -> Result<StateVector> {
    let lv = channel_levels(level_count, channel)?;
    Ok(StateVector::new(dark_amplitudes(p, level_count, lv)))
}

/// Orthogonal state of `channel` embedded in a `level_count`-level atom.
pub fn orthogonal_state_in(p: &SqueezingParams, level_count: usize, channel: u8) -> Result<StateVector> {
    let lv = channel_levels(level_count, channel)?;
    Ok(StateVector::new(orthogonal_amplitudes(p, level_count, lv)))
}

/// d/dphi of the embedded dark state: -i e^{i phi} s |1>.
pub fn dark_state_dphi(p: &SqueezingParams, level_count: usize, channel: u8) -> Result<StateVector> {
    let (_, high) = channel_levels(level_count, channel)?;
    let mut v = vec![C64::new(0.0, 0.0); level_count];
    v[high] = C64::new(0.0, -p.s()) * p.phase_factor();
    Ok(StateVector::new(v))
}

/// d/dphi of the embedded orthogonal state: i e^{i phi} c |1>.
pub fn orthogonal_state_dphi(p: &SqueezingParams, level_count: usize, channel: u8) -> Result<StateVector> {
    let (_, high) = channel_levels(level_count, channel)?;
    let mut v = vec![C64::new(0.0, 0.0); level_count];
    v[high] = C64::new(0.0, p.c()) * p.phase_factor();
    Ok(StateVector::new(v))
}

fn dark_amplitudes(p: &SqueezingParams, dim: usize, (low, high): (usize, usize)) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[low] = C64::new(p.c(), 0.0);
    v[high] = -p.phase_factor() * p.s();
    v
}

fn orthogonal_amplitudes(p: &SqueezingParams, dim: usize, (low, high): (usize, usize)) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[low] = C64::new(p.s(), 0.0);
    v[high] = p.phase_factor() * p.c();
    v
}

/// Linear loop of the squeezing phase, phi(t) = phi0 + phi_dot t, repeated
/// `n_loops` times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopSchedule {
    phi0: f64,
    phi_dot: f64,
    n_loops: u32,
}

impl LoopSchedule {
    pub fn new(phi0: f64, phi_dot: f64, n_loops: u32) -> Result<Self> {
        if !phi0.is_finite() {
            return Err(Error::arg("initial phase must be finite"));
        }
        if !(phi_dot > 0.0) || !phi_dot.is_finite() {
            return Err(Error::arg(format!("phase velocity must be positive, got {phi_dot}")));
        }
        if n_loops == 0 {
            return Err(Error::arg("at least one loop is required"));
        }
        Ok(Self { phi0, phi_dot, n_loops })
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn phi_dot(&self) -> f64 {
        self.phi_dot
    }

    pub fn n_loops(&self) -> u32 {
        self.n_loops
    }

    /// Duration of one loop, 2 pi / phi_dot.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.phi_dot
    }

    pub fn duration(&self) -> f64 {
        self.n_loops as f64 * self.period()
    }

    /// Phase at time `t`, not reduced modulo 2 pi.
    pub fn phase_at(&self, t: f64) -> Result<f64> {
        let slack = 1e-12 * self.duration();
        if !(t >= -slack && t <= self.duration() + slack) {
            return Err(Error::arg(format!(
                "time {t} outside the schedule [0, {}]",
                self.duration()
            )));
        }
        Ok(self.phase_unchecked(t))
    }

    pub(crate) fn phase_unchecked(&self, t: f64) -> f64 {
        self.phi0 + self.phi_dot * t
    }
}

/// Free-function form of [`LoopSchedule::phase_at`].
pub fn phase_at(sched: &LoopSchedule, t: f64) -> Result<f64> {
    sched.phase_at(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::singular_values;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn vec_norm(v: &[C64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn unsqueezed_coefficients() {
        let p = make_squeezing(0.0, 0.0, 1.0).unwrap();
        assert_eq!((p.c(), p.s(), p.gamma_tilde()), (1.0, 0.0, 1.0));
    }

    #[test]
    fn unit_squeezing_coefficients() {
        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        assert!((p.c() - 0.795551).abs() < 5e-7);
        assert!((p.s() - 0.605887).abs() < 5e-7);
        assert!((p.gamma_tilde() - 3.762196).abs() < 5e-7);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(make_squeezing(-0.1, 0.0, 1.0).is_err());
        assert!(make_squeezing(0.5, 0.0, 0.0).is_err());
        assert!(make_squeezing(10.5, 0.0, 1.0).is_err());
        assert!(make_squeezing(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn moments() {
        let m = bath_moments(&make_squeezing(0.0, 0.3, 1.0).unwrap());
        assert_eq!(m.n_thermal, 0.0);
        assert_eq!(m.m_anomalous.norm(), 0.0);
        let m = bath_moments(&make_squeezing(1.0, PI / 2.0, 1.0).unwrap());
        assert!((m.n_thermal - 1.381098).abs() < 5e-7);
        assert!(m.m_anomalous.re.abs() < 1e-15);
        assert!((m.m_anomalous.im - 1.813430).abs() < 5e-7);
    }

    #[test]
    fn ladder_operators() {
        let s = ladder_operator(3, 1).unwrap();
        assert_eq!(s[(levels::MINUS, levels::ZERO)], c(1.0, 0.0));
        assert_eq!(s[(levels::ZERO, levels::PLUS)], c(1.0, 0.0));
        assert_eq!(s.as_slice().iter().filter(|z| z.norm() != 0.0).count(), 2);

        let s2 = ladder_operator(5, 2).unwrap();
        assert_eq!(s2[(levels::MINUS_PRIME, levels::ZERO)], c(1.0, 0.0));
        assert_eq!(s2[(levels::ZERO, levels::PLUS_PRIME)], c(1.0, 0.0));
        assert_eq!(s2.as_slice().iter().filter(|z| z.norm() != 0.0).count(), 2);

        let up = StateVector::basis(3, levels::PLUS);
        let twice = s.dot(&s).mul_vec(up.amplitudes()).unwrap();
        assert_eq!(StateVector::new(twice), StateVector::basis(3, levels::MINUS));

        assert!(ladder_operator(3, 2).is_err());
        assert!(ladder_operator(6, 1).is_err());
    }

    #[test]
    fn dressed_operator_entries() {
        let s = ladder_operator(3, 1).unwrap();
        let p0 = make_squeezing(0.0, 1.2, 1.0).unwrap();
        assert_eq!(dressed_operator(&p0, &s), s);

        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        let r = dressed_operator(&p, &s);
        let (m, z, pl) = (levels::MINUS, levels::ZERO, levels::PLUS);
        for (i, j, v) in [(m, z, 1.543081), (z, pl, 1.543081), (z, m, 1.175201), (pl, z, 1.175201)] {
            assert!((r[(i, j)] - c(v, 0.0)).norm() < 5e-7);
        }
        assert_eq!(r.as_slice().iter().filter(|z| z.norm() != 0.0).count(), 4);
    }

    #[test]
    fn adjoint_of_dressed_operator_swaps_roles() {
        // R(r, phi)^dagger = S^dagger cosh r + e^{-i phi} S sinh r.
        let s = ladder_operator(3, 1).unwrap();
        let p = make_squeezing(1.0, 0.7, 1.0).unwrap();
        let rebuilt = dressed_operator(&p.with_phi(-0.7), &s.adjoint());
        let diff = &dressed_operator(&p, &s).adjoint() - &rebuilt;
        assert!(diff.max_abs() <= 1e-14);
    }

    #[test]
    fn dark_state_values() {
        assert_eq!(dark_state(&make_squeezing(0.0, 0.4, 1.0).unwrap()), StateVector::basis(3, 0));
        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        let d = dark_state(&p);
        for (k, v) in [(0, 0.795551), (1, 0.0), (2, -0.605887)] {
            assert!((d[k] - c(v, 0.0)).norm() < 5e-7);
        }
        let d = dark_state(&p.with_phi(PI));
        assert!((d[2] - c(0.605887, 0.0)).norm() < 5e-7);
        assert_eq!(orthogonal_state(&make_squeezing(0.0, 0.0, 1.0).unwrap()), StateVector::basis(3, 2));
    }

    #[test]
    fn orthogonal_state_eigen_identity_at_unit_squeezing() {
        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        let r = dressed_operator(&p, &ladder_operator(3, 1).unwrap());
        let perp = orthogonal_state(&p);
        let rr = r.adjoint().dot(&r).mul_vec(perp.amplitudes()).unwrap();
        let lhs: Vec<C64> = rr.iter().zip(perp.amplitudes()).map(|(a, b)| a - b * 3.762196).collect();
        // 3.762196 is cosh 2 rounded to 7 digits.
        assert!(vec_norm(&lhs) <= 1e-6);
        let lhs: Vec<C64> = rr
            .iter()
            .zip(perp.amplitudes())
            .map(|(a, b)| a - b * (2.0f64).cosh())
            .collect();
        assert!(vec_norm(&lhs) <= 1e-12);
    }

    #[test]
    fn schedule() {
        let s = LoopSchedule::new(0.0, 0.5, 1).unwrap();
        let t = s.duration();
        assert_eq!(s.phase_at(0.0).unwrap(), 0.0);
        assert!((s.phase_at(t).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((s.phase_at(t / 2.0).unwrap() - PI).abs() < 1e-15);
        assert!(s.phase_at(-1.0).is_err());
        assert!(s.phase_at(t * 1.01).is_err());
        let s3 = LoopSchedule::new(0.3, 0.5, 3).unwrap();
        assert!((s3.phase_at(s3.duration()).unwrap() - 0.3 - 6.0 * PI).abs() < 1e-12);
        assert!(LoopSchedule::new(0.0, 0.0, 1).is_err());
        assert!(LoopSchedule::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn s_squared_increases_towards_half() {
        let mut prev = -1.0;
        for k in 0..=10 {
            let p = make_squeezing(0.5 * k as f64, 0.0, 1.0).unwrap();
            let s2 = p.s() * p.s();
            assert!(s2 < 0.5);
            assert!(s2 > prev);
            prev = s2;
        }
    }

    #[test]
    fn dressed_operator_kernel_is_one_dimensional() {
        let s = ladder_operator(3, 1).unwrap();
        for k in 0..20 {
            let p = make_squeezing(0.24 * k as f64, 0.37 * k as f64, 1.0).unwrap();
            let sv = singular_values(&dressed_operator(&p, &s));
            assert_eq!(sv.iter().filter(|&&x| x <= 1e-12).count(), 1, "r = {}", p.r());
        }
    }

    proptest! {
        #[test]
        fn coefficient_identities(r in 0.0..R_MAX, phi in 0.0..2.0 * PI) {
            let p = make_squeezing(r, phi, 1.0).unwrap();
            prop_assert!((p.c() * p.c() + p.s() * p.s() - 1.0).abs() <= 1e-12);
            prop_assert!(p.gamma_tilde() >= p.gamma());
            let m = bath_moments(&p);
            prop_assert!(m.purity_defect().abs() <= 1e-10 * (m.n_thermal * (m.n_thermal + 1.0)).max(1.0));
        }

        #[test]
        fn dark_state_kernel_and_orthogonality(r in 0.0..3.0, phi in 0.0..2.0 * PI) {
            let p = make_squeezing(r, phi, 1.0).unwrap();
            let rop = dressed_operator(&p, &ladder_operator(3, 1).unwrap());
            let dark = dark_state(&p);
            prop_assert!(dark.is_normalized());
            prop_assert!(vec_norm(&rop.mul_vec(dark.amplitudes()).unwrap()) <= 1e-12);
            let perp = orthogonal_state(&p);
            prop_assert!(perp.is_normalized());
            prop_assert!(dark.inner(&perp).norm() <= 1e-12);
        }

        #[test]
        fn gauge_covariance(r in 0.0..3.0, phi in 0.0..2.0 * PI, delta in -PI..PI) {
            let p = make_squeezing(r, phi, 1.0).unwrap();
            let shifted = dark_state(&p.with_phi(phi + delta));
            let base = dark_state(&p);
            prop_assert!((shifted[0] - base[0]).norm() <= 1e-14);
            prop_assert!((shifted[2] - base[2] * C64::from_polar(1.0, delta)).norm() <= 1e-14);
        }
    }
}
