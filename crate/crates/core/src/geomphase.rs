//! Geometric phases: discrete Berry (Pancharatnam) phases of closed state
//! families, phase and visibility extraction from tracked coherences, the
//! closed-form dark-state phase, and the spin-1/2 reference loop.
//!
//! Sign convention: the observable phase of a protected coherence is
//! `arg(v(T) / v(0))`, while [`discrete_berry_phase`] returns
//! `-arg prod <psi_k|psi_k+1>`, the discretised `i \oint <psi|d psi>`. For the
//! dark-state loop these are equal and opposite.

use std::f64::consts::PI;

use crate::bath::{dark_state, SqueezingParams};
use crate::error::{Error, Result};
use crate::qcore::StateVector;
use crate::C64;

/// Overlaps below this magnitude make the discrete connection ill-defined.
pub const MIN_OVERLAP: f64 = 1e-8;
/// Default largest per-sample phase increment accepted when unwrapping.
pub const UNWRAP_MAX_STEP: f64 = PI / 2.0;

/// Wraps an angle into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Measured phase of a coherence loop together with its predictions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResult {
    /// arg(v(T) / v(0)) in (-pi, pi].
    pub geometric_phase: f64,
    /// |v(T)| / |v(0)|.
    pub visibility: f64,
    /// Continuous phase change over the whole run (multi-loop aware).
    pub accumulated_phase: f64,
    pub prediction_phase: f64,
    pub prediction_visibility: f64,
}

/// Phase and visibility of a coherence between two instants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseMeasurement {
    pub phase: f64,
    pub visibility: f64,
}

/// Spin-1/2 loop at fixed polar angle `theta`, sampled at `phi_samples`
/// azimuths plus a closing copy of the first state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinLoop {
    theta: f64,
    phi_samples: usize,
}

impl SpinLoop {
    pub fn new(theta: f64, phi_samples: usize) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::arg(format!("polar angle must lie in [0, pi], got {theta}")));
        }
        if phi_samples < 2 {
            return Err(Error::arg("a loop needs at least two azimuth samples"));
        }
        Ok(Self { theta, phi_samples })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi_samples(&self) -> usize {
        self.phi_samples
    }

    pub fn up_states(&self) -> Vec<StateVector> {
        self.states(|theta, phi| spin_half_eigenstates(theta, phi).0)
    }

    pub fn down_states(&self) -> Vec<StateVector> {
        self.states(|theta, phi| spin_half_eigenstates(theta, phi).1)
    }

    fn states(&self, f: impl Fn(f64, f64) -> StateVector) -> Vec<StateVector> {
        let n = self.phi_samples;
        let mut out: Vec<StateVector> = (0..n)
            .map(|k| f(self.theta, 2.0 * PI * k as f64 / n as f64))
            .collect();
        out.push(out[0].clone());
        out
    }

    /// Closed form -2 pi sin^2(theta / 2) for the up-state loop.
    pub fn analytic_up_phase(&self) -> f64 {
        -2.0 * PI * (self.theta / 2.0).sin().powi(2)
    }
}

/// Eigenstates of sigma . n for n = (sin t cos p, sin t sin p, cos t), in the
/// basis (|up_z>, |down_z>).
pub fn spin_half_eigenstates(theta: f64, phi: f64) -> (StateVector, StateVector) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = C64::from_polar(1.0, phi);
    (
        StateVector::new(vec![C64::new(c, 0.0), e * s]),
        StateVector::new(vec![C64::new(s, 0.0), -e * c]),
    )
}

/// Discrete Berry phase `-sum_k arg <psi_k|psi_k+1>` of a closed chain.
///
/// The chain is first brought to a canonical gauge in which one fixed
/// component (the one whose smallest modulus along the loop is largest) is
/// real and positive, so the result does not depend on the phases of the
/// supplied states. If every component vanishes somewhere on the loop the
/// supplied gauge is used as is.
pub fn discrete_berry_phase(states: &[StateVector]) -> Result<f64> {
    if states.len() < 3 {
        return Err(Error::arg("a closed loop needs at least three states"));
    }
    let dim = states[0].dim();
    if dim == 0 || states.iter().any(|s| s.dim() != dim) {
        return Err(Error::arg("all states must share one non-zero dimension"));
    }
    let first = &states[0];
    let last = &states[states.len() - 1];
    let closure = first.inner(last).norm() / (first.norm() * last.norm());
    if !(closure >= 1.0 - 1e-9) {
        return Err(Error::arg("loop is not closed: first and last states differ"));
    }

    let gauge_component = (0..dim)
        .map(|j| {
            let floor = states
                .iter()
                .map(|s| s[j].norm() / s.norm())
                .fold(f64::INFINITY, f64::min);
            (j, floor)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|&(_, floor)| floor > MIN_OVERLAP)
        .map(|(j, _)| j);

    let fixed: Vec<StateVector> = states
        .iter()
        .map(|s| match gauge_component {
            Some(j) => s.scaled(s[j].conj() / s[j].norm()),
            None => s.clone(),
        })
        .collect();

    let mut total = 0.0;
    for (k, pair) in fixed.windows(2).enumerate() {
        let overlap = pair[0].inner(&pair[1]);
        let scale = pair[0].norm() * pair[1].norm();
        if overlap.norm() < MIN_OVERLAP * scale {
            return Err(Error::Resolution(format!(
                "overlap between samples {k} and {} vanishes; use more samples",
                k + 1
            )));
        }
        total += overlap.arg();
    }
    Ok(-total)
}

/// Dark states c|-1> - e^{i phi} s|1> over one loop of phi, `samples`
/// points plus the closing copy.
pub fn dark_state_loop(p: &SqueezingParams, samples: usize) -> Vec<StateVector> {
    let mut out: Vec<StateVector> = (0..samples)
        .map(|k| dark_state(&p.with_phi(p.phi() + 2.0 * PI * k as f64 / samples as f64)))
        .collect();
    out.push(out[0].clone());
    out
}

/// Closed-form dark-state phase 2 pi sinh^2 r / cosh 2r = pi (1 - 1 / cosh 2r).
pub fn analytic_chi(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::arg(format!("squeezing amplitude must be >= 0, got {r}")));
    }
    Ok(PI * (1.0 - 1.0 / (2.0 * r).cosh()))
}

/// Phase arg(v_final / v_initial) in (-pi, pi] and visibility |v_final| / |v_initial|.
pub fn extract_phase(v_initial: C64, v_final: C64) -> Result<PhaseMeasurement> {
    if v_initial.norm() == 0.0 {
        return Err(Error::arg("initial coherence is zero"));
    }
    let ratio = v_final / v_initial;
    Ok(PhaseMeasurement {
        phase: wrap_phase(ratio.arg()),
        visibility: ratio.norm(),
    })
}

/// Total continuous change of the argument along a sampled series.
pub fn unwrap_accumulated(series: &[C64]) -> Result<f64> {
    unwrap_accumulated_with(series, UNWRAP_MAX_STEP)
}

/// As [`unwrap_accumulated`] with an explicit bound on the per-sample
/// increment; larger increments are reported as under-resolved.
pub fn unwrap_accumulated_with(series: &[C64], max_step: f64) -> Result<f64> {
    if series.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::arg("series contains a zero sample"));
    }
    let mut total = 0.0;
    for (k, w) in series.windows(2).enumerate() {
        let d = (w[1] / w[0]).arg();
        if d.abs() > max_step {
            return Err(Error::Resolution(format!(
                "argument jumps by {d:.3} rad between samples {k} and {}",
                k + 1
            )));
        }
        total += d;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::make_squeezing;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Connection integral i \oint <psi|d psi> for the up state evaluated by
    /// composite Simpson quadrature of the analytic integrand
    /// i <up|d up/d phi> = -sin^2(theta/2).
    fn up_connection_integral(theta: f64) -> f64 {
        let n = 2000;
        let h = 2.0 * PI / n as f64;
        let integrand = |_phi: f64| -(theta / 2.0).sin().powi(2);
        let mut acc = integrand(0.0) + integrand(2.0 * PI);
        for k in 1..n {
            acc += integrand(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn spin_eigenstates() {
        let (up, _) = spin_half_eigenstates(0.0, 1.3);
        assert_eq!(up, StateVector::basis(2, 0));
        let (up, _) = spin_half_eigenstates(PI, 0.0);
        assert!((up[0]).norm() < 1e-16 && (up[1] - C64::new(1.0, 0.0)).norm() < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let (up, down) = spin_half_eigenstates(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
            assert!(up.inner(&down).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_loop_has_no_phase() {
        let psi = StateVector::normalized(vec![C64::new(0.3, 0.2), C64::new(-0.1, 0.9)]).unwrap();
        assert_eq!(discrete_berry_phase(&vec![psi; 5]).unwrap(), 0.0);
    }

    #[test]
    fn equatorial_spin_loop() {
        let lp = SpinLoop::new(PI / 2.0, 10_000).unwrap();
        let oracle = up_connection_integral(PI / 2.0);
        assert!((oracle + PI).abs() < 1e-12);
        assert!((discrete_berry_phase(&lp.up_states()).unwrap() - oracle).abs() <= 1e-6);
    }

    #[test]
    fn dark_state_loop_phase() {
        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        let phase = discrete_berry_phase(&dark_state_loop(&p, 10_000)).unwrap();
        assert!((phase + 2.30655032417686).abs() <= 1e-6, "{phase}");
        assert!((phase + analytic_chi(1.0).unwrap()).abs() <= 1e-6);
    }

    #[test]
    fn down_loop_is_opposite_modulo_two_pi() {
        for theta in [0.3, 1.0, PI / 2.0, 2.5] {
            let lp = SpinLoop::new(theta, 4000).unwrap();
            let up = discrete_berry_phase(&lp.up_states()).unwrap();
            let down = discrete_berry_phase(&lp.down_states()).unwrap();
            assert!(wrap_phase(up + down).abs() <= 1e-9, "theta {theta}: {up} + {down}");
        }
    }

    #[test]
    fn second_order_sample_convergence() {
        let theta = 1.0;
        let exact = SpinLoop::new(theta, 2).unwrap().analytic_up_phase();
        let phase = |n| discrete_berry_phase(&SpinLoop::new(theta, n).unwrap().up_states()).unwrap();
        let (a, b, c) = (phase(50), phase(100), phase(200));
        let (d1, d2) = ((b - a).abs(), (c - b).abs());
        assert!(d2 <= d1 / 4.0, "changes {d1:e} then {d2:e}");
        assert!((c - exact).abs() < (a - exact).abs());
    }

    #[test]
    fn rejects_open_or_coarse_loops() {
        let lp = SpinLoop::new(1.0, 10).unwrap();
        let mut open = lp.up_states();
        open.pop();
        assert!(matches!(discrete_berry_phase(&open), Err(Error::Argument(_))));
        let a = StateVector::basis(2, 0);
        let b = StateVector::basis(2, 1);
        let chain = vec![a.clone(), b, a];
        assert!(matches!(discrete_berry_phase(&chain), Err(Error::Resolution(_))));
        assert!(discrete_berry_phase(&lp.up_states()[..2]).is_err());
    }

    #[test]
    fn analytic_chi_values() {
        assert_eq!(analytic_chi(0.0).unwrap(), 0.0);
        assert!((analytic_chi(1.0).unwrap() - 2.30655).abs() <= 1e-5);
        let gap = PI - analytic_chi(5.0).unwrap();
        assert!(gap > 0.0 && (gap - 2.85256e-4).abs() < 1e-9);
        assert!(analytic_chi(-1.0).is_err());
        let mut prev = 0.0;
        for k in 1..=500 {
            let chi = analytic_chi(0.01 * k as f64).unwrap();
            assert!(chi > prev && chi < PI);
            prev = chi;
        }
    }

    #[test]
    fn phase_extraction() {
        let v = C64::new(0.3, -0.4);
        let m = extract_phase(v, v).unwrap();
        assert_eq!((m.phase, m.visibility), (0.0, 1.0));
        let vf = C64::from_polar(0.5 * 0.999224, 2.30655);
        let m = extract_phase(C64::new(0.5, 0.0), vf).unwrap();
        assert!((m.phase - 2.30655).abs() < 1e-12 && (m.visibility - 0.999224).abs() < 1e-12);
        assert!((extract_phase(v, -v).unwrap().phase - PI).abs() < 1e-15);
        assert!(extract_phase(C64::new(0.0, 0.0), v).is_err());
    }

    #[test]
    fn unwrapping() {
        assert_eq!(unwrap_accumulated(&[C64::new(2.0, 1.0); 4]).unwrap(), 0.0);
        let series: Vec<C64> = (0..=300).map(|k| C64::from_polar(1.0, 3.0 * PI * k as f64 / 300.0)).collect();
        assert!((unwrap_accumulated(&series).unwrap() - 3.0 * PI).abs() < 1e-12);
        let coarse: Vec<C64> = (0..=3).map(|k| C64::from_polar(1.0, 3.0 * PI * k as f64 / 3.0)).collect();
        assert!(matches!(unwrap_accumulated(&coarse), Err(Error::Resolution(_))));
    }

    proptest! {
        #[test]
        fn gauge_invariance(seed in 0u64..1000, theta in 0.2..2.9f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let states = SpinLoop::new(theta, 200).unwrap().up_states();
            let base = discrete_berry_phase(&states).unwrap();
            let n = states.len();
            let regauged: Vec<StateVector> = states
                .iter()
                .enumerate()
                .map(|(k, s)| if k == 0 || k == n - 1 { s.clone() } else { s.scaled(C64::from_polar(1.0, rng.gen_range(-PI..PI))) })
                .collect();
            prop_assert!((discrete_berry_phase(&regauged).unwrap() - base).abs() <= 1e-12);
        }
    }
}
