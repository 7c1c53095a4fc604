//! Four-level protocol: a squeezed reservoir acting on {|-1>, |0>, |1>} plus a
//! decoupled reference level |a>. The coherences
//! v = (<a|rho|psi_DF>, <a|rho|psi_perp>) obey the closed linear system
//! dv/dt = -i G v, which is solved both through the full master equation and
//! directly.

use rayon::prelude::*;

use crate::bath::{
    dark_state_dphi, dark_state_in, levels, orthogonal_state_dphi, orthogonal_state_in, LoopSchedule,
    SqueezingParams,
};
use crate::error::{Error, Result};
use crate::geomphase::{extract_phase, unwrap_accumulated, PhaseResult};
use crate::lindblad::{evolve_me, EvolveOptions, LindbladGenerator, SqueezedChannel, TrackedCoherence, Trajectory};
use crate::qcore::{eig_small, ComplexMatrix, DensityMatrix, Propagator, StateVector};
use crate::C64;

/// Names of the tracked observables in a [`FourLevelRun`] trajectory.
pub const V_DARK: &str = "v1";
pub const V_PERP: &str = "v2";
pub const AUX_POPULATION: &str = "p_aux";

const DIM: usize = 4;

/// The 2x2 generator of the protected coherences.
#[derive(Clone, Debug)]
pub struct ReducedSystemG {
    pub matrix: ComplexMatrix,
    pub params: SqueezingParams,
    pub phi_dot: f64,
}

impl ReducedSystemG {
    /// Eigenvalue with the smallest decay rate (the dark branch).
    pub fn dark_eigenvalue(&self) -> Result<C64> {
        Ok(eig_small(&self.matrix)?.values[0])
    }
}

/// G = [[-phi_dot s^2, phi_dot s c], [phi_dot s c, -phi_dot c^2 - i gamma_tilde / 2]].
pub fn build_g(p: &SqueezingParams, phi_dot: f64) -> Result<ReducedSystemG> {
    if !(phi_dot > 0.0) || !phi_dot.is_finite() {
        return Err(Error::arg(format!("phase velocity must be positive, got {phi_dot}")));
    }
    let (c, s) = (p.c(), p.s());
    let off = C64::new(phi_dot * s * c, 0.0);
    let matrix = ComplexMatrix::from_rows(&[
        vec![C64::new(-phi_dot * s * s, 0.0), off],
        vec![off, C64::new(-phi_dot * c * c, -p.gamma_tilde() / 2.0)],
    ])?;
    Ok(ReducedSystemG {
        matrix,
        params: *p,
        phi_dot,
    })
}

/// exp(-i G t) v0.
pub fn reduced_solve(g: &ReducedSystemG, v0: &[C64], t: f64) -> Result<Vec<C64>> {
    if !(t >= 0.0) {
        return Err(Error::arg(format!("propagation time must be >= 0, got {t}")));
    }
    if v0.len() != 2 {
        return Err(Error::arg("the reduced system has two components"));
    }
    if t == 0.0 {
        return Ok(v0.to_vec());
    }
    Propagator::new(&g.matrix)?.apply(t, v0)
}

/// Default integration step 1e-2 / gamma_tilde.
pub fn default_step(p: &SqueezingParams) -> f64 {
    1e-2 / p.gamma_tilde()
}

/// A completed four-level loop.
#[derive(Clone)]
pub struct FourLevelRun {
    pub params: SqueezingParams,
    pub schedule: LoopSchedule,
    pub step: f64,
    pub g: ReducedSystemG,
    pub trajectory: Trajectory,
    pub phase: PhaseResult,
    /// exp(-i G t) v(0) at each sample time.
    pub reduced: Vec<[C64; 2]>,
    generator: LindbladGenerator,
}

impl FourLevelRun {
    /// Squeezing parameters with the schedule offset folded into phi.
    fn base(&self) -> SqueezingParams {
        shifted(&self.params, &self.schedule)
    }

    pub fn coherences(&self) -> (&[C64], &[C64]) {
        (
            self.trajectory.observable(V_DARK).expect("tracked"),
            self.trajectory.observable(V_PERP).expect("tracked"),
        )
    }

    /// Largest componentwise |v_full - v_reduced| over the samples.
    pub fn max_reduced_deviation(&self) -> f64 {
        let (v1, v2) = self.coherences();
        self.reduced
            .iter()
            .zip(v1.iter().zip(v2))
            .map(|(r, (a, b))| (r[0] - a).norm().max((r[1] - b).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest |dv/dt + i G v| over the samples, with dv/dt taken from the
    /// master equation and the moving basis.
    pub fn closure_residual(&self) -> Result<f64> {
        let base = self.base();
        let aux = StateVector::basis(DIM, levels::AUX);
        let mut worst: f64 = 0.0;
        for (t, state) in self.trajectory.times.iter().zip(&self.trajectory.states) {
            let p = base.with_phi(base.phi() + self.schedule.phi_dot() * t);
            let rho = state.matrix();
            let drho = self.generator.rhs(*t, rho);
            let kets = [dark_state_in(&p, DIM, 1)?, orthogonal_state_in(&p, DIM, 1)?];
            let dkets = [dark_state_dphi(&p, DIM, 1)?, orthogonal_state_dphi(&p, DIM, 1)?];
            let a = aux.amplitudes();
            let v: Vec<C64> = kets.iter().map(|k| rho.sandwich(a, k.amplitudes())).collect();
            let dv: Vec<C64> = kets
                .iter()
                .zip(&dkets)
                .map(|(k, dk)| drho.sandwich(a, k.amplitudes()) + rho.sandwich(a, dk.amplitudes()) * self.schedule.phi_dot())
                .collect();
            let gv = self.g.matrix.mul_vec(&v)?;
            for i in 0..2 {
                worst = worst.max((dv[i] + C64::new(0.0, 1.0) * gv[i]).norm());
            }
        }
        Ok(worst)
    }

    /// Largest |<a|rho|a> - 1/2| over the samples.
    pub fn aux_population_drift(&self) -> f64 {
        self.trajectory
            .observable(AUX_POPULATION)
            .expect("tracked")
            .iter()
            .map(|z| (z - C64::new(0.5, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

fn shifted(p: &SqueezingParams, sched: &LoopSchedule) -> SqueezingParams {
    p.with_phi(p.phi() + sched.phi0())
}

/// Builds the phase record from a coherence series and the reduced-system
/// value at the final time.
pub(crate) fn phase_result(series: &[C64], predicted_final: C64) -> Result<PhaseResult> {
    let first = series[0];
    let last = *series.last().expect("non-empty series");
    let measured = extract_phase(first, last)?;
    let predicted = extract_phase(first, predicted_final)?;
    Ok(PhaseResult {
        geometric_phase: measured.phase,
        visibility: measured.visibility,
        accumulated_phase: unwrap_accumulated(series)?,
        prediction_phase: predicted.phase,
        prediction_visibility: predicted.visibility,
    })
}

/// Runs the four-level master equation over the schedule, starting from
/// (|a> + psi_DF(phi0)) / sqrt 2. The squeezing phase is
/// `p.phi() + sched.phi0() + phi_dot t`.
pub fn run_full_loop(p: &SqueezingParams, sched: &LoopSchedule, step: f64) -> Result<FourLevelRun> {
    run_full_loop_with(p, sched, EvolveOptions::with_step(step))
}

/// As [`run_full_loop`] with explicit integration options.
pub fn run_full_loop_with(p: &SqueezingParams, sched: &LoopSchedule, opts: EvolveOptions) -> Result<FourLevelRun> {
    let base = shifted(p, sched);
    let phi_dot = sched.phi_dot();
    let g = build_g(p, phi_dot)?;
    let generator = LindbladGenerator::squeezed(
        DIM,
        vec![SqueezedChannel {
            params: base,
            channel: 1,
            phi_dot,
        }],
    )?;

    let aux = StateVector::basis(DIM, levels::AUX);
    let u = aux
        .add(&dark_state_in(&base, DIM, 1)?)
        .scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let rho0 = DensityMatrix::pure(&u)?;

    let at = move |t: f64| base.with_phi(base.phi() + phi_dot * t);
    let (a1, a2, a3) = (aux.clone(), aux.clone(), aux.clone());
    let a4 = aux.clone();
    let tracked = [
        TrackedCoherence::new(V_DARK, move |_| a1.clone(), move |t| dark_state_in(&at(t), DIM, 1).expect("valid channel")),
        TrackedCoherence::new(V_PERP, move |_| a2.clone(), move |t| {
            orthogonal_state_in(&at(t), DIM, 1).expect("valid channel")
        }),
        TrackedCoherence::new(AUX_POPULATION, move |_| a3.clone(), move |_| a4.clone()),
    ];

    let trajectory = evolve_me(&generator, &rho0, 0.0, sched.duration(), opts, &tracked)?;

    let v1 = trajectory.observable(V_DARK).expect("tracked");
    let v2 = trajectory.observable(V_PERP).expect("tracked");
    let v0 = [v1[0], v2[0]];
    let prop = Propagator::new(&g.matrix)?;
    let reduced = trajectory
        .times
        .iter()
        .map(|&t| {
            let v = if t == 0.0 { v0.to_vec() } else { prop.apply(t, &v0)? };
            Ok([v[0], v[1]])
        })
        .collect::<Result<Vec<_>>>()?;
    let phase = phase_result(v1, reduced.last().expect("non-empty")[0])?;

    Ok(FourLevelRun {
        params: *p,
        schedule: *sched,
        step: opts.step,
        g,
        trajectory,
        phase,
        reduced,
        generator,
    })
}

/// How the integration step is chosen for each sweep point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepRule {
    Fixed(f64),
    /// step = k / gamma_tilde
    PerGammaTilde(f64),
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::PerGammaTilde(1e-2)
    }
}

impl StepRule {
    pub fn step_for(&self, p: &SqueezingParams) -> f64 {
        match *self {
            StepRule::Fixed(h) => h,
            StepRule::PerGammaTilde(k) => k / p.gamma_tilde(),
        }
    }
}

/// One row of an adiabaticity sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub phi_dot: f64,
    /// Measured minus reduced-system phase.
    pub phase_error: f64,
    pub visibility_loss: f64,
    pub predicted_loss: f64,
}

/// One single-loop run per phase velocity. Runs execute on the current rayon
/// pool; rows come back in input order.
pub fn adiabatic_sweep(p: &SqueezingParams, phi_dots: &[f64], rule: StepRule) -> Result<Vec<SweepRow>> {
    if phi_dots.is_empty() {
        return Err(Error::arg("sweep needs at least one phase velocity"));
    }
    let step = rule.step_for(p);
    phi_dots
        .par_iter()
        .map(|&phi_dot| {
            let sched = LoopSchedule::new(0.0, phi_dot, 1)?;
            let run = run_full_loop(p, &sched, step)?;
            Ok(SweepRow {
                phi_dot,
                phase_error: run.phase.geometric_phase - run.phase.prediction_phase,
                visibility_loss: 1.0 - run.phase.visibility,
                predicted_loss: 1.0 - run.phase.prediction_visibility,
            })
        })
        .collect()
}
