//! Lindblad dissipator and master-equation evolution.
//!
//! The generator is the pure dissipator
//!
//! ```text
//! d rho / dt = - sum_i gamma_i / 2 (R_i^dag R_i rho + rho R_i^dag R_i - 2 R_i rho R_i^dag)
//! ```
//!
//! in the interaction picture; there is no Hamiltonian term. Time dependence
//! enters only through the squeezing phase of each jump operator.

use std::sync::Arc;

use crate::bath::{dark_state, dressed_operator, ladder_operator, SqueezingParams};
use crate::error::{Error, Result};
use crate::qcore::ode::{rk4_drive, StepGrid};
use crate::qcore::{ComplexMatrix, DensityMatrix, Operator, Physicality, StateVector};
use crate::C64;

/// Mid-run physicality bounds; a violation aborts the evolution.
pub const RUN_TRACE_TOL: f64 = 1e-6;
pub const RUN_POSITIVITY_TOL: f64 = 1e-6;
/// Default cap on the number of stored samples per trajectory.
pub const MAX_DEFAULT_SAMPLES: usize = 10_000;

/// A decay channel: rate and jump operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    rate: f64,
    jump: Operator,
}

impl Channel {
    pub fn new(rate: f64, jump: Operator) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::arg(format!("channel rate must be positive and finite, got {rate}")));
        }
        if !jump.is_square() {
            return Err(Error::arg("jump operator must be square"));
        }
        Ok(Self { rate, jump })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn jump(&self) -> &Operator {
        &self.jump
    }
}

/// One squeezed reservoir channel whose phase advances linearly:
/// phi(t) = params.phi + phi_dot t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedChannel {
    pub params: SqueezingParams,
    /// Which ladder operator the reservoir couples to (1 or 2).
    pub channel: u8,
    pub phi_dot: f64,
}

impl SqueezedChannel {
    pub fn params_at(&self, t: f64) -> SqueezingParams {
        self.params.with_phi(self.params.phi() + self.phi_dot * t)
    }
}

type ChannelFn = dyn Fn(f64) -> Vec<Channel> + Send + Sync;

/// Time-indexed set of channels defining d rho / dt.
#[derive(Clone)]
pub struct LindbladGenerator {
    dim: usize,
    channels_at: Arc<ChannelFn>,
}

impl LindbladGenerator {
    /// Generator from an arbitrary channel provider. Operators returned by
    /// `channels_at` must be `dim x dim`.
    pub fn new(dim: usize, channels_at: impl Fn(f64) -> Vec<Channel> + Send + Sync + 'static) -> Self {
        Self {
            dim,
            channels_at: Arc::new(channels_at),
        }
    }

    pub fn constant(dim: usize, channels: Vec<Channel>) -> Result<Self> {
        if channels.iter().any(|c| c.jump.rows() != dim) {
            return Err(Error::arg("jump operator dimension does not match the generator"));
        }
        Ok(Self::new(dim, move |_| channels.clone()))
    }

    /// Squeezed-reservoir channels on a `level_count`-level atom; jump
    /// operators are rebuilt from phi(t) on every evaluation.
    pub fn squeezed(level_count: usize, channels: Vec<SqueezedChannel>) -> Result<Self> {
        let ladders = channels
            .iter()
            .map(|c| ladder_operator(level_count, c.channel))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(level_count, move |t| {
            channels
                .iter()
                .zip(&ladders)
                .map(|(c, s)| {
                    let p = c.params_at(t);
                    Channel {
                        rate: p.gamma(),
                        jump: dressed_operator(&p, s),
                    }
                })
                .collect()
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn channels_at(&self, t: f64) -> Vec<Channel> {
        (self.channels_at)(t)
    }

    /// d rho / dt at time `t` for an arbitrary (not validated) matrix.
    pub fn rhs(&self, t: f64, rho: &ComplexMatrix) -> ComplexMatrix {
        lindblad_rhs(rho, &self.channels_at(t))
    }
}

/// Dissipator without validation; the hot path of every evolution.
pub(crate) fn lindblad_rhs(rho: &ComplexMatrix, channels: &[Channel]) -> ComplexMatrix {
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for ch in channels {
        let r = &ch.jump;
        let rd = r.adjoint();
        let a = rd.dot(r);
        let a_rho = a.dot(rho);
        let rho_a = rho.dot(&a);
        let jump = r.dot(rho).dot(&rd);
        let half = -0.5 * ch.rate;
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += (a_rho[(i, j)] + rho_a[(i, j)]) * half + jump[(i, j)] * ch.rate;
            }
        }
    }
    out
}

/// d rho / dt = sum_i -(gamma_i / 2)(R_i^dag R_i rho + rho R_i^dag R_i - 2 R_i rho R_i^dag).
pub fn dissipator_apply(rho: &DensityMatrix, channels: &[Channel]) -> Result<ComplexMatrix> {
    if channels.iter().any(|c| c.jump.rows() != rho.dim()) {
        return Err(Error::arg("jump operator dimension does not match the state"));
    }
    Ok(lindblad_rhs(rho.matrix(), channels))
}

type StateFn = dyn Fn(f64) -> StateVector + Send + Sync;

/// A coherence <bra(t)| rho(t) |ket(t)> recorded along a trajectory.
#[derive(Clone)]
pub struct TrackedCoherence {
    pub name: String,
    bra: Arc<StateFn>,
    ket: Arc<StateFn>,
}

impl TrackedCoherence {
    pub fn new(
        name: impl Into<String>,
        bra: impl Fn(f64) -> StateVector + Send + Sync + 'static,
        ket: impl Fn(f64) -> StateVector + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            bra: Arc::new(bra),
            ket: Arc::new(ket),
        }
    }

    pub fn bra_at(&self, t: f64) -> StateVector {
        (self.bra)(t)
    }

    pub fn ket_at(&self, t: f64) -> StateVector {
        (self.ket)(t)
    }

    pub fn evaluate(&self, t: f64, rho: &ComplexMatrix) -> C64 {
        rho.sandwich(self.bra_at(t).amplitudes(), self.ket_at(t).amplitudes())
    }
}

/// Integration settings for [`evolve_me`].
#[derive(Clone, Copy, Debug)]
pub struct EvolveOptions {
    pub step: f64,
    /// Steps between samples; `None` keeps at most [`MAX_DEFAULT_SAMPLES`].
    pub stride: Option<usize>,
    /// Check physicality at every k-th sample (0 disables the check).
    pub check_every: usize,
}

impl EvolveOptions {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            stride: None,
            check_every: 1,
        }
    }
}

/// A named complex time series.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub name: String,
    pub values: Vec<C64>,
}

/// Sampled master-equation solution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub observables: Vec<Observable>,
}

impl Trajectory {
    pub fn observable(&self, name: &str) -> Option<&[C64]> {
        self.observables
            .iter()
            .find(|o| o.name == name)
            .map(|o| o.values.as_slice())
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least one sample")
    }

    /// Worst physicality deviation over all stored states.
    pub fn physicality(&self) -> Physicality {
        self.states
            .iter()
            .map(DensityMatrix::physicality)
            .fold(Physicality::ideal(), Physicality::worst)
    }
}

/// Integrates the master equation with fixed-step RK4, recording the state
/// and each tracked coherence at every sample.
pub fn evolve_me(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t0: f64,
    t1: f64,
    opts: EvolveOptions,
    tracked: &[TrackedCoherence],
) -> Result<Trajectory> {
    if rho0.dim() != gen.dim() {
        return Err(Error::arg("initial state dimension does not match the generator"));
    }
    let grid = StepGrid::new(t0, t1, opts.step)?;
    let stride = opts
        .stride
        .unwrap_or_else(|| grid.total_steps().div_ceil(MAX_DEFAULT_SAMPLES))
        .max(1);

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut observables: Vec<Observable> = tracked
        .iter()
        .map(|tc| Observable {
            name: tc.name.clone(),
            values: Vec::new(),
        })
        .collect();

    rk4_drive(
        |t, rho: &ComplexMatrix| gen.rhs(t, rho),
        rho0.matrix().clone(),
        grid,
        stride,
        |t, rho| {
            let state = DensityMatrix::from_evolved(rho.clone());
            if opts.check_every > 0 && states.len() % opts.check_every == 0 {
                let p = state.physicality();
                if p.trace_drift > RUN_TRACE_TOL || p.min_eigenvalue < -RUN_POSITIVITY_TOL {
                    return Err(Error::numeric_at(
                        t,
                        format!(
                            "state left the physical set (trace drift {:e}, min eigenvalue {:e})",
                            p.trace_drift, p.min_eigenvalue
                        ),
                    ));
                }
            }
            for (obs, tc) in observables.iter_mut().zip(tracked) {
                obs.values.push(tc.evaluate(t, rho));
            }
            times.push(t);
            states.push(state);
            Ok(())
        },
    )?;

    Ok(Trajectory {
        times,
        states,
        observables,
    })
}

/// Population <psi| rho |psi>, clamped to [0, 1].
pub fn fidelity_pure(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::arg("state dimensions differ"));
    }
    if !psi.is_normalized() {
        return Err(Error::arg("reference state must be normalized"));
    }
    Ok(rho.element(psi, psi).re.clamp(0.0, 1.0))
}

/// Fidelity with the dark state along a static three-level relaxation run.
#[derive(Clone, Debug)]
pub struct SteadyStateReport {
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub final_fidelity: f64,
    pub physicality: Physicality,
}

/// Relaxes `rho0` under the static squeezed reservoir `p` and records the
/// population of the dark state.
pub fn steady_state_report(
    p: &SqueezingParams,
    rho0: &DensityMatrix,
    t_max: f64,
    step: f64,
) -> Result<SteadyStateReport> {
    if rho0.dim() != 3 {
        return Err(Error::arg("relaxation runs use the three-level manifold"));
    }
    let gen = LindbladGenerator::squeezed(
        3,
        vec![SqueezedChannel {
            params: *p,
            channel: 1,
            phi_dot: 0.0,
        }],
    )?;
    let traj = evolve_me(&gen, rho0, 0.0, t_max, EvolveOptions::with_step(step), &[])?;
    let dark = dark_state(p);
    let fidelity = traj
        .states
        .iter()
        .map(|s| fidelity_pure(s, &dark))
        .collect::<Result<Vec<_>>>()?;
    Ok(SteadyStateReport {
        final_fidelity: *fidelity.last().expect("non-empty"),
        physicality: traj.physicality(),
        times: traj.times,
        fidelity,
    })
}
