//! Five-level protocol: two squeezed reservoirs on the channels
//! {|-1>, |0>, |1>} and {|-1'>, |0>, |1'>}. The coherences
//!
//! ```text
//! v = (<psi1|rho|psi2>, <psi1|rho|psi2_perp>, <psi1_perp|rho|psi2>, <psi1_perp|rho|psi2_perp>)
//! ```
//!
//! obey dv/dt = -i K v with the Kronecker sum K = 1 (x) G2 + G1 (x) 1.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::bath::{
    dark_state_dphi, dark_state_in, dressed_operator, ladder_operator, orthogonal_state_dphi, orthogonal_state_in,
    LoopSchedule, SqueezingParams,
};
use crate::error::{Error, Result};
use crate::fourlevel::{build_g, phase_result};
use crate::geomphase::PhaseResult;
use crate::lindblad::{evolve_me, EvolveOptions, LindbladGenerator, SqueezedChannel, TrackedCoherence, Trajectory};
use crate::qcore::{ComplexMatrix, DensityMatrix, Propagator, StateVector};
use crate::C64;

/// Names of the tracked coherences, in the order of v.
pub const V_NAMES: [&str; 4] = ["v1", "v2", "v3", "v4"];

const DIM: usize = 5;

/// The 4x4 generator of the five-level coherences.
#[derive(Clone, Debug)]
pub struct ReducedSystemK {
    pub matrix: ComplexMatrix,
    pub params1: SqueezingParams,
    pub params2: SqueezingParams,
    pub phi_dot: f64,
    /// Bra-side block, -conj(G(params1)).
    pub g1: ComplexMatrix,
    /// Ket-side block, G(params2).
    pub g2: ComplexMatrix,
}

/// K = 1 (x) G2 + G1 (x) 1.
pub fn build_k(p1: &SqueezingParams, p2: &SqueezingParams, phi_dot: f64) -> Result<ReducedSystemK> {
    let g1 = build_g(p1, phi_dot)?.matrix.conj().scale_real(-1.0);
    let g2 = build_g(p2, phi_dot)?.matrix;
    let id = ComplexMatrix::identity(2);
    let matrix = &id.kron(&g2) + &g1.kron(&id);
    Ok(ReducedSystemK {
        matrix,
        params1: *p1,
        params2: *p2,
        phi_dot,
        g1,
        g2,
    })
}

/// K written out entry by entry, as phi_dot times a matrix whose damping
/// terms are gamma_tilde / (2 phi_dot). The (3,3) damping uses gamma_tilde_1.
pub fn explicit_k_matrix(p1: &SqueezingParams, p2: &SqueezingParams, phi_dot: f64) -> Result<ComplexMatrix> {
    if !(phi_dot > 0.0) || !phi_dot.is_finite() {
        return Err(Error::arg(format!("phase velocity must be positive, got {phi_dot}")));
    }
    let (s1, c1, s2, c2) = (p1.s(), p1.c(), p2.s(), p2.c());
    let (g1, g2) = (p1.gamma_tilde(), p2.gamma_tilde());
    let re = |x: f64| C64::new(x, 0.0);
    let z = re(0.0);
    let damp = |x: f64, g: f64| C64::new(x, -g / (2.0 * phi_dot));
    let m = ComplexMatrix::from_rows(&[
        vec![re(s1 * s1 - s2 * s2), re(s2 * c2), re(-s1 * c1), z],
        vec![re(s2 * c2), damp(s1 * s1 - c2 * c2, g2), z, re(-s1 * c1)],
        vec![re(-s1 * c1), z, damp(c1 * c1 - s2 * s2, g1), re(s2 * c2)],
        vec![z, re(-s1 * c1), re(s2 * c2), damp(c1 * c1 - c2 * c2, g1 + g2)],
    ])?;
    Ok(m.scale_real(phi_dot))
}

/// Orientation of the linear polarization carried by |R> + e^{i delta}|L>,
/// with |R> = (|H> + i|V>)/sqrt 2 and |L> = (|H> - i|V>)/sqrt 2, in [0, pi).
/// Equals delta / 2 reduced modulo pi.
pub fn polarization_readout(delta: f64) -> f64 {
    let e = C64::from_polar(1.0, delta);
    let i = C64::new(0.0, 1.0);
    // Jones vector components.
    let h = (C64::new(1.0, 0.0) + e) * FRAC_1_SQRT_2;
    let v = (i - i * e) * FRAC_1_SQRT_2;
    let s1 = h.norm_sqr() - v.norm_sqr();
    let s2 = 2.0 * (h.conj() * v).re;
    let angle = 0.5 * s2.atan2(s1);
    let angle = angle.rem_euclid(PI);
    if angle >= PI - 1e-15 {
        0.0
    } else {
        angle
    }
}

/// Default integration step 1e-2 / max(gamma_tilde_1, gamma_tilde_2).
pub fn default_step5(p1: &SqueezingParams, p2: &SqueezingParams) -> f64 {
    1e-2 / p1.gamma_tilde().max(p2.gamma_tilde())
}

/// A completed five-level loop.
#[derive(Clone)]
pub struct FiveLevelRun {
    pub params1: SqueezingParams,
    pub params2: SqueezingParams,
    pub schedule: LoopSchedule,
    pub step: f64,
    pub k: ReducedSystemK,
    pub trajectory: Trajectory,
    /// Phase record of <psi1|rho|psi2>.
    pub phase: PhaseResult,
    /// exp(-i K t) v(0) at each sample time.
    pub reduced: Vec<[C64; 4]>,
    /// Polarization angle for the relative phase -geometric_phase of psi2
    /// against psi1.
    pub polarization_angle: f64,
    generator: LindbladGenerator,
}

impl FiveLevelRun {
    pub fn coherence(&self, k: usize) -> &[C64] {
        self.trajectory.observable(V_NAMES[k]).expect("tracked")
    }

    /// Largest componentwise |v_full - v_reduced| over the samples.
    pub fn max_reduced_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..4 {
            for (full, red) in self.coherence(k).iter().zip(&self.reduced) {
                worst = worst.max((full - red[k]).norm());
            }
        }
        worst
    }
}

/// Outcome of one operator identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
}

/// Dynamic closure residual of a run plus the operator identities that make
/// the reduced system exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    /// Largest |dv/dt + i K v| over the samples.
    pub residual: f64,
    pub identities: Vec<IdentityCheck>,
}

impl ClosureReport {
    pub fn worst_identity(&self) -> f64 {
        self.identities.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

struct Channels {
    p: [SqueezingParams; 2],
}

impl Channels {
    fn at(&self, t: f64, phi_dots: [f64; 2]) -> [SqueezingParams; 2] {
        [0, 1].map(|i| self.p[i].with_phi(self.p[i].phi() + phi_dots[i] * t))
    }
}

fn dark(p: &SqueezingParams, ch: u8) -> StateVector {
    dark_state_in(p, DIM, ch).expect("valid channel")
}

fn perp(p: &SqueezingParams, ch: u8) -> StateVector {
    orthogonal_state_in(p, DIM, ch).expect("valid channel")
}

/// Bra and ket of each v component at the given channel parameters.
fn v_basis(p: &[SqueezingParams; 2]) -> [(StateVector, StateVector); 4] {
    let (b, bp) = (dark(&p[0], 1), perp(&p[0], 1));
    let (k, kp) = (dark(&p[1], 2), perp(&p[1], 2));
    [
        (b.clone(), k.clone()),
        (b, kp.clone()),
        (bp.clone(), k),
        (bp, kp),
    ]
}

fn v_basis_dphi(p: &[SqueezingParams; 2]) -> Result<[(StateVector, StateVector); 4]> {
    let (b, bp) = (dark_state_dphi(&p[0], DIM, 1)?, orthogonal_state_dphi(&p[0], DIM, 1)?);
    let (k, kp) = (dark_state_dphi(&p[1], DIM, 2)?, orthogonal_state_dphi(&p[1], DIM, 2)?);
    Ok([(b.clone(), k.clone()), (b, kp.clone()), (bp.clone(), k), (bp, kp)])
}

/// Integrates the five-level master equation from
/// (psi1(phi1_0) + psi2(phi2_0)) / sqrt 2 with independent phase schedules
/// for the two reservoirs, over the duration of `sched1`. Channel i has
/// squeezing phase `p_i.phi() + sched_i.phi0() + phi_dot_i t`.
pub fn evolve_five_level(
    p1: &SqueezingParams,
    sched1: &LoopSchedule,
    p2: &SqueezingParams,
    sched2: &LoopSchedule,
    opts: EvolveOptions,
) -> Result<(LindbladGenerator, Trajectory)> {
    let base = [p1.with_phi(p1.phi() + sched1.phi0()), p2.with_phi(p2.phi() + sched2.phi0())];
    let phi_dots = [sched1.phi_dot(), sched2.phi_dot()];
    let generator = LindbladGenerator::squeezed(
        DIM,
        vec![
            SqueezedChannel {
                params: base[0],
                channel: 1,
                phi_dot: phi_dots[0],
            },
            SqueezedChannel {
                params: base[1],
                channel: 2,
                phi_dot: phi_dots[1],
            },
        ],
    )?;
    let psi0 = dark(&base[0], 1).add(&dark(&base[1], 2)).scaled(C64::new(FRAC_1_SQRT_2, 0.0));
    let rho0 = DensityMatrix::pure(&psi0)?;

    let tracked: Vec<TrackedCoherence> = (0..4)
        .map(|k| {
            let bra_ch = Channels { p: base };
            let ket_ch = Channels { p: base };
            TrackedCoherence::new(
                V_NAMES[k],
                move |t| v_basis(&bra_ch.at(t, phi_dots))[k].0.clone(),
                move |t| v_basis(&ket_ch.at(t, phi_dots))[k].1.clone(),
            )
        })
        .collect();

    let trajectory = evolve_me(&generator, &rho0, 0.0, sched1.duration(), opts, &tracked)?;
    Ok((generator, trajectory))
}

/// Runs both reservoirs on the common schedule `sched` and compares with the
/// reduced 4x4 system.
pub fn run_full_loop5(p1: &SqueezingParams, p2: &SqueezingParams, sched: &LoopSchedule, step: f64) -> Result<FiveLevelRun> {
    run_full_loop5_with(p1, p2, sched, EvolveOptions::with_step(step))
}

/// As [`run_full_loop5`] with explicit integration options.
pub fn run_full_loop5_with(
    p1: &SqueezingParams,
    p2: &SqueezingParams,
    sched: &LoopSchedule,
    opts: EvolveOptions,
) -> Result<FiveLevelRun> {
    let k = build_k(p1, p2, sched.phi_dot())?;
    let (generator, trajectory) = evolve_five_level(p1, sched, p2, sched, opts)?;

    let v0: Vec<C64> = V_NAMES
        .iter()
        .map(|n| trajectory.observable(n).expect("tracked")[0])
        .collect();
    let prop = Propagator::new(&k.matrix)?;
    let reduced = trajectory
        .times
        .iter()
        .map(|&t| {
            let v = if t == 0.0 { v0.clone() } else { prop.apply(t, &v0)? };
            Ok([v[0], v[1], v[2], v[3]])
        })
        .collect::<Result<Vec<_>>>()?;
    let v1 = trajectory.observable(V_NAMES[0]).expect("tracked");
    let phase = phase_result(v1, reduced.last().expect("non-empty")[0])?;

    Ok(FiveLevelRun {
        params1: *p1,
        params2: *p2,
        schedule: *sched,
        step: opts.step,
        k,
        trajectory,
        polarization_angle: polarization_readout(-phase.geometric_phase),
        phase,
        reduced,
        generator,
    })
}

/// Closure of the reduced system along a run, together with
/// [`operator_identities`] at the run's parameters.
pub fn closure_residual5(run: &FiveLevelRun) -> Result<ClosureReport> {
    let sched = &run.schedule;
    let base = Channels {
        p: [
            run.params1.with_phi(run.params1.phi() + sched.phi0()),
            run.params2.with_phi(run.params2.phi() + sched.phi0()),
        ],
    };
    let phi_dot = sched.phi_dot();
    let mut residual: f64 = 0.0;
    for (&t, state) in run.trajectory.times.iter().zip(&run.trajectory.states) {
        let p = base.at(t, [phi_dot; 2]);
        let rho = state.matrix();
        let drho = run.generator.rhs(t, rho);
        let basis = v_basis(&p);
        let dbasis = v_basis_dphi(&p)?;
        let v: Vec<C64> = basis.iter().map(|(b, k)| rho.sandwich(b.amplitudes(), k.amplitudes())).collect();
        let kv = run.k.matrix.mul_vec(&v)?;
        for (i, ((b, k), (db, dk))) in basis.iter().zip(&dbasis).enumerate() {
            let dv = drho.sandwich(b.amplitudes(), k.amplitudes())
                + (rho.sandwich(db.amplitudes(), k.amplitudes()) + rho.sandwich(b.amplitudes(), dk.amplitudes())) * phi_dot;
            residual = residual.max((dv + C64::new(0.0, 1.0) * kv[i]).norm());
        }
    }
    Ok(ClosureReport {
        residual,
        identities: operator_identities(&base.p[0], &base.p[1])?,
    })
}

/// Residuals of the identities used to close the five-level system:
/// R_i psi_i = 0, R_i psi_j = R_i psi_j_perp = 0, R_i^dag psi_j = R_i^dag
/// psi_j_perp = 0 for i != j, and R_i^dag R_i psi_i_perp = cosh 2r_i psi_i_perp.
pub fn operator_identities(p1: &SqueezingParams, p2: &SqueezingParams) -> Result<Vec<IdentityCheck>> {
    let p = [*p1, *p2];
    let r: Vec<ComplexMatrix> = (0..2)
        .map(|i| Ok(dressed_operator(&p[i], &ladder_operator(DIM, i as u8 + 1)?)))
        .collect::<Result<_>>()?;
    let rd: Vec<ComplexMatrix> = r.iter().map(ComplexMatrix::adjoint).collect();
    let psi = [dark(&p[0], 1), dark(&p[1], 2)];
    let perp_ = [perp(&p[0], 1), perp(&p[1], 2)];
    let norm = |v: Vec<C64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut out = Vec::new();
    for i in 0..2 {
        let j = 1 - i;
        let (a, b) = (i + 1, j + 1);
        let mut push = |name: String, op: &ComplexMatrix, v: &StateVector| -> Result<()> {
            out.push(IdentityCheck {
                name,
                residual: norm(op.mul_vec(v.amplitudes())?),
            });
            Ok(())
        };
        push(format!("R{a} psi{a}"), &r[i], &psi[i])?;
        push(format!("R{a} psi{b}"), &r[i], &psi[j])?;
        push(format!("R{a} psi{b}_perp"), &r[i], &perp_[j])?;
        push(format!("R{a}^dag psi{b}"), &rd[i], &psi[j])?;
        push(format!("R{a}^dag psi{b}_perp"), &rd[i], &perp_[j])?;
        let rr = rd[i].dot(&r[i]);
        let lhs = rr.mul_vec(perp_[i].amplitudes())?;
        let ch = (2.0 * p[i].r()).cosh();
        let diff: Vec<C64> = lhs.iter().zip(perp_[i].amplitudes()).map(|(x, y)| x - y * ch).collect();
        out.push(IdentityCheck {
            name: format!("R{a}^dag R{a} psi{a}_perp - cosh 2r{a} psi{a}_perp"),
            residual: norm(diff) / ch,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::make_squeezing;
    use crate::qcore::eig_small;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(rng: &mut ChaCha8Rng) -> SqueezingParams {
        make_squeezing(rng.gen_range(0.0..3.0), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.1..5.0)).unwrap()
    }

    /// K assembled index by index: K[(a b),(c d)] = d_ac G2[b][d] + G1[a][c] d_bd.
    fn kron_sum_by_index(g1: &ComplexMatrix, g2: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |row, col| {
            let (a, b, c, d) = (row / 2, row % 2, col / 2, col % 2);
            let mut x = C64::new(0.0, 0.0);
            if a == c {
                x += g2[(b, d)];
            }
            if b == d {
                x += g1[(a, c)];
            }
            x
        })
    }

    #[test]
    fn tensor_structure_over_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
            let phi_dot = rng.gen_range(1e-4..1e-1);
            let k = build_k(&p1, &p2, phi_dot).unwrap();
            let g1 = build_g(&p1, phi_dot).unwrap().matrix;
            for (x, y) in k.g1.as_slice().iter().zip(g1.as_slice()) {
                assert_eq!(*x, -y.conj());
            }
            let by_index = kron_sum_by_index(&k.g1, &k.g2);
            assert!((&k.matrix - &by_index).max_abs() <= 1e-14);
            let explicit = explicit_k_matrix(&p1, &p2, phi_dot).unwrap();
            for (x, y) in k.matrix.as_slice().iter().zip(explicit.as_slice()) {
                assert!((x - y).norm() <= 1e-14 * y.norm().max(1.0));
            }
        }
    }

    #[test]
    fn k_first_entry() {
        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        assert_eq!(build_k(&p, &p, 1e-3).unwrap().matrix[(0, 0)], C64::new(0.0, 0.0));
        let p2 = make_squeezing(0.5, 0.0, 1.0).unwrap();
        let k11 = build_k(&p, &p2, 1e-3).unwrap().matrix[(0, 0)];
        let oracle = 1e-3 * (1.0f64.sinh().powi(2) / 2.0f64.cosh() - 0.5f64.sinh().powi(2) / 1.0f64.cosh());
        assert!((k11.re - oracle).abs() < 1e-18 && k11.im == 0.0);
        assert!((k11.re - 1.911260e-4).abs() < 1e-9);
    }

    #[test]
    fn damping_diagonal() {
        let (p1, p2) = (make_squeezing(0.7, 0.0, 1.3).unwrap(), make_squeezing(0.2, 0.0, 0.6).unwrap());
        let k = build_k(&p1, &p2, 1e-2).unwrap();
        let (g1, g2) = (p1.gamma_tilde(), p2.gamma_tilde());
        let expected = [0.0, -g2 / 2.0, -g1 / 2.0, -(g1 + g2) / 2.0];
        for (i, e) in expected.iter().enumerate() {
            assert!((k.matrix[(i, i)].im - e).abs() < 1e-15);
        }
    }

    #[test]
    fn spectrum_is_pairwise_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..20 {
            let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
            let k = build_k(&p1, &p2, rng.gen_range(1e-3..1e-1)).unwrap();
            let l1 = eig_small(&k.g1).unwrap().values;
            let l2 = eig_small(&k.g2).unwrap().values;
            let mut sums: Vec<C64> = l1.iter().flat_map(|a| l2.iter().map(move |b| a + b)).collect();
            for lk in eig_small(&k.matrix).unwrap().values {
                let (idx, dist) = sums
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (i, (s - lk).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                assert!(dist <= 1e-10, "eigenvalue {lk} unmatched ({dist:e})");
                sums.remove(idx);
            }
        }
    }

    #[test]
    fn polarization_angles() {
        assert_eq!(polarization_readout(0.0), 0.0);
        assert!((polarization_readout(PI) - PI / 2.0).abs() < 1e-15);
        assert!((polarization_readout(1.20088) - 0.60044).abs() < 1e-15);
        assert!((polarization_readout(2.0 * PI) - 0.0).abs() < 1e-15);
        assert!((polarization_readout(-1.0) - (PI - 0.5)).abs() < 1e-14);
    }

    #[test]
    fn identities_hold_for_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..100 {
            let checks = operator_identities(&random_params(&mut rng), &random_params(&mut rng)).unwrap();
            assert_eq!(checks.len(), 12);
            for c in checks {
                assert!(c.residual <= 1e-12, "{}: {:e}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn identical_channels_give_no_phase() {
        let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
        let run = run_full_loop5(&p, &p, &LoopSchedule::new(0.0, 2e-2, 1).unwrap(), 1e-2).unwrap();
        assert!(run.phase.geometric_phase.abs() <= 1e-6);
        assert!(run.polarization_angle.abs() <= 1e-6 || (run.polarization_angle - PI).abs() <= 1e-6);
    }

    #[test]
    fn full_and_reduced_agree() {
        let (p1, p2) = (make_squeezing(1.0, 0.0, 1.0).unwrap(), make_squeezing(0.5, 0.0, 1.0).unwrap());
        let run = run_full_loop5(&p1, &p2, &LoopSchedule::new(0.4, 2e-2, 1).unwrap(), 1e-2).unwrap();
        assert!(run.max_reduced_deviation() <= 1e-6, "{:e}", run.max_reduced_deviation());
        let report = closure_residual5(&run).unwrap();
        assert!(report.residual <= 1e-8, "{:e}", report.residual);
        assert!(report.worst_identity() <= 1e-12);
        assert!((run.coherence(0)[0] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((run.phase.geometric_phase - run.phase.prediction_phase).abs() <= 1e-6);
        assert!(run.phase.geometric_phase < 0.0);
    }

    #[test]
    fn loss_is_additive_over_channels() {
        let (p1, p2) = (make_squeezing(1.0, 0.0, 1.0).unwrap(), make_squeezing(0.5, 0.0, 1.0).unwrap());
        let phi_dot = 1e-2;
        let t = 2.0 * PI / phi_dot;
        let loss4 = |p: &SqueezingParams| {
            let g = build_g(p, phi_dot).unwrap();
            1.0 - crate::fourlevel::reduced_solve(&g, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], t).unwrap()[0].norm()
        };
        let k = build_k(&p1, &p2, phi_dot).unwrap();
        let v0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let loss5 = 1.0 - Propagator::new(&k.matrix).unwrap().apply(t, &v0).unwrap()[0].norm();
        let sum = loss4(&p1) + loss4(&p2);
        assert!((loss5 - sum).abs() <= 0.05 * sum, "{loss5} vs {sum}");
    }

    #[test]
    fn independent_schedules_reduce_to_common_run() {
        let (p1, p2) = (make_squeezing(0.6, 0.0, 1.0).unwrap(), make_squeezing(0.3, 0.0, 1.0).unwrap());
        let sched = LoopSchedule::new(0.0, 5e-2, 1).unwrap();
        let run = run_full_loop5(&p1, &p2, &sched, 1e-2).unwrap();
        let (_, traj) = evolve_five_level(&p1, &sched, &p2, &sched, EvolveOptions::with_step(1e-2)).unwrap();
        assert_eq!(traj.observable("v1").unwrap(), run.coherence(0));

        let other = LoopSchedule::new(0.0, 1e-1, 1).unwrap();
        let (_, traj) = evolve_five_level(&p1, &sched, &p2, &other, EvolveOptions::with_step(1e-2)).unwrap();
        assert!(traj.physicality().within(1e-9, 1e-10, 1e-9));
    }

    proptest! {
        #[test]
        fn angle_is_half_delta(delta in -10.0..10.0f64) {
            let angle = polarization_readout(delta);
            prop_assert!((0.0..PI).contains(&angle));
            let diff = (angle - delta / 2.0).rem_euclid(PI);
            prop_assert!(diff.min(PI - diff) <= 1e-12);
        }
    }
}
