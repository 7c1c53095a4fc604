use std::f64::consts::PI;

use geophase::bath::{make_squeezing, LoopSchedule};
use geophase::fivelevel::{closure_residual5, run_full_loop5};
use geophase::fourlevel::{adiabatic_sweep, default_step, run_full_loop, StepRule};
use geophase::geomphase::{analytic_chi, dark_state_loop, discrete_berry_phase};

#[test]
fn measured_phase_tracks_closed_form() {
    for (r, gamma, phi_dot) in [(1.0, 10.0, 5e-2), (0.5, 4.0, 2e-2)] {
        let p = make_squeezing(r, 0.0, gamma).unwrap();
        let run = run_full_loop(&p, &LoopSchedule::new(0.0, phi_dot, 1).unwrap(), default_step(&p)).unwrap();
        let ratio = phi_dot / p.gamma_tilde();
        let bound = (10.0 * ratio * ratio).max(1e-6) + 1e-7;
        let diff = (run.phase.geometric_phase - analytic_chi(r).unwrap()).abs();
        assert!(diff <= bound, "r = {r}: {diff:e} > {bound:e}");
    }
}

#[test]
fn berry_phase_is_minus_coherence_phase() {
    let p = make_squeezing(0.7, 0.0, 1.0).unwrap();
    let run = run_full_loop(&p, &LoopSchedule::new(0.0, 1e-2, 1).unwrap(), 1e-2).unwrap();
    let berry = discrete_berry_phase(&dark_state_loop(&p, 2000)).unwrap();
    assert!((berry + run.phase.geometric_phase).abs() <= 1e-3);
}

#[test]
fn sweep_loss_is_linear_in_drive() {
    let p = make_squeezing(1.0, 0.0, 1.0).unwrap();
    let rows = adiabatic_sweep(&p, &[1e-2, 2e-2], StepRule::Fixed(1e-2)).unwrap();
    let ratio = rows[1].visibility_loss / rows[0].visibility_loss;
    assert!((1.9..=2.1).contains(&ratio), "ratio {ratio}");
    for row in &rows {
        assert!(row.phase_error.abs() <= 1e-6);
        assert!((row.visibility_loss - row.predicted_loss).abs() <= 1e-6);
    }
    // First-order estimate 4 pi (phi_dot / gamma_tilde) s^2 c^2.
    let first_order = 4.0 * PI * 1e-2 / p.gamma_tilde() * (p.s() * p.c()).powi(2);
    assert!((rows[0].visibility_loss - first_order).abs() <= 0.02 * first_order);
}

#[test]
fn five_level_phase_is_difference_of_single_channel_phases() {
    let (p1, p2) = (make_squeezing(0.9, 0.0, 2.0).unwrap(), make_squeezing(0.3, 0.0, 2.0).unwrap());
    let run = run_full_loop5(&p1, &p2, &LoopSchedule::new(0.0, 1e-2, 1).unwrap(), 1e-2).unwrap();
    let expected = analytic_chi(0.9).unwrap() - analytic_chi(0.3).unwrap();
    assert!((run.phase.geometric_phase + expected).abs() <= 1e-3);
    let report = closure_residual5(&run).unwrap();
    assert!(report.residual <= 1e-8 && report.worst_identity() <= 1e-12);
    assert!(run.trajectory.physicality().within(1e-9, 1e-10, 1e-9));
}

#[test]
fn base_phases_do_not_change_the_difference() {
    let (p1, p2) = (make_squeezing(1.0, 0.0, 1.0).unwrap(), make_squeezing(0.5, 1.1, 1.0).unwrap());
    let a = run_full_loop5(&p1, &p2, &LoopSchedule::new(0.0, 2e-2, 1).unwrap(), 1e-2).unwrap();
    let b = run_full_loop5(&p1.with_phi(2.0), &p2, &LoopSchedule::new(0.7, 2e-2, 1).unwrap(), 1e-2).unwrap();
    assert!((a.phase.geometric_phase - b.phase.geometric_phase).abs() <= 1e-6);
}
