use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use geophase::bath::{
    dark_state, dressed_operator, ladder_operator, make_squeezing, orthogonal_state, LoopSchedule, SqueezingParams,
};
use geophase::fivelevel::{build_k, closure_residual5, default_step5, operator_identities, run_full_loop5_with};
use geophase::fourlevel::{adiabatic_sweep, build_g, default_step, run_full_loop_with, StepRule};
use geophase::geomphase::{analytic_chi, dark_state_loop, discrete_berry_phase, SpinLoop};
use geophase::lindblad::{steady_state_report, EvolveOptions};
use geophase::qcore::{ComplexMatrix, DensityMatrix, StateVector};
use geophase::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{complex_columns, Summary, Table};
use crate::{BerryArgs, FiveLevelArgs, FourLevelArgs, Level, SpinHalfArgs, SteadyArgs, SweepArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<geophase::Error> for CliError {
    fn from(e: geophase::Error) -> Self {
        match e {
            geophase::Error::Argument(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Command line echoed into the summary under `config`.
fn config(command: &str, flags: &[(&str, String)]) -> String {
    let mut s = command.to_string();
    for (k, v) in flags {
        s.push_str(&format!(" --{k} {v}"));
    }
    s
}

fn push_complex(row: &mut Vec<f64>, z: C64) {
    row.push(z.re);
    row.push(z.im);
}

pub fn four_level(a: &FourLevelArgs) -> Result<()> {
    let start = Instant::now();
    let p = make_squeezing(a.r, 0.0, a.gamma)?;
    let sched = LoopSchedule::new(a.phi0, a.phidot, a.loops)?;
    let step = a.step.unwrap_or_else(|| default_step(&p));
    let opts = EvolveOptions {
        step,
        stride: a.output.stride,
        check_every: 1,
    };
    let run = run_full_loop_with(&p, &sched, opts)?;
    let berry = discrete_berry_phase(&dark_state_loop(&p, a.points as usize))?;
    let closure = run.closure_residual()?;

    if let Some(path) = &a.output.csv {
        let mut header = vec!["t".to_string()];
        for name in ["v1", "v2", "p_aux", "v1_reduced", "v2_reduced"] {
            header.extend(complex_columns(name));
        }
        let mut table = Table::new(header);
        let (v1, v2) = run.coherences();
        let aux = run.trajectory.observable(geophase::fourlevel::AUX_POPULATION).expect("tracked");
        for (k, &t) in run.trajectory.times.iter().enumerate() {
            let mut row = vec![t];
            for z in [v1[k], v2[k], aux[k], run.reduced[k][0], run.reduced[k][1]] {
                push_complex(&mut row, z);
            }
            table.push(row);
        }
        table.emit(Some(path))?;
    }

    let mut flags = vec![
        ("r", a.r.to_string()),
        ("gamma", a.gamma.to_string()),
        ("phidot", a.phidot.to_string()),
        ("phi0", a.phi0.to_string()),
        ("loops", a.loops.to_string()),
        ("step", step.to_string()),
        ("points", a.points.to_string()),
    ];
    if let Some(s) = a.output.stride {
        flags.push(("stride", s.to_string()));
    }
    let loops = a.loops as f64;
    let mut s = Summary::default();
    s.number("chi_measured", run.phase.accumulated_phase / loops)
        .number("chi_analytic", analytic_chi(a.r)?)
        .number("chi_berry_integral", berry)
        .number("visibility", run.phase.visibility)
        .number("visibility_predicted", run.phase.prediction_visibility)
        .number("closure_residual", closure)
        .number("runtime_seconds", start.elapsed().as_secs_f64())
        .text("config", config("four-level", &flags));
    s.print();
    Ok(())
}

pub fn five_level(a: &FiveLevelArgs) -> Result<()> {
    let p1 = make_squeezing(a.r1, 0.0, a.gamma1)?;
    let p2 = make_squeezing(a.r2, 0.0, a.gamma2)?;
    let sched = LoopSchedule::new(a.phi0, a.phidot, a.loops)?;
    let step = a.step.unwrap_or_else(|| default_step5(&p1, &p2));
    let opts = EvolveOptions {
        step,
        stride: a.output.stride,
        check_every: 1,
    };
    let run = run_full_loop5_with(&p1, &p2, &sched, opts)?;
    let report = closure_residual5(&run)?;

    if let Some(path) = &a.output.csv {
        let mut header = vec!["t".to_string()];
        for name in ["v1", "v2", "v3", "v4", "v1_reduced"] {
            header.extend(complex_columns(name));
        }
        let mut table = Table::new(header);
        for (k, &t) in run.trajectory.times.iter().enumerate() {
            let mut row = vec![t];
            for j in 0..4 {
                push_complex(&mut row, run.coherence(j)[k]);
            }
            push_complex(&mut row, run.reduced[k][0]);
            table.push(row);
        }
        table.emit(Some(path))?;
    }

    let mut flags = vec![
        ("r1", a.r1.to_string()),
        ("r2", a.r2.to_string()),
        ("gamma1", a.gamma1.to_string()),
        ("gamma2", a.gamma2.to_string()),
        ("phidot", a.phidot.to_string()),
        ("phi0", a.phi0.to_string()),
        ("loops", a.loops.to_string()),
        ("step", step.to_string()),
    ];
    if let Some(s) = a.output.stride {
        flags.push(("stride", s.to_string()));
    }
    let measured = run.phase.accumulated_phase / a.loops as f64;
    let mut s = Summary::default();
    s.number("delta_chi_measured", measured)
        .number("delta_chi_magnitude", measured.abs())
        .number("delta_chi_analytic", analytic_chi(a.r1)? - analytic_chi(a.r2)?)
        .number("polarization_angle", run.polarization_angle)
        .number("visibility", run.phase.visibility)
        .number("closure_residual", report.residual.max(report.worst_identity()))
        .text("config", config("five-level", &flags));
    s.print();
    Ok(())
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let p = make_squeezing(a.r, 0.0, a.gamma)?;
    let rule = a.step.map_or(StepRule::default(), StepRule::Fixed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| CliError::Failure(format!("cannot start worker threads: {e}")))?;
    let rows = pool.install(|| adiabatic_sweep(&p, &a.phidot_list, rule))?;
    let mut table = Table::new(
        ["phidot", "phase_error", "visibility_loss", "predicted_loss"]
            .map(String::from)
            .to_vec(),
    );
    for r in rows {
        table.push(vec![r.phi_dot, r.phase_error, r.visibility_loss, r.predicted_loss]);
    }
    table.emit(a.csv.as_deref())?;
    Ok(())
}

pub fn steady(a: &SteadyArgs) -> Result<()> {
    let p = make_squeezing(a.r, 0.0, a.gamma)?;
    let level = match a.initial {
        Level::Minus => 0,
        Level::Zero => 1,
        Level::Plus => 2,
    };
    let rho0 = DensityMatrix::pure(&StateVector::basis(3, level))?;
    let report = steady_state_report(&p, &rho0, a.tmax, a.step)?;
    let mut table = Table::new(vec!["t".into(), "fidelity".into()]);
    for (t, f) in report.times.iter().zip(&report.fidelity) {
        table.push(vec![*t, *f]);
    }
    table.emit(a.csv.as_deref())?;
    Ok(())
}

pub fn berry(a: &BerryArgs) -> Result<()> {
    let p = make_squeezing(a.r, 0.0, 1.0)?;
    let phase = discrete_berry_phase(&dark_state_loop(&p, a.points as usize))?;
    let mut s = Summary::default();
    s.number("phase", phase).text(
        "config",
        config("berry", &[("r", a.r.to_string()), ("points", a.points.to_string())]),
    );
    s.print();
    Ok(())
}

pub fn spin_half(a: &SpinHalfArgs) -> Result<()> {
    let lp = SpinLoop::new(a.theta, a.points as usize)?;
    let phase = discrete_berry_phase(&lp.up_states())?;
    let mut s = Summary::default();
    s.number("phase", phase).text(
        "config",
        config("spin-half", &[("theta", a.theta.to_string()), ("points", a.points.to_string())]),
    );
    s.print();
    Ok(())
}

fn random_params(rng: &mut ChaCha8Rng) -> Result<SqueezingParams> {
    Ok(make_squeezing(
        rng.gen_range(0.0..3.0),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.1..5.0),
    )?)
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

struct Check {
    name: String,
    tolerance: f64,
    worst: f64,
}

impl Check {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            worst: 0.0,
        }
    }

    fn update(&mut self, residual: f64) {
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut dark = Check::new("R psi_DF = 0", 1e-12);
    let mut perp = Check::new("R^dag R psi_perp = cosh 2r psi_perp", 1e-12);
    let mut conj = Check::new("G1 = -conj G(params1)", 0.0);
    let mut tensor = Check::new("K = 1 (x) G2 + G1 (x) 1", 1e-14);
    let mut five: Vec<Check> = Vec::new();
    let s_op = ladder_operator(3, 1)?;

    for _ in 0..a.draws {
        let p = random_params(&mut rng)?;
        let r = dressed_operator(&p, &s_op);
        dark.update(norm(&r.mul_vec(dark_state(&p).amplitudes())?));
        let psi = orthogonal_state(&p);
        let lhs = r.adjoint().dot(&r).mul_vec(psi.amplitudes())?;
        let ch = (2.0 * p.r()).cosh();
        let diff: Vec<C64> = lhs.iter().zip(psi.amplitudes()).map(|(x, y)| x - y * ch).collect();
        perp.update(norm(&diff));

        let (p1, p2) = (random_params(&mut rng)?, random_params(&mut rng)?);
        let phi_dot = rng.gen_range(1e-4..1e-1);
        let k = build_k(&p1, &p2, phi_dot)?;
        let g = build_g(&p1, phi_dot)?.matrix;
        let conj_diff = k
            .g1
            .as_slice()
            .iter()
            .zip(g.as_slice())
            .map(|(x, y)| (x + y.conj()).norm())
            .fold(0.0, f64::max);
        conj.update(conj_diff);
        let id = ComplexMatrix::identity(2);
        let by_kron = &id.kron(&k.g2) + &k.g1.kron(&id);
        tensor.update((&k.matrix - &by_kron).max_abs());

        for (i, c) in operator_identities(&p1, &p2)?.into_iter().enumerate() {
            if five.len() <= i {
                five.push(Check::new(c.name.clone(), 1e-12));
            }
            five[i].update(c.residual);
        }
    }

    let checks: Vec<Check> = [dark, perp, conj, tensor].into_iter().chain(five).collect();
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(std::io::stdout().lock());
    out.write_record(["identity", "max_residual", "tolerance", "status"])
        .map_err(|e| CliError::Failure(e.to_string()))?;
    for c in &checks {
        out.write_record([
            c.name.clone(),
            crate::output::fmt_float(c.worst),
            crate::output::fmt_float(c.tolerance),
            if c.passed() { "pass" } else { "fail" }.to_string(),
        ])
        .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    out.flush()?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} identity check(s) failed")));
    }
    Ok(())
}
