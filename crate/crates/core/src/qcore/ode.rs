use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Vector-space operations needed by the RK4 stages.
pub trait OdeState: Clone {
    /// self + h * k
    fn add_scaled(&self, k: &Self, h: f64) -> Self;
    /// self + h/6 (k1 + 2 k2 + 2 k3 + k4)
    fn rk4_update(&self, k: [&Self; 4], h: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl OdeState for Vec<C64> {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        self.iter().zip(k).map(|(y, d)| y + d * h).collect()
    }

    fn rk4_update(&self, [k1, k2, k3, k4]: [&Self; 4], h: f64) -> Self {
        let w = h / 6.0;
        (0..self.len())
            .map(|i| self[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w)
            .collect()
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl OdeState for ComplexMatrix {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        let mut out = k.scale_real(h);
        out += self;
        out
    }

    fn rk4_update(&self, [k1, k2, k3, k4]: [&Self; 4], h: f64) -> Self {
        let w = h / 6.0;
        let (a, b, c, d) = (k1.as_slice(), k2.as_slice(), k3.as_slice(), k4.as_slice());
        let y = self.as_slice();
        ComplexMatrix::from_fn(self.rows(), self.cols(), |i, j| {
            let n = i * self.cols() + j;
            y[n] + (a[n] + (b[n] + c[n]) * 2.0 + d[n]) * w
        })
    }

    fn is_finite(&self) -> bool {
        ComplexMatrix::is_finite(self)
    }
}

/// Sampled solution of an initial-value problem.
#[derive(Clone, Debug)]
pub struct OdeTrajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

/// Number of steps and the time grid for a fixed-step run from `t0` to `t1`.
#[derive(Clone, Copy, Debug)]
pub struct StepGrid {
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    /// Number of full steps of size `step`.
    pub full_steps: usize,
    /// Whether a shortened final step is needed to land on `t1`.
    pub tail: bool,
}

impl StepGrid {
    pub fn new(t0: f64, t1: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::arg(format!("step must be positive and finite, got {step}")));
        }
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::arg(format!("need t1 > t0, got t0 = {t0}, t1 = {t1}")));
        }
        let span = t1 - t0;
        let ratio = span / step;
        let mut full_steps = ratio.floor() as usize;
        let mut tail = true;
        // A remainder below round-off means the grid already lands on t1.
        let rem = span - full_steps as f64 * step;
        if rem <= 1e-12 * span.max(step) {
            tail = false;
        } else if (full_steps + 1) as f64 * step - span <= 1e-12 * span.max(step) {
            full_steps += 1;
            tail = false;
        }
        if full_steps == 0 && !tail {
            tail = true;
        }
        Ok(Self { t0, t1, step, full_steps, tail })
    }

    pub fn total_steps(&self) -> usize {
        self.full_steps + usize::from(self.tail)
    }

    /// Time at the end of step `k` (1-based); the last step ends on `t1`.
    pub fn time_after(&self, k: usize) -> f64 {
        if k >= self.total_steps() {
            self.t1
        } else {
            self.t0 + k as f64 * self.step
        }
    }
}

/// One classical RK4 step.
pub fn rk4_step<S, F>(rhs: &mut F, t: f64, y: &S, h: f64) -> S
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &y.add_scaled(&k1, 0.5 * h));
    let k3 = rhs(t + 0.5 * h, &y.add_scaled(&k2, 0.5 * h));
    let k4 = rhs(t + h, &y.add_scaled(&k3, h));
    y.rk4_update([&k1, &k2, &k3, &k4], h)
}

/// Fixed-step RK4 from `t0` to `t1`, calling `observe` on the initial state,
/// every `stride`-th step and the final state. Stops at the first observer
/// error.
pub fn rk4_drive<S, F, O>(mut rhs: F, y0: S, grid: StepGrid, stride: usize, mut observe: O) -> Result<S>
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
    O: FnMut(f64, &S) -> Result<()>,
{
    let stride = stride.max(1);
    let total = grid.total_steps();
    let mut y = y0;
    observe(grid.t0, &y)?;
    let mut t = grid.t0;
    for k in 1..=total {
        let t_next = grid.time_after(k);
        y = rk4_step(&mut rhs, t, &y, t_next - t);
        t = t_next;
        if !y.is_finite() {
            return Err(Error::numeric_at(t, "non-finite state during integration"));
        }
        if k % stride == 0 || k == total {
            observe(t, &y)?;
        }
    }
    Ok(y)
}

/// Fixed-step classical RK4; the final step is shortened to land exactly on
/// `t1`. Samples are kept at `t0`, every `stride` steps and at `t1`.
pub fn rk4_evolve<S, F>(rhs: F, y0: S, t0: f64, t1: f64, step: f64, stride: usize) -> Result<OdeTrajectory<S>>
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    let grid = StepGrid::new(t0, t1, step)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    rk4_drive(rhs, y0, grid, stride, |t, y| {
        times.push(t);
        states.push(y.clone());
        Ok(())
    })?;
    Ok(OdeTrajectory { times, states })
}

/// Default integration step: min(0.01 / rate_max, span / 1e5).
pub fn default_step(rate_max: f64, span: f64) -> f64 {
    (0.01 / rate_max).min(span / 1e5)
}
