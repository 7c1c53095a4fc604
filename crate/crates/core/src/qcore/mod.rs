//! Small dense complex linear algebra and deterministic ODE integration.

pub mod eig;
pub mod expm;
pub mod matrix;
pub mod ode;
pub mod state;

pub use eig::{eig_small, eig_small_with, hermitian_eigenvalues, singular_values, Eigen};
pub use expm::{expm, matrix_exp_action, Propagator};
pub use matrix::{adjoint, matmul, ComplexMatrix, Operator};
pub use ode::{rk4_drive, rk4_evolve, OdeState, OdeTrajectory, StepGrid};
pub use state::{DensityMatrix, Physicality, StateVector};
