use alloc::string::String;

use crate::C64;

/// Errors produced by curve evaluation and the numerical procedures built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("lift undefined at z = {0}: every homogeneous component vanishes")]
    LiftUndefined(C64),
    #[error("z = {0} is a lattice point")]
    PoleAt(C64),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("curve is degenerate on the window (sup of |df| is zero)")]
    DegenerateCurve,
    #[error("quadrature did not converge: discrepancy {discrepancy:e} at depth {depth}")]
    QuadratureNonConvergent { depth: u32, discrepancy: f64 },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("curve is not periodic for the lattice (residual {0:e})")]
    NotPeriodic(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("constants infeasible: {0}")]
    Infeasible(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
}

pub type Result<T> = core::result::Result<T, Error>;
