//! Numerical toolkit for holomorphic curves `C -> CP^N`.
//!
//! The crate evaluates spherical derivatives through chart-free homogeneous
//! lifts, integrates energy densities, estimates Nevanlinna characteristics,
//! profiles Yosida non-degeneracy, and runs the rational-bump gluing
//! construction together with checks of every bound it relies on.
//!
//! Everything here is `no_std` + `alloc`. The `parallel` feature (on by
//! default) evaluates independent grid rows and quadrature tiles on the rayon
//! pool; reductions always happen in a fixed order so results do not depend on
//! the number of threads.
#![no_std]

extern crate alloc;

pub mod constants;
pub mod curve;
pub mod dynmetrics;
pub mod elliptic;
pub mod energy;
mod error;
pub mod exec;
pub mod gluing;
pub mod linalg;
pub mod nondegeneracy;
pub mod poly;
pub mod projective;
pub mod quadrature;
pub mod region;
pub mod search;

pub use num_complex::Complex64 as C64;

pub use curve::{CurveMap, Lift};
pub use error::{Error, Result};
pub use projective::{fs_distance, ProjectivePoint};
pub use region::Region;

/// `sqrt(pi)`, the normalisation of the Fubini-Study metric with total area one on lines.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;
