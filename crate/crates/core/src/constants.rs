//! The elliptic energy constant `2π / (√3 I²)` with `I = ∫₁^∞ dx/√(x³-1)`.
//!
//! The integral is split at `x = 2`. On `[1, 2]` the substitution
//! `x = 1 + t²` removes the endpoint singularity; on `[2, ∞)` the substitution
//! `x = 2/u²` maps the tail to a smooth integrand on `[0, 1]`.

use core::f64::consts::PI;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::quadrature::{integrate_1d, QuadOptions};
use crate::Result;

/// Published digits of the constant.
pub const REFERENCE_VALUE: f64 = 0.615_019_867_819_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantReport {
    pub value: f64,
    pub integral: f64,
    /// Propagated from the quadrature error of `I`.
    pub error_estimate: f64,
    /// Recomputed with every piece bisected once more.
    pub refined_value: f64,
}

fn near(t: f64) -> f64 {
    let s = 1.0 + t * t;
    2.0 / (s * s + s + 1.0).sqrt()
}

fn tail(u: f64) -> f64 {
    4.0 / (8.0 - u.powi(6)).sqrt()
}

fn integral(opts: &QuadOptions, pieces: usize) -> Result<(f64, f64)> {
    let (mut v, mut e) = (0.0, 0.0);
    for k in 0..pieces {
        let (a, b) = (k as f64 / pieces as f64, (k + 1) as f64 / pieces as f64);
        let (v1, e1) = integrate_1d(near, a, b, opts)?;
        let (v2, e2) = integrate_1d(tail, a, b, opts)?;
        v += v1 + v2;
        e += e1 + e2;
    }
    Ok((v, e))
}

fn from_integral(i: f64) -> f64 {
    2.0 * PI / (3f64.sqrt() * i * i)
}

pub fn elliptic_constant(opts: &QuadOptions) -> Result<ConstantReport> {
    let (i, err) = integral(opts, 1)?;
    let (i2, _) = integral(opts, 2)?;
    let value = from_integral(i);
    Ok(ConstantReport {
        value,
        integral: i,
        // d/dI of 2π/(√3 I²) is -2·value/I.
        error_estimate: 2.0 * value / i * err,
        refined_value: from_integral(i2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_digits() {
        let r = elliptic_constant(&QuadOptions::default()).unwrap();
        assert!((r.value - REFERENCE_VALUE).abs() < 1e-9, "{}", r.value);
        assert!((r.value - r.refined_value).abs() < 1e-11);
    }

    #[test]
    fn integral_against_beta_function() {
        // x = s^(-1/3) gives I = B(1/6, 1/2)/3 = Γ(1/6)√π/(3Γ(2/3)).
        let gamma_two_thirds = 1.354_117_939_426_400_4;
        let gamma_sixth = 5.566_316_001_780_235;
        let exact = gamma_sixth * PI.sqrt() / (3.0 * gamma_two_thirds);
        let r = elliptic_constant(&QuadOptions::default()).unwrap();
        assert!((r.integral - exact).abs() < 1e-13, "{} {}", r.integral, exact);
    }
}
