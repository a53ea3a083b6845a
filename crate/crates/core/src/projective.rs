//! Points of `CP^N` and the Fubini-Study distance.
//!
//! The metric is normalised so that a projective line has area one, which is
//! the normalisation under which the spherical derivative equals the
//! dilatation of the curve. With that choice the geodesic distance between
//! the classes of unit vectors `u`, `v` is `arccos(|<u, v>|) / sqrt(pi)` and
//! the diameter is `sqrt(pi) / 2`.

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::linalg::Coords;
use crate::{Error, Result, C64, SQRT_PI};

/// A point of `CP^N`, stored as a unit homogeneous vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: Coords,
}

impl ProjectivePoint {
    pub fn new(coords: &[C64]) -> Result<Self> {
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if coords.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("projective point needs a nonzero finite vector".into()));
        }
        Ok(Self {
            coords: coords.iter().map(|c| c / norm).collect(),
        })
    }

    /// The point `[1 : w_1 : ... : w_N]`.
    pub fn from_affine(w: &[C64]) -> Self {
        let mut v = Coords::with_capacity(w.len() + 1);
        v.push(C64::new(1.0, 0.0));
        v.extend_from_slice(w);
        Self::new(&v).expect("affine point is never zero")
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Fubini-Study distance between two points.
pub fn fs_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    unit_distance(p.coords(), q.coords())
}

/// Distance between the classes of two arbitrary nonzero lifts.
pub fn lift_distance(a: &[C64], b: &[C64]) -> f64 {
    unit_distance(a, b)
}

// atan2 of |a ∧ b| and |<a, b>|, which is scale-free, exact for equal
// inputs, and keeps full accuracy for nearby points.
fn unit_distance(u: &[C64], v: &[C64]) -> f64 {
    let inner: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let mut wedge2 = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            wedge2 += (u[i] * v[j] - u[j] * v[i]).norm_sqr();
        }
    }
    wedge2.sqrt().atan2(inner.norm()) / SQRT_PI
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_and_antipodes() {
        let p = ProjectivePoint::new(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let q = ProjectivePoint::new(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(fs_distance(&p, &p), 0.0);
        assert!((fs_distance(&p, &q) - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn scale_invariance() {
        let a = [c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 3.0)];
        let b = [c(0.2, 0.0), c(1.0, 1.0), c(-2.0, 0.5)];
        let lambda = c(-3.0, 0.7);
        let a2: Coords = a.iter().map(|x| x * lambda).collect();
        assert!((lift_distance(&a, &b) - lift_distance(&a2, &b)).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero() {
        assert!(ProjectivePoint::new(&[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(ProjectivePoint::new(&[]).is_err());
    }
}
