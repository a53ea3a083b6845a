//! Small dense complex matrices acting on homogeneous coordinates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Homogeneous coordinate vector; `N + 1` entries, inline for `N <= 3`.
pub type Coords = smallvec::SmallVec<[C64; 4]>;

/// A unitary `(N+1) x (N+1)` matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    entries: Vec<C64>,
}

impl Unitary {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// Builds a matrix from rows, checking `U^H U = I` to `1e-10`.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("unitary must be a non-empty square matrix".into()));
        }
        let u = Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        };
        let defect = u.unitarity_defect();
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary (defect {defect:e})"
            )));
        }
        Ok(u)
    }

    /// Complex Householder reflection, rescaled by a phase, mapping the
    /// direction of `v` to `e_0`.
    ///
    /// The image of `v / |v|` is exactly `e_0` (first entry real positive). When
    /// `v` already lies on the `e_0` axis only the phase of the first entry is
    /// corrected, so `[1:0:...:0]` yields the identity.
    pub fn to_first_axis(v: &[C64]) -> Result<Self> {
        let dim = v.len();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        let u: Vec<C64> = v.iter().map(|c| c / norm).collect();
        let tail = u[1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let phase = if u[0].norm() > 0.0 {
            u[0] / u[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut out = Self::identity(dim);
        if tail == 0.0 {
            out.entries[0] = phase.conj();
            return Ok(out);
        }
        // H = I - 2 w w^H / |w|^2 with w = u - alpha e0, alpha = -phase, so H u = alpha e0.
        let alpha = -phase;
        let mut w = u.clone();
        w[0] -= alpha;
        let wn2: f64 = w.iter().map(|c| c.norm_sqr()).sum();
        // U = conj(alpha) H so that U u = e0.
        let s = alpha.conj();
        for i in 0..dim {
            for j in 0..dim {
                let delta = if i == j { 1.0 } else { 0.0 };
                out.entries[i * dim + j] = s * (C64::new(delta, 0.0) - w[i] * w[j].conj() * (2.0 / wn2));
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &[C64]) -> Coords {
        debug_assert_eq!(v.len(), self.dim);
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        Self { dim: n, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        assert_eq!(n, other.dim, "dimension mismatch");
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Self { dim: n, entries }
    }

    /// Max-entry deviation of `U^H U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.entries[i * n + j] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn first_axis_is_identity_on_e0() {
        let u = Unitary::to_first_axis(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(u, Unitary::identity(2));
    }

    #[test]
    fn first_axis_maps_direction_to_e0() {
        let v = [c(0.3, -1.2), c(2.0, 0.5), c(-0.7, 0.1)];
        let u = Unitary::to_first_axis(&v).unwrap();
        assert!(u.unitarity_defect() < 1e-14);
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let img = u.apply(&v);
        assert!((img[0] - c(n, 0.0)).norm() < 1e-13);
        assert!(img[1].norm() < 1e-13 && img[2].norm() < 1e-13);
    }

    #[test]
    fn swap_for_second_axis() {
        let u = Unitary::to_first_axis(&[c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        let img = u.apply(&[c(0.0, 0.0), c(0.0, 1.0)]);
        assert!((img[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(img[1].norm() < 1e-15);
        // e0 goes to the second axis up to phase
        let e0 = u.apply(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(e0[0].norm() < 1e-15 && (e0[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_rows_rejects_non_unitary() {
        let rows = vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(Unitary::from_rows(&rows).is_err());
        let ok = Unitary::to_first_axis(&[c(1.0, 2.0), c(3.0, -1.0)]).unwrap();
        assert_eq!(Unitary::from_rows(&ok.rows()).unwrap(), ok);
    }
}
