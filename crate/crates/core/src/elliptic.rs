//! Weierstrass `℘` and `℘'` on arbitrary lattices, and Brody rescaling.
//!
//! A [`Lattice`] is given by half-periods `ω₁, ω₂` (periods `2ω₁, 2ω₂`). At
//! construction the period basis is Gauss-reduced, the invariants `g₂, g₃` are
//! computed from the q-expansions of `E₄`, `E₆` at the reduced `τ`
//! (`|q| <= e^{-π√3}`), and the Laurent coefficients of `℘` at the origin are
//! generated by the usual recurrence.
//!
//! Evaluation reduces `z` to the nearest lattice point `λ` and sums the Laurent
//! series in `u = z - λ`. When `|u|` exceeds `0.6` times the shortest period
//! the argument is halved until it fits and the duplication formulas are
//! applied on the way back.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::curve::CurveMap;
use crate::region::Region;
use crate::search::sup_spherical_derivative;
use crate::{Error, Result, C64};

/// Laurent terms kept beyond the principal part.
const LAURENT_TERMS: usize = 60;
/// Largest normalized `|u|` summed directly.
const LAURENT_RADIUS: f64 = 0.6;
/// Points closer than this to a lattice point are reported as poles.
pub const POLE_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    omega1: C64,
    omega2: C64,
    // Gauss-reduced periods, |b1| <= |b2|, Im(b2/b1) > 0.
    b1: C64,
    b2: C64,
    g2: C64,
    g3: C64,
    // |b1|, the normalization length for the series.
    scale: f64,
    // g2, g3 in units of `scale`.
    g2n: C64,
    g3n: C64,
    // Normalized Laurent coefficients c_k for k = 2 ..= LAURENT_TERMS + 1.
    coeffs: Vec<C64>,
}

/// `℘` near a lattice point, as regular parts `h, h', h''` of
/// `℘(u) = u^{-2} + h(u)`, or far from every lattice point as plain values
/// `℘, ℘', ℘''`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum WpParts {
    Near { u: C64, h: C64, h1: C64, h2: C64 },
    Far { p: C64, p1: C64, p2: C64 },
}

impl Lattice {
    pub fn new(omega1: C64, omega2: C64) -> Result<Self> {
        if omega1.norm() == 0.0 || !(omega1.norm().is_finite() && omega2.norm().is_finite()) {
            return Err(Error::InvalidLattice("half-periods must be finite and nonzero".into()));
        }
        let ratio = omega2 / omega1;
        if !(ratio.im > 1e-12 * ratio.norm()) {
            return Err(Error::InvalidLattice(format!(
                "need Im(ω₂/ω₁) > 0, got ω₂/ω₁ = {ratio}"
            )));
        }
        let (b1, b2) = gauss_reduce(2.0 * omega1, 2.0 * omega2);
        let tau = b2 / b1;
        let (e4, e6) = eisenstein_e4_e6(tau);
        let two_pi_over_b1 = C64::new(2.0 * PI, 0.0) / b1;
        let g2 = two_pi_over_b1.powi(4) * e4 / 12.0;
        let g3 = two_pi_over_b1.powi(6) * e6 / 216.0;
        let scale = b1.norm();
        let g2n = g2 * scale.powi(4);
        let g3n = g3 * scale.powi(6);
        Ok(Self {
            omega1,
            omega2,
            b1,
            b2,
            g2,
            g3,
            scale,
            g2n,
            g3n,
            coeffs: laurent_coefficients(g2n, g3n, LAURENT_TERMS),
        })
    }

    /// Equianharmonic lattice with `ω₁ = s`, `ω₂ = s·e^{iπ/3}` (so `g₂ = 0`).
    pub fn hexagonal(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidLattice("hexagonal scale must be positive".into()));
        }
        let rot = C64::new(0.5, 3f64.sqrt() / 2.0);
        Self::new(C64::new(scale, 0.0), rot * scale)
    }

    /// The lattice `s·Λ` (half-periods multiplied by `s`).
    pub fn scaled(&self, s: C64) -> Result<Self> {
        Self::new(self.omega1 * s, self.omega2 * s)
    }

    pub fn omega1(&self) -> C64 {
        self.omega1
    }

    pub fn omega2(&self) -> C64 {
        self.omega2
    }

    /// Reduced period basis.
    pub fn periods(&self) -> (C64, C64) {
        (self.b1, self.b2)
    }

    pub fn g2(&self) -> C64 {
        self.g2
    }

    pub fn g3(&self) -> C64 {
        self.g3
    }

    /// Area of `C/Λ`.
    pub fn area(&self) -> f64 {
        (self.b1.conj() * self.b2).im.abs()
    }

    /// Length of the shortest nonzero period.
    pub fn min_period(&self) -> f64 {
        self.scale
    }

    /// Axis-aligned square containing the cell `{s·b₁ + t·b₂ : s, t ∈ [0, 1]}`.
    pub fn cell_bounding_square(&self) -> Region {
        let pts = [C64::new(0.0, 0.0), self.b1, self.b2, self.b1 + self.b2];
        let xmin = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
        let xmax = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        let ymin = pts.iter().map(|p| p.im).fold(f64::INFINITY, f64::min);
        let ymax = pts.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max);
        let side = (xmax - xmin).max(ymax - ymin);
        Region::square(C64::new(xmin, ymin), side).expect("positive cell")
    }

    /// Nearest lattice point to `z` and the offset `z - λ`.
    pub fn reduce(&self, z: C64) -> (C64, C64) {
        let det = (self.b1.conj() * self.b2).im;
        let x = (z.conj() * self.b2).im / det;
        let y = (self.b1.conj() * z).im / det;
        let (m0, n0) = (x.round(), y.round());
        let mut best = (C64::new(0.0, 0.0), f64::INFINITY);
        for dm in -1..=1 {
            for dn in -1..=1 {
                let lp = self.b1 * (m0 + dm as f64) + self.b2 * (n0 + dn as f64);
                let d = (z - lp).norm_sqr();
                if d < best.1 {
                    best = (lp, d);
                }
            }
        }
        (best.0, z - best.0)
    }

    pub fn wp(&self, z: C64) -> Result<C64> {
        let (_, u) = self.reduce(z);
        if u.norm() < POLE_RADIUS {
            return Err(Error::PoleAt(z));
        }
        Ok(match self.parts(u) {
            WpParts::Near { u, h, .. } => u.powi(-2) + h,
            WpParts::Far { p, .. } => p,
        })
    }

    pub fn wp_prime(&self, z: C64) -> Result<C64> {
        let (_, u) = self.reduce(z);
        if u.norm() < POLE_RADIUS {
            return Err(Error::PoleAt(z));
        }
        Ok(match self.parts(u) {
            WpParts::Near { u, h1, .. } => u.powi(-3) * -2.0 + h1,
            WpParts::Far { p1, .. } => p1,
        })
    }

    /// Evaluates at an offset `u` already reduced to the nearest lattice point.
    pub(crate) fn parts(&self, u: C64) -> WpParts {
        let l = self.scale;
        let v = u / l;
        if v.norm() <= LAURENT_RADIUS {
            let (h, h1, h2) = self.regular_parts(v);
            return WpParts::Near {
                u,
                h: h / (l * l),
                h1: h1 / (l * l * l),
                h2: h2 / (l * l * l * l),
            };
        }
        let mut halvings = 0;
        let mut vs = v;
        while vs.norm() > LAURENT_RADIUS {
            vs /= 2.0;
            halvings += 1;
        }
        let (h, h1, _) = self.regular_parts(vs);
        let mut p = vs.powi(-2) + h;
        let mut p1 = vs.powi(-3) * -2.0 + h1;
        for _ in 0..halvings {
            let p2 = p * p * 6.0 - self.g2n / 2.0;
            let new_p = -2.0 * p + (p2 / (2.0 * p1)).powi(2);
            let new_p1 = -p1 + p2 * (12.0 * p * p1 * p1 - p2 * p2) / (4.0 * p1.powi(3));
            p = new_p;
            p1 = new_p1;
        }
        let p2 = p * p * 6.0 - self.g2n / 2.0;
        WpParts::Far {
            p: p / (l * l),
            p1: p1 / (l * l * l),
            p2: p2 / (l * l * l * l),
        }
    }

    // h(v) = v^2 A(v^2) with A(w) = Σ c_{k} w^{k-2}; returns h, h', h'' in v.
    fn regular_parts(&self, v: C64) -> (C64, C64, C64) {
        let w = v * v;
        let zero = C64::new(0.0, 0.0);
        let (mut a, mut a1, mut a2) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            a2 = a2 * w + a1 * 2.0;
            a1 = a1 * w + a;
            a = a * w + c;
        }
        let h = w * a;
        let h1 = v * 2.0 * (a + w * a1);
        let h2 = a * 2.0 + w * a1 * 10.0 + w * w * a2 * 4.0;
        (h, h1, h2)
    }
}

/// Lagrange-Gauss reduction of a period basis.
fn gauss_reduce(mut b1: C64, mut b2: C64) -> (C64, C64) {
    for _ in 0..200 {
        if b2.norm_sqr() < b1.norm_sqr() {
            core::mem::swap(&mut b1, &mut b2);
        }
        let mu = ((b2 * b1.conj()).re / b1.norm_sqr()).round();
        if mu == 0.0 {
            break;
        }
        b2 -= b1 * mu;
    }
    if (b2 / b1).im < 0.0 {
        b2 = -b2;
    }
    (b1, b2)
}

/// `E₄(τ)`, `E₆(τ)` by their Lambert series in `q = e^{2πiτ}`.
fn eisenstein_e4_e6(tau: C64) -> (C64, C64) {
    let q = (C64::new(0.0, 2.0 * PI) * tau).exp();
    let one = C64::new(1.0, 0.0);
    let (mut s3, mut s5) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let mut qn = one;
    for n in 1..200 {
        qn *= q;
        let nf = n as f64;
        let t = qn / (one - qn);
        s3 += t * nf.powi(3);
        s5 += t * nf.powi(5);
        if qn.norm() * nf.powi(5) < 1e-19 {
            break;
        }
    }
    (one + s3 * 240.0, one - s5 * 504.0)
}

/// Coefficients `c_k` (k = 2..=terms+1) of `℘(u) = u^{-2} + Σ c_k u^{2k-2}`.
fn laurent_coefficients(g2: C64, g3: C64, terms: usize) -> Vec<C64> {
    let mut c: Vec<C64> = Vec::with_capacity(terms);
    for k in 2..terms + 2 {
        let val = match k {
            2 => g2 / 20.0,
            3 => g3 / 28.0,
            _ => {
                let s: C64 = (2..=k - 2).map(|m| c[m - 2] * c[k - m - 2]).sum();
                s * (3.0 / ((2 * k + 1) as f64 * (k - 3) as f64))
            }
        };
        c.push(val);
    }
    c
}

/// Precomposes `curve` with `z ↦ c z` so that its measured sup of `|df|` over
/// the pulled-back window equals `target`.
///
/// Since `|df_c|(z) = c|df|(cz)`, the sup of `f_c` over `window / c` sampled at
/// `resolution / c` sees exactly the samples of `f` over `window`, so
/// `c = target / sup`. For elliptic curves pass a window covering a period
/// cell so the sup is global.
pub fn brody_rescale(curve: &CurveMap, window: &Region, target: f64, resolution: f64) -> Result<(CurveMap, f64)> {
    if !(target > 0.0) {
        return Err(Error::InvalidArgument("target sup must be positive".into()));
    }
    let base = sup_spherical_derivative(curve, window, resolution)?;
    if base.value <= 0.0 {
        return Err(Error::DegenerateCurve);
    }
    let c = target / base.value;
    Ok((curve.precompose(C64::new(c, 0.0), C64::new(0.0, 0.0))?, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_recovers_short_basis() {
        let (b1, b2) = gauss_reduce(C64::new(1.0, 0.0), C64::new(7.0, 1.0));
        assert!((b1.norm() - 1.0).abs() < 1e-14);
        assert!((b2 - C64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_wrong_orientation() {
        assert!(Lattice::new(C64::new(0.0, 1.0), C64::new(1.0, 0.0)).is_err());
        assert!(Lattice::new(C64::new(1.0, 0.0), C64::new(2.0, 0.0)).is_err());
        assert!(Lattice::hexagonal(-1.0).is_err());
    }

    #[test]
    fn pole_is_reported() {
        let l = Lattice::hexagonal(1.0).unwrap();
        let (b1, b2) = l.periods();
        assert!(matches!(l.wp(b1 * 3.0 - b2), Err(Error::PoleAt(_))));
        assert!(l.wp(C64::new(0.3, 0.1)).is_ok());
    }

    #[test]
    fn hexagonal_area() {
        let l = Lattice::hexagonal(2.0).unwrap();
        assert!((l.area() - 16.0 * (PI / 3.0).sin()).abs() < 1e-12);
    }

    // Eisenstein sums G_k = Σ' λ^{-k} over |λ| <= r_max by brute force; the
    // neglected tail is at most Σ_{|λ|>r_max} |λ|^{-k} ≈ 2π / (area (k-2) r_max^{k-2}).
    fn lattice_sum(l: &Lattice, k: i32, r_max: f64) -> (C64, f64) {
        let (b1, b2) = l.periods();
        let n = (2.0 * r_max / l.min_period()).ceil() as i32 + 2;
        let mut s = C64::new(0.0, 0.0);
        for m in -n..=n {
            for j in -n..=n {
                let lam = b1 * m as f64 + b2 * j as f64;
                if (m != 0 || j != 0) && lam.norm() <= r_max {
                    s += lam.powi(-k);
                }
            }
        }
        let tail = 2.0 * PI / (l.area() * (k - 2) as f64 * r_max.powi(k - 2)) * 1.5;
        (s, tail)
    }

    #[test]
    fn invariants_match_lattice_sums() {
        for l in [
            Lattice::hexagonal(1.0).unwrap(),
            Lattice::new(C64::new(0.7, 0.2), C64::new(-0.3, 1.1)).unwrap(),
        ] {
            let (g4, t4) = lattice_sum(&l, 4, 150.0);
            let (g6, t6) = lattice_sum(&l, 6, 150.0);
            assert!((g4 * 60.0 - l.g2()).norm() <= 60.0 * t4);
            assert!((g6 * 140.0 - l.g3()).norm() <= 140.0 * t6);
            assert!(140.0 * t6 < 1e-7 * l.g3().norm());
        }
    }

    #[test]
    fn hexagonal_invariants() {
        let l1 = Lattice::hexagonal(1.0).unwrap();
        assert!(l1.g2().norm() <= 1e-10 * l1.g3().norm());
        let l2 = Lattice::hexagonal(2.0).unwrap();
        assert!((l2.g3() * 64.0 - l1.g3()).norm() <= 1e-12 * l1.g3().norm());
    }

    #[test]
    fn half_period_values_are_roots() {
        let l = Lattice::hexagonal(1.3).unwrap();
        let e1 = l.wp(l.omega1()).unwrap();
        assert!((e1.powi(3) * 4.0 - l.g3()).norm() < 1e-11 * l.g3().norm());
        assert!(l.wp_prime(l.omega1()).unwrap().norm() < 1e-9 * e1.norm().powf(1.5));
    }

    #[test]
    fn differential_equation_and_periodicity() {
        let l = Lattice::new(C64::new(1.0, 0.1), C64::new(0.4, 0.9)).unwrap();
        let (b1, b2) = l.periods();
        for k in 0..400 {
            let t = k as f64;
            let z = C64::new((t * 0.377).sin() * 3.0, (t * 0.911).cos() * 3.0);
            let p = l.wp(z).unwrap();
            let dp = l.wp_prime(z).unwrap();
            let res = dp * dp - (p * p * p * 4.0 - l.g2() * p - l.g3());
            assert!(res.norm() / (1.0 + p.norm().powi(3)) < 1e-10, "{z}");
            for w in [b1, b2, b1 * 3.0 - b2 * 2.0] {
                assert!((l.wp(z + w).unwrap() - p).norm() < 1e-10 * (1.0 + p.norm()));
            }
            assert!((l.wp(-z).unwrap() - p).norm() < 1e-12 * (1.0 + p.norm()));
        }
    }
}
