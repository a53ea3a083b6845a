//! Holomorphic curves `C -> CP^N` and their spherical derivative.
//!
//! A [`CurveMap`] is evaluated through a local homogeneous lift `F` with
//! derivative `F'`. The spherical derivative is computed from the lift
//! without choosing a chart:
//!
//! ```text
//! |df| = sqrt(Σ_{i<j} |F_i F_j' - F_j F_i'|²) / (sqrt(pi) |F|²)
//! ```
//!
//! which is unchanged when `F` is multiplied by any nonvanishing holomorphic
//! function, so each variant may use whatever lift is convenient near `z`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::elliptic::{Lattice, WpParts, POLE_RADIUS};
use crate::linalg::{Coords, Unitary};
use crate::poly::{gcd_all, Poly};
use crate::projective::ProjectivePoint;
use crate::{Error, Result, C64, SQRT_PI};

const LN2: f64 = core::f64::consts::LN_2;

/// A local holomorphic lift and its derivative at one point.
///
/// `f` and `df` have been multiplied by `2^-scale_exponent` so that
/// `|f| ∈ [2^-8, 2^8]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub f: Coords,
    pub df: Coords,
    pub scale_exponent: i32,
}

impl Lift {
    fn new(f: Coords, df: Coords, z: C64) -> Result<Self> {
        let mut l = Lift { f, df, scale_exponent: 0 };
        l.normalize(z)?;
        Ok(l)
    }

    fn normalize(&mut self, z: C64) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::LiftUndefined(z));
        }
        if (2f64.powi(-8)..=2f64.powi(8)).contains(&n) {
            return Ok(());
        }
        let e = n.log2().floor() as i32;
        self.rescale(e);
        Ok(())
    }

    fn rescale(&mut self, e: i32) {
        // Two steps keep every factor a normal power of two.
        let (e1, e2) = (e / 2, e - e / 2);
        let (s1, s2) = (2f64.powi(-e1), 2f64.powi(-e2));
        for c in self.f.iter_mut().chain(self.df.iter_mut()) {
            *c = *c * s1 * s2;
        }
        self.scale_exponent += e;
    }

    pub fn dim(&self) -> usize {
        self.f.len() - 1
    }

    pub fn norm(&self) -> f64 {
        self.f.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn point(&self) -> ProjectivePoint {
        ProjectivePoint::new(&self.f).expect("normalized lift is nonzero")
    }

    /// The chart-free spherical derivative.
    pub fn spherical_derivative(&self) -> f64 {
        let n2: f64 = self.f.iter().map(|c| c.norm_sqr()).sum();
        let mut w = 0.0;
        for i in 0..self.f.len() {
            for j in i + 1..self.f.len() {
                w += (self.f[i] * self.df[j] - self.f[j] * self.df[i]).norm_sqr();
            }
        }
        w.sqrt() / (SQRT_PI * n2)
    }
}

/// Spherical derivative from the affine chart `F_chart ≠ 0`:
/// `sqrt((1+|w|²)|w'|² - |<w', w>|²) / (sqrt(pi)(1+|w|²))`.
pub fn spherical_derivative_in_chart(lift: &Lift, chart: usize) -> Result<f64> {
    let f0 = *lift
        .f
        .get(chart)
        .ok_or_else(|| Error::InvalidArgument(format!("chart {chart} out of range")))?;
    if f0.norm() < 1e-300 {
        return Err(Error::InvalidArgument(format!("chart {chart} is singular here")));
    }
    let d0 = lift.df[chart];
    let (mut w2, mut dw2, mut inner) = (0.0, 0.0, C64::new(0.0, 0.0));
    for k in (0..lift.f.len()).filter(|&k| k != chart) {
        let w = lift.f[k] / f0;
        let dw = (lift.df[k] * f0 - lift.f[k] * d0) / (f0 * f0);
        w2 += w.norm_sqr();
        dw2 += dw.norm_sqr();
        inner += dw * w.conj();
    }
    let num = ((1.0 + w2) * dw2 - inner.norm_sqr()).max(0.0);
    Ok(num.sqrt() / (SQRT_PI * (1.0 + w2)))
}

/// One term `coeff · z^power · e^{rate·z}` of an exponential sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: C64,
    pub power: u32,
    pub rate: C64,
}

/// A homogeneous component of an elliptic curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpComponent {
    One,
    Wp,
    WpPrime,
}

impl WpComponent {
    fn pole_order(self) -> u32 {
        match self {
            WpComponent::One => 0,
            WpComponent::Wp => 2,
            WpComponent::WpPrime => 3,
        }
    }
}

/// A cubic-pole perturbation: in coordinates `U·F` it adds
/// `amplitude / (z - center)³` to every affine component.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub center: C64,
    pub amplitude: f64,
    normalization: Unitary,
    inverse: Unitary,
}

impl Bump {
    pub fn new(center: C64, amplitude: f64, normalization: Unitary) -> Result<Self> {
        if !(amplitude.is_finite()) {
            return Err(Error::InvalidArgument("bump amplitude must be finite".into()));
        }
        let inverse = normalization.adjoint();
        Ok(Self { center, amplitude, normalization, inverse })
    }

    /// The unitary `U` with `U·f(center) = [1:0:...:0]`.
    pub fn normalization(&self) -> &Unitary {
        &self.normalization
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Rational(Vec<Poly>),
    ExpSum(Vec<Vec<ExpTerm>>),
    Weierstrass { lattice: Lattice, comps: Vec<WpComponent>, pole_order: u32 },
    Precomposed { base: Arc<CurveMap>, scale: C64, shift: C64 },
    Postcomposed { base: Arc<CurveMap>, unitary: Unitary },
    Glued { base: Arc<CurveMap>, bumps: Vec<Bump> },
}

/// An immutable holomorphic curve `C -> CP^N`. Cloning is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMap {
    repr: Repr,
    dim: usize,
}

/// Read-only view of a curve's structure (for serialization).
#[derive(Debug, Clone, Copy)]
pub enum CurveView<'a> {
    Rational(&'a [Poly]),
    ExpSum(&'a [Vec<ExpTerm>]),
    Weierstrass { lattice: &'a Lattice, components: &'a [WpComponent] },
    Precomposed { base: &'a CurveMap, scale: C64, shift: C64 },
    Postcomposed { base: &'a CurveMap, unitary: &'a Unitary },
    Glued { base: &'a CurveMap, bumps: &'a [Bump] },
}

impl CurveMap {
    /// Polynomial curve `[P_0 : ... : P_N]` from ascending coefficient lists.
    /// A common factor of the components is divided out.
    pub fn rational(components: Vec<Vec<C64>>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidCurve("a curve needs at least two homogeneous components".into()));
        }
        let polys: Vec<Poly> = components.into_iter().map(Poly::new).collect();
        let g = gcd_all(&polys).ok_or_else(|| Error::InvalidCurve("all components are zero".into()))?;
        let polys = if g.degree().unwrap_or(0) > 0 {
            let scale = polys.iter().flat_map(|p| p.coeffs()).map(|c| c.norm()).fold(0.0, f64::max);
            polys.iter().map(|p| p.div_rem(&g, 1e-10 * scale).0).collect()
        } else {
            polys
        };
        let dim = polys.len() - 1;
        Ok(Self { repr: Repr::Rational(polys), dim })
    }

    pub fn constant(coords: &[C64]) -> Result<Self> {
        Self::rational(coords.iter().map(|&c| alloc::vec![c]).collect())
    }

    /// `f(z) = z`, i.e. `[1 : z]`.
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        Self::rational(alloc::vec![alloc::vec![one], alloc::vec![C64::new(0.0, 0.0), one]])
            .expect("valid")
    }

    /// `[1 : f_1 : ... : f_N]` with each `f_k` a finite exponential sum.
    pub fn exp_sum(components: Vec<Vec<ExpTerm>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidCurve("exponential sum needs at least one affine component".into()));
        }
        let bad = components
            .iter()
            .flatten()
            .any(|t| !(t.coeff.norm().is_finite() && t.rate.norm().is_finite()));
        if bad {
            return Err(Error::InvalidCurve("non-finite exponential-sum term".into()));
        }
        let dim = components.len();
        Ok(Self { repr: Repr::ExpSum(components), dim })
    }

    /// `[1 : e^{rate·z}]`.
    pub fn exponential(rate: C64) -> Self {
        let term = ExpTerm { coeff: C64::new(1.0, 0.0), power: 0, rate };
        Self::exp_sum(alloc::vec![alloc::vec![term]]).expect("valid")
    }

    pub fn weierstrass(lattice: Lattice, components: Vec<WpComponent>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidCurve("a curve needs at least two homogeneous components".into()));
        }
        let pole_order = components.iter().map(|c| c.pole_order()).max().unwrap_or(0);
        let dim = components.len() - 1;
        Ok(Self { repr: Repr::Weierstrass { lattice, comps: components, pole_order }, dim })
    }

    /// `[1 : ℘]`.
    pub fn wp_curve(lattice: Lattice) -> Self {
        Self::weierstrass(lattice, alloc::vec![WpComponent::One, WpComponent::Wp]).expect("valid")
    }

    /// `z ↦ f(scale·z + shift)`.
    pub fn precompose(&self, scale: C64, shift: C64) -> Result<Self> {
        if scale.norm() == 0.0 || !scale.norm().is_finite() || !shift.norm().is_finite() {
            return Err(Error::InvalidArgument("precomposition needs a finite nonzero scale".into()));
        }
        Ok(Self {
            repr: Repr::Precomposed { base: Arc::new(self.clone()), scale, shift },
            dim: self.dim,
        })
    }

    /// `z ↦ f(z + a)`.
    pub fn translate(&self, a: C64) -> Self {
        self.precompose(C64::new(1.0, 0.0), a).expect("unit scale")
    }

    /// `z ↦ U·f(z)`.
    pub fn postcompose(&self, unitary: Unitary) -> Result<Self> {
        if unitary.dim() != self.dim + 1 {
            return Err(Error::InvalidArgument(format!(
                "unitary of size {} does not act on CP^{}",
                unitary.dim(),
                self.dim
            )));
        }
        Ok(Self { repr: Repr::Postcomposed { base: Arc::new(self.clone()), unitary }, dim: self.dim })
    }

    /// `base` with the given cubic-pole perturbations applied in order.
    pub fn glued(base: &CurveMap, bumps: Vec<Bump>) -> Result<Self> {
        if bumps.iter().any(|b| b.normalization.dim() != base.dim + 1) {
            return Err(Error::InvalidArgument("bump normalization has the wrong size".into()));
        }
        Ok(Self { repr: Repr::Glued { base: Arc::new(base.clone()), bumps }, dim: base.dim })
    }

    /// Target dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn view(&self) -> CurveView<'_> {
        match &self.repr {
            Repr::Rational(p) => CurveView::Rational(p),
            Repr::ExpSum(c) => CurveView::ExpSum(c),
            Repr::Weierstrass { lattice, comps, .. } => CurveView::Weierstrass { lattice, components: comps },
            Repr::Precomposed { base, scale, shift } => {
                CurveView::Precomposed { base, scale: *scale, shift: *shift }
            }
            Repr::Postcomposed { base, unitary } => CurveView::Postcomposed { base, unitary },
            Repr::Glued { base, bumps } => CurveView::Glued { base, bumps },
        }
    }

    /// Degree of a polynomial curve.
    pub fn degree(&self) -> Option<usize> {
        match &self.repr {
            Repr::Rational(p) => p.iter().filter_map(Poly::degree).max(),
            _ => None,
        }
    }

    /// The period lattice of an elliptic curve, following precompositions.
    pub fn period_lattice(&self) -> Option<Lattice> {
        match &self.repr {
            Repr::Weierstrass { lattice, .. } => Some(lattice.clone()),
            Repr::Precomposed { base, scale, .. } => base.period_lattice()?.scaled(scale.inv()).ok(),
            Repr::Postcomposed { base, .. } => base.period_lattice(),
            _ => None,
        }
    }

    /// The perturbation list of a glued curve (empty otherwise).
    pub fn bumps(&self) -> &[Bump] {
        match &self.repr {
            Repr::Glued { bumps, .. } => bumps,
            _ => &[],
        }
    }

    pub fn lift(&self, z: C64) -> Result<Lift> {
        match &self.repr {
            Repr::Rational(polys) => {
                let (f, df) = polys.iter().map(|p| p.eval_with_derivative(z)).unzip();
                Lift::new(f, df, z)
            }
            Repr::ExpSum(comps) => exp_sum_lift(comps, z),
            Repr::Weierstrass { lattice, comps, pole_order } => wp_lift(lattice, comps, *pole_order, z),
            Repr::Precomposed { base, scale, shift } => {
                let mut l = base.lift(*scale * z + *shift)?;
                for d in l.df.iter_mut() {
                    *d *= *scale;
                }
                Ok(l)
            }
            Repr::Postcomposed { base, unitary } => {
                let l = base.lift(z)?;
                Ok(Lift { f: unitary.apply(&l.f), df: unitary.apply(&l.df), scale_exponent: l.scale_exponent })
            }
            Repr::Glued { base, bumps } => {
                let mut l = base.lift(z)?;
                for b in bumps {
                    apply_bump(&mut l, b, z)?;
                }
                Ok(l)
            }
        }
    }

    pub fn spherical_derivative(&self, z: C64) -> Result<f64> {
        Ok(self.lift(z)?.spherical_derivative())
    }

    pub fn point(&self, z: C64) -> Result<ProjectivePoint> {
        Ok(self.lift(z)?.point())
    }
}

fn exp_sum_lift(comps: &[Vec<ExpTerm>], z: C64) -> Result<Lift> {
    let lnz = if z.norm() > 0.0 { Some(z.ln()) } else { None };
    // Largest log-magnitude among the terms and the constant component.
    let mut top: f64 = 0.0;
    for t in comps.iter().flatten() {
        let lm = match lnz {
            Some(l) => t.coeff.norm().ln() + t.power as f64 * l.re + (t.rate * z).re,
            None if t.power == 0 => t.coeff.norm().ln(),
            None => f64::NEG_INFINITY,
        };
        top = top.max(lm);
    }
    let e = (top / LN2).round() as i32;
    let shift = e as f64 * LN2;
    let zero = C64::new(0.0, 0.0);
    let mut f = Coords::with_capacity(comps.len() + 1);
    let mut df = Coords::with_capacity(comps.len() + 1);
    f.push(C64::new((-shift).exp(), 0.0));
    df.push(zero);
    for comp in comps {
        let (mut v, mut d) = (zero, zero);
        for t in comp {
            if t.coeff == zero {
                continue;
            }
            match lnz {
                Some(l) => {
                    let term = t.coeff * (t.rate * z + l * t.power as f64 - shift).exp();
                    v += term;
                    d += term * (t.rate + C64::new(t.power as f64, 0.0) / z);
                }
                None => {
                    let s = (-shift).exp();
                    match t.power {
                        0 => {
                            v += t.coeff * s;
                            d += t.coeff * t.rate * s;
                        }
                        1 => d += t.coeff * s,
                        _ => {}
                    }
                }
            }
        }
        f.push(v);
        df.push(d);
    }
    let mut l = Lift::new(f, df, z)?;
    l.scale_exponent += e;
    Ok(l)
}

fn wp_lift(lattice: &Lattice, comps: &[WpComponent], m: u32, z: C64) -> Result<Lift> {
    let (_, u) = lattice.reduce(z);
    let zero = C64::new(0.0, 0.0);
    let parts = if u.norm() < POLE_RADIUS {
        // Only the principal parts survive at the pole itself.
        WpParts::Near { u, h: zero, h1: zero, h2: zero }
    } else {
        lattice.parts(u)
    };
    let mut f = Coords::with_capacity(comps.len());
    let mut df = Coords::with_capacity(comps.len());
    match parts {
        WpParts::Near { u, h, h1, h2 } => {
            let m = m as i32;
            // u^k for k >= 0; terms with a zero coefficient are skipped by callers.
            let pw = |k: i32| -> C64 { u.powi(k) };
            let term = |coef: f64, k: i32| -> C64 {
                if coef == 0.0 {
                    zero
                } else {
                    pw(k) * coef
                }
            };
            for c in comps {
                let (v, d) = match c {
                    WpComponent::One => (pw(m), term(m as f64, m - 1)),
                    WpComponent::Wp => (
                        pw(m - 2) + pw(m) * h,
                        term((m - 2) as f64, m - 3) + term(m as f64, m - 1) * h + pw(m) * h1,
                    ),
                    WpComponent::WpPrime => (
                        pw(m - 3) * -2.0 + pw(m) * h1,
                        term(-2.0 * (m - 3) as f64, m - 4) + term(m as f64, m - 1) * h1 + pw(m) * h2,
                    ),
                };
                f.push(v);
                df.push(d);
            }
        }
        WpParts::Far { p, p1, p2 } => {
            for c in comps {
                let (v, d) = match c {
                    WpComponent::One => (C64::new(1.0, 0.0), zero),
                    WpComponent::Wp => (p, p1),
                    WpComponent::WpPrime => (p1, p2),
                };
                f.push(v);
                df.push(d);
            }
        }
    }
    Lift::new(f, df, z)
}

fn apply_bump(l: &mut Lift, b: &Bump, z: C64) -> Result<()> {
    let g = b.normalization.apply(&l.f);
    let dg = b.normalization.apply(&l.df);
    let t = z - b.center;
    let (t3, dt3) = (t * t * t, t * t * 3.0);
    let a = b.amplitude;
    let mut gf = Coords::with_capacity(g.len());
    let mut gd = Coords::with_capacity(g.len());
    gf.push(t3 * g[0]);
    gd.push(dt3 * g[0] + t3 * dg[0]);
    for i in 1..g.len() {
        gf.push(t3 * g[i] + g[0] * a);
        gd.push(dt3 * g[i] + t3 * dg[i] + dg[0] * a);
    }
    l.f = b.inverse.apply(&gf);
    l.df = b.inverse.apply(&gd);
    l.normalize(z)
}

/// The curve `ĝ(z) = U·f(z + p)` with `ĝ(0) = [1:0:...:0]`, and `U`.
pub fn unitary_to_origin(curve: &CurveMap, p: C64) -> Result<(CurveMap, Unitary)> {
    let l = curve.lift(p)?;
    let u = Unitary::to_first_axis(&l.f)?;
    Ok((curve.translate(p).postcompose(u.clone())?, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_curve_lift_and_derivative() {
        let f = CurveMap::constant(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let l = f.lift(c(3.0, -1.0)).unwrap();
        assert_eq!(l.f.as_slice(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(l.df.as_slice(), &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(l.spherical_derivative(), 0.0);
    }

    #[test]
    fn identity_closed_form() {
        let f = CurveMap::identity();
        assert!((f.spherical_derivative(c(0.0, 0.0)).unwrap() - 0.564_189_583_547_756_3).abs() < 1e-15);
        let z = c(2.0, 0.0);
        let l = f.lift(z).unwrap();
        assert!((l.f[1] / l.f[0] - z).norm() < 1e-15);
        assert!(l.df[0].norm() == 0.0);
    }

    #[test]
    fn exponential_closed_form_and_overflow() {
        let f = CurveMap::exponential(c(1.0, 0.0));
        let v = f.spherical_derivative(c(0.0, 0.0)).unwrap();
        assert!((v - 0.282_094_791_773_878_1).abs() < 1e-15);
        for x in [-900.0, -30.0, 2.5, 750.0] {
            let exact = 1.0 / (2.0 * SQRT_PI * (x as f64).cosh());
            let got = f.spherical_derivative(c(x, 0.7)).unwrap();
            if exact == 0.0 || !exact.is_finite() {
                assert!(got < 1e-300);
            } else {
                assert!((got - exact).abs() <= 1e-12 * exact, "{x}: {got} vs {exact}");
            }
        }
        let l = f.lift(c(800.0, 0.0)).unwrap();
        assert!(l.scale_exponent > 1000);
    }

    #[test]
    fn common_factor_removed() {
        // (z - 1) [1 : z]
        let f = CurveMap::rational(vec![vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert_eq!(f.degree(), Some(1));
        assert!(f.lift(c(1.0, 0.0)).is_ok());
        assert!(CurveMap::rational(vec![vec![c(1.0, 0.0)]]).is_err());
        assert!(CurveMap::rational(vec![vec![], vec![c(0.0, 0.0)]]).is_err());
    }

    #[test]
    fn chart_formula_agrees() {
        let f = CurveMap::rational(vec![
            vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let l = f.lift(c(0.3, 0.8)).unwrap();
        let a = l.spherical_derivative();
        let b = spherical_derivative_in_chart(&l, 0).unwrap();
        let d = spherical_derivative_in_chart(&l, 1).unwrap();
        assert!((a - b).abs() < 1e-12 && (a - d).abs() < 1e-12);
    }

    #[test]
    fn unitary_to_origin_swaps_and_preserves() {
        let f = CurveMap::constant(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let (g, u) = unitary_to_origin(&f, c(0.0, 0.0)).unwrap();
        assert!(g.point(c(0.0, 0.0)).unwrap().coords()[1].norm() < 1e-15);
        assert!(u.entry(0, 0).norm() < 1e-15 && (u.entry(0, 1).norm() - 1.0).abs() < 1e-15);
        let id = CurveMap::identity();
        let (g, _) = unitary_to_origin(&id, c(1.0, 0.0)).unwrap();
        for k in 0..20 {
            let z = c(-2.0 + 0.2 * k as f64, 0.1 * k as f64 - 1.0);
            let a = g.spherical_derivative(z).unwrap();
            let b = id.spherical_derivative(z + 1.0).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn wp_lift_at_pole_and_near() {
        let lat = Lattice::hexagonal(1.0).unwrap();
        let f = CurveMap::wp_curve(lat.clone());
        let l = f.lift(c(0.0, 0.0)).unwrap();
        assert!(l.f[0].norm() == 0.0 && l.f[1].norm() > 0.0);
        // d[1:℘] at the pole equals d[1:z^2]... in the chart [u^2 : 1], |df| = 0 at u = 0.
        assert!(l.spherical_derivative() < 1e-15);
        let z = c(1e-3, 2e-3);
        let l = f.lift(z).unwrap();
        let wp = lat.wp(z).unwrap();
        assert!((l.f[1] / l.f[0] - wp).norm() <= 1e-12 * wp.norm());
        let f3 = CurveMap::weierstrass(lat, vec![WpComponent::One, WpComponent::Wp, WpComponent::WpPrime]).unwrap();
        assert!(f3.lift(c(0.0, 0.0)).unwrap().spherical_derivative().is_finite());
    }

    #[test]
    fn glued_constant_is_bump() {
        let base = CurveMap::constant(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = Bump::new(c(0.0, 0.0), 2.0, Unitary::identity(2)).unwrap();
        let g = CurveMap::glued(&base, vec![b]).unwrap();
        let q = CurveMap::rational(vec![vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], vec![c(2.0, 0.0)]])
            .unwrap();
        for z in [c(0.0, 0.0), c(0.5, 1.0), c(10.0, -3.0)] {
            assert!((g.spherical_derivative(z).unwrap() - q.spherical_derivative(z).unwrap()).abs() < 1e-14);
        }
    }
}
