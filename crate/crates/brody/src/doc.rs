//! JSON curve and region documents.
//!
//! Complex numbers are `[re, im]` pairs. A document converts to a
//! [`CurveMap`] and back; the reverse direction follows the curve's own
//! structure, so glued outputs can be saved and reloaded exactly.

use brody_core::curve::{Bump, CurveView, ExpTerm, WpComponent};
use brody_core::elliptic::{brody_rescale, Lattice};
use brody_core::gluing::glue_with_normalization;
use brody_core::linalg::Unitary;
use brody_core::{CurveMap, Region, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub type Cx = [f64; 2];

pub fn cx(c: C64) -> Cx {
    [c.re, c.im]
}

pub fn from_cx(c: Cx) -> C64 {
    C64::new(c[0], c[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveDoc {
    /// Ascending coefficient lists, one per homogeneous component.
    Rational { components: Vec<Vec<Cx>> },
    Constant { point: Vec<Cx> },
    #[serde(rename = "expsum")]
    ExpSum { components: Vec<Vec<ExpTermDoc>> },
    Weierstrass { lattice: LatticeDoc, components: Vec<WpComponentDoc> },
    /// `z ↦ base(scale·z + shift)`.
    #[serde(rename = "precomposed")]
    Precompose { base: Box<CurveDoc>, scale: Cx, shift: Cx },
    #[serde(rename = "postcomposed")]
    Postcompose { base: Box<CurveDoc>, unitary: Vec<Vec<Cx>> },
    Glued { base: Box<CurveDoc>, bumps: Vec<BumpDoc> },
    /// Bump of the given amplitude glued at `center`, normalized by the
    /// standard unitary moving `base(center)` to `[1:0:...:0]`.
    GlueAt { base: Box<CurveDoc>, center: Cx, amplitude: f64 },
    /// `base(c·z)` with `c` chosen so the measured sup over `window` is `target`.
    BrodyRescaled { base: Box<CurveDoc>, window: RegionDoc, target: f64, resolution: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTermDoc {
    pub coeff: Cx,
    #[serde(default)]
    pub power: u32,
    #[serde(default)]
    pub rate: Cx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WpComponentDoc {
    One,
    Wp,
    WpPrime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeDoc {
    Periods { omega1: Cx, omega2: Cx },
    Hexagonal { scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpDoc {
    pub center: Cx,
    pub amplitude: f64,
    pub normalization: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionDoc {
    Disk { center: Cx, radius: f64 },
    Square { corner: Cx, side: f64 },
}

impl RegionDoc {
    pub fn to_region(&self) -> CliResult<Region> {
        Ok(match *self {
            RegionDoc::Disk { center, radius } => Region::disk(from_cx(center), radius)?,
            RegionDoc::Square { corner, side } => Region::square(from_cx(corner), side)?,
        })
    }

    pub fn from_region(r: &Region) -> Self {
        match *r {
            Region::Disk { center, radius } => RegionDoc::Disk { center: cx(center), radius },
            Region::Square { corner, side } => RegionDoc::Square { corner: cx(corner), side },
        }
    }
}

fn rows_to_unitary(rows: &[Vec<Cx>]) -> CliResult<Unitary> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().copied().map(from_cx).collect()).collect();
    Ok(Unitary::from_rows(&rows)?)
}

fn unitary_to_rows(u: &Unitary) -> Vec<Vec<Cx>> {
    u.rows().into_iter().map(|r| r.into_iter().map(cx).collect()).collect()
}

impl LatticeDoc {
    pub fn to_lattice(&self) -> CliResult<Lattice> {
        Ok(match *self {
            LatticeDoc::Periods { omega1, omega2 } => Lattice::new(from_cx(omega1), from_cx(omega2))?,
            LatticeDoc::Hexagonal { scale } => Lattice::hexagonal(scale)?,
        })
    }
}

impl CurveDoc {
    pub fn to_curve(&self) -> CliResult<CurveMap> {
        Ok(match self {
            CurveDoc::Rational { components } => {
                CurveMap::rational(components.iter().map(|c| c.iter().copied().map(from_cx).collect()).collect())?
            }
            CurveDoc::Constant { point } => {
                CurveMap::constant(&point.iter().copied().map(from_cx).collect::<Vec<_>>())?
            }
            CurveDoc::ExpSum { components } => CurveMap::exp_sum(
                components
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|t| ExpTerm { coeff: from_cx(t.coeff), power: t.power, rate: from_cx(t.rate) })
                            .collect()
                    })
                    .collect(),
            )?,
            CurveDoc::Weierstrass { lattice, components } => CurveMap::weierstrass(
                lattice.to_lattice()?,
                components
                    .iter()
                    .map(|c| match c {
                        WpComponentDoc::One => WpComponent::One,
                        WpComponentDoc::Wp => WpComponent::Wp,
                        WpComponentDoc::WpPrime => WpComponent::WpPrime,
                    })
                    .collect(),
            )?,
            CurveDoc::Precompose { base, scale, shift } => {
                base.to_curve()?.precompose(from_cx(*scale), from_cx(*shift))?
            }
            CurveDoc::Postcompose { base, unitary } => base.to_curve()?.postcompose(rows_to_unitary(unitary)?)?,
            CurveDoc::Glued { base, bumps } => {
                let bumps = bumps
                    .iter()
                    .map(|b| Bump::new(from_cx(b.center), b.amplitude, rows_to_unitary(&b.normalization)?).map_err(CliError::from))
                    .collect::<CliResult<Vec<_>>>()?;
                CurveMap::glued(&base.to_curve()?, bumps)?
            }
            CurveDoc::GlueAt { base, center, amplitude } => {
                let f = base.to_curve()?;
                let p = from_cx(*center);
                let u = Unitary::to_first_axis(&f.lift(p)?.f)?;
                glue_with_normalization(&f, p, *amplitude, u)?
            }
            CurveDoc::BrodyRescaled { base, window, target, resolution } => {
                brody_rescale(&base.to_curve()?, &window.to_region()?, *target, *resolution)?.0
            }
        })
    }

    /// Document describing `curve` exactly.
    pub fn from_curve(curve: &CurveMap) -> Self {
        match curve.view() {
            CurveView::Rational(polys) => CurveDoc::Rational {
                components: polys.iter().map(|p| p.coeffs().iter().copied().map(cx).collect()).collect(),
            },
            CurveView::ExpSum(comps) => CurveDoc::ExpSum {
                components: comps
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|t| ExpTermDoc { coeff: cx(t.coeff), power: t.power, rate: cx(t.rate) })
                            .collect()
                    })
                    .collect(),
            },
            CurveView::Weierstrass { lattice, components } => CurveDoc::Weierstrass {
                lattice: LatticeDoc::Periods { omega1: cx(lattice.omega1()), omega2: cx(lattice.omega2()) },
                components: components
                    .iter()
                    .map(|c| match c {
                        WpComponent::One => WpComponentDoc::One,
                        WpComponent::Wp => WpComponentDoc::Wp,
                        WpComponent::WpPrime => WpComponentDoc::WpPrime,
                    })
                    .collect(),
            },
            CurveView::Precomposed { base, scale, shift } => {
                CurveDoc::Precompose { base: Box::new(Self::from_curve(base)), scale: cx(scale), shift: cx(shift) }
            }
            CurveView::Postcomposed { base, unitary } => {
                CurveDoc::Postcompose { base: Box::new(Self::from_curve(base)), unitary: unitary_to_rows(unitary) }
            }
            CurveView::Glued { base, bumps } => CurveDoc::Glued {
                base: Box::new(Self::from_curve(base)),
                bumps: bumps
                    .iter()
                    .map(|b| BumpDoc {
                        center: cx(b.center),
                        amplitude: b.amplitude,
                        normalization: unitary_to_rows(b.normalization()),
                    })
                    .collect(),
            },
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tagged_documents() {
        let d = CurveDoc::parse(r#"{"type":"rational","components":[[[1,0]],[[0,0],[1,0]]]}"#).unwrap();
        let f = d.to_curve().unwrap();
        assert!((f.spherical_derivative(C64::new(0.0, 0.0)).unwrap() - 0.5641895835477563).abs() < 1e-15);
        assert!(CurveDoc::parse(r#"{"type":"rational","components":[],"extra":1}"#).is_err());
        assert!(CurveDoc::parse(r#"{"type":"spline"}"#).is_err());
    }

    #[test]
    fn exp_sum_defaults() {
        let d = CurveDoc::parse(r#"{"type":"expsum","components":[[{"coeff":[1,0],"rate":[1,0]}]]}"#).unwrap();
        let f = d.to_curve().unwrap();
        assert_eq!(f, CurveMap::exponential(C64::new(1.0, 0.0)));
    }

    #[test]
    fn lattice_orientation_is_checked() {
        let d = CurveDoc::Weierstrass {
            lattice: LatticeDoc::Periods { omega1: [0.0, 1.0], omega2: [1.0, 0.0] },
            components: vec![WpComponentDoc::One, WpComponentDoc::Wp],
        };
        assert!(d.to_curve().is_err());
    }
}
