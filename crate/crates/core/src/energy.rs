//! Energy integrals `∫ |df|² dx dy`, energy densities over Følner families,
//! and the Nevanlinna-Shimizu-Ahlfors characteristic.
//!
//! Squares are tiled in Cartesian coordinates, disks in polar coordinates
//! with rings of width `max(cell, ring_growth·r)`; both go through the
//! adaptive rule in [`crate::quadrature`].

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::curve::{CurveMap, CurveView};
use crate::elliptic::Lattice;
use crate::quadrature::{grid_rects, integrate_rects, QuadOptions, QuadResult, Rect};
use crate::region::Region;
use crate::search::FieldGrid;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyOptions {
    pub quad: QuadOptions,
    /// Initial tile size in the plane.
    pub cell: f64,
    /// Polar rings grow by `max(cell, ring_growth·r)`.
    pub ring_growth: f64,
    /// Cap on the number of initial angular tiles per ring.
    pub max_angular: usize,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self { quad: QuadOptions::default(), cell: 1.0, ring_growth: 0.25, max_angular: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub region: Region,
    pub order: usize,
    pub depth: u32,
    pub tiles: usize,
}

fn density(curve: &CurveMap, z: C64) -> Result<f64> {
    let d = curve.spherical_derivative(z)?;
    Ok(d * d)
}

/// Ring edges `0 = r_0 < ... = radius`, also passing through every entry of `extra`.
fn ring_edges(radius: f64, extra: &[f64], opts: &EnergyOptions) -> Vec<f64> {
    let mut edges = alloc::vec![0.0];
    let mut r = 0.0;
    while r < radius {
        r = (r + opts.cell.max(opts.ring_growth * r)).min(radius);
        if radius - r < 1e-9 * radius {
            r = radius;
        }
        edges.push(r);
    }
    for &e in extra {
        if e > 0.0 && e < radius && edges.iter().all(|&x| (x - e).abs() > 1e-12 * radius) {
            edges.push(e);
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges
}

/// Polar tiles `(r, θ)` of the ring `r0 <= r <= r1`.
fn ring_rects(r0: f64, r1: f64, opts: &EnergyOptions) -> Vec<Rect> {
    let nt = ((2.0 * PI * r1 / opts.cell).ceil() as usize).clamp(8, opts.max_angular.max(8));
    grid_rects(r0, r1, 0.0, 2.0 * PI, 1, nt)
}

/// Adaptive integral of `f(z, |z - center|)` over the rings `edges[k] <= |z - center| <= edges[k+1]`
/// in polar coordinates.
pub fn integrate_disk<F, const M: usize>(
    f: &F,
    center: C64,
    edges: &[f64],
    opts: &EnergyOptions,
) -> Result<QuadResult<M>>
where
    F: Fn(C64, f64) -> Result<[f64; M]> + Sync,
{
    let mut rects = Vec::new();
    for w in edges.windows(2) {
        rects.extend(ring_rects(w[0], w[1], opts));
    }
    let g = |r: f64, t: f64| {
        let mut v = f(center + C64::new(r * t.cos(), r * t.sin()), r)?;
        for x in v.iter_mut() {
            *x *= r;
        }
        Ok(v)
    };
    integrate_rects(&g, &rects, &opts.quad)
}

/// `∫_region |df|² dx dy`.
pub fn energy(curve: &CurveMap, region: &Region, opts: &EnergyOptions) -> Result<EnergyEstimate> {
    let res = match *region {
        Region::Square { corner, side } => {
            let n = (side / opts.cell).ceil().max(1.0) as usize;
            let rects = grid_rects(corner.re, corner.re + side, corner.im, corner.im + side, n, n);
            let f = |x: f64, y: f64| Ok([density(curve, C64::new(x, y))?]);
            integrate_rects(&f, &rects, &opts.quad)?
        }
        Region::Disk { center, radius } => {
            let edges = ring_edges(radius, &[], opts);
            integrate_disk(&|z, _| Ok([density(curve, z)?]), center, &edges, opts)?
        }
    };
    Ok(EnergyEstimate {
        value: res.value[0],
        error_estimate: res.error,
        region: *region,
        order: opts.quad.order,
        depth: res.depth,
        tiles: res.tiles,
    })
}

/// Total energy of a polynomial curve over the plane: `D_R(0)` by quadrature,
/// the complement `|z| > R` as the energy of `w^d F(1/w)` over `D_{1/R}(0)`.
pub fn rational_total_energy(curve: &CurveMap, cutoff: f64, opts: &EnergyOptions) -> Result<EnergyEstimate> {
    let polys = match curve.view() {
        CurveView::Rational(p) => p,
        _ => return Err(Error::InvalidArgument("total energy needs a polynomial curve".into())),
    };
    let d = curve.degree().unwrap_or(0);
    let reversed: Vec<Vec<C64>> = polys.iter().map(|p| p.reversed(d).coeffs().to_vec()).collect();
    let at_infinity = CurveMap::rational(reversed)?;
    let inner = energy(curve, &Region::disk(C64::new(0.0, 0.0), cutoff)?, opts)?;
    let tail_opts = EnergyOptions { cell: opts.cell.min(0.25 / cutoff), ..*opts };
    let tail = energy(&at_infinity, &Region::disk(C64::new(0.0, 0.0), 1.0 / cutoff)?, &tail_opts)?;
    Ok(EnergyEstimate {
        value: inner.value + tail.value,
        error_estimate: inner.error_estimate + tail.error_estimate,
        depth: inner.depth.max(tail.depth),
        tiles: inner.tiles + tail.tiles,
        ..inner
    })
}

/// Set of translates `a` with `shape + a ⊂ window`; `None` if the shape fits
/// at exactly one translate.
fn feasible_translates(shape: &Region, window: &Region) -> Result<(C64, Option<Region>)> {
    let too_small = || Error::WindowTooSmall(format!("{shape:?} does not fit in {window:?}"));
    let (c, slack) = match (*shape, *window) {
        (Region::Disk { center: cs, radius: rs }, Region::Disk { center: cw, radius: rw }) => (cw - cs, rw - rs),
        (Region::Square { side: ss, .. }, Region::Square { side: sw, .. }) => {
            (window.center() - shape.center(), (sw - ss) / 2.0)
        }
        (Region::Disk { radius: rs, .. }, Region::Square { side: sw, .. }) => {
            (window.center() - shape.center(), sw / 2.0 - rs)
        }
        (Region::Square { side: ss, .. }, Region::Disk { radius: rw, .. }) => {
            (window.center() - shape.center(), rw - ss / 2.0 * 2f64.sqrt())
        }
    };
    let tol = 1e-12 * window.size();
    if slack < -tol {
        return Err(too_small());
    }
    if slack <= tol {
        return Ok((c, None));
    }
    let set = if window.is_disk() {
        Region::disk(c, slack)?
    } else {
        Region::centered_square(c, 2.0 * slack)?
    };
    Ok((c, Some(set)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslateSup {
    pub value: f64,
    pub error_estimate: f64,
    pub translate: C64,
    pub evaluations: usize,
}

/// Windowed `sup_a ∫_{shape + a} |df|²` over translates with `shape + a ⊂ window`.
///
/// Translates are screened on a grid of step `size/4` (radius or side)
/// anchored at the center of the feasible set, then the best one is refined
/// by golden-section search in `x` and then in `y`. The returned value is the
/// adaptive energy of an actual translate, hence a lower bound for the
/// windowed sup.
pub fn sup_translate_energy(curve: &CurveMap, shape: &Region, window: &Region, opts: &EnergyOptions) -> Result<TranslateSup> {
    let (c, set) = feasible_translates(shape, window)?;
    let set = match set {
        None => {
            let e = energy(curve, &shape.translated(c), opts)?;
            return Ok(TranslateSup { value: e.value, error_estimate: e.error_estimate, translate: c, evaluations: 1 });
        }
        Some(s) => s,
    };
    let step = shape.size() / 4.0;
    let reach = (set.size() / step).ceil() as i64;
    let mut cands = Vec::new();
    for j in -reach..=reach {
        for i in -reach..=reach {
            if set.contains(c + C64::new(i as f64 * step, j as f64 * step)) {
                cands.push((i, j));
            }
        }
    }
    // Screen: midpoint sums of |df|² on a grid of step `step/4` anchored at `c`;
    // every translate sees the same footprint of grid offsets.
    let h = step / 4.0;
    let ext = (shape.size() / h).ceil() as i64 + 1;
    let rel = shape.translated(-shape.center());
    let sc = shape.center();
    let mut mask = Vec::new();
    for v in -ext..=ext {
        for u in -ext..=ext {
            if rel.contains(C64::new(u as f64 * h, v as f64 * h)) {
                mask.push((u, v));
            }
        }
    }
    let span = 4 * reach + ext;
    let n = (2 * span + 1) as usize;
    let origin = c + sc - C64::new(span as f64 * h, span as f64 * h);
    let field = FieldGrid::sample(&|z| density(curve, z), origin.re, origin.im, h, n, n)?;
    let screened: Vec<f64> = cands
        .iter()
        .map(|&(p, q)| {
            mask.iter()
                .map(|&(u, v)| field.get((span + 4 * p + u) as usize, (span + 4 * q + v) as usize))
                .sum::<f64>()
        })
        .collect();
    let best = crate::exec::argmax(&screened).unwrap_or(0);
    let cands: Vec<C64> = cands.iter().map(|&(i, j)| c + C64::new(i as f64 * step, j as f64 * step)).collect();
    let mut evaluations = cands.len();
    let full = |a: C64| energy(curve, &shape.translated(a), opts);
    let mut a = cands[best];
    let mut top = full(a)?;
    evaluations += 1;
    for axis in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
        let (lo, hi) = axis_range(&set, a, axis, step);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut l, mut h) = (lo, hi);
        let pt = |t: f64| a + axis * t;
        let mut x1 = h - phi * (h - l);
        let mut x2 = l + phi * (h - l);
        let mut f1 = full(pt(x1))?;
        let mut f2 = full(pt(x2))?;
        evaluations += 2;
        while h - l > 1e-3 * step {
            if f1.value >= f2.value {
                h = x2;
                x2 = x1;
                f2 = f1;
                x1 = h - phi * (h - l);
                f1 = full(pt(x1))?;
            } else {
                l = x1;
                x1 = x2;
                f1 = f2;
                x2 = l + phi * (h - l);
                f2 = full(pt(x2))?;
            }
            evaluations += 1;
        }
        let (t, e) = if f1.value >= f2.value { (x1, f1) } else { (x2, f2) };
        if e.value > top.value {
            top = e;
            a = pt(t);
        }
    }
    Ok(TranslateSup { value: top.value, error_estimate: top.error_estimate, translate: a, evaluations })
}

// Parameter interval `[lo, hi]` (within ±step) along `axis` keeping `a + t·axis` in `set`.
fn axis_range(set: &Region, a: C64, axis: C64, step: f64) -> (f64, f64) {
    let inside = |t: f64| set.contains(a + axis * t);
    let bound = |dir: f64| {
        if inside(dir * step) {
            return dir * step;
        }
        let (mut lo, mut hi) = (0.0, step);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if inside(dir * m) {
                lo = m;
            } else {
                hi = m;
            }
        }
        dir * lo
    };
    (bound(-1.0), bound(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Disk,
    Square,
}

/// Increasing family of disks (radii) or squares (sides) centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct FolnerSequence {
    shape: Shape,
    sizes: Vec<f64>,
}

impl FolnerSequence {
    pub fn new(shape: Shape, sizes: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() || sizes[0] <= 0.0 || sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("Følner sizes must be positive and strictly increasing".into()));
        }
        Ok(Self { shape, sizes })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn member(&self, k: usize) -> Region {
        let s = self.sizes[k];
        let o = C64::new(0.0, 0.0);
        match self.shape {
            Shape::Disk => Region::disk(o, s).expect("positive"),
            Shape::Square => Region::centered_square(o, s).expect("positive"),
        }
    }

    /// `r·perimeter/area` for each member; tends to zero along a Følner family.
    pub fn boundary_ratios(&self, r: f64) -> Vec<f64> {
        self.sizes
            .iter()
            .map(|&s| match self.shape {
                Shape::Disk => r * 2.0 / s,
                Shape::Square => r * 4.0 / s,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoEntry {
    pub size: f64,
    pub area: f64,
    pub rho: f64,
    pub error_estimate: f64,
    pub translate: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoProfile {
    pub shape: Shape,
    pub entries: Vec<RhoEntry>,
    /// Whether `ρ̂` is non-increasing along the family.
    pub monotone_nonincreasing: bool,
    /// `|ρ̂_last - ρ̂_prev| / max(ρ̂_last, ρ̂_prev)` (zero for one entry).
    pub last_relative_change: f64,
}

/// `ρ̂(Ω_n) = sup_translate_energy / area(Ω_n)` for each member.
pub fn rho_estimate(curve: &CurveMap, folner: &FolnerSequence, window: &Region, opts: &EnergyOptions) -> Result<RhoProfile> {
    let mut entries = Vec::new();
    for k in 0..folner.sizes.len() {
        let shape = folner.member(k);
        let s = sup_translate_energy(curve, &shape, window, opts)?;
        entries.push(RhoEntry {
            size: folner.sizes[k],
            area: shape.area(),
            rho: s.value / shape.area(),
            error_estimate: s.error_estimate / shape.area(),
            translate: s.translate,
        });
    }
    let monotone_nonincreasing = entries.windows(2).all(|w| w[1].rho <= w[0].rho * (1.0 + 1e-9));
    let last_relative_change = match entries.len() {
        0 | 1 => 0.0,
        n => relative_gap(entries[n - 1].rho, entries[n - 2].rho),
    };
    Ok(RhoProfile { shape: folner.shape, entries, monotone_nonincreasing, last_relative_change })
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0.0
    } else {
        (a - b).abs() / m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticDensity {
    pub value: f64,
    pub error_estimate: f64,
    pub cell_area: f64,
    pub periodicity_residual: f64,
}

/// Torus average `(1/area) ∫_{C/Λ} |df|²` over one period parallelogram.
pub fn rho_elliptic(curve: &CurveMap, lattice: &Lattice, opts: &EnergyOptions) -> Result<EllipticDensity> {
    let (b1, b2) = lattice.periods();
    let mut residual: f64 = 0.0;
    for k in 0..16 {
        let s = (k as f64 * 0.618_033_988_749_895).fract();
        let t = (k as f64 * 0.754_877_666_246_693).fract();
        let z = b1 * s + b2 * t + C64::new(0.01, 0.02);
        let v = curve.spherical_derivative(z)?;
        for w in [b1, b2] {
            residual = residual.max((curve.spherical_derivative(z + w)? - v).abs());
        }
    }
    if residual > 1e-8 {
        return Err(Error::NotPeriodic(residual));
    }
    let n = (b2.norm() / opts.cell).ceil().max(1.0) as usize;
    let rects = grid_rects(0.0, 1.0, 0.0, 1.0, n, n);
    let area = lattice.area();
    let f = |s: f64, t: f64| Ok([density(curve, b1 * s + b2 * t)? * area]);
    let r = integrate_rects(&f, &rects, &opts.quad)?;
    Ok(EllipticDensity {
        value: r.value[0] / area,
        error_estimate: r.error / area,
        cell_area: area,
        periodicity_residual: residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsaValue {
    pub r: f64,
    pub value: f64,
    pub error_estimate: f64,
}

/// `T(r, f) = ∫_1^r A(t) dt / t` for each radius, with `A(t)` the energy of
/// `D_t(0)`; computed as `ln r · A(r) - ∫_{D_r} |df|² ln max(1, |z|)` from
/// cumulative ring integrals.
pub fn nsa_profile(curve: &CurveMap, radii: &[f64], opts: &EnergyOptions) -> Result<Vec<NsaValue>> {
    if radii.iter().any(|&r| !(r >= 1.0)) {
        return Err(Error::InvalidArgument("characteristic needs r >= 1".into()));
    }
    let r_max = radii.iter().copied().fold(1.0, f64::max);
    let mut extra: Vec<f64> = radii.to_vec();
    extra.push(1.0);
    let edges = ring_edges(r_max, &extra, opts);
    let f = |z: C64, r: f64| {
        let d = density(curve, z)?;
        Ok([d, d * r.max(1.0).ln()])
    };
    let disk_area = PI * r_max * r_max;
    let mut cum = alloc::vec![(0.0, 0.0, 0.0); edges.len()];
    for (k, w) in edges.windows(2).enumerate() {
        let ring_opts = EnergyOptions {
            quad: QuadOptions { abs_tol: opts.quad.abs_tol * PI * (w[1] * w[1] - w[0] * w[0]) / disk_area, ..opts.quad },
            ..*opts
        };
        let q = integrate_disk(&f, C64::new(0.0, 0.0), &[w[0], w[1]], &ring_opts)?;
        let (a, b, e) = cum[k];
        cum[k + 1] = (a + q.value[0], b + q.value[1], e + q.error);
    }
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let k = edges
            .iter()
            .position(|&e| (e - r).abs() <= 1e-12 * r_max)
            .expect("radius is a ring edge");
        let (a, b, e) = cum[k];
        out.push(NsaValue { r, value: r.ln() * a - b, error_estimate: e * r.ln().max(1.0) });
    }
    Ok(out)
}

pub fn nsa_characteristic(curve: &CurveMap, r: f64, opts: &EnergyOptions) -> Result<NsaValue> {
    Ok(nsa_profile(curve, &[r], opts)?[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsaDensity {
    pub value: f64,
    pub r_at_max: f64,
    pub tail: (f64, f64),
    /// `(r, 2T(r)/(πr²))` for each sampled radius.
    pub samples: Vec<(f64, f64)>,
}

/// Finite-scale proxy for `ρ_NSA`: the maximum of `2T(r)/(πr²)` over
/// `r = r_max·2^{-k/8}`, `k = 0..=16`.
pub fn rho_nsa_estimate(curve: &CurveMap, r_max: f64, opts: &EnergyOptions) -> Result<NsaDensity> {
    if !(r_max >= 4.0) {
        return Err(Error::InvalidArgument("rho_nsa_estimate needs r_max >= 4".into()));
    }
    let radii: Vec<f64> = (0..=16).rev().map(|k| r_max * 2f64.powf(-(k as f64) / 8.0)).collect();
    let prof = nsa_profile(curve, &radii, opts)?;
    let samples: Vec<(f64, f64)> = prof.iter().map(|t| (t.r, 2.0 * t.value / (PI * t.r * t.r))).collect();
    let k = crate::exec::argmax(&samples.iter().map(|s| s.1).collect::<Vec<_>>()).unwrap_or(0);
    Ok(NsaDensity { value: samples[k].1, r_at_max: samples[k].0, tail: (r_max / 4.0, r_max), samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FolnerAgreement {
    pub disk: RhoProfile,
    pub square: RhoProfile,
    /// `(area, relative disagreement)` at matched areas.
    pub disagreement: Vec<(f64, f64)>,
}

/// Disk radii `R` against squares of side `sqrt(pi)·R` (equal areas).
pub fn folner_agreement(curve: &CurveMap, radii: &[f64], window: &Region, opts: &EnergyOptions) -> Result<FolnerAgreement> {
    let disks = FolnerSequence::new(Shape::Disk, radii.to_vec())?;
    let squares = FolnerSequence::new(Shape::Square, radii.iter().map(|r| r * crate::SQRT_PI).collect())?;
    let disk = rho_estimate(curve, &disks, window, opts)?;
    let square = rho_estimate(curve, &squares, window, opts)?;
    let disagreement = disk
        .entries
        .iter()
        .zip(&square.entries)
        .map(|(d, s)| (d.area, relative_gap(d.rho, s.rho)))
        .collect();
    Ok(FolnerAgreement { disk, square, disagreement })
}
