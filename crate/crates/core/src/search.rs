//! Sup-norm search: grid sampling followed by local pattern-search refinement.
//!
//! Results are lower bounds for the true supremum over the region; the grid
//! step is reported with every estimate.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2 as D, PI};

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::curve::CurveMap;
use crate::exec::try_par_map;
use crate::region::Region;
use crate::{Error, Result, C64};

/// Candidates from the grid that are refined locally.
const REFINE_CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: C64,
    pub grid_step: f64,
    pub samples: usize,
}

/// Values of a scalar field on the grid `x0 + i·step, y0 + j·step`,
/// `0 <= i < nx`, `0 <= j < ny`, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub x0: f64,
    pub y0: f64,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl FieldGrid {
    pub fn sample<F>(f: &F, x0: f64, y0: f64, step: f64, nx: usize, ny: usize) -> Result<Self>
    where
        F: Fn(C64) -> Result<f64> + Sync,
    {
        let rows = try_par_map(ny, |j| {
            let y = y0 + j as f64 * step;
            (0..nx).map(|i| f(C64::new(x0 + i as f64 * step, y))).collect::<Result<Vec<f64>>>()
        })?;
        Ok(Self { x0, y0, step, nx, ny, values: rows.concat() })
    }

    pub fn point(&self, i: usize, j: usize) -> C64 {
        C64::new(self.x0 + i as f64 * self.step, self.y0 + j as f64 * self.step)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }
}

/// Sample points covering `region` with spacing at most `resolution`; disks
/// also get their boundary circle. Returns the points and the grid step.
pub fn sample_points(region: &Region, resolution: f64) -> (Vec<C64>, f64) {
    let (x0, x1, y0, _) = region.bounding_box();
    let n = ((x1 - x0) / resolution).ceil().max(1.0) as usize;
    let h = (x1 - x0) / n as f64;
    let mut pts = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let z = C64::new(x0 + i as f64 * h, y0 + j as f64 * h);
            if region.contains(z) {
                pts.push(z);
            }
        }
    }
    if let Region::Disk { center, radius } = *region {
        let m = ((2.0 * PI * radius / resolution).ceil() as usize).max(8);
        for k in 0..m {
            let t = 2.0 * PI * k as f64 / m as f64;
            pts.push(center + C64::new(t.cos(), t.sin()) * radius);
        }
    }
    (pts, h)
}

fn project(region: &Region, z: C64) -> C64 {
    match *region {
        Region::Disk { center, radius } => {
            let d = z - center;
            if d.norm() > radius {
                center + d * (radius / d.norm())
            } else {
                z
            }
        }
        Region::Square { corner, side } => C64::new(
            z.re.clamp(corner.re, corner.re + side),
            z.im.clamp(corner.im, corner.im + side),
        ),
    }
}

/// Compass search from `z` with initial step `h`, staying inside `region`.
pub fn refine_max<F>(f: &F, region: &Region, mut z: C64, mut value: f64, h: f64) -> Result<(C64, f64)>
where
    F: Fn(C64) -> Result<f64>,
{
    let dirs = [
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
        C64::new(D, D),
        C64::new(-D, D),
        C64::new(D, -D),
        C64::new(-D, -D),
    ];
    let mut s = 0.5 * h;
    let stop = h * 1e-7;
    let mut iters = 0;
    while s > stop && iters < 2000 {
        iters += 1;
        let mut moved = false;
        for d in dirs {
            let w = project(region, z + d * s);
            let v = f(w)?;
            if v > value {
                z = w;
                value = v;
                moved = true;
                break;
            }
        }
        if !moved {
            s *= 0.5;
        }
    }
    Ok((z, value))
}

/// Lower bound for `sup_region f`: grid sampling at `resolution`, then
/// pattern-search refinement of the best few samples.
pub fn maximize<F>(f: &F, region: &Region, resolution: f64) -> Result<SupEstimate>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    if !(resolution > 0.0) {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let (pts, h) = sample_points(region, resolution);
    let vals = try_par_map(pts.len(), |i| f(pts[i]))?;
    let mut order: Vec<usize> = (0..pts.len()).filter(|&i| !vals[i].is_nan()).collect();
    order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap().then(a.cmp(&b)));
    let cand: Vec<usize> = order.into_iter().take(REFINE_CANDIDATES).collect();
    let refined = try_par_map(cand.len(), |k| refine_max(f, region, pts[cand[k]], vals[cand[k]], h))?;
    let mut best = (C64::new(0.0, 0.0), f64::NEG_INFINITY);
    for (z, v) in refined {
        if v > best.1 {
            best = (z, v);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::InvalidArgument("no finite sample in region".into()));
    }
    Ok(SupEstimate { value: best.1, argmax: best.0, grid_step: h, samples: pts.len() })
}

pub fn sup_spherical_derivative(curve: &CurveMap, region: &Region, resolution: f64) -> Result<SupEstimate> {
    maximize(&|z| curve.spherical_derivative(z), region, resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SQRT_PI;

    #[test]
    fn identity_on_disk() {
        let r = Region::disk(C64::new(0.0, 0.0), 2.0).unwrap();
        let s = sup_spherical_derivative(&CurveMap::identity(), &r, 0.13).unwrap();
        assert!((s.value - 1.0 / SQRT_PI).abs() < 1e-14);
        assert!(s.argmax.norm() < 1e-6);
    }

    #[test]
    fn exponential_on_unit_square() {
        let r = Region::square(C64::new(0.0, 0.0), 1.0).unwrap();
        let s = sup_spherical_derivative(&CurveMap::exponential(C64::new(1.0, 0.0)), &r, 0.1).unwrap();
        assert!((s.value - 0.5 / SQRT_PI).abs() < 1e-15);
        assert!(s.argmax.re.abs() < 1e-15);
    }

    #[test]
    fn off_grid_peak_is_refined() {
        let r = Region::square(C64::new(-1.0, -1.0), 2.0).unwrap();
        let p = C64::new(0.123_456, -0.314_15);
        let f = |z: C64| Ok(1.0 / (1.0 + (z - p).norm_sqr()));
        let s = maximize(&f, &r, 0.25).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_is_zero() {
        let f = CurveMap::constant(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]).unwrap();
        let r = Region::disk(C64::new(5.0, 5.0), 1.0).unwrap();
        assert_eq!(sup_spherical_derivative(&f, &r, 0.1).unwrap().value, 0.0);
    }
}
