//! Compact-open metric on curve space and its translate-amplified versions.
//!
//! `dist(g, h) = Σ_{n>=0} 10⁻ⁿ sup_{|z|<=n} d(g(z), h(z))`, truncated at
//! `n_max`. Disk sups are read off one shared grid on `D_{n_max}` and refined
//! locally, so every value is a lower bound up to the reported slack.

use alloc::vec;
use alloc::vec::Vec;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::curve::CurveMap;
use crate::exec::try_par_map;
use crate::projective::lift_distance;
use crate::region::Region;
use crate::search::{maximize, refine_max, sample_points};
use crate::{Error, Result, C64, SQRT_PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceOptions {
    /// Last term of the series.
    pub n_max: usize,
    /// Grid spacing for the disk sups.
    pub resolution: f64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self { n_max: 12, resolution: 0.05 }
    }
}

impl DistanceOptions {
    /// `(√π/2)·10^{-n_max}/9`: the dropped terms at most reach the diameter.
    pub fn truncation_error(&self) -> f64 {
        0.5 * SQRT_PI * 10f64.powi(-(self.n_max as i32)) / 9.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub truncation_error: f64,
    /// `(10/9)·L·h` with `L` the sampled max of `|dg| + |dh|` (a Lipschitz
    /// bound for `z ↦ d(g(z), h(z))`) and `h` the grid step.
    pub sampling_slack: f64,
    /// `sups[n]` is the sampled `sup_{|z|<=n} d(g(z), h(z))`.
    pub sups: Vec<f64>,
}

impl Distance {
    pub fn error_bound(&self) -> f64 {
        self.truncation_error + self.sampling_slack
    }

    /// Sampled `sup d(g(z), h(z))` over the largest disk.
    pub fn sup(&self) -> f64 {
        self.sups[self.sups.len() - 1]
    }
}

fn pointwise(g: &CurveMap, h: &CurveMap, z: C64) -> Result<(f64, f64)> {
    let (lg, lh) = (g.lift(z)?, h.lift(z)?);
    Ok((lift_distance(&lg.f, &lh.f), lg.spherical_derivative() + lh.spherical_derivative()))
}

pub fn curve_distance(g: &CurveMap, h: &CurveMap, opts: &DistanceOptions) -> Result<Distance> {
    if opts.n_max < 1 || !(opts.resolution > 0.0) {
        return Err(Error::InvalidArgument("need n_max >= 1 and a positive resolution".into()));
    }
    if g.dim() != h.dim() {
        return Err(Error::InvalidArgument("curves have different target dimensions".into()));
    }
    let nm = opts.n_max;
    // Integer radii fall on grid lines.
    let k = (1.0 / opts.resolution).ceil() as i64;
    let step = 1.0 / k as f64;
    let half = nm as i64 * k;
    let side = (2 * half + 1) as usize;
    // Per row: bucket maxima (bucket n holds n-1 < |z| <= n) with argmax, and the Lipschitz max.
    let rows = try_par_map(side, |j| {
        let y = (j as i64 - half) as f64 * step;
        let mut best = vec![(f64::NEG_INFINITY, C64::new(0.0, 0.0)); nm + 1];
        let mut lip: f64 = 0.0;
        for i in 0..side {
            let z = C64::new((i as i64 - half) as f64 * step, y);
            let r = z.norm();
            if r > nm as f64 + 1e-12 {
                continue;
            }
            let b = ((r - 1e-12).ceil().max(0.0) as usize).min(nm);
            let (d, l) = pointwise(g, h, z)?;
            lip = lip.max(l);
            if d > best[b].0 {
                best[b] = (d, z);
            }
        }
        Ok((best, lip))
    })?;
    let mut bucket = vec![(f64::NEG_INFINITY, C64::new(0.0, 0.0)); nm + 1];
    let mut lip: f64 = 0.0;
    for (row, l) in rows {
        lip = lip.max(l);
        for (b, v) in row.into_iter().enumerate() {
            if v.0 > bucket[b].0 {
                bucket[b] = v;
            }
        }
    }
    let f = |z: C64| Ok(pointwise(g, h, z)?.0);
    let mut sups = Vec::with_capacity(nm + 1);
    sups.push(f(C64::new(0.0, 0.0))?);
    let mut running = bucket[0];
    for n in 1..=nm {
        if bucket[n].0 > running.0 {
            running = bucket[n];
        }
        let disk = Region::disk(C64::new(0.0, 0.0), n as f64)?;
        let (_, v) = refine_max(&f, &disk, running.1, running.0, step)?;
        // Keep the sequence monotone in n.
        sups.push(v.max(sups[n - 1]));
    }
    let value = sups.iter().enumerate().map(|(n, s)| s * 10f64.powi(-(n as i32))).sum();
    Ok(Distance {
        value,
        truncation_error: opts.truncation_error(),
        sampling_slack: 10.0 / 9.0 * lip * step,
        sups,
    })
}

/// `sup_a dist(g(·+a), h(·+a))` over the given translates.
pub fn dist_translates(g: &CurveMap, h: &CurveMap, translates: &[C64], opts: &DistanceOptions) -> Result<Distance> {
    let mut best: Option<Distance> = None;
    for &a in translates {
        let d = curve_distance(&g.translate(a), &h.translate(a), opts)?;
        best = Some(match best {
            None => d,
            Some(b) => {
                let mut keep = if d.value > b.value { d.clone() } else { b.clone() };
                keep.sampling_slack = b.sampling_slack.max(d.sampling_slack);
                for (s, t) in keep.sups.iter_mut().zip(b.sups.iter().zip(&d.sups)) {
                    *s = t.0.max(*t.1);
                }
                keep
            }
        });
    }
    best.ok_or_else(|| Error::InvalidArgument("no translates".into()))
}

/// `d_Ω(g, h) = sup_{a∈Ω} dist(g(·+a), h(·+a))` over translates sampled from
/// `Ω` at `translate_resolution`. `sups` holds the sups over all translates.
pub fn dist_omega(
    g: &CurveMap,
    h: &CurveMap,
    omega: &Region,
    translate_resolution: f64,
    opts: &DistanceOptions,
) -> Result<Distance> {
    let (pts, _) = sample_points(omega, translate_resolution);
    dist_translates(g, h, &pts, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub dist_omega: f64,
    /// Sampled `sup_{z∈Ω} d(g(z), h(z))`.
    pub sup_omega: f64,
    /// Sampled `sup_z d(g(z), h(z))` over `Ω + D_{n_max}`.
    pub sup_plane: f64,
    pub lhs: f64,
    /// `sup_plane / 9`.
    pub rhs: f64,
    pub margin: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Both sides of `|d_Ω(g,h) - sup_Ω d(g,h)| <= (1/9) sup_ℂ d(g,h)`.
pub fn dist_inequality_check(
    g: &CurveMap,
    h: &CurveMap,
    omega: &Region,
    translate_resolution: f64,
    opts: &DistanceOptions,
) -> Result<InequalityReport> {
    let d = dist_omega(g, h, omega, translate_resolution, opts)?;
    let sup_omega = maximize(&|z| Ok(pointwise(g, h, z)?.0), omega, opts.resolution)?.value;
    let sup_plane = d.sup().max(sup_omega);
    let lhs = (d.value - sup_omega).abs();
    let rhs = sup_plane / 9.0;
    let slack = d.error_bound() + 1e-12;
    Ok(InequalityReport {
        dist_omega: d.value,
        sup_omega,
        sup_plane,
        lhs,
        rhs,
        margin: rhs - lhs,
        slack,
        holds: lhs <= rhs + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{fs_distance, ProjectivePoint};

    fn opts() -> DistanceOptions {
        DistanceOptions { n_max: 4, resolution: 0.1 }
    }

    #[test]
    fn self_distance_is_zero() {
        let f = CurveMap::exponential(C64::new(0.3, 0.1));
        let d = curve_distance(&f, &f, &opts()).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn constant_pair_is_geometric_series() {
        let (p, q) = ([C64::new(1.0, 0.0), C64::new(0.5, 0.0)], [C64::new(0.0, 1.0), C64::new(1.0, 0.0)]);
        let (g, h) = (CurveMap::constant(&p).unwrap(), CurveMap::constant(&q).unwrap());
        let o = DistanceOptions { n_max: 12, resolution: 0.25 };
        let d = curve_distance(&g, &h, &o).unwrap();
        let dpq = fs_distance(&ProjectivePoint::new(&p).unwrap(), &ProjectivePoint::new(&q).unwrap());
        assert!((d.value - 10.0 / 9.0 * dpq).abs() <= d.truncation_error + 1e-15);
        let r = dist_inequality_check(&g, &h, &Region::disk(C64::new(0.0, 0.0), 1.0).unwrap(), 0.5, &o).unwrap();
        assert!(r.holds);
        assert!(r.margin.abs() <= r.slack);
    }

    #[test]
    fn disk_sups_are_monotone() {
        let (g, h) = (CurveMap::identity(), CurveMap::exponential(C64::new(0.5, 0.0)));
        let d = curve_distance(&g, &h, &opts()).unwrap();
        assert!(d.sups.windows(2).all(|w| w[0] <= w[1]));
        assert!((d.value - d.sups[0]).abs() <= d.sup() / 9.0 + d.error_bound());
    }
}
