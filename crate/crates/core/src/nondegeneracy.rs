//! Windowed Yosida non-degeneracy profiles.
//!
//! For a radius `R` and a window, `δ̂ = min_a sup_{D_R(a)} |df|` with `a`
//! running over a center grid inside the window. All windows share one fine
//! sample grid (step `R/64`) and one center grid (step `R/8`), both anchored
//! at integer multiples of their step, so nested windows see identical
//! centers and `δ̂` can only decrease as the window grows.

use alloc::format;
use alloc::vec::Vec;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::curve::CurveMap;
use crate::exec::par_map;
use crate::region::Region;
use crate::search::{sup_spherical_derivative, FieldGrid};
use crate::{Error, Result, C64};

/// Fine samples per radius.
const FINE: i64 = 64;
/// Fine samples per center step.
const CENTER_STRIDE: i64 = 8;
/// Lowest grid sups that are re-measured with local refinement.
const REFINED_CENTERS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendEntry {
    pub window: Region,
    pub delta: f64,
    /// Center attaining the minimum.
    pub center: C64,
    pub centers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NondegeneracyCertificate {
    pub r: f64,
    pub center_step: f64,
    pub resolution: f64,
    /// `δ̂` of the largest window.
    pub delta: f64,
    pub trend: Vec<TrendEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NondegenerateAtScale,
    DegenerateTrend,
    Inconclusive,
}

/// Profile of `δ̂` over nested windows.
pub fn nondegeneracy_profile(curve: &CurveMap, r: f64, windows: &[Region]) -> Result<NondegeneracyCertificate> {
    if !(r > 0.0) || windows.is_empty() {
        return Err(Error::InvalidArgument("need R > 0 and at least one window".into()));
    }
    if windows.windows(2).any(|w| !w[1].contains_region(&w[0])) {
        return Err(Error::InvalidArgument("windows must be nested".into()));
    }
    let h = r / FINE as f64;
    let cs = h * CENTER_STRIDE as f64;
    let outer = windows[windows.len() - 1];
    let (x0, x1, y0, y1) = outer.bounding_box();
    // Center indices (in units of cs) inside the outer window.
    let (ci0, ci1) = ((x0 / cs).ceil() as i64, (x1 / cs).floor() as i64);
    let (cj0, cj1) = ((y0 / cs).ceil() as i64, (y1 / cs).floor() as i64);
    if ci1 < ci0 || cj1 < cj0 {
        return Err(Error::InvalidArgument(format!("window {outer:?} contains no center at step {cs}")));
    }
    // Fine grid covering every disk D_R(center).
    let gi0 = ci0 * CENTER_STRIDE - FINE;
    let gj0 = cj0 * CENTER_STRIDE - FINE;
    let nx = ((ci1 - ci0) * CENTER_STRIDE + 2 * FINE + 1) as usize;
    let ny = ((cj1 - cj0) * CENTER_STRIDE + 2 * FINE + 1) as usize;
    let field = FieldGrid::sample(&|z| curve.spherical_derivative(z), gi0 as f64 * h, gj0 as f64 * h, h, nx, ny)?;
    let widths: Vec<i64> = (-FINE..=FINE)
        .map(|dy| (((FINE * FINE - dy * dy) as f64).sqrt().floor()) as i64)
        .collect();

    let ncx = (ci1 - ci0 + 1) as usize;
    let ncy = (cj1 - cj0 + 1) as usize;
    let sups = par_map(ncx * ncy, |k| {
        let (ci, cj) = ((k % ncx) as i64, (k / ncx) as i64);
        let (gx, gy) = (ci * CENTER_STRIDE + FINE, cj * CENTER_STRIDE + FINE);
        let mut m: f64 = 0.0;
        for (t, &w) in widths.iter().enumerate() {
            let row = (gy + t as i64 - FINE) as usize;
            let base = row * nx;
            for x in (gx - w)..=(gx + w) {
                m = m.max(field.values[base + x as usize]);
            }
        }
        m
    });
    let center_of = |k: usize| {
        C64::new(
            (ci0 + (k % ncx) as i64) as f64 * cs,
            (cj0 + (k / ncx) as i64) as f64 * cs,
        )
    };

    let mut trend = Vec::with_capacity(windows.len());
    for w in windows {
        let mut inside: Vec<usize> = (0..sups.len()).filter(|&k| w.contains(center_of(k))).collect();
        if inside.is_empty() {
            return Err(Error::InvalidArgument(format!("window {w:?} contains no center at step {cs}")));
        }
        inside.sort_by(|&a, &b| sups[a].partial_cmp(&sups[b]).unwrap().then(a.cmp(&b)));
        let mut best = (f64::INFINITY, C64::new(0.0, 0.0));
        for &k in inside.iter().take(REFINED_CENTERS) {
            let disk = Region::disk(center_of(k), r)?;
            let v = sup_spherical_derivative(curve, &disk, h)?.value.max(sups[k]);
            if v < best.0 {
                best = (v, center_of(k));
            }
        }
        if let Some(&k) = inside.get(REFINED_CENTERS) {
            if sups[k] < best.0 {
                best = (sups[k], center_of(k));
            }
        }
        trend.push(TrendEntry { window: *w, delta: best.0, center: best.1, centers: inside.len() });
    }
    // Refinement of different center subsets can break monotonicity by a few ulps.
    for k in 1..trend.len() {
        if trend[k].delta > trend[k - 1].delta {
            trend[k].delta = trend[k - 1].delta;
            trend[k].center = trend[k - 1].center;
        }
    }
    Ok(NondegeneracyCertificate {
        r,
        center_step: cs,
        resolution: h,
        delta: trend[trend.len() - 1].delta,
        trend,
    })
}

/// Scale-qualified verdict: degenerate when `δ̂` vanishes or falls by more
/// than half across the windows; non-degenerate when `δ̂ >= threshold` and the
/// last two windows differ by less than 5%.
pub fn classify(cert: &NondegeneracyCertificate, threshold: f64) -> Verdict {
    let d: Vec<f64> = cert.trend.iter().map(|t| t.delta).collect();
    let (first, last) = (d[0], d[d.len() - 1]);
    if last <= 0.0 || last * 2.0 < first {
        return Verdict::DegenerateTrend;
    }
    if d.len() >= 2 && last >= threshold {
        let prev = d[d.len() - 2];
        if (prev - last).abs() / prev.max(last) < 0.05 {
            return Verdict::NondegenerateAtScale;
        }
    }
    Verdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SQRT_PI;

    fn sq(w: f64) -> Region {
        Region::centered_square(C64::new(0.0, 0.0), 2.0 * w).unwrap()
    }

    #[test]
    fn constant_is_degenerate() {
        let f = CurveMap::constant(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]).unwrap();
        let c = nondegeneracy_profile(&f, 1.0, &[sq(1.0), sq(2.0)]).unwrap();
        assert!(c.trend.iter().all(|t| t.delta == 0.0));
        assert_eq!(classify(&c, 1e-3), Verdict::DegenerateTrend);
    }

    #[test]
    fn exponential_matches_closed_form() {
        let f = CurveMap::exponential(C64::new(1.0, 0.0));
        let windows = [sq(3.0), sq(4.0), sq(5.0)];
        let c = nondegeneracy_profile(&f, 1.0, &windows).unwrap();
        for (t, w) in c.trend.iter().zip([3.0f64, 4.0, 5.0]) {
            let exact = 1.0 / (2.0 * SQRT_PI * (w - 1.0).cosh());
            assert!((t.delta - exact).abs() < 1e-9 * exact, "{} {}", t.delta, exact);
        }
        assert_eq!(classify(&c, 1e-3), Verdict::DegenerateTrend);
    }

    #[test]
    fn rejects_non_nested() {
        let f = CurveMap::identity();
        assert!(nondegeneracy_profile(&f, 1.0, &[sq(2.0), sq(1.0)]).is_err());
    }
}
