//! Tensor Gauss-Legendre quadrature with dyadic adaptive refinement.
//!
//! Every tile is integrated once with the base rule and once as four
//! children; the tile is accepted when the two agree to
//! `max(rel_tol·|fine|, abs_tol·area_share)`, otherwise each child is refined
//! in turn. Top-level tiles run in parallel and are summed pairwise in index
//! order, children in a fixed order, so the result does not depend on the
//! thread count.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::exec::{pairwise_sum, try_par_map};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Points per axis of the base rule.
    pub order: usize,
    pub rel_tol: f64,
    /// Absolute tolerance for the whole domain, shared out by tile area.
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { order: 16, rel_tol: 1e-10, abs_tol: 1e-12, max_depth: 12 }
    }
}

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Plain (non-adaptive) rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(m + h * x);
        }
        s * h
    }
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    fn children(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

/// Splits a rectangle into an `nx × ny` grid of tiles, row by row.
pub fn grid_rects(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Vec<Rect> {
    let (nx, ny) = (nx.max(1), ny.max(1));
    let hx = (x1 - x0) / nx as f64;
    let hy = (y1 - y0) / ny as f64;
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(Rect {
                x0: x0 + i as f64 * hx,
                x1: if i + 1 == nx { x1 } else { x0 + (i + 1) as f64 * hx },
                y0: y0 + j as f64 * hy,
                y1: if j + 1 == ny { y1 } else { y0 + (j + 1) as f64 * hy },
            });
        }
    }
    out
}

/// Integral of a vector-valued function, with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const M: usize> {
    pub value: [f64; M],
    /// Sum over accepted tiles of the coarse/fine discrepancy (max component).
    pub error: f64,
    /// Deepest subdivision level used.
    pub depth: u32,
    /// Number of accepted leaf tiles.
    pub tiles: usize,
}

struct Ctx<'a, F> {
    f: &'a F,
    gl: &'a GaussLegendre,
    opts: QuadOptions,
    total_area: f64,
}

impl<F, const M: usize> Ctx<'_, F>
where
    F: Fn(f64, f64) -> Result<[f64; M]>,
{
    fn rule(&self, r: &Rect) -> Result<[f64; M]> {
        let (mx, hx) = (0.5 * (r.x0 + r.x1), 0.5 * (r.x1 - r.x0));
        let (my, hy) = (0.5 * (r.y0 + r.y1), 0.5 * (r.y1 - r.y0));
        let mut acc = [0.0; M];
        for (yn, yw) in self.gl.nodes.iter().zip(&self.gl.weights) {
            let y = my + hy * yn;
            let mut row = [0.0; M];
            for (xn, xw) in self.gl.nodes.iter().zip(&self.gl.weights) {
                let v = (self.f)(mx + hx * xn, y)?;
                for k in 0..M {
                    row[k] += xw * v[k];
                }
            }
            for k in 0..M {
                acc[k] += yw * row[k];
            }
        }
        for a in acc.iter_mut() {
            *a *= hx * hy;
        }
        Ok(acc)
    }

    fn adapt(&self, r: &Rect, coarse: [f64; M], depth: u32, out: &mut QuadResult<M>) -> Result<()> {
        let kids = r.children();
        let mut parts = [[0.0; M]; 4];
        for (p, k) in parts.iter_mut().zip(&kids) {
            *p = self.rule(k)?;
        }
        let mut fine = [0.0; M];
        for k in 0..M {
            fine[k] = (parts[0][k] + parts[1][k]) + (parts[2][k] + parts[3][k]);
        }
        let diff = (0..M).map(|k| (fine[k] - coarse[k]).abs()).fold(0.0, f64::max);
        let scale = fine.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let share = self.opts.abs_tol * r.area() / self.total_area;
        if diff <= (self.opts.rel_tol * scale).max(share) {
            for k in 0..M {
                out.value[k] += fine[k];
            }
            out.error += diff;
            out.depth = out.depth.max(depth + 1);
            out.tiles += 1;
            return Ok(());
        }
        if depth + 1 >= self.opts.max_depth {
            return Err(Error::QuadratureNonConvergent { depth: depth + 1, discrepancy: diff });
        }
        for (k, p) in kids.iter().zip(parts) {
            self.adapt(k, p, depth + 1, out)?;
        }
        Ok(())
    }
}

/// Adaptive integral of `f(x, y)` over the union of disjoint `rects`.
pub fn integrate_rects<F, const M: usize>(f: &F, rects: &[Rect], opts: &QuadOptions) -> Result<QuadResult<M>>
where
    F: Fn(f64, f64) -> Result<[f64; M]> + Sync,
{
    let gl = GaussLegendre::new(opts.order);
    let total_area: f64 = rects.iter().map(Rect::area).sum();
    if !(total_area > 0.0) {
        return Err(Error::InvalidArgument("integration domain has zero area".into()));
    }
    let ctx = Ctx { f, gl: &gl, opts: *opts, total_area };
    let parts = try_par_map(rects.len(), |i| {
        let mut out = QuadResult { value: [0.0; M], error: 0.0, depth: 0, tiles: 0 };
        let coarse = ctx.rule(&rects[i])?;
        ctx.adapt(&rects[i], coarse, 0, &mut out)?;
        Ok(out)
    })?;
    let mut value = [0.0; M];
    for (k, v) in value.iter_mut().enumerate() {
        let comps: Vec<f64> = parts.iter().map(|p| p.value[k]).collect();
        *v = pairwise_sum(&comps);
    }
    let errs: Vec<f64> = parts.iter().map(|p| p.error).collect();
    Ok(QuadResult {
        value,
        error: pairwise_sum(&errs),
        depth: parts.iter().map(|p| p.depth).max().unwrap_or(0),
        tiles: parts.iter().map(|p| p.tiles).sum(),
    })
}

/// Adaptive one-dimensional integral by interval bisection; returns
/// `(value, error_estimate)`.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let gl = GaussLegendre::new(opts.order);
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        gl: &GaussLegendre,
        opts: &QuadOptions,
        a: f64,
        b: f64,
        coarse: f64,
        depth: u32,
        len: f64,
    ) -> Result<(f64, f64)> {
        let m = 0.5 * (a + b);
        let (l, r) = (gl.integrate(a, m, f), gl.integrate(m, b, f));
        let fine = l + r;
        let diff = (fine - coarse).abs();
        if diff <= (opts.rel_tol * fine.abs()).max(opts.abs_tol * (b - a) / len) {
            return Ok((fine, diff));
        }
        if depth + 1 >= opts.max_depth * 4 {
            return Err(Error::QuadratureNonConvergent { depth: depth + 1, discrepancy: diff });
        }
        let (lv, le) = rec(f, gl, opts, a, m, l, depth + 1, len)?;
        let (rv, re) = rec(f, gl, opts, m, b, r, depth + 1, len)?;
        Ok((lv + rv, le + re))
    }
    let coarse = gl.integrate(a, b, &f);
    rec(&f, &gl, opts, a, b, coarse, 0, b - a)
}
