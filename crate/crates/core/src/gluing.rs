//! The rational-bump gluing construction.
//!
//! A bump `q(z) = [1 : a/z³ : ... : a/z³]` is normalized by `‖dq‖∞ = 1/12`.
//! Gluing at `p` adds `a/(z-p)³` to every affine component of `U·f`, where
//! `U` is the unitary moving `f(p)` to `[1:0:...:0]`, and maps back with
//! `U⁻¹`. The constants `(a, δ₀, R₀, K, ε)` either come from the closed
//! inequality system (analytic mode) or are supplied by the user and checked
//! after the fact (empirical mode).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg_attr(feature = "parallel", allow(unused_imports))]
use num_traits::Float;

use crate::curve::{Bump, CurveMap, CurveView};
use crate::energy::{energy, EnergyOptions};
use crate::exec::try_par_map;
use crate::linalg::Unitary;
use crate::projective::lift_distance;
use crate::quadrature::QuadOptions;
use crate::region::Region;
use crate::search::{maximize, sup_spherical_derivative};
use crate::{Error, Result, C64, SQRT_PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluingConstants {
    pub n: usize,
    pub a: f64,
    pub delta0: f64,
    pub r0: f64,
    pub k: f64,
    pub eps_glue: f64,
    pub mode: Mode,
}

/// One inequality of the constants system, evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Amplitude with `max_r |dq| = 1/12`: `a = 12³·4 / (π^{3/2} √N)`.
pub fn bump_amplitude(n: usize) -> f64 {
    12f64.powi(3) * 4.0 / (PI.powf(1.5) * (n as f64).sqrt())
}

/// Radius where `|dq|` peaks: `r⁶ = N a² / 2`.
pub fn bump_peak_radius(a: f64, n: usize) -> f64 {
    (n as f64 * a * a / 2.0).powf(1.0 / 6.0)
}

/// `|dq|(r) = 3a√N r² / (√π (r⁶ + N a²))`.
pub fn bump_profile(a: f64, n: usize, r: f64) -> f64 {
    let nf = n as f64;
    3.0 * a * nf.sqrt() * r * r / (SQRT_PI * (r.powi(6) + nf * a * a))
}

/// `(K_a, K'_a, K)`.
pub fn k_constants(a: f64, n: usize) -> (f64, f64, f64) {
    let nf = n as f64;
    let s2 = 2f64.sqrt();
    let ka = 4.0 * a * (nf + 1.0).sqrt() * (SQRT_PI + 3.0 * a) + 3.0 * a;
    let kpa = 4.0 * a * (nf + 1.0).sqrt() * (SQRT_PI + 3.0 * a * s2 + 2.0 * a * SQRT_PI) + 3.0 * a * s2 + 2.0 * a * SQRT_PI;
    let pairs = nf * (nf - 1.0) / 2.0;
    let k = (a * (2.0 * nf / PI).sqrt()).max((nf * ka * ka + pairs * kpa * kpa).sqrt() / SQRT_PI);
    (ka, kpa, k)
}

// Largest ε meeting every ε-constraint at the given R₀.
fn max_eps(a: f64, n: usize, r0: f64) -> f64 {
    let mut e = (a / r0.powi(3)).min(1.5 * a / r0.powi(4)).min(0.5 * a / r0.powi(3)).min(a / r0.powi(4));
    if n >= 2 {
        // 2R₀⁴ ε² + (6a + 2aR₀) ε - a/√C(N,2) <= 0
        let pairs = (n * (n - 1) / 2) as f64;
        let (qa, qb, qc) = (2.0 * r0.powi(4), 6.0 * a + 2.0 * a * r0, -a / pairs.sqrt());
        let root = (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
        e = e.min(root);
    }
    e
}

// δ₀ small enough that |df| < δ₀ on D_{R₀} forces |f_i|, |f_i'| <= ε there.
fn delta0_for(eps: f64, r0: f64) -> f64 {
    (1.0 / 96.0)
        .min(1.0 / 6.0)
        .min(eps.atan() / (SQRT_PI * r0))
        .min(eps / (SQRT_PI * (1.0 + eps * eps)))
}

impl GluingConstants {
    /// Every inequality of the system, evaluated directly.
    pub fn checks(&self) -> Vec<ConstraintCheck> {
        let (a, r0, e, n) = (self.a, self.r0, self.eps_glue, self.n);
        let nf = n as f64;
        let (_, _, k_formula) = k_constants(a, n);
        let q_sup = bump_sup_numeric(a, n);
        let c = |name, lhs: f64, rhs: f64| ConstraintCheck { name, lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-12) };
        let mut v = alloc::vec![
            ConstraintCheck { name: "max |dq| = 1/12", lhs: q_sup, rhs: 1.0 / 12.0, holds: (q_sup - 1.0 / 12.0).abs() <= 1e-9 },
            c("peak radius <= R0", bump_peak_radius(a, n), r0),
            c("delta0 <= 1/96", self.delta0, 1.0 / 96.0),
            c("delta0 <= 1/6", self.delta0, 1.0 / 6.0),
            c("eps <= a/R0^3", e, a / r0.powi(3)),
            c("eps <= 3a/(2 R0^4)", e, 1.5 * a / r0.powi(4)),
            c("eps R0^3 <= a/2", e * r0.powi(3), a / 2.0),
            c("R0^4 eps <= a", r0.powi(4) * e, a),
            c("N a / R0^3 <= 2", nf * a / r0.powi(3), 2.0),
            c("N a^2 / R0^6 <= 1/2", nf * a * a / r0.powi(6), 0.5),
            c("K / R0^3 <= 1/2", self.k / r0.powi(3), 0.5),
            c("R0 >= 1", 1.0, r0),
            c("delta0 <= atan(eps)/(sqrt(pi) R0)", self.delta0, e.atan() / (SQRT_PI * r0)),
            c("delta0 <= eps/(sqrt(pi)(1+eps^2))", self.delta0, e / (SQRT_PI * (1.0 + e * e))),
        ];
        if n >= 2 {
            let pairs = (n * (n - 1) / 2) as f64;
            v.push(c(
                "2 eps^2 R0^4 + 6 a eps + 2 a eps R0 <= a/sqrt(C(N,2))",
                2.0 * e * e * r0.powi(4) + 6.0 * a * e + 2.0 * a * e * r0,
                a / pairs.sqrt(),
            ));
        }
        v.push(ConstraintCheck {
            name: "K = max(a sqrt(2N/pi), sqrt(N Ka^2 + C(N,2) Ka'^2)/sqrt(pi))",
            lhs: self.k,
            rhs: k_formula,
            holds: (self.k - k_formula).abs() <= 1e-12 * k_formula,
        });
        v
    }

    /// User-chosen `R₀` and `K`; `a` from the normalization, `ε` maximal for
    /// `R₀` and `δ₀ = min(1/96, ...)` as in analytic mode unless given.
    pub fn empirical(n: usize, r0: f64, k: f64, delta0: Option<f64>) -> Result<Self> {
        if n < 1 || !(r0 > 0.0) || !(k > 0.0) {
            return Err(Error::InvalidArgument("empirical constants need N >= 1, R0 > 0, K > 0".into()));
        }
        let a = bump_amplitude(n);
        let eps = max_eps(a, n, r0.max(1.0));
        Ok(Self { n, a, delta0: delta0.unwrap_or(1.0 / 96.0), r0, k, eps_glue: eps, mode: Mode::Empirical })
    }
}

/// Numeric maximum of the closed-form bump profile (golden section on `ln r`).
fn bump_sup_numeric(a: f64, n: usize) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-10.0f64, 20.0f64);
    let g = |t: f64| bump_profile(a, n, t.exp());
    while hi - lo > 1e-12 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if g(x1) >= g(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    g(0.5 * (lo + hi))
}

/// Constants for `N`. Analytic mode takes the smallest dyadic `R₀ <= 2²⁰`
/// satisfying the system; empirical mode needs `(R₀, K)` from the caller.
pub fn solve_constants(n: usize, mode: Mode, empirical: Option<(f64, f64)>) -> Result<GluingConstants> {
    if n < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    match mode {
        Mode::Empirical => {
            let (r0, k) = empirical.ok_or_else(|| Error::InvalidArgument("empirical mode needs (R0, K)".into()))?;
            GluingConstants::empirical(n, r0, k, None)
        }
        Mode::Analytic => {
            let a = bump_amplitude(n);
            let (_, _, k) = k_constants(a, n);
            for e in 0..=20 {
                let r0 = 2f64.powi(e);
                let eps = max_eps(a, n, r0);
                if !(eps > 0.0) {
                    continue;
                }
                let c = GluingConstants { n, a, delta0: delta0_for(eps, r0), r0, k, eps_glue: eps, mode };
                if c.checks().iter().all(|ch| ch.holds) {
                    return Ok(c);
                }
            }
            Err(Error::Infeasible(format!("no dyadic R0 <= 2^20 satisfies the system for N = {n}")))
        }
    }
}

/// `q(z) = [z³ : a : ... : a]`.
pub fn bump_curve(a: f64, n: usize) -> Result<CurveMap> {
    if !(a > 0.0) || n < 1 {
        return Err(Error::InvalidArgument("bump needs a > 0 and N >= 1".into()));
    }
    let z = C64::new(0.0, 0.0);
    let mut comps = alloc::vec![alloc::vec![z, z, z, C64::new(1.0, 0.0)]];
    comps.extend((0..n).map(|_| alloc::vec![C64::new(a, 0.0)]));
    CurveMap::rational(comps)
}

/// Glues a bump at `p` with an explicit normalization `U` (`U·f(p)` should be
/// `[1:0:...:0]`); no preconditions are checked. Bumps on an already glued
/// curve are appended to its list.
pub fn glue_with_normalization(f: &CurveMap, p: C64, a: f64, u: Unitary) -> Result<CurveMap> {
    let bump = Bump::new(p, a, u)?;
    match f.view() {
        CurveView::Glued { base, bumps } => {
            let mut all = bumps.to_vec();
            all.push(bump);
            CurveMap::glued(base, all)
        }
        _ => CurveMap::glued(f, alloc::vec![bump]),
    }
}

/// Result of a checked single glue.
#[derive(Debug, Clone, PartialEq)]
pub struct GlueOutcome {
    pub curve: CurveMap,
    pub sup_before: f64,
    pub normalization: Unitary,
}

/// Single glue at `p` after checking `‖df‖_{D_R(p)} < δ₀` (sampled at
/// `resolution`) and `R >= R₀ + 1`.
pub fn glue_once(f: &CurveMap, p: C64, r: f64, consts: &GluingConstants, resolution: f64) -> Result<GlueOutcome> {
    if r < consts.r0 + 1.0 {
        return Err(Error::PreconditionViolated(format!("R = {r} < R0 + 1 = {}", consts.r0 + 1.0)));
    }
    let sup = sup_spherical_derivative(f, &Region::disk(p, r)?, resolution)?.value;
    if sup >= consts.delta0 {
        return Err(Error::PreconditionViolated(format!(
            "sup |df| on D_R(p) is {sup:e}, not below delta0 = {:e}",
            consts.delta0
        )));
    }
    let u = Unitary::to_first_axis(&f.lift(p)?.f)?;
    let curve = glue_with_normalization(f, p, consts.a, u.clone())?;
    Ok(GlueOutcome { curve, sup_before: sup, normalization: u })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub radii: usize,
    pub angles: usize,
    pub resolution: f64,
    /// Selects the angular offset of the sample rays.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { radii: 48, angles: 32, resolution: 0.05, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCheck {
    /// `sup r³·dev(r)` over the annulus.
    pub prefactor: f64,
    /// Log-log slope of `max_θ dev` over the outer decade.
    pub slope: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluingReport {
    pub center: C64,
    pub r: f64,
    pub r_out: f64,
    pub k: f64,
    /// `‖dg‖_{D_R(p)}` and whether it lies in `[δ₀, 2/3]`.
    pub sup_inner: f64,
    pub condition_i: bool,
    /// `||dg| - |df||`: cubic or faster decay, prefactor at most `K`.
    pub condition_ii: DecayCheck,
    /// `d(f, g)`: slope `-3 ± 0.1`, prefactor at most `K`.
    pub condition_iii: DecayCheck,
    /// `(r, max_θ ||dg|-|df||, max_θ d(f,g))` per sampled radius.
    pub profile: Vec<(f64, f64, f64)>,
}

impl GluingReport {
    pub fn passed(&self) -> bool {
        self.condition_i && self.condition_ii.holds && self.condition_iii.holds
    }
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Samples the three conditions of a single glue over `R <= |z - p| <= R_out`.
pub fn verify_glue(
    f: &CurveMap,
    g: &CurveMap,
    p: C64,
    r: f64,
    k: f64,
    r_out: f64,
    delta0: f64,
    opts: &VerifyOptions,
) -> Result<GluingReport> {
    if !(r_out > r) {
        return Err(Error::InvalidArgument("need R_out > R".into()));
    }
    let sup_inner = sup_spherical_derivative(g, &Region::disk(p, r)?, opts.resolution)?.value;
    let offset = 2.0 * PI * ((opts.seed as f64 + 1.0) * 0.618_033_988_749_895).fract() / opts.angles as f64;
    let nr = opts.radii.max(2);
    let profile = try_par_map(nr, |i| {
        let rad = r * (r_out / r).powf(i as f64 / (nr - 1) as f64);
        let (mut dev, mut dist) = (0.0f64, 0.0f64);
        for j in 0..opts.angles {
            let t = offset + 2.0 * PI * j as f64 / opts.angles as f64;
            let z = p + C64::new(t.cos(), t.sin()) * rad;
            let (lf, lg) = (f.lift(z)?, g.lift(z)?);
            dev = dev.max((lg.spherical_derivative() - lf.spherical_derivative()).abs());
            dist = dist.max(lift_distance(&lf.f, &lg.f));
        }
        Ok((rad, dev, dist))
    })?;
    let lo = r.max(r_out / 10.0);
    let decay = |sel: fn(&(f64, f64, f64)) -> f64, exact_cubic: bool| {
        let prefactor = profile.iter().map(|s| s.0.powi(3) * sel(s)).fold(0.0, f64::max);
        let pts: Vec<(f64, f64)> = profile
            .iter()
            .filter(|s| s.0 >= lo * (1.0 - 1e-12) && sel(s) > 0.0)
            .map(|s| (s.0.ln(), sel(s).ln()))
            .collect();
        let slope = if pts.len() >= 2 { fit_slope(&pts) } else { f64::NEG_INFINITY };
        let shape_ok = if exact_cubic { (slope + 3.0).abs() <= 0.1 } else { slope <= -2.9 };
        // A vanishing deviation trivially decays.
        let shape_ok = shape_ok || prefactor == 0.0;
        DecayCheck { prefactor, slope, holds: prefactor <= k && shape_ok }
    };
    Ok(GluingReport {
        center: p,
        r,
        r_out,
        k,
        sup_inner,
        condition_i: sup_inner >= delta0 && sup_inner <= 2.0 / 3.0,
        condition_ii: decay(|s| s.1, false),
        condition_iii: decay(|s| s.2, true),
        profile,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TileOrder {
    /// Chebyshev rings outward from the window center.
    Spiral,
    /// Row by row.
    Raster,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tile {
    pub alpha: i64,
    pub beta: i64,
    pub center: C64,
    /// Not on the outer ring of the window.
    pub interior: bool,
}

/// Tiles `Λ = [2Rα-R, 2Rα+R] × [2Rβ-R, 2Rβ+R]` for `α, β` in the given
/// inclusive ranges, in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct TilingPlan {
    pub r: f64,
    pub alpha: (i64, i64),
    pub beta: (i64, i64),
    pub order: TileOrder,
    pub tiles: Vec<Tile>,
}

impl TilingPlan {
    pub fn new(r: f64, alpha: (i64, i64), beta: (i64, i64), order: TileOrder) -> Result<Self> {
        if !(r > 0.0) || alpha.1 < alpha.0 || beta.1 < beta.0 {
            return Err(Error::InvalidArgument("tiling needs R > 0 and non-empty ranges".into()));
        }
        let mut tiles = Vec::new();
        for b in beta.0..=beta.1 {
            for a in alpha.0..=alpha.1 {
                tiles.push(Tile {
                    alpha: a,
                    beta: b,
                    center: C64::new(2.0 * r * a as f64, 2.0 * r * b as f64),
                    interior: a > alpha.0 && a < alpha.1 && b > beta.0 && b < beta.1,
                });
            }
        }
        if order == TileOrder::Spiral {
            // Twice the center, to stay in integers for even widths.
            let (ca, cb) = (alpha.0 + alpha.1, beta.0 + beta.1);
            tiles.sort_by(|s, t| spiral_key(s, ca, cb).partial_cmp(&spiral_key(t, ca, cb)).unwrap());
        }
        Ok(Self { r, alpha, beta, order, tiles })
    }

    /// `n × n` tiles centered on the origin (`n` odd).
    pub fn centered(r: f64, n: i64, order: TileOrder) -> Result<Self> {
        let h = n / 2;
        Self::new(r, (-h, h), (-h, h), order)
    }

    pub fn tile_region(&self, t: &Tile) -> Region {
        Region::centered_square(t.center, 2.0 * self.r).expect("positive")
    }

    /// Union of all tiles.
    pub fn window(&self) -> Region {
        let r = self.r;
        let x0 = 2.0 * r * self.alpha.0 as f64 - r;
        let y0 = 2.0 * r * self.beta.0 as f64 - r;
        let w = 2.0 * r * (self.alpha.1 - self.alpha.0 + 1) as f64;
        let h = 2.0 * r * (self.beta.1 - self.beta.0 + 1) as f64;
        Region::square(C64::new(x0, y0), w.max(h)).expect("positive")
    }
}

fn spiral_key(t: &Tile, ca: i64, cb: i64) -> (i64, f64) {
    let (da, db) = (2 * t.alpha - ca, 2 * t.beta - cb);
    let ring = da.abs().max(db.abs());
    let mut ang = (db as f64).atan2(da as f64);
    if ang < 0.0 {
        ang += 2.0 * PI;
    }
    (ring, ang)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// `‖df‖_Λ >= δ` for the original curve.
    KeepOriginal,
    /// Current curve already has `‖df_n‖_Λ >= δ₀`.
    KeepCurrent,
    /// Bump glued at the tile center.
    Glued,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TileLog {
    pub tile: Tile,
    pub step: usize,
    pub case: Case,
    /// `‖df‖_Λ` for the input curve.
    pub sup_original: f64,
    /// `‖df_n‖_Λ` before this step (equals `sup_original` in case 1).
    pub sup_before: f64,
    /// `‖df_{n+1}‖_Λ` after this step.
    pub sup_after: f64,
    /// `‖dg‖_Λ` for the final curve.
    pub sup_final: f64,
    /// `∫_Λ |df|²` and `∫_Λ |dg|²`.
    pub energy_before: f64,
    pub energy_after: f64,
    pub energy_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingOptions {
    pub resolution: f64,
    pub energy: EnergyOptions,
    /// Slack on the global sup bound.
    pub sup_tolerance: f64,
}

impl Default for TilingOptions {
    fn default() -> Self {
        let quad = QuadOptions { rel_tol: 1e-8, abs_tol: 1e-8, ..QuadOptions::default() };
        Self { resolution: 0.5, energy: EnergyOptions { quad, cell: 8.0, ..EnergyOptions::default() }, sup_tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingLog {
    pub delta: f64,
    pub eps: f64,
    pub tau: f64,
    pub entries: Vec<TileLog>,
    pub bumps: usize,
    /// `max` of the final sup over interior tiles, and the bound `max(1-τ/2, 3/4)`.
    pub interior_sup: f64,
    pub sup_bound: f64,
    pub sup_ok: bool,
    /// Every interior tile has final sup `>= δ/2`.
    pub tile_sup_ok: bool,
    /// Every interior tile satisfies the energy inequality within tolerance.
    pub energy_ok: bool,
    /// Bound on contributions of bumps outside the window to an interior tile.
    pub tail_bound: f64,
    pub failures: Vec<String>,
}

impl TilingLog {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `K Σ_{j>=2} 8j / ((2j-1)R)³`.
pub fn tail_bound(k: f64, r: f64) -> f64 {
    let mut s = 0.0;
    let jmax = 100_000;
    for j in 2..=jmax {
        let jf = j as f64;
        s += 8.0 * jf / ((2.0 * jf - 1.0) * r).powi(3);
    }
    // Remainder ≈ ∫ 8x/(2xR)³ dx = 1/(R³ x).
    s += 1.0 / (r.powi(3) * jmax as f64);
    k * s
}

/// Finite-window gluing iteration with every postcondition measured; never
/// fails on a postcondition, see [`make_nondegenerate`].
pub fn make_nondegenerate_logged(
    f: &CurveMap,
    eps: f64,
    tau: f64,
    plan: &TilingPlan,
    consts: &GluingConstants,
    opts: &TilingOptions,
) -> Result<(CurveMap, TilingLog)> {
    if !(eps > 0.0) || !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidArgument("need eps > 0 and tau in (0, 1]".into()));
    }
    if plan.r < consts.r0 + 1.0 {
        return Err(Error::PreconditionViolated(format!("tile half-side {} < R0 + 1", plan.r)));
    }
    let window = plan.window();
    let sup_f = sup_spherical_derivative(f, &window, opts.resolution)?.value;
    if sup_f > 1.0 - tau + opts.sup_tolerance {
        return Err(Error::PreconditionViolated(format!("sup |df| on the window is {sup_f}, above 1 - tau")));
    }
    let delta = consts.delta0.min(eps.sqrt());
    let sup_on = |c: &CurveMap, t: &Tile| -> Result<f64> {
        Ok(maximize(&|z| c.spherical_derivative(z), &plan.tile_region(t), opts.resolution)?.value)
    };
    let mut cur = f.clone();
    let mut entries = Vec::with_capacity(plan.tiles.len());
    let mut bumps = 0;
    for (step, t) in plan.tiles.iter().enumerate() {
        let sup_original = sup_on(f, t)?;
        let (case, sup_before, sup_after) = if sup_original >= delta {
            (Case::KeepOriginal, sup_original, sup_original)
        } else {
            let before = sup_on(&cur, t)?;
            if before >= consts.delta0 {
                (Case::KeepCurrent, before, before)
            } else {
                cur = glue_once(&cur, t.center, plan.r, consts, opts.resolution)?.curve;
                bumps += 1;
                (Case::Glued, before, sup_on(&cur, t)?)
            }
        };
        entries.push(TileLog {
            tile: *t,
            step,
            case,
            sup_original,
            sup_before,
            sup_after,
            sup_final: 0.0,
            energy_before: 0.0,
            energy_after: 0.0,
            energy_error: 0.0,
        });
    }
    // Final pass over the finished curve.
    let finals = try_par_map(entries.len(), |i| {
        let t = &entries[i].tile;
        let reg = plan.tile_region(t);
        let ef = energy(f, &reg, &opts.energy)?;
        let eg = energy(&cur, &reg, &opts.energy)?;
        Ok((sup_on(&cur, t)?, ef.value, eg.value, ef.error_estimate + eg.error_estimate))
    })?;
    let area = (2.0 * plan.r).powi(2);
    let mut failures = Vec::new();
    let (mut interior_sup, mut tile_sup_ok, mut energy_ok) = (0.0f64, true, true);
    for (e, (s, eb, ea, err)) in entries.iter_mut().zip(finals) {
        e.sup_final = s;
        e.energy_before = eb;
        e.energy_after = ea;
        e.energy_error = err;
        if !e.tile.interior {
            continue;
        }
        interior_sup = interior_sup.max(s);
        if s < delta / 2.0 {
            tile_sup_ok = false;
            failures.push(format!("tile ({}, {}): final sup {s:e} < delta/2", e.tile.alpha, e.tile.beta));
        }
        if ea / area < eb / area - eps - err / area {
            energy_ok = false;
            failures.push(format!("tile ({}, {}): energy inequality fails", e.tile.alpha, e.tile.beta));
        }
    }
    let sup_bound = (1.0 - tau / 2.0).max(0.75);
    let sup_ok = interior_sup <= sup_bound + opts.sup_tolerance;
    if !sup_ok {
        failures.push(format!("interior sup {interior_sup} exceeds {sup_bound}"));
    }
    let log = TilingLog {
        delta,
        eps,
        tau,
        entries,
        bumps,
        interior_sup,
        sup_bound,
        sup_ok,
        tile_sup_ok,
        energy_ok,
        tail_bound: tail_bound(consts.k, plan.r),
        failures,
    };
    Ok((cur, log))
}

/// As [`make_nondegenerate_logged`], failing with `BoundViolated` when a
/// postcondition does not hold.
pub fn make_nondegenerate(
    f: &CurveMap,
    eps: f64,
    tau: f64,
    plan: &TilingPlan,
    consts: &GluingConstants,
    opts: &TilingOptions,
) -> Result<(CurveMap, TilingLog)> {
    let (g, log) = make_nondegenerate_logged(f, eps, tau, plan, consts, opts)?;
    if !log.ok() {
        return Err(Error::BoundViolated(log.failures.join("; ")));
    }
    Ok((g, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_normalizes_bump() {
        for n in 1..4 {
            let a = bump_amplitude(n);
            let r = bump_peak_radius(a, n);
            assert!((bump_profile(a, n, r) - 1.0 / 12.0).abs() < 1e-15);
            assert!((bump_sup_numeric(a, n) - 1.0 / 12.0).abs() < 1e-12);
        }
        assert!((bump_amplitude(1) - 1241.3).abs() < 0.1);
    }

    #[test]
    fn bump_curve_matches_profile() {
        let a = bump_amplitude(2);
        let q = bump_curve(a, 2).unwrap();
        assert_eq!(q.spherical_derivative(C64::new(0.0, 0.0)).unwrap(), 0.0);
        for r in [0.5, 3.0, 10.0, 40.0] {
            let z = C64::new(r * 0.6, r * 0.8);
            let v = q.spherical_derivative(z).unwrap();
            assert!((v - bump_profile(a, 2, r)).abs() < 1e-12 * v.max(1e-300));
        }
    }

    #[test]
    fn analytic_constants_satisfy_system() {
        for n in 1..4 {
            let c = solve_constants(n, Mode::Analytic, None).unwrap();
            assert!(c.checks().iter().all(|ch| ch.holds));
            assert!(c.k / c.r0.powi(3) <= 0.5);
            // R0 is the smallest dyadic value.
            let smaller = GluingConstants {
                r0: c.r0 / 2.0,
                eps_glue: max_eps(c.a, n, c.r0 / 2.0),
                delta0: delta0_for(max_eps(c.a, n, c.r0 / 2.0), c.r0 / 2.0),
                ..c
            };
            assert!(!smaller.checks().iter().all(|ch| ch.holds));
        }
    }

    #[test]
    fn spiral_starts_at_center() {
        let p = TilingPlan::centered(1.0, 5, TileOrder::Spiral).unwrap();
        assert_eq!((p.tiles[0].alpha, p.tiles[0].beta), (0, 0));
        assert!(p.tiles[1..9].iter().all(|t| t.alpha.abs().max(t.beta.abs()) == 1));
        assert_eq!(p.tiles.iter().filter(|t| t.interior).count(), 9);
    }

    #[test]
    fn glue_requires_small_sup() {
        let c = GluingConstants::empirical(1, 5.0, 1000.0, None).unwrap();
        let f = CurveMap::identity();
        assert!(matches!(glue_once(&f, C64::new(0.0, 0.0), 6.0, &c, 0.1), Err(Error::PreconditionViolated(_))));
        let k = CurveMap::constant(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!(matches!(glue_once(&k, C64::new(0.0, 0.0), 5.5, &c, 0.1), Err(Error::PreconditionViolated(_))));
        assert!(glue_once(&k, C64::new(0.0, 0.0), 6.0, &c, 0.1).is_ok());
    }
}
