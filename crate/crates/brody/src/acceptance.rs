//! The acceptance suite: thirteen criteria, each reported as measured value,
//! target and tolerance.
//!
//! Criteria 1-12 are evaluated inside a rayon pool of one thread and again
//! inside a pool of eight; criterion 13 compares the two serialized reports
//! byte for byte. Wall-clock times are printed but never serialized.

use std::f64::consts::PI;
use std::time::Instant;

use brody_core::constants::{elliptic_constant, REFERENCE_VALUE};
use brody_core::dynmetrics::{curve_distance, DistanceOptions};
use brody_core::elliptic::brody_rescale;
use brody_core::energy::{
    folner_agreement, nsa_profile, rational_total_energy, rho_elliptic, rho_nsa_estimate, sup_translate_energy,
    EnergyOptions,
};
use brody_core::gluing::{
    bump_curve, glue_once, make_nondegenerate_logged, solve_constants, verify_glue, Case, GluingConstants,
    GluingReport, Mode, TileOrder, TilingOptions, TilingPlan, VerifyOptions,
};
use brody_core::nondegeneracy::{classify, nondegeneracy_profile, Verdict};
use brody_core::quadrature::QuadOptions;
use brody_core::search::sup_spherical_derivative;
use brody_core::{CurveMap, Region, C64, SQRT_PI};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::corpus::{self, CorpusEntry};
use crate::error::{CliError, CliResult};

pub const CRITERIA: u32 = 13;

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub measured: String,
    pub target: String,
    pub tolerance: String,
    /// Numerical outcome; the time limit is checked separately.
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_s: Option<f64>,
    pub details: serde_json::Value,
    #[serde(skip)]
    pub seconds: f64,
}

impl Criterion {
    fn new(id: u32, name: &str) -> Self {
        Self {
            id,
            name: name.to_string(),
            measured: String::new(),
            target: String::new(),
            tolerance: String::new(),
            passed: false,
            time_limit_s: None,
            details: serde_json::Value::Null,
            seconds: 0.0,
        }
    }

    pub fn within_time(&self) -> bool {
        self.time_limit_s.is_none_or(|l| self.seconds < l)
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_time()
    }

    /// One table line.
    pub fn line(&self) -> String {
        let time = match self.time_limit_s {
            Some(l) => format!("{:.2}s (limit {l}s)", self.seconds),
            None => format!("{:.2}s", self.seconds),
        };
        format!(
            "[{}] {:>2} {}: measured {} | target {} | tolerance {} | {}",
            if self.ok() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.target,
            self.tolerance,
            time
        )
    }
}

#[derive(Debug, Clone)]
pub struct AcceptanceConfig {
    pub seed: u64,
    /// Pool sizes of the two runs compared by criterion 13.
    pub threads: (usize, usize),
    /// Restrict to these criteria (1-12); criterion 13 still runs if listed.
    pub only: Option<Vec<u32>>,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self { seed: 20_240_601, threads: (1, 8), only: None }
    }
}

#[derive(Debug, Clone)]
pub struct AcceptanceReport {
    pub criteria: Vec<Criterion>,
    /// Serialized criteria 1-12 of the first run.
    pub json: String,
}

impl AcceptanceReport {
    pub fn failures(&self) -> usize {
        self.criteria.iter().filter(|c| !c.ok()).count()
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

/// Shared state of one run.
struct Ctx {
    seed: u64,
    corpus: Vec<CorpusEntry>,
}

impl Ctx {
    fn curve(&self, id: &str) -> &CurveMap {
        &self.corpus.iter().find(|e| e.id == id).expect("corpus id").curve
    }

    /// Measured sup of `|df|` on the centered square of side 96 at step 0.2.
    fn brody_sup(&self, c: &CurveMap) -> CliResult<f64> {
        let w = Region::centered_square(C64::new(0.0, 0.0), 96.0)?;
        Ok(sup_spherical_derivative(c, &w, 0.2)?.value)
    }
}

/// Energy options for the density criteria; tolerances far below the 1-3%
/// targets keep runtimes at desk scale.
fn density_options() -> EnergyOptions {
    EnergyOptions { cell: 2.0, quad: QuadOptions { rel_tol: 1e-6, ..QuadOptions::default() }, ..EnergyOptions::default() }
}

fn c1(_: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(1, "constant reproduction");
    c.time_limit_s = Some(1.0);
    let r = elliptic_constant(&QuadOptions::default())?;
    let implied = (2.0 * PI / (3f64.sqrt() * REFERENCE_VALUE)).sqrt();
    let dev = (r.value - REFERENCE_VALUE).abs();
    let refine = (r.value - r.refined_value).abs();
    c.measured = format!("{:.15}", r.value);
    c.target = format!("{REFERENCE_VALUE}");
    c.tolerance = "1e-9 (refinement change < 1e-11)".into();
    c.passed = dev <= 1e-9 && refine < 1e-11 && (r.integral - implied).abs() <= 5e-9;
    c.details = json!({
        "value": r.value, "integral": r.integral, "implied_integral": implied,
        "error_estimate": r.error_estimate, "refined_value": r.refined_value, "deviation": dev,
    });
    Ok(c)
}

fn c2(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(2, "spherical-derivative closed forms");
    c.time_limit_s = Some(1.0);
    let (id, ex) = (ctx.curve("identity"), ctx.curve("exp_unit"));
    let (mut e_id, mut e_ex) = (0.0f64, 0.0f64);
    for j in 0..25 {
        for i in 0..40 {
            let z = C64::new(-4.0 + 8.0 * i as f64 / 39.0, -2.5 + 5.0 * j as f64 / 24.0);
            let exact_id = 1.0 / (SQRT_PI * (1.0 + z.norm_sqr()));
            let exact_ex = 1.0 / (2.0 * SQRT_PI * z.re.cosh());
            e_id = e_id.max((id.spherical_derivative(z)? - exact_id).abs());
            e_ex = e_ex.max((ex.spherical_derivative(z)? - exact_ex).abs());
        }
    }
    c.measured = format!("max error z: {}, e^z: {}", fmt(e_id), fmt(e_ex));
    c.target = "closed forms on 1000 points".into();
    c.tolerance = "1e-10".into();
    c.passed = e_id <= 1e-10 && e_ex <= 1e-10;
    c.details = json!({"points": 1000, "max_error_identity": e_id, "max_error_exp": e_ex});
    Ok(c)
}

fn c3(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(3, "degree identity");
    c.time_limit_s = Some(30.0);
    let opts = EnergyOptions::default();
    let mut rows = Vec::new();
    let mut ok = true;
    for (id, d) in [("identity", 1.0), ("rational3", 3.0)] {
        let e = rational_total_energy(ctx.curve(id), 1e4, &opts)?;
        ok &= (e.value - d).abs() <= 1e-6;
        rows.push(json!({"curve": id, "degree": d, "energy": e.value, "error_estimate": e.error_estimate}));
    }
    c.measured = rows.iter().map(|r| format!("{}", r["energy"])).collect::<Vec<_>>().join(", ");
    c.target = "1, 3".into();
    c.tolerance = "1e-6".into();
    c.passed = ok;
    c.details = json!(rows);
    Ok(c)
}

fn c4(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(4, "Nevanlinna closed form and Brody bound");
    let opts = EnergyOptions::default();
    let radii = [2.0, 3.0, 10.0];
    let t = nsa_profile(ctx.curve("identity"), &radii, &opts)?;
    let mut max_err = 0.0f64;
    for v in &t {
        max_err = max_err.max((v.value - 0.5 * ((1.0 + v.r * v.r) / 2.0).ln()).abs());
    }
    let mut bound_rows = Vec::new();
    let mut bound_ok = true;
    let dens = density_options();
    for e in &ctx.corpus {
        let sup = ctx.brody_sup(&e.curve)?;
        if sup > 1.0 + 1e-9 {
            bound_rows.push(json!({"curve": e.id, "brody": false, "sup": sup}));
            continue;
        }
        let prof = nsa_profile(&e.curve, &[2.0, 5.0, 10.0, 20.0], &dens)?;
        let worst = prof.iter().map(|v| v.value - PI * v.r * v.r / 2.0 - v.error_estimate).fold(f64::MIN, f64::max);
        bound_ok &= worst <= 0.0;
        bound_rows.push(json!({"curve": e.id, "brody": true, "sup": sup, "max_T_minus_bound": worst}));
    }
    c.measured = format!("max |T - closed form| = {}; Brody bound holds: {bound_ok}", fmt(max_err));
    c.target = "T(r,z) = ln((1+r^2)/2)/2 at r = 2, 3, 10; T(r,f) <= pi r^2/2".into();
    c.tolerance = "1e-6".into();
    c.passed = max_err <= 1e-6 && bound_ok;
    c.details = json!({"identity": t.iter().map(|v| json!([v.r, v.value])).collect::<Vec<_>>(), "brody_bound": bound_rows});
    Ok(c)
}

fn c5(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(5, "degenerate/non-degenerate dichotomy");
    c.time_limit_s = Some(120.0);
    let o = C64::new(0.0, 0.0);
    let exp_windows: Vec<Region> =
        [8.0, 16.0, 24.0].iter().map(|w| Region::centered_square(o, 2.0 * w)).collect::<Result<_, _>>()?;
    let ce = nondegeneracy_profile(ctx.curve("exp_quarter"), 2.0, &exp_windows)?;
    let de: Vec<f64> = ce.trend.iter().map(|t| t.delta).collect();
    let ratios: Vec<f64> = de.windows(2).map(|w| w[0] / w[1]).collect();
    let wp = ctx.curve("wp_hex");
    let p = wp.period_lattice().expect("elliptic").min_period();
    let wp_windows: Vec<Region> =
        [2.0, 3.0, 4.0].iter().map(|k| Region::centered_square(o, 2.0 * k * p)).collect::<Result<_, _>>()?;
    let cw = nondegeneracy_profile(wp, p, &wp_windows)?;
    let dw: Vec<f64> = cw.trend.iter().map(|t| t.delta).collect();
    let (ve, vw) = (classify(&ce, 1e-3), classify(&cw, 1e-3));
    let flat = dw.iter().all(|&d| d > 0.0) && (dw[0] - dw[dw.len() - 1]).abs() <= 0.05 * dw[0];
    c.measured = format!(
        "e^(z/4) decay ratios {}; wp delta {} .. {}",
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", "),
        fmt(dw[0]),
        fmt(dw[dw.len() - 1])
    );
    c.target = "ratio >= 2 per extension; flat positive delta over 3 windows".into();
    c.tolerance = "flat within 5%".into();
    c.passed = ratios.iter().all(|&r| r >= 2.0)
        && ve == Verdict::DegenerateTrend
        && flat
        && vw == Verdict::NondegenerateAtScale;
    c.details = json!({
        "exp_quarter": {"R": 2.0, "half_widths": [8, 16, 24], "delta": de, "verdict": format!("{ve:?}")},
        "wp_hex": {"R": p, "half_widths_in_periods": [2, 3, 4], "delta": dw, "verdict": format!("{vw:?}")},
    });
    Ok(c)
}

fn c6(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(6, "elliptic energy-density consistency");
    let opts = density_options();
    let wp = ctx.curve("wp_hex");
    let lat = wp.period_lattice().expect("elliptic");
    let p = lat.min_period();
    let torus = rho_elliptic(wp, &lat, &opts)?;
    let r = 6.0 * p;
    let cells = PI * r * r / lat.area();
    let window = Region::centered_square(C64::new(0.0, 0.0), 2.0 * r + 2.0 * p)?;
    let fa = folner_agreement(wp, &[r], &window, &opts)?;
    let disk = fa.disk.entries[0].rho;
    let rel_disk = (disk - torus.value).abs() / torus.value;
    let agree = fa.disagreement[0].1;
    let half = ctx.curve("wp_hex_half");
    let th = rho_elliptic(half, &half.period_lattice().expect("elliptic"), &opts)?;
    let ratio = th.value / torus.value;
    let rel_ratio = (ratio - 0.25).abs() / 0.25;
    c.measured = format!(
        "torus {}, disk {} (rel {}), disk/square rel {}, scaling ratio {}",
        fmt(torus.value),
        fmt(disk),
        fmt(rel_disk),
        fmt(agree),
        fmt(ratio)
    );
    c.target = "disk = torus, disk = square, ratio 0.25".into();
    c.tolerance = "2%, 2%, 1%".into();
    c.passed = cells >= 36.0 && rel_disk <= 0.02 && agree <= 0.02 && rel_ratio <= 0.01;
    c.details = json!({
        "radius": r, "cells": cells, "torus": torus.value, "torus_error": torus.error_estimate,
        "disk": disk, "square": fa.square.entries[0].rho, "disk_translate": [fa.disk.entries[0].translate.re, fa.disk.entries[0].translate.im],
        "half_torus": th.value, "ratio": ratio,
    });
    Ok(c)
}

fn c7(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(7, "rho_NSA <= rho");
    let opts = density_options();
    let (r_max, radius) = (64.0, 16.0);
    let shape = Region::disk(C64::new(0.0, 0.0), radius)?;
    let window = Region::centered_square(C64::new(0.0, 0.0), 4.0 * radius)?;
    let mut rows = Vec::new();
    let mut worst = f64::MIN;
    for e in &ctx.corpus {
        let nsa = rho_nsa_estimate(&e.curve, r_max, &opts)?;
        let s = sup_translate_energy(&e.curve, &shape, &window, &opts)?;
        let rho = s.value / shape.area();
        worst = worst.max(nsa.value - rho);
        rows.push(json!({"curve": e.id, "rho_nsa": nsa.value, "r_at_max": nsa.r_at_max, "rho": rho}));
    }
    c.measured = format!("max (rho_nsa - rho) = {}", fmt(worst));
    c.target = "rho_nsa <= rho + 0.03 (r_max 64, disk radius 16)".into();
    c.tolerance = "0.03".into();
    c.passed = worst <= 0.03;
    c.details = json!(rows);
    Ok(c)
}

/// Bump normalization for a given amplitude, maximizing the evaluated curve
/// (not the closed-form profile) along the positive real axis.
pub fn bump_normalization(a: f64) -> CliResult<(f64, f64)> {
    let q = bump_curve(a, 1)?;
    let f = |t: f64| q.spherical_derivative(C64::new(t.exp(), 0.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 6.0f64);
    let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((f(t)?, t.exp()))
}

pub fn bump_criterion(a: f64) -> CliResult<Criterion> {
    let mut c = Criterion::new(8, "bump normalization");
    let closed = 12f64.powi(3) * 4.0 / PI.powf(1.5);
    let (max, r) = bump_normalization(a)?;
    let rel_a = (a - closed).abs() / closed;
    let rel_r6 = (r.powi(6) - a * a / 2.0).abs() / (a * a / 2.0);
    c.measured = format!("max |dq| = {:.15}, a = {a:.10}, r^6/(a^2/2) - 1 = {}", max, fmt(rel_r6));
    c.target = format!("1/12, {closed:.10}, 0");
    c.tolerance = "1e-8 abs, 1e-6 rel, 1e-6 rel".into();
    c.passed = (max - 1.0 / 12.0).abs() <= 1e-8 && rel_a <= 1e-6 && rel_r6 <= 1e-6;
    c.details = json!({"a": a, "closed_form": closed, "max": max, "argmax_r": r, "rel_r6": rel_r6});
    Ok(c)
}

fn c8(_: &Ctx) -> CliResult<Criterion> {
    bump_criterion(solve_constants(1, Mode::Analytic, None)?.a)
}

/// Empirical constants for desk-scale gluing: `K = a·sqrt(2N/π)`.
pub fn desk_constants(n: usize, r0: f64) -> CliResult<GluingConstants> {
    let a = brody_core::gluing::bump_amplitude(n);
    Ok(GluingConstants::empirical(n, r0, a * (2.0 * n as f64 / PI).sqrt(), None)?)
}

fn report_json(r: &GluingReport) -> serde_json::Value {
    json!({
        "sup_inner": r.sup_inner, "i": r.condition_i,
        "ii": {"prefactor": r.condition_ii.prefactor, "slope": r.condition_ii.slope, "holds": r.condition_ii.holds},
        "iii": {"prefactor": r.condition_iii.prefactor, "slope": r.condition_iii.slope, "holds": r.condition_iii.holds},
    })
}

fn c9(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(9, "single-glue conditions at desk scale");
    c.time_limit_s = Some(120.0);
    let consts = desk_constants(1, 5.0)?;
    let (r, r_out) = (6.0, 600.0);
    let vo = VerifyOptions { seed: ctx.seed, ..VerifyOptions::default() };
    let mut details = Vec::new();
    let (mut ok, mut falsified) = (true, true);
    let mut measured = Vec::new();
    for (id, p) in [("constant", C64::new(0.0, 0.0)), ("exp_quarter", C64::new(-40.0, 0.0))] {
        let f = ctx.curve(id);
        let g = glue_once(f, p, r, &consts, 0.05)?.curve;
        let rep = verify_glue(f, &g, p, r, consts.k, r_out, consts.delta0, &vo)?;
        let bad = verify_glue(f, &g, p, r, consts.k / 100.0, r_out, consts.delta0, &vo)?;
        ok &= rep.passed();
        falsified &= !bad.passed();
        measured.push(format!(
            "{id}: sup {:.4}, slopes {:.3}/{:.3}, prefactors {:.1}/{:.1}",
            rep.sup_inner, rep.condition_ii.slope, rep.condition_iii.slope, rep.condition_ii.prefactor, rep.condition_iii.prefactor
        ));
        details.push(json!({"curve": id, "center": [p.re, p.im], "report": report_json(&rep), "falsified": report_json(&bad)}));
    }
    c.measured = measured.join("; ");
    c.target = format!("(i) in [{:.5}, 2/3]; (iii) slope -3; (ii) slope <= -2.9; prefactors <= K = {:.1}", consts.delta0, consts.k);
    c.tolerance = "slope 0.1; K/100 must fail".into();
    c.passed = ok && falsified;
    c.details = json!({"R": r, "R_out": r_out, "K": consts.k, "delta0": consts.delta0, "runs": details});
    Ok(c)
}

fn c10(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(10, "finite-window iterated gluing");
    c.time_limit_s = Some(300.0);
    let (eps, tau, r) = (1e-3, 0.5, 16.0);
    let window = Region::centered_square(C64::new(0.0, 0.0), 4.0)?;
    let (f, rate) = brody_rescale(ctx.curve("exp_unit"), &window, 1.0 - tau, 0.01)?;
    let consts = desk_constants(1, r - 1.0)?;
    let plan = TilingPlan::centered(r, 5, TileOrder::Spiral)?;
    let topts = TilingOptions::default();
    let (g, log) = make_nondegenerate_logged(&f, eps, tau, &plan, &consts, &topts)?;
    // Bumps only where the original curve is below delta; elsewhere untouched.
    let exact_cases = log.entries.iter().all(|e| (e.case == Case::KeepOriginal) == (e.sup_original >= log.delta));
    // The output is only guaranteed sup <= sup_bound, so the rerun uses the
    // matching tau; case decisions do not depend on tau.
    let (_, rerun) = make_nondegenerate_logged(&g, eps, 1.0 - log.sup_bound, &plan, &consts, &topts)?;
    let min_tile = log.entries.iter().filter(|e| e.tile.interior).map(|e| e.sup_final).fold(f64::INFINITY, f64::min);
    c.measured = format!(
        "{} bumps, case split by original sup {exact_cases}, interior sup {:.4}, min interior tile sup {:.4}, energy ok {}, rerun bumps {}",
        log.bumps, log.interior_sup, min_tile, log.energy_ok, rerun.bumps
    );
    c.target = format!("sup <= {:.3}, tile sup >= delta/2 = {:.5}, 0 rerun bumps", log.sup_bound, log.delta / 2.0);
    c.tolerance = format!("sup {:e}; energy within eps + quadrature error", topts.sup_tolerance);
    c.passed = exact_cases && log.ok() && rerun.bumps == 0;
    c.details = json!({
        "rate": rate, "eps": eps, "tau": tau, "R": r, "delta": log.delta, "bumps": log.bumps,
        "interior_sup": log.interior_sup, "tail_bound": log.tail_bound, "failures": log.failures,
        "tiles": log.entries.iter().map(|e| json!({
            "tile": [e.tile.alpha, e.tile.beta], "case": format!("{:?}", e.case), "interior": e.tile.interior,
            "sup_original": e.sup_original, "sup_final": e.sup_final,
            "energy_before": e.energy_before, "energy_after": e.energy_after,
        })).collect::<Vec<_>>(),
    });
    Ok(c)
}

fn c11(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(11, "metric inequality");
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let opts = DistanceOptions::default();
    let n = ctx.corpus.len();
    let (mut violations, mut min_margin) = (0usize, f64::INFINITY);
    let mut rows = Vec::new();
    for _ in 0..50 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let (g, h) = (&ctx.corpus[i], &ctx.corpus[j]);
        let d = curve_distance(&g.curve, &h.curve, &opts)?;
        let lhs = (d.value - d.sups[0]).abs();
        let margin = d.sup() / 9.0 - lhs;
        if margin < -d.error_bound() {
            violations += 1;
        }
        min_margin = min_margin.min(margin);
        rows.push(json!([g.id, h.id, d.value, d.sups[0], d.sup(), d.error_bound()]));
    }
    c.measured = format!("{violations} violations, min margin {}", fmt(min_margin));
    c.target = "|dist - d(g(0),h(0))| <= sup d / 9 on 50 pairs".into();
    c.tolerance = "sampling slack + truncation".into();
    c.passed = violations == 0;
    c.details = json!({"pairs": rows});
    Ok(c)
}

fn c12(ctx: &Ctx) -> CliResult<Criterion> {
    let mut c = Criterion::new(12, "unit-square energy bound");
    let opts = EnergyOptions::default();
    let shape = Region::centered_square(C64::new(0.0, 0.0), 1.0)?;
    let window = Region::centered_square(C64::new(0.0, 0.0), 20.0)?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for e in &ctx.corpus {
        let sup = ctx.brody_sup(&e.curve)?;
        if sup > 1.0 + 1e-9 {
            rows.push(json!({"curve": e.id, "brody": false, "sup": sup}));
            continue;
        }
        let s = sup_translate_energy(&e.curve, &shape, &window, &opts)?;
        worst = worst.max(s.value + s.error_estimate);
        rows.push(json!({"curve": e.id, "brody": true, "sup": sup, "unit_square_energy": s.value}));
    }
    c.measured = format!("max unit-square energy {}", fmt(worst));
    c.target = "< 1".into();
    c.tolerance = "strict".into();
    c.passed = worst < 1.0;
    c.details = json!(rows);
    Ok(c)
}

type CriterionFn = fn(&Ctx) -> CliResult<Criterion>;

const TABLE: [(u32, &str, CriterionFn); 12] = [
    (1, "constant reproduction", c1),
    (2, "spherical-derivative closed forms", c2),
    (3, "degree identity", c3),
    (4, "Nevanlinna closed form and Brody bound", c4),
    (5, "degenerate/non-degenerate dichotomy", c5),
    (6, "elliptic energy-density consistency", c6),
    (7, "rho_NSA <= rho", c7),
    (8, "bump normalization", c8),
    (9, "single-glue conditions at desk scale", c9),
    (10, "finite-window iterated gluing", c10),
    (11, "metric inequality", c11),
    (12, "unit-square energy bound", c12),
];

fn wanted(cfg: &AcceptanceConfig, id: u32) -> bool {
    cfg.only.as_ref().is_none_or(|o| o.contains(&id))
}

/// Runs criteria 1-12 (as selected) inside `pool`, calling `progress` after each.
fn run_numeric(
    cfg: &AcceptanceConfig,
    pool: &rayon::ThreadPool,
    progress: &mut dyn FnMut(&Criterion),
) -> CliResult<Vec<Criterion>> {
    let ctx = Ctx { seed: cfg.seed, corpus: corpus::load_all()? };
    let mut out = Vec::new();
    for (id, name, f) in TABLE {
        if !wanted(cfg, id) {
            continue;
        }
        let t = Instant::now();
        let mut c = pool.install(|| f(&ctx)).unwrap_or_else(|e| {
            let mut c = Criterion::new(id, name);
            c.measured = format!("error: {e}");
            c
        });
        c.seconds = t.elapsed().as_secs_f64();
        progress(&c);
        out.push(c);
    }
    Ok(out)
}

fn pool(threads: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Parse(format!("thread pool: {e}")))
}

/// Runs the suite; `progress` sees each criterion of the first run as it
/// finishes, then criterion 13.
pub fn run_acceptance(cfg: &AcceptanceConfig, progress: &mut dyn FnMut(&Criterion)) -> CliResult<AcceptanceReport> {
    let first = run_numeric(cfg, &pool(cfg.threads.0)?, progress)?;
    let json = serde_json::to_string(&first)?;
    let mut criteria = first;
    if wanted(cfg, 13) {
        let t = Instant::now();
        let second = run_numeric(cfg, &pool(cfg.threads.1)?, &mut |_| {})?;
        let json2 = serde_json::to_string(&second)?;
        let mut c = Criterion::new(13, "determinism");
        let diff = json.bytes().zip(json2.bytes()).position(|(a, b)| a != b);
        c.measured = match (json == json2, diff) {
            (true, _) => format!("{} bytes identical", json.len()),
            (false, Some(k)) => format!("outputs differ at byte {k}"),
            (false, None) => format!("lengths differ: {} vs {}", json.len(), json2.len()),
        };
        c.target = format!("byte-identical reports with {} and {} threads", cfg.threads.0, cfg.threads.1);
        c.tolerance = "exact".into();
        c.passed = json == json2;
        c.details = json!({"threads": [cfg.threads.0, cfg.threads.1], "bytes": json.len()});
        c.seconds = t.elapsed().as_secs_f64();
        progress(&c);
        criteria.push(c);
    }
    Ok(AcceptanceReport { criteria, json })
}
