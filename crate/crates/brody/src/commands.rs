//! Command-line interface. Every numeric result is written as one JSON line
//! (see [`crate::record::Record`]); `field` also writes CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use brody_core::constants::elliptic_constant;
use brody_core::dynmetrics::{curve_distance, dist_inequality_check, DistanceOptions};
use brody_core::elliptic::brody_rescale;
use brody_core::energy::{
    energy, nsa_profile, rho_elliptic, rho_estimate, rho_nsa_estimate, FolnerSequence, Shape,
};
use brody_core::gluing::{
    glue_once, make_nondegenerate_logged, solve_constants, verify_glue, GluingConstants, Mode, TileOrder,
    TilingOptions, TilingPlan, VerifyOptions,
};
use brody_core::nondegeneracy::{classify, nondegeneracy_profile};
use brody_core::search::{sup_spherical_derivative, FieldGrid};
use brody_core::{CurveMap, Region, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::acceptance::{desk_constants, run_acceptance, AcceptanceConfig};
use crate::config::{QuadOverrides, RunConfig};
use crate::corpus::{self, CORPUS};
use crate::doc::{cx, from_cx, CurveDoc, Cx};
use crate::error::{CliError, CliResult};
use crate::record::{write_field_csv, JsonLines, Record};

#[derive(Debug, Parser)]
#[command(name = "brody", version, about = "Energy, non-degeneracy and gluing computations for curves C -> CP^N")]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, env = "BRODY_THREADS")]
    pub threads: Option<usize>,
    /// Write JSON lines here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Gauss-Legendre order of the tensor rule.
    #[arg(long, global = true)]
    pub quad_order: Option<usize>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_depth: Option<u32>,
    /// Initial quadrature tile size.
    #[arg(long, global = true)]
    pub cell: Option<f64>,
}

impl QuadArgs {
    fn overrides(&self) -> QuadOverrides {
        QuadOverrides {
            order: self.quad_order,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_depth: self.max_depth,
            cell: self.cell,
        }
    }
}

fn parse_cx(s: &str) -> Result<Cx, String> {
    let v = parse_list(s, 2)?;
    Ok([v[0], v[1]])
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v = parse_list(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

/// `--disk x,y,r` or `--square x,y,side` (lower-left corner).
#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct RegionArgs {
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub disk: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub square: Option<[f64; 3]>,
}

impl RegionArgs {
    fn region(&self) -> CliResult<Region> {
        Ok(match (self.disk, self.square) {
            (Some([x, y, r]), _) => Region::disk(C64::new(x, y), r)?,
            (_, Some([x, y, s])) => Region::square(C64::new(x, y), s)?,
            _ => return Err(CliError::Parse("a region is required".into())),
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeArg {
    Disk,
    Square,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// The elliptic energy constant.
    Constants,
    /// List the built-in curves.
    Corpus,
    /// Spherical derivative and image point.
    Eval {
        /// Corpus id or path to a JSON curve document.
        curve: String,
        #[arg(long = "z", value_parser = parse_cx, required = true, allow_hyphen_values = true)]
        z: Vec<Cx>,
    },
    /// Sup of the spherical derivative over a region.
    Sup {
        curve: String,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, default_value_t = 0.05)]
        resolution: f64,
    },
    /// Energy of a disk or square.
    Energy {
        curve: String,
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Nevanlinna-Shimizu-Ahlfors characteristic `T(r, f)`.
    Nsa {
        curve: String,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
    },
    /// Energy density: Følner profile, elliptic torus average, or NSA proxy.
    Rho {
        curve: String,
        #[arg(long, value_enum, default_value = "disk")]
        shape: ShapeArg,
        /// Radii (disks) or sides (squares).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<f64>,
        /// Side of the centered translate window (default: four times the largest size).
        #[arg(long)]
        window: Option<f64>,
        /// Average over a fundamental cell of the curve's lattice instead.
        #[arg(long, conflicts_with_all = ["sizes", "nsa"])]
        elliptic: bool,
        /// `max_{r in [r_max/4, r_max]} 2T(r)/(πr²)` instead.
        #[arg(long, conflicts_with = "sizes")]
        nsa: Option<f64>,
    },
    /// Non-degeneracy profile over nested centered squares.
    Nondeg {
        curve: String,
        /// Disk radius R.
        #[arg(long)]
        r: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        half_widths: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
    },
    /// Rescale `f(cz)` so that the measured sup over a centered square is `target`.
    Rescale {
        curve: String,
        #[arg(long, default_value_t = 1.0)]
        target: f64,
        #[arg(long, default_value_t = 4.0)]
        window: f64,
        #[arg(long, default_value_t = 0.01)]
        resolution: f64,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Rational-bump gluing.
    #[command(subcommand)]
    Glue(GlueCommand),
    /// Dynamical distance between two curves.
    Dist {
        g: String,
        h: String,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 0.05)]
        resolution: f64,
        /// Also check the metric inequality on a centered square of this side.
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Sample the spherical derivative on a square and write CSV.
    Field {
        curve: String,
        /// `x,y,side` of the lower-left corner and side.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        square: [f64; 3],
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Run the acceptance criteria.
    Acceptance {
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConstantsArgs {
    /// Analytic constants (huge R0) or desk-scale empirical ones with R0 = R - 1.
    #[arg(long, value_enum, default_value = "empirical")]
    pub mode: ModeArg,
    /// Empirical K (default a·sqrt(2N/π)).
    #[arg(long)]
    pub k: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Analytic,
    Empirical,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueCommand {
    /// Glue one bump at `center`; optionally verify the decay conditions.
    Once {
        curve: String,
        #[arg(long, alias = "p", value_parser = parse_cx, allow_hyphen_values = true)]
        center: Cx,
        #[arg(long, alias = "R")]
        r: f64,
        #[command(flatten)]
        constants: ConstantsArgs,
        /// Outer radius for the decay fits.
        #[arg(long)]
        verify: Option<f64>,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Iterate over an `n × n` tiling by squares of half-side `r`.
    Tile {
        curve: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long, alias = "R")]
        r: f64,
        /// Tiles per side (odd).
        #[arg(long, alias = "window", default_value_t = 5)]
        n: i64,
        #[arg(long, value_enum, default_value = "spiral")]
        order: OrderArg,
        #[command(flatten)]
        constants: ConstantsArgs,
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderArg {
    Spiral,
    Raster,
}

fn constants_for(curve: &CurveMap, r: f64, args: &ConstantsArgs) -> CliResult<GluingConstants> {
    let n = curve.dim();
    if args.mode == ModeArg::Analytic {
        return Ok(solve_constants(n, Mode::Analytic, None)?);
    }
    let desk = desk_constants(n, r - 1.0)?;
    match args.k {
        Some(k) => Ok(GluingConstants::empirical(n, r - 1.0, k, None)?),
        None => Ok(desk),
    }
}

fn save_curve(path: &Option<PathBuf>, curve: &CurveMap) -> CliResult<()> {
    if let Some(p) = path {
        std::fs::write(p, serde_json::to_string_pretty(&CurveDoc::from_curve(curve))?)?;
    }
    Ok(())
}

fn point_json(c: &[C64]) -> serde_json::Value {
    json!(c.iter().map(|&z| cx(z)).collect::<Vec<_>>())
}

/// Runs `cli`, writing records to `out` (unless `--output` is given) and
/// human-readable acceptance lines to `log`.
pub fn run(cli: &Cli, out: &mut (dyn Write + Send), log: &mut (dyn Write + Send)) -> CliResult<()> {
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Parse(format!("thread pool: {e}")))?;
    let mut file;
    let sink: &mut (dyn Write + Send) = match &cli.output {
        Some(p) => {
            file = BufWriter::new(File::create(p)?);
            &mut file
        }
        None => out,
    };
    let mut w = JsonLines::new(sink);
    pool.install(|| dispatch(cli, &mut w, log))?;
    w.into_inner().flush()?;
    Ok(())
}

fn dispatch(cli: &Cli, w: &mut JsonLines<&mut (dyn Write + Send)>, log: &mut (dyn Write + Send)) -> CliResult<()> {
    let (name, args) = match serde_json::to_value(&cli.command)? {
        serde_json::Value::String(s) => (s, serde_json::Value::Null),
        serde_json::Value::Object(m) => {
            let (k, v) = m.into_iter().next().expect("one variant");
            (k, v)
        }
        v => (v.to_string(), serde_json::Value::Null),
    };
    let mut cfg = RunConfig::new(&name, args);
    cfg.quad = cli.quad.overrides();
    cfg.seed = cli.seed.unwrap_or(0);
    cfg.output = cli.output.as_ref().map(|p| p.display().to_string());
    cfg.threads = cli.threads;
    let opts = cfg.quad.energy_options();

    match &cli.command {
        Command::Constants => {
            let r = elliptic_constant(&opts.quad)?;
            w.write(
                &Record::new("constants", "", &cfg)
                    .value(r.value)
                    .error(r.error_estimate)
                    .params(json!({"integral": r.integral, "refined_value": r.refined_value})),
            )?;
        }
        Command::Corpus => {
            for (id, description, _) in CORPUS {
                let e = corpus::load(id)?;
                w.write(&Record::new("corpus", id, &cfg).value(description).params(serde_json::to_value(&e.doc)?))?;
            }
        }
        Command::Eval { curve, z } => {
            let (id, f) = corpus::resolve(curve)?;
            for &p in z {
                let l = f.lift(from_cx(p))?;
                w.write(
                    &Record::new("eval", &id, &cfg)
                        .value(l.spherical_derivative())
                        .params(json!({"z": p, "point": point_json(f.point(from_cx(p))?.coords())})),
                )?;
            }
        }
        Command::Sup { curve, region, resolution } => {
            let (id, f) = corpus::resolve(curve)?;
            let reg = region.region()?;
            let s = sup_spherical_derivative(&f, &reg, *resolution)?;
            w.write(
                &Record::new("sup", &id, &cfg)
                    .region(&reg)
                    .value(s.value)
                    .params(json!({"argmax": cx(s.argmax), "grid_step": s.grid_step, "samples": s.samples})),
            )?;
        }
        Command::Energy { curve, region } => {
            let (id, f) = corpus::resolve(curve)?;
            let reg = region.region()?;
            let e = energy(&f, &reg, &opts)?;
            w.write(
                &Record::new("energy", &id, &cfg)
                    .region(&reg)
                    .value(e.value)
                    .error(e.error_estimate)
                    .params(json!({"order": e.order, "depth": e.depth})),
            )?;
        }
        Command::Nsa { curve, radii } => {
            let (id, f) = corpus::resolve(curve)?;
            for v in nsa_profile(&f, radii, &opts)? {
                w.write(&Record::new("nsa", &id, &cfg).value(v.value).error(v.error_estimate).params(json!({"r": v.r})))?;
            }
        }
        Command::Rho { curve, shape, sizes, window, elliptic, nsa } => {
            let (id, f) = corpus::resolve(curve)?;
            if *elliptic {
                let lat = f
                    .period_lattice()
                    .ok_or_else(|| CliError::Parse(format!("{id} has no period lattice")))?;
                let d = rho_elliptic(&f, &lat, &opts)?;
                w.write(
                    &Record::new("rho_elliptic", &id, &cfg).value(d.value).error(d.error_estimate).params(
                        json!({"cell_area": d.cell_area, "periodicity_residual": d.periodicity_residual}),
                    ),
                )?;
            } else if let Some(r_max) = nsa {
                let d = rho_nsa_estimate(&f, *r_max, &opts)?;
                w.write(
                    &Record::new("rho_nsa", &id, &cfg)
                        .value(d.value)
                        .params(json!({"r_max": r_max, "r_at_max": d.r_at_max, "tail": d.tail, "samples": d.samples})),
                )?;
            } else {
                if sizes.is_empty() {
                    return Err(CliError::Parse("--sizes, --elliptic or --nsa is required".into()));
                }
                let sh = match shape {
                    ShapeArg::Disk => Shape::Disk,
                    ShapeArg::Square => Shape::Square,
                };
                let fs = FolnerSequence::new(sh, sizes.clone())?;
                let largest = sizes[sizes.len() - 1];
                let side = window.unwrap_or(4.0 * largest);
                let win = Region::centered_square(C64::new(0.0, 0.0), side)?;
                let p = rho_estimate(&f, &fs, &win, &opts)?;
                for e in &p.entries {
                    w.write(
                        &Record::new("rho", &id, &cfg)
                            .region(&fs.member(p.entries.iter().position(|x| x == e).unwrap_or(0)))
                            .value(e.rho)
                            .error(e.error_estimate)
                            .params(json!({"size": e.size, "area": e.area, "translate": cx(e.translate), "window": side})),
                    )?;
                }
            }
        }
        Command::Nondeg { curve, r, half_widths, threshold } => {
            let (id, f) = corpus::resolve(curve)?;
            let windows: Vec<Region> = half_widths
                .iter()
                .map(|h| Region::centered_square(C64::new(0.0, 0.0), 2.0 * h))
                .collect::<Result<_, _>>()?;
            let c = nondegeneracy_profile(&f, *r, &windows)?;
            let verdict = classify(&c, *threshold);
            for t in &c.trend {
                w.write(
                    &Record::new("nondeg", &id, &cfg)
                        .region(&t.window)
                        .value(t.delta)
                        .params(json!({"r": r, "argmin": cx(t.center), "centers": t.centers})),
                )?;
            }
            w.write(
                &Record::new("nondeg_verdict", &id, &cfg)
                    .value(format!("{verdict:?}"))
                    .params(json!({"delta": c.delta, "center_step": c.center_step, "resolution": c.resolution})),
            )?;
        }
        Command::Rescale { curve, target, window, resolution, save } => {
            let (id, f) = corpus::resolve(curve)?;
            let win = Region::centered_square(C64::new(0.0, 0.0), *window)?;
            let (g, c) = brody_rescale(&f, &win, *target, *resolution)?;
            save_curve(save, &g)?;
            w.write(&Record::new("rescale", &id, &cfg).region(&win).value(c).params(json!({"target": target})))?;
        }
        Command::Glue(GlueCommand::Once { curve, center, r, constants, verify, save }) => {
            let (id, f) = corpus::resolve(curve)?;
            let consts = constants_for(&f, *r, constants)?;
            let p = from_cx(*center);
            let o = glue_once(&f, p, *r, &consts, 0.05)?;
            save_curve(save, &o.curve)?;
            let mut rec = Record::new("glue_once", &id, &cfg)
                .region(&Region::disk(p, *r)?)
                .value(o.sup_before)
                .params(json!({"a": consts.a, "k": consts.k, "delta0": consts.delta0, "r0": consts.r0}));
            if let Some(r_out) = verify {
                let vo = VerifyOptions { seed: cfg.seed, ..VerifyOptions::default() };
                let rep = verify_glue(&f, &o.curve, p, *r, consts.k, *r_out, consts.delta0, &vo)?;
                rec.params["verify"] = json!({
                    "passed": rep.passed(), "sup_inner": rep.sup_inner, "condition_i": rep.condition_i,
                    "ii": [rep.condition_ii.prefactor, rep.condition_ii.slope, rep.condition_ii.holds],
                    "iii": [rep.condition_iii.prefactor, rep.condition_iii.slope, rep.condition_iii.holds],
                });
            }
            w.write(&rec)?;
        }
        Command::Glue(GlueCommand::Tile { curve, eps, tau, r, n, order, constants, save }) => {
            let (id, f) = corpus::resolve(curve)?;
            let consts = constants_for(&f, *r, constants)?;
            let ord = match order {
                OrderArg::Spiral => TileOrder::Spiral,
                OrderArg::Raster => TileOrder::Raster,
            };
            let plan = TilingPlan::centered(*r, *n, ord)?;
            let (g, log) = make_nondegenerate_logged(&f, *eps, *tau, &plan, &consts, &TilingOptions::default())?;
            save_curve(save, &g)?;
            for e in &log.entries {
                w.write(
                    &Record::new("glue_tile", &id, &cfg).region(&plan.tile_region(&e.tile)).value(format!("{:?}", e.case)).params(json!({
                        "tile": [e.tile.alpha, e.tile.beta], "step": e.step, "interior": e.tile.interior,
                        "sup_original": e.sup_original, "sup_before": e.sup_before, "sup_after": e.sup_after,
                        "sup_final": e.sup_final, "energy_before": e.energy_before, "energy_after": e.energy_after,
                        "energy_error": e.energy_error,
                    })),
                )?;
            }
            w.write(&Record::new("glue_summary", &id, &cfg).value(log.ok()).params(json!({
                "delta": log.delta, "bumps": log.bumps, "interior_sup": log.interior_sup, "sup_bound": log.sup_bound,
                "tail_bound": log.tail_bound, "failures": log.failures,
            })))?;
            if !log.ok() {
                return Err(brody_core::Error::BoundViolated(format!("{} tiling checks failed", log.failures.len())).into());
            }
        }
        Command::Dist { g, h, n_max, resolution, omega } => {
            let (gid, gf) = corpus::resolve(g)?;
            let (hid, hf) = corpus::resolve(h)?;
            let dopts = DistanceOptions { n_max: *n_max, resolution: *resolution };
            let d = curve_distance(&gf, &hf, &dopts)?;
            let pair = format!("{gid},{hid}");
            w.write(
                &Record::new("dist", &pair, &cfg)
                    .value(d.value)
                    .error(d.error_bound())
                    .params(json!({"sups": d.sups, "truncation_error": d.truncation_error, "sampling_slack": d.sampling_slack})),
            )?;
            if let Some(side) = omega {
                let om = Region::centered_square(C64::new(0.0, 0.0), *side)?;
                let r = dist_inequality_check(&gf, &hf, &om, *resolution, &dopts)?;
                w.write(&Record::new("dist_inequality", &pair, &cfg).region(&om).value(r.holds).params(json!({
                    "dist_omega": r.dist_omega, "sup_omega": r.sup_omega, "sup_plane": r.sup_plane,
                    "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "slack": r.slack,
                })))?;
            }
        }
        Command::Field { curve, square, step, csv } => {
            let (id, f) = corpus::resolve(curve)?;
            let [x, y, side] = *square;
            let reg = Region::square(C64::new(x, y), side)?;
            if !(*step > 0.0) {
                return Err(CliError::Parse("--step must be positive".into()));
            }
            let n = (side / step).round() as usize + 1;
            let grid = FieldGrid::sample(&|z| f.spherical_derivative(z), x, y, *step, n, n)?;
            write_field_csv(BufWriter::new(File::create(csv)?), &grid)?;
            let max = grid.values.iter().copied().fold(0.0, f64::max);
            w.write(
                &Record::new("field", &id, &cfg)
                    .region(&reg)
                    .value(max)
                    .params(json!({"csv": csv.display().to_string(), "points": n * n})),
            )?;
        }
        Command::Acceptance { only } => {
            let mut acfg = AcceptanceConfig::default();
            if let Some(s) = cli.seed {
                acfg.seed = s;
            }
            if !only.is_empty() {
                acfg.only = Some(only.clone());
            }
            let report = run_acceptance(&acfg, &mut |c| {
                let _ = writeln!(log, "{}", c.line());
            })?;
            for c in &report.criteria {
                w.write(&Record::new("acceptance", "", &cfg).value(c.ok()).params(serde_json::to_value(c)?))?;
            }
            let failed = report.failures();
            if failed > 0 {
                return Err(CliError::AcceptanceFailed(failed));
            }
        }
    }
    Ok(())
}
