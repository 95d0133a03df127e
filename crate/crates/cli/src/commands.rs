use crate::config::{RunConfig, FORMAT_VERSION};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;
use transcend_core::builder::{build, BuildError, Construction};
use transcend_core::checks::{growth_order, run_suite, Report, SuiteOptions, Verdict};
use transcend_core::dynamics::{
    box_count, boxcount_csv, grid_png, grid_ppm, julia_mask, mask_pbm, render, whitney_csv, whitney_tsum,
    DynamicsError, Grid, Mask, OrbitRecord, Window,
};
use transcend_core::seedpoly::{HeadParams, PolySpec};
use transcend_core::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Construct,
    Verify,
    Growth,
    Render,
    Dimension,
    Orbit,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Failure {
    /// Carries the full stdout report; exit 1.
    #[error("{summary}")]
    Checks { output: String, summary: String },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Degenerate(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Checks { .. } => 1,
            Failure::Config(_) => 2,
            Failure::Degenerate(_) => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionArtifact {
    pub format_version: String,
    pub config: String,
    pub construction: Construction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportArtifact {
    pub format_version: String,
    pub config: String,
    pub report: Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitArtifact {
    pub format_version: String,
    pub config: String,
    pub orbit: OrbitRecord,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

fn write(cfg: &RunConfig, name: &str, bytes: &[u8]) -> Result<String, Failure> {
    fs::create_dir_all(&cfg.out).map_err(|e| io_err(&cfg.out, e))?;
    let path = cfg.out.join(name);
    fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
    Ok(format!("wrote {}\n", path.display()))
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s.into_bytes()
}

/// The construction named by `construction=`, or a fresh build.
pub fn obtain_construction(cfg: &RunConfig) -> Result<Construction, Failure> {
    if let Some(path) = &cfg.construction {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let art: ConstructionArtifact = serde_json::from_str(&text).map_err(|e| io_err(path, e))?;
        return Ok(art.construction);
    }
    let spec = PolySpec::new(cfg.spec_roots.clone()).map_err(|e| Failure::Config(format!("spec_roots: {e}")))?;
    if !(cfg.lambda > 2.0) {
        return Err(Failure::Config(format!("validation failed:\n  lambda = {} must exceed 2", cfg.lambda)));
    }
    let head = HeadParams::new(&spec, cfg.lambda, cfg.iterations, cfg.samples)
        .map_err(|e| Failure::Config(format!("head parameters: {e}")))?;
    build(&spec, &head, &cfg.rule, cfg.depth, cfg.samples).map_err(|e| match e {
        BuildError::Validation(problems) => {
            let mut s = String::from("validation failed:");
            for p in problems {
                let _ = write!(s, "\n  {p}");
            }
            Failure::Config(s)
        }
        other => Failure::Config(other.to_string()),
    })
}

pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<String, Failure> {
    match cmd {
        Command::Construct => cmd_construct(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Growth => cmd_growth(cfg),
        Command::Render => cmd_render(cfg).map(|(s, _)| s),
        Command::Dimension => cmd_dimension(cfg),
        Command::Orbit => cmd_orbit(cfg),
    }
}

pub fn ledger_table(c: &Construction) -> String {
    let mut s = format!("{:>3}  {:>24}  {:>16}  {:>10}  {:>16}\n", "k", "logR_k", "n_k", "l_k", "m_k");
    for l in &c.levels {
        let _ = writeln!(s, "{:>3}  {:>24.16e}  {:>16}  {:>10}  {:>16}", l.k, l.log_r, l.n.to_string(), l.l.to_string(), l.m_k.to_string());
    }
    match c.log_r_next {
        Some(r) => {
            let _ = writeln!(s, "logR_{} = {r:.16e}", c.depth() + 1);
        }
        None => s.push_str("logR_{K+1} not representable\n"),
    }
    let _ = writeln!(s, "capped: {}", c.capped);
    s
}

pub fn cmd_construct(cfg: &RunConfig) -> Result<String, Failure> {
    let c = obtain_construction(cfg)?;
    let art = ConstructionArtifact { format_version: FORMAT_VERSION.into(), config: cfg.to_text(), construction: c };
    let mut out = ledger_table(&art.construction);
    out += &write(cfg, "construction.json", &json(&art))?;
    Ok(out)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<String, Failure> {
    let c = obtain_construction(cfg)?;
    let opts = SuiteOptions { seed: cfg.seed, samples: cfg.samples, band_points: cfg.band_points };
    let report = run_suite(&c, &opts);
    let failures = report.failures().count();
    let skips = report.skips().count();
    let mut out = report.table();
    let _ = writeln!(
        out,
        "{} checks, {failures} failed, {skips} skipped (seed {:#x}, {} samples, {} band points)",
        report.results.len(),
        report.seed,
        report.samples,
        report.band_points
    );
    let art = ReportArtifact { format_version: FORMAT_VERSION.into(), config: cfg.to_text(), report };
    out += &write(cfg, "report.json", &json(&art))?;
    let counted = failures + if cfg.strict_no_skip { skips } else { 0 };
    if counted > 0 {
        let mut summary = format!("{failures} check(s) failed");
        if cfg.strict_no_skip && skips > 0 {
            let _ = write!(summary, ", {skips} skipped check(s) counted as failures (--strict-no-skip)");
            for r in art.report.results.iter().filter(|r| r.verdict == Verdict::SkippedLogOnly) {
                let _ = write!(summary, "\n  skipped: {} k={:?}", r.name, r.level);
            }
        }
        return Err(Failure::Checks { output: out, summary });
    }
    Ok(out)
}

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

fn comment(header: &str) -> String {
    header.lines().map(|l| format!("# {l}\n")).collect()
}

pub fn cmd_growth(cfg: &RunConfig) -> Result<String, Failure> {
    let c = obtain_construction(cfg)?;
    let rows = growth_order(&c).map_err(|e| Failure::Config(e.to_string()))?;
    let mut csv = comment(&cfg.header());
    csv += "# rho_hat = log(log R_{k+1}) / log(2 R_k), with R_{k+1} = max |f_k| on |z| = 2R_k\n";
    csv += "# rho_lower = log(n_k log 2) / log(2 R_k), from min |f| >= 2^{n_k} on |z| = 2R_k\n";
    csv += "# liminf_ratio = log(log R_{k+1}) / log(log 2R_k), the log-log growth criterion\n";
    csv += "k,logR_k,n_k,rho_hat,rho_lower,liminf_ratio\n";
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{},{},{}", r.k, r.log_r, r.n, opt(r.rho_hat), r.rho_lower, opt(r.liminf_ratio));
    }
    let body: String = csv.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    Ok(body + &write(cfg, "growth.csv", csv.as_bytes())?)
}

/// The configured window, or the square of side `8R_1` around 0.
pub fn resolve_window(cfg: &RunConfig, c: &Construction) -> Result<Window, Failure> {
    let w = match cfg.window {
        Some(w) => Window::new(Complex64::new(w.cx, w.cy), w.width, w.height),
        None => {
            let side = 8.0 * c.levels[0].log_r.exp();
            Window::new(Complex64::new(0.0, 0.0), side, side)
        }
    }
    .map_err(|e| Failure::Config(e.to_string()))?;
    let limit = c.levels.last().expect("at least one level").log_r + 2.0 * std::f64::consts::LN_2;
    if w.max_modulus().ln() > limit {
        return Err(Failure::Config(format!(
            "window reaches |z| = {:e}, beyond 4R_K = exp({limit})",
            w.max_modulus()
        )));
    }
    Ok(w)
}

fn render_grid(cfg: &RunConfig) -> Result<(Construction, Grid), Failure> {
    let c = obtain_construction(cfg)?;
    let w = resolve_window(cfg, &c)?;
    let (nx, ny) = cfg.res;
    if nx == 0 || ny == 0 {
        return Err(Failure::Config("resolution must be positive".into()));
    }
    let g = render(&c, w, nx, ny, cfg.budget);
    Ok((c, g))
}

fn cmd_render(cfg: &RunConfig) -> Result<(String, Mask), Failure> {
    let (_, g) = render_grid(cfg)?;
    let header = cfg.header();
    let mut out = String::new();
    let mut counts = std::collections::BTreeMap::new();
    for cell in &g.cells {
        *counts.entry(format!("{:?} first_B={:?}", cell.final_class, cell.first_b_level)).or_insert(0usize) += 1;
    }
    for (label, n) in &counts {
        let _ = writeln!(out, "{label}: {n}");
    }
    let mut buf = Vec::new();
    grid_ppm(&g, &header, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
    out += &write(cfg, "render.ppm", &buf)?;
    let mut buf = Vec::new();
    grid_png(&g, &header, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
    out += &write(cfg, "render.png", &buf)?;
    let mask = julia_mask(&g);
    let mut buf = Vec::new();
    mask_pbm(&mask, &header, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
    out += &write(cfg, "mask.pbm", &buf)?;
    Ok((out, mask))
}

/// Whitney exponents tabulated by `dimension`.
pub const WHITNEY_TS: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];

fn degenerate(e: DynamicsError) -> Failure {
    match e {
        DynamicsError::BadArguments(s) => Failure::Config(s),
        other => Failure::Degenerate(other.to_string()),
    }
}

pub fn cmd_dimension(cfg: &RunConfig) -> Result<String, Failure> {
    let (mut out, mask) = cmd_render(cfg)?;
    let header = cfg.header();
    let max_exp = cfg.box_max_exp.unwrap_or_else(|| cfg.res.0.min(cfg.res.1).ilog2());
    let r = box_count(&mask, cfg.box_min_exp, max_exp).map_err(degenerate)?;
    let mut buf = Vec::new();
    boxcount_csv(&r, &header, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
    let _ = writeln!(out, "box-count slope {} ± {}", r.slope, r.slope_stderr);
    out += &write(cfg, "boxcount.csv", &buf)?;
    // Whitney sums of the complement of the frontier inside the window
    let complement = Mask { bits: mask.bits.iter().map(|b| !b).collect(), ..mask.clone() };
    let mut rows = Vec::new();
    for t in WHITNEY_TS {
        rows.push((t, whitney_tsum(&complement, t).map_err(degenerate)?));
    }
    let mut buf = Vec::new();
    whitney_csv(&rows, &header, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
    out += &write(cfg, "whitney.csv", &buf)?;
    Ok(out)
}

pub fn cmd_orbit(cfg: &RunConfig) -> Result<String, Failure> {
    let c = obtain_construction(cfg)?;
    let z0 = Complex64::new(cfg.z.0, cfg.z.1);
    let limit = c.levels.last().expect("at least one level").log_r + 2.0 * std::f64::consts::LN_2;
    if !z0.is_finite() || z0.norm().ln() > limit {
        return Err(Failure::Config(format!("start point {z0} lies beyond 4R_K")));
    }
    let orbit = transcend_core::dynamics::iterate_orbit(&c, z0, cfg.budget);
    let mut out = String::new();
    for (i, s) in orbit.steps.iter().enumerate() {
        let _ = writeln!(out, "{i:>4}  {:<14}  log|z| = {:e}", format!("{:?}", s.region), s.log_modulus);
    }
    let _ = writeln!(out, "final: {:?}", orbit.final_class);
    let art = OrbitArtifact { format_version: FORMAT_VERSION.into(), config: cfg.to_text(), orbit };
    out += &write(cfg, "orbit.json", &json(&art))?;
    Ok(out)
}
