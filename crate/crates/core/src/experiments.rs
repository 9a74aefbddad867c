//! Figure-style experiment drivers emitting deterministic CSV.
//!
//! Every driver writes `#`-prefixed comment lines carrying the fully
//! resolved configuration and seed, then a column-header row, then data rows
//! in sweep order with 12-significant-digit scientific notation. Sweep
//! points evaluate in parallel; rows are buffered and emitted in order, so a
//! given config and seed always produce byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::avg_secrecy::{avg_cs_mc, avg_cs_quad, optimize_alpha};
use crate::config::{ExperimentConfig, SweepVar};
use crate::error::{Error, Result};
use crate::geometry::{alpha_max, Scenario, Vec3};
use crate::los_solver::{cs_los, solve_near_optimal};
use crate::outage::sop_mc;
use crate::specfun::QuadratureSpec;

/// Default Monte Carlo draws for capacity curves.
pub const DEFAULT_CAPACITY_SAMPLES: u64 = 1_000_000;
/// Default Monte Carlo draws for outage points, sized so the deepest plotted
/// probabilities (~1e-3 and below) keep a meaningful interval.
pub const DEFAULT_SOP_SAMPLES: u64 = 10_000_000;

/// Canonical powers applied when the config leaves `p_dbm` unset.
const FIG2_P_DBM: f64 = 16.0;
const FIG4_P_DBM: f64 = 25.0;

/// Secrecy rate used by the outage-versus-power sweep.
const FIG5_R_S: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Capacity and its line-of-sight proxy versus the adjustment factor.
    Fig2,
    /// Optimal versus near-optimal capacity across transmit power.
    Fig3,
    /// Outage probability versus secrecy rate.
    Fig4,
    /// Outage probability versus transmit power.
    Fig5,
}

impl FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            other => Err(Error::Validation(format!(
                "unknown figure '{other}' (expected fig2 | fig3 | fig4 | fig5)"
            ))),
        }
    }
}

pub fn run_figure(figure: Figure, cfg: &ExperimentConfig) -> Result<String> {
    match figure {
        Figure::Fig2 => run_fig2(cfg),
        Figure::Fig3 => run_fig3(cfg),
        Figure::Fig4 => run_fig4(cfg),
        Figure::Fig5 => run_fig5(cfg),
    }
}

/// 12 significant digits, scientific notation, '.' decimal separator.
fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

fn quad_spec(cfg: &ExperimentConfig) -> QuadratureSpec {
    QuadratureSpec::default().with_tols(cfg.estimator.quad_abs_tol, cfg.estimator.quad_rel_tol)
}

fn header(name: &str, cfg: &ExperimentConfig, extra: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {name}");
    let _ = writeln!(out, "# seed = {}", cfg.estimator.seed);
    for line in cfg.resolved_text().lines() {
        let _ = writeln!(out, "# {line}");
    }
    for line in extra {
        let _ = writeln!(out, "# {line}");
    }
    out
}

/// Eavesdropper moved to elevation `upsilon` (radians) at its original range.
fn with_upsilon(s: &Scenario, upsilon: f64) -> Scenario {
    Scenario {
        q_e: Vec3::xz_polar(s.q_e.norm(), upsilon),
        ..s.clone()
    }
}

fn sweep_grid_or(cfg: &ExperimentConfig, var: SweepVar, default: &[f64]) -> Vec<f64> {
    match &cfg.sweep {
        Some(sw) if sw.variable == var => sw.grid(),
        _ => default.to_vec(),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Capacity versus adjustment factor at the canonical 16 dBm: Monte Carlo
/// average, quadrature average, and the line-of-sight capacity, plus comment
/// lines reporting both optima and their capacity gap.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<String> {
    let mut scenario = cfg.scenario.clone();
    if !cfg.p_dbm_set {
        scenario.p_dbm = FIG2_P_DBM;
    }
    let spec = quad_spec(cfg);
    let samples = cfg.estimator.mc_samples.unwrap_or(DEFAULT_CAPACITY_SAMPLES);
    let seed = cfg.estimator.seed;
    let hi = alpha_max(&scenario)?.max(1.0);
    let grid = sweep_grid_or(cfg, SweepVar::Alpha, &linspace(1.0, hi, 64));

    let opt = optimize_alpha(&scenario, cfg.estimator.tol_alpha, &spec)?;
    let los = solve_near_optimal(&scenario)?;
    let ecs_at_los = avg_cs_quad(&scenario, los.alpha_opt, &spec)?.value;
    let gap = (opt.value.value - ecs_at_los).abs();

    let rows: Vec<Result<String>> = grid
        .par_iter()
        .map(|&alpha| {
            let alpha = alpha.clamp(1.0, hi);
            let mc = avg_cs_mc(&scenario, alpha, samples, seed)?;
            let quad = avg_cs_quad(&scenario, alpha, &spec)?;
            Ok(format!(
                "{},{},{},{}",
                sci(alpha),
                sci(mc.value),
                sci(quad.value),
                sci(cs_los(&scenario, alpha))
            ))
        })
        .collect();

    let extra = vec![
        format!("alpha_opt_numeric = {}", sci(opt.alpha_opt)),
        format!("ecs_at_numeric_opt = {}", sci(opt.value.value)),
        format!("alpha_opt_los = {}", sci(los.alpha_opt)),
        format!("ecs_at_los_opt = {}", sci(ecs_at_los)),
        format!("ecs_gap = {}", sci(gap)),
    ];
    let mut out = header(
        "figure fig2: average secrecy capacity vs alpha",
        cfg,
        &extra,
    );
    out.push_str("alpha,avg_cs_mc,avg_cs_quad,cs_los\n");
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

/// Optimal and near-optimal average secrecy capacity versus transmit power,
/// for K in {1, 5} and eavesdropper elevations {0, 30} degrees.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<String> {
    let spec = quad_spec(cfg);
    let p_grid = sweep_grid_or(cfg, SweepVar::PDbm, &[10.0, 12.0, 14.0, 16.0, 18.0, 20.0]);
    let k_values = [1.0f64, 5.0];
    let upsilons_deg = [0.0f64, 30.0];

    let mut points = Vec::new();
    for &k in &k_values {
        for &ups in &upsilons_deg {
            for &p in &p_grid {
                points.push((k, ups, p));
            }
        }
    }
    let rows: Vec<Result<String>> = points
        .par_iter()
        .map(|&(k, ups, p)| {
            let mut s = with_upsilon(&cfg.scenario, ups.to_radians());
            s.k_b = k;
            s.k_e = k;
            s.p_dbm = p;
            let opt = optimize_alpha(&s, cfg.estimator.tol_alpha, &spec)?;
            let near = solve_near_optimal(&s)?;
            let ecs_near = avg_cs_quad(&s, near.alpha_opt, &spec)?.value;
            Ok(format!(
                "{},{},{},{},{}",
                sci(p),
                sci(k),
                sci(ups),
                sci(opt.value.value),
                sci(ecs_near)
            ))
        })
        .collect();

    let mut out = header(
        "figure fig3: average secrecy capacity vs transmit power",
        cfg,
        &[],
    );
    out.push_str("p_dbm,K,upsilon_deg,ecs_optimal,ecs_near_optimal\n");
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

fn sop_rows(
    cfg: &ExperimentConfig,
    points: &[(f64, f64)], // (upsilon_deg, swept value)
    scenario_of: impl Fn(f64, f64) -> Scenario + Sync,
    rs_of: impl Fn(f64) -> f64 + Sync,
) -> Vec<Result<String>> {
    let samples = cfg.estimator.mc_samples.unwrap_or(DEFAULT_SOP_SAMPLES);
    let seed = cfg.estimator.seed;
    points
        .par_iter()
        .map(|&(ups, v)| {
            let s = scenario_of(ups, v);
            let r_s = rs_of(v);
            // Simulation runs at the closed-form near-optimal boresight.
            let alpha = solve_near_optimal(&s)?.alpha_opt;
            let point = sop_mc(&s, alpha, r_s, samples, seed)?;
            let theory = point.sop_theory.ok_or(Error::CollinearGeometry(0.0))?;
            Ok(format!(
                "{},{},{},{},{}",
                sci(v),
                sci(ups),
                sci(theory),
                sci(point.sop_mc),
                sci(point.ci95_halfwidth)
            ))
        })
        .collect()
}

/// Outage probability versus secrecy rate at the canonical 25 dBm, for
/// eavesdropper elevations {0, 30, 45} degrees.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<String> {
    let mut base = cfg.scenario.clone();
    if !cfg.p_dbm_set {
        base.p_dbm = FIG4_P_DBM;
    }
    let rs_grid = sweep_grid_or(cfg, SweepVar::RS, &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    let mut points = Vec::new();
    for ups in [0.0, 30.0, 45.0] {
        for &rs in &rs_grid {
            points.push((ups, rs));
        }
    }
    let rows = sop_rows(
        cfg,
        &points,
        |ups, _| with_upsilon(&base, ups.to_radians()),
        |rs| rs,
    );
    let mut out = header("figure fig4: secrecy outage probability vs rate", cfg, &[]);
    out.push_str("r_s,upsilon_deg,sop_theory,sop_mc,ci95\n");
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

/// Outage probability versus transmit power at 1 bps/Hz, for eavesdropper
/// elevations {0, 30, 45} degrees. The default grid spans 14-30 dBm in 2 dB
/// steps; a sweep block selects any other grid.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<String> {
    let base = cfg.scenario.clone();
    let default_grid: Vec<f64> = (7..=15).map(|i| 2.0 * f64::from(i)).collect();
    let p_grid = sweep_grid_or(cfg, SweepVar::PDbm, &default_grid);
    let mut points = Vec::new();
    for ups in [0.0, 30.0, 45.0] {
        for &p in &p_grid {
            points.push((ups, p));
        }
    }
    let rows = sop_rows(
        cfg,
        &points,
        |ups, p| {
            let mut s = with_upsilon(&base, ups.to_radians());
            s.p_dbm = p;
            s
        },
        |_| FIG5_R_S,
    );
    let mut out = header("figure fig5: secrecy outage probability vs power", cfg, &[]);
    out.push_str("p_dbm,upsilon_deg,sop_theory,sop_mc,ci95\n");
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}
