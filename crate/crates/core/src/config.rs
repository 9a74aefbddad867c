//! Flat `key = value` experiment configuration with bracketed sections.
//!
//! ```text
//! [scenario]
//! d_b = 50.0            # user distance, m
//! upsilon_b_deg = 60.0  # user elevation over the x-axis, degrees
//! d_e = 70.0
//! upsilon_deg = 30.0    # eavesdropper elevation, degrees
//! p_dbm = 16.0
//!
//! [sweep]
//! variable = p_dbm      # alpha | p_dbm | r_s | upsilon | K
//! start = 14.0
//! stop = 30.0
//! step = 1.0
//!
//! [estimator]
//! mc_samples = 1000000
//! seed = 1
//! quad_abs_tol = 1e-8
//! quad_rel_tol = 1e-8
//! tol_alpha = 1e-4
//!
//! [output]
//! path = out.csv
//! ```
//!
//! Everything is optional; an empty config resolves to the reference
//! scenario. Terminal positions accept either the distance/elevation form
//! above or explicit coordinates `q_b = x, y, z` (not both).

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::avg_secrecy::DEFAULT_TOL_ALPHA;
use crate::error::{Error, Result};
use crate::geometry::{Scenario, ScenarioWarning, Vec3};

/// Which quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Alpha,
    PDbm,
    RS,
    Upsilon,
    RicianK,
}

impl FromStr for SweepVar {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "alpha" => Ok(SweepVar::Alpha),
            "p_dbm" => Ok(SweepVar::PDbm),
            "r_s" => Ok(SweepVar::RS),
            "upsilon" => Ok(SweepVar::Upsilon),
            "K" | "k" => Ok(SweepVar::RicianK),
            other => Err(format!(
                "unknown sweep variable '{other}' (expected alpha | p_dbm | r_s | upsilon | K)"
            )),
        }
    }
}

impl std::fmt::Display for SweepVar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepVar::Alpha => "alpha",
            SweepVar::PDbm => "p_dbm",
            SweepVar::RS => "r_s",
            SweepVar::Upsilon => "upsilon",
            SweepVar::RicianK => "K",
        })
    }
}

/// An inclusive arithmetic grid over one sweep variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub variable: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Estimator knobs shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Monte Carlo draws per point; when unset each experiment applies its
    /// own default (1e6 for capacity curves, 1e7 for outage points).
    pub mc_samples: Option<u64>,
    pub seed: u64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    pub tol_alpha: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            mc_samples: None,
            seed: 5,
            quad_abs_tol: 1e-8,
            quad_rel_tol: 1e-8,
            tol_alpha: DEFAULT_TOL_ALPHA,
        }
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Whether the config text set the transmit power explicitly; figure
    /// drivers with their own canonical power only override an unset one.
    pub p_dbm_set: bool,
    pub warnings: Vec<ScenarioWarning>,
    pub sweep: Option<Sweep>,
    pub estimator: EstimatorConfig,
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::parse("").expect("empty config is valid")
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentConfig::parse(s)
    }
}

#[derive(Default)]
struct RawSection {
    // key -> (line, value)
    entries: BTreeMap<String, (usize, String)>,
}

impl RawSection {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid value '{raw}' for {key}"),
    })
}

fn parse_vec3(line: usize, key: &str, raw: &str) -> Result<Vec3> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse {
            line,
            msg: format!("{key} needs three comma-separated coordinates, got '{raw}'"),
        });
    }
    Ok(Vec3::new(
        parse_num(line, key, parts[0])?,
        parse_num(line, key, parts[1])?,
        parse_num(line, key, parts[2])?,
    ))
}

impl ExperimentConfig {
    /// Parse config text, fill defaults, and validate every invariant.
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut sections: BTreeMap<String, RawSection> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("unterminated section header '{line}'"),
                })?;
                if !matches!(name, "scenario" | "sweep" | "estimator" | "output") {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unknown section '[{name}]'"),
                    });
                }
                sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            let section = current.as_ref().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("key '{key}' appears before any [section] header"),
            })?;
            let entries = &mut sections.get_mut(section).unwrap().entries;
            if entries.insert(key.clone(), (line_no, value)).is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate key '{key}' in [{section}]"),
                });
            }
        }

        let mut scenario_raw = sections.remove("scenario").unwrap_or_default();
        let mut sweep_raw = sections.remove("sweep");
        let mut estimator_raw = sections.remove("estimator").unwrap_or_default();
        let mut output_raw = sections.remove("output").unwrap_or_default();

        let mut scenario = Scenario::default();

        let q_b_explicit = scenario_raw.take("q_b");
        let d_b = scenario_raw.take("d_b");
        let ups_b = scenario_raw.take("upsilon_b_deg");
        scenario.q_b = match (q_b_explicit, d_b, ups_b) {
            (Some((line, v)), None, None) => parse_vec3(line, "q_b", &v)?,
            (Some(_), _, _) => {
                return Err(Error::Validation(
                    "q_b given both as coordinates and as distance/elevation".into(),
                ))
            }
            (None, d, u) => {
                let dist = match d {
                    Some((line, v)) => positive(line, "d_b", parse_num(line, "d_b", &v)?)?,
                    None => 50.0,
                };
                let elev = match u {
                    Some((line, v)) => parse_num::<f64>(line, "upsilon_b_deg", &v)?,
                    None => 60.0,
                };
                Vec3::xz_polar(dist, elev.to_radians())
            }
        };
        let q_e_explicit = scenario_raw.take("q_e");
        let d_e = scenario_raw.take("d_e");
        let ups_e = scenario_raw.take("upsilon_deg");
        scenario.q_e = match (q_e_explicit, d_e, ups_e) {
            (Some((line, v)), None, None) => parse_vec3(line, "q_e", &v)?,
            (Some(_), _, _) => {
                return Err(Error::Validation(
                    "q_e given both as coordinates and as distance/elevation".into(),
                ))
            }
            (None, d, u) => {
                let dist = match d {
                    Some((line, v)) => positive(line, "d_e", parse_num(line, "d_e", &v)?)?,
                    None => 70.0,
                };
                let elev = match u {
                    Some((line, v)) => parse_num::<f64>(line, "upsilon_deg", &v)?,
                    None => 30.0,
                };
                Vec3::xz_polar(dist, elev.to_radians())
            }
        };

        let mut p_dbm_set = false;
        for (key, field) in [
            ("zeta_0", &mut scenario.zeta_0 as &mut f64),
            ("beta_b", &mut scenario.beta_b),
            ("beta_e", &mut scenario.beta_e),
            ("k_b", &mut scenario.k_b),
            ("k_e", &mut scenario.k_e),
            ("g_0", &mut scenario.g_0),
            ("lambda", &mut scenario.lambda),
            ("sigma2_dbm", &mut scenario.sigma2_dbm),
        ] {
            if let Some((line, v)) = scenario_raw.take(key) {
                *field = parse_num(line, key, &v)?;
            }
        }
        if let Some((line, v)) = scenario_raw.take("k") {
            let k: f64 = parse_num(line, "k", &v)?;
            scenario.k_b = k;
            scenario.k_e = k;
        }
        if let Some((line, v)) = scenario_raw.take("p_dbm") {
            scenario.p_dbm = parse_num(line, "p_dbm", &v)?;
            p_dbm_set = true;
        }
        reject_unknown("scenario", &scenario_raw)?;

        let warnings = scenario.validate()?;

        let sweep = match sweep_raw.as_mut() {
            None => None,
            Some(raw) => {
                let (line, var) = raw.take("variable").ok_or_else(|| {
                    Error::Validation("sweep section needs exactly one 'variable'".into())
                })?;
                let variable: SweepVar = var.parse().map_err(|msg| Error::Parse { line, msg })?;
                let mut get = |key: &str| -> Result<f64> {
                    match raw.take(key) {
                        Some((line, v)) => parse_num(line, key, &v),
                        None => Err(Error::Validation(format!(
                            "sweep section is missing '{key}'"
                        ))),
                    }
                };
                let start = get("start")?;
                let stop = get("stop")?;
                let step = get("step")?;
                reject_unknown("sweep", raw)?;
                if !step.is_finite() || step <= 0.0 {
                    return Err(Error::Validation(format!(
                        "sweep step must be > 0, got {step}"
                    )));
                }
                if stop < start {
                    return Err(Error::Validation(format!(
                        "sweep grid is empty: start {start} > stop {stop}"
                    )));
                }
                Some(Sweep {
                    variable,
                    start,
                    stop,
                    step,
                })
            }
        };

        let mut estimator = EstimatorConfig::default();
        if let Some((line, v)) = estimator_raw.take("mc_samples") {
            let n: u64 = parse_num(line, "mc_samples", &v)?;
            if n == 0 {
                return Err(Error::Validation("mc_samples must be >= 1".into()));
            }
            estimator.mc_samples = Some(n);
        }
        if let Some((line, v)) = estimator_raw.take("seed") {
            estimator.seed = parse_num(line, "seed", &v)?;
        }
        for (key, field) in [
            ("quad_abs_tol", &mut estimator.quad_abs_tol as &mut f64),
            ("quad_rel_tol", &mut estimator.quad_rel_tol),
            ("tol_alpha", &mut estimator.tol_alpha),
        ] {
            if let Some((line, v)) = estimator_raw.take(key) {
                *field = positive(line, key, parse_num(line, key, &v)?)?;
            }
        }
        reject_unknown("estimator", &estimator_raw)?;

        let output = output_raw.take("path").map(|(_, v)| v);
        reject_unknown("output", &output_raw)?;

        Ok(ExperimentConfig {
            scenario,
            p_dbm_set,
            warnings,
            sweep,
            estimator,
            output,
        })
    }

    /// The resolved configuration in the same text format, suitable for a
    /// reproducibility header.
    pub fn resolved_text(&self) -> String {
        let s = &self.scenario;
        let mut out = String::new();
        out.push_str("[scenario]\n");
        out.push_str(&format!("q_b = {}, {}, {}\n", s.q_b.x, s.q_b.y, s.q_b.z));
        out.push_str(&format!("q_e = {}, {}, {}\n", s.q_e.x, s.q_e.y, s.q_e.z));
        out.push_str(&format!("zeta_0 = {}\n", s.zeta_0));
        out.push_str(&format!("beta_b = {}\n", s.beta_b));
        out.push_str(&format!("beta_e = {}\n", s.beta_e));
        out.push_str(&format!("k_b = {}\n", s.k_b));
        out.push_str(&format!("k_e = {}\n", s.k_e));
        out.push_str(&format!("g_0 = {}\n", s.g_0));
        out.push_str(&format!("lambda = {}\n", s.lambda));
        out.push_str(&format!("sigma2_dbm = {}\n", s.sigma2_dbm));
        out.push_str(&format!("p_dbm = {}\n", s.p_dbm));
        if let Some(sw) = &self.sweep {
            out.push_str("[sweep]\n");
            out.push_str(&format!("variable = {}\n", sw.variable));
            out.push_str(&format!("start = {}\n", sw.start));
            out.push_str(&format!("stop = {}\n", sw.stop));
            out.push_str(&format!("step = {}\n", sw.step));
        }
        let e = &self.estimator;
        out.push_str("[estimator]\n");
        if let Some(n) = e.mc_samples {
            out.push_str(&format!("mc_samples = {n}\n"));
        }
        out.push_str(&format!("seed = {}\n", e.seed));
        out.push_str(&format!("quad_abs_tol = {}\n", e.quad_abs_tol));
        out.push_str(&format!("quad_rel_tol = {}\n", e.quad_rel_tol));
        out.push_str(&format!("tol_alpha = {}\n", e.tol_alpha));
        out
    }
}

fn positive(line: usize, key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse {
            line,
            msg: format!("{key} must be finite and > 0, got {v}"),
        })
    }
}

fn reject_unknown(section: &str, raw: &RawSection) -> Result<()> {
    if let Some((key, (line, _))) = raw.entries.iter().next() {
        return Err(Error::Parse {
            line: *line,
            msg: format!("unknown key '{key}' in [{section}]"),
        });
    }
    Ok(())
}
