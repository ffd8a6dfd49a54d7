use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::SolverMethod;
use crate::params::{ModeLayout, SystemParams, PARAM_NAMES};
use crate::qle::AnalyticOptions;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Numeric,
    Analytic,
    #[default]
    Both,
}

impl Engine {
    /// Single engines evaluated for this choice, numeric first.
    pub fn kinds(self) -> Vec<EngineKind> {
        match self {
            Engine::Numeric => vec![EngineKind::Numeric],
            Engine::Analytic => vec![EngineKind::Analytic],
            Engine::Both => vec![EngineKind::Numeric, EngineKind::Analytic],
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(Engine::Numeric),
            "analytic" => Ok(Engine::Analytic),
            "both" => Ok(Engine::Both),
            _ => Err(Error::Config(format!("unknown engine `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Numeric,
    Analytic,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Numeric => "numeric",
            EngineKind::Analytic => "analytic",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// A named parameter and its grid: either explicit `values` or
/// `start`/`stop`/`count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl Axis {
    pub fn linear(param: &str, start: f64, stop: f64, count: usize) -> Self {
        Axis {
            param: param.to_string(),
            start: Some(start),
            stop: Some(stop),
            count: Some(count),
            spacing: Spacing::Linear,
            values: None,
        }
    }

    pub fn values(param: &str, values: &[f64]) -> Self {
        Axis {
            param: param.to_string(),
            start: None,
            stop: None,
            count: None,
            spacing: Spacing::Linear,
            values: Some(values.to_vec()),
        }
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        let bad = |why: &str| Error::Config(format!("axis `{}`: {why}", self.param));
        let pts = match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => {
                if n == 0 {
                    return Err(bad("count must be positive"));
                }
                if n == 1 {
                    vec![a]
                } else {
                    match self.spacing {
                        Spacing::Linear => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
                        Spacing::Log => {
                            if !(a > 0.0 && b > 0.0) {
                                return Err(bad("log spacing needs positive bounds"));
                            }
                            let (la, lb) = (a.ln(), b.ln());
                            (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
                        }
                    }
                }
            }
            _ => return Err(bad("give either `values` or all of `start`, `stop`, `count`")),
        };
        if pts.is_empty() {
            return Err(bad("grid is empty"));
        }
        if pts.iter().any(|x| !x.is_finite()) {
            return Err(bad("grid values must be finite"));
        }
        let up = pts.windows(2).all(|w| w[1] > w[0]);
        let down = pts.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(bad("grid must be strictly monotone"));
        }
        Ok(pts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericOptions {
    #[serde(default = "default_method")]
    pub method: SolverMethod,
    /// Inverse-power shift; `1e−6 min κ` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    /// Inverse-power residual target.
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_method() -> SolverMethod {
    SolverMethod::Direct
}

fn default_tol() -> f64 {
    1e-12
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { method: default_method(), shift: None, tol: default_tol() }
    }
}

fn default_compare_tol() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub base: SystemParams,
    #[serde(default)]
    pub layout: ModeLayout,
    #[serde(default)]
    pub engine: Engine,
    /// Scan axes; rows are emitted row-major in this order.
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimize_over: Option<Axis>,
    /// Parameters slaved to `Δ_g = g²/ω_m`: `{"delta2": 1.4}` sets
    /// `Δ₂ = 1.4 Δ_g` at every point.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relative_to_delta_g: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub analytic: AnalyticOptions,
    #[serde(default)]
    pub numeric: NumericOptions,
    /// Relative tolerance for `compare`.
    #[serde(default = "default_compare_tol")]
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            name: None,
            base: SystemParams::default(),
            layout: ModeLayout::default(),
            engine: Engine::Both,
            axes: Vec::new(),
            minimize_over: None,
            relative_to_delta_g: BTreeMap::new(),
            output: None,
            analytic: AnalyticOptions::default(),
            numeric: NumericOptions::default(),
            tolerance: default_compare_tol(),
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical JSON, the input of the provenance hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.layout.validate().map_err(|e| Error::Config(e.to_string()))?;
        let known = |p: &str| PARAM_NAMES.contains(&p);
        let mut seen: Vec<&str> = Vec::new();
        for a in self.axes.iter().chain(&self.minimize_over) {
            if !known(&a.param) {
                return Err(Error::Config(format!("unknown parameter `{}`", a.param)));
            }
            if seen.contains(&a.param.as_str()) {
                return Err(Error::Config(format!("parameter `{}` appears on two axes", a.param)));
            }
            seen.push(&a.param);
            a.grid()?;
        }
        for (p, f) in &self.relative_to_delta_g {
            if !matches!(p.as_str(), "delta1" | "delta2") {
                return Err(Error::Config(format!("only detunings can follow Δ_g, not `{p}`")));
            }
            if !f.is_finite() {
                return Err(Error::Config(format!("factor for `{p}` must be finite")));
            }
            if seen.contains(&p.as_str()) {
                return Err(Error::Config(format!("`{p}` is both scanned and slaved to Δ_g")));
            }
        }
        if self.analytic.m_max < 1 {
            return Err(Error::Config("analytic.m_max must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Parameters at one grid point, with the slaved detunings applied.
    pub fn params_at(&self, assignments: &[(&str, f64)]) -> Result<SystemParams> {
        let mut p = self.base.clone();
        for (name, v) in assignments {
            p.set(name, *v)?;
        }
        for (name, f) in &self.relative_to_delta_g {
            let dg = p.delta_g();
            p.set(name, f * dg)?;
        }
        Ok(p)
    }
}
