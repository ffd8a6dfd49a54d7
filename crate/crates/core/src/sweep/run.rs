use rayon::prelude::*;
use serde::Serialize;

use super::config::{EngineKind, SweepConfig};
use crate::error::{Error, Result};
use crate::fock::{build_hamiltonian, build_mode_operators};
use crate::lindblad::{
    build_liouvillian, observables, steady_state_direct, steady_state_inverse_power, InversePowerOptions,
    SolverMethod,
};
use crate::lindblad::steady::POSITIVITY_WARN;
use crate::params::SystemParams;
use crate::qle::analytic_point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Point,
    ScanDelta1,
    GridMinG2,
    ScanG,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Point => "point",
            Command::ScanDelta1 => "scan-delta1",
            Command::GridMinG2 => "grid-min-g2",
            Command::ScanG => "scan-g",
            Command::Compare => "compare",
        }
    }
}

/// One engine evaluated at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub axes: Vec<f64>,
    /// Minimizing value of the `minimize_over` parameter.
    pub argmin: Option<f64>,
    pub engine: EngineKind,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub g2_1: Option<f64>,
    pub g2_2: Option<f64>,
    /// `‖L vec ρ‖` of the numeric steady state.
    pub residual: Option<f64>,
    /// Phonon-series tail bound of the analytic engine.
    pub tail: Option<f64>,
    pub iterations: Option<usize>,
    pub flags: Vec<String>,
    pub error: Option<String>,
}

impl Row {
    fn empty(engine: EngineKind) -> Self {
        Row {
            axes: Vec::new(),
            argmin: None,
            engine,
            s1: None,
            s2: None,
            g2_1: None,
            g2_2: None,
            residual: None,
            tail: None,
            iterations: None,
            flags: Vec::new(),
            error: None,
        }
    }

    fn failed(engine: EngineKind, err: &Error) -> Self {
        Row { error: Some(err.to_string()), flags: vec!["error".into()], ..Row::empty(engine) }
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    pub fn s(&self, cavity: usize) -> Option<f64> {
        if cavity == 1 { self.s1 } else { self.s2 }
    }

    pub fn g2(&self, cavity: usize) -> Option<f64> {
        if cavity == 1 { self.g2_1 } else { self.g2_2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub command: Command,
    pub axis_names: Vec<String>,
    pub minimize: Option<String>,
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_error()).count()
    }

    /// `0` when every row succeeded, `3` when all failed, `4` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.failures() {
            0 => 0,
            n if n == self.rows.len() => 3,
            _ => 4,
        }
    }

    pub fn engine_rows(&self, engine: EngineKind) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.engine == engine)
    }

    /// Row with the smallest `g²₁` for one engine; earlier rows win ties.
    pub fn min_g2_1(&self, engine: EngineKind) -> Option<&Row> {
        self.engine_rows(engine)
            .filter(|r| r.g2_1.is_some())
            .fold(None, |best: Option<&Row>, r| match best {
                Some(b) if b.g2_1 <= r.g2_1 => Some(b),
                _ => Some(r),
            })
    }
}

/// Evaluates one engine at one parameter point; failures become error rows.
pub fn evaluate(cfg: &SweepConfig, params: &SystemParams, engine: EngineKind) -> Row {
    let out = match engine {
        EngineKind::Numeric => numeric_row(cfg, params),
        EngineKind::Analytic => analytic_row(cfg, params),
    };
    out.unwrap_or_else(|e| Row::failed(engine, &e))
}

fn numeric_row(cfg: &SweepConfig, params: &SystemParams) -> Result<Row> {
    let ops = build_mode_operators(&cfg.layout)?;
    let h = build_hamiltonian(params, &cfg.layout)?;
    let l = build_liouvillian(&h, params, &ops)?;
    let state = match cfg.numeric.method {
        SolverMethod::Direct => steady_state_direct(&l)?,
        SolverMethod::InversePower => steady_state_inverse_power(
            &l,
            &InversePowerOptions { shift: cfg.numeric.shift, tol: cfg.numeric.tol, ..Default::default() },
        )?,
    };
    let obs = observables(&state, params, &ops);
    let mut row = Row::empty(EngineKind::Numeric);
    row.s1 = obs.s1;
    row.s2 = obs.s2;
    row.g2_1 = obs.g2_1;
    row.g2_2 = obs.g2_2;
    row.residual = Some(state.residual);
    row.iterations = Some(state.iterations);
    if state.min_eigenvalue < POSITIVITY_WARN {
        row.flags.push("positivity".into());
    }
    Ok(row)
}

fn analytic_row(cfg: &SweepConfig, params: &SystemParams) -> Result<Row> {
    let r = analytic_point(params, &cfg.analytic)?;
    let mut row = Row::empty(EngineKind::Analytic);
    row.s1 = r.s1;
    row.s2 = r.s2;
    row.g2_1 = r.g2_1;
    row.g2_2 = r.g2_2;
    row.tail = Some(r.tail_estimate);
    if r.sideband {
        row.flags.push("sideband".into());
    }
    Ok(row)
}

/// Cartesian product of the scan axes, last axis fastest.
fn grid_points(cfg: &SweepConfig) -> Result<Vec<Vec<f64>>> {
    let mut points = vec![Vec::new()];
    for axis in &cfg.axes {
        let g = axis.grid()?;
        points = points
            .into_iter()
            .flat_map(|p| g.iter().map(move |&v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    Ok(points)
}

// Smallest g²₁ over the minimization grid; ties go to the smaller parameter.
fn reduce_min(mut evals: Vec<(f64, Row)>) -> Row {
    evals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let engine = evals[0].1.engine;
    let failed = evals.iter().filter(|(_, r)| r.is_error()).count();
    let best = evals
        .iter()
        .filter(|(_, r)| r.g2_1.is_some())
        .fold(None, |best: Option<&(f64, Row)>, e| match best {
            Some(b) if b.1.g2_1 <= e.1.g2_1 => Some(b),
            _ => Some(e),
        });
    let mut row = match best {
        Some((x, r)) => Row { argmin: Some(*x), ..r.clone() },
        None => {
            let why = evals
                .iter()
                .find_map(|(_, r)| r.error.clone())
                .unwrap_or_else(|| "g2 undefined on the whole minimization grid".into());
            Row { error: Some(why), flags: vec!["error".into()], ..Row::empty(engine) }
        }
    };
    if failed > 0 && !row.is_error() {
        row.flags.push(format!("failed-points={failed}"));
    }
    row
}

/// Runs every engine on every grid point, minimizing over `minimize_over`
/// when present. Points are evaluated in parallel and emitted in grid order.
pub fn run_sweep(cfg: &SweepConfig, command: Command) -> Result<SweepResult> {
    cfg.validate()?;
    let points = grid_points(cfg)?;
    let kinds = cfg.engine.kinds();
    let min_grid = match &cfg.minimize_over {
        Some(a) => Some(a.grid()?),
        None => None,
    };
    let names: Vec<&str> = cfg.axes.iter().map(|a| a.param.as_str()).collect();
    let min_name = cfg.minimize_over.as_ref().map(|a| a.param.as_str());

    let mut tasks = Vec::new();
    for (pi, p) in points.iter().enumerate() {
        for &k in &kinds {
            match &min_grid {
                Some(g) => tasks.extend(g.iter().map(|&x| (pi, k, p.clone(), Some(x)))),
                None => tasks.push((pi, k, p.clone(), None)),
            }
        }
    }
    let evaluated: Vec<(usize, EngineKind, Option<f64>, Row)> = tasks
        .into_par_iter()
        .map(|(pi, k, p, x)| {
            let mut assign: Vec<(&str, f64)> = names.iter().copied().zip(p.iter().copied()).collect();
            if let (Some(n), Some(v)) = (min_name, x) {
                assign.push((n, v));
            }
            let row = match cfg.params_at(&assign) {
                Ok(params) => evaluate(cfg, &params, k),
                Err(e) => Row::failed(k, &e),
            };
            (pi, k, x, row)
        })
        .collect();

    let mut rows = Vec::with_capacity(points.len() * kinds.len());
    let mut it = evaluated.into_iter().peekable();
    while let Some((pi, k, x, row)) = it.next() {
        let mut row = if let Some(x) = x {
            let mut group = vec![(x, row)];
            while let Some((pj, kj, _, _)) = it.peek() {
                if *pj != pi || *kj != k {
                    break;
                }
                let (_, _, xj, rj) = it.next().unwrap();
                group.push((xj.unwrap(), rj));
            }
            reduce_min(group)
        } else {
            row
        };
        row.axes = points[pi].clone();
        rows.push(row);
    }
    Ok(SweepResult {
        command,
        axis_names: names.iter().map(|s| s.to_string()).collect(),
        minimize: min_name.map(str::to_string),
        rows,
    })
}

/// The base point, once per engine.
pub fn run_point(cfg: &SweepConfig) -> Result<SweepResult> {
    let mut c = cfg.clone();
    c.axes.clear();
    run_sweep(&c, Command::Point)
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond { Ok(()) } else { Err(Error::Config(what.to_string())) }
}

/// Δ₁ scan; leading axes, if any, label a family of curves.
pub fn scan_delta1(cfg: &SweepConfig) -> Result<SweepResult> {
    require(
        cfg.axes.last().is_some_and(|a| a.param == "delta1"),
        "scan-delta1 needs `delta1` as the last axis",
    )?;
    run_sweep(cfg, Command::ScanDelta1)
}

/// Minimum of `g²₁` over `minimize_over` on a two-axis grid.
pub fn grid_min_g2(cfg: &SweepConfig) -> Result<SweepResult> {
    require(cfg.axes.len() == 2, "grid-min-g2 needs two scan axes")?;
    require(cfg.minimize_over.is_some(), "grid-min-g2 needs `minimize_over`")?;
    run_sweep(cfg, Command::GridMinG2)
}

/// Minimum of `g²₁` over `minimize_over` along `g`; leading axes label curves.
pub fn scan_g(cfg: &SweepConfig) -> Result<SweepResult> {
    require(cfg.axes.last().is_some_and(|a| a.param == "g"), "scan-g needs `g` as the last axis")?;
    require(cfg.minimize_over.is_some(), "scan-g needs `minimize_over`")?;
    run_sweep(cfg, Command::ScanG)
}

/// Largest and mean relative difference of one observable.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DiffSummary {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub tolerance: f64,
    /// Per grid point: `|analytic − numeric|/|numeric|` for S1, S2, g2_1, g2_2.
    pub rows: Vec<(Vec<f64>, [Option<f64>; 4])>,
    pub s1: DiffSummary,
    pub s2: DiffSummary,
    pub g2_1: DiffSummary,
    pub g2_2: DiffSummary,
    pub pass: bool,
}

fn rel(a: Option<f64>, n: Option<f64>) -> Option<f64> {
    match (a, n) {
        (Some(a), Some(n)) if n != 0.0 => Some((a - n).abs() / n.abs()),
        (Some(a), Some(n)) if a == n => Some(0.0),
        _ => None,
    }
}

fn summarize(v: impl Iterator<Item = f64>) -> DiffSummary {
    let xs: Vec<f64> = v.collect();
    if xs.is_empty() {
        return DiffSummary::default();
    }
    DiffSummary {
        max: xs.iter().cloned().fold(0.0, f64::max),
        mean: xs.iter().sum::<f64>() / xs.len() as f64,
        count: xs.len(),
    }
}

/// Runs both engines over the configured axes and reports their agreement.
pub fn compare_engines(cfg: &SweepConfig) -> Result<(SweepResult, CompareReport)> {
    require(cfg.engine == super::config::Engine::Both, "compare needs engine `both`")?;
    let result = run_sweep(cfg, Command::Compare)?;
    let mut rows = Vec::new();
    for pair in result.rows.chunks(2) {
        let (n, a) = (&pair[0], &pair[1]);
        let d = [rel(a.s1, n.s1), rel(a.s2, n.s2), rel(a.g2_1, n.g2_1), rel(a.g2_2, n.g2_2)];
        rows.push((n.axes.clone(), d));
    }
    let col = |k: usize| summarize(rows.iter().filter_map(|(_, d)| d[k]));
    let (s1, s2, g21, g22) = (col(0), col(1), col(2), col(3));
    let pass = result.failures() == 0 && [&s1, &s2, &g21, &g22].iter().all(|s| s.max <= cfg.tolerance);
    let report = CompareReport { tolerance: cfg.tolerance, rows, s1, s2, g2_1: g21, g2_2: g22, pass };
    Ok((result, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModeLayout;
    use crate::sweep::config::{Axis, Engine};

    fn small() -> SweepConfig {
        SweepConfig {
            base: SystemParams { j: 0.05, ..SystemParams::default() },
            layout: ModeLayout::new(3, 3, 8),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn rows_follow_declared_grid_order() {
        let cfg = SweepConfig {
            engine: Engine::Analytic,
            axes: vec![Axis::values("delta2", &[0.3, 0.1]), Axis::linear("E2", 0.001, 0.002, 3)],
            ..small()
        };
        let r = run_sweep(&cfg, Command::GridMinG2).unwrap();
        let got: Vec<Vec<f64>> = r.rows.iter().map(|r| r.axes.clone()).collect();
        assert_eq!(
            got,
            vec![
                vec![0.3, 0.001],
                vec![0.3, 0.0015],
                vec![0.3, 0.002],
                vec![0.1, 0.001],
                vec![0.1, 0.0015],
                vec![0.1, 0.002]
            ]
        );
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn minimum_matches_full_scan() {
        let grid = Axis::linear("delta1", 0.1, 0.4, 13);
        let scan = SweepConfig { engine: Engine::Analytic, axes: vec![grid.clone()], ..small() };
        let full = scan_delta1(&scan).unwrap();
        let best = full.min_g2_1(EngineKind::Analytic).unwrap();
        let min = SweepConfig {
            engine: Engine::Analytic,
            axes: vec![Axis::values("J", &[0.05])],
            minimize_over: Some(grid),
            ..small()
        };
        let m = run_sweep(&min, Command::Point).unwrap();
        assert_eq!(m.rows.len(), 1);
        assert_eq!(m.rows[0].g2_1, best.g2_1);
        assert_eq!(m.rows[0].argmin, Some(best.axes[0]));
    }

    #[test]
    fn ties_go_to_smaller_parameter() {
        // without tunneling cavity 1 ignores Δ₂, so every Δ₂ ties
        let cfg = SweepConfig {
            engine: Engine::Analytic,
            base: SystemParams { j: 0.0, ..SystemParams::default() },
            axes: vec![Axis::values("J", &[0.0])],
            minimize_over: Some(Axis::values("delta2", &[0.9, 0.5, 0.2])),
            ..small()
        };
        let r = run_sweep(&cfg, Command::Point).unwrap();
        assert_eq!(r.rows[0].argmin, Some(0.2));
    }

    #[test]
    fn failures_are_recorded_per_row() {
        let cfg = SweepConfig {
            engine: Engine::Both,
            base: SystemParams { nbar: 1.0, ..small().base },
            ..small()
        };
        let r = run_point(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(!r.rows[0].is_error());
        assert!(r.rows[1].is_error());
        assert_eq!(r.exit_code(), 4);
        let cfg = SweepConfig { engine: Engine::Analytic, ..cfg };
        assert_eq!(run_point(&cfg).unwrap().exit_code(), 3);
    }

    #[test]
    fn shape_checks() {
        let cfg = small();
        assert!(scan_delta1(&cfg).is_err());
        assert!(grid_min_g2(&cfg).is_err());
        assert!(scan_g(&cfg).is_err());
        let cfg = SweepConfig { engine: Engine::Numeric, ..small() };
        assert!(compare_engines(&cfg).is_err());
    }

    #[test]
    fn linear_point_agrees_across_engines() {
        // a two-photon cutoff would bias g² at order ⟨n⟩
        let cfg = SweepConfig {
            base: SystemParams { g: 0.0, ..small().base },
            layout: ModeLayout::new(4, 4, 3),
            ..small()
        };
        let (_, rep) = compare_engines(&cfg).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.g2_1.max < 1e-8, "{:?}", rep.g2_1);
        assert!(rep.s1.max < 1e-8, "{:?}", rep.s1);
    }
}
