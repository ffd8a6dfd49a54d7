//! Every example runs and produces what it claims.

#[path = "../examples/analytic_engine.rs"]
mod analytic_engine;
#[path = "../examples/compare_engines.rs"]
mod compare_engines;
#[path = "../examples/config_presets.rs"]
mod config_presets;
#[path = "../examples/delta1_scan.rs"]
mod delta1_scan;
#[path = "../examples/g_scan.rs"]
mod g_scan;
#[path = "../examples/grid_minimum.rs"]
mod grid_minimum;
#[path = "../examples/inverse_power.rs"]
mod inverse_power;
#[path = "../examples/phonon_correlators.rs"]
mod phonon_correlators;
#[path = "../examples/polaron_frame.rs"]
mod polaron_frame;
#[path = "../examples/quadrature_check.rs"]
mod quadrature_check;
#[path = "../examples/steady_state.rs"]
mod steady_state;

use optomech::qle::JOrder;
use optomech::sweep::{Engine, EngineKind};

#[test]
fn polaron_frame() {
    let (defect, levels) = polaron_frame::run_example().unwrap();
    assert!(defect < 1e-10);
    assert_eq!(levels.len(), 5);
    assert!(levels.iter().all(|l| l.energy.is_finite()));
}

#[test]
fn steady_state() {
    let obs = steady_state::run_example().unwrap();
    let g2 = obs.g2_1.unwrap();
    assert!(g2 > 0.2 && g2 < 0.3, "{g2}");
}

#[test]
fn inverse_power() {
    assert!(inverse_power::run_example().unwrap() < 1e-8);
}

#[test]
fn analytic_engine() {
    let rows = analytic_engine::run_example().unwrap();
    assert_eq!(rows.last().unwrap().0, JOrder::Resummed);
    let exact = rows.last().unwrap().1;
    // Higher orders approach the resummed value.
    let errs: Vec<f64> = rows[..3].iter().map(|(_, g)| (g - exact).abs()).collect();
    assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
}

#[test]
fn phonon_correlators() {
    assert!(phonon_correlators::run_example().unwrap() < 1e-8);
}

#[test]
fn quadrature_check() {
    assert!(quadrature_check::run_example().unwrap() < 1e-6);
}

#[test]
fn delta1_scan() {
    let r = delta1_scan::run_example().unwrap();
    assert_eq!(r.rows.len(), 12);
    assert_eq!(r.failures(), 0);
}

#[test]
fn grid_minimum() {
    let best = grid_minimum::run_example().unwrap();
    assert!(best.g2_1.unwrap() < 0.05);
}

#[test]
fn g_scan() {
    let r = g_scan::run_example().unwrap();
    assert_eq!(r.rows.len(), 12);
    // Tunneling lowers the minimum at every coupling in this range.
    for k in 0..6 {
        assert!(r.rows[6 + k].g2_1 < r.rows[k].g2_1);
    }
}

#[test]
fn compare_engines() {
    let rep = compare_engines::run_example().unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn config_presets() {
    let presets = config_presets::run_example().unwrap();
    assert!(presets.len() >= 10);
    let grid = presets.iter().find(|(n, _)| n == "fig5b").unwrap();
    assert_eq!(grid.1.engine, Engine::Analytic);
    assert!(presets.iter().any(|(_, c)| c.engine.kinds().contains(&EngineKind::Numeric)));
}
