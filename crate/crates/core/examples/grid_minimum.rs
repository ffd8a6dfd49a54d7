//! Minimum of g2 over Δ₁ on a coarse (Δ₂, E₂) grid, analytic engine.

use optomech::sweep::{grid_min_g2, Axis, Engine, EngineKind, Row, SweepConfig};
use optomech::{Result, SystemParams};

pub fn run_example() -> Result<Row> {
    let cfg = SweepConfig {
        base: SystemParams { j: 0.05, kappa1: 0.15, kappa2: 0.15, ..SystemParams::default() },
        engine: Engine::Analytic,
        axes: vec![Axis::linear("delta2", 0.0, 1.0, 11), Axis::linear("E2", 0.0, 0.005, 11)],
        minimize_over: Some(Axis::linear("delta1", 0.15, 0.35, 21)),
        ..SweepConfig::default()
    };
    let result = grid_min_g2(&cfg)?;
    let best = result.min_g2_1(EngineKind::Analytic).expect("defined minimum").clone();
    println!(
        "min g2_1 = {:.4} at delta2 = {:.2}, E2 = {:.4}, delta1 = {:.3}",
        best.g2_1.unwrap(),
        best.axes[0],
        best.axes[1],
        best.argmin.unwrap()
    );
    Ok(best)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
