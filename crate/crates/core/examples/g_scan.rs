//! Minimum g2 against the optomechanical coupling for two tunneling
//! strengths, with Δ₂ tied to the polaron shift.

use optomech::sweep::{scan_g, Axis, Engine, SweepConfig, SweepResult};
use optomech::Result;

pub fn run_example() -> Result<SweepResult> {
    let mut cfg = SweepConfig {
        engine: Engine::Analytic,
        axes: vec![Axis::values("J", &[0.0, 0.05]), Axis::linear("g", 0.1, 0.6, 6)],
        minimize_over: Some(Axis::linear("delta1", 0.0, 0.6, 61)),
        ..SweepConfig::default()
    };
    cfg.relative_to_delta_g.insert("delta2".into(), 1.4);
    let result = scan_g(&cfg)?;
    for r in &result.rows {
        println!("J {:.2} g {:.1}: min g2_1 {:.4} at delta1 {:.2} {}", r.axes[0], r.axes[1], r.g2_1.unwrap(), r.argmin.unwrap(), r.flags.join(","));
    }
    Ok(result)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
