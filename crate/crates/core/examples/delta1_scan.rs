//! A Δ₁ scan with both engines, written to CSV plus a JSON sidecar.

use optomech::sweep::{scan_delta1, write_outputs, Axis, Engine, SweepConfig, SweepResult};
use optomech::{ModeLayout, Result, SystemParams};

pub fn run_example() -> Result<SweepResult> {
    let cfg = SweepConfig {
        name: Some("delta1 scan".into()),
        base: SystemParams { j: 0.05, ..SystemParams::default() },
        layout: ModeLayout::new(3, 3, 12),
        engine: Engine::Both,
        axes: vec![Axis::linear("delta1", 0.0, 0.5, 6)],
        ..SweepConfig::default()
    };
    let result = scan_delta1(&cfg)?;
    for r in &result.rows {
        println!("{:.2} {:>8} g2_1 = {:.4}", r.axes[0], r.engine.name(), r.g2_1.unwrap_or(f64::NAN));
    }
    let prefix = std::env::temp_dir().join("optomech-example-delta1");
    let (csv, json) = write_outputs(&result, &cfg, &prefix, None)?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(result)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
