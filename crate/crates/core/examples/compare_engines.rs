//! Pointwise agreement between the numeric and analytic engines.

use optomech::sweep::{compare_engines, Axis, CompareReport, Engine, SweepConfig};
use optomech::{ModeLayout, Result, SystemParams};

pub fn run_example() -> Result<CompareReport> {
    let cfg = SweepConfig {
        base: SystemParams { j: 0.05, e1: 0.0005, e2: 0.0005, gamma: 0.001, ..SystemParams::default() },
        layout: ModeLayout::new(4, 4, 16),
        engine: Engine::Both,
        axes: vec![Axis::values("delta1", &[0.15, 0.25, 0.35])],
        tolerance: 0.05,
        ..SweepConfig::default()
    };
    let (_, report) = compare_engines(&cfg)?;
    println!("S1   max {:.2e} mean {:.2e}", report.s1.max, report.s1.mean);
    println!("g2_1 max {:.2e} mean {:.2e}", report.g2_1.max, report.g2_1.mean);
    println!("within {}: {}", report.tolerance, report.pass);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
