//! Cross-check of the closed-form analytic engine against brute-force
//! nested time integrals.

use optomech::qle::{analytic_point, quadrature_oracle_g2, AnalyticOptions};
use optomech::{Result, SystemParams};

pub fn run_example() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (d1, j) in [(0.1, 0.05), (0.25, 0.05), (0.4, 0.02)] {
        let params = SystemParams { delta1: d1, j, ..SystemParams::default() };
        let series = analytic_point(&params, &AnalyticOptions::default())?;
        let quad = quadrature_oracle_g2(&params, 12, None, 1e-9)?;
        let rel = (series.g2_1.unwrap() - quad.g2(1)).abs() / quad.g2(1);
        println!("delta1 {d1} J {j}: series {:.8} quadrature {:.8} ({} nodes)", series.g2_1.unwrap(), quad.g2(1), quad.nodes);
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
