//! Weak-drive analytic engine: spectrum and g2 at one point, for several
//! orders of the tunneling expansion.

use optomech::qle::{analytic_point, AnalyticOptions, JOrder};
use optomech::{Result, SystemParams};

pub fn run_example() -> Result<Vec<(JOrder, f64)>> {
    let params = SystemParams { delta1: 0.25, j: 0.05, ..SystemParams::default() };
    let mut out = Vec::new();
    for order in [JOrder::Truncated(0), JOrder::Truncated(2), JOrder::Truncated(6), JOrder::Resummed] {
        let r = analytic_point(&params, &AnalyticOptions { j_order: order, ..AnalyticOptions::default() })?;
        let g2 = r.g2_1.expect("cavity 1 is driven");
        println!("{order:>9}: S1 = {:.5} g2_1 = {g2:.5} g2_2 = {:.5}", r.s1.unwrap(), r.g2_2.unwrap());
        out.push((order, g2));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
