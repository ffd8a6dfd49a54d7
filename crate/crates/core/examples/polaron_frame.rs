//! Polaron transform of the truncated Fock space and the low-lying levels
//! of the undriven system.

use optomech::fock::{eigen_levels, polaron_transform, EigenLevel};
use optomech::{ModeLayout, Result, SystemParams};

pub fn run_example() -> Result<(f64, Vec<EigenLevel>)> {
    let params = SystemParams { delta1: 0.4, delta2: 0.4, j: 0.05, e1: 0.0, e2: 0.0, ..SystemParams::default() };
    let layout = ModeLayout::new(3, 3, 24);
    let pt = polaron_transform(&params, &layout)?;
    println!("unitarity defect {:.1e}, displacement error {:.1e}", pt.unitarity_defect, pt.displacement_error);

    let mut levels = eigen_levels(&params, 1)?;
    levels.extend(eigen_levels(&params, 2)?);
    for l in &levels {
        println!("N = {} branch {:+} E = {:.5}", l.n_total, l.branch, l.energy);
    }
    Ok((pt.unitarity_defect, levels))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
