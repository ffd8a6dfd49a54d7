//! Numeric steady state at one parameter point and its photon statistics.

use optomech::lindblad::{solve_point, CoherenceResult};
use optomech::{ModeLayout, Result, SystemParams};

pub fn run_example() -> Result<CoherenceResult> {
    let params = SystemParams { delta1: 0.25, j: 0.05, ..SystemParams::default() };
    let (state, obs) = solve_point(&params, &ModeLayout::new(4, 4, 16))?;
    println!(
        "dim {} iterations {} residual {:.1e} min eigenvalue {:.1e}",
        state.dim(),
        state.iterations,
        state.residual,
        state.min_eigenvalue
    );
    println!("S1 = {:.5}  g2_1 = {:.5}", obs.s1.unwrap(), obs.g2_1.unwrap());
    println!("S2 = {:.5}  g2_2 = {:.5}", obs.s2.unwrap(), obs.g2_2.unwrap());
    println!("<n1> = {:.3e}  <b†b> = {:.4}", obs.mean_photons.0, obs.mean_phonons);
    Ok(obs)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
