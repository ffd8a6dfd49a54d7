//! The two steady-state solvers side by side: bordered direct solve and
//! shifted inverse iteration.

use std::time::Instant;

use optomech::fock::{build_hamiltonian, build_mode_operators};
use optomech::lindblad::{build_liouvillian, steady_state_direct, steady_state_inverse_power, InversePowerOptions};
use optomech::{ModeLayout, Result, SystemParams};

pub fn run_example() -> Result<f64> {
    let params = SystemParams { delta1: 0.2, j: 0.05, e2: 0.002, ..SystemParams::default() };
    let layout = ModeLayout::new(3, 3, 12);
    let ops = build_mode_operators(&layout)?;
    let h = build_hamiltonian(&params, &layout)?;
    let l = build_liouvillian(&h, &params, &ops)?;

    let t = Instant::now();
    let direct = steady_state_direct(&l)?;
    println!("direct: {} iterations, residual {:.1e}, {:?}", direct.iterations, direct.residual, t.elapsed());
    let t = Instant::now();
    let power = steady_state_inverse_power(&l, &InversePowerOptions::default())?;
    println!("inverse power: {} iterations, residual {:.1e}, {:?}", power.iterations, power.residual, t.elapsed());

    let dist = direct.trace_distance(&power);
    println!("trace distance {dist:.1e}");
    Ok(dist)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
