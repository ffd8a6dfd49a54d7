//! Free-mechanics correlators of the polaron displacement and their
//! expansion into exponentials.

use num_complex::Complex64 as C64;
use optomech::qle::{expand_to_series, phonon_corr_2pt, phonon_corr_4pt, PhononCorrelationSpec};
use optomech::Result;

pub fn run_example() -> Result<f64> {
    let spec = PhononCorrelationSpec::new(0.5, 12)?;
    let series = expand_to_series(&spec);
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let tau = 0.4 * k as f64;
        let exact = phonon_corr_2pt(&spec, tau);
        // exp[−λ²(1 − e^{−iτ})] for the vacuum
        let closed = (-(0.25) * (C64::new(1.0, 0.0) - C64::new(0.0, -tau).exp())).exp();
        worst = worst.max((exact - closed).norm()).max((series.eval(tau) - exact).norm());
        println!("tau = {tau:.1}: {exact:.6}");
    }
    let four = phonon_corr_4pt(&spec, [0.3, 0.3, 1.2, 1.2], [1, 1, -1, -1]);
    println!("four-point {four:.6}; {} exponentials, tail bound {:.1e}", series.len(), spec.tail_bound());
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
