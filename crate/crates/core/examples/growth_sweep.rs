//! Norm estimates of the dyadic form over growing scale counts and the fitted
//! growth exponent.

use simplexht::experiment::{fit_exponent, growth_sweep, SweepSpec};
use simplexht::numerics::HoelderExponents;

fn main() -> simplexht::Result<()> {
    let exps = HoelderExponents::from_finite(&[3.0, 3.0, 3.0])?;
    let mut spec = SweepSpec::dyadic(2, 5, (1..=5).collect(), exps, (0..3).collect());
    spec.settings.max_iter = 30;
    let records = growth_sweep(&spec)?;
    for r in &records {
        println!("m = {}  S = {:.6}  cycles = {}  seed = {}", r.abscissa, r.s, r.iters, r.seed);
    }
    let fit = fit_exponent(&records[1..])?;
    println!("slope {:.4} (reference exponent {:.2}), rms residual {:.2e}", fit.slope, fit.reference_exponent, fit.residual);
    Ok(())
}
