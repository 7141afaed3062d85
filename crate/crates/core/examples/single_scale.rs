//! Single-scale forms of separable Gaussians against their norm bound.

use simplexht::continuous::{DilationParams, FunctionSpec, GaussianBump};
use simplexht::identities::check_single_scale;

fn main() -> simplexht::Result<()> {
    let f0 = GaussianBump::new(vec![0.2, -0.4], vec![1.0, 0.7], 1.3)?;
    let f1 = GaussianBump::new(vec![-0.5, 0.1], vec![0.8, 1.2], 0.6)?;
    for t in [0.1, 1.0, 10.0] {
        let one = check_single_scale(&[FunctionSpec::Bump(f0.clone())], &DilationParams::new(t, 1.0, vec![1.0, 1.4])?)?;
        let two = check_single_scale(
            &[FunctionSpec::Bump(f0.clone()), FunctionSpec::Bump(f1.clone())],
            &DilationParams::new(t, 1.0, vec![1.4])?,
        )?;
        println!("t = {t:>4}: k=1 {:.6} <= {:.6}   k=2 {:.6} <= {:.6}", one.value, one.bound, two.value, two.bound);
    }
    Ok(())
}
