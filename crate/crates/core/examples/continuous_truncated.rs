//! The truncated form for Gaussian bumps, its smooth counterpart and the
//! trivial bound.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplexht::continuous::{eval_simplex_truncated, eval_smooth_form, phi_l1, FunctionSpec, GaussianBump, QuadratureSpec};
use simplexht::numerics::{LpExponent, TruncationRange};

fn main() -> simplexht::Result<()> {
    let n = 2;
    let quad = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bumps: Vec<GaussianBump> = (0..=n)
        .map(|_| {
            let b = GaussianBump::random(n, &mut rng);
            let norm = b.lp_norm(LpExponent::Finite(3.0));
            b.scaled(1.0 / norm)
        })
        .collect();
    let grids = bumps
        .iter()
        .map(|b| FunctionSpec::Bump(b.clone()).to_grid(quad.extent, quad.spacing))
        .collect::<simplexht::Result<Vec<_>>>()?;

    for (r, big_r) in [(0.5, 4.0), (0.25, 16.0)] {
        let range = TruncationRange::new(r, big_r)?;
        let sharp = eval_simplex_truncated(&grids, &range, &quad)?;
        let smooth = eval_smooth_form(&grids, &range, &quad)?;
        println!("(r, R) = ({r}, {big_r})");
        println!("  truncated  {sharp:+.6}   trivial bound {:.4}", 2.0 * range.log_ratio());
        println!("  smooth     {smooth:+.6}");
        println!("  |sum|      {:.2e}   ‖φ‖₁ = {:.4}", (sharp + smooth).abs(), phi_l1(&range, 1e-10)?);
    }
    Ok(())
}
