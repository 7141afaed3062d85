//! Fourier-side checks: the pointwise polynomial identity, the identity in
//! `t`, and the transforms of `g` and `h`.

use simplexht::continuous::DilationParams;
use simplexht::identities::{check_convolution, check_domination, check_fourier_pair, check_ftc, check_poly_identity, FrequencyPoint, TRule};
use simplexht::numerics::TruncationRange;

fn main() -> simplexht::Result<()> {
    let fp = FrequencyPoint::new(0.4, vec![-0.3, 1.1])?;
    let dp = DilationParams::new(1.5, 1.2, vec![0.9, 2.0])?;
    let poly = check_poly_identity(&fp, &dp)?;
    println!("pointwise: lhs {:.6e} rhs {:.6e} relative {:.1e}", poly.lhs, poly.rhs, poly.relative);

    let range = TruncationRange::new(0.5, 8.0)?;
    let ftc = check_ftc(&fp, &dp, &range, TRule::Adaptive(1e-10))?;
    println!("in t: integral {:.12} boundary {:.12} gap {:.1e}", ftc.integral, ftc.boundary, ftc.discrepancy);
    for panels in [4, 16, 64] {
        let c = check_ftc(&fp, &dp, &range, TRule::Composite(panels))?;
        println!("  {panels:>3} Simpson panels: gap {:.1e}", c.discrepancy);
    }

    let (g_err, h_err) = check_fourier_pair(1.0)?;
    println!("transforms at ξ = 1: {g_err:.1e} {h_err:.1e}");
    println!("convolution identity at x = 0.7: {:.1e}", check_convolution(0.7)?);
    println!("domination ratio at x = 0.63: {:.6}", check_domination(0.63)?);
    Ok(())
}
