//! The dyadic form, its supremum over coefficients and the auxiliary forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplexht::dyadic::{eval_dyadic_aux, eval_dyadic_form, eval_dyadic_sup, optimal_coefficients, scale_sups, CoefficientMap};
use simplexht::numerics::{normalize_tuple, CellFunction, HoelderExponents};

fn main() -> simplexht::Result<()> {
    let (n, side, m) = (2, 4, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let raw: Vec<CellFunction> = (0..=n)
        .map(|_| CellFunction::random_uniform(n, side, &mut rng))
        .collect::<simplexht::Result<_>>()?;
    let fs = normalize_tuple(&raw, &HoelderExponents::power_type(n))?;

    let plus = eval_dyadic_form(&fs, &CoefficientMap::per_scale(&(1..=m).map(|l| (l, 1.0)).collect::<Vec<_>>())?, m)?;
    let sup = eval_dyadic_sup(&fs, m)?;
    let at_signs = eval_dyadic_form(&fs, &optimal_coefficients(&fs, m)?, m)?;
    println!("all ε = +1:   {plus:.6}");
    println!("sup over ε:   {sup:.6}");
    println!("optimal ε:    {at_signs:.6}");
    println!("top aux form: {:.6}", eval_dyadic_aux(&fs, n, m)?);
    for (l, s) in scale_sups(&fs, m)?.iter().enumerate() {
        println!("scale {}: {s:.6}", l + 1);
    }
    Ok(())
}
