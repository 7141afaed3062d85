//! Walsh addition of dyadic intervals and the Haar functions they carry.

use simplexht::numerics::{haar_eval, interval_oplus, walsh_add, DyadicInterval};

fn main() -> simplexht::Result<()> {
    // indices add without carries
    println!("5 ⊕ 3 = {}", walsh_add(5, 3));

    let a = DyadicInterval::new(2, 1)?;
    let b = DyadicInterval::new(2, 3)?;
    let c = interval_oplus(a, b)?;
    println!("[{}, {}) ⊕ [{}, {}) = [{}, {})", a.left(), a.left() + a.len(), b.left(), b.left() + b.len(), c.left(), c.left() + c.len());

    for x in [4.5, 5.5, 6.5, 7.5] {
        println!("h_I({x}) = {:+}", haar_eval(a, x));
    }
    let (l, r) = (a.child(0), a.child(1));
    println!("children start at {} and {}, parent starts at {}", l.left(), r.left(), a.parent().left());

    if interval_oplus(a, DyadicInterval::new(3, 0)?).is_err() {
        println!("intervals at different scales cannot be added");
    }
    Ok(())
}
