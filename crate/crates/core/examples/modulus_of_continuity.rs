//! Grid estimates of the modulus of continuity of a function and its derivatives.

use bernstein_positive::oracle::{builtin, modulus, modulus_order_r};

fn main() -> bernstein_positive::Result<()> {
    let square = |x: &[f64]| x[0] * x[0];
    for h in [0.1, 0.05, 0.01] {
        // for x^2 the exact value is 2h - h^2
        let est = modulus(&square, 1, h, h / 50.0)?;
        println!("omega(x^2, {h}) = {:.6} (exact {:.6})", est.value, 2.0 * h - h * h);
    }

    let f = builtin("smooth_bump", 2)?;
    for r in 0..=2 {
        println!("{} order {r}: omega^(r)(0.1) = {:.5}", f.name(), modulus_order_r(&f, r, 0.1, 0.01)?);
    }
    Ok(())
}
