//! Smallest degree after which Q_{n,r} keeps nonnegative coefficients.

use bernstein_positive::analysis::{positivity_scan, Backend};
use bernstein_positive::oracle::builtin;

fn main() -> bernstein_positive::Result<()> {
    // (x - 1/2)^2 + c: a smaller c makes the threshold larger
    let base = builtin("parabola_shifted", 1)?;
    for shift in [0.0, -0.03, -0.04] {
        let f = base.with_transform(1.0, shift)?;
        let rep = positivity_scan(&f, 2, 100, Backend::Exact)?;
        println!("m = {:.3}: threshold {:?}", f.lower_bound_m(), rep.threshold);
    }

    let f = builtin("smooth_bump", 2)?;
    let rep = positivity_scan(&f, 4, 30, Backend::Float)?;
    println!("{} d=2 r=4: threshold {:?}", f.name(), rep.threshold);
    Ok(())
}
