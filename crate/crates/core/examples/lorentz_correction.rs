//! Bernstein operator against its derivative-corrected variant Q_{n,r}.

use bernstein_positive::combinatorics::DegreeVector;
use bernstein_positive::oracle::builtin;
use bernstein_positive::{bernstein_op, error_profile, lorentz_q, TensorBernstein};

fn main() -> bernstein_positive::Result<()> {
    let f = builtin("smooth_bump", 1)?;
    println!("   n      B_n        Q_n,2      Q_n,4");
    for n in [8, 16, 32, 64, 128] {
        let deg = DegreeVector::new(vec![n])?;
        let b: TensorBernstein = bernstein_op(&f, &deg)?;
        let mut row = vec![error_profile(&f, &b, 0.002)?.sup_error];
        for r in [2, 4] {
            let q: TensorBernstein = lorentz_q(&f, &deg, r)?;
            row.push(error_profile(&f, &q, 0.002)?.sup_error);
        }
        println!("{n:>4}  {:.3e}  {:.3e}  {:.3e}", row[0], row[1], row[2]);
    }
    Ok(())
}
