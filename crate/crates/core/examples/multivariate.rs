//! Anisotropic degrees on the unit square and the exact rational backend.

use bernstein_positive::combinatorics::DegreeVector;
use bernstein_positive::oracle::builtin;
use bernstein_positive::scalar::{ratio, Rational};
use bernstein_positive::{eval_q_pointwise, lorentz_q, TensorBernstein};

fn main() -> bernstein_positive::Result<()> {
    let f = builtin("runge_shifted", 2)?;
    let n = DegreeVector::new(vec![6, 14])?;
    let q: TensorBernstein = lorentz_q(&f, &n, 3)?;
    println!("degree {} with {} coefficients", q.degree(), q.coeffs().len());

    let x = [0.3, 0.85];
    println!("f = {:.10}", f.eval(&x));
    println!("Q (coefficients) = {:.10}", q.eval(&x)?);
    println!("Q (pointwise)    = {:.10}", eval_q_pointwise(&f, &n, 3, &x)?);

    let exact: TensorBernstein<Rational> = lorentz_q(&f, &DegreeVector::new(vec![2, 3])?, 2)?;
    println!("exact Q at (1/2, 1/3): {}", exact.eval(&[ratio(1, 2), ratio(1, 3)])?);
    println!("smallest coefficient: {}", exact.min_coefficient().0);
    Ok(())
}
