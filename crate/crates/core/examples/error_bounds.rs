//! Pointwise error against the non-uniform bounds, for B_n and Q_{n,r}.

use bernstein_positive::analysis::{verify_bound, VerifyConfig};
use bernstein_positive::combinatorics::DegreeVector;
use bernstein_positive::oracle::builtin;

fn main() -> bernstein_positive::Result<()> {
    let f = builtin("runge_shifted", 1)?;
    let degrees: Vec<DegreeVector> = [8, 16, 32, 64].iter().map(|&n| DegreeVector::uniform(1, n)).collect::<Result<_, _>>()?;

    for r in 0..=1 {
        let rep = verify_bound(&f, &VerifyConfig::bernstein(r, degrees.clone(), 0.005))?;
        println!("B_n, r={r}: max observed/bound {:.4}, passed {}", rep.max_ratio, rep.passed());
    }

    let rep = verify_bound(&f, &VerifyConfig::lorentz(3, degrees, 0.005))?;
    for s in &rep.per_degree {
        println!("Q_n,3 n={:?}: sup error {:.3e}, fitted constant {:.4}", s.n, s.sup_error, s.fitted_constant);
    }
    println!("errors where the bound vanishes: {:.1e}", rep.zero_rhs_max_err);
    Ok(())
}
