//! A positive approximant normalized into a probability density.

use bernstein_positive::analysis::density_demo;
use bernstein_positive::combinatorics::DegreeVector;
use bernstein_positive::oracle::builtin;

fn main() -> bernstein_positive::Result<()> {
    let f = builtin("smooth_bump", 2)?;
    let demo = density_demo(&f, &DegreeVector::new(vec![16, 16])?, 2, 0.02)?;
    println!("integral of Q: {:.8} (f has mass {:.8})", demo.normalization, demo.target_mass);
    println!("density integral: {:.12}", demo.density.integral());
    println!("vertex errors: {:?}", demo.vertex_errors);
    println!("interior median / max error: {:.3e} / {:.3e}", demo.interior_median_error, demo.interior_max_error);
    println!("sup |f/mass - density|: {:.3e}", demo.density_sup_error);
    Ok(())
}
