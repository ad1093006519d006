//! Central moments of the binomial distribution and their bounds.

use bernstein_positive::moments::{abs_moment_scaled, lemma1_rhs, LEMMA1_CONSTANTS};
use bernstein_positive::scalar::ratio;
use bernstein_positive::central_moments;

fn main() -> bernstein_positive::Result<()> {
    let n = 12;
    let table = central_moments(n, 6)?;
    for s in 0..=6 {
        let coeffs: Vec<String> = table.poly(s).iter().map(|c| c.to_string()).collect();
        println!("T_{{{n},{s}}}(x) monomial coefficients: [{}]", coeffs.join(", "));
    }
    println!("T_{{{n},4}}(1/4) = {}", table.eval_exact(4, &ratio(1, 4)));

    println!("\n  x        s   scaled |moment|   bound");
    for x in [0.001, 0.05, 0.3, 0.5] {
        for (s, &a) in LEMMA1_CONSTANTS.iter().enumerate() {
            let m = abs_moment_scaled(n, s, x)?;
            println!("{x:<8} {s:>2}   {m:<15.6e}   {:.6e}", lemma1_rhs(n, s, x, a)?);
        }
    }
    Ok(())
}
