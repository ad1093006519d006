//! Univariate Bernstein polynomials: conversion, elevation, products.

use bernstein_positive::scalar::{ratio, Rational};
use bernstein_positive::BernsteinPoly1D;

fn main() -> bernstein_positive::Result<()> {
    // 1 - x + x^2 in monomial form
    let mono = [ratio(1, 1), ratio(-1, 1), ratio(1, 1)];
    let p = BernsteinPoly1D::<Rational>::from_monomial(&mono);
    println!("degree {} coefficients {:?}", p.degree(), show(p.coeffs()));

    // raising the degree never lowers the smallest coefficient
    for m in [4, 8, 16] {
        let q = p.degree_elevate(m)?;
        println!("elevated to {m}: min coefficient {}", q.min_coefficient().0);
    }

    let sq = p.multiply(&p);
    let x = ratio(1, 3);
    println!("p(1/3)^2 = {}, (p*p)(1/3) = {}", p.eval(&x)? * p.eval(&x)?, sq.eval(&x)?);
    println!("integral of p over [0,1] = {}", p.integral());
    println!("back to monomials: {:?}", show(&p.to_monomial()));
    Ok(())
}

fn show(c: &[Rational]) -> Vec<String> {
    c.iter().map(|q| q.to_string()).collect()
}
