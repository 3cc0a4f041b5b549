//! Exact calculus on symbols: products, brackets, the Laplacian and integrals.
//!
//! Run with `cargo run --example symbol_calculus`.

use btlab::rational::real;
use btlab::symbolic::{integrate, laplacian, poisson_bracket, random_real_symbol};
use btlab::{CanonicalSymbol, Point};
use num_complex::Complex64;

fn main() -> btlab::Result<()> {
    let f0 = CanonicalSymbol::f0();
    let g0 = CanonicalSymbol::g0();
    println!("f0          = {f0}");
    println!("g0          = {g0}");
    println!("f0 * g0     = {}", f0.multiply(&g0));
    println!("{{f0, g0}}    = {}", poisson_bracket(&f0, &g0));
    println!("Δ f0        = {}", laplacian(&f0));
    println!("∫ f0 Ω / 2π = {}", integrate(&f0).over_two_pi);
    println!("∫ f0² Ω / 2π = {}", integrate(&f0.pow(2)).over_two_pi);

    // the point at infinity is reached through the second chart
    println!("f0(∞) = {}", f0.evaluate(Point::Infinity));
    println!("f0 in the chart w = 1/z: {}", f0.second_chart());

    let h = random_real_symbol(42, 2)?;
    println!("\nrandom symbol h = {h}");
    let z = Complex64::new(0.3, -0.7);
    println!("h({z}) = {:.12}", h.evaluate(Point::Finite(z)));

    // first spherical harmonics have eigenvalue −4
    let y = f0.sub(&CanonicalSymbol::constant(real(1, 2)));
    println!("Δ(f0 − 1/2) = −4 (f0 − 1/2): {}", laplacian(&y) == y.scale(&real(-4, 1)));
    println!("Δ g0 = −4 g0: {}", laplacian(&g0) == g0.scale(&real(-4, 1)));
    Ok(())
}
