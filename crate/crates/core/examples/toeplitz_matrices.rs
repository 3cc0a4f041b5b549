//! Toeplitz matrices from exact Beta integrals and from quadrature.
//!
//! Run with `cargo run --example toeplitz_matrices`.

use btlab::operators::{
    hermitian_eigenvalues, operator_norm, toeplitz_exact, toeplitz_quadrature, ExactOperator, QuadratureRule,
};
use btlab::symbolic::random_real_symbol;
use btlab::CanonicalSymbol;

fn main() -> btlab::Result<()> {
    let f0 = CanonicalSymbol::f0();
    let t = toeplitz_exact(&f0, 3);
    println!("T_f0 at m = 3 ({}):\n{:.6}", t.provenance, t.entries.map(|c| c.re));

    // exact rational entries
    let exact = ExactOperator::toeplitz(&f0, 3);
    let diag: Vec<String> = exact.diagonal().iter().map(|d| d.re.to_string()).collect();
    println!("exact diagonal: {}", diag.join(", "));

    let f = random_real_symbol(7, 2)?;
    let m = 12;
    let a = toeplitz_exact(&f, m);
    for n in [8, 16, 32] {
        let rule = QuadratureRule::new(n, 2 * n);
        let b = toeplitz_quadrature(|p| f.evaluate(p), m, rule, "random-7")?;
        println!("quadrature {:>2}x{:<2}: max deviation {:.2e}", n, 2 * n, (&a.entries - &b.entries).camax());
    }

    let eig = hermitian_eigenvalues(&a.entries)?;
    println!(
        "m = {m}: spectrum in [{:.5}, {:.5}], ‖T_f‖ = {:.5}",
        eig[0],
        eig[eig.len() - 1],
        operator_norm(&a.entries)?
    );
    Ok(())
}
