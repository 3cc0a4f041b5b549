//! The formal star product: first coefficients, axioms, equivalence and the formal trace.
//!
//! Run with `cargo run --example star_product`.

use btlab::starproduct::{
    b_map, c1, check_axioms, check_equivalence, d1, formal_trace, star_bt, FormalSeries,
};
use btlab::symbolic::random_real_symbol;
use btlab::CanonicalSymbol;

fn main() -> btlab::Result<()> {
    let f0 = CanonicalSymbol::f0();
    let g0 = CanonicalSymbol::g0();
    println!("C1(f0, g0) = {}", c1(&f0, &g0));
    println!("D1(f0, g0) = {}", d1(&f0, &g0));

    let f = FormalSeries::from_symbol(&f0, 1);
    let g = FormalSeries::from_symbol(&g0, 1);
    let fg = star_bt(&f, &g, 1)?;
    println!("f0 ⋆ g0 = {} + ν ({})", fg.coeff(0), fg.coeff(1));

    let h = random_real_symbol(9, 2)?;
    for check in check_axioms(&f0, &g0, &h).checks {
        println!("axiom {:<22} {}", check.name, check.passed);
    }
    println!("B intertwines the products: {}", check_equivalence(&f0, &h)?.is_zero());
    println!("B(f0) = {}", b_map(&f, 1)?.coeff(1));

    let ff = star_bt(&f, &f, 1)?;
    let tr = formal_trace(&ff, 1)?;
    let t: Vec<String> = tr.coeffs.iter().map(|c| c.re.to_string()).collect();
    println!("Tr(f0 ⋆ f0) = ν^{} ({})", tr.leading_power, t.join(" + ν·"));
    Ok(())
}
