//! Witness reports for a few hand-picked polynomials: plain Eisenstein,
//! shift-only, reciprocal-only, a witness prime above the trial-division
//! bound, and polynomials with no witnesses at all.
//!
//! Run with: cargo run --example classify

use eisenstein::{classify, FactorBudget, IntPoly};
use num_bigint::BigInt;
use num_traits::Zero;

fn report(f: &IntPoly, budget: &FactorBudget) -> eisenstein::Result<()> {
    let c = classify(f, budget)?;
    println!("f = {}", f);
    println!("  degree        {}", c.degree);
    println!("  discriminant  {}", c.discriminant);
    if c.discriminant.is_zero() {
        println!("  repeated factor: reducible, no witnesses at any prime");
        println!();
        return Ok(());
    }
    let eis: Vec<String> = c.eisenstein_primes.iter().map(|p| p.to_string()).collect();
    println!(
        "  eisenstein    {}",
        if eis.is_empty() { "-".into() } else { eis.join(", ") }
    );
    if c.shifted_witnesses.is_empty() {
        println!("  shifted       -");
    }
    for (p, i) in &c.shifted_witnesses {
        println!("  shifted       p = {}: f(x + {}) is Eisenstein", p, i);
    }
    if c.affine_witnesses.is_empty() {
        println!("  affine        -");
    }
    for (p, rep) in &c.affine_witnesses {
        println!("  affine        p = {}: via {}", p, rep);
    }
    println!(
        "  complete      {}",
        if c.complete { "yes" } else { "no (factoring budget exhausted)" }
    );
    println!();
    Ok(())
}

fn main() -> eisenstein::Result<()> {
    let budget = FactorBudget::default();
    let samples = [
        // x^3 + 2: Eisenstein at 2 as written, and f(x+1) is Eisenstein at 3
        IntPoly::from_coeffs([2, 0, 0, 1]),
        // 2x^3 + 1: no shift works at 2, but the reciprocal x^3 + 2 does
        IntPoly::from_coeffs([1, 0, 0, 2]),
        // x^2 + 8x - 16: disc = 128, yet no shift or reciprocal ever works
        IntPoly::from_coeffs([-16, 8, 1]),
        // x^3 + x + 1: squarefree discriminant -31, so no witness can exist
        IntPoly::from_coeffs([1, 1, 0, 1]),
        // (x - 1)^2 (x + 2): zero discriminant, reducible
        IntPoly::from_coeffs([2, -3, 0, 1]),
        // 5x^3 + 12x^2 + 18x + 6: Eisenstein at both 2 and 3
        IntPoly::from_coeffs([6, 18, 12, 5]),
    ];
    for f in &samples {
        report(f, &budget)?;
    }

    // a witness prime far above the trial-division bound: h = x^3 + qx + q
    // is q-Eisenstein for the prime q = 1000003, so g(x) = h(x + 17) needs
    // the shift i = q - 17, located without ever factoring disc(g)
    let q = 1_000_003i64;
    let h = IntPoly::from_coeffs([q, q, 0, 1]);
    let g = h.taylor_shift(&BigInt::from(17));
    report(&g, &budget)?;
    Ok(())
}
