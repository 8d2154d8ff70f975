//! The bi-twisted endomorphism operad in action: partial compositions,
//! the two routes to the full composition, braces, circle products, cup
//! products and the Gerstenhaber bracket, all on seeded random
//! twist-compatible cochains.
//!
//! ```bash
//! cargo run -p bihom --example operad_playground
//! ```

use bihom::budget::Budget;
use bihom::cochain::{cochain_space_basis, Cochain, Coefficients};
use bihom::cohomology::{coboundary, cup_product, cup_via_braces, operadic_differential};
use bihom::corpus;
use bihom::operad::{
    brace, circle_product, full_composition, full_composition_closed, gerstenhaber_bracket,
    is_multiplication, partial_composition,
};
use bihom::scalar::sign_pow;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let t4 = corpus::t4();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let b2 = cochain_space_basis(&t4, &Coefficients::SelfCoeffs, 2, Budget::default()).unwrap();
    let b3 = cochain_space_basis(&t4, &Coefficients::SelfCoeffs, 3, Budget::default()).unwrap();
    println!("twist-compatible spaces over t4: dim C^2 = {}, dim C^3 = {}", b2.dim(), b3.dim());

    let f = b2.random(&mut rng);
    let g = b2.random(&mut rng);
    let h = b3.random(&mut rng);

    println!("\noperad axioms on random cochains:");
    let ax1_lhs = partial_composition(&partial_composition(&f, 1, &g).unwrap(), 2, &h).unwrap();
    let ax1_rhs = partial_composition(&f, 1, &partial_composition(&g, 2, &h).unwrap()).unwrap();
    println!("  (f o_1 g) o_2 h = f o_1 (g o_2 h): {}", ax1_lhs == ax1_rhs);

    println!("\nfull composition, two independent routes:");
    let nested = full_composition(&f, &[g.clone(), g.clone()]).unwrap();
    let closed = full_composition_closed(&f, &[g.clone(), g.clone()]).unwrap();
    println!("  nested partial compositions == closed twist-power formula: {}", nested == closed);

    println!("\nmu is a multiplication on the operad (mu o mu = 0):");
    for alg in corpus::standard_algebras() {
        println!("  {:12} {}", alg.label(), is_multiplication(&alg));
    }

    println!("\nbraces:");
    let mu = Cochain::from_mu(t4.clone());
    println!("  {{f}}{{}} == f: {}", brace(&f, &[]).unwrap() == f);
    println!(
        "  {{f}}{{g}} == f o g: {}",
        brace(&f, std::slice::from_ref(&g)).unwrap() == circle_product(&f, &g).unwrap()
    );
    println!(
        "  (-1)^(|f|+1) {{mu}}{{f,g}} == f cup g: {}",
        cup_via_braces(&f, &g) == cup_product(&f, &g)
    );

    println!("\npre-Lie identity and the bracket:");
    let lhs = circle_product(&circle_product(&f, &g).unwrap(), &h)
        .unwrap()
        .sub(&circle_product(&f, &circle_product(&g, &h).unwrap()).unwrap());
    let rhs = circle_product(&circle_product(&f, &h).unwrap(), &g)
        .unwrap()
        .sub(&circle_product(&f, &circle_product(&h, &g).unwrap()).unwrap())
        .scale(&sign_pow(g.degree() * h.degree()));
    println!("  (f o g) o h - f o (g o h) = ±((f o h) o g - f o (h o g)): {}", lhs == rhs);
    println!(
        "  [mu, mu] = 0: {}",
        gerstenhaber_bracket(&mu, &mu).unwrap().is_zero()
    );

    println!("\nthe differential induced by the multiplication:");
    let d = operadic_differential(&f);
    let delta = coboundary(&f);
    // arity 2: d f = -delta f
    println!("  d f == (-1)^(arity+1) delta f (arity 2): {}", d == delta.neg());
}
