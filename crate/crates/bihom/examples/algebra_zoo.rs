//! The standard constructions: validation with witnesses, Yau twists,
//! tensor products, matrix algebras, semidirect products, and the n-ary
//! twisted associativity identity.
//!
//! ```bash
//! cargo run -p bihom --example algebra_zoo
//! ```

use bihom::algebra::{
    check_nary_identity, matrix_algebra, tensor_product, yau_twist, BihomAlgebra,
};
use bihom::bimodule::{semidirect_product, Bimodule};
use bihom::budget::Budget;
use bihom::corpus;
use num_traits::Zero;

fn main() {
    println!("== the built-in corpus ==");
    for alg in corpus::standard_algebras() {
        println!("  {:12} dim {}", alg.label(), alg.dim());
    }

    println!("\n== Yau twist ==");
    let (mu, alpha, beta) = corpus::truncated_polynomial_data();
    let t4 = yau_twist("t4", &mu, &alpha, &beta).expect("twist data is admissible");
    println!("  twisting Q[X]/(X^4) along alpha(x^a) = x^(2a):");
    for a in 0..4 {
        for b in 0..4 {
            let prod = t4.multiply_basis(a, b);
            let exp = prod.iter().position(|v| !v.is_zero());
            match exp {
                Some(k) => println!("    x^{a} * x^{b} = x^{k}"),
                None => println!("    x^{a} * x^{b} = 0"),
            }
        }
    }

    println!("\n== a broken structure is reported with its witness ==");
    let (mu, alpha, beta) = corpus::t4_perturbed_data();
    match BihomAlgebra::validate("t4_perturbed", mu, alpha, beta) {
        Ok(_) => unreachable!("the perturbation breaks the axioms"),
        Err(violations) => {
            for v in violations {
                println!("  {v}");
            }
        }
    }

    println!("\n== products and matrix algebras ==");
    let dual = corpus::dual_numbers_twist();
    let prod = tensor_product(&t4, &dual);
    println!("  t4 (x) dual_twist: dim {}", prod.dim());
    let m2t4 = matrix_algebra(&t4, 2);
    println!("  2x2 matrices over t4: dim {}", m2t4.dim());

    println!("\n== semidirect products ==");
    let adj = Bimodule::adjoint(corpus::t4());
    let semi = semidirect_product(&adj);
    println!("  t4_adjoint ⋉ t4: dim {}", semi.dim());

    println!("\n== n-ary twisted associativity ==");
    let budget = Budget::default();
    for alg in corpus::standard_algebras() {
        for n in [3, 4] {
            let holds = check_nary_identity(&alg, n, budget).expect("within budget");
            println!("  {:12} n={}: {}", alg.label(), n, holds);
        }
    }
}
