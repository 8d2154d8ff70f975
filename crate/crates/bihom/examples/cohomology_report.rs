//! Exact cohomology tables for the corpus, with self and adjoint-bimodule
//! coefficients, plus the restricted classical subcomplex used by the
//! rigidity argument for Yau twists.
//!
//! ```bash
//! cargo run -p bihom --example cohomology_report
//! ```

use bihom::budget::Budget;
use bihom::classical::RestrictedComplex;
use bihom::cochain::Coefficients;
use bihom::cohomology::Complex;
use bihom::corpus;

fn main() {
    for alg in corpus::standard_algebras() {
        let max = if alg.dim() <= 2 { 3 } else { 2 };
        for coeffs in [
            Coefficients::SelfCoeffs,
            Coefficients::Module(corpus::adjoint(&alg)),
        ] {
            let cx = Complex::new(alg.clone(), coeffs);
            let report = cx.report(max).expect("within budget");
            println!("{} with {} coefficients:", alg.label(), report.coefficients);
            println!("  {:>3} {:>8} {:>6} {:>6} {:>6}", "n", "dim C^n", "rank", "ker", "H^n");
            for row in &report.rows {
                println!(
                    "  {:>3} {:>8} {:>6} {:>6} {:>6}",
                    row.n, row.dim_c, row.rank, row.ker, row.h
                );
            }
        }
    }

    println!("restricted classical subcomplex of the dual numbers");
    println!("  (alpha = diag(1,-1), beta = id; classical differential):");
    let (mu, alpha, beta) = corpus::dual_numbers_invertible_data();
    let rc = RestrictedComplex::new(mu, alpha, beta, Budget::default()).expect("admissible data");
    let report = rc.report(3).expect("within budget");
    for row in &report.rows {
        println!(
            "  n={} dim={} rank={} ker={} H={}",
            row.n, row.dim_c, row.rank, row.ker, row.h
        );
    }

    // machine-readable form, exactly what `bihom cohomology` prints
    let cx = Complex::new(corpus::t4(), Coefficients::SelfCoeffs);
    let report = cx.report(2).expect("within budget");
    println!("\nJSON form:\n{}", serde_json::to_string_pretty(&report).unwrap());
}
