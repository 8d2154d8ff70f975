//! Formal deformations order by order: verifying the deformation equations,
//! the obstruction 3-cocycle, extending one order, and first-order
//! trivialization.
//!
//! ```bash
//! cargo run -p bihom --example deformation_walkthrough
//! ```

use bihom::cochain::{Cochain, Coefficients};
use bihom::cohomology::{coboundary, is_cocycle, Complex};
use bihom::corpus;
use bihom::deformation::{
    check_equivalence, extend_deformation, obstruction, trivialize_first_order,
    verify_deformation, ExtensionOutcome, FormalAutomorphism, TruncatedDeformation,
};

fn main() {
    // on the field, mu_t = mu + t·mu extends forever (every circle product vanishes)
    let q = corpus::rational_line();
    let cx_q = Complex::new(q.clone(), Coefficients::SelfCoeffs);
    let mut d = TruncatedDeformation::new(q.clone(), vec![Cochain::from_mu(q.clone())]).unwrap();
    println!("deforming the field by mu itself:");
    while d.order() < 4 {
        match extend_deformation(&d, &cx_q).unwrap() {
            ExtensionOutcome::Extended { extended, .. } => {
                println!(
                    "  extended to order {}; re-verified: {}",
                    extended.order(),
                    verify_deformation(&extended).verified
                );
                d = extended;
            }
            ExtensionOutcome::Obstructed { .. } => unreachable!("H^3 of the field is zero"),
        }
    }

    // t4 has honest 2-cocycles; deform along each basis cocycle
    let t4 = corpus::t4();
    let cx = Complex::new(t4.clone(), Coefficients::SelfCoeffs);
    let cocycles = cx.cocycle_basis(2).unwrap();
    println!("\nt4 has {} independent 2-cocycles; deforming along each:", cocycles.len());
    for (k, z) in cocycles.iter().enumerate() {
        let d = TruncatedDeformation::new(t4.clone(), vec![z.clone()]).unwrap();
        let report = verify_deformation(&d);
        let ob = obstruction(&d).unwrap();
        let outcome = extend_deformation(&d, &cx).unwrap();
        let status = match &outcome {
            ExtensionOutcome::Extended { .. } => "extends",
            ExtensionOutcome::Obstructed { .. } => "obstructed",
        };
        println!(
            "  cocycle {k}: verified={} obstruction-is-3-cocycle={} -> {status}",
            report.verified,
            is_cocycle(&ob),
        );
    }

    // first-order equivalences: mu_1 and mu_1 - delta(phi_1) are equivalent
    println!("\nfirst-order equivalence:");
    let z = cocycles[0].clone();
    let phi1 = cx.basis(1).unwrap().cochain(0);
    let d1 = TruncatedDeformation::new(t4.clone(), vec![z.clone()]).unwrap();
    let d2 = TruncatedDeformation::new(t4.clone(), vec![z.sub(&coboundary(&phi1))]).unwrap();
    let phi = FormalAutomorphism::new(t4.clone(), vec![phi1]).unwrap();
    println!(
        "  mu_1 ~ mu_1 - delta(phi_1) via id + t phi_1: {}",
        check_equivalence(&d1, &d2, &phi).unwrap()
    );

    // trivialization: coboundary infinitesimals die, non-coboundaries survive
    println!("\nfirst-order trivialization:");
    let g = cx.basis(1).unwrap().cochain(1);
    let exact = TruncatedDeformation::new(t4.clone(), vec![coboundary(&g)]).unwrap();
    println!(
        "  delta(g) as infinitesimal: trivializable = {}",
        trivialize_first_order(&exact, &cx).unwrap().is_some()
    );
    let survivor = cocycles
        .iter()
        .find(|z| cx.find_primitive(z).unwrap().is_none());
    match survivor {
        Some(z) => {
            let d = TruncatedDeformation::new(t4.clone(), vec![z.clone()]).unwrap();
            println!(
                "  a non-coboundary cocycle: trivializable = {} (H^2 != 0)",
                trivialize_first_order(&d, &cx).unwrap().is_some()
            );
        }
        None => println!("  every 2-cocycle is a coboundary here (H^2 = 0)"),
    }
}
