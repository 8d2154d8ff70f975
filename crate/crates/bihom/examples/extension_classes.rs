//! Abelian extensions and their 2-cocycles: the round trip between the two,
//! equivalences along 1-cochains, and the pair of twisted spaces admitting
//! no compatible splitting at all.
//!
//! ```bash
//! cargo run -p bihom --example extension_classes
//! ```

use bihom::cochain::{Cochain, Coefficients};
use bihom::cohomology::{coboundary, Complex};
use bihom::corpus;
use bihom::extension::{
    cocycle_from_extension, equivalence_from_1cochain, extension_from_cocycle,
    find_compatible_splitting, induced_actions, validate_extension,
};

fn main() {
    let t4 = corpus::t4();
    let adj = corpus::adjoint(&t4);
    let cx = Complex::new(t4.clone(), Coefficients::Module(adj.clone()));
    let cocycles = cx.cocycle_basis(2).unwrap();
    println!(
        "2-cocycles of t4 with adjoint coefficients: {} basis elements",
        cocycles.len()
    );

    println!("\ncocycle -> extension -> cocycle is the identity:");
    for (k, z) in cocycles.iter().enumerate().take(4) {
        let ext = extension_from_cocycle(&adj, z).unwrap();
        let ok = validate_extension(&ext).is_ok();
        let back = cocycle_from_extension(&ext).unwrap();
        println!(
            "  cocycle {k}: extension valid={} roundtrip identical={}",
            ok,
            &back == z
        );
    }

    println!("\nzero cocycle gives the semidirect product:");
    let zero = Cochain::zero(t4.clone(), Coefficients::Module(adj.clone()), 2);
    let ext = extension_from_cocycle(&adj, &zero).unwrap();
    let semi = bihom::bimodule::semidirect_product(&adj);
    println!("  total multiplications equal: {}", ext.total().mu() == semi.mu());
    let (left, right) = induced_actions(&ext);
    println!(
        "  induced actions recover the adjoint module: {}",
        &left == adj.left() && &right == adj.right()
    );

    println!("\nequivalence along a 1-cochain g shifts the cocycle by -delta g:");
    let g = cx.basis(1).unwrap().cochain(0);
    let ext = extension_from_cocycle(&adj, &cocycles[0]).unwrap();
    let (ext2, phi) = equivalence_from_1cochain(&ext, &g).unwrap();
    let shifted = cocycle_from_extension(&ext2).unwrap();
    println!(
        "  cocycle(E') == f - delta g: {}",
        shifted == cocycles[0].sub(&coboundary(&g))
    );
    println!("  the equivalence is invertible: {}", phi.inverse().is_some());

    println!("\nthe no-splitting pair (E = <x,y>, A = <a>):");
    let p = corpus::remark_pair();
    let found = find_compatible_splitting(&p.j, &p.e_alpha, &p.e_beta, &p.a_alpha, &p.a_beta);
    println!(
        "  a section of j commuting with the twists exists: {}",
        found.is_some()
    );
}
