//! Writes the built-in corpus as JSON spec files.
//!
//! ```bash
//! cargo run -p bihom --example export_corpus -- [output-dir]
//! ```
//!
//! The shipped `crates/bihom/data/` directory is the output of this example.

use bihom::cochain::{Cochain, Coefficients};
use bihom::corpus;
use bihom::json::{
    algebra_to_spec, bimodule_to_spec, deformation_to_spec, splitting_pair_to_spec, SpecFile,
};
use bihom::deformation::TruncatedDeformation;
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"));
    std::fs::create_dir_all(&dir)?;

    let mut files: Vec<(String, SpecFile)> = Vec::new();
    for alg in corpus::standard_algebras() {
        files.push((format!("{}.json", alg.label()), algebra_to_spec(&alg)));
        let adj = corpus::adjoint(&alg);
        files.push((format!("{}.json", adj.label()), bimodule_to_spec(&adj)));
    }

    // the perturbed t4 fixture: fails validation with a witness triple
    let (mu, alpha, beta) = corpus::t4_perturbed_data();
    files.push((
        "t4_perturbed.json".into(),
        SpecFile::Algebra {
            label: "t4_perturbed".into(),
            dim: 4,
            mu: bihom::json::tensor_to_value(&mu),
            alpha: bihom::json::matrix_to_json(&alpha),
            beta: bihom::json::matrix_to_json(&beta),
        },
    ));

    // untwisted dual numbers with the invertible morphism pair, for the
    // --classical subcomplex mode (not a valid bihom algebra as written)
    let (mu, alpha, beta) = corpus::dual_numbers_invertible_data();
    files.push((
        "dual_assoc.json".into(),
        SpecFile::Algebra {
            label: "dual_assoc".into(),
            dim: 2,
            mu: bihom::json::tensor_to_value(&mu),
            alpha: bihom::json::matrix_to_json(&alpha),
            beta: bihom::json::matrix_to_json(&beta),
        },
    ));

    files.push((
        "remark_pair.json".into(),
        splitting_pair_to_spec("remark_pair", &corpus::remark_pair()),
    ));

    // deformations: mu itself deforms the field; the zero deformation of t4
    let q = corpus::rational_line();
    let d = TruncatedDeformation::new(q.clone(), vec![Cochain::from_mu(q)])?;
    files.push(("deform_q_mu.json".into(), deformation_to_spec("deform_q_mu", &d)));
    let t4 = corpus::t4();
    let zero2 = TruncatedDeformation::new(
        t4.clone(),
        vec![
            Cochain::zero(t4.clone(), Coefficients::SelfCoeffs, 2),
            Cochain::zero(t4.clone(), Coefficients::SelfCoeffs, 2),
        ],
    )?;
    files.push((
        "deform_t4_zero.json".into(),
        deformation_to_spec("deform_t4_zero", &zero2),
    ));

    for (name, spec) in files {
        let path = dir.join(&name);
        let text = serde_json::to_string_pretty(&spec)?;
        std::fs::write(&path, text + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
