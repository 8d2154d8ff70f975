//! Exact computer algebra for bihom-associative algebras.
//!
//! A bihom-associative algebra is a vector space with a bilinear product μ
//! and two commuting multiplicative twist maps α, β satisfying
//! `μ(α(a), μ(b,c)) = μ(μ(a,b), β(c))`. This crate realizes, over exact
//! rational scalars, the cohomological machinery attached to such algebras
//! in finite dimension:
//!
//! * [`algebra`] / [`bimodule`] - structure-constant algebras, bimodules,
//!   validation with witness reporting, and the standard constructions
//!   (Yau twist, tensor product, matrix algebra, semidirect product);
//! * [`cochain`] / [`operad`] - twist-compatible cochain spaces with exact
//!   bases, partial compositions, braces, the circle product and the
//!   Gerstenhaber bracket;
//! * [`cohomology`] - the Hochschild-type coboundary for self and bimodule
//!   coefficients, cohomology dimensions by exact rank computations, cup
//!   products, functoriality, and the restricted classical subcomplex;
//! * [`deformation`] - formal 1-parameter deformations modulo `t^{n+1}`,
//!   obstruction classes and order-by-order extension;
//! * [`extension`] - abelian extensions and the `H^2` classification;
//! * [`ainfty`] - truncated bihom-A-infinity structures, the skeletal and
//!   strict classes, and crossed modules.
//!
//! Every identity is checked by exhaustive basis enumeration: multilinearity
//! makes basis-tuple verification complete, and rational arithmetic makes it
//! exact. There is no floating point anywhere in this crate.
//!
//! # Quick start
//!
//! ```
//! use bihom::corpus;
//! use bihom::cochain::Coefficients;
//! use bihom::cohomology::Complex;
//!
//! let t4 = corpus::t4();
//! let complex = Complex::new(t4, Coefficients::SelfCoeffs);
//! let report = complex.report(2).unwrap();
//! assert_eq!(report.rows.len(), 2);
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run -p bihom --example algebra_zoo
//! cargo run -p bihom --example cohomology_report
//! cargo run -p bihom --example operad_playground
//! cargo run -p bihom --example deformation_walkthrough
//! cargo run -p bihom --example extension_classes
//! cargo run -p bihom --example ainfty_bridge
//! cargo run -p bihom --example export_corpus
//! ```
//!
//! The `bihom` binary exposes the same functionality on JSON files:
//! `bihom check`, `bihom cohomology`, `bihom deform`, `bihom selftest`.

pub mod ainfty;
pub mod algebra;
pub mod bimodule;
pub mod budget;
pub mod classical;
pub mod cochain;
pub mod cohomology;
pub mod corpus;
pub mod deformation;
pub mod extension;
pub mod json;
pub mod matrix;
pub mod operad;
pub mod scalar;
pub mod selftest;
pub mod tensor;
pub mod workspace;

pub use algebra::BihomAlgebra;
pub use bimodule::Bimodule;
pub use budget::Budget;
pub use cochain::{Cochain, Coefficients};
pub use matrix::Matrix;
pub use scalar::Rat;
pub use tensor::Tensor;
