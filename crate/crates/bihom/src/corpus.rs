//! Built-in example algebras used across tests, the self-test suite and the
//! shipped data files.
//!
//! * `q` - the rationals as a 1-dimensional algebra, identity twists.
//! * `dual_twist` - the Yau twist of the dual numbers `Q[e]/(e^2)` along
//!   `alpha = diag(1,-1)`, `beta = diag(1,0)`.
//! * `t4` - the Yau twist of `Q[X]/(X^4)` along `alpha(x^a) = x^{2a}`,
//!   `beta = id`, so `mu(x^a, x^b) = x^{2a+b}` truncated at degree 3.
//! * `m2q` - 2×2 rational matrices with identity twists.

use crate::algebra::{yau_twist, AlgebraViolation, BihomAlgebra};
use crate::bimodule::Bimodule;
use crate::matrix::Matrix;
use crate::scalar::{one, rat, Rat};
use crate::tensor::Tensor;
use std::sync::Arc;

pub fn rational_line() -> Arc<BihomAlgebra> {
    let mut mu = Tensor::zeros(vec![1, 1, 1]);
    mu.set(&[0, 0, 0], one());
    Arc::new(
        BihomAlgebra::validate("q", mu, Matrix::identity(1), Matrix::identity(1))
            .expect("the ground field is associative"),
    )
}

/// Untwisted truncated polynomial data: `mu(x^a, x^b) = x^{a+b}` on
/// `Q[X]/(X^4)`, with the morphism `alpha(x^a) = x^{2a}` and `beta = id`.
pub fn truncated_polynomial_data() -> (Tensor, Matrix, Matrix) {
    let mut mu = Tensor::zeros(vec![4, 4, 4]);
    for a in 0..4 {
        for b in 0..4 {
            if a + b < 4 {
                mu.set(&[a, b, a + b], one());
            }
        }
    }
    let mut alpha = Matrix::zeros(4, 4);
    for a in 0..4 {
        if 2 * a < 4 {
            alpha.set(2 * a, a, one());
        }
    }
    (mu, alpha, Matrix::identity(4))
}

pub fn t4() -> Arc<BihomAlgebra> {
    let (mu, alpha, beta) = truncated_polynomial_data();
    Arc::new(yau_twist("t4", &mu, &alpha, &beta).expect("t4 construction"))
}

/// T4 with the structure constant `c[1][1][0]` bumped by one; breaks both
/// alpha-multiplicativity and the twisted associativity.
pub fn t4_perturbed_data() -> (Tensor, Matrix, Matrix) {
    let t4 = t4();
    let mut mu = t4.mu().clone();
    let bumped = mu.get(&[1, 1, 0]) + one();
    mu.set(&[1, 1, 0], bumped);
    (mu, t4.alpha().clone(), t4.beta().clone())
}

pub fn t4_perturbed_violations() -> Vec<AlgebraViolation> {
    let (mu, alpha, beta) = t4_perturbed_data();
    BihomAlgebra::validate("t4_perturbed", mu, alpha, beta)
        .expect_err("perturbed structure constants violate the axioms")
}

/// Untwisted dual numbers `Q[e]/(e^2)` with the commuting morphisms
/// `alpha = diag(1,-1)`, `beta = diag(1,0)`.
pub fn dual_numbers_data() -> (Tensor, Matrix, Matrix) {
    let mut mu = Tensor::zeros(vec![2, 2, 2]);
    mu.set(&[0, 0, 0], one());
    mu.set(&[0, 1, 1], one());
    mu.set(&[1, 0, 1], one());
    let alpha = Matrix::from_rows(vec![vec![one(), rat(0)], vec![rat(0), rat(-1)]]);
    let beta = Matrix::from_rows(vec![vec![one(), rat(0)], vec![rat(0), rat(0)]]);
    (mu, alpha, beta)
}

pub fn dual_numbers_twist() -> Arc<BihomAlgebra> {
    let (mu, alpha, beta) = dual_numbers_data();
    Arc::new(yau_twist("dual_twist", &mu, &alpha, &beta).expect("dual numbers twist"))
}

/// The invertible variant used by the classical-subcomplex arguments:
/// dual numbers with `alpha = diag(1,-1)` and `beta = id`.
pub fn dual_numbers_invertible_data() -> (Tensor, Matrix, Matrix) {
    let (mu, alpha, _) = dual_numbers_data();
    (mu, alpha, Matrix::identity(2))
}

pub fn m2q() -> Arc<BihomAlgebra> {
    Arc::new(crate::algebra::matrix_algebra(&rational_line(), 2).with_label("m2q"))
}

pub fn adjoint(alg: &Arc<BihomAlgebra>) -> Arc<Bimodule> {
    Arc::new(Bimodule::adjoint(alg.clone()))
}

/// The no-compatible-splitting pair: `E = <x, y>` with `alpha_E(x) = y`,
/// `alpha_E(y) = 0`, `beta_E = id`, surjecting onto `A = <a>` with
/// `alpha(a) = 0`, `beta = id` via `j(x) = a`, `j(y) = 0`.
pub struct SplittingPair {
    pub e_alpha: Matrix,
    pub e_beta: Matrix,
    pub a_alpha: Matrix,
    pub a_beta: Matrix,
    pub j: Matrix,
}

pub fn remark_pair() -> SplittingPair {
    SplittingPair {
        e_alpha: Matrix::from_rows(vec![vec![rat(0), rat(0)], vec![one(), rat(0)]]),
        e_beta: Matrix::identity(2),
        a_alpha: Matrix::zeros(1, 1),
        a_beta: Matrix::identity(1),
        j: Matrix::from_rows(vec![vec![one(), rat(0)]]),
    }
}

/// All four standard algebras, labelled.
pub fn standard_algebras() -> Vec<Arc<BihomAlgebra>> {
    vec![rational_line(), dual_numbers_twist(), t4(), m2q()]
}

pub fn unit(d: usize, i: usize) -> Vec<Rat> {
    crate::algebra::unit_vector(d, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TwistKind;

    #[test]
    fn standard_algebras_build() {
        let algs = standard_algebras();
        assert_eq!(
            algs.iter().map(|a| a.dim()).collect::<Vec<_>>(),
            vec![1, 2, 4, 4]
        );
    }

    #[test]
    fn perturbed_t4_breaks_multiplicativity_too() {
        let violations = t4_perturbed_violations();
        assert!(violations.iter().any(|v| matches!(
            v,
            AlgebraViolation::NotMultiplicative {
                twist: TwistKind::Alpha,
                ..
            }
        )));
        assert!(violations
            .iter()
            .any(|v| matches!(v, AlgebraViolation::NotBihomAssociative { .. })));
    }
}
