//! Bimodules over bihom-associative algebras.
//!
//! A bimodule is a quintuple `(M, μ_l, μ_r, α_M, β_M)`: left and right
//! action tensors together with commuting twist maps on the module, subject
//! to the twisted representation axioms. The adjoint bimodule takes `M = A`
//! with both actions equal to μ.

use crate::algebra::BihomAlgebra;
use crate::matrix::Matrix;
use crate::scalar::Rat;
use crate::tensor::Tensor;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// The bimodule axioms, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BimoduleAxiom {
    /// `α_M β_M = β_M α_M`
    TwistsCommute,
    /// `α_M(a·m) = α(a)·α_M(m)`
    LeftAlphaEquivariance,
    /// `β_M(a·m) = β(a)·β_M(m)`
    LeftBetaEquivariance,
    /// `α(a)·(b·m) = μ(a,b)·β_M(m)`
    LeftAssociativity,
    /// `α_M(m·a) = α_M(m)·α(a)`
    RightAlphaEquivariance,
    /// `β_M(m·a) = β_M(m)·β(a)`
    RightBetaEquivariance,
    /// `α_M(m)·μ(a,b) = (m·a)·β(b)`
    RightAssociativity,
    /// `α(a)·(m·b) = (a·m)·β(b)`
    Compatibility,
}

impl fmt::Display for BimoduleAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BimoduleAxiom::TwistsCommute => "module twist maps commute",
            BimoduleAxiom::LeftAlphaEquivariance => "alpha_M(a.m) = alpha(a).alpha_M(m)",
            BimoduleAxiom::LeftBetaEquivariance => "beta_M(a.m) = beta(a).beta_M(m)",
            BimoduleAxiom::LeftAssociativity => "alpha(a).(b.m) = mu(a,b).beta_M(m)",
            BimoduleAxiom::RightAlphaEquivariance => "alpha_M(m.a) = alpha_M(m).alpha(a)",
            BimoduleAxiom::RightBetaEquivariance => "beta_M(m.a) = beta_M(m).beta(a)",
            BimoduleAxiom::RightAssociativity => "alpha_M(m).mu(a,b) = (m.a).beta(b)",
            BimoduleAxiom::Compatibility => "alpha(a).(m.b) = (a.m).beta(b)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BimoduleViolation {
    #[error("inconsistent dimensions: {0}")]
    DimensionMismatch(String),
    #[error("bimodule axiom `{axiom}` fails at basis indices {witness:?}")]
    AxiomFailure {
        axiom: BimoduleAxiom,
        witness: Vec<usize>,
    },
}

/// A validated bimodule. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Bimodule {
    label: String,
    base: Arc<BihomAlgebra>,
    dim: usize,
    /// `left[i][p][q]`: `e_i · f_p = Σ_q left[i][p][q] f_q`
    left: Tensor,
    /// `right[p][i][q]`: `f_p · e_i = Σ_q right[p][i][q] f_q`
    right: Tensor,
    alpha_m: Matrix,
    beta_m: Matrix,
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.left == other.left
            && self.right == other.right
            && self.alpha_m == other.alpha_m
            && self.beta_m == other.beta_m
            && self.base == other.base
    }
}

impl Bimodule {
    /// Validates raw module data over `base`, reporting one entry per failed
    /// axiom with the lexicographically first witness.
    pub fn validate(
        label: impl Into<String>,
        base: Arc<BihomAlgebra>,
        left: Tensor,
        right: Tensor,
        alpha_m: Matrix,
        beta_m: Matrix,
    ) -> Result<Self, Vec<BimoduleViolation>> {
        let d = base.dim();
        let e = alpha_m.rows();
        if e == 0 {
            return Err(vec![BimoduleViolation::DimensionMismatch(
                "module dimension must be positive".into(),
            )]);
        }
        if alpha_m.cols() != e || beta_m.rows() != e || beta_m.cols() != e {
            return Err(vec![BimoduleViolation::DimensionMismatch(format!(
                "module twists must be {e}x{e}"
            ))]);
        }
        if left.dims() != [d, e, e] || right.dims() != [e, d, e] {
            return Err(vec![BimoduleViolation::DimensionMismatch(format!(
                "action tensors must have shapes [{d},{e},{e}] and [{e},{d},{e}], got {:?} and {:?}",
                left.dims(),
                right.dims()
            ))]);
        }
        let m = Bimodule {
            label: label.into(),
            base,
            dim: e,
            left,
            right,
            alpha_m,
            beta_m,
        };
        let violations = m.scan_axioms();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(violations)
        }
    }

    fn scan_axioms(&self) -> Vec<BimoduleViolation> {
        let mut out = Vec::new();
        let a = self.base.as_ref();
        let (d, e) = (a.dim(), self.dim);
        let mut fail = |axiom, witness: &[usize]| {
            out.push(BimoduleViolation::AxiomFailure {
                axiom,
                witness: witness.to_vec(),
            });
        };

        if !self.alpha_m.commutes_with(&self.beta_m) {
            fail(BimoduleAxiom::TwistsCommute, &[]);
        }

        // equivariance of the twists with respect to both actions
        let equivariance: [(BimoduleAxiom, &Matrix, &Matrix); 2] = [
            (BimoduleAxiom::LeftAlphaEquivariance, a.alpha(), &self.alpha_m),
            (BimoduleAxiom::LeftBetaEquivariance, a.beta(), &self.beta_m),
        ];
        for (axiom, alg_map, mod_map) in equivariance {
            'scan: for i in 0..d {
                for p in 0..e {
                    let lhs = mod_map.apply(&self.left.eval_basis(&[i, p]));
                    let rhs = self.left.eval(&[&alg_map.col(i), &mod_map.col(p)]);
                    if lhs != rhs {
                        fail(axiom, &[i, p]);
                        break 'scan;
                    }
                }
            }
        }
        let equivariance_r: [(BimoduleAxiom, &Matrix, &Matrix); 2] = [
            (BimoduleAxiom::RightAlphaEquivariance, a.alpha(), &self.alpha_m),
            (BimoduleAxiom::RightBetaEquivariance, a.beta(), &self.beta_m),
        ];
        for (axiom, alg_map, mod_map) in equivariance_r {
            'scan: for p in 0..e {
                for i in 0..d {
                    let lhs = mod_map.apply(&self.right.eval_basis(&[p, i]));
                    let rhs = self.right.eval(&[&mod_map.col(p), &alg_map.col(i)]);
                    if lhs != rhs {
                        fail(axiom, &[p, i]);
                        break 'scan;
                    }
                }
            }
        }

        // alpha(a).(b.m) = mu(a,b).beta_M(m)
        'left_assoc: for i in 0..d {
            let alpha_i = a.alpha().col(i);
            for j in 0..d {
                let ij = a.multiply_basis(i, j);
                for p in 0..e {
                    let lhs = self.left.eval(&[&alpha_i, &self.left.eval_basis(&[j, p])]);
                    let rhs = self.left.eval(&[&ij, &self.beta_m.col(p)]);
                    if lhs != rhs {
                        fail(BimoduleAxiom::LeftAssociativity, &[i, j, p]);
                        break 'left_assoc;
                    }
                }
            }
        }

        // alpha_M(m).mu(a,b) = (m.a).beta(b)
        'right_assoc: for p in 0..e {
            let alpha_p = self.alpha_m.col(p);
            for i in 0..d {
                let pi = self.right.eval_basis(&[p, i]);
                for j in 0..d {
                    let lhs = self.right.eval(&[&alpha_p, &a.multiply_basis(i, j)]);
                    let rhs = self.right.eval(&[&pi, &a.beta().col(j)]);
                    if lhs != rhs {
                        fail(BimoduleAxiom::RightAssociativity, &[p, i, j]);
                        break 'right_assoc;
                    }
                }
            }
        }

        // alpha(a).(m.b) = (a.m).beta(b)
        'compat: for i in 0..d {
            let alpha_i = a.alpha().col(i);
            for p in 0..e {
                let ip = self.left.eval_basis(&[i, p]);
                for j in 0..d {
                    let lhs = self.left.eval(&[&alpha_i, &self.right.eval_basis(&[p, j])]);
                    let rhs = self.right.eval(&[&ip, &a.beta().col(j)]);
                    if lhs != rhs {
                        fail(BimoduleAxiom::Compatibility, &[i, p, j]);
                        break 'compat;
                    }
                }
            }
        }
        out
    }

    /// The algebra acting on itself: both actions are μ, twists are α and β.
    pub fn adjoint(base: Arc<BihomAlgebra>) -> Self {
        let label = format!("{}_adjoint", base.label());
        let left = base.mu().clone();
        let right = base.mu().clone();
        let alpha_m = base.alpha().clone();
        let beta_m = base.beta().clone();
        Bimodule::validate(label, base, left, right, alpha_m, beta_m)
            .expect("an algebra is a bimodule over itself")
    }

    /// Zero actions on a space with commuting twists: every axiom reduces to 0 = 0.
    pub fn zero_actions(
        label: impl Into<String>,
        base: Arc<BihomAlgebra>,
        alpha_m: Matrix,
        beta_m: Matrix,
    ) -> Result<Self, Vec<BimoduleViolation>> {
        let d = base.dim();
        let e = alpha_m.rows();
        Bimodule::validate(
            label,
            base,
            Tensor::zeros(vec![d, e, e]),
            Tensor::zeros(vec![e, d, e]),
            alpha_m,
            beta_m,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn base(&self) -> &Arc<BihomAlgebra> {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &Tensor {
        &self.left
    }

    pub fn right(&self) -> &Tensor {
        &self.right
    }

    pub fn alpha_m(&self) -> &Matrix {
        &self.alpha_m
    }

    pub fn beta_m(&self) -> &Matrix {
        &self.beta_m
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Left action of an algebra vector on a module vector.
    pub fn act_left(&self, a: &[Rat], m: &[Rat]) -> Vec<Rat> {
        self.left.eval(&[a, m])
    }

    /// Right action of an algebra vector on a module vector.
    pub fn act_right(&self, m: &[Rat], a: &[Rat]) -> Vec<Rat> {
        self.right.eval(&[m, a])
    }
}

/// The semidirect product algebra on `M ⊕ A` (module coordinates first):
/// `μ̄((m,a),(n,b)) = (m·b + a·n, μ(a,b))` with block-diagonal twists.
pub fn semidirect_product(module: &Bimodule) -> BihomAlgebra {
    let a = module.base.as_ref();
    let (d, e) = (a.dim(), module.dim);
    let total = e + d;
    let mut mu = Tensor::zeros(vec![total, total, total]);
    // m·b: module index p, algebra index j
    for p in 0..e {
        for j in 0..d {
            for q in 0..e {
                let v = module.right.get(&[p, j, q]);
                if !v.is_zero() {
                    mu.set(&[p, e + j, q], v.clone());
                }
            }
        }
    }
    // a·n: algebra index i, module index p
    for i in 0..d {
        for p in 0..e {
            for q in 0..e {
                let v = module.left.get(&[i, p, q]);
                if !v.is_zero() {
                    mu.set(&[e + i, p, q], v.clone());
                }
            }
        }
    }
    // μ(a, b) in the algebra block
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v = a.mu().get(&[i, j, k]);
                if !v.is_zero() {
                    mu.set(&[e + i, e + j, e + k], v.clone());
                }
            }
        }
    }
    let alpha = block_diag(&module.alpha_m, a.alpha());
    let beta = block_diag(&module.beta_m, a.beta());
    let label = format!("semidirect({},{})", module.label, a.label());
    BihomAlgebra::validate(label, mu, alpha, beta)
        .expect("the semidirect product of a bimodule is bihom-associative")
}

/// Block-diagonal matrix with `m` in the leading block.
pub fn block_diag(m: &Matrix, a: &Matrix) -> Matrix {
    let (e, d) = (m.rows(), a.rows());
    Matrix::from_fn(e + d, e + d, |i, j| {
        if i < e && j < e {
            m.get(i, j).clone()
        } else if i >= e && j >= e {
            a.get(i - e, j - e).clone()
        } else {
            crate::scalar::zero()
        }
    })
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModuleMorphismViolation {
    #[error("morphism matrix shape mismatch")]
    ShapeMismatch,
    #[error("modules live over different base algebras")]
    BaseMismatch,
    #[error("does not intertwine the module twist {0}")]
    TwistMismatch(crate::algebra::TwistKind),
    #[error("does not preserve the left action at ({}, {})", .0.0, .0.1)]
    LeftActionMismatch((usize, usize)),
    #[error("does not preserve the right action at ({}, {})", .0.0, .0.1)]
    RightActionMismatch((usize, usize)),
}

/// Checks that `psi : M -> N` commutes with the module twists and preserves
/// both actions.
pub fn validate_module_morphism(
    m: &Bimodule,
    n: &Bimodule,
    psi: &Matrix,
) -> Result<(), ModuleMorphismViolation> {
    use crate::algebra::TwistKind;
    if psi.rows() != n.dim || psi.cols() != m.dim {
        return Err(ModuleMorphismViolation::ShapeMismatch);
    }
    if m.base.as_ref() != n.base.as_ref() {
        return Err(ModuleMorphismViolation::BaseMismatch);
    }
    if psi.mul(&m.alpha_m) != n.alpha_m.mul(psi) {
        return Err(ModuleMorphismViolation::TwistMismatch(TwistKind::Alpha));
    }
    if psi.mul(&m.beta_m) != n.beta_m.mul(psi) {
        return Err(ModuleMorphismViolation::TwistMismatch(TwistKind::Beta));
    }
    let d = m.base.dim();
    for i in 0..d {
        for p in 0..m.dim {
            let lhs = psi.apply(&m.left.eval_basis(&[i, p]));
            let rhs = n.left.eval(&[&crate::algebra::unit_vector(d, i), &psi.col(p)]);
            if lhs != rhs {
                return Err(ModuleMorphismViolation::LeftActionMismatch((i, p)));
            }
            let lhs = psi.apply(&m.right.eval_basis(&[p, i]));
            let rhs = n.right.eval(&[&psi.col(p), &crate::algebra::unit_vector(d, i)]);
            if lhs != rhs {
                return Err(ModuleMorphismViolation::RightActionMismatch((p, i)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::{one, rat};

    #[test]
    fn adjoint_is_valid_for_every_standard_algebra() {
        for alg in corpus::standard_algebras() {
            let _ = Bimodule::adjoint(alg);
        }
    }

    #[test]
    fn zero_actions_are_valid() {
        let t4 = corpus::t4();
        let alpha = Matrix::from_rows(vec![vec![one(), rat(0)], vec![rat(0), rat(-1)]]);
        let beta = Matrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(0)]]);
        assert!(alpha.commutes_with(&beta));
        assert!(Bimodule::zero_actions("z", t4, alpha, beta).is_ok());
    }

    #[test]
    fn perturbed_adjoint_names_the_axiom() {
        let t4 = corpus::t4();
        let mut left = t4.mu().clone();
        let bumped = left.get(&[0, 1, 0]) + one();
        left.set(&[0, 1, 0], bumped);
        let err = Bimodule::validate(
            "broken",
            t4.clone(),
            left.clone(),
            t4.mu().clone(),
            t4.alpha().clone(),
            t4.beta().clone(),
        )
        .unwrap_err();
        // oracle: scan the left-associativity axiom directly
        let mut oracle = None;
        'outer: for i in 0..4 {
            let alpha_i = t4.alpha().col(i);
            for j in 0..4 {
                let ij = t4.multiply_basis(i, j);
                for p in 0..4 {
                    let lhs = left.eval(&[&alpha_i, &left.eval_basis(&[j, p])]);
                    let rhs = left.eval(&[&ij, &t4.beta().col(p)]);
                    if lhs != rhs {
                        oracle = Some(vec![i, j, p]);
                        break 'outer;
                    }
                }
            }
        }
        let reported = err.iter().find_map(|v| match v {
            BimoduleViolation::AxiomFailure {
                axiom: BimoduleAxiom::LeftAssociativity,
                witness,
            } => Some(witness.clone()),
            _ => None,
        });
        assert_eq!(reported, oracle);
        assert!(reported.is_some());
    }

    #[test]
    fn scalar_maps_are_module_morphisms() {
        let t4 = corpus::t4();
        let adj = Bimodule::adjoint(t4);
        let psi = Matrix::identity(4).scale(&rat(3));
        assert!(validate_module_morphism(&adj, &adj, &psi).is_ok());
        assert!(validate_module_morphism(&adj, &adj, &Matrix::zeros(4, 4)).is_ok());
    }

    #[test]
    fn non_morphism_is_rejected() {
        let t4 = corpus::t4();
        let adj = Bimodule::adjoint(t4.clone());
        // alpha itself does not preserve the actions on the adjoint module of t4
        assert!(validate_module_morphism(&adj, &adj, t4.alpha()).is_err());
    }

    #[test]
    fn semidirect_of_field_adjoint_matches_hand_formula() {
        let q = corpus::rational_line();
        let semi = semidirect_product(&Bimodule::adjoint(q));
        assert_eq!(semi.dim(), 2);
        // basis: f (module), e (algebra); (m,a)(n,b) = (mb + an, ab)
        assert_eq!(semi.multiply_basis(0, 1), vec![one(), rat(0)]); // f·e = (1, 0)
        assert_eq!(semi.multiply_basis(1, 0), vec![one(), rat(0)]); // e·f = (1, 0)
        assert_eq!(semi.multiply_basis(1, 1), vec![rat(0), one()]); // e·e = (0, 1)
        assert!(semi.multiply_basis(0, 0).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn semidirect_of_t4_adjoint_is_valid() {
        let semi = semidirect_product(&Bimodule::adjoint(corpus::t4()));
        assert_eq!(semi.dim(), 8);
    }

    #[test]
    fn semidirect_with_zero_actions_is_direct_sum() {
        let t4 = corpus::t4();
        let z = Bimodule::zero_actions("z", t4.clone(), Matrix::identity(2), Matrix::identity(2))
            .unwrap();
        let semi = semidirect_product(&z);
        assert_eq!(semi.dim(), 6);
        // products vanish whenever a module coordinate is involved
        for p in 0..2 {
            for x in 0..6 {
                assert!(semi.multiply_basis(p, x).iter().all(|v| v.is_zero()));
                assert!(semi.multiply_basis(x, p).iter().all(|v| v.is_zero()));
            }
        }
        // and the algebra block is t4 itself
        for i in 0..4 {
            for j in 0..4 {
                let prod = semi.multiply_basis(2 + i, 2 + j);
                let expect = t4.multiply_basis(i, j);
                assert_eq!(&prod[2..], &expect[..]);
            }
        }
    }
}
