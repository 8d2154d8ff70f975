//! Twist-compatible cochains and exact bases of the cochain spaces.
//!
//! `C^n(A, M)` is the space of multilinear maps `A^{⊗n} -> M` commuting with
//! both twists: `α_M ∘ f = f ∘ α^{⊗n}` and `β_M ∘ f = f ∘ β^{⊗n}`. The two
//! commutation constraints are linear in the coefficient tensor, so a basis
//! of the space is an exact nullspace computation. Degrees follow the operad
//! convention `|f| = arity - 1`.

use crate::algebra::{BihomAlgebra, TwistKind};
use crate::bimodule::Bimodule;
use crate::budget::{Budget, BudgetExceeded};
use crate::matrix::{nullspace_sparse, Matrix, SparseRow};
use crate::scalar::{one, zero, Rat};
use crate::tensor::{for_each_index, Tensor};
use num_traits::Zero;
use rand::Rng;
use std::sync::Arc;
use thiserror::Error;

/// Where a cochain takes values: the algebra itself or a bimodule over it.
#[derive(Clone, Debug)]
pub enum Coefficients {
    SelfCoeffs,
    Module(Arc<Bimodule>),
}

impl PartialEq for Coefficients {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Coefficients::SelfCoeffs, Coefficients::SelfCoeffs) => true,
            (Coefficients::Module(a), Coefficients::Module(b)) => a == b,
            _ => false,
        }
    }
}

impl Coefficients {
    pub fn dim(&self, base: &BihomAlgebra) -> usize {
        match self {
            Coefficients::SelfCoeffs => base.dim(),
            Coefficients::Module(m) => m.dim(),
        }
    }

    pub fn alpha<'a>(&'a self, base: &'a BihomAlgebra) -> &'a Matrix {
        match self {
            Coefficients::SelfCoeffs => base.alpha(),
            Coefficients::Module(m) => m.alpha_m(),
        }
    }

    pub fn beta<'a>(&'a self, base: &'a BihomAlgebra) -> &'a Matrix {
        match self {
            Coefficients::SelfCoeffs => base.beta(),
            Coefficients::Module(m) => m.beta_m(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Coefficients::SelfCoeffs => "self".to_string(),
            Coefficients::Module(m) => m.label().to_string(),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CochainError {
    #[error("coefficient tensor has shape {got:?}, expected {want:?}")]
    ShapeMismatch { got: Vec<usize>, want: Vec<usize> },
    #[error("cochain does not commute with {0}")]
    NotTwistCompatible(TwistKind),
    #[error("cochains live over different algebras")]
    AlgebraMismatch,
    #[error("operation requires self coefficients")]
    TargetMismatch,
}

/// A degree-homogeneous multilinear map `A^{⊗n} -> M`, twist compatible.
#[derive(Clone, Debug)]
pub struct Cochain {
    algebra: Arc<BihomAlgebra>,
    coeffs: Coefficients,
    arity: usize,
    tensor: Tensor,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.tensor == other.tensor
            && self.algebra == other.algebra
            && self.coeffs == other.coeffs
    }
}

impl Cochain {
    /// Validates shape and twist compatibility.
    pub fn new(
        algebra: Arc<BihomAlgebra>,
        coeffs: Coefficients,
        tensor: Tensor,
    ) -> Result<Self, CochainError> {
        let d = algebra.dim();
        let e = coeffs.dim(&algebra);
        let n = tensor.dims().len().saturating_sub(1);
        let mut want = vec![d; n];
        want.push(e);
        if n == 0 || tensor.dims() != want {
            return Err(CochainError::ShapeMismatch {
                got: tensor.dims().to_vec(),
                want,
            });
        }
        let c = Cochain {
            algebra,
            coeffs,
            arity: n,
            tensor,
        };
        if let Some(t) = c.twist_violation() {
            return Err(CochainError::NotTwistCompatible(t));
        }
        Ok(c)
    }

    /// Wraps a tensor produced by an operation that preserves twist
    /// compatibility. Shape is still checked.
    pub(crate) fn unchecked(
        algebra: Arc<BihomAlgebra>,
        coeffs: Coefficients,
        tensor: Tensor,
    ) -> Self {
        let n = tensor.dims().len() - 1;
        debug_assert!(n >= 1);
        debug_assert_eq!(*tensor.dims().last().unwrap(), coeffs.dim(&algebra));
        Cochain {
            algebra,
            coeffs,
            arity: n,
            tensor,
        }
    }

    pub fn zero(algebra: Arc<BihomAlgebra>, coeffs: Coefficients, arity: usize) -> Self {
        let d = algebra.dim();
        let e = coeffs.dim(&algebra);
        let mut dims = vec![d; arity];
        dims.push(e);
        Cochain::unchecked(algebra, coeffs, Tensor::zeros(dims))
    }

    /// The identity map as a 1-cochain with self coefficients.
    pub fn identity(algebra: Arc<BihomAlgebra>) -> Self {
        let d = algebra.dim();
        let t = Tensor::from_fn(vec![d, d], |idx| {
            if idx[0] == idx[1] {
                one()
            } else {
                zero()
            }
        });
        Cochain::unchecked(algebra, Coefficients::SelfCoeffs, t)
    }

    /// The multiplication μ as a 2-cochain with self coefficients.
    pub fn from_mu(algebra: Arc<BihomAlgebra>) -> Self {
        let t = algebra.mu().clone();
        Cochain::unchecked(algebra, Coefficients::SelfCoeffs, t)
    }

    pub fn algebra(&self) -> &Arc<BihomAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Operadic degree `|f| = arity - 1`.
    pub fn degree(&self) -> usize {
        self.arity - 1
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.arity, other.arity);
        assert!(self.same_space(other));
        Cochain::unchecked(
            self.algebra.clone(),
            self.coeffs.clone(),
            self.tensor.add(&other.tensor),
        )
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        Cochain::unchecked(self.algebra.clone(), self.coeffs.clone(), self.tensor.neg())
    }

    pub fn scale(&self, c: &Rat) -> Cochain {
        Cochain::unchecked(
            self.algebra.clone(),
            self.coeffs.clone(),
            self.tensor.scale(c),
        )
    }

    pub fn same_space(&self, other: &Cochain) -> bool {
        self.algebra == other.algebra && self.coeffs == other.coeffs
    }

    /// Returns the first violated twist-commutation constraint, if any.
    pub fn twist_violation(&self) -> Option<TwistKind> {
        let pairs = [
            (TwistKind::Alpha, self.algebra.alpha(), self.coeffs.alpha(&self.algebra)),
            (TwistKind::Beta, self.algebra.beta(), self.coeffs.beta(&self.algebra)),
        ];
        for (kind, s, t) in pairs {
            if s.is_identity() && t.is_identity() {
                continue;
            }
            let mut pre = self.tensor.clone();
            for slot in 0..self.arity {
                pre = pre.precompose_slot(slot, s);
            }
            if pre != self.tensor.postcompose(t) {
                return Some(kind);
            }
        }
        None
    }

    pub fn is_twist_compatible(&self) -> bool {
        self.twist_violation().is_none()
    }

    /// Evaluates on basis elements.
    pub fn eval_basis(&self, idx: &[usize]) -> Vec<Rat> {
        self.tensor.eval_basis(idx)
    }
}

/// A basis of a linear subspace of flat coefficient vectors, in free-column
/// echelon form: basis vector `k` has a `1` at `free_cols[k]` and `0` at all
/// other free columns, so coordinates can be read off the free entries.
/// `vectors = None` marks the full ambient space with its unit basis.
#[derive(Clone, Debug)]
pub struct FlatBasis {
    pub ambient: usize,
    pub vectors: Option<(Vec<Vec<Rat>>, Vec<usize>)>,
}

impl FlatBasis {
    pub fn full(ambient: usize) -> Self {
        FlatBasis {
            ambient,
            vectors: None,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.vectors {
            None => self.ambient,
            Some((basis, _)) => basis.len(),
        }
    }

    pub fn vector(&self, k: usize) -> Vec<Rat> {
        match &self.vectors {
            None => {
                let mut v = vec![zero(); self.ambient];
                v[k] = one();
                v
            }
            Some((basis, _)) => basis[k].clone(),
        }
    }

    /// Coordinates of a flat vector in this basis, or `None` when it is not
    /// in the span. Exact: the candidate is re-expanded and compared.
    pub fn coords(&self, flat: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(flat.len(), self.ambient);
        match &self.vectors {
            None => Some(flat.to_vec()),
            Some((_, free_cols)) => {
                let coords: Vec<Rat> = free_cols.iter().map(|&c| flat[c].clone()).collect();
                let recon = self.expand(&coords);
                if recon == flat {
                    Some(coords)
                } else {
                    None
                }
            }
        }
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn expand(&self, coords: &[Rat]) -> Vec<Rat> {
        assert_eq!(coords.len(), self.dim());
        match &self.vectors {
            None => coords.to_vec(),
            Some((basis, _)) => {
                let mut data = vec![zero(); self.ambient];
                for (c, b) in coords.iter().zip(basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (r, bv) in data.iter_mut().zip(b) {
                        if !bv.is_zero() {
                            *r = &*r + &(c * bv);
                        }
                    }
                }
                data
            }
        }
    }
}

/// An exact basis of `C^n_{α,β}(A, M)`.
#[derive(Clone, Debug)]
pub struct CochainSpaceBasis {
    algebra: Arc<BihomAlgebra>,
    coeffs: Coefficients,
    arity: usize,
    flat: FlatBasis,
}

impl CochainSpaceBasis {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ambient_dim(&self) -> usize {
        self.flat.ambient
    }

    pub fn dim(&self) -> usize {
        self.flat.dim()
    }

    pub fn flat(&self) -> &FlatBasis {
        &self.flat
    }

    fn dims_vec(&self) -> Vec<usize> {
        let mut dims = vec![self.algebra.dim(); self.arity];
        dims.push(self.coeffs.dim(&self.algebra));
        dims
    }

    /// Materializes the k-th basis cochain.
    pub fn cochain(&self, k: usize) -> Cochain {
        Cochain::unchecked(
            self.algebra.clone(),
            self.coeffs.clone(),
            Tensor::from_flat(self.dims_vec(), self.flat.vector(k)),
        )
    }

    /// Coordinates of a cochain in this basis; `None` when it is not in the
    /// span (which for a twist-compatible cochain cannot happen).
    pub fn coords(&self, f: &Cochain) -> Option<Vec<Rat>> {
        assert_eq!(f.arity, self.arity);
        self.flat.coords(f.tensor.flat())
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn from_coords(&self, coords: &[Rat]) -> Cochain {
        Cochain::unchecked(
            self.algebra.clone(),
            self.coeffs.clone(),
            Tensor::from_flat(self.dims_vec(), self.flat.expand(coords)),
        )
    }

    /// A pseudo-random element of the space: random small integer
    /// coordinates combined through the basis, i.e. the projection of a
    /// random ambient tensor onto the twist-compatible subspace.
    pub fn random(&self, rng: &mut impl Rng) -> Cochain {
        let coords: Vec<Rat> = (0..self.dim())
            .map(|_| crate::scalar::rat(rng.gen_range(-3i64..=3)))
            .collect();
        self.from_coords(&coords)
    }
}

/// Computes an exact basis of the twist-commuting maps `V^{⊗n} -> W` where
/// the input twists are `(alpha, beta)` and the output twists are
/// `(alpha_t, beta_t)`. This is the raw engine behind both the bihom cochain
/// spaces and the restricted classical subcomplex.
#[allow(clippy::too_many_arguments)]
pub fn twist_commuting_basis_raw(
    d: usize,
    alpha: &Matrix,
    beta: &Matrix,
    e: usize,
    alpha_t: &Matrix,
    beta_t: &Matrix,
    n: usize,
    budget: Budget,
) -> Result<FlatBasis, BudgetExceeded> {
    assert!(n >= 1);
    let ambient = d.checked_pow(n as u32).and_then(|x| x.checked_mul(e));
    let ambient = ambient.unwrap_or(usize::MAX);
    budget.check(ambient, &format!("cochain space of arity {n}"))?;

    let mut rows: Vec<SparseRow> = Vec::new();
    for (s, t) in [(alpha, alpha_t), (beta, beta_t)] {
        if s.is_identity() && t.is_identity() {
            continue;
        }
        append_commutation_rows(&mut rows, d, s, e, t, n);
    }
    if rows.is_empty() {
        return Ok(FlatBasis::full(ambient));
    }
    let ns = nullspace_sparse(rows, ambient);
    Ok(FlatBasis {
        ambient,
        vectors: Some((ns.basis, ns.free_cols)),
    })
}

/// Rows of `t∘f - f∘s^{⊗n} = 0` as sparse linear constraints on the flat
/// coefficient vector, one row per `(input tuple, output coordinate)`.
fn append_commutation_rows(
    rows: &mut Vec<SparseRow>,
    d: usize,
    s: &Matrix,
    e: usize,
    t: &Matrix,
    n: usize,
) {
    // column supports of s, indexed by the input basis vector
    let s_cols: Vec<Vec<(usize, Rat)>> = (0..d).map(|i| s.col_support(i)).collect();
    let dims = vec![d; n];
    for_each_index(&dims, |idx| {
        // enumerate J with nonzero product prod_p s[j_p][i_p]
        let mut images: Vec<(usize, Rat)> = vec![(0, one())];
        for &i in idx {
            let mut next = Vec::with_capacity(images.len() * s_cols[i].len());
            for (off, coeff) in &images {
                for (j, v) in &s_cols[i] {
                    next.push((off * d + j, coeff * v));
                }
            }
            images = next;
            if images.is_empty() {
                break;
            }
        }
        let base: usize = idx.iter().fold(0, |acc, &i| acc * d + i) * e;
        for k in 0..e {
            let mut row: SparseRow = Vec::new();
            for l in 0..e {
                let c = t.get(k, l);
                if !c.is_zero() {
                    row.push((base + l, c.clone()));
                }
            }
            for (joff, coeff) in &images {
                row.push((joff * e + k, -coeff.clone()));
            }
            row.sort_by_key(|(c, _)| *c);
            // merge duplicate columns
            let mut merged: SparseRow = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((mc, mv)) if *mc == c => *mv = &*mv + &v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            if !merged.is_empty() {
                rows.push(merged);
            }
        }
    });
}

/// Basis of `C^n_{α,β}(A, M)` under the fixed tensor-index ordering.
pub fn cochain_space_basis(
    algebra: &Arc<BihomAlgebra>,
    coeffs: &Coefficients,
    n: usize,
    budget: Budget,
) -> Result<CochainSpaceBasis, BudgetExceeded> {
    let d = algebra.dim();
    let e = coeffs.dim(algebra);
    let flat = twist_commuting_basis_raw(
        d,
        algebra.alpha(),
        algebra.beta(),
        e,
        coeffs.alpha(algebra),
        coeffs.beta(algebra),
        n,
        budget,
    )?;
    Ok(CochainSpaceBasis {
        algebra: algebra.clone(),
        coeffs: coeffs.clone(),
        arity: n,
        flat,
    })
}
