//! Classical Hochschild cohomology, coded independently of the twisted
//! engine, plus the restricted subcomplex of twist-commuting cochains on an
//! associative algebra.
//!
//! The classical coboundary here is evaluated basis tuple by basis tuple
//! straight from its defining sum, with no shared machinery with
//! [`crate::cohomology::coboundary`]; the two must agree when `α = β = id`,
//! and that agreement is an acceptance check, not a construction.
//!
//! For an associative `μ` and commuting invertible algebra morphisms `α, β`,
//! the twist-commuting cochains form a subcomplex of the classical complex.
//! Transporting a bihom 2-cochain `f` of the Yau twist along
//! `f ↦ f∘(α^{-1} ⊗ β^{-1})` lands in that subcomplex, sends cocycles to
//! cocycles and coboundaries to coboundaries, which is the engine of the
//! rigidity argument for Yau twists.

use crate::algebra::first_non_associative_triple;
use crate::budget::{Budget, BudgetExceeded};
use crate::cochain::{twist_commuting_basis_raw, FlatBasis};
use crate::cohomology::{CohomologyReport, ReportRow};
use crate::matrix::Matrix;
use crate::scalar::{zero, Rat};
use crate::tensor::{for_each_index, Tensor};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Mutex;
use thiserror::Error;

/// Classical Hochschild coboundary (no twists), evaluated directly:
///
/// ```text
/// (δf)(a_1,..,a_{n+1}) = a_1·f(a_2,..) + Σ (-1)^i f(.., μ(a_i,a_{i+1}), ..)
///                        + (-1)^{n+1} f(a_1,..,a_n)·a_{n+1}
/// ```
pub fn classical_coboundary(mu: &Tensor, left: &Tensor, right: &Tensor, f: &Tensor) -> Tensor {
    let n = f.dims().len() - 1;
    let d = mu.dims()[0];
    let e = *f.dims().last().unwrap();
    let mut dims = vec![d; n + 1];
    dims.push(e);
    let mut out = Tensor::zeros(dims);
    for_each_index(&vec![d; n + 1], |idx| {
        let mut val = vec![zero(); e];
        // a_1 · f(a_2, ..)
        let head = f.eval_basis(&idx[1..]);
        if !head.iter().all(Zero::is_zero) {
            let acted = left.eval(&[&crate::algebra::unit_vector(d, idx[0]), &head]);
            for (q, v) in acted.into_iter().enumerate() {
                val[q] = &val[q] + &v;
            }
        }
        // interior alternating terms
        for i in 1..=n {
            let prod = mu.eval_basis(&[idx[i - 1], idx[i]]);
            let mut args: Vec<&[Rat]> = Vec::with_capacity(n);
            let units: Vec<Vec<Rat>> = idx.iter().map(|&t| crate::algebra::unit_vector(d, t)).collect();
            for (slot, unit) in units.iter().enumerate().take(i - 1) {
                let _ = slot;
                args.push(unit);
            }
            args.push(&prod);
            for unit in units.iter().skip(i + 1) {
                args.push(unit);
            }
            let term = f.eval(&args);
            for (q, v) in term.into_iter().enumerate() {
                if i % 2 == 0 {
                    val[q] = &val[q] + &v;
                } else {
                    val[q] = &val[q] - &v;
                }
            }
        }
        // (-1)^{n+1} f(a_1, .., a_n) · a_{n+1}
        let tail = f.eval_basis(&idx[..n]);
        if !tail.iter().all(Zero::is_zero) {
            let acted = right.eval(&[&tail, &crate::algebra::unit_vector(d, idx[n])]);
            for (q, v) in acted.into_iter().enumerate() {
                if (n + 1).is_multiple_of(2) {
                    val[q] = &val[q] + &v;
                } else {
                    val[q] = &val[q] - &v;
                }
            }
        }
        for (q, v) in val.into_iter().enumerate() {
            if !v.is_zero() {
                let mut full = idx.to_vec();
                full.push(q);
                out.set(&full, v);
            }
        }
    });
    out
}

/// Classical Hochschild dimensions with self coefficients on the full
/// (unconstrained) cochain spaces. This is the independent oracle for the
/// `α = β = id` specialization of the twisted engine.
pub fn classical_self_report(mu: &Tensor, max_degree: usize, budget: Budget) -> Result<CohomologyReport, BudgetExceeded> {
    assert!(max_degree >= 1);
    let d = mu.dims()[0];
    let mut rows = Vec::new();
    let mut prev_rank = 0usize;
    for n in 1..=max_degree {
        let dim_c = d.pow(n as u32) * d;
        budget.check(d.pow(n as u32 + 1) * d, &format!("classical cochain slice at degree {n}"))?;
        let delta = classical_delta_matrix(mu, n);
        let rank = delta.rank();
        let ker = dim_c - rank;
        let h = if n == 1 { ker } else { ker - prev_rank };
        rows.push(ReportRow {
            n,
            dim_c,
            rank,
            ker,
            h,
        });
        prev_rank = rank;
    }
    Ok(CohomologyReport {
        coefficients: "self (classical oracle)".into(),
        note: "complex starts in degree 1; H^1 = ker delta^1".into(),
        rows,
    })
}

fn classical_delta_matrix(mu: &Tensor, n: usize) -> Matrix {
    let d = mu.dims()[0];
    let src = d.pow(n as u32) * d;
    let dst = d.pow(n as u32 + 1) * d;
    let mut m = Matrix::zeros(dst, src);
    let mut dims = vec![d; n];
    dims.push(d);
    for j in 0..src {
        let mut unit = Tensor::zeros(dims.clone());
        unit.flat_mut()[j] = crate::scalar::one();
        let df = classical_coboundary(mu, mu, mu, &unit);
        for (i, v) in df.flat().iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v.clone());
            }
        }
    }
    m
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RestrictedError {
    #[error("product is not associative at triple ({}, {}, {})", .0.0, .0.1, .0.2)]
    NotAssociative((usize, usize, usize)),
    #[error("{0} is not an algebra morphism of the associative product")]
    NotMorphism(&'static str),
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("alpha and beta do not commute")]
    NotCommuting,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// The subcomplex `C^n_{α,β}` of the classical Hochschild complex of an
/// associative algebra, cut out by the twist-commutation constraints and
/// carrying the classical (untwisted) coboundary.
pub struct RestrictedComplex {
    dim: usize,
    mu: Tensor,
    alpha: Matrix,
    beta: Matrix,
    alpha_inv: Matrix,
    beta_inv: Matrix,
    budget: Budget,
    bases: Mutex<BTreeMap<usize, FlatBasis>>,
}

impl RestrictedComplex {
    pub fn new(mu: Tensor, alpha: Matrix, beta: Matrix, budget: Budget) -> Result<Self, RestrictedError> {
        if let Some(w) = first_non_associative_triple(&mu) {
            return Err(RestrictedError::NotAssociative(w));
        }
        for (name, m) in [("alpha", &alpha), ("beta", &beta)] {
            let d = mu.dims()[0];
            for i in 0..d {
                let mi = m.col(i);
                for j in 0..d {
                    if m.apply(&mu.eval_basis(&[i, j])) != mu.eval(&[&mi, &m.col(j)]) {
                        return Err(RestrictedError::NotMorphism(name));
                    }
                }
            }
        }
        if !alpha.commutes_with(&beta) {
            return Err(RestrictedError::NotCommuting);
        }
        let alpha_inv = alpha.inverse().ok_or(RestrictedError::NotInvertible("alpha"))?;
        let beta_inv = beta.inverse().ok_or(RestrictedError::NotInvertible("beta"))?;
        Ok(RestrictedComplex {
            dim: mu.dims()[0],
            mu,
            alpha,
            beta,
            alpha_inv,
            beta_inv,
            budget,
            bases: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> &Tensor {
        &self.mu
    }

    fn basis(&self, n: usize) -> Result<FlatBasis, BudgetExceeded> {
        let mut cache = self.bases.lock().unwrap();
        if let Some(b) = cache.get(&n) {
            return Ok(b.clone());
        }
        let b = twist_commuting_basis_raw(
            self.dim,
            &self.alpha,
            &self.beta,
            self.dim,
            &self.alpha,
            &self.beta,
            n,
            self.budget,
        )?;
        cache.insert(n, b.clone());
        Ok(b)
    }

    fn tensor_from_flat(&self, n: usize, flat: Vec<Rat>) -> Tensor {
        let mut dims = vec![self.dim; n];
        dims.push(self.dim);
        Tensor::from_flat(dims, flat)
    }

    /// Classical coboundary of a twist-commuting n-cochain tensor.
    pub fn coboundary(&self, f: &Tensor) -> Tensor {
        classical_coboundary(&self.mu, &self.mu, &self.mu, f)
    }

    pub fn is_cocycle(&self, f: &Tensor) -> bool {
        self.coboundary(f).is_zero()
    }

    /// Membership in the twist-commuting subspace.
    pub fn contains(&self, f: &Tensor) -> Result<bool, BudgetExceeded> {
        let n = f.dims().len() - 1;
        Ok(self.basis(n)?.coords(f.flat()).is_some())
    }

    /// Dimensions of the restricted subcomplex, classical differential.
    pub fn report(&self, max_degree: usize) -> Result<CohomologyReport, BudgetExceeded> {
        assert!(max_degree >= 1);
        let mut rows = Vec::new();
        let mut prev_rank = 0usize;
        for n in 1..=max_degree {
            let src = self.basis(n)?;
            let dst = self.basis(n + 1)?;
            let mut m = Matrix::zeros(dst.dim(), src.dim());
            for j in 0..src.dim() {
                let f = self.tensor_from_flat(n, src.vector(j));
                let df = self.coboundary(&f);
                let coords = dst
                    .coords(df.flat())
                    .expect("classical coboundary preserves twist commutation");
                for (i, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        m.set(i, j, v);
                    }
                }
            }
            let rank = m.rank();
            let dim_c = src.dim();
            let ker = dim_c - rank;
            let h = if n == 1 { ker } else { ker - prev_rank };
            rows.push(ReportRow {
                n,
                dim_c,
                rank,
                ker,
                h,
            });
            prev_rank = rank;
        }
        Ok(CohomologyReport {
            coefficients: "self (restricted classical subcomplex)".into(),
            note: "complex starts in degree 1; H^1 = ker delta^1".into(),
            rows,
        })
    }

    /// Transports a bihom 2-cochain of the Yau twist into the subcomplex:
    /// `f ↦ f ∘ (α^{-1} ⊗ β^{-1})`.
    pub fn transport(&self, f: &Tensor) -> Tensor {
        assert_eq!(f.dims().len(), 3);
        f.precompose_slot(0, &self.alpha_inv)
            .precompose_slot(1, &self.beta_inv)
    }

    /// Inverse of [`RestrictedComplex::transport`]: `g ↦ g ∘ (α ⊗ β)`.
    pub fn transport_inverse(&self, g: &Tensor) -> Tensor {
        assert_eq!(g.dims().len(), 3);
        g.precompose_slot(0, &self.alpha).precompose_slot(1, &self.beta)
    }
}
