//! The Hochschild-type coboundary and cohomology of bihom-associative
//! algebras, for self or bimodule coefficients.
//!
//! The coboundary of an n-cochain is
//!
//! ```text
//! (δf)(a_1, .., a_{n+1}) = μ(α^{n-1}(a_1), f(a_2, .., a_{n+1}))
//!   + Σ_{i=1}^{n} (-1)^i f(α(a_1), .., α(a_{i-1}), μ(a_i, a_{i+1}), β(a_{i+2}), .., β(a_{n+1}))
//!   + (-1)^{n+1} μ(f(a_1, .., a_n), β^{n-1}(a_{n+1}))
//! ```
//!
//! where for bimodule coefficients the outer μ's denote the left and right
//! actions. The complex starts in degree 1: there is no `C^0`, and `H^1` is
//! the full kernel of `δ^1`, which every report flags.
//!
//! The operadic differential `μ∘f - (-1)^{|f|} f∘μ` agrees with δ up to the
//! arity-dependent sign `(-1)^{arity(f)+1}` (equivalently `(-1)^{|f|}` in the
//! degree convention `|f| = arity - 1`); see [`operadic_differential`] and
//! [`coboundary_sign`].

use crate::algebra::{AlgebraMorphism, BihomAlgebra};
use crate::bimodule::{semidirect_product, validate_module_morphism, Bimodule, ModuleMorphismViolation};
use crate::budget::{Budget, BudgetExceeded};
use crate::cochain::{cochain_space_basis, Cochain, CochainSpaceBasis, Coefficients};
use crate::matrix::Matrix;
use crate::operad::{brace, circle_product};
use crate::scalar::{sign_pow, Rat};
use crate::tensor::{compose_at, Tensor};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Hochschild coboundary of a twist-compatible cochain. The output lands in
/// `C^{n+1}` with the same coefficients.
pub fn coboundary(f: &Cochain) -> Cochain {
    let alg = f.algebra();
    let n = f.arity();
    let (left, right): (&Tensor, &Tensor) = match f.coeffs() {
        Coefficients::SelfCoeffs => (alg.mu(), alg.mu()),
        Coefficients::Module(m) => (m.left(), m.right()),
    };
    let apow = alg.alpha().pow(n - 1);
    let bpow = alg.beta().pow(n - 1);

    // μ(α^{n-1}(a_1), f(a_2, ..))
    let head = {
        let l = if apow.is_identity() {
            left.clone()
        } else {
            left.precompose_slot(0, &apow)
        };
        compose_at(&l, 1, f.tensor())
    };
    // (-1)^{n+1} μ(f(..), β^{n-1}(a_{n+1}))
    let tail = {
        let r = if bpow.is_identity() {
            right.clone()
        } else {
            right.precompose_slot(1, &bpow)
        };
        compose_at(&r, 0, f.tensor())
    };

    let mut acc = head;
    if (n + 1).is_multiple_of(2) {
        acc = acc.add(&tail);
    } else {
        acc = acc.sub(&tail);
    }

    // interior terms: slot i-1 of f receives μ(a_i, a_{i+1}), earlier slots
    // receive α, later slots receive β
    let alpha_id = alg.alpha().is_identity();
    let beta_id = alg.beta().is_identity();
    for i in 1..=n {
        let mut pre = f.tensor().clone();
        if !alpha_id {
            for s in 0..i - 1 {
                pre = pre.precompose_slot(s, alg.alpha());
            }
        }
        if !beta_id {
            for s in i..n {
                pre = pre.precompose_slot(s, alg.beta());
            }
        }
        let term = compose_at(&pre, i - 1, alg.mu());
        if i % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    Cochain::unchecked(alg.clone(), f.coeffs().clone(), acc)
}

/// `δf = 0`?
pub fn is_cocycle(f: &Cochain) -> bool {
    coboundary(f).is_zero()
}

/// Extends a bimodule-valued cochain to the semidirect product:
/// `f~((m_1,a_1), .., (m_n,a_n)) = (f(a_1, .., a_n), 0)`.
/// Returns the semidirect algebra together with the lifted cochain.
pub fn lift_to_semidirect(f: &Cochain) -> (Arc<BihomAlgebra>, Cochain) {
    let module = match f.coeffs() {
        Coefficients::Module(m) => m.clone(),
        Coefficients::SelfCoeffs => Arc::new(Bimodule::adjoint(f.algebra().clone())),
    };
    let semi = Arc::new(semidirect_product(&module));
    let e = module.dim();
    let d = f.algebra().dim();
    let total = e + d;
    let n = f.arity();
    let mut dims = vec![total; n];
    dims.push(total);
    let mut t = Tensor::zeros(dims);
    // nonzero only when every input is in the algebra block and the output
    // is in the module block
    crate::tensor::for_each_index(&vec![d; n], |idx| {
        let val = f.tensor().eval_basis(idx);
        let shifted: Vec<usize> = idx.iter().map(|&i| e + i).collect();
        for (q, v) in val.into_iter().enumerate() {
            if !v.is_zero() {
                let mut full = shifted.clone();
                full.push(q);
                t.set(&full, v);
            }
        }
    });
    let lifted = Cochain::unchecked(semi.clone(), Coefficients::SelfCoeffs, t);
    (semi, lifted)
}

/// Restricts a cochain over the semidirect product `M ⋊ A` to `A^{⊗n} -> M`.
pub fn restrict_to_base(
    lifted: &Cochain,
    algebra: &Arc<BihomAlgebra>,
    module: &Arc<Bimodule>,
) -> Cochain {
    let e = module.dim();
    let d = algebra.dim();
    let n = lifted.arity();
    assert_eq!(lifted.algebra().dim(), e + d);
    let mut dims = vec![d; n];
    dims.push(e);
    let mut t = Tensor::zeros(dims);
    crate::tensor::for_each_index(&vec![d; n], |idx| {
        let shifted: Vec<usize> = idx.iter().map(|&i| e + i).collect();
        let val = lifted.tensor().eval_basis(&shifted);
        for (q, v) in val.iter().enumerate().take(e) {
            if !v.is_zero() {
                let mut full = idx.to_vec();
                full.push(q);
                t.set(&full, v.clone());
            }
        }
    });
    Cochain::unchecked(
        algebra.clone(),
        Coefficients::Module(module.clone()),
        t,
    )
}

/// One degree of a cohomology table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportRow {
    pub n: usize,
    #[serde(rename = "dimC")]
    pub dim_c: usize,
    pub rank: usize,
    pub ker: usize,
    #[serde(rename = "H")]
    pub h: usize,
}

/// Exact cohomology dimensions per degree.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CohomologyReport {
    pub coefficients: String,
    /// The complex starts in degree 1; `H^1` is the full kernel of `δ^1`.
    pub note: String,
    pub rows: Vec<ReportRow>,
}

/// The cochain complex of an algebra with fixed coefficients. Bases and
/// coboundary matrices are computed once per degree and cached.
pub struct Complex {
    algebra: Arc<BihomAlgebra>,
    coeffs: Coefficients,
    budget: Budget,
    bases: Mutex<BTreeMap<usize, Arc<CochainSpaceBasis>>>,
    deltas: Mutex<BTreeMap<usize, Arc<Matrix>>>,
}

impl Complex {
    pub fn new(algebra: Arc<BihomAlgebra>, coeffs: Coefficients) -> Self {
        Complex::with_budget(algebra, coeffs, Budget::default())
    }

    pub fn with_budget(algebra: Arc<BihomAlgebra>, coeffs: Coefficients, budget: Budget) -> Self {
        if let Coefficients::Module(m) = &coeffs {
            assert_eq!(
                m.base().as_ref(),
                algebra.as_ref(),
                "coefficient bimodule must live over the complex's algebra"
            );
        }
        Complex {
            algebra,
            coeffs,
            budget,
            bases: Mutex::new(BTreeMap::new()),
            deltas: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<BihomAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn basis(&self, n: usize) -> Result<Arc<CochainSpaceBasis>, BudgetExceeded> {
        let mut cache = self.bases.lock().unwrap();
        if let Some(b) = cache.get(&n) {
            return Ok(b.clone());
        }
        let b = Arc::new(cochain_space_basis(
            &self.algebra,
            &self.coeffs,
            n,
            self.budget,
        )?);
        cache.insert(n, b.clone());
        Ok(b)
    }

    /// Matrix of `δ : C^n -> C^{n+1}` in the computed bases
    /// (`dim C^{n+1}` rows by `dim C^n` columns).
    pub fn delta_matrix(&self, n: usize) -> Result<Arc<Matrix>, BudgetExceeded> {
        {
            let cache = self.deltas.lock().unwrap();
            if let Some(m) = cache.get(&n) {
                return Ok(m.clone());
            }
        }
        let src = self.basis(n)?;
        let dst = self.basis(n + 1)?;
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for j in 0..src.dim() {
            let df = coboundary(&src.cochain(j));
            let coords = dst
                .coords(&df)
                .expect("coboundary preserves twist compatibility");
            for (i, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        let m = Arc::new(m);
        self.deltas.lock().unwrap().insert(n, m.clone());
        Ok(m)
    }

    /// Dimensions `dim C^n`, `rank δ^n`, `dim ker δ^n` and `dim H^n` for
    /// `1 ≤ n ≤ max_degree`.
    pub fn report(&self, max_degree: usize) -> Result<CohomologyReport, BudgetExceeded> {
        assert!(max_degree >= 1);
        let mut rows = Vec::with_capacity(max_degree);
        let mut prev_rank = 0usize;
        for n in 1..=max_degree {
            let dim_c = self.basis(n)?.dim();
            let rank = self.delta_matrix(n)?.rank();
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
            coefficients: self.coeffs.label(),
            note: "complex starts in degree 1; H^1 = ker delta^1".into(),
            rows,
        })
    }

    /// A basis of the n-cocycles, as cochains.
    pub fn cocycle_basis(&self, n: usize) -> Result<Vec<Cochain>, BudgetExceeded> {
        let basis = self.basis(n)?;
        let delta = self.delta_matrix(n)?;
        let ns = delta.nullspace();
        Ok(ns
            .basis
            .iter()
            .map(|coords| basis.from_coords(coords))
            .collect())
    }

    /// Finds `g` with `δg = f`, or `None` when `f` is not a coboundary.
    /// The solution is the deterministic one with free variables zero.
    pub fn find_primitive(&self, f: &Cochain) -> Result<Option<Cochain>, BudgetExceeded> {
        let n = f.arity();
        if n < 2 {
            return Ok(None); // the complex starts in degree 1
        }
        let dst = self.basis(n)?;
        let Some(target) = dst.coords(f) else {
            return Ok(None);
        };
        let delta = self.delta_matrix(n - 1)?;
        let src = self.basis(n - 1)?;
        match delta.solve(&target) {
            None => Ok(None),
            Some(x) => {
                let g = src.from_coords(&x);
                debug_assert_eq!(coboundary(&g), *f);
                Ok(Some(g))
            }
        }
    }
}

/// The cup product
/// `(f ∪ g)(a_1,..,a_{m+n}) = (-1)^{mn} μ(f(α^{n-1}a_1,..), g(β^{m-1}a_{m+1},..))`.
pub fn cup_product(f: &Cochain, g: &Cochain) -> Cochain {
    assert!(matches!(f.coeffs(), Coefficients::SelfCoeffs));
    assert!(matches!(g.coeffs(), Coefficients::SelfCoeffs));
    assert_eq!(f.algebra(), g.algebra());
    let alg = f.algebra();
    let (m, n) = (f.arity(), g.arity());
    let apow = alg.alpha().pow(n - 1);
    let bpow = alg.beta().pow(m - 1);
    let mut ft = f.tensor().clone();
    if !apow.is_identity() {
        for s in 0..m {
            ft = ft.precompose_slot(s, &apow);
        }
    }
    let mut gt = g.tensor().clone();
    if !bpow.is_identity() {
        for s in 0..n {
            gt = gt.precompose_slot(s, &bpow);
        }
    }
    let with_f = compose_at(alg.mu(), 0, &ft);
    let full = compose_at(&with_f, m, &gt);
    let signed = if (m * n) % 2 == 0 { full } else { full.neg() };
    Cochain::unchecked(alg.clone(), Coefficients::SelfCoeffs, signed)
}

/// The same cup product computed through braces:
/// `f ∪ g = (-1)^{|f|+1} {μ}{f, g}`. Used as an independent code path.
pub fn cup_via_braces(f: &Cochain, g: &Cochain) -> Cochain {
    let mu = Cochain::from_mu(f.algebra().clone());
    let b = brace(&mu, &[f.clone(), g.clone()]).expect("brace of two cochains into mu");
    b.scale(&sign_pow(f.degree() + 1))
}

/// The differential induced by the multiplication on the operad:
/// `d f = μ∘f - (-1)^{|f|} f∘μ`.
pub fn operadic_differential(f: &Cochain) -> Cochain {
    let mu = Cochain::from_mu(f.algebra().clone());
    let mf = circle_product(&mu, f).expect("self cochain");
    let fm = circle_product(f, &mu).expect("self cochain");
    mf.sub(&fm.scale(&sign_pow(f.degree())))
}

/// Sign relating the operadic differential to the Hochschild coboundary:
/// `d f = coboundary_sign(arity(f)) · δf`, exactly `(-1)^{arity+1}`.
pub fn coboundary_sign(arity: usize) -> Rat {
    sign_pow(arity + 1)
}

/// The induced bimodule `φ*M` along an algebra morphism `φ : A -> A'`:
/// actions go through φ, module twists are unchanged.
pub fn pullback_module(phi: &AlgebraMorphism, m: &Bimodule) -> Bimodule {
    assert_eq!(&phi.target, m.base(), "module must live over the morphism target");
    let left = m.left().precompose_slot(0, &phi.matrix);
    let right = m.right().precompose_slot(1, &phi.matrix);
    Bimodule::validate(
        format!("pullback({})", m.label()),
        phi.source.clone(),
        left,
        right,
        m.alpha_m().clone(),
        m.beta_m().clone(),
    )
    .expect("a morphism induces a bimodule structure")
}

/// `φ* f = f ∘ φ^{⊗n}`, landing in `C^n(A, φ*M)`.
pub fn pullback(phi: &AlgebraMorphism, f: &Cochain) -> (Arc<Bimodule>, Cochain) {
    assert_eq!(f.algebra(), &phi.target);
    let module = match f.coeffs() {
        Coefficients::Module(m) => m.clone(),
        Coefficients::SelfCoeffs => Arc::new(Bimodule::adjoint(phi.target.clone())),
    };
    let pulled_module = Arc::new(pullback_module(phi, &module));
    let mut t = f.tensor().clone();
    for s in 0..f.arity() {
        t = t.precompose_slot(s, &phi.matrix);
    }
    let c = Cochain::unchecked(
        phi.source.clone(),
        Coefficients::Module(pulled_module.clone()),
        t,
    );
    (pulled_module, c)
}

/// `ψ_* f = ψ ∘ f` for a bimodule morphism `ψ : M -> N`.
pub fn pushforward(
    psi: &Matrix,
    from: &Arc<Bimodule>,
    to: &Arc<Bimodule>,
    f: &Cochain,
) -> Result<Cochain, ModuleMorphismViolation> {
    validate_module_morphism(from, to, psi)?;
    match f.coeffs() {
        Coefficients::Module(m) if m == from => {}
        _ => panic!("cochain does not take values in the source module"),
    }
    let t = f.tensor().postcompose(psi);
    Ok(Cochain::unchecked(
        f.algebra().clone(),
        Coefficients::Module(to.clone()),
        t,
    ))
}
