//! Abelian extensions `0 -> M -> E -> A -> 0` of a bihom algebra by a
//! bimodule, with a twist-compatible splitting; classified by `H^2(A, M)`.
//!
//! Extensions are kept in block coordinates `M ⊕ A` (module first) with the
//! canonical inclusion and projection. A 2-cocycle `f` produces the total
//! multiplication `μ_E((m,a),(n,b)) = (m·b + a·n + f(a,b), μ(a,b))`; `f = 0`
//! recovers the semidirect product exactly. Conversely the fiber component
//! of `μ_E(s(a), s(b)) - s(μ(a,b))` extracts the cocycle of an extension,
//! and the maps `(m,a) ↦ (m + g(a), a)` realize cohomologous cocycles as
//! equivalent extensions.

use crate::algebra::{BihomAlgebra, TwistKind};
use crate::bimodule::{block_diag, Bimodule};
use crate::cochain::{Cochain, Coefficients};
use crate::cohomology::{coboundary, is_cocycle};
use crate::matrix::{solve_sparse, Matrix};
use crate::scalar::{one, zero, Rat};
use crate::tensor::Tensor;
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ExtensionError {
    #[error("the given 2-cochain is not a cocycle")]
    NotACocycle,
    #[error("cochain must be a 2-cochain valued in the given bimodule")]
    WrongCochain,
    #[error("splitting is incompatible: {0}")]
    SplittingIncompatible(String),
}

/// A violated extension invariant.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExtensionViolation {
    #[error("proj ∘ incl is not zero")]
    ComposeNotZero,
    #[error("inclusion is not injective")]
    InclusionNotInjective,
    #[error("projection is not surjective")]
    ProjectionNotSurjective,
    #[error("proj ∘ splitting is not the identity")]
    SplittingNotSection,
    #[error("splitting does not intertwine {0} (s-property)")]
    SplittingTwist(TwistKind),
    #[error("inclusion does not intertwine {0}")]
    InclusionTwist(TwistKind),
    #[error("projection does not intertwine {0}")]
    ProjectionTwist(TwistKind),
    #[error("projection is not an algebra map at basis pair ({}, {})", .0.0, .0.1)]
    ProjectionNotMultiplicative((usize, usize)),
    #[error("fiber product is nonzero at basis pair ({}, {})", .0.0, .0.1)]
    FiberProductNonzero((usize, usize)),
    #[error("induced left action differs from the prescribed one at ({}, {})", .0.0, .0.1)]
    InducedLeftActionMismatch((usize, usize)),
    #[error("induced right action differs from the prescribed one at ({}, {})", .0.0, .0.1)]
    InducedRightActionMismatch((usize, usize)),
}

/// An abelian extension in block coordinates, module coordinates first.
#[derive(Clone, Debug)]
pub struct AbelianExtension {
    total: Arc<BihomAlgebra>,
    base: Arc<BihomAlgebra>,
    module: Arc<Bimodule>,
    incl: Matrix,
    proj: Matrix,
    splitting: Matrix,
}

impl AbelianExtension {
    /// Assembles an extension from raw parts without validating; run
    /// [`validate_extension`] on the result.
    pub fn from_parts(
        total: Arc<BihomAlgebra>,
        base: Arc<BihomAlgebra>,
        module: Arc<Bimodule>,
        incl: Matrix,
        proj: Matrix,
        splitting: Matrix,
    ) -> Self {
        AbelianExtension {
            total,
            base,
            module,
            incl,
            proj,
            splitting,
        }
    }

    pub fn total(&self) -> &Arc<BihomAlgebra> {
        &self.total
    }

    pub fn base(&self) -> &Arc<BihomAlgebra> {
        &self.base
    }

    pub fn module(&self) -> &Arc<Bimodule> {
        &self.module
    }

    pub fn incl(&self) -> &Matrix {
        &self.incl
    }

    pub fn proj(&self) -> &Matrix {
        &self.proj
    }

    pub fn splitting(&self) -> &Matrix {
        &self.splitting
    }

    /// Replaces the splitting (used to probe s-independence).
    pub fn with_splitting(&self, splitting: Matrix) -> Self {
        let mut e = self.clone();
        e.splitting = splitting;
        e
    }
}

fn canonical_maps(e: usize, d: usize) -> (Matrix, Matrix, Matrix) {
    let incl = Matrix::from_fn(e + d, e, |i, j| if i == j { one() } else { zero() });
    let proj = Matrix::from_fn(d, e + d, |i, j| if j == e + i { one() } else { zero() });
    let split = Matrix::from_fn(e + d, d, |i, j| if i == e + j { one() } else { zero() });
    (incl, proj, split)
}

/// Builds the extension of `A` by `M` attached to a 2-cocycle `f`.
pub fn extension_from_cocycle(
    module: &Arc<Bimodule>,
    f: &Cochain,
) -> Result<AbelianExtension, ExtensionError> {
    let base = module.base().clone();
    match f.coeffs() {
        Coefficients::Module(m) if m == module => {}
        _ => return Err(ExtensionError::WrongCochain),
    }
    if f.arity() != 2 {
        return Err(ExtensionError::WrongCochain);
    }
    if !is_cocycle(f) {
        return Err(ExtensionError::NotACocycle);
    }
    let d = base.dim();
    let e = module.dim();
    let total_dim = e + d;
    let mut mu = Tensor::zeros(vec![total_dim, total_dim, total_dim]);
    for p in 0..e {
        for j in 0..d {
            for q in 0..e {
                let v = module.right().get(&[p, j, q]);
                if !v.is_zero() {
                    mu.set(&[p, e + j, q], v.clone());
                }
            }
        }
    }
    for i in 0..d {
        for p in 0..e {
            for q in 0..e {
                let v = module.left().get(&[i, p, q]);
                if !v.is_zero() {
                    mu.set(&[e + i, p, q], v.clone());
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for q in 0..e {
                let v = f.tensor().get(&[i, j, q]);
                if !v.is_zero() {
                    mu.set(&[e + i, e + j, q], v.clone());
                }
            }
            for k in 0..d {
                let v = base.mu().get(&[i, j, k]);
                if !v.is_zero() {
                    mu.set(&[e + i, e + j, e + k], v.clone());
                }
            }
        }
    }
    let alpha = block_diag(module.alpha_m(), base.alpha());
    let beta = block_diag(module.beta_m(), base.beta());
    let label = format!("extension({},{})", base.label(), module.label());
    let total = Arc::new(
        BihomAlgebra::validate(label, mu, alpha, beta)
            .expect("the total space of a 2-cocycle extension is bihom-associative"),
    );
    let (incl, proj, splitting) = canonical_maps(e, d);
    Ok(AbelianExtension {
        total,
        base,
        module: module.clone(),
        incl,
        proj,
        splitting,
    })
}

/// Extracts the 2-cocycle of an extension with respect to its splitting:
/// `f(a, b) = fiber component of μ_E(s(a), s(b)) - s(μ(a,b))`.
pub fn cocycle_from_extension(ext: &AbelianExtension) -> Result<Cochain, ExtensionError> {
    let d = ext.base.dim();
    let e = ext.module.dim();
    let mut t = Tensor::zeros(vec![d, d, e]);
    for i in 0..d {
        let si = ext.splitting.col(i);
        for j in 0..d {
            let sj = ext.splitting.col(j);
            let prod = ext.total.multiply(&si, &sj);
            let s_mu = ext.splitting.apply(&ext.base.multiply_basis(i, j));
            let diff: Vec<Rat> = prod.iter().zip(&s_mu).map(|(a, b)| a - b).collect();
            // the difference must lie in the fiber block
            for (q, v) in diff.iter().enumerate().skip(e) {
                if !v.is_zero() {
                    return Err(ExtensionError::SplittingIncompatible(format!(
                        "algebra component {q} nonzero at basis pair ({i}, {j})"
                    )));
                }
            }
            for (q, v) in diff.iter().enumerate().take(e) {
                if !v.is_zero() {
                    t.set(&[i, j, q], v.clone());
                }
            }
        }
    }
    let f = Cochain::new(
        ext.base.clone(),
        Coefficients::Module(ext.module.clone()),
        t,
    )
    .map_err(|e| ExtensionError::SplittingIncompatible(e.to_string()))?;
    Ok(f)
}

/// The equivalence `(m, a) ↦ (m + g(a), a)` attached to a twist-compatible
/// 1-cochain `g`: returns the equivalent extension whose cocycle is
/// `f - δg`, together with the morphism matrix.
pub fn equivalence_from_1cochain(
    ext: &AbelianExtension,
    g: &Cochain,
) -> Result<(AbelianExtension, Matrix), ExtensionError> {
    if g.arity() != 1 {
        return Err(ExtensionError::WrongCochain);
    }
    match g.coeffs() {
        Coefficients::Module(m) if m == &ext.module => {}
        _ => return Err(ExtensionError::WrongCochain),
    }
    let f = cocycle_from_extension(ext)?;
    let f_prime = f.sub(&coboundary(g));
    let new_ext = extension_from_cocycle(&ext.module, &f_prime)?;
    let d = ext.base.dim();
    let e = ext.module.dim();
    // phi = [[I, G], [0, I]] with G the matrix of g
    let phi = Matrix::from_fn(e + d, e + d, |r, c| {
        if r == c {
            one()
        } else if r < e && c >= e {
            g.tensor().get(&[c - e, r]).clone()
        } else {
            zero()
        }
    });
    Ok((new_ext, phi))
}

/// Checks every invariant of an abelian extension, reporting all failures.
pub fn validate_extension(ext: &AbelianExtension) -> Result<(), Vec<ExtensionViolation>> {
    let mut out = Vec::new();
    let d = ext.base.dim();
    let e = ext.module.dim();

    if !ext.proj.mul(&ext.incl).is_zero() {
        out.push(ExtensionViolation::ComposeNotZero);
    }
    if ext.incl.rank() != e {
        out.push(ExtensionViolation::InclusionNotInjective);
    }
    if ext.proj.rank() != d {
        out.push(ExtensionViolation::ProjectionNotSurjective);
    }
    if !ext.proj.mul(&ext.splitting).is_identity() {
        out.push(ExtensionViolation::SplittingNotSection);
    }
    let twists = [
        (TwistKind::Alpha, ext.total.alpha(), ext.base.alpha(), ext.module.alpha_m()),
        (TwistKind::Beta, ext.total.beta(), ext.base.beta(), ext.module.beta_m()),
    ];
    for (kind, big, small, fiber) in twists {
        if big.mul(&ext.splitting) != ext.splitting.mul(small) {
            out.push(ExtensionViolation::SplittingTwist(kind));
        }
        if big.mul(&ext.incl) != ext.incl.mul(fiber) {
            out.push(ExtensionViolation::InclusionTwist(kind));
        }
        if ext.proj.mul(big) != small.mul(&ext.proj) {
            out.push(ExtensionViolation::ProjectionTwist(kind));
        }
    }
    // projection is an algebra map
    'proj: for x in 0..e + d {
        let jx = ext.proj.col(x);
        for y in 0..e + d {
            let lhs = ext.proj.apply(&ext.total.multiply_basis(x, y));
            let rhs = ext.base.multiply(&jx, &ext.proj.col(y));
            if lhs != rhs {
                out.push(ExtensionViolation::ProjectionNotMultiplicative((x, y)));
                break 'proj;
            }
        }
    }
    // the fiber has trivial multiplication
    'fiber: for p in 0..e {
        let ip = ext.incl.col(p);
        for q in 0..e {
            let prod = ext.total.multiply(&ip, &ext.incl.col(q));
            if !prod.iter().all(Zero::is_zero) {
                out.push(ExtensionViolation::FiberProductNonzero((p, q)));
                break 'fiber;
            }
        }
    }
    // induced actions agree with the prescribed bimodule
    let (left, right) = induced_actions(ext);
    if &left != ext.module.left() {
        let diff = left.sub(ext.module.left());
        let w = diff.first_nonzero().unwrap();
        out.push(ExtensionViolation::InducedLeftActionMismatch((w[0], w[1])));
    }
    if &right != ext.module.right() {
        let diff = right.sub(ext.module.right());
        let w = diff.first_nonzero().unwrap();
        out.push(ExtensionViolation::InducedRightActionMismatch((w[0], w[1])));
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// The actions induced by an extension: `a·m = μ_E(s(a), i(m))` and
/// `m·a = μ_E(i(m), s(a))`, read in the fiber block.
pub fn induced_actions(ext: &AbelianExtension) -> (Tensor, Tensor) {
    let d = ext.base.dim();
    let e = ext.module.dim();
    let mut left = Tensor::zeros(vec![d, e, e]);
    let mut right = Tensor::zeros(vec![e, d, e]);
    for i in 0..d {
        let si = ext.splitting.col(i);
        for p in 0..e {
            let ip = ext.incl.col(p);
            let l = ext.total.multiply(&si, &ip);
            let r = ext.total.multiply(&ip, &si);
            for q in 0..e {
                if !l[q].is_zero() {
                    left.set(&[i, p, q], l[q].clone());
                }
                if !r[q].is_zero() {
                    right.set(&[p, i, q], r[q].clone());
                }
            }
        }
    }
    (left, right)
}

/// Searches for a splitting `s` of `j` with `α_E ∘ s = s ∘ α` and
/// `β_E ∘ s = s ∘ β` by exact linear solving; `None` when the system is
/// infeasible (the possibility the theory warns about).
pub fn find_compatible_splitting(
    j: &Matrix,
    alpha_e: &Matrix,
    beta_e: &Matrix,
    alpha_a: &Matrix,
    beta_a: &Matrix,
) -> Option<Matrix> {
    let te = alpha_e.rows();
    let da = alpha_a.rows();
    assert_eq!((j.rows(), j.cols()), (da, te));
    let var = |r: usize, c: usize| r * da + c;
    let nvars = te * da;
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    // j s = id
    for p in 0..da {
        for q in 0..da {
            let mut row = Vec::new();
            for r in 0..te {
                let c = j.get(p, r);
                if !c.is_zero() {
                    row.push((var(r, q), c.clone()));
                }
            }
            row.sort_by_key(|(c, _)| *c);
            rows.push(row);
            rhs.push(if p == q { one() } else { zero() });
        }
    }
    // t_e s - s t_a = 0 for both twists
    for (te_m, ta_m) in [(alpha_e, alpha_a), (beta_e, beta_a)] {
        for r in 0..te {
            for q in 0..da {
                let mut row: Vec<(usize, Rat)> = Vec::new();
                for t in 0..te {
                    let c = te_m.get(r, t);
                    if !c.is_zero() {
                        row.push((var(t, q), c.clone()));
                    }
                }
                for t in 0..da {
                    let c = ta_m.get(t, q);
                    if !c.is_zero() {
                        row.push((var(r, t), -c.clone()));
                    }
                }
                row.sort_by_key(|(c, _)| *c);
                let mut merged: Vec<(usize, Rat)> = Vec::new();
                for (c, v) in row {
                    match merged.last_mut() {
                        Some((mc, mv)) if *mc == c => *mv = &*mv + &v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|(_, v)| !v.is_zero());
                rows.push(merged);
                rhs.push(zero());
            }
        }
    }
    let sol = solve_sparse(rows, nvars, &[rhs]).pop().unwrap()?;
    Some(Matrix::from_fn(te, da, |r, c| sol[var(r, c)].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::semidirect_product;
    use crate::budget::Budget;
    use crate::cochain::cochain_space_basis;
    use crate::cohomology::Complex;
    use crate::corpus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn adjoint_two_cocycles(alg: &Arc<BihomAlgebra>) -> (Arc<Bimodule>, Vec<Cochain>) {
        let adj = corpus::adjoint(alg);
        let cx = Complex::new(alg.clone(), Coefficients::Module(adj.clone()));
        let zs = cx.cocycle_basis(2).unwrap();
        (adj, zs)
    }

    #[test]
    fn zero_cocycle_gives_the_semidirect_product() {
        let t4 = corpus::t4();
        let adj = corpus::adjoint(&t4);
        let zero = Cochain::zero(t4.clone(), Coefficients::Module(adj.clone()), 2);
        let ext = extension_from_cocycle(&adj, &zero).unwrap();
        let semi = semidirect_product(&adj);
        assert_eq!(ext.total().mu(), semi.mu());
        assert_eq!(cocycle_from_extension(&ext).unwrap(), zero);
        assert!(validate_extension(&ext).is_ok());
    }

    #[test]
    fn field_extensions_from_basis_cocycles_are_valid() {
        let q = corpus::rational_line();
        let (adj, zs) = adjoint_two_cocycles(&q);
        assert!(!zs.is_empty());
        for z in zs {
            let ext = extension_from_cocycle(&adj, &z).unwrap();
            assert_eq!(ext.total().dim(), 2);
            assert!(validate_extension(&ext).is_ok());
        }
    }

    #[test]
    fn cocycle_roundtrip_is_identity() {
        let t4 = corpus::t4();
        let (adj, zs) = adjoint_two_cocycles(&t4);
        for z in &zs {
            let ext = extension_from_cocycle(&adj, z).unwrap();
            assert_eq!(&cocycle_from_extension(&ext).unwrap(), z);
        }
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let t4 = corpus::t4();
        let adj = corpus::adjoint(&t4);
        let coeffs = Coefficients::Module(adj.clone());
        let basis = cochain_space_basis(&t4, &coeffs, 2, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2000);
        loop {
            let f = basis.random(&mut rng);
            if is_cocycle(&f) {
                continue;
            }
            assert!(matches!(
                extension_from_cocycle(&adj, &f),
                Err(ExtensionError::NotACocycle)
            ));
            break;
        }
    }

    #[test]
    fn induced_actions_recover_the_prescribed_module() {
        let t4 = corpus::t4();
        let (adj, zs) = adjoint_two_cocycles(&t4);
        for z in &zs {
            let ext = extension_from_cocycle(&adj, z).unwrap();
            let (left, right) = induced_actions(&ext);
            assert_eq!(&left, adj.left());
            assert_eq!(&right, adj.right());
        }
    }

    #[test]
    fn induced_actions_are_independent_of_the_splitting() {
        let t4 = corpus::t4();
        let (adj, zs) = adjoint_two_cocycles(&t4);
        let coeffs = Coefficients::Module(adj.clone());
        let basis = cochain_space_basis(&t4, &coeffs, 1, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2100);
        let g = basis.random(&mut rng);
        for z in zs.iter().take(2) {
            let ext = extension_from_cocycle(&adj, z).unwrap();
            // s' = s + i∘g
            let shift = ext.incl().mul(&Matrix::from_fn(adj.dim(), t4.dim(), |r, c| {
                g.tensor().get(&[c, r]).clone()
            }));
            let s_prime = Matrix::from_fn(ext.total().dim(), t4.dim(), |r, c| {
                ext.splitting().get(r, c) + shift.get(r, c)
            });
            let moved = ext.with_splitting(s_prime);
            let (l1, r1) = induced_actions(&ext);
            let (l2, r2) = induced_actions(&moved);
            assert_eq!(l1, l2);
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn equivalence_shifts_the_cocycle_by_minus_delta_g() {
        let t4 = corpus::t4();
        let (adj, zs) = adjoint_two_cocycles(&t4);
        let coeffs = Coefficients::Module(adj.clone());
        let basis = cochain_space_basis(&t4, &coeffs, 1, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2200);
        for z in zs.iter().take(3) {
            let g = basis.random(&mut rng);
            let ext = extension_from_cocycle(&adj, z).unwrap();
            let (ext2, phi) = equivalence_from_1cochain(&ext, &g).unwrap();
            let f2 = cocycle_from_extension(&ext2).unwrap();
            assert_eq!(f2, z.sub(&coboundary(&g)));
            // phi is an isomorphism of bihom algebras commuting with i and j
            assert!(phi.inverse().is_some());
            assert!(crate::algebra::AlgebraMorphism::validate(
                ext.total().clone(),
                ext2.total().clone(),
                phi.clone()
            )
            .is_ok());
            assert_eq!(phi.mul(ext.incl()), ext2.incl().clone());
            assert_eq!(ext2.proj().mul(&phi), ext.proj().clone());
            // g = 0 gives the identity morphism on the same extension
            let zero_g = Cochain::zero(t4.clone(), coeffs.clone(), 1);
            let (same, id_phi) = equivalence_from_1cochain(&ext, &zero_g).unwrap();
            assert_eq!(same.total().mu(), ext.total().mu());
            assert!(id_phi.is_identity());
        }
    }

    #[test]
    fn remark_pair_has_no_compatible_splitting() {
        let pair = corpus::remark_pair();
        assert!(find_compatible_splitting(
            &pair.j,
            &pair.e_alpha,
            &pair.e_beta,
            &pair.a_alpha,
            &pair.a_beta
        )
        .is_none());
    }

    #[test]
    fn compatible_splitting_is_found_when_one_exists() {
        let t4 = corpus::t4();
        let (adj, zs) = adjoint_two_cocycles(&t4);
        let ext = extension_from_cocycle(&adj, &zs[0]).unwrap();
        let s = find_compatible_splitting(
            ext.proj(),
            ext.total().alpha(),
            ext.total().beta(),
            t4.alpha(),
            t4.beta(),
        )
        .expect("canonical splitting satisfies the system");
        assert!(ext.proj().mul(&s).is_identity());
        assert_eq!(ext.total().alpha().mul(&s), s.mul(t4.alpha()));
        assert_eq!(ext.total().beta().mul(&s), s.mul(t4.beta()));
    }

    #[test]
    fn broken_splitting_is_reported() {
        let t4 = corpus::t4();
        let (adj, zs) = adjoint_two_cocycles(&t4);
        let ext = extension_from_cocycle(&adj, &zs[0]).unwrap();
        // a section that ignores the twists: add a module component to s(e_1)
        let mut bad = ext.splitting().clone();
        bad.set(0, 1, one());
        let moved = ext.with_splitting(bad);
        let violations = validate_extension(&moved).unwrap_err();
        assert!(violations
            .iter()
            .any(|v| matches!(v, ExtensionViolation::SplittingTwist(_))));
    }

    #[test]
    fn nonzero_fiber_product_is_reported() {
        let t4 = corpus::t4();
        let adj = corpus::adjoint(&t4);
        // the semidirect product of the adjoint module of the field, with a
        // fiber product bolted on, is not an abelian extension
        let q = corpus::rational_line();
        let qadj = corpus::adjoint(&q);
        let zero = Cochain::zero(q.clone(), Coefficients::Module(qadj.clone()), 2);
        let ext = extension_from_cocycle(&qadj, &zero).unwrap();
        let mut mu = ext.total().mu().clone();
        mu.set(&[0, 0, 0], one());
        // fiber-fiber block now nonzero; revalidate from raw parts
        if let Ok(total) = BihomAlgebra::validate(
            "broken",
            mu,
            ext.total().alpha().clone(),
            ext.total().beta().clone(),
        ) {
            let broken = AbelianExtension {
                total: Arc::new(total),
                base: ext.base().clone(),
                module: ext.module().clone(),
                incl: ext.incl().clone(),
                proj: ext.proj().clone(),
                splitting: ext.splitting().clone(),
            };
            let violations = validate_extension(&broken).unwrap_err();
            assert!(violations
                .iter()
                .any(|v| matches!(v, ExtensionViolation::FiberProductNonzero(_))));
        }
        let _ = adj;
    }
}
