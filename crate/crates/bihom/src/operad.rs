//! The bi-twisted endomorphism operad on twist-compatible cochains.
//!
//! Partial compositions insert one cochain into a slot of another, with
//! powers of α in front of the inserted block and powers of β behind it:
//!
//! ```text
//! (f ∘_i g)(a_1, ..) = f(α^{n-1}a_1, .., α^{n-1}a_{i-1},
//!                        g(a_i, .., a_{i+n-1}),
//!                        β^{n-1}a_{i+n}, .., β^{n-1}a_{m+n-1})
//! ```
//!
//! The full composition has two implementations that are kept deliberately
//! separate and compared in tests: [`full_composition`] folds partial
//! compositions right to left, while [`full_composition_closed`] evaluates
//! the closed-form expression with explicit twist powers on each slot.
//! Braces carry the insertion signs `ε = Σ_p |g_p| · i_p`, where `i_p`
//! counts the composite inputs standing strictly before the p-th block.

use crate::algebra::BihomAlgebra;
use crate::cochain::{Cochain, Coefficients};
use crate::matrix::Matrix;
use crate::scalar::{sign_pow, Rat};
use crate::tensor::{compose_at, for_each_index, Tensor};
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OperadError {
    #[error("insertion position {pos} out of range 1..={max}")]
    PositionOutOfRange { pos: usize, max: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("brace with {got} arguments into a cochain of arity {arity}")]
    TooManyArguments { got: usize, arity: usize },
    #[error("operad compositions require self coefficients")]
    TargetMismatch,
    #[error("cochains live over different algebras")]
    AlgebraMismatch,
}

fn require_operadic(f: &Cochain) -> Result<(), OperadError> {
    match f.coeffs() {
        Coefficients::SelfCoeffs => Ok(()),
        Coefficients::Module(_) => Err(OperadError::TargetMismatch),
    }
}

fn require_same(f: &Cochain, g: &Cochain) -> Result<(), OperadError> {
    if f.algebra() != g.algebra() {
        return Err(OperadError::AlgebraMismatch);
    }
    Ok(())
}

/// Twists the slots of `f` for an insertion at 1-based position `pos` of an
/// `n`-ary cochain: slots before get `α^{n-1}`, slots after get `β^{n-1}`.
fn pre_twist_for_insertion(f: &Tensor, pos: usize, m: usize, alg: &BihomAlgebra, n: usize) -> Tensor {
    let apow = alg.alpha().pow(n - 1);
    let bpow = alg.beta().pow(n - 1);
    let mut t = f.clone();
    if !apow.is_identity() {
        for slot in 0..pos - 1 {
            t = t.precompose_slot(slot, &apow);
        }
    }
    if !bpow.is_identity() {
        for slot in pos..m {
            t = t.precompose_slot(slot, &bpow);
        }
    }
    t
}

/// `f ∘_i g` for `1 ≤ i ≤ arity(f)`.
pub fn partial_composition(f: &Cochain, pos: usize, g: &Cochain) -> Result<Cochain, OperadError> {
    require_operadic(f)?;
    require_operadic(g)?;
    require_same(f, g)?;
    let m = f.arity();
    if pos == 0 || pos > m {
        return Err(OperadError::PositionOutOfRange { pos, max: m });
    }
    let n = g.arity();
    let twisted = pre_twist_for_insertion(f.tensor(), pos, m, f.algebra(), n);
    let out = compose_at(&twisted, pos - 1, g.tensor());
    Ok(Cochain::unchecked(
        f.algebra().clone(),
        Coefficients::SelfCoeffs,
        out,
    ))
}

/// `γ(f; g_1, .., g_k)` as the right-nested partial-composition fold
/// `( ⋯ ((f ∘_k g_k) ∘_{k-1} g_{k-1}) ⋯ ) ∘_1 g_1`.
pub fn full_composition(f: &Cochain, gs: &[Cochain]) -> Result<Cochain, OperadError> {
    require_operadic(f)?;
    let k = f.arity();
    if gs.len() != k {
        return Err(OperadError::ArityMismatch {
            expected: k,
            got: gs.len(),
        });
    }
    let mut acc = f.clone();
    for pos in (1..=k).rev() {
        acc = partial_composition(&acc, pos, &gs[pos - 1])?;
    }
    Ok(acc)
}

/// `γ(f; g_1, .., g_k)` from the closed formula: slot `i` receives
/// `α^{Σ_{l>i}|g_l|} β^{Σ_{l<i}|g_l|} g_i( .. )`.
pub fn full_composition_closed(f: &Cochain, gs: &[Cochain]) -> Result<Cochain, OperadError> {
    require_operadic(f)?;
    let k = f.arity();
    if gs.len() != k {
        return Err(OperadError::ArityMismatch {
            expected: k,
            got: gs.len(),
        });
    }
    for g in gs {
        require_operadic(g)?;
        require_same(f, g)?;
    }
    let alg = f.algebra();
    let d = alg.dim();
    let degrees: Vec<usize> = gs.iter().map(Cochain::degree).collect();
    let total: usize = degrees.iter().sum();
    let mut prefix = 0usize; // Σ_{l<i} |g_l|
    let twisted: Vec<Tensor> = gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let suffix = total - prefix - degrees[i];
            let twist: Matrix = alg.alpha().pow(suffix).mul(&alg.beta().pow(prefix));
            prefix += degrees[i];
            if twist.is_identity() {
                g.tensor().clone()
            } else {
                g.tensor().postcompose(&twist)
            }
        })
        .collect();

    let arities: Vec<usize> = gs.iter().map(Cochain::arity).collect();
    let out_arity: usize = arities.iter().sum();
    let mut dims = vec![d; out_arity];
    dims.push(d);
    let mut out = Tensor::zeros(dims);
    let block_dims: Vec<usize> = arities.iter().map(|&n| d.pow(n as u32)).collect();
    for_each_index(&block_dims, |blocks| {
        // evaluate each twisted g on its block of basis indices
        let args: Vec<Vec<Rat>> = blocks
            .iter()
            .zip(&twisted)
            .zip(&arities)
            .map(|((&b, t), &n)| {
                let mut idx = vec![0usize; n];
                let mut rem = b;
                for slot in (0..n).rev() {
                    idx[slot] = rem % d;
                    rem /= d;
                }
                t.eval_basis(&idx)
            })
            .collect();
        let refs: Vec<&[Rat]> = args.iter().map(Vec::as_slice).collect();
        let value = f.tensor().eval(&refs);
        // flat output offset: concatenated blocks, then output coordinate
        let mut off = 0usize;
        for (&b, &n) in blocks.iter().zip(&arities) {
            off = off * d.pow(n as u32) + b;
        }
        let off = off * d;
        for (kk, v) in value.into_iter().enumerate() {
            if !v.is_zero() {
                out.flat_mut()[off + kk] = v;
            }
        }
    });
    Ok(Cochain::unchecked(
        alg.clone(),
        Coefficients::SelfCoeffs,
        out,
    ))
}

/// `{f}{g_1, .., g_p}`: the signed sum over all order-preserving insertions.
/// `{f}{}` is `f` itself.
pub fn brace(f: &Cochain, gs: &[Cochain]) -> Result<Cochain, OperadError> {
    require_operadic(f)?;
    let m = f.arity();
    let p = gs.len();
    if p > m {
        return Err(OperadError::TooManyArguments { got: p, arity: m });
    }
    if p == 0 {
        return Ok(f.clone());
    }
    for g in gs {
        require_operadic(g)?;
        require_same(f, g)?;
    }
    let alg = f.algebra().clone();
    let id = Cochain::identity(alg.clone());
    let out_arity = m - p + gs.iter().map(Cochain::arity).sum::<usize>();
    let mut acc = Cochain::zero(alg, Coefficients::SelfCoeffs, out_arity);

    // iterate over 1 <= pos_1 < .. < pos_p <= m
    let mut positions: Vec<usize> = (1..=p).collect();
    loop {
        // ε = Σ_j |g_j| · i_j, i_j = inputs of the composite strictly before
        // the j-th inserted block
        let mut eps = 0usize;
        let mut consumed_degree = 0usize;
        for (j, &pos) in positions.iter().enumerate() {
            let inputs_before = pos - 1 + consumed_degree;
            eps += gs[j].degree() * inputs_before;
            consumed_degree += gs[j].degree();
        }
        let mut args: Vec<Cochain> = vec![id.clone(); m];
        for (j, &pos) in positions.iter().enumerate() {
            args[pos - 1] = gs[j].clone();
        }
        let term = full_composition(f, &args)?;
        acc = if eps.is_multiple_of(2) {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };

        // next combination
        let mut j = p;
        loop {
            if j == 0 {
                return Ok(acc);
            }
            j -= 1;
            if positions[j] < m - (p - 1 - j) {
                positions[j] += 1;
                for t in j + 1..p {
                    positions[t] = positions[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The circle product `f ∘ g = Σ_i (-1)^{(n-1)(i-1)} f ∘_i g`.
pub fn circle_product(f: &Cochain, g: &Cochain) -> Result<Cochain, OperadError> {
    require_operadic(f)?;
    require_operadic(g)?;
    require_same(f, g)?;
    let m = f.arity();
    let n = g.arity();
    let mut acc = Cochain::zero(
        f.algebra().clone(),
        Coefficients::SelfCoeffs,
        m + n - 1,
    );
    for i in 1..=m {
        let term = partial_composition(f, i, g)?;
        if ((n - 1) * (i - 1)).is_multiple_of(2) {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    Ok(acc)
}

/// `[f, g] = f ∘ g - (-1)^{|f||g|} g ∘ f`, a degree -1 graded Lie bracket.
pub fn gerstenhaber_bracket(f: &Cochain, g: &Cochain) -> Result<Cochain, OperadError> {
    let fg = circle_product(f, g)?;
    let gf = circle_product(g, f)?;
    let sign = sign_pow(f.degree() * g.degree());
    Ok(fg.sub(&gf.scale(&sign)))
}

/// True when μ is a multiplication on the operad, i.e. `μ ∘ μ = 0`.
/// Equivalent to the bihom-associativity of the algebra.
pub fn is_multiplication(alg: &Arc<BihomAlgebra>) -> bool {
    let mu = Cochain::from_mu(alg.clone());
    circle_product(&mu, &mu)
        .expect("mu is a self cochain")
        .is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::cochain::cochain_space_basis;
    use crate::corpus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_cochains(
        alg: &Arc<BihomAlgebra>,
        arities: &[usize],
        seed: u64,
    ) -> Vec<Cochain> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        arities
            .iter()
            .map(|&n| {
                let b = cochain_space_basis(alg, &Coefficients::SelfCoeffs, n, Budget::default())
                    .unwrap();
                b.random(&mut rng)
            })
            .collect()
    }

    #[test]
    fn identity_is_a_unit_for_partial_composition() {
        for alg in [corpus::t4(), corpus::dual_numbers_twist()] {
            let id = Cochain::identity(alg.clone());
            let mu = Cochain::from_mu(alg.clone());
            for i in 1..=2 {
                assert_eq!(partial_composition(&mu, i, &id).unwrap(), mu);
            }
            assert_eq!(partial_composition(&id, 1, &mu).unwrap(), mu);
        }
    }

    #[test]
    fn partial_composition_restates_bihom_associativity() {
        for alg in corpus::standard_algebras() {
            let mu = Cochain::from_mu(alg.clone());
            let left = partial_composition(&mu, 1, &mu).unwrap();
            let right = partial_composition(&mu, 2, &mu).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn position_out_of_range() {
        let t4 = corpus::t4();
        let mu = Cochain::from_mu(t4);
        assert!(matches!(
            partial_composition(&mu, 3, &mu),
            Err(OperadError::PositionOutOfRange { pos: 3, max: 2 })
        ));
        assert!(matches!(
            partial_composition(&mu, 0, &mu),
            Err(OperadError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn operad_axioms_on_seeded_triples() {
        for (alg, seed) in [(corpus::t4(), 11), (corpus::dual_numbers_twist(), 12)] {
            for round in 0..6u64 {
                let cs = random_cochains(&alg, &[2, 2, 2], seed * 100 + round);
                let (f, g, h) = (&cs[0], &cs[1], &cs[2]);
                let (m, n) = (f.arity(), g.arity());
                // axiom 1: (f ∘_i g) ∘_{i+j-1} h = f ∘_i (g ∘_j h)
                for i in 1..=m {
                    for j in 1..=n {
                        let lhs = partial_composition(
                            &partial_composition(f, i, g).unwrap(),
                            i + j - 1,
                            h,
                        )
                        .unwrap();
                        let rhs =
                            partial_composition(f, i, &partial_composition(g, j, h).unwrap())
                                .unwrap();
                        assert_eq!(lhs, rhs, "axiom 1 at i={i} j={j}");
                    }
                }
                // axiom 2: (f ∘_i g) ∘_{j+n-1} h = (f ∘_j h) ∘_i g for i < j
                for i in 1..=m {
                    for j in i + 1..=m {
                        let lhs = partial_composition(
                            &partial_composition(f, i, g).unwrap(),
                            j + n - 1,
                            h,
                        )
                        .unwrap();
                        let rhs = partial_composition(
                            &partial_composition(f, j, h).unwrap(),
                            i,
                            g,
                        )
                        .unwrap();
                        assert_eq!(lhs, rhs, "axiom 2 at i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn full_composition_units() {
        let t4 = corpus::t4();
        let id = Cochain::identity(t4.clone());
        let mu = Cochain::from_mu(t4.clone());
        assert_eq!(
            full_composition(&mu, &[id.clone(), id.clone()]).unwrap(),
            mu
        );
        assert_eq!(full_composition(&id, std::slice::from_ref(&mu)).unwrap(), mu);
        assert_eq!(
            full_composition_closed(&mu, &[id.clone(), id.clone()]).unwrap(),
            mu
        );
        assert_eq!(full_composition_closed(&id, std::slice::from_ref(&mu)).unwrap(), mu);
    }

    #[test]
    fn gamma_of_mu_with_mu_and_id_restates_associativity() {
        for alg in corpus::standard_algebras() {
            let id = Cochain::identity(alg.clone());
            let mu = Cochain::from_mu(alg.clone());
            let left = full_composition(&mu, &[mu.clone(), id.clone()]).unwrap();
            let right = full_composition(&mu, &[id.clone(), mu.clone()]).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn closed_form_composition_matches_nested() {
        for (alg, seed) in [(corpus::dual_numbers_twist(), 21), (corpus::t4(), 22)] {
            for round in 0..5u64 {
                let cs = random_cochains(&alg, &[2, 2, 1], seed * 10 + round);
                let (f, g1, g2) = (&cs[0], &cs[1], &cs[2]);
                let nested = full_composition(f, &[g1.clone(), g2.clone()]).unwrap();
                let closed = full_composition_closed(f, &[g1.clone(), g2.clone()]).unwrap();
                assert_eq!(nested, closed);
                let nested = full_composition(f, &[g2.clone(), g1.clone()]).unwrap();
                let closed = full_composition_closed(f, &[g2.clone(), g1.clone()]).unwrap();
                assert_eq!(nested, closed);
            }
        }
    }

    #[test]
    fn empty_brace_is_identity() {
        let t4 = corpus::t4();
        let mu = Cochain::from_mu(t4);
        assert_eq!(brace(&mu, &[]).unwrap(), mu);
    }

    #[test]
    fn single_brace_equals_circle_product() {
        for (alg, seed) in [(corpus::t4(), 31), (corpus::dual_numbers_twist(), 32)] {
            for round in 0..6u64 {
                let cs = random_cochains(&alg, &[2, 2], seed * 10 + round);
                let braced = brace(&cs[0], &cs[1..2]).unwrap();
                let circ = circle_product(&cs[0], &cs[1]).unwrap();
                assert_eq!(braced, circ);
            }
        }
    }

    #[test]
    fn too_many_brace_arguments() {
        let t4 = corpus::t4();
        let mu = Cochain::from_mu(t4.clone());
        let id = Cochain::identity(t4);
        assert!(matches!(
            brace(&mu, &[id.clone(), id.clone(), id.clone()]),
            Err(OperadError::TooManyArguments { got: 3, arity: 2 })
        ));
    }

    #[test]
    fn mu_is_a_multiplication_exactly_for_valid_algebras() {
        for alg in corpus::standard_algebras() {
            assert!(is_multiplication(&alg));
        }
        // and the multiplication test agrees with the associativity scan on
        // the perturbed fixture
        let (mu, alpha, beta) = corpus::t4_perturbed_data();
        let scan_fails =
            crate::algebra::BihomAlgebra::validate("p", mu.clone(), alpha.clone(), beta.clone())
                .is_err();
        let bad = Arc::new(crate::algebra::BihomAlgebra::from_parts_unchecked(
            "p", mu, alpha, beta,
        ));
        assert!(scan_fails);
        assert!(!is_multiplication(&bad));
    }

    #[test]
    fn id_circle_id_is_id_on_the_field() {
        let q = corpus::rational_line();
        let id = Cochain::identity(q);
        assert_eq!(circle_product(&id, &id).unwrap(), id);
    }

    #[test]
    fn pre_lie_identity_on_seeded_cochains() {
        for (alg, seed) in [(corpus::t4(), 41), (corpus::dual_numbers_twist(), 42)] {
            for round in 0..4u64 {
                let cs = random_cochains(&alg, &[2, 2, 3], seed * 10 + round);
                let (f, g, h) = (&cs[0], &cs[1], &cs[2]);
                let lhs = circle_product(&circle_product(f, g).unwrap(), h)
                    .unwrap()
                    .sub(&circle_product(f, &circle_product(g, h).unwrap()).unwrap());
                let rhs = circle_product(&circle_product(f, h).unwrap(), g)
                    .unwrap()
                    .sub(&circle_product(f, &circle_product(h, g).unwrap()).unwrap())
                    .scale(&sign_pow(g.degree() * h.degree()));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn bracket_is_graded_antisymmetric_and_jacobi_holds() {
        let alg = corpus::dual_numbers_twist();
        for round in 0..4u64 {
            let cs = random_cochains(&alg, &[2, 3, 2], 51 + round);
            let (f, g, h) = (&cs[0], &cs[1], &cs[2]);
            // [f, g] = -(-1)^{|f||g|}[g, f]
            let fg = gerstenhaber_bracket(f, g).unwrap();
            let gf = gerstenhaber_bracket(g, f).unwrap();
            assert_eq!(fg, gf.scale(&-sign_pow(f.degree() * g.degree())));
            // graded Jacobi: (-1)^{|f||h|}[[f,g],h] + cyclic = 0
            let t1 = gerstenhaber_bracket(&gerstenhaber_bracket(f, g).unwrap(), h)
                .unwrap()
                .scale(&sign_pow(f.degree() * h.degree()));
            let t2 = gerstenhaber_bracket(&gerstenhaber_bracket(g, h).unwrap(), f)
                .unwrap()
                .scale(&sign_pow(g.degree() * f.degree()));
            let t3 = gerstenhaber_bracket(&gerstenhaber_bracket(h, f).unwrap(), g)
                .unwrap()
                .scale(&sign_pow(h.degree() * g.degree()));
            assert!(t1.add(&t2).add(&t3).is_zero());
        }
    }

    #[test]
    fn bracket_of_id_with_itself_vanishes() {
        let q = corpus::rational_line();
        let id = Cochain::identity(q);
        assert!(gerstenhaber_bracket(&id, &id).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_mu_with_itself_vanishes() {
        for alg in corpus::standard_algebras() {
            let mu = Cochain::from_mu(alg);
            assert!(gerstenhaber_bracket(&mu, &mu).unwrap().is_zero());
        }
    }

    #[test]
    fn circle_product_matches_a_bruteforce_evaluation() {
        // independent oracle: evaluate the defining sum term by term on
        // every basis tuple, with no shared contraction machinery
        fn brute_circ(f: &Cochain, g: &Cochain) -> Tensor {
            let alg = f.algebra();
            let d = alg.dim();
            let (m, n) = (f.arity(), g.arity());
            let apow = alg.alpha().pow(n - 1);
            let bpow = alg.beta().pow(n - 1);
            let mut dims = vec![d; m + n - 1];
            dims.push(d);
            let mut out = Tensor::zeros(dims.clone());
            for_each_index(&vec![d; m + n - 1], |idx| {
                let mut total = vec![crate::scalar::zero(); d];
                for i in 1..=m {
                    let inner = g.eval_basis(&idx[i - 1..i + n - 1]);
                    let mut args: Vec<Vec<crate::scalar::Rat>> = Vec::new();
                    for &a in &idx[..i - 1] {
                        args.push(apow.col(a));
                    }
                    args.push(inner);
                    for &a in &idx[i + n - 1..] {
                        args.push(bpow.col(a));
                    }
                    let refs: Vec<&[crate::scalar::Rat]> = args.iter().map(|v| v.as_slice()).collect();
                    let val = f.tensor().eval(&refs);
                    let sign = (n - 1) * (i - 1);
                    for (k, v) in val.into_iter().enumerate() {
                        if sign % 2 == 0 {
                            total[k] = &total[k] + &v;
                        } else {
                            total[k] = &total[k] - &v;
                        }
                    }
                }
                for (k, v) in total.into_iter().enumerate() {
                    if !v.is_zero() {
                        let mut full = idx.to_vec();
                        full.push(k);
                        out.set(&full, v);
                    }
                }
            });
            out
        }
        for (alg, seed) in [(corpus::t4(), 71u64), (corpus::dual_numbers_twist(), 72)] {
            for round in 0..3u64 {
                let cs = random_cochains(&alg, &[2, 2], seed * 10 + round);
                let fast = circle_product(&cs[0], &cs[1]).unwrap();
                assert_eq!(fast.tensor(), &brute_circ(&cs[0], &cs[1]));
                let cs = random_cochains(&alg, &[2, 1], seed * 100 + round);
                let fast = circle_product(&cs[0], &cs[1]).unwrap();
                assert_eq!(fast.tensor(), &brute_circ(&cs[0], &cs[1]));
            }
        }
    }

    #[test]
    fn compositions_preserve_twist_compatibility() {
        let alg = corpus::t4();
        for round in 0..3u64 {
            let cs = random_cochains(&alg, &[2, 2], 61 + round);
            let c = circle_product(&cs[0], &cs[1]).unwrap();
            assert!(c.is_twist_compatible());
            let b = gerstenhaber_bracket(&cs[0], &cs[1]).unwrap();
            assert!(b.is_twist_compatible());
            for i in 1..=2 {
                assert!(partial_composition(&cs[0], i, &cs[1])
                    .unwrap()
                    .is_twist_compatible());
            }
        }
    }
}
