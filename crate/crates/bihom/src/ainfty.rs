//! Truncated bihom-A-infinity structures.
//!
//! A structure is a non-negatively graded space with k-ary products `m_k` of
//! degree `k - 2`, stored blockwise per input-degree tuple, together with
//! commuting degree-0 twist chain maps α, β that commute with every `m_k`.
//! The defining relations, one for each total arity n, read
//!
//! ```text
//! Σ_{i+j=n+1} Σ_{λ=1}^{j} (-1)^{λ(i+1) + i(|a_1|+..+|a_{λ-1}|)}
//!     m_j(α^{i-1}a_1, .., α^{i-1}a_{λ-1},
//!         m_i(a_λ, .., a_{λ+i-1}),
//!         β^{i-1}a_{λ+i}, .., β^{i-1}a_n) = 0
//! ```
//!
//! and are verified degree composition by degree composition on basis
//! tuples, with the sign computed exactly from the printed exponent.
//!
//! Two distinguished classes connect back to Hochschild cohomology:
//! skeletal structures (zero differential) correspond to triples
//! `(algebra, bimodule, cocycle)`, and strict structures (`m_3 = 0`)
//! correspond to crossed modules.

use crate::algebra::BihomAlgebra;
use crate::bimodule::{Bimodule, BimoduleViolation};
use crate::cochain::{Cochain, Coefficients};
use crate::cohomology::is_cocycle;
use crate::matrix::Matrix;
use crate::scalar::{one, zero, Rat};
use crate::tensor::{for_each_index, Tensor};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Dimension per degree, degrees `0..N-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    dims: Vec<usize>,
}

impl GradedSpace {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty(), "graded space needs at least one degree");
        assert!(dims.iter().sum::<usize>() > 0, "total dimension must be positive");
        GradedSpace { dims }
    }

    pub fn degrees(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

pub type Blocks = BTreeMap<Vec<usize>, Tensor>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AInftyError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("theta is not a cocycle")]
    NotACocycle,
    #[error("structure is not skeletal: {0}")]
    NotSkeletal(String),
    #[error("structure is not strict: {0}")]
    NotStrict(String),
    #[error("m2(d m, n) != m2(m, d n) at basis pair ({}, {})", .0.0, .0.1)]
    WellDefinednessFailure((usize, usize)),
    #[error("invalid crossed module")]
    InvalidCrossedModule(Vec<CrossedModuleViolation>),
    #[error("extracted structure fails validation: {0}")]
    InvalidStructure(String),
}

/// A truncated bihom-A-infinity structure with blockwise products.
#[derive(Clone, Debug, PartialEq)]
pub struct AInftyStructure {
    space: GradedSpace,
    /// `products[k][degree tuple]` is the block of `m_k` on that tuple,
    /// a tensor of shape `[dim(d_1), .., dim(d_k), dim(Σd + k - 2)]`.
    products: BTreeMap<usize, Blocks>,
    alpha: Vec<Matrix>,
    beta: Vec<Matrix>,
}

impl AInftyStructure {
    /// Validates shapes only; the relations are checked by [`validate_ainfty`].
    /// Nonzero blocks whose output degree falls outside the graded support
    /// are rejected: truncated structures must have `m_k = 0` there.
    pub fn new(
        space: GradedSpace,
        products: BTreeMap<usize, Blocks>,
        alpha: Vec<Matrix>,
        beta: Vec<Matrix>,
    ) -> Result<Self, AInftyError> {
        let n_deg = space.degrees();
        if alpha.len() != n_deg || beta.len() != n_deg {
            return Err(AInftyError::ShapeMismatch(format!(
                "need one twist block per degree (0..{n_deg})"
            )));
        }
        for (name, maps) in [("alpha", &alpha), ("beta", &beta)] {
            for (deg, m) in maps.iter().enumerate() {
                if m.rows() != space.dim(deg) || m.cols() != space.dim(deg) {
                    return Err(AInftyError::ShapeMismatch(format!(
                        "{name} block at degree {deg} must be {0}x{0}",
                        space.dim(deg)
                    )));
                }
            }
        }
        let mut cleaned: BTreeMap<usize, Blocks> = BTreeMap::new();
        for (k, blocks) in products {
            if k == 0 {
                return Err(AInftyError::ShapeMismatch("products start at arity 1".into()));
            }
            let mut kept: Blocks = BTreeMap::new();
            for (degs, tensor) in blocks {
                if degs.len() != k {
                    return Err(AInftyError::ShapeMismatch(format!(
                        "m_{k} block keyed by {degs:?}"
                    )));
                }
                if degs.iter().any(|&d| d >= n_deg) {
                    return Err(AInftyError::ShapeMismatch(format!(
                        "m_{k} block {degs:?} uses a degree outside the space"
                    )));
                }
                let total: usize = degs.iter().sum();
                let out = total as i64 + k as i64 - 2;
                let valid_out = out >= 0 && (out as usize) < n_deg;
                if !valid_out {
                    if tensor.is_zero() {
                        continue;
                    }
                    return Err(AInftyError::ShapeMismatch(format!(
                        "m_{k} must vanish on degrees {degs:?}: output degree {out} is outside the space"
                    )));
                }
                let out = out as usize;
                let mut want: Vec<usize> = degs.iter().map(|&d| space.dim(d)).collect();
                want.push(space.dim(out));
                if tensor.dims() != want {
                    return Err(AInftyError::ShapeMismatch(format!(
                        "m_{k} block {degs:?} has shape {:?}, expected {want:?}",
                        tensor.dims()
                    )));
                }
                if tensor.is_zero() || tensor.is_empty() {
                    continue;
                }
                kept.insert(degs, tensor);
            }
            if !kept.is_empty() {
                cleaned.insert(k, kept);
            }
        }
        Ok(AInftyStructure {
            space,
            products: cleaned,
            alpha,
            beta,
        })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn alpha(&self) -> &[Matrix] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Matrix] {
        &self.beta
    }

    pub fn products(&self) -> &BTreeMap<usize, Blocks> {
        &self.products
    }

    pub fn max_arity(&self) -> usize {
        self.products.keys().max().copied().unwrap_or(0)
    }

    pub fn block(&self, k: usize, degs: &[usize]) -> Option<&Tensor> {
        self.products.get(&k)?.get(degs)
    }

    /// Evaluates `m_k` on coordinate vectors sitting in the given degrees;
    /// returns the output vector and its degree, or `None` when the result
    /// is structurally zero.
    pub fn eval_product(&self, k: usize, degs: &[usize], args: &[&[Rat]]) -> Option<(usize, Vec<Rat>)> {
        let total: usize = degs.iter().sum();
        let out = total as i64 + k as i64 - 2;
        if out < 0 || (out as usize) >= self.space.degrees() {
            return None;
        }
        let block = self.block(k, degs)?;
        Some((out as usize, block.eval(args)))
    }
}

/// Outcome of checking the arity-n relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub n: usize,
    pub holds: bool,
    /// First failing `(degree composition, basis tuple)` in lexicographic order.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInftyReport {
    pub twists_commute: bool,
    /// First product that fails to commute with a twist, if any.
    pub twist_failure: Option<(usize, crate::algebra::TwistKind)>,
    pub relations: Vec<RelationCheck>,
    /// Readable facts derived from the small-n relations.
    pub notes: Vec<String>,
}

impl AInftyReport {
    pub fn is_valid(&self) -> bool {
        self.twists_commute && self.twist_failure.is_none() && self.relations.iter().all(|r| r.holds)
    }
}

impl fmt::Display for AInftyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "twists commute: {}", self.twists_commute)?;
        match &self.twist_failure {
            None => writeln!(f, "twist compatibility: ok")?,
            Some((k, t)) => writeln!(f, "twist compatibility: m_{k} fails with {t}")?,
        }
        for r in &self.relations {
            match &r.witness {
                None => writeln!(f, "relation n={}: ok", r.n)?,
                Some((degs, idx)) => {
                    writeln!(f, "relation n={}: FAILS at degrees {:?}, tuple {:?}", r.n, degs, idx)?
                }
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn power_column(cache: &mut BTreeMap<(usize, usize), Matrix>, maps: &[Matrix], deg: usize, pow: usize, idx: usize) -> Vec<Rat> {
    if pow == 0 {
        return crate::algebra::unit_vector(maps[deg].rows(), idx);
    }
    let key = (deg, pow);
    cache.entry(key).or_insert_with(|| {
        
        maps[deg].pow(pow)
    });
    cache[&key].col(idx)
}

/// The relation residual on one degree composition, as a tensor
/// `[dim(d_1), .., dim(d_n), dim(D)]` with `D = Σd + n - 3`, or `None` when
/// the output degree is outside the space (the relation is then vacuous).
pub fn relation_residual(s: &AInftyStructure, n: usize, degs: &[usize]) -> Option<(usize, Tensor)> {
    assert_eq!(degs.len(), n);
    let total: usize = degs.iter().sum();
    let out = total as i64 + n as i64 - 3;
    if out < 0 || (out as usize) >= s.space.degrees() {
        return None;
    }
    let out = out as usize;
    let mut dims: Vec<usize> = degs.iter().map(|&d| s.space.dim(d)).collect();
    dims.push(s.space.dim(out));
    let mut res = Tensor::zeros(dims.clone());
    if dims.contains(&0) {
        return Some((out, res));
    }
    let mut apow: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
    let mut bpow: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
    let input_dims: Vec<usize> = degs.iter().map(|&d| s.space.dim(d)).collect();
    for_each_index(&input_dims, |idx| {
        let mut acc = vec![zero(); s.space.dim(out)];
        let mut nonzero = false;
        for i in 1..=n {
            let j = n + 1 - i;
            if j < 1 {
                continue;
            }
            for lam in 1..=j {
                // inner block: positions lam-1 .. lam+i-2 (0-based)
                let inner_degs: Vec<usize> = degs[lam - 1..lam + i - 1].to_vec();
                let inner_units: Vec<Vec<Rat>> = (lam - 1..lam + i - 1)
                    .map(|p| crate::algebra::unit_vector(input_dims[p], idx[p]))
                    .collect();
                let inner_refs: Vec<&[Rat]> = inner_units.iter().map(Vec::as_slice).collect();
                let Some((inner_deg, inner_val)) = s.eval_product(i, &inner_degs, &inner_refs)
                else {
                    continue;
                };
                if inner_val.iter().all(Zero::is_zero) {
                    continue;
                }
                // outer block
                let mut outer_degs: Vec<usize> = Vec::with_capacity(j);
                outer_degs.extend_from_slice(&degs[..lam - 1]);
                outer_degs.push(inner_deg);
                outer_degs.extend_from_slice(&degs[lam + i - 1..]);
                let mut outer_args: Vec<Vec<Rat>> = Vec::with_capacity(j);
                for p in 0..lam - 1 {
                    outer_args.push(power_column(&mut apow, &s.alpha, degs[p], i - 1, idx[p]));
                }
                outer_args.push(inner_val);
                for p in lam + i - 1..n {
                    outer_args.push(power_column(&mut bpow, &s.beta, degs[p], i - 1, idx[p]));
                }
                let outer_refs: Vec<&[Rat]> = outer_args.iter().map(Vec::as_slice).collect();
                let Some((_, val)) = s.eval_product(j, &outer_degs, &outer_refs) else {
                    continue;
                };
                // sign exponent: λ(i+1) + i(|a_1| + .. + |a_{λ-1}|)
                let deg_prefix: usize = degs[..lam - 1].iter().sum();
                let exponent = lam * (i + 1) + i * deg_prefix;
                for (q, v) in val.into_iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    nonzero = true;
                    if exponent.is_multiple_of(2) {
                        acc[q] = &acc[q] + &v;
                    } else {
                        acc[q] = &acc[q] - &v;
                    }
                }
            }
        }
        if nonzero {
            for (q, v) in acc.into_iter().enumerate() {
                if !v.is_zero() {
                    let mut full = idx.to_vec();
                    full.push(q);
                    res.set(&full, v);
                }
            }
        }
    });
    Some((out, res))
}

/// Checks twist commutation, twist compatibility of every product block, and
/// the relations for `1 ≤ n ≤ n_max`. When `n_max` is `None` it defaults to
/// `degrees + 2`, which covers all nonvacuous relations of a truncated
/// structure.
pub fn validate_ainfty(s: &AInftyStructure, n_max: Option<usize>) -> AInftyReport {
    let n_deg = s.space.degrees();
    let n_max = n_max.unwrap_or(n_deg + 2).max(1);
    let twists_commute = s
        .alpha
        .iter()
        .zip(&s.beta)
        .all(|(a, b)| a.commutes_with(b));

    // α ∘ m_k = m_k ∘ α^{⊗k}, blockwise (and the same for β)
    let mut twist_failure = None;
    'outer: for (k, blocks) in &s.products {
        for (degs, tensor) in blocks {
            let total: usize = degs.iter().sum();
            let out = total + k - 2;
            for (kind, maps) in [
                (crate::algebra::TwistKind::Alpha, &s.alpha),
                (crate::algebra::TwistKind::Beta, &s.beta),
            ] {
                let lhs = tensor.postcompose(&maps[out]);
                let mut rhs = tensor.clone();
                for (slot, &d) in degs.iter().enumerate() {
                    rhs = rhs.precompose_slot(slot, &maps[d]);
                }
                if lhs != rhs {
                    twist_failure = Some((*k, kind));
                    break 'outer;
                }
            }
        }
    }

    let mut relations = Vec::new();
    for n in 1..=n_max {
        let mut holds = true;
        let mut witness = None;
        for_each_index(&vec![n_deg; n], |degs| {
            if !holds {
                return;
            }
            if degs.iter().any(|&d| s.space.dim(d) == 0) {
                return;
            }
            if let Some((_, res)) = relation_residual(s, n, degs) {
                if let Some(idx) = res.first_nonzero() {
                    holds = false;
                    witness = Some((degs.to_vec(), idx[..n].to_vec()));
                }
            }
        });
        relations.push(RelationCheck { n, holds, witness });
    }

    let mut notes = Vec::new();
    if let Some(r) = relations.first() {
        notes.push(format!(
            "n=1 relation (m1 squares to zero): {}",
            if r.holds { "holds" } else { "fails" }
        ));
    }
    if let Some(r) = relations.get(1) {
        notes.push(format!(
            "n=2 relation (m1 is a graded derivation of m2): {}",
            if r.holds { "holds" } else { "fails" }
        ));
    }
    AInftyReport {
        twists_commute,
        twist_failure,
        relations,
        notes,
    }
}

/// Builds the skeletal n-term structure attached to a triple
/// `(A, M, θ)` with `θ` an (n+1)-cocycle of `A` with coefficients in `M`:
/// degrees 0 and n-1 carry `A` and `M`, `m_2` is `μ` plus the actions,
/// `m_{n+1} = θ`, everything else vanishes.
pub fn triple_to_skeletal(
    module: &Arc<Bimodule>,
    theta: &Cochain,
    n_terms: usize,
) -> Result<AInftyStructure, AInftyError> {
    assert!(n_terms >= 2);
    let algebra = module.base().clone();
    match theta.coeffs() {
        Coefficients::Module(m) if m == module => {}
        _ => {
            return Err(AInftyError::ShapeMismatch(
                "theta must take values in the given bimodule".into(),
            ))
        }
    }
    if theta.arity() != n_terms + 1 {
        return Err(AInftyError::ShapeMismatch(format!(
            "theta must have arity {} for an {}-term structure",
            n_terms + 1,
            n_terms
        )));
    }
    if !is_cocycle(theta) {
        return Err(AInftyError::NotACocycle);
    }
    let d = algebra.dim();
    let e = module.dim();
    let mut dims = vec![0usize; n_terms];
    dims[0] = d;
    dims[n_terms - 1] = e;
    let space = GradedSpace::new(dims);

    let top = n_terms - 1;
    let mut m2: Blocks = BTreeMap::new();
    m2.insert(vec![0, 0], algebra.mu().clone());
    m2.insert(vec![0, top], module.left().clone());
    m2.insert(vec![top, 0], module.right().clone());
    let mut mtop: Blocks = BTreeMap::new();
    mtop.insert(vec![0; n_terms + 1], theta.tensor().clone());
    let mut products = BTreeMap::new();
    products.insert(2, m2);
    products.insert(n_terms + 1, mtop);

    let mut alpha: Vec<Matrix> = (0..n_terms).map(|k| Matrix::zeros(space.dim(k), space.dim(k))).collect();
    let mut beta = alpha.clone();
    alpha[0] = algebra.alpha().clone();
    beta[0] = algebra.beta().clone();
    alpha[top] = module.alpha_m().clone();
    beta[top] = module.beta_m().clone();

    AInftyStructure::new(space, products, alpha, beta)
}

/// Extracts the triple `(A, M, θ)` from a skeletal structure whose graded
/// support sits in degrees 0 and N-1 with zero differential.
pub fn skeletal_to_triple(
    s: &AInftyStructure,
) -> Result<(Arc<BihomAlgebra>, Arc<Bimodule>, Cochain), AInftyError> {
    let n_deg = s.space.degrees();
    if n_deg < 2 {
        return Err(AInftyError::NotSkeletal("need at least two degrees".into()));
    }
    let top = n_deg - 1;
    if s.space.dim(0) == 0 || s.space.dim(top) == 0 {
        return Err(AInftyError::NotSkeletal(
            "degrees 0 and N-1 must be nonzero".into(),
        ));
    }
    for mid in 1..top {
        if s.space.dim(mid) != 0 {
            return Err(AInftyError::NotSkeletal(format!(
                "degree {mid} must vanish"
            )));
        }
    }
    if s.products.contains_key(&1) {
        return Err(AInftyError::NotSkeletal("differential must vanish".into()));
    }
    for &k in s.products.keys() {
        if k != 2 && k != n_deg + 1 {
            return Err(AInftyError::NotSkeletal(format!(
                "m_{k} must vanish on an {}-term skeletal structure",
                n_deg
            )));
        }
    }
    let d = s.space.dim(0);
    let e = s.space.dim(top);
    let mu = s
        .block(2, &[0, 0])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(vec![d, d, d]));
    let algebra = Arc::new(
        BihomAlgebra::validate("skeletal_base", mu, s.alpha[0].clone(), s.beta[0].clone())
            .map_err(|v| AInftyError::InvalidStructure(format!("{v:?}")))?,
    );
    let left = s
        .block(2, &[0, top])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(vec![d, e, e]));
    let right = s
        .block(2, &[top, 0])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(vec![e, d, e]));
    let module = Arc::new(
        Bimodule::validate(
            "skeletal_fiber",
            algebra.clone(),
            left,
            right,
            s.alpha[top].clone(),
            s.beta[top].clone(),
        )
        .map_err(|v| AInftyError::InvalidStructure(format!("{v:?}")))?,
    );
    let mut theta_dims = vec![d; n_deg + 1];
    theta_dims.push(e);
    let theta_tensor = s
        .block(n_deg + 1, &vec![0; n_deg + 1])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(theta_dims));
    let theta = Cochain::new(
        algebra.clone(),
        Coefficients::Module(module.clone()),
        theta_tensor,
    )
    .map_err(|e| AInftyError::InvalidStructure(e.to_string()))?;
    Ok((algebra, module, theta))
}

/// A crossed module of bihom algebras: `dt : A -> B` a morphism, a
/// B-bimodule structure `φ` on `A`, and the six Peiffer-type equations.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedModule {
    pub alg_a: Arc<BihomAlgebra>,
    pub alg_b: Arc<BihomAlgebra>,
    /// matrix of `dt : A -> B`
    pub dt: Matrix,
    /// `φ : B ⊗ A -> A`
    pub action_left: Tensor,
    /// `φ : A ⊗ B -> A`
    pub action_right: Tensor,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CrossedModuleViolation {
    #[error("dt is not an algebra morphism: {0}")]
    DtNotMorphism(String),
    #[error("the actions do not form a B-bimodule on A: {0:?}")]
    NotBimodule(Vec<BimoduleViolation>),
    #[error("equation {name} fails at indices {witness:?}")]
    EquationFailure { name: &'static str, witness: Vec<usize> },
}

/// Checks all the crossed-module axioms, each on all basis tuples.
pub fn validate_crossed_module(c: &CrossedModule) -> Result<(), Vec<CrossedModuleViolation>> {
    let mut out = Vec::new();
    let da = c.alg_a.dim();
    let db = c.alg_b.dim();

    // dt is a morphism of bihom algebras
    match crate::algebra::AlgebraMorphism::validate(c.alg_a.clone(), c.alg_b.clone(), c.dt.clone())
    {
        Ok(_) => {}
        Err(e) => out.push(CrossedModuleViolation::DtNotMorphism(e.to_string())),
    }

    // the actions are a B-bimodule structure on A w.r.t. alpha_A, beta_A
    if let Err(v) = Bimodule::validate(
        "crossed_actions",
        c.alg_b.clone(),
        c.action_left.clone(),
        c.action_right.clone(),
        c.alg_a.alpha().clone(),
        c.alg_a.beta().clone(),
    ) {
        out.push(CrossedModuleViolation::NotBimodule(v));
    }

    let phi_l = |b: &[Rat], m: &[Rat]| c.action_left.eval(&[b, m]);
    let phi_r = |m: &[Rat], b: &[Rat]| c.action_right.eval(&[m, b]);
    let m_a = |m: &[Rat], n: &[Rat]| c.alg_a.multiply(m, n);
    let m_b = |x: &[Rat], y: &[Rat]| c.alg_b.multiply(x, y);
    let unit_a = |i: usize| crate::algebra::unit_vector(da, i);
    let unit_b = |i: usize| crate::algebra::unit_vector(db, i);

    // dt(φ(b, m)) = m_B(b, dt m)
    'e1: for b in 0..db {
        for m in 0..da {
            let lhs = c.dt.apply(&phi_l(&unit_b(b), &unit_a(m)));
            let rhs = m_b(&unit_b(b), &c.dt.col(m));
            if lhs != rhs {
                out.push(CrossedModuleViolation::EquationFailure {
                    name: "dt(phi(b,m)) = m_B(b, dt m)",
                    witness: vec![b, m],
                });
                break 'e1;
            }
        }
    }
    // dt(φ(m, b)) = m_B(dt m, b)
    'e2: for m in 0..da {
        for b in 0..db {
            let lhs = c.dt.apply(&phi_r(&unit_a(m), &unit_b(b)));
            let rhs = m_b(&c.dt.col(m), &unit_b(b));
            if lhs != rhs {
                out.push(CrossedModuleViolation::EquationFailure {
                    name: "dt(phi(m,b)) = m_B(dt m, b)",
                    witness: vec![m, b],
                });
                break 'e2;
            }
        }
    }
    // φ(dt m, n) = m_A(m, n)
    'e3: for m in 0..da {
        for n in 0..da {
            let lhs = phi_l(&c.dt.col(m), &unit_a(n));
            let rhs = m_a(&unit_a(m), &unit_a(n));
            if lhs != rhs {
                out.push(CrossedModuleViolation::EquationFailure {
                    name: "phi(dt m, n) = m_A(m, n)",
                    witness: vec![m, n],
                });
                break 'e3;
            }
        }
    }
    // φ(m, dt n) = m_A(m, n)
    'e4: for m in 0..da {
        for n in 0..da {
            let lhs = phi_r(&unit_a(m), &c.dt.col(n));
            let rhs = m_a(&unit_a(m), &unit_a(n));
            if lhs != rhs {
                out.push(CrossedModuleViolation::EquationFailure {
                    name: "phi(m, dt n) = m_A(m, n)",
                    witness: vec![m, n],
                });
                break 'e4;
            }
        }
    }
    // φ(α_B b, m_A(m, n)) = m_A(φ(b, m), β_A n)
    'e5: for b in 0..db {
        let ab = c.alg_b.alpha().col(b);
        for m in 0..da {
            let pbm = phi_l(&unit_b(b), &unit_a(m));
            for n in 0..da {
                let lhs = phi_l(&ab, &m_a(&unit_a(m), &unit_a(n)));
                let rhs = m_a(&pbm, &c.alg_a.beta().col(n));
                if lhs != rhs {
                    out.push(CrossedModuleViolation::EquationFailure {
                        name: "phi(alpha_B b, m_A(m,n)) = m_A(phi(b,m), beta_A n)",
                        witness: vec![b, m, n],
                    });
                    break 'e5;
                }
            }
        }
    }
    // φ(m_A(m, n), β_B b) = m_A(α_A m, φ(n, b))
    'e6: for m in 0..da {
        let am = c.alg_a.alpha().col(m);
        for n in 0..da {
            let mn = m_a(&unit_a(m), &unit_a(n));
            for b in 0..db {
                let lhs = phi_r(&mn, &c.alg_b.beta().col(b));
                let rhs = m_a(&am, &phi_r(&unit_a(n), &unit_b(b)));
                if lhs != rhs {
                    out.push(CrossedModuleViolation::EquationFailure {
                        name: "phi(m_A(m,n), beta_B b) = m_A(alpha_A m, phi(n,b))",
                        witness: vec![m, n, b],
                    });
                    break 'e6;
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Converts a strict 2-term structure to a crossed module:
/// `A = A_1` with `m_A(m,n) = m_2(dm, n)`, `B = A_0`, `dt = d`, actions
/// from the mixed `m_2` blocks. Well-definedness `m_2(dm,n) = m_2(m,dn)`
/// is checked explicitly.
pub fn strict_to_crossed_module(s: &AInftyStructure) -> Result<CrossedModule, AInftyError> {
    if s.space.degrees() != 2 {
        return Err(AInftyError::NotStrict("need exactly two degrees".into()));
    }
    if s.products.contains_key(&3) {
        return Err(AInftyError::NotStrict("m_3 must vanish".into()));
    }
    if let Some(&k) = s.products.keys().find(|&&k| k > 3) {
        return Err(AInftyError::NotStrict(format!("m_{k} must vanish")));
    }
    let d0 = s.space.dim(0);
    let d1 = s.space.dim(1);
    // d : A_1 -> A_0 from the m_1 block
    let dt = match s.block(1, &[1]) {
        Some(t) => Matrix::from_fn(d0, d1, |b, m| t.get(&[m, b]).clone()),
        None => Matrix::zeros(d0, d1),
    };
    let b01 = s
        .block(2, &[0, 1])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(vec![d0, d1, d1]));
    let b10 = s
        .block(2, &[1, 0])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(vec![d1, d0, d1]));
    let b00 = s
        .block(2, &[0, 0])
        .cloned()
        .unwrap_or_else(|| Tensor::zeros(vec![d0, d0, d0]));

    // well-definedness of m_A: m_2(dm, n) = m_2(m, dn)
    let left_route = b01.precompose_slot(0, &dt);
    let right_route = b10.precompose_slot(1, &dt);
    if left_route != right_route {
        let w = left_route.sub(&right_route).first_nonzero().unwrap();
        return Err(AInftyError::WellDefinednessFailure((w[0], w[1])));
    }

    let alg_b = Arc::new(
        BihomAlgebra::validate("crossed_b", b00, s.alpha[0].clone(), s.beta[0].clone())
            .map_err(|v| AInftyError::InvalidStructure(format!("{v:?}")))?,
    );
    let alg_a = Arc::new(
        BihomAlgebra::validate("crossed_a", left_route, s.alpha[1].clone(), s.beta[1].clone())
            .map_err(|v| AInftyError::InvalidStructure(format!("{v:?}")))?,
    );
    let c = CrossedModule {
        alg_a,
        alg_b,
        dt,
        action_left: b01,
        action_right: b10,
    };
    validate_crossed_module(&c).map_err(AInftyError::InvalidCrossedModule)?;
    Ok(c)
}

/// Converts a crossed module back to a strict 2-term structure:
/// `A_1 = A`, `A_0 = B`, `d = dt`, `m_2` from `m_B` and the actions.
pub fn crossed_module_to_strict(c: &CrossedModule) -> Result<AInftyStructure, AInftyError> {
    validate_crossed_module(c).map_err(AInftyError::InvalidCrossedModule)?;
    let da = c.alg_a.dim();
    let db = c.alg_b.dim();
    let space = GradedSpace::new(vec![db, da]);
    let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
    let mut m1: Blocks = BTreeMap::new();
    m1.insert(
        vec![1],
        Tensor::from_fn(vec![da, db], |idx| c.dt.get(idx[1], idx[0]).clone()),
    );
    products.insert(1, m1);
    let mut m2: Blocks = BTreeMap::new();
    m2.insert(vec![0, 0], c.alg_b.mu().clone());
    m2.insert(vec![0, 1], c.action_left.clone());
    m2.insert(vec![1, 0], c.action_right.clone());
    products.insert(2, m2);
    let alpha = vec![c.alg_b.alpha().clone(), c.alg_a.alpha().clone()];
    let beta = vec![c.alg_b.beta().clone(), c.alg_a.beta().clone()];
    AInftyStructure::new(space, products, alpha, beta)
}

/// The strict 2-term structure of a bihom algebra with `A_0 = A_1 = A`,
/// `d = id` and every `m_2` block equal to μ.
pub fn diagonal_strict_structure(alg: &Arc<BihomAlgebra>) -> AInftyStructure {
    let d = alg.dim();
    let space = GradedSpace::new(vec![d, d]);
    let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
    let mut m1: Blocks = BTreeMap::new();
    m1.insert(
        vec![1],
        Tensor::from_fn(vec![d, d], |idx| {
            if idx[0] == idx[1] {
                one()
            } else {
                zero()
            }
        }),
    );
    products.insert(1, m1);
    let mut m2: Blocks = BTreeMap::new();
    m2.insert(vec![0, 0], alg.mu().clone());
    m2.insert(vec![0, 1], alg.mu().clone());
    m2.insert(vec![1, 0], alg.mu().clone());
    products.insert(2, m2);
    let alpha = vec![alg.alpha().clone(), alg.alpha().clone()];
    let beta = vec![alg.beta().clone(), alg.beta().clone()];
    AInftyStructure::new(space, products, alpha, beta).expect("diagonal strict structure is well-shaped")
}

/// A bihom-associative algebra concentrated in degree 0.
pub fn from_bihom_algebra(alg: &Arc<BihomAlgebra>) -> AInftyStructure {
    let d = alg.dim();
    let space = GradedSpace::new(vec![d]);
    let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
    let mut m2: Blocks = BTreeMap::new();
    m2.insert(vec![0, 0], alg.mu().clone());
    products.insert(2, m2);
    AInftyStructure::new(space, products, vec![alg.alpha().clone()], vec![alg.beta().clone()])
        .expect("degree-0 structure is well-shaped")
}

/// Direct sum of two structures: blocks act componentwise, mixed tuples
/// multiply to zero.
pub fn direct_sum(s: &AInftyStructure, t: &AInftyStructure) -> AInftyStructure {
    let n_deg = s.space.degrees().max(t.space.degrees());
    let dims: Vec<usize> = (0..n_deg).map(|k| s.space.dim(k) + t.space.dim(k)).collect();
    let space = GradedSpace::new(dims.clone());
    let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
    for (which, src) in [(0usize, s), (1usize, t)] {
        for (&k, blocks) in &src.products {
            let entry = products.entry(k).or_default();
            for (degs, tensor) in blocks {
                let total: usize = degs.iter().sum();
                let out = total + k - 2;
                let mut embed_dims: Vec<usize> = degs.iter().map(|&d| dims[d]).collect();
                embed_dims.push(dims[out]);
                let offset = |deg: usize| if which == 0 { 0 } else { s.space.dim(deg) };
                let block = entry
                    .entry(degs.clone())
                    .or_insert_with(|| Tensor::zeros(embed_dims));
                let mut in_dims: Vec<usize> = degs.iter().map(|&d| src.space.dim(d)).collect();
                in_dims.push(src.space.dim(out));
                for_each_index(&in_dims, |idx| {
                    let v = tensor.get(idx);
                    if v.is_zero() {
                        return;
                    }
                    let mut shifted: Vec<usize> = idx
                        .iter()
                        .take(k)
                        .zip(degs.iter())
                        .map(|(&i, &deg)| i + offset(deg))
                        .collect();
                    shifted.push(idx[k] + offset(out));
                    block.set(&shifted, v.clone());
                });
            }
        }
    }
    let block_sum = |a: &[Matrix], b: &[Matrix]| -> Vec<Matrix> {
        (0..n_deg)
            .map(|deg| {
                let ma = a.get(deg).cloned().unwrap_or_else(|| Matrix::zeros(0, 0));
                let mb = b.get(deg).cloned().unwrap_or_else(|| Matrix::zeros(0, 0));
                crate::bimodule::block_diag(&ma, &mb)
            })
            .collect()
    };
    AInftyStructure::new(
        space,
        products,
        block_sum(&s.alpha, &t.alpha),
        block_sum(&s.beta, &t.beta),
    )
    .expect("direct sum preserves shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::cochain::cochain_space_basis;
    use crate::cohomology::{coboundary, Complex};
    use crate::corpus;
    use crate::scalar::rat;

    #[test]
    fn degree_zero_algebra_is_valid() {
        for alg in corpus::standard_algebras() {
            let s = from_bihom_algebra(&alg);
            let report = validate_ainfty(&s, None);
            assert!(report.is_valid(), "{report}");
        }
    }

    #[test]
    fn dg_yau_twist_is_valid() {
        // two-term dg associative algebra: A_0 = dual numbers, A_1 = <v>,
        // d v = eps, 1·v = v·1 = v, eps·v = v·eps = 0; twisted by the
        // commuting dg morphisms alpha = (diag(1,-1), -1), beta = id.
        let (mu0, alpha0, _) = corpus::dual_numbers_data();
        let twisted00 = mu0.precompose_slot(0, &alpha0); // beta = id
        let space = GradedSpace::new(vec![2, 1]);
        let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
        let mut m1: Blocks = BTreeMap::new();
        // d v = eps (index 1 in degree 0)
        m1.insert(vec![1], Tensor::from_fn(vec![1, 2], |idx| {
            if idx[1] == 1 { one() } else { zero() }
        }));
        products.insert(1, m1);
        let mut m2: Blocks = BTreeMap::new();
        m2.insert(vec![0, 0], twisted00);
        // untwisted mixed products: 1·v = v, eps·v = 0
        let left = Tensor::from_fn(vec![2, 1, 1], |idx| if idx[0] == 0 { one() } else { zero() });
        let right = Tensor::from_fn(vec![1, 2, 1], |idx| if idx[1] == 0 { one() } else { zero() });
        // twist: m2'(a, v) = m2(alpha a, beta v) with alpha = diag(1,-1) in
        // degree 0 and -id in degree 1; beta = id
        let alpha1 = Matrix::from_rows(vec![vec![rat(-1)]]);
        let left_twisted = left.precompose_slot(0, &alpha0);
        let right_twisted = right.precompose_slot(0, &alpha1);
        m2.insert(vec![0, 1], left_twisted);
        m2.insert(vec![1, 0], right_twisted);
        products.insert(2, m2);
        let alpha = vec![alpha0.clone(), alpha1];
        let beta = vec![Matrix::identity(2), Matrix::identity(1)];
        let s = AInftyStructure::new(space, products, alpha, beta).unwrap();
        let report = validate_ainfty(&s, None);
        assert!(report.is_valid(), "{report}");
    }

    fn skeletal_over_t4() -> (Arc<Bimodule>, Vec<Cochain>) {
        let t4 = corpus::t4();
        let adj = corpus::adjoint(&t4);
        let cx = Complex::new(t4, Coefficients::Module(adj.clone()));
        let cocycles = cx.cocycle_basis(3).unwrap();
        (adj, cocycles)
    }

    #[test]
    fn skeletal_structures_from_cocycles_validate() {
        let (adj, cocycles) = skeletal_over_t4();
        assert!(!cocycles.is_empty());
        for theta in cocycles.iter().take(3) {
            let s = triple_to_skeletal(&adj, theta, 2).unwrap();
            let report = validate_ainfty(&s, None);
            assert!(report.is_valid(), "{report}");
        }
    }

    #[test]
    fn non_cocycle_theta_is_rejected_and_fails_the_n4_relation() {
        let t4 = corpus::t4();
        let adj = corpus::adjoint(&t4);
        let coeffs = Coefficients::Module(adj.clone());
        let basis = cochain_space_basis(&t4, &coeffs, 3, Budget::default()).unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3100);
        let mut tried = 0;
        loop {
            let theta = basis.random(&mut rng);
            tried += 1;
            if crate::cohomology::is_cocycle(&theta) {
                if tried > 200 {
                    // every twist-compatible 3-cochain is a cocycle here;
                    // nothing to refute
                    return;
                }
                continue;
            }
            assert!(matches!(
                triple_to_skeletal(&adj, &theta, 2),
                Err(AInftyError::NotACocycle)
            ));
            break;
        }
    }

    #[test]
    fn n4_residual_of_a_skeletal_structure_is_the_coboundary_of_theta() {
        let t4 = corpus::t4();
        let adj = corpus::adjoint(&t4);
        let coeffs = Coefficients::Module(adj.clone());
        let basis = cochain_space_basis(&t4, &coeffs, 3, Budget::default()).unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3200);
        for _ in 0..3 {
            let theta = basis.random(&mut rng);
            // assemble the skeletal structure without the cocycle gate
            let d = t4.dim();
            let space = GradedSpace::new(vec![d, d]);
            let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
            let mut m2: Blocks = BTreeMap::new();
            m2.insert(vec![0, 0], t4.mu().clone());
            m2.insert(vec![0, 1], adj.left().clone());
            m2.insert(vec![1, 0], adj.right().clone());
            products.insert(2, m2);
            let mut m3: Blocks = BTreeMap::new();
            m3.insert(vec![0, 0, 0], theta.tensor().clone());
            products.insert(3, m3);
            let alpha = vec![t4.alpha().clone(), adj.alpha_m().clone()];
            let beta = vec![t4.beta().clone(), adj.beta_m().clone()];
            let s = AInftyStructure::new(space, products, alpha, beta).unwrap();
            let (out, residual) = relation_residual(&s, 4, &[0, 0, 0, 0]).unwrap();
            assert_eq!(out, 1);
            assert_eq!(&residual, coboundary(&theta).tensor());
            // validity of the whole structure is equivalent to δθ = 0
            let report = validate_ainfty(&s, None);
            assert_eq!(report.is_valid(), crate::cohomology::is_cocycle(&theta));
        }
    }

    #[test]
    fn skeletal_roundtrip_is_identity() {
        let (adj, cocycles) = skeletal_over_t4();
        for theta in cocycles.iter().take(2) {
            let s = triple_to_skeletal(&adj, theta, 2).unwrap();
            let (alg, module, theta2) = skeletal_to_triple(&s).unwrap();
            assert_eq!(alg.mu(), adj.base().mu());
            assert_eq!(module.left(), adj.left());
            assert_eq!(module.right(), adj.right());
            assert_eq!(theta2.tensor(), theta.tensor());
            let s2 = triple_to_skeletal(&module, &theta2, 2).unwrap();
            assert_eq!(s, s2);
        }
    }

    #[test]
    fn three_term_skeletal_from_a_4cocycle_of_the_field() {
        let q = corpus::rational_line();
        let qadj = corpus::adjoint(&q);
        // theta = 0 is always a 4-cocycle
        let zero4 = Cochain::zero(q.clone(), Coefficients::Module(qadj.clone()), 4);
        let s = triple_to_skeletal(&qadj, &zero4, 3).unwrap();
        assert!(validate_ainfty(&s, None).is_valid());
        assert!(s.block(4, &[0, 0, 0, 0]).is_none());
        // and a nonzero 4-cocycle works as well
        let cx = Complex::new(q.clone(), Coefficients::Module(qadj.clone()));
        for z in cx.cocycle_basis(4).unwrap() {
            let s = triple_to_skeletal(&qadj, &z, 3).unwrap();
            assert!(validate_ainfty(&s, None).is_valid());
        }
    }

    #[test]
    fn diagonal_strict_structure_is_valid_and_roundtrips() {
        for alg in [corpus::t4(), corpus::dual_numbers_twist()] {
            let s = diagonal_strict_structure(&alg);
            assert!(validate_ainfty(&s, None).is_valid());
            let c = strict_to_crossed_module(&s).unwrap();
            // the crossed module is ((A, m, α, β), (A, m, α, β), id, μ)
            assert_eq!(c.alg_a.mu(), alg.mu());
            assert_eq!(c.alg_b.mu(), alg.mu());
            assert!(c.dt.is_identity());
            assert_eq!(&c.action_left, alg.mu());
            assert_eq!(&c.action_right, alg.mu());
            let s2 = crossed_module_to_strict(&c).unwrap();
            assert_eq!(s, s2);
            let c2 = strict_to_crossed_module(&s2).unwrap();
            assert_eq!(c, c2);
        }
    }

    #[test]
    fn zero_dt_crossed_module_from_zero_product_fiber() {
        let t4 = corpus::t4();
        // A = t4's underlying space with zero product, B = t4, phi = adjoint actions
        let zero_alg = Arc::new(
            BihomAlgebra::validate(
                "zero_fiber",
                Tensor::zeros(vec![4, 4, 4]),
                t4.alpha().clone(),
                t4.beta().clone(),
            )
            .unwrap(),
        );
        let c = CrossedModule {
            alg_a: zero_alg,
            alg_b: t4.clone(),
            dt: Matrix::zeros(4, 4),
            action_left: t4.mu().clone(),
            action_right: t4.mu().clone(),
        };
        assert!(validate_crossed_module(&c).is_ok());
        let s = crossed_module_to_strict(&c).unwrap();
        assert!(validate_ainfty(&s, None).is_valid());
        let c2 = strict_to_crossed_module(&s).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn perturbed_action_names_the_violated_equation() {
        let t4 = corpus::t4();
        let s = diagonal_strict_structure(&t4);
        let c = strict_to_crossed_module(&s).unwrap();
        let mut bad = c.clone();
        let bumped = bad.action_left.get(&[0, 0, 0]) + one();
        bad.action_left.set(&[0, 0, 0], bumped);
        let violations = validate_crossed_module(&bad).unwrap_err();
        assert!(!violations.is_empty());
        assert!(violations
            .iter()
            .any(|v| matches!(v, CrossedModuleViolation::EquationFailure { .. })
                || matches!(v, CrossedModuleViolation::NotBimodule(_))));
    }

    #[test]
    fn zero_everything_is_a_crossed_module() {
        let q = corpus::rational_line();
        let zero_alg = Arc::new(
            BihomAlgebra::validate(
                "zero1",
                Tensor::zeros(vec![1, 1, 1]),
                Matrix::identity(1),
                Matrix::identity(1),
            )
            .unwrap(),
        );
        let c = CrossedModule {
            alg_a: zero_alg,
            alg_b: q,
            dt: Matrix::zeros(1, 1),
            action_left: Tensor::zeros(vec![1, 1, 1]),
            action_right: Tensor::zeros(vec![1, 1, 1]),
        };
        assert!(validate_crossed_module(&c).is_ok());
    }

    #[test]
    fn well_definedness_failure_is_caught() {
        // d = id but asymmetric mixed blocks break m2(dm, n) = m2(m, dn)
        let q = corpus::rational_line();
        let space = GradedSpace::new(vec![1, 1]);
        let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
        let mut m1: Blocks = BTreeMap::new();
        m1.insert(vec![1], Tensor::from_fn(vec![1, 1], |_| one()));
        products.insert(1, m1);
        let mut m2: Blocks = BTreeMap::new();
        m2.insert(vec![0, 0], q.mu().clone());
        m2.insert(vec![0, 1], Tensor::from_fn(vec![1, 1, 1], |_| one()));
        m2.insert(vec![1, 0], Tensor::from_fn(vec![1, 1, 1], |_| rat(2)));
        products.insert(2, m2);
        let s = AInftyStructure::new(
            space,
            products,
            vec![Matrix::identity(1), Matrix::identity(1)],
            vec![Matrix::identity(1), Matrix::identity(1)],
        )
        .unwrap();
        assert!(matches!(
            strict_to_crossed_module(&s),
            Err(AInftyError::WellDefinednessFailure(_))
        ));
    }

    #[test]
    fn products_beyond_the_truncation_must_vanish() {
        // on a 2-term space, a nonzero m_4 block would have output degree
        // 0 + 4 - 2 = 2, outside the graded support; the constructor rejects
        // it, and a zero block is silently dropped
        let q = corpus::rational_line();
        let space = GradedSpace::new(vec![1, 1]);
        let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
        let mut m4: Blocks = BTreeMap::new();
        m4.insert(vec![0, 0, 0, 0], Tensor::from_fn(vec![1, 1, 1, 1, 1], |_| one()));
        products.insert(4, m4);
        let twists = vec![Matrix::identity(1), Matrix::identity(1)];
        assert!(matches!(
            AInftyStructure::new(space.clone(), products, twists.clone(), twists.clone()),
            Err(AInftyError::ShapeMismatch(_))
        ));

        let mut products: BTreeMap<usize, Blocks> = BTreeMap::new();
        let mut m4: Blocks = BTreeMap::new();
        m4.insert(vec![0, 0, 0, 0], Tensor::zeros(vec![1, 1, 1, 1, 1]));
        products.insert(4, m4);
        let s = AInftyStructure::new(space, products, twists.clone(), twists).unwrap();
        assert!(s.products().is_empty());
        let _ = q;
    }

    #[test]
    fn direct_sum_of_valid_structures_is_valid() {
        let t4 = corpus::t4();
        let dual = corpus::dual_numbers_twist();
        let s = diagonal_strict_structure(&t4);
        let t = diagonal_strict_structure(&dual);
        let sum = direct_sum(&s, &t);
        assert!(validate_ainfty(&sum, None).is_valid());
        assert_eq!(sum.space().dims(), &[6, 6]);

        let a = from_bihom_algebra(&t4);
        let b = from_bihom_algebra(&dual);
        let sum = direct_sum(&a, &b);
        assert!(validate_ainfty(&sum, None).is_valid());
    }

    #[test]
    fn sign_flip_in_m3_is_caught_at_n_equals_4() {
        let (adj, cocycles) = skeletal_over_t4();
        let theta = cocycles
            .iter()
            .find(|z| !z.is_zero())
            .expect("a nonzero 3-cocycle exists");
        let s = triple_to_skeletal(&adj, theta, 2).unwrap();
        // flip the sign of the m3 block only in the skeletal structure
        let mut products = s.products().clone();
        let m3 = products.get_mut(&3).unwrap();
        let flipped = m3[&vec![0usize, 0, 0]].neg();
        // δθ = 0 makes -θ a cocycle too; instead scale by 2 and subtract one
        // basis non-cocycle... simplest honest breakage: replace θ by θ + e
        // where e is a basis tensor that is not a cocycle. If every element
        // is a cocycle the n=4 relation cannot be broken this way.
        let _ = flipped;
        let coeffs = Coefficients::Module(adj.clone());
        let t4 = adj.base().clone();
        let basis = cochain_space_basis(&t4, &coeffs, 3, Budget::default()).unwrap();
        let mut broken = None;
        for k in 0..basis.dim() {
            let candidate = basis.cochain(k);
            if !crate::cohomology::is_cocycle(&candidate) {
                broken = Some(theta.add(&candidate));
                break;
            }
        }
        let Some(bad_theta) = broken else {
            return; // all of C^3 is cocycles; nothing to flip
        };
        m3.insert(vec![0, 0, 0], bad_theta.tensor().clone());
        let bad = AInftyStructure::new(
            s.space().clone(),
            products,
            s.alpha().to_vec(),
            s.beta().to_vec(),
        )
        .unwrap();
        let report = validate_ainfty(&bad, None);
        assert!(!report.is_valid());
        let r4 = report.relations.iter().find(|r| r.n == 4).unwrap();
        assert!(!r4.holds);
        assert!(r4.witness.is_some());
    }
}
