//! Label-keyed registries of loaded structures, with cross-reference
//! resolution and validation dispatch for the command line.

use crate::ainfty::{validate_ainfty, AInftyStructure, Blocks, CrossedModule, GradedSpace};
use crate::algebra::BihomAlgebra;
use crate::bimodule::Bimodule;
use crate::cochain::{Cochain, Coefficients};
use crate::corpus;
use crate::deformation::TruncatedDeformation;
use crate::extension::AbelianExtension;
use crate::json::{matrix_from_json, tensor_from_value, SpecFile};
use crate::matrix::Matrix;
use serde_json::json;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("could not read {path}: {err}")]
    Io { path: String, err: String },
    #[error("could not parse {path}: {err}")]
    Parse { path: String, err: String },
    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("unknown {kind} label {label:?}")]
    UnknownLabel { kind: &'static str, label: String },
    #[error("malformed {kind} {label:?}: {err}")]
    Malformed {
        kind: &'static str,
        label: String,
        err: String,
    },
}

/// A pair `(E, A)` of twisted spaces with a surjection, used to probe for
/// compatible splittings.
#[derive(Clone, Debug)]
pub struct SplittingPairData {
    pub e_alpha: Matrix,
    pub e_beta: Matrix,
    pub a_alpha: Matrix,
    pub a_beta: Matrix,
    pub j: Matrix,
}

#[derive(Default)]
pub struct Workspace {
    pub algebras: BTreeMap<String, Arc<BihomAlgebra>>,
    pub bimodules: BTreeMap<String, Arc<Bimodule>>,
    pub cochains: BTreeMap<String, Cochain>,
    pub deformations: BTreeMap<String, TruncatedDeformation>,
    pub ainfty: BTreeMap<String, AInftyStructure>,
    pub extensions: BTreeMap<String, AbelianExtension>,
    pub crossed_modules: BTreeMap<String, CrossedModule>,
    pub splitting_pairs: BTreeMap<String, SplittingPairData>,
    /// When set, re-defining a label replaces the previous entry instead of
    /// erroring (the CLI sets this so files can shadow built-ins).
    pub allow_override: bool,
}

/// Outcome of validating one spec, serializable as the CLI witness report.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub kind: &'static str,
    pub label: String,
    pub valid: bool,
    pub violations: Vec<String>,
}

impl CheckOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind,
            "label": self.label,
            "valid": self.valid,
            "violations": self.violations,
        })
    }
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    /// A workspace pre-seeded with the built-in corpus: the four standard
    /// algebras, their adjoint bimodules, and the no-splitting pair.
    pub fn with_builtins() -> Self {
        let mut ws = Workspace::new();
        for alg in corpus::standard_algebras() {
            ws.algebras.insert(alg.label().to_string(), alg.clone());
            let adj = corpus::adjoint(&alg);
            ws.bimodules.insert(adj.label().to_string(), adj);
        }
        let p = corpus::remark_pair();
        ws.splitting_pairs.insert(
            "remark_pair".into(),
            SplittingPairData {
                e_alpha: p.e_alpha,
                e_beta: p.e_beta,
                a_alpha: p.a_alpha,
                a_beta: p.a_beta,
                j: p.j,
            },
        );
        ws
    }

    pub fn algebra(&self, label: &str) -> Result<Arc<BihomAlgebra>, WorkspaceError> {
        self.algebras
            .get(label)
            .cloned()
            .ok_or_else(|| WorkspaceError::UnknownLabel {
                kind: "algebra",
                label: label.to_string(),
            })
    }

    pub fn bimodule(&self, label: &str) -> Result<Arc<Bimodule>, WorkspaceError> {
        self.bimodules
            .get(label)
            .cloned()
            .ok_or_else(|| WorkspaceError::UnknownLabel {
                kind: "bimodule",
                label: label.to_string(),
            })
    }

    /// Parses a file into a [`SpecFile`].
    pub fn parse_file(path: &std::path::Path) -> Result<SpecFile, WorkspaceError> {
        let text = std::fs::read_to_string(path).map_err(|e| WorkspaceError::Io {
            path: path.display().to_string(),
            err: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| WorkspaceError::Parse {
            path: path.display().to_string(),
            err: e.to_string(),
        })
    }

    /// Validates a spec against the workspace and, when valid, registers it.
    /// Returns the structured outcome either way.
    pub fn check_and_insert(&mut self, spec: SpecFile) -> Result<CheckOutcome, WorkspaceError> {
        let kind = spec.kind();
        let label = spec.label().to_string();
        let outcome = |valid: bool, violations: Vec<String>| CheckOutcome {
            kind,
            label: label.clone(),
            valid,
            violations,
        };
        match spec {
            SpecFile::Algebra {
                label,
                dim,
                mu,
                alpha,
                beta,
            } => {
                let mu = tensor_from_value(&mu, &[dim, dim, dim]).map_err(|err| {
                    WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    }
                })?;
                let alpha = self.matrix(kind, &label, &alpha)?;
                let beta = self.matrix(kind, &label, &beta)?;
                match BihomAlgebra::validate(label.clone(), mu, alpha, beta) {
                    Ok(a) => {
                        self.insert_algebra(Arc::new(a))?;
                        Ok(outcome(true, vec![]))
                    }
                    Err(v) => Ok(outcome(false, v.iter().map(|x| x.to_string()).collect())),
                }
            }
            SpecFile::Bimodule {
                label,
                dim,
                base,
                left,
                right,
                alpha_m,
                beta_m,
            } => {
                let base = self.algebra(&base)?;
                let d = base.dim();
                let left = tensor_from_value(&left, &[d, dim, dim]).map_err(|err| {
                    WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    }
                })?;
                let right = tensor_from_value(&right, &[dim, d, dim]).map_err(|err| {
                    WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    }
                })?;
                let alpha_m = self.matrix(kind, &label, &alpha_m)?;
                let beta_m = self.matrix(kind, &label, &beta_m)?;
                match Bimodule::validate(label.clone(), base, left, right, alpha_m, beta_m) {
                    Ok(m) => {
                        self.insert_bimodule(Arc::new(m))?;
                        Ok(outcome(true, vec![]))
                    }
                    Err(v) => Ok(outcome(false, v.iter().map(|x| x.to_string()).collect())),
                }
            }
            SpecFile::Cochain {
                label,
                base,
                coefficients,
                arity,
                tensor,
            } => {
                let base = self.algebra(&base)?;
                let coeffs = if coefficients == "self" {
                    Coefficients::SelfCoeffs
                } else {
                    let module = self.bimodule(&coefficients)?;
                    if module.base().as_ref() != base.as_ref() {
                        return Err(WorkspaceError::Malformed {
                            kind,
                            label,
                            err: format!(
                                "coefficient bimodule {} lives over {}, not over the declared base",
                                coefficients,
                                module.base().label()
                            ),
                        });
                    }
                    Coefficients::Module(module)
                };
                let e = coeffs.dim(&base);
                let mut dims = vec![base.dim(); arity];
                dims.push(e);
                let tensor = tensor_from_value(&tensor, &dims).map_err(|err| {
                    WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    }
                })?;
                match Cochain::new(base, coeffs, tensor) {
                    Ok(c) => {
                        if self.cochains.insert(label.clone(), c).is_some() && !self.allow_override {
                            return Err(WorkspaceError::DuplicateLabel { kind, label });
                        }
                        Ok(outcome(true, vec![]))
                    }
                    Err(e) => Ok(outcome(false, vec![e.to_string()])),
                }
            }
            SpecFile::Deformation {
                label,
                base,
                order,
                terms,
            } => {
                let base = self.algebra(&base)?;
                if terms.len() != order {
                    return Err(WorkspaceError::Malformed {
                        kind,
                        label,
                        err: format!("order {} but {} terms", order, terms.len()),
                    });
                }
                let d = base.dim();
                let mut cochains = Vec::with_capacity(order);
                let mut violations = Vec::new();
                for (i, t) in terms.iter().enumerate() {
                    let tensor =
                        tensor_from_value(t, &[d, d, d]).map_err(|err| WorkspaceError::Malformed {
                            kind,
                            label: label.clone(),
                            err,
                        })?;
                    match Cochain::new(base.clone(), Coefficients::SelfCoeffs, tensor) {
                        Ok(c) => cochains.push(c),
                        Err(e) => violations.push(format!("term {}: {}", i + 1, e)),
                    }
                }
                if !violations.is_empty() {
                    return Ok(outcome(false, violations));
                }
                match TruncatedDeformation::new(base, cochains) {
                    Ok(d) => {
                        if self.deformations.insert(label.clone(), d).is_some() && !self.allow_override {
                            return Err(WorkspaceError::DuplicateLabel { kind, label });
                        }
                        Ok(outcome(true, vec![]))
                    }
                    Err(e) => Ok(outcome(false, vec![e.to_string()])),
                }
            }
            SpecFile::Ainfty {
                label,
                dims,
                alpha,
                beta,
                products,
            } => {
                let space = GradedSpace::new(dims.clone());
                let to_mats = |arrs: &[Vec<Vec<crate::json::RatJson>>]| -> Result<Vec<Matrix>, WorkspaceError> {
                    arrs.iter()
                        .map(|a| self.matrix(kind, &label, a))
                        .collect()
                };
                let alpha = to_mats(&alpha)?;
                let beta = to_mats(&beta)?;
                let mut prod: BTreeMap<usize, Blocks> = BTreeMap::new();
                for (k_str, blocks) in &products {
                    let k: usize = k_str.parse().map_err(|_| WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err: format!("product key {k_str:?} is not an arity"),
                    })?;
                    let mut map: Blocks = BTreeMap::new();
                    for b in blocks {
                        let total: usize = b.degrees.iter().sum();
                        let out = total as i64 + k as i64 - 2;
                        if out < 0 || (out as usize) >= dims.len() {
                            return Err(WorkspaceError::Malformed {
                                kind,
                                label: label.clone(),
                                err: format!("block {:?} of m_{k} has no valid output degree", b.degrees),
                            });
                        }
                        let mut shape: Vec<usize> =
                            b.degrees.iter().map(|&d| space.dim(d)).collect();
                        shape.push(space.dim(out as usize));
                        let tensor = tensor_from_value(&b.tensor, &shape).map_err(|err| {
                            WorkspaceError::Malformed {
                                kind,
                                label: label.clone(),
                                err,
                            }
                        })?;
                        map.insert(b.degrees.clone(), tensor);
                    }
                    prod.insert(k, map);
                }
                match AInftyStructure::new(space, prod, alpha, beta) {
                    Err(e) => Ok(outcome(false, vec![e.to_string()])),
                    Ok(s) => {
                        let report = validate_ainfty(&s, None);
                        if report.is_valid() {
                            if self.ainfty.insert(label.clone(), s).is_some() && !self.allow_override {
                                return Err(WorkspaceError::DuplicateLabel { kind, label });
                            }
                            Ok(outcome(true, vec![]))
                        } else {
                            let mut v = Vec::new();
                            if !report.twists_commute {
                                v.push("twist maps do not commute".to_string());
                            }
                            if let Some((k, t)) = &report.twist_failure {
                                v.push(format!("m_{k} does not commute with {t}"));
                            }
                            for r in &report.relations {
                                if let Some((degs, idx)) = &r.witness {
                                    v.push(format!(
                                        "relation n={} fails at degrees {:?}, tuple {:?}",
                                        r.n, degs, idx
                                    ));
                                }
                            }
                            Ok(outcome(false, v))
                        }
                    }
                }
            }
            SpecFile::Extension {
                label,
                base,
                module,
                total_mu,
                total_alpha,
                total_beta,
                incl,
                proj,
                splitting,
            } => {
                let base = self.algebra(&base)?;
                let module = self.bimodule(&module)?;
                let n = base.dim() + module.dim();
                let mu = tensor_from_value(&total_mu, &[n, n, n]).map_err(|err| {
                    WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    }
                })?;
                let alpha = self.matrix(kind, &label, &total_alpha)?;
                let beta = self.matrix(kind, &label, &total_beta)?;
                let total = match BihomAlgebra::validate(format!("{label}_total"), mu, alpha, beta)
                {
                    Ok(a) => Arc::new(a),
                    Err(v) => {
                        return Ok(outcome(
                            false,
                            v.iter().map(|x| format!("total algebra: {x}")).collect(),
                        ))
                    }
                };
                let ext = AbelianExtension::from_parts(
                    total,
                    base,
                    module,
                    self.matrix(kind, &label, &incl)?,
                    self.matrix(kind, &label, &proj)?,
                    self.matrix(kind, &label, &splitting)?,
                );
                match crate::extension::validate_extension(&ext) {
                    Ok(()) => {
                        if self.extensions.insert(label.clone(), ext).is_some() && !self.allow_override {
                            return Err(WorkspaceError::DuplicateLabel { kind, label });
                        }
                        Ok(outcome(true, vec![]))
                    }
                    Err(v) => Ok(outcome(false, v.iter().map(|x| x.to_string()).collect())),
                }
            }
            SpecFile::CrossedModule {
                label,
                a,
                b,
                dt,
                action_left,
                action_right,
            } => {
                let alg_a = self.algebra(&a)?;
                let alg_b = self.algebra(&b)?;
                let (da, db) = (alg_a.dim(), alg_b.dim());
                let dt = self.matrix(kind, &label, &dt)?;
                let action_left = tensor_from_value(&action_left, &[db, da, da]).map_err(|err| {
                    WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    }
                })?;
                let action_right = tensor_from_value(&action_right, &[da, db, da]).map_err(
                    |err| WorkspaceError::Malformed {
                        kind,
                        label: label.clone(),
                        err,
                    },
                )?;
                let c = CrossedModule {
                    alg_a,
                    alg_b,
                    dt,
                    action_left,
                    action_right,
                };
                match crate::ainfty::validate_crossed_module(&c) {
                    Ok(()) => {
                        if self.crossed_modules.insert(label.clone(), c).is_some() && !self.allow_override {
                            return Err(WorkspaceError::DuplicateLabel { kind, label });
                        }
                        Ok(outcome(true, vec![]))
                    }
                    Err(v) => Ok(outcome(false, v.iter().map(|x| x.to_string()).collect())),
                }
            }
            SpecFile::SplittingPair {
                label,
                e_alpha,
                e_beta,
                a_alpha,
                a_beta,
                j,
            } => {
                let data = SplittingPairData {
                    e_alpha: self.matrix(kind, &label, &e_alpha)?,
                    e_beta: self.matrix(kind, &label, &e_beta)?,
                    a_alpha: self.matrix(kind, &label, &a_alpha)?,
                    a_beta: self.matrix(kind, &label, &a_beta)?,
                    j: self.matrix(kind, &label, &j)?,
                };
                let found = crate::extension::find_compatible_splitting(
                    &data.j,
                    &data.e_alpha,
                    &data.e_beta,
                    &data.a_alpha,
                    &data.a_beta,
                );
                self.splitting_pairs.insert(label.clone(), data);
                match found {
                    Some(_) => Ok(outcome(true, vec![])),
                    None => Ok(outcome(
                        false,
                        vec!["no splitting commutes with the twist maps".to_string()],
                    )),
                }
            }
        }
    }

    fn matrix(
        &self,
        kind: &'static str,
        label: &str,
        rows: &[Vec<crate::json::RatJson>],
    ) -> Result<Matrix, WorkspaceError> {
        matrix_from_json(rows).map_err(|err| WorkspaceError::Malformed {
            kind,
            label: label.to_string(),
            err,
        })
    }

    fn insert_algebra(&mut self, a: Arc<BihomAlgebra>) -> Result<(), WorkspaceError> {
        let label = a.label().to_string();
        if self.algebras.insert(label.clone(), a).is_some() && !self.allow_override {
            return Err(WorkspaceError::DuplicateLabel {
                kind: "algebra",
                label,
            });
        }
        Ok(())
    }

    fn insert_bimodule(&mut self, m: Arc<Bimodule>) -> Result<(), WorkspaceError> {
        let label = m.label().to_string();
        if self.bimodules.insert(label.clone(), m).is_some() && !self.allow_override {
            return Err(WorkspaceError::DuplicateLabel {
                kind: "bimodule",
                label,
            });
        }
        Ok(())
    }

    /// Loads several files in dependency-friendly order (algebras first,
    /// then bimodules, then everything else). Invalid structures are
    /// reported, not inserted.
    pub fn load_files(
        &mut self,
        paths: &[std::path::PathBuf],
    ) -> Result<Vec<CheckOutcome>, WorkspaceError> {
        let mut specs = Vec::new();
        for p in paths {
            specs.push(Self::parse_file(p)?);
        }
        let order = |s: &SpecFile| match s {
            SpecFile::Algebra { .. } => 0,
            SpecFile::Bimodule { .. } => 1,
            _ => 2,
        };
        specs.sort_by_key(order);
        let mut outcomes = Vec::new();
        for spec in specs {
            outcomes.push(self.check_and_insert(spec)?);
        }
        Ok(outcomes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::algebra_to_spec;

    #[test]
    fn builtins_resolve() {
        let ws = Workspace::with_builtins();
        assert!(ws.algebra("t4").is_ok());
        assert!(ws.bimodule("t4_adjoint").is_ok());
        assert!(ws.algebra("nope").is_err());
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let mut ws = Workspace::with_builtins();
        let spec = algebra_to_spec(&crate::corpus::t4());
        assert!(matches!(
            ws.check_and_insert(spec),
            Err(WorkspaceError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn check_reports_invalid_algebras() {
        let mut ws = Workspace::new();
        let (mu, alpha, beta) = crate::corpus::t4_perturbed_data();
        let spec = SpecFile::Algebra {
            label: "bad".into(),
            dim: 4,
            mu: crate::json::tensor_to_value(&mu),
            alpha: crate::json::matrix_to_json(&alpha),
            beta: crate::json::matrix_to_json(&beta),
        };
        let outcome = ws.check_and_insert(spec).unwrap();
        assert!(!outcome.valid);
        assert!(outcome
            .violations
            .iter()
            .any(|v| v.contains("bihom associativity")));
        assert!(ws.algebras.is_empty());
    }

    #[test]
    fn remark_pair_checks_as_infeasible() {
        let mut ws = Workspace::new();
        let spec = crate::json::splitting_pair_to_spec("remark_pair", &crate::corpus::remark_pair());
        let outcome = ws.check_and_insert(spec).unwrap();
        assert!(!outcome.valid);
    }
}
