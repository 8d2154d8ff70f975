//! JSON encodings for every structure the command line consumes or emits.
//!
//! Rationals are encoded as JSON integers when the denominator is 1 and the
//! numerator is small enough to be exact in JSON, and as strings `"p/q"`
//! otherwise. Tensors are nested arrays; an algebra file looks like
//!
//! ```json
//! { "kind": "algebra", "label": "t4", "dim": 4,
//!   "mu": [[[0,...],...],...], "alpha": [[...]], "beta": [[...]] }
//! ```

use crate::matrix::Matrix;
use crate::scalar::{format_rat, parse_rat, Rat};
use crate::tensor::Tensor;
use num_traits::{One, Signed, ToPrimitive};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// A rational with the integer-or-string JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatJson(pub Rat);

impl Serialize for RatJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let r = &self.0;
        if r.denom().is_one() && r.numer().abs() <= num_bigint::BigInt::from(1i64 << 53) {
            if let Some(n) = r.numer().to_i64() {
                return serializer.serialize_i64(n);
            }
        }
        serializer.serialize_str(&format_rat(r))
    }
}

impl<'de> Deserialize<'de> for RatJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        rat_from_value(&v).map(RatJson).map_err(D::Error::custom)
    }
}

pub fn rat_from_value(v: &serde_json::Value) -> Result<Rat, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::scalar::rat(i))
            } else {
                Err(format!("non-integer number {n}; use a \"p/q\" string"))
            }
        }
        serde_json::Value::String(s) => parse_rat(s),
        other => Err(format!("expected integer or \"p/q\" string, got {other}")),
    }
}

pub fn rat_to_value(r: &Rat) -> serde_json::Value {
    if r.denom().is_one() && r.numer().abs() <= num_bigint::BigInt::from(1i64 << 53) {
        if let Some(n) = r.numer().to_i64() {
            return serde_json::Value::from(n);
        }
    }
    serde_json::Value::from(format_rat(r))
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<RatJson>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().cloned().map(RatJson).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<RatJson>]) -> Result<Matrix, String> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err("ragged matrix".into());
    }
    let _ = r;
    Ok(Matrix::from_rows(
        rows.iter()
            .map(|row| row.iter().map(|x| x.0.clone()).collect())
            .collect(),
    ))
}

/// Nested-array encoding of a tensor with known shape.
pub fn tensor_to_value(t: &Tensor) -> serde_json::Value {
    fn build(dims: &[usize], flat: &[Rat]) -> serde_json::Value {
        if dims.len() == 1 {
            return serde_json::Value::Array(flat.iter().map(rat_to_value).collect());
        }
        let chunk = flat.len() / dims[0];
        serde_json::Value::Array(
            (0..dims[0])
                .map(|i| build(&dims[1..], &flat[i * chunk..(i + 1) * chunk]))
                .collect(),
        )
    }
    if t.dims().is_empty() {
        return serde_json::Value::Array(vec![]);
    }
    build(t.dims(), t.flat())
}

pub fn tensor_from_value(v: &serde_json::Value, dims: &[usize]) -> Result<Tensor, String> {
    fn gather(v: &serde_json::Value, dims: &[usize], out: &mut Vec<Rat>) -> Result<(), String> {
        let arr = v
            .as_array()
            .ok_or_else(|| format!("expected array of length {}, got {v}", dims[0]))?;
        if arr.len() != dims[0] {
            return Err(format!("expected array of length {}, got {}", dims[0], arr.len()));
        }
        if dims.len() == 1 {
            for x in arr {
                out.push(rat_from_value(x)?);
            }
        } else {
            for x in arr {
                gather(x, &dims[1..], out)?;
            }
        }
        Ok(())
    }
    let mut flat = Vec::with_capacity(dims.iter().product());
    if dims.iter().product::<usize>() > 0 {
        gather(v, dims, &mut flat)?;
    }
    Ok(Tensor::from_flat(dims.to_vec(), flat))
}

/// One block of a graded product: input degrees plus the coefficient tensor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockSpec {
    pub degrees: Vec<usize>,
    pub tensor: serde_json::Value,
}

/// Everything the CLI can load, discriminated by the `kind` field.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecFile {
    Algebra {
        label: String,
        dim: usize,
        mu: serde_json::Value,
        alpha: Vec<Vec<RatJson>>,
        beta: Vec<Vec<RatJson>>,
    },
    Bimodule {
        label: String,
        dim: usize,
        base: String,
        left: serde_json::Value,
        right: serde_json::Value,
        alpha_m: Vec<Vec<RatJson>>,
        beta_m: Vec<Vec<RatJson>>,
    },
    Cochain {
        label: String,
        base: String,
        /// `"self"` or a bimodule label.
        coefficients: String,
        arity: usize,
        tensor: serde_json::Value,
    },
    Deformation {
        label: String,
        base: String,
        order: usize,
        terms: Vec<serde_json::Value>,
    },
    Ainfty {
        label: String,
        dims: Vec<usize>,
        alpha: Vec<Vec<Vec<RatJson>>>,
        beta: Vec<Vec<Vec<RatJson>>>,
        products: BTreeMap<String, Vec<BlockSpec>>,
    },
    Extension {
        label: String,
        base: String,
        module: String,
        total_mu: serde_json::Value,
        total_alpha: Vec<Vec<RatJson>>,
        total_beta: Vec<Vec<RatJson>>,
        incl: Vec<Vec<RatJson>>,
        proj: Vec<Vec<RatJson>>,
        splitting: Vec<Vec<RatJson>>,
    },
    CrossedModule {
        label: String,
        /// label of the algebra `A` (the crossed-module top)
        a: String,
        /// label of the algebra `B` (the base)
        b: String,
        dt: Vec<Vec<RatJson>>,
        action_left: serde_json::Value,
        action_right: serde_json::Value,
    },
    SplittingPair {
        label: String,
        e_alpha: Vec<Vec<RatJson>>,
        e_beta: Vec<Vec<RatJson>>,
        a_alpha: Vec<Vec<RatJson>>,
        a_beta: Vec<Vec<RatJson>>,
        j: Vec<Vec<RatJson>>,
    },
}

impl SpecFile {
    pub fn label(&self) -> &str {
        match self {
            SpecFile::Algebra { label, .. }
            | SpecFile::Bimodule { label, .. }
            | SpecFile::Cochain { label, .. }
            | SpecFile::Deformation { label, .. }
            | SpecFile::Ainfty { label, .. }
            | SpecFile::Extension { label, .. }
            | SpecFile::CrossedModule { label, .. }
            | SpecFile::SplittingPair { label, .. } => label,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpecFile::Algebra { .. } => "algebra",
            SpecFile::Bimodule { .. } => "bimodule",
            SpecFile::Cochain { .. } => "cochain",
            SpecFile::Deformation { .. } => "deformation",
            SpecFile::Ainfty { .. } => "ainfty",
            SpecFile::Extension { .. } => "extension",
            SpecFile::CrossedModule { .. } => "crossed_module",
            SpecFile::SplittingPair { .. } => "splitting_pair",
        }
    }
}

pub fn algebra_to_spec(a: &crate::algebra::BihomAlgebra) -> SpecFile {
    SpecFile::Algebra {
        label: a.label().to_string(),
        dim: a.dim(),
        mu: tensor_to_value(a.mu()),
        alpha: matrix_to_json(a.alpha()),
        beta: matrix_to_json(a.beta()),
    }
}

pub fn bimodule_to_spec(m: &crate::bimodule::Bimodule) -> SpecFile {
    SpecFile::Bimodule {
        label: m.label().to_string(),
        dim: m.dim(),
        base: m.base().label().to_string(),
        left: tensor_to_value(m.left()),
        right: tensor_to_value(m.right()),
        alpha_m: matrix_to_json(m.alpha_m()),
        beta_m: matrix_to_json(m.beta_m()),
    }
}

pub fn deformation_to_spec(label: &str, d: &crate::deformation::TruncatedDeformation) -> SpecFile {
    SpecFile::Deformation {
        label: label.to_string(),
        base: d.base().label().to_string(),
        order: d.order(),
        terms: d
            .terms()
            .iter()
            .map(|t| tensor_to_value(t.tensor()))
            .collect(),
    }
}

pub fn cochain_to_spec(label: &str, c: &crate::cochain::Cochain) -> SpecFile {
    SpecFile::Cochain {
        label: label.to_string(),
        base: c.algebra().label().to_string(),
        coefficients: c.coeffs().label(),
        arity: c.arity(),
        tensor: tensor_to_value(c.tensor()),
    }
}

pub fn splitting_pair_to_spec(label: &str, p: &crate::corpus::SplittingPair) -> SpecFile {
    SpecFile::SplittingPair {
        label: label.to_string(),
        e_alpha: matrix_to_json(&p.e_alpha),
        e_beta: matrix_to_json(&p.e_beta),
        a_alpha: matrix_to_json(&p.a_alpha),
        a_beta: matrix_to_json(&p.a_beta),
        j: matrix_to_json(&p.j),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::{frac, rat};
    use proptest::prelude::*;

    #[test]
    fn rationals_roundtrip_via_json() {
        for r in [rat(0), rat(7), rat(-12), frac(22, 7), frac(-3, 8)] {
            let s = serde_json::to_string(&RatJson(r.clone())).unwrap();
            let back: RatJson = serde_json::from_str(&s).unwrap();
            assert_eq!(back.0, r);
        }
        // big numerators fall back to strings
        let big = parse_rat("123456789012345678901234567890/7").unwrap();
        let s = serde_json::to_string(&RatJson(big.clone())).unwrap();
        assert!(s.starts_with('"'));
        let back: RatJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, big);
    }

    proptest! {
        #[test]
        fn arbitrary_fractions_roundtrip(n in -10000i64..10000, d in 1i64..10000) {
            let r = frac(n, d);
            let s = serde_json::to_string(&RatJson(r.clone())).unwrap();
            let back: RatJson = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back.0, r);
        }
    }

    #[test]
    fn algebra_spec_roundtrips_bit_identically() {
        for alg in corpus::standard_algebras() {
            let spec = algebra_to_spec(&alg);
            let text = serde_json::to_string_pretty(&spec).unwrap();
            let parsed: SpecFile = serde_json::from_str(&text).unwrap();
            let SpecFile::Algebra {
                label,
                dim,
                mu,
                alpha,
                beta,
            } = parsed
            else {
                panic!("kind changed in flight")
            };
            assert_eq!(label, alg.label());
            assert_eq!(dim, alg.dim());
            let mu = tensor_from_value(&mu, &[dim, dim, dim]).unwrap();
            let alpha = matrix_from_json(&alpha).unwrap();
            let beta = matrix_from_json(&beta).unwrap();
            let rebuilt = crate::algebra::BihomAlgebra::validate(label, mu, alpha, beta).unwrap();
            assert_eq!(&rebuilt, alg.as_ref());
        }
    }

    #[test]
    fn unknown_kind_is_a_parse_error() {
        let err = serde_json::from_str::<SpecFile>(r#"{"kind": "sheaf", "label": "x"}"#);
        assert!(err.is_err());
    }

    #[test]
    fn tensor_shape_errors_are_reported() {
        let v: serde_json::Value = serde_json::from_str("[[1, 2], [3]]").unwrap();
        assert!(tensor_from_value(&v, &[2, 2]).is_err());
    }
}
