//! JSON interchange. Rationals travel as strings `"p/q"` (or `"p"` when
//! integral); subsets are 1-based index lists.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::grassmann::PluckerVector;
use crate::linalg::{parse_rat, IndexSubset, Matrix, Rat, RatVec};
use crate::polymatroid::CountVec;
use crate::polytope::Polytope;
use crate::relations::MultiPoly;

fn rat_str(x: &Rat) -> String {
    x.to_string()
}

fn rat_strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

/// Accepts `"p/q"` strings and JSON integers.
fn value_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n
            .as_i64()
            .map(|x| Rat::from_integer(BigInt::from(x)))
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}; write rationals as \"p/q\""))),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

fn value_rows(v: &Value) -> Result<Vec<RatVec>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array().ok_or_else(|| Error::Parse("expected a row array".into()))?.iter().map(value_rat).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub ambient_dim: usize,
    pub affine_dim: isize,
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<FacetJson>,
    pub equations: Vec<FacetJson>,
    /// Pairs of indices into `vertices`.
    pub edges: Vec<[usize; 2]>,
}

pub fn polytope_to_json(p: &Polytope) -> PolytopeJson {
    let facet = |f: &crate::polytope::Facet| FacetJson {
        normal: f.normal.iter().map(BigInt::to_string).collect(),
        offset: rat_str(&f.offset),
    };
    PolytopeJson {
        ambient_dim: p.ambient_dim(),
        affine_dim: p.affine_dim(),
        vertices: p.vertices().iter().map(|v| rat_strs(v)).collect(),
        facets: p.facets().iter().map(facet).collect(),
        equations: p.equations().iter().map(facet).collect(),
        edges: p.edges().into_iter().map(|e| [e.0, e.1]).collect(),
    }
}

/// Rebuilds the polytope from its vertices; the other fields are derived data.
pub fn polytope_from_json(j: &PolytopeJson) -> Result<Polytope> {
    if j.vertices.is_empty() {
        return Ok(Polytope::empty(j.ambient_dim));
    }
    let verts = j
        .vertices
        .iter()
        .map(|v| v.iter().map(|s| parse_rat(s)).collect::<Result<RatVec>>())
        .collect::<Result<Vec<_>>>()?;
    Polytope::hull(&verts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluckerEntry {
    pub subset: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluckerJson {
    pub d: usize,
    pub n: usize,
    pub coords: Vec<PluckerEntry>,
}

pub fn plucker_to_json(p: &PluckerVector) -> PluckerJson {
    PluckerJson {
        d: p.d(),
        n: p.n(),
        coords: p
            .coords()
            .iter()
            .map(|(s, v)| PluckerEntry { subset: s.indices().iter().map(|i| i + 1).collect(), value: rat_str(v) })
            .collect(),
    }
}

pub fn plucker_from_json(j: &PluckerJson) -> Result<PluckerVector> {
    let coords = j
        .coords
        .iter()
        .map(|e| {
            let ix = e
                .subset
                .iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| Error::Subset("indices are 1-based".into())))
                .collect::<Result<Vec<_>>>()?;
            Ok((IndexSubset::new(ix, j.n)?, parse_rat(&e.value)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    PluckerVector::new(j.d, j.n, coords)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &MultiPoly) -> PolyJson {
    PolyJson {
        vars: p.vars().to_vec(),
        terms: p.terms().iter().map(|(e, c)| TermJson { exps: e.clone(), coeff: rat_str(c) }).collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<MultiPoly> {
    let terms = j.terms.iter().map(|t| Ok((t.exps.clone(), parse_rat(&t.coeff)?))).collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(Arc::new(j.vars.clone()), terms)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.rows().map(|r| Value::from(rat_strs(r))).collect())
}

/// A matrix given as a JSON array of rows, or as an object with a `rows` field.
pub fn matrix_from_value(v: &Value) -> Result<Matrix> {
    let rows = match v {
        Value::Object(o) => o.get("rows").ok_or_else(|| Error::Parse("matrix object without \"rows\"".into()))?,
        other => other,
    };
    let rows = value_rows(rows)?;
    if rows.is_empty() {
        return Err(Error::Parse("matrix without rows".into()));
    }
    Matrix::from_rows(rows)
}

/// Parses either JSON or a whitespace grid with one row per line.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return matrix_from_value(&v);
    }
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(parse_rat).collect::<Result<RatVec>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("matrix without rows".into()));
    }
    Matrix::from_rows(rows)
}

/// A list of count vectors, e.g. `[[1,1,1],[1,2,0]]`, or an object with a `bases` field.
pub fn parse_bases(text: &str) -> Result<Vec<CountVec>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let list = match &v {
        Value::Object(o) => o.get("bases").ok_or_else(|| Error::Parse("object without \"bases\"".into()))?,
        other => other,
    };
    serde_json::from_value(list.clone()).map_err(|e| Error::Parse(format!("bases: {e}")))
}

pub fn rat_vec_json(v: &[Rat]) -> Value {
    Value::from(rat_strs(v))
}

pub fn rat_vec_from_value(v: &Value) -> Result<RatVec> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array".into()))?.iter().map(value_rat).collect()
}

pub fn to_pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable")
}

/// Joins strings for one-line text output.
pub fn join_rats(v: &[Rat]) -> String {
    format!("({})", v.iter().join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::BlockStructure;
    use crate::grassmann::plucker;
    use crate::linalg::{rat, ratio};
    use crate::relations::three_term_relations;

    #[test]
    fn polytope_roundtrip() {
        let p = BlockStructure::parse("1,2,2").unwrap().projected_hypersimplex(3).unwrap();
        let j = polytope_to_json(&p);
        assert_eq!(j.vertices.len(), 4);
        let text = serde_json::to_string(&j).unwrap();
        let back: PolytopeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(polytope_from_json(&back).unwrap(), p);
    }

    #[test]
    fn plucker_roundtrip() {
        let m = Matrix::from_rows(vec![vec![rat(1), rat(0), ratio(1, 2)], vec![rat(0), rat(1), rat(3)]]).unwrap();
        let p = plucker(&m).unwrap();
        let j = plucker_to_json(&p);
        assert_eq!(j.coords[0].subset, vec![1, 2]);
        assert_eq!(j.coords[1].value, "3");
        assert_eq!(j.coords[2].value, "-1/2");
        assert_eq!(plucker_from_json(&j).unwrap(), p);
    }

    #[test]
    fn poly_roundtrip() {
        let rel = three_term_relations(2, 4).unwrap().remove(0);
        let j = poly_to_json(&rel);
        assert_eq!(j.vars.len(), 6);
        assert_eq!(poly_from_json(&j).unwrap(), rel);
    }

    #[test]
    fn matrix_formats() {
        let a = parse_matrix("[[1, \"1/2\"], [0, 3]]").unwrap();
        let b = parse_matrix("1 1/2\n# comment\n0 3\n").unwrap();
        let c = parse_matrix("{\"rows\": [[\"1\", \"1/2\"], [\"0\", \"3\"]]}").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(matrix_from_value(&matrix_to_json(&a)).unwrap(), a);
        assert!(parse_matrix("[[1.5]]").is_err());
        assert!(parse_matrix("").is_err());
    }

    #[test]
    fn bases_formats() {
        assert_eq!(parse_bases("[[1,1,1],[1,2,0]]").unwrap(), vec![vec![1, 1, 1], vec![1, 2, 0]]);
        assert_eq!(parse_bases("{\"bases\": [[2,0]]}").unwrap(), vec![vec![2, 0]]);
        assert!(parse_bases("[[-1]]").is_err());
    }
}
