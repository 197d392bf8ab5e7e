//! Reproduction of the worked examples against a golden file.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockStructure;
use crate::error::{Error, Result};
use crate::linalg::{dot, rat_vec, sub, subsets, RatVec};
use crate::polymatroid::{check_exchange, CountVec};
use crate::polytope::Polytope;
use crate::relations::{
    divides_exactly, lift_relation, monomial_from_vertex, plucker_vars, reduce_by_common_gcd, three_term_relations,
    vars, verify_balanced_identity, Monomial, MultiPoly,
};
use crate::secondary::{
    char_vector_point, complementary_pair_order, reorder, secondary_polytope, weight_config, EnumOptions,
};

/// The golden file shipped with the crate.
pub const DEFAULT_GOLDEN: &str = include_str!("../data/golden.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Golden {
    pub secondary: Vec<SecondaryGolden>,
    pub hypersimplex: Vec<HypersimplexGolden>,
    pub exchange: Vec<ExchangeGolden>,
    pub relations: Vec<RelationGolden>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelOrder {
    Lex,
    /// See [`complementary_pair_order`].
    Pairs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondaryGolden {
    pub id: String,
    pub d: usize,
    pub blocks: Vec<usize>,
    pub label_order: LabelOrder,
    pub triangulations: usize,
    pub char_vectors: Vec<Vec<u64>>,
    pub sigma_dim: isize,
    pub sigma_vertices: usize,
    #[serde(default)]
    pub sigma_lattice_points: Option<usize>,
    #[serde(default)]
    pub sigma_contains: Vec<Vec<u64>>,
    /// Coordinate whose level sets cut the vertices into two parallel squares.
    #[serde(default)]
    pub square_layers: Option<usize>,
    /// Vertex off the affine hull of all other vertices.
    #[serde(default)]
    pub apex: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypersimplexGolden {
    pub id: String,
    pub d: usize,
    pub blocks: Vec<usize>,
    pub images: Vec<(Vec<u32>, usize)>,
    pub hull_vertices: usize,
    pub edge_interior: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExchangeGolden {
    pub id: String,
    pub bases: Vec<CountVec>,
    pub expected: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftGolden {
    pub multiplier: String,
    pub combination: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialSource {
    Vertices,
    LatticePoints,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationGolden {
    pub id: String,
    pub blocks: Vec<usize>,
    pub source: MonomialSource,
    pub reduce_gcd: bool,
    pub monomials: BTreeMap<String, String>,
    /// Named monomials not read off the secondary polytope.
    #[serde(default)]
    pub extra: Vec<String>,
    pub lifts: Vec<LiftGolden>,
    #[serde(default)]
    pub quadric_map: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub balanced_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Golden {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("golden file: {e}")))
    }

    pub fn ids(&self) -> BTreeSet<String> {
        self.secondary
            .iter()
            .map(|g| g.id.clone())
            .chain(self.hypersimplex.iter().map(|g| g.id.clone()))
            .chain(self.exchange.iter().map(|g| g.id.clone()))
            .chain(self.relations.iter().map(|g| g.id.clone()))
            .collect()
    }
}

struct Recorder {
    id: String,
    out: Vec<CheckOutcome>,
}

impl Recorder {
    fn new(id: &str) -> Self {
        Self { id: id.to_string(), out: Vec::new() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.out.push(CheckOutcome { id: self.id.clone(), check: name.into(), passed, detail: detail.into() });
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, got: T, want: T) {
        let passed = got == want;
        let detail = if passed { format!("{got:?}") } else { format!("got {got:?}, expected {want:?}") };
        self.check(name, passed, detail);
    }

    /// Records an error from a whole example as a failed check.
    fn guard(&mut self, name: &str, r: Result<()>) {
        if let Err(e) = r {
            self.check(name, false, e.to_string());
        }
    }
}

/// Runs every example, or only those whose id equals `only`.
pub fn verify_examples(golden: &Golden, only: Option<&str>) -> Vec<CheckOutcome> {
    let wanted = |id: &str| only.is_none_or(|o| o == id);
    let mut out = Vec::new();
    for g in golden.hypersimplex.iter().filter(|g| wanted(&g.id)) {
        let mut r = Recorder::new(&g.id);
        let res = check_hypersimplex(g, &mut r);
        r.guard("hypersimplex", res);
        out.extend(r.out);
    }
    for g in golden.secondary.iter().filter(|g| wanted(&g.id)) {
        let mut r = Recorder::new(&g.id);
        let res = check_secondary(g, &mut r);
        r.guard("secondary", res);
        out.extend(r.out);
    }
    for g in golden.exchange.iter().filter(|g| wanted(&g.id)) {
        let mut r = Recorder::new(&g.id);
        let bases: BTreeSet<CountVec> = g.bases.iter().cloned().collect();
        match check_exchange(&bases) {
            Ok(v) => r.expect_eq(&format!("exchange {:?}", g.bases), v, g.expected),
            Err(e) => r.check("exchange", false, e.to_string()),
        }
        out.extend(r.out);
    }
    for g in golden.relations.iter().filter(|g| wanted(&g.id)) {
        let mut r = Recorder::new(&g.id);
        let res = check_relations(g, &mut r);
        r.guard("relations", res);
        out.extend(r.out);
    }
    out
}

fn check_hypersimplex(g: &HypersimplexGolden, r: &mut Recorder) -> Result<()> {
    let blocks = BlockStructure::new(g.blocks.clone())?;
    let images: BTreeMap<Vec<u32>, usize> =
        subsets(blocks.n(), g.d).iter().map(|s| blocks.project_subset(s)).counts().into_iter().collect();
    r.expect_eq("image multiplicities", images, g.images.iter().cloned().collect());
    let hull = blocks.projected_hypersimplex(g.d)?;
    r.expect_eq("hull vertices", hull.vertices().len(), g.hull_vertices);
    for p in &g.edge_interior {
        let x = rat_vec(&p.iter().map(|&c| i64::from(c)).collect_vec());
        let on_edge = hull.edges().into_iter().any(|e| {
            let (a, b) = hull.edge_points(e);
            Polytope::hull(&[a.clone(), b.clone()]).map(|s| s.contains(&x)).unwrap_or(false)
        });
        r.check(
            &format!("{p:?} interior to an edge"),
            on_edge && !hull.is_vertex(&x),
            format!("vertex: {}", hull.is_vertex(&x)),
        );
    }
    Ok(())
}

fn u64_point(v: &[u64]) -> RatVec {
    char_vector_point(v)
}

fn is_square(p: &Polytope) -> bool {
    if p.affine_dim() != 2 || p.vertices().len() != 4 {
        return false;
    }
    let sq = |a: &RatVec, b: &RatVec| {
        let d = sub(a, b);
        dot(&d, &d)
    };
    let edges = p.edges();
    let lens = edges.iter().map(|&e| {
        let (a, b) = p.edge_points(e);
        sq(a, b)
    });
    let v = p.vertices();
    let diagonals = (0..4)
        .tuple_combinations()
        .filter(|&(i, j)| !p.has_edge(&v[i], &v[j]))
        .map(|(i, j)| sq(&v[i], &v[j]))
        .collect_vec();
    edges.len() == 4 && lens.dedup().count() == 1 && diagonals.len() == 2 && diagonals[0] == diagonals[1]
}

fn check_secondary(g: &SecondaryGolden, r: &mut Recorder) -> Result<()> {
    let blocks = BlockStructure::new(g.blocks.clone())?;
    let config = weight_config(g.d, &blocks)?;
    let sec = secondary_polytope(&config, EnumOptions::default())?;
    r.expect_eq("triangulations", sec.triangulations.len(), g.triangulations);
    let perm = match g.label_order {
        LabelOrder::Lex => (0..config.len()).collect_vec(),
        LabelOrder::Pairs => complementary_pair_order(g.d, blocks.n())
            .ok_or_else(|| Error::Invalid(format!("pair order needs n = 2d, got d = {}, n = {}", g.d, blocks.n())))?,
    };
    let got: BTreeSet<Vec<u64>> = sec.char_vectors.iter().map(|v| reorder(v, &perm)).collect();
    r.expect_eq("char vectors", got, g.char_vectors.iter().cloned().collect());
    let sigma = &sec.polytope;
    r.expect_eq("sigma dimension", sigma.affine_dim(), g.sigma_dim);
    r.expect_eq("sigma vertices", sigma.vertices().len(), g.sigma_vertices);
    // golden points are in the golden label order; map them back to labels
    let unorder = |v: &[u64]| {
        let mut out = vec![0u64; v.len()];
        for (k, &label) in perm.iter().enumerate() {
            out[label] = v[k];
        }
        out
    };
    if let Some(n) = g.sigma_lattice_points {
        r.expect_eq("sigma lattice points", sigma.lattice_points().len(), n);
    }
    for p in &g.sigma_contains {
        r.check(&format!("sigma contains {p:?}"), sigma.contains(&u64_point(&unorder(p))), "");
    }
    if let Some(coord) = g.square_layers {
        let layers = sigma.vertices().iter().cloned().into_group_map_by(|v| v[coord].clone());
        let squares = layers.values().all(|vs| Polytope::hull(vs).map(|q| is_square(&q)).unwrap_or(false));
        r.check("two parallel squares", layers.len() == 2 && squares, format!("{} layers", layers.len()));
    }
    if let Some(apex) = &g.apex {
        let apex = u64_point(&unorder(apex));
        let base = sigma.vertices().iter().filter(|v| **v != apex).cloned().collect_vec();
        let cone = sigma.is_vertex(&apex)
            && Polytope::hull(&base)
                .map(|b| b.affine_dim() + 1 == sigma.affine_dim() && sigma.has_face(&b))
                .unwrap_or(false);
        r.check("cone over the remaining vertices", cone, format!("{} base vertices", base.len()));
    }
    Ok(())
}

fn check_relations(g: &RelationGolden, r: &mut Recorder) -> Result<()> {
    let blocks = BlockStructure::new(g.blocks.clone())?;
    let (d, n) = (2, blocks.n());
    let pv = plucker_vars(d, n);
    let named: Vec<(String, Monomial)> =
        g.monomials.iter().map(|(k, s)| Ok((k.clone(), Monomial::parse(pv.clone(), s)?))).collect::<Result<_>>()?;

    let config = weight_config(d, &blocks)?;
    let sec = secondary_polytope(&config, EnumOptions::default())?;
    let points: Vec<Vec<u64>> = match g.source {
        MonomialSource::Vertices => sec
            .polytope
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| x.to_integer().try_into().unwrap_or(0)).collect())
            .collect(),
        MonomialSource::LatticePoints => sec
            .polytope
            .lattice_points()
            .iter()
            .map(|v| v.iter().map(|x| x.try_into().unwrap_or(0)).collect())
            .collect(),
    };
    let mut derived = points.iter().map(|p| monomial_from_vertex(p, &config)).collect::<Result<Vec<_>>>()?;
    if g.reduce_gcd {
        derived = reduce_by_common_gcd(&derived)?;
    }
    let want: BTreeSet<String> =
        named.iter().filter(|(k, _)| !g.extra.contains(k)).map(|(_, m)| m.to_string()).collect();
    let got: BTreeSet<String> = derived.iter().map(|m| m.to_string()).collect();
    r.expect_eq("monomials from the secondary polytope", got, want);

    let rel = three_term_relations(d, n)?.remove(0);
    for lift in &g.lifts {
        let mult = Monomial::parse(pv.clone(), &lift.multiplier)?;
        let got = lift_relation(&rel, &mult, &named).map(|c| c.to_string());
        r.expect_eq(&format!("relation times {}", lift.multiplier), got, Some(lift.combination.clone()));
    }

    if let Some(map) = &g.quadric_map {
        let xyz = vars(&["x", "y", "z"]);
        let lookup = map
            .iter()
            .map(|(k, name)| {
                let m = &named
                    .iter()
                    .find(|(n, _)| n == name)
                    .ok_or_else(|| Error::Parse(format!("unknown monomial {name}")))?
                    .1;
                Ok((Monomial::parse(xyz.clone(), k)?, m.to_poly()))
            })
            .collect::<Result<Vec<_>>>()?;
        let [x, y, z] = [0, 1, 2].map(|i| MultiPoly::var(xyz.clone(), i));
        let linear = &(&x - &y) + &z;
        for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
            let image = (v * &linear).substitute_monomials(&lookup, Arc::clone(&pv))?;
            let q = divides_exactly(&image, &rel);
            r.check(
                &format!("{name}(x - y + z) divisible by the relation"),
                q.is_some(),
                q.map(|q| format!("quotient {q}")).unwrap_or_default(),
            );
        }
    }

    if g.balanced_identity {
        let rep = verify_balanced_identity()?;
        r.check(
            "quartic divisible by p - q + r",
            rep.quartic_divisible(),
            rep.quartic_quotient.as_ref().map(|q| q.to_string()).unwrap_or_default(),
        );
        r.check(
            "m5^4 form vanishes on the Grassmannian",
            rep.homogeneous_quotient.is_some() && rep.homogeneous_on.is_zero(),
            "",
        );
        r.check(
            "m5^2 form flagged as inhomogeneous",
            rep.printed_degree_mismatch() && rep.printed_quotient.is_none(),
            format!("term degrees {:?}", rep.printed_degrees),
        );
    }
    Ok(())
}
