//! Labeled point configurations, their triangulations and secondary polytopes.
//!
//! Points may repeat; each copy carries its own label. A triangulation of the
//! pair `(Conv(A), A)` is a set of full-dimensional labeled simplices that meet
//! pairwise in the hull of their shared labels and whose volumes add up to
//! the volume of `Conv(A)`. Labels may go unused.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::blocks::BlockStructure;
use crate::error::{Error, Result};
use crate::linalg::{rat_vec, subsets, IndexSubset, Matrix, Rat, RatVec};
use crate::polytope::{simplex_volume, Polytope};

pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledPoint {
    pub coords: Vec<i64>,
    /// The `d`-subset this weight came from, if any.
    pub subset: Option<IndexSubset>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledConfig {
    ambient_dim: usize,
    points: Vec<LabeledPoint>,
}

impl LabeledConfig {
    pub fn new(points: Vec<LabeledPoint>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Invalid("a configuration needs at least one point".into()));
        };
        let ambient_dim = first.coords.len();
        if points.iter().any(|p| p.coords.len() != ambient_dim) {
            return Err(Error::Shape("configuration points of different dimensions".into()));
        }
        Ok(Self { ambient_dim, points })
    }

    /// Unnamed points, labeled in the given order.
    pub fn from_points(points: &[Vec<i64>]) -> Result<Self> {
        Self::new(points.iter().map(|c| LabeledPoint { coords: c.clone(), subset: None }).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn coords(&self, label: usize) -> RatVec {
        rat_vec(&self.points[label].coords)
    }

    /// `x12`-style name for subset labels, `a<label>` otherwise.
    pub fn name(&self, label: usize) -> String {
        match &self.points[label].subset {
            Some(s) => format!("x{}", s.label()),
            None => format!("a{label}"),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|l| self.name(l)).collect()
    }

    pub fn hull(&self) -> Polytope {
        Polytope::hull(&(0..self.len()).map(|l| self.coords(l)).collect_vec()).expect("nonempty configuration")
    }

    fn simplex_hull(&self, s: &LabeledSimplex) -> Polytope {
        if s.labels.is_empty() {
            return Polytope::empty(self.ambient_dim);
        }
        Polytope::hull(&s.labels.iter().map(|&l| self.coords(l)).collect_vec()).expect("nonempty simplex")
    }
}

/// The weights `λ_r(e_I)` of all `d`-subsets `I`, labeled in lexicographic order.
pub fn weight_config(d: usize, blocks: &BlockStructure) -> Result<LabeledConfig> {
    let n = blocks.n();
    if d > n {
        return Err(Error::Invalid(format!("d = {d} exceeds n = {n}")));
    }
    let points = subsets(n, d)
        .into_iter()
        .map(|s| LabeledPoint {
            coords: blocks.project_subset(&s).iter().map(|&x| i64::from(x)).collect(),
            subset: Some(s),
        })
        .collect();
    LabeledConfig::new(points)
}

/// A set of labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledSimplex {
    labels: Vec<usize>,
}

impl LabeledSimplex {
    pub fn new(labels: impl IntoIterator<Item = usize>) -> Self {
        let labels: BTreeSet<usize> = labels.into_iter().collect();
        Self { labels: labels.into_iter().collect() }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn shared(&self, other: &LabeledSimplex) -> LabeledSimplex {
        Self { labels: self.labels.iter().copied().filter(|l| other.labels.contains(l)).collect() }
    }

    /// Lattice-normalized volume of the simplex spanned in `config`.
    pub fn volume(&self, config: &LabeledConfig) -> BigInt {
        simplex_volume(&self.labels.iter().map(|&l| config.coords(l)).collect_vec())
    }
}

/// Whether two labeled simplices meet exactly in the hull of their shared labels.
pub fn compatible(config: &LabeledConfig, a: &LabeledSimplex, b: &LabeledSimplex) -> Result<bool> {
    let meet = config.simplex_hull(a).intersect(&config.simplex_hull(b))?;
    Ok(meet == config.simplex_hull(&a.shared(b)))
}

/// Same verdict as [`compatible`], decided by the circuit criterion: the
/// simplices meet properly unless some circuit of their union has its positive
/// part in `a` and its negative part in `b`.
pub fn compatible_by_circuits(config: &LabeledConfig, a: &LabeledSimplex, b: &LabeledSimplex) -> bool {
    let union: Vec<usize> = a.labels.iter().chain(&b.labels).copied().sorted().dedup().collect();
    let columns = union
        .iter()
        .map(|&l| config.coords(l).into_iter().chain(std::iter::once(Rat::one())).collect::<RatVec>())
        .collect_vec();
    let kernel = Matrix::from_rows(columns).expect("equal widths").transpose().kernel_basis();
    let r = kernel.len();
    if r == 0 {
        return true;
    }
    let conforms = |c: &[Rat]| {
        union
            .iter()
            .zip(c)
            .all(|(l, x)| (!x.is_positive() || a.labels.contains(l)) && (!x.is_negative() || b.labels.contains(l)))
    };
    for zeros in (0..union.len()).combinations(r - 1) {
        let rows = zeros.iter().map(|&z| kernel.iter().map(|k| k[z].clone()).collect::<RatVec>()).collect_vec();
        let coeffs = if rows.is_empty() {
            vec![vec![Rat::one()]]
        } else {
            Matrix::from_rows(rows).expect("equal widths").kernel_basis()
        };
        if coeffs.len() != 1 {
            continue;
        }
        let circuit: RatVec = (0..union.len())
            .map(|i| kernel.iter().zip(&coeffs[0]).fold(Rat::zero(), |acc, (k, t)| acc + &k[i] * t))
            .collect();
        let flipped: RatVec = circuit.iter().map(|x| -x).collect();
        if conforms(&circuit) || conforms(&flipped) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    cells: Vec<LabeledSimplex>,
}

impl Triangulation {
    pub fn new(cells: impl IntoIterator<Item = LabeledSimplex>) -> Self {
        let mut cells: Vec<LabeledSimplex> = cells.into_iter().collect();
        cells.sort();
        cells.dedup();
        Self { cells }
    }

    pub fn cells(&self) -> &[LabeledSimplex] {
        &self.cells
    }

    pub fn used_labels(&self) -> BTreeSet<usize> {
        self.cells.iter().flat_map(|c| c.labels.iter().copied()).collect()
    }
}

/// Per-label volume sums, indexed by label.
pub type CharVector = Vec<u64>;

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    /// Largest number of labels accepted.
    pub cap: usize,
    /// Worker threads for the search; 1 runs inline.
    pub jobs: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP, jobs: 1 }
    }
}

struct Search<'a> {
    volumes: Vec<BigInt>,
    compat: Vec<Vec<bool>>,
    cells: &'a [LabeledSimplex],
}

impl Search<'_> {
    fn run(&self, start: usize, chosen: &mut Vec<usize>, remaining: &BigInt, out: &mut Vec<Triangulation>) {
        if remaining.is_zero() {
            out.push(Triangulation::new(chosen.iter().map(|&i| self.cells[i].clone())));
            return;
        }
        for i in start..self.cells.len() {
            if self.volumes[i] > *remaining || !chosen.iter().all(|&j| self.compat[i][j]) {
                continue;
            }
            chosen.push(i);
            self.run(i + 1, chosen, &(remaining - &self.volumes[i]), out);
            chosen.pop();
        }
    }
}

fn parallel_map<T: Send>(count: usize, jobs: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    if jobs <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(count));
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(count) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let value = f(i);
                results.lock().expect("worker panicked").push((i, value));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, v)| v).collect()
}

/// Full-dimensional labeled simplices of the configuration.
pub fn full_simplices(config: &LabeledConfig) -> Vec<LabeledSimplex> {
    let k = config.hull().affine_dim() as usize;
    (0..config.len())
        .combinations(k + 1)
        .filter(|labels| {
            if k == 0 {
                return true;
            }
            let base = config.coords(labels[0]);
            let rows = labels[1..].iter().map(|&l| crate::linalg::sub(&config.coords(l), &base)).collect_vec();
            Matrix::from_rows(rows).map(|m| m.rank() == k).unwrap_or(false)
        })
        .map(LabeledSimplex::new)
        .collect()
}

/// Every triangulation of `(Conv(A), A)`, by exhaustive exact-cover search.
pub fn enumerate_triangulations(config: &LabeledConfig, opts: EnumOptions) -> Result<Vec<Triangulation>> {
    if config.len() > opts.cap {
        return Err(Error::CapExceeded { found: config.len(), cap: opts.cap });
    }
    let cells = full_simplices(config);
    if config.hull().affine_dim() == 0 {
        return Ok(cells.into_iter().map(|c| Triangulation::new([c])).collect());
    }
    let total = config.hull().normalized_volume()?;
    let volumes: Vec<BigInt> = cells.iter().map(|c| c.volume(config)).collect();
    let upper = parallel_map(cells.len(), opts.jobs, |i| {
        (i + 1..cells.len()).map(|j| compatible_by_circuits(config, &cells[i], &cells[j])).collect::<Vec<bool>>()
    });
    let compat = (0..cells.len())
        .map(|i| {
            (0..cells.len())
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Less => upper[i][j - i - 1],
                    std::cmp::Ordering::Greater => upper[j][i - j - 1],
                })
                .collect()
        })
        .collect();
    let search = Search { volumes, compat, cells: &cells };
    let branches = parallel_map(cells.len(), opts.jobs, |first| {
        let mut out = Vec::new();
        if search.volumes[first] <= total {
            search.run(first + 1, &mut vec![first], &(&total - &search.volumes[first]), &mut out);
        }
        out
    });
    let mut all: Vec<Triangulation> = branches.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// Sum of the volumes of the cells containing each label.
pub fn char_function(t: &Triangulation, config: &LabeledConfig) -> CharVector {
    let mut phi = vec![0u64; config.len()];
    for cell in t.cells() {
        let vol = cell.volume(config).to_u64().expect("volume fits in u64");
        for &l in cell.labels() {
            phi[l] += vol;
        }
    }
    phi
}

/// Triangulations, their characteristic vectors and the hull of those vectors.
#[derive(Debug, Clone)]
pub struct SecondaryPolytope {
    pub triangulations: Vec<Triangulation>,
    pub char_vectors: Vec<CharVector>,
    pub polytope: Polytope,
    /// Whether each triangulation's vector is a vertex of the hull.
    pub is_vertex: Vec<bool>,
}

pub fn secondary_polytope(config: &LabeledConfig, opts: EnumOptions) -> Result<SecondaryPolytope> {
    let triangulations = enumerate_triangulations(config, opts)?;
    let char_vectors: Vec<CharVector> = triangulations.iter().map(|t| char_function(t, config)).collect();
    let points = char_vectors.iter().map(|v| char_vector_point(v)).collect_vec();
    let polytope = Polytope::hull(&points)?;
    let is_vertex = points.iter().map(|p| polytope.is_vertex(p)).collect();
    Ok(SecondaryPolytope { triangulations, char_vectors, polytope, is_vertex })
}

/// Label permutation listing each subset containing the first index followed
/// by its complement: `12, 34, 13, 24, 14, 23` for `d = 2, n = 4`. Only
/// defined when `n = 2d`.
pub fn complementary_pair_order(d: usize, n: usize) -> Option<Vec<usize>> {
    if n != 2 * d || d == 0 {
        return None;
    }
    let all = subsets(n, d);
    let pos = |s: &IndexSubset| all.iter().position(|t| t == s).expect("d-subset");
    Some(all.iter().filter(|s| s.contains(0)).flat_map(|s| [pos(s), pos(&s.complement())]).collect())
}

/// `v` listed in the order of `perm`.
pub fn reorder<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| v[i].clone()).collect()
}

pub fn char_vector_point(v: &[u64]) -> RatVec {
    rat_vec(&v.iter().map(|&x| x as i64).collect_vec())
}
