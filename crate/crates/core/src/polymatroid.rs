//! Matroids on `[n]` and discrete polymatroids on multisets.
//!
//! Bases are stored explicitly. A discrete polymatroid of rank `d` on the
//! multiset with multiplicities `caps` is a set of nonnegative integer vectors
//! of modulus `d`, bounded by `caps`, satisfying the vector exchange axiom.
//! The block projection sends a matroid on `[n]` to a polymatroid on `[m]`
//! and [`lift_polymatroid`] pulls it back.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;

use crate::blocks::BlockStructure;
use crate::error::{Error, Result};
use crate::linalg::{rat, rat_vec, sub, subsets, to_int_vec, IndexSubset, RatVec};
use crate::polytope::Polytope;

/// Multiplicity vector of a sub-multiset.
pub type CountVec = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: BTreeSet<IndexSubset>,
}

impl Matroid {
    /// Matroid from a nonempty basis list on `[n]`. The exchange axiom is not
    /// enforced here; see [`Matroid::satisfies_exchange`].
    pub fn new(n: usize, bases: impl IntoIterator<Item = IndexSubset>) -> Result<Self> {
        let bases: BTreeSet<IndexSubset> = bases.into_iter().collect();
        let Some(first) = bases.first() else {
            return Err(Error::Bases("a matroid needs at least one basis".into()));
        };
        let rank = first.len();
        if let Some(b) = bases.iter().find(|b| b.len() != rank || b.ground() != n) {
            return Err(Error::Bases(format!("basis {b} does not have size {rank} in [{n}]")));
        }
        Ok(Self { n, rank, bases })
    }

    pub fn uniform(d: usize, n: usize) -> Self {
        Self { n, rank: d, bases: subsets(n, d).into_iter().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &BTreeSet<IndexSubset> {
        &self.bases
    }

    pub fn is_basis(&self, s: &IndexSubset) -> bool {
        self.bases.contains(s)
    }

    /// Symmetric-difference exchange: for bases `A`, `B` and `x ∈ A \ B` some
    /// `y ∈ B \ A` makes `A - x + y` a basis.
    pub fn satisfies_exchange(&self) -> bool {
        self.bases.iter().all(|a| {
            self.bases.iter().all(|b| {
                a.difference(b).indices().iter().all(|&x| {
                    b.difference(a).indices().iter().any(|&y| {
                        let mut swapped: Vec<usize> = a.indices().iter().copied().filter(|&i| i != x).collect();
                        swapped.push(y);
                        IndexSubset::new(swapped, self.n).map(|s| self.bases.contains(&s)).unwrap_or(false)
                    })
                })
            })
        })
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, s: &IndexSubset) -> usize {
        self.bases.iter().map(|b| b.indices().iter().filter(|&&i| s.contains(i)).count()).max().unwrap_or(0)
    }

    pub fn is_independent(&self, s: &IndexSubset) -> bool {
        self.rank_of(s) == s.len()
    }

    /// Deletion of `I`, relabeled to `[n - |I|]` in increasing order. Fails
    /// when `I` contains a coloop, since the rank would drop.
    pub fn delete(&self, removed: &IndexSubset) -> Result<Matroid> {
        let keep_rank = self.rank_of(&removed.complement());
        if keep_rank < self.rank {
            return Err(Error::RankCollapse(format!(
                "deleting {removed} drops the rank from {} to {keep_rank}",
                self.rank
            )));
        }
        let bases =
            self.bases.iter().filter(|b| b.is_disjoint(removed)).map(|b| b.reindex_without(removed)).collect_vec();
        Matroid::new(self.n - removed.len(), bases)
    }

    /// Contraction by an independent set `I`, relabeled to `[n - |I|]`.
    pub fn contract(&self, removed: &IndexSubset) -> Result<Matroid> {
        if !self.is_independent(removed) {
            return Err(Error::RankCollapse(format!("contracting the dependent set {removed}")));
        }
        let bases =
            self.bases.iter().filter(|b| removed.is_subset_of(b)).map(|b| b.reindex_without(removed)).collect_vec();
        Matroid::new(self.n - removed.len(), bases)
    }

    /// Hull of the basis indicator vectors.
    pub fn base_polytope(&self) -> Polytope {
        let pts = self.bases.iter().map(|b| rat_vec(&b.indicator())).collect_vec();
        Polytope::hull(&pts).expect("nonempty basis set")
    }

    /// Bases of the dual matroid (complements).
    pub fn dual(&self) -> Matroid {
        Matroid { n: self.n, rank: self.n - self.rank, bases: self.bases.iter().map(IndexSubset::complement).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polymatroid {
    caps: Vec<u32>,
    rank: u32,
    bases: BTreeSet<CountVec>,
}

impl Polymatroid {
    /// Basis system bounded by `caps`. Exchange is checked separately by
    /// [`Polymatroid::is_valid`].
    pub fn new(caps: Vec<u32>, bases: impl IntoIterator<Item = CountVec>) -> Result<Self> {
        if caps.is_empty() || caps.contains(&0) {
            return Err(Error::Bases(format!("caps must be positive, got {caps:?}")));
        }
        let bases: BTreeSet<CountVec> = bases.into_iter().collect();
        let Some(first) = bases.first() else {
            return Err(Error::Bases("a polymatroid needs at least one basis".into()));
        };
        let rank = first.iter().sum();
        for b in &bases {
            if b.len() != caps.len() {
                return Err(Error::Bases(format!("basis {b:?} has length {} not {}", b.len(), caps.len())));
            }
            if b.iter().sum::<u32>() != rank {
                return Err(Error::Bases(format!("basis {b:?} does not have modulus {rank}")));
            }
            if b.iter().zip(&caps).any(|(x, c)| x > c) {
                return Err(Error::Bases(format!("basis {b:?} exceeds caps {caps:?}")));
            }
        }
        Ok(Self { caps, rank, bases })
    }

    /// Caps taken as the coordinatewise maximum over the bases.
    pub fn with_derived_caps(bases: impl IntoIterator<Item = CountVec>) -> Result<Self> {
        let bases: Vec<CountVec> = bases.into_iter().collect();
        let m = bases.first().map_or(0, Vec::len);
        let caps = (0..m).map(|i| bases.iter().filter_map(|b| b.get(i).copied()).max().unwrap_or(0)).collect();
        Self::new(caps, bases)
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn m(&self) -> usize {
        self.caps.len()
    }

    pub fn bases(&self) -> &BTreeSet<CountVec> {
        &self.bases
    }

    pub fn blocks(&self) -> BlockStructure {
        BlockStructure::from_caps(&self.caps).expect("caps are positive")
    }

    pub fn is_valid(&self) -> bool {
        check_exchange(&self.bases).unwrap_or(false)
    }

    pub fn base_polytope(&self) -> Polytope {
        base_polytope_of(&self.bases).expect("nonempty basis set")
    }

    /// `v -> caps - v`, a polymatroid of rank `sum(caps) - d`.
    pub fn dual(&self) -> Polymatroid {
        let bases = self.bases.iter().map(|b| self.caps.iter().zip(b).map(|(c, x)| c - x).collect()).collect();
        let total: u32 = self.caps.iter().sum();
        Polymatroid { caps: self.caps.clone(), rank: total - self.rank, bases }
    }
}

fn count_vec_rat(v: &[u32]) -> RatVec {
    rat_vec(&v.iter().map(|&x| i64::from(x)).collect_vec())
}

/// Hull of a set of count vectors.
pub fn base_polytope_of(bases: &BTreeSet<CountVec>) -> Result<Polytope> {
    Polytope::hull(&bases.iter().map(|b| count_vec_rat(b)).collect_vec())
}

/// The vector exchange axiom: whenever `u_i > v_i` there is `j` with
/// `u_j < v_j` and `u - e_i + e_j` in the set.
pub fn check_exchange(bases: &BTreeSet<CountVec>) -> Result<bool> {
    let Some(first) = bases.first() else {
        return Err(Error::Bases("empty basis set".into()));
    };
    let m = first.len();
    let modulus: u32 = first.iter().sum();
    if let Some(b) = bases.iter().find(|b| b.len() != m || b.iter().sum::<u32>() != modulus) {
        return Err(Error::Bases(format!("{b:?} does not match length {m} and modulus {modulus}")));
    }
    for u in bases {
        for v in bases {
            for i in (0..m).filter(|&i| u[i] > v[i]) {
                let found = (0..m).filter(|&j| u[j] < v[j]).any(|j| {
                    let mut w = u.clone();
                    w[i] -= 1;
                    w[j] += 1;
                    bases.contains(&w)
                });
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Pushes a matroid on `[n]` forward along the block map.
pub fn project_matroid(matroid: &Matroid, blocks: &BlockStructure) -> Result<Polymatroid> {
    if blocks.n() != matroid.n() {
        return Err(Error::Blocks(format!(
            "blocks {blocks} sum to {} but the matroid lives on [{}]",
            blocks.n(),
            matroid.n()
        )));
    }
    Polymatroid::new(blocks.caps(), matroid.bases().iter().map(|b| blocks.project_subset(b)))
}

/// All `A ⊆ [n]` whose multiplicity vector is a basis.
pub fn lift_polymatroid(poly: &Polymatroid) -> Matroid {
    let blocks = poly.blocks();
    let bases = subsets(blocks.n(), poly.rank() as usize)
        .into_iter()
        .filter(|s| poly.bases().contains(&blocks.project_subset(s)))
        .collect_vec();
    Matroid::new(blocks.n(), bases).expect("every basis vector has a preimage below the caps")
}

/// Images of hypersimplex vertices and edges under the block projection.
#[derive(Debug, Clone)]
pub struct ProjectedHypersimplex {
    pub points: HashSet<RatVec>,
    pub segments: HashSet<(RatVec, RatVec)>,
}

impl ProjectedHypersimplex {
    pub fn new(d: usize, blocks: &BlockStructure) -> Self {
        let all = subsets(blocks.n(), d);
        let images: Vec<RatVec> = all.iter().map(|s| blocks.project_subset_rat(s)).collect();
        let points = images.iter().cloned().collect();
        let mut segments = HashSet::new();
        for (a, b) in (0..all.len()).tuple_combinations() {
            if all[a].difference(&all[b]).len() != 1 || images[a] == images[b] {
                continue;
            }
            let (lo, hi) = if images[a] < images[b] { (a, b) } else { (b, a) };
            segments.insert((images[lo].clone(), images[hi].clone()));
        }
        Self { points, segments }
    }

    fn is_segment(&self, a: &RatVec, b: &RatVec) -> bool {
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.segments.contains(&key)
    }

    /// Every vertex of `q` is an image point and every edge of `q` is a chain
    /// of image segments through the lattice points on it.
    pub fn admits(&self, q: &Polytope) -> bool {
        if q.is_empty() || !q.vertices().iter().all(|v| self.points.contains(v)) {
            return false;
        }
        q.edges().into_iter().all(|e| {
            let (a, b) = q.edge_points(e);
            let diff = sub(b, a);
            let Some(ints) = to_int_vec(&diff) else {
                return false;
            };
            let steps = ints.iter().fold(BigInt::from(0), |g, x| g.gcd(x));
            let steps = usize::try_from(steps).unwrap_or(0);
            let step: RatVec = diff.iter().map(|x| x / rat(steps as i64)).collect();
            let chain: Vec<RatVec> =
                (0..=steps).map(|s| a.iter().zip(&step).map(|(x, t)| x + t * rat(s as i64)).collect()).collect();
            chain.windows(2).all(|w| self.is_segment(&w[0], &w[1]))
        })
    }

    /// Like [`ProjectedHypersimplex::admits`] for the hull of `marked`, except
    /// that each edge is subdivided only at the marked points lying on it.
    pub fn admits_configuration(&self, marked: &BTreeSet<CountVec>) -> bool {
        let pts: Vec<RatVec> = marked.iter().map(|v| count_vec_rat(v)).collect();
        let Ok(q) = Polytope::hull(&pts) else {
            return false;
        };
        if !q.vertices().iter().all(|v| self.points.contains(v)) {
            return false;
        }
        q.edges().into_iter().all(|e| {
            let (a, b) = q.edge_points(e);
            let segment = Polytope::hull(&[a.clone(), b.clone()]).expect("two points");
            let mut on_edge: Vec<&RatVec> = pts.iter().filter(|p| segment.contains(p)).collect();
            on_edge.sort();
            on_edge.windows(2).all(|w| self.is_segment(w[0], w[1]))
        })
    }
}

/// Whether the vertices and edges of `q` are among the images of those of
/// `Δ(d, n)`, an edge counting as an image when it is a union of image edges.
pub fn is_polymatroid_polytope(q: &Polytope, d: usize, blocks: &BlockStructure) -> bool {
    q.ambient_dim() == blocks.m() && d <= blocks.n() && ProjectedHypersimplex::new(d, blocks).admits(q)
}

/// The same test for the hull of a basis candidate set, where only members of
/// the set may subdivide an edge.
pub fn is_polymatroid_configuration(bases: &BTreeSet<CountVec>, d: usize, blocks: &BlockStructure) -> bool {
    bases.iter().all(|b| b.len() == blocks.m())
        && d <= blocks.n()
        && ProjectedHypersimplex::new(d, blocks).admits_configuration(bases)
}

/// Recovers the polymatroid whose bases are the lattice points of `q`.
pub fn polymatroid_from_polytope(q: &Polytope, d: usize, blocks: &BlockStructure) -> Result<Polymatroid> {
    if !is_polymatroid_polytope(q, d, blocks) {
        return Err(Error::NotPolymatroidPolytope);
    }
    let bases = q
        .lattice_points()
        .into_iter()
        .map(|p| p.iter().map(|x| u32::try_from(x).expect("nonnegative coordinates")).collect())
        .collect_vec();
    Polymatroid::new(blocks.caps(), bases)
}

/// Every subset of `{v ∈ Z^m_{>=0} : |v| = d, v <= caps}`, including invalid
/// basis systems. Used for exhaustive checks.
pub fn candidate_vectors(d: u32, caps: &[u32]) -> Vec<CountVec> {
    caps.iter().map(|&c| 0..=c).multi_cartesian_product().filter(|v| v.iter().sum::<u32>() == d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[&[u32]]) -> BTreeSet<CountVec> {
        vs.iter().map(|v| v.to_vec()).collect()
    }

    fn sub(ix: &[usize], n: usize) -> IndexSubset {
        IndexSubset::new(ix.to_vec(), n).unwrap()
    }

    fn blocks(s: &str) -> BlockStructure {
        BlockStructure::parse(s).unwrap()
    }

    #[test]
    fn exchange_examples() {
        assert!(check_exchange(&set(&[&[1, 1, 1], &[1, 2, 0]])).unwrap());
        assert!(!check_exchange(&set(&[&[1, 2, 0], &[1, 0, 2], &[0, 1, 2], &[0, 2, 1]])).unwrap());
        assert!(check_exchange(&set(&[&[3, 0, 1]])).unwrap());
        assert!(check_exchange(&set(&[&[1, 0], &[0, 1, 0]])).is_err());
        assert!(check_exchange(&set(&[&[1, 0], &[1, 1]])).is_err());
        assert!(check_exchange(&BTreeSet::new()).is_err());
    }

    #[test]
    fn projecting_uniform_matroids() {
        let p = project_matroid(&Matroid::uniform(3, 5), &blocks("1,2,2")).unwrap();
        assert_eq!(p.bases(), &set(&[&[1, 1, 1], &[1, 2, 0], &[1, 0, 2], &[0, 1, 2], &[0, 2, 1]]));
        assert!(p.is_valid());
        let p = project_matroid(&Matroid::uniform(2, 4), &blocks("2,2")).unwrap();
        assert_eq!(p.bases(), &set(&[&[2, 0], &[1, 1], &[0, 2]]));
        assert!(project_matroid(&Matroid::uniform(2, 4), &blocks("2,3")).is_err());
    }

    #[test]
    fn singleton_blocks_are_the_identity() {
        let m = Matroid::new(4, vec![sub(&[0, 1], 4), sub(&[0, 2], 4), sub(&[1, 2], 4)]).unwrap();
        let p = project_matroid(&m, &BlockStructure::singletons(4)).unwrap();
        let indicators: BTreeSet<CountVec> =
            m.bases().iter().map(|b| b.indicator().iter().map(|&x| x as u32).collect()).collect();
        assert_eq!(p.bases(), &indicators);
        assert_eq!(lift_polymatroid(&p), m);
    }

    #[test]
    fn lifting() {
        let b = Polymatroid::new(vec![1, 2, 2], vec![vec![1, 1, 1]]).unwrap();
        let lifted = lift_polymatroid(&b);
        let expected: BTreeSet<IndexSubset> =
            [[0, 1, 3], [0, 1, 4], [0, 2, 3], [0, 2, 4]].iter().map(|s| sub(s, 5)).collect();
        assert_eq!(lifted.bases(), &expected);
        let u35 = Matroid::uniform(3, 5);
        assert_eq!(lift_polymatroid(&project_matroid(&u35, &blocks("1,2,2")).unwrap()), u35);
    }

    #[test]
    fn base_polytopes() {
        let seg = Polymatroid::new(vec![1, 2, 2], vec![vec![1, 1, 1], vec![1, 2, 0]]).unwrap();
        let q = seg.base_polytope();
        assert_eq!(q.affine_dim(), 1);
        assert_eq!(q.vertices().len(), 2);
        let full = project_matroid(&Matroid::uniform(3, 5), &blocks("1,2,2")).unwrap();
        assert_eq!(full.base_polytope(), blocks("1,2,2").projected_hypersimplex(3).unwrap());
        let pt = Polymatroid::new(vec![2, 1], vec![vec![2, 1]]).unwrap();
        assert_eq!(pt.base_polytope().affine_dim(), 0);
    }

    #[test]
    fn polytope_criterion() {
        let b = blocks("1,2,2");
        let seg = Polymatroid::new(vec![1, 2, 2], vec![vec![1, 1, 1], vec![1, 2, 0]]).unwrap();
        assert!(is_polymatroid_polytope(&seg.base_polytope(), 3, &b));
        let corners = set(&[&[1, 2, 0], &[1, 0, 2], &[0, 1, 2], &[0, 2, 1]]);
        assert!(!is_polymatroid_configuration(&corners, 3, &b));
        // as a bare polytope the corner hull is the whole trapezoid
        assert!(is_polymatroid_polytope(&base_polytope_of(&corners).unwrap(), 3, &b));
        assert!(is_polymatroid_polytope(&b.projected_hypersimplex(3).unwrap(), 3, &b));
        let mut with_mid = corners.clone();
        with_mid.insert(vec![1, 1, 1]);
        assert!(is_polymatroid_configuration(&with_mid, 3, &b));
        let off = base_polytope_of(&set(&[&[1, 2, 0], &[0, 1, 2]])).unwrap();
        assert!(!is_polymatroid_polytope(&off, 3, &b));
    }

    #[test]
    fn recovering_from_polytopes() {
        let b = blocks("1,2,2");
        let trap = b.projected_hypersimplex(3).unwrap();
        let p = polymatroid_from_polytope(&trap, 3, &b).unwrap();
        assert_eq!(p.bases().len(), 5);
        assert!(p.bases().contains(&vec![1, 1, 1]));
        let single = Polytope::hull(&[rat_vec(&[2, 0])]).unwrap();
        let p = polymatroid_from_polytope(&single, 2, &blocks("2,2")).unwrap();
        assert_eq!(p.bases(), &set(&[&[2, 0]]));
        let off = base_polytope_of(&set(&[&[1, 2, 0], &[0, 1, 2]])).unwrap();
        assert!(matches!(polymatroid_from_polytope(&off, 3, &b), Err(Error::NotPolymatroidPolytope)));
    }

    #[test]
    fn roundtrip_through_polytopes_on_all_small_polymatroids() {
        for caps in [vec![2, 2], vec![1, 2, 2], vec![2, 1, 2]] {
            let b = BlockStructure::from_caps(&caps).unwrap();
            for d in 1..=3u32 {
                let vecs = candidate_vectors(d, &caps);
                for mask in 1u32..(1 << vecs.len()) {
                    let bases: BTreeSet<CountVec> =
                        (0..vecs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vecs[i].clone()).collect();
                    if !check_exchange(&bases).unwrap() {
                        continue;
                    }
                    let poly = Polymatroid::new(caps.clone(), bases).unwrap();
                    let back = polymatroid_from_polytope(&poly.base_polytope(), d as usize, &b).unwrap();
                    assert_eq!(back, poly);
                }
            }
        }
    }

    #[test]
    fn duality() {
        let b = Polymatroid::new(vec![2, 2], vec![vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(b.dual().bases(), b.bases());
        assert_eq!(b.dual().rank(), 2);
        let p35 = project_matroid(&Matroid::uniform(3, 5), &blocks("1,2,2")).unwrap();
        let p25 = project_matroid(&Matroid::uniform(2, 5), &blocks("1,2,2")).unwrap();
        assert_eq!(p35.dual(), p25);
        assert_eq!(p35.dual().dual(), p35);
    }

    #[test]
    fn deletion_and_contraction() {
        let u24 = Matroid::uniform(2, 4);
        assert_eq!(u24.delete(&sub(&[3], 4)).unwrap(), Matroid::uniform(2, 3));
        assert_eq!(u24.contract(&sub(&[3], 4)).unwrap(), Matroid::uniform(1, 3));
        // 3 is a coloop here
        let m = Matroid::new(4, vec![sub(&[0, 3], 4), sub(&[1, 3], 4)]).unwrap();
        assert!(matches!(m.delete(&sub(&[3], 4)), Err(Error::RankCollapse(_))));
        // {0,1} is dependent here
        assert!(matches!(m.contract(&sub(&[0, 1], 4)), Err(Error::RankCollapse(_))));
    }

    #[test]
    fn matroid_exchange_and_validation() {
        assert!(Matroid::uniform(2, 4).satisfies_exchange());
        let bad = Matroid::new(4, vec![sub(&[0, 1], 4), sub(&[2, 3], 4)]).unwrap();
        assert!(!bad.satisfies_exchange());
        assert!(Matroid::new(4, vec![sub(&[0, 1], 4), sub(&[2], 4)]).is_err());
        assert!(Matroid::new(4, Vec::new()).is_err());
        assert!(Polymatroid::new(vec![1, 1], vec![vec![2, 0]]).is_err());
        assert!(Polymatroid::new(vec![0, 1], vec![vec![0, 1]]).is_err());
    }
}
