//! Plücker vectors of row spaces, their support (poly)matroids and orbit
//! polytopes, and the matrix-level maps between Grassmannians.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::BlockStructure;
use crate::error::{Error, Result};
use crate::lattice::{index_in_span, IntVec};
use crate::linalg::{rat, subsets, to_int_vec, IndexSubset, Matrix, Rat};
use crate::polymatroid::{project_matroid, Matroid, Polymatroid};
use crate::polytope::Polytope;

/// Maximal minors of a `d x n` matrix, indexed by `d`-subsets of columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerVector {
    d: usize,
    n: usize,
    coords: BTreeMap<IndexSubset, Rat>,
}

impl PluckerVector {
    /// Coordinates for every `d`-subset of `[n]`; missing subsets are zero.
    pub fn new(d: usize, n: usize, coords: BTreeMap<IndexSubset, Rat>) -> Result<Self> {
        if d > n {
            return Err(Error::Invalid(format!("d = {d} exceeds n = {n}")));
        }
        if let Some(bad) = coords.keys().find(|s| s.len() != d || s.ground() != n) {
            return Err(Error::Subset(format!("{bad} is not a {d}-subset of [{n}]")));
        }
        let mut full: BTreeMap<IndexSubset, Rat> = subsets(n, d).into_iter().map(|s| (s, Rat::zero())).collect();
        full.extend(coords);
        if full.values().all(Zero::is_zero) {
            return Err(Error::Invalid("Plücker vector is identically zero".into()));
        }
        Ok(Self { d, n, coords: full })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: &IndexSubset) -> Rat {
        self.coords.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coordinates in lexicographic subset order.
    pub fn coords(&self) -> &BTreeMap<IndexSubset, Rat> {
        &self.coords
    }

    pub fn values(&self) -> Vec<Rat> {
        self.coords.values().cloned().collect()
    }

    pub fn support(&self) -> Vec<IndexSubset> {
        self.coords.iter().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s.clone()).collect()
    }
}

fn require_full_rank(m: &Matrix) -> Result<()> {
    let r = m.rank();
    if r < m.nrows() {
        return Err(Error::RankDeficient { expected: m.nrows(), found: r });
    }
    Ok(())
}

pub fn plucker(m: &Matrix) -> Result<PluckerVector> {
    require_full_rank(m)?;
    let (d, n) = (m.nrows(), m.ncols());
    let rows = IndexSubset::full(d);
    let coords = subsets(n, d).into_iter().map(|s| Ok((s.clone(), m.minor(&rows, &s)?))).collect::<Result<_>>()?;
    PluckerVector::new(d, n, coords)
}

pub fn support_matroid(p: &PluckerVector) -> Result<Matroid> {
    Matroid::new(p.n, p.support())
}

/// The polymatroid of `M` under the block structure.
pub fn support_polymatroid(m: &Matrix, blocks: &BlockStructure) -> Result<Polymatroid> {
    check_blocks(m, blocks)?;
    project_matroid(&support_matroid(&plucker(m)?)?, blocks)
}

fn check_blocks(m: &Matrix, blocks: &BlockStructure) -> Result<()> {
    if blocks.n() != m.ncols() {
        return Err(Error::Shape(format!("blocks {blocks} cover {} columns, matrix has {}", blocks.n(), m.ncols())));
    }
    Ok(())
}

/// Hull of the block weights `λ_r(e_A)` over the support of the Plücker vector.
pub fn orbit_polytope(m: &Matrix, blocks: &BlockStructure) -> Result<Polytope> {
    check_blocks(m, blocks)?;
    let p = plucker(m)?;
    Polytope::hull(&p.support().iter().map(|s| blocks.project_subset_rat(s)).collect_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// Subsets containing `I`.
    Plus,
    /// Subsets avoiding `I`.
    Minus,
}

/// The `d`-subsets on the face `Γ_I^±` of `Δ(d, n)`.
pub fn gamma_subsets(d: usize, n: usize, i: &IndexSubset, sign: Sign) -> Vec<IndexSubset> {
    subsets(n, d)
        .into_iter()
        .filter(|a| match sign {
            Sign::Plus => i.is_subset_of(a),
            Sign::Minus => i.is_disjoint(a),
        })
        .collect()
}

pub fn gamma_face(d: usize, n: usize, i: &IndexSubset, sign: Sign) -> Result<Polytope> {
    if i.ground() != n || d > n {
        return Err(Error::Invalid(format!("face of Δ({d},{n}) indexed by {i} over [{}]", i.ground())));
    }
    let verts = gamma_subsets(d, n, i, sign);
    if verts.is_empty() {
        return Err(Error::Degenerate(format!("no {d}-subsets of [{n}] for {i} with sign {sign:?}")));
    }
    Polytope::hull(&verts.iter().map(|a| crate::linalg::rat_vec(&a.indicator())).collect_vec())
}

/// `L ∩ {x_j = 0 : j ∈ I}` with the `I` coordinates dropped. The intersection
/// must have the expected dimension `d - |I|`.
pub fn intersect_with_coordinate_subspace(m: &Matrix, i: &IndexSubset) -> Result<Matrix> {
    require_full_rank(m)?;
    if i.ground() != m.ncols() {
        return Err(Error::Shape(format!("subset over [{}] for {} columns", i.ground(), m.ncols())));
    }
    let d = m.nrows();
    if i.len() > d {
        return Err(Error::NonGeneric(format!("cannot cut a {d}-space by {} coordinate hyperplanes", i.len())));
    }
    let c = m.select_columns(i.indices());
    if c.rank() < i.len() {
        return Err(Error::NonGeneric(format!(
            "intersection with x_j = 0, j in {i}, has dimension above {}",
            d - i.len()
        )));
    }
    let coeffs = c.transpose().kernel_basis();
    if coeffs.is_empty() {
        return Ok(Matrix::zeros(0, m.ncols() - i.len()));
    }
    let rows = Matrix::from_rows(coeffs)?.mul(m)?;
    Ok(rows.delete_columns(i.indices()))
}

/// `L` pushed forward along the projection forgetting the `I` coordinates.
pub fn project_away(m: &Matrix, i: &IndexSubset) -> Result<Matrix> {
    require_full_rank(m)?;
    if i.ground() != m.ncols() {
        return Err(Error::Shape(format!("subset over [{}] for {} columns", i.ground(), m.ncols())));
    }
    let out = m.delete_columns(i.indices());
    let r = out.rank();
    if r < m.nrows() {
        return Err(Error::NonGeneric(format!("projecting away {i} drops the rank to {r}")));
    }
    Ok(out)
}

/// A basis of the orthogonal complement of the row space, as rows.
pub fn gale_dual(m: &Matrix) -> Result<Matrix> {
    require_full_rank(m)?;
    let kernel = m.kernel_basis();
    if kernel.is_empty() {
        return Ok(Matrix::zeros(0, m.ncols()));
    }
    Matrix::from_rows(kernel)
}

/// Whether `cells` tile `target`: each is a full-dimensional subset, any two
/// meet in a common face, and the volumes add up.
pub fn decomposition_check(cells: &[Polytope], target: &Polytope) -> Result<bool> {
    if let Some(c) = cells.iter().find(|c| c.ambient_dim() != target.ambient_dim()) {
        return Err(Error::Shape(format!("cell in R^{} vs target in R^{}", c.ambient_dim(), target.ambient_dim())));
    }
    if cells.iter().any(|c| c.affine_dim() != target.affine_dim() || !c.is_subset_of(target)) {
        return Ok(false);
    }
    for (a, b) in cells.iter().tuple_combinations() {
        if !a.is_common_face(b)? {
            return Ok(false);
        }
    }
    let mut total = BigInt::zero();
    for c in cells {
        total += c.normalized_volume()?;
    }
    Ok(total == target.normalized_volume()?)
}

fn differences(points: &[IntVec]) -> Vec<IntVec> {
    let Some(base) = points.first() else { return Vec::new() };
    points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect()
}

/// Index of the lattice spanned by the orbit polytope's vertex differences in
/// the ambient weight lattice, restricted to their span.
pub fn multiplicity_index(m: &Matrix, blocks: &BlockStructure) -> Result<BigInt> {
    let q = orbit_polytope(m, blocks)?;
    if q.vertices().len() < 2 {
        return Err(Error::Degenerate("orbit polytope is a point".into()));
    }
    let verts = q.vertices().iter().map(|v| to_int_vec(v).expect("weights are integral")).collect_vec();
    let all = subsets(blocks.n(), m.nrows())
        .iter()
        .map(|s| blocks.project_subset(s).iter().map(|&x| BigInt::from(x)).collect())
        .collect_vec();
    index_in_span(&differences(&verts), &differences(&all))
}

/// Like [`multiplicity_index`], but generated by the images of every basis of
/// the support rather than by hull vertices only. Blocks can push a weight into
/// the interior of an edge, so the vertex version may exceed this one.
pub fn weight_multiplicity_index(m: &Matrix, blocks: &BlockStructure) -> Result<BigInt> {
    let p = plucker(m)?;
    let weights: BTreeSet<Vec<BigInt>> =
        p.support().iter().map(|s| blocks.project_subset(s).iter().map(|&x| BigInt::from(x)).collect()).collect();
    if weights.len() < 2 {
        return Err(Error::Degenerate("orbit polytope is a point".into()));
    }
    let all = subsets(blocks.n(), m.nrows())
        .iter()
        .map(|s| blocks.project_subset(s).iter().map(|&x| BigInt::from(x)).collect())
        .collect_vec();
    index_in_span(&differences(&weights.into_iter().collect_vec()), &differences(&all))
}

/// Both sides of the volume comparison for one block face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeIdentity {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub lhs_dim: isize,
    pub rhs_dim: isize,
}

impl VolumeIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.lhs_dim == self.rhs_dim
    }
}

/// Compares `vol λ_r(Γ_I^±)` with the volume of the smaller projected
/// hypersimplex, where `I` is block `i` (0-based).
pub fn volume_identity_check(d: usize, blocks: &BlockStructure, i: usize, sign: Sign) -> Result<VolumeIdentity> {
    let n = blocks.n();
    if i >= blocks.m() {
        return Err(Error::Invalid(format!("block {i} of {}", blocks.m())));
    }
    if blocks.m() == 1 {
        return Err(Error::Degenerate("a single block leaves nothing after removal".into()));
    }
    let ri = blocks.parts()[i];
    let (d_rest, what) = match sign {
        Sign::Plus if ri <= d => (d - ri, "containing"),
        Sign::Minus if d <= n - ri => (d, "avoiding"),
        _ => return Err(Error::Degenerate(format!("no {d}-subsets {sign:?} block {i} of {blocks}"))),
    };
    let face = gamma_face(d, n, &blocks.block(i), sign)
        .map_err(|e| Error::Degenerate(format!("face {what} block {i}: {e}")))?;
    let lhs_poly = face.linear_image(&blocks.projection_matrix())?;
    let rhs_poly = blocks.without(i)?.projected_hypersimplex(d_rest)?;
    Ok(VolumeIdentity {
        lhs: lhs_poly.normalized_volume()?,
        rhs: rhs_poly.normalized_volume()?,
        lhs_dim: lhs_poly.affine_dim(),
        rhs_dim: rhs_poly.affine_dim(),
    })
}

/// Whether `g · M · D` has the same orbit polytope as `M`, where `D` scales
/// the columns of block `k` by `scales[k]`.
pub fn gm_invariance_report(m: &Matrix, blocks: &BlockStructure, g: &Matrix, scales: &[Rat]) -> Result<bool> {
    check_blocks(m, blocks)?;
    if g.nrows() != m.nrows() || g.ncols() != m.nrows() {
        return Err(Error::Shape(format!("g is {}x{}, expected {}x{}", g.nrows(), g.ncols(), m.nrows(), m.nrows())));
    }
    if g.det()?.is_zero() {
        return Err(Error::Invalid("g is singular".into()));
    }
    if scales.len() != blocks.m() {
        return Err(Error::Shape(format!("{} scales for {} blocks", scales.len(), blocks.m())));
    }
    if scales.iter().any(Zero::is_zero) {
        return Err(Error::Invalid("zero block scale".into()));
    }
    let factors = (0..m.ncols()).map(|j| scales[blocks.block_of(j)].clone()).collect_vec();
    let moved = g.mul(m)?.scale_columns(&factors)?;
    Ok(orbit_polytope(&moved, blocks)? == orbit_polytope(m, blocks)?)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer entries drawn uniformly from `[-9, 9]`.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| rat(rng.gen_range(-9..=9))).collect();
    Matrix::new(rows, cols, entries).expect("sized entries")
}

pub fn random_full_rank(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, rows, cols);
        if m.rank() == rows.min(cols) {
            return m;
        }
    }
}

pub fn random_scales(rng: &mut impl Rng, count: usize) -> Vec<Rat> {
    (0..count)
        .map(|_| loop {
            let x: i64 = rng.gen_range(-9..=9);
            if x != 0 {
                break rat(x);
            }
        })
        .collect()
}

/// True when every maximal minor is nonzero.
pub fn is_generic(m: &Matrix) -> bool {
    plucker(m).map(|p| p.values().iter().all(|v| !v.is_zero())).unwrap_or(false)
}
