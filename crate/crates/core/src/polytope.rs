//! Exact convex polytopes given by their vertices.
//!
//! A [`Polytope`] is canonical: vertices are sorted and deduplicated, the
//! affine hull is described by integer equations, and every facet inequality
//! `normal · x <= offset` has a primitive integer normal lying in the direction
//! space of the affine hull. Two polytopes are equal exactly when they compare
//! equal with `==`.
//!
//! Facets are found by brute force over affinely independent subsets of the
//! input points, which is exact and fast enough for polytopes with a couple of
//! dozen vertices in dimension at most six.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{saturation_index, IntVec};
use crate::linalg::{dot, primitive_integer, sub, to_int_vec, Matrix, Rat, RatVec};

/// Affine constraint `normal · x <= offset` (facet) or `normal · x = offset` (equation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

impl Facet {
    fn rat_normal(&self) -> RatVec {
        self.normal.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot(&self.rat_normal(), x)
    }

    fn is_tight(&self, x: &[Rat]) -> bool {
        self.value(x) == self.offset
    }

    fn holds(&self, x: &[Rat]) -> bool {
        self.value(x) <= self.offset
    }
}

/// A 1-face, as indices into [`Polytope::vertices`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub usize, pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<RatVec>,
    facets: Vec<Facet>,
    equations: Vec<Facet>,
    affine_dim: isize,
}

impl Polytope {
    /// The empty polytope, with affine dimension -1.
    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, vertices: Vec::new(), facets: Vec::new(), equations: Vec::new(), affine_dim: -1 }
    }

    /// Convex hull of a nonempty list of points of equal length.
    pub fn hull(points: &[RatVec]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Invalid("hull of an empty point list".into()));
        };
        let ambient_dim = first.len();
        if points.iter().any(|p| p.len() != ambient_dim) {
            return Err(Error::Shape("points of different dimensions".into()));
        }
        let pts: Vec<RatVec> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let base = &pts[0];
        let dirs: Vec<RatVec> = pts[1..].iter().map(|p| sub(p, base)).collect();
        let dir_basis =
            if dirs.is_empty() { Matrix::zeros(0, ambient_dim) } else { Matrix::from_rows(dirs)?.row_space_basis() };
        let k = dir_basis.nrows();

        let equations = equations_for(&dir_basis, ambient_dim, base);
        if k == 0 {
            return Ok(Self { ambient_dim, vertices: pts, facets: Vec::new(), equations, affine_dim: 0 });
        }

        let mut facets = BTreeSet::new();
        for subset in (0..pts.len()).combinations(k) {
            let q0 = &pts[subset[0]];
            // normal = sum c_j b_j, orthogonal to the spanned (k-1)-flat
            let gram: Vec<RatVec> = subset[1..]
                .iter()
                .map(|&i| {
                    let d = sub(&pts[i], q0);
                    dir_basis.rows().map(|b| dot(b, &d)).collect()
                })
                .collect();
            let kernel = if gram.is_empty() {
                vec![vec![Rat::from_integer(1.into())]]
            } else {
                Matrix::from_rows(gram)?.kernel_basis()
            };
            if kernel.len() != 1 {
                continue;
            }
            let coeffs = &kernel[0];
            let normal: RatVec = (0..ambient_dim)
                .map(|c| (0..k).fold(Rat::zero(), |acc, j| acc + &coeffs[j] * dir_basis.get(j, c)))
                .collect();
            let height = dot(&normal, q0);
            let values: Vec<Rat> = pts.iter().map(|p| dot(&normal, p)).collect();
            let sign = if values.iter().all(|v| *v <= height) {
                1
            } else if values.iter().all(|v| *v >= height) {
                -1
            } else {
                continue;
            };
            let prim = primitive_integer(&normal);
            let prim: Vec<BigInt> = prim.into_iter().map(|x| x * sign).collect();
            let facet = Facet { normal: prim, offset: Rat::zero() };
            let offset = facet.value(q0);
            facets.insert(Facet { offset, ..facet });
        }
        let facets: Vec<Facet> = facets.into_iter().collect();

        let vertices = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<RatVec> = facets.iter().filter(|f| f.is_tight(p)).map(Facet::rat_normal).collect();
                !tight.is_empty() && Matrix::from_rows(tight).map(|m| m.rank()).unwrap_or(0) == k
            })
            .collect();
        Ok(Self { ambient_dim, vertices, facets, equations, affine_dim: k as isize })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> isize {
        self.affine_dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations cutting out the affine hull.
    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn vertex_index(&self, v: &[Rat]) -> Option<usize> {
        self.vertices.binary_search_by(|w| w.as_slice().cmp(v)).ok()
    }

    pub fn is_vertex(&self, v: &[Rat]) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.is_empty()
            && x.len() == self.ambient_dim
            && self.equations.iter().all(|e| e.is_tight(x))
            && self.facets.iter().all(|f| f.holds(x))
    }

    fn tight_normals(&self, points: &[&RatVec]) -> Vec<RatVec> {
        self.facets.iter().filter(|f| points.iter().all(|p| f.is_tight(p))).map(Facet::rat_normal).collect()
    }

    fn rank_of(rows: Vec<RatVec>) -> usize {
        if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
        }
    }

    /// All 1-dimensional faces, found from facet incidences.
    pub fn edges(&self) -> Vec<Edge> {
        if self.affine_dim < 1 {
            return Vec::new();
        }
        let k = self.affine_dim as usize;
        (0..self.vertices.len())
            .tuple_combinations()
            .filter(|&(a, b)| Self::rank_of(self.tight_normals(&[&self.vertices[a], &self.vertices[b]])) == k - 1)
            .map(|(a, b)| Edge(a, b))
            .collect()
    }

    /// Whether the segment between two points is an edge of this polytope.
    pub fn has_edge(&self, a: &[Rat], b: &[Rat]) -> bool {
        match (self.vertex_index(a), self.vertex_index(b)) {
            (Some(i), Some(j)) if i != j => {
                let k = self.affine_dim as usize;
                Self::rank_of(self.tight_normals(&[&self.vertices[i], &self.vertices[j]])) == k - 1
            }
            _ => false,
        }
    }

    pub fn edge_points(&self, e: Edge) -> (&RatVec, &RatVec) {
        (&self.vertices[e.0], &self.vertices[e.1])
    }

    /// Vertices lying on the given facet.
    pub fn facet_vertices(&self, f: &Facet) -> Vec<RatVec> {
        self.vertices.iter().filter(|v| f.is_tight(v)).cloned().collect()
    }

    /// A triangulation without new vertices, as lists of simplex vertices.
    pub fn triangulate(&self) -> Vec<Vec<RatVec>> {
        if self.is_empty() {
            return Vec::new();
        }
        if self.affine_dim == 0 {
            return vec![vec![self.vertices[0].clone()]];
        }
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for f in self.facets.iter().filter(|f| !f.is_tight(apex)) {
            let face = Polytope::hull(&self.facet_vertices(f)).expect("facets have vertices");
            for mut simplex in face.triangulate() {
                simplex.push(apex.clone());
                out.push(simplex);
            }
        }
        out
    }

    /// Volume normalized so that a unimodular simplex of the lattice
    /// `Z^ambient ∩ direction space` has volume one; zero for points and the
    /// empty polytope.
    pub fn normalized_volume(&self) -> Result<BigInt> {
        if let Some(v) = self.vertices.iter().find(|v| to_int_vec(v).is_none()) {
            return Err(Error::NonIntegral(crate::linalg::fmt_vec(v)));
        }
        if self.affine_dim < 1 {
            return Ok(BigInt::zero());
        }
        Ok(self.triangulate().iter().map(|s| simplex_volume(s)).sum())
    }

    /// All integer points, by scanning the bounding box.
    pub fn lattice_points(&self) -> Vec<IntVec> {
        if self.is_empty() {
            return Vec::new();
        }
        let lo: Vec<BigInt> = (0..self.ambient_dim)
            .map(|c| self.vertices.iter().map(|v| v[c].floor().to_integer()).min().expect("nonempty"))
            .collect();
        let hi: Vec<BigInt> = (0..self.ambient_dim)
            .map(|c| self.vertices.iter().map(|v| v[c].ceil().to_integer()).max().expect("nonempty"))
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let point: RatVec = cur.iter().map(|x| Rat::from_integer(x.clone())).collect();
            if self.contains(&point) {
                out.push(cur.clone());
            }
            // odometer
            let mut c = 0;
            loop {
                if c == self.ambient_dim {
                    return out;
                }
                if cur[c] < hi[c] {
                    cur[c] += 1;
                    break;
                }
                cur[c] = lo[c].clone();
                c += 1;
            }
        }
    }

    /// Image under a linear map given by a matrix with `ambient_dim` columns.
    pub fn linear_image(&self, map: &Matrix) -> Result<Polytope> {
        if map.ncols() != self.ambient_dim {
            return Err(Error::Shape(format!(
                "map with {} columns applied to a polytope in dimension {}",
                map.ncols(),
                self.ambient_dim
            )));
        }
        if self.is_empty() {
            return Ok(Polytope::empty(map.nrows()));
        }
        let images = self.vertices.iter().map(|v| map.apply(v)).collect::<Result<Vec<_>>>()?;
        Polytope::hull(&images)
    }

    /// Exact intersection, recovering vertices from tight constraint subsets.
    pub fn intersect(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Shape("intersecting polytopes of different ambient dimension".into()));
        }
        let n = self.ambient_dim;
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(n));
        }
        let eqs: Vec<&Facet> = self.equations.iter().chain(&other.equations).collect();
        let ineqs: Vec<&Facet> = self.facets.iter().chain(&other.facets).collect();
        let eq_rank = Self::rank_of(eqs.iter().map(|e| e.rat_normal()).collect());
        let free = n.saturating_sub(eq_rank);
        let mut candidates = BTreeSet::new();
        for chosen in (0..ineqs.len()).combinations(free) {
            let rows: Vec<&Facet> = eqs.iter().copied().chain(chosen.iter().map(|&i| ineqs[i])).collect();
            let a = Matrix::from_rows(rows.iter().map(|f| f.rat_normal()).collect())?;
            if a.rank() != n {
                continue;
            }
            let b: RatVec = rows.iter().map(|f| f.offset.clone()).collect();
            let Some(x) = a.solve(&b)? else { continue };
            if self.contains(&x) && other.contains(&x) {
                candidates.insert(x);
            }
        }
        if candidates.is_empty() {
            return Ok(Polytope::empty(n));
        }
        Polytope::hull(&candidates.into_iter().collect_vec())
    }

    /// Whether `face` is a face of `self`; the empty polytope is a face of everything.
    pub fn has_face(&self, face: &Polytope) -> bool {
        if face.is_empty() {
            return true;
        }
        if face.ambient_dim != self.ambient_dim || !face.vertices.iter().all(|v| self.is_vertex(v)) {
            return false;
        }
        let refs: Vec<&RatVec> = face.vertices.iter().collect();
        let supporting: Vec<&Facet> = self.facets.iter().filter(|f| refs.iter().all(|v| f.is_tight(v))).collect();
        let smallest: Vec<&RatVec> =
            self.vertices.iter().filter(|v| supporting.iter().all(|f| f.is_tight(v))).collect();
        smallest.len() == face.vertices.len()
    }

    /// True when the intersection is a face of both polytopes.
    pub fn is_common_face(&self, other: &Polytope) -> Result<bool> {
        let meet = self.intersect(other)?;
        Ok(self.has_face(&meet) && other.has_face(&meet))
    }

    /// Whether every vertex of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Polytope) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }
}

/// Integer equations of the affine hull `base + span(dir_basis)`.
fn equations_for(dir_basis: &Matrix, ambient_dim: usize, base: &[Rat]) -> Vec<Facet> {
    let normals =
        if dir_basis.nrows() == 0 { Matrix::identity(ambient_dim).to_rows() } else { dir_basis.kernel_basis() };
    let normals = if normals.is_empty() {
        Vec::new()
    } else {
        Matrix::from_rows(normals).expect("equal widths").row_space_basis().to_rows()
    };
    normals
        .into_iter()
        .map(|n| {
            let normal = primitive_integer(&n);
            let f = Facet { normal, offset: Rat::zero() };
            let offset = f.value(base);
            Facet { offset, ..f }
        })
        .collect()
}

/// Lattice-normalized volume of a simplex with integer vertices.
pub fn simplex_volume(vertices: &[RatVec]) -> BigInt {
    let Some((first, rest)) = vertices.split_first() else {
        return BigInt::zero();
    };
    if rest.is_empty() {
        return BigInt::zero();
    }
    let edges: Vec<IntVec> = rest.iter().map(|v| to_int_vec(&sub(v, first)).expect("integral simplex")).collect();
    let rank =
        Matrix::from_rows(edges.iter().map(|e| e.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect())
            .map(|m| m.rank())
            .unwrap_or(0);
    if rank < rest.len() {
        return BigInt::zero();
    }
    saturation_index(&edges).abs()
}
