//! Block structures `r = (r_1, ..., r_m)` grouping the columns `[n]` into
//! consecutive blocks, and the induced projection `R^n -> R^m`.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{rat_vec, subsets, IndexSubset, Matrix, RatVec};
use crate::polytope::Polytope;

/// Positive block sizes summing to the number of columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    parts: Vec<usize>,
}

impl BlockStructure {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Blocks("no blocks".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Blocks(format!("zero block size in {parts:?}")));
        }
        Ok(Self { parts })
    }

    /// The maximal-torus case: `n` blocks of size one.
    pub fn singletons(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    /// Parses `"1,2,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad block size {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of columns, `sum r_i`.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of blocks.
    pub fn m(&self) -> usize {
        self.parts.len()
    }

    /// Block containing column `j`.
    pub fn block_of(&self, j: usize) -> usize {
        let mut acc = 0;
        for (i, &r) in self.parts.iter().enumerate() {
            acc += r;
            if j < acc {
                return i;
            }
        }
        panic!("column {j} outside [0, {})", self.n())
    }

    /// Columns of block `i`.
    pub fn block(&self, i: usize) -> IndexSubset {
        let start: usize = self.parts[..i].iter().sum();
        IndexSubset::new((start..start + self.parts[i]).collect(), self.n()).expect("block inside [n]")
    }

    /// The `m x n` 0/1 matrix summing the coordinates within each block.
    pub fn projection_matrix(&self) -> Matrix {
        let n = self.n();
        let rows = (0..self.m())
            .map(|i| {
                let b = self.block(i);
                (0..n).map(|j| i64::from(b.contains(j))).collect_vec()
            })
            .collect_vec();
        Matrix::from_i64_rows(&rows).expect("rectangular")
    }

    /// Multiplicity vector of a subset: how many of its columns fall in each block.
    pub fn project_subset(&self, s: &IndexSubset) -> Vec<u32> {
        let mut v = vec![0u32; self.m()];
        for &j in s.indices() {
            v[self.block_of(j)] += 1;
        }
        v
    }

    pub fn project_subset_rat(&self, s: &IndexSubset) -> RatVec {
        rat_vec(&self.project_subset(s).iter().map(|&x| i64::from(x)).collect_vec())
    }

    /// The same structure without block `i`.
    pub fn without(&self, i: usize) -> Result<BlockStructure> {
        let mut parts = self.parts.clone();
        parts.remove(i);
        Self::new(parts)
    }

    /// Block sizes as multiplicity caps.
    pub fn caps(&self) -> Vec<u32> {
        self.parts.iter().map(|&r| r as u32).collect()
    }

    pub fn from_caps(caps: &[u32]) -> Result<Self> {
        Self::new(caps.iter().map(|&c| c as usize).collect())
    }

    /// Image of the hypersimplex `Δ(d, n)` under the block projection.
    pub fn projected_hypersimplex(&self, d: usize) -> Result<Polytope> {
        let n = self.n();
        if d > n {
            return Err(Error::Invalid(format!("d = {d} exceeds n = {n}")));
        }
        let images = subsets(n, d).iter().map(|s| self.project_subset_rat(s)).collect_vec();
        Polytope::hull(&images)
    }
}

impl fmt::Display for BlockStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

/// Every composition of `n` into at most `max_parts` positive parts.
pub fn compositions(n: usize, max_parts: usize) -> Vec<BlockStructure> {
    fn go(rest: usize, max_parts: usize, cur: &mut Vec<usize>, out: &mut Vec<BlockStructure>) {
        if rest == 0 {
            out.push(BlockStructure { parts: cur.clone() });
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        for first in 1..=rest {
            cur.push(first);
            go(rest - first, max_parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, max_parts, &mut Vec::new(), &mut out);
    }
    out
}
