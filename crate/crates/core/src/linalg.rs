//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is arbitrary precision and exact. Row reduction is plain
//! Gauss-Jordan over `BigRational`, which is plenty for the matrix sizes this
//! crate deals with (a handful of rows, at most a few dozen columns).

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

/// A point or direction with rational coordinates.
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rat::new(n, d)
        }
        None => Rat::from_integer(t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?),
    };
    Ok(parsed)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Converts an integral rational vector to integers.
pub fn to_int_vec(v: &[Rat]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// Scales a rational vector to the unique primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn fmt_vec(v: &[Rat]) -> String {
    format!("({})", v.iter().join(","))
}

/// Dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    /// An empty list gives a `0 x cols` matrix only through [`Matrix::zeros`].
    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!("ragged rows: {} vs {cols}", bad.len())));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| rat_vec(r)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> RatVec {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<RatVec> {
        self.rows().map(<[Rat]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let v = (0..self.cols).fold(Rat::zero(), |acc, k| acc + self.get(r, k) * other.get(k, c));
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rat]) -> Result<RatVec> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok(self.rows().map(|r| dot(r, v)).collect())
    }

    pub fn is_integral(&self) -> bool {
        is_integral(&self.entries)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).recip();
            for k in c..m.cols {
                let v = m.get(lead, k) * &inv;
                m.set(lead, k, v);
            }
            for r in 0..m.rows {
                if r == lead || m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c).clone();
                for k in c..m.cols {
                    let v = m.get(r, k) - &f * m.get(lead, k);
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn row_space_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        Matrix::from_rows((0..pivots.len()).map(|i| r.row(i).to_vec()).collect())
            .map(|m| if pivots.is_empty() { Matrix::zeros(0, self.cols) } else { m })
            .expect("rows of an rref share a width")
    }

    /// Basis of the right null space; one vector per free column, with that
    /// free coordinate equal to one.
    pub fn kernel_basis(&self) -> Vec<RatVec> {
        let (r, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
    }

    /// Some solution `x` of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Result<Option<RatVec>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let aug = Matrix::from_rows(
            self.rows().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect(),
        )?;
        let aug = if self.rows == 0 { Matrix::zeros(0, self.cols + 1) } else { aug };
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for r in c + 1..m.rows {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c) / &pivot;
                for k in c..m.cols {
                    let v = m.get(r, k) - &f * m.get(c, k);
                    m.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    /// Determinant of the submatrix on the given rows and columns, both taken
    /// in increasing order.
    pub fn minor(&self, rows: &IndexSubset, cols: &IndexSubset) -> Result<Rat> {
        if rows.len() != cols.len() {
            return Err(Error::Shape(format!("{} rows vs {} columns in minor", rows.len(), cols.len())));
        }
        if rows.ground() != self.rows || cols.ground() != self.cols {
            return Err(Error::Shape(format!(
                "minor index sets over [{}]x[{}] for a {}x{} matrix",
                rows.ground(),
                cols.ground(),
                self.rows,
                self.cols
            )));
        }
        self.submatrix(rows.indices(), cols.indices()).det()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let entries = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        Matrix { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        self.submatrix(&(0..self.rows).collect_vec(), cols)
    }

    pub fn delete_columns(&self, drop: &[usize]) -> Matrix {
        let keep = (0..self.cols).filter(|c| !drop.contains(c)).collect_vec();
        self.select_columns(&keep)
    }

    /// Multiplies column `c` by `factors[c]`.
    pub fn scale_columns(&self, factors: &[Rat]) -> Result<Matrix> {
        if factors.len() != self.cols {
            return Err(Error::Shape(format!("{} column factors for {} columns", factors.len(), self.cols)));
        }
        let mut out = self.clone();
        for r in 0..self.rows {
            for (c, f) in factors.iter().enumerate() {
                let v = out.get(r, c) * f;
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    /// True when both matrices have the same row space.
    pub fn same_row_space(&self, other: &Matrix) -> bool {
        self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", row.iter().join(" "))?;
        }
        Ok(())
    }
}

/// Strictly increasing subset of `[0, ground)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSubset {
    indices: Vec<usize>,
    ground: usize,
}

impl IndexSubset {
    /// Sorts the indices; duplicates or out-of-range entries are rejected.
    pub fn new(mut indices: Vec<usize>, ground: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Subset(format!("repeated index in {indices:?}")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= ground) {
            return Err(Error::Subset(format!("index {bad} outside [0, {ground})")));
        }
        Ok(Self { indices, ground })
    }

    pub fn empty(ground: usize) -> Self {
        Self { indices: Vec::new(), ground }
    }

    pub fn full(ground: usize) -> Self {
        Self { indices: (0..ground).collect(), ground }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSubset) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &IndexSubset) -> bool {
        self.indices.iter().all(|&i| !other.contains(i))
    }

    pub fn complement(&self) -> IndexSubset {
        Self { indices: (0..self.ground).filter(|&i| !self.contains(i)).collect(), ground: self.ground }
    }

    pub fn union(&self, other: &IndexSubset) -> IndexSubset {
        let mut indices = self.indices.clone();
        indices.extend(other.indices.iter().filter(|&&i| !self.contains(i)));
        indices.sort_unstable();
        Self { indices, ground: self.ground.max(other.ground) }
    }

    pub fn difference(&self, other: &IndexSubset) -> IndexSubset {
        Self { indices: self.indices.iter().copied().filter(|&i| !other.contains(i)).collect(), ground: self.ground }
    }

    /// Relabels the members of `self` outside `removed` by their rank among
    /// the indices of `[ground]` not in `removed`.
    pub fn reindex_without(&self, removed: &IndexSubset) -> IndexSubset {
        let keep = removed.complement();
        let indices = self.indices.iter().filter_map(|i| keep.indices.binary_search(i).ok()).collect();
        Self { indices, ground: keep.len() }
    }

    /// Indicator vector in `{0,1}^ground`.
    pub fn indicator(&self) -> Vec<i64> {
        let mut v = vec![0; self.ground];
        for &i in &self.indices {
            v[i] = 1;
        }
        v
    }

    /// One-based digits, e.g. `{0,2}` becomes `"13"`; comma separated once
    /// the ground set has more than nine elements.
    pub fn label(&self) -> String {
        let sep = if self.ground > 9 { "," } else { "" };
        self.indices.iter().map(|i| (i + 1).to_string()).join(sep)
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices.iter().map(|i| i + 1).join(","))
    }
}

/// All `k`-subsets of `[0, n)` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<IndexSubset> {
    (0..n).combinations(k).map(|indices| IndexSubset { indices, ground: n }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn subset(ix: &[usize], n: usize) -> IndexSubset {
        IndexSubset::new(ix.to_vec(), n).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(2).rank(), 2);
        assert_eq!(Matrix::zeros(3, 4).rank(), 0);
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn minor_examples() {
        let id = Matrix::identity(2);
        assert_eq!(id.minor(&subset(&[0, 1], 2), &subset(&[0, 1], 2)).unwrap(), rat(1));
        let a = m(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let rows = subset(&[0, 1], 2);
        assert_eq!(a.minor(&rows, &subset(&[0, 2], 3)).unwrap(), rat(1));
        // [[0,1],[1,1]]
        assert_eq!(a.minor(&rows, &subset(&[1, 2], 3)).unwrap(), rat(-1));
    }

    #[test]
    fn minor_size_mismatch() {
        let a = Matrix::identity(3);
        assert!(matches!(a.minor(&subset(&[0, 1], 3), &subset(&[0], 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(3).kernel_basis().is_empty());
        let k = m(&[vec![1, 1]]).kernel_basis();
        assert_eq!(k, vec![rat_vec(&[-1, 1])]);
        let k = m(&[vec![1, 0, -1], vec![0, 1, -1]]).kernel_basis();
        assert_eq!(k, vec![rat_vec(&[1, 1, 1])]);
    }

    #[test]
    fn determinant_with_swaps() {
        let a = m(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]);
        assert_eq!(a.det().unwrap(), rat(-3));
        assert!(m(&[vec![1, 2]]).det().is_err());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rat(" -4 ").unwrap(), rat(-4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![ratio(1, 2), ratio(-3, 4), rat(0)];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn subset_basics() {
        assert!(IndexSubset::new(vec![1, 1], 3).is_err());
        assert!(IndexSubset::new(vec![3], 3).is_err());
        let s = subset(&[2, 0], 4);
        assert_eq!(s.indices(), &[0, 2]);
        assert_eq!(s.complement().indices(), &[1, 3]);
        assert_eq!(s.label(), "13");
        assert_eq!(subset(&[1, 3], 4).reindex_without(&subset(&[0], 4)).indices(), &[0, 2]);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(4, 2)[1].indices(), &[0, 2]);
    }
}
