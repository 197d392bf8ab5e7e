//! Integer lattices: bases, elementary divisors and sublattice indices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rat};

pub type IntVec = Vec<BigInt>;

pub fn int_vec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Index of a sublattice; infinite when the ranks differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(k) => Some(k),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(k) => write!(f, "{k}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// A Z-basis (in row echelon form) of the lattice generated by `vectors`.
pub fn lattice_basis(vectors: &[IntVec]) -> Vec<IntVec> {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<IntVec> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis = Vec::new();
    for col in 0..dim {
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let pivot = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).expect("nonempty");
            let prow = rows[pivot].clone();
            for &r in &nonzero {
                if r == pivot {
                    continue;
                }
                let q = rows[r][col].div_floor(&prow[col]);
                for (x, p) in rows[r].iter_mut().zip(&prow) {
                    *x -= &q * p;
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            let mut row = rows.swap_remove(p);
            if row[col].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            basis.push(row);
        }
        rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    }
    basis
}

/// Nonzero diagonal entries of the Smith normal form, each positive, in
/// divisibility order.
pub fn elementary_divisors(rows: &[IntVec]) -> Vec<BigInt> {
    let mut a: Vec<IntVec> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pr, pc)) = (t..nrows)
            .flat_map(|r| (t..ncols).map(move |c| (r, c)))
            .filter(|&(r, c)| !a[r][c].is_zero())
            .min_by_key(|&(r, c)| a[r][c].abs())
        else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        let mut dirty = false;
        for r in t + 1..nrows {
            let q = a[r][t].div_floor(&a[t][t]);
            if q.is_zero() {
                continue;
            }
            let prow = a[t].clone();
            for (x, p) in a[r].iter_mut().zip(&prow) {
                *x -= &q * p;
            }
        }
        for c in t + 1..ncols {
            let q = a[t][c].div_floor(&a[t][t]);
            if q.is_zero() {
                continue;
            }
            for row in a.iter_mut() {
                let p = row[t].clone();
                row[c] -= &q * p;
            }
        }
        if (t + 1..nrows).any(|r| !a[r][t].is_zero()) || (t + 1..ncols).any(|c| !a[t][c].is_zero()) {
            dirty = true;
        } else if let Some(r) = (t + 1..nrows).find(|&r| (t + 1..ncols).any(|c| !(&a[r][c] % &a[t][t]).is_zero())) {
            // pivot must divide the rest; fold the offending row in and retry
            let other = a[r].clone();
            for (x, o) in a[t].iter_mut().zip(&other) {
                *x += o;
            }
            dirty = true;
        }
        if !dirty {
            divisors.push(a[t][t].abs());
            t += 1;
        }
    }
    divisors
}

/// Index of the lattice spanned by `rows` inside its saturation `Z^n ∩ span(rows)`.
pub fn saturation_index(rows: &[IntVec]) -> BigInt {
    elementary_divisors(rows).into_iter().fold(BigInt::one(), |acc, d| acc * d)
}

fn to_rat_rows(rows: &[IntVec]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect()
}

/// Coordinates of every generator with respect to a Z-basis of the ambient lattice.
fn coordinates(gens: &[IntVec], ambient: &[IntVec]) -> Result<(usize, Vec<IntVec>)> {
    let dim = gens.iter().chain(ambient).map(Vec::len).next().unwrap_or(0);
    if gens.iter().chain(ambient).any(|v| v.len() != dim) {
        return Err(Error::Shape("lattice generators of different lengths".into()));
    }
    let basis = lattice_basis(ambient);
    if basis.is_empty() {
        if gens.iter().any(|g| g.iter().any(|x| !x.is_zero())) {
            return Err(Error::Containment("nonzero generator in the zero lattice".into()));
        }
        return Ok((0, gens.iter().map(|_| Vec::new()).collect()));
    }
    let bt = Matrix::from_rows(to_rat_rows(&basis))?.transpose();
    let mut coords = Vec::with_capacity(gens.len());
    for g in gens {
        let rhs: Vec<Rat> = g.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let sol =
            bt.solve(&rhs)?.ok_or_else(|| Error::Containment(format!("generator {g:?} outside the rational span")))?;
        let ints: Option<IntVec> = sol.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect();
        coords.push(ints.ok_or_else(|| Error::Containment(format!("generator {g:?} outside the lattice")))?);
    }
    Ok((basis.len(), coords))
}

/// Index of the lattice generated by `gens` inside the lattice generated by
/// `ambient_gens`. Every generator must lie in the ambient lattice.
pub fn lattice_index(gens: &[IntVec], ambient_gens: &[IntVec]) -> Result<LatticeIndex> {
    let (rank, coords) = coordinates(gens, ambient_gens)?;
    let divisors = elementary_divisors(&coords);
    if divisors.len() < rank {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(divisors.into_iter().fold(BigInt::one(), |acc, d| acc * d)))
}

/// Index of the lattice generated by `gens` inside `L ∩ span(gens)`, where
/// `L` is generated by `ambient_gens`. Always finite.
pub fn index_in_span(gens: &[IntVec], ambient_gens: &[IntVec]) -> Result<BigInt> {
    let (_, coords) = coordinates(gens, ambient_gens)?;
    Ok(saturation_index(&coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| int_vec(r)).collect()
    }

    fn finite(k: i64) -> LatticeIndex {
        LatticeIndex::Finite(BigInt::from(k))
    }

    #[test]
    fn index_examples() {
        let std2 = vs(&[&[1, 0], &[0, 1]]);
        assert_eq!(lattice_index(&std2, &std2).unwrap(), finite(1));
        assert_eq!(lattice_index(&vs(&[&[2, 0], &[0, 1]]), &std2).unwrap(), finite(2));
        assert_eq!(lattice_index(&vs(&[&[1, 1]]), &std2).unwrap(), LatticeIndex::Infinite);
    }

    #[test]
    fn containment_errors() {
        let amb = vs(&[&[2, 0], &[0, 2]]);
        assert!(matches!(lattice_index(&vs(&[&[1, 0]]), &amb), Err(Error::Containment(_))));
        let line = vs(&[&[1, 0, 0]]);
        assert!(matches!(lattice_index(&vs(&[&[0, 1, 0]]), &line), Err(Error::Containment(_))));
    }

    #[test]
    fn divisors_of_known_matrices() {
        assert_eq!(elementary_divisors(&vs(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), int_vec(&[2, 6, 12]));
        assert_eq!(elementary_divisors(&vs(&[&[2, 0], &[0, 3]])), int_vec(&[1, 6]));
        assert!(elementary_divisors(&vs(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn redundant_generators() {
        let gens = vs(&[&[2, 0], &[0, 2], &[2, 2], &[4, 6]]);
        assert_eq!(lattice_index(&gens, &vs(&[&[1, 0], &[0, 1]])).unwrap(), finite(4));
        assert_eq!(lattice_basis(&gens).len(), 2);
    }

    #[test]
    fn span_relative_index() {
        // (2,2) inside Z^2 ∩ span{(1,1)}
        let std2 = vs(&[&[1, 0], &[0, 1]]);
        assert_eq!(index_in_span(&vs(&[&[2, 2]]), &std2).unwrap(), BigInt::from(2));
        // root lattice of A_2 contains (1,-1,0) primitively
        let roots = vs(&[&[1, -1, 0], &[0, 1, -1]]);
        assert_eq!(index_in_span(&vs(&[&[1, -1, 0]]), &roots).unwrap(), BigInt::one());
    }
}
