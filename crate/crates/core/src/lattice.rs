//! Integer-lattice machinery for Z^n: vectors, subgroup bases obtained from
//! Smith/Hermite reduction, and solvers for the mixed plain/modular relation
//! systems that cut out central grading groups.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// A vector in the ambient lattice Z^n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LatticeVec(pub Vec<i64>);

impl LatticeVec {
    pub fn zero(n: usize) -> LatticeVec {
        LatticeVec(vec![0; n])
    }

    pub fn basis(n: usize, i: usize) -> LatticeVec {
        let mut v = vec![0; n];
        v[i] = 1;
        LatticeVec(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &LatticeVec) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Debug for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Add for &LatticeVec {
    type Output = LatticeVec;
    fn add(self, rhs: &LatticeVec) -> LatticeVec {
        LatticeVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVec {
    type Output = LatticeVec;
    fn sub(self, rhs: &LatticeVec) -> LatticeVec {
        LatticeVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVec {
    type Output = LatticeVec;
    fn neg(self) -> LatticeVec {
        LatticeVec(self.0.iter().map(|a| -a).collect())
    }
}

/// Index of a subgroup in the ambient lattice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupIndex {
    Finite(u128),
    Infinite,
}

impl Serialize for GroupIndex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupIndex::Finite(k) => serializer.serialize_u128(*k),
            GroupIndex::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

/// A subgroup of Z^n given by an independent generating set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SubgroupBasis {
    pub generators: Vec<LatticeVec>,
    pub index: GroupIndex,
    #[serde(skip)]
    ambient_rank: usize,
}

impl SubgroupBasis {
    /// Builds a basis from arbitrary generators: reduces to a Hermite basis,
    /// verifying independence is then automatic.
    pub fn new(ambient_rank: usize, generators: Vec<LatticeVec>) -> Result<SubgroupBasis> {
        for g in &generators {
            if g.rank() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, got: g.rank() });
            }
        }
        let rows: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| g.0.iter().map(|&x| x as i128).collect())
            .collect();
        let hnf = row_hermite(rows);
        let gens: Vec<LatticeVec> = hnf
            .iter()
            .map(|r| LatticeVec(r.iter().map(|&x| x as i64).collect()))
            .collect();
        let index = if gens.len() == ambient_rank {
            let det: i128 = hermite_pivots(&hnf).iter().product();
            GroupIndex::Finite(det.unsigned_abs())
        } else {
            GroupIndex::Infinite
        };
        Ok(SubgroupBasis { generators: gens, index, ambient_rank })
    }

    pub fn full(ambient_rank: usize) -> SubgroupBasis {
        let gens = (0..ambient_rank).map(|i| LatticeVec::basis(ambient_rank, i)).collect();
        SubgroupBasis::new(ambient_rank, gens).unwrap()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn contains(&self, v: &LatticeVec) -> Result<bool> {
        subgroup_membership(v, self)
    }
}

/// One relation row: plain rows demand `coeffs . lambda = 0`, modular rows
/// demand `coeffs . lambda = 0 (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRow {
    pub coeffs: Vec<i64>,
    pub modulus: Option<i64>,
}

impl RelationRow {
    pub fn plain(coeffs: Vec<i64>) -> RelationRow {
        RelationRow { coeffs, modulus: None }
    }

    pub fn modular(coeffs: Vec<i64>, modulus: i64) -> RelationRow {
        RelationRow { coeffs, modulus: Some(modulus) }
    }

    pub fn holds(&self, v: &LatticeVec) -> bool {
        let s: i64 = self.coeffs.iter().zip(&v.0).map(|(a, b)| a * b).sum();
        match self.modulus {
            None => s == 0,
            Some(m) => s.rem_euclid(m) == 0,
        }
    }
}

/// Row-style Hermite normal form; returns the nonzero rows (a canonical basis
/// of the row lattice). Pivots are positive, entries above pivots reduced.
fn row_hermite(mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        // gcd-reduce all entries in this column below pivot_row into one row
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if rows[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) => {
                            if rows[r][col].abs() < rows[b][col].abs() {
                                Some(r)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            let p = rows[pivot_row][col];
            for r in pivot_row + 1..rows.len() {
                if rows[r][col] != 0 {
                    let q = rows[r][col].div_euclid(p);
                    for c in 0..ncols {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row..].iter().all(|r| r[col] == 0) {
            continue;
        }
        // normalize pivot sign, reduce rows above
        if rows[pivot_row][col] < 0 {
            for c in 0..ncols {
                rows[pivot_row][c] = -rows[pivot_row][c];
            }
        }
        let p = rows[pivot_row][col];
        for r in 0..pivot_row {
            let q = rows[r][col].div_euclid(p);
            if q != 0 {
                for c in 0..ncols {
                    rows[r][c] -= q * rows[pivot_row][c];
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

fn hermite_pivots(rows: &[Vec<i128>]) -> Vec<i128> {
    rows.iter()
        .map(|r| *r.iter().find(|&&x| x != 0).unwrap_or(&0))
        .collect()
}

/// Kernel of an integer matrix (as rows) over Z, via column reduction with a
/// tracked unimodular transform. Returns a basis of { x : A x = 0 }.
fn integer_kernel(a: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    let mut mat = a;
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    let nrows = mat.len();
    let mut fixed = 0usize; // columns < fixed are pivot columns already used
    for row in 0..nrows {
        loop {
            let mut best: Option<usize> = None;
            for col in fixed..ncols {
                if mat[row][col] != 0 {
                    best = match best {
                        None => Some(col),
                        Some(b) => {
                            if mat[row][col].abs() < mat[row][b].abs() {
                                Some(col)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            let mut all_zeroed = true;
            let p = mat[row][b];
            for col in fixed..ncols {
                if col != b && mat[row][col] != 0 {
                    let q = mat[row][col].div_euclid(p);
                    if q != 0 {
                        for r in 0..nrows {
                            mat[r][col] -= q * mat[r][b];
                        }
                        for r in 0..ncols {
                            u[r][col] -= q * u[r][b];
                        }
                    }
                    if mat[row][col] != 0 {
                        all_zeroed = false;
                    }
                }
            }
            if all_zeroed {
                // move the pivot column into the fixed zone
                for r in 0..nrows {
                    mat[r].swap(fixed, b);
                }
                for r in 0..ncols {
                    u[r].swap(fixed, b);
                }
                fixed += 1;
                break;
            }
        }
    }
    // columns >= fixed of the transformed matrix are zero on all rows
    (fixed..ncols)
        .map(|col| (0..ncols).map(|r| u[r][col]).collect())
        .collect()
}

/// Solves the mixed system: plain rows `r . lambda = 0`, modular rows
/// `r . lambda = 0 (mod M)`. Modular rows get an auxiliary unknown t with
/// `r . lambda - M t = 0`; the kernel is projected back onto Z^n.
pub fn smith_kernel(ambient_rank: usize, rows: &[RelationRow]) -> Result<SubgroupBasis> {
    for row in rows {
        if row.coeffs.len() != ambient_rank {
            return Err(Error::DimensionMismatch { expected: ambient_rank, got: row.coeffs.len() });
        }
        if let Some(m) = row.modulus {
            if m < 2 {
                return Err(Error::InvariantViolation(format!("modulus {m} must be >= 2")));
            }
        }
    }
    let n_aux = rows.iter().filter(|r| r.modulus.is_some()).count();
    let ncols = ambient_rank + n_aux;
    let mut aux = 0usize;
    let mut mat: Vec<Vec<i128>> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r: Vec<i128> = row.coeffs.iter().map(|&x| x as i128).collect();
        r.resize(ncols, 0);
        if let Some(m) = row.modulus {
            r[ambient_rank + aux] = -(m as i128);
            aux += 1;
        }
        mat.push(r);
    }
    let kernel = integer_kernel(mat, ncols);
    let projected: Vec<LatticeVec> = kernel
        .iter()
        .map(|v| LatticeVec(v[..ambient_rank].iter().map(|&x| x as i64).collect()))
        .filter(|v| !v.is_zero())
        .collect();
    SubgroupBasis::new(ambient_rank, projected)
}

/// True iff `v` lies in the Z-span of the basis generators.
pub fn subgroup_membership(v: &LatticeVec, basis: &SubgroupBasis) -> Result<bool> {
    if v.rank() != basis.ambient_rank {
        return Err(Error::DimensionMismatch { expected: basis.ambient_rank, got: v.rank() });
    }
    // generators are a Hermite basis by construction; reduce v against it
    let mut rem: Vec<i128> = v.0.iter().map(|&x| x as i128).collect();
    for g in &basis.generators {
        let pivot_col = g.0.iter().position(|&x| x != 0).unwrap();
        let p = g.0[pivot_col] as i128;
        if rem[pivot_col] % p != 0 {
            return Ok(false);
        }
        let q = rem[pivot_col] / p;
        for (c, &gc) in g.0.iter().enumerate() {
            rem[c] -= q * gc as i128;
        }
    }
    Ok(rem.iter().all(|&x| x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_plain_full_rank_system_is_trivial() {
        let rows = vec![RelationRow::plain(vec![0, 1]), RelationRow::plain(vec![1, 0])];
        let basis = smith_kernel(2, &rows).unwrap();
        assert!(basis.generators.is_empty());
        assert_eq!(basis.index, GroupIndex::Infinite);
    }

    #[test]
    fn kernel_of_mod4_system() {
        let rows = vec![
            RelationRow::modular(vec![0, 1], 4),
            RelationRow::modular(vec![1, 0], 4),
        ];
        let basis = smith_kernel(2, &rows).unwrap();
        assert_eq!(basis.rank(), 2);
        assert_eq!(basis.index, GroupIndex::Finite(16));
        assert!(basis.contains(&LatticeVec(vec![4, 0])).unwrap());
        assert!(basis.contains(&LatticeVec(vec![0, 4])).unwrap());
        assert!(!basis.contains(&LatticeVec(vec![2, 0])).unwrap());
    }

    #[test]
    fn empty_system_gives_full_lattice() {
        let basis = smith_kernel(1, &[]).unwrap();
        assert_eq!(basis.generators, vec![LatticeVec(vec![1])]);
        assert_eq!(basis.index, GroupIndex::Finite(1));
    }

    #[test]
    fn membership_examples() {
        let basis = SubgroupBasis::new(
            2,
            vec![LatticeVec(vec![4, 0]), LatticeVec(vec![0, 4])],
        )
        .unwrap();
        assert!(basis.contains(&LatticeVec(vec![4, 0])).unwrap());
        assert!(!basis.contains(&LatticeVec(vec![2, 0])).unwrap());
        assert!(basis.contains(&LatticeVec(vec![4, 8])).unwrap());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let err = smith_kernel(2, &[RelationRow::plain(vec![1])]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn mixed_plain_and_modular() {
        // lambda_1 = 0 and 2*lambda_2 = 0 mod 6  =>  span{(0,3)}
        let rows = vec![
            RelationRow::plain(vec![1, 0]),
            RelationRow::modular(vec![0, 2], 6),
        ];
        let basis = smith_kernel(2, &rows).unwrap();
        assert_eq!(basis.generators, vec![LatticeVec(vec![0, 3])]);
        assert_eq!(basis.index, GroupIndex::Infinite);
    }

    #[test]
    fn kernel_vectors_satisfy_rows() {
        let rows = vec![
            RelationRow::modular(vec![2, 3, 1], 5),
            RelationRow::plain(vec![1, -1, 0]),
        ];
        let basis = smith_kernel(3, &rows).unwrap();
        for g in &basis.generators {
            for row in &rows {
                assert!(row.holds(g), "generator {g} violates {row:?}");
            }
        }
    }
}
