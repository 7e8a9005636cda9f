//! Small dense exact linear algebra over the scalar field, used for span and
//! rank computations in axiom checkers and basis-closure validation.

use crate::scalar::{Field, Scalar};

/// Row-reduces `mat` in place over K; returns the pivot columns.
fn row_reduce(mat: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let nrows = mat.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = mat[0].len();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].inv().expect("pivot nonzero");
        for c in col..ncols {
            mat[row][c] = &mat[row][c] * &inv;
        }
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &mat[row][c];
                    mat[r][c] = &mat[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(mut mat: Vec<Vec<Scalar>>) -> usize {
    row_reduce(&mut mat).len()
}

/// Solves `sum_i x_i rows[i] = target`; returns the coefficients when the
/// target lies in the row span.
pub(crate) fn solve_in_span(field: &Field, rows: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let ncols = target.len();
    // augmented transpose system: columns are equations
    let nunk = rows.len();
    let mut mat: Vec<Vec<Scalar>> = (0..ncols)
        .map(|c| {
            let mut row: Vec<Scalar> = rows.iter().map(|r| r[c].clone()).collect();
            row.push(target[c].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut mat);
    if pivots.contains(&nunk) {
        return None; // inconsistent
    }
    let mut x = vec![field.zero(); nunk];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = mat[r][nunk].clone();
    }
    Some(x)
}

/// True iff the square matrix is invertible over K.
pub(crate) fn is_invertible(mat: Vec<Vec<Scalar>>) -> bool {
    let n = mat.len();
    n == 0 || rank(mat) == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve() {
        let f = Field::new(1).unwrap();
        let rows = vec![
            vec![f.integer(1), f.integer(2)],
            vec![f.integer(2), f.integer(4)],
        ];
        assert_eq!(rank(rows.clone()), 1);
        let target = vec![f.integer(3), f.integer(6)];
        let x = solve_in_span(&f, &rows, &target).unwrap();
        // 3*(1,2) = (3,6) is one valid solution; verify by substitution
        let mut acc = vec![f.zero(), f.zero()];
        for (xi, row) in x.iter().zip(&rows) {
            for c in 0..2 {
                acc[c] = &acc[c] + &(xi * &row[c]);
            }
        }
        assert_eq!(acc, target);
        assert!(solve_in_span(&f, &rows, &[f.integer(1), f.integer(1)]).is_none());
    }

    #[test]
    fn invertibility() {
        let f = Field::new(4).unwrap();
        let z = f.zeta();
        assert!(is_invertible(vec![
            vec![f.one(), z.clone()],
            vec![z.clone(), f.one()],
        ]));
        assert!(!is_invertible(vec![
            vec![f.one(), z.clone()],
            vec![z.clone(), &z * &z],
        ]));
    }
}
