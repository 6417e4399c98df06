//! Fraction-free (Bareiss) elimination for square systems with rational
//! entries. Rows are cleared of denominators first, so every intermediate
//! value is an integer minor of the scaled matrix.

use dashu::base::Gcd;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub values: Vec<RBig>,
    /// Number of pivots found; less than the dimension for singular systems.
    pub rank: usize,
}

/// Returned when the coefficient matrix is singular and the right-hand side
/// is not in its range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent {
    pub rank: usize,
}

fn lcm(a: &UBig, b: &UBig) -> UBig {
    let g = a.gcd(b);
    a / g * b
}

/// Scales a rational row to integers by its denominators' lcm.
fn integer_row(row: &[RBig]) -> Vec<IBig> {
    let scale = row
        .iter()
        .fold(UBig::ONE, |acc, v| lcm(&acc, v.denominator()));
    let scale = IBig::from(scale);
    row.iter()
        .map(|v| {
            let factor = &scale / IBig::from(v.denominator().clone());
            v.numerator() * factor
        })
        .collect()
}

/// Solves `matrix * x = rhs`. Singular but consistent systems are solved with
/// every free unknown set to zero.
pub fn solve(matrix: &[Vec<RBig>], rhs: &[RBig]) -> Result<Solution, Inconsistent> {
    let n = rhs.len();
    assert_eq!(matrix.len(), n, "matrix must be square");
    let mut rows: Vec<Vec<IBig>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut augmented = row.clone();
            augmented.push(b.clone());
            integer_row(&augmented)
        })
        .collect();

    let mut previous_pivot = IBig::ONE;
    let mut pivot_columns = Vec::with_capacity(n);
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        let Some(found) = (r..n).find(|&i| rows[i][c] != IBig::ZERO) else {
            continue;
        };
        rows.swap(r, found);
        let pivot = rows[r][c].clone();
        let (upper, lower) = rows.split_at_mut(r + 1);
        let pivot_row = &upper[r];
        for row in lower.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..=n {
                let value = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = value / &previous_pivot;
            }
            row[c] = IBig::ZERO;
        }
        // Columns left of c in rows below r are already zero; entries in the
        // skipped (free) columns of pivot rows stay as they are.
        previous_pivot = pivot;
        pivot_columns.push(c);
        r += 1;
    }
    let rank = r;

    for row in &rows[rank..] {
        if row[n] != IBig::ZERO {
            return Err(Inconsistent { rank });
        }
    }

    let mut values = vec![RBig::ZERO; n];
    for (i, &c) in pivot_columns.iter().enumerate().rev() {
        let row = &rows[i];
        let mut acc = RBig::from(row[n].clone());
        for j in (c + 1)..n {
            if row[j] != IBig::ZERO && !values[j].is_zero() {
                acc -= RBig::from(row[j].clone()) * &values[j];
            }
        }
        values[c] = acc / RBig::from(row[c].clone());
    }
    Ok(Solution { values, rank })
}
