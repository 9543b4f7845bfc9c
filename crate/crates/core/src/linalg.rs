//! Fraction-free (Bareiss) elimination over the integers.
//!
//! Rational rows are first scaled to integer rows by their common
//! denominator, which changes neither the rank nor the null space. Every
//! division performed during elimination is exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{to_integer_row, Rational};

/// Row echelon form produced by [`bareiss`].
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    /// Pivot column of row `r`, for `r < rank`.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Right-looking Bareiss elimination. Pivots are taken column by column,
/// using the first row with a nonzero entry.
pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> Echelon {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;

    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: m, pivots }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    bareiss(rows.iter().map(|r| to_integer_row(r)).collect()).rank()
}

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined,
}

/// Solves `A x = b` exactly. `a` is given row by row.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let unknowns = a.first().map_or(0, Vec::len);
    let augmented: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            to_integer_row(&full)
        })
        .collect();
    let ech = bareiss(augmented);
    if ech.pivots.last() == Some(&unknowns) {
        return Solution::Inconsistent;
    }
    if ech.rank() < unknowns {
        return Solution::Underdetermined;
    }
    // Square upper-triangular system in the first `unknowns` rows.
    let mut x = vec![Rational::zero(); unknowns];
    for r in (0..unknowns).rev() {
        let row = &ech.rows[r];
        let mut acc = Rational::from_integer(row[unknowns].clone());
        for j in r + 1..unknowns {
            acc -= Rational::from_integer(row[j].clone()) * &x[j];
        }
        x[r] = acc / Rational::from_integer(row[r].clone());
    }
    Solution::Unique(x)
}

/// The null vector of `rows` whose first free column (in column order) is
/// set to one and every other free column to zero.
///
/// Columns are reduced left to right, one at a time, and the scan stops at
/// the first column without a pivot; columns to its right never enter the
/// answer. Returns `None` when the columns are independent.
pub fn first_null_vector(rows: &[Vec<BigInt>], ncols: usize) -> Option<Vec<Rational>> {
    let nrows = rows.len();

    // Elimination history, replayed on each new column.
    struct Step {
        swap_with: usize,
        pivot: BigInt,
        // Entries below the pivot at the moment the pivot was chosen.
        factors: Vec<BigInt>,
    }
    let mut steps: Vec<Step> = Vec::new();
    // Reduced entries above and on the diagonal, per pivot column.
    let mut upper: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();

    for c in 0..ncols {
        let mut col: Vec<BigInt> = rows.iter().map(|r| r[c].clone()).collect();
        let mut prev = BigInt::one();
        for (s, step) in steps.iter().enumerate() {
            col.swap(s, step.swap_with);
            let head = col[s].clone();
            for (i, f) in (s + 1..nrows).zip(&step.factors) {
                let v = &step.pivot * &col[i] - f * &head;
                col[i] = v / &prev;
            }
            prev = step.pivot.clone();
        }

        let k = steps.len();
        match (k..nrows).find(|&i| !col[i].is_zero()) {
            Some(p) => {
                col.swap(k, p);
                steps.push(Step {
                    swap_with: p,
                    pivot: col[k].clone(),
                    factors: col[k + 1..].to_vec(),
                });
                col.truncate(k + 1);
                upper.push(col);
                pivot_cols.push(c);
            }
            None => {
                // Free column. With D the last pivot (the determinant of the
                // pivot minor up to sign), Cramer's rule makes D * x integral,
                // so back-substitution runs in integers with exact divisions.
                let det = upper.last().map_or_else(BigInt::one, |u| u[k - 1].clone());
                let mut z = vec![BigInt::zero(); k];
                for r in (0..k).rev() {
                    let mut acc = -(&det * &col[r]);
                    for s in r + 1..k {
                        let coeff = &upper[s][r];
                        if !coeff.is_zero() {
                            acc -= coeff * &z[s];
                        }
                    }
                    z[r] = acc / &upper[r][r];
                }
                let mut x = vec![Rational::zero(); ncols];
                x[c] = Rational::one();
                for (r, zr) in z.into_iter().enumerate() {
                    x[pivot_cols[r]] = Rational::new(zr, det.clone());
                }
                return Some(x);
            }
        }
    }
    None
}

/// Plain Gaussian elimination over the rationals. Slower than [`rank`] but
/// shares none of its code, which is the point: the brute-force joint
/// detector and the tests use it as an independent route.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..ncols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
    }
    r
}
