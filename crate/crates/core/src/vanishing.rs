//! Lowest-degree polynomials through a finite point set.
//!
//! Polynomials of degree at most `d` in `n` variables form a space of
//! dimension `C(d + n, n)`. Once that exceeds the number of points, the
//! evaluation map has a kernel, and any kernel element is a nonzero
//! polynomial vanishing on every point.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{JointsError, Result};
use crate::geometry::PointN;
use crate::linalg;
use crate::poly::{monomials_up_to, Monomial, MultiPoly};
use crate::rational::{binomial, to_integer_row, Rational};

/// Least `d >= 0` with `C(d + n, n) > m`.
pub fn min_vanishing_degree(m: usize, n: usize) -> u32 {
    let m = BigUint::from(m);
    let mut d: u32 = 0;
    while binomial(d as u64 + n as u64, n as u64) <= m {
        d += 1;
    }
    d
}

/// A nonzero polynomial of degree at most `min_vanishing_degree(m, n)`
/// vanishing on all `m` points.
///
/// The coefficients are the null vector of the point-by-monomial evaluation
/// matrix (monomials in graded-lex order) whose first free column is one and
/// whose other free columns are zero, so the output depends only on the
/// points and their order.
pub fn vanishing_polynomial(dimension: usize, points: &[PointN]) -> Result<MultiPoly> {
    if let Some(p) = points.iter().find(|p| p.dim() != dimension) {
        return Err(JointsError::DimensionMismatch {
            expected: dimension,
            actual: p.dim(),
        });
    }
    let d = min_vanishing_degree(points.len(), dimension);
    let monomials = monomials_up_to(dimension, d);
    let rows: Vec<_> = points
        .iter()
        .map(|p| to_integer_row(&evaluation_row(p, &monomials)))
        .collect();
    let coeffs = linalg::first_null_vector(&rows, monomials.len()).ok_or_else(|| {
        JointsError::InternalInvariantViolation(format!(
            "evaluation matrix {}x{} has trivial kernel",
            rows.len(),
            monomials.len()
        ))
    })?;
    Ok(MultiPoly::from_terms(
        dimension,
        monomials
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero()),
    ))
}

fn evaluation_row(p: &PointN, monomials: &[Monomial]) -> Vec<Rational> {
    let x = p.coords();
    // Powers of each coordinate up to the largest exponent in use.
    let max_e = monomials.iter().map(Monomial::degree).max().unwrap_or(0) as usize;
    let powers: Vec<Vec<Rational>> = x
        .iter()
        .map(|xi| {
            let mut v = Vec::with_capacity(max_e + 1);
            v.push(num_traits::one());
            for k in 1..=max_e {
                let next = &v[k - 1] * xi;
                v.push(next);
            }
            v
        })
        .collect();
    monomials
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .fold(num_traits::one(), |acc: Rational, (i, &e)| {
                    acc * &powers[i][e as usize]
                })
        })
        .collect()
}
