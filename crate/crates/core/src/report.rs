//! One-row summaries of an arrangement: counts, the pruning threshold, the
//! largest fiber, and the joints-to-lines ratio.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::color_from_prune;
use crate::error::Result;
use crate::geometry::Arrangement;
use crate::pruning::{grid_constant, prune};
use crate::rational::{self, factorial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementReport {
    pub dim: usize,
    pub lines: usize,
    pub joints: usize,
    pub m: usize,
    pub max_fiber: usize,
    /// `|J|^(n-1)`.
    #[serde(with = "rational::serde_biguint")]
    pub bound_lhs: BigUint,
    /// `n! |L|^n`.
    #[serde(with = "rational::serde_biguint")]
    pub bound_rhs: BigUint,
    /// `|J|^(n-1) / |L|^n`, exact.
    #[serde(with = "rational::serde_str")]
    pub ratio_exact: Rational,
    /// `|J| / |L|^(n/(n-1))` to 15 significant digits.
    pub ratio: String,
    /// `|J|^(n-1) n^n = |L|^n`, attained by the axis grid.
    pub extremal: bool,
}

pub const CSV_HEADER: &str = "dim,lines,joints,m,max_fiber,bound_lhs,bound_rhs,ratio";

impl ArrangementReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.dim,
            self.lines,
            self.joints,
            self.m,
            self.max_fiber,
            self.bound_lhs,
            self.bound_rhs,
            self.ratio
        )
    }

    pub fn bound_holds(&self) -> bool {
        self.bound_lhs <= self.bound_rhs
    }
}

pub fn report(arr: &Arrangement) -> Result<ArrangementReport> {
    let n = arr.dimension();
    let trace = prune(arr)?;
    let coloring = color_from_prune(&trace, arr)?;
    let j = BigUint::from(trace.initial_joint_count);
    let l = BigUint::from(arr.len());
    let bound_lhs = j.pow(n as u32 - 1);
    let l_pow = l.pow(n as u32);
    let ratio_exact = if l_pow.is_zero() {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(bound_lhs.clone()), BigInt::from(l_pow.clone()))
    };
    let ratio = ratio_exact
        .to_f64()
        .map(|r| significant(r.powf(1.0 / (n as f64 - 1.0)), 15))
        .unwrap_or_else(|| "nan".into());
    Ok(ArrangementReport {
        dim: n,
        lines: arr.len(),
        joints: trace.initial_joint_count,
        m: trace.m,
        max_fiber: coloring.max_fiber(),
        extremal: &bound_lhs * grid_constant(n) == l_pow,
        bound_rhs: factorial(n as u64) * &l_pow,
        bound_lhs,
        ratio_exact,
        ratio,
    })
}

/// Decimal rendering of `x` with `digits` significant digits, trailing
/// zeros trimmed.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&exponent) {
        return format!("{:.*e}", digits - 1, x);
    }
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap();
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let s = format!("{:.*}", decimals, rounded);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid_lines, star_bundle};
    use crate::rational::frac;

    #[test]
    fn grid_report() {
        let r = report(&grid_lines(3, 2)).unwrap();
        assert_eq!((r.dim, r.lines, r.joints, r.m), (3, 12, 8, 3));
        assert_eq!(r.bound_lhs, BigUint::from(64u32));
        assert_eq!(r.bound_rhs, BigUint::from(6u32 * 1728));
        assert_eq!(r.ratio_exact, frac(1, 27));
        assert!(r.extremal);
        // 3^(-3/2)
        assert_eq!(r.ratio, "0.192450089729875");
        assert_eq!(
            r.csv_row(),
            "3,12,8,3,2,64,10368,0.192450089729875"
        );
    }

    #[test]
    fn star_is_not_extremal() {
        let r = report(&star_bundle(3, 5).unwrap()).unwrap();
        assert_eq!(r.joints, 1);
        assert!(!r.extremal);
        assert!(r.bound_holds());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.5, 15), "0.5");
        assert_eq!(significant(1.0 / 3.0, 15), "0.333333333333333");
        assert_eq!(significant(12345.678, 3), "12300");
        assert_eq!(significant(0.0, 15), "0");
    }
}
