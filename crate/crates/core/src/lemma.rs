//! The line lemma in effective form, and the derivative-annihilation chain
//! behind it.
//!
//! If every line meeting a joint set `J'` carries at least `m` points of
//! `J'`, then `|J'| >= C(m - 1 + n, n)`. Otherwise polynomials of degree
//! `m - 1` would outnumber the points, some nonzero `Q` of degree `< m`
//! would vanish on `J'`, its restriction to each line would have too many
//! roots, and repeated differentiation would force every derivative of `Q`,
//! hence `Q` itself, to vanish.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{JointsError, Result};
use crate::geometry::{Arrangement, DirectionN, LineId, PointN};
use crate::poly::MultiPoly;
use crate::rational::{self, binomial, Rational};
use crate::vanishing::min_vanishing_degree;

/// `C(m - 1 + n, n)`: the least size of a joint set all of whose lines carry
/// at least `m >= 1` of its points.
pub fn lemma_lower_bound(m: usize, n: usize) -> BigUint {
    assert!(m >= 1, "lemma bound needs m >= 1");
    binomial((m - 1 + n) as u64, n as u64)
}

/// Least `m >= 1` with `C(m - 1 + n, n) > joints`. Some line of any
/// arrangement with at most `joints` joints carries at most `m - 1` of them.
pub fn joint_threshold(joints: usize, n: usize) -> usize {
    min_vanishing_degree(joints, n) as usize + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCount {
    pub line: LineId,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisOutcome {
    pub holds: bool,
    /// Lowest-id line meeting the set with fewer than `m` of its points.
    pub violation: Option<LineCount>,
}

/// Number of points of `points` on each line of `arr` that meets them, by
/// ascending line id.
pub fn line_counts(points: &[PointN], arr: &Arrangement) -> Vec<LineCount> {
    arr.lines()
        .iter()
        .map(|l| LineCount {
            line: l.id,
            count: points.iter().filter(|p| l.contains(p)).count(),
        })
        .filter(|lc| lc.count > 0)
        .collect()
}

fn distinct(points: &[PointN]) -> Vec<PointN> {
    let set: BTreeSet<&PointN> = points.iter().collect();
    set.into_iter().cloned().collect()
}

pub fn check_hypothesis(jp: &[PointN], arr: &Arrangement, m: usize) -> HypothesisOutcome {
    let jp = distinct(jp);
    let violation = line_counts(&jp, arr).into_iter().find(|lc| lc.count < m);
    HypothesisOutcome {
        holds: violation.is_none(),
        violation,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub dimension: usize,
    /// Fewest points of `J'` on a line meeting `J'`.
    pub m_star: usize,
    #[serde(with = "rational::serde_biguint")]
    pub lower_bound: BigUint,
    pub j_count: usize,
    pub holds: bool,
}

pub fn lemma_bound_check(jp: &[PointN], arr: &Arrangement) -> Result<LemmaReport> {
    let jp = distinct(jp);
    if jp.is_empty() {
        return Err(JointsError::EmptyJointSet);
    }
    if let Some(p) = jp.iter().find(|p| arr.joint_at(p).is_none()) {
        return Err(JointsError::NotAJoint(p.clone()));
    }
    let n = arr.dimension();
    let m_star = line_counts(&jp, arr)
        .iter()
        .map(|lc| lc.count)
        .min()
        .expect("a joint lies on at least n lines");
    let lower_bound = lemma_lower_bound(m_star, n);
    let holds = BigUint::from(jp.len()) >= lower_bound;
    Ok(LemmaReport {
        dimension: n,
        m_star,
        lower_bound,
        j_count: jp.len(),
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnihilationMode {
    /// Points must be genuine joints; the gradient step uses their witness
    /// directions.
    Strict,
    /// Transversality is not required. Only restrictions and vanishing are
    /// verified, and partials that fail to vanish are dropped.
    Demonstration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnihilationCertificate {
    pub mode: AnnihilationMode,
    /// Layer 0 is `{Q}`; layer `k + 1` holds the distinct first partials of
    /// layer `k` that vanish on `J'`. The last layer is constant.
    pub chain: Vec<Vec<MultiPoly>>,
    pub verified_lines: Vec<LineId>,
    pub verified_gradient_points: Vec<PointN>,
    /// Partials discarded in demonstration mode for not vanishing on `J'`.
    pub dropped_partials: usize,
}

impl AnnihilationCertificate {
    /// Highest degree in each layer; `None` when a layer is all zero.
    pub fn layer_degrees(&self) -> Vec<Option<u32>> {
        self.chain
            .iter()
            .map(|layer| layer.iter().filter_map(MultiPoly::degree).max())
            .collect()
    }
}

/// Builds and checks the derivative chain of `q` over `jp`.
///
/// Preconditions: `q` vanishes on `jp`, and every line of `arr` meeting `jp`
/// carries more than `deg q` of its points; in strict mode each point must
/// also be a joint. Then every restriction to those lines vanishes, and in
/// strict mode the gradient vanishes at each joint. Repeating on partials
/// ends in a constant layer, which must be zero; a nonzero constant is a
/// contradiction, and with genuine joints and nonzero `q` the preconditions
/// can never all hold.
pub fn run_annihilation(
    jp: &[PointN],
    arr: &Arrangement,
    q: &MultiPoly,
    mode: AnnihilationMode,
) -> Result<AnnihilationCertificate> {
    let n = arr.dimension();
    if q.dim() != n {
        return Err(JointsError::DimensionMismatch {
            expected: n,
            actual: q.dim(),
        });
    }
    let jp = distinct(jp);
    if let Some(p) = jp.iter().find(|p| p.dim() != n) {
        return Err(JointsError::DimensionMismatch {
            expected: n,
            actual: p.dim(),
        });
    }
    for p in &jp {
        if !q.evaluate(p)?.is_zero() {
            return Err(JointsError::PointPrecondition {
                point: p.clone(),
                reason: "polynomial does not vanish here".into(),
            });
        }
    }

    let mut witnesses: BTreeMap<&PointN, Vec<DirectionN>> = BTreeMap::new();
    if mode == AnnihilationMode::Strict {
        for p in &jp {
            let joint = arr.joint_at(p).ok_or_else(|| JointsError::PointPrecondition {
                point: p.clone(),
                reason: "not a joint of the arrangement".into(),
            })?;
            let dirs = joint
                .witness
                .iter()
                .map(|&id| arr.line(id).unwrap().dir().clone())
                .collect();
            witnesses.insert(p, dirs);
        }
    }

    // Active lines and the parameters of their points of J'.
    let mut active: Vec<(LineId, Vec<Rational>)> = Vec::new();
    for line in arr.lines() {
        let params: Vec<Rational> = jp.iter().filter_map(|p| line.parameter_of(p)).collect();
        if params.is_empty() {
            continue;
        }
        if let Some(d) = q.degree() {
            if params.len() <= d as usize {
                return Err(JointsError::LinePrecondition {
                    line: line.id,
                    reason: format!(
                        "carries {} points, needs more than deg Q = {}",
                        params.len(),
                        d
                    ),
                });
            }
        }
        active.push((line.id, params));
    }

    let mut chain = Vec::new();
    let mut verified_lines = BTreeSet::new();
    let mut verified_gradient_points = BTreeSet::new();
    let mut dropped_partials = 0;
    let mut layer: BTreeSet<MultiPoly> = BTreeSet::from([q.clone()]);

    loop {
        if layer.iter().all(MultiPoly::is_constant) {
            if let Some(c) = layer.iter().find(|p| !p.is_zero()) {
                return Err(JointsError::ContradictionDetected(format!(
                    "nonzero constant {} in layer {}",
                    c.constant_term(),
                    chain.len()
                )));
            }
            chain.push(layer.into_iter().collect());
            break;
        }

        for poly in layer.iter().filter(|p| !p.is_constant()) {
            for (id, params) in &active {
                let line = arr.line(*id).unwrap();
                let restricted = poly.restrict_to_line(line)?;
                if !restricted.forced_zero_by(params) || !restricted.is_zero() {
                    return Err(JointsError::ContradictionDetected(format!(
                        "restriction of {} to line {} is {}",
                        poly, id, restricted
                    )));
                }
                verified_lines.insert(*id);
            }
            let gradient = poly.gradient();
            for (p, dirs) in &witnesses {
                let at_p = gradient
                    .iter()
                    .map(|g| g.evaluate(p))
                    .collect::<Result<Vec<Rational>>>()?;
                // The restriction to each witness line is zero, so its
                // derivative grad . v is zero at p.
                for v in dirs {
                    let dot: Rational = at_p.iter().zip(v.components()).map(|(a, b)| a * b).sum();
                    if !dot.is_zero() {
                        return Err(JointsError::ContradictionDetected(format!(
                            "derivative of {} along a witness direction is nonzero at {}",
                            poly, p
                        )));
                    }
                }
                // Orthogonal to n independent directions: the gradient is zero.
                if at_p.iter().any(|c| !c.is_zero()) {
                    return Err(JointsError::ContradictionDetected(format!(
                        "gradient of {} is nonzero at joint {}",
                        poly, p
                    )));
                }
                verified_gradient_points.insert((*p).clone());
            }
        }

        let mut next = BTreeSet::new();
        for poly in &layer {
            for partial in poly.gradient() {
                let vanishes = jp
                    .iter()
                    .map(|p| partial.evaluate(p).map(|v| v.is_zero()))
                    .collect::<Result<Vec<bool>>>()?
                    .into_iter()
                    .all(|b| b);
                if vanishes {
                    next.insert(partial);
                } else if mode == AnnihilationMode::Demonstration {
                    dropped_partials += 1;
                } else {
                    return Err(JointsError::ContradictionDetected(format!(
                        "partial {} of {} does not vanish on J'",
                        partial, poly
                    )));
                }
            }
        }
        chain.push(layer.into_iter().collect());
        layer = next;
    }

    Ok(AnnihilationCertificate {
        mode,
        chain,
        verified_lines: verified_lines.into_iter().collect(),
        verified_gradient_points: verified_gradient_points.into_iter().collect(),
        dropped_partials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{detect_joints, joint_points, Line};
    use crate::vanishing::vanishing_polynomial;

    fn grid(n: usize, k: i64) -> Arrangement {
        crate::generators::grid_lines(n, k as usize)
    }

    #[test]
    fn thresholds() {
        assert_eq!(joint_threshold(8, 3), 3);
        assert_eq!(joint_threshold(1, 3), 2);
        assert_eq!(joint_threshold(0, 3), 1);
        assert_eq!(lemma_lower_bound(2, 3), BigUint::from(4u32));
        assert_eq!(lemma_lower_bound(3, 3), BigUint::from(10u32));
    }

    #[test]
    fn hypothesis_on_cube_grid() {
        let arr = grid(3, 2);
        let jp = joint_points(&detect_joints(&arr));
        assert_eq!(jp.len(), 8);
        assert!(check_hypothesis(&jp, &arr, 2).holds);
        let out = check_hypothesis(&jp, &arr, 3);
        assert!(!out.holds);
        assert_eq!(out.violation.unwrap().count, 2);
        assert!(check_hypothesis(&[], &arr, 5).holds);
    }

    #[test]
    fn lemma_on_grids_and_axes() {
        let arr = grid(3, 2);
        let r = lemma_bound_check(&joint_points(&detect_joints(&arr)), &arr).unwrap();
        assert_eq!((r.m_star, r.j_count), (2, 8));
        assert_eq!(r.lower_bound, BigUint::from(4u32));
        assert!(r.holds);

        let arr = grid(3, 3);
        let r = lemma_bound_check(&joint_points(&detect_joints(&arr)), &arr).unwrap();
        assert_eq!((r.m_star, r.j_count), (3, 27));
        assert_eq!(r.lower_bound, BigUint::from(10u32));
        assert!(r.holds);

        for n in 2..6 {
            let arr = grid(n, 1);
            let r = lemma_bound_check(&[PointN::origin(n)], &arr).unwrap();
            assert_eq!((r.m_star, r.j_count), (1, 1));
            assert_eq!(r.lower_bound, BigUint::from(1u32));
            assert!(r.holds);
        }
    }

    #[test]
    fn lemma_errors() {
        let arr = grid(3, 2);
        assert_eq!(lemma_bound_check(&[], &arr), Err(JointsError::EmptyJointSet));
        let off = PointN::from_ints(&[5, 5, 5]);
        assert_eq!(
            lemma_bound_check(&[off.clone()], &arr),
            Err(JointsError::NotAJoint(off))
        );
    }

    #[test]
    fn degree_gate_rejects_axes() {
        let arr = grid(3, 1);
        let err = run_annihilation(
            &[PointN::origin(3)],
            &arr,
            &MultiPoly::variable(3, 0),
            AnnihilationMode::Strict,
        )
        .unwrap_err();
        assert!(matches!(err, JointsError::LinePrecondition { .. }));
    }

    #[test]
    fn demonstration_on_collinear_points() {
        let arr = Arrangement::new(2, vec![Line::from_ints(0, &[0, 0], &[1, 0]).unwrap()]).unwrap();
        let jp: Vec<_> = (0..4).map(|i| PointN::from_ints(&[i, 0])).collect();
        let q = MultiPoly::variable(2, 1);
        let cert = run_annihilation(&jp, &arr, &q, AnnihilationMode::Demonstration).unwrap();
        assert_eq!(cert.chain.len(), 2);
        assert_eq!(cert.chain[0], vec![q]);
        assert_eq!(cert.chain[1], vec![MultiPoly::zero(2)]);
        assert_eq!(cert.verified_lines, vec![0]);
        assert!(cert.verified_gradient_points.is_empty());
        assert_eq!(cert.dropped_partials, 1);
        assert_eq!(cert.layer_degrees(), vec![Some(1), None]);

        // Strict mode refuses: these points are not joints.
        let err = run_annihilation(&jp, &arr, &MultiPoly::variable(2, 1), AnnihilationMode::Strict)
            .unwrap_err();
        assert!(matches!(err, JointsError::PointPrecondition { .. }));
    }

    #[test]
    fn grid_vanishing_polynomial_fails_degree_gate() {
        let arr = grid(3, 2);
        let jp = joint_points(&detect_joints(&arr));
        let q = vanishing_polynomial(3, &jp).unwrap();
        assert_eq!(q.degree(), Some(2));
        let err = run_annihilation(&jp, &arr, &q, AnnihilationMode::Strict).unwrap_err();
        assert!(matches!(err, JointsError::LinePrecondition { .. }));
    }

    #[test]
    fn tampered_polynomial_is_rejected() {
        let arr = Arrangement::new(2, vec![Line::from_ints(0, &[0, 0], &[1, 0]).unwrap()]).unwrap();
        let jp: Vec<_> = (0..4).map(|i| PointN::from_ints(&[i, 0])).collect();
        let q = &MultiPoly::variable(2, 1) + &MultiPoly::constant(2, rational::rat(1));
        let err = run_annihilation(&jp, &arr, &q, AnnihilationMode::Demonstration).unwrap_err();
        assert!(matches!(err, JointsError::PointPrecondition { .. }));
    }

    #[test]
    fn zero_polynomial_gives_trivial_chain() {
        let arr = grid(2, 2);
        let jp = joint_points(&detect_joints(&arr));
        let cert = run_annihilation(&jp, &arr, &MultiPoly::zero(2), AnnihilationMode::Strict).unwrap();
        assert_eq!(cert.chain, vec![vec![MultiPoly::zero(2)]]);
    }
}
