//! Line pruning and the joint-count bounds it proves.
//!
//! With `m` the joint threshold of the arrangement, every nonempty joint set
//! has a line carrying at most `m - 1` of its joints. Removing such a line
//! repeatedly destroys every joint, each removal accounting for at most
//! `m - 1` of them, so `|J| <= (m - 1) |L|`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{JointsError, Result};
use crate::geometry::{brute_force_joints, detect_joints, Arrangement, LineId, PointN};
use crate::lemma::joint_threshold;
use crate::rational::{self, factorial};

/// One removal: the line, and the joints of the surviving arrangement that
/// lay on it just before it went.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneStep {
    pub removed: LineId,
    pub joints: Vec<PointN>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremBound {
    pub joints: usize,
    pub lines: usize,
    /// `(m - 1) * |L|`.
    pub linear_rhs: usize,
    pub linear_holds: bool,
    /// `|J|^(n-1)`.
    #[serde(with = "rational::serde_biguint")]
    pub effective_lhs: BigUint,
    /// `n! * |L|^n`.
    #[serde(with = "rational::serde_biguint")]
    pub effective_rhs: BigUint,
    pub effective_holds: bool,
}

impl TheoremBound {
    pub fn compute(joints: usize, lines: usize, m: usize, n: usize) -> Self {
        let linear_rhs = (m - 1) * lines;
        let effective_lhs = BigUint::from(joints).pow(n as u32 - 1);
        let effective_rhs = factorial(n as u64) * BigUint::from(lines).pow(n as u32);
        TheoremBound {
            joints,
            lines,
            linear_rhs,
            linear_holds: joints <= linear_rhs,
            effective_holds: effective_lhs <= effective_rhs,
            effective_lhs,
            effective_rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.linear_holds && self.effective_holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneTrace {
    pub dimension: usize,
    pub m: usize,
    pub initial_joint_count: usize,
    pub initial_line_count: usize,
    pub steps: Vec<PruneStep>,
    pub residual_line_ids: Vec<LineId>,
    pub bound: TheoremBound,
}

/// Removes, while joints remain, the surviving line with the fewest
/// surviving joints (lowest id on ties). Joints are recomputed from scratch
/// after every removal.
pub fn prune(arr: &Arrangement) -> Result<PruneTrace> {
    let n = arr.dimension();
    let initial = detect_joints(arr);
    let joint_count = initial.len();
    let m = joint_threshold(joint_count, n);

    let mut current = arr.clone();
    let mut previous: BTreeSet<PointN> = initial.iter().map(|j| j.point.clone()).collect();
    let mut joints = initial;
    let mut steps = Vec::new();

    while !joints.is_empty() {
        let (count, removed) = current
            .lines()
            .iter()
            .map(|l| {
                let c = joints
                    .iter()
                    .filter(|j| j.incident_line_ids.contains(&l.id))
                    .count();
                (c, l.id)
            })
            .min()
            .expect("joints imply lines");
        if count > m - 1 {
            return Err(JointsError::InternalInvariantViolation(format!(
                "every surviving line carries at least {} joints (m = {})",
                count, m
            )));
        }
        let on_line: Vec<PointN> = joints
            .iter()
            .filter(|j| j.incident_line_ids.contains(&removed))
            .map(|j| j.point.clone())
            .collect();
        steps.push(PruneStep {
            removed,
            joints: on_line,
            count,
        });
        current = current.without(removed);
        joints = detect_joints(&current);
        let now: BTreeSet<PointN> = joints.iter().map(|j| j.point.clone()).collect();
        if !now.is_subset(&previous) {
            return Err(JointsError::InternalInvariantViolation(format!(
                "removing line {} created a joint",
                removed
            )));
        }
        previous = now;
    }

    Ok(PruneTrace {
        dimension: n,
        m,
        initial_joint_count: joint_count,
        initial_line_count: arr.len(),
        steps,
        residual_line_ids: current.lines().iter().map(|l| l.id).collect(),
        bound: TheoremBound::compute(joint_count, arr.len(), m, n),
    })
}

fn fail(step: usize, reason: impl Into<String>) -> JointsError {
    JointsError::VerificationFailed {
        step,
        reason: reason.into(),
    }
}

/// Replays `trace` against `arr` with the brute-force detector and checks
/// every recorded fact. Failures past the last step report `steps.len()`.
pub fn verify_trace(trace: &PruneTrace, arr: &Arrangement) -> Result<()> {
    let n = arr.dimension();
    let end = trace.steps.len();
    let initial = brute_force_joints(arr);
    if trace.dimension != n {
        return Err(fail(0, "dimension differs from the arrangement"));
    }
    if trace.initial_joint_count != initial.len() || trace.initial_line_count != arr.len() {
        return Err(fail(0, "initial counts differ from the arrangement"));
    }
    let m = joint_threshold(initial.len(), n);
    if trace.m != m {
        return Err(fail(0, format!("threshold should be {}", m)));
    }

    let mut current = arr.clone();
    let mut covered: BTreeSet<PointN> = BTreeSet::new();
    let mut previous: BTreeSet<PointN> = initial.iter().map(|j| j.point.clone()).collect();
    for (s, step) in trace.steps.iter().enumerate() {
        let now: BTreeSet<PointN> = brute_force_joints(&current)
            .into_iter()
            .map(|j| j.point)
            .collect();
        if now.is_empty() {
            return Err(fail(s, "step taken after every joint was gone"));
        }
        if !now.is_subset(&previous) {
            return Err(fail(s, "joint set grew"));
        }
        let line = current
            .line(step.removed)
            .ok_or_else(|| fail(s, format!("line {} is not present", step.removed)))?;
        let on_line: Vec<PointN> = now.iter().filter(|p| line.contains(p)).cloned().collect();
        if on_line != step.joints {
            return Err(fail(s, "recorded joints differ from the replay"));
        }
        if step.count != on_line.len() {
            return Err(fail(s, "count differs from the recorded joints"));
        }
        if step.count + 1 > m {
            return Err(fail(s, format!("{} joints exceed m - 1 = {}", step.count, m - 1)));
        }
        covered.extend(on_line);
        current = current.without(step.removed);
        previous = now;
    }

    if !brute_force_joints(&current).is_empty() {
        return Err(fail(end, "joints survive the last step"));
    }
    let residual: Vec<LineId> = current.lines().iter().map(|l| l.id).collect();
    if residual != trace.residual_line_ids {
        return Err(fail(end, "residual lines differ"));
    }
    if let Some(j) = initial.iter().find(|j| !covered.contains(&j.point)) {
        return Err(fail(end, format!("joint {} never removed", j.point)));
    }
    let bound = TheoremBound::compute(initial.len(), arr.len(), m, n);
    if trace.bound != bound {
        return Err(fail(end, "recorded bound differs"));
    }
    if !bound.holds() {
        return Err(fail(end, "bound fails"));
    }
    Ok(())
}

pub fn is_valid(trace: &PruneTrace, arr: &Arrangement) -> bool {
    verify_trace(trace, arr).is_ok()
}

/// `n^n`, the constant in the extremal identity `|J|^(n-1) n^n = |L|^n` of
/// the axis grid.
pub fn grid_constant(n: usize) -> BigUint {
    (0..n).fold(BigUint::one(), |acc, _| acc * BigUint::from(n))
}
