//! Colorings: each joint assigned to one of its lines, with every line's
//! fiber kept small.
//!
//! Two constructions are provided. The first reads a coloring off a prune
//! trace. The second builds one joint at a time under a fixed cap, rerouting
//! earlier choices along augmenting chains when every line at the new joint
//! is full.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{JointsError, Result};
use crate::geometry::{detect_joints, Arrangement, LineId, PointN};
use crate::lemma::{check_hypothesis, joint_threshold, lemma_bound_check};
use crate::pruning::PruneTrace;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coloring {
    pub assignment: BTreeMap<PointN, LineId>,
    /// Nonzero fiber sizes only.
    pub fiber_counts: BTreeMap<LineId, usize>,
}

impl Coloring {
    pub fn from_assignment(assignment: BTreeMap<PointN, LineId>) -> Self {
        let mut fiber_counts = BTreeMap::new();
        for &line in assignment.values() {
            *fiber_counts.entry(line).or_insert(0) += 1;
        }
        Coloring {
            assignment,
            fiber_counts,
        }
    }

    pub fn max_fiber(&self) -> usize {
        self.fiber_counts.values().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Checks that every point lies on its line and that the fiber counts
    /// match the assignment.
    pub fn validate(&self, arr: &Arrangement) -> Result<()> {
        for (p, &id) in &self.assignment {
            let line = arr
                .line(id)
                .ok_or_else(|| JointsError::Invalid(format!("unknown line {}", id)))?;
            if !line.contains(p) {
                return Err(JointsError::Invalid(format!("{} is not on line {}", p, id)));
            }
        }
        if Coloring::from_assignment(self.assignment.clone()).fiber_counts != self.fiber_counts {
            return Err(JointsError::Invalid("fiber counts disagree with the assignment".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct AssignmentEntry {
    point: PointN,
    line: LineId,
}

#[derive(Serialize, Deserialize)]
struct ColoringDoc {
    assignment: Vec<AssignmentEntry>,
    fibers: BTreeMap<LineId, usize>,
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ColoringDoc {
            assignment: self
                .assignment
                .iter()
                .map(|(p, &line)| AssignmentEntry {
                    point: p.clone(),
                    line,
                })
                .collect(),
            fibers: self.fiber_counts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ColoringDoc::deserialize(d)?;
        let mut assignment = BTreeMap::new();
        for e in doc.assignment {
            if assignment.insert(e.point, e.line).is_some() {
                return Err(serde::de::Error::custom("point assigned twice"));
            }
        }
        Ok(Coloring {
            assignment,
            fiber_counts: doc.fibers,
        })
    }
}

/// Assigns each joint the first removed line passing through it. That line
/// carried at most `m - 1` live joints when it went, so every fiber obeys
/// the same bound.
pub fn color_from_prune(trace: &PruneTrace, arr: &Arrangement) -> Result<Coloring> {
    let mut assignment = BTreeMap::new();
    for joint in detect_joints(arr) {
        let step = trace
            .steps
            .iter()
            .find(|s| joint.incident_line_ids.contains(&s.removed))
            .ok_or_else(|| JointsError::UncoveredJoint(joint.point.clone()))?;
        assignment.insert(joint.point, step.removed);
    }
    Ok(Coloring::from_assignment(assignment))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncrementalStats {
    pub cap: usize,
    pub good_cases: usize,
    pub bad_cases: usize,
    pub longest_chain: usize,
    pub largest_search: usize,
}

/// Incremental coloring under the cap `T = m - 1`, where `m` is the joint
/// threshold.
pub fn color_incremental(arr: &Arrangement) -> Result<Coloring> {
    color_incremental_traced(arr).map(|(c, _)| c)
}

pub fn color_incremental_traced(arr: &Arrangement) -> Result<(Coloring, IncrementalStats)> {
    let joints = detect_joints(arr);
    let cap = joint_threshold(joints.len(), arr.dimension()) - 1;
    color_with_cap(arr, cap)
}

/// Incremental coloring with every fiber held to at most `cap`.
///
/// Joints are taken in lexicographic order. When every line at the new
/// joint is full, a breadth-first search over lines (lowest id first) looks
/// for a chain of reassignments ending at a line with room. If none exists
/// the search closure `J'` has every line through it carrying at least
/// `cap + 1` of its points, which the line lemma rules out for the default
/// cap; smaller caps can block and are reported as an error.
pub fn color_with_cap(arr: &Arrangement, cap: usize) -> Result<(Coloring, IncrementalStats)> {
    let joints = detect_joints(arr);
    let mut stats = IncrementalStats {
        cap,
        ..Default::default()
    };
    let mut color: Vec<Option<LineId>> = vec![None; joints.len()];
    let mut fibers: BTreeMap<LineId, BTreeSet<usize>> = BTreeMap::new();
    let load = |fibers: &BTreeMap<LineId, BTreeSet<usize>>, l: LineId| {
        fibers.get(&l).map_or(0, BTreeSet::len)
    };

    for x in 0..joints.len() {
        let incident = &joints[x].incident_line_ids;
        if let Some(&l) = incident.iter().find(|&&l| load(&fibers, l) < cap) {
            stats.good_cases += 1;
            color[x] = Some(l);
            fibers.entry(l).or_default().insert(x);
            continue;
        }
        stats.bad_cases += 1;

        // Breadth-first search; parent[l] = (line q is currently on, q).
        let mut parent: BTreeMap<LineId, Option<(LineId, usize)>> = BTreeMap::new();
        let mut queue: VecDeque<LineId> = VecDeque::new();
        for &l in incident {
            parent.insert(l, None);
            queue.push_back(l);
        }
        let mut target = None;
        while let Some(l) = queue.pop_front() {
            if load(&fibers, l) < cap {
                target = Some(l);
                break;
            }
            for &q in fibers.get(&l).into_iter().flatten() {
                for &next in &joints[q].incident_line_ids {
                    if !parent.contains_key(&next) {
                        parent.insert(next, Some((l, q)));
                        queue.push_back(next);
                    }
                }
            }
        }
        stats.largest_search = stats.largest_search.max(parent.len());

        let Some(mut l) = target else {
            return Err(blocked(arr, &joints_points(&joints), x, &parent, &fibers, cap));
        };
        let mut chain = 0;
        fibers.entry(l).or_default();
        while let Some((from, q)) = parent[&l] {
            fibers.get_mut(&from).unwrap().remove(&q);
            fibers.get_mut(&l).unwrap().insert(q);
            color[q] = Some(l);
            l = from;
            chain += 1;
        }
        fibers.entry(l).or_default().insert(x);
        color[x] = Some(l);
        stats.longest_chain = stats.longest_chain.max(chain);
    }

    let assignment = joints
        .into_iter()
        .zip(color)
        .map(|(j, c)| (j.point, c.expect("every joint is colored")))
        .collect();
    Ok((Coloring::from_assignment(assignment), stats))
}

fn joints_points(joints: &[crate::geometry::JointRecord]) -> Vec<&PointN> {
    joints.iter().map(|j| &j.point).collect()
}

/// Builds the error for a blocked search, after checking the facts the
/// line lemma is applied to.
fn blocked(
    arr: &Arrangement,
    points: &[&PointN],
    x: usize,
    explored: &BTreeMap<LineId, Option<(LineId, usize)>>,
    fibers: &BTreeMap<LineId, BTreeSet<usize>>,
    cap: usize,
) -> JointsError {
    let mut closure: BTreeSet<usize> = BTreeSet::from([x]);
    for l in explored.keys() {
        closure.extend(fibers.get(l).into_iter().flatten());
    }
    let jp: Vec<PointN> = closure.iter().map(|&i| points[i].clone()).collect();
    for l in explored.keys() {
        let line = arr.line(*l).unwrap();
        let inside = fibers
            .get(l)
            .into_iter()
            .flatten()
            .all(|&q| closure.contains(&q) && line.contains(points[q]));
        if !inside {
            return JointsError::InternalInvariantViolation(format!(
                "fiber of line {} escapes the search closure",
                l
            ));
        }
    }
    if !check_hypothesis(&jp, arr, cap + 1).holds {
        return JointsError::InternalInvariantViolation(
            "blocked closure has a line with room".into(),
        );
    }
    let report = match lemma_bound_check(&jp, arr) {
        Ok(r) => r,
        Err(e) => return e,
    };
    JointsError::InternalInvariantViolation(format!(
        "coloring blocked under cap {}: closure of {} joints, every line through it carries at least {} (lemma bound {})",
        cap, report.j_count, report.m_star, report.lower_bound
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberBoundReport {
    pub joint_count: usize,
    pub line_count: usize,
    /// `T = m - 1`.
    pub threshold: usize,
    pub max_fiber: usize,
    /// `ceil(|J| / |L|)`, or 0 with no joints.
    pub pigeonhole_floor: usize,
    /// `|J|`.
    pub bound_lhs: usize,
    /// `T * |L|`.
    pub bound_rhs: usize,
    pub holds: bool,
}

/// Checks `ceil(|J| / |L|) <= max_fiber <= T`, which gives `|J| <= T |L|`.
pub fn pigeonhole_finish(coloring: &Coloring, arr: &Arrangement) -> Result<FiberBoundReport> {
    coloring.validate(arr)?;
    let joints = detect_joints(arr);
    let assigned: BTreeSet<&PointN> = coloring.assignment.keys().collect();
    let expected: BTreeSet<&PointN> = joints.iter().map(|j| &j.point).collect();
    if assigned != expected {
        return Err(JointsError::Invalid(
            "coloring does not cover exactly the joints".into(),
        ));
    }
    let j = joints.len();
    let l = arr.len();
    let threshold = joint_threshold(j, arr.dimension()) - 1;
    let max_fiber = coloring.max_fiber();
    let pigeonhole_floor = if j == 0 { 0 } else { j.div_ceil(l) };
    Ok(FiberBoundReport {
        joint_count: j,
        line_count: l,
        threshold,
        max_fiber,
        pigeonhole_floor,
        bound_lhs: j,
        bound_rhs: threshold * l,
        holds: pigeonhole_floor <= max_fiber && max_fiber <= threshold && j <= threshold * l,
    })
}
