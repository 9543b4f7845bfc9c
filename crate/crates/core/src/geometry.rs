//! Points, directions and lines in `R^n`, and joint detection.
//!
//! A joint of an arrangement is a point lying on at least `n` of its lines
//! whose directions span `R^n`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{JointsError, Result};
use crate::linalg::{self, Solution};
use crate::rational::{self, format_rational, Rational};

pub type LineId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointN(Vec<Rational>);

impl PointN {
    pub fn new(coords: Vec<Rational>) -> Self {
        PointN(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        PointN(coords.iter().map(|&c| rational::rat(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        PointN(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for PointN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Serialize for PointN {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_str_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for PointN {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rational::serde_str_vec::deserialize(d).map(PointN)
    }
}

/// A nonzero direction scaled so that its first nonzero component is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectionN(Vec<Rational>);

impl DirectionN {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        let lead = components
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(JointsError::ZeroDirection)?;
        let scale = components[lead].clone();
        Ok(DirectionN(components.into_iter().map(|c| c / &scale).collect()))
    }

    pub fn from_ints(components: &[i64]) -> Result<Self> {
        Self::new(components.iter().map(|&c| rational::rat(c)).collect())
    }

    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        DirectionN(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    /// Index of the leading one.
    pub fn lead_index(&self) -> usize {
        self.0
            .iter()
            .position(|c| !c.is_zero())
            .expect("direction is nonzero")
    }
}

impl Serialize for DirectionN {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_str_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for DirectionN {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = rational::serde_str_vec::deserialize(d)?;
        DirectionN::new(v).map_err(serde::de::Error::custom)
    }
}

/// A line `{base + t * dir}` in canonical form: `dir` has a leading one at
/// index `k`, and `base` is the unique point of the line with `base[k] = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLine")]
pub struct Line {
    pub id: LineId,
    base: PointN,
    dir: DirectionN,
}

#[derive(Deserialize)]
struct RawLine {
    id: LineId,
    base: PointN,
    dir: DirectionN,
}

impl TryFrom<RawLine> for Line {
    type Error = JointsError;

    fn try_from(raw: RawLine) -> Result<Self> {
        Line::from_parts(raw.id, raw.base, raw.dir)
    }
}

impl Line {
    pub fn new(id: LineId, base: Vec<Rational>, dir: Vec<Rational>) -> Result<Self> {
        Self::from_parts(id, PointN(base), DirectionN::new(dir)?)
    }

    pub fn from_ints(id: LineId, base: &[i64], dir: &[i64]) -> Result<Self> {
        Self::from_parts(id, PointN::from_ints(base), DirectionN::from_ints(dir)?)
    }

    pub fn from_parts(id: LineId, base: PointN, dir: DirectionN) -> Result<Self> {
        if base.dim() != dir.dim() {
            return Err(JointsError::DimensionMismatch {
                expected: base.dim(),
                actual: dir.dim(),
            });
        }
        let k = dir.lead_index();
        let shift = base.0[k].clone();
        let base = PointN(
            base.0
                .iter()
                .zip(&dir.0)
                .map(|(b, d)| b - &shift * d)
                .collect(),
        );
        Ok(Line { id, base, dir })
    }

    pub fn dim(&self) -> usize {
        self.dir.dim()
    }

    pub fn base(&self) -> &PointN {
        &self.base
    }

    pub fn dir(&self) -> &DirectionN {
        &self.dir
    }

    /// Same geometric line, ignoring ids.
    pub fn same_geometry(&self, other: &Line) -> bool {
        self.base == other.base && self.dir == other.dir
    }

    pub fn point_at(&self, t: &Rational) -> PointN {
        PointN(
            self.base
                .0
                .iter()
                .zip(&self.dir.0)
                .map(|(b, d)| b + t * d)
                .collect(),
        )
    }

    /// The parameter `t` with `point_at(t) == p`, if `p` lies on the line.
    pub fn parameter_of(&self, p: &PointN) -> Option<Rational> {
        if p.dim() != self.dim() {
            return None;
        }
        let k = self.dir.lead_index();
        let t = &p.0[k] - &self.base.0[k];
        (self.point_at(&t) == *p).then_some(t)
    }

    pub fn contains(&self, p: &PointN) -> bool {
        self.parameter_of(p).is_some()
    }
}

/// A finite set of distinct lines in a common ambient dimension `n >= 2`,
/// kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawArrangement")]
pub struct Arrangement {
    dimension: usize,
    lines: Vec<Line>,
}

#[derive(Deserialize)]
struct RawArrangement {
    dimension: usize,
    lines: Vec<Line>,
}

impl TryFrom<RawArrangement> for Arrangement {
    type Error = JointsError;

    fn try_from(raw: RawArrangement) -> Result<Self> {
        Arrangement::new(raw.dimension, raw.lines)
    }
}

impl Arrangement {
    pub fn new(dimension: usize, mut lines: Vec<Line>) -> Result<Self> {
        if dimension < 2 {
            return Err(JointsError::DimensionTooSmall(dimension));
        }
        for line in &lines {
            if line.dim() != dimension {
                return Err(JointsError::DimensionMismatch {
                    expected: dimension,
                    actual: line.dim(),
                });
            }
        }
        lines.sort_by_key(|l| l.id);
        for pair in lines.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(JointsError::DuplicateLineId(pair[0].id));
            }
        }
        let mut seen: HashMap<(&PointN, &DirectionN), LineId> = HashMap::new();
        for line in &lines {
            if let Some(&other) = seen.get(&(&line.base, &line.dir)) {
                return Err(JointsError::IdenticalLines(other, line.id));
            }
            seen.insert((&line.base, &line.dir), line.id);
        }
        Ok(Arrangement { dimension, lines })
    }

    pub fn empty(dimension: usize) -> Result<Self> {
        Self::new(dimension, Vec::new())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn line(&self, id: LineId) -> Option<&Line> {
        self.lines
            .binary_search_by_key(&id, |l| l.id)
            .ok()
            .map(|i| &self.lines[i])
    }

    pub fn without(&self, id: LineId) -> Arrangement {
        Arrangement {
            dimension: self.dimension,
            lines: self.lines.iter().filter(|l| l.id != id).cloned().collect(),
        }
    }

    /// Lines of the arrangement passing through `p`, by ascending id.
    pub fn lines_through(&self, p: &PointN) -> Vec<LineId> {
        self.lines
            .iter()
            .filter(|l| l.contains(p))
            .map(|l| l.id)
            .collect()
    }

    /// The point of a joint, checked against the definition directly.
    pub fn joint_at(&self, p: &PointN) -> Option<JointRecord> {
        let incident = self.lines_through(p);
        if incident.len() < self.dimension {
            return None;
        }
        let witness = select_witness(self, &incident, linalg::rank);
        (witness.len() == self.dimension).then(|| JointRecord {
            point: p.clone(),
            incident_line_ids: incident,
            witness,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointRecord {
    pub point: PointN,
    pub incident_line_ids: Vec<LineId>,
    pub witness: Vec<LineId>,
}

/// Common point of two distinct lines, or `None` when they are parallel or
/// skew.
pub fn intersect(a: &Line, b: &Line) -> Result<Option<PointN>> {
    if a.dim() != b.dim() {
        return Err(JointsError::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    if a.same_geometry(b) {
        return Err(JointsError::IdenticalLines(a.id, b.id));
    }
    // s * dir_a - t * dir_b = base_b - base_a
    let rows: Vec<Vec<Rational>> = (0..a.dim())
        .map(|i| vec![a.dir.0[i].clone(), -b.dir.0[i].clone()])
        .collect();
    let rhs: Vec<Rational> = (0..a.dim()).map(|i| &b.base.0[i] - &a.base.0[i]).collect();
    Ok(match linalg::solve(&rows, &rhs) {
        Solution::Unique(st) => Some(a.point_at(&st[0])),
        Solution::Inconsistent | Solution::Underdetermined => None,
    })
}

pub fn direction_rank(dirs: &[DirectionN]) -> Result<usize> {
    let first = dirs.first().ok_or(JointsError::EmptyInput)?;
    if let Some(bad) = dirs.iter().find(|d| d.dim() != first.dim()) {
        return Err(JointsError::DimensionMismatch {
            expected: first.dim(),
            actual: bad.dim(),
        });
    }
    let rows: Vec<Vec<Rational>> = dirs.iter().map(|d| d.0.clone()).collect();
    Ok(linalg::rank(&rows))
}

/// Greedy basis over ascending ids: a line joins the witness when it raises
/// the rank. This is the lexicographically smallest independent subset.
fn select_witness(
    arr: &Arrangement,
    incident: &[LineId],
    rank: fn(&[Vec<Rational>]) -> usize,
) -> Vec<LineId> {
    let n = arr.dimension();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut witness = Vec::with_capacity(n);
    for &id in incident {
        if witness.len() == n {
            break;
        }
        let line = arr.line(id).expect("incident line belongs to arrangement");
        rows.push(line.dir.0.clone());
        if rank(&rows) == rows.len() {
            witness.push(id);
        } else {
            rows.pop();
        }
    }
    witness
}

/// Parameter on `a` where `a` meets `b`, via a nonvanishing 2x2 minor of
/// `[dir_a | -dir_b]` and Cramer's rule.
fn meet_parameter(a: &Line, b: &Line) -> Option<Rational> {
    let (da, db) = (&a.dir.0, &b.dir.0);
    let n = da.len();
    let rhs: Vec<Rational> = (0..n).map(|i| &b.base.0[i] - &a.base.0[i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            // det [[da_i, -db_i], [da_j, -db_j]]
            let det = &db[i] * &da[j] - &da[i] * &db[j];
            if det.is_zero() {
                continue;
            }
            let s = (&db[i] * &rhs[j] - &rhs[i] * &db[j]) / &det;
            let t = (&da[i] * &rhs[j] - &rhs[i] * &da[j]) / &det;
            let consistent =
                (0..n).all(|k| &s * &da[k] - &t * &db[k] == rhs[k]);
            return consistent.then_some(s);
        }
    }
    // Parallel directions.
    None
}

/// All joints of `arr`, sorted by point.
///
/// Each line `a` groups the other lines by the parameter at which they cross
/// `a`. A point is reported only by the lowest-id line through it, whose
/// group then holds every incident line, so no global merge is needed and
/// lines are processed in parallel.
pub fn detect_joints(arr: &Arrangement) -> Vec<JointRecord> {
    let n = arr.dimension();
    let lines = arr.lines();
    let mut joints: Vec<JointRecord> = lines
        .par_iter()
        .flat_map_iter(|a| {
            let mut groups: BTreeMap<Rational, Vec<LineId>> = BTreeMap::new();
            // Parameters where a lower-id line also passes: not ours to report.
            let mut owner_of: HashSet<Rational> = HashSet::new();
            for b in lines.iter().filter(|b| b.id != a.id) {
                if let Some(s) = meet_parameter(a, b) {
                    if b.id < a.id {
                        owner_of.insert(s.clone());
                    }
                    groups.entry(s).or_default().push(b.id);
                }
            }
            groups
                .into_iter()
                .filter(|(s, others)| !owner_of.contains(s) && others.len() + 1 >= n)
                .filter_map(|(s, others)| {
                    let mut incident = others;
                    incident.push(a.id);
                    incident.sort_unstable();
                    let witness = select_witness(arr, &incident, linalg::rank);
                    (witness.len() == n).then(|| JointRecord {
                        point: a.point_at(&s),
                        incident_line_ids: incident,
                        witness,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    joints.sort_by(|x, y| x.point.cmp(&y.point));
    joints
}

/// Test oracle for [`detect_joints`]: every pairwise intersection, bucketed
/// by exact point, each bucket rank-checked by plain rational elimination.
pub fn brute_force_joints(arr: &Arrangement) -> Vec<JointRecord> {
    let n = arr.dimension();
    let lines = arr.lines();
    let mut buckets: HashMap<PointN, BTreeSet<LineId>> = HashMap::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Ok(Some(p)) = intersect(a, b) {
                let bucket = buckets.entry(p).or_default();
                bucket.insert(a.id);
                bucket.insert(b.id);
            }
        }
    }
    let mut joints: Vec<JointRecord> = buckets
        .into_iter()
        .filter(|(_, ids)| ids.len() >= n)
        .filter_map(|(point, ids)| {
            let incident: Vec<LineId> = ids.into_iter().collect();
            let dirs: Vec<Vec<Rational>> = incident
                .iter()
                .map(|&id| arr.line(id).unwrap().dir.0.clone())
                .collect();
            if linalg::rational_rank(&dirs) < n {
                return None;
            }
            let witness = select_witness(arr, &incident, linalg::rational_rank);
            Some(JointRecord {
                point,
                incident_line_ids: incident,
                witness,
            })
        })
        .collect();
    joints.sort_by(|x, y| x.point.cmp(&y.point));
    joints
}

pub fn joint_points(joints: &[JointRecord]) -> Vec<PointN> {
    joints.iter().map(|j| j.point.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn axes(n: usize) -> Arrangement {
        let lines = (0..n)
            .map(|i| {
                let mut d = vec![0; n];
                d[i] = 1;
                Line::from_ints(i as u64, &vec![0; n], &d).unwrap()
            })
            .collect();
        Arrangement::new(n, lines).unwrap()
    }

    #[test]
    fn intersect_examples() {
        let x = Line::from_ints(0, &[0, 0], &[1, 0]).unwrap();
        let y = Line::from_ints(1, &[0, 0], &[0, 1]).unwrap();
        assert_eq!(intersect(&x, &y).unwrap(), Some(PointN::from_ints(&[0, 0])));

        let p = Line::from_ints(1, &[0, 1], &[1, 0]).unwrap();
        assert_eq!(intersect(&x, &p).unwrap(), None);

        let x3 = Line::from_ints(0, &[0, 0, 0], &[1, 0, 0]).unwrap();
        let skew = Line::from_ints(1, &[0, 0, 1], &[0, 1, 0]).unwrap();
        assert_eq!(intersect(&x3, &skew).unwrap(), None);
    }

    #[test]
    fn intersect_errors() {
        let x = Line::from_ints(0, &[0, 0], &[1, 0]).unwrap();
        let x_again = Line::from_ints(7, &[5, 0], &[-3, 0]).unwrap();
        assert_eq!(
            intersect(&x, &x_again),
            Err(JointsError::IdenticalLines(0, 7))
        );
        let x3 = Line::from_ints(1, &[0, 0, 0], &[1, 0, 0]).unwrap();
        assert!(matches!(
            intersect(&x, &x3),
            Err(JointsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersect_rational_point() {
        let a = Line::from_ints(0, &[0, 0], &[1, 2]).unwrap();
        let b = Line::from_ints(1, &[1, 0], &[1, -1]).unwrap();
        let p = intersect(&a, &b).unwrap().unwrap();
        assert_eq!(p, PointN::new(vec![frac(1, 3), frac(2, 3)]));
        assert_eq!(meet_parameter(&a, &b), a.parameter_of(&p));
    }

    #[test]
    fn rank_examples() {
        let basis: Vec<_> = (0..3).map(|i| DirectionN::axis(3, i)).collect();
        assert_eq!(direction_rank(&basis).unwrap(), 3);
        let par = vec![
            DirectionN::from_ints(&[1, 0, 0]).unwrap(),
            DirectionN::from_ints(&[2, 0, 0]).unwrap(),
        ];
        assert_eq!(direction_rank(&par).unwrap(), 1);
        let dep = vec![
            DirectionN::from_ints(&[1, 1, 0]).unwrap(),
            DirectionN::from_ints(&[0, 1, 1]).unwrap(),
            DirectionN::from_ints(&[1, 0, -1]).unwrap(),
        ];
        assert_eq!(direction_rank(&dep).unwrap(), 2);
        assert_eq!(direction_rank(&[]), Err(JointsError::EmptyInput));
    }

    #[test]
    fn canonical_forms_agree() {
        let a = Line::from_ints(3, &[1, 2, 3], &[2, 4, -2]).unwrap();
        let b = Line::new(3, vec![rat(3), rat(6), rat(1)], vec![frac(-1, 2), rat(-1), frac(1, 2)])
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dir().components(), &[rat(1), rat(2), rat(-1)]);
        assert!(a.base().coords()[0].is_zero());
        assert!(DirectionN::from_ints(&[0, 0]).is_err());
    }

    #[test]
    fn arrangement_rejects_duplicates() {
        let a = Line::from_ints(0, &[0, 0], &[1, 1]).unwrap();
        let b = Line::from_ints(1, &[2, 2], &[-1, -1]).unwrap();
        assert_eq!(
            Arrangement::new(2, vec![a.clone(), b]),
            Err(JointsError::IdenticalLines(0, 1))
        );
        let c = Line::from_ints(0, &[0, 1], &[1, 1]).unwrap();
        assert_eq!(
            Arrangement::new(2, vec![a, c]),
            Err(JointsError::DuplicateLineId(0))
        );
        assert_eq!(
            Arrangement::new(1, vec![]),
            Err(JointsError::DimensionTooSmall(1))
        );
    }

    #[test]
    fn joints_of_axes() {
        let arr = axes(3);
        let joints = detect_joints(&arr);
        assert_eq!(joints.len(), 1);
        assert_eq!(joints[0].point, PointN::origin(3));
        assert_eq!(joints[0].witness, vec![0, 1, 2]);
        assert_eq!(joints, brute_force_joints(&arr));
    }

    #[test]
    fn two_lines_in_space_are_not_a_joint() {
        let lines = vec![
            Line::from_ints(0, &[0, 0, 0], &[1, 0, 0]).unwrap(),
            Line::from_ints(1, &[0, 0, 0], &[0, 1, 0]).unwrap(),
        ];
        let arr = Arrangement::new(3, lines).unwrap();
        assert!(detect_joints(&arr).is_empty());
        assert!(brute_force_joints(&arr).is_empty());
    }

    #[test]
    fn coplanar_pencil_is_not_a_joint() {
        // Many lines through the origin, all in the plane z = 0.
        let lines = (0..5)
            .map(|i| Line::from_ints(i, &[0, 0, 0], &[1, i as i64, 0]).unwrap())
            .collect();
        let arr = Arrangement::new(3, lines).unwrap();
        assert!(detect_joints(&arr).is_empty());
        assert!(brute_force_joints(&arr).is_empty());
    }

    #[test]
    fn witness_prefers_low_ids() {
        // Line 2 lies in the span of lines 0 and 1.
        let lines = vec![
            Line::from_ints(0, &[0, 0, 0], &[1, 0, 0]).unwrap(),
            Line::from_ints(1, &[0, 0, 0], &[1, 1, 0]).unwrap(),
            Line::from_ints(2, &[0, 0, 0], &[0, 1, 0]).unwrap(),
            Line::from_ints(3, &[0, 0, 0], &[0, 0, 1]).unwrap(),
        ];
        let arr = Arrangement::new(3, lines).unwrap();
        let joints = detect_joints(&arr);
        assert_eq!(joints.len(), 1);
        assert_eq!(joints[0].incident_line_ids, vec![0, 1, 2, 3]);
        assert_eq!(joints[0].witness, vec![0, 1, 3]);
        assert_eq!(joints, brute_force_joints(&arr));
    }

    #[test]
    fn line_membership() {
        let l = Line::from_ints(0, &[1, 1], &[2, 1]).unwrap();
        assert!(l.contains(&PointN::from_ints(&[3, 2])));
        assert!(!l.contains(&PointN::from_ints(&[3, 3])));
        assert_eq!(l.parameter_of(&l.point_at(&frac(5, 7))), Some(frac(5, 7)));
    }
}
