//! Joints of polynomially parametrized curves.
//!
//! A curve `t -> (P_1(t), ..., P_n(t))` with every `P_i` of degree at most
//! `d` restricts a degree-`D` polynomial to a univariate polynomial of
//! degree at most `D * d`, which is all the line lemma needs once `m` is
//! replaced by `ceil(m / d)`. Curve intersections are not solved here: joints
//! arrive as certificates (a point plus a parameter per incident curve) and
//! are verified exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{JointsError, Result};
use crate::geometry::{DirectionN, PointN};
use crate::linalg;
use crate::poly::{MultiPoly, UniPoly};
use crate::pruning::PruneStep;
use crate::rational::{self, binomial, Rational};
use crate::vanishing::min_vanishing_degree;

pub type CurveId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCurve {
    pub id: CurveId,
    pub components: Vec<UniPoly>,
}

impl PolyCurve {
    pub fn new(id: CurveId, components: Vec<UniPoly>) -> Self {
        PolyCurve { id, components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Largest component degree; 0 for a constant curve.
    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .filter_map(UniPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn velocity(&self, t: &Rational) -> Vec<Rational> {
        self.components
            .iter()
            .map(|c| c.derivative().evaluate(t))
            .collect()
    }
}

/// Curves sharing an ambient dimension and a declared degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct CurveFamily {
    pub dimension: usize,
    pub max_degree: usize,
    pub curves: Vec<PolyCurve>,
}

#[derive(Deserialize)]
struct RawFamily {
    dimension: usize,
    max_degree: usize,
    curves: Vec<PolyCurve>,
}

impl TryFrom<RawFamily> for CurveFamily {
    type Error = JointsError;

    fn try_from(raw: RawFamily) -> Result<Self> {
        CurveFamily::new(raw.dimension, raw.max_degree, raw.curves)
    }
}

impl CurveFamily {
    pub fn new(dimension: usize, max_degree: usize, mut curves: Vec<PolyCurve>) -> Result<Self> {
        if dimension < 2 {
            return Err(JointsError::DimensionTooSmall(dimension));
        }
        if max_degree == 0 {
            return Err(JointsError::Invalid("max_degree must be at least 1".into()));
        }
        curves.sort_by_key(|c| c.id);
        for w in curves.windows(2) {
            if w[0].id == w[1].id {
                return Err(JointsError::Invalid(format!("duplicate curve id {}", w[0].id)));
            }
        }
        for c in &curves {
            if c.dim() != dimension {
                return Err(JointsError::DimensionMismatch {
                    expected: dimension,
                    actual: c.dim(),
                });
            }
            if c.degree() > max_degree {
                return Err(JointsError::Invalid(format!(
                    "curve {} has degree {} above the family bound {}",
                    c.id,
                    c.degree(),
                    max_degree
                )));
            }
        }
        Ok(CurveFamily {
            dimension,
            max_degree,
            curves,
        })
    }

    pub fn curve(&self, id: CurveId) -> Option<&PolyCurve> {
        self.curves
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|i| &self.curves[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub curve: CurveId,
    #[serde(with = "rational::serde_str")]
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJointCertificate {
    pub point: PointN,
    pub incidences: Vec<Incidence>,
    /// Curve ids, among the incidences, whose tangents span `R^n`.
    pub witness: Vec<CurveId>,
}

impl CurveJointCertificate {
    pub fn curve_ids(&self) -> impl Iterator<Item = CurveId> + '_ {
        self.incidences.iter().map(|i| i.curve)
    }
}

pub fn curve_eval(curve: &PolyCurve, t: &Rational) -> PointN {
    PointN::new(curve.components.iter().map(|c| c.evaluate(t)).collect())
}

pub fn curve_tangent(curve: &PolyCurve, t: &Rational) -> Result<DirectionN> {
    DirectionN::new(curve.velocity(t))
        .map_err(|_| JointsError::SingularPoint(rational::format_rational(t)))
}

pub fn restrict_to_curve(q: &MultiPoly, curve: &PolyCurve) -> Result<UniPoly> {
    q.compose(&curve.components)
}

fn lookup<'a>(family: &'a CurveFamily, id: CurveId) -> Result<&'a PolyCurve> {
    family.curve(id).ok_or(JointsError::UnknownCurveId(id))
}

pub fn verify_curve_joint(cert: &CurveJointCertificate, family: &CurveFamily) -> Result<bool> {
    let n = family.dimension;
    for id in cert.curve_ids().chain(cert.witness.iter().copied()) {
        lookup(family, id)?;
    }
    if cert.point.dim() != n || cert.incidences.len() < n || cert.witness.len() != n {
        return Ok(false);
    }
    let ids: BTreeSet<CurveId> = cert.curve_ids().collect();
    if ids.len() != cert.incidences.len() {
        return Ok(false);
    }
    let params: BTreeMap<CurveId, &Rational> =
        cert.incidences.iter().map(|i| (i.curve, &i.t)).collect();
    for inc in &cert.incidences {
        if curve_eval(lookup(family, inc.curve)?, &inc.t) != cert.point {
            return Ok(false);
        }
    }
    let witness: BTreeSet<CurveId> = cert.witness.iter().copied().collect();
    if witness.len() != n || !witness.is_subset(&ids) {
        return Ok(false);
    }
    let mut tangents = Vec::with_capacity(n);
    for id in &witness {
        match curve_tangent(lookup(family, *id)?, params[id]) {
            Ok(d) => tangents.push(d.components().to_vec()),
            Err(_) => return Ok(false),
        }
    }
    Ok(linalg::rank(&tangents) == n)
}

fn verify_all(certs: &[CurveJointCertificate], family: &CurveFamily) -> Result<()> {
    let mut seen = BTreeSet::new();
    for cert in certs {
        if !verify_curve_joint(cert, family)? {
            return Err(JointsError::UnverifiedCertificate(cert.point.clone()));
        }
        if !seen.insert(&cert.point) {
            return Err(JointsError::Invalid(format!(
                "two certificates for the point {}",
                cert.point
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveLemmaReport {
    pub dimension: usize,
    pub max_degree: usize,
    pub j_count: usize,
    /// Fewest certified joints on a curve meeting the set.
    pub m_star: usize,
    pub vanishing_degree: u32,
    /// `vanishing_degree * d >= m_star`.
    pub degree_check: bool,
    /// `C(ceil(m_star / d) - 1 + n, n)`.
    #[serde(with = "rational::serde_biguint")]
    pub lower_bound: BigUint,
    pub holds: bool,
}

fn joints_per_curve(certs: &[CurveJointCertificate]) -> BTreeMap<CurveId, usize> {
    let mut counts = BTreeMap::new();
    for cert in certs {
        for id in cert.curve_ids() {
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    counts
}

/// `C(ceil(m / d) - 1 + n, n)`, the curve analogue of the line bound.
pub fn curve_lower_bound(m: usize, d: usize, n: usize) -> BigUint {
    let r = m.div_ceil(d);
    assert!(r >= 1, "curve bound needs m >= 1");
    binomial((r - 1 + n) as u64, n as u64)
}

pub fn curve_lemma_bound_check(
    certs: &[CurveJointCertificate],
    family: &CurveFamily,
) -> Result<CurveLemmaReport> {
    if certs.is_empty() {
        return Err(JointsError::EmptyJointSet);
    }
    verify_all(certs, family)?;
    let n = family.dimension;
    let d = family.max_degree;
    let m_star = *joints_per_curve(certs).values().min().unwrap();
    let vanishing_degree = min_vanishing_degree(certs.len(), n);
    let degree_check = vanishing_degree as usize * d >= m_star;
    let lower_bound = curve_lower_bound(m_star, d, n);
    let holds = degree_check && BigUint::from(certs.len()) >= lower_bound;
    Ok(CurveLemmaReport {
        dimension: n,
        max_degree: d,
        j_count: certs.len(),
        m_star,
        vanishing_degree,
        degree_check,
        lower_bound,
        holds,
    })
}

/// Least `m >= 1` with `C(ceil(m / d) - 1 + n, n) > joints`.
pub fn curve_threshold(joints: usize, d: usize, n: usize) -> usize {
    let limit = BigUint::from(joints);
    (1..)
        .find(|&m| curve_lower_bound(m, d, n) > limit)
        .expect("binomials grow without bound")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePruneTrace {
    pub dimension: usize,
    pub max_degree: usize,
    pub m: usize,
    pub initial_joint_count: usize,
    pub initial_curve_count: usize,
    pub steps: Vec<PruneStep>,
    pub residual_curve_ids: Vec<CurveId>,
    /// `|J| <= (m - 1) * |C|`.
    pub bound_holds: bool,
}

/// Removes, one at a time, a surviving curve carrying at most `m - 1`
/// still-valid joints. A certificate stays valid while its surviving
/// incident curves have nonsingular tangents of rank `n`.
pub fn prune_curves(certs: &[CurveJointCertificate], family: &CurveFamily) -> Result<CurvePruneTrace> {
    verify_all(certs, family)?;
    let n = family.dimension;
    let d = family.max_degree;
    let m = curve_threshold(certs.len(), d, n);

    // Tangent at each incidence, or None where the curve is singular.
    let tangents: Vec<Vec<(CurveId, Option<Vec<Rational>>)>> = certs
        .iter()
        .map(|c| {
            c.incidences
                .iter()
                .map(|inc| {
                    let curve = family.curve(inc.curve).unwrap();
                    let tangent = curve_tangent(curve, &inc.t)
                        .ok()
                        .map(|d| d.components().to_vec());
                    (inc.curve, tangent)
                })
                .collect()
        })
        .collect();

    let mut alive: BTreeSet<CurveId> = family.curves.iter().map(|c| c.id).collect();
    let mut steps = Vec::new();
    loop {
        let valid: Vec<usize> = (0..certs.len())
            .filter(|&i| {
                let rows: Vec<Vec<Rational>> = tangents[i]
                    .iter()
                    .filter(|(id, _)| alive.contains(id))
                    .filter_map(|(_, t)| t.clone())
                    .collect();
                rows.len() >= n && linalg::rank(&rows) == n
            })
            .collect();
        if valid.is_empty() {
            break;
        }
        let mut counts: BTreeMap<CurveId, usize> = alive.iter().map(|&id| (id, 0)).collect();
        for &i in &valid {
            for id in certs[i].curve_ids().filter(|id| alive.contains(id)) {
                *counts.get_mut(&id).unwrap() += 1;
            }
        }
        let (&removed, &count) = counts
            .iter()
            .min_by_key(|(id, c)| (**c, **id))
            .expect("valid joints imply surviving curves");
        if count + 1 > m {
            return Err(JointsError::InternalInvariantViolation(format!(
                "every surviving curve carries at least {} valid joints (m = {})",
                count, m
            )));
        }
        let mut joints: Vec<PointN> = valid
            .iter()
            .filter(|&&i| certs[i].curve_ids().any(|id| id == removed))
            .map(|&i| certs[i].point.clone())
            .collect();
        joints.sort();
        steps.push(PruneStep {
            removed,
            joints,
            count,
        });
        alive.remove(&removed);
    }

    let bound_holds = certs.len() <= (m - 1) * family.curves.len();
    Ok(CurvePruneTrace {
        dimension: n,
        max_degree: d,
        m,
        initial_joint_count: certs.len(),
        initial_curve_count: family.curves.len(),
        steps,
        residual_curve_ids: alive.into_iter().collect(),
        bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn curve(id: CurveId, comps: &[&[i64]]) -> PolyCurve {
        PolyCurve::new(id, comps.iter().map(|c| UniPoly::from_ints(c)).collect())
    }

    fn family(curves: Vec<PolyCurve>, d: usize) -> CurveFamily {
        CurveFamily::new(curves[0].dim(), d, curves).unwrap()
    }

    #[test]
    fn eval_examples() {
        let line = curve(0, &[&[0, 1], &[0]]);
        assert_eq!(curve_eval(&line, &rat(3)), PointN::from_ints(&[3, 0]));
        let parabola = curve(1, &[&[0, 1], &[0, 0, 1]]);
        assert_eq!(
            curve_eval(&parabola, &frac(1, 2)),
            PointN::new(vec![frac(1, 2), frac(1, 4)])
        );
        let cubic = curve(2, &[&[0, 1], &[0, -1, 0, 1]]);
        assert_eq!(curve_eval(&cubic, &rat(1)), PointN::from_ints(&[1, 0]));
    }

    #[test]
    fn tangent_examples() {
        let parabola = curve(0, &[&[0, 1], &[0, 0, 1]]);
        assert_eq!(
            curve_tangent(&parabola, &rat(0)).unwrap(),
            DirectionN::from_ints(&[1, 0]).unwrap()
        );
        assert_eq!(
            curve_tangent(&parabola, &rat(1)).unwrap(),
            DirectionN::from_ints(&[1, 2]).unwrap()
        );
        let cusp = curve(1, &[&[0, 0, 1], &[0, 0, 0, 1]]);
        assert_eq!(
            curve_tangent(&cusp, &rat(0)),
            Err(JointsError::SingularPoint("0".into()))
        );
    }

    #[test]
    fn restriction_examples() {
        let parabola = curve(0, &[&[0, 1], &[0, 0, 1]]);
        let q = MultiPoly::from_int_terms(2, &[(1, &[0, 1]), (-1, &[2, 0])]);
        assert!(restrict_to_curve(&q, &parabola).unwrap().is_zero());
        assert_eq!(
            restrict_to_curve(&MultiPoly::variable(2, 0), &parabola).unwrap(),
            UniPoly::t()
        );
        let twisted = curve(1, &[&[0, 1], &[0, 0, 0, 1]]);
        let q = MultiPoly::from_int_terms(2, &[(1, &[2, 0]), (1, &[0, 1])]);
        assert_eq!(
            restrict_to_curve(&q, &twisted).unwrap(),
            UniPoly::from_ints(&[0, 0, 1, 1])
        );
        assert!(restrict_to_curve(&MultiPoly::variable(3, 0), &twisted).is_err());
    }

    fn crossing_pair() -> (CurveFamily, CurveJointCertificate) {
        // y = x^2 and y = (x - 1)^2 meet at x = 1/2.
        let fam = family(
            vec![curve(0, &[&[0, 1], &[0, 0, 1]]), curve(1, &[&[0, 1], &[1, -2, 1]])],
            2,
        );
        let cert = CurveJointCertificate {
            point: PointN::new(vec![frac(1, 2), frac(1, 4)]),
            incidences: vec![
                Incidence { curve: 0, t: frac(1, 2) },
                Incidence { curve: 1, t: frac(1, 2) },
            ],
            witness: vec![0, 1],
        };
        (fam, cert)
    }

    #[test]
    fn transversal_crossing_verifies() {
        let (fam, cert) = crossing_pair();
        assert!(verify_curve_joint(&cert, &fam).unwrap());
    }

    #[test]
    fn wrong_parameter_fails() {
        let (fam, mut cert) = crossing_pair();
        cert.incidences[1].t = rat(1);
        assert!(!verify_curve_joint(&cert, &fam).unwrap());
    }

    #[test]
    fn tangential_contact_fails() {
        // y = x^2 and y = -x^2 touch at the origin with a common tangent.
        let fam = family(
            vec![curve(0, &[&[0, 1], &[0, 0, 1]]), curve(1, &[&[0, 1], &[0, 0, -1]])],
            2,
        );
        let cert = CurveJointCertificate {
            point: PointN::origin(2),
            incidences: vec![
                Incidence { curve: 0, t: rat(0) },
                Incidence { curve: 1, t: rat(0) },
            ],
            witness: vec![0, 1],
        };
        assert!(!verify_curve_joint(&cert, &fam).unwrap());
    }

    #[test]
    fn unknown_curve_is_an_error() {
        let (fam, mut cert) = crossing_pair();
        cert.incidences[1].curve = 9;
        assert_eq!(verify_curve_joint(&cert, &fam), Err(JointsError::UnknownCurveId(9)));
    }

    #[test]
    fn singular_witness_fails() {
        let fam = family(
            vec![curve(0, &[&[0, 0, 1], &[0, 0, 0, 1]]), curve(1, &[&[0, 1], &[0]])],
            3,
        );
        let cert = CurveJointCertificate {
            point: PointN::origin(2),
            incidences: vec![
                Incidence { curve: 0, t: rat(0) },
                Incidence { curve: 1, t: rat(0) },
            ],
            witness: vec![0, 1],
        };
        assert!(!verify_curve_joint(&cert, &fam).unwrap());
    }

    #[test]
    fn threshold_matches_line_threshold_for_degree_one() {
        for j in 0..200 {
            for n in 2..5 {
                assert_eq!(curve_threshold(j, 1, n), crate::lemma::joint_threshold(j, n));
            }
        }
    }

    #[test]
    fn family_validation() {
        let c = curve(0, &[&[0, 1], &[0, 0, 1]]);
        assert!(CurveFamily::new(2, 1, vec![c.clone()]).is_err());
        assert!(CurveFamily::new(2, 2, vec![c.clone(), c.clone()]).is_err());
        assert!(CurveFamily::new(3, 2, vec![c]).is_err());
    }

    #[test]
    fn empty_certificates() {
        let (fam, _) = crossing_pair();
        assert_eq!(
            curve_lemma_bound_check(&[], &fam),
            Err(JointsError::EmptyJointSet)
        );
        let trace = prune_curves(&[], &fam).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.initial_joint_count, 0);
    }
}
