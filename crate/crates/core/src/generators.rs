//! Deterministic instance generators.
//!
//! Randomness comes from SplitMix64 so that a seed names the same instance
//! on every platform and every build.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::curves::{CurveFamily, CurveJointCertificate, Incidence, PolyCurve};
use crate::error::{JointsError, Result};
use crate::geometry::{detect_joints, Arrangement, DirectionN, Line, PointN};
use crate::poly::UniPoly;
use crate::rational::{rat, Rational};

/// SplitMix64 (Steele, Lea and Flood). One 64-bit word of state; each call
/// adds the golden-ratio increment and scrambles the result.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish integer in `[-r, r]`; the modulo bias is irrelevant here.
    pub fn small_int(&mut self, r: u64) -> i64 {
        (self.next_u64() % (2 * r + 1)) as i64 - r as i64
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

const ENTRY_RANGE: u64 = 9;

fn random_vec(rng: &mut SplitMix64, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.small_int(ENTRY_RANGE))).collect()
}

/// `m` points with integer coordinates in `[-9, 9]`, duplicates allowed.
pub fn random_points(n: usize, m: usize, seed: u64) -> Vec<PointN> {
    let mut rng = SplitMix64::new(seed);
    (0..m).map(|_| PointN::new(random_vec(&mut rng, n))).collect()
}

/// Axis-parallel lines through the grid `{0, ..., k-1}^n`: `n * k^(n-1)`
/// lines and `k^n` joints. Ids run through the lines parallel to the first
/// axis, then the second, and so on.
pub fn grid_lines(n: usize, k: usize) -> Arrangement {
    assert!(n >= 2, "grid dimension must be at least 2");
    let mut lines = Vec::new();
    let mut id = 0;
    for axis in 0..n {
        // Every assignment of the other n - 1 coordinates.
        for code in 0..k.pow(n as u32 - 1) {
            let mut rest = code;
            let mut base = vec![Rational::zero(); n];
            for (i, b) in base.iter_mut().enumerate() {
                if i == axis {
                    continue;
                }
                *b = rat((rest % k) as i64);
                rest /= k;
            }
            let line = Line::from_parts(id, PointN::new(base), DirectionN::axis(n, axis))
                .expect("grid lines are well formed");
            lines.push(line);
            id += 1;
        }
    }
    Arrangement::new(n, lines).expect("grid lines are distinct")
}

fn push_distinct(lines: &mut Vec<Line>, candidate: Line) -> bool {
    if lines.iter().any(|l| l.same_geometry(&candidate)) {
        return false;
    }
    lines.push(candidate);
    true
}

/// `count` lines with random integer bases and directions. Zero directions
/// and repeated lines are redrawn.
pub fn random_lines(n: usize, count: usize, seed: u64) -> Result<Arrangement> {
    if n < 2 {
        return Err(JointsError::DimensionTooSmall(n));
    }
    let mut rng = SplitMix64::new(seed);
    let mut lines = Vec::with_capacity(count);
    while lines.len() < count {
        let base = random_vec(&mut rng, n);
        let Ok(dir) = DirectionN::new(random_vec(&mut rng, n)) else {
            continue;
        };
        let id = lines.len() as u64;
        push_distinct(&mut lines, Line::from_parts(id, PointN::new(base), dir)?);
    }
    Arrangement::new(n, lines)
}

/// Random lines whose bases come from a pool of `pool` random points, so
/// that many lines meet and joints are common.
pub fn random_concurrent_lines(n: usize, count: usize, pool: usize, seed: u64) -> Result<Arrangement> {
    if n < 2 {
        return Err(JointsError::DimensionTooSmall(n));
    }
    if pool == 0 {
        return Err(JointsError::Invalid("point pool must be nonempty".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let centers: Vec<PointN> = (0..pool).map(|_| PointN::new(random_vec(&mut rng, n))).collect();
    let mut lines = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while lines.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(JointsError::Invalid(format!(
                "could not draw {} distinct lines",
                count
            )));
        }
        let center = centers[rng.below(pool as u64) as usize].clone();
        let Ok(dir) = DirectionN::new(random_vec(&mut rng, n)) else {
            continue;
        };
        let id = lines.len() as u64;
        push_distinct(&mut lines, Line::from_parts(id, center, dir)?);
    }
    Arrangement::new(n, lines)
}

/// `count` lines through the origin: the coordinate axes first, then
/// directions `(1, t, t^2, ..., t^(n-1))` for `t = 1, 2, ...`.
pub fn star_bundle(n: usize, count: usize) -> Result<Arrangement> {
    if n < 2 {
        return Err(JointsError::DimensionTooSmall(n));
    }
    let mut lines = Vec::with_capacity(count);
    for i in 0..count {
        let dir = if i < n {
            DirectionN::axis(n, i)
        } else {
            let t = rat((i - n + 1) as i64);
            let mut comps = vec![Rational::one()];
            for k in 1..n {
                comps.push(&comps[k - 1] * &t);
            }
            DirectionN::new(comps)?
        };
        lines.push(Line::from_parts(i as u64, PointN::origin(n), dir)?);
    }
    Arrangement::new(n, lines)
}

/// Planar parabolas `y = (x - a)^2 + b`, one per `(a, b)`, parametrized by
/// `x`, together with certificates for every crossing. Two members with
/// different `a` cross exactly once, transversally; members sharing `a`
/// never meet.
pub fn parabola_family(params: &[(Rational, Rational)]) -> Result<(CurveFamily, Vec<CurveJointCertificate>)> {
    let distinct: BTreeSet<_> = params.iter().collect();
    if distinct.len() != params.len() {
        return Err(JointsError::Invalid("repeated parabola parameters".into()));
    }
    let curves: Vec<PolyCurve> = params
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let y = UniPoly::new(vec![a * a + b, -(a + a), Rational::one()]);
            PolyCurve::new(i as u64, vec![UniPoly::t(), y])
        })
        .collect();

    let mut crossings: BTreeMap<PointN, BTreeSet<u64>> = BTreeMap::new();
    for i in 0..params.len() {
        for j in i + 1..params.len() {
            let ((ai, bi), (aj, bj)) = (&params[i], &params[j]);
            if ai == aj {
                continue;
            }
            let x = (ai * ai + bi - aj * aj - bj) / (rat(2) * (ai - aj));
            let y = curves[i].components[1].evaluate(&x);
            let entry = crossings.entry(PointN::new(vec![x, y])).or_default();
            entry.insert(i as u64);
            entry.insert(j as u64);
        }
    }
    let certs = crossings
        .into_iter()
        .map(|(point, ids)| {
            let x = point.coords()[0].clone();
            CurveJointCertificate {
                incidences: ids
                    .iter()
                    .map(|&curve| Incidence { curve, t: x.clone() })
                    .collect(),
                witness: ids.iter().take(2).copied().collect(),
                point,
            }
        })
        .collect();
    Ok((CurveFamily::new(2, 2, curves)?, certs))
}

/// `k` parabolas `y = x^2 + i` against `k` parabolas `y = (x - 1)^2 + j`:
/// `k^2` joints on `2k` curves, `k` on each.
pub fn parabola_grid(k: usize) -> (CurveFamily, Vec<CurveJointCertificate>) {
    let params: Vec<(Rational, Rational)> = (0..2)
        .flat_map(|a| (0..k).map(move |b| (rat(a), rat(b as i64))))
        .collect();
    parabola_family(&params).expect("grid parameters are distinct")
}

/// Each line as a degree-1 curve `t -> base + t * dir`, with certificates
/// for the joints of the arrangement.
pub fn lines_as_curves(arr: &Arrangement) -> Result<(CurveFamily, Vec<CurveJointCertificate>)> {
    let curves = arr
        .lines()
        .iter()
        .map(|l| {
            let comps = l
                .base()
                .coords()
                .iter()
                .zip(l.dir().components())
                .map(|(b, d)| UniPoly::new(vec![b.clone(), d.clone()]))
                .collect();
            PolyCurve::new(l.id, comps)
        })
        .collect();
    let family = CurveFamily::new(arr.dimension(), 1, curves)?;
    let certs = detect_joints(arr)
        .into_iter()
        .map(|j| CurveJointCertificate {
            incidences: j
                .incident_line_ids
                .iter()
                .map(|&id| Incidence {
                    curve: id,
                    t: arr.line(id).unwrap().parameter_of(&j.point).unwrap(),
                })
                .collect(),
            witness: j.witness,
            point: j.point,
        })
        .collect();
    Ok((family, certs))
}
