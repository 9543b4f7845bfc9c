//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use joints_core::coloring::{color_from_prune, color_incremental, pigeonhole_finish};
use joints_core::curves::{
    curve_eval, curve_lemma_bound_check, curve_tangent, prune_curves, restrict_to_curve,
    verify_curve_joint,
};
use joints_core::generators::{
    grid_lines, lines_as_curves, parabola_grid, random_concurrent_lines, random_lines,
    random_points, star_bundle,
};
use joints_core::geometry::joint_points;
use joints_core::lemma::{lemma_bound_check, run_annihilation, AnnihilationMode};
use joints_core::pruning::{prune, verify_trace, TheoremBound};
use joints_core::rational::{binomial, factorial, rat};
use joints_core::report::report;
use joints_core::{
    brute_force_joints, detect_joints, min_vanishing_degree, vanishing_polynomial, Arrangement,
    JointsError, Line, MultiPoly, PointN,
};
use num_bigint::BigUint;
use num_traits::Zero;

const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const VANISHING_BUDGET: Duration = Duration::from_secs(120);
const GRID_PRUNE_BUDGET: Duration = Duration::from_secs(10);

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Grids for n in {2, 3}, k in 1..=5; star bundles; joint-rich random
/// arrangements.
fn fixtures() -> Vec<(String, Arrangement)> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for k in 1..=5 {
            out.push((format!("grid({n},{k})"), grid_lines(n, k)));
        }
    }
    for (n, count) in [(2, 2), (2, 6), (3, 3), (3, 10), (4, 7)] {
        out.push((format!("star({n},{count})"), star_bundle(n, count).unwrap()));
    }
    for seed in 0..12 {
        let n = 2 + (seed as usize % 3);
        let arr = random_concurrent_lines(n, 10 + seed as usize, 2 + seed as usize % 3, seed).unwrap();
        out.push((format!("concurrent(n={n},seed={seed})"), arr));
    }
    out
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut with_joints = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed % 3) as usize;
        let count = 1 + (seed * 7 % 40) as usize;
        let arr = if seed % 2 == 0 {
            random_lines(n, count, seed).unwrap()
        } else {
            random_concurrent_lines(n, count, 1 + (seed % 4) as usize, seed).unwrap()
        };
        let fast = detect_joints(&arr);
        ensure!(fast == brute_force_joints(&arr), "seed {seed}: detectors disagree");
        with_joints += usize::from(!fast.is_empty());
    }
    for (name, arr) in fixtures() {
        ensure!(detect_joints(&arr) == brute_force_joints(&arr), "{name}: detectors disagree");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < ORACLE_BUDGET, "took {elapsed:?}");
    Ok(format!(
        "200 random ({with_joints} with joints) + {} fixtures agree, {:.1}s",
        fixtures().len(),
        elapsed.as_secs_f64()
    ))
}

fn lemma_effective() -> Check {
    let mut checked = 0;
    for (name, arr) in fixtures() {
        let jp = joint_points(&detect_joints(&arr));
        if jp.is_empty() {
            continue;
        }
        let r = lemma_bound_check(&jp, &arr).map_err(|e| format!("{name}: {e}"))?;
        let bound = binomial((r.m_star - 1 + r.dimension) as u64, r.dimension as u64);
        ensure!(r.lower_bound == bound, "{name}: bound {} != {bound}", r.lower_bound);
        ensure!(
            r.holds && BigUint::from(r.j_count) >= bound,
            "{name}: |J'| = {} < {bound}",
            r.j_count
        );
        checked += 1;
    }
    Ok(format!("{checked} nonempty joint sets satisfy |J'| >= C(m*-1+n, n)"))
}

fn vanishing() -> Check {
    let start = Instant::now();
    let mut largest = 0;
    for seed in 0..100u64 {
        let n = 1 + (seed % 4) as usize;
        let m = 1 + (seed.wrapping_mul(0x9E37_79B9) % 200) as usize;
        let points = random_points(n, m, seed);
        let q = vanishing_polynomial(n, &points).map_err(|e| e.to_string())?;
        let d = min_vanishing_degree(m, n);
        ensure!(!q.is_zero(), "seed {seed}: zero polynomial");
        ensure!(q.degree().unwrap() <= d, "seed {seed}: degree above {d}");
        for p in &points {
            ensure!(q.evaluate(p).unwrap().is_zero(), "seed {seed}: nonzero at {p}");
        }
        let (d, nn, mm) = (d as u64, n as u64, BigUint::from(m));
        ensure!(
            d >= 1 && binomial(d - 1 + nn, nn) <= mm && mm < binomial(d + nn, nn),
            "seed {seed}: threshold identity fails"
        );
        largest = largest.max(m);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < VANISHING_BUDGET, "took {elapsed:?}");
    Ok(format!(
        "100 point sets (m <= {largest}, n <= 4) vanish exactly, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn theorem_effective() -> Check {
    let mut summary = Vec::new();
    let mut largest = Duration::ZERO;
    for k in 2..=5 {
        let arr = grid_lines(3, k);
        let start = Instant::now();
        let trace = prune(&arr).map_err(|e| e.to_string())?;
        verify_trace(&trace, &arr).map_err(|e| format!("grid(3,{k}): {e}"))?;
        let elapsed = start.elapsed();
        ensure!(
            trace.steps.iter().all(|s| s.count + 1 <= trace.m),
            "grid(3,{k}): a step exceeds m - 1"
        );
        let (j, l) = (trace.initial_joint_count, arr.len());
        ensure!(j <= (trace.m - 1) * l, "grid(3,{k}): {j} > {}*{l}", trace.m - 1);
        if k == 2 {
            ensure!((j, l, trace.m) == (8, 12, 3), "grid(3,2): got {j}, {l}, m = {}", trace.m);
        }
        if k == 5 {
            ensure!((j, l) == (125, 75), "grid(3,5): got {j} joints, {l} lines");
            ensure!(elapsed < GRID_PRUNE_BUDGET, "grid(3,5) took {elapsed:?}");
            largest = elapsed;
        }
        summary.push(format!("{j}<={}*{l}", trace.m - 1));
    }
    for (name, arr) in fixtures() {
        let j = detect_joints(&arr).len();
        let n = arr.dimension() as u32;
        let lhs = BigUint::from(j).pow(n - 1);
        let rhs = factorial(n as u64) * BigUint::from(arr.len()).pow(n);
        ensure!(lhs <= rhs, "{name}: |J|^(n-1) = {lhs} > n!|L|^n = {rhs}");
        let trace = prune(&arr).map_err(|e| format!("{name}: {e}"))?;
        let expected = TheoremBound::compute(j, arr.len(), trace.m, arr.dimension());
        ensure!(trace.bound == expected && expected.holds(), "{name}: bound check fails");
    }
    Ok(format!(
        "grid(3,k): {}; grid(3,5) pruned and replayed in {:.2}s; effective form holds on all fixtures",
        summary.join(", "),
        largest.as_secs_f64()
    ))
}

fn coloring() -> Check {
    let mut count = 0;
    for (name, arr) in fixtures() {
        let trace = prune(&arr).map_err(|e| e.to_string())?;
        let a = pigeonhole_finish(&color_from_prune(&trace, &arr).unwrap(), &arr)
            .map_err(|e| format!("{name}: {e}"))?;
        let b = pigeonhole_finish(
            &color_incremental(&arr).map_err(|e| format!("{name}: {e}"))?,
            &arr,
        )
        .map_err(|e| format!("{name}: {e}"))?;
        for (method, r) in [("prune", &a), ("incremental", &b)] {
            ensure!(r.max_fiber + 1 <= trace.m || r.joint_count == 0, "{name} {method}: fiber {} >= m", r.max_fiber);
            ensure!(r.pigeonhole_floor <= r.max_fiber, "{name} {method}: pigeonhole fails");
            ensure!(r.holds, "{name} {method}: report fails");
        }
        ensure!(a.threshold == b.threshold && a.threshold + 1 == trace.m, "{name}: thresholds differ");
        count += 1;
    }
    Ok(format!("both constructions keep every fiber <= m-1 on {count} fixtures"))
}

fn curves() -> Check {
    // Lines as degree-1 curves reproduce the line numbers.
    let arr = grid_lines(3, 2);
    let (family, certs) = lines_as_curves(&arr).map_err(|e| e.to_string())?;
    for c in &certs {
        ensure!(verify_curve_joint(c, &family).unwrap(), "line certificate at {} fails", c.point);
    }
    let jp = joint_points(&detect_joints(&arr));
    let q = vanishing_polynomial(3, &jp).unwrap();
    for (line, curve) in arr.lines().iter().zip(&family.curves) {
        for t in [rat(-2), rat(0), rat(3)] {
            ensure!(curve_eval(curve, &t) == line.point_at(&t), "eval differs on line {}", line.id);
            ensure!(curve_tangent(curve, &t).unwrap() == *line.dir(), "tangent differs");
        }
        ensure!(
            restrict_to_curve(&q, curve).unwrap() == q.restrict_to_line(line).unwrap(),
            "restriction differs on line {}",
            line.id
        );
    }
    let lr = lemma_bound_check(&jp, &arr).unwrap();
    let cr = curve_lemma_bound_check(&certs, &family).map_err(|e| e.to_string())?;
    ensure!(
        (cr.m_star, &cr.lower_bound, cr.j_count, cr.holds) == (lr.m_star, &lr.lower_bound, lr.j_count, lr.holds),
        "curve lemma differs from line lemma"
    );
    let lt = prune(&arr).unwrap();
    let ct = prune_curves(&certs, &family).map_err(|e| e.to_string())?;
    ensure!(
        ct.m == lt.m && ct.steps == lt.steps && ct.residual_curve_ids == lt.residual_line_ids,
        "curve pruning differs from line pruning"
    );

    // Parabola grids: 2k curves, k^2 joints.
    for k in 1..=6 {
        let (family, certs) = parabola_grid(k);
        ensure!(family.curves.len() == 2 * k && certs.len() == k * k, "parabola grid {k} sizes");
        for c in &certs {
            ensure!(verify_curve_joint(c, &family).unwrap(), "parabola certificate at {} fails", c.point);
        }
        let r = curve_lemma_bound_check(&certs, &family).map_err(|e| e.to_string())?;
        ensure!(
            r.degree_check && r.vanishing_degree as usize * r.max_degree >= r.m_star,
            "k = {k}: degree check fails"
        );
        ensure!(r.holds, "k = {k}: curve lemma bound fails");
        let t = prune_curves(&certs, &family).map_err(|e| e.to_string())?;
        ensure!(
            t.bound_holds && t.initial_joint_count <= (t.m - 1) * family.curves.len(),
            "k = {k}: |J| > (m-1)|C|"
        );
        ensure!(t.steps.iter().all(|s| s.count + 1 <= t.m), "k = {k}: step exceeds m - 1");
    }
    Ok("lines-as-curves match grid(3,2) exactly; parabola grids k=1..6 verify and prune".into())
}

/// Points on `k` lines parallel to the first axis at heights `0..k`, with
/// `Q = prod (x_2 - c)^e`; each line carries `deg Q + 1` points.
fn stacked_lines(n: usize, k: i64, e: u32) -> (Arrangement, Vec<PointN>, MultiPoly) {
    let mut lines = Vec::new();
    let mut points = Vec::new();
    let mut q = MultiPoly::constant(n, rat(1));
    let per_line = k * e as i64 + 1;
    for c in 0..k {
        let mut base = vec![0; n];
        base[1] = c;
        let mut dir = vec![0; n];
        dir[0] = 1;
        lines.push(Line::from_ints(c as u64, &base, &dir).unwrap());
        for x in 0..per_line {
            let mut p = base.clone();
            p[0] = x;
            points.push(PointN::from_ints(&p));
        }
        let factor = &MultiPoly::variable(n, 1) - &MultiPoly::constant(n, rat(c));
        for _ in 0..e {
            q = &q * &factor;
        }
    }
    (Arrangement::new(n, lines).unwrap(), points, q)
}

fn annihilation() -> Check {
    let mut fixtures = 0;
    for n in 2..=3 {
        for k in 1..=3 {
            for e in 1..=3 {
                let (arr, jp, q) = stacked_lines(n, k, e);
                let tag = format!("n={n} k={k} e={e}");
                let cert = run_annihilation(&jp, &arr, &q, AnnihilationMode::Demonstration)
                    .map_err(|err| format!("{tag}: {err}"))?;
                let degrees = cert.layer_degrees();
                ensure!(
                    degrees.windows(2).all(|w| match (w[0], w[1]) {
                        (Some(a), Some(b)) => b < a,
                        (Some(_), None) => true,
                        _ => false,
                    }),
                    "{tag}: layer degrees {degrees:?} not strictly decreasing"
                );
                ensure!(degrees.last() == Some(&None), "{tag}: chain does not end at zero");
                for layer in &cert.chain {
                    for p in layer {
                        for x in &jp {
                            ensure!(p.evaluate(x).unwrap().is_zero(), "{tag}: layer poly nonzero at {x}");
                        }
                    }
                }

                let tampered = &q + &MultiPoly::constant(n, rat(1));
                ensure!(
                    matches!(
                        run_annihilation(&jp, &arr, &tampered, AnnihilationMode::Demonstration),
                        Err(JointsError::PointPrecondition { .. })
                    ),
                    "{tag}: tampered Q accepted"
                );
                let skewed = &q + &MultiPoly::variable(n, 0);
                ensure!(
                    run_annihilation(&jp, &arr, &skewed, AnnihilationMode::Demonstration).is_err(),
                    "{tag}: Q + x1 accepted"
                );
                ensure!(
                    run_annihilation(&jp, &arr, &q, AnnihilationMode::Strict).is_err(),
                    "{tag}: strict mode accepted non-joints"
                );
                fixtures += 1;
            }
        }
    }
    // Strict mode on genuine joints: no nonzero Q passes the degree gate.
    let arr = grid_lines(3, 2);
    let jp = joint_points(&detect_joints(&arr));
    let q = vanishing_polynomial(3, &jp).unwrap();
    ensure!(
        run_annihilation(&jp, &arr, &q, AnnihilationMode::Strict).is_err(),
        "strict mode accepted a nonzero Q on grid joints"
    );
    Ok(format!("{fixtures} demonstration chains decrease to zero; tampered inputs rejected"))
}

fn extremal() -> Check {
    let mut cases = Vec::new();
    for (n, kmax) in [(2, 5), (3, 5), (4, 3)] {
        for k in 1..=kmax {
            let r = report(&grid_lines(n, k)).map_err(|e| e.to_string())?;
            let lhs = BigUint::from(r.joints).pow(n as u32 - 1);
            // (|L| / n)^n, with |L| = n k^(n-1) divisible by n.
            ensure!(r.lines % n == 0, "grid({n},{k}): |L| not divisible by n");
            let rhs = BigUint::from(r.lines / n).pow(n as u32);
            ensure!(lhs == rhs && r.extremal, "grid({n},{k}): {lhs} != {rhs}");
            cases.push(format!("({n},{k})"));
        }
    }
    Ok(format!("|J|^(n-1) = (|L|/n)^n on {} grids", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("lemma bound", lemma_effective),
        ("vanishing polynomial", vanishing),
        ("pruning bound", theorem_effective),
        ("coloring", coloring),
        ("curves", curves),
        ("annihilation chain", annihilation),
        ("extremal exponent", extremal),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
