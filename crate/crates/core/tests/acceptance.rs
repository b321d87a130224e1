//! End-to-end acceptance checks. Runs every criterion, prints one PASS/FAIL
//! line each, and exits nonzero if any fails.

use curvesig::curve::{perturb_smooth, reflect, reparameterize, CorpusKind, CorpusParams};
use curvesig::foliation::{reduce_profile, AdmissibleLine, LineGrid};
use curvesig::inverse::{
    alternating_sum, build_reparameterization, reconstruct_image, BoundingBox, CurveOracle,
    ProbeRectangle,
};
use curvesig::matching::{
    decide_equivalence, default_delta, diagram_distance, dmatch, sigma2_distance, Verdict,
};
use curvesig::persistence::{rank_h0, CornerPoint, PersistenceDiagram};
use curvesig::{generate, rank_via_line, Orientation, Point, Reflection, SampledCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, SQRT_2, TAU};
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn random_curves(n: usize, count: usize, first_seed: u64) -> Vec<SampledCurve> {
    (0..count as u64)
        .map(|k| {
            generate(
                CorpusKind::RandomGeneric,
                n,
                first_seed + k,
                &CorpusParams::default(),
            )
            .unwrap()
        })
        .collect()
}

/// Parameter interval of segment `a + t(b - a)` inside the closed box, if any.
fn clip(a: Point, b: Point, min: Point, max: Point) -> Option<(f64, f64)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-d.x, a.x - min.x),
        (d.x, max.x - a.x),
        (-d.y, a.y - min.y),
        (d.y, max.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else if p < 0.0 {
            t0 = t0.max(q / p);
        } else {
            t1 = t1.min(q / p);
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

fn strictly_inside(p: Point, r: &ProbeRectangle) -> bool {
    let (lo, hi) = (r.min(), r.max());
    lo.x < p.x && p.x < hi.x && lo.y < p.y && p.y < hi.y
}

fn strictly_outside(p: Point, r: &ProbeRectangle) -> bool {
    let (lo, hi) = (r.min(), r.max());
    p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y
}

/// Whether some point of the polyline `strand` is componentwise below `p`.
fn meets_quadrant(strand: &[Point], p: Point) -> bool {
    let far = Point::new(-1e300, -1e300);
    strand
        .windows(2)
        .any(|w| clip(w[0], w[1], far, p).is_some())
}

fn certified_disjoint(curve: &SampledCurve, r: &ProbeRectangle) -> bool {
    curve
        .edges()
        .all(|(a, b)| clip(a, b, r.min(), r.max()).is_none())
}

/// One strand crosses the cell: entering through the top side and leaving
/// through the right side (in either direction), with x and y strictly monotone
/// in opposite senses, passing above-right of a, c, d and below-left of b.
fn certified_transversal(curve: &SampledCurve, r: &ProbeRectangle) -> bool {
    let n = curve.len();
    let (lo, hi) = (r.min(), r.max());
    let hits: Vec<bool> = curve
        .edges()
        .map(|(a, b)| clip(a, b, lo, hi).is_some())
        .collect();
    let starts: Vec<usize> = (0..n)
        .filter(|&i| hits[i] && !hits[(i + n - 1) % n])
        .collect();
    if starts.len() != 1 {
        return false;
    }
    let first = starts[0];
    let len = (0..n).take_while(|&k| hits[(first + k) % n]).count();
    let last = (first + len - 1) % n;
    if !strictly_outside(curve.vertex(first), r) || !strictly_outside(curve.vertex(last + 1), r) {
        return false;
    }
    let interior: Vec<Point> = (1..len).map(|k| curve.vertex(first + k)).collect();
    if !interior.iter().all(|&p| strictly_inside(p, r)) {
        return false;
    }
    let (a0, b0) = curve.edge(first);
    let (a1, b1) = curve.edge(last);
    let enter = a0 + (b0 - a0) * clip(a0, b0, lo, hi).unwrap().0;
    let exit = a1 + (b1 - a1) * clip(a1, b1, lo, hi).unwrap().1;
    let mut strand = vec![enter];
    strand.extend(interior);
    strand.push(exit);

    let steps: Vec<Point> = strand.windows(2).map(|w| w[1] - w[0]).collect();
    let falling = steps.iter().all(|d| d.x > 0.0 && d.y < 0.0);
    let rising = steps.iter().all(|d| d.x < 0.0 && d.y > 0.0);
    if !(falling || rising) {
        return false;
    }
    let eps = 1e-12 * r.h;
    let on_top = |p: Point| (p.y - hi.y).abs() <= eps && lo.x < p.x && p.x < hi.x - eps;
    let on_right = |p: Point| (p.x - hi.x).abs() <= eps && lo.y < p.y && p.y < hi.y - eps;
    let sides_ok = (on_top(enter) && on_right(exit)) || (on_right(enter) && on_top(exit));
    sides_ok
        && meets_quadrant(&strand, r.b())
        && !meets_quadrant(&strand, r.a())
        && !meets_quadrant(&strand, r.d())
}

fn probe_dichotomy() -> Outcome {
    let start = Instant::now();
    let curves = random_curves(512, 10, 100);
    let oracles: Vec<CurveOracle> = curves.iter().map(CurveOracle::new).collect();
    let frames: Vec<Vec<SampledCurve>> = curves
        .iter()
        .map(|c| Reflection::ALL.iter().map(|&s| reflect(c, s)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut zero_ok, mut zero_total, mut one_ok, mut one_total) = (0, 0, 0, 0);
    let mut attempts = 0usize;
    while (zero_total < 1000 || one_total < 1000) && attempts < 1_000_000 {
        attempts += 1;
        let ci = rng.gen_range(0..curves.len());
        let si = rng.gen_range(0..4);
        let s = Reflection::ALL[si];
        let frame = &frames[ci][si];
        let (p, q) = frame.edge(rng.gen_range(0..frame.len()));
        let on = p + (q - p) * rng.gen::<f64>();
        if zero_total < 1000 && (one_total >= 1000 || rng.gen_bool(0.5)) {
            let h = rng.gen_range(0.005..0.1);
            let off = Point::new(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15));
            let rect =
                ProbeRectangle::new(on.x + off.x - 0.5 * h, on.y + off.y - 0.5 * h, h).unwrap();
            if certified_disjoint(frame, &rect) {
                zero_total += 1;
                zero_ok += usize::from(alternating_sum(&oracles[ci], s, &rect).unwrap() == 0);
            }
        } else if one_total < 1000 {
            let d = q - p;
            if d.x * d.y >= 0.0 {
                continue;
            }
            let h = rng.gen_range(0.005..0.05);
            let rx = rng.gen_range(0.4..0.8);
            let ry = rng.gen_range(1.02..1.31) - rx;
            let rect = ProbeRectangle::new(on.x - rx * h, on.y - ry * h, h).unwrap();
            if certified_transversal(frame, &rect) {
                one_total += 1;
                one_ok += usize::from(alternating_sum(&oracles[ci], s, &rect).unwrap() == 1);
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: zero_ok == 1000
            && zero_total == 1000
            && one_ok == 1000
            && one_total == 1000
            && elapsed < Duration::from_secs(30),
        detail: format!(
            "disjoint {zero_ok}/{zero_total} sum=0, transversal {one_ok}/{one_total} sum=1, {:.1}s",
            elapsed.as_secs_f64()
        ),
    }
}

fn stability() -> Outcome {
    let start = Instant::now();
    let curves = random_curves(256, 50, 200);
    let mut worst_slack = f64::NEG_INFINITY;
    let (mut failures, mut cases) = (0, 0);
    for (k, f) in curves.iter().enumerate() {
        for (j, eps) in [0.01, 0.05, 0.1].into_iter().enumerate() {
            let g = perturb_smooth(f, eps, 1000 + 3 * k as u64 + j as u64).unwrap();
            let grid = LineGrid::for_curves(32, 32, [f, &g]).unwrap();
            let d = sigma2_distance(f, &g, &grid).unwrap().max_over_sigma2;
            worst_slack = worst_slack.max(d - eps);
            failures += usize::from(d > eps + 1e-12);
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures == 0 && elapsed < Duration::from_secs(300),
        detail: format!(
            "{}/{cases} within eps + 1e-12, max(d - eps) = {worst_slack:.3e}, {:.1}s",
            cases - failures,
            elapsed.as_secs_f64()
        ),
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let params = CorpusParams::default();
    let mut curves = random_curves(256, 12, 300);
    for kind in [
        CorpusKind::Circle,
        CorpusKind::Ellipse,
        CorpusKind::Limacon,
        CorpusKind::Fig2AnalogA,
    ] {
        curves.push(generate(kind, 256, 0, &params).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut agree, mut total, mut excluded) = (0, 0, 0);
    while total < 10_000 {
        let f = &curves[rng.gen_range(0..curves.len())];
        let b = 2.0 * f.max_abs_coordinate() + 1.0;
        let line = AdmissibleLine::new(rng.gen_range(0.02..FRAC_PI_2 - 0.02), rng.gen_range(-b..b))
            .unwrap();
        let w = line.weight();
        let profile = reduce_profile(f, &line);
        let lo = profile.iter().copied().fold(f64::INFINITY, f64::min) / w;
        let hi = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max) / w;
        let (mut s, mut t) = (
            rng.gen_range(lo - 0.1..hi + 0.1),
            rng.gen_range(lo - 0.1..hi + 0.1),
        );
        if s > t {
            std::mem::swap(&mut s, &mut t);
        }
        if s == t
            || profile
                .iter()
                .any(|&x| (x - w * s).abs() < 1e-9 || (x - w * t).abs() < 1e-9)
        {
            excluded += 1;
            continue;
        }
        total += 1;
        let via_line = rank_via_line(f, &line, s, t).unwrap();
        let direct = rank_h0(f, line.point_at(s), line.point_at(t)).unwrap();
        agree += usize::from(via_line == direct);
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: agree == total && elapsed < Duration::from_secs(120),
        detail: format!(
            "{agree}/{total} equal ({excluded} ties excluded), {:.1}s",
            elapsed.as_secs_f64()
        ),
    }
}

fn reparameterization_forward() -> Outcome {
    let params = CorpusParams::default();
    let mut curves = vec![
        generate(CorpusKind::Circle, 256, 0, &params).unwrap(),
        generate(CorpusKind::Ellipse, 256, 0, &params).unwrap(),
        generate(CorpusKind::Limacon, 256, 0, &params).unwrap(),
    ];
    curves.extend(random_curves(256, 17, 400));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = 0;
    let mut notes = Vec::new();
    for (k, f) in curves.iter().enumerate() {
        let shift = rng.gen_range(0..f.len() as i64);
        let orientation = if rng.gen_bool(0.5) {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        let g = reparameterize(f, shift, orientation);
        let grid = LineGrid::for_curves(16, 16, [f, &g]).unwrap();
        let verdict = decide_equivalence(f, &g, default_delta(f, &g), &grid).unwrap();
        let h = build_reparameterization(f, &g, 1e-6).unwrap();
        let good = verdict.verdict == Verdict::Equivalent
            && verdict.max_over_sigma2 == 0.0
            && h.residual == 0.0
            && h.index_shift() == Some((shift, orientation));
        if good {
            ok += 1;
        } else {
            notes.push(format!(
                "curve {k}: {:?} d={:e} residual={:e} shift={:?}",
                verdict.verdict,
                verdict.max_over_sigma2,
                h.residual,
                h.index_shift()
            ));
        }
    }
    Outcome {
        pass: ok == curves.len(),
        detail: format!(
            "{ok}/{} recovered exactly {}",
            curves.len(),
            notes.join("; ")
        ),
    }
}

fn reflections_needed() -> Outcome {
    let params = CorpusParams::default();
    let f = generate(CorpusKind::Fig2AnalogA, 512, 0, &params).unwrap();
    let g = generate(CorpusKind::Fig2AnalogB, 512, 0, &params).unwrap();
    let grid = LineGrid::for_curves(64, 64, [&f, &g]).unwrap();
    let table = sigma2_distance(&f, &g, &grid).unwrap();
    let id = table.get(Reflection::Id);
    let best = table.argmax();
    Outcome {
        pass: id < 1e-3 && best.distance > 1e-2,
        detail: format!("id = {id:.3e}, {} = {:.3e}", best.reflection, best.distance),
    }
}

fn genericity_needed() -> Outcome {
    let params = CorpusParams::default();
    let f = generate(CorpusKind::Fig3AnalogA, 512, 0, &params).unwrap();
    let g = generate(CorpusKind::Fig3AnalogB, 512, 0, &params).unwrap();
    let grid = LineGrid::for_curves(64, 64, [&f, &g]).unwrap();
    let v = decide_equivalence(&f, &g, default_delta(&f, &g), &grid).unwrap();
    let (rf, rg) = &v.genericity;
    Outcome {
        pass: v.max_over_sigma2 < 1e-3
            && v.verdict == Verdict::Inconclusive
            && !rf.all_clean
            && !rg.all_clean,
        detail: format!(
            "max = {:.3e}, verdict {:?}, all double points clean: {} / {}",
            v.max_over_sigma2, v.verdict, rf.all_clean, rg.all_clean
        ),
    }
}

fn circle_reconstruction() -> Outcome {
    let start = Instant::now();
    let circle = generate(CorpusKind::Circle, 512, 0, &CorpusParams::default()).unwrap();
    let cell = 0.05;
    let bbox = BoundingBox::new(-1.5, -1.5, 1.5, 1.5).unwrap();
    let grid = reconstruct_image(&CurveOracle::new(&circle), bbox, cell).unwrap();
    let elapsed = start.elapsed();
    let bound = SQRT_2 * cell;
    let occupied: Vec<((usize, usize), Point)> = grid
        .occupied_cells()
        .map(|ij| (ij, grid.center(ij.0, ij.1)))
        .collect();

    let to_circle = occupied
        .iter()
        .map(|(_, c)| (c.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    // Circle points farther than the bound from every occupied center are misses;
    // each must be nearest to a cell that the axis-parallel fallback flagged.
    let samples = 20_000;
    let (mut from_circle, mut misses, mut stray) = (0.0f64, 0, 0);
    for k in 0..samples {
        let th = TAU * k as f64 / samples as f64;
        let q = Point::new(th.cos(), th.sin());
        let (ij, d) = occupied
            .iter()
            .map(|(ij, c)| (*ij, c.dist(q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        from_circle = from_circle.max(d);
        if d > bound {
            misses += 1;
            stray += usize::from(!grid.flagged_axis_cells.contains(&ij));
        }
    }
    Outcome {
        pass: grid.nx == 60
            && grid.ny == 60
            && to_circle <= bound
            && stray == 0
            && elapsed < Duration::from_secs(120),
        detail: format!(
            "centers->circle {to_circle:.4} <= {bound:.4}; circle->centers {from_circle:.4}, \
             {misses}/{samples} samples beyond the bound, {stray} of them away from flagged cells \
             ({} flagged); {:.1}s",
            grid.flagged_axis_cells.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn random_diagram(rng: &mut ChaCha8Rng) -> PersistenceDiagram {
    let finite_pairs = (0..rng.gen_range(0..8))
        .map(|_| {
            let birth = rng.gen_range(-2.0..2.0);
            CornerPoint {
                birth,
                death: birth + rng.gen_range(0.0..1.5),
            }
        })
        .collect();
    PersistenceDiagram {
        finite_pairs,
        essential: vec![rng.gen_range(-2.0..2.0)],
    }
}

fn metric_and_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (x, y, z) = (
            random_diagram(&mut rng),
            random_diagram(&mut rng),
            random_diagram(&mut rng),
        );
        let dxy = diagram_distance(&x, &y).unwrap();
        let dyx = diagram_distance(&y, &x).unwrap();
        let dxz = diagram_distance(&x, &z).unwrap();
        let dyz = diagram_distance(&y, &z).unwrap();
        worst = worst.max((dxy - dyx).abs()).max(dxz - dxy - dyz);
    }
    let metric_ok = worst <= 1e-12;

    let curves = random_curves(128, 10, 500);
    let mut chain_failures = 0;
    for _ in 0..1000 {
        let f = &curves[rng.gen_range(0..curves.len())];
        let (lo, hi) = f.bbox();
        let mut pick = || {
            Point::new(
                rng.gen_range(lo.x - 0.2..hi.x + 0.2),
                rng.gen_range(lo.y - 0.2..hi.y + 0.2),
            )
        };
        let (p, q) = (pick(), pick());
        // u_0 <= u_1 <= ... < ... <= v_1 <= v_0, each pair shrunk toward its midpoint.
        let mut u = Point::new(p.x.min(q.x), p.y.min(q.y));
        let mut v = Point::new(p.x.max(q.x) + 1e-3, p.y.max(q.y) + 1e-3);
        let mut last = rank_h0(f, u, v).unwrap();
        for _ in 0..6 {
            let mid = (u + v) * 0.5;
            let nu = Point::new(
                u.x + (mid.x - u.x) * rng.gen_range(0.0..0.9),
                u.y + (mid.y - u.y) * rng.gen_range(0.0..0.9),
            );
            let nv = Point::new(
                v.x + (mid.x - v.x) * rng.gen_range(0.0..0.9),
                v.y + (mid.y - v.y) * rng.gen_range(0.0..0.9),
            );
            let r = rank_h0(f, nu, nv).unwrap();
            if r < last {
                chain_failures += 1;
                break;
            }
            (u, v, last) = (nu, nv, r);
        }
    }

    let mut refine_failures = 0;
    for k in 0..100 {
        let f = &curves[k % curves.len()];
        let g = if k % 2 == 0 {
            perturb_smooth(f, rng.gen_range(0.01..0.3), k as u64).unwrap()
        } else {
            curves[(k + 3) % curves.len()].clone()
        };
        let coarse =
            LineGrid::for_curves(rng.gen_range(1..5), rng.gen_range(1..5), [f, &g]).unwrap();
        let fine = coarse.refine();
        if dmatch(f, &g, &coarse).unwrap() > dmatch(f, &g, &fine).unwrap() {
            refine_failures += 1;
        }
    }
    Outcome {
        pass: metric_ok && chain_failures == 0 && refine_failures == 0,
        detail: format!(
            "metric worst violation {worst:.1e}; rank chains {}/1000 monotone; refinement {}/100 monotone",
            1000 - chain_failures,
            100 - refine_failures
        ),
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("probe alternating sums", probe_dichotomy),
        ("stability under sup-norm perturbation", stability),
        ("line reduction matches direct rank", oracle_equivalence),
        (
            "reparameterized copies are equivalent",
            reparameterization_forward,
        ),
        ("reflections separate the lens pair", reflections_needed),
        ("tangential contact is inconclusive", genericity_needed),
        ("circle reconstruction fidelity", circle_reconstruction),
        ("metric and monotonicity suites", metric_and_monotonicity),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        println!(
            "[{}] criterion {} {name}: {}",
            if out.pass { "PASS" } else { "FAIL" },
            k + 1,
            out.detail
        );
        failed += usize::from(!out.pass);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
