//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tetra::campaign::{campaign_with, CampaignResult, REFINE_ITERATIONS};
use tetra::extrinsic::{extrinsic_diameter, extrinsic_radius};
use tetra::generators::{
    make_eps_thick, make_isosceles, make_normal_eps_thick, make_regular, shape_distance, GeneratorKind, GeneratorSpec,
};
use tetra::geodesic::{geodesic_distance, mesh_oracle_distance};
use tetra::geometry::{circumcenter, Triangle2, EDGES};
use tetra::intrinsic::{cut_locus, intrinsic_diameter, intrinsic_radius, star_unfold};
use tetra::report::compute_report;
use tetra::{Config, SurfacePoint, Tetrahedron, Vec2};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(value: f64, target: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((value - target).abs() <= tol, || format!("{what} = {value}, expected {target} ± {tol:e}"))
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

fn random_point(rng: &mut ChaCha8Rng) -> SurfacePoint {
    let (u, v): (f64, f64) = (rng.gen(), rng.gen());
    let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
    SurfacePoint::in_face(rng.gen_range(0..4), [1.0 - u - v, u, v])
}

fn random_family(seed: u64) -> GeneratorSpec {
    let mut spec = GeneratorSpec::new(GeneratorKind::Random);
    spec.seed = seed;
    spec
}

fn criterion_1(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let t = ok(make_regular(1.0))?;
    let diam = extrinsic_diameter(&t).length;
    let rad = extrinsic_radius(&t, cfg).length;
    let big_diam = ok(intrinsic_diameter(&t, cfg))?;
    let big_rad = ok(intrinsic_radius(&t, cfg))?;
    within(diam, 1.0, 1e-12, "diam")?;
    within(rad, (2.0f64 / 3.0).sqrt(), 1e-6, "rad")?;
    within(big_diam.length, 2.0 / sqrt3(), 1e-6, "Diam")?;
    within(big_rad.length, 1.0, 1e-6, "Rad")?;

    let dist = |a: &SurfacePoint, b: &SurfacePoint| geodesic_distance(&t, a, b, cfg).map(|r| r.0);
    let (p, q) = big_diam.pair;
    let mut witness = f64::INFINITY;
    for v in 0..4 {
        let vertex = SurfacePoint::vertex(v);
        let centroid = SurfacePoint::in_face(v, [1.0 / 3.0; 3]);
        let a = ok(dist(&p, &vertex))?.max(ok(dist(&q, &centroid))?);
        let b = ok(dist(&q, &vertex))?.max(ok(dist(&p, &centroid))?);
        witness = witness.min(a).min(b);
    }
    ensure(witness <= 1e-4, || format!("Diam witness is {witness:e} from a vertex/opposite centroid pair"))?;
    let mut center = f64::INFINITY;
    for &[i, j] in EDGES.iter() {
        center = center.min(ok(dist(&big_rad.center, &SurfacePoint::on_edge(i, j, 0.5)))?);
    }
    ensure(center <= 1e-3, || format!("Rad center is {center:e} from the nearest edge midpoint"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "Diam {:.9} Rad {:.9} diam {diam} rad {rad:.9}; witness offsets {witness:.1e}, {center:.1e}; {:.2}s",
        big_diam.length,
        big_rad.length,
        elapsed.as_secs_f64()
    ))
}

fn campaign_rows(c: &CampaignResult) -> impl Iterator<Item = (&Tetrahedron, [f64; 4])> {
    c.rows.iter().filter_map(|r| Some((r.tetrahedron.as_ref()?, r.metrics?)))
}

fn criterion_2(cfg: &Config, c: &CampaignResult, elapsed: Duration) -> Outcome {
    let t = ok(make_regular(1.0))?;
    let regular = ok(intrinsic_diameter(&t, cfg))?.length / extrinsic_diameter(&t).length;
    within(regular, 2.0 / sqrt3(), 1e-6, "regular Diam/diam")?;
    let mut thick = vec![ok(make_normal_eps_thick(0.01, 1.0))?];
    for seed in 0..5 {
        thick.push(ok(make_eps_thick(0.01, seed, 1.0))?);
    }
    let mut worst_thick: f64 = 0.0;
    for t in &thick {
        let ratio = ok(intrinsic_diameter(t, cfg))?.length / extrinsic_diameter(t).length;
        worst_thick = worst_thick.max(ratio);
    }
    ensure(worst_thick <= 1.01, || format!("eps-thick Diam/diam = {worst_thick}"))?;

    ensure(c.errors() == 0, || format!("{} campaign instances failed", c.errors()))?;
    ensure(c.rows.len() == 500, || format!("{} rows", c.rows.len()))?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, [big_diam, diam, _, _]) in campaign_rows(c) {
        lo = lo.min(big_diam / diam);
        hi = hi.max(big_diam / diam);
    }
    ensure(lo >= 1.0 - 1e-6 && hi <= 2.0 / sqrt3() + 1e-6, || format!("campaign Diam/diam in [{lo}, {hi}]"))?;
    ensure(c.violations.is_empty(), || format!("{} violations", c.violations.len()))?;
    ensure(elapsed < Duration::from_secs(300), || format!("campaign took {elapsed:?}"))?;
    Ok(format!(
        "regular {regular:.9}; eps-thick max {worst_thick:.6}; campaign Diam/diam in [{lo:.9}, {hi:.9}], 0 violations, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_3(cfg: &Config, c: &CampaignResult) -> Outcome {
    let mut checked_strict = 0;
    let mut worst_gap = f64::INFINITY;
    for (t, [_, diam, big_rad, _]) in campaign_rows(c) {
        ensure(big_rad <= diam + 1e-6, || format!("Rad {big_rad} > diam {diam}"))?;
        let l = t.edge_lengths();
        let (min, max) = l.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        if (max - min) / max > 0.01 {
            checked_strict += 1;
            let gap = (diam - big_rad) / diam;
            worst_gap = worst_gap.min(gap);
            ensure(big_rad < diam - 1e-4 * diam, || format!("Rad {big_rad} within 1e-4 of diam {diam}"))?;
        }
    }
    let t = ok(make_regular(1.0))?;
    let r = ok(intrinsic_radius(&t, cfg))?.length;
    within(r, extrinsic_diameter(&t).length, 1e-6, "regular Rad - diam")?;
    Ok(format!("Rad <= diam on all; strict on {checked_strict} spread instances, min relative gap {worst_gap:.4}; regular Rad {r:.9}"))
}

fn criterion_4(cfg: &Config, c: &CampaignResult) -> Outcome {
    let t = ok(make_normal_eps_thick(0.01, 1.0))?;
    let r = ok(compute_report(&t, cfg))?.ratios;
    ensure(r.big_diam_big_rad >= 1.98, || format!("Diam/Rad = {}", r.big_diam_big_rad))?;
    ensure(r.diam_rad >= 1.98, || format!("diam/rad = {}", r.diam_rad))?;
    ensure(r.big_rad_rad <= 1.02, || format!("Rad/rad = {}", r.big_rad_rad))?;
    let tol = cfg.tolerances.opt_tol;
    for row in &c.rows {
        let Some(q) = row.ratios else { continue };
        for (name, v, lo, hi) in [
            ("Diam/Rad", q.big_diam_big_rad, 1.0, 2.0),
            ("diam/rad", q.diam_rad, 1.0, 2.0),
            ("Rad/rad", q.big_rad_rad, 1.0, 2.0),
        ] {
            ensure(v >= lo - tol && v <= hi + tol, || format!("instance {}: {name} = {v}", row.index))?;
        }
    }
    Ok(format!(
        "normal eps-thick Diam/Rad {:.6} diam/rad {:.6} Rad/rad {:.6}; campaign ratios within [1, 2]",
        r.big_diam_big_rad, r.diam_rad, r.big_rad_rad
    ))
}

fn criterion_5(cfg: &Config, c: &CampaignResult) -> Outcome {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in &c.rows {
        let Some(q) = row.ratios else { continue };
        ensure(q.rad_big_diam > sqrt3() / 4.0 && q.rad_big_diam < 1.0, || {
            format!("instance {}: rad/Diam = {}", row.index, q.rad_big_diam)
        })?;
        lo = lo.min(q.rad_big_diam);
        hi = hi.max(q.rad_big_diam);
    }
    let t = ok(make_regular(1.0))?;
    let r = ok(compute_report(&t, cfg))?.ratios.rad_big_diam;
    within(r, 0.707107, 1e-6, "regular rad/Diam")?;
    Ok(format!(
        "rad/Diam in [{lo:.6}, {hi:.6}], margins {:.4} below and {:.4} above; regular {r:.9}",
        lo - sqrt3() / 4.0,
        1.0 - hi
    ))
}

fn criterion_6(cfg: &Config) -> Outcome {
    let spec = random_family(6);
    let (mut worst_bisector, mut worst_junction) = (0.0f64, 0.0f64);
    let mut junctions = 0;
    for index in 0..100 {
        let t = ok(spec.generate(index))?;
        let scale = extrinsic_radius(&t, cfg).length;
        for v in 0..4 {
            let cl = ok(cut_locus(&t, &SurfacePoint::vertex(v), cfg))?;
            let others: Vec<usize> = (0..4).filter(|&u| u != v).collect();
            ensure(cl.is_tree(), || format!("instance {index} vertex {v}: not a tree"))?;
            ensure(cl.leaves().count() == 3 && cl.leaf_vertices() == others, || {
                format!("instance {index} vertex {v}: leaves {:?}", cl.leaf_vertices())
            })?;
            let star = &cl.star;
            for (e, edge) in cl.edges.iter().enumerate() {
                for k in 0..10 {
                    let s = (k as f64 + 0.5) / 10.0;
                    let z = cl.arc_image(e, s);
                    let y = cl.arc_point(&t, e, s);
                    let d = ok(geodesic_distance(&t, &star.source, &y, cfg))?.0;
                    for site in edge.sites {
                        worst_bisector = worst_bisector.max((z.dist(star.sites[site]) - d).abs() / scale);
                    }
                }
            }
            for node in cl.junctions().filter(|n| n.vertex.is_none()) {
                junctions += 1;
                let s: Vec<Vec2> = node.sites.iter().map(|&i| star.sites[i]).collect();
                let c = ok(circumcenter(s[0], s[1], s[2]))?;
                let spread = s.iter().map(|p| p.dist(node.image)).fold(0.0, f64::max)
                    - s.iter().map(|p| p.dist(node.image)).fold(f64::INFINITY, f64::min);
                worst_junction = worst_junction.max(c.dist(node.image) / scale).max(spread / scale);
            }
        }
    }
    ensure(worst_bisector <= 1e-6, || format!("bisector residual {worst_bisector:e} rad"))?;
    ensure(worst_junction <= 1e-6, || format!("junction off circumcenter by {worst_junction:e} rad"))?;
    Ok(format!(
        "400 Y-trees; bisector residual {worst_bisector:.1e} rad; {junctions} flat junctions, worst {worst_junction:.1e} rad"
    ))
}

fn criterion_7(cfg: &Config) -> Outcome {
    let t = ok(make_isosceles(5.0, 6.0, 7.0))?;
    for v in 0..4 {
        within(ok(t.face_angle_sum(v))?, PI, 1e-9, &format!("angle sum at {v}"))?;
    }
    for f in 0..4 {
        let max_angle = tetra::geometry::FACES[f].iter().map(|&v| t.face_angle(f, v)).fold(0.0, f64::max);
        ensure(max_angle < PI / 2.0, || format!("face {f} has angle {max_angle}"))?;
    }
    let tol = 1e-9 * t.longest_edge();
    for v in 0..4 {
        let star = ok(star_unfold(&t, &SurfacePoint::vertex(v), cfg))?;
        ensure(star.len() == 3 && star.is_simple(tol), || format!("vertex {v}: star with {} sites, not simple", star.len()))?;
        for i in 0..3 {
            let mid = star.sites[i].lerp(star.sites[(i + 1) % 3], 0.5);
            ensure(star.leaves[i].dist(mid) <= 1e-9, || format!("vertex {v}: leaf {i} off the side midpoint"))?;
        }
        let tri = ok(Triangle2::new(star.sites[0], star.sites[1], star.sites[2], tol))?;
        ensure(tri.is_acute(tol), || format!("vertex {v}: star triangle not acute"))?;
        let mut sides = tri.side_lengths();
        sides.sort_by(f64::total_cmp);
        for (s, want) in sides.iter().zip([10.0, 12.0, 14.0]) {
            within(*s, want, 1e-9, &format!("vertex {v} star side"))?;
        }
    }
    Ok("angle sums pi, acute faces, each vertex star a simple acute triangle with sides 10, 12, 14".into())
}

fn criterion_8(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let spec = random_family(8);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_ratio, mut worst_sym, mut worst_tri) = (1.0f64, 0.0f64, f64::NEG_INFINITY);
    for index in 0..10 {
        let t = ok(spec.generate(index))?;
        for _ in 0..50 {
            let (p, q, r) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
            let d = |a: &SurfacePoint, b: &SurfacePoint| geodesic_distance(&t, a, b, cfg).map(|x| x.0);
            let pq = ok(d(&p, &q))?;
            let oracle = mesh_oracle_distance(&t, &p, &q, 6);
            ensure(pq <= oracle * (1.0 + 1e-12), || format!("geodesic {pq} above oracle {oracle}"))?;
            ensure(oracle <= 1.01 * pq, || format!("oracle {oracle} above 1.01 x geodesic {pq}"))?;
            if pq > 0.0 {
                worst_ratio = worst_ratio.max(oracle / pq);
            }
            worst_sym = worst_sym.max((pq - ok(d(&q, &p))?).abs());
            worst_tri = worst_tri.max(ok(d(&p, &r))? - pq - ok(d(&q, &r))?);
        }
    }
    ensure(worst_sym <= 1e-9, || format!("asymmetry {worst_sym:e}"))?;
    ensure(worst_tri <= 1e-9, || format!("triangle inequality excess {worst_tri:e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "500 pairs; oracle/geodesic <= {worst_ratio:.6}; asymmetry {worst_sym:.1e}; triangle excess {worst_tri:.1e}; {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let on_circle = |a: f64| Vec2::from_angle(a);
    let mut acute = 0;
    let mut shortest_longest = f64::INFINITY;
    while acute < 10_000 {
        let a: [f64; 3] = [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)];
        let Ok(tri) = Triangle2::new(on_circle(a[0]), on_circle(a[1]), on_circle(a[2]), 1e-12) else {
            continue;
        };
        if !tri.is_acute(0.0) {
            continue;
        }
        acute += 1;
        shortest_longest = shortest_longest.min(tri.longest_side());
    }
    ensure(shortest_longest >= sqrt3() - 1e-9, || format!("longest side {shortest_longest}"))?;
    // near-equilateral: every arc within 1e-3 of 2π/3
    let mut worst_near = 0.0f64;
    for _ in 0..1000 {
        let base = rng.gen_range(0.0..2.0 * PI);
        let g1 = 2.0 * PI / 3.0 + rng.gen_range(-5e-4..5e-4);
        let g2 = 2.0 * PI / 3.0 + rng.gen_range(-5e-4..5e-4);
        let tri = ok(Triangle2::new(on_circle(base), on_circle(base + g1), on_circle(base + g1 + g2), 1e-12))?;
        worst_near = worst_near.max((tri.longest_side() - sqrt3()).abs());
    }
    ensure(worst_near <= 1e-3, || format!("near-equilateral longest side off by {worst_near}"))?;
    Ok(format!(
        "10000 acute inscribed triangles, min longest side {shortest_longest:.9}; near-equilateral within {worst_near:.1e} of sqrt(3)"
    ))
}

fn criterion_10(c: &CampaignResult) -> Outcome {
    let refinement = c.refinement.as_ref().ok_or("no refinement")?;
    ensure(refinement.iterations == REFINE_ITERATIONS, || format!("{} iterations", refinement.iterations))?;
    let (min, shape) = c.min_diam_over_rad().ok_or("no instances")?;
    ensure(min >= 2.0 / sqrt3() - 1e-3, || format!("min Diam/Rad {min}"))?;
    let distance = shape_distance(&shape, &ok(make_regular(1.0))?);
    ensure(distance <= 1e-2, || format!("minimizer at shape distance {distance} from regular"))?;
    Ok(format!(
        "evidence only: sampled min {:.6} (instance {}), refined min {min:.7} at shape distance {distance:.1e} from regular",
        refinement.start_value, refinement.start_index
    ))
}

fn criterion_11(c: &CampaignResult) -> Outcome {
    let mut shapes: Vec<Tetrahedron> = c.rows.iter().filter_map(|r| r.tetrahedron.clone()).collect();
    shapes.push(ok(make_regular(1.0))?);
    shapes.push(ok(make_isosceles(5.0, 6.0, 7.0))?);
    shapes.push(ok(make_normal_eps_thick(0.01, 1.0))?);
    for seed in 0..5 {
        shapes.push(ok(make_eps_thick(0.01, seed, 1.0))?);
    }
    let mut worst_defect = 0.0f64;
    let mut max_sum = 0.0f64;
    for t in &shapes {
        worst_defect = worst_defect.max((t.total_angle_defect() - 4.0 * PI).abs());
        for v in 0..4 {
            max_sum = max_sum.max(ok(t.face_angle_sum(v))?);
        }
    }
    ensure(worst_defect <= 1e-9, || format!("total defect off by {worst_defect:e}"))?;
    ensure(max_sum < 2.0 * PI, || format!("angle sum {max_sum}"))?;
    Ok(format!(
        "{} instances; total defect within {worst_defect:.1e} of 4pi; max vertex angle sum {max_sum:.6}",
        shapes.len()
    ))
}

fn run(id: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match &outcome {
        Ok(detail) => println!("PASS [{id:>2}] {title}: {detail}"),
        Err(detail) => println!("FAIL [{id:>2}] {title}: {detail}"),
    }
    outcome.is_ok()
}

fn main() {
    let cfg = Config::default();
    let mut passed = Vec::new();
    passed.push(run(1, "regular tetrahedron constants", || criterion_1(&cfg)));

    let start = Instant::now();
    let campaign = campaign_with(&random_family(42), 500, 42, &cfg, REFINE_ITERATIONS);
    let elapsed = start.elapsed();
    let campaign = match campaign {
        Ok(c) => c,
        Err(e) => {
            println!("campaign failed: {e}");
            std::process::exit(1);
        }
    };

    passed.push(run(2, "Diam/diam endpoints and campaign", || criterion_2(&cfg, &campaign, elapsed)));
    passed.push(run(3, "Rad <= diam", || criterion_3(&cfg, &campaign)));
    passed.push(run(4, "eps-thick equality cases", || criterion_4(&cfg, &campaign)));
    passed.push(run(5, "rad/Diam bounds", || criterion_5(&cfg, &campaign)));
    passed.push(run(6, "cut-locus structure", || criterion_6(&cfg)));
    passed.push(run(7, "isosceles suite", || criterion_7(&cfg)));
    passed.push(run(8, "geodesic engine vs oracle", || criterion_8(&cfg)));
    passed.push(run(9, "inscribed acute triangles", criterion_9));
    passed.push(run(10, "Diam/Rad minimum near regular", || criterion_10(&campaign)));
    passed.push(run(11, "Gauss-Bonnet and gluing angles", || criterion_11(&campaign)));

    let failed = passed.iter().filter(|p| !**p).count();
    println!("{} of {} criteria passed", passed.len() - failed, passed.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
