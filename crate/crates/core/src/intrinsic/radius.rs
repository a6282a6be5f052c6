//! Farthest points, intrinsic diameter and intrinsic radius.

use serde::{Deserialize, Serialize};

use super::cut_locus::{cut_locus, CutLocus};
use super::star::{star_unfold, StarUnfolding};
use crate::config::Config;
use crate::error::{Result, TetraError};
use crate::geodesic::geodesic_distance;
use crate::geometry::planar::point_in_polygon;
use crate::geometry::{circumcenter, SurfacePoint, Tetrahedron};
use crate::optimize::{golden_section_max, nelder_mead, SimplexOptions};

/// Parameter tolerance of the arc maximization.
const ARC_TOL: f64 = 1e-7;

/// `Rad_x` and the farthest points `F_x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntipodeSet {
    pub distance: f64,
    pub points: Vec<SurfacePoint>,
}

/// Intrinsic diameter with a pair of points realizing it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiameterWitness {
    pub length: f64,
    pub pair: (SurfacePoint, SurfacePoint),
}

/// Intrinsic radius with its center and the center's antipodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusWitness {
    pub length: f64,
    pub center: SurfacePoint,
    pub antipodes: AntipodeSet,
}

/// Antipodes read off a constructed cut locus.
pub fn antipodes_from_cut_locus(t: &Tetrahedron, cl: &CutLocus, cfg: &Config) -> Result<AntipodeSet> {
    let scale = t.longest_edge();
    let tol = cfg.tolerances.opt_tol * scale;

    // (distance, point) candidates: every node and the interior maximum of
    // every arc
    let mut cands: Vec<(f64, SurfacePoint)> = cl.nodes.iter().map(|n| (n.distance, n.point)).collect();
    for e in 0..cl.edges.len() {
        let (s, d) = golden_section_max(|s| cl.arc_distance(e, s), 0.0, 1.0, ARC_TOL);
        if s > 0.0 && s < 1.0 {
            cands.push((d, cl.arc_point(t, e, s)));
        }
    }
    let distance = cands.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);

    let mut points: Vec<SurfacePoint> = Vec::new();
    let mut best: Vec<&(f64, SurfacePoint)> = cands.iter().filter(|c| c.0 >= distance - tol).collect();
    best.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.key().cmp(&b.1.key())));
    for (_, p) in best {
        let mut dup = false;
        for q in &points {
            if p.position(t).dist(q.position(t)) <= tol && geodesic_distance(t, p, q, cfg)?.0 <= tol {
                dup = true;
                break;
            }
        }
        if !dup {
            points.push(*p);
        }
    }
    Ok(AntipodeSet { distance, points })
}

/// `Rad_x = max_y ρ(x, y)` with the farthest points.
pub fn intrinsic_radius_at(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<AntipodeSet> {
    let cl = cut_locus(t, x, cfg)?;
    antipodes_from_cut_locus(t, &cl, cfg)
}

/// Largest distance from the source to a node of the nearest-site partition
/// of `star`; arcs attain their maxima at end nodes, so this is `Rad_x`.
fn radius_from_star(star: &StarUnfolding, tol: f64) -> f64 {
    let k = star.len();
    let s = &star.sites;
    let mut best = (0..k).map(|i| star.leaves[i].dist(s[i])).fold(0.0, f64::max);
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                let Ok(cc) = circumcenter(s[a], s[b], s[c]) else {
                    continue;
                };
                let r = cc.dist(s[a]);
                if r <= best {
                    continue;
                }
                let closer = (0..k).any(|d| d != a && d != b && d != c && cc.dist(s[d]) < r - tol);
                if !closer && point_in_polygon(&star.polygon, cc, tol) {
                    best = r;
                }
            }
        }
    }
    best
}

/// `Rad_x` alone, skipping antipode bookkeeping.
pub fn intrinsic_radius_value(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<f64> {
    let tol = cfg.tolerances.geom_tol * t.longest_edge();
    match star_unfold(t, x, cfg) {
        Ok(star) => Ok(radius_from_star(&star, tol)),
        Err(TetraError::AmbiguousCut { .. }) => Ok(intrinsic_radius_at(t, x, cfg)?.distance),
        Err(e) => Err(e),
    }
}

/// `Diam(T)`: the largest `Rad_c` over vertices and antipodes of vertices.
pub fn intrinsic_diameter(t: &Tetrahedron, cfg: &Config) -> Result<DiameterWitness> {
    let mut best: Option<DiameterWitness> = None;
    let mut consider = |c: SurfacePoint, set: &AntipodeSet| {
        let better = best.as_ref().map_or(true, |b| set.distance > b.length);
        if better {
            best = Some(DiameterWitness {
                length: set.distance,
                pair: (c, set.points[0]),
            });
        }
    };
    let mut antipodes = Vec::new();
    for v in 0..4 {
        let x = SurfacePoint::vertex(v);
        let set = intrinsic_radius_at(t, &x, cfg)?;
        consider(x, &set);
        antipodes.extend(set.points);
    }
    for a in antipodes {
        if a.as_vertex().is_some() {
            continue;
        }
        let set = intrinsic_radius_at(t, &a, cfg)?;
        consider(a, &set);
    }
    Ok(best.expect("four vertex candidates"))
}

/// Face point from unconstrained coordinates: the Euclidean projection of
/// `(1 - u - v, u, v)` onto the probability simplex, and the distance moved.
fn project(face: usize, u: f64, v: f64) -> (SurfacePoint, f64) {
    let w = [1.0 - u - v, u, v];
    // sort-based simplex projection
    let mut sorted = w;
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cum += x;
        let th = (cum - 1.0) / (i + 1) as f64;
        if x - th > 0.0 {
            theta = th;
        }
    }
    let p = w.map(|x| (x - theta).max(0.0));
    let moved = w.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    (SurfacePoint::in_face(face, p), moved)
}

/// Seeds per face, as barycentric coordinates.
const SEEDS: [[f64; 3]; 9] = [
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    [0.5, 0.5, 0.0],
    [0.0, 0.5, 0.5],
    [0.5, 0.0, 0.5],
    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
    [0.25, 0.25, 0.5],
    [0.5, 0.25, 0.25],
];

/// `Rad(T) = min_x Rad_x`, by simplex descent in face coordinates from nine
/// seeds on every face.
pub fn intrinsic_radius(t: &Tetrahedron, cfg: &Config) -> Result<RadiusWitness> {
    let scale = t.longest_edge();
    let opt_tol = cfg.tolerances.opt_tol;

    let mut seeds: Vec<(f64, usize, [f64; 3])> = Vec::with_capacity(36);
    for face in 0..4 {
        for b in SEEDS {
            let x = SurfacePoint::in_face(face, b);
            seeds.push((intrinsic_radius_value(t, &x, cfg)?, face, b));
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut best: Option<(f64, SurfacePoint)> = None;
    let mut failure: Option<TetraError> = None;
    for &(_, face, b) in seeds.iter() {
        let mut objective = |z: &[f64]| -> f64 {
            let (x, moved) = project(face, z[0], z[1]);
            match intrinsic_radius_value(t, &x, cfg) {
                Ok(r) => r + moved * scale,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            }
        };
        let mut z = vec![b[1], b[2]];
        let mut step = 0.1;
        let mut f = f64::INFINITY;
        // restarts shake the simplex loose at kinks of the objective
        for _ in 0..3 {
            let r = nelder_mead(
                &mut objective,
                &z,
                &[step, step],
                SimplexOptions {
                    max_iter: 200,
                    f_tol: opt_tol * 1e-3 * scale,
                    x_tol: opt_tol * 1e-2,
                },
            );
            let improved = r.f < f - opt_tol * 1e-3 * scale;
            z = r.x;
            f = r.f;
            if !improved {
                break;
            }
            step *= 0.05;
        }
        let (x, _) = project(face, z[0], z[1]);
        let better = best.as_ref().map_or(true, |(bf, bx)| {
            f < *bf - 1e-15 * scale || ((f - bf).abs() <= 1e-15 * scale && x.key() < bx.key())
        });
        if better {
            best = Some((f, x));
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let (_, center) = best.expect("at least one seed");
    let antipodes = intrinsic_radius_at(t, &center, cfg)?;
    Ok(RadiusWitness {
        length: antipodes.distance,
        center,
        antipodes,
    })
}
