//! Chord-distance diameter and radius.
//!
//! The farthest point of the surface from any `x` is a vertex, so
//! `rad_x = max_v ‖x − v‖`. On a face the squared objective is a maximum of
//! four quadratics with the same Hessian; their pairwise equality sets are
//! lines, so the per-face minimum is found exactly by enumerating the
//! optimality conditions over active vertex sets and face boundaries.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::geometry::tetrahedron::FACES;
use crate::geometry::{SurfacePoint, Tetrahedron, Vec2, Vec3, EDGES};

/// `rad_x` with the vertices attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarthestSet {
    pub distance: f64,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrinsicDiameter {
    pub length: f64,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrinsicRadius {
    pub length: f64,
    pub center: SurfacePoint,
    pub farthest: FarthestSet,
}

/// `diam(T)`: every vertex pair is an edge, so this is the longest edge.
pub fn extrinsic_diameter(t: &Tetrahedron) -> ExtrinsicDiameter {
    let pair = t.longest_edge_pair();
    ExtrinsicDiameter {
        length: t.edge_length(pair.0, pair.1),
        pair,
    }
}

fn farthest_from(t: &Tetrahedron, p: Vec3, cfg: &Config) -> FarthestSet {
    let d = t.vertices().map(|v| p.dist(v));
    let distance = d.iter().cloned().fold(0.0, f64::max);
    let tol = cfg.tolerances.geom_tol * t.longest_edge();
    FarthestSet {
        distance,
        vertices: (0..4).filter(|&v| d[v] >= distance - tol).collect(),
    }
}

/// `rad_x = max_y ‖x − y‖` and `f_x`.
pub fn extrinsic_radius_at(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> FarthestSet {
    farthest_from(t, x.position(t), cfg)
}

/// Orthonormal frame of a face plane.
struct FaceFrame {
    origin: Vec3,
    e1: Vec3,
    e2: Vec3,
    normal: Vec3,
}

impl FaceFrame {
    fn new(t: &Tetrahedron, face: usize) -> Self {
        let [a, b, c] = t.face_vertices(face);
        let e1 = (b - a).normalized();
        let normal = (b - a).cross(c - a).normalized();
        FaceFrame {
            origin: a,
            e1,
            e2: normal.cross(e1),
            normal,
        }
    }

    fn coords(&self, p: Vec3) -> (Vec2, f64) {
        let d = p - self.origin;
        (Vec2::new(d.dot(self.e1), d.dot(self.e2)), d.dot(self.normal))
    }

    fn lift(&self, z: Vec2) -> Vec3 {
        self.origin + self.e1 * z.x + self.e2 * z.y
    }
}

/// A line `{z : n·z = c}`.
#[derive(Clone, Copy)]
struct Line {
    n: Vec2,
    c: f64,
}

impl Line {
    fn through(a: Vec2, b: Vec2) -> Line {
        let n = (b - a).perp();
        Line { n, c: n.dot(a) }
    }

    fn project(&self, p: Vec2) -> Option<Vec2> {
        let nn = self.n.norm2();
        (nn > 0.0).then(|| p - self.n * ((self.n.dot(p) - self.c) / nn))
    }

    fn meet(&self, o: &Line) -> Option<Vec2> {
        let det = self.n.cross(o.n);
        let scale = self.n.norm() * o.n.norm();
        if det.abs() <= 1e-14 * scale {
            return None;
        }
        Some(Vec2::new(
            (self.c * o.n.y - o.c * self.n.y) / det,
            (self.n.x * o.c - o.n.x * self.c) / det,
        ))
    }
}

/// Minimizer of `max_v (‖z − p_v‖² + h_v²)` over the triangle with corners
/// `tri`, by checking every candidate of the optimality conditions.
fn face_minimizer(tri: [Vec2; 3], feet: &[(Vec2, f64); 4]) -> Vec2 {
    let sq = |z: Vec2| {
        feet.iter()
            .map(|&(p, h)| z.dist(p).powi(2) + h * h)
            .fold(0.0, f64::max)
    };
    // f_u = f_v is linear: 2 (p_v − p_u)·z = |p_v|² + h_v² − |p_u|² − h_u²
    let bisector = |u: usize, v: usize| {
        let (pu, hu) = feet[u];
        let (pv, hv) = feet[v];
        Line {
            n: (pv - pu) * 2.0,
            c: pv.norm2() + hv * hv - pu.norm2() - hu * hu,
        }
    };
    let sides = [0, 1, 2].map(|i| Line::through(tri[i], tri[(i + 1) % 3]));

    let mut cands: Vec<Vec2> = tri.to_vec();
    for &(p, _) in feet {
        cands.push(p);
        cands.extend(sides.iter().filter_map(|s| s.project(p)));
    }
    for u in 0..4 {
        for v in (u + 1)..4 {
            let b = bisector(u, v);
            cands.extend(b.project(feet[u].0));
            cands.extend(sides.iter().filter_map(|s| s.meet(&b)));
            for w in (v + 1)..4 {
                cands.extend(b.meet(&bisector(u, w)));
            }
        }
    }

    let area2 = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
    let inside = |z: Vec2| {
        let tol = 1e-12 * area2.abs();
        (0..3).all(|i| (tri[(i + 1) % 3] - tri[i]).cross(z - tri[i]) * area2.signum() >= -tol)
    };
    cands
        .into_iter()
        .filter(|&z| z.x.is_finite() && z.y.is_finite() && inside(z))
        .map(|z| (sq(z), z))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("the corners are always candidates")
        .1
}

/// `rad(T) = min_x rad_x` with the center on the surface.
pub fn extrinsic_radius(t: &Tetrahedron, cfg: &Config) -> ExtrinsicRadius {
    let scale = t.longest_edge();
    let mut best: Option<ExtrinsicRadius> = None;
    for face in 0..4 {
        let frame = FaceFrame::new(t, face);
        let tri = FACES[face].map(|v| frame.coords(t.vertex(v)).0);
        let feet = t.vertices().map(|v| frame.coords(v));
        let z = face_minimizer(tri, &feet);
        let center = SurfacePoint::from_position(t, face, frame.lift(z));
        let farthest = extrinsic_radius_at(t, &center, cfg);
        // lower face wins exact ties
        let better = best
            .as_ref()
            .map_or(true, |b| farthest.distance < b.length - 1e-15 * scale);
        if better {
            best = Some(ExtrinsicRadius {
                length: farthest.distance,
                center,
                farthest,
            });
        }
    }
    let best = best.expect("four faces");
    debug_assert!(best.length >= enclosing_ball_radius(t) * (1.0 - 1e-12));
    best
}

/// Radius of the smallest ball containing the four vertices. It bounds `rad`
/// from below since the center is not tied to the surface.
pub(crate) fn enclosing_ball_radius(t: &Tetrahedron) -> f64 {
    let v = t.vertices();
    let covers = |c: Vec3, r: f64| v.iter().all(|p| p.dist(c) <= r * (1.0 + 1e-12));
    let mut best = f64::INFINITY;
    // the ball is the circumball of some subset of two to four vertices
    for &[i, j] in EDGES.iter() {
        let c = (v[i] + v[j]) * 0.5;
        let r = c.dist(v[i]);
        if covers(c, r) {
            best = best.min(r);
        }
    }
    for f in FACES {
        let [a, b, c] = f.map(|k| v[k]);
        let (ab, ac) = (b - a, c - a);
        let n = ab.cross(ac);
        let cc = a + (n.cross(ab) * ac.norm2() + ac.cross(n) * ab.norm2()) / (2.0 * n.norm2());
        let r = cc.dist(a);
        if covers(cc, r) {
            best = best.min(r);
        }
    }
    let (b, c, d) = (v[1] - v[0], v[2] - v[0], v[3] - v[0]);
    let det = 2.0 * b.dot(c.cross(d));
    let cc = v[0] + (c.cross(d) * b.norm2() + d.cross(b) * c.norm2() + b.cross(c) * d.norm2()) / det;
    best.min(cc.dist(v[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn regular() -> Tetrahedron {
        let s = 1.0 / (2.0 * 2f64.sqrt());
        Tetrahedron::new([
            Vec3::new(s, s, s),
            Vec3::new(s, -s, -s),
            Vec3::new(-s, s, -s),
            Vec3::new(-s, -s, s),
        ])
        .unwrap()
    }

    fn irregular() -> Tetrahedron {
        Tetrahedron::new([
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.3, 0.1, 0.0),
            Vec3::new(0.4, 0.9, 0.1),
            Vec3::new(0.3, 0.35, 0.8),
        ])
        .unwrap()
    }

    #[test]
    fn regular_values() {
        let t = regular();
        let cfg = Config::default();
        let d = extrinsic_diameter(&t);
        assert!((d.length - 1.0).abs() < 1e-12);
        let r = extrinsic_radius(&t, &cfg);
        assert!((r.length - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        // the center is the foot of its single farthest vertex
        assert_eq!(r.farthest.vertices.len(), 1);
        let v = r.farthest.vertices[0];
        assert_eq!(r.center.face, v);
        assert!(r.center.position(&t).dist(t.face_centroid(v)) < 1e-9);
    }

    #[test]
    fn vertex_source_reaches_longest_incident_edge() {
        let t = irregular();
        let f = extrinsic_radius_at(&t, &SurfacePoint::vertex(1), &Config::default());
        let lens = [0, 2, 3].map(|j| (t.edge_length(1, j), j));
        let (want, far) = lens.into_iter().fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
        assert!((f.distance - want).abs() < 1e-15);
        assert_eq!(f.vertices, vec![far]);
    }

    #[test]
    fn minimum_beats_random_points_and_ball() {
        let t = irregular();
        let cfg = Config::default();
        let r = extrinsic_radius(&t, &cfg);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
            let x = SurfacePoint::in_face(rng.gen_range(0..4), [1.0 - u - v, u, v]);
            assert!(extrinsic_radius_at(&t, &x, &cfg).distance >= r.length - 1e-12);
        }
        assert!(enclosing_ball_radius(&t) <= r.length + 1e-12);
    }

    #[test]
    fn ball_of_regular_is_circumball() {
        let r = enclosing_ball_radius(&regular());
        assert!((r - (3.0f64 / 8.0).sqrt()).abs() < 1e-12);
    }
}
