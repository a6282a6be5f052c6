//! Planar primitives: triangles, face placements and strip unfolding.

use serde::{Deserialize, Serialize};

use super::tetrahedron::{shared_edge, Tetrahedron, FACES};
use super::vec::{orient2d, Vec2, Vec3};
use crate::error::{Result, TetraError};

/// Angle at `a` of the triangle `(a, b, c)` in ℝ³.
pub fn angle_at(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let u = b - a;
    let v = c - a;
    u.cross(v).norm().atan2(u.dot(v))
}

/// Angle at `a` of the planar triangle `(a, b, c)`, in `[0, π]`.
pub fn angle_at_2d(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    let u = b - a;
    let v = c - a;
    u.cross(v).abs().atan2(u.dot(v))
}

/// A non-degenerate planar triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle2 {
    pub pts: [Vec2; 3],
}

impl Triangle2 {
    /// Rejects triangles whose doubled area is below `tol · (longest side)²`.
    pub fn new(a: Vec2, b: Vec2, c: Vec2, tol: f64) -> Result<Self> {
        let t = Triangle2 { pts: [a, b, c] };
        let l = t.longest_side();
        if !(orient2d(a, b, c).abs() > tol * l * l) {
            return Err(TetraError::Collinear);
        }
        Ok(t)
    }

    pub fn side_lengths(&self) -> [f64; 3] {
        let [a, b, c] = self.pts;
        [b.dist(c), c.dist(a), a.dist(b)]
    }

    pub fn longest_side(&self) -> f64 {
        let s = self.side_lengths();
        s[0].max(s[1]).max(s[2])
    }

    /// All angles strictly below `π/2 - tol`.
    pub fn is_acute(&self, tol: f64) -> bool {
        let [a, b, c] = self.pts;
        let half_pi = std::f64::consts::FRAC_PI_2;
        [angle_at_2d(a, b, c), angle_at_2d(b, c, a), angle_at_2d(c, a, b)]
            .iter()
            .all(|&t| t < half_pi - tol)
    }

    pub fn circumcenter(&self) -> Vec2 {
        circumcenter(self.pts[0], self.pts[1], self.pts[2]).expect("validated triangle")
    }

    pub fn circumradius(&self) -> f64 {
        self.circumcenter().dist(self.pts[0])
    }

    pub fn area(&self) -> f64 {
        orient2d(self.pts[0], self.pts[1], self.pts[2]).abs() / 2.0
    }
}

pub fn triangle_is_acute(t: &Triangle2, tol: f64) -> bool {
    t.is_acute(tol)
}

pub fn longest_side(t: &Triangle2) -> f64 {
    t.longest_side()
}

/// Circumcenter of three planar points, relative to `a` for conditioning.
pub fn circumcenter(a: Vec2, b: Vec2, c: Vec2) -> Result<Vec2> {
    let u = b - a;
    let v = c - a;
    let d = 2.0 * u.cross(v);
    let scale = u.norm2().max(v.norm2());
    if d.abs() <= 1e-14 * scale || !d.is_finite() {
        return Err(TetraError::Collinear);
    }
    let (uu, vv) = (u.norm2(), v.norm2());
    let x = (v.y * uu - u.y * vv) / d;
    let y = (u.x * vv - v.x * uu) / d;
    Ok(a + Vec2::new(x, y))
}

/// Proper rigid motion of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry2 {
    pub angle: f64,
    pub translation: Vec2,
}

impl Default for Isometry2 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Isometry2 {
    pub const IDENTITY: Isometry2 = Isometry2 {
        angle: 0.0,
        translation: Vec2::ZERO,
    };

    pub fn new(angle: f64, translation: Vec2) -> Self {
        Self { angle, translation }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        p.rotate(self.angle) + self.translation
    }
}

/// Isometric image of one face in the plane; `pts[k]` is the image of
/// `FACES[face][k]`, and the images are counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacePlacement {
    pub face: usize,
    pub pts: [Vec2; 3],
}

impl FacePlacement {
    /// Face in its own frame: first vertex at the origin, first edge on +x.
    pub fn local(t: &Tetrahedron, face: usize) -> Self {
        let [a, b, c] = t.face_vertices(face);
        let e1 = b - a;
        let l = e1.norm();
        let ex = e1 / l;
        let w = c - a;
        let x = w.dot(ex);
        let y = (w - ex * x).norm();
        FacePlacement {
            face,
            pts: [Vec2::ZERO, Vec2::new(l, 0.0), Vec2::new(x, y)],
        }
    }

    pub fn transformed(&self, iso: &Isometry2) -> Self {
        FacePlacement {
            face: self.face,
            pts: self.pts.map(|p| iso.apply(p)),
        }
    }

    /// Image of tetrahedron vertex `v`, if it belongs to this face.
    pub fn vertex_image(&self, v: usize) -> Option<Vec2> {
        FACES[self.face]
            .iter()
            .position(|&u| u == v)
            .map(|k| self.pts[k])
    }

    pub fn point(&self, bary: [f64; 3]) -> Vec2 {
        self.pts[0] * bary[0] + self.pts[1] * bary[1] + self.pts[2] * bary[2]
    }

    /// Barycentric coordinates of a planar point (may be negative outside).
    pub fn bary_of(&self, p: Vec2) -> [f64; 3] {
        let [a, b, c] = self.pts;
        let area = orient2d(a, b, c);
        let u = orient2d(p, b, c) / area;
        let v = orient2d(a, p, c) / area;
        [u, v, 1.0 - u - v]
    }

    /// Linear image of a 3D vector lying in the face plane.
    pub fn map_direction(&self, t: &Tetrahedron, d: Vec3) -> Vec2 {
        let [a, b, c] = t.face_vertices(self.face);
        let e1 = b - a;
        let e2 = c - a;
        let (g11, g12, g22) = (e1.dot(e1), e1.dot(e2), e2.dot(e2));
        let (r1, r2) = (d.dot(e1), d.dot(e2));
        let det = g11 * g22 - g12 * g12;
        let alpha = (r1 * g22 - r2 * g12) / det;
        let beta = (r2 * g11 - r1 * g12) / det;
        (self.pts[1] - self.pts[0]) * alpha + (self.pts[2] - self.pts[0]) * beta
    }

    /// 3D vector in the face plane whose image is `w`; inverse of
    /// [`FacePlacement::map_direction`].
    pub fn unmap_direction(&self, t: &Tetrahedron, w: Vec2) -> Vec3 {
        let [a, b, c] = t.face_vertices(self.face);
        let (u, v) = (self.pts[1] - self.pts[0], self.pts[2] - self.pts[0]);
        let det = u.cross(v);
        let alpha = w.cross(v) / det;
        let beta = u.cross(w) / det;
        (b - a) * alpha + (c - a) * beta
    }

    /// Places face `next` so that it shares the common edge with `self`
    /// point-for-point and keeps counter-clockwise orientation.
    pub fn neighbor(&self, t: &Tetrahedron, next: usize) -> Result<FacePlacement> {
        let (i, j) = shared_edge(self.face, next).ok_or(TetraError::NonAdjacent(self.face, next))?;
        let pi = self.vertex_image(i).expect("shared vertex");
        let pj = self.vertex_image(j).expect("shared vertex");
        Ok(place_against(t, next, i, pi, j, pj))
    }
}

/// Places `face` so that vertices `i` and `j` land on `pi` and `pj`.
pub fn place_against(t: &Tetrahedron, face: usize, i: usize, pi: Vec2, j: usize, pj: Vec2) -> FacePlacement {
    let tri = FACES[face];
    let k = tri.iter().cloned().find(|&v| v != i && v != j).expect("third vertex");
    let (a, b, c) = (t.vertex(i), t.vertex(j), t.vertex(k));
    let ab = b - a;
    let l = ab.norm();
    let ex = ab / l;
    let w = c - a;
    let x = w.dot(ex);
    let y = (w - ex * x).norm();
    let e2 = (pj - pi) / pi.dist(pj);
    let n = e2.perp();
    let mut pk = pi + e2 * x + n * y;
    let images = |pk: Vec2| {
        tri.map(|v| {
            if v == i {
                pi
            } else if v == j {
                pj
            } else {
                pk
            }
        })
    };
    let mut pts = images(pk);
    if orient2d(pts[0], pts[1], pts[2]) < 0.0 {
        pk = pi + e2 * x - n * y;
        pts = images(pk);
    }
    FacePlacement { face, pts }
}

/// Faces laid out in the plane along a sequence of adjacent faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnfoldedStrip {
    pub placements: Vec<FacePlacement>,
}

/// Unfolds `seq` into the plane, the first face placed by `seed` applied to
/// its local frame.
pub fn unfold_faces(t: &Tetrahedron, seq: &[usize], seed: &Isometry2) -> Result<UnfoldedStrip> {
    if let Some(&bad) = seq.iter().find(|&&f| f > 3) {
        return Err(TetraError::InvalidIndex(bad));
    }
    for w in seq.windows(2) {
        if w[0] == w[1] {
            return Err(TetraError::NonAdjacent(w[0], w[1]));
        }
    }
    for (k, w) in seq.windows(3).enumerate() {
        if w[0] == w[2] {
            return Err(TetraError::Backtrack(k + 2));
        }
    }
    let mut placements = Vec::with_capacity(seq.len());
    if let Some(&first) = seq.first() {
        placements.push(FacePlacement::local(t, first).transformed(seed));
    }
    for &f in seq.iter().skip(1) {
        let next = placements.last().expect("non-empty").neighbor(t, f)?;
        placements.push(next);
    }
    Ok(UnfoldedStrip { placements })
}

/// Signed area of a polygon (positive when counter-clockwise).
pub fn polygon_signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Proper intersection test for closed segments with slack `tol`.
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2, tol: f64) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    let s1 = (b - a).norm() * (d - c).norm() * tol;
    ((d1 > s1 && d2 < -s1) || (d1 < -s1 && d2 > s1)) && ((d3 > s1 && d4 < -s1) || (d3 < -s1 && d4 > s1))
}

/// True when no two non-adjacent boundary edges cross.
pub fn polygon_is_simple(poly: &[Vec2], tol: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], tol) {
                return false;
            }
        }
    }
    // coincident non-adjacent vertices also break simplicity
    let scale = poly.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-300);
    for i in 0..n {
        for j in (i + 1)..n {
            if poly[i].dist(poly[j]) <= tol * scale {
                return false;
            }
        }
    }
    true
}

/// Even-odd point-in-polygon test; points within `tol` of the boundary count
/// as inside.
pub fn point_in_polygon(poly: &[Vec2], p: Vec2, tol: f64) -> bool {
    let n = poly.len();
    for i in 0..n {
        if point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= tol {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let l2 = ab.norm2();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let s = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    p.dist(a + ab * s)
}
