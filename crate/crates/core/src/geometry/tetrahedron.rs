use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::planar::angle_at;
use super::vec::Vec3;
use crate::config::ToleranceConfig;
use crate::error::{Result, TetraError};

/// Face `f` is the face opposite vertex `f`; triples are ordered so that the
/// normal `(b - a) × (c - a)` points outward once the tetrahedron is
/// positively oriented.
pub const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

/// Edges as sorted vertex pairs, indexed 0..6.
pub const EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Opposite edge pairs, as indices into [`EDGES`]: (01,23), (02,13), (03,12).
pub const OPPOSITE_EDGES: [(usize, usize); 3] = [(0, 5), (1, 4), (2, 3)];

/// Index into [`EDGES`] of the edge joining `i` and `j`.
pub fn edge_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge between {i} and {j}"),
    }
}

/// The two faces containing edge `{i, j}`, lowest first.
pub fn faces_of_edge(i: usize, j: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut n = 0;
    for k in 0..4 {
        if k != i && k != j {
            out[n] = k;
            n += 1;
        }
    }
    out
}

/// Face adjacent to `face` across its edge `{i, j}`.
pub fn neighbor_across(face: usize, i: usize, j: usize) -> usize {
    (0..4)
        .find(|&k| k != face && k != i && k != j)
        .expect("edge must belong to face")
}

/// Vertices shared by two distinct faces, in `a`'s cyclic order.
pub fn shared_edge(a: usize, b: usize) -> Option<(usize, usize)> {
    if a == b || a > 3 || b > 3 {
        return None;
    }
    let tri = FACES[a];
    for k in 0..3 {
        let (u, v) = (tri[k], tri[(k + 1) % 3]);
        if u != b && v != b {
            return Some((u, v));
        }
    }
    None
}

/// A validated, positively oriented tetrahedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TetrahedronJson", try_from = "TetrahedronJson")]
pub struct Tetrahedron {
    vertices: [Vec3; 4],
    edge_lengths: [f64; 6],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TetrahedronJson {
    pub vertices: [[f64; 3]; 4],
}

impl From<Tetrahedron> for TetrahedronJson {
    fn from(t: Tetrahedron) -> Self {
        TetrahedronJson {
            vertices: t.vertices.map(Into::into),
        }
    }
}

impl TryFrom<TetrahedronJson> for Tetrahedron {
    type Error = TetraError;
    fn try_from(j: TetrahedronJson) -> Result<Self> {
        validate_tetrahedron(j.vertices.map(Vec3::from), &ToleranceConfig::default())
    }
}

fn signed_volume(v: &[Vec3; 4]) -> f64 {
    (v[1] - v[0]).dot((v[2] - v[0]).cross(v[3] - v[0])) / 6.0
}

/// Checks non-degeneracy and fixes orientation.
///
/// A negatively oriented input has vertices 2 and 3 swapped, so an input and
/// its mirror-labelled copy produce the same tetrahedron.
pub fn validate_tetrahedron(vertices: [Vec3; 4], cfg: &ToleranceConfig) -> Result<Tetrahedron> {
    if !vertices.iter().all(|v| v.is_finite()) {
        return Err(TetraError::NonFinite);
    }
    let mut v = vertices;
    let mut vol = signed_volume(&v);
    if vol < 0.0 {
        v.swap(2, 3);
        vol = -vol;
    }
    let edge_lengths = EDGES.map(|[i, j]| v[i].dist(v[j]));
    let longest = edge_lengths.iter().cloned().fold(0.0, f64::max);
    let floor = cfg.quality_floor * longest.powi(3);
    if !(vol >= floor) || longest == 0.0 {
        return Err(TetraError::DegenerateInput { volume: vol, floor });
    }
    Ok(Tetrahedron {
        vertices: v,
        edge_lengths,
    })
}

impl Tetrahedron {
    pub fn new(vertices: [Vec3; 4]) -> Result<Self> {
        validate_tetrahedron(vertices, &ToleranceConfig::default())
    }

    pub fn vertices(&self) -> &[Vec3; 4] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vec3 {
        self.vertices[i]
    }

    pub fn edge_lengths(&self) -> &[f64; 6] {
        &self.edge_lengths
    }

    pub fn edge_length(&self, i: usize, j: usize) -> f64 {
        self.edge_lengths[edge_index(i, j)]
    }

    pub fn longest_edge(&self) -> f64 {
        self.edge_lengths.iter().cloned().fold(0.0, f64::max)
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edge_lengths.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        signed_volume(&self.vertices)
    }

    pub fn face_vertices(&self, f: usize) -> [Vec3; 3] {
        FACES[f].map(|i| self.vertices[i])
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.face_vertices(f);
        (b - a).cross(c - a).norm() / 2.0
    }

    pub fn surface_area(&self) -> f64 {
        (0..4).map(|f| self.face_area(f)).sum()
    }

    pub fn face_normal(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_vertices(f);
        (b - a).cross(c - a).normalized()
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_vertices(f);
        (a + b + c) / 3.0
    }

    /// Interior angle of face `f` at vertex `v`.
    pub fn face_angle(&self, f: usize, v: usize) -> f64 {
        let tri = FACES[f];
        let k = tri.iter().position(|&u| u == v).expect("vertex not on face");
        let a = self.vertices[tri[k]];
        let b = self.vertices[tri[(k + 1) % 3]];
        let c = self.vertices[tri[(k + 2) % 3]];
        angle_at(a, b, c)
    }

    /// Total face angle around vertex `v`.
    pub fn face_angle_sum(&self, v: usize) -> Result<f64> {
        if v > 3 {
            return Err(TetraError::InvalidIndex(v));
        }
        Ok((0..4).filter(|&f| f != v).map(|f| self.face_angle(f, v)).sum())
    }

    /// Curvature at vertex `v`: `2π` minus its total face angle.
    pub fn angle_defect(&self, v: usize) -> f64 {
        TAU - self.face_angle_sum(v).expect("index in range")
    }

    /// Sum of the four vertex defects; `4π` for every valid tetrahedron.
    pub fn total_angle_defect(&self) -> f64 {
        (0..4).map(|v| self.angle_defect(v)).sum()
    }

    /// True when the three opposite-edge pairs agree within relative `tol`.
    pub fn is_isosceles(&self, tol: f64) -> bool {
        let scale = self.longest_edge();
        OPPOSITE_EDGES
            .iter()
            .all(|&(a, b)| (self.edge_lengths[a] - self.edge_lengths[b]).abs() <= tol * scale)
    }

    /// Longest edge as `(i, j)`, ties broken by edge index.
    pub fn longest_edge_pair(&self) -> (usize, usize) {
        let mut best = 0;
        for e in 1..6 {
            if self.edge_lengths[e] > self.edge_lengths[best] {
                best = e;
            }
        }
        (EDGES[best][0], EDGES[best][1])
    }

    /// Applies `f` to every vertex and revalidates.
    pub fn map_vertices(&self, f: impl Fn(Vec3) -> Vec3) -> Result<Tetrahedron> {
        Tetrahedron::new(self.vertices.map(f))
    }

    pub fn scaled(&self, s: f64) -> Result<Tetrahedron> {
        self.map_vertices(|v| v * s)
    }
}

/// Sum of the face angles at `v`, in `(0, 2π)`.
pub fn face_angle_sum(t: &Tetrahedron, v: usize) -> Result<f64> {
    t.face_angle_sum(v)
}

pub fn total_angle_defect(t: &Tetrahedron) -> f64 {
    t.total_angle_defect()
}

pub fn is_isosceles(t: &Tetrahedron, tol: f64) -> bool {
    t.is_isosceles(tol)
}
