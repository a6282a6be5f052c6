use serde::{Deserialize, Serialize};

use super::tetrahedron::{Tetrahedron, FACES};
use super::vec::Vec3;
use crate::error::{Result, TetraError};

/// Barycentric weights below this are snapped to zero.
pub const SNAP_TOL: f64 = 1e-12;

/// A point of the surface: a face and barycentric coordinates over
/// `FACES[face]`.
///
/// Points on an edge or at a vertex always live on the lowest-index face
/// containing them, so two addresses of the same point compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSurfacePoint")]
pub struct SurfacePoint {
    pub face: usize,
    pub bary: [f64; 3],
}

#[derive(Deserialize)]
struct RawSurfacePoint {
    face: usize,
    bary: [f64; 3],
}

impl TryFrom<RawSurfacePoint> for SurfacePoint {
    type Error = TetraError;
    fn try_from(r: RawSurfacePoint) -> Result<Self> {
        SurfacePoint::new(r.face, r.bary, 1e-9)
    }
}

/// Parses `v:<vertex>` or `f:<face>:<b0>,<b1>,<b2>`.
impl std::str::FromStr for SurfacePoint {
    type Err = TetraError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || TetraError::InvalidPoint(format!("cannot parse `{s}`; expected v:<i> or f:<i>:<b0>,<b1>,<b2>"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let index = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["v", v] => {
                let v = index(v)?;
                if v > 3 {
                    return Err(TetraError::InvalidIndex(v));
                }
                Ok(SurfacePoint::vertex(v))
            }
            ["f", f, b] => {
                let coords = b
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<f64>>>()?;
                let bary: [f64; 3] = coords.try_into().map_err(|_| bad())?;
                SurfacePoint::new(index(f)?, bary, 1e-9)
            }
            _ => Err(bad()),
        }
    }
}

impl SurfacePoint {
    /// Validates and canonicalizes; components may undershoot zero by `tol`
    /// and the sum may miss one by `tol`.
    pub fn new(face: usize, bary: [f64; 3], tol: f64) -> Result<Self> {
        if face > 3 {
            return Err(TetraError::InvalidIndex(face));
        }
        if !bary.iter().all(|b| b.is_finite()) {
            return Err(TetraError::InvalidPoint("non-finite barycentric coordinate".into()));
        }
        if bary.iter().any(|&b| b < -tol) {
            return Err(TetraError::InvalidPoint(format!("negative coordinate in {bary:?}")));
        }
        let sum: f64 = bary.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(TetraError::InvalidPoint(format!("coordinates sum to {sum}")));
        }
        Ok(Self::in_face(face, bary))
    }

    /// Canonical point from (possibly slightly negative) face coordinates.
    pub fn in_face(face: usize, bary: [f64; 3]) -> Self {
        let mut w = [0.0; 4];
        for k in 0..3 {
            w[FACES[face][k]] = bary[k];
        }
        Self::from_weights(w)
    }

    pub fn vertex(v: usize) -> Self {
        let mut w = [0.0; 4];
        w[v] = 1.0;
        Self::from_weights(w)
    }

    /// `(1 - t) · v_i + t · v_j`.
    pub fn on_edge(i: usize, j: usize, t: f64) -> Self {
        let mut w = [0.0; 4];
        w[i] = 1.0 - t;
        w[j] = t;
        Self::from_weights(w)
    }

    /// Canonical point from weights over the four vertices. At least one
    /// weight must be (near) zero; the smallest is forced to zero if needed.
    pub fn from_weights(weights: [f64; 4]) -> Self {
        let mut w = weights.map(|x| if x.is_finite() { x.max(0.0) } else { 0.0 });
        if w.iter().all(|&x| x > 0.0) {
            let k = (0..4)
                .min_by(|&a, &b| w[a].total_cmp(&w[b]))
                .expect("four weights");
            w[k] = 0.0;
        }
        let sum: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= sum;
            if *x < SNAP_TOL {
                *x = 0.0;
            }
        }
        let sum: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= sum;
        }
        let face = (0..4).find(|&f| w[f] == 0.0).expect("one zero weight");
        SurfacePoint {
            face,
            bary: FACES[face].map(|v| w[v]),
        }
    }

    pub fn weights(&self) -> [f64; 4] {
        let mut w = [0.0; 4];
        for k in 0..3 {
            w[FACES[self.face][k]] = self.bary[k];
        }
        w
    }

    /// Every face containing the point, ascending.
    pub fn faces(&self) -> Vec<usize> {
        let w = self.weights();
        (0..4).filter(|&f| w[f] == 0.0).collect()
    }

    pub fn contains_face(&self, f: usize) -> bool {
        self.weights()[f] == 0.0
    }

    /// Barycentric coordinates over `FACES[face]`; `face` must contain the
    /// point.
    pub fn bary_in(&self, face: usize) -> [f64; 3] {
        let w = self.weights();
        debug_assert_eq!(w[face], 0.0);
        FACES[face].map(|v| w[v])
    }

    pub fn as_vertex(&self) -> Option<usize> {
        let w = self.weights();
        (0..4).find(|&v| w[v] == 1.0)
    }

    pub fn as_edge(&self) -> Option<(usize, usize)> {
        let w = self.weights();
        let s: Vec<usize> = (0..4).filter(|&v| w[v] > 0.0).collect();
        (s.len() == 2).then(|| (s[0], s[1]))
    }

    /// Whether the point lies on the closed edge `{i, j}`.
    pub fn on_closed_edge(&self, i: usize, j: usize) -> bool {
        let w = self.weights();
        (0..4).all(|v| v == i || v == j || w[v] == 0.0)
    }

    pub fn position(&self, t: &Tetrahedron) -> Vec3 {
        let w = self.weights();
        (0..4).fold(Vec3::ZERO, |acc, v| acc + t.vertex(v) * w[v])
    }

    /// Closest face point to `p`, which should lie on the plane of `face`.
    pub fn from_position(t: &Tetrahedron, face: usize, p: Vec3) -> Self {
        let [a, b, c] = t.face_vertices(face);
        let e1 = b - a;
        let e2 = c - a;
        let d = p - a;
        let (g11, g12, g22) = (e1.dot(e1), e1.dot(e2), e2.dot(e2));
        let (r1, r2) = (d.dot(e1), d.dot(e2));
        let det = g11 * g22 - g12 * g12;
        let v = (r1 * g22 - r2 * g12) / det;
        let w = (r2 * g11 - r1 * g12) / det;
        Self::in_face(face, [1.0 - v - w, v, w])
    }

    /// Deterministic ordering key (weights rounded to 1e-9).
    pub fn key(&self) -> [i64; 4] {
        self.weights().map(|w| (w * 1e9).round() as i64)
    }
}
