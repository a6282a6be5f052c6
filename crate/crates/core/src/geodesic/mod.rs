//! Shortest paths on the tetrahedron surface.
//!
//! The exact engine searches face sequences with a best-first
//! branch-and-bound; [`mesh_oracle_distance`] is a coarse independent check.

mod chart;
mod oracle;
mod search;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;
use crate::geometry::tetrahedron::edge_index;
use crate::geometry::{SurfacePoint, Tetrahedron, Vec3};

pub use chart::{Chart, Sector, Shot};
pub use oracle::mesh_oracle_distance;
pub use search::{SearchStats, DIAMETER_RATIO_CAP};


/// Crossing of edge `[i, j]` (`i < j`) at `(1 - t) · v_i + t · v_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub edge: [usize; 2],
    pub t: f64,
}

impl Crossing {
    pub fn point(&self) -> SurfacePoint {
        SurfacePoint::on_edge(self.edge[0], self.edge[1], self.t)
    }
}

/// A shortest path, straight in the unfolding of the faces it crosses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub length: f64,
    pub crossings: Vec<Crossing>,
    pub source: SurfacePoint,
    pub target: SurfacePoint,
    /// Faces visited, in order.
    #[serde(skip)]
    pub faces: Vec<usize>,
    /// Unit direction leaving the source, in the plane of `faces[0]`.
    #[serde(skip)]
    pub start_dir: Vec3,
    /// Unit direction arriving at the target, in the plane of the last face.
    #[serde(skip)]
    pub end_dir: Vec3,
}

impl GeodesicPath {
    /// `(edge index, t rounded to 1e-7)` per crossing.
    pub fn signature(&self) -> Vec<(usize, i64)> {
        self.crossings
            .iter()
            .map(|c| (edge_index(c.edge[0], c.edge[1]), (c.t * 1e7).round() as i64))
            .collect()
    }

    /// Source, crossing points and target in 3D.
    pub fn polyline(&self, t: &Tetrahedron) -> Vec<Vec3> {
        let mut pts = Vec::with_capacity(self.crossings.len() + 2);
        pts.push(self.source.position(t));
        pts.extend(self.crossings.iter().map(|c| c.point().position(t)));
        pts.push(self.target.position(t));
        pts
    }

    /// Face the path leaves the source through, with the unit direction.
    pub fn start_direction(&self) -> (usize, Vec3) {
        (self.faces[0], self.start_dir)
    }

    /// Face the path arrives at the target through, with the unit direction.
    pub fn end_direction(&self) -> (usize, Vec3) {
        (*self.faces.last().expect("non-empty"), self.end_dir)
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> GeodesicPath {
        GeodesicPath {
            length: self.length,
            crossings: self.crossings.iter().rev().copied().collect(),
            source: self.target,
            target: self.source,
            faces: self.faces.iter().rev().copied().collect(),
            start_dir: -self.end_dir,
            end_dir: -self.start_dir,
        }
    }
}

/// Intrinsic distance between `p` and `q` with a shortest path realizing it.
pub fn geodesic_distance(t: &Tetrahedron, p: &SurfacePoint, q: &SurfacePoint, cfg: &Config) -> Result<(f64, GeodesicPath)> {
    let (paths, stats) = search::near_shortest_paths(t, p, q, 0.0, cfg)?;
    log::trace!("geodesic search expanded {} nodes", stats.expanded);
    let path = paths.into_iter().next().expect("search returns a path");
    Ok((path.length, path))
}

/// Every combinatorially distinct path of length at most
/// `(1 + slack) · ρ(p, q)`, shortest first.
pub fn all_geodesic_segments(
    t: &Tetrahedron,
    p: &SurfacePoint,
    q: &SurfacePoint,
    slack: f64,
    cfg: &Config,
) -> Result<Vec<GeodesicPath>> {
    if !(slack >= 0.0 && slack.is_finite()) {
        return Err(crate::error::TetraError::InvalidParameter(format!("slack {slack}")));
    }
    let (paths, _) = search::near_shortest_paths(t, p, q, slack, cfg)?;
    Ok(paths)
}

/// Same as [`geodesic_distance`] with search statistics.
pub fn geodesic_distance_with_stats(
    t: &Tetrahedron,
    p: &SurfacePoint,
    q: &SurfacePoint,
    cfg: &Config,
) -> Result<(GeodesicPath, SearchStats)> {
    let (paths, stats) = search::near_shortest_paths(t, p, q, 0.0, cfg)?;
    Ok((paths.into_iter().next().expect("search returns a path"), stats))
}
