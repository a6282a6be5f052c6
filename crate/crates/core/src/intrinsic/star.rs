//! Star unfolding: the surface cut along the shortest paths from a source
//! point to every vertex, laid flat.
//!
//! Boundary order is `s_0, w_0, s_1, w_1, ...` where `w_i` is the image of
//! the vertex reached by the `i`-th cut (cuts sorted by chart angle) and `s_i`
//! is the source copy whose wedge lies between cuts `i - 1` and `i`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Result, TetraError};
use crate::geodesic::{all_geodesic_segments, Chart, GeodesicPath};
use crate::geometry::planar::{polygon_is_simple, polygon_signed_area};
use crate::geometry::{SurfacePoint, Tetrahedron, Vec2};

/// Relative length window inside which two cut candidates count as tied.
pub const CUT_TIE_SLACK: f64 = 1e-10;
/// Absolute part of the tie window, relative to the longest edge.
pub const CUT_TIE_ABS: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct StarUnfolding {
    pub source: SurfacePoint,
    /// Shortest paths from the source to each vertex, in chart-angle order.
    pub cut_paths: Vec<GeodesicPath>,
    /// Vertex reached by each cut.
    pub cut_vertices: Vec<usize>,
    /// Chart angle at which each cut leaves the source.
    pub cut_angles: Vec<f64>,
    /// Source images `s_i`.
    pub sites: Vec<Vec2>,
    /// Vertex images `w_i`.
    pub leaves: Vec<Vec2>,
    /// Rotation taking chart angles in wedge `i` to polygon angles at `s_i`.
    pub offsets: Vec<f64>,
    /// `s_0, w_0, s_1, w_1, ...`
    pub polygon: Vec<Vec2>,
    #[serde(skip)]
    pub chart: Chart,
}

/// Shortest path to every vertex other than `x`; `AmbiguousCut` when one of
/// them is not unique, unless `lenient`, in which case the shortest candidate
/// is taken.
fn cut_paths(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config, lenient: bool) -> Result<Vec<GeodesicPath>> {
    let own = x.as_vertex();
    let mut out = Vec::with_capacity(4);
    for v in (0..4).filter(|&v| Some(v) != own) {
        let mut paths = all_geodesic_segments(t, x, &SurfacePoint::vertex(v), CUT_TIE_SLACK, cfg)?;
        paths.sort_by(|a, b| a.length.total_cmp(&b.length));
        let limit = paths[0].length * (1.0 + CUT_TIE_SLACK) + CUT_TIE_ABS * t.longest_edge();
        if !lenient && paths.iter().filter(|p| p.length <= limit).count() > 1 {
            return Err(TetraError::AmbiguousCut { vertex: v });
        }
        out.push(paths.swap_remove(0));
    }
    Ok(out)
}

pub fn star_unfold(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<StarUnfolding> {
    build(t, x, cfg, false)
}

/// Star unfolding that resolves near-ties between cut candidates by length
/// alone.
pub(crate) fn star_unfold_lenient(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<StarUnfolding> {
    build(t, x, cfg, true)
}

fn build(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config, lenient: bool) -> Result<StarUnfolding> {
    let paths = cut_paths(t, x, cfg, lenient)?;
    let chart = Chart::new(t, x);
    let mut cuts: Vec<(f64, GeodesicPath)> = paths
        .into_iter()
        .map(|p| {
            let (face, dir) = p.start_direction();
            chart.angle_of(t, face, dir).map(|a| (a, p))
        })
        .collect::<Result<_>>()?;
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));

    let k = cuts.len();
    let angles: Vec<f64> = cuts.iter().map(|c| c.0).collect();
    let lengths: Vec<f64> = cuts.iter().map(|c| c.1.length).collect();
    let vertices: Vec<usize> = cuts
        .iter()
        .map(|c| c.1.target.as_vertex().expect("cut ends at a vertex"))
        .collect();
    // angular gap preceding cut i
    let gaps: Vec<f64> = (0..k)
        .map(|i| {
            if i == 0 {
                chart.total_angle - angles[k - 1] + angles[0]
            } else {
                angles[i] - angles[i - 1]
            }
        })
        .collect();

    let mut sites = Vec::with_capacity(k);
    let mut leaves = Vec::with_capacity(k);
    let mut s = Vec2::ZERO;
    let mut w = Vec2::from_angle(angles[0]) * lengths[0];
    sites.push(s);
    leaves.push(w);
    for i in 1..k {
        let theta = t.face_angle_sum(vertices[i - 1])?;
        s = w + (s - w).rotate(theta);
        w = s + (w - s).normalized().rotate(gaps[i]) * lengths[i];
        sites.push(s);
        leaves.push(w);
    }
    let offsets: Vec<f64> = (0..k)
        .map(|i| if i == 0 { 0.0 } else { (leaves[i] - sites[i]).angle() - angles[i] })
        .collect();
    let polygon = sites.iter().zip(&leaves).flat_map(|(&s, &w)| [s, w]).collect();

    Ok(StarUnfolding {
        source: *x,
        cut_paths: cuts.into_iter().map(|c| c.1).collect(),
        cut_vertices: vertices,
        cut_angles: angles,
        sites,
        leaves,
        offsets,
        polygon,
        chart,
    })
}

impl StarUnfolding {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Unsigned polygon area.
    pub fn area(&self) -> f64 {
        polygon_signed_area(&self.polygon).abs()
    }

    pub fn is_simple(&self, tol: f64) -> bool {
        polygon_is_simple(&self.polygon, tol)
    }

    /// Mismatch between the last rotation step and the first source image.
    pub fn closure_error(&self, t: &Tetrahedron) -> f64 {
        let k = self.len();
        let w = self.leaves[k - 1];
        let theta = t.face_angle_sum(self.cut_vertices[k - 1]).expect("vertex index");
        let s = w + (self.sites[k - 1] - w).rotate(theta);
        s.dist(self.sites[0])
    }

    /// Boundary edges glued to each other: `(s_i w_i, w_i s_{i+1})` for every
    /// cut, as index pairs into `polygon`.
    pub fn gluing_pairs(&self) -> Vec<([usize; 2], [usize; 2])> {
        let n = self.polygon.len();
        (0..self.len())
            .map(|i| ([2 * i, 2 * i + 1], [2 * i + 1, (2 * i + 2) % n]))
            .collect()
    }

    /// Index of the wedge containing chart angle `psi`.
    pub fn wedge_of(&self, psi: f64) -> usize {
        let psi = self.chart.normalize(psi);
        let k = self.len();
        (1..k)
            .find(|&i| psi >= self.cut_angles[i - 1] && psi < self.cut_angles[i])
            .unwrap_or(0)
    }

    /// Polygon image of the point reached from the source at chart angle
    /// `psi` and distance `r` along a shortest path.
    pub fn image(&self, psi: f64, r: f64) -> Vec2 {
        let psi = self.chart.normalize(psi);
        let i = self.wedge_of(psi);
        // wedge 0 wraps through chart angle 0
        let unwrapped = if i == 0 && psi >= self.cut_angles[self.len() - 1] {
            psi - self.chart.total_angle
        } else {
            psi
        };
        self.sites[i] + Vec2::from_angle(unwrapped + self.offsets[i]) * r
    }

    /// Chart angle of the direction `polygon_angle` leaving site `site`.
    pub fn chart_angle(&self, site: usize, polygon_angle: f64) -> f64 {
        let k = self.len();
        let total = self.chart.total_angle;
        let (lo, hi) = if site == 0 {
            (self.cut_angles[k - 1] - total, self.cut_angles[0])
        } else {
            (self.cut_angles[site - 1], self.cut_angles[site])
        };
        let center = 0.5 * (lo + hi);
        let mut psi = polygon_angle - self.offsets[site];
        psi -= TAU * ((psi - center) / TAU).round();
        if psi < 0.0 {
            psi += total;
        }
        self.chart.normalize(psi)
    }

    /// Nearest source image to `z`, ties to the lower index.
    pub fn nearest_site(&self, z: Vec2) -> usize {
        (0..self.len())
            .min_by(|&a, &b| z.dist(self.sites[a]).total_cmp(&z.dist(self.sites[b])))
            .expect("non-empty")
    }

    /// Surface point at polygon position `z`, reached from site `site`.
    pub fn to_surface_from(&self, t: &Tetrahedron, z: Vec2, site: usize) -> SurfacePoint {
        let d = z - self.sites[site];
        let r = d.norm();
        if r == 0.0 {
            return self.source;
        }
        self.chart.shoot(t, self.chart_angle(site, d.angle()), r).point
    }

    /// Surface point at polygon position `z`.
    pub fn to_surface(&self, t: &Tetrahedron, z: Vec2) -> SurfacePoint {
        self.to_surface_from(t, z, self.nearest_site(z))
    }
}


#[cfg(test)]
impl StarUnfolding {
    fn interior_angle_at_site(&self, i: usize) -> f64 {
        let k = self.len();
        let prev = self.leaves[(i + k - 1) % k] - self.sites[i];
        let next = self.leaves[i] - self.sites[i];
        prev.cross(next).abs().atan2(prev.dot(next))
    }
}
