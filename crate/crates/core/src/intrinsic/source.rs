//! Source unfolding: the surface cut along the cut locus of a point and laid
//! out around a single image of the point.

use serde::Serialize;

use super::cut_locus::{cut_locus, CutLocus};
use crate::config::Config;
use crate::error::Result;
use crate::geodesic::geodesic_distance;
use crate::geometry::planar::polygon_signed_area;
use crate::geometry::{SurfacePoint, Tetrahedron, Vec2};

/// The part of the layout reached through one gap between cuts.
#[derive(Debug, Clone, Serialize)]
pub struct SourceCell {
    pub site: usize,
    /// Boundary in layout coordinates, source image at the origin.
    pub polygon: Vec<Vec2>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceUnfolding {
    pub source: SurfacePoint,
    pub cells: Vec<SourceCell>,
    /// Cut-locus arcs in layout coordinates; each arc appears once per
    /// adjacent cell.
    pub cut_arcs: Vec<[Vec2; 2]>,
    #[serde(skip)]
    pub cut_locus: CutLocus,
}

/// Part of `poly` on the side of `s_i` of the bisector with `s_j`.
fn clip_half_plane(poly: &[Vec2], si: Vec2, sj: Vec2) -> Vec<Vec2> {
    let n = sj - si;
    let c = (sj.norm2() - si.norm2()) / 2.0;
    // inside when n·z <= c
    let side = |z: Vec2| c - n.dot(z);
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (fa, fb) = (side(a), side(b));
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            out.push(a.lerp(b, fa / (fa - fb)));
        }
    }
    out
}

pub fn source_unfold(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<SourceUnfolding> {
    let cl = cut_locus(t, x, cfg)?;
    let star = &cl.star;
    let k = star.len();
    let to_layout = |site: usize, z: Vec2| (z - star.sites[site]).rotate(-star.offsets[site]);

    let mut cells = Vec::with_capacity(k);
    for i in 0..k {
        let mut poly = star.polygon.clone();
        for j in (0..k).filter(|&j| j != i) {
            poly = clip_half_plane(&poly, star.sites[i], star.sites[j]);
        }
        let eps = 1e-12 * t.longest_edge();
        poly.dedup_by(|b, a| a.dist(*b) <= eps);
        if poly.len() > 1 && poly[0].dist(poly[poly.len() - 1]) <= eps {
            poly.pop();
        }
        cells.push(SourceCell {
            site: i,
            polygon: poly.into_iter().map(|z| to_layout(i, z)).collect(),
        });
    }
    let cut_arcs = cl
        .edges
        .iter()
        .flat_map(|e| {
            let (a, b) = (cl.nodes[e.nodes[0]].image, cl.nodes[e.nodes[1]].image);
            e.sites.map(|s| [to_layout(s, a), to_layout(s, b)])
        })
        .collect();

    Ok(SourceUnfolding {
        source: *x,
        cells,
        cut_arcs,
        cut_locus: cl,
    })
}

impl SourceUnfolding {
    pub fn area(&self) -> f64 {
        self.cells.iter().map(|c| polygon_signed_area(&c.polygon).abs()).sum()
    }

    /// Largest distance from the source image; equals `Rad_x`.
    pub fn radial_extent(&self) -> f64 {
        self.cells
            .iter()
            .flat_map(|c| c.polygon.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Surface point at layout position `z`.
    pub fn to_surface(&self, t: &Tetrahedron, z: Vec2) -> SurfacePoint {
        let r = z.norm();
        if r == 0.0 {
            return self.source;
        }
        let star = &self.cut_locus.star;
        self.cut_locus.star.chart.shoot(t, star.chart.normalize(z.angle()), r).point
    }

    /// Layout position of surface point `y`.
    pub fn layout_point(&self, t: &Tetrahedron, y: &SurfacePoint, cfg: &Config) -> Result<Vec2> {
        let (r, path) = geodesic_distance(t, &self.source, y, cfg)?;
        if r == 0.0 {
            return Ok(Vec2::ZERO);
        }
        let star = &self.cut_locus.star;
        let (face, dir) = path.start_direction();
        let mut psi = star.chart.angle_of(t, face, dir)?;
        let k = star.len();
        if psi >= star.cut_angles[k - 1] {
            psi -= star.chart.total_angle;
        }
        Ok(Vec2::from_angle(psi) * r)
    }
}
