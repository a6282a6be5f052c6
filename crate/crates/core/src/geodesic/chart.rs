//! Polar charts around a surface point and straight-line shooting.

use std::f64::consts::{PI, TAU};

use crate::error::{Result, TetraError};
use crate::geometry::tetrahedron::{neighbor_across, FACES};
use crate::geometry::vec::wrap_angle;
use crate::geometry::{FacePlacement, Isometry2, SurfacePoint, Tetrahedron, Vec2, Vec3};

/// One face of a chart, occupying the angular range `[start, start + width)`
/// around the chart origin.
#[derive(Debug, Clone, Copy)]
pub struct Sector {
    pub placement: FacePlacement,
    pub start: f64,
    pub width: f64,
}

/// The faces around a point unfolded into one plane, the point at the origin.
///
/// Around an interior or edge point the chart covers a full turn; around a
/// vertex it covers the total face angle there.
#[derive(Debug, Clone)]
pub struct Chart {
    pub origin: SurfacePoint,
    pub sectors: Vec<Sector>,
    pub total_angle: f64,
}

fn local_at_origin(t: &Tetrahedron, face: usize, x: &SurfacePoint) -> FacePlacement {
    let pl = FacePlacement::local(t, face);
    let o = pl.point(x.bary_in(face));
    pl.transformed(&Isometry2::new(0.0, -o))
}

fn rotate_to_zero(pl: FacePlacement, start: f64) -> FacePlacement {
    pl.transformed(&Isometry2::new(-start, Vec2::ZERO))
}

impl Chart {
    pub fn new(t: &Tetrahedron, x: &SurfacePoint) -> Self {
        if let Some(v) = x.as_vertex() {
            return Self::around_vertex(t, x, v);
        }
        if let Some((i, j)) = x.as_edge() {
            let faces = x.faces();
            let p1 = local_at_origin(t, faces[0], x);
            let start = edge_wedge_start(&p1, i, j);
            let p1 = rotate_to_zero(p1, start);
            let p2 = p1.neighbor(t, faces[1]).expect("faces share the edge");
            return Chart {
                origin: *x,
                sectors: vec![
                    Sector {
                        placement: p1,
                        start: 0.0,
                        width: PI,
                    },
                    Sector {
                        placement: p2,
                        start: PI,
                        width: PI,
                    },
                ],
                total_angle: TAU,
            };
        }
        Chart {
            origin: *x,
            sectors: vec![Sector {
                placement: local_at_origin(t, x.face, x),
                start: 0.0,
                width: TAU,
            }],
            total_angle: TAU,
        }
    }

    fn around_vertex(t: &Tetrahedron, x: &SurfacePoint, v: usize) -> Self {
        let mut sectors = Vec::with_capacity(3);
        let first = x.faces()[0];
        let pl = local_at_origin(t, first, x);
        let k = FACES[first].iter().position(|&u| u == v).expect("vertex on face");
        let start = pl.pts[(k + 1) % 3].angle();
        let mut pl = rotate_to_zero(pl, start);
        let mut angle = 0.0;
        for _ in 0..3 {
            let tri = FACES[pl.face];
            let k = tri.iter().position(|&u| u == v).expect("vertex on face");
            let width = t.face_angle(pl.face, v);
            sectors.push(Sector {
                placement: pl,
                start: angle,
                width,
            });
            angle += width;
            let far = tri[(k + 2) % 3];
            let next = neighbor_across(pl.face, v, far);
            pl = pl.neighbor(t, next).expect("adjacent faces");
        }
        Chart {
            origin: *x,
            sectors,
            total_angle: angle,
        }
    }

    pub fn sector_of_face(&self, face: usize) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.placement.face == face)
    }

    /// Canonical chart angle in `[0, total_angle)`.
    pub fn normalize(&self, angle: f64) -> f64 {
        let a = wrap_angle(angle);
        if self.total_angle >= TAU {
            return a;
        }
        if a >= self.total_angle {
            // directions outside a vertex chart snap to the nearer boundary
            if a - self.total_angle < TAU - a {
                if a - self.total_angle < 1e-9 {
                    0.0
                } else {
                    self.total_angle - 1e-15
                }
            } else {
                0.0
            }
        } else {
            a
        }
    }

    /// Chart angle of a direction `d` leaving the origin into `face`.
    pub fn angle_of(&self, t: &Tetrahedron, face: usize, d: Vec3) -> Result<f64> {
        let sector = self
            .sector_of_face(face)
            .ok_or_else(|| TetraError::InvalidPoint(format!("face {face} does not contain chart origin")))?;
        let w = sector.placement.map_direction(t, d);
        let mut a = w.angle();
        // move into the sector's range modulo a full turn
        while a < sector.start - 1e-9 {
            a += TAU;
        }
        while a > sector.start + sector.width + 1e-9 {
            a -= TAU;
        }
        Ok(self.normalize(a))
    }

    pub fn sector_at(&self, angle: f64) -> &Sector {
        let a = self.normalize(angle);
        self.sectors
            .iter()
            .find(|s| a >= s.start && a < s.start + s.width)
            .unwrap_or_else(|| self.sectors.last().expect("non-empty chart"))
    }

    /// Walks the straight geodesic leaving the origin at `angle` for
    /// `distance`.
    pub fn shoot(&self, t: &Tetrahedron, angle: f64, distance: f64) -> Shot {
        let a = self.normalize(angle);
        let sector = self.sector_at(a);
        shoot_from(t, sector.placement, Vec2::ZERO, Vec2::from_angle(a), distance, None)
    }
}

/// Start angle of the half-turn wedge of an edge point in placement `pl`.
fn edge_wedge_start(pl: &FacePlacement, i: usize, j: usize) -> f64 {
    let tri = FACES[pl.face];
    let ki = tri.iter().position(|&u| u == i).expect("edge vertex");
    let kj = tri.iter().position(|&u| u == j).expect("edge vertex");
    if kj == (ki + 1) % 3 {
        pl.pts[kj].angle()
    } else {
        pl.pts[ki].angle()
    }
}

/// End of a straight walk on the surface.
#[derive(Debug, Clone)]
pub struct Shot {
    pub point: SurfacePoint,
    pub faces: Vec<usize>,
}

fn shoot_from(
    t: &Tetrahedron,
    start: FacePlacement,
    origin: Vec2,
    dir: Vec2,
    distance: f64,
    entry: Option<(usize, usize)>,
) -> Shot {
    let scale = t.longest_edge();
    let eps = 1e-12 * scale;
    let mut pl = start;
    let mut o = origin;
    let mut rem = distance;
    let mut entry = entry;
    let mut faces = vec![pl.face];
    for _ in 0..256 {
        let tri = FACES[pl.face];
        let mut exit: Option<(f64, usize, usize)> = None;
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            if let Some((a, b)) = entry {
                if (a == u && b == v) || (a == v && b == u) {
                    continue;
                }
            }
            let (pa, pb) = (pl.pts[k], pl.pts[(k + 1) % 3]);
            let e = pb - pa;
            let denom = dir.cross(e);
            if denom.abs() < 1e-300 {
                continue;
            }
            let tau = (pa - o).cross(e) / denom;
            let s = (pa - o).cross(dir) / denom;
            if tau > eps && (-1e-9..=1.0 + 1e-9).contains(&s) && exit.map_or(true, |(b, _, _)| tau < b) {
                exit = Some((tau, u, v));
            }
        }
        match exit {
            Some((tau, u, v)) if tau < rem => {
                o = o + dir * tau;
                rem -= tau;
                let next = neighbor_across(pl.face, u, v);
                pl = pl.neighbor(t, next).expect("adjacent faces");
                entry = Some((u, v));
                faces.push(pl.face);
            }
            _ => {
                let end = o + dir * rem;
                let bary = pl.bary_of(end);
                return Shot {
                    point: SurfacePoint::in_face(pl.face, bary),
                    faces,
                };
            }
        }
    }
    let bary = pl.bary_of(o);
    Shot {
        point: SurfacePoint::in_face(pl.face, bary),
        faces,
    }
}
