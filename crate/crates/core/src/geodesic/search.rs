//! Best-first branch-and-bound over unfolded face sequences.
//!
//! Each search node is a face laid out in the plane together with the
//! window: the part of its entry edge that the source image sees through all
//! previously crossed edges. The distance from the source image to the
//! window is an admissible lower bound for every path continuing through
//! the node.
//!
//! A shortest path meets every face in one connected segment: two visits to
//! the same face could be replaced by the chord between them inside the face.
//! Sequences that re-enter a face are therefore never expanded.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::config::Config;
use crate::error::{Result, TetraError};
use crate::geometry::planar::point_segment_distance;
use crate::geometry::tetrahedron::{edge_index, neighbor_across, FACES};
use crate::geometry::{FacePlacement, SurfacePoint, Tetrahedron, Vec2, Vec3};

use super::{Crossing, GeodesicPath};

/// Upper bound on `ρ / diam` for every tetrahedron.
pub const DIAMETER_RATIO_CAP: f64 = 1.154_700_538_379_251_5; // 2/√3

const SIN_TOL: f64 = 1e-12;
const MIN_WINDOW: f64 = 1e-13;

#[derive(Debug, Clone)]
struct Node {
    placement: FacePlacement,
    entry: Option<(usize, usize)>,
    window: [Vec2; 2],
    source: Vec2,
    parent: Option<usize>,
    depth: usize,
    visited: u8,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    length: f64,
    node: usize,
    target: Vec2,
}

#[derive(Debug, PartialEq)]
struct Queued {
    bound: f64,
    node: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Search statistics, exposed for diagnostics.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    pub expanded: usize,
    pub depth_cutoffs: usize,
}

/// Every path whose length is within `(1 + slack)` of the shortest, sorted by
/// length then crossing signature, deduplicated by signature.
pub(crate) fn near_shortest_paths(
    t: &Tetrahedron,
    p: &SurfacePoint,
    q: &SurfacePoint,
    slack: f64,
    cfg: &Config,
) -> Result<(Vec<GeodesicPath>, SearchStats)> {
    if p == q {
        let path = GeodesicPath {
            length: 0.0,
            crossings: Vec::new(),
            source: *p,
            target: *q,
            faces: vec![p.face],
            start_dir: Vec3::ZERO,
            end_dir: Vec3::ZERO,
        };
        return Ok((vec![path], SearchStats::default()));
    }
    let scale = t.longest_edge();
    let abs_tie = cfg.tolerances.geom_tol * scale;
    let cap = DIAMETER_RATIO_CAP * scale * (1.0 + 1e-9) + abs_tie;
    let limit = |best: f64| -> f64 {
        if best.is_finite() {
            (best * (1.0 + slack) + abs_tie).min(cap)
        } else {
            cap
        }
    };

    let forbidden = |i: usize, j: usize| p.on_closed_edge(i, j) || q.on_closed_edge(i, j);
    let target_faces = q.faces();

    let mut nodes: Vec<Node> = Vec::new();
    let mut heap = BinaryHeap::new();
    for f in p.faces() {
        let placement = FacePlacement::local(t, f);
        let source = placement.point(p.bary_in(f));
        nodes.push(Node {
            placement,
            entry: None,
            window: [source, source],
            source,
            parent: None,
            depth: 1,
            visited: 1 << f,
        });
        heap.push(Queued {
            bound: 0.0,
            node: nodes.len() - 1,
        });
    }

    let mut best = f64::INFINITY;
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut stats = SearchStats::default();
    let mut cutoff_bound = f64::INFINITY;

    while let Some(Queued { bound, node: idx }) = heap.pop() {
        if bound > limit(best) {
            break;
        }
        stats.expanded += 1;
        let node = nodes[idx].clone();
        let face = node.placement.face;

        if target_faces.contains(&face) {
            let target = node.placement.point(q.bary_in(face));
            if visible(&node, target) {
                let length = node.source.dist(target);
                if length <= limit(best) {
                    best = best.min(length);
                    candidates.push(Candidate {
                        length,
                        node: idx,
                        target,
                    });
                }
            }
        }

        let tri = FACES[face];
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            if let Some((a, b)) = node.entry {
                if (a == u && b == v) || (a == v && b == u) {
                    continue;
                }
            }
            if forbidden(u, v) {
                continue;
            }
            let next = neighbor_across(face, u, v);
            if node.visited & (1 << next) != 0 {
                continue;
            }
            let (pu, pv) = (node.placement.pts[k], node.placement.pts[(k + 1) % 3]);
            let Some((lo, hi)) = clip_window(&node, pu, pv) else {
                continue;
            };
            let window = [pu.lerp(pv, lo), pu.lerp(pv, hi)];
            let child_bound = point_segment_distance(node.source, window[0], window[1]);
            if child_bound > limit(best) {
                continue;
            }
            if node.depth >= cfg.max_faces {
                stats.depth_cutoffs += 1;
                cutoff_bound = cutoff_bound.min(child_bound);
                continue;
            }
            let placement = node.placement.neighbor(t, next)?;
            nodes.push(Node {
                placement,
                entry: Some((u, v)),
                window,
                source: node.source,
                parent: Some(idx),
                depth: node.depth + 1,
                visited: node.visited | (1 << next),
            });
            heap.push(Queued {
                bound: child_bound,
                node: nodes.len() - 1,
            });
        }
    }

    if cutoff_bound <= limit(best) && (best.is_infinite() || cutoff_bound < best) {
        log::warn!(
            "geodesic search exhausted: max_faces={} cut bound {cutoff_bound:.6e} best {best:.6e}",
            cfg.max_faces
        );
        return Err(TetraError::SearchExhausted {
            max_faces: cfg.max_faces,
        });
    }
    if candidates.is_empty() {
        return Err(TetraError::SearchExhausted {
            max_faces: cfg.max_faces,
        });
    }

    let bound = limit(best);
    let mut paths: Vec<(GeodesicPath, Vec<(usize, i64)>)> = candidates
        .iter()
        .filter(|c| c.length <= bound)
        .map(|c| {
            let path = build_path(t, &nodes, c, p, q);
            let sig = path.signature();
            (path, sig)
        })
        .collect();
    paths.sort_by(|a, b| a.0.length.total_cmp(&b.0.length));
    // the witness among equal-length paths is the smallest signature
    let ties = paths.iter().take_while(|(p, _)| p.length <= best + abs_tie).count();
    paths[..ties].sort_by(|a, b| a.1.cmp(&b.1));
    let mut out: Vec<(GeodesicPath, Vec<(usize, i64)>)> = Vec::new();
    for (path, sig) in paths {
        if !out.iter().any(|(_, s)| *s == sig) {
            out.push((path, sig));
        }
    }
    Ok((out.into_iter().map(|(p, _)| p).collect(), stats))
}

fn visible(node: &Node, target: Vec2) -> bool {
    if node.entry.is_none() {
        return true;
    }
    let (dl, dr) = cone(node);
    let d = target - node.source;
    let n = d.norm();
    dl.cross(d) >= -SIN_TOL * dl.norm() * n && d.cross(dr) >= -SIN_TOL * dr.norm() * n
}

fn cone(node: &Node) -> (Vec2, Vec2) {
    let dl = node.window[0] - node.source;
    let dr = node.window[1] - node.source;
    if dl.cross(dr) < 0.0 {
        (dr, dl)
    } else {
        (dl, dr)
    }
}

/// Parameter interval of segment `a`–`b` seen through the node's window.
fn clip_window(node: &Node, a: Vec2, b: Vec2) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if node.entry.is_some() {
        let (dl, dr) = cone(node);
        let apex = node.source;
        let constraints = [
            (dl.cross(a - apex), dl.cross(b - apex)),
            ((a - apex).cross(dr), (b - apex).cross(dr)),
        ];
        for (g0, g1) in constraints {
            if g0 >= 0.0 && g1 >= 0.0 {
                continue;
            }
            if g0 < 0.0 && g1 < 0.0 {
                return None;
            }
            let r = g0 / (g0 - g1);
            if g0 < 0.0 {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
    }
    (hi - lo > MIN_WINDOW).then_some((lo, hi))
}

fn build_path(t: &Tetrahedron, nodes: &[Node], c: &Candidate, p: &SurfacePoint, q: &SurfacePoint) -> GeodesicPath {
    let mut chain = Vec::new();
    let mut cur = Some(c.node);
    while let Some(i) = cur {
        chain.push(i);
        cur = nodes[i].parent;
    }
    chain.reverse();
    let source = nodes[c.node].source;
    let dir = c.target - source;
    let mut crossings = Vec::new();
    let mut faces = Vec::with_capacity(chain.len());
    for &i in &chain {
        let n = &nodes[i];
        faces.push(n.placement.face);
        if let Some((u, v)) = n.entry {
            let a = n.placement.vertex_image(u).expect("entry vertex");
            let b = n.placement.vertex_image(v).expect("entry vertex");
            let denom = (b - a).cross(dir);
            let s = if denom.abs() > 0.0 {
                ((source - a).cross(dir) / denom).clamp(0.0, 1.0)
            } else {
                0.5
            };
            let (lo_v, hi_v, t_param) = if u < v { (u, v, s) } else { (v, u, 1.0 - s) };
            debug_assert_eq!(edge_index(lo_v, hi_v), edge_index(u, v));
            crossings.push(Crossing {
                edge: [lo_v, hi_v],
                t: t_param,
            });
        }
    }
    // directions come from the unfolded segment, which stays accurate when
    // the first or last crossing is very close to an endpoint
    let first = &nodes[chain[0]].placement;
    let last = &nodes[c.node].placement;
    GeodesicPath {
        length: c.length,
        crossings,
        source: *p,
        target: *q,
        faces,
        start_dir: first.unmap_direction(t, dir).normalized(),
        end_dir: last.unmap_direction(t, dir).normalized(),
    }
}
