//! Cut locus of a surface point as the nearest-source-image partition of its
//! star unfolding.

use serde::Serialize;

use super::star::{star_unfold, star_unfold_lenient, StarUnfolding};
use crate::config::Config;
use crate::error::{Result, TetraError};
use crate::geometry::planar::point_in_polygon;
use crate::geometry::{circumcenter, SurfacePoint, Tetrahedron, Vec2};

/// Points of an arc sampled strictly between its end nodes.
const ARC_SAMPLES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct CutNode {
    pub point: SurfacePoint,
    /// Position in the star unfolding.
    pub image: Vec2,
    /// Number of incident arcs.
    pub degree: usize,
    /// Source images equidistant from the node; one per shortest path.
    pub sites: Vec<usize>,
    /// Distance from the source.
    pub distance: f64,
    /// Set when the node is a vertex of the tetrahedron.
    pub vertex: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutEdge {
    pub nodes: [usize; 2],
    /// The two source images the arc bisects.
    pub sites: [usize; 2],
    /// Surface points along the arc, end nodes included.
    pub samples: Vec<SurfacePoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutLocus {
    pub source: SurfacePoint,
    pub nodes: Vec<CutNode>,
    pub edges: Vec<CutEdge>,
    /// Displacement applied to an ambiguous source before construction.
    pub perturbation: Option<f64>,
    #[serde(skip)]
    pub star: StarUnfolding,
}

impl CutLocus {
    pub fn leaves(&self) -> impl Iterator<Item = &CutNode> {
        self.nodes.iter().filter(|n| n.degree == 1)
    }

    /// Vertices at the leaves, ascending.
    pub fn leaf_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.leaves().filter_map(|n| n.vertex).collect();
        v.sort_unstable();
        v
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.nodes[0]), find(&mut parent, e.nodes[1]));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Nodes with degree three or more.
    pub fn junctions(&self) -> impl Iterator<Item = &CutNode> {
        self.nodes.iter().filter(|n| n.degree >= 3)
    }

    /// Position along arc `e` at parameter `s ∈ [0, 1]` in the star
    /// unfolding.
    pub fn arc_image(&self, e: usize, s: f64) -> Vec2 {
        let [a, b] = self.edges[e].nodes;
        self.nodes[a].image.lerp(self.nodes[b].image, s)
    }

    /// Surface point along arc `e`.
    pub fn arc_point(&self, t: &Tetrahedron, e: usize, s: f64) -> SurfacePoint {
        let z = self.arc_image(e, s);
        self.star.to_surface_from(t, z, self.edges[e].sites[0])
    }

    /// Distance from the source along arc `e`.
    pub fn arc_distance(&self, e: usize, s: f64) -> f64 {
        self.arc_image(e, s).dist(self.star.sites[self.edges[e].sites[0]])
    }
}

/// Cut locus of `x`. An ambiguous source is displaced toward the centroid of
/// its face by `opt_tol / 100 · diam` and the result accepted when its
/// structure survives halving the displacement twice.
pub fn cut_locus(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<CutLocus> {
    match star_unfold(t, x, cfg) {
        Ok(star) => Ok(from_star(t, star, cfg)),
        Err(TetraError::AmbiguousCut { vertex }) => perturbed(t, x, cfg, vertex),
        Err(e) => Err(e),
    }
}

fn perturbed(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config, vertex: usize) -> Result<CutLocus> {
    let delta = cfg.tolerances.opt_tol / 100.0 * t.longest_edge();
    let p = x.position(t);
    let face = x.face;
    let [a, b, c] = t.face_vertices(face);
    // the centroid first; the low-symmetry targets break ties that survive
    // moving along a symmetry line through the centroid
    let targets = [
        t.face_centroid(face),
        a * 0.47 + b * 0.33 + c * 0.2,
        a * 0.21 + b * 0.29 + c * 0.5,
    ];
    let cluster_tol = cfg.tolerances.opt_tol * t.longest_edge();
    let signature = |c: &CutLocus| structure_signature(t, c, cluster_tol);
    let mut fallback: Option<CutLocus> = None;
    for target in targets {
        if target.dist(p) <= delta {
            continue;
        }
        let dir = (target - p).normalized();
        let build = |d: f64| -> Result<CutLocus> {
            let y = SurfacePoint::from_position(t, face, p + dir * d);
            let star = star_unfold(t, &y, cfg)?;
            Ok(from_star(t, star, cfg))
        };
        let mut attempt = || -> Result<Option<CutLocus>> {
            let full = build(delta)?;
            let mut stable = true;
            for d in [delta / 2.0, delta / 4.0] {
                let half = build(d)?;
                stable &= signature(&half) == signature(&full);
                if !stable {
                    fallback.get_or_insert(half);
                    break;
                }
            }
            Ok(stable.then_some(full))
        };
        match attempt() {
            Ok(Some(out)) => return Ok(mark(out, x, delta)),
            Ok(None) => log::debug!("cut locus unstable under perturbation; trying another direction"),
            Err(TetraError::AmbiguousCut { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    // every direction changes the structure at this scale (the source sits
    // next to a vertex or another degeneracy); keep the smallest build
    if let Some(out) = fallback {
        log::warn!("no stable perturbation of an ambiguous source; using the smallest displacement");
        return Ok(mark(out, x, delta));
    }
    // every displaced source is still tied within the window, as happens
    // beside an almost flat vertex; the candidates then agree to the window
    log::warn!("cut to vertex {vertex} stays tied under perturbation; taking the shortest candidate");
    let star = star_unfold_lenient(t, x, cfg)?;
    Ok(from_star(t, star, cfg))
}

fn mark(mut cl: CutLocus, x: &SurfacePoint, delta: f64) -> CutLocus {
    cl.source = *x;
    cl.perturbation = Some(delta);
    cl
}

/// Coarse shape of a cut locus: nodes within `tol` of each other form one
/// cluster, so a degree-4 node and two nearby degree-3 nodes (or a junction
/// sitting on a vertex and one just beside it) look the same. Returns, per
/// cluster, the number of arcs leaving it and the vertices it contains.
pub(crate) fn structure_signature(t: &Tetrahedron, c: &CutLocus, tol: f64) -> Vec<(usize, Vec<usize>)> {
    let n = c.nodes.len();
    let pos: Vec<_> = c.nodes.iter().map(|n| n.point.position(t)).collect();
    let mut cluster: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if pos[i].dist(pos[j]) <= tol {
                let (a, b) = (cluster[i], cluster[j]);
                for c in cluster.iter_mut() {
                    if *c == a {
                        *c = b;
                    }
                }
            }
        }
    }
    let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut ids: Vec<usize> = cluster.clone();
    ids.sort_unstable();
    ids.dedup();
    for id in ids {
        let external = c
            .edges
            .iter()
            .filter(|e| (cluster[e.nodes[0]] == id) != (cluster[e.nodes[1]] == id))
            .count();
        let mut vertices: Vec<usize> = (0..n)
            .filter(|&i| cluster[i] == id)
            .filter_map(|i| c.nodes[i].vertex)
            .collect();
        vertices.sort_unstable();
        out.push((external, vertices));
    }
    out.sort();
    out
}

struct Proto {
    image: Vec2,
    sites: Vec<usize>,
    vertex: Option<usize>,
}

pub(crate) fn from_star(t: &Tetrahedron, star: StarUnfolding, cfg: &Config) -> CutLocus {
    let k = star.len();
    let scale = t.longest_edge();
    let tol = cfg.tolerances.geom_tol * scale;
    let merge = 10.0 * tol;
    let s = &star.sites;

    let mut protos: Vec<Proto> = (0..k)
        .map(|i| Proto {
            image: star.leaves[i],
            sites: vec![i, (i + 1) % k],
            vertex: Some(star.cut_vertices[i]),
        })
        .collect();

    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                let Ok(cc) = circumcenter(s[a], s[b], s[c]) else {
                    continue;
                };
                let r = cc.dist(s[a]);
                let closer = (0..k).any(|d| d != a && d != b && d != c && cc.dist(s[d]) < r - tol);
                if closer || !point_in_polygon(&star.polygon, cc, tol) {
                    continue;
                }
                match protos.iter_mut().find(|p| p.image.dist(cc) <= merge) {
                    Some(p) => {
                        for v in [a, b, c] {
                            if !p.sites.contains(&v) {
                                p.sites.push(v);
                            }
                        }
                    }
                    None => protos.push(Proto {
                        image: cc,
                        sites: vec![a, b, c],
                        vertex: None,
                    }),
                }
            }
        }
    }
    for p in protos.iter_mut() {
        p.sites.sort_unstable();
    }

    // arcs: consecutive nodes along each bisector whose midpoint is in the
    // polygon and nearest to exactly that pair
    let mut links: Vec<([usize; 2], [usize; 2])> = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            let dir = (s[b] - s[a]).perp();
            let mut on: Vec<(f64, usize)> = protos
                .iter()
                .enumerate()
                .filter(|(_, p)| p.sites.contains(&a) && p.sites.contains(&b))
                .map(|(i, p)| (p.image.dot(dir), i))
                .collect();
            on.sort_by(|x, y| x.0.total_cmp(&y.0));
            for w in on.windows(2) {
                let (n1, n2) = (w[0].1, w[1].1);
                let m = protos[n1].image.lerp(protos[n2].image, 0.5);
                if protos[n1].image.dist(protos[n2].image) <= merge {
                    continue;
                }
                let ra = m.dist(s[a]);
                let nearest = (0..k).all(|d| d == a || d == b || m.dist(s[d]) > ra + tol);
                if nearest && point_in_polygon(&star.polygon, m, tol) {
                    links.push(([n1, n2], [a, b]));
                }
            }
        }
    }

    let mut degree = vec![0usize; protos.len()];
    for (n, _) in &links {
        degree[n[0]] += 1;
        degree[n[1]] += 1;
    }
    let nodes: Vec<CutNode> = protos
        .iter()
        .enumerate()
        .map(|(i, p)| CutNode {
            point: match p.vertex {
                Some(v) => SurfacePoint::vertex(v),
                None => star.to_surface_from(t, p.image, p.sites[0]),
            },
            image: p.image,
            degree: degree[i],
            sites: p.sites.clone(),
            distance: p.image.dist(s[p.sites[0]]),
            vertex: p.vertex,
        })
        .collect();
    let edges: Vec<CutEdge> = links
        .into_iter()
        .map(|(n, sites)| {
            let (za, zb) = (nodes[n[0]].image, nodes[n[1]].image);
            let mut samples = Vec::with_capacity(ARC_SAMPLES + 2);
            samples.push(nodes[n[0]].point);
            for j in 1..=ARC_SAMPLES {
                let z = za.lerp(zb, j as f64 / (ARC_SAMPLES + 1) as f64);
                samples.push(star.to_surface_from(t, z, sites[0]));
            }
            samples.push(nodes[n[1]].point);
            CutEdge {
                nodes: n,
                sites,
                samples,
            }
        })
        .collect();

    CutLocus {
        source: star.source,
        nodes,
        edges,
        perturbation: None,
        star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{all_geodesic_segments, geodesic_distance};
    use crate::geometry::Vec3;

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
    fn regular_vertex_y_tree() {
        let t = regular();
        let cl = cut_locus(&t, &SurfacePoint::vertex(0), &Config::default()).unwrap();
        assert!(cl.is_tree());
        assert_eq!(cl.leaf_vertices(), vec![1, 2, 3]);
        let j: Vec<&CutNode> = cl.junctions().collect();
        assert_eq!(j.len(), 1);
        let off = j[0].point.position(&t).dist(t.face_centroid(0));
        assert!(off < 1e-9, "{off}");
        assert!((j[0].distance - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn generic_point_nodes_match_path_multiplicity() {
        let t = irregular();
        let cfg = Config::default();
        let x = SurfacePoint::in_face(3, [0.2, 0.5, 0.3]);
        let cl = cut_locus(&t, &x, &cfg).unwrap();
        assert!(cl.is_tree());
        assert_eq!(cl.leaf_vertices(), vec![0, 1, 2, 3]);
        for n in cl.junctions() {
            let (d, _) = geodesic_distance(&t, &x, &n.point, &cfg).unwrap();
            assert!((d - n.distance).abs() < 1e-9, "{d} vs {}", n.distance);
            let paths = all_geodesic_segments(&t, &x, &n.point, 1e-7, &cfg).unwrap();
            assert_eq!(paths.len(), n.degree);
        }
    }

    #[test]
    fn arc_points_have_two_shortest_paths() {
        let t = irregular();
        let cfg = Config::default();
        let x = SurfacePoint::in_face(0, [0.5, 0.3, 0.2]);
        let cl = cut_locus(&t, &x, &cfg).unwrap();
        for e in 0..cl.edges.len() {
            let y = cl.arc_point(&t, e, 0.37);
            let (d, _) = geodesic_distance(&t, &x, &y, &cfg).unwrap();
            assert!((d - cl.arc_distance(e, 0.37)).abs() < 1e-9);
            let paths = all_geodesic_segments(&t, &x, &y, 1e-8, &cfg).unwrap();
            assert!(paths.len() >= 2, "arc {e}: {} paths", paths.len());
        }
    }

    #[test]
    fn ambiguous_source_is_perturbed() {
        let t = regular();
        let cfg = Config::default();
        let x = SurfacePoint::in_face(0, [1.0 / 3.0; 3]);
        let cl = cut_locus(&t, &x, &cfg).unwrap();
        assert!(cl.perturbation.is_some());
        assert_eq!(cl.source, x);
        assert!(cl.is_tree());
    }
}
