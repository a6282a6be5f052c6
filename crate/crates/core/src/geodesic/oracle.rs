//! Graph approximation of the intrinsic distance.
//!
//! Each edge is split into `2ⁿ` equal pieces. The graph nodes are the split
//! points, the vertices, `p` and `q`; any two nodes on a common face are
//! joined by their chord, which is a surface path inside that face. The
//! best graph path is then shortened by sliding each of its edge points
//! along its edge. Every step keeps a genuine surface path, so the result
//! never undershoots the true distance.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::geometry::tetrahedron::{faces_of_edge, EDGES};
use crate::geometry::{SurfacePoint, Tetrahedron, Vec3};
use crate::optimize::golden_section_max;

/// Sweeps of the path shortening.
const SHORTEN_SWEEPS: usize = 200;

#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct Dist(f64);

impl Eq for Dist {}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Clone, Copy)]
enum Node {
    Fixed(Vec3),
    /// Point `a + s (b − a)` of an edge.
    OnEdge { a: Vec3, b: Vec3, s: f64 },
}

impl Node {
    fn pos(&self) -> Vec3 {
        match *self {
            Node::Fixed(p) => p,
            Node::OnEdge { a, b, s } => a + (b - a) * s,
        }
    }
}

/// Shortest graph path from `p` to `q` as its node sequence.
fn graph_path(t: &Tetrahedron, p: &SurfacePoint, q: &SurfacePoint, subdivision: u32) -> Vec<Node> {
    let n = subdivision.clamp(1, 12);
    let m = 1usize << n;

    let mut nodes: Vec<Node> = Vec::new();
    let mut on_face: [Vec<usize>; 4] = Default::default();
    let mut add = |node: Node, faces: &[usize], nodes: &mut Vec<Node>| {
        nodes.push(node);
        let id = nodes.len() - 1;
        for &f in faces {
            on_face[f].push(id);
        }
        id
    };

    for v in 0..4 {
        let faces: Vec<usize> = (0..4).filter(|&f| f != v).collect();
        add(Node::Fixed(t.vertex(v)), &faces, &mut nodes);
    }
    for &[i, j] in EDGES.iter() {
        let faces = faces_of_edge(i, j);
        let (a, b) = (t.vertex(i), t.vertex(j));
        for k in 1..m {
            add(Node::OnEdge { a, b, s: k as f64 / m as f64 }, &faces, &mut nodes);
        }
    }
    let src = add(Node::Fixed(p.position(t)), &p.faces(), &mut nodes);
    let dst = add(Node::Fixed(q.position(t)), &q.faces(), &mut nodes);
    let pos: Vec<Vec3> = nodes.iter().map(Node::pos).collect();

    let mut node_faces: Vec<Vec<usize>> = vec![Vec::new(); pos.len()];
    for (f, ids) in on_face.iter().enumerate() {
        for &id in ids {
            node_faces[id].push(f);
        }
    }

    let mut dist = vec![f64::INFINITY; pos.len()];
    let mut pred = vec![usize::MAX; pos.len()];
    let mut done = vec![false; pos.len()];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Dist(0.0), src)));
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == dst {
            break;
        }
        for &f in &node_faces[u] {
            for &v in &on_face[f] {
                if done[v] {
                    continue;
                }
                let nd = d + pos[u].dist(pos[v]);
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(Reverse((Dist(nd), v)));
                }
            }
        }
    }
    let mut path = vec![nodes[dst]];
    let mut u = dst;
    while u != src {
        u = pred[u];
        path.push(nodes[u]);
    }
    path.reverse();
    path
}

fn path_length(path: &[Node]) -> f64 {
    path.windows(2).map(|w| w[0].pos().dist(w[1].pos())).sum()
}

/// Slides every edge point of `path` to the best position between its
/// neighbours until a sweep no longer helps.
fn shorten(path: &mut [Node]) {
    let mut len = path_length(path);
    for _ in 0..SHORTEN_SWEEPS {
        for i in 1..path.len().saturating_sub(1) {
            if let Node::OnEdge { a, b, .. } = path[i] {
                let (prev, next) = (path[i - 1].pos(), path[i + 1].pos());
                let cost = |s: f64| {
                    let x = a + (b - a) * s;
                    -(x.dist(prev) + x.dist(next))
                };
                let (s, _) = golden_section_max(cost, 0.0, 1.0, 1e-13);
                path[i] = Node::OnEdge { a, b, s };
            }
        }
        let new_len = path_length(path);
        let done = new_len >= len - 1e-15 * len;
        len = new_len.min(len);
        if done {
            break;
        }
    }
}

/// Length of the shortened best graph path; `subdivision` values below one
/// are treated as one.
pub fn mesh_oracle_distance(t: &Tetrahedron, p: &SurfacePoint, q: &SurfacePoint, subdivision: u32) -> f64 {
    if p == q {
        return 0.0;
    }
    let mut path = graph_path(t, p, q, subdivision);
    shorten(&mut path);
    path_length(&path)
}
