//! Special tetrahedra and seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Result, TetraError};
use crate::geometry::tetrahedron::edge_index;
use crate::geometry::{validate_tetrahedron, Tetrahedron, Vec3, EDGES};

/// Rejection-sampling budget.
pub const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Regular,
    Isosceles,
    EpsThick,
    NormalEpsThick,
    Random,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Regular => "regular",
            GeneratorKind::Isosceles => "isosceles",
            GeneratorKind::EpsThick => "eps-thick",
            GeneratorKind::NormalEpsThick => "normal-eps-thick",
            GeneratorKind::Random => "random",
        }
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = TetraError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "regular" => GeneratorKind::Regular,
            "isosceles" => GeneratorKind::Isosceles,
            "eps-thick" => GeneratorKind::EpsThick,
            "normal-eps-thick" => GeneratorKind::NormalEpsThick,
            "random" => GeneratorKind::Random,
            other => return Err(TetraError::InvalidParameter(format!("unknown kind {other:?}"))),
        })
    }
}

/// Everything needed to rebuild an instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    /// Edge length (regular) or long-edge length (ε-thick).
    pub edge: f64,
    /// Triangle sides of the isosceles construction.
    pub sides: [f64; 3],
    pub eps: f64,
    pub seed: u64,
    pub quality_floor: f64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            kind: GeneratorKind::Random,
            edge: 1.0,
            sides: [1.0, 1.0, 1.0],
            eps: 0.01,
            seed: 0,
            quality_floor: ToleranceConfig::default().quality_floor,
        }
    }
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    fn tolerances(&self) -> ToleranceConfig {
        ToleranceConfig {
            quality_floor: self.quality_floor,
            ..ToleranceConfig::default()
        }
    }

    /// Instance number `index` of a family; deterministic kinds ignore it.
    pub fn generate(&self, index: u64) -> Result<Tetrahedron> {
        match self.kind {
            GeneratorKind::Regular => make_regular(self.edge),
            GeneratorKind::Isosceles => make_isosceles(self.sides[0], self.sides[1], self.sides[2]),
            GeneratorKind::NormalEpsThick => make_normal_eps_thick_with(self.eps, self.edge, &self.tolerances()),
            GeneratorKind::EpsThick => {
                make_eps_thick_from(self.eps, &mut instance_rng(self.seed, index), self.edge, &self.tolerances())
            }
            GeneratorKind::Random => random_from(&mut instance_rng(self.seed, index), &self.tolerances()),
        }
    }
}

/// Independent stream `index` of the generator keyed by `seed`. Streams do
/// not depend on which other instances were drawn.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(TetraError::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

/// Regular tetrahedron with edge `edge`, centered at the origin.
pub fn make_regular(edge: f64) -> Result<Tetrahedron> {
    positive("edge", edge)?;
    make_isosceles(edge, edge, edge)
}

/// Tetrahedron with opposite edges `(p, p)`, `(q, q)`, `(r, r)`: alternate
/// corners of a box, every edge a face diagonal. Edges `01, 23` have length
/// `p`, `02, 13` length `q`, `03, 12` length `r`.
pub fn make_isosceles(p: f64, q: f64, r: f64) -> Result<Tetrahedron> {
    for (name, x) in [("p", p), ("q", q), ("r", r)] {
        positive(name, x)?;
    }
    let (p2, q2, r2) = (p * p, q * q, r * r);
    let x2 = (q2 + r2 - p2) / 8.0;
    let y2 = (p2 + r2 - q2) / 8.0;
    let z2 = (p2 + q2 - r2) / 8.0;
    if !(x2 > 0.0 && y2 > 0.0 && z2 > 0.0) {
        return Err(TetraError::NotAcute(p, q, r));
    }
    let (x, y, z) = (x2.sqrt(), y2.sqrt(), z2.sqrt());
    Tetrahedron::new([
        Vec3::new(-x, y, z),
        Vec3::new(-x, -y, -z),
        Vec3::new(x, y, -z),
        Vec3::new(x, -y, z),
    ])
}

/// Normal ε-thick tetrahedron: `a, b = (∓L/2, 0, 0)` and the short edge
/// `c, d = (0, ±s, s)` with `s = εL/(2√2)`.
pub fn make_normal_eps_thick(eps: f64, long_edge: f64) -> Result<Tetrahedron> {
    make_normal_eps_thick_with(eps, long_edge, &ToleranceConfig::default())
}

fn make_normal_eps_thick_with(eps: f64, long_edge: f64, tol: &ToleranceConfig) -> Result<Tetrahedron> {
    positive("eps", eps)?;
    positive("long_edge", long_edge)?;
    if eps >= 0.5 {
        return Err(TetraError::InvalidParameter(format!("eps must be below 1/2, got {eps}")));
    }
    let half = long_edge / 2.0;
    let s = eps * long_edge / (2.0 * 2f64.sqrt());
    validate_tetrahedron(
        [
            Vec3::new(-half, 0.0, 0.0),
            Vec3::new(half, 0.0, 0.0),
            Vec3::new(0.0, s, s),
            Vec3::new(0.0, -s, s),
        ],
        tol,
    )
}

/// ε-thick tetrahedron with the short edge placed at random inside the ball
/// of radius `ε·L` about the midpoint of the long edge `01`.
pub fn make_eps_thick(eps: f64, seed: u64, long_edge: f64) -> Result<Tetrahedron> {
    make_eps_thick_from(eps, &mut instance_rng(seed, 0), long_edge, &ToleranceConfig::default())
}

fn make_eps_thick_from(eps: f64, rng: &mut ChaCha8Rng, long_edge: f64, tol: &ToleranceConfig) -> Result<Tetrahedron> {
    positive("eps", eps)?;
    positive("long_edge", long_edge)?;
    if eps >= 0.5 {
        return Err(TetraError::InvalidParameter(format!("eps must be below 1/2, got {eps}")));
    }
    let radius = eps * long_edge;
    let in_ball = |rng: &mut ChaCha8Rng| loop {
        let p = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if p.norm2() <= 1.0 {
            return p * radius;
        }
    };
    let half = long_edge / 2.0;
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let (c, d) = (in_ball(rng), in_ball(rng));
        match validate_tetrahedron([Vec3::new(-half, 0.0, 0.0), Vec3::new(half, 0.0, 0.0), c, d], tol) {
            Ok(t) => return Ok(t),
            Err(e) => last = Some(e),
        }
    }
    log::debug!("eps-thick rejection exhausted: {last:?}");
    Err(TetraError::GenerationFailed(MAX_ATTEMPTS))
}

/// Four points uniform in the unit cube, resampled until non-degenerate.
pub fn random_tetrahedron(seed: u64, quality_floor: f64) -> Result<Tetrahedron> {
    let tol = ToleranceConfig {
        quality_floor,
        ..ToleranceConfig::default()
    };
    random_from(&mut instance_rng(seed, 0), &tol)
}

fn random_from(rng: &mut ChaCha8Rng, tol: &ToleranceConfig) -> Result<Tetrahedron> {
    for _ in 0..MAX_ATTEMPTS {
        let v = [(); 4].map(|_| Vec3::new(rng.gen(), rng.gen(), rng.gen()));
        if let Ok(t) = validate_tetrahedron(v, tol) {
            return Ok(t);
        }
    }
    Err(TetraError::GenerationFailed(MAX_ATTEMPTS))
}

/// Similarity-canonical form: longest edge `01` of length one on the x-axis
/// centered at the origin, vertex 2 in the xz-plane with `z > 0`, vertex 3
/// with `y < 0`. Remaining labels keep their relative order.
pub fn normalize(t: &Tetrahedron) -> Result<Tetrahedron> {
    let (i, j) = t.longest_edge_pair();
    let rest: Vec<usize> = (0..4).filter(|&v| v != i && v != j).collect();
    let order = [i, j, rest[0], rest[1]];
    let scale = t.longest_edge();
    let v = order.map(|k| t.vertex(k));

    let origin = (v[0] + v[1]) * 0.5;
    let ex = (v[1] - v[0]).normalized();
    let w = v[2] - origin;
    let ez = (w - ex * w.dot(ex)).normalized();
    let ey = ez.cross(ex);
    let pose = |p: Vec3| {
        let d = p - origin;
        Vec3::new(d.dot(ex), d.dot(ey), d.dot(ez)) / scale
    };
    let mut out = v.map(pose);
    // exact zeros for the constrained coordinates
    out[0] = Vec3::new(-0.5, 0.0, 0.0);
    out[1] = Vec3::new(0.5, 0.0, 0.0);
    out[2].y = 0.0;
    if out[3].y > 0.0 {
        out[3].y = -out[3].y;
    }
    Tetrahedron::new(out)
}

/// Tetrahedron with the given edge lengths (in [`EDGES`] order), placed as by
/// [`normalize`] but without rescaling.
pub fn from_edge_lengths(l: [f64; 6]) -> Result<Tetrahedron> {
    let [l01, l02, l03, l12, l13, l23] = l;
    if !l.iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(TetraError::InvalidParameter("edge lengths must be positive".into()));
    }
    let half = l01 / 2.0;
    let x2 = (l02 * l02 - l12 * l12) / (2.0 * l01);
    let z2sq = l02 * l02 - (x2 + half).powi(2);
    let x3 = (l03 * l03 - l13 * l13) / (2.0 * l01);
    let r2 = l03 * l03 - (x3 + half).powi(2);
    if !(z2sq > 0.0 && r2 > 0.0) {
        return Err(TetraError::InvalidParameter(format!("edge lengths {l:?} violate a triangle inequality")));
    }
    let z2 = z2sq.sqrt();
    let z3 = ((x3 - x2).powi(2) + r2 + z2 * z2 - l23 * l23) / (2.0 * z2);
    let y3sq = r2 - z3 * z3;
    if !(y3sq > 0.0) {
        return Err(TetraError::InvalidParameter(format!("edge lengths {l:?} span no tetrahedron")));
    }
    Tetrahedron::new([
        Vec3::new(-half, 0.0, 0.0),
        Vec3::new(half, 0.0, 0.0),
        Vec3::new(x2, 0.0, z2),
        Vec3::new(x3, -y3sq.sqrt(), z3),
    ])
}

/// Distance between the shapes of two tetrahedra: the largest edge-length
/// difference after scaling both to unit diameter, minimized over the 24
/// relabelings.
pub fn shape_distance(a: &Tetrahedron, b: &Tetrahedron) -> f64 {
    let la = a.edge_lengths().map(|l| l / a.longest_edge());
    let lb = b.edge_lengths().map(|l| l / b.longest_edge());
    let mut best = f64::INFINITY;
    for perm in permutations4() {
        let d = EDGES
            .iter()
            .enumerate()
            .map(|(e, &[x, y])| (la[e] - lb[edge_index(perm[x], perm[y])]).abs())
            .fold(0.0, f64::max);
        best = best.min(d);
    }
    best
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn regular_edges() {
        let t = make_regular(2.0).unwrap();
        assert!(t.edge_lengths().iter().all(|&l| (l - 2.0).abs() < 1e-12));
    }

    #[test]
    fn isosceles_box() {
        let t = make_isosceles(5.0, 6.0, 7.0).unwrap();
        let l = t.edge_lengths();
        for (e, want) in [(0, 5.0), (5, 5.0), (1, 6.0), (4, 6.0), (2, 7.0), (3, 7.0)] {
            assert!((l[e] - want).abs() < 1e-12, "edge {e}: {}", l[e]);
        }
        for v in 0..4 {
            assert!((t.face_angle_sum(v).unwrap() - PI).abs() < 1e-9);
        }
        assert!(t.is_isosceles(1e-12));
        assert_eq!(make_isosceles(3.0, 4.0, 5.0).unwrap_err(), TetraError::NotAcute(3.0, 4.0, 5.0));
        assert!(make_isosceles(1.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn normal_eps_thick_layout() {
        let t = make_normal_eps_thick(0.01, 1.0).unwrap();
        assert_eq!(t.longest_edge_pair(), (0, 1));
        assert!((t.longest_edge() - 1.0).abs() < 1e-15);
        let m = Vec3::ZERO;
        assert!(t.vertex(2).dist(m) <= 0.01 + 1e-15 && t.vertex(3).dist(m) <= 0.01 + 1e-15);
        // symmetric in the xz- and yz-planes
        let mirrored = |f: fn(Vec3) -> Vec3| {
            (0..4).all(|i| (0..4).any(|j| f(t.vertex(i)).dist(t.vertex(j)) < 1e-15))
        };
        assert!(mirrored(|p| Vec3::new(p.x, -p.y, p.z)));
        assert!(mirrored(|p| Vec3::new(-p.x, p.y, p.z)));
        assert!(!t.is_isosceles(1e-3));
        assert!(t.face_angle_sum(0).unwrap() < PI);
        assert!(matches!(make_normal_eps_thick(1e-3, 1.0), Err(TetraError::DegenerateInput { .. })));
    }

    #[test]
    fn eps_thick_is_reproducible() {
        let a = make_eps_thick(0.01, 9, 1.0).unwrap();
        let b = make_eps_thick(0.01, 9, 1.0).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.longest_edge_pair(), (0, 1));
        for v in 2..4 {
            assert!(a.vertex(v).norm() <= 0.01);
        }
    }

    #[test]
    fn random_streams_are_independent_of_order() {
        let spec = GeneratorSpec {
            seed: 5,
            ..GeneratorSpec::default()
        };
        let third = spec.generate(3).unwrap();
        for i in 0..3 {
            spec.generate(i).unwrap();
        }
        assert_eq!(spec.generate(3).unwrap().vertices(), third.vertices());
        assert_ne!(spec.generate(2).unwrap().vertices(), third.vertices());
    }

    #[test]
    fn normalize_is_canonical_and_idempotent() {
        let t = make_regular(7.0).unwrap();
        let n = normalize(&t).unwrap();
        assert!(n.edge_lengths().iter().all(|&l| (l - 1.0).abs() < 1e-12));
        assert_eq!(n.vertex(0), Vec3::new(-0.5, 0.0, 0.0));
        assert_eq!(n.vertex(2).y, 0.0);
        assert!(n.vertex(2).z > 0.0);
        for seed in 0..20 {
            let t = random_tetrahedron(seed, 1e-6).unwrap();
            let a = normalize(&t).unwrap();
            let b = normalize(&a).unwrap();
            for v in 0..4 {
                assert!(a.vertex(v).dist(b.vertex(v)) < 1e-12);
            }
            assert!(shape_distance(&t, &a) < 1e-12);
        }
    }

    #[test]
    fn edge_lengths_round_trip() {
        for seed in 0..10 {
            let t = normalize(&random_tetrahedron(seed, 1e-6).unwrap()).unwrap();
            let back = from_edge_lengths(*t.edge_lengths()).unwrap();
            for v in 0..4 {
                assert!(back.vertex(v).dist(t.vertex(v)) < 1e-9);
            }
        }
        assert!(from_edge_lengths([1.0, 1.0, 1.0, 1.0, 1.0, 3.0]).is_err());
    }

    #[test]
    fn shape_distance_ignores_labels() {
        let a = make_isosceles(5.0, 6.0, 7.0).unwrap();
        let b = make_isosceles(7.0, 5.0, 6.0).unwrap().scaled(3.0).unwrap();
        assert!(shape_distance(&a, &b) < 1e-12);
        assert!(shape_distance(&a, &make_regular(1.0).unwrap()) > 0.1);
    }
}
