//! SVG export of star and source unfoldings.
//!
//! Drawing coordinates are in the input length unit with two decimals and
//! `y` pointing up. The unrounded outline, the simplicity check and any
//! source perturbation are embedded as JSON in the `<metadata>` element.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Result, TetraError};
use crate::geodesic::geodesic_distance;
use crate::geometry::planar::polygon_is_simple;
use crate::geometry::{SurfacePoint, Tetrahedron, Vec2, EDGES};
use crate::intrinsic::{cut_locus, source_unfold, star_unfold, CutLocus, StarUnfolding};

/// Decimals of drawing coordinates.
pub const DECIMALS: usize = 2;
/// Samples per tetrahedron edge in the faces layer.
const EDGE_SAMPLES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnfoldMode {
    Star,
    Source,
}

impl FromStr for UnfoldMode {
    type Err = TetraError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(UnfoldMode::Star),
            "source" => Ok(UnfoldMode::Source),
            _ => Err(TetraError::InvalidParameter(format!("unknown unfolding mode `{s}`"))),
        }
    }
}

/// What the `<metadata>` element records.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnfoldingMetadata {
    pub mode: UnfoldMode,
    pub source: SurfacePoint,
    /// Every outline polygon is simple.
    pub simple: bool,
    /// Displacement of an ambiguous source, if one was needed.
    pub perturbation: Option<f64>,
    pub note: Option<String>,
    /// Boundary polygons at full precision: the star polygon, or one cell per
    /// source image.
    pub outline: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone)]
pub struct SvgUnfolding {
    pub svg: String,
    pub metadata: UnfoldingMetadata,
}

/// Star polygon of `x`; an ambiguous source is perturbed as in [`cut_locus`]
/// and the displacement reported.
fn star_with_note(t: &Tetrahedron, x: &SurfacePoint, cfg: &Config) -> Result<(StarUnfolding, Option<CutLocus>, Option<String>)> {
    match star_unfold(t, x, cfg) {
        Ok(star) => Ok((star, None, None)),
        Err(TetraError::AmbiguousCut { vertex }) => {
            let cl = cut_locus(t, x, cfg)?;
            let note = format!(
                "shortest path to vertex {vertex} is not unique; source displaced by {:.3e} before cutting",
                cl.perturbation.unwrap_or(0.0)
            );
            log::warn!("{note}");
            Ok((cl.star.clone(), Some(cl), Some(note)))
        }
        Err(e) => Err(e),
    }
}

/// Images of the tetrahedron edges as polylines, split where a cut separates
/// consecutive samples.
fn edge_images(t: &Tetrahedron, image: impl Fn(&SurfacePoint) -> Result<Option<Vec2>>) -> Result<Vec<Vec<Vec2>>> {
    let mut out = Vec::new();
    for &[i, j] in EDGES.iter() {
        let step = t.edge_length(i, j) / EDGE_SAMPLES as f64;
        let mut run: Vec<Vec2> = Vec::new();
        for k in 0..=EDGE_SAMPLES {
            let p = SurfacePoint::on_edge(i, j, k as f64 / EDGE_SAMPLES as f64);
            match image(&p)? {
                Some(z) if run.last().map_or(true, |l| l.dist(z) <= 4.0 * step) => run.push(z),
                next => {
                    if run.len() > 1 {
                        out.push(std::mem::take(&mut run));
                    }
                    run = next.into_iter().collect();
                }
            }
        }
        if run.len() > 1 {
            out.push(run);
        }
    }
    Ok(out)
}

fn star_image(t: &Tetrahedron, star: &StarUnfolding, y: &SurfacePoint, cfg: &Config) -> Result<Option<Vec2>> {
    let (r, path) = geodesic_distance(t, &star.source, y, cfg)?;
    if r <= cfg.tolerances.geom_tol * t.longest_edge() {
        return Ok(None);
    }
    let (face, dir) = path.start_direction();
    let psi = star.chart.angle_of(t, face, dir)?;
    Ok(Some(star.image(psi, r)))
}

struct Canvas {
    body: String,
    points: Vec<Vec2>,
}

impl Canvas {
    fn num(v: f64) -> String {
        let s = format!("{v:.DECIMALS$}");
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
            _ => s,
        }
    }

    fn fmt(z: Vec2) -> String {
        format!("{},{}", Self::num(z.x), Self::num(-z.y))
    }

    fn group(&mut self, id: &str, style: &str, shapes: &[(bool, Vec<Vec2>)]) {
        let _ = writeln!(self.body, "  <g id=\"{id}\" {style}>");
        for (closed, pts) in shapes {
            let tag = if *closed { "polygon" } else { "polyline" };
            let coords: Vec<String> = pts.iter().map(|&z| Self::fmt(z)).collect();
            let _ = writeln!(self.body, "    <{tag} points=\"{}\"/>", coords.join(" "));
            self.points.extend(pts.iter().copied());
        }
        let _ = writeln!(self.body, "  </g>");
    }

    fn finish(self, metadata: &UnfoldingMetadata) -> Result<String> {
        let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for z in &self.points {
            lo = Vec2::new(lo.x.min(z.x), lo.y.min(-z.y));
            hi = Vec2::new(hi.x.max(z.x), hi.y.max(-z.y));
        }
        let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let json = serde_json::to_string(&crate::json::to_value(metadata)?).map_err(|e| TetraError::InvalidParameter(e.to_string()))?;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.*} {:.*} {:.*} {:.*}\" width=\"800\">",
            DECIMALS,
            lo.x - pad,
            DECIMALS,
            lo.y - pad,
            DECIMALS,
            hi.x - lo.x + 2.0 * pad,
            DECIMALS,
            hi.y - lo.y + 2.0 * pad
        );
        let _ = writeln!(s, "  <metadata>{}</metadata>", xml_escape(&json));
        if let Some(note) = &metadata.note {
            let _ = writeln!(s, "  <desc>{}</desc>", xml_escape(note));
        }
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        Ok(s)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const FACE_STYLE: &str = "fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"";
const CUT_STYLE: &str = "fill=\"#f4eedd\" fill-opacity=\"0.6\" stroke=\"#000000\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\"";
const LOCUS_STYLE: &str = "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\"";

/// Renders the unfolding of `t` from `source` without touching the disk.
pub fn render_unfolding(t: &Tetrahedron, source: &SurfacePoint, mode: UnfoldMode, cfg: &Config) -> Result<SvgUnfolding> {
    let tol = cfg.tolerances.geom_tol * t.longest_edge();
    let mut canvas = Canvas {
        body: String::new(),
        points: Vec::new(),
    };
    let metadata = match mode {
        UnfoldMode::Star => {
            let (star, cl, note) = star_with_note(t, source, cfg)?;
            let edges = edge_images(t, |y| star_image(t, &star, y, cfg))?;
            canvas.group("cuts", CUT_STYLE, &[(true, star.polygon.clone())]);
            canvas.group("faces", FACE_STYLE, &edges.into_iter().map(|e| (false, e)).collect::<Vec<_>>());
            UnfoldingMetadata {
                mode,
                source: *source,
                simple: star.is_simple(tol),
                perturbation: cl.and_then(|c| c.perturbation),
                note,
                outline: vec![star.polygon.iter().map(|z| [z.x, z.y]).collect()],
            }
        }
        UnfoldMode::Source => {
            let su = source_unfold(t, source, cfg)?;
            let note = su
                .cut_locus
                .perturbation
                .map(|d| format!("source is ambiguous; cut locus built from a point displaced by {d:.3e}"));
            let origin = su.cut_locus.star.source;
            let edges = edge_images(t, |y| {
                if geodesic_distance(t, &origin, y, cfg)?.0 <= tol {
                    return Ok(None);
                }
                su.layout_point(t, y, cfg).map(Some)
            })?;
            let cells: Vec<(bool, Vec<Vec2>)> = su.cells.iter().map(|c| (true, c.polygon.clone())).collect();
            canvas.group("cuts", CUT_STYLE, &cells);
            canvas.group("faces", FACE_STYLE, &edges.into_iter().map(|e| (false, e)).collect::<Vec<_>>());
            let arcs: Vec<(bool, Vec<Vec2>)> = su.cut_arcs.iter().map(|a| (false, a.to_vec())).collect();
            canvas.group("cut-locus", LOCUS_STYLE, &arcs);
            UnfoldingMetadata {
                mode,
                source: *source,
                simple: su.cells.iter().all(|c| polygon_is_simple(&c.polygon, tol)),
                perturbation: su.cut_locus.perturbation,
                note,
                outline: su.cells.iter().map(|c| c.polygon.iter().map(|z| [z.x, z.y]).collect()).collect(),
            }
        }
    };
    Ok(SvgUnfolding {
        svg: canvas.finish(&metadata)?,
        metadata,
    })
}

/// Writes the unfolding to `path`.
pub fn export_unfolding(t: &Tetrahedron, source: &SurfacePoint, mode: UnfoldMode, path: &Path, cfg: &Config) -> Result<UnfoldingMetadata> {
    let out = render_unfolding(t, source, mode, cfg)?;
    std::fs::write(path, &out.svg).map_err(|e| TetraError::InvalidParameter(format!("{}: {e}", path.display())))?;
    Ok(out.metadata)
}

/// Metadata embedded in an SVG written by this module.
pub fn read_metadata(svg: &str) -> Result<UnfoldingMetadata> {
    let start = svg.find("<metadata>").map(|i| i + "<metadata>".len());
    let end = svg.find("</metadata>");
    let (Some(a), Some(b)) = (start, end) else {
        return Err(TetraError::InvalidParameter("no metadata element".into()));
    };
    let json = svg[a..b].replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&");
    serde_json::from_str(&json).map_err(|e| TetraError::InvalidParameter(e.to_string()))
}
