//! Per-instance metric reports and inequality checks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;
use crate::extrinsic::{extrinsic_diameter, extrinsic_radius, ExtrinsicDiameter, ExtrinsicRadius};
use crate::geodesic::all_geodesic_segments;
use crate::geometry::Tetrahedron;
use crate::intrinsic::{intrinsic_diameter, intrinsic_radius, DiameterWitness, RadiusWitness};

/// The six ratios of the four metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    #[serde(rename = "Diam/diam")]
    pub big_diam_diam: f64,
    #[serde(rename = "Diam/Rad")]
    pub big_diam_big_rad: f64,
    #[serde(rename = "diam/rad")]
    pub diam_rad: f64,
    #[serde(rename = "Rad/rad")]
    pub big_rad_rad: f64,
    #[serde(rename = "rad/Diam")]
    pub rad_big_diam: f64,
    #[serde(rename = "Rad/diam")]
    pub big_rad_diam: f64,
}

pub const RATIO_NAMES: [&str; 6] = ["Diam/diam", "Diam/Rad", "diam/rad", "Rad/rad", "rad/Diam", "Rad/diam"];

impl Ratios {
    pub fn new(big_diam: f64, diam: f64, big_rad: f64, rad: f64) -> Self {
        Ratios {
            big_diam_diam: big_diam / diam,
            big_diam_big_rad: big_diam / big_rad,
            diam_rad: diam / rad,
            big_rad_rad: big_rad / rad,
            rad_big_diam: rad / big_diam,
            big_rad_diam: big_rad / diam,
        }
    }

    /// Values in [`RATIO_NAMES`] order.
    pub fn values(&self) -> [f64; 6] {
        [
            self.big_diam_diam,
            self.big_diam_big_rad,
            self.diam_rad,
            self.big_rad_rad,
            self.rad_big_diam,
            self.big_rad_diam,
        ]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReport {
    pub tetrahedron: Tetrahedron,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Intrinsic diameter `Diam`.
    pub intrinsic_diameter: DiameterWitness,
    /// Extrinsic diameter `diam`.
    pub extrinsic_diameter: ExtrinsicDiameter,
    /// Intrinsic radius `Rad`.
    pub intrinsic_radius: RadiusWitness,
    /// Extrinsic radius `rad`.
    pub extrinsic_radius: ExtrinsicRadius,
    pub ratios: Ratios,
    /// Number of shortest paths between the two `Diam` witnesses.
    pub diameter_geodesics: usize,
    pub config: Config,
}

impl MetricReport {
    /// `(Diam, diam, Rad, rad)`.
    pub fn metrics(&self) -> [f64; 4] {
        [
            self.intrinsic_diameter.length,
            self.extrinsic_diameter.length,
            self.intrinsic_radius.length,
            self.extrinsic_radius.length,
        ]
    }
}

pub fn compute_report(t: &Tetrahedron, cfg: &Config) -> Result<MetricReport> {
    cfg.validate()?;
    let big_diam = intrinsic_diameter(t, cfg)?;
    let diam = extrinsic_diameter(t);
    let big_rad = intrinsic_radius(t, cfg)?;
    let rad = extrinsic_radius(t, cfg);
    let (p, q) = big_diam.pair;
    let diameter_geodesics = all_geodesic_segments(t, &p, &q, cfg.tolerances.opt_tol, cfg)?.len();
    Ok(MetricReport {
        tetrahedron: t.clone(),
        seed: None,
        ratios: Ratios::new(big_diam.length, diam.length, big_rad.length, rad.length),
        intrinsic_diameter: big_diam,
        extrinsic_diameter: diam,
        intrinsic_radius: big_rad,
        extrinsic_radius: rad,
        diameter_geodesics,
        config: *cfg,
    })
}

/// Which side of the bound the value must stay on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    AtLeast,
    AtMost,
}

/// One checked inequality: `margin = value − bound` for lower bounds and
/// `bound − value` for upper bounds, negative exactly when violated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Margin {
    pub inequality: &'static str,
    pub value: f64,
    pub bound: f64,
    pub side: Side,
    pub margin: f64,
}

/// Identifiers of the checked inequalities, in [`margins`] order.
pub const INEQUALITIES: [&str; 12] = [
    "Diam/diam >= 1",
    "Diam/diam <= 2/sqrt(3)",
    "Diam/diam <= pi/2",
    "Diam/Rad > 1",
    "Diam/Rad <= 2",
    "diam/rad > 1",
    "diam/rad <= 2",
    "Rad/diam <= 1",
    "Rad/rad >= 1",
    "Rad/rad < 2",
    "rad/Diam > sqrt(3)/4",
    "rad/Diam < 1",
];

/// Every inequality with its margin. Non-strict bounds are widened by `tol`;
/// strict ones are compared with the bound itself, except the two whose
/// bound is only approached in a limit.
pub fn margins(r: &Ratios, tol: f64) -> Vec<Margin> {
    let sqrt3 = 3f64.sqrt();
    let spec: [(f64, f64, Side); 12] = [
        (r.big_diam_diam, 1.0 - tol, Side::AtLeast),
        (r.big_diam_diam, 2.0 / sqrt3 + tol, Side::AtMost),
        (r.big_diam_diam, PI / 2.0, Side::AtMost),
        (r.big_diam_big_rad, 1.0, Side::AtLeast),
        (r.big_diam_big_rad, 2.0 + tol, Side::AtMost),
        (r.diam_rad, 1.0, Side::AtLeast),
        (r.diam_rad, 2.0 + tol, Side::AtMost),
        (r.big_rad_diam, 1.0 + tol, Side::AtMost),
        (r.big_rad_rad, 1.0 - tol, Side::AtLeast),
        (r.big_rad_rad, 2.0 + tol, Side::AtMost),
        (r.rad_big_diam, sqrt3 / 4.0 - tol, Side::AtLeast),
        (r.rad_big_diam, 1.0, Side::AtMost),
    ];
    INEQUALITIES
        .iter()
        .zip(spec)
        .map(|(&inequality, (value, bound, side))| Margin {
            inequality,
            value,
            bound,
            side,
            margin: match side {
                Side::AtLeast => value - bound,
                Side::AtMost => bound - value,
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub inequality: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub tetrahedron: Tetrahedron,
    pub seed: Option<u64>,
}

/// Violated inequalities of a report; the tetrahedron is recorded in
/// normalized form.
pub fn check_inequalities(report: &MetricReport, tol: f64) -> Vec<ViolationRecord> {
    let normal = crate::generators::normalize(&report.tetrahedron).unwrap_or_else(|_| report.tetrahedron.clone());
    margins(&report.ratios, tol)
        .into_iter()
        .filter(|m| m.margin < 0.0)
        .map(|m| ViolationRecord {
            inequality: m.inequality.to_string(),
            value: m.value,
            bound: m.bound,
            margin: m.margin,
            tetrahedron: normal.clone(),
            seed: report.seed,
        })
        .collect()
}
