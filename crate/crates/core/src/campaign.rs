//! Verification campaigns over generated families, extremal instances and
//! the Diam/Rad minimum search.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Result, TetraError};
use crate::generators::{from_edge_lengths, make_regular, normalize, shape_distance, GeneratorSpec};
use crate::geometry::{Tetrahedron, EDGES};
use crate::optimize::pattern_search;
use crate::report::{check_inequalities, compute_report, margins, Ratios, ViolationRecord, INEQUALITIES, RATIO_NAMES};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "TETRA_THREADS";

/// Iterations of the Diam/Rad refinement.
pub const REFINE_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRow {
    pub index: u64,
    pub seed: u64,
    /// Normalized form the metrics were computed on.
    pub tetrahedron: Option<Tetrahedron>,
    /// `(Diam, diam, Rad, rad)`.
    pub metrics: Option<[f64; 4]>,
    pub ratios: Option<Ratios>,
    pub margins: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalEntry {
    pub ratio: &'static str,
    /// `"min"` or `"max"`.
    pub extreme: &'static str,
    pub value: f64,
    pub index: u64,
    pub seed: u64,
    pub tetrahedron: Tetrahedron,
}

/// Outcome of the local search for small Diam/Rad. Numerical evidence only.
#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub label: &'static str,
    pub start_index: u64,
    pub start_value: f64,
    pub value: f64,
    pub iterations: usize,
    pub tetrahedron: Tetrahedron,
    /// Shape distance of the best shape found to the regular tetrahedron.
    pub distance_to_regular: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignResult {
    pub model: &'static str,
    pub seed: u64,
    pub rows: Vec<InstanceRow>,
    pub extremal: Vec<ExtremalEntry>,
    pub violations: Vec<ViolationRecord>,
    pub refinement: Option<Refinement>,
}

impl CampaignResult {
    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Smallest Diam/Rad over the instances and the refinement, with the
    /// shape attaining it.
    pub fn min_diam_over_rad(&self) -> Option<(f64, Tetrahedron)> {
        let mut best: Option<(f64, Tetrahedron)> = self
            .rows
            .iter()
            .filter_map(|r| Some((r.ratios?.big_diam_big_rad, r.tetrahedron.clone()?)))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(refined) = &self.refinement {
            if best.as_ref().map_or(true, |b| refined.value < b.0) {
                best = Some((refined.value, refined.tetrahedron.clone()));
            }
        }
        best
    }
}

/// Worker count: `TETRA_THREADS` when set to a positive integer, otherwise
/// rayon's default.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

fn evaluate(spec: &GeneratorSpec, index: u64, cfg: &Config, tol: f64) -> (InstanceRow, Vec<ViolationRecord>) {
    let mut row = InstanceRow {
        index,
        seed: spec.seed,
        tetrahedron: None,
        metrics: None,
        ratios: None,
        margins: Vec::new(),
        error: None,
    };
    let outcome = spec
        .generate(index)
        .and_then(|t| normalize(&t))
        .and_then(|t| compute_report(&t, cfg));
    match outcome {
        Ok(mut report) => {
            report.seed = Some(spec.seed);
            row.margins = margins(&report.ratios, tol).iter().map(|m| m.margin).collect();
            row.metrics = Some(report.metrics());
            row.ratios = Some(report.ratios);
            row.tetrahedron = Some(report.tetrahedron.clone());
            (row, check_inequalities(&report, tol))
        }
        Err(e) => {
            log::warn!("instance {index}: {e}");
            row.error = Some(e.to_string());
            (row, Vec::new())
        }
    }
}

/// Generates, reports and checks `n` instances of `spec` keyed by `seed`,
/// then refines the instance with the smallest Diam/Rad. Inequalities are
/// checked with tolerance `cfg.tolerances.opt_tol`. Instances that fail are
/// recorded and skipped.
pub fn campaign(spec: &GeneratorSpec, n: usize, seed: u64, cfg: &Config) -> Result<CampaignResult> {
    campaign_with(spec, n, seed, cfg, REFINE_ITERATIONS)
}

pub fn campaign_with(
    spec: &GeneratorSpec,
    n: usize,
    seed: u64,
    cfg: &Config,
    refine_iterations: usize,
) -> Result<CampaignResult> {
    if n == 0 {
        return Err(TetraError::InvalidParameter("invalid count: n must be at least 1".into()));
    }
    cfg.validate()?;
    let spec = GeneratorSpec { seed, ..*spec };
    let tol = cfg.tolerances.opt_tol;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| TetraError::InvalidConfig(e.to_string()))?;
    let mut evaluated: Vec<(InstanceRow, Vec<ViolationRecord>)> =
        pool.install(|| (0..n as u64).into_par_iter().map(|i| evaluate(&spec, i, cfg, tol)).collect());
    evaluated.sort_by_key(|(r, _)| r.index);

    let mut rows = Vec::with_capacity(n);
    let mut violations = Vec::new();
    for (row, v) in evaluated {
        rows.push(row);
        violations.extend(v);
    }
    let extremal = extremal_table(&rows);
    let refinement = if refine_iterations > 0 {
        refine_min_diam_over_rad(&rows, cfg, refine_iterations, seed)
    } else {
        None
    };
    Ok(CampaignResult {
        model: spec.kind.name(),
        seed,
        rows,
        extremal,
        violations,
        refinement,
    })
}

/// Argmin and argmax of every ratio; ties go to the lower index.
pub fn extremal_table(rows: &[InstanceRow]) -> Vec<ExtremalEntry> {
    let ok: Vec<(&InstanceRow, [f64; 6])> = rows
        .iter()
        .filter_map(|r| Some((r, r.ratios?.values())))
        .collect();
    let mut out = Vec::new();
    if ok.is_empty() {
        return out;
    }
    for (k, &name) in RATIO_NAMES.iter().enumerate() {
        let lo = ok.iter().min_by(|a, b| a.1[k].total_cmp(&b.1[k])).expect("non-empty");
        let hi = ok.iter().rev().max_by(|a, b| a.1[k].total_cmp(&b.1[k])).expect("non-empty");
        for (extreme, (row, vals)) in [("min", lo), ("max", hi)] {
            out.push(ExtremalEntry {
                ratio: name,
                extreme,
                value: vals[k],
                index: row.index,
                seed: row.seed,
                tetrahedron: row.tetrahedron.clone().expect("successful row"),
            });
        }
    }
    out
}

fn diam_over_rad(t: &Tetrahedron, cfg: &Config) -> Result<f64> {
    let big_diam = crate::intrinsic::intrinsic_diameter(t, cfg)?.length;
    let big_rad = crate::intrinsic::intrinsic_radius(t, cfg)?.length;
    Ok(big_diam / big_rad)
}

/// Shape with edge `01` of length one and the other five edges from `z`.
fn shape_from(z: &[f64]) -> Result<Tetrahedron> {
    from_edge_lengths([1.0, z[0], z[1], z[2], z[3], z[4]])
}

/// Pattern search on Diam/Rad over edge-length space, started from the row
/// with the smallest value. The search directions are drawn from `seed`.
pub fn refine_min_diam_over_rad(rows: &[InstanceRow], cfg: &Config, iterations: usize, seed: u64) -> Option<Refinement> {
    let start = rows
        .iter()
        .filter(|r| r.ratios.is_some())
        .min_by(|a, b| {
            let (x, y) = (a.ratios.unwrap().big_diam_big_rad, b.ratios.unwrap().big_diam_big_rad);
            x.total_cmp(&y).then(a.index.cmp(&b.index))
        })?;
    let t0 = start.tetrahedron.as_ref()?;
    let start_value = start.ratios?.big_diam_big_rad;
    let l = t0.edge_lengths().map(|x| x / t0.edge_lengths()[0]);
    let objective = |z: &[f64]| shape_from(z).and_then(|t| diam_over_rad(&t, cfg)).unwrap_or(f64::INFINITY);
    let r = pattern_search(objective, &l[1..], 0.1, iterations, seed);
    let (value, tetrahedron) = if r.f < start_value {
        (r.f, normalize(&shape_from(&r.x).ok()?).ok()?)
    } else {
        (start_value, t0.clone())
    };
    let regular = make_regular(1.0).ok()?;
    Some(Refinement {
        label: "evidence",
        start_index: start.index,
        start_value,
        value,
        iterations: r.iterations,
        distance_to_regular: shape_distance(&tetrahedron, &regular),
        tetrahedron,
    })
}

/// CSV header: index, seed, six normalized edge lengths, four metrics, six
/// ratios, one margin per checked inequality, error.
pub fn csv_header() -> Vec<String> {
    let mut h = vec!["index".to_string(), "seed".to_string()];
    h.extend(EDGES.iter().map(|[i, j]| format!("l{i}{j}")));
    h.extend(["Diam", "diam", "Rad", "rad"].map(String::from));
    h.extend(RATIO_NAMES.map(String::from));
    h.extend(INEQUALITIES.iter().map(|s| format!("margin {s}")));
    h.push("error".into());
    h
}

pub fn write_csv<W: Write>(rows: &[InstanceRow], out: W) -> Result<()> {
    let io = |e: csv::Error| TetraError::InvalidParameter(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header()).map_err(io)?;
    let num = |x: f64| format!("{:.12e}", x);
    for r in rows {
        let mut rec = vec![r.index.to_string(), r.seed.to_string()];
        match (&r.tetrahedron, r.metrics, r.ratios) {
            (Some(t), Some(m), Some(q)) => {
                rec.extend(t.edge_lengths().iter().map(|&x| num(x)));
                rec.extend(m.iter().map(|&x| num(x)));
                rec.extend(q.values().iter().map(|&x| num(x)));
                rec.extend(r.margins.iter().map(|&x| num(x)));
            }
            _ => rec.extend(std::iter::repeat(String::new()).take(6 + 4 + 6 + INEQUALITIES.len())),
        }
        rec.push(r.error.clone().unwrap_or_default());
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| TetraError::InvalidParameter(format!("csv: {e}")))?;
    Ok(())
}
