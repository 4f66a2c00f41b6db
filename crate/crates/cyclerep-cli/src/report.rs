//! Report serialization: a JSON document with stable key order carrying
//! the run configuration, barcode, per-cycle records (chains as exact
//! fractions), and an aggregate summary, plus flat CSV exports.
//!
//! Costs and chain coefficients appear both as exact fraction strings
//! and as binary64 convenience values; the exact fields are the source
//! of truth. Solver timings are deliberately absent so that identical
//! configuration and seed produce byte-identical files.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use cyclerep_core::complex::{Chain, FilteredComplex};
use cyclerep_core::metrics::{
    aggregate_report, CoeffClass, CycleStats, ReportSummary, SummaryStat,
};
pub use cyclerep_core::rational::rat_to_string;
use cyclerep_core::rational::{ExactRational, SparseColumn};

/// One chain entry: edge vertices, then numerator and denominator of
/// the exact coefficient.
pub type ChainEntryDto = ((usize, usize), String, String);

/// One volume entry: triangle vertices, then the exact coefficient.
pub type VolumeEntryDto = ((usize, usize, usize), String, String);

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct ConfigDto {
    pub source: String,
    pub source_kind: String,
    pub max_eps: Option<f64>,
    #[serde(default)]
    pub program: Option<String>,
    #[serde(default)]
    pub weights: Option<String>,
    pub integral: bool,
    #[serde(default)]
    pub strategy: Option<String>,
    pub seed: u64,
    pub dedupe: bool,
    pub replacement: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct CountsDto {
    pub points: usize,
    pub edges: usize,
    pub triangles: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IntervalDto {
    pub index: usize,
    pub dimension: usize,
    pub birth: f64,
    pub death: Option<f64>,
    pub birth_exact: String,
    pub death_exact: Option<String>,
    pub birth_simplex: usize,
    pub death_simplex: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CycleDto {
    pub interval_index: usize,
    /// Lifespan of the reported representative in display scale; for
    /// the filtered program the death may differ from the barcode row.
    pub birth: f64,
    pub death: Option<f64>,
    pub original_chain: Vec<ChainEntryDto>,
    pub optimized_chain: Vec<ChainEntryDto>,
    #[serde(default)]
    pub volume: Option<Vec<VolumeEntryDto>>,
    pub cost_before: String,
    pub cost_after: String,
    pub cost_before_value: f64,
    pub cost_after_value: f64,
    pub cost_ratio: String,
    pub cost_ratio_value: f64,
    pub coeff_class: String,
    pub num_loops: usize,
    pub support_size: usize,
    pub length_loss: f64,
    #[serde(default)]
    pub volume_support: Option<usize>,
    #[serde(default)]
    pub volume_area: Option<f64>,
    #[serde(default)]
    pub surveyor_area: Option<f64>,
    pub pivots: u64,
    pub branch_nodes: u64,
    #[serde(default)]
    pub lp_vs_mip_cost_equal: Option<bool>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct StatDto {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct SummaryDto {
    pub count: usize,
    #[serde(default)]
    pub loss_edge_unif: Option<StatDto>,
    #[serde(default)]
    pub loss_edge_len: Option<StatDto>,
    #[serde(default)]
    pub loss_tri_unif: Option<StatDto>,
    #[serde(default)]
    pub loss_tri_area: Option<StatDto>,
    #[serde(default)]
    pub surveyor_area: Option<StatDto>,
    #[serde(default)]
    pub cost_ratio: Option<StatDto>,
    #[serde(default)]
    pub pm1_zero_fraction: Option<f64>,
    #[serde(default)]
    pub integral_fraction: Option<f64>,
    #[serde(default)]
    pub lp_mip_equal_fraction: Option<f64>,
    #[serde(default)]
    pub cross_mode_equal_fraction: Option<f64>,
    pub loop_histogram: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub status: String,
    #[serde(default)]
    pub error: Option<String>,
    pub config: ConfigDto,
    pub counts: CountsDto,
    pub barcode: Vec<IntervalDto>,
    pub cycles: Vec<CycleDto>,
    #[serde(default)]
    pub summary: Option<SummaryDto>,
}

fn fraction(c: &ExactRational) -> (String, String) {
    (c.numer().to_string(), c.denom().to_string())
}

/// Parse an exact value written as "n" or "n/d".
pub fn parse_exact(text: &str) -> Result<ExactRational, String> {
    let make = |n: &str, d: &str| -> Result<ExactRational, String> {
        let numer = num_bigint::BigInt::from_str(n.trim())
            .map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let denom = num_bigint::BigInt::from_str(d.trim())
            .map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if denom == num_bigint::BigInt::from(0) {
            return Err(format!("zero denominator in {text:?}"));
        }
        Ok(ExactRational::new(numer, denom))
    };
    match text.split_once('/') {
        Some((n, d)) => make(n, d),
        None => make(text, "1"),
    }
}

pub fn chain_to_dto(chain: &Chain, k: &FilteredComplex) -> Vec<ChainEntryDto> {
    chain
        .entries()
        .iter()
        .map(|(e, c)| {
            let v = k.simplex(1, *e).vertices();
            let (n, d) = fraction(c);
            ((v[0], v[1]), n, d)
        })
        .collect()
}

pub fn volume_to_dto(v: &SparseColumn, k: &FilteredComplex) -> Vec<VolumeEntryDto> {
    v.iter()
        .map(|(t, c)| {
            let w = k.simplex(2, *t).vertices();
            let (n, d) = fraction(c);
            ((w[0], w[1], w[2]), n, d)
        })
        .collect()
}

pub fn coeff_class_name(class: CoeffClass) -> &'static str {
    match class {
        CoeffClass::Pm1Zero => "pm1-zero",
        CoeffClass::Integral => "integral",
        CoeffClass::Fractional => "fractional",
    }
}

pub fn coeff_class_from_name(name: &str) -> Result<CoeffClass, String> {
    match name {
        "pm1-zero" => Ok(CoeffClass::Pm1Zero),
        "integral" => Ok(CoeffClass::Integral),
        "fractional" => Ok(CoeffClass::Fractional),
        other => Err(format!("unknown coefficient class {other:?}")),
    }
}

fn stat_dto(s: &SummaryStat) -> StatDto {
    StatDto { min: s.min, median: s.median, mean: s.mean, max: s.max }
}

pub fn summary_to_dto(s: &ReportSummary) -> SummaryDto {
    SummaryDto {
        count: s.count,
        loss_edge_unif: s.loss_edge_unif.as_ref().map(stat_dto),
        loss_edge_len: s.loss_edge_len.as_ref().map(stat_dto),
        loss_tri_unif: s.loss_tri_unif.as_ref().map(stat_dto),
        loss_tri_area: s.loss_tri_area.as_ref().map(stat_dto),
        surveyor_area: s.surveyor_area.as_ref().map(stat_dto),
        cost_ratio: s.cost_ratio.as_ref().map(stat_dto),
        pm1_zero_fraction: s.pm1_zero_fraction,
        integral_fraction: s.integral_fraction,
        lp_mip_equal_fraction: s.lp_mip_equal_fraction,
        cross_mode_equal_fraction: s.cross_mode_equal_fraction,
        loop_histogram: s.loop_histogram.clone(),
    }
}

/// Reconstruct aggregable rows from serialized cycle records; exact
/// fields are parsed back to rationals.
pub fn stats_from_cycles(cycles: &[CycleDto]) -> Result<Vec<CycleStats>, String> {
    cycles
        .iter()
        .map(|c| {
            Ok(CycleStats {
                interval_index: c.interval_index,
                birth: c.birth,
                death: c.death,
                loss_edge_unif: c.support_size,
                loss_edge_len: c.length_loss,
                loss_tri_unif: c.volume_support,
                loss_tri_area: c.volume_area,
                surveyor_area: c.surveyor_area,
                num_loops: c.num_loops,
                coeff_class: coeff_class_from_name(&c.coeff_class)?,
                cost_before: parse_exact(&c.cost_before)?,
                cost_after: parse_exact(&c.cost_after)?,
                cost_ratio_vs_original: parse_exact(&c.cost_ratio)?,
                solve_time: core::time::Duration::ZERO,
                lp_vs_mip_cost_equal: c.lp_vs_mip_cost_equal,
                cross_mode_equal: None,
                pivots: c.pivots,
                branch_nodes: c.branch_nodes,
            })
        })
        .collect()
}

/// Recompute the aggregate block from the serialized per-cycle rows.
pub fn summarize_cycles(cycles: &[CycleDto]) -> Result<SummaryDto, String> {
    let stats = stats_from_cycles(cycles)?;
    Ok(summary_to_dto(&aggregate_report(&stats)))
}

/// Serialize with a trailing newline; key order follows the struct
/// declarations and is stable across runs.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

fn opt_string<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// Flat per-cycle CSV. Chains are not included; the JSON report is the
/// full record.
pub fn cycles_to_csv(cycles: &[CycleDto]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "interval_index",
        "birth",
        "death",
        "cost_before",
        "cost_after",
        "cost_ratio",
        "coeff_class",
        "num_loops",
        "support_size",
        "length_loss",
        "volume_support",
        "volume_area",
        "surveyor_area",
        "pivots",
        "branch_nodes",
        "lp_vs_mip_cost_equal",
    ])?;
    for c in cycles {
        w.write_record([
            c.interval_index.to_string(),
            c.birth.to_string(),
            opt_string(&c.death),
            c.cost_before.clone(),
            c.cost_after.clone(),
            c.cost_ratio.clone(),
            c.coeff_class.clone(),
            c.num_loops.to_string(),
            c.support_size.to_string(),
            c.length_loss.to_string(),
            opt_string(&c.volume_support),
            opt_string(&c.volume_area),
            opt_string(&c.surveyor_area),
            c.pivots.to_string(),
            c.branch_nodes.to_string(),
            opt_string(&c.lp_vs_mip_cost_equal),
        ])?;
    }
    let bytes = w.into_inner().expect("in-memory writer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Flat barcode CSV.
pub fn barcode_to_csv(barcode: &[IntervalDto]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "index",
        "dimension",
        "birth",
        "death",
        "birth_exact",
        "death_exact",
        "birth_simplex",
        "death_simplex",
    ])?;
    for b in barcode {
        w.write_record([
            b.index.to_string(),
            b.dimension.to_string(),
            b.birth.to_string(),
            opt_string(&b.death),
            b.birth_exact.clone(),
            opt_string(&b.death_exact),
            b.birth_simplex.to_string(),
            opt_string(&b.death_simplex),
        ])?;
    }
    let bytes = w.into_inner().expect("in-memory writer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
