//! Pipeline orchestration: input → filtration → persistence → chosen
//! optimizer → per-cycle metrics → report.
//!
//! Runs always return a report; failures mark it with an error status
//! and whatever stages completed, so partial results are never lost.

use std::path::PathBuf;

use anyhow::{anyhow, Context};
use cyclerep_core::complex::{DissimilarityMatrix, FilteredComplex};
use cyclerep_core::edge_opt::{
    optimize_basis_filtered, optimize_basis_persistent, EdgeWeight, OptimizedBasis,
};
use cyclerep_core::lp::Solver;
use cyclerep_core::metrics::{
    aggregate_report, classify_coefficients, loop_count, loss, surveyor_area, AreaOutcome,
    CycleStats, LossMode, OptimizationRecord,
};
use cyclerep_core::persistence::{analyze, PersistenceAnalysis};
use cyclerep_core::rational::{rat_int, rat_to_f64, SparseColumn};
use cyclerep_core::tri_opt::{
    optimize_basis_triangle, volume_cost, SlicingStrategy, TriangleWeight,
};

use crate::generate::{generate, Generated, GeneratorKind};
use crate::ingest;
use crate::report::{
    chain_to_dto, rat_to_string, summary_to_dto, volume_to_dto, ConfigDto, CountsDto, CycleDto,
    IntervalDto, Report,
};
use crate::WallClock;

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    DistanceFile(PathBuf),
    PointFile(PathBuf),
    Generated { kind: GeneratorKind, n: usize, dim: usize },
}

impl InputSource {
    fn kind_name(&self) -> &'static str {
        match self {
            InputSource::DistanceFile(_) => "distances",
            InputSource::PointFile(_) => "points",
            InputSource::Generated { .. } => "generator",
        }
    }

    fn describe(&self) -> String {
        match self {
            InputSource::DistanceFile(p) | InputSource::PointFile(p) => p.display().to_string(),
            InputSource::Generated { kind, n, dim } => {
                format!("{} n={n} dim={dim}", kind.as_str())
            }
        }
    }

    /// Whether the source yields Euclidean point coordinates (required
    /// for area weights).
    fn is_euclidean(&self) -> bool {
        match self {
            InputSource::PointFile(_) => true,
            InputSource::Generated { kind, .. } => *kind != GeneratorKind::ErdosRenyi,
            InputSource::DistanceFile(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProgramKind {
    EdgePersistent,
    EdgeFiltered,
    Triangle,
}

impl ProgramKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProgramKind::EdgePersistent => "edge-persistent",
            ProgramKind::EdgeFiltered => "edge-filtered",
            ProgramKind::Triangle => "triangle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Uniform,
    Length,
    Area,
}

impl WeightMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::Uniform => "uniform",
            WeightMode::Length => "length",
            WeightMode::Area => "area",
        }
    }
}

pub fn strategy_name(s: SlicingStrategy) -> &'static str {
    match s {
        SlicingStrategy::ZeroOut => "zero-out",
        SlicingStrategy::BuildAll => "build-all",
        SlicingStrategy::BuildPart => "build-part",
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: InputSource,
    pub max_eps: Option<f64>,
    pub program: ProgramKind,
    pub weight: WeightMode,
    pub integral: bool,
    pub strategy: SlicingStrategy,
    pub seed: u64,
    pub dedupe: bool,
    /// Sequential replacement inside the persistent edge driver; the
    /// experimental no-replacement mode sets this false.
    pub replace: bool,
}

fn validate(config: &RunConfig) -> anyhow::Result<()> {
    match config.weight {
        WeightMode::Area => {
            if config.program != ProgramKind::Triangle {
                return Err(anyhow!(
                    "area weights require the triangle program, not {}",
                    config.program.as_str()
                ));
            }
            if !config.source.is_euclidean() {
                return Err(anyhow!(
                    "area weights require Euclidean point input, not {}",
                    config.source.kind_name()
                ));
            }
        }
        WeightMode::Length => {
            if config.program == ProgramKind::Triangle {
                return Err(anyhow!("length weights apply to the edge programs only"));
            }
        }
        WeightMode::Uniform => {}
    }
    Ok(())
}

fn dedupe_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !kept.iter().any(|q| q == &p) {
            kept.push(p);
        }
    }
    kept
}

fn materialize(config: &RunConfig) -> anyhow::Result<DissimilarityMatrix> {
    match &config.source {
        InputSource::DistanceFile(path) => {
            ingest::read_distance_matrix(path, config.dedupe)
                .with_context(|| format!("reading distance matrix {}", path.display()))
                .map_err(Into::into)
        }
        InputSource::PointFile(path) => {
            let pts = ingest::read_point_cloud(path, config.dedupe)
                .with_context(|| format!("reading point cloud {}", path.display()))?;
            DissimilarityMatrix::from_points(&pts).map_err(Into::into)
        }
        InputSource::Generated { kind, n, dim } => {
            match generate(*kind, *n, *dim, config.seed).context("generating input")? {
                Generated::Points(mut pts) => {
                    if config.dedupe {
                        pts = dedupe_points(pts);
                    }
                    DissimilarityMatrix::from_points(&pts).map_err(Into::into)
                }
                Generated::Matrix(rows) => {
                    DissimilarityMatrix::from_f64_rows(&rows).map_err(Into::into)
                }
            }
        }
    }
}

fn config_dto(command: &str, config: &RunConfig) -> ConfigDto {
    let optimizing = command == "optimize";
    ConfigDto {
        source: config.source.describe(),
        source_kind: config.source.kind_name().to_string(),
        max_eps: config.max_eps,
        program: optimizing.then(|| config.program.as_str().to_string()),
        weights: optimizing.then(|| config.weight.as_str().to_string()),
        integral: config.integral,
        strategy: (optimizing && config.program == ProgramKind::Triangle)
            .then(|| strategy_name(config.strategy).to_string()),
        seed: config.seed,
        dedupe: config.dedupe,
        replacement: config.replace,
    }
}

fn base_report(command: &str, config: &RunConfig) -> Report {
    Report {
        tool: "cyclerep".to_string(),
        command: command.to_string(),
        status: "ok".to_string(),
        error: None,
        config: config_dto(command, config),
        counts: CountsDto::default(),
        barcode: Vec::new(),
        cycles: Vec::new(),
        summary: None,
    }
}

fn mark_failed(report: &mut Report, err: &anyhow::Error) {
    report.status = "error".to_string();
    report.error = Some(format!("{err:#}"));
}

fn interval_dtos(k: &FilteredComplex, a: &PersistenceAnalysis) -> Vec<IntervalDto> {
    a.barcode
        .iter()
        .enumerate()
        .map(|(i, p)| IntervalDto {
            index: i,
            dimension: p.dimension,
            birth: k.display_value(&p.birth_value),
            death: p.death_value.as_ref().map(|d| k.display_value(d)),
            birth_exact: rat_to_string(&p.birth_value),
            death_exact: p.death_value.as_ref().map(rat_to_string),
            birth_simplex: p.birth_simplex,
            death_simplex: p.death_simplex,
        })
        .collect()
}

fn counts_dto(k: &FilteredComplex) -> CountsDto {
    CountsDto { points: k.num_vertices(), edges: k.count(1), triangles: k.count(2) }
}

/// Build the complex and report the barcode without optimizing.
pub fn run_barcode(config: &RunConfig) -> (Report, Option<anyhow::Error>) {
    let mut report = base_report("barcode", config);
    let d = match materialize(config) {
        Ok(d) => d,
        Err(e) => {
            mark_failed(&mut report, &e);
            return (report, Some(e));
        }
    };
    let stage = build_and_analyze(&d, config);
    match stage {
        Ok((k, a)) => {
            report.counts = counts_dto(&k);
            report.barcode = interval_dtos(&k, &a);
            (report, None)
        }
        Err(e) => {
            mark_failed(&mut report, &e);
            (report, Some(e))
        }
    }
}

fn build_and_analyze(
    d: &DissimilarityMatrix,
    config: &RunConfig,
) -> anyhow::Result<(FilteredComplex, PersistenceAnalysis)> {
    let k = FilteredComplex::build_vr(d, config.max_eps, 2).context("building filtration")?;
    let a = analyze(&k).context("computing persistence")?;
    Ok((k, a))
}

struct OptimizerOutput {
    optimized: OptimizedBasis,
    volumes: Option<Vec<Option<SparseColumn>>>,
}

fn dispatch_optimizer(
    config: &RunConfig,
    k: &FilteredComplex,
    a: &PersistenceAnalysis,
) -> anyhow::Result<OptimizerOutput> {
    let solver = Solver::default();
    let clock = WallClock::new();
    match config.program {
        ProgramKind::EdgePersistent | ProgramKind::EdgeFiltered => {
            let weight = match config.weight {
                WeightMode::Uniform => EdgeWeight::Uniform,
                WeightMode::Length => EdgeWeight::Length,
                WeightMode::Area => unreachable!("rejected by validation"),
            };
            let optimized = if config.program == ProgramKind::EdgePersistent {
                optimize_basis_persistent(
                    &a.basis,
                    k,
                    &a.dec2,
                    weight,
                    config.integral,
                    &solver,
                    &clock,
                    config.replace,
                )
            } else {
                optimize_basis_filtered(
                    &a.basis,
                    k,
                    &a.dec1,
                    &a.dec2,
                    weight,
                    config.integral,
                    &solver,
                    &clock,
                )
            }
            .context("edge-loss optimization")?;
            Ok(OptimizerOutput { optimized, volumes: None })
        }
        ProgramKind::Triangle => {
            let weight = match config.weight {
                WeightMode::Uniform => TriangleWeight::Uniform,
                WeightMode::Area => TriangleWeight::Area,
                WeightMode::Length => unreachable!("rejected by validation"),
            };
            let out = optimize_basis_triangle(
                &a.basis,
                k,
                &a.dec2,
                weight,
                config.integral,
                config.strategy,
                &solver,
                &clock,
            )
            .context("triangle-loss optimization")?;
            Ok(OptimizerOutput { optimized: out.result, volumes: Some(out.volumes) })
        }
    }
}

/// One row per basis element: serialized cycle record plus the
/// aggregable stats twin.
fn cycle_rows(
    k: &FilteredComplex,
    a: &PersistenceAnalysis,
    out: &OptimizerOutput,
) -> (Vec<CycleDto>, Vec<CycleStats>) {
    let records: std::collections::BTreeMap<usize, &OptimizationRecord> =
        out.optimized.records.iter().map(|r| (r.interval_index, r)).collect();
    let mut dtos = Vec::with_capacity(out.optimized.basis.len());
    let mut stats = Vec::with_capacity(out.optimized.basis.len());
    for (j, rep) in out.optimized.basis.iter().enumerate() {
        let original = &a.basis[j];
        let record = records.get(&j).copied();
        let zero = rat_int(0);
        let (cost_before, cost_after, ratio) = match record {
            Some(r) => (r.cost_before.clone(), r.cost_after.clone(), r.cost_ratio()),
            None => (zero.clone(), zero.clone(), rat_int(1)),
        };
        let chain = &rep.chain;
        let coeff_class = classify_coefficients(chain);
        let length_loss =
            rat_to_f64(&loss(chain, LossMode::EdgeLen, k).expect("edge chain length loss"));
        let volume = out
            .volumes
            .as_ref()
            .and_then(|vols| vols.get(j).cloned().flatten());
        let volume_support = volume.as_ref().map(Vec::len);
        let volume_area = volume
            .as_ref()
            .and_then(|v| volume_cost(k, v, TriangleWeight::Area).ok())
            .map(|c| rat_to_f64(&c));
        let area = k.coords().and_then(|pts| match surveyor_area(chain, pts, k) {
            AreaOutcome::Eligible(v) => Some(v),
            AreaOutcome::Ineligible(_) => None,
        });
        let birth = k.display_value(&rep.birth);
        let death = rep.death.as_ref().map(|d| k.display_value(d));
        dtos.push(CycleDto {
            interval_index: j,
            birth,
            death,
            original_chain: chain_to_dto(&original.chain, k),
            optimized_chain: chain_to_dto(chain, k),
            volume: volume.as_ref().map(|v| volume_to_dto(v, k)),
            cost_before: rat_to_string(&cost_before),
            cost_after: rat_to_string(&cost_after),
            cost_before_value: rat_to_f64(&cost_before),
            cost_after_value: rat_to_f64(&cost_after),
            cost_ratio: rat_to_string(&ratio),
            cost_ratio_value: rat_to_f64(&ratio),
            coeff_class: crate::report::coeff_class_name(coeff_class).to_string(),
            num_loops: loop_count(chain, k),
            support_size: chain.support_size(),
            length_loss,
            volume_support,
            volume_area,
            surveyor_area: area,
            pivots: record.map_or(0, |r| r.pivots),
            branch_nodes: record.map_or(0, |r| r.branch_nodes),
            lp_vs_mip_cost_equal: record.and_then(|r| r.lp_vs_mip_cost_equal),
        });
        stats.push(CycleStats {
            interval_index: j,
            birth,
            death,
            loss_edge_unif: chain.support_size(),
            loss_edge_len: length_loss,
            loss_tri_unif: volume_support,
            loss_tri_area: volume_area,
            surveyor_area: area,
            num_loops: loop_count(chain, k),
            coeff_class,
            cost_before,
            cost_after,
            cost_ratio_vs_original: ratio,
            solve_time: record.map_or(core::time::Duration::ZERO, |r| r.solve_time),
            lp_vs_mip_cost_equal: record.and_then(|r| r.lp_vs_mip_cost_equal),
            cross_mode_equal: None,
            pivots: record.map_or(0, |r| r.pivots),
            branch_nodes: record.map_or(0, |r| r.branch_nodes),
        });
    }
    (dtos, stats)
}

/// Full pipeline: ingest or generate, filter, analyze, optimize,
/// measure, aggregate.
pub fn run_optimize(config: &RunConfig) -> (Report, Option<anyhow::Error>) {
    let mut report = base_report("optimize", config);
    if let Err(e) = validate(config) {
        mark_failed(&mut report, &e);
        return (report, Some(e));
    }
    let d = match materialize(config) {
        Ok(d) => d,
        Err(e) => {
            mark_failed(&mut report, &e);
            return (report, Some(e));
        }
    };
    let (k, a) = match build_and_analyze(&d, config) {
        Ok(pair) => pair,
        Err(e) => {
            mark_failed(&mut report, &e);
            return (report, Some(e));
        }
    };
    report.counts = counts_dto(&k);
    report.barcode = interval_dtos(&k, &a);
    let out = match dispatch_optimizer(config, &k, &a) {
        Ok(out) => out,
        Err(e) => {
            // Partial result: the barcode stage completed and stays in
            // the report alongside the failure marker.
            mark_failed(&mut report, &e);
            return (report, Some(e));
        }
    };
    let (dtos, stats) = cycle_rows(&k, &a, &out);
    report.cycles = dtos;
    report.summary = Some(summary_to_dto(&aggregate_report(&stats)));
    (report, None)
}
