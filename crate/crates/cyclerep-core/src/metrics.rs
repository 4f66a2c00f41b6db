//! Evaluation of cycle representatives: weighted losses, loop counts,
//! planar (surveyor's) area with exact eligibility predicates, coefficient
//! classification, per-run aggregation, and the timing hook the optimizers
//! use to report solve durations.

use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::complex::{triangle_area, Chain, ComplexError, FilteredComplex};
use crate::rational::{rat_from_float, rat_int, rat_to_f64, ExactRational};
use num_traits::{Signed, Zero};

/// Errors from loss evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    ChainDimensionMismatch { expected: usize, found: usize },
    AreaUnavailable(ComplexError),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::ChainDimensionMismatch { expected, found } => {
                write!(f, "chain has dimension {found}, loss mode needs {expected}")
            }
            MetricsError::AreaUnavailable(e) => write!(f, "triangle areas unavailable: {e}"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Which weighted support sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossMode {
    /// Number of support edges.
    EdgeUnif,
    /// Sum of support edge lengths.
    EdgeLen,
    /// Number of support triangles.
    TriUnif,
    /// Sum of support triangle areas.
    TriArea,
}

impl LossMode {
    fn chain_dimension(self) -> usize {
        match self {
            LossMode::EdgeUnif | LossMode::EdgeLen => 1,
            LossMode::TriUnif | LossMode::TriArea => 2,
        }
    }
}

/// Weighted ℓ₀-style loss: the weight of every support simplex counts
/// once, regardless of its coefficient. Length and area weights are the
/// exact rational embeddings of their binary64 values, so equality
/// comparisons between losses are exact.
pub fn loss(chain: &Chain, mode: LossMode, k: &FilteredComplex) -> Result<ExactRational, MetricsError> {
    let expected = mode.chain_dimension();
    if chain.dimension() != expected {
        return Err(MetricsError::ChainDimensionMismatch { expected, found: chain.dimension() });
    }
    let mut total = ExactRational::zero();
    for &(i, _) in chain.entries() {
        let w = match mode {
            LossMode::EdgeUnif | LossMode::TriUnif => rat_int(1),
            LossMode::EdgeLen => {
                rat_from_float(k.edge_length(i)).expect("edge lengths are finite")
            }
            LossMode::TriArea => {
                let a = triangle_area(k, i).map_err(MetricsError::AreaUnavailable)?;
                rat_from_float(a).expect("areas are finite")
            }
        };
        total += w;
    }
    Ok(total)
}

/// Number of independent loops in the support of a 1-chain: support size
/// minus the rank of ∂₁ restricted to the support columns.
pub fn loop_count(chain: &Chain, k: &FilteredComplex) -> usize {
    use crate::rational::{SparseColumn, SparseRationalMatrix};
    let columns: Vec<SparseColumn> = chain
        .support()
        .map(|e| {
            let vs = k.simplex(1, e).vertices();
            alloc::vec![(vs[0], rat_int(-1)), (vs[1], rat_int(1))]
        })
        .collect();
    let m = SparseRationalMatrix::from_columns(k.count(0), columns)
        .expect("edge endpoints are valid vertices");
    chain.support_size() - m.rank()
}

/// Why a planar area could not be reported for a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IneligibilityReason {
    /// The input carried no vertex coordinates at all.
    NoCoordinates,
    /// Coordinates exist but are not two-dimensional.
    AmbientNot2D,
    /// The support is not a single graph-theoretic cycle.
    NotSingleCycle,
    /// Two support segments touch beyond shared polygon vertices.
    SelfIntersecting,
}

/// Planar area of a support polygon, or the reason it is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaOutcome {
    Eligible(f64),
    Ineligible(IneligibilityReason),
}

fn orient(p: &(ExactRational, ExactRational), q: &(ExactRational, ExactRational), r: &(ExactRational, ExactRational)) -> ExactRational {
    (&q.0 - &p.0) * (&r.1 - &p.1) - (&q.1 - &p.1) * (&r.0 - &p.0)
}

fn on_closed_segment(
    a: &(ExactRational, ExactRational),
    b: &(ExactRational, ExactRational),
    p: &(ExactRational, ExactRational),
) -> bool {
    // Assumes p collinear with a-b.
    let (lox, hix) = if a.0 <= b.0 { (&a.0, &b.0) } else { (&b.0, &a.0) };
    let (loy, hiy) = if a.1 <= b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
    *lox <= p.0 && p.0 <= *hix && *loy <= p.1 && p.1 <= *hiy
}

fn closed_segments_intersect(
    a: &(ExactRational, ExactRational),
    b: &(ExactRational, ExactRational),
    c: &(ExactRational, ExactRational),
    d: &(ExactRational, ExactRational),
) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1.is_positive() && o2.is_negative()) || (o1.is_negative() && o2.is_positive()))
        && ((o3.is_positive() && o4.is_negative()) || (o3.is_negative() && o4.is_positive()))
    {
        return true;
    }
    (o1.is_zero() && on_closed_segment(a, b, c))
        || (o2.is_zero() && on_closed_segment(a, b, d))
        || (o3.is_zero() && on_closed_segment(c, d, a))
        || (o4.is_zero() && on_closed_segment(c, d, b))
}

/// Area of the polygon traced by the support of a 1-chain via the
/// surveyor's (shoelace) formula.
///
/// Eligibility is decided with exact rational predicates on the embedded
/// coordinates: the support must be one graph cycle, and distinct support
/// segments may touch only where consecutive polygon edges share their
/// common vertex (in particular, no collinear overlap through a vertex and
/// no contact between non-adjacent segments). Orientation of traversal
/// does not matter; the result is nonnegative.
pub fn surveyor_area(chain: &Chain, points: &[Vec<f64>], k: &FilteredComplex) -> AreaOutcome {
    if points.is_empty() {
        return AreaOutcome::Ineligible(IneligibilityReason::NoCoordinates);
    }
    if points.iter().any(|p| p.len() != 2) {
        return AreaOutcome::Ineligible(IneligibilityReason::AmbientNot2D);
    }
    let support: Vec<[usize; 2]> = chain
        .support()
        .map(|e| {
            let vs = k.simplex(1, e).vertices();
            [vs[0], vs[1]]
        })
        .collect();
    if support.len() < 3 {
        return AreaOutcome::Ineligible(IneligibilityReason::NotSingleCycle);
    }

    // Single cycle: every touched vertex has degree 2 and one walk closes
    // through all support edges.
    let mut adjacency: alloc::collections::BTreeMap<usize, Vec<usize>> =
        alloc::collections::BTreeMap::new();
    for &[u, v] in &support {
        adjacency.entry(u).or_default().push(v);
        adjacency.entry(v).or_default().push(u);
    }
    if adjacency.values().any(|n| n.len() != 2) || adjacency.len() != support.len() {
        return AreaOutcome::Ineligible(IneligibilityReason::NotSingleCycle);
    }
    let start = *adjacency.keys().next().expect("support nonempty");
    let mut cycle = alloc::vec![start];
    let mut prev = start;
    let mut here = adjacency[&start][0];
    while here != start {
        cycle.push(here);
        let ns = &adjacency[&here];
        let next = if ns[0] == prev { ns[1] } else { ns[0] };
        prev = here;
        here = next;
    }
    if cycle.len() != support.len() {
        return AreaOutcome::Ineligible(IneligibilityReason::NotSingleCycle);
    }

    let coord = |v: usize| -> (ExactRational, ExactRational) {
        (
            rat_from_float(points[v][0]).expect("coordinates are finite"),
            rat_from_float(points[v][1]).expect("coordinates are finite"),
        )
    };
    let ring: Vec<(ExactRational, ExactRational)> = cycle.iter().map(|&v| coord(v)).collect();
    let m = ring.len();

    // Degenerate zero-length segments can only arise from coincident
    // points; they make containment questions meaningless.
    for i in 0..m {
        if ring[i] == ring[(i + 1) % m] {
            return AreaOutcome::Ineligible(IneligibilityReason::SelfIntersecting);
        }
    }
    for i in 0..m {
        let (a, b) = (&ring[i], &ring[(i + 1) % m]);
        for j in (i + 1)..m {
            let (c, d) = (&ring[j], &ring[(j + 1) % m]);
            let shared = if j == i + 1 {
                Some(b)
            } else if i == 0 && j == m - 1 {
                Some(a)
            } else {
                None
            };
            match shared {
                Some(s) => {
                    // Consecutive polygon edges pivot at s; they overlap
                    // beyond s exactly when collinear and extending the
                    // same way.
                    let (far1, far2) = if s == b { (a, d) } else { (b, c) };
                    if orient(s, far1, far2).is_zero() {
                        let dot = (&far1.0 - &s.0) * (&far2.0 - &s.0)
                            + (&far1.1 - &s.1) * (&far2.1 - &s.1);
                        if !dot.is_negative() {
                            return AreaOutcome::Ineligible(IneligibilityReason::SelfIntersecting);
                        }
                    }
                }
                None => {
                    if closed_segments_intersect(a, b, c, d) {
                        return AreaOutcome::Ineligible(IneligibilityReason::SelfIntersecting);
                    }
                }
            }
        }
    }

    let mut twice_area = ExactRational::zero();
    for i in 0..m {
        let (p, q) = (&ring[i], &ring[(i + 1) % m]);
        twice_area += &p.0 * &q.1 - &q.0 * &p.1;
    }
    AreaOutcome::Eligible(rat_to_f64(&twice_area.abs()) / 2.0)
}

/// Coefficient character of a chain. The classes nest: every ±1/0 chain is
/// integral; the empty chain counts as ±1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffClass {
    Pm1Zero,
    Integral,
    Fractional,
}

pub fn classify_coefficients(chain: &Chain) -> CoeffClass {
    let one = rat_int(1);
    let mut all_pm1 = true;
    for (_, c) in chain.entries() {
        if !c.is_integer() {
            return CoeffClass::Fractional;
        }
        if c.abs() != one {
            all_pm1 = false;
        }
    }
    if all_pm1 {
        CoeffClass::Pm1Zero
    } else {
        CoeffClass::Integral
    }
}

/// Monotone time source the optimizers query around each solve. The
/// default `NoClock` reports zero, keeping library output independent of
/// wall time; the CLI supplies a real clock.
pub trait Clock {
    fn elapsed(&self) -> Duration;
}

/// Timing disabled: every duration is zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}

/// Solver-side facts about one optimized interval, produced by the
/// optimizers and merged into `CycleStats` by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizationRecord {
    pub interval_index: usize,
    pub cost_before: ExactRational,
    pub cost_after: ExactRational,
    /// Integral runs solve both relaxation and MIP; equality of their
    /// optimal costs. None for plain LP runs.
    pub lp_vs_mip_cost_equal: Option<bool>,
    pub pivots: u64,
    pub branch_nodes: u64,
    pub solve_time: Duration,
}

impl OptimizationRecord {
    /// cost_after / cost_before, with the 0/0 case (already-empty input)
    /// reported as 1.
    pub fn cost_ratio(&self) -> ExactRational {
        if self.cost_before.is_zero() {
            return rat_int(1);
        }
        &self.cost_after / &self.cost_before
    }
}

/// One fully evaluated representative: losses and structure of the
/// optimized chain plus the solver facts behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleStats {
    pub interval_index: usize,
    /// Interval endpoints in display scale.
    pub birth: f64,
    pub death: Option<f64>,
    pub loss_edge_unif: usize,
    pub loss_edge_len: f64,
    pub loss_tri_unif: Option<usize>,
    pub loss_tri_area: Option<f64>,
    pub surveyor_area: Option<f64>,
    pub num_loops: usize,
    pub coeff_class: CoeffClass,
    pub cost_before: ExactRational,
    pub cost_after: ExactRational,
    pub cost_ratio_vs_original: ExactRational,
    pub solve_time: Duration,
    pub lp_vs_mip_cost_equal: Option<bool>,
    /// Whether a companion run under the other weight mode reached the
    /// same optimal cost on this interval (filled by cross-mode drivers).
    pub cross_mode_equal: Option<bool>,
    pub pivots: u64,
    pub branch_nodes: u64,
}

/// min / median / mean / max of one statistic across a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStat {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

fn summarize(values: &mut Vec<f64>) -> Option<SummaryStat> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let n = values.len();
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    };
    let mean = values.iter().sum::<f64>() / n as f64;
    Some(SummaryStat { min: values[0], median, mean, max: values[n - 1] })
}

fn fraction(hits: usize, total: usize) -> Option<f64> {
    (total > 0).then(|| hits as f64 / total as f64)
}

/// Deterministic aggregate of a run's per-cycle rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub count: usize,
    pub loss_edge_unif: Option<SummaryStat>,
    pub loss_edge_len: Option<SummaryStat>,
    pub loss_tri_unif: Option<SummaryStat>,
    pub loss_tri_area: Option<SummaryStat>,
    pub surveyor_area: Option<SummaryStat>,
    pub cost_ratio: Option<SummaryStat>,
    /// Fraction of rows whose optimized chain stays in {−1, 0, 1}.
    pub pm1_zero_fraction: Option<f64>,
    /// Fraction with integer coefficients (includes the ±1/0 rows).
    pub integral_fraction: Option<f64>,
    /// Among integral-mode rows: fraction where LP and MIP costs agree.
    pub lp_mip_equal_fraction: Option<f64>,
    /// Among cross-checked rows: fraction where both weight modes agree.
    pub cross_mode_equal_fraction: Option<f64>,
    /// (loop count, number of rows) sorted by loop count.
    pub loop_histogram: Vec<(usize, usize)>,
}

pub fn aggregate_report(rows: &[CycleStats]) -> ReportSummary {
    let mut edge_unif: Vec<f64> = rows.iter().map(|r| r.loss_edge_unif as f64).collect();
    let mut edge_len: Vec<f64> = rows.iter().map(|r| r.loss_edge_len).collect();
    let mut tri_unif: Vec<f64> =
        rows.iter().filter_map(|r| r.loss_tri_unif.map(|v| v as f64)).collect();
    let mut tri_area: Vec<f64> = rows.iter().filter_map(|r| r.loss_tri_area).collect();
    let mut sur: Vec<f64> = rows.iter().filter_map(|r| r.surveyor_area).collect();
    let mut ratios: Vec<f64> =
        rows.iter().map(|r| rat_to_f64(&r.cost_ratio_vs_original)).collect();

    let pm1 = rows.iter().filter(|r| r.coeff_class == CoeffClass::Pm1Zero).count();
    let integral = rows
        .iter()
        .filter(|r| matches!(r.coeff_class, CoeffClass::Pm1Zero | CoeffClass::Integral))
        .count();
    let lp_mip: Vec<bool> = rows.iter().filter_map(|r| r.lp_vs_mip_cost_equal).collect();
    let cross: Vec<bool> = rows.iter().filter_map(|r| r.cross_mode_equal).collect();

    let mut histogram: alloc::collections::BTreeMap<usize, usize> =
        alloc::collections::BTreeMap::new();
    for r in rows {
        *histogram.entry(r.num_loops).or_insert(0) += 1;
    }

    ReportSummary {
        count: rows.len(),
        loss_edge_unif: summarize(&mut edge_unif),
        loss_edge_len: summarize(&mut edge_len),
        loss_tri_unif: summarize(&mut tri_unif),
        loss_tri_area: summarize(&mut tri_area),
        surveyor_area: summarize(&mut sur),
        cost_ratio: summarize(&mut ratios),
        pm1_zero_fraction: fraction(pm1, rows.len()),
        integral_fraction: fraction(integral, rows.len()),
        lp_mip_equal_fraction: fraction(lp_mip.iter().filter(|&&b| b).count(), lp_mip.len()),
        cross_mode_equal_fraction: fraction(cross.iter().filter(|&&b| b).count(), cross.len()),
        loop_histogram: histogram.into_iter().collect(),
    }
}
