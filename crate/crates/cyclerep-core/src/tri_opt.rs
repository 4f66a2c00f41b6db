//! Triangle-loss (volume) optimization of finite intervals.
//!
//! For a finite interval with birth edge σ and death triangle τ, the
//! program searches for the cheapest 2-chain v with v_τ = 1 whose
//! boundary vanishes on every edge born no later than the death value
//! and strictly after σ; the representative reported for the interval is
//! ∂₂·v, whose lifespan equals the interval. Infinite intervals keep
//! their reduction representatives unchanged.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::complex::{
    boundary_matrix, triangle_area, triangle_areas, Chain, ComplexError, FilteredComplex,
};
use crate::edge_opt::OptimizedBasis;
use crate::lp::{LinearProgram, Solution, Solver, SolverError, SolveStatus};
use crate::metrics::{Clock, OptimizationRecord};
use crate::persistence::{CycleRepresentative, Decomposition, IntervalPair};
use crate::rational::{rat_from_float, rat_int, ExactRational, SparseColumn, SparseRationalMatrix};
use num_traits::{Signed, Zero};

/// Per-triangle objective weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleWeight {
    Uniform,
    Area,
}

/// How the constraint matrix ∂₂[F₁, F̂₂] is materialized. All three give
/// identical feasible sets and optimal costs; they differ in how much of
/// ∂₂ exists in memory at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlicingStrategy {
    /// Keep the full row space and zero every entry outside F₁ × F̂₂.
    ZeroOut,
    /// Slice a precomputed full ∂₂ down to F₁ × F̂₂.
    BuildAll,
    /// Assemble only the needed columns directly from the complex.
    BuildPart,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TriOptError {
    /// Birth and death values coincide: no strict interval to optimize.
    DegeneratePair { birth_simplex: usize },
    /// The interval never dies; volumes are undefined for it.
    InfiniteInterval { birth_simplex: usize },
    /// Area weights requested but some triangle has no valid area.
    AreaUnavailable(ComplexError),
    Solver(SolverError),
    /// The solver rejected a program that is feasible by construction.
    UnexpectedStatus { interval: usize, status: SolveStatus },
    /// The optimal boundary misses its birth edge, contradicting the
    /// supporting theory; indicates a bug, not bad input.
    BoundaryMissesBirthEdge { interval: usize },
}

impl fmt::Display for TriOptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriOptError::DegeneratePair { birth_simplex } => {
                write!(f, "interval born at simplex {birth_simplex} has zero length")
            }
            TriOptError::InfiniteInterval { birth_simplex } => {
                write!(f, "interval born at simplex {birth_simplex} never dies")
            }
            TriOptError::AreaUnavailable(e) => write!(f, "area weights unavailable: {e}"),
            TriOptError::Solver(e) => write!(f, "solver error: {e}"),
            TriOptError::UnexpectedStatus { interval, status } => {
                write!(f, "interval {interval}: solver returned {status:?} on a feasible program")
            }
            TriOptError::BoundaryMissesBirthEdge { interval } => {
                write!(f, "interval {interval}: optimal boundary misses its birth edge")
            }
        }
    }
}

impl core::error::Error for TriOptError {}

impl From<SolverError> for TriOptError {
    fn from(e: SolverError) -> Self {
        TriOptError::Solver(e)
    }
}

/// Objective weight of one triangle.
pub fn triangle_weight(
    k: &FilteredComplex,
    t: usize,
    mode: TriangleWeight,
) -> Result<ExactRational, TriOptError> {
    match mode {
        TriangleWeight::Uniform => Ok(rat_int(1)),
        TriangleWeight::Area => {
            let a = triangle_area(k, t).map_err(TriOptError::AreaUnavailable)?;
            rat_from_float(a).map_err(|e| TriOptError::AreaUnavailable(e.into()))
        }
    }
}

/// Admissible simplices for one finite interval: edges born no later
/// than the death value and strictly after the birth edge, and triangles
/// born no earlier than the birth value and no later (in the order) than
/// the death triangle.
pub fn compute_f_sets(
    pair: &IntervalPair,
    k: &FilteredComplex,
) -> Result<(Vec<usize>, Vec<usize>), TriOptError> {
    let tau = pair
        .death_simplex
        .ok_or(TriOptError::InfiniteInterval { birth_simplex: pair.birth_simplex })?;
    let death = pair
        .death_value
        .as_ref()
        .ok_or(TriOptError::InfiniteInterval { birth_simplex: pair.birth_simplex })?;
    if *death <= pair.birth_value {
        return Err(TriOptError::DegeneratePair { birth_simplex: pair.birth_simplex });
    }
    let edge_cut = k.prefix_len(1, death);
    let f1: Vec<usize> = (pair.birth_simplex + 1..edge_cut).collect();
    let tri_lo = k.births(2).partition_point(|b| b < &pair.birth_value);
    let f2: Vec<usize> = (tri_lo..=tau).collect();
    Ok((f1, f2))
}

/// One triangle-loss program: its interval, admissible sets, and modes.
/// The death triangle is always the last element of `f2`.
#[derive(Debug, Clone)]
pub struct VolumeProgramSpec {
    pub pair: IntervalPair,
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
    pub weight_mode: TriangleWeight,
    pub integral: bool,
    pub slicing_strategy: SlicingStrategy,
}

impl VolumeProgramSpec {
    pub fn new(
        pair: IntervalPair,
        k: &FilteredComplex,
        weight_mode: TriangleWeight,
        integral: bool,
        slicing_strategy: SlicingStrategy,
    ) -> Result<Self, TriOptError> {
        let (f1, f2) = compute_f_sets(&pair, k)?;
        debug_assert_eq!(f2.last().copied(), pair.death_simplex);
        Ok(VolumeProgramSpec { pair, f1, f2, weight_mode, integral, slicing_strategy })
    }

    /// The 2-chain from a solution vector, including the pinned unit
    /// coefficient on the death triangle.
    pub fn extract_volume(&self, x: &[ExactRational]) -> SparseColumn {
        let m = self.f2.len();
        let mut v: SparseColumn = (0..m - 1)
            .map(|i| (self.f2[i], &x[i] - &x[m - 1 + i]))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        v.push((self.f2[m - 1], rat_int(1)));
        v
    }
}

fn full_triangle_column(k: &FilteredComplex, t: usize) -> SparseColumn {
    let v = k.simplex(2, t).vertices();
    let mut col = alloc::vec![
        (k.edge_position(v[1], v[2]).expect("face exists"), rat_int(1)),
        (k.edge_position(v[0], v[2]).expect("face exists"), rat_int(-1)),
        (k.edge_position(v[0], v[1]).expect("face exists"), rat_int(1)),
    ];
    col.sort_by_key(|&(r, _)| r);
    col
}

/// The constraint matrix ∂₂[F₁, F̂₂], one column per element of `f2` in
/// order. Zero-out keeps the full edge row space with entries outside
/// F₁ × F̂₂ dropped to zero; the building strategies re-index rows to F₁,
/// either by slicing a full ∂₂ (provided or materialized on the spot) or
/// by assembling only the needed columns from the complex.
pub fn slice_boundary(
    strategy: SlicingStrategy,
    k: &FilteredComplex,
    d2: Option<&SparseRationalMatrix>,
    spec: &VolumeProgramSpec,
) -> SparseRationalMatrix {
    match strategy {
        SlicingStrategy::ZeroOut => {
            let owned;
            let full = match d2 {
                Some(m) => m,
                None => {
                    owned = boundary_matrix(k, 2).expect("dimension 2 valid");
                    &owned
                }
            };
            let keep: alloc::collections::BTreeSet<usize> = spec.f1.iter().copied().collect();
            let cols: Vec<SparseColumn> = spec
                .f2
                .iter()
                .map(|&t| {
                    full.column(t)
                        .iter()
                        .filter(|(r, _)| keep.contains(r))
                        .cloned()
                        .collect()
                })
                .collect();
            SparseRationalMatrix::from_columns(k.count(1), cols).expect("rows in range")
        }
        SlicingStrategy::BuildAll => {
            let owned;
            let full = match d2 {
                Some(m) => m,
                None => {
                    owned = boundary_matrix(k, 2).expect("dimension 2 valid");
                    &owned
                }
            };
            full.submatrix(&spec.f1, &spec.f2).expect("indices in range")
        }
        SlicingStrategy::BuildPart => {
            let row_of: BTreeMap<usize, usize> =
                spec.f1.iter().enumerate().map(|(r, &e)| (e, r)).collect();
            let cols: Vec<SparseColumn> = spec
                .f2
                .iter()
                .map(|&t| {
                    full_triangle_column(k, t)
                        .into_iter()
                        .filter_map(|(e, c)| row_of.get(&e).map(|&r| (r, c)))
                        .collect()
                })
                .collect();
            SparseRationalMatrix::from_columns(spec.f1.len(), cols).expect("rows in range")
        }
    }
}

/// Build the triangle-loss program. The unit coefficient on the death
/// triangle is substituted out: its column moves to the right-hand side
/// and its weight is a constant added back when reporting cost.
/// Variable layout: [v⁺ | v⁻] over `f2` minus the death triangle.
pub fn build_triangle_program(
    spec: &VolumeProgramSpec,
    k: &FilteredComplex,
    d2: Option<&SparseRationalMatrix>,
) -> Result<LinearProgram, TriOptError> {
    let slice = slice_boundary(spec.slicing_strategy, k, d2, spec);
    let m = spec.f2.len();
    let num_rows = slice.num_rows();
    let mut columns: Vec<SparseColumn> = Vec::with_capacity(2 * (m - 1));
    for i in 0..m - 1 {
        columns.push(slice.column(i).to_vec());
    }
    for i in 0..m - 1 {
        columns.push(slice.column(i).iter().map(|(r, c)| (*r, -c.clone())).collect());
    }
    let constraints =
        SparseRationalMatrix::from_columns(num_rows, columns).expect("columns well-formed");
    let mut rhs = alloc::vec![ExactRational::zero(); num_rows];
    for (r, c) in slice.column(m - 1) {
        rhs[*r] = -c.clone();
    }
    let mut weights = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        weights.push(triangle_weight(k, spec.f2[i], spec.weight_mode)?);
    }
    let mut objective = weights.clone();
    objective.extend(weights);
    let integrality = alloc::vec![spec.integral; 2 * (m - 1)];
    Ok(LinearProgram::new(objective, constraints, rhs, integrality)
        .expect("assembled program is dimensionally consistent with W ≥ 0"))
}

fn solve_volume_program(
    program: &LinearProgram,
    integral: bool,
    interval: usize,
    solver: &Solver,
    clock: &dyn Clock,
) -> Result<(Solution, Option<bool>, Duration), TriOptError> {
    let t0 = clock.elapsed();
    let lp_sol = solver.lp(program)?;
    if lp_sol.status != SolveStatus::Optimal {
        return Err(TriOptError::UnexpectedStatus { interval, status: lp_sol.status });
    }
    let (chosen, agree) = if integral {
        let mip_sol = solver.mip(program)?;
        if mip_sol.status != SolveStatus::Optimal {
            return Err(TriOptError::UnexpectedStatus { interval, status: mip_sol.status });
        }
        let equal = mip_sol.cost == lp_sol.cost;
        let mut merged = mip_sol;
        merged.pivots += lp_sol.pivots;
        (merged, Some(equal))
    } else {
        (lp_sol, None)
    };
    let dt = clock.elapsed().saturating_sub(t0);
    Ok((chosen, agree, dt))
}

/// The boundary ∂₂·v over the full edge index space.
fn boundary_of_volume(k: &FilteredComplex, v: &SparseColumn) -> Chain {
    let mut entries: Vec<(usize, ExactRational)> = Vec::new();
    for (t, c) in v {
        for (e, s) in full_triangle_column(k, *t) {
            entries.push((e, c * &s));
        }
    }
    Chain::from_entries(1, entries)
}

/// Exact check that a 1-chain is a cycle: signed vertex degrees vanish.
fn is_cycle(k: &FilteredComplex, chain: &Chain) -> bool {
    let mut acc: BTreeMap<usize, ExactRational> = BTreeMap::new();
    for (e, c) in chain.entries() {
        let v = k.simplex(1, *e).vertices();
        *acc.entry(v[0]).or_insert_with(ExactRational::zero) -= c;
        *acc.entry(v[1]).or_insert_with(ExactRational::zero) += c;
    }
    acc.values().all(Zero::is_zero)
}

/// Weighted cost Σ W_t·|v_t| of a 2-chain.
pub fn volume_cost(
    k: &FilteredComplex,
    v: &[(usize, ExactRational)],
    mode: TriangleWeight,
) -> Result<ExactRational, TriOptError> {
    let mut acc = ExactRational::zero();
    for (t, c) in v {
        acc += triangle_weight(k, *t, mode)? * c.abs();
    }
    Ok(acc)
}

/// Basis optimization result plus the optimal volume of each finite
/// interval (None for infinite ones), parallel to the basis.
#[derive(Debug, Clone)]
pub struct VolumeOptimization {
    pub result: OptimizedBasis,
    pub volumes: Vec<Option<SparseColumn>>,
}

/// Optimize every finite interval's volume and report ∂₂·v as its
/// representative; infinite intervals pass through unchanged. The
/// before-cost of a finite interval is the weighted cost of the
/// reduction's own volume (the upper-triangular column at the death
/// triangle), which ignores the admissibility constraints and is
/// therefore a baseline, not a feasible point of the program.
#[allow(clippy::too_many_arguments)]
pub fn optimize_basis_triangle(
    basis: &[CycleRepresentative],
    k: &FilteredComplex,
    dec2: &Decomposition,
    weight_mode: TriangleWeight,
    integral: bool,
    strategy: SlicingStrategy,
    solver: &Solver,
    clock: &dyn Clock,
) -> Result<VolumeOptimization, TriOptError> {
    if weight_mode == TriangleWeight::Area {
        triangle_areas(k).map_err(TriOptError::AreaUnavailable)?;
    }
    let d2_full = if strategy == SlicingStrategy::BuildPart {
        None
    } else {
        Some(boundary_matrix(k, 2).expect("dimension 2 valid"))
    };
    let mut output = Vec::with_capacity(basis.len());
    let mut volumes = Vec::with_capacity(basis.len());
    let mut records = Vec::new();
    for (j, rep) in basis.iter().enumerate() {
        if rep.death.is_none() {
            output.push(rep.clone());
            volumes.push(None);
            continue;
        }
        let pair = rep
            .source_pair
            .clone()
            .expect("finite representatives carry their source interval");
        let tau = pair.death_simplex.expect("finite pair has a death simplex");
        let spec = VolumeProgramSpec::new(pair, k, weight_mode, integral, strategy)?;
        let program = build_triangle_program(&spec, k, d2_full.as_ref())?;
        let (sol, agree, dt) = solve_volume_program(&program, integral, j, solver, clock)?;
        let v = spec.extract_volume(&sol.x);
        let chain = boundary_of_volume(k, &v);
        if chain.coeff(spec.pair.birth_simplex).is_zero() {
            return Err(TriOptError::BoundaryMissesBirthEdge { interval: j });
        }
        assert!(is_cycle(k, &chain), "a boundary is always a cycle");
        let tau_weight = triangle_weight(k, tau, weight_mode)?;
        let cost_before = volume_cost(k, dec2.v().column(tau), weight_mode)?;
        records.push(OptimizationRecord {
            interval_index: j,
            cost_before,
            cost_after: sol.cost + tau_weight,
            lp_vs_mip_cost_equal: agree,
            pivots: sol.pivots,
            branch_nodes: sol.branch_nodes,
            solve_time: dt,
        });
        output.push(CycleRepresentative {
            chain,
            birth: rep.birth.clone(),
            death: rep.death.clone(),
            source_pair: rep.source_pair.clone(),
        });
        volumes.push(Some(v));
    }
    Ok(VolumeOptimization { result: OptimizedBasis { basis: output, records }, volumes })
}
