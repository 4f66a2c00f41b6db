//! Edge-loss optimization of 1-cycle bases.
//!
//! Two drivers share one program shape, min Σᵢ Wᵢ(xᵢ⁺ + xᵢ⁻) subject to
//! (x⁺ − x⁻) − D·w = x^Orig over an admissible edge range, where D
//! collects the directions the cycle may move along:
//!
//! * the persistent driver walks the basis in barcode order and lets each
//!   cycle absorb triangle boundaries born no later than its birth plus
//!   admissible other basis cycles, replacing the element before the next
//!   step (lifespans are preserved);
//! * the filtered driver optimizes each cycle independently over all
//!   cycles of the complex strictly preceding its birth simplex, which can
//!   change death values: the result is a basis of the filtered kind, not
//!   a persistent one.

use alloc::vec::Vec;
use core::fmt;

use crate::complex::{Chain, FilteredComplex};
use crate::lp::{LinearProgram, Solution, Solver, SolverError, SolveStatus};
use crate::metrics::{Clock, OptimizationRecord};
use crate::persistence::{column_basis_indices, CycleRepresentative, Decomposition};
use crate::rational::{rat_from_float, rat_int, ExactRational, SparseColumn, SparseRationalMatrix};
use num_traits::{Signed, Zero};

/// Per-edge objective weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeight {
    Uniform,
    Length,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeOptError {
    TargetOutOfRange { index: usize, len: usize },
    Solver(SolverError),
    /// The solver rejected a program that is feasible by construction
    /// (the original cycle satisfies it); indicates a bug, not bad input.
    UnexpectedStatus { interval: usize, status: SolveStatus },
}

impl fmt::Display for EdgeOptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeOptError::TargetOutOfRange { index, len } => {
                write!(f, "target index {index} out of range for basis of {len}")
            }
            EdgeOptError::Solver(e) => write!(f, "solver error: {e}"),
            EdgeOptError::UnexpectedStatus { interval, status } => {
                write!(f, "interval {interval}: solver returned {status:?} on a feasible program")
            }
        }
    }
}

impl core::error::Error for EdgeOptError {}

impl From<SolverError> for EdgeOptError {
    fn from(e: SolverError) -> Self {
        EdgeOptError::Solver(e)
    }
}

/// Objective weight of one edge.
pub fn edge_weight(k: &FilteredComplex, e: usize, mode: EdgeWeight) -> ExactRational {
    match mode {
        EdgeWeight::Uniform => rat_int(1),
        EdgeWeight::Length => rat_from_float(k.edge_length(e)).expect("lengths are finite"),
    }
}

/// Weighted ℓ₁ cost Σ Wᵢ·|cᵢ| of a 1-chain: the objective value the
/// programs assign to that chain.
pub fn weighted_edge_cost(chain: &Chain, mode: EdgeWeight, k: &FilteredComplex) -> ExactRational {
    chain
        .entries()
        .iter()
        .fold(ExactRational::zero(), |acc, (e, c)| acc + edge_weight(k, *e, mode) * c.abs())
}

/// Boundary of one triangle as a sparse column over the edge index space.
fn triangle_boundary(k: &FilteredComplex, t: usize) -> SparseColumn {
    let v = k.simplex(2, t).vertices();
    let mut col = alloc::vec![
        (k.edge_position(v[1], v[2]).expect("face exists"), rat_int(1)),
        (k.edge_position(v[0], v[2]).expect("face exists"), rat_int(-1)),
        (k.edge_position(v[0], v[1]).expect("face exists"), rat_int(1)),
    ];
    col.sort_by_key(|&(r, _)| r);
    col
}

/// Index data of one edge-loss program: which cycles, triangles, and
/// edges may participate when optimizing `basis[target_index]`.
#[derive(Debug, Clone)]
pub struct EdgeProgramSpec<'a> {
    pub target_index: usize,
    pub basis: &'a [CycleRepresentative],
    pub weight_mode: EdgeWeight,
    pub integral: bool,
    /// Admissible other basis cycles: born no later, dead no later (an
    /// absent death is treated as +∞, so twins of the target qualify).
    pub cycles: Vec<usize>,
    /// Admissible triangles: born no later than the target. With the
    /// reduced dictionary this keeps only triangles whose reduced column
    /// is nonzero, which spans the same boundary space.
    pub triangles: Vec<usize>,
    /// Admissible edges (always a birth prefix of the edge order): the
    /// constraint rows and the support the optimized cycle may use.
    pub edges: usize,
}

fn death_le(a: &Option<ExactRational>, b: &Option<ExactRational>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

impl<'a> EdgeProgramSpec<'a> {
    pub fn new(
        target_index: usize,
        basis: &'a [CycleRepresentative],
        k: &FilteredComplex,
        dec2: &Decomposition,
        weight_mode: EdgeWeight,
        integral: bool,
        reduced_dictionary: bool,
    ) -> Result<Self, EdgeOptError> {
        if target_index >= basis.len() {
            return Err(EdgeOptError::TargetOutOfRange { index: target_index, len: basis.len() });
        }
        let target = &basis[target_index];
        let edges = k.prefix_len(1, &target.birth);
        let triangle_prefix = k.prefix_len(2, &target.birth);
        let triangles = if reduced_dictionary {
            column_basis_indices(dec2.r())
                .into_iter()
                .filter(|&t| t < triangle_prefix)
                .collect()
        } else {
            (0..triangle_prefix).collect()
        };
        let cycles = basis
            .iter()
            .enumerate()
            .filter(|(i, z)| {
                *i != target_index && z.birth <= target.birth && death_le(&z.death, &target.death)
            })
            .map(|(i, _)| i)
            .collect();
        Ok(EdgeProgramSpec { target_index, basis, weight_mode, integral, cycles, triangles, edges })
    }

    /// Movement directions: admissible triangle boundaries, then
    /// admissible basis cycles.
    fn directions(&self, k: &FilteredComplex) -> Vec<SparseColumn> {
        self.triangles
            .iter()
            .map(|&t| triangle_boundary(k, t))
            .chain(self.cycles.iter().map(|&i| self.basis[i].chain.entries().to_vec()))
            .collect()
    }

    /// The optimized cycle from a solution vector: xᵢ = xᵢ⁺ − xᵢ⁻.
    pub fn extract_chain(&self, x: &[ExactRational]) -> Chain {
        extract_support_chain(self.edges, x)
    }
}

fn extract_support_chain(num_edges: usize, x: &[ExactRational]) -> Chain {
    let entries: Vec<(usize, ExactRational)> = (0..num_edges)
        .map(|i| (i, &x[i] - &x[num_edges + i]))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    Chain::from_entries(1, entries)
}

/// Assemble min Σ Wᵢ(xᵢ⁺+xᵢ⁻) s.t. (x⁺−x⁻) − D·(w⁺−w⁻) = rhs with x±
/// over `num_edges` rows and one free (split) variable per direction.
/// Variable layout: [x⁺ | x⁻ | w⁺ | w⁻].
fn assemble_program(
    num_edges: usize,
    weights: Vec<ExactRational>,
    directions: &[SparseColumn],
    rhs_chain: &Chain,
    integral: bool,
) -> LinearProgram {
    let nd = directions.len();
    let mut columns: Vec<SparseColumn> = Vec::with_capacity(2 * num_edges + 2 * nd);
    for i in 0..num_edges {
        columns.push(alloc::vec![(i, rat_int(1))]);
    }
    for i in 0..num_edges {
        columns.push(alloc::vec![(i, rat_int(-1))]);
    }
    for d in directions {
        columns.push(d.iter().map(|(r, v)| (*r, -v.clone())).collect());
    }
    for d in directions {
        columns.push(d.clone());
    }
    let constraints = SparseRationalMatrix::from_columns(num_edges, columns)
        .expect("program columns are well-formed");
    let mut objective = weights.clone();
    objective.extend(weights);
    objective.resize(2 * num_edges + 2 * nd, ExactRational::zero());
    let mut rhs = alloc::vec![ExactRational::zero(); num_edges];
    for (e, c) in rhs_chain.entries() {
        rhs[*e] = c.clone();
    }
    let mut integrality = alloc::vec![integral; 2 * num_edges];
    integrality.resize(2 * num_edges + 2 * nd, false);
    LinearProgram::new(objective, constraints, rhs, integrality)
        .expect("assembled program is dimensionally consistent with W ≥ 0")
}

/// Build the edge-loss program for one basis element.
pub fn build_edge_program(spec: &EdgeProgramSpec<'_>, k: &FilteredComplex) -> LinearProgram {
    let weights: Vec<ExactRational> =
        (0..spec.edges).map(|e| edge_weight(k, e, spec.weight_mode)).collect();
    assemble_program(
        spec.edges,
        weights,
        &spec.directions(k),
        &spec.basis[spec.target_index].chain,
        spec.integral,
    )
}

/// Optimized basis plus the per-interval solver facts, in basis order.
#[derive(Debug, Clone)]
pub struct OptimizedBasis {
    pub basis: Vec<CycleRepresentative>,
    pub records: Vec<OptimizationRecord>,
}

/// Solve one assembled program, in integral mode both the relaxation and
/// the MIP. Returns (chain source solution, record pieces).
fn solve_program(
    program: &LinearProgram,
    integral: bool,
    interval: usize,
    solver: &Solver,
    clock: &dyn Clock,
) -> Result<(Solution, Option<bool>, core::time::Duration), EdgeOptError> {
    let t0 = clock.elapsed();
    let lp_sol = solver.lp(program)?;
    if lp_sol.status != SolveStatus::Optimal {
        return Err(EdgeOptError::UnexpectedStatus { interval, status: lp_sol.status });
    }
    let (chosen, agree) = if integral {
        let mip_sol = solver.mip(program)?;
        if mip_sol.status != SolveStatus::Optimal {
            return Err(EdgeOptError::UnexpectedStatus { interval, status: mip_sol.status });
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

/// Sequential basis optimization: each element is optimized against the
/// partially optimized basis and then replaces its slot, so later
/// elements move along already-shortened cycles. Bir->death intervals of
/// the output equal those of the input element-wise.
///
/// `replace = false` is the experimental variant that optimizes every
/// element against the untouched input basis; its output is not claimed
/// to be a basis.
#[allow(clippy::too_many_arguments)]
pub fn optimize_basis_persistent(
    basis: &[CycleRepresentative],
    k: &FilteredComplex,
    dec2: &Decomposition,
    weight_mode: EdgeWeight,
    integral: bool,
    solver: &Solver,
    clock: &dyn Clock,
    replace: bool,
) -> Result<OptimizedBasis, EdgeOptError> {
    let mut working: Vec<CycleRepresentative> = basis.to_vec();
    let mut output: Vec<CycleRepresentative> = basis.to_vec();
    let mut records = Vec::with_capacity(basis.len());
    for j in 0..working.len() {
        let spec = EdgeProgramSpec::new(j, &working, k, dec2, weight_mode, integral, true)?;
        let program = build_edge_program(&spec, k);
        let (sol, agree, dt) = solve_program(&program, integral, j, solver, clock)?;
        let chain = spec.extract_chain(&sol.x);
        let cost_before = weighted_edge_cost(&working[j].chain, weight_mode, k);
        records.push(OptimizationRecord {
            interval_index: j,
            cost_before,
            cost_after: sol.cost.clone(),
            lp_vs_mip_cost_equal: agree,
            pivots: sol.pivots,
            branch_nodes: sol.branch_nodes,
            solve_time: dt,
        });
        let replacement = CycleRepresentative {
            chain,
            birth: working[j].birth.clone(),
            death: working[j].death.clone(),
            source_pair: working[j].source_pair.clone(),
        };
        output[j] = replacement.clone();
        if replace {
            working[j] = replacement;
        }
    }
    Ok(OptimizedBasis { basis: output, records })
}

/// Position of a cycle's birth simplex in the edge order: the latest
/// support edge. Initial representatives come from reduced or
/// upper-triangular columns, whose last entry is exactly that pivot edge.
fn birth_edge_index(rep: &CycleRepresentative) -> usize {
    rep.chain.entries().last().expect("representatives are nonzero").0
}

/// Incremental exact column reduction used to pick independent cycles.
struct RankAccumulator {
    pivots: alloc::collections::BTreeMap<usize, SparseColumn>,
}

impl RankAccumulator {
    fn new() -> Self {
        RankAccumulator { pivots: alloc::collections::BTreeMap::new() }
    }

    fn residual(&self, column: &SparseColumn) -> SparseColumn {
        let mut col = column.clone();
        while let Some(&(low, ref v)) = col.last() {
            let Some(p) = self.pivots.get(&low) else { break };
            let pv = &p.last().expect("pivot columns are nonzero").1;
            let factor = -(v / pv);
            col = crate::rational::merge_scaled(&col, p, &factor);
        }
        col
    }

    /// Insert if independent of the accumulated span; true when kept.
    fn try_insert(&mut self, column: &SparseColumn) -> bool {
        let res = self.residual(column);
        match res.last() {
            None => false,
            Some(&(low, _)) => {
                self.pivots.insert(low, res);
                true
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Per-cycle filtered optimization: the cycle moves along any cycle of
/// the subcomplex strictly before its birth simplex, spanned by a basis
/// of earlier boundaries extended greedily with earlier basis elements
/// and reduction cycles. Death values of the output are recomputed from
/// the chain (they may differ from the input interval).
#[allow(clippy::too_many_arguments)]
pub fn optimize_basis_filtered(
    basis: &[CycleRepresentative],
    k: &FilteredComplex,
    dec1: &Decomposition,
    dec2: &Decomposition,
    weight_mode: EdgeWeight,
    integral: bool,
    solver: &Solver,
    clock: &dyn Clock,
) -> Result<OptimizedBasis, EdgeOptError> {
    let nonzero_d2 = column_basis_indices(dec2.r());
    let mut output = Vec::with_capacity(basis.len());
    let mut records = Vec::with_capacity(basis.len());
    for (j, rep) in basis.iter().enumerate() {
        let e_j = birth_edge_index(rep);
        let rows = e_j + 1;
        // Boundary directions: independent triangle boundaries born
        // strictly before the birth simplex (triangles tie-break after
        // edges, so "strictly before" is a birth-value comparison).
        let tri_cut = k.births(2).partition_point(|b| b < &rep.birth);
        let mut directions: Vec<SparseColumn> = Vec::new();
        let mut acc = RankAccumulator::new();
        for &t in nonzero_d2.iter().filter(|&&t| t < tri_cut) {
            let col = triangle_boundary(k, t);
            let kept = acc.try_insert(&col);
            debug_assert!(kept, "reduced dictionary columns are independent");
            directions.push(col);
        }
        // Extend to a cycle basis of the strict edge prefix: earlier
        // basis elements first, then cycle columns of the reduction.
        let cycle_dim = {
            let vrows: Vec<usize> = (0..k.count(0)).collect();
            let ecols: Vec<usize> = (0..e_j).collect();
            let d1_prefix = crate::complex::boundary_matrix(k, 1)
                .expect("dimension 1 valid")
                .submatrix(&vrows, &ecols)
                .expect("prefix indices in range");
            e_j - d1_prefix.rank()
        };
        let mut candidates: Vec<SparseColumn> = Vec::new();
        for (i, other) in basis.iter().enumerate() {
            if i != j && birth_edge_index(other) < e_j {
                candidates.push(other.chain.entries().to_vec());
            }
        }
        for e in 0..e_j {
            if dec1.low(e).is_none() {
                candidates.push(dec1.v().column(e).to_vec());
            }
        }
        for cand in candidates {
            if acc.rank() >= cycle_dim {
                break;
            }
            if acc.try_insert(&cand) {
                directions.push(cand);
            }
        }
        assert!(
            acc.rank() >= cycle_dim,
            "reduction cycle columns span the prefix cycle space"
        );

        let weights: Vec<ExactRational> =
            (0..rows).map(|e| edge_weight(k, e, weight_mode)).collect();
        let program = assemble_program(rows, weights, &directions, &rep.chain, integral);
        let (sol, agree, dt) = solve_program(&program, integral, j, solver, clock)?;
        let chain = extract_support_chain(rows, &sol.x);
        debug_assert!(!chain.coeff(e_j).is_zero(), "birth simplex coefficient survives");
        let cost_before = weighted_edge_cost(&rep.chain, weight_mode, k);
        records.push(OptimizationRecord {
            interval_index: j,
            cost_before,
            cost_after: sol.cost.clone(),
            lp_vs_mip_cost_equal: agree,
            pivots: sol.pivots,
            branch_nodes: sol.branch_nodes,
            solve_time: dt,
        });
        let death = chain_death(&chain, k);
        output.push(CycleRepresentative {
            chain,
            birth: rep.birth.clone(),
            death,
            source_pair: rep.source_pair.clone(),
        });
    }
    Ok(OptimizedBasis { basis: output, records })
}

/// First filtration value at which a cycle becomes a boundary, or None if
/// it never does: reduce the chain against triangle boundaries added in
/// birth order, testing at each birth-value boundary.
pub fn chain_death(chain: &Chain, k: &FilteredComplex) -> Option<ExactRational> {
    let mut acc = RankAccumulator::new();
    let nt = k.count(2);
    let mut t = 0;
    while t < nt {
        let group_birth = k.birth(2, t).clone();
        while t < nt && *k.birth(2, t) == group_birth {
            let col = triangle_boundary(k, t);
            acc.try_insert(&col);
            t += 1;
        }
        if acc.residual(&chain.entries().to_vec()).is_empty() {
            return Some(group_birth);
        }
    }
    None
}
