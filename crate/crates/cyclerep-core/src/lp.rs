//! Exact rational linear programming: a two-phase dense-tableau primal
//! simplex with Bland's anti-cycling rule, plus a depth-first
//! branch-and-bound layer for mixed-integer programs.
//!
//! Programs are in standard form: minimize cᵀx subject to A·x = b, x ≥ 0.
//! Every pivot is an exact rational elimination, so optimal bases, costs,
//! and the integral-vs-fractional character of solutions carry no rounding
//! ambiguity. Returned optima satisfy A·x = b exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::{ExactRational, SparseColumn, SparseRationalMatrix};
use num_traits::{One, Signed, Zero};

/// Nodes explored by `solve_mip` before giving up; desk-scale programs
/// with near-integral relaxations stay far below this.
pub const DEFAULT_NODE_LIMIT: u64 = 100_000;

/// Validation and resource errors of the solver layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    ObjectiveLengthMismatch { objective: usize, columns: usize },
    RhsLengthMismatch { rhs: usize, rows: usize },
    MaskLengthMismatch { mask: usize, columns: usize },
    NegativeObjective { index: usize },
    NodeLimitExceeded { limit: u64 },
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::ObjectiveLengthMismatch { objective, columns } => {
                write!(f, "objective has {objective} entries for {columns} columns")
            }
            SolverError::RhsLengthMismatch { rhs, rows } => {
                write!(f, "rhs has {rhs} entries for {rows} rows")
            }
            SolverError::MaskLengthMismatch { mask, columns } => {
                write!(f, "integrality mask has {mask} entries for {columns} columns")
            }
            SolverError::NegativeObjective { index } => {
                write!(f, "objective entry {index} is negative")
            }
            SolverError::NodeLimitExceeded { limit } => {
                write!(f, "branch-and-bound exceeded {limit} nodes")
            }
        }
    }
}

impl core::error::Error for SolverError {}

/// Standard-form program: minimize cᵀx subject to A·x = b, x ≥ 0, with an
/// optional per-variable integrality mask consumed by `solve_mip`.
///
/// Fields are public so crafted instances (degenerate pivots, negative
/// objectives) can be built directly; `new` additionally enforces the
/// nonnegative objective this crate's programs all share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<ExactRational>,
    pub constraints: SparseRationalMatrix,
    pub rhs: Vec<ExactRational>,
    pub integrality: Vec<bool>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<ExactRational>,
        constraints: SparseRationalMatrix,
        rhs: Vec<ExactRational>,
        integrality: Vec<bool>,
    ) -> Result<Self, SolverError> {
        let p = LinearProgram { objective, constraints, rhs, integrality };
        p.check_dimensions()?;
        if let Some(i) = p.objective.iter().position(|c| c.is_negative()) {
            return Err(SolverError::NegativeObjective { index: i });
        }
        Ok(p)
    }

    fn check_dimensions(&self) -> Result<(), SolverError> {
        let (rows, cols) = (self.constraints.num_rows(), self.constraints.num_cols());
        if self.objective.len() != cols {
            return Err(SolverError::ObjectiveLengthMismatch {
                objective: self.objective.len(),
                columns: cols,
            });
        }
        if self.rhs.len() != rows {
            return Err(SolverError::RhsLengthMismatch { rhs: self.rhs.len(), rows });
        }
        if self.integrality.len() != cols {
            return Err(SolverError::MaskLengthMismatch {
                mask: self.integrality.len(),
                columns: cols,
            });
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome. `x` and `cost` are meaningful only when status is
/// `Optimal`; `pivots` counts simplex pivots across all phases (and, for
/// MIP, all nodes); `branch_nodes` counts solved branch-and-bound nodes
/// (zero for plain LP solves).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub status: SolveStatus,
    pub x: Vec<ExactRational>,
    pub cost: ExactRational,
    pub pivots: u64,
    pub branch_nodes: u64,
}

impl Solution {
    fn non_optimal(status: SolveStatus, pivots: u64) -> Self {
        Solution { status, x: Vec::new(), cost: ExactRational::zero(), pivots, branch_nodes: 0 }
    }
}

/// Full simplex tableau: `tab` rows are constraints over the current
/// column set, `zrow` carries reduced costs, `basis[i]` names the basic
/// column of row `i`. The rhs stays nonnegative throughout.
struct Tableau {
    tab: Vec<Vec<ExactRational>>,
    rhs: Vec<ExactRational>,
    basis: Vec<usize>,
    zrow: Vec<ExactRational>,
    pivots: u64,
}

impl Tableau {
    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.tab[r][s].clone();
        if !p.is_one() {
            for e in self.tab[r].iter_mut() {
                if !e.is_zero() {
                    *e = &*e / &p;
                }
            }
            self.rhs[r] = &self.rhs[r] / &p;
        }
        let prow = core::mem::take(&mut self.tab[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.tab.len() {
            if i == r || self.tab[i].is_empty() {
                continue;
            }
            let e = self.tab[i][s].clone();
            if e.is_zero() {
                continue;
            }
            for (j, pj) in prow.iter().enumerate() {
                if !pj.is_zero() {
                    self.tab[i][j] = &self.tab[i][j] - &(&e * pj);
                }
            }
            self.rhs[i] = &self.rhs[i] - &(&e * &prhs);
        }
        let ez = self.zrow[s].clone();
        if !ez.is_zero() {
            for (j, pj) in prow.iter().enumerate() {
                if !pj.is_zero() {
                    self.zrow[j] = &self.zrow[j] - &(&ez * pj);
                }
            }
        }
        self.tab[r] = prow;
        self.basis[r] = s;
        self.pivots += 1;
    }

    /// Bland's rule: enter the lowest-index column (below `allowed`) with
    /// negative reduced cost; leave by minimum ratio, ties broken by the
    /// smallest basic variable index. Returns false on an unbounded ray.
    fn run_bland(&mut self, allowed: usize) -> bool {
        loop {
            let Some(s) = (0..allowed).find(|&j| self.zrow[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(ExactRational, usize, usize)> = None;
            for i in 0..self.tab.len() {
                if !self.tab[i][s].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.tab[i][s];
                let replace = match &best {
                    None => true,
                    Some((br, bv, _)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < *bv)
                    }
                };
                if replace {
                    best = Some((ratio, self.basis[i], i));
                }
            }
            let Some((_, _, r)) = best else {
                return false;
            };
            self.pivot(r, s);
        }
    }
}

/// Two-phase primal simplex with exact pivots. Only dimensional
/// consistency is enforced here; negative objectives are legal (used by
/// crafted degenerate instances) even though `LinearProgram::new` forbids
/// them for the programs this crate generates.
pub fn solve_lp(p: &LinearProgram) -> Result<Solution, SolverError> {
    p.check_dimensions()?;
    let m = p.constraints.num_rows();
    let n = p.constraints.num_cols();

    if m == 0 {
        // No constraints: the origin is optimal unless a negative cost
        // direction makes the program unbounded.
        if p.objective.iter().any(Signed::is_negative) {
            return Ok(Solution::non_optimal(SolveStatus::Unbounded, 0));
        }
        return Ok(Solution {
            status: SolveStatus::Optimal,
            x: alloc::vec![ExactRational::zero(); n],
            cost: ExactRational::zero(),
            pivots: 0,
            branch_nodes: 0,
        });
    }

    // Phase 1: artificial basis, rows flipped so the rhs is nonnegative.
    let mut tab = p.constraints.to_dense();
    let mut rhs = p.rhs.clone();
    for i in 0..m {
        if rhs[i].is_negative() {
            rhs[i] = -rhs[i].clone();
            for e in tab[i].iter_mut() {
                if !e.is_zero() {
                    *e = -e.clone();
                }
            }
        }
        tab[i].extend((0..m).map(|a| {
            if a == i {
                ExactRational::one()
            } else {
                ExactRational::zero()
            }
        }));
    }
    let basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of minimizing the artificial sum: c̄_j = −Σ_i a_ij.
    let mut zrow = alloc::vec![ExactRational::zero(); n + m];
    for (j, z) in zrow.iter_mut().enumerate().take(n) {
        for row in tab.iter() {
            if !row[j].is_zero() {
                *z = &*z - &row[j];
            }
        }
    }
    let mut t = Tableau { tab, rhs, basis, zrow, pivots: 0 };
    // Structural columns only may enter; an artificial that leaves the
    // basis is implicitly discarded.
    let bounded = t.run_bland(n);
    assert!(bounded, "the artificial-sum objective is bounded below");

    let infeasible = t
        .basis
        .iter()
        .zip(&t.rhs)
        .any(|(&b, v)| b >= n && !v.is_zero());
    if infeasible {
        return Ok(Solution::non_optimal(SolveStatus::Infeasible, t.pivots));
    }

    // Drive basic artificials (all at zero level) out of the basis; rows
    // with no structural entry left are redundant and get dropped.
    let mut redundant: Vec<usize> = Vec::new();
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        match (0..n).find(|&j| !t.tab[r][j].is_zero()) {
            Some(j) => t.pivot(r, j),
            None => redundant.push(r),
        }
    }
    for &r in redundant.iter().rev() {
        t.tab.remove(r);
        t.rhs.remove(r);
        t.basis.remove(r);
    }
    for row in t.tab.iter_mut() {
        row.truncate(n);
    }

    // Phase 2: reduced costs of the real objective over the phase-1 basis.
    let mut zrow = p.objective.clone();
    for (i, row) in t.tab.iter().enumerate() {
        let cb = &p.objective[t.basis[i]];
        if cb.is_zero() {
            continue;
        }
        for (j, a) in row.iter().enumerate() {
            if !a.is_zero() {
                zrow[j] = &zrow[j] - &(cb * a);
            }
        }
    }
    t.zrow = zrow;
    if !t.run_bland(n) {
        return Ok(Solution::non_optimal(SolveStatus::Unbounded, t.pivots));
    }

    let mut x = alloc::vec![ExactRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        x[b] = t.rhs[i].clone();
    }
    let cost = p
        .objective
        .iter()
        .zip(&x)
        .filter(|(c, v)| !c.is_zero() && !v.is_zero())
        .fold(ExactRational::zero(), |acc, (c, v)| acc + c * v);
    Ok(Solution { status: SolveStatus::Optimal, x, cost, pivots: t.pivots, branch_nodes: 0 })
}

/// One appended branching constraint: x_var + s = value (upper) or
/// x_var − s = value (lower), s ≥ 0 a fresh slack.
#[derive(Debug, Clone)]
struct BranchBound {
    var: usize,
    is_upper: bool,
    value: ExactRational,
}

fn build_node_program(p: &LinearProgram, bounds: &[BranchBound]) -> LinearProgram {
    let m = p.constraints.num_rows();
    let n = p.constraints.num_cols();
    let extra = bounds.len();
    let mut columns: Vec<SparseColumn> = Vec::with_capacity(n + extra);
    for j in 0..n {
        let mut col = p.constraints.column(j).to_vec();
        for (b, bound) in bounds.iter().enumerate() {
            if bound.var == j {
                col.push((m + b, ExactRational::one()));
            }
        }
        columns.push(col);
    }
    for (b, bound) in bounds.iter().enumerate() {
        let sign = if bound.is_upper {
            ExactRational::one()
        } else {
            -ExactRational::one()
        };
        columns.push(alloc::vec![(m + b, sign)]);
    }
    let constraints = SparseRationalMatrix::from_columns(m + extra, columns)
        .expect("bound rows extend a well-formed matrix");
    let mut objective = p.objective.clone();
    objective.resize(n + extra, ExactRational::zero());
    let mut rhs = p.rhs.clone();
    rhs.extend(bounds.iter().map(|b| b.value.clone()));
    let mut integrality = p.integrality.clone();
    integrality.resize(n + extra, false);
    LinearProgram { objective, constraints, rhs, integrality }
}

/// Masked variable whose fractional part is nearest ½ (ties: lowest
/// index), or None when every masked variable is integral.
fn pick_branch_var(p: &LinearProgram, x: &[ExactRational]) -> Option<usize> {
    let half = ExactRational::new(1.into(), 2.into());
    let mut best: Option<(ExactRational, usize)> = None;
    for (j, flag) in p.integrality.iter().enumerate() {
        if !flag || x[j].is_integer() {
            continue;
        }
        let frac = &x[j] - &x[j].floor();
        let dist = (&frac - &half).abs();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, j));
        }
    }
    best.map(|(_, j)| j)
}

/// Depth-first branch-and-bound over `solve_lp`, with exact-rational
/// bound pruning. Returns the integral optimum, infeasibility, or the
/// relaxation's unboundedness.
pub fn solve_mip(p: &LinearProgram) -> Result<Solution, SolverError> {
    solve_mip_with_limit(p, DEFAULT_NODE_LIMIT)
}

pub fn solve_mip_with_limit(p: &LinearProgram, node_limit: u64) -> Result<Solution, SolverError> {
    p.check_dimensions()?;
    let n = p.num_vars();
    let mut pivots: u64 = 0;
    let mut nodes: u64 = 0;
    let mut incumbent: Option<(ExactRational, Vec<ExactRational>)> = None;
    let mut stack: Vec<Vec<BranchBound>> = alloc::vec![Vec::new()];

    while let Some(bounds) = stack.pop() {
        nodes += 1;
        if nodes > node_limit {
            return Err(SolverError::NodeLimitExceeded { limit: node_limit });
        }
        let node = if bounds.is_empty() {
            p.clone()
        } else {
            build_node_program(p, &bounds)
        };
        let relax = solve_lp(&node)?;
        pivots += relax.pivots;
        match relax.status {
            SolveStatus::Unbounded => {
                assert!(bounds.is_empty(), "children of a bounded node stay bounded");
                return Ok(Solution {
                    status: SolveStatus::Unbounded,
                    x: Vec::new(),
                    cost: ExactRational::zero(),
                    pivots,
                    branch_nodes: nodes,
                });
            }
            SolveStatus::Infeasible => continue,
            SolveStatus::Optimal => {}
        }
        if incumbent.as_ref().is_some_and(|(best, _)| relax.cost >= *best) {
            continue;
        }
        match pick_branch_var(p, &relax.x) {
            None => {
                let mut x = relax.x;
                x.truncate(n);
                incumbent = Some((relax.cost, x));
            }
            Some(j) => {
                let floor = relax.x[j].floor();
                let mut upper = bounds.clone();
                upper.push(BranchBound { var: j, is_upper: true, value: floor.clone() });
                let mut lower = bounds;
                lower.push(BranchBound {
                    var: j,
                    is_upper: false,
                    value: &floor + &ExactRational::one(),
                });
                // Depth-first, floor branch explored first.
                stack.push(lower);
                stack.push(upper);
            }
        }
    }

    Ok(match incumbent {
        Some((cost, x)) => {
            Solution { status: SolveStatus::Optimal, x, cost, pivots, branch_nodes: nodes }
        }
        None => Solution {
            status: SolveStatus::Infeasible,
            x: Vec::new(),
            cost: ExactRational::zero(),
            pivots,
            branch_nodes: nodes,
        },
    })
}

/// Shared solver configuration handed to the optimizers: one place to set
/// the branch-and-bound node budget.
#[derive(Debug, Clone, Copy)]
pub struct Solver {
    node_limit: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { node_limit: DEFAULT_NODE_LIMIT }
    }
}

impl Solver {
    pub fn new(node_limit: u64) -> Self {
        Solver { node_limit }
    }

    pub fn lp(&self, p: &LinearProgram) -> Result<Solution, SolverError> {
        solve_lp(p)
    }

    pub fn mip(&self, p: &LinearProgram) -> Result<Solution, SolverError> {
        solve_mip_with_limit(p, self.node_limit)
    }
}

fn fmt_linear(coeffs: &[(usize, &ExactRational)]) -> String {
    use core::fmt::Write;
    if coeffs.is_empty() {
        return String::from("0");
    }
    let mut out = String::new();
    for (pos, (j, c)) in coeffs.iter().enumerate() {
        let mag = c.abs();
        if pos == 0 {
            if c.is_negative() {
                out.push_str("- ");
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if mag.is_one() {
            let _ = write!(out, "x{}", j + 1);
        } else {
            let _ = write!(out, "{} x{}", crate::rational::rat_to_string(&mag), j + 1);
        }
    }
    out
}

/// Plain-text dump of a program (minimize / subject-to sections with exact
/// fractions), for eyeballing and for feeding to external solvers when
/// cross-checking a disagreement.
pub fn dump_lp_format(p: &LinearProgram) -> String {
    use core::fmt::Write;
    let mut out = String::from("minimize\n  ");
    let obj: Vec<(usize, &ExactRational)> = p
        .objective
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    out.push_str(&fmt_linear(&obj));
    out.push_str("\nsubject to\n");
    let dense = p.constraints.to_dense();
    for (i, row) in dense.iter().enumerate() {
        let terms: Vec<(usize, &ExactRational)> = row
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let _ = writeln!(
            out,
            "  c{}: {} = {}",
            i + 1,
            fmt_linear(&terms),
            crate::rational::rat_to_string(&p.rhs[i])
        );
    }
    let _ = writeln!(out, "bounds\n  x1 .. x{} >= 0", p.num_vars().max(1));
    let masked: Vec<String> = p
        .integrality
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(j, _)| format!("x{}", j + 1))
        .collect();
    if !masked.is_empty() {
        let _ = writeln!(out, "integers\n  {}", masked.join(" "));
    }
    out.push_str("end\n");
    out
}
