//! Independent cross-checks built on raw matrices and brute force:
//! rank-based cycle counts, exhaustive sign-chain search, dense linear
//! solves, and basic-solution enumeration. Nothing here reuses the
//! decomposition bookkeeping or the simplex internals it verifies.

use std::collections::BTreeSet;

use cyclerep_core::complex::{boundary_matrix, FilteredComplex};
use cyclerep_core::lp::LinearProgram;
use cyclerep_core::persistence::CycleRepresentative;
use cyclerep_core::rational::{
    merge_scaled, rat_int, ExactRational, SparseColumn, SparseRationalMatrix,
};
use num_traits::{One, Signed, Zero};

/// Independent cycle-class count at scale `eps`: edges in the prefix
/// minus the ranks of both boundary prefixes.
pub fn betti1_at(
    k: &FilteredComplex,
    d1: &SparseRationalMatrix,
    d2: &SparseRationalMatrix,
    eps: &ExactRational,
) -> usize {
    let ne = k.prefix_len(1, eps);
    let nt = k.prefix_len(2, eps);
    let vrows: Vec<usize> = (0..k.count(0)).collect();
    let ecols: Vec<usize> = (0..ne).collect();
    let tcols: Vec<usize> = (0..nt).collect();
    let erows: Vec<usize> = (0..k.count(1)).collect();
    let r1 = d1.submatrix(&vrows, &ecols).unwrap().rank();
    let r2 = d2.submatrix(&erows, &tcols).unwrap().rank();
    ne - r1 - r2
}

/// Representatives alive at each scale must number exactly the cycle
/// classes and stay independent modulo the triangle-boundary prefix.
pub fn basis_at_scales(
    k: &FilteredComplex,
    reps: &[CycleRepresentative],
    scales: &[ExactRational],
    label: &str,
) -> Result<(), String> {
    let d1 = boundary_matrix(k, 1).unwrap();
    let d2 = boundary_matrix(k, 2).unwrap();
    for eps in scales {
        let alive: Vec<&CycleRepresentative> = reps
            .iter()
            .filter(|r| r.birth <= *eps && r.death.as_ref().is_none_or(|d| d > eps))
            .collect();
        let expected = betti1_at(k, &d1, &d2, eps);
        if alive.len() != expected {
            return Err(format!(
                "{label}: {} representatives alive at scale {eps}, rank oracle says {expected}",
                alive.len()
            ));
        }
        let nt = k.prefix_len(2, eps);
        let mut cols: Vec<SparseColumn> = (0..nt).map(|t| d2.column(t).to_vec()).collect();
        let r2 = SparseRationalMatrix::from_columns(k.count(1), cols.clone()).unwrap().rank();
        for rep in &alive {
            cols.push(rep.chain.entries().to_vec());
        }
        let full = SparseRationalMatrix::from_columns(k.count(1), cols).unwrap().rank();
        if full != r2 + alive.len() {
            return Err(format!(
                "{label}: dependent representatives at scale {eps} (rank {full} vs {} + {})",
                r2,
                alive.len()
            ));
        }
    }
    Ok(())
}

/// Distinct interval endpoints of a barcode, as exact filtration keys.
pub fn barcode_endpoint_scales(
    barcode: &[cyclerep_core::persistence::IntervalPair],
) -> Vec<ExactRational> {
    let mut scales: Vec<ExactRational> = barcode.iter().map(|b| b.birth_value.clone()).collect();
    scales.extend(barcode.iter().filter_map(|b| b.death_value.clone()));
    scales.sort();
    scales.dedup();
    scales
}

/// Every scale at which the complex changes in dimension 1 or 2.
pub fn all_birth_scales(k: &FilteredComplex) -> Vec<ExactRational> {
    let mut scales: Vec<ExactRational> = k.births(1).to_vec();
    scales.extend(k.births(2).iter().cloned());
    scales.sort();
    scales.dedup();
    scales
}

/// Exact row-echelon span for membership tests, keyed by lowest row.
pub struct Span {
    pivots: std::collections::BTreeMap<usize, SparseColumn>,
}

impl Span {
    pub fn new(columns: &[SparseColumn]) -> Self {
        let mut s = Span { pivots: std::collections::BTreeMap::new() };
        for c in columns {
            s.insert(c);
        }
        s
    }

    pub fn insert(&mut self, column: &SparseColumn) -> bool {
        let res = self.reduce(column);
        match res.last() {
            None => false,
            Some(&(low, _)) => {
                self.pivots.insert(low, res);
                true
            }
        }
    }

    fn reduce(&self, column: &SparseColumn) -> SparseColumn {
        let mut col = column.clone();
        while let Some(&(low, ref v)) = col.last() {
            let Some(p) = self.pivots.get(&low) else { break };
            let pv = &p.last().expect("pivot columns are nonzero").1;
            let factor = -(v / pv);
            col = merge_scaled(&col, p, &factor);
        }
        col
    }

    pub fn contains(&self, column: &SparseColumn) -> bool {
        self.reduce(column).is_empty()
    }
}

/// A basis of the annihilator of the column span: vectors y with
/// y . c = 0 for every column c. Membership of d in the span is then the
/// d . y = 0 test against each basis vector.
pub fn span_annihilator(columns: &[SparseColumn], rows: usize) -> Vec<Vec<ExactRational>> {
    // Dense matrix whose rows are the columns, reduced to echelon form.
    let mut m: Vec<Vec<ExactRational>> = columns
        .iter()
        .map(|c| {
            let mut r = vec![ExactRational::zero(); rows];
            for (i, v) in c {
                r[*i] = v.clone();
            }
            r
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..rows {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pr);
        let inv = m[rank][col].clone();
        for x in &mut m[rank] {
            *x = &*x / &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..rows {
                    let sub = &m[rank][c] * &f;
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let pivot_set: BTreeSet<usize> = pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for f in 0..rows {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut y = vec![ExactRational::zero(); rows];
        y[f] = ExactRational::one();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            y[pc] = -m[i][f].clone();
        }
        basis.push(y);
    }
    basis
}

/// Exhaustive search for the cheapest chain with entries in {-1, 0, 1}
/// reachable from `origin` along the span of `directions`, restricted to
/// costs at most `bound` (uniform weights, so cost = support size).
/// Coordinates no direction touches are forced to the origin's value.
/// Returns the minimum cost found, or None if nothing within the bound
/// is reachable.
pub fn cheapest_sign_chain(
    origin: &[(usize, ExactRational)],
    directions: &[SparseColumn],
    rows: usize,
    bound: u64,
) -> Option<u64> {
    let nulls = span_annihilator(directions, rows);
    let touched: BTreeSet<usize> =
        directions.iter().flat_map(|c| c.iter().map(|(r, _)| *r)).collect();
    let mut orig = vec![ExactRational::zero(); rows];
    for (r, v) in origin {
        orig[*r] = v.clone();
    }
    let one = rat_int(1);
    let mut fixed_cost = 0u64;
    for (r, v) in orig.iter().enumerate() {
        if !touched.contains(&r) && !v.is_zero() {
            if v.abs() != one {
                return None;
            }
            fixed_cost += 1;
        }
    }
    if fixed_cost > bound {
        return None;
    }
    let free: Vec<usize> = touched.iter().copied().collect();
    // acc_i tracks y_i . (x - orig) over the free rows; forced rows
    // contribute zero because x matches the origin there.
    let mut acc: Vec<ExactRational> = nulls
        .iter()
        .map(|y| {
            let mut s = ExactRational::zero();
            for &r in &free {
                s -= &y[r] * &orig[r];
            }
            s
        })
        .collect();
    let mut best: Option<u64> = None;
    search(0, fixed_cost, bound, &free, &nulls, &mut acc, &mut best);
    best
}

fn search(
    idx: usize,
    cost: u64,
    bound: u64,
    free: &[usize],
    nulls: &[Vec<ExactRational>],
    acc: &mut [ExactRational],
    best: &mut Option<u64>,
) {
    if let Some(b) = *best {
        if cost >= b {
            return;
        }
    }
    if idx == free.len() {
        if acc.iter().all(Zero::is_zero) {
            *best = Some(best.map_or(cost, |b| b.min(cost)));
        }
        return;
    }
    let r = free[idx];
    search(idx + 1, cost, bound, free, nulls, acc, best);
    if cost + 1 > bound {
        return;
    }
    for sign in [1i64, -1] {
        let step = rat_int(sign);
        for (i, y) in nulls.iter().enumerate() {
            acc[i] += &y[r] * &step;
        }
        search(idx + 1, cost + 1, bound, free, nulls, acc, best);
        for (i, y) in nulls.iter().enumerate() {
            acc[i] -= &y[r] * &step;
        }
    }
}

/// Exact solve of a dense square system; None when singular.
pub fn solve_square(
    mut a: Vec<Vec<ExactRational>>,
    mut b: Vec<ExactRational>,
) -> Option<Vec<ExactRational>> {
    let n = a.len();
    for col in 0..n {
        let pr = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pr);
        b.swap(col, pr);
        let inv = a[col][col].clone();
        for x in &mut a[col] {
            *x = &*x / &inv;
        }
        b[col] = &b[col] / &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let sub = &a[col][c] * &f;
                    a[r][c] = &a[r][c] - &sub;
                }
                let sub = &b[col] * &f;
                b[r] = &b[r] - &sub;
            }
        }
    }
    Some(b)
}

/// Minimum cost over every basic feasible solution: all column subsets
/// of full row size, solved exactly, filtered to nonnegative solutions.
pub fn vertex_enumeration_optimum(p: &LinearProgram) -> Option<ExactRational> {
    let m = p.rhs.len();
    let n = p.num_vars();
    let mut best: Option<ExactRational> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let a: Vec<Vec<ExactRational>> = (0..m)
            .map(|r| cols.iter().map(|&j| p.constraints.entry(r, j).clone()).collect())
            .collect();
        let Some(x) = solve_square(a, p.rhs.clone()) else { continue };
        if x.iter().any(Signed::is_negative) {
            continue;
        }
        let cost: ExactRational =
            cols.iter().zip(&x).map(|(&j, v)| &p.objective[j] * v).sum();
        best = Some(match best {
            None => cost,
            Some(b) => b.min(cost),
        });
    }
    best
}

/// A . x - b, computed column-by-column; exact feasibility check.
pub fn residual(p: &LinearProgram, x: &[ExactRational]) -> Vec<ExactRational> {
    let m = p.rhs.len();
    let mut acc = vec![ExactRational::zero(); m];
    for (j, v) in x.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        for (r, a) in p.constraints.column(j) {
            acc[*r] += a * v;
        }
    }
    for (r, b) in p.rhs.iter().enumerate() {
        acc[r] -= b;
    }
    acc
}
