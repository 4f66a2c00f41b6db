//! Persistence of filtered complexes over ℚ: exact left-to-right column
//! reduction of boundary matrices (R = D·V), birth/death pairing, the
//! dimension-1 barcode, and the initial cycle basis the optimizers refine.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::complex::{boundary_matrix, Chain, ComplexError, FilteredComplex};
use crate::rational::{ExactRational, SparseRationalMatrix};

/// Output of reducing a boundary matrix D: exact matrices R and V with
/// R = D·V, R reduced (the map column → lowest nonzero row is injective on
/// nonzero columns), and V unit upper triangular.
#[derive(Debug, Clone)]
pub struct Decomposition {
    r: SparseRationalMatrix,
    v: SparseRationalMatrix,
    low: Vec<Option<usize>>,
}

impl Decomposition {
    pub fn r(&self) -> &SparseRationalMatrix {
        &self.r
    }

    pub fn v(&self) -> &SparseRationalMatrix {
        &self.v
    }

    /// Lowest nonzero row of R's column `j`, if any.
    pub fn low(&self, j: usize) -> Option<usize> {
        self.low[j]
    }

    pub fn lows(&self) -> &[Option<usize>] {
        &self.low
    }
}

/// Standard left-to-right column reduction with exact rational
/// eliminations. Columns must already be in a filtration-preserving order
/// (as produced by `boundary_matrix`).
pub fn rdv_decompose(d: &SparseRationalMatrix) -> Decomposition {
    let n = d.num_cols();
    let mut r = d.clone();
    let mut v = SparseRationalMatrix::identity(n);
    let mut pivot_of_row: BTreeMap<usize, usize> = BTreeMap::new();
    for j in 0..n {
        while let Some(low) = r.column_low(j) {
            let Some(&j0) = pivot_of_row.get(&low) else { break };
            let factor = -(r.entry(low, j) / r.entry(low, j0));
            r.add_scaled_column(j, j0, &factor);
            v.add_scaled_column(j, j0, &factor);
        }
        if let Some(low) = r.column_low(j) {
            pivot_of_row.insert(low, j);
        }
    }
    let low = (0..n).map(|j| r.column_low(j)).collect();
    Decomposition { r, v, low }
}

/// A dimension-1 birth/death pair. `death_simplex` is absent for essential
/// cycles, whose interval is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPair {
    pub dimension: usize,
    pub birth_simplex: usize,
    pub death_simplex: Option<usize>,
    pub birth_value: ExactRational,
    pub death_value: Option<ExactRational>,
}

impl IntervalPair {
    /// Half-open interval is empty (birth equals death).
    pub fn is_zero_length(&self) -> bool {
        self.death_value.as_ref() == Some(&self.birth_value)
    }
}

/// A 1-cycle with exact coefficients and its half-open lifespan
/// [birth, death or ∞). `source_pair` records the interval it was extracted
/// from, when it came straight out of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRepresentative {
    pub chain: Chain,
    pub birth: ExactRational,
    pub death: Option<ExactRational>,
    pub source_pair: Option<IntervalPair>,
}

fn barcode_cmp(a: &IntervalPair, b: &IntervalPair) -> Ordering {
    a.birth_value
        .cmp(&b.birth_value)
        .then_with(|| match (&a.death_value, &b.death_value) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
        .then(a.birth_simplex.cmp(&b.birth_simplex))
}

/// Rows that appear as the low of some nonzero column of the dimension-2
/// reduction: the edges killed by a triangle.
fn killed_rows(dec2: &Decomposition) -> BTreeMap<usize, usize> {
    dec2.lows()
        .iter()
        .enumerate()
        .filter_map(|(t, low)| low.map(|e| (e, t)))
        .collect()
}

/// Dimension-1 barcode: one pair per (σ, τ) in the pairing of the ∂₂
/// reduction with Birth(σ) strictly below Birth(τ), plus one unbounded pair
/// per essential cycle (zero ∂₁ column never killed by a triangle).
/// Zero-length pairs are dropped here; `full_pairing` retains them.
pub fn extract_barcode(
    dec1: &Decomposition,
    dec2: &Decomposition,
    k: &FilteredComplex,
) -> Vec<IntervalPair> {
    let killed = killed_rows(dec2);
    let mut bars: Vec<IntervalPair> = full_pairing(dec2, k)
        .into_iter()
        .filter(|p| !p.is_zero_length())
        .collect();
    for e in 0..k.count(1) {
        if dec1.low(e).is_none() && !killed.contains_key(&e) {
            bars.push(IntervalPair {
                dimension: 1,
                birth_simplex: e,
                death_simplex: None,
                birth_value: k.birth(1, e).clone(),
                death_value: None,
            });
        }
    }
    bars.sort_by(barcode_cmp);
    bars
}

/// Every (σ, τ) pair of the ∂₂ reduction, zero-length included, in barcode
/// order. The refinement-order bookkeeping of the triangle optimizer needs
/// the degenerate pairs even though the public barcode omits them.
pub fn full_pairing(dec2: &Decomposition, k: &FilteredComplex) -> Vec<IntervalPair> {
    let mut pairs: Vec<IntervalPair> = dec2
        .lows()
        .iter()
        .enumerate()
        .filter_map(|(t, low)| {
            low.map(|e| IntervalPair {
                dimension: 1,
                birth_simplex: e,
                death_simplex: Some(t),
                birth_value: k.birth(1, e).clone(),
                death_value: Some(k.birth(2, t).clone()),
            })
        })
        .collect();
    pairs.sort_by(barcode_cmp);
    pairs
}

/// The initial persistent cycle basis, in barcode order: the reduced ∂₂
/// column of each finite bar (kept exactly as the reduction produced it, no
/// rescaling) and the V column of each essential edge.
pub fn initial_cycle_basis(
    dec1: &Decomposition,
    dec2: &Decomposition,
    k: &FilteredComplex,
) -> Vec<CycleRepresentative> {
    extract_barcode(dec1, dec2, k)
        .into_iter()
        .map(|pair| {
            let chain = match pair.death_simplex {
                Some(t) => Chain::from_entries(1, dec2.r().column(t).to_vec()),
                None => Chain::from_entries(1, dec1.v().column(pair.birth_simplex).to_vec()),
            };
            CycleRepresentative {
                chain,
                birth: pair.birth_value.clone(),
                death: pair.death_value.clone(),
                source_pair: Some(pair),
            }
        })
        .collect()
}

/// Indices of the nonzero columns of a reduced matrix. Restricting ∂₂ to
/// these columns preserves its column span, so they suffice as the
/// bounding-chain dictionary in the edge-loss program.
pub fn column_basis_indices(r: &SparseRationalMatrix) -> Vec<usize> {
    (0..r.num_cols()).filter(|&j| !r.is_column_zero(j)).collect()
}

/// Everything the optimizers need from one complex, computed in one pass.
#[derive(Debug, Clone)]
pub struct PersistenceAnalysis {
    pub d1: SparseRationalMatrix,
    pub d2: SparseRationalMatrix,
    pub dec1: Decomposition,
    pub dec2: Decomposition,
    pub barcode: Vec<IntervalPair>,
    pub pairing: Vec<IntervalPair>,
    pub basis: Vec<CycleRepresentative>,
}

/// Decompose both boundary matrices of `k` and extract barcode, pairing,
/// and initial basis.
pub fn analyze(k: &FilteredComplex) -> Result<PersistenceAnalysis, ComplexError> {
    let d1 = boundary_matrix(k, 1)?;
    let d2 = boundary_matrix(k, 2)?;
    let dec1 = rdv_decompose(&d1);
    let dec2 = rdv_decompose(&d2);
    let barcode = extract_barcode(&dec1, &dec2, k);
    let pairing = full_pairing(&dec2, k);
    let basis = initial_cycle_basis(&dec1, &dec2, k);
    Ok(PersistenceAnalysis { d1, d2, dec1, dec2, barcode, pairing, basis })
}
