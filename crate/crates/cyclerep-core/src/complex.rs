//! Filtered complexes: Vietoris-Rips construction from dissimilarity input,
//! explicit hand-built filtrations, simplex ordering, boundary matrices,
//! edge lengths and triangle areas, and sparse chains.
//!
//! Filtration keys are exact rationals. For point-cloud input the key of an
//! edge is the exact squared Euclidean distance (rational whenever the
//! coordinates are binary64); square roots are taken only for reporting and
//! for edge-length weights, so ordering and tie detection are exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::{
    rat_from_float, rat_int, rat_to_f64, ExactRational, RationalError, SparseColumn,
    SparseRationalMatrix,
};
use num_traits::Zero;

/// Validation and construction errors for complexes.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexError {
    EmptyInput,
    BadSimplex { reason: &'static str },
    NotSquare { row: usize, expected: usize, found: usize },
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    NegativeEntry { i: usize, j: usize },
    NonFinite { i: usize, j: usize },
    MixedPointDimensions { point: usize, expected: usize, found: usize },
    MaxDimUnsupported { requested: usize },
    MissingFace { simplex: Vec<usize>, face: Vec<usize> },
    FiltrationViolation { simplex: Vec<usize>, face: Vec<usize> },
    DuplicateSimplex { simplex: Vec<usize> },
    VertexGap { expected: usize, found: usize },
    AreaUndefined { triangle: Vec<usize> },
    DimensionOutOfRange { dim: usize },
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::EmptyInput => write!(f, "input contains no points"),
            ComplexError::BadSimplex { reason } => write!(f, "bad simplex: {reason}"),
            ComplexError::NotSquare { row, expected, found } => {
                write!(f, "row {row}: expected {expected} entries, found {found}")
            }
            ComplexError::Asymmetric { i, j } => {
                write!(f, "matrix asymmetric at ({i},{j})")
            }
            ComplexError::NonzeroDiagonal { i } => {
                write!(f, "nonzero diagonal entry at ({i},{i})")
            }
            ComplexError::NegativeEntry { i, j } => {
                write!(f, "negative dissimilarity at ({i},{j})")
            }
            ComplexError::NonFinite { i, j } => {
                write!(f, "non-finite value at ({i},{j})")
            }
            ComplexError::MixedPointDimensions { point, expected, found } => {
                write!(f, "point {point}: expected {expected} coordinates, found {found}")
            }
            ComplexError::MaxDimUnsupported { requested } => {
                write!(f, "max dimension {requested} unsupported (this build stops at 2)")
            }
            ComplexError::MissingFace { simplex, face } => {
                write!(f, "simplex {simplex:?} stored without its face {face:?}")
            }
            ComplexError::FiltrationViolation { simplex, face } => {
                write!(f, "simplex {simplex:?} born before its face {face:?}")
            }
            ComplexError::DuplicateSimplex { simplex } => {
                write!(f, "simplex {simplex:?} listed twice")
            }
            ComplexError::VertexGap { expected, found } => {
                write!(f, "vertices must be 0..n contiguously: expected {expected}, found {found}")
            }
            ComplexError::AreaUndefined { triangle } => {
                write!(f, "triangle {triangle:?}: edge lengths violate the triangle inequality")
            }
            ComplexError::DimensionOutOfRange { dim } => {
                write!(f, "dimension {dim} out of range for this complex")
            }
        }
    }
}

impl core::error::Error for ComplexError {}

impl From<RationalError> for ComplexError {
    fn from(_: RationalError) -> Self {
        // Non-finite floats surface with their own location where known;
        // constructors pre-check and report coordinates, so this is a
        // placeholder for paths that validated earlier.
        ComplexError::NonFinite { i: 0, j: 0 }
    }
}

/// A simplex of dimension 0, 1, or 2: strictly increasing vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::BadSimplex { reason: "empty vertex list" });
        }
        if vertices.len() > 3 {
            return Err(ComplexError::BadSimplex { reason: "dimension above 2" });
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplexError::BadSimplex { reason: "vertices not strictly increasing" });
        }
        Ok(Simplex { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Codimension-1 faces in the omit-vᵢ order (i = 0, 1, …), matching the
    /// boundary-map sign convention (−1)^i.
    pub fn faces(&self) -> Vec<Simplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|omit| {
                let vs = self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &v)| (k != omit).then_some(v))
                    .collect();
                Simplex { vertices: vs }
            })
            .collect()
    }
}

/// How filtration keys relate to the reported scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationScale {
    /// Keys are the dissimilarity entries themselves.
    Raw,
    /// Keys are exact squared Euclidean distances; display takes the root.
    SquaredEuclidean,
}

/// Validated symmetric dissimilarity input with exact rational entries.
#[derive(Debug, Clone)]
pub struct DissimilarityMatrix {
    n: usize,
    entries: Vec<ExactRational>,
    scale: FiltrationScale,
    coords: Option<Vec<Vec<f64>>>,
}

impl DissimilarityMatrix {
    /// Validate a square, exactly symmetric, zero-diagonal, nonnegative grid
    /// of binary64 dissimilarities. Entries embed exactly into ℚ.
    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Result<Self, ComplexError> {
        let n = rows.len();
        if n == 0 {
            return Err(ComplexError::EmptyInput);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ComplexError::NotSquare { row: i, expected: n, found: row.len() });
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if !v.is_finite() {
                    return Err(ComplexError::NonFinite { i, j });
                }
                if v < 0.0 {
                    return Err(ComplexError::NegativeEntry { i, j });
                }
                if i == j && v != 0.0 {
                    return Err(ComplexError::NonzeroDiagonal { i });
                }
                if rows[j][i].to_bits() != v.to_bits() && rows[j][i] != v {
                    return Err(ComplexError::Asymmetric { i, j });
                }
                entries.push(rat_from_float(v).expect("finiteness checked"));
            }
        }
        Ok(DissimilarityMatrix { n, entries, scale: FiltrationScale::Raw, coords: None })
    }

    /// Exact squared-distance matrix of a Euclidean point cloud; keeps the
    /// coordinates for areas and planar statistics.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self, ComplexError> {
        let n = points.len();
        if n == 0 {
            return Err(ComplexError::EmptyInput);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(ComplexError::MixedPointDimensions { point: 0, expected: 1, found: 0 });
        }
        for (p, coords) in points.iter().enumerate() {
            if coords.len() != dim {
                return Err(ComplexError::MixedPointDimensions {
                    point: p,
                    expected: dim,
                    found: coords.len(),
                });
            }
            for (axis, &c) in coords.iter().enumerate() {
                if !c.is_finite() {
                    return Err(ComplexError::NonFinite { i: p, j: axis });
                }
            }
        }
        let exact: Vec<Vec<ExactRational>> = points
            .iter()
            .map(|p| p.iter().map(|&c| rat_from_float(c).expect("checked")).collect())
            .collect();
        let mut entries = alloc::vec![ExactRational::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let mut acc = ExactRational::zero();
                for a in 0..dim {
                    let d = &exact[i][a] - &exact[j][a];
                    acc += &d * &d;
                }
                entries[i * n + j] = acc.clone();
                entries[j * n + i] = acc;
            }
        }
        Ok(DissimilarityMatrix {
            n,
            entries,
            scale: FiltrationScale::SquaredEuclidean,
            coords: Some(points.to_vec()),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExactRational {
        &self.entries[i * self.n + j]
    }

    pub fn scale(&self) -> FiltrationScale {
        self.scale
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }
}

/// A filtered simplicial complex through dimension 2.
///
/// Per-dimension simplex lists are sorted by (birth, lexicographic vertex
/// list); the global simplex-wise order refines this by inserting dimension
/// between birth and the lexicographic tie-break, so every prefix of the
/// order is a simplicial complex.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    scale: FiltrationScale,
    coords: Option<Vec<Vec<f64>>>,
    num_vertices: usize,
    simplices: [Vec<Simplex>; 3],
    births: [Vec<ExactRational>; 3],
    order_pos: [Vec<usize>; 3],
    edge_lengths: Vec<f64>,
    edge_index: BTreeMap<(usize, usize), usize>,
}

impl FilteredComplex {
    /// Vietoris-Rips filtration: an edge is born at its dissimilarity key, a
    /// triangle at the max of its three edge keys; only simplices with birth
    /// within `max_eps` appear. `max_dim` may be 1 or 2.
    pub fn build_vr(
        d: &DissimilarityMatrix,
        max_eps: Option<f64>,
        max_dim: usize,
    ) -> Result<Self, ComplexError> {
        if max_dim == 0 || max_dim > 2 {
            return Err(ComplexError::MaxDimUnsupported { requested: max_dim });
        }
        let eps_key: Option<ExactRational> = match max_eps {
            None => None,
            Some(e) => {
                if !e.is_finite() {
                    return Err(ComplexError::NonFinite { i: 0, j: 0 });
                }
                if e < 0.0 {
                    // Negative threshold admits nothing; keys are ≥ 0.
                    Some(rat_int(-1))
                } else {
                    let re = rat_from_float(e).expect("checked");
                    Some(match d.scale {
                        FiltrationScale::Raw => re,
                        FiltrationScale::SquaredEuclidean => &re * &re,
                    })
                }
            }
        };
        let n = d.len();
        let admitted = |key: &ExactRational| eps_key.as_ref().is_none_or(|e| key <= e);

        let mut edges: Vec<(Simplex, ExactRational)> = Vec::new();
        let mut edge_key: BTreeMap<(usize, usize), ExactRational> = BTreeMap::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let key = d.entry(u, v).clone();
                if admitted(&key) {
                    edge_key.insert((u, v), key.clone());
                    edges.push((Simplex { vertices: alloc::vec![u, v] }, key));
                }
            }
        }

        let mut triangles: Vec<(Simplex, ExactRational)> = Vec::new();
        if max_dim >= 2 {
            for u in 0..n {
                for v in (u + 1)..n {
                    let Some(kuv) = edge_key.get(&(u, v)) else { continue };
                    for w in (v + 1)..n {
                        let (Some(kuw), Some(kvw)) = (edge_key.get(&(u, w)), edge_key.get(&(v, w)))
                        else {
                            continue;
                        };
                        let birth = kuv.max(kuw).max(kvw).clone();
                        triangles.push((Simplex { vertices: alloc::vec![u, v, w] }, birth));
                    }
                }
            }
        }

        Ok(Self::assemble(d.scale, d.coords.clone(), n, edges, triangles))
    }

    /// Build a filtered complex from an explicit simplex list with exact
    /// birth values. Faces must be listed, vertices must be contiguous from
    /// zero, and births must respect the filtration property.
    pub fn from_simplices(
        items: impl IntoIterator<Item = (Vec<usize>, ExactRational)>,
    ) -> Result<Self, ComplexError> {
        let mut by_dim: [Vec<(Simplex, ExactRational)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut birth_of: BTreeMap<Vec<usize>, ExactRational> = BTreeMap::new();
        for (vertices, birth) in items {
            let s = Simplex::new(vertices)?;
            if birth_of.insert(s.vertices.clone(), birth.clone()).is_some() {
                return Err(ComplexError::DuplicateSimplex { simplex: s.vertices });
            }
            by_dim[s.dimension()].push((s, birth));
        }
        let num_vertices = by_dim[0].len();
        if num_vertices == 0 {
            return Err(ComplexError::EmptyInput);
        }
        for (s, _) in &by_dim[0] {
            if s.vertices[0] >= num_vertices {
                return Err(ComplexError::VertexGap {
                    expected: num_vertices,
                    found: s.vertices[0],
                });
            }
        }
        for dim in [1, 2] {
            for (s, birth) in &by_dim[dim] {
                for face in s.faces() {
                    match birth_of.get(face.vertices()) {
                        None => {
                            return Err(ComplexError::MissingFace {
                                simplex: s.vertices.clone(),
                                face: face.vertices.clone(),
                            })
                        }
                        Some(fb) if fb > birth => {
                            return Err(ComplexError::FiltrationViolation {
                                simplex: s.vertices.clone(),
                                face: face.vertices.clone(),
                            })
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let vertices = by_dim[0]
            .drain(..)
            .map(|(s, b)| (s, b))
            .collect::<Vec<_>>();
        // Vertices participate in the shared sort like everything else.
        let mut all_vertices = vertices;
        all_vertices.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let edges = core::mem::take(&mut by_dim[1]);
        let triangles = core::mem::take(&mut by_dim[2]);
        let mut complex = Self::assemble(FiltrationScale::Raw, None, all_vertices.len(), edges, triangles);
        complex.births[0] = all_vertices.iter().map(|(_, b)| b.clone()).collect();
        complex.recompute_order();
        Ok(complex)
    }

    fn assemble(
        scale: FiltrationScale,
        coords: Option<Vec<Vec<f64>>>,
        num_vertices: usize,
        mut edges: Vec<(Simplex, ExactRational)>,
        mut triangles: Vec<(Simplex, ExactRational)>,
    ) -> Self {
        edges.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        triangles.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let vertices: Vec<Simplex> = (0..num_vertices)
            .map(|v| Simplex { vertices: alloc::vec![v] })
            .collect();
        let vertex_births = alloc::vec![ExactRational::zero(); num_vertices];
        let (edge_simplices, edge_births): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
        let (tri_simplices, tri_births): (Vec<_>, Vec<_>) = triangles.into_iter().unzip();
        let edge_index: BTreeMap<(usize, usize), usize> = edge_simplices
            .iter()
            .enumerate()
            .map(|(i, s)| ((s.vertices[0], s.vertices[1]), i))
            .collect();
        let mut complex = FilteredComplex {
            scale,
            coords,
            num_vertices,
            simplices: [vertices, edge_simplices, tri_simplices],
            births: [vertex_births, edge_births, tri_births],
            order_pos: [Vec::new(), Vec::new(), Vec::new()],
            edge_lengths: Vec::new(),
            edge_index,
        };
        complex.recompute_order();
        complex.edge_lengths = (0..complex.count(1))
            .map(|e| complex.display_value(&complex.births[1][e]))
            .collect();
        complex
    }

    fn recompute_order(&mut self) {
        // Merge the per-dimension lists by (birth, dimension, lex); each
        // list is already sorted by (birth, lex).
        let mut refs: Vec<(usize, usize)> = Vec::new();
        for dim in 0..3 {
            for i in 0..self.simplices[dim].len() {
                refs.push((dim, i));
            }
        }
        refs.sort_by(|&(da, ia), &(db, ib)| {
            self.births[da][ia]
                .cmp(&self.births[db][ib])
                .then(da.cmp(&db))
                .then_with(|| self.simplices[da][ia].cmp(&self.simplices[db][ib]))
        });
        for dim in 0..3 {
            self.order_pos[dim] = alloc::vec![0; self.simplices[dim].len()];
        }
        for (pos, &(dim, i)) in refs.iter().enumerate() {
            self.order_pos[dim][i] = pos;
        }
    }

    pub fn scale(&self) -> FiltrationScale {
        self.scale
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        &self.simplices[dim]
    }

    pub fn simplex(&self, dim: usize, i: usize) -> &Simplex {
        &self.simplices[dim][i]
    }

    pub fn birth(&self, dim: usize, i: usize) -> &ExactRational {
        &self.births[dim][i]
    }

    pub fn births(&self, dim: usize) -> &[ExactRational] {
        &self.births[dim]
    }

    /// Position of a simplex in the global simplex-wise order.
    pub fn order_position(&self, dim: usize, i: usize) -> usize {
        self.order_pos[dim][i]
    }

    /// Index of edge {u, v} in the dimension-1 list, if present.
    pub fn edge_position(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    /// Number of simplices of `dim` with birth ≤ `key` (a prefix, since the
    /// per-dimension lists are sorted by birth first).
    pub fn prefix_len(&self, dim: usize, key: &ExactRational) -> usize {
        self.births[dim].partition_point(|b| b <= key)
    }

    /// Reported (display) value of a filtration key: the key itself, or its
    /// square root under the squared-Euclidean scale.
    pub fn display_value(&self, key: &ExactRational) -> f64 {
        let v = rat_to_f64(key);
        match self.scale {
            FiltrationScale::Raw => v,
            FiltrationScale::SquaredEuclidean => libm::sqrt(v),
        }
    }

    /// Edge length in display scale.
    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_lengths[e]
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    /// Largest birth key among the support of a chain, if nonempty: the
    /// filtration value at which the chain is fully present.
    pub fn chain_birth(&self, chain: &Chain) -> Option<ExactRational> {
        chain
            .entries()
            .iter()
            .map(|&(i, _)| self.births[chain.dimension()][i].clone())
            .max()
    }
}

/// Boundary matrix ∂ₙ of a filtered complex, n ∈ {1, 2}: columns are the
/// dimension-n simplices in their stored (birth, lex) order, rows the
/// dimension-(n−1) simplices; the column of (v₀,…,vₙ) holds (−1)^i at the
/// face omitting vᵢ.
pub fn boundary_matrix(k: &FilteredComplex, n: usize) -> Result<SparseRationalMatrix, ComplexError> {
    if n == 0 || n > 2 {
        return Err(ComplexError::DimensionOutOfRange { dim: n });
    }
    let rows = k.count(n - 1);
    let mut columns: Vec<SparseColumn> = Vec::with_capacity(k.count(n));
    for s in k.simplices(n) {
        let mut col: SparseColumn = Vec::with_capacity(n + 1);
        for (i, face) in s.faces().into_iter().enumerate() {
            let sign = if i % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            let row = match n {
                1 => face.vertices()[0],
                _ => k
                    .edge_position(face.vertices()[0], face.vertices()[1])
                    .expect("faces of stored simplices exist"),
            };
            col.push((row, sign));
        }
        col.sort_by_key(|&(r, _)| r);
        columns.push(col);
    }
    Ok(SparseRationalMatrix::from_columns(rows, columns).expect("construction is well-formed"))
}

/// The three edge positions bounding triangle `t`.
pub fn triangle_edges(k: &FilteredComplex, t: usize) -> [usize; 3] {
    let v = k.simplex(2, t).vertices();
    [
        k.edge_position(v[0], v[1]).expect("face exists"),
        k.edge_position(v[0], v[2]).expect("face exists"),
        k.edge_position(v[1], v[2]).expect("face exists"),
    ]
}

/// Heron area of triangle `t` from its three edge lengths.
///
/// Validity is decided exactly: the rational embeddings of the three
/// binary64 lengths must satisfy the triangle inequality, otherwise the
/// area is undefined for this input. Degenerate (collinear) triangles
/// return 0.
pub fn triangle_area(k: &FilteredComplex, t: usize) -> Result<f64, ComplexError> {
    let [e0, e1, e2] = triangle_edges(k, t);
    let (a, b, c) = (k.edge_length(e0), k.edge_length(e1), k.edge_length(e2));
    let (ra, rb, rc) = (
        rat_from_float(a).expect("lengths are finite"),
        rat_from_float(b).expect("lengths are finite"),
        rat_from_float(c).expect("lengths are finite"),
    );
    let violated = ra > &rb + &rc || rb > &ra + &rc || rc > &ra + &rb;
    if violated {
        return Err(ComplexError::AreaUndefined {
            triangle: k.simplex(2, t).vertices().to_vec(),
        });
    }
    let s = 0.5 * (a + b + c);
    let sq = s * (s - a) * (s - b) * (s - c);
    Ok(libm::sqrt(if sq > 0.0 { sq } else { 0.0 }))
}

/// Heron areas of all triangles; fails on the first invalid one.
pub fn triangle_areas(k: &FilteredComplex) -> Result<Vec<f64>, ComplexError> {
    (0..k.count(2)).map(|t| triangle_area(k, t)).collect()
}

/// Sparse chain: coefficients over the dimension-`dim` simplices of one
/// complex, sorted by simplex index, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    dim: usize,
    entries: SparseColumn,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, entries: Vec::new() }
    }

    /// Normalizing constructor: sorts, merges duplicates, drops zeros.
    pub fn from_entries(dim: usize, mut entries: Vec<(usize, ExactRational)>) -> Self {
        entries.sort_by_key(|&(i, _)| i);
        let mut merged: SparseColumn = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some((last, acc)) if *last == i => *acc = &*acc + &v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        Chain { dim, entries: merged }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, ExactRational)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coeff(&self, i: usize) -> ExactRational {
        match self.entries.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => ExactRational::zero(),
        }
    }

    /// self + factor · other.
    pub fn add_scaled(&self, other: &Chain, factor: &ExactRational) -> Chain {
        assert_eq!(self.dim, other.dim, "chain dimensions differ");
        Chain {
            dim: self.dim,
            entries: crate::rational::merge_scaled(&self.entries, &other.entries, factor),
        }
    }

    pub fn scaled(&self, factor: &ExactRational) -> Chain {
        if factor.is_zero() {
            return Chain::zero(self.dim);
        }
        Chain {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, v * factor)).collect(),
        }
    }
}
