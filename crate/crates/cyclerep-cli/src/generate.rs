//! Deterministic synthetic inputs: point clouds drawn coordinate-wise
//! from one of four distributions, and random symmetric dissimilarity
//! matrices with i.i.d. uniform entries (no triangle inequality).
//!
//! All draws come from a ChaCha12 stream seeded with the user's 64-bit
//! seed, with explicit distribution transforms: Box–Muller for normal
//! (two uniforms per draw, no spare caching), inverse CDF for logistic
//! and exponential, and the Marsaglia–Tsang rejection method for gamma
//! (shape 2, scale 1 by default; the shape is a parameter of the
//! internal sampler).

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Normal,
    Gamma,
    Logistic,
    Exponential,
    ErdosRenyi,
}

impl GeneratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Normal => "normal",
            GeneratorKind::Gamma => "gamma",
            GeneratorKind::Logistic => "logistic",
            GeneratorKind::Exponential => "exponential",
            GeneratorKind::ErdosRenyi => "erdos-renyi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenerateError {
    TooFewPoints { n: usize },
    ZeroDimension,
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::TooFewPoints { n } => write!(f, "need n >= 2, got {n}"),
            GenerateError::ZeroDimension => write!(f, "need dim >= 1"),
        }
    }
}

impl std::error::Error for GenerateError {}

/// Either a point cloud (one row per point) or a full dissimilarity
/// matrix, depending on the generator kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Points(Vec<Vec<f64>>),
    Matrix(Vec<Vec<f64>>),
}

/// Uniform draw from the open interval (0, 1).
fn uniform_open(rng: &mut ChaCha12Rng) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return u;
        }
    }
}

/// Standard normal via Box–Muller; two uniforms per draw.
fn normal(rng: &mut ChaCha12Rng) -> f64 {
    let u1 = uniform_open(rng);
    let u2 = uniform_open(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Standard logistic via the inverse CDF.
fn logistic(rng: &mut ChaCha12Rng) -> f64 {
    let u = uniform_open(rng);
    (u / (1.0 - u)).ln()
}

/// Unit-rate exponential via the inverse CDF.
fn exponential(rng: &mut ChaCha12Rng) -> f64 {
    -uniform_open(rng).ln()
}

/// Marsaglia–Tsang gamma sampler. Shapes below 1 use the boosting
/// identity gamma(α) = gamma(α+1)·U^{1/α}.
fn gamma(rng: &mut ChaCha12Rng, shape: f64, scale: f64) -> f64 {
    if shape < 1.0 {
        let boost = uniform_open(rng).powf(1.0 / shape);
        return gamma(rng, shape + 1.0, scale) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = normal(rng);
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = uniform_open(rng);
        if u < 1.0 - 0.0331 * x * x * x * x {
            return d * v * scale;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v * scale;
        }
    }
}

/// Default gamma shape used by the point-cloud generator; the source
/// experiments never state one.
pub const GAMMA_SHAPE: f64 = 2.0;
pub const GAMMA_SCALE: f64 = 1.0;

fn point_cloud(
    rng: &mut ChaCha12Rng,
    n: usize,
    dim: usize,
    draw: impl Fn(&mut ChaCha12Rng) -> f64,
) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| draw(rng)).collect()).collect()
}

/// Symmetric matrix with zero diagonal and i.i.d. uniform (0,1) entries
/// above the diagonal, mirrored below.
fn erdos_renyi(rng: &mut ChaCha12Rng, n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = uniform_open(rng);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Generate `n` points of dimension `dim` (ignored for erdos-renyi)
/// from the seeded stream. Identical arguments give identical output.
pub fn generate(
    kind: GeneratorKind,
    n: usize,
    dim: usize,
    seed: u64,
) -> Result<Generated, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewPoints { n });
    }
    if dim == 0 && kind != GeneratorKind::ErdosRenyi {
        return Err(GenerateError::ZeroDimension);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(match kind {
        GeneratorKind::Normal => Generated::Points(point_cloud(&mut rng, n, dim, normal)),
        GeneratorKind::Gamma => Generated::Points(point_cloud(&mut rng, n, dim, |r| {
            gamma(r, GAMMA_SHAPE, GAMMA_SCALE)
        })),
        GeneratorKind::Logistic => Generated::Points(point_cloud(&mut rng, n, dim, logistic)),
        GeneratorKind::Exponential => {
            Generated::Points(point_cloud(&mut rng, n, dim, exponential))
        }
        GeneratorKind::ErdosRenyi => Generated::Matrix(erdos_renyi(&mut rng, n)),
    })
}
