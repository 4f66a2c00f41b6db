//! Pinned pass/fail thresholds and wall-clock budgets for the acceptance
//! run. Everything here is a deliberate constant: loosening one to make a
//! red criterion green defeats the point of the suite.

use std::time::Duration;

/// Golden fixtures are tiny and must stay effectively instant.
pub const BUDGET_GOLDEN: Duration = Duration::from_secs(1);

/// 25 small complexes, every filtration scale cross-checked by rank.
pub const BUDGET_RANK_ORACLE: Duration = Duration::from_secs(30);

/// 10 small complexes, exhaustive sign-chain enumeration per interval.
pub const BUDGET_ENUMERATION: Duration = Duration::from_secs(120);

/// 20 mid-size clouds, full sequential optimization plus basis checks.
pub const BUDGET_LIFESPAN: Duration = Duration::from_secs(120);

/// 20 larger clouds, five program variants, relaxation and MIP each.
pub const BUDGET_LP_MIP: Duration = Duration::from_secs(300);

/// Coefficient statistics reuse the LP/MIP corpus plus five dense
/// 50-point dissimilarity matrices run through the full pipeline.
pub const BUDGET_COEFFICIENTS: Duration = Duration::from_secs(300);

/// Minimum fraction of intervals whose MIP cost equals the LP cost.
/// Source corpora report near-total agreement; 99% leaves room for a
/// stray hard instance without hiding a systematic gap.
pub const LP_MIP_EQUAL_MIN: f64 = 0.99;

/// Minimum fraction of optimized representatives with all coefficients
/// in {-1, 0, 1} on geometric corpora.
pub const PM1_ZERO_MIN: f64 = 0.99;

/// Fraction of enumerated intervals where some feasible sign chain
/// attains the LP optimum. Equality is expected almost always; this
/// guard only rejects a systematically unattainable relaxation.
pub const ENUM_ATTAINMENT_MIN: f64 = 0.9;

/// Window for the mean uniform cost ratio (optimized / original) on
/// geometric corpora. Wide on purpose: the corpus is synthetic and
/// small, so only gross regressions should trip it.
pub const MEAN_RATIO_LO: f64 = 0.75;
pub const MEAN_RATIO_HI: f64 = 1.0;

/// Pivot ceiling for the degenerate cycling program: far above the
/// optimal path, far below anything resembling a cycle.
pub const CYCLING_PIVOT_CAP: u64 = 1000;
