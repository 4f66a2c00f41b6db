//! The acceptance run: ten scripted criteria, one printed line each.
//! `cargo test -p cyclerep-cli --test acceptance -- --nocapture` shows
//! the lines as they complete; any failure panics at the end with every
//! collected detail. Thresholds and budgets live in `tolerances`.

mod oracles;
mod tolerances;

use std::panic::AssertUnwindSafe;
use std::time::{Duration, Instant};

use cyclerep_cli::generate::GeneratorKind;
use cyclerep_cli::pipeline::{run_optimize, InputSource, ProgramKind, RunConfig, WeightMode};
use cyclerep_core::complex::FilteredComplex;
use cyclerep_core::edge_opt::{
    build_edge_program, chain_death, optimize_basis_filtered, optimize_basis_persistent,
    EdgeProgramSpec, EdgeWeight,
};
use cyclerep_core::lp::{dump_lp_format, solve_lp, LinearProgram, SolveStatus, Solver};
use cyclerep_core::metrics::{classify_coefficients, CoeffClass, NoClock};
use cyclerep_core::persistence::{analyze, PersistenceAnalysis};
use cyclerep_core::rational::{
    rat, rat_int, rat_to_f64, ExactRational, SparseColumn, SparseRationalMatrix,
};
use cyclerep_core::tri_opt::{
    build_triangle_program, optimize_basis_triangle, SlicingStrategy, TriangleWeight,
    VolumeProgramSpec,
};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use tolerances::*;

struct Ledger {
    failed: usize,
    summary: Vec<String>,
}

impl Ledger {
    fn new() -> Self {
        Ledger { failed: 0, summary: Vec::new() }
    }

    fn record(
        &mut self,
        id: usize,
        label: &str,
        budget: Option<Duration>,
        elapsed: Duration,
        outcome: Result<(String, Vec<String>), String>,
    ) {
        let (detail, mut failures) = match outcome {
            Ok(pair) => pair,
            Err(panic_msg) => (String::new(), vec![panic_msg]),
        };
        if let Some(b) = budget {
            if elapsed > b {
                failures.push(format!(
                    "over budget: {:.2}s > {:.0}s",
                    elapsed.as_secs_f64(),
                    b.as_secs_f64()
                ));
            }
        }
        let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
        let time = match budget {
            Some(b) => {
                format!("{:.2}s / {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64())
            }
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        let line = format!("{verdict} {id:>2}  {label}  [{time}]  {detail}");
        println!("{line}");
        self.summary.push(line);
        for f in failures.iter().take(10) {
            println!("        - {f}");
            self.summary.push(format!("        - {f}"));
        }
        if failures.len() > 10 {
            let more = format!("        - ... and {} more", failures.len() - 10);
            println!("{more}");
            self.summary.push(more);
        }
        if !failures.is_empty() {
            self.failed += 1;
        }
    }

    fn finish(self) {
        println!("acceptance: {}/10 criteria passed", 10 - self.failed);
        assert!(
            self.failed == 0,
            "{} acceptance criteria failed:\n{}",
            self.failed,
            self.summary.join("\n")
        );
    }
}

fn guard<T>(f: impl FnOnce() -> T) -> Result<T, String> {
    std::panic::catch_unwind(AssertUnwindSafe(f)).map_err(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| (*s).to_string()))
            .unwrap_or_else(|| "opaque panic payload".to_string());
        format!("criterion panicked: {msg}")
    })
}

fn check(fails: &mut Vec<String>, ok: bool, msg: impl Into<String>) {
    if !ok {
        fails.push(msg.into());
    }
}

fn death_le(a: &Option<ExactRational>, b: &Option<ExactRational>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn floor_u64(r: &ExactRational) -> u64 {
    r.to_integer().to_u64().expect("costs in this suite are small and nonnegative")
}

// Criterion 1: the pentagon fixture has one interval whose uniform edge
// optimum is a 4-edge cycle of cost exactly 4 and whose uniform volume
// optimum costs exactly 3 with a 5-edge boundary.
fn golden_pentagon() -> (String, Vec<String>) {
    let mut fails = Vec::new();
    let k = corpus::pentagon_with_filled_corner();
    let a = analyze(&k).unwrap();
    let solver = Solver::default();
    check(&mut fails, a.barcode.len() == 1, "expected exactly one interval");

    let edge = optimize_basis_persistent(
        &a.basis,
        &k,
        &a.dec2,
        EdgeWeight::Uniform,
        false,
        &solver,
        &NoClock,
        true,
    )
    .unwrap();
    check(
        &mut fails,
        edge.records[0].cost_after == rat_int(4),
        format!("edge cost {} instead of 4", edge.records[0].cost_after),
    );
    check(
        &mut fails,
        edge.basis[0].chain.support_size() == 4,
        format!("edge optimum spans {} edges instead of 4", edge.basis[0].chain.support_size()),
    );

    let tri = optimize_basis_triangle(
        &a.basis,
        &k,
        &a.dec2,
        TriangleWeight::Uniform,
        false,
        SlicingStrategy::BuildPart,
        &solver,
        &NoClock,
    )
    .unwrap();
    check(
        &mut fails,
        tri.result.records[0].cost_after == rat_int(3),
        format!("volume cost {} instead of 3", tri.result.records[0].cost_after),
    );
    check(
        &mut fails,
        tri.result.basis[0].chain.support_size() == 5,
        format!(
            "volume boundary spans {} edges instead of 5",
            tri.result.basis[0].chain.support_size()
        ),
    );
    check(
        &mut fails,
        tri.volumes[0].as_ref().map(Vec::len) == Some(3),
        "optimal volume should spend exactly three triangles",
    );
    ("edge optimum 4/4 edges, volume optimum 3 over a 5-edge boundary".to_string(), fails)
}

// Criterion 2: the chained-triangles fixture has barcode
// {[1,2), [2,inf), [3,inf)} exactly, and sequential optimization replaces
// the third cycle by the 3-edge cycle homologous to (third + second).
fn golden_chained() -> (String, Vec<String>) {
    let mut fails = Vec::new();
    let k = corpus::chained_triangles();
    let a = analyze(&k).unwrap();
    let expected = [
        (rat_int(1), Some(rat_int(2))),
        (rat_int(2), None),
        (rat_int(3), None),
    ];
    check(&mut fails, a.barcode.len() == 3, format!("{} bars instead of 3", a.barcode.len()));
    for (bar, (birth, death)) in a.barcode.iter().zip(&expected) {
        check(
            &mut fails,
            bar.birth_value == *birth && bar.death_value == *death,
            format!("bar [{}, {:?}) != [{birth}, {death:?})", bar.birth_value, bar.death_value),
        );
    }
    let out = optimize_basis_persistent(
        &a.basis,
        &k,
        &a.dec2,
        EdgeWeight::Uniform,
        false,
        &Solver::default(),
        &NoClock,
        true,
    )
    .unwrap();
    check(
        &mut fails,
        out.basis[2].chain.entries() == [(5, rat_int(1)), (6, rat_int(-1)), (7, rat_int(1))],
        "third cycle should become the closing 3-edge loop",
    );
    for (rep, orig) in out.basis.iter().zip(&a.basis) {
        check(
            &mut fails,
            rep.birth == orig.birth && rep.death == orig.death,
            "lifespan changed during replacement",
        );
    }
    // Homology witness: the replacement minus (third + second originals)
    // must be a combination of triangle boundaries present at its birth.
    let tri_cut = k.prefix_len(2, &out.basis[2].birth);
    let dirs: Vec<SparseColumn> = (0..tri_cut).map(|t| a.d2.column(t).to_vec()).collect();
    let span = oracles::Span::new(&dirs);
    let sum = a.basis[2].chain.add_scaled(&a.basis[1].chain, &rat_int(1));
    let delta = out.basis[2].chain.add_scaled(&sum, &rat_int(-1));
    check(
        &mut fails,
        span.contains(&delta.entries().to_vec()),
        "replacement is not homologous to the sum of the original two cycles",
    );
    ("barcode exact; third cycle replaced by a 3-edge homologous loop".to_string(), fails)
}

// Criterion 3: on 25 small random complexes, the bar count through every
// filtration scale equals the rank-based cycle count.
fn rank_oracle() -> (String, Vec<String>, Vec<FilteredComplex>) {
    let kinds = [
        GeneratorKind::Normal,
        GeneratorKind::Gamma,
        GeneratorKind::Logistic,
        GeneratorKind::Exponential,
    ];
    let mut complexes = Vec::new();
    for i in 0..25u64 {
        let k = if i % 5 == 4 {
            let rows = corpus::dense_matrix(10, 300 + i);
            corpus::matrix_complex(&rows, corpus::offdiag_quantile(&rows, 0.5))
        } else {
            let n = 6 + (i as usize % 5);
            let dim = 2 + (i as usize % 2);
            let pts = corpus::snapped_cloud(kinds[i as usize % 4], n, dim, 300 + i);
            let eps =
                if n <= 8 { None } else { Some(corpus::distance_quantile(&pts, 0.7)) };
            corpus::cloud_complex(&pts, eps)
        };
        complexes.push(k);
    }
    let mut fails = Vec::new();
    let mut checked = 0usize;
    for (ci, k) in complexes.iter().enumerate() {
        let a = analyze(k).unwrap();
        for eps in oracles::all_birth_scales(k) {
            let alive = a
                .barcode
                .iter()
                .filter(|b| {
                    b.birth_value <= eps && b.death_value.as_ref().is_none_or(|d| d > &eps)
                })
                .count();
            let expected = oracles::betti1_at(k, &a.d1, &a.d2, &eps);
            check(
                &mut fails,
                alive == expected,
                format!("complex {ci} scale {eps}: {alive} bars vs rank count {expected}"),
            );
            checked += 1;
        }
    }
    (format!("25 complexes, {checked} scales cross-checked"), fails, complexes)
}

struct DictCheck {
    programs: usize,
    fails: Vec<String>,
}

// Criterion 4: on 10 complexes with at most 12 admissible edges, no chain
// with coefficients in {-1,0,1} reachable along the admissible directions
// beats the LP optimum, and the optimum is attained by such a chain for
// nearly every interval. Also compares the full and reduced bounding-chain
// dictionaries for criterion 8.
fn enumeration_oracle() -> (String, Vec<String>, DictCheck) {
    let mut fails = Vec::new();
    let mut dict = DictCheck { programs: 0, fails: Vec::new() };
    let solver = Solver::default();
    let (mut attained, mut beyond, mut total) = (0usize, 0usize, 0usize);
    for i in 0..10u64 {
        // Random dissimilarities ignore the triangle inequality, so the
        // 12 cheapest edges form genuine 4- and 5-cycles that the sparse
        // triangle supply fills late or never. Geometric clouds at this
        // size would collapse into instantly filled nearest-neighbor
        // cliques instead.
        let n = 8 + (i as usize % 2);
        let rows = corpus::dense_matrix(n, 400 + i);
        let pairs = (n * (n - 1) / 2) as f64;
        let cutoff = corpus::offdiag_quantile(&rows, 11.0 / (pairs - 1.0));
        let k = corpus::matrix_complex(&rows, cutoff);
        assert!(k.count(1) <= 12, "corpus construction keeps at most 12 edges");
        let a = analyze(&k).unwrap();
        // replace = false: every program reads the untouched initial
        // basis, which the oracle below reconstructs from first
        // principles.
        let out = optimize_basis_persistent(
            &a.basis,
            &k,
            &a.dec2,
            EdgeWeight::Uniform,
            false,
            &solver,
            &NoClock,
            false,
        )
        .unwrap();
        for (j, rec) in out.records.iter().enumerate() {
            let target = &a.basis[j];
            let rows = k.prefix_len(1, &target.birth);
            let tri_cut = k.prefix_len(2, &target.birth);
            let mut dirs: Vec<SparseColumn> =
                (0..tri_cut).map(|t| a.d2.column(t).to_vec()).collect();
            for (i2, other) in a.basis.iter().enumerate() {
                if i2 != j && other.birth <= target.birth && death_le(&other.death, &target.death)
                {
                    dirs.push(other.chain.entries().to_vec());
                }
            }
            let lp_cost = &rec.cost_after;
            let bound = floor_u64(lp_cost);
            total += 1;
            match oracles::cheapest_sign_chain(target.chain.entries(), &dirs, rows, bound) {
                Some(c) if rat_int(c as i64) == *lp_cost => attained += 1,
                Some(c) => check(
                    &mut fails,
                    false,
                    format!("complex {i} interval {j}: sign chain of cost {c} beats LP {lp_cost}"),
                ),
                None => beyond += 1,
            }
            for reduced in [false, true] {
                let spec = EdgeProgramSpec::new(
                    j,
                    &a.basis,
                    &k,
                    &a.dec2,
                    EdgeWeight::Uniform,
                    false,
                    reduced,
                )
                .unwrap();
                let sol = solver.lp(&build_edge_program(&spec, &k)).unwrap();
                check(
                    &mut dict.fails,
                    sol.cost == *lp_cost,
                    format!(
                        "complex {i} interval {j}: dictionary (reduced={reduced}) cost {} vs {}",
                        sol.cost, lp_cost
                    ),
                );
            }
            dict.programs += 1;
        }
    }
    check(&mut fails, total > 0, "enumeration corpus produced no intervals");
    if total > 0 {
        let frac = attained as f64 / total as f64;
        check(
            &mut fails,
            frac >= ENUM_ATTAINMENT_MIN,
            format!("only {attained}/{total} intervals attained by sign chains"),
        );
    }
    (
        format!("{attained}/{total} LP optima attained by sign chains ({beyond} beyond bound)"),
        fails,
        dict,
    )
}

// Criterion 5: on 20 mid-size clouds, sequential optimization preserves
// every lifespan exactly and its outputs pass the rank-based basis check
// at every barcode endpoint.
fn lifespan_preservation() -> (String, Vec<String>, Vec<ExactRational>, Vec<String>) {
    let mut fails = Vec::new();
    let mut ratios = Vec::new();
    let mut violations = Vec::new();
    let solver = Solver::default();
    let mut intervals = 0usize;
    for i in 0..20u64 {
        let kind = if i % 4 == 3 { GeneratorKind::Gamma } else { GeneratorKind::Normal };
        let dim = 2 + (i as usize % 2);
        let pts = corpus::snapped_cloud(kind, 20, dim, 500 + i);
        let eps = corpus::distance_quantile(&pts, 0.45);
        let k = corpus::cloud_complex(&pts, Some(eps));
        let a = analyze(&k).unwrap();
        let out = optimize_basis_persistent(
            &a.basis,
            &k,
            &a.dec2,
            EdgeWeight::Uniform,
            false,
            &solver,
            &NoClock,
            true,
        )
        .unwrap();
        intervals += out.basis.len();
        for (j, (rep, orig)) in out.basis.iter().zip(&a.basis).enumerate() {
            check(
                &mut fails,
                rep.birth == orig.birth && rep.death == orig.death,
                format!("cloud {i} interval {j}: lifespan changed"),
            );
            check(
                &mut fails,
                k.chain_birth(&rep.chain) == Some(rep.birth.clone()),
                format!("cloud {i} interval {j}: recomputed birth differs"),
            );
            check(
                &mut fails,
                chain_death(&rep.chain, &k) == rep.death,
                format!("cloud {i} interval {j}: recomputed death differs"),
            );
        }
        for rec in &out.records {
            if rec.cost_after > rec.cost_before {
                violations.push(format!(
                    "cloud {i} interval {}: cost rose {} -> {}",
                    rec.interval_index, rec.cost_before, rec.cost_after
                ));
            }
            ratios.push(rec.cost_ratio());
        }
        let scales = oracles::barcode_endpoint_scales(&a.barcode);
        if let Err(e) = oracles::basis_at_scales(&k, &out.basis, &scales, &format!("cloud {i}")) {
            fails.push(e);
        }
    }
    (format!("20 clouds, {intervals} intervals, lifespans exact"), fails, ratios, violations)
}

#[derive(Default)]
struct CorpusStats {
    agree_true: usize,
    agree_total: usize,
    disagreements: Vec<String>,
    classes: Vec<CoeffClass>,
    uniform_ratios: Vec<ExactRational>,
    ratio_violations: Vec<String>,
}

fn note_agreement(
    stats: &mut CorpusStats,
    agree: Option<bool>,
    context: impl Fn() -> String,
    dump: Option<String>,
) {
    stats.agree_total += 1;
    match agree {
        Some(true) => stats.agree_true += 1,
        Some(false) => {
            let ctx = context();
            stats.disagreements.push(ctx.clone());
            eprintln!("LP/MIP disagreement at {ctx}");
            if let Some(text) = dump {
                eprintln!("{text}");
            }
        }
        None => unreachable!("integral runs always record agreement"),
    }
}

// Criterion 6: across 20 larger geometric clouds and five program
// variants, the MIP cost equals the LP cost for at least 99% of
// intervals; every disagreement is logged, with the full program dump
// where the program can be rebuilt from public pieces.
fn lp_mip_agreement() -> (String, Vec<String>, CorpusStats) {
    let mut stats = CorpusStats::default();
    let solver = Solver::default();
    for i in 0..20u64 {
        let kind = if i % 5 == 4 { GeneratorKind::Exponential } else { GeneratorKind::Normal };
        let dim = 2 + (i as usize % 2);
        let pts = corpus::snapped_cloud(kind, 30, dim, 600 + i);
        let eps = corpus::distance_quantile(&pts, 0.25);
        let k = corpus::cloud_complex(&pts, Some(eps));
        let a = analyze(&k).unwrap();
        for weight in [EdgeWeight::Uniform, EdgeWeight::Length] {
            let out = optimize_basis_persistent(
                &a.basis, &k, &a.dec2, weight, true, &solver, &NoClock, true,
            )
            .unwrap();
            for (j, rec) in out.records.iter().enumerate() {
                let dump = (rec.lp_vs_mip_cost_equal == Some(false)).then(|| {
                    let mut state = a.basis.clone();
                    state[..j].clone_from_slice(&out.basis[..j]);
                    let spec = EdgeProgramSpec::new(
                        j, &state, &k, &a.dec2, weight, true, true,
                    )
                    .unwrap();
                    dump_lp_format(&build_edge_program(&spec, &k))
                });
                note_agreement(
                    &mut stats,
                    rec.lp_vs_mip_cost_equal,
                    || format!("cloud {i} edge-persistent {weight:?} interval {j}"),
                    dump,
                );
                if rec.cost_after > rec.cost_before {
                    stats.ratio_violations.push(format!(
                        "cloud {i} persistent {weight:?} interval {j}: cost rose"
                    ));
                }
                if weight == EdgeWeight::Uniform {
                    stats.uniform_ratios.push(rec.cost_ratio());
                }
            }
            stats.classes.extend(out.basis.iter().map(|r| classify_coefficients(&r.chain)));
        }
        for weight in [EdgeWeight::Uniform, EdgeWeight::Length] {
            let out = optimize_basis_filtered(
                &a.basis, &k, &a.dec1, &a.dec2, weight, true, &solver, &NoClock,
            )
            .unwrap();
            for rec in &out.records {
                note_agreement(
                    &mut stats,
                    rec.lp_vs_mip_cost_equal,
                    || {
                        format!(
                            "cloud {i} edge-filtered {weight:?} interval {} \
                             (lp/mip costs differ; program indexed by its birth prefix)",
                            rec.interval_index
                        )
                    },
                    None,
                );
                if rec.cost_after > rec.cost_before {
                    stats
                        .ratio_violations
                        .push(format!("cloud {i} filtered {weight:?}: cost rose"));
                }
            }
            stats.classes.extend(out.basis.iter().map(|r| classify_coefficients(&r.chain)));
        }
        let out = optimize_basis_triangle(
            &a.basis,
            &k,
            &a.dec2,
            TriangleWeight::Uniform,
            true,
            SlicingStrategy::BuildPart,
            &solver,
            &NoClock,
        )
        .unwrap()
        .result;
        for rec in &out.records {
            let j = rec.interval_index;
            let dump = (rec.lp_vs_mip_cost_equal == Some(false)).then(|| {
                let pair = out.basis[j]
                    .source_pair
                    .clone()
                    .expect("finite intervals carry their pair");
                let spec = VolumeProgramSpec::new(
                    pair,
                    &k,
                    TriangleWeight::Uniform,
                    true,
                    SlicingStrategy::BuildPart,
                )
                .unwrap();
                dump_lp_format(&build_triangle_program(&spec, &k, None).unwrap())
            });
            note_agreement(
                &mut stats,
                rec.lp_vs_mip_cost_equal,
                || format!("cloud {i} triangle uniform interval {j}"),
                dump,
            );
            stats.classes.push(classify_coefficients(&out.basis[j].chain));
        }
    }
    let mut fails = Vec::new();
    let frac = stats.agree_true as f64 / stats.agree_total.max(1) as f64;
    check(
        &mut fails,
        frac >= LP_MIP_EQUAL_MIN,
        format!(
            "MIP equals LP on {}/{} intervals ({:.2}%), below {:.0}%",
            stats.agree_true,
            stats.agree_total,
            100.0 * frac,
            100.0 * LP_MIP_EQUAL_MIN
        ),
    );
    fails.extend(stats.disagreements.iter().cloned());
    let detail = format!(
        "MIP = LP on {}/{} interval solves across five variants",
        stats.agree_true, stats.agree_total
    );
    (detail, fails, stats)
}

// Criterion 7: the geometric corpus is overwhelmingly pm1-zero, and the
// pipeline completes on five dense 50-point dissimilarity matrices while
// recording coefficient-class fractions without asserting them.
fn coefficient_statistics(classes: &[CoeffClass]) -> (String, Vec<String>) {
    let mut fails = Vec::new();
    check(&mut fails, !classes.is_empty(), "no geometric corpus classes collected");
    let pm1 = classes.iter().filter(|c| **c == CoeffClass::Pm1Zero).count();
    let frac = pm1 as f64 / classes.len().max(1) as f64;
    check(
        &mut fails,
        frac >= PM1_ZERO_MIN,
        format!("pm1-zero fraction {:.4} below {:.2}", frac, PM1_ZERO_MIN),
    );
    let mut dense_notes = Vec::new();
    for s in 0..5u64 {
        let seed = 700 + s;
        let rows = corpus::dense_matrix(50, seed);
        let threshold = corpus::offdiag_quantile(&rows, 0.06);
        let config = RunConfig {
            source: InputSource::Generated { kind: GeneratorKind::ErdosRenyi, n: 50, dim: 1 },
            max_eps: Some(threshold),
            program: ProgramKind::EdgePersistent,
            weight: WeightMode::Uniform,
            integral: false,
            strategy: SlicingStrategy::BuildPart,
            seed,
            dedupe: false,
            replace: true,
        };
        let (report, err) = run_optimize(&config);
        check(
            &mut fails,
            err.is_none() && report.status == "ok",
            format!("dense matrix seed {seed} failed: {:?}", report.error),
        );
        match &report.summary {
            Some(summary) if summary.count > 0 => {
                check(
                    &mut fails,
                    summary.pm1_zero_fraction.is_some() && summary.integral_fraction.is_some(),
                    format!("dense matrix seed {seed}: fractions not recorded"),
                );
                dense_notes.push(format!(
                    "seed {seed}: {} cycles, pm1 {:.3}, integral {:.3}",
                    summary.count,
                    summary.pm1_zero_fraction.unwrap_or(f64::NAN),
                    summary.integral_fraction.unwrap_or(f64::NAN),
                ));
            }
            _ => check(&mut fails, false, format!("dense matrix seed {seed}: no cycles")),
        }
    }
    eprintln!("dense-matrix completions: {}", dense_notes.join("; "));
    (
        format!(
            "geometric pm1-zero {:.4} over {} chains; 5 dense matrices completed",
            frac,
            classes.len()
        ),
        fails,
    )
}

// Criterion 8: the three slicing strategies give equal optimal costs on
// every interval of the small-complex corpus, and the full and reduced
// dictionaries agreed on every enumeration-corpus program.
fn neutrality(complexes: &[FilteredComplex], dict: &DictCheck) -> (String, Vec<String>) {
    let mut fails = dict.fails.clone();
    let solver = Solver::default();
    let mut intervals = 0usize;
    for (ci, k) in complexes.iter().enumerate() {
        let a = analyze(k).unwrap();
        let runs: Vec<Vec<ExactRational>> =
            [SlicingStrategy::ZeroOut, SlicingStrategy::BuildAll, SlicingStrategy::BuildPart]
                .into_iter()
                .map(|s| {
                    optimize_basis_triangle(
                        &a.basis,
                        k,
                        &a.dec2,
                        TriangleWeight::Uniform,
                        false,
                        s,
                        &solver,
                        &NoClock,
                    )
                    .unwrap()
                    .result
                    .records
                    .iter()
                    .map(|r| r.cost_after.clone())
                    .collect()
                })
                .collect();
        check(
            &mut fails,
            runs[0] == runs[1] && runs[1] == runs[2],
            format!("complex {ci}: slicing strategies disagree on optimal costs"),
        );
        intervals += runs[0].len();
    }
    (
        format!(
            "strategy costs equal on {intervals} intervals; dictionaries equal on {} programs",
            dict.programs
        ),
        fails,
    )
}

// Criterion 9: optimized cost never exceeds the original cost (exactly),
// and the mean uniform ratio over the geometric corpora sits in a wide
// sanity window.
fn cost_ratios(ratios: &[ExactRational], violations: &[String]) -> (String, Vec<String>) {
    let mut fails = violations.to_vec();
    let one = rat_int(1);
    for r in ratios {
        check(&mut fails, *r <= one, format!("ratio {r} exceeds 1"));
    }
    check(&mut fails, !ratios.is_empty(), "no ratios collected");
    let mean = ratios.iter().map(rat_to_f64).sum::<f64>() / ratios.len().max(1) as f64;
    check(
        &mut fails,
        (MEAN_RATIO_LO..=MEAN_RATIO_HI).contains(&mean),
        format!("mean uniform ratio {mean:.4} outside [{MEAN_RATIO_LO}, {MEAN_RATIO_HI}]"),
    );
    (format!("{} ratios, every one <= 1 exactly, mean {:.4}", ratios.len(), mean), fails)
}

// Criterion 10: the solver terminates on a classic degenerate cycling
// program, matches a basic-solution enumeration oracle on 50 random
// small programs, and returns exactly feasible solutions throughout.
fn solver_suite() -> (String, Vec<String>) {
    let mut fails = Vec::new();
    // Degenerate cycling program (negative objective entries, so built
    // directly rather than through the nonneg-cost constructor).
    let cycling = LinearProgram {
        objective: vec![
            rat(-3, 4),
            rat_int(150),
            rat(-1, 50),
            rat_int(6),
            rat_int(0),
            rat_int(0),
            rat_int(0),
        ],
        constraints: SparseRationalMatrix::from_rows(&[
            vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9), rat_int(1), rat_int(0), rat_int(0)],
            vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3), rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(1)],
        ]),
        rhs: vec![rat_int(0), rat_int(0), rat_int(1)],
        integrality: vec![false; 7],
    };
    let s = solve_lp(&cycling).unwrap();
    check(&mut fails, s.status == SolveStatus::Optimal, "cycling program not optimal");
    check(&mut fails, s.cost == rat(-1, 20), format!("cycling cost {} != -1/20", s.cost));
    check(
        &mut fails,
        s.pivots <= CYCLING_PIVOT_CAP,
        format!("cycling took {} pivots", s.pivots),
    );
    check(
        &mut fails,
        oracles::residual(&cycling, &s.x).iter().all(Zero::is_zero),
        "cycling solution residual nonzero",
    );
    let cycling_pivots = s.pivots;

    let mut rng = ChaCha12Rng::seed_from_u64(1010);
    let mut done = 0usize;
    while done < 50 {
        let n = rng.gen_range(3..=6usize);
        let m = rng.gen_range(1..=3.min(n - 1));
        let a_rows: Vec<Vec<i64>> =
            (0..m).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        if SparseRationalMatrix::from_i64_rows(&a_rows).rank() < m {
            continue;
        }
        let x0: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let b: Vec<i64> =
            a_rows.iter().map(|row| row.iter().zip(&x0).map(|(a, x)| a * x).sum()).collect();
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
        let p = LinearProgram::new(
            c.iter().map(|&v| rat_int(v)).collect(),
            SparseRationalMatrix::from_i64_rows(&a_rows),
            b.iter().map(|&v| rat_int(v)).collect(),
            vec![false; n],
        )
        .unwrap();
        let s = solve_lp(&p).unwrap();
        check(
            &mut fails,
            s.status == SolveStatus::Optimal,
            format!("random program {done}: status {:?}", s.status),
        );
        if s.status == SolveStatus::Optimal {
            let oracle = oracles::vertex_enumeration_optimum(&p);
            check(
                &mut fails,
                oracle.as_ref() == Some(&s.cost),
                format!("random program {done}: cost {} vs oracle {:?}", s.cost, oracle),
            );
            check(
                &mut fails,
                oracles::residual(&p, &s.x).iter().all(Zero::is_zero),
                format!("random program {done}: nonzero residual"),
            );
        }
        done += 1;
    }
    (
        format!(
            "cycling terminated in {cycling_pivots} pivots; 50 programs matched the vertex \
             oracle with zero residuals"
        ),
        fails,
    )
}

fn run<T>(
    led: &mut Ledger,
    id: usize,
    label: &str,
    budget: Option<Duration>,
    f: impl FnOnce() -> (String, Vec<String>, T),
) -> Option<T> {
    let t0 = Instant::now();
    let outcome = guard(f);
    let elapsed = t0.elapsed();
    match outcome {
        Ok((detail, fails, extra)) => {
            led.record(id, label, budget, elapsed, Ok((detail, fails)));
            Some(extra)
        }
        Err(msg) => {
            led.record(id, label, budget, elapsed, Err(msg));
            None
        }
    }
}

fn plain(f: impl FnOnce() -> (String, Vec<String>)) -> impl FnOnce() -> (String, Vec<String>, ()) {
    move || {
        let (d, fails) = f();
        (d, fails, ())
    }
}

#[test]
fn acceptance() {
    let mut led = Ledger::new();

    run(&mut led, 1, "pentagon goldens: 4-edge cycle, 3-triangle volume",
        Some(BUDGET_GOLDEN), plain(golden_pentagon));
    run(&mut led, 2, "chained-triangle goldens: barcode and 3-edge replacement",
        Some(BUDGET_GOLDEN), plain(golden_chained));

    let c3_complexes = run(
        &mut led,
        3,
        "bar counts equal rank-based cycle counts at every scale",
        Some(BUDGET_RANK_ORACLE),
        rank_oracle,
    );

    let dict = run(
        &mut led,
        4,
        "sign-chain enumeration never beats the LP optimum",
        Some(BUDGET_ENUMERATION),
        enumeration_oracle,
    );

    let c5_data = run(
        &mut led,
        5,
        "lifespans preserved; outputs stay bases at every endpoint",
        Some(BUDGET_LIFESPAN),
        || {
            let (d, f, ratios, violations) = lifespan_preservation();
            (d, f, (ratios, violations))
        },
    );

    let stats = run(
        &mut led,
        6,
        "MIP cost equals LP cost across the variant corpus",
        Some(BUDGET_LP_MIP),
        lp_mip_agreement,
    );

    let classes: Vec<CoeffClass> =
        stats.as_ref().map(|s| s.classes.clone()).unwrap_or_default();
    run(&mut led, 7, "coefficient classes: pm1 dominance, dense-matrix completions",
        Some(BUDGET_COEFFICIENTS), plain(|| coefficient_statistics(&classes)));

    match (&c3_complexes, &dict) {
        (Some(complexes), Some(dict)) => {
            run(&mut led, 8, "slicing strategies and dictionary choice are cost-neutral",
                None, plain(|| neutrality(complexes, dict)));
        }
        _ => led.record(
            8,
            "slicing strategies and dictionary choice are cost-neutral",
            None,
            Duration::ZERO,
            Err("corpus unavailable because an earlier criterion panicked".to_string()),
        ),
    }

    let (mut ratios, mut violations) = c5_data.unwrap_or_default();
    if let Some(s) = &stats {
        ratios.extend(s.uniform_ratios.iter().cloned());
        violations.extend(s.ratio_violations.iter().cloned());
    }
    run(&mut led, 9, "optimized cost never exceeds original; mean ratio in window",
        None, plain(|| cost_ratios(&ratios, &violations)));

    run(&mut led, 10, "solver: cycling guard, vertex oracle, exact residuals",
        None, plain(solver_suite));

    led.finish();
}

// Silence an unused-import lint when every criterion passes: the analysis
// type appears in signatures only through inference.
#[allow(dead_code)]
fn _type_anchor(a: PersistenceAnalysis) -> PersistenceAnalysis {
    a
}
