//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL
//! line per criterion and exits non-zero if any failed.
//!
//! Benchmark instances are read from `$DLAS_INSTANCE_DIR`, or from
//! `data/instances` at the workspace root. File names are matched
//! case-insensitively (`pr1002.tsp`, `u1817.tsp`, `tai80a.dat`,
//! `lipa80b.dat`, `esc128.dat`). A criterion whose instance is missing fails.
//!
//! Pass criterion numbers as arguments to run a subset:
//! `cargo test -p dlas-experiments --test acceptance -- 1 2 7`.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dlas_core::fitness::scan_max;
use dlas_core::harness::export::summary_path;
use dlas_core::harness::stats::{mean, welch_t_test};
use dlas_core::harness::{
    export_results, run_experiment, ExperimentSpec, Instance, OutputFormat, ProblemKind,
};
use dlas_core::rng::{derive_seed, rng_from_seed};
use dlas_core::strategy::dlas_replace_decision;
use dlas_core::{
    run_search, run_search_observed, Assignment, EdgeWeightKind, Fitness, IterationView, Problem,
    QapInstance, SearchOptions, StrategyConfig, StrategyState, Termination, Tour, TspInstance,
};
use dlas_experiments::{random_qap, random_tsp};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

const BASE_SEED: u64 = 0;

fn instance_dir() -> PathBuf {
    std::env::var_os("DLAS_INSTANCE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            let workspace = Path::new(env!("CARGO_MANIFEST_DIR"))
                .ancestors()
                .nth(2)
                .unwrap();
            workspace.join("data").join("instances")
        })
}

fn find_instance(file: &str) -> Result<PathBuf, String> {
    let dir = instance_dir();
    let missing = || format!("missing instance {file} in {}", dir.display());
    let entries = fs::read_dir(&dir).map_err(|_| missing())?;
    entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .find(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.eq_ignore_ascii_case(file))
        })
        .ok_or_else(missing)
}

fn load_tsp(file: &str) -> Result<TspInstance, String> {
    match Instance::load(&find_instance(file)?, ProblemKind::Tsp).map_err(|e| e.to_string())? {
        Instance::Tsp(t) => Ok(t),
        Instance::Qap(_) => unreachable!(),
    }
}

fn load_qap(file: &str) -> Result<QapInstance, String> {
    match Instance::load(&find_instance(file)?, ProblemKind::Qap).map_err(|e| e.to_string())? {
        Instance::Qap(q) => Ok(q),
        Instance::Tsp(_) => unreachable!(),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || {
        format!("{what} took {took:.2?}, limit {limit:?}")
    })
}

// 1 -------------------------------------------------------------------------

fn truth_table() -> Outcome {
    let start = Instant::now();
    let vals = [3i64, 5, 7];
    let mut orderings = std::collections::BTreeSet::new();
    let mut cases = std::collections::BTreeSet::new();
    for &f in &vals {
        for &prev in &vals {
            for &slot in &vals {
                let expected = f > slot || (f < slot && f < prev);
                let got = dlas_replace_decision(f, prev, slot);
                ensure(got == expected, || {
                    format!("F={f} F-={prev} slot={slot}: got {got}")
                })?;
                orderings.insert((f.cmp(&prev), f.cmp(&slot), prev.cmp(&slot)));
                cases.insert((f.cmp(&slot), f.cmp(&prev)));
            }
        }
    }
    ensure(orderings.len() == 13, || {
        format!("{} orderings seen", orderings.len())
    })?;
    ensure(cases.len() == 9, || {
        format!("{} (F vs slot, F vs F-) cases seen", cases.len())
    })?;
    within(start, Duration::from_secs(1), "enumeration")?;
    Ok(format!("13 orderings match, {:.1?}", start.elapsed()))
}

// 2 -------------------------------------------------------------------------

fn dlas_max_exact<P: Problem>(problem: &P, l: usize, seed: u64) -> Result<(), String> {
    let mut error = None;
    run_search_observed(
        problem,
        &StrategyConfig::dlas(l).unwrap(),
        &Termination::iterations(100_000),
        seed,
        &SearchOptions::default(),
        &mut |v: &IterationView<'_, P::Solution>| {
            if error.is_some() {
                return;
            }
            let StrategyState::Dlas(array) = v.strategy else {
                error = Some("not a DLAS state".to_string());
                return;
            };
            let (max, count) = scan_max(array.values());
            if array.max_value() != max || array.max_count() < 1 || array.max_count() > count {
                error = Some(format!(
                    "L={l} iteration {}: cached ({}, {}) vs scanned ({max}, {count})",
                    v.iteration,
                    array.max_value(),
                    array.max_count()
                ));
            }
        },
    )
    .map_err(|e| e.to_string())?;
    error.map_or(Ok(()), Err)
}

fn max_exactness() -> Outcome {
    let start = Instant::now();
    let tsp = random_tsp(20, 2020);
    let qap = random_qap(12, 1212);
    for (i, l) in [1usize, 2, 5, 50].into_iter().enumerate() {
        dlas_max_exact(&tsp, l, derive_seed(BASE_SEED, i as u64))?;
        dlas_max_exact(&qap, l, derive_seed(BASE_SEED, i as u64))?;
    }
    within(start, Duration::from_secs(30), "8 runs")?;
    Ok(format!(
        "8 runs x 1e5 iterations exact, {:.1?}",
        start.elapsed()
    ))
}

// 3 -------------------------------------------------------------------------

fn naive_tour_length(inst: &TspInstance, order: &[usize]) -> Fitness {
    let c = inst.coords();
    (0..order.len())
        .map(|k| {
            let (x1, y1) = c[order[k]];
            let (x2, y2) = c[order[(k + 1) % order.len()]];
            let d = ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt();
            match inst.edge_weight {
                EdgeWeightKind::Euc2d => (d + 0.5).floor() as Fitness,
                EdgeWeightKind::Ceil2d => d.ceil() as Fitness,
            }
        })
        .sum()
}

fn naive_qap_cost(inst: &QapInstance, p: &[usize]) -> Fitness {
    let n = inst.size();
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            total += inst.a().get(i, j) * inst.b().get(p[i], p[j]);
        }
    }
    total
}

fn delta_oracle() -> Outcome {
    let pr = load_tsp("pr1002.tsp");
    let tai = load_qap("tai80a.dat");
    let (pr, tai) = match (pr, tai) {
        (Ok(p), Ok(t)) => (p, t),
        (p, t) => {
            let msgs: Vec<String> = [p.err(), t.err()].into_iter().flatten().collect();
            return Err(msgs.join("; "));
        }
    };
    let start = Instant::now();
    let mut rng = rng_from_seed(derive_seed(BASE_SEED, 0));
    let mut tour = pr.initial_solution(&mut rng);
    for k in 0..10_000 {
        let before = naive_tour_length(&pr, tour.order());
        let mv = pr.propose_move(&tour, &mut rng);
        let delta = pr.move_delta(&tour, mv);
        pr.apply_move(&mut tour, mv);
        let after = naive_tour_length(&pr, tour.order());
        ensure(before + delta == after, || {
            format!("Pr1002 move {k} {mv:?}: {before} + {delta} != {after}")
        })?;
    }
    let mut perm = tai.initial_solution(&mut rng);
    for k in 0..10_000 {
        let before = naive_qap_cost(&tai, perm.perm());
        let mv = tai.propose_move(&perm, &mut rng);
        let delta = tai.move_delta(&perm, mv);
        tai.apply_move(&mut perm, mv);
        let after = naive_qap_cost(&tai, perm.perm());
        ensure(before + delta == after, || {
            format!("Tai80a swap {k} {mv:?}: {before} + {delta} != {after}")
        })?;
    }
    within(start, Duration::from_secs(30), "2 x 1e4 moves")?;
    Ok(format!("2 x 1e4 moves exact, {:.1?}", start.elapsed()))
}

// 4 -------------------------------------------------------------------------

const TABLE_INSTANCES: [(&str, ProblemKind); 5] = [
    ("pr1002.tsp", ProblemKind::Tsp),
    ("u1817.tsp", ProblemKind::Tsp),
    ("tai80a.dat", ProblemKind::Qap),
    ("lipa80b.dat", ProblemKind::Qap),
    ("esc128.dat", ProblemKind::Qap),
];

fn hc_like_share() -> Outcome {
    let u1817 = load_tsp("u1817.tsp")?;
    let ten = Termination::cutoff(Duration::from_secs(10));
    let mut report = Vec::new();
    for (file, kind) in TABLE_INSTANCES {
        let Ok(path) = find_instance(file) else {
            continue;
        };
        let inst = Instance::load(&path, kind).map_err(|e| e.to_string())?;
        let seed = derive_seed(BASE_SEED, 0);
        let opts = SearchOptions::default();
        let pct = match &inst {
            Instance::Tsp(p) => run_search(p, &StrategyConfig::dlas(5).unwrap(), &ten, seed, &opts)
                .map(|o| o.hc_like_pct()),
            Instance::Qap(p) => {
                run_search(p, &StrategyConfig::dlas(10).unwrap(), &ten, seed, &opts)
                    .map(|o| o.hc_like_pct())
            }
        }
        .map_err(|e| e.to_string())?;
        ensure(pct == 0.0, || {
            format!("DLAS on {} reports hc_like_pct = {pct}", inst.name())
        })?;
        report.push(format!("DLAS {}=0", inst.name()));
    }
    let lahc = run_search(
        &u1817,
        &StrategyConfig::lahc(50_000).unwrap(),
        &Termination::cutoff(Duration::from_secs(30)),
        derive_seed(BASE_SEED, 0),
        &SearchOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let pct = lahc.hc_like_pct();
    ensure(pct > 0.0, || {
        format!("LAHC on U1817 reports hc_like_pct = {pct}")
    })?;
    report.push(format!("LAHC U1817={pct:.2}%"));
    Ok(report.join(", "))
}

// 5 -------------------------------------------------------------------------

fn finals<P: Problem>(
    problem: &P,
    strategy: StrategyConfig,
    runs: u64,
    cutoff: Duration,
) -> Result<Vec<f64>, String> {
    (0..runs)
        .map(|i| {
            run_search(
                problem,
                &strategy,
                &Termination::cutoff(cutoff),
                derive_seed(BASE_SEED, i),
                &SearchOptions::default(),
            )
            .map(|o| o.best_fitness as f64)
            .map_err(|e| e.to_string())
        })
        .collect()
}

fn directional_quality() -> Outcome {
    let pr = load_tsp("pr1002.tsp")?;
    let cutoff = Duration::from_secs(30);
    let dlas = finals(&pr, StrategyConfig::dlas(5).unwrap(), 10, cutoff)?;
    let lahc = finals(&pr, StrategyConfig::lahc(50_000).unwrap(), 10, cutoff)?;
    let (md, ml) = (mean(&dlas), mean(&lahc));
    ensure(md < ml, || {
        format!("mean DLAS {md:.1} is not below mean LAHC {ml:.1}")
    })?;
    let w = welch_t_test(&dlas, &lahc, 0.95).map_err(|e| e.to_string())?;
    ensure(w.significant && w.t < 0.0, || {
        format!(
            "DLAS {md:.1} < LAHC {ml:.1} but not significant (t={:.3}, p={:.4})",
            w.t, w.p_value
        )
    })?;
    Ok(format!(
        "mean DLAS {md:.1} < LAHC {ml:.1}, t={:.3}, p={:.2e}",
        w.t, w.p_value
    ))
}

// 6 -------------------------------------------------------------------------

fn qap_optimum() -> Outcome {
    const BEST_KNOWN: Fitness = 7_763_962;
    let lipa = load_qap("lipa80b.dat")?;
    let best = finals(
        &lipa,
        StrategyConfig::dlas(10).unwrap(),
        10,
        Duration::from_secs(26),
    )?;
    let hits = best.iter().filter(|&&b| b as Fitness == BEST_KNOWN).count();
    ensure(hits >= 8, || {
        format!("{hits}/10 runs reached {BEST_KNOWN}; finals {best:?}")
    })?;
    Ok(format!("{hits}/10 runs reached {BEST_KNOWN}"))
}

// 7 -------------------------------------------------------------------------

fn determinism() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(
        dir.path().join("rand120.tsp"),
        random_tsp(120, 77).to_tsplib(),
    )
    .map_err(|e| e.to_string())?;
    let spec = ExperimentSpec::from_toml_str(
        r#"
instance = "rand120.tsp"
runs = 4
iteration_budget = 50000
base_seed = 2024
[[strategy]]
kind = "lahc"
L = 1000
[[strategy]]
kind = "schc"
L = 1000
[[strategy]]
kind = "dlas"
"#,
        dir.path(),
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (label, workers) in [("serial", 1), ("repeat", 1), ("parallel", 4)] {
        let result = run_experiment(&spec, workers).map_err(|e| e.to_string())?;
        let out = dir.path().join(format!("{label}.csv"));
        export_results(&result, &out, OutputFormat::Csv).map_err(|e| e.to_string())?;
        let bytes = (
            fs::read(&out).unwrap(),
            fs::read(summary_path(&out)).unwrap(),
        );
        outputs.push((label, bytes));
    }
    for (label, bytes) in &outputs[1..] {
        ensure(*bytes == outputs[0].1, || {
            format!("{label} output differs from serial")
        })?;
    }
    within(start, Duration::from_secs(60), "three experiments")?;
    Ok(format!(
        "serial, repeat and 4-worker CSVs identical, {:.1?}",
        start.elapsed()
    ))
}

// 8 -------------------------------------------------------------------------

fn parser_goldens() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut passed = Vec::new();

    let triangle = "NAME : tri\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n\
                    NODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
    match TspInstance::parse_tsplib(triangle) {
        Ok(t) => {
            let mut edges = vec![t.distance(0, 1), t.distance(1, 2), t.distance(2, 0)];
            edges.sort_unstable();
            if edges == [3, 4, 5] && t.tour_length(&Tour::identity(3)) == 12 {
                passed.push("triangle {3,4,5}".to_string());
            } else {
                failures.push(format!("triangle edges {edges:?}"));
            }
        }
        Err(e) => failures.push(format!("triangle: {e}")),
    }

    match load_tsp("pr1002.tsp") {
        Ok(p) if p.dimension() == 1002 && p.edge_weight == EdgeWeightKind::Euc2d => {
            passed.push("Pr1002 n=1002 EUC_2D".to_string())
        }
        Ok(p) => failures.push(format!(
            "Pr1002 parsed as n={} {:?}",
            p.dimension(),
            p.edge_weight
        )),
        Err(e) => failures.push(e),
    }

    match find_instance("esc128.dat").and_then(|path| {
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let q = load_qap("esc128.dat")?;
        Ok((text, q))
    }) {
        Ok((text, q)) => {
            // Independent reading of the raw numbers.
            let nums: Vec<i64> = text
                .split_whitespace()
                .map(|t| t.parse().unwrap())
                .collect();
            let n = nums[0] as usize;
            let (a, b) = (&nums[1..1 + n * n], &nums[1 + n * n..1 + 2 * n * n]);
            let mut oracle = 0i64;
            for i in 0..n {
                for j in 0..n {
                    oracle += a[i * n + j] * b[i * n + j];
                }
            }
            let cost = q.cost(&Assignment::identity(q.size()));
            if n == 128 && q.size() == 128 && cost == oracle {
                passed.push(format!("Esc128 n=128 identity cost {cost}"));
            } else {
                failures.push(format!(
                    "Esc128 n={} cost {cost} vs oracle {oracle}",
                    q.size()
                ));
            }
        }
        Err(e) => failures.push(e),
    }

    if let Err(e) = within(start, Duration::from_secs(5), "parsing") {
        failures.push(e);
    }
    if failures.is_empty() {
        Ok(passed.join(", "))
    } else {
        Err(format!(
            "{} (passed: {})",
            failures.join("; "),
            passed.join(", ")
        ))
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "replacement truth table", truth_table),
        (2, "DLAS maximum exactness", max_exactness),
        (3, "delta evaluation oracle", delta_oracle),
        (4, "HC-like percentage", hc_like_share),
        (5, "directional quality on Pr1002", directional_quality),
        (6, "Lipa80b optimum", qap_optimum),
        (7, "determinism serial vs parallel", determinism),
        (8, "parser goldens", parser_goldens),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS - {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL - {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
