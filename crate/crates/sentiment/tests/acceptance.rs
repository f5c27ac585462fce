//! Acceptance criteria. Each criterion prints one PASS/FAIL line; run with
//! `cargo test -p sentiment-sim --test acceptance -- --nocapture` to see them.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use sentiment_core::{
    baseline_no_interaction, difference_map, energy, euler_step, gen_initial_grid, gen_kernel, kernel_offsets,
    make_rng, nonlocal_term, run_to_equilibrium, sign_of, stable_dt, ExtendedKernel, OffsetWeights, SentimentGrid,
    Sign, SimConfig, TimeStep,
};
use sentiment_sim::commands::cmd_simulate;
use sentiment_sim::io::read_csv;
use sentiment_sim::parallel::par_sensitivity_scan;

/// Stopping tolerance used throughout.
const EPS: f64 = 0.001;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lognormal_kernel(n: usize, seed: u64) -> ExtendedKernel {
    gen_kernel(n, n - 1, 1.0, 1.7, &mut make_rng(seed)).unwrap()
}

fn fixed_point_exactness() -> Outcome {
    for seed in 0..20 {
        let w = kernel_offsets(&lognormal_kernel(16, 100 + seed), false);
        let dt = stable_dt(&w);
        for c in [1.0, -1.0] {
            let g = SentimentGrid::filled(16, c).unwrap();
            for sign in [Sign::Diffusive, Sign::PaperLiteral] {
                let next = euler_step(&g, &w, dt, sign).map_err(|e| e.to_string())?;
                ensure(
                    next.values()
                        .iter()
                        .zip(g.values())
                        .all(|(a, b)| a.to_bits() == b.to_bits()),
                    || format!("seed {seed}, constant {c}, {sign}: step changed the grid"),
                )?;
                let cfg = SimConfig {
                    sign,
                    ..Default::default()
                };
                let run = run_to_equilibrium(&g, &w, &cfg).map_err(|e| e.to_string())?;
                ensure(run.converged && run.iterations == 1 && run.final_grid == g, || {
                    format!(
                        "seed {seed}, constant {c}: converged={} at {}",
                        run.converged, run.iterations
                    )
                })?;
            }
        }
    }
    Ok("20 kernels x {+1,-1} x 2 signs bitwise fixed, converged at iteration 1".into())
}

/// Double sum over `(x, y)` with weights summed straight from the kernel.
fn double_sum_oracle(grid: &SentimentGrid, kernel: &ExtendedKernel) -> Vec<f64> {
    let n = grid.n();
    let t = kernel.t() as isize;
    let weight = |d: isize| {
        let mut s = 0.0;
        for m in 0..n {
            let a = (kernel.block_start() + m) as isize;
            s += kernel.get((a + d).rem_euclid(t) as usize, a as usize);
        }
        s
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for x in 0..n {
            let mut acc = 0.0;
            for y in 0..n {
                acc += weight(x as isize - y as isize) * (grid.get(i, y) - grid.get(i, x));
            }
            out.push(acc);
        }
    }
    out
}

fn operator_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in 0..100u64 {
        let n = 2 + (case % 5) as usize;
        let kernel = lognormal_kernel(n, 5000 + case);
        let grid = gen_initial_grid(n, &mut make_rng(6000 + case)).unwrap();
        let fast = nonlocal_term(&grid, &kernel_offsets(&kernel, false)).unwrap();
        let slow = double_sum_oracle(&grid, &kernel);
        for (a, b) in fast.iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max-abs error {worst:e} > 1e-12"))?;
    Ok(format!("100 instances, n in 2..=6, max-abs error {worst:e}"))
}

fn baseline_agreement() -> Outcome {
    let w = OffsetWeights::zeros(16);
    let cfg = SimConfig {
        dt: TimeStep::Fixed(0.01),
        eps: EPS,
        snapshot_every: 0,
        ..Default::default()
    };
    let mut max_iters = 0;
    for seed in 0..20 {
        let mut r = make_rng(7000 + seed);
        let values = (0..256)
            .map(|_| {
                let magnitude = r.uniform_in(0.05, 1.0);
                if r.uniform() < 0.5 {
                    -magnitude
                } else {
                    magnitude
                }
            })
            .collect();
        let g = SentimentGrid::new(16, values).unwrap();
        let run = run_to_equilibrium(&g, &w, &cfg).map_err(|e| e.to_string())?;
        ensure(run.converged, || format!("seed {seed}: no convergence"))?;
        max_iters = max_iters.max(run.iterations);
        let thresholded = run.final_grid.map(|v| f64::from(sign_of(v))).unwrap();
        ensure(thresholded == baseline_no_interaction(&g), || {
            format!("seed {seed}: sign map differs")
        })?;
    }
    Ok(format!(
        "20 seeds agree pixel for pixel (longest run {max_iters} iterations)"
    ))
}

fn energy_monotonicity() -> Outcome {
    let mut worst_rise = f64::NEG_INFINITY;
    for seed in 0..10 {
        let w = kernel_offsets(&lognormal_kernel(16, 300 + seed), true);
        let dt = stable_dt(&w);
        let mut g = gen_initial_grid(16, &mut make_rng(400 + seed)).unwrap();
        let mut e = energy(&g, &w).unwrap();
        for step in 0..1000 {
            g = euler_step(&g, &w, dt, Sign::Diffusive).map_err(|e| e.to_string())?;
            let next = energy(&g, &w).unwrap();
            worst_rise = worst_rise.max(next - e);
            ensure(next <= e + 1e-12, || {
                format!("seed {seed} step {step}: energy {e} -> {next}")
            })?;
            e = next;
        }
    }
    Ok(format!("10 seeds x 1000 steps, largest per-step change {worst_rise:e}"))
}

struct ScaleRun {
    iterations: usize,
    converged: bool,
    polarized_fraction: f64,
}

fn reference_scale_runs() -> Vec<ScaleRun> {
    let cfg = SimConfig {
        snapshot_every: 0,
        ..Default::default()
    };
    (0..10)
        .map(|seed| {
            let w = kernel_offsets(&lognormal_kernel(16, 10 + seed), false);
            let g = gen_initial_grid(16, &mut make_rng(20 + seed)).unwrap();
            let run = run_to_equilibrium(&g, &w, &cfg).expect("reference-scale run diverged");
            let polarized = run.final_grid.values().iter().filter(|v| v.abs() > 0.9).count();
            ScaleRun {
                iterations: run.iterations,
                converged: run.converged,
                polarized_fraction: polarized as f64 / 256.0,
            }
        })
        .collect()
}

fn reference_scale_convergence(runs: &[ScaleRun]) -> Outcome {
    for (k, r) in runs.iter().enumerate() {
        ensure(r.converged, || format!("run {k} did not converge in 100000 iterations"))?;
        ensure((100..=100_000).contains(&r.iterations), || {
            format!("run {k}: {} iterations", r.iterations)
        })?;
    }
    let its: Vec<usize> = runs.iter().map(|r| r.iterations).collect();
    Ok(format!("10/10 converged, iterations {its:?}"))
}

fn polarization_emergence(runs: &[ScaleRun]) -> Outcome {
    let polarized = runs.iter().filter(|r| r.polarized_fraction >= 0.9).count();
    ensure(polarized >= 9, || format!("only {polarized}/10 finals polarized"))?;
    let fractions: Vec<String> = runs.iter().map(|r| format!("{:.3}", r.polarized_fraction)).collect();
    Ok(format!(
        "{polarized}/10 finals with >=90% of pixels beyond 0.9 (fractions {})",
        fractions.join(" ")
    ))
}

fn difference_map_arithmetic() -> Outcome {
    let initial = SentimentGrid::from_rows(&[[-0.8, -0.8, 0.6]; 3]).unwrap();
    let final_grid = SentimentGrid::from_rows(&[[-0.9, 0.95, -1.0]; 3]).unwrap();
    let d = difference_map(&initial, &final_grid).unwrap();
    let row: Vec<i8> = (0..3).map(|x| d.get(0, x)).collect();
    ensure(row == [0, 2, -2], || format!("worked cases gave {row:?}"))?;
    for seed in 0..100 {
        let a = gen_initial_grid(8, &mut make_rng(8000 + seed)).unwrap();
        let b = gen_initial_grid(8, &mut make_rng(9000 + seed)).unwrap();
        let ab = difference_map(&a, &b).unwrap();
        let ba = difference_map(&b, &a).unwrap();
        ensure(ab.values().iter().zip(ba.values()).all(|(x, y)| *x == -*y), || {
            format!("pair {seed} not antisymmetric")
        })?;
    }
    Ok("worked cases 0, +2, -2 exact; 100 pairs antisymmetric".into())
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.file_type().unwrap().is_dir() {
            for (k, v) in tree(&entry.path()) {
                out.insert(format!("{name}/{k}"), v);
            }
        } else {
            out.insert(name, fs::read(entry.path()).unwrap());
        }
    }
    out
}

fn pipeline(dir: &Path, threads: &str) -> Result<(), String> {
    let run = |args: &[&str], ok_codes: &[i32]| -> Result<(), String> {
        let o = Command::new(env!("CARGO_BIN_EXE_sentiment"))
            .current_dir(dir)
            .arg("--threads")
            .arg(threads)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.code().is_some_and(|c| ok_codes.contains(&c)), || {
            format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr))
        })
    };
    run(&["gen-kernel", "--seed", "11", "--out", "kernel.csv"], &[0])?;
    run(&["gen-init", "--seed", "12", "--out", "init.csv"], &[0])?;
    run(
        &[
            "simulate",
            "--kernel",
            "kernel.csv",
            "--init",
            "init.csv",
            "--out",
            "run",
        ],
        &[0],
    )?;
    // wide enough to take the multi-threaded row path; stops early on purpose
    run(
        &["gen-kernel", "--n", "64", "--seed", "13", "--out", "wide_kernel.csv"],
        &[0],
    )?;
    run(
        &["gen-init", "--n", "64", "--seed", "14", "--out", "wide_init.csv"],
        &[0],
    )?;
    run(
        &[
            "simulate",
            "--kernel",
            "wide_kernel.csv",
            "--init",
            "wide_init.csv",
            "--max-iters",
            "300",
            "--snapshot-every",
            "100",
            "--out",
            "wide",
        ],
        &[0, 3],
    )?;
    run(
        &[
            "sensitivity",
            "--n",
            "4",
            "--seed-kernel",
            "15",
            "--seed-init",
            "16",
            "--out",
            "sens.csv",
        ],
        &[0],
    )?;
    Ok(())
}

fn determinism() -> Outcome {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    pipeline(dirs[0].path(), "1")?;
    pipeline(dirs[1].path(), "1")?;
    pipeline(dirs[2].path(), "8")?;
    let trees: Vec<_> = dirs.iter().map(|d| tree(d.path())).collect();
    for (label, other) in [("repeat", &trees[1]), ("8 threads", &trees[2])] {
        ensure(trees[0].keys().eq(other.keys()), || {
            format!("{label}: file sets differ")
        })?;
        for (name, bytes) in &trees[0] {
            ensure(other[name] == *bytes, || format!("{label}: {name} differs"))?;
        }
    }
    Ok(format!(
        "{} files byte-identical across repeat and 1 vs 8 threads",
        trees[0].len()
    ))
}

fn large_grid() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SimConfig {
        n: 32,
        seed_kernel: 32,
        seed_init: 33,
        snapshot_every: 0,
        max_iters: 1_000_000,
        ..Default::default()
    };
    let out = cmd_simulate(None, None, &cfg, dir.path()).map_err(|e| e.to_string())?;
    let m = &out.manifest;
    ensure(m.converged, || {
        format!("no convergence after {} iterations", m.iterations)
    })?;
    let diff = read_csv(&dir.path().join("diff.csv")).map_err(|e| e.to_string())?;
    ensure((diff.rows, diff.cols) == (32, 32), || "diff map has wrong shape".into())?;
    ensure(dir.path().join("diff.pgm").exists(), || "diff.pgm missing".into())?;
    Ok(format!(
        "converged after {} iterations, classification {}",
        m.iterations, m.classification
    ))
}

/// Plain rerun of every flip with its own Euler loop; returns the table.
fn brute_force_scan(grid0: &SentimentGrid, w: &[f64], n: usize, dt: f64) -> Vec<f64> {
    let solve = |mut p: Vec<f64>| -> Vec<f64> {
        for _ in 0..100_000 {
            let mut next = vec![0.0; n * n];
            let mut change: f64 = 0.0;
            for i in 0..n {
                for x in 0..n {
                    let px = p[i * n + x];
                    let mut lap = 0.0;
                    for y in 0..n {
                        lap += w[x + n - 1 - y] * (p[i * n + y] - px);
                    }
                    next[i * n + x] = px + dt * (lap - (px * px * px - px));
                    change = change.max((next[i * n + x] - px).abs());
                }
            }
            p = next;
            if change / dt < EPS {
                return p;
            }
        }
        panic!("brute-force run did not converge");
    };
    let reference = solve(grid0.values().to_vec());
    (0..n * n)
        .map(|k| {
            let mut start = grid0.values().to_vec();
            start[k] = -start[k];
            let fin = solve(start);
            fin.iter().zip(&reference).map(|(a, b)| (a - b).abs()).sum()
        })
        .collect()
}

fn sensitivity_oracle() -> Outcome {
    let n = 8;
    let cfg = SimConfig {
        eps: EPS,
        ..Default::default()
    };

    let mut r = make_rng(77);
    let g = SentimentGrid::new(
        n,
        (0..n * n)
            .map(|_| {
                let v = r.uniform_in(0.1, 1.0);
                if r.uniform() < 0.5 {
                    -v
                } else {
                    v
                }
            })
            .collect(),
    )
    .unwrap();
    let zero_cfg = SimConfig {
        dt: TimeStep::Fixed(0.01),
        ..cfg.clone()
    };
    let scan = par_sensitivity_scan(&g, &OffsetWeights::zeros(n), &zero_cfg).map_err(|e| e.to_string())?;
    let devs: Vec<f64> = scan.table().iter().map(|d| d.unwrap_or(f64::NAN)).collect();
    let (lo, hi) = devs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
        (lo.min(d), hi.max(d))
    });
    // every pixel stops within eps of a well: |2 - deviation| <= 2 eps
    ensure(devs.iter().all(|d| (d - 2.0).abs() <= 2.0 * EPS), || {
        format!("zero-kernel deviations span [{lo}, {hi}]")
    })?;

    let kernel = lognormal_kernel(n, 88);
    let w = kernel_offsets(&kernel, false);
    let g = gen_initial_grid(n, &mut make_rng(89)).unwrap();
    let scan = par_sensitivity_scan(&g, &w, &cfg).map_err(|e| e.to_string())?;
    let table = brute_force_scan(&g, w.as_slice(), n, stable_dt(&w));
    let mut best = 0;
    for (k, &d) in table.iter().enumerate() {
        if d > table[best] {
            best = k;
        }
    }
    let ((row, col), dev) = scan.argmax().ok_or("scan found no argmax")?;
    ensure((row, col) == (best / n, best % n), || {
        format!("argmax ({row}, {col}) vs brute force ({}, {})", best / n, best % n)
    })?;
    Ok(format!(
        "zero kernel: deviations in [{lo:.6}, {hi:.6}]; seeded kernel: argmax ({row}, {col}) deviation {dev:.6} matches brute force"
    ))
}

type Measured = (&'static str, Outcome, Duration, Duration);

fn check(results: &mut Vec<Measured>, name: &'static str, budget: Duration, f: fn() -> Outcome) {
    let start = Instant::now();
    let outcome = f();
    results.push((name, outcome, start.elapsed(), budget));
}

#[test]
fn acceptance_criteria() {
    let mut results: Vec<Measured> = Vec::new();
    let secs = Duration::from_secs;

    check(&mut results, "fixed-point exactness", secs(1), fixed_point_exactness);
    check(&mut results, "operator oracle", secs(1), operator_oracle);
    check(&mut results, "baseline agreement", secs(10), baseline_agreement);
    check(&mut results, "energy monotonicity", secs(10), energy_monotonicity);

    let start = Instant::now();
    let runs = reference_scale_runs();
    let scale_time = start.elapsed();
    results.push((
        "reference-scale convergence",
        reference_scale_convergence(&runs),
        scale_time,
        Duration::from_secs(30),
    ));
    results.push((
        "polarization emergence",
        polarization_emergence(&runs),
        scale_time,
        Duration::from_secs(30),
    ));

    check(
        &mut results,
        "difference-map arithmetic",
        secs(1),
        difference_map_arithmetic,
    );
    check(&mut results, "determinism", secs(120), determinism);
    check(&mut results, "32x32 capability", secs(60), large_grid);
    check(&mut results, "sensitivity oracle", secs(300), sensitivity_oracle);

    let mut failed = 0;
    for (name, outcome, elapsed, budget) in &results {
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other.clone(),
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
