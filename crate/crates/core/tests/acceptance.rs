//! Acceptance criteria 1–7. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::time::{Duration, Instant};

use wcs_core::axial::DirichletSine;
use wcs_core::cli;
use wcs_core::geometry::verify_geometry;
use wcs_core::model::{builtin_model, BUILTIN_MODELS};
use wcs_core::stability::{
    index_form, index_form_factored, paper_bound, paper_integral_limits, paper_integrals, sweep,
    verdict, AxialFactor, SeparableVariation, SweepConfig, Verdict, VerdictOptions,
};
use wcs_core::sturm_liouville::{
    euclidean_eigenvalue, solve_fd, solve_shooting, variational_check, SturmLiouvilleProblem,
};
use wcs_core::surfaces::{balanced_clifford, l1_spectrum, parse_surface};

const GRID: usize = 1024;
const SHOOT_TOL: f64 = 1e-10;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_close(value: f64, expected: f64, rel: f64) -> bool {
    (value - expected).abs() <= rel * expected.abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn criterion_1() -> Outcome {
    for n in [2, 5, 10] {
        let model = builtin_model("flat", n).map_err(|e| e.to_string())?;
        for eps in [0.3, 0.5, 1.0] {
            let exact = PI * PI / (eps * eps);
            let p = SturmLiouvilleProblem::new(&model, eps, 1).map_err(|e| e.to_string())?;
            let (fd, t_fd) = timed(|| solve_fd(&p, GRID));
            let (sh, t_sh) = timed(|| solve_shooting(&p, SHOOT_TOL));
            let fd = fd.map_err(|e| e.to_string())?.first();
            let sh = sh.map_err(|e| e.to_string())?.first();
            ensure(rel_close(fd, exact, 1e-6), || {
                format!("fd n={n} eps={eps}: {fd} vs {exact}")
            })?;
            ensure(rel_close(sh, exact, 1e-6), || {
                format!("shooting n={n} eps={eps}: {sh} vs {exact}")
            })?;
            ensure(
                t_fd < Duration::from_secs(1) && t_sh < Duration::from_secs(1),
                || format!("n={n} eps={eps}: fd {t_fd:?}, shooting {t_sh:?}"),
            )?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for n in 2..=8 {
        let model = builtin_model("euclidean", n).map_err(|e| e.to_string())?;
        for eps in [0.3, 0.5, 0.9] {
            let exact = euclidean_eigenvalue(n, eps, 1);
            let independent =
                (n as f64 - 1.0).powi(2) / 4.0 + (PI / (1.0 / (1.0 - eps)).ln()).powi(2);
            ensure(rel_close(exact, independent, 1e-14), || {
                format!("oracle n={n} eps={eps}")
            })?;
            let p = SturmLiouvilleProblem::new(&model, eps, 1).map_err(|e| e.to_string())?;
            let fd = solve_fd(&p, GRID).map_err(|e| e.to_string())?.first();
            let sh = solve_shooting(&p, SHOOT_TOL)
                .map_err(|e| e.to_string())?
                .first();
            ensure(rel_close(fd, exact, 1e-6), || {
                format!("fd n={n} eps={eps}: {fd} vs {exact}")
            })?;
            ensure(rel_close(sh, exact, 1e-6), || {
                format!("shooting n={n} eps={eps}: {sh} vs {exact}")
            })?;
        }
    }
    // limiting window: (n-1)²/4 - n < 0
    let window: Vec<usize> = (2..=8)
        .filter(|&n| (n as f64 - 1.0).powi(2) / 4.0 - (n as f64) < 0.0)
        .collect();
    ensure(window == vec![2, 3, 4, 5], || {
        format!("closed-form window {window:?}")
    })?;

    // the same window from computed verdicts near ε = 1 with λ₁ = −n
    let config = SweepConfig {
        model: "euclidean".into(),
        surface_family: "clifford".into(),
        n_values: (2..=8).collect(),
        eps_values: vec![0.999],
        options: VerdictOptions::default(),
        jobs: 2,
    };
    let result = sweep(&config).map_err(|e| e.to_string())?;
    let summary = result.summary();
    ensure(summary.failures == 0, || {
        format!("{} failed cells", summary.failures)
    })?;
    ensure(summary.unstable_n == window, || {
        format!("computed window {:?}", summary.unstable_n)
    })
}

fn criterion_3() -> Outcome {
    for n in 2..=16 {
        let r = paper_integrals(FRAC_PI_2, n).map_err(|e| e.to_string())?;
        let nf = n as f64;
        let i1 = FRAC_PI_2 * (1.0 + ((nf - 2.0) / 4.0).powi(2));
        let i2 = (nf + 1.0) * PI / 8.0;
        let i3 = PI / 4.0;
        let (a, b, c) = paper_integral_limits(n);
        ensure(
            rel_close(a, i1, 1e-15) && rel_close(b, i2, 1e-15) && rel_close(c, i3, 1e-15),
            || format!("limit formulas n={n}"),
        )?;
        for (name, v, e) in [("I1", r.i1, i1), ("I2", r.i2, i2), ("I3", r.i3, i3)] {
            ensure(rel_close(v, e, 1e-8), || {
                format!("{name} n={n}: {v} vs {e}")
            })?;
        }
    }
    for n in 1..=40usize {
        // n²/8 − 2n + 2 < 0  ⇔  n² − 16n + 16 < 0, in integers
        let negative_exact = (n * n + 16) < 16 * n;
        let in_window = (2..=14).contains(&n);
        ensure(negative_exact == in_window, || {
            format!("integer sign n={n}")
        })?;
        ensure((paper_bound(n) < 0.0) == in_window, || {
            format!("bound sign n={n}: {}", paper_bound(n))
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let eps = FRAC_PI_2 - 0.01;
    let start = Instant::now();
    for n in 2..=14 {
        let model = builtin_model("sphere", n).map_err(|e| e.to_string())?;
        let surface = balanced_clifford(n).map_err(|e| e.to_string())?;
        let lambda1 = l1_spectrum(&surface, 1)
            .map_err(|e| e.to_string())?
            .lambda1();
        ensure(lambda1 == -(n as f64), || {
            format!("lambda1 n={n}: {lambda1}")
        })?;
        let r = verdict(&model, &surface, eps, &VerdictOptions::default())
            .map_err(|e| format!("n={n}: {e}"))?;
        let gap = r.diagnostics.solver_gap.unwrap_or(f64::INFINITY);
        ensure(gap <= 1e-6, || format!("solver gap n={n}: {gap}"))?;
        ensure(r.sum < 0.0 && r.verdict == Verdict::Unstable, || {
            format!("n={n}: sum {}", r.sum)
        })?;
    }
    let config = SweepConfig {
        model: "sphere".into(),
        surface_family: "clifford".into(),
        n_values: (2..=14).collect(),
        eps_values: vec![eps],
        options: VerdictOptions::default(),
        jobs: 4,
    };
    let (result, elapsed) = timed(|| sweep(&config));
    let result = result.map_err(|e| e.to_string())?;
    let summary = result.summary();
    ensure(summary.unstable_n == (2..=14).collect::<Vec<_>>(), || {
        format!("sweep window {:?}", summary.unstable_n)
    })?;
    ensure(elapsed < Duration::from_secs(30), || {
        format!("sweep took {elapsed:?}")
    })?;
    ensure(start.elapsed() < Duration::from_secs(60), || {
        format!("total {:?}", start.elapsed())
    })
}

fn criterion_5() -> Outcome {
    let surface = parse_surface("clifford:1,1").map_err(|e| e.to_string())?;
    for t in [-0.3, -0.6] {
        let r = verify_geometry(&surface, t, None, 1e-3).map_err(|e| e.to_string())?;
        let norm = r.shape_operator.norm * f64::cos(t);
        ensure((norm - SQRT_2).abs() <= 1e-4, || {
            format!("t={t}: |A|cos t = {norm}")
        })?;
        ensure(r.shape_operator.mean_curvature.abs() <= 1e-4, || {
            format!("t={t}: H = {}", r.shape_operator.mean_curvature)
        })?;
        let density = r
            .checks
            .iter()
            .find(|c| c.name == "volume_density")
            .ok_or("no density check")?;
        ensure((density.value - t.cos().powi(2)).abs() <= 1e-5, || {
            format!("t={t}: density {}", density.value)
        })?;
        for c in &r.convergence {
            ensure(c.passed, || {
                format!("t={t}: {} halving ratio {}", c.name, c.ratio)
            })?;
        }
        ensure(r.passed, || format!("t={t}: report failed"))?;
    }
    Ok(())
}

fn factorization_ok(direct: f64, expected: f64) -> bool {
    if expected == 0.0 {
        direct.abs() <= 1e-8
    } else {
        (direct - expected).abs() <= 1e-6 * expected.abs()
    }
}

fn criterion_6() -> Outcome {
    // flat model over the flat torus R^n / 2πZ^n: λ = 0, 1; δ_j = (jπ/ε)², ‖g_j‖² = 1
    for n in [2, 3] {
        let model = builtin_model("flat", n).map_err(|e| e.to_string())?;
        let torus = parse_surface(&format!("flat_subtorus:{n}")).map_err(|e| e.to_string())?;
        let eps = 0.8;
        for (i, lambda) in [(0usize, 0.0), (1, 1.0)] {
            for j in 1..=2u32 {
                let g = DirichletSine::normalized(eps, j);
                let v = SeparableVariation::new().term(i, AxialFactor::Closed(&g), 1.0);
                let direct = index_form(&v, &model, &torus, eps).map_err(|e| e.to_string())?;
                let expected = lambda + (j as f64 * PI / eps).powi(2);
                ensure(factorization_ok(direct, expected), || {
                    format!("flat n={n} ({i},{j}): {direct} vs {expected}")
                })?;
            }
        }
    }
    // round sphere over clifford(1,1): exact λ, numerical δ_j and g_j
    let model = builtin_model("sphere", 2).map_err(|e| e.to_string())?;
    let surface = parse_surface("clifford:1,1").map_err(|e| e.to_string())?;
    let lambdas = l1_spectrum(&surface, 2)
        .map_err(|e| e.to_string())?
        .eigenvalues;
    ensure(lambdas == vec![-2.0, 0.0], || {
        format!("clifford(1,1) spectrum {lambdas:?}")
    })?;
    for eps in [0.7, 1.2] {
        let p = SturmLiouvilleProblem::new(&model, eps, 2).map_err(|e| e.to_string())?;
        let spectrum = solve_fd(&p, GRID).map_err(|e| e.to_string())?;
        for i in 0..2 {
            for j in 0..2 {
                let v = SeparableVariation::new().term(
                    i,
                    AxialFactor::eigenfunction(&spectrum, j),
                    1.0,
                );
                let direct = index_form(&v, &model, &surface, eps).map_err(|e| e.to_string())?;
                let factored = index_form_factored(&surface, &p, &spectrum, &[(i, j, 1.0)])
                    .map_err(|e| e.to_string())?;
                let by_hand =
                    (lambdas[i] + spectrum.eigenvalues[j]) * spectrum.weighted_inner(&p, j, j);
                ensure(
                    (factored - by_hand).abs() <= 1e-14 * by_hand.abs().max(1.0),
                    || "factored formula".into(),
                )?;
                ensure(factorization_ok(direct, factored), || {
                    format!(
                        "sphere eps={eps} ({},{}): {direct} vs {factored}",
                        i + 1,
                        j + 1
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("wcs").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn criterion_7() -> Outcome {
    let depths = |name: &str| {
        let m = builtin_model(name, 2).unwrap();
        let deep = if m.eps_max().is_finite() {
            0.9 * m.eps_max()
        } else {
            2.7
        };
        vec![0.3, 0.8, deep]
    };
    let mut seed = 1u64;
    for name in BUILTIN_MODELS {
        for n in [2, 5, 9] {
            let model = builtin_model(name, n).map_err(|e| e.to_string())?;
            for eps in depths(name) {
                let p = SturmLiouvilleProblem::new(&model, eps, 3).map_err(|e| e.to_string())?;
                let fd = solve_fd(&p, GRID).map_err(|e| e.to_string())?;
                for i in 0..3 {
                    for j in 0..3 {
                        let ip = fd.weighted_inner(&p, i, j);
                        let target = if i == j { 1.0 } else { 0.0 };
                        ensure((ip - target).abs() <= 1e-8, || {
                            format!("{name} n={n} eps={eps}: <g{i},g{j}>_w = {ip}")
                        })?;
                    }
                }
                let delta1 = solve_shooting(&p, SHOOT_TOL)
                    .map_err(|e| e.to_string())?
                    .first();
                let check =
                    variational_check(&p, delta1, 100, seed, 1e-8).map_err(|e| e.to_string())?;
                seed += 1;
                ensure(check.passed, || {
                    format!(
                        "{name} n={n} eps={eps}: min RQ - delta1 = {}",
                        check.min_gap
                    )
                })?;
            }
            let grid: Vec<f64> = (1..=12)
                .map(|k| model.max_depth().min(3.0) * k as f64 / 12.5)
                .collect();
            let mut previous = f64::INFINITY;
            for eps in grid {
                let p = SturmLiouvilleProblem::new(&model, eps, 1).map_err(|e| e.to_string())?;
                let d = solve_shooting(&p, SHOOT_TOL)
                    .map_err(|e| e.to_string())?
                    .first();
                ensure(d < previous, || {
                    format!("{name} n={n}: delta1({eps}) = {d} not below {previous}")
                })?;
                previous = d;
            }
        }
    }
    let commands: [&[&str]; 3] = [
        &[
            "verdict",
            "--model",
            "sphere",
            "--surface",
            "clifford:3,2",
            "--eps",
            "1.2",
            "--format",
            "json",
        ],
        &[
            "sweep",
            "--model",
            "sphere",
            "--surface",
            "clifford",
            "--n-min",
            "2",
            "--n-max",
            "6",
            "--eps",
            "0.8,1.5",
        ],
        &[
            "delta1",
            "--model",
            "hyperbolic_cosh",
            "--n",
            "4",
            "--eps",
            "1.1",
            "--num-eigen",
            "3",
            "--format",
            "csv",
        ],
    ];
    for args in commands {
        let (c1, a) = run_cli(args);
        let (c2, b) = run_cli(args);
        ensure(c1 == 0 && c2 == 0, || format!("{args:?} exited {c1}/{c2}"))?;
        ensure(a == b && !a.is_empty(), || {
            format!("{args:?} output differs between runs")
        })?;
    }
    let serial = run_cli(&[
        "sweep",
        "--model",
        "sphere",
        "--surface",
        "clifford",
        "--n-min",
        "2",
        "--n-max",
        "9",
        "--eps",
        "1.0",
        "--jobs",
        "1",
    ]);
    let parallel = run_cli(&[
        "sweep",
        "--model",
        "sphere",
        "--surface",
        "clifford",
        "--n-min",
        "2",
        "--n-max",
        "9",
        "--eps",
        "1.0",
        "--jobs",
        "4",
    ]);
    ensure(serial == parallel, || {
        "sweep output depends on --jobs".into()
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("flat closed form", criterion_1),
        ("Euclidean Euler oracle and window n <= 5", criterion_2),
        ("test-function integrals and closed-form bound", criterion_3),
        ("sphere verdict for 2 <= n <= 14", criterion_4),
        ("cone geometry identities", criterion_5),
        ("index-form factorization", criterion_6),
        ("property suites and determinism", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let (outcome, elapsed) = timed(check);
        match outcome {
            Ok(()) => println!(
                "criterion {}: PASS  {name} ({:.2}s)",
                k + 1,
                elapsed.as_secs_f64()
            ),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
