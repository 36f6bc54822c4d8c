use std::f64::consts::FRAC_PI_2;

use wcs_core::model::builtin_model;
use wcs_core::stability::{
    index_form, paper_bound, paper_h, sweep, verdict, AxialFactor, SeparableVariation, SweepConfig,
    Verdict, VerdictOptions,
};
use wcs_core::sturm_liouville::{rayleigh_quotient_axial, solve_fd, SturmLiouvilleProblem};
use wcs_core::surfaces::{balanced_clifford, parse_surface};

fn sweep_over(
    model: &str,
    family: &str,
    n: std::ops::RangeInclusive<usize>,
    eps: &[f64],
) -> wcs_core::stability::SweepResult {
    sweep(&SweepConfig {
        model: model.into(),
        surface_family: family.into(),
        n_values: n.collect(),
        eps_values: eps.to_vec(),
        options: VerdictOptions::default(),
        jobs: 4,
    })
    .unwrap()
}

#[test]
fn verdict_agrees_with_index_form_sign() {
    let cases = [
        ("sphere", "clifford:1,1", 1.5),
        ("sphere", "clifford:2,2", 0.4),
        ("sphere", "equator:3", 1.2),
        ("euclidean", "clifford:3,3", 0.999),
        ("euclidean", "equator:4", 0.6),
        ("flat", "flat_subtorus:3", 1.0),
        ("hyperbolic_exp", "flat_subtorus:2", 2.0),
    ];
    for (name, surface, eps) in cases {
        let surface = parse_surface(surface).unwrap();
        let model = builtin_model(name, surface.n).unwrap();
        let report = verdict(&model, &surface, eps, &VerdictOptions::default()).unwrap();
        let p = SturmLiouvilleProblem::new(&model, eps, 3).unwrap();
        let axial = solve_fd(&p, 1024).unwrap();
        let form = |i: usize, j: usize| {
            let v = SeparableVariation::new().term(i, AxialFactor::eigenfunction(&axial, j), 1.0);
            index_form(&v, &model, &surface, eps).unwrap()
        };
        if report.verdict == Verdict::Unstable {
            assert!(
                form(0, 0) < 0.0,
                "{name}/{}: sum {} but I(f1 g1) = {}",
                surface.name,
                report.sum,
                form(0, 0)
            );
        } else {
            for i in 0..3 {
                for j in 0..3 {
                    assert!(
                        form(i, j) >= -1e-8,
                        "{name}/{} ({i},{j}): {}",
                        surface.name,
                        form(i, j)
                    );
                }
            }
        }
    }
}

#[test]
fn test_function_bound_is_sound() {
    for n in 2..=16 {
        let model = builtin_model("sphere", n).unwrap();
        let surface = balanced_clifford(n).unwrap();
        for eps in [0.4, 0.9, 1.3, 1.55, FRAC_PI_2 - 1e-3] {
            let p = SturmLiouvilleProblem::new(&model, eps, 1).unwrap();
            let estimate =
                -(n as f64) + rayleigh_quotient_axial(&p, &paper_h(eps, n).unwrap()).unwrap();
            let sum = verdict(&model, &surface, eps, &VerdictOptions::default())
                .unwrap()
                .sum;
            assert!(
                estimate >= sum - 1e-8,
                "n={n} eps={eps}: {estimate} < {sum}"
            );
        }
        let p = SturmLiouvilleProblem::new(&model, FRAC_PI_2 - 1e-3, 1).unwrap();
        let near = -(n as f64)
            + rayleigh_quotient_axial(&p, &paper_h(FRAC_PI_2 - 1e-3, n).unwrap()).unwrap();
        assert!(
            (near - paper_bound(n)).abs() <= 0.05,
            "n={n}: {near} vs {}",
            paper_bound(n)
        );
    }
}

#[test]
fn sphere_window_contains_two_through_fourteen() {
    let result = sweep_over("sphere", "clifford", 2..=20, &[FRAC_PI_2 - 0.01]);
    let summary = result.summary();
    assert_eq!(summary.failures, 0);
    assert!(summary.contiguous);
    assert!(
        (2..=14).all(|n| summary.unstable_n.contains(&n)),
        "{:?}",
        summary.unstable_n
    );
    assert!(result.summary_line().contains("beyond paper's theorem"));
}

#[test]
fn flat_torus_cones_are_never_unstable() {
    let summary = sweep_over("flat", "flat_subtorus", 2..=5, &[1.0]).summary();
    assert_eq!(summary.failures, 0);
    assert!(summary.unstable_n.is_empty());
}

#[test]
fn euclidean_plot_data_crosses_zero_between_five_and_six() {
    let result = sweep_over("euclidean", "clifford", 2..=8, &[0.9, 0.99, 0.999]);
    let plot = result.plot_data();
    let mut lines = plot.lines();
    assert_eq!(lines.next(), Some("n,eps,lambda1,delta1,sum,verdict"));
    let finest: Vec<(usize, f64)> = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[1] == "0.999")
        .map(|f| (f[0].parse().unwrap(), f[4].parse().unwrap()))
        .collect();
    assert_eq!(finest.len(), 7);
    for (n, sum) in finest {
        assert_eq!(sum < 0.0, n <= 5, "n={n}: sum {sum}");
    }
}

#[test]
fn sum_is_non_increasing_in_depth() {
    for (name, surface) in [
        ("sphere", "clifford:2,1"),
        ("euclidean", "clifford:3,2"),
        ("hyperbolic_exp", "flat_subtorus:3"),
    ] {
        let surface = parse_surface(surface).unwrap();
        let model = builtin_model(name, surface.n).unwrap();
        let top = model.max_depth().min(2.7);
        let mut previous = f64::INFINITY;
        for k in 1..=15 {
            let eps = top * k as f64 / 15.0;
            let sum = verdict(&model, &surface, eps, &VerdictOptions::default())
                .unwrap()
                .sum;
            assert!(sum <= previous, "{name} eps={eps}: {sum} > {previous}");
            previous = sum;
        }
    }
}
