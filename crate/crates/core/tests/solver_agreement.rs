use std::time::Instant;

use wcs_core::model::{builtin_model, BUILTIN_MODELS};
use wcs_core::sturm_liouville::{solve_fd, solve_shooting, SturmLiouvilleProblem};

/// Depth standing in for `0.9·eps_max` on models defined over the whole line.
const UNBOUNDED_DEPTH: f64 = 2.7;

fn depths(name: &str) -> Vec<f64> {
    let m = builtin_model(name, 2).unwrap();
    let deep = if m.eps_max().is_finite() {
        0.9 * m.eps_max()
    } else {
        UNBOUNDED_DEPTH
    };
    vec![0.3, 0.8, deep]
}

#[test]
fn finite_difference_and_shooting_agree() {
    let mut worst = (0.0f64, String::new());
    for name in BUILTIN_MODELS {
        for n in 2..=15 {
            let model = builtin_model(name, n).unwrap();
            for eps in depths(name) {
                let start = Instant::now();
                let p = SturmLiouvilleProblem::new(&model, eps, 3).unwrap();
                let fd = solve_fd(&p, 1024).unwrap();
                let sh = solve_shooting(&p, 1e-10).unwrap();
                for j in 0..3 {
                    let (a, b) = (fd.eigenvalues[j], sh.eigenvalues[j]);
                    let tol = 1e-6f64.max(1e-6 * b.abs());
                    let ratio = (a - b).abs() / tol;
                    if ratio > worst.0 {
                        worst = (
                            ratio,
                            format!("{name} n={n} eps={eps} j={}: fd {a} shooting {b}", j + 1),
                        );
                    }
                    assert!(
                        (a - b).abs() <= tol,
                        "{name} n={n} eps={eps} j={}: {a} vs {b}",
                        j + 1
                    );
                }
                eprintln!("{name} n={n} eps={eps}: {:?}", start.elapsed());
            }
        }
    }
    eprintln!("worst gap / tolerance = {:.3e} at {}", worst.0, worst.1);
}
