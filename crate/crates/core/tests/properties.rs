use proptest::prelude::*;

use wcs_core::model::{builtin_model, BUILTIN_MODELS};
use wcs_core::stability::{verdict, VerdictOptions};
use wcs_core::sturm_liouville::{
    random_test_function, rayleigh_quotient_axial, solve_fd, solve_shooting, SturmLiouvilleProblem,
};
use wcs_core::surfaces::balanced_clifford;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn depth_range(name: &str) -> (f64, f64) {
    let m = builtin_model(name, 2).unwrap();
    let top = if m.eps_max().is_finite() {
        0.95 * m.eps_max()
    } else {
        2.7
    };
    (0.1, top)
}

fn model_and_depth() -> impl Strategy<Value = (&'static str, usize, f64)> {
    (0..BUILTIN_MODELS.len(), 2usize..=12, 0.0f64..1.0).prop_map(|(k, n, x)| {
        let name = BUILTIN_MODELS[k];
        let (lo, hi) = depth_range(name);
        (name, n, lo + x * (hi - lo))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn eigenfunctions_are_weighted_orthonormal((name, n, eps) in model_and_depth()) {
        let model = builtin_model(name, n).unwrap();
        let p = SturmLiouvilleProblem::new(&model, eps, 3).unwrap();
        let fd = solve_fd(&p, 1024).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((fd.weighted_inner(&p, i, j) - target).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn rayleigh_quotients_bound_delta1((name, n, eps) in model_and_depth(), seed in any::<u64>()) {
        let model = builtin_model(name, n).unwrap();
        let p = SturmLiouvilleProblem::new(&model, eps, 1).unwrap();
        let delta1 = solve_shooting(&p, 1e-10).unwrap().first();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let g = random_test_function(&mut rng, eps);
            let rq = rayleigh_quotient_axial(&p, &g).unwrap();
            prop_assert!(rq >= delta1 - 1e-8, "{rq} < {delta1}");
        }
    }

    #[test]
    fn delta1_decreases_with_depth((name, n, eps) in model_and_depth(), frac in 0.05f64..0.9) {
        let model = builtin_model(name, n).unwrap();
        let shallow = eps * (1.0 - frac);
        let d = |e: f64| solve_shooting(&SturmLiouvilleProblem::new(&model, e, 1).unwrap(), 1e-10).unwrap().first();
        prop_assert!(d(shallow) > d(eps));
    }

    #[test]
    fn sum_is_monotone_in_depth(n in 2usize..=14, a in 0.2f64..1.5, b in 0.2f64..1.5) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-3);
        let model = builtin_model("sphere", n).unwrap();
        let surface = balanced_clifford(n).unwrap();
        let opts = VerdictOptions::default();
        let s_lo = verdict(&model, &surface, lo, &opts).unwrap().sum;
        let s_hi = verdict(&model, &surface, hi, &opts).unwrap().sum;
        prop_assert!(s_hi < s_lo);
    }
}
