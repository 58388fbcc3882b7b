use std::f64::consts::PI;

use semiop::harness::*;
use semiop::structured::{cross_permutation, lcirc};
use semiop::{Error, Matrix, SemiContext, C};

fn json(r: &CheckReport) -> String {
    serde_json::to_string(r).unwrap()
}

#[test]
fn serial_and_parallel_runs_agree() {
    for id in ["lemma1.1-iv", "thm2.1-odd-odd", "cor3.4-odd", "sharp-product"] {
        let base = RunOptions {
            trials: 24,
            seed: 99,
            ..RunOptions::default()
        };
        let serial = run_check_id(id, &RunOptions { threads: Some(0), ..base.clone() }).unwrap();
        let parallel = run_check_id(id, &RunOptions { threads: Some(3), ..base.clone() }).unwrap();
        let again = run_check_id(id, &RunOptions { threads: Some(0), ..base }).unwrap();
        assert_eq!(json(&serial), json(&parallel), "{id}");
        assert_eq!(json(&serial), json(&again), "{id}");
    }
}

#[test]
fn different_seeds_draw_different_instances() {
    let a = run_check_id("lemma1.5-even", &RunOptions { trials: 5, seed: 1, ..RunOptions::default() }).unwrap();
    let b = run_check_id("lemma1.5-even", &RunOptions { trials: 5, seed: 2, ..RunOptions::default() }).unwrap();
    assert_ne!(a.max_violation, b.max_violation);
}

#[test]
fn unknown_and_ill_posed_requests() {
    let opts = RunOptions { trials: 1, ..RunOptions::default() };
    assert_eq!(run_check_id("thm9.9", &opts).unwrap_err(), Error::UnknownCheck("thm9.9".into()));
    let bad_blocks = RunOptions { blocks: Some(3), ..opts.clone() };
    assert!(matches!(run_check_id("thm2.1-even", &bad_blocks), Err(Error::HypothesisViolation { .. })));
    let bad_dim = RunOptions { dim: Some(2), ..opts.clone() };
    assert!(matches!(run_check_id("thm2.5-odd-gap", &bad_dim), Err(Error::HypothesisViolation { .. })));
    let big_dim = RunOptions { dim: Some(5), ..opts };
    assert!(run_check_id("lemma1.4", &big_dim).unwrap().pass);
}

#[test]
fn forced_parameters_skip_incompatible_checks() {
    let opts = RunOptions {
        trials: 2,
        blocks: Some(4),
        dim: Some(1),
        rank: Some(RankMode::Deficient),
        ..RunOptions::default()
    };
    let (reports, skipped) = run_all(&opts);
    assert!(reports.iter().all(|r| r.pass));
    assert!(skipped.contains(&"thm2.1-odd-odd".to_string()));
    assert!(skipped.contains(&"eq1.1".to_string()));
    assert!(reports.iter().any(|r| r.id == "prop4.3"));
    assert_eq!(reports.len() + skipped.len(), catalog().len());
    // catalog order is kept
    let order: Vec<_> = catalog().iter().map(|c| c.id).filter(|id| !skipped.iter().any(|s| s == id)).collect();
    assert_eq!(order, reports.iter().map(|r| r.id.as_str()).collect::<Vec<_>>());
}

#[test]
fn zero_trials_is_a_vacuous_pass() {
    let r = run_check_id("rem3.4", &RunOptions { trials: 0, ..RunOptions::default() }).unwrap();
    assert!(r.pass && r.failures.is_empty());
    assert_eq!(r.max_violation, 0.0);
}

#[test]
fn printed_pairs_small_orders() {
    use CrossPair::*;
    assert_eq!(printed_cross_pairs(4), vec![Pair(3, 2), Pair(1, 4)]);
    assert_eq!(printed_cross_pairs(3), vec![Centre(2), Pair(1, 3)]);
    assert_eq!(printed_cross_pairs(5), vec![Pair(4, 2), Centre(3), Pair(1, 5)]);
    assert_eq!(cross_permutation(7), vec![6, 2, 4, 3, 5, 1, 7]);
}

/// Blocks with prescribed `D_j = sum_i omega^{j(1-i)} T_i`.
fn from_dft_sums(ds: &[Matrix<f64>]) -> Vec<Matrix<f64>> {
    let n = ds.len();
    (0..n)
        .map(|i| {
            let mut acc = Matrix::zeros(ds[0].rows(), ds[0].rows());
            for (j, dj) in ds.iter().enumerate() {
                acc += &dj.scale(C::from_polar(1.0 / n as f64, 2.0 * PI * (i * j) as f64 / n as f64));
            }
            acc
        })
        .collect()
}

#[test]
fn printed_left_circulant_corollary_fails_on_nilpotent_pair() {
    // D_0 = 0, D_1 = X, D_2 = X* with X = e1 e2*: the printed bound
    // w(D_0) + max w(D_j) is 1/2 but the radius is 1
    let ctx = SemiContext::<f64>::identity(2);
    let x = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let ts = from_dft_sums(&[Matrix::zeros(2, 2), x.clone(), x.adjoint()]);
    let w = lcirc(&ts).unwrap().a_numerical_radius(&ctx).unwrap();
    let printed = 0.0 + ctx.w(&x).unwrap().max(ctx.w(&x.adjoint()).unwrap());
    assert!((w - 1.0).abs() < 1e-9);
    assert!((printed - 0.5).abs() < 1e-9);
    // the pair form (||D_j|| + ||D_{n-j}||) / 2 covers it
    assert!(w <= (1.0 + 1.0) / 2.0 + 1e-9);
}

#[test]
fn even_order_formula_needs_four_blocks() {
    // at n = 2 there are no S cells, yet the closed form still involves S
    let (r, t, s) = (1.0, 0.0, 5.0);
    let ctx = SemiContext::<f64>::identity(2);
    let m = Matrix::from_real_rows(&[&[r, t], &[t, r]]);
    let w = ctx.w(&m).unwrap();
    let formula = (r + t).abs().max((r + t - 2.0 * s).abs()).max((r - t).abs());
    assert!((w - 1.0).abs() < 1e-9);
    assert!((formula - 9.0).abs() < 1e-12);
}
