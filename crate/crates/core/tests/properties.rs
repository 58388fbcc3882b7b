use proptest::prelude::*;

use semiop::harness::gen::{gaussian_matrix, random_admissible, random_psd, random_unitary, rng_from_seed};
use semiop::io::{parse_matrix, MatrixFile};
use semiop::linalg::numerical_radius;
use semiop::{Matrix, SemiContext, C};

fn weight() -> impl Strategy<Value = (SemiContext<f64>, u64)> {
    (1usize..=4, 0usize..=4, any::<u64>()).prop_map(|(d, r, seed)| {
        let ctx = SemiContext::new(random_psd(d, r.min(d), seed).unwrap()).unwrap();
        (ctx, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radius_is_a_seminorm((ctx, seed) in weight(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let t = random_admissible(&ctx, seed ^ 1);
        let s = random_admissible(&ctx, seed ^ 2);
        let a = C::new(re, im);
        let w = ctx.w(&t).unwrap();
        let scaled = ctx.w(&t.scale(a)).unwrap();
        prop_assert!((scaled - a.norm() * w).abs() <= 1e-8 * (1.0 + scaled));
        prop_assert!(ctx.w(&(&t + &s)).unwrap() <= w + ctx.w(&s).unwrap() + 1e-9);
    }

    #[test]
    fn radius_sits_between_half_norm_and_norm((ctx, seed) in weight()) {
        let t = random_admissible(&ctx, seed);
        let w = ctx.w(&t).unwrap();
        let n = ctx.a_seminorm(&t).unwrap();
        prop_assert!(n / 2.0 <= w + 1e-9 && w <= n + 1e-9);
        let sharp = ctx.a_adjoint(&t).unwrap();
        prop_assert!((ctx.w(&sharp).unwrap() - w).abs() <= 1e-8 * w.max(1.0));
    }

    #[test]
    fn classical_radius_is_unitarily_invariant(d in 1usize..=6, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let m = gaussian_matrix::<f64>(d, d, &mut rng);
        let u = random_unitary::<f64>(d, &mut rng);
        let w = numerical_radius(&m, 1e-12).unwrap().value;
        let wc = numerical_radius(&(&(&u.adjoint() * &m) * &u), 1e-12).unwrap().value;
        prop_assert!((w - wc).abs() <= 1e-9 * w.max(1.0));
    }

    #[test]
    fn matrix_files_round_trip(rows in 1usize..4, cols in 1usize..4, bits in prop::collection::vec(any::<(f64, f64)>(), 16)) {
        let finite = |x: f64| if x.is_finite() { x } else { 0.0 };
        let m = Matrix::from_fn(rows, cols, |i, j| {
            let (re, im) = bits[i * cols + j];
            C::new(finite(re), finite(im))
        });
        let back = parse_matrix(&serde_json::to_string(&MatrixFile::from_matrix(&m)).unwrap()).unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
