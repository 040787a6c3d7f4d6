use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hobesov::besov::{besov_norm, duality_pairing, BesovParams, Exponent, LpEvaluator};
use hobesov::hermite::{HermiteBasis, SpectralCoefficients, TransformPlan};
use hobesov::paraproduct::{bony_decompose, ProductEngine};
use hobesov::semigroup::heat_apply;
use hobesov::spectral::{apply_h_power, lp_block, DyadicPartition};

fn random(dim: usize, n: usize, band: usize, seed: u64) -> SpectralCoefficients {
    let basis = HermiteBasis::new(dim, n).unwrap();
    SpectralCoefficients::random(basis, band, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::INF),
        (1.0f64..8.0).prop_map(|p| Exponent::new(p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partition_sums_to_one(u in 0.0f64..1.0, dim in 1usize..=2) {
        // the spectrum of sqrt(H) starts at sqrt(d)
        let floor = (dim as f64).sqrt();
        let l = floor + u * (2048.0 - floor);
        let p = DyadicPartition::new(dim, 1 << 20).unwrap();
        let sum: f64 = (p.j0()..=p.j_max() + 1).map(|j| p.phi(j, l)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {sum} at {l}");
    }

    #[test]
    fn blocks_recombine(seed in any::<u64>(), n in 4usize..64) {
        let f = random(1, n, n, seed);
        let p = DyadicPartition::for_basis(&f.basis());
        let mut total = SpectralCoefficients::zeros(f.basis());
        for j in p.j0() - 2..=p.j_max() + 2 {
            total += &lp_block(&p, j, &f);
        }
        prop_assert!((&total - &f).norm() <= 1e-13 * f.norm());
    }

    #[test]
    fn transform_round_trip(seed in any::<u64>(), n in 1usize..48) {
        let f = random(1, n, n, seed);
        let eval = LpEvaluator::new(1.0 / 16.0, 6.0).unwrap();
        let plan = TransformPlan::new(f.basis(), eval.grid_for(&f.basis()).unwrap()).unwrap();
        let back = plan.analyze(&plan.synthesize(&f).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&f) < 1e-11);
    }

    #[test]
    fn besov_norm_is_monotone_in_q(seed in any::<u64>(), s in -1.0f64..2.0, p in exponent()) {
        let f = random(1, 40, 40, seed);
        let part = DyadicPartition::for_basis(&f.basis());
        let eval = LpEvaluator::new(1.0 / 16.0, 6.0).unwrap();
        let (one, profile, _) = besov_norm(&f, &part, &BesovParams::new(s, p, Exponent::ONE), &eval).unwrap();
        let two = profile.with_q(Exponent::TWO);
        let three = profile.with_q(Exponent::new(3.0).unwrap());
        let inf = profile.with_q(Exponent::INF);
        prop_assert!(inf <= three && three <= two && two <= one, "{one} {two} {three} {inf}");
    }

    #[test]
    fn besov_norm_is_homogeneous(seed in any::<u64>(), lambda in 0.01f64..100.0, p in exponent(), q in exponent()) {
        let f = random(1, 24, 24, seed);
        let part = DyadicPartition::for_basis(&f.basis());
        let eval = LpEvaluator::new(1.0 / 16.0, 6.0).unwrap();
        let params = BesovParams::new(0.5, p, q);
        let (a, _, _) = besov_norm(&f, &part, &params, &eval).unwrap();
        let (b, _, _) = besov_norm(&f.scale(Complex64::new(0.0, lambda)), &part, &params, &eval).unwrap();
        prop_assert!((b - lambda * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn pairing_equals_inner_product(a in any::<u64>(), b in any::<u64>(), dim in 1usize..=2) {
        let n = if dim == 1 { 64 } else { 12 };
        let (f, g) = (random(dim, n, n, a), random(dim, n, n, b));
        let part = DyadicPartition::for_basis(&f.basis());
        let z = duality_pairing(&f, &g, &part).unwrap();
        prop_assert!((z - f.inner(&g)).norm() <= 1e-12 * f.norm() * g.norm());
    }

    #[test]
    fn heat_flow_is_a_contracting_semigroup(seed in any::<u64>(), t in 0.0f64..2.0, s in 0.0f64..2.0) {
        let f = random(1, 32, 32, seed);
        let two = heat_apply(t, &heat_apply(s, &f).unwrap()).unwrap();
        let one = heat_apply(t + s, &f).unwrap();
        prop_assert!((&two - &one).norm() <= 1e-13 * f.norm());
        prop_assert!(one.norm() <= (-(s + t)).exp() * f.norm() * (1.0 + 1e-14));
    }

    #[test]
    fn oscillator_powers_compose(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let f = random(2, 8, 8, seed);
        let ab = apply_h_power(a, &apply_h_power(b, &f));
        let direct = apply_h_power(a + b, &f);
        prop_assert!((&ab - &direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn exponent_text_round_trips(p in exponent()) {
        let back: Exponent = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bony_pieces_recombine(a in any::<u64>(), b in any::<u64>(), n0 in 1i32..=3) {
        let (f, g) = (random(1, 24, 24, a), random(1, 24, 24, b));
        let part = DyadicPartition::for_basis(&f.basis());
        let engine = ProductEngine::new(1.0 / 16.0, 6.0).unwrap();
        let product = engine.product(&f, &g).unwrap();
        let sum = bony_decompose(&f, &g, &part, n0, &engine).unwrap().sum();
        prop_assert!((&sum - &product.coeffs).norm() <= 1e-8 * product.coeffs.norm());
    }
}
