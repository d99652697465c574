use ccrflow::ccr::{
    flow_shift, gauge_cocycle_check, gram_matrix, quasifree_eval, reduce_word, weyl_product, Lattice,
    QuasiFreeSymbol, ReducedWeyl, TestFunction, WeylWord,
};
use ccrflow::linalg::inner;
use ccrflow::{sample, Complex64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_fn(rng: &mut ChaCha8Rng, lat: Lattice, radius: f64) -> TestFunction {
    TestFunction::new(lat, sample::vector_in_ball(rng, lat.dim(), radius)).unwrap()
}

fn symbol(rng: &mut ChaCha8Rng, lat: Lattice) -> QuasiFreeSymbol {
    QuasiFreeSymbol::new(lat, sample::positive(rng, lat.dim(), 1.0, 3.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weyl_exchange_phase(seed in any::<u64>(), cells in 1usize..=6, mult in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Lattice::new(cells, mult);
        let u = random_fn(&mut rng, lat, 3.0);
        let v = random_fn(&mut rng, lat, 3.0);
        let uv = weyl_product(&u, &v).unwrap();
        let vu = reduce_word(&WeylWord::new(lat, Complex64::new(1.0, 0.0), vec![v.clone(), u.clone()]).unwrap()).unwrap();
        let phase = Complex64::from_polar(1.0, -2.0 * inner(u.coefficients(), v.coefficients()).im);
        let expected = ReducedWeyl { phase: vu.phase * phase, vector: vu.vector.clone() };
        prop_assert!(uv.distance(&expected).unwrap() <= 1e-12);
    }

    #[test]
    fn states_are_bounded_and_hermitian_on_generators(seed in any::<u64>(), cells in 1usize..=5, mult in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Lattice::new(cells, mult);
        let sym = symbol(&mut rng, lat);
        let f = random_fn(&mut rng, lat, 2.0);
        let plus = quasifree_eval(&sym, &ReducedWeyl::generator(f.clone())).unwrap();
        let minus = quasifree_eval(&sym, &ReducedWeyl::generator(f.scale(Complex64::new(-1.0, 0.0)))).unwrap();
        prop_assert!(plus.norm() <= 1.0 + 1e-15);
        prop_assert!((minus - plus.conj()).norm() <= 1e-15);
    }

    #[test]
    fn gram_matrices_are_positive(seed in any::<u64>(), cells in 1usize..=8, mult in 1usize..=2, k in 1usize..=8) {
        prop_assume!(cells * mult <= 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Lattice::new(cells, mult);
        let sym = symbol(&mut rng, lat);
        let fs: Vec<TestFunction> = (0..k).map(|_| random_fn(&mut rng, lat, 2.0)).collect();
        prop_assert!(gram_matrix(&sym, &fs).unwrap().min_eigenvalue().unwrap() >= -1e-9);
    }

    #[test]
    fn flow_is_a_semigroup(seed in any::<u64>(), cells in 1usize..=12, s in 0usize..=12, t in 0usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Lattice::new(cells, 2);
        let f = random_fn(&mut rng, lat, 2.0);
        let twice = flow_shift(&flow_shift(&f, s).function, t).function;
        prop_assert_eq!(twice, flow_shift(&f, s + t).function);
    }

    #[test]
    fn gauge_cocycle_identity(seed in any::<u64>(), cells in 1usize..=16, mult in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = Lattice::new(cells, mult);
        let s = rng.gen_range(0..=cells);
        let t = rng.gen_range(0..=cells - s);
        let lambda = rng.gen_range(-5.0..5.0);
        let xi = sample::vector_in_ball(&mut rng, mult, 2.0);
        prop_assert!(gauge_cocycle_check(lat, lambda, &xi, s, t).unwrap().residual <= 1e-12);
    }
}
