use ccrflow::classify::{decide_cocycle_conjugacy, Rank, SpectrumEntry, SymbolSpec};
use ccrflow::linalg::{ComplexMatrix, HermitianOperator};
use ccrflow::par::Execution;
use ccrflow::symplectic::{assemble, brb_probe, decompose_symplectic, is_symplectic, symplectic_equivalence};
use ccrflow::{sample, ToleranceConfig};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn planted_decomposition_reassembles(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z1: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(1.0..4.0) }).collect();
        let z = assemble(&sample::unitary(&mut rng, n), &z1, &sample::unitary(&mut rng, n));
        let dec = decompose_symplectic(&z, &tol()).unwrap();
        prop_assert!((dec.reassemble().real_form() - z.real_form()).norm_max() <= 1e-8);
        prop_assert!(dec.z1.iter().all(|&x| x >= 1.0 - 1e-9));
    }

    #[test]
    fn accepted_operators_are_closed_under_products_and_inverses(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            let z1: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..2.5)).collect();
            assemble(&sample::unitary(&mut rng, n), &z1, &sample::unitary(&mut rng, n))
        };
        let (a, b) = (draw(), draw());
        prop_assert!(is_symplectic(&a).symplectic && is_symplectic(&b).symplectic);
        prop_assert!(is_symplectic(&a.compose(&b)).symplectic);
        prop_assert!(is_symplectic(&a.inverse().unwrap()).symplectic);
    }

    #[test]
    fn equivalence_agrees_with_conjugacy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = [1.5, 3.0, 5.0, 5.0 / 3.0];
        let n = rng.gen_range(1..=4);
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| *pool.choose(rng).unwrap()).collect() };
        let a = draw(&mut rng);
        let mut b = if rng.gen_bool(0.5) { a.clone() } else { draw(&mut rng) };
        b.shuffle(&mut rng);
        let spec = |v: &[f64]| SymbolSpec {
            name: "s".into(),
            rank: Rank::Finite(v.len()),
            spectrum: v.iter().map(|&r| SpectrumEntry { r, mult: 1 }).collect(),
            continuous_spectrum: false,
        };
        let rotate = |rng: &mut ChaCha8Rng, v: &[f64]| {
            let u = sample::unitary(rng, v.len());
            let m = u.matmul(&ComplexMatrix::from_real_diag(v)).matmul(&u.adjoint());
            HermitianOperator::new(m, &tol().scaled(1e3)).unwrap()
        };
        let (ra, rb) = (rotate(&mut rng, &a), rotate(&mut rng, &b));
        let sym = symplectic_equivalence(&ra, &rb, &tol()).unwrap().equivalent;
        let conj = decide_cocycle_conjugacy(&spec(&a), &spec(&b), &tol()).unwrap().conjugate;
        prop_assert_eq!(sym, conj);
    }
}

#[test]
fn brb_probe_never_finds_a_nontrivial_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let r = sample::positive(&mut rng, n, 1.0, 3.0);
        let rep = brb_probe(&r, 4, rng.gen(), Execution::default()).unwrap();
        for trial in &rep.trials {
            assert!(!(trial.residual <= 1e-9 && trial.distance_to_identity > 1e-5), "{trial:?}");
        }
        assert!(rep.contract_holds());
        assert!(rep.min_residual <= 1e-9, "no run converged: {:?}", rep.trials);
    }
}
