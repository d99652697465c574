//! Verification suites: seeded random sweeps of each module's invariants.
//!
//! Every case draws from its own ChaCha stream, keyed by the seed, the check
//! name and the case index, so results do not depend on the execution
//! strategy or on which other checks ran.

use std::time::{Duration, Instant};

use ccrflow::boson::{BosonFockSpace, Ladder};
use ccrflow::ccr::{
    quasifree_eval, reduce_word, weyl_product, gram_matrix, Lattice, QuasiFreeSymbol, ReducedWeyl, TestFunction,
    WeylWord,
};
use ccrflow::classify::{
    build_example_symbol, classify_type, decide_cocycle_conjugacy, FactorType, Rank, SpectrumEntry, SymbolSpec,
};
use ccrflow::fermion::{clifford_flow_step, quasifree_car_eval, quasifree_car_oracle, CARSymbol, FermionFockSpace};
use ccrflow::gns::{
    block_toeplitz, canonical_unit_criterion, gns_weyl_vector, modular_check, symbol_split,
    toeplitz_isometric_extension, ExpVectorSymbolic,
};
use ccrflow::linalg::{inner, norm, spectrum_product, ComplexMatrix, HermitianOperator};
use ccrflow::par::{self, Execution};
use ccrflow::symplectic::{assemble, brb_probe, decompose_symplectic, symplectic_equivalence, xyz_check, RealLinearOperator};
use ccrflow::vna::{bicommutant, distributivity_check, span_distance, word_closure, MatrixAlgebra};
use ccrflow::{sample, Complex64, ToleranceConfig};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CliError;

pub const SUITES: [&str; 10] = ["weyl", "gram", "fock", "car", "modular", "toeplitz", "classify", "symplectic", "brb", "vna"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub cases: usize,
    /// Worst observed value of the checked quantity.
    pub residual: f64,
    pub comparison: Comparison,
    pub bound: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl SuiteResult {
    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == name)
    }
}

/// Seed, tolerance scale and execution strategy shared by all checks.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tol_scale: f64,
    pub exec: Execution,
}

impl SuiteConfig {
    fn bound(&self, b: f64) -> f64 {
        b * self.tol_scale
    }

    fn tol(&self) -> ToleranceConfig {
        ToleranceConfig::default().scaled(self.tol_scale)
    }
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn case_rng(seed: u64, tag: &str, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(tag));
    rng.set_stream(case as u64);
    rng
}

/// Runs `cases` independent cases and folds them into the worst value and the first error.
fn sweep<F>(cfg: &SuiteConfig, tag: &str, cases: usize, f: F) -> (f64, Option<String>)
where
    F: Fn(&mut ChaCha8Rng) -> ccrflow::Result<f64> + Sync + Send,
{
    let results = par::map_range(cfg.exec, cases, |k| f(&mut case_rng(cfg.seed, tag, k)));
    let mut worst: f64 = 0.0;
    let mut error = None;
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) if v.is_nan() => worst = f64::NAN,
            Ok(v) => worst = worst.max(v),
            Err(e) if error.is_none() => error = Some(format!("case {k}: {e}")),
            Err(_) => {}
        }
    }
    (worst, error)
}

fn at_most(check: &str, cases: usize, bound: f64, (residual, error): (f64, Option<String>)) -> CheckOutcome {
    let passed = error.is_none() && residual <= bound;
    CheckOutcome {
        check: check.into(),
        cases,
        residual,
        comparison: Comparison::AtMost,
        bound,
        passed,
        detail: error.unwrap_or_default(),
    }
}

fn at_least(check: &str, cases: usize, bound: f64, value: ccrflow::Result<f64>) -> CheckOutcome {
    let (residual, detail) = match value {
        Ok(v) => (v, String::new()),
        Err(e) => (f64::NAN, e.to_string()),
    };
    CheckOutcome {
        check: check.into(),
        cases,
        residual,
        comparison: Comparison::AtLeast,
        bound,
        passed: residual >= bound,
        detail,
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteResult, CliError> {
    let start = Instant::now();
    let checks = match name {
        "weyl" => weyl(cfg),
        "gram" => gram(cfg),
        "fock" => fock(cfg),
        "car" => car(cfg),
        "modular" => modular(cfg),
        "toeplitz" => toeplitz(cfg),
        "classify" => classification(cfg),
        "symplectic" => symplectic(cfg),
        "brb" => brb(cfg),
        "vna" => vna(cfg),
        other => return Err(CliError::UnknownSuite(other.into())),
    };
    Ok(SuiteResult {
        suite: name.into(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        runtime: start.elapsed(),
    })
}

/// `all` expands to every suite in the fixed order of [`SUITES`].
pub fn run_suites(filter: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteResult>, CliError> {
    if filter == "all" {
        SUITES.iter().map(|s| run_suite(s, cfg)).collect()
    } else {
        Ok(vec![run_suite(filter, cfg)?])
    }
}

fn random_lattice(rng: &mut ChaCha8Rng, max_dim: usize) -> Lattice {
    let mult = rng.gen_range(1..=4.min(max_dim));
    let cells = rng.gen_range(1..=max_dim / mult);
    Lattice::new(cells, mult)
}

fn random_fn(rng: &mut ChaCha8Rng, lat: Lattice, radius: f64) -> TestFunction {
    TestFunction::new(lat, sample::vector_in_ball(rng, lat.dim(), radius)).expect("coefficients match the lattice")
}

fn weyl(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let relation = sweep(cfg, "weyl/relation", 1000, |rng| {
        let lat = random_lattice(rng, 32);
        let u = random_fn(rng, lat, 3.0);
        let v = random_fn(rng, lat, 3.0);
        let im: f64 = u.coefficients().iter().zip(v.coefficients()).map(|(a, b)| a.re * b.im - a.im * b.re).sum();
        let sum = TestFunction::new(lat, u.coefficients().iter().zip(v.coefficients()).map(|(a, b)| a + b).collect())?;
        let expected = ReducedWeyl { phase: Complex64::from_polar(1.0, -im), vector: sum };
        let direct = weyl_product(&u, &v)?.distance(&expected)?;
        let swapped = reduce_word(&WeylWord::new(lat, Complex64::new(1.0, 0.0), vec![v.clone(), u.clone()])?)?;
        let exchanged = ReducedWeyl { phase: swapped.phase * Complex64::from_polar(1.0, -2.0 * im), vector: swapped.vector };
        Ok(direct.max(weyl_product(&u, &v)?.distance(&exchanged)?))
    });
    let assoc = sweep(cfg, "weyl/associativity", 1000, |rng| {
        let lat = random_lattice(rng, 32);
        let g: Vec<ReducedWeyl> = (0..3).map(|_| ReducedWeyl::generator(random_fn(rng, lat, 3.0))).collect();
        let left = g[0].mul(&g[1])?.mul(&g[2])?;
        let right = g[0].mul(&g[1].mul(&g[2])?)?;
        let word = WeylWord::new(lat, Complex64::new(1.0, 0.0), g.iter().map(|x| x.vector.clone()).collect())?;
        Ok(left.distance(&right)?.max(left.distance(&reduce_word(&word)?)?))
    });
    vec![
        at_most("relation", 1000, cfg.bound(1e-12), relation),
        at_most("associativity", 1000, cfg.bound(1e-12), assoc),
    ]
}

fn gram(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let positivity = sweep(cfg, "gram/positivity", 100, |rng| {
        let lat = random_lattice(rng, 16);
        let spread = rng.gen_range(0.1..4.0);
        let sym = QuasiFreeSymbol::new(lat, sample::positive(rng, lat.dim(), 1.0, spread))?;
        let k = rng.gen_range(1..=8);
        let fs: Vec<TestFunction> = (0..k).map(|_| random_fn(rng, lat, 2.0)).collect();
        Ok((-gram_matrix(&sym, &fs)?.min_eigenvalue()?).max(0.0))
    });
    vec![at_most("positivity", 100, cfg.bound(1e-9), positivity)]
}

fn series_exp(z: Complex64, terms: usize) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=terms {
        term = term * z / k as f64;
        sum += term;
    }
    sum
}

fn fock(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let spaces: Vec<BosonFockSpace> = (1..=3).map(|m| BosonFockSpace::new(m, 20).expect("small space")).collect();
    let exp_inner = sweep(cfg, "fock/exp_inner", 30, |rng| {
        let space = spaces.choose(rng).expect("nonempty");
        let u = sample::vector_in_ball(rng, space.modes(), 1.0);
        let v = sample::vector_in_ball(rng, space.modes(), 1.0);
        let z: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        let oracle = series_exp(z, 20);
        let got = space.exp_vector(&u)?.inner(&space.exp_vector(&v)?);
        Ok((got - oracle).norm() / oracle.norm())
    });

    let big = BosonFockSpace::new(2, 25).expect("small space");
    let weyl_action = sweep(cfg, "fock/weyl_action", 8, |rng| {
        let u = sample::vector_in_ball(rng, 2, 0.5);
        let v = sample::vector_in_ball(rng, 2, 0.5);
        let w = big.weyl_matrix(&u, 1e-6)?;
        let lhs = big.exp_vector(&v)?.map_matrix(&w.matrix);
        let uv: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let rhs = big.exp_vector(&uv)?.scale((-0.5 * norm(&u).powi(2) - inner(&u, &v)).exp());
        Ok(lhs.distance_on(&rhs, &big.sector(big.sub_cutoff_level(norm(&u), norm(&v)))))
    });

    let small = BosonFockSpace::new(3, 6).expect("small space");
    let unitary = sweep(cfg, "fock/second_quantization", 10, |rng| {
        let antilinear = rng.gen_bool(0.5);
        Ok(small.second_quantize(&sample::unitary(rng, 3), antilinear)?.matrix.unitarity_defect())
    });
    vec![
        at_most("exp_inner", 30, cfg.bound(1e-8), exp_inner),
        at_most("weyl_action", 8, cfg.bound(1e-6), weyl_action),
        at_most("second_quantization_unitary", 10, cfg.bound(1e-10), unitary),
    ]
}

fn car(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    // every case covers all mode counts up to 8, i.e. matrices up to 256 × 256
    let relations = sweep(cfg, "car/relations", 8, |rng| {
        let mut worst: f64 = 0.0;
        for d in 1..=8 {
            let space = FermionFockSpace::new(d)?;
            let (nx, ny) = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
            let x = sample::vector(rng, d, nx);
            let y = sample::vector(rng, d, ny);
            let ax = space.ladder(&x, Ladder::Annihilate)?;
            let ay = space.ladder(&y, Ladder::Annihilate)?;
            let cy = space.ladder(&y, Ladder::Create)?;
            let target = ComplexMatrix::identity(space.dim()).scale(inner(&x, &y));
            worst = worst.max((&ax.anticommutator(&cy) - &target).norm_max()).max(ax.anticommutator(&ay).norm_max());
        }
        Ok(worst)
    });
    let clifford = FermionFockSpace::new(4).expect("four modes");
    let trace = sweep(cfg, "car/clifford_trace", 30, |rng| {
        let k = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=4);
        let fs: Vec<Vec<Complex64>> = (0..k).map(|_| sample::real_vector(rng, 4)).collect();
        let gs: Vec<Vec<Complex64>> = (0..m).map(|_| sample::real_vector(rng, 4)).collect();
        let x = clifford.clifford_word(&fs)?;
        let y = clifford.clifford_word(&gs)?;
        Ok((clifford.vacuum_expectation(&x.matmul(&y))? - clifford.vacuum_expectation(&y.matmul(&x))?).norm())
    });
    let lat = Lattice::new(6, 1);
    let flow_space = FermionFockSpace::new(lat.dim()).expect("six modes");
    let flow = sweep(cfg, "car/clifford_flow", 30, |rng| {
        let support = rng.gen_range(1..=3);
        let t = rng.gen_range(0..=lat.cells - support);
        let k = rng.gen_range(1..=4);
        let fs: Vec<TestFunction> = (0..k)
            .map(|_| {
                let mut c = sample::real_vector(rng, support);
                c.resize(lat.dim(), Complex64::new(0.0, 0.0));
                TestFunction::new(lat, c)
            })
            .collect::<ccrflow::Result<_>>()?;
        let shifted = clifford_flow_step(&fs, t)?;
        let word = |g: &[TestFunction]| {
            let vs: Vec<Vec<Complex64>> = g.iter().map(|f| f.coefficients().to_vec()).collect();
            flow_space.clifford_word(&vs)
        };
        Ok((flow_space.vacuum_expectation(&word(&shifted)?)? - flow_space.vacuum_expectation(&word(&fs)?)?).norm())
    });
    let determinant = sweep(cfg, "car/determinant", 60, |rng| {
        let d = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=3);
        let space = FermionFockSpace::new(d)?;
        let nu: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let sym = CARSymbol::new(HermitianOperator::from_real_diag(&nu))?;
        let xs: Vec<Vec<Complex64>> = (0..n).map(|_| sample::vector(rng, d, 1.0)).collect();
        let ys: Vec<Vec<Complex64>> = (0..n).map(|_| sample::vector(rng, d, 1.0)).collect();
        let det = quasifree_car_eval(&sym, &xs, &ys)?;
        Ok((det - quasifree_car_oracle(&sym, &space.car_word(&xs, &ys)?)?).norm())
    });
    vec![
        at_most("car_relations", 8, cfg.bound(1e-12), relations),
        at_most("clifford_trace", 30, cfg.bound(1e-12), trace),
        at_most("clifford_flow_trace", 30, cfg.bound(1e-12), flow),
        at_most("determinant_formula", 60, cfg.bound(1e-10), determinant),
    ]
}

fn modular(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol();
    let identity = sweep(cfg, "modular/identity", 200, |rng| {
        let n = rng.gen_range(1..=6);
        let spread = rng.gen_range(0.1..4.0);
        let dec = symbol_split(&sample::positive(rng, n, 1.05, spread), &tol)?;
        let f = sample::vector_in_ball(rng, n, 1.5);
        Ok(modular_check(&dec, &f)?.residual)
    });
    let two_path = sweep(cfg, "modular/two_path", 100, |rng| {
        let lat = random_lattice(rng, 6);
        let a = sample::positive(rng, lat.dim(), 1.0, 3.0);
        let f = sample::vector_in_ball(rng, lat.dim(), 2.0);
        let dec = symbol_split(&a, &tol)?;
        let via_gns = ExpVectorSymbolic::vacuum(lat.dim()).inner(&gns_weyl_vector(&dec, &f)?)?;
        let sym = QuasiFreeSymbol::new(lat, a)?;
        let via_ccr = quasifree_eval(&sym, &ReducedWeyl::generator(TestFunction::new(lat, f)?))?;
        Ok((via_gns - via_ccr).norm())
    });
    vec![
        at_most("modular_identity", 200, cfg.bound(1e-10), identity),
        at_most("vacuum_two_path", 100, cfg.bound(1e-10), two_path),
    ]
}

/// Positive definite block-Toeplitz symbol by diagonal dominance.
fn random_toeplitz(rng: &mut ChaCha8Rng, lattice: Lattice, bands: usize) -> ccrflow::Result<HermitianOperator> {
    let n = lattice.multiplicity;
    let off: Vec<ComplexMatrix> = (0..bands)
        .map(|_| {
            let size = rng.gen_range(0.1..0.6);
            sample::matrix_with_norm(rng, n, size)
        })
        .collect();
    let weight: f64 = off.iter().map(|c| 2.0 * c.norm_fro()).sum();
    let c0 = &ComplexMatrix::identity(n).scale_real(1.0 + weight) + sample::hermitian(rng, n, 0.2).matrix();
    let mut blocks = vec![c0];
    blocks.extend(off);
    block_toeplitz(lattice, &blocks)
}

fn toeplitz(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol();
    let product = sweep(cfg, "toeplitz/product", 6, |rng| {
        let mult = rng.gen_range(1..=3);
        let cells = 24 / mult;
        let r = sample::positive(rng, mult, 1.2, 3.0);
        let sym = QuasiFreeSymbol::product(cells, &r)?;
        let t = rng.gen_range(1..=2);
        let rep = canonical_unit_criterion(sym.operator(), sym.lattice(), t, 6, &tol)?;
        Ok(if rep.consistent() { rep.residual } else { f64::INFINITY })
    });
    let scalar = Lattice::new(24, 1);
    let counterexample = block_toeplitz(scalar, &[ComplexMatrix::from_real_diag(&[2.5]), ComplexMatrix::from_real_diag(&[0.5])])
        .and_then(|a| canonical_unit_criterion(&a, scalar, 1, 6, &tol))
        .map(|rep| rep.residual);
    // the truncation error decays geometrically away from the right edge, at a
    // rate per cell that shrinks with the bandwidth
    let isometry = sweep(cfg, "toeplitz/isometry", 12, |rng| {
        let bands = rng.gen_range(1..=3);
        let margin = 8 * bands;
        let mult = rng.gen_range(1..=3);
        let choices: Vec<usize> = [16, 24, 32, 48, 64].into_iter().filter(|&m| m >= margin + 8 && m * mult <= 128).collect();
        let cells = *choices.choose(rng).expect("64 cells always fit");
        let lattice = Lattice::new(cells, mult);
        let x = random_toeplitz(rng, lattice, bands)?;
        let t = rng.gen_range(1..=2);
        Ok(toeplitz_isometric_extension(&x, lattice, t, margin, &tol)?.isometry_deviation)
    });
    vec![
        at_most("canonical_unit_product", 6, cfg.bound(1e-9), product),
        at_least("canonical_unit_counterexample", 1, 1e-3, counterexample),
        at_most("isometric_extension", 12, cfg.bound(1e-8), isometry),
    ]
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn spec_of(name: &str, values: &[(f64, usize)]) -> SymbolSpec {
    SymbolSpec {
        name: name.into(),
        rank: Rank::Finite(values.iter().map(|v| v.1).sum()),
        spectrum: values.iter().map(|&(r, mult)| SpectrumEntry { r, mult }).collect(),
        continuous_spectrum: false,
    }
}

/// `(1 + μ)/(1 − μ)` written out independently of the crate.
fn r_of(mu: f64) -> f64 {
    (1.0 + mu) / (1.0 - mu)
}

fn classification(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol();
    let tensor = sweep(cfg, "classify/tensor_spectrum", 24, |rng| {
        let n = rng.gen_range(1..=12);
        let m = rng.gen_range(1..=144 / n).min(12);
        let (sx, sy) = (rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
        let x = sample::hermitian(rng, n, sx);
        let y = sample::hermitian(rng, m, sy);
        let sp = spectrum_product(&x, &y)?;
        let k = &sp.kronecker.eigenvalues;
        Ok(k.iter().zip(&sp.pairwise).map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0)).fold(0.0, f64::max))
    });

    let family: Vec<(f64, Vec<u64>)> = [0.5, 0.25, 0.3, 0.7]
        .iter()
        .flat_map(|&l| {
            [vec![1], vec![2], vec![1, 2], vec![1, 3], vec![1, 2, 3], vec![2, 4], vec![3, 6, 9], vec![2, 3], vec![4, 6, 10]]
                .into_iter()
                .map(move |d| (l, d))
        })
        .collect();
    let lambda_family = sweep(cfg, "classify/lambda_family", family.len(), |rng| {
        let (lambda, ds) = family.choose(rng).expect("nonempty").clone();
        let g = ds.iter().copied().fold(0, gcd);
        let expected_lambda = lambda.powi(g as i32);
        let expected_d: Vec<u64> = ds.iter().map(|d| d / g).collect();
        let spec = spec_of("family", &ds.iter().map(|&d| (r_of(lambda.powi(d as i32)), 1)).collect::<Vec<_>>());
        let c = classify_type(&spec, &tol)?;
        let FactorType::TypeIIILambda { lambda: got } = c.factor_type else { return Ok(f64::INFINITY) };
        // classification lists exponents for distinct μ in descending order
        let mut want = expected_d.clone();
        want.sort_unstable();
        want.dedup();
        if c.exponents != Some(want) {
            return Ok(f64::INFINITY);
        }
        Ok((got - expected_lambda).abs() / expected_lambda)
    });

    let labelled = |name: &str, mismatches: usize, cases: usize, detail: String| CheckOutcome {
        check: name.into(),
        cases,
        residual: mismatches as f64,
        comparison: Comparison::AtMost,
        bound: 0.0,
        passed: mismatches == 0,
        detail,
    };
    let irrational = spec_of("irrational", &[(3.0, 1), (r_of(0.5f64.powf(2f64.sqrt())), 1)]);
    let irrational_ok = matches!(classify_type(&irrational, &tol), Ok(c) if c.factor_type == FactorType::TypeIII1);
    let trivial = spec_of("identity", &[(1.0, 2)]);
    let trivial_ok = matches!(classify_type(&trivial, &tol), Ok(c) if c.factor_type == FactorType::TypeI);
    let fixed = vec![
        labelled("irrational_ratio_is_iii_1", usize::from(!irrational_ok), 1, String::new()),
        labelled("unit_symbol_is_type_i", usize::from(!trivial_ok), 1, String::new()),
    ];

    let coupling = sweep(cfg, "classify/coupling_index", 100, |rng| {
        let pool = [1.0, 1.5, 3.0, 5.0 / 3.0, 7.0, 11.0];
        let k = rng.gen_range(1..=4);
        let values: Vec<(f64, usize)> = (0..k).map(|_| (*pool.choose(rng).expect("nonempty"), rng.gen_range(1..=3))).collect();
        let spec = spec_of("random", &values);
        let Rank::Finite(rank) = spec.rank else { unreachable!() };
        Ok(f64::from(u8::from(classify_type(&spec, &tol)?.coupling_index != Rank::Finite(2 * rank))))
    });

    let mut out = vec![
        at_most("tensor_spectrum", 24, cfg.bound(1e-8), tensor),
        at_most("lambda_family", family.len(), cfg.bound(1e-9), lambda_family),
    ];
    out.extend(fixed);
    out.push(at_most("coupling_index_is_twice_rank", 100, 0.0, coupling));
    out
}

fn symplectic(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol();
    let reassembly = sweep(cfg, "symplectic/decomposition", 100, |rng| {
        let n = rng.gen_range(1..=4);
        let z1: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(1.0..4.0) }).collect();
        let z = assemble(&sample::unitary(rng, n), &z1, &sample::unitary(rng, n));
        let dec = decompose_symplectic(&z, &tol)?;
        Ok((dec.reassemble().real_form() - z.real_form()).norm_max())
    });

    let xyz = sweep(cfg, "symplectic/xyz", 20, |rng| {
        let n = rng.gen_range(1..=4);
        let r2 = sample::positive(rng, n, 1.0, 3.0);
        let u = sample::unitary(rng, n);
        let r1 = HermitianOperator::new(u.adjoint().matmul(r2.matrix()).matmul(&u), &ToleranceConfig::default().scaled(1e4))?;
        let rep = xyz_check(&r1, &r2, &RealLinearOperator::from_linear(&u), &tol)?;
        Ok(rep.x_residual.max(rep.y_residual))
    });

    let pool = [1.5, 3.0, 5.0, 5.0 / 3.0, 9.0 / 7.0];
    let agreement = sweep(cfg, "symplectic/equivalence", 100, |rng| {
        let n = rng.gen_range(1..=4);
        let a: Vec<f64> = (0..n).map(|_| *pool.choose(rng).expect("nonempty")).collect();
        let mut b: Vec<f64> = if rng.gen_bool(0.5) { a.clone() } else { (0..n).map(|_| *pool.choose(rng).expect("nonempty")).collect() };
        b.shuffle(rng);
        let rotate = |rng: &mut ChaCha8Rng, v: &[f64]| {
            let u = sample::unitary(rng, v.len());
            HermitianOperator::new(
                u.matmul(&ComplexMatrix::from_real_diag(v)).matmul(&u.adjoint()),
                &ToleranceConfig::default().scaled(1e4),
            )
        };
        let (ra, rb) = (rotate(rng, &a)?, rotate(rng, &b)?);
        let ones = |v: &[f64]| v.iter().map(|&r| (r, 1)).collect::<Vec<_>>();
        let sym = symplectic_equivalence(&ra, &rb, &tol)?.equivalent;
        let conj = decide_cocycle_conjugacy(&spec_of("a", &ones(&a)), &spec_of("b", &ones(&b)), &tol)?.conjugate;
        Ok(f64::from(u8::from(sym != conj)))
    });

    let ranks = sweep(cfg, "symplectic/rank", 50, |rng| {
        let n = rng.gen_range(1..=4);
        let m = loop {
            let m = rng.gen_range(1..=4);
            if m != n {
                break m;
            }
        };
        let a: Vec<(f64, usize)> = (0..n).map(|_| (*pool.choose(rng).expect("nonempty"), 1)).collect();
        let b: Vec<(f64, usize)> = (0..m).map(|_| (*pool.choose(rng).expect("nonempty"), 1)).collect();
        Ok(f64::from(u8::from(decide_cocycle_conjugacy(&spec_of("a", &a), &spec_of("b", &b), &tol)?.conjugate)))
    });

    let half: Vec<SymbolSpec> = [&[1][..], &[1, 2], &[1, 3], &[1, 2, 3]]
        .iter()
        .map(|d| build_example_symbol(0.5, d).expect("valid family member"))
        .collect();
    let mut conjugate_pairs = 0;
    let mut distinct = 0;
    for i in 0..half.len() {
        for j in i + 1..half.len() {
            match decide_cocycle_conjugacy(&half[i], &half[j], &tol) {
                Ok(v) if !v.conjugate => distinct += 1,
                _ => conjugate_pairs += 1,
            }
        }
    }

    vec![
        at_most("decomposition_reassembly", 100, cfg.bound(1e-8), reassembly),
        at_most("xyz_identities", 20, cfg.bound(1e-7), xyz),
        at_most("equivalence_matches_conjugacy", 100, 0.0, agreement),
        at_most("different_ranks_rejected", 50, 0.0, ranks),
        CheckOutcome {
            check: "lambda_half_family_distinct".into(),
            cases: 6,
            residual: conjugate_pairs as f64,
            comparison: Comparison::AtMost,
            bound: 0.0,
            passed: conjugate_pairs == 0,
            detail: format!("{distinct}/6 pairs non-conjugate"),
        },
    ]
}

fn brb(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let trials = 4;
    // each case: (worst ‖B − I‖ over converged runs, whether any run converged)
    let cases: Vec<ccrflow::Result<(f64, bool)>> = par::map_range(Execution::Sequential, 50, |k| {
        let mut rng = case_rng(cfg.seed, "brb/probe", k);
        let n = rng.gen_range(1..=5);
        let spread = rng.gen_range(0.2..5.0);
        let r = sample::positive(&mut rng, n, 1.0, spread);
        let rep = brb_probe(&r, trials, rng.gen(), cfg.exec)?;
        let worst = rep
            .trials
            .iter()
            .filter(|t| t.residual <= 1e-9)
            .map(|t| t.distance_to_identity)
            .fold(0.0, f64::max);
        Ok((worst, rep.min_residual <= 1e-9))
    });
    let mut worst: f64 = 0.0;
    let mut unconverged = 0;
    let mut error = None;
    for c in cases {
        match c {
            Ok((w, converged)) => {
                worst = worst.max(w);
                unconverged += usize::from(!converged);
            }
            Err(e) => error = error.or(Some(e.to_string())),
        }
    }
    let mut out = at_most("converged_minimizers_are_identity", 50, cfg.bound(1e-6), (worst, error));
    out.detail = format!("{} of 50 symbols reached residual <= 1e-9", 50 - unconverged);
    out.passed &= unconverged == 0;
    vec![out]
}

fn block_generators(rng: &mut ChaCha8Rng, d: usize) -> Vec<ComplexMatrix> {
    let k = rng.gen_range(1..=2);
    (0..k)
        .map(|_| {
            if d > 1 && rng.gen_bool(0.7) {
                let split = rng.gen_range(1..d);
                sample::matrix_with_norm(rng, split, 1.0).direct_sum(&sample::matrix_with_norm(rng, d - split, 1.0))
            } else {
                sample::matrix_with_norm(rng, d, 1.0)
            }
        })
        .collect()
}

fn random_algebra(rng: &mut ChaCha8Rng, d: usize) -> ccrflow::Result<MatrixAlgebra> {
    Ok(match rng.gen_range(0..4) {
        0 => MatrixAlgebra::scalars(d),
        1 => MatrixAlgebra::diagonal(d),
        2 => MatrixAlgebra::full(d),
        _ => bicommutant(&block_generators(rng, d), d)?,
    })
}

fn vna(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    let double = sweep(cfg, "vna/double_commutant", 50, |rng| {
        let d = rng.gen_range(1..=6);
        let gens = block_generators(rng, d);
        span_distance(&bicommutant(&gens, d)?, &word_closure(&gens, d)?)
    });
    let distributive = sweep(cfg, "vna/distributivity", 20, |rng| {
        let dm = rng.gen_range(1..=4);
        let dn = rng.gen_range(1..=16 / dm).min(4);
        let (m1, m2) = (random_algebra(rng, dm)?, random_algebra(rng, dm)?);
        let (n1, n2) = (random_algebra(rng, dn)?, random_algebra(rng, dn)?);
        let rep = distributivity_check(&m1, &m2, &n1, &n2)?;
        Ok(rep.join_residual.max(rep.meet_residual))
    });
    vec![
        at_most("double_commutant", 50, cfg.bound(1e-9), double),
        at_most("distributivity", 20, cfg.bound(1e-9), distributive),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(exec: Execution) -> SuiteConfig {
        SuiteConfig { seed: 7, tol_scale: 1.0, exec }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nosuch", &cfg(Execution::Sequential)), Err(CliError::UnknownSuite(_))));
    }

    #[test]
    fn weyl_suite_passes_at_seed_seven() {
        let r = run_suite("weyl", &cfg(Execution::default())).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.checks.iter().all(|c| c.residual <= 1e-12));
    }

    #[test]
    fn results_do_not_depend_on_the_strategy() {
        let a = run_suite("gram", &cfg(Execution::Sequential)).unwrap();
        let b = run_suite("gram", &cfg(Execution::default())).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn case_streams_are_distinct() {
        let a: u64 = case_rng(1, "x", 0).gen();
        let b: u64 = case_rng(1, "x", 1).gen();
        let c: u64 = case_rng(1, "y", 0).gen();
        assert!(a != b && a != c);
    }
}
