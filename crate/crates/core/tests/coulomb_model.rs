use noncomm::coulomb::{
    rhs_eta, snl_factor_exact, solution_exists, solve_eta, Branch, Coupling, QuantumNumbers, RadialState, SolverOptions,
};
use noncomm::numerics::{integrate_semi_infinite, QuadratureSpec};
use noncomm::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn qn(n: u32, l: u32) -> QuantumNumbers {
    QuantumNumbers::new(n, l).unwrap()
}

fn c(x: f64) -> Coupling<f64> {
    Coupling::new(x).unwrap()
}

/// g(eta) from its defining integral, with the polynomial written out by hand,
/// by a mapped midpoint rule.
fn brute_force_g(n: u32, l: u32, az: f64, eta: f64) -> f64 {
    let (s, poly): (f64, fn(f64) -> f64) = match (n, l) {
        (1, 0) => (0.5, |_| 1.0),
        (2, 0) => (0.5, |x| 1.0 - x / 2.0),
        (2, 1) => (1.0 / 24.0, |_| 1.0),
        _ => unreachable!(),
    };
    let cf = 4.0 * az.powi(3) / ((n * n) as f64 * eta.powi(4));
    let nodes = 1_000_000;
    let h = 1.0 / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            let x = t / (1.0 - t);
            let f = x.powi(2 * l as i32 + 2) * (-x).exp() * poly(x).powi(2) / (1.0 + cf / (x * x));
            f / ((1.0 - t) * (1.0 - t))
        })
        .sum();
    s * sum * h
}

#[test]
fn g_matches_independent_quadrature() {
    let spec = QuadratureSpec::default();
    let g = rhs_eta(0.8, qn(1, 0), c(0.3), &spec).unwrap();
    assert!((g - 0.925_811_259_414_084_7).abs() < 1e-12, "{g}");
    for (n, l, az, eta) in [
        (1, 0, 0.3, 0.8),
        (2, 0, 0.9, 0.6),
        (2, 1, 1.1, 0.75),
        (2, 0, 0.05, 0.99),
    ] {
        let g = rhs_eta(eta, qn(n, l), c(az), &spec).unwrap();
        let oracle = brute_force_g(n, l, az, eta);
        assert!((g - oracle).abs() < 1e-9, "({n},{l}) {az} {eta}: {g} vs {oracle}");
    }
}

#[test]
fn normalization_constants_are_exact() {
    let frac = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    assert_eq!(snl_factor_exact(qn(1, 0)), frac(1, 2));
    assert_eq!(snl_factor_exact(qn(2, 0)), frac(1, 2));
    assert_eq!(snl_factor_exact(qn(2, 1)), frac(1, 24));
    assert_eq!(snl_factor_exact(qn(3, 1)), frac(1, 9));
}

#[test]
fn two_roots_below_critical_coupling() {
    let s = solve_eta(qn(1, 0), c(0.3), &SolverOptions::default()).unwrap();
    assert_eq!(s.root_count, 2);
    assert_eq!(s.branch, Branch::UpperRoot);
    assert!((s.roots[0] - 0.25463).abs() < 1e-5, "{:?}", s.roots);
    assert!((s.roots[1] - 0.95817).abs() < 1e-5, "{:?}", s.roots);
    assert_eq!(s.eta, s.roots[1]);
    assert!(s.residual < 1e-10);
}

#[test]
fn nonexistence_past_the_critical_coupling() {
    let o = SolverOptions::default();
    for (n, l, az) in [(1, 0, 0.5102), (2, 0, 1.4012), (2, 1, 1.2217), (1, 0, 3.0)] {
        assert!(
            matches!(solve_eta(qn(n, l), c(az), &o), Err(Error::NoBoundState { .. })),
            "({n},{l}) at {az}"
        );
        assert!(!solution_exists(qn(n, l), c(az), &o).unwrap());
    }
}

#[test]
fn epsilon_decreases_with_quantum_numbers() {
    let o = SolverOptions::default();
    for az in [0.01, 0.1, 0.3, 0.5] {
        let e: Vec<f64> = QuantumNumbers::lowest_three()
            .iter()
            .map(|&q| solve_eta(q, c(az), &o).unwrap().epsilon)
            .collect();
        assert!(e[0] > e[1] && e[1] > e[2], "{az}: {e:?}");
    }
}

#[test]
fn epsilon_grows_with_coupling() {
    let o = SolverOptions::default();
    let mut last = 0.0;
    for k in 1..=25 {
        let e = solve_eta(qn(1, 0), c(0.02 * k as f64), &o).unwrap().epsilon;
        assert!(e > last);
        last = e;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radial_functions_are_normalized(
        n in 1u32..=5,
        l_frac in 0.0f64..1.0,
        az in 0.01f64..2.0,
        eta in 0.05f64..=1.0,
    ) {
        let l = ((n as f64) * l_frac).floor() as u32;
        let state = RadialState::new(qn(n, l), c(az), eta).unwrap();
        let norm = integrate_semi_infinite(|r| state.chi(r).powi(2), &QuadratureSpec::default()).unwrap();
        prop_assert!((norm - 1.0).abs() < 1e-10, "({n},{l}) {az} {eta}: {norm}");
    }

    #[test]
    fn g_is_a_probability_weight(
        which in 0usize..3,
        az in 0.001f64..1.5,
        eta in 0.05f64..1.0,
        step in 0.001f64..0.05,
    ) {
        let q = QuantumNumbers::lowest_three()[which];
        let spec = QuadratureSpec::default();
        let g = rhs_eta(eta, q, c(az), &spec).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
        // Weaker force weight at larger eta, stronger at larger coupling.
        let g_eta = rhs_eta((eta + step).min(1.0), q, c(az), &spec).unwrap();
        prop_assert!(g_eta >= g - 1e-14);
        let g_az = rhs_eta(eta, q, c(az + step), &spec).unwrap();
        prop_assert!(g_az <= g + 1e-14);
    }
}
