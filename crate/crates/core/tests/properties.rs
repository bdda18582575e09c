#![allow(clippy::needless_range_loop)]

mod common;

use common::{dense, principal_minor_sum, rel_err, subset_product_sum, with_spectrum, Rng};
use proptest::prelude::*;
use rigidity_core::families::{self, make_cosine_example, make_quadrature_example, Profile};
use rigidity_core::harness::probe::{rigidity_probe, ProbeOutcome, ProbeSearch};
use rigidity_core::linalg::{self, FnField, JACOBI_TOL};
use rigidity_core::operator::{builtin_eq3, HessianOperator, LemmaCase};
use rigidity_core::sigma0::{min_sk_oracle, solve_sigma0, verify_lower_bound, OracleSearch, Sigma0Problem};
use rigidity_core::symmfn::{check_maclaurin_chain, elementary_symmetric_all, majorization_bound};
use rigidity_core::{ScalarField, SymmSpectrum, SymmetricMatrix};

fn symmetric(max_n: usize, range: f64) -> impl Strategy<Value = SymmetricMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-range..range, n * (n + 1) / 2)
            .prop_map(move |lower| SymmetricMatrix::from_lower(n, lower).unwrap())
    })
}

fn spectrum(max_n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, 1..=max_n)
}

fn frob(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigen_residual_and_trace(a in symmetric(6, 2.0)) {
        let eig = linalg::eigen_symmetric(&a, JACOBI_TOL).unwrap();
        let rows = dense(&a);
        let recon = eig.reconstruct();
        let diff: Vec<Vec<f64>> = rows.iter().zip(&recon)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect();
        let scale = frob(&rows).max(1.0);
        prop_assert!(frob(&diff) <= 1e-12 * scale);
        let tr: f64 = eig.values.iter().sum();
        prop_assert!((tr - a.trace()).abs() <= 1e-12 * scale);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sk_matches_principal_minors(a in symmetric(6, 2.0)) {
        let spec = SymmSpectrum::of_matrix(&a).unwrap();
        let rows = dense(&a);
        for k in 0..=a.dim() {
            prop_assert!(rel_err(spec.s[k], principal_minor_sum(&rows, k)) <= 1e-10, "k = {}", k);
        }
        prop_assert!(rel_err(spec.s[a.dim()], common::det_laplace(&rows)) <= 1e-10);
        prop_assert!(rel_err(linalg::determinant(&a), common::det_laplace(&rows)) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_expansion_matches_subsets(eigs in spectrum(8, -3.0, 3.0)) {
        let s = elementary_symmetric_all(&eigs);
        for k in 0..=eigs.len() {
            prop_assert!(rel_err(s[k], subset_product_sum(&eigs, k)) <= 1e-12);
        }
    }

    #[test]
    fn sk_scales_homogeneously(eigs in spectrum(6, -2.0, 2.0), c in -3.0f64..3.0) {
        let s = elementary_symmetric_all(&eigs);
        let scaled: Vec<f64> = eigs.iter().map(|v| c * v).collect();
        let t = elementary_symmetric_all(&scaled);
        for k in 0..=eigs.len() {
            prop_assert!(rel_err(t[k], c.powi(k as i32) * s[k]) <= 1e-11);
        }
    }

    #[test]
    fn loewner_reflexive_and_scaling(a in symmetric(5, 2.0), c in 1.0f64..4.0) {
        prop_assert!(linalg::loewner_leq(&a, &a, 1e-12).unwrap());
        let shift = SymmetricMatrix::scaled_identity(a.dim(), c).unwrap();
        prop_assert!(linalg::loewner_leq(&a, &a.add(&shift).unwrap(), 1e-12).unwrap());
        prop_assert!(!linalg::loewner_leq(&a.add(&shift).unwrap(), &a, 1e-12).unwrap());
    }

    #[test]
    fn maclaurin_chain_on_psd(eigs in spectrum(8, 0.0, 5.0), seed in any::<u64>()) {
        let a = with_spectrum(&mut Rng::new(seed), &eigs);
        let r = check_maclaurin_chain(&a, 1e-12).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }

    #[test]
    fn maclaurin_equality_on_scalar_identity(n in 1usize..=8, c in 0.01f64..10.0) {
        let a = SymmetricMatrix::scaled_identity(n, c).unwrap();
        let r = check_maclaurin_chain(&a, 1e-12).unwrap();
        prop_assert!(r.holds && r.all_equal);
    }

    #[test]
    fn majorization_below_eps(eps in 0.01f64..5.0, fracs in prop::collection::vec(0.0f64..0.99, 1..=6), seed in any::<u64>()) {
        let eigs: Vec<f64> = fracs.iter().map(|f| f * eps).collect();
        let a = with_spectrum(&mut Rng::new(seed), &eigs);
        let r = majorization_bound(&a, eps, 1e-12).unwrap();
        prop_assert!(r.holds && r.per_k_slack.iter().all(|&s| s >= -1e-12));
    }

    #[test]
    fn residual_is_linear_in_coefficients(
        coeffs in prop::collection::vec(-2.0f64..2.0, 3),
        c in 0.01f64..3.0,
        a in symmetric(3, 2.0).prop_filter("n = 3", |a| a.dim() == 3),
    ) {
        let mut op = HessianOperator::zero(3).unwrap();
        for (i, &v) in coeffs.iter().enumerate() {
            if v != 0.0 {
                op = op.with_constant(i + 1, v).unwrap();
            }
        }
        let x = [0.0; 3];
        let base = op.residual_matrix(&x, &a).unwrap();
        let spec = SymmSpectrum::of_matrix(&a).unwrap();
        let direct: f64 = coeffs.iter().enumerate().map(|(i, v)| v * spec.s[i + 1]).sum();
        prop_assert!((base - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        let scaled = op.scaled(c).unwrap().residual_matrix(&x, &a).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-12 * (1.0 + base.abs()));
    }

    #[test]
    fn same_sign_operator_has_no_nonzero_psd_solution(
        coeffs in prop::collection::vec(0.1f64..3.0, 4),
        mask in 1u8..16,
        negate in any::<bool>(),
        eigs in prop::collection::vec(0.0f64..3.0, 4),
    ) {
        let sign = if negate { -1.0 } else { 1.0 };
        let mut op = HessianOperator::zero(4).unwrap();
        for i in 0..4 {
            if mask & (1 << i) != 0 {
                op = op.with_constant(i + 1, sign * coeffs[i]).unwrap();
            }
        }
        let same_sign = matches!(op.classify_lemma_case().unwrap(), LemmaCase::AllSameSign { .. });
        prop_assert!(same_sign);
        let spec = SymmSpectrum::from_eigenvalues(&eigs);
        let r = op.residual_spectrum(&[0.0; 4], &spec).unwrap();
        let floor: f64 = op.index_set().iter().map(|&i| spec.s[i]).sum::<f64>() * 0.1;
        prop_assert!(sign * r >= floor * (1.0 - 1e-12));
    }

    #[test]
    fn sigma0_root_is_monotone_crossing(
        n in 2usize..=7,
        ratio in 1.0f64..50.0,
        raw in prop::collection::vec(0usize..8, 1..4),
    ) {
        let i1 = 1 + raw[0] % (n - 1);
        let js: Vec<usize> = raw.iter().map(|r| i1 + 1 + r % (n - i1)).collect();
        let p = Sigma0Problem::new(n, i1, js, ratio).unwrap();
        let s0 = solve_sigma0(&p, 1e-12).unwrap();
        prop_assert!((p.lhs(s0) - 1.0).abs() <= 1e-12);
        prop_assert!(p.lhs(s0 * 0.999) < 1.0 && p.lhs(s0 * 1.001) > 1.0);
    }

    #[test]
    fn sigma0_non_increasing_in_ratio(n in 2usize..=6, r1 in 1.0f64..20.0, factor in 1.0f64..5.0) {
        let js: Vec<usize> = (2..=n).collect();
        let a = solve_sigma0(&Sigma0Problem::new(n, 1, js.clone(), r1).unwrap(), 1e-13).unwrap();
        let b = solve_sigma0(&Sigma0Problem::new(n, 1, js, r1 * factor).unwrap(), 1e-13).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn sigma0_ignores_js_order(mut js in Just(vec![3usize, 5, 6]).prop_shuffle(), ratio in 1.0f64..10.0) {
        let sorted = solve_sigma0(&Sigma0Problem::new(6, 2, vec![3, 5, 6], ratio).unwrap(), 1e-12).unwrap();
        js.reverse();
        let shuffled = solve_sigma0(&Sigma0Problem::new(6, 2, js, ratio).unwrap(), 1e-12).unwrap();
        prop_assert_eq!(sorted.to_bits(), shuffled.to_bits());
    }

    #[test]
    fn separable_identity(alpha in prop::collection::vec(0.05f64..20.0, 1..=6)) {
        let a = SymmetricMatrix::from_diagonal(&alpha).unwrap();
        let s = SymmSpectrum::of_matrix(&a).unwrap();
        let n = alpha.len();
        let product: f64 = alpha.iter().product();
        let sum: f64 = alpha.iter().sum();
        let omega = product / sum;
        prop_assert!(rel_err(s.s[n], product) <= 1e-12);
        prop_assert!((s.s[n] - omega * s.s[1]).abs() <= 1e-12 * s.s[n].max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cosine_closed_form_matches_quadrature(
        q in 0.2f64..0.95,
        x in prop::collection::vec(-10.0f64..10.0, 2),
    ) {
        let closed = make_cosine_example(2, q).unwrap();
        let quad = make_quadrature_example(2, q, Profile::cosine(q), (-20.0, 20.0), 1e-12).unwrap();
        prop_assert!((closed.value(&x) - quad.value(&x)).abs() <= 1e-9);
        let g1 = closed.gradient(&x).unwrap();
        let g2 = quad.gradient(&x).unwrap();
        for (a, b) in g1.iter().zip(&g2) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn lower_bound_dichotomy_on_example(
        n in 2usize..=4,
        q in 0.2f64..0.95,
        pts in prop::collection::vec(prop::collection::vec(-20.0f64..20.0, 4), 16),
    ) {
        let ex = make_cosine_example(n, q).unwrap();
        let samples: Vec<(Vec<f64>, SymmetricMatrix)> = pts
            .iter()
            .map(|p| {
                let x = p[..n].to_vec();
                let h = ex.hessian(&x).unwrap();
                (x, h)
            })
            .collect();
        let split_ratio = n as f64 * q.powi(-(n as i32) - 1);
        // One pair of constants for every coefficient, `a_n = 1` included.
        let e = n as i32 + 1;
        let global_ratio = (q.powi(-e) / n as f64).max(1.0) / (q.powi(e) / n as f64).min(1.0);
        for ratio in [split_ratio, global_ratio] {
            let p = Sigma0Problem::new(n, 1, vec![n], ratio).unwrap();
            let s0 = solve_sigma0(&p, 1e-12).unwrap();
            let r = verify_lower_bound(&p, s0, &samples, 1e-12).unwrap();
            prop_assert!(r.ok, "ratio {} sigma0 {}", ratio, s0);
        }
        let op = families::example_operator(&ex).unwrap();
        match op.classify_lemma_case().unwrap() {
            LemmaCase::Split(s) => prop_assert!(rel_err(s.ratio_bound, split_ratio) <= 1e-12),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn probe_majorization_at_interior_minimizers(
        scale in 0.2f64..2.0,
        cx in -3.0f64..3.0,
        cy in -3.0f64..3.0,
        bx in -0.05f64..0.05,
    ) {
        let f = FnField::new(2, move |x| {
            scale * (1.0 + (x[0] - cx).powi(2) + (x[1] - cy).powi(2)).sqrt() + bx * x[0]
        });
        let search = ProbeSearch::cube(2, 50.0);
        for eps in [0.5, 0.1, 0.02] {
            let r = rigidity_probe(&f, eps, &search, 1e-6, Some(&builtin_eq3(2).unwrap())).unwrap();
            if r.outcome == ProbeOutcome::Interior {
                prop_assert!(r.touching_ok, "eps {} eigs {:?}", eps, r.hessian_eigenvalues);
                prop_assert_eq!(r.majorization_ok, Some(true));
            }
        }
    }
}

#[test]
fn oracle_is_consistent_with_root_for_eq3() {
    for (n, expected) in [(2usize, 4.0), (3, 27f64.sqrt()), (4, 256f64.powf(1.0 / 3.0))] {
        let op = builtin_eq3(n).unwrap();
        let split = match op.classify_lemma_case().unwrap() {
            LemmaCase::Split(s) => s,
            other => panic!("{other:?}"),
        };
        let p = rigidity_core::sigma0::build_problem(n, &split).unwrap();
        let s0 = solve_sigma0(&p, 1e-13).unwrap();
        assert!((s0 - expected).abs() <= 1e-9, "n = {n}: {s0}");
        let m = min_sk_oracle(n, &op, 1, &OracleSearch::default()).unwrap();
        assert!(m.value >= s0 * (1.0 - 1e-9), "n = {n}: oracle {} below {s0}", m.value);
        assert!(rel_err(m.value, s0) <= 1e-4, "n = {n}: oracle {} vs {s0}", m.value);
    }
}

#[test]
fn pinching_constants_must_cover_the_unit_coefficient() {
    // At q = 0.9, n = 2 the coefficient bound q^{-3}/2 sits below a_2 = 1, so
    // q^{-6} is not a valid ratio and the bound it gives fails where α = q.
    let (n, q) = (2usize, 0.9f64);
    let ex = make_cosine_example(n, q).unwrap();
    let pi = std::f64::consts::PI;
    let h = ex.hessian(&[pi, pi]).unwrap();
    let naive = Sigma0Problem::new(n, 1, vec![n], q.powi(-6)).unwrap();
    let s0 = solve_sigma0(&naive, 1e-12).unwrap();
    assert!(h.trace() < s0, "trace {} sigma0 {}", h.trace(), s0);
    let split = n as f64 * q.powi(-3);
    let sound = Sigma0Problem::new(n, 1, vec![n], split).unwrap();
    assert!(h.trace() >= solve_sigma0(&sound, 1e-12).unwrap() * (1.0 - 1e-12));
}
