//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#![allow(clippy::needless_range_loop)]

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{dense, det_laplace, principal_minor_sum, random_psd, random_symmetric, rel_err, Rng};
use rigidity_core::families::{self, make_cosine_example, normalize_to_ma};
use rigidity_core::harness::probe::{rigidity_probe, ProbeOutcome, ProbeSearch};
use rigidity_core::harness::scenario::{ExampleSpec, FieldSpec, GridSpec, OperatorSpec, ProfileName, SamplingSpec};
use rigidity_core::harness::{fields, run_scenario, Scenario, ScenarioKind, Status};
use rigidity_core::linalg::{self, ScalarField};
use rigidity_core::operator::{builtin_eq3, builtin_theorem_a, LemmaCase};
use rigidity_core::sigma0::{build_problem, min_sk_oracle, solve_sigma0, OracleSearch};
use rigidity_core::symmfn::{binomial, check_maclaurin_chain, majorization_bound};
use rigidity_core::{SymmSpectrum, SymmetricMatrix};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn symmetric_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = Rng::new(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = 1 + rng.below(6);
        let a = random_symmetric(&mut rng, n, -2.0, 2.0);
        let spec = SymmSpectrum::of_matrix(&a).map_err(|e| e.to_string())?;
        let rows = dense(&a);
        for k in 1..=n {
            worst = worst.max(rel_err(spec.s[k], principal_minor_sum(&rows, k)));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-10, || format!("worst relative error {worst:e}"))?;
    ensure(secs <= 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("worst relative error {worst:.2e} in {secs:.2} s"))
}

fn maclaurin() -> Verdict {
    let mut rng = Rng::new(2);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let n = 1 + rng.below(8);
        let (a, _) = random_psd(&mut rng, n, 5.0);
        let r = check_maclaurin_chain(&a, 1e-12).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("chain broken: {r:?}"))?;
        if n >= 2 {
            worst = worst.min(r.worst_slack);
        }
    }
    for n in 1..=8 {
        for c in [0.01, 1.0, 7.5] {
            let a = SymmetricMatrix::scaled_identity(n, c).unwrap();
            let r = check_maclaurin_chain(&a, 1e-12).map_err(|e| e.to_string())?;
            ensure(r.holds && r.all_equal, || {
                format!("equality missed for {c}·I, n = {n}: {r:?}")
            })?;
        }
    }
    Ok(format!("10000 PSD matrices, worst slack {worst:.2e}; equality on c·I"))
}

fn sigma0_values() -> Verdict {
    let mut parts = Vec::new();
    for (n, expected) in [(2usize, 4.0), (3, 27f64.sqrt())] {
        let op = builtin_eq3(n).map_err(|e| e.to_string())?;
        let split = match op.classify_lemma_case().map_err(|e| e.to_string())? {
            LemmaCase::Split(s) => s,
            other => return Err(format!("unexpected case {other:?}")),
        };
        ensure(split.ratio_bound == 1.0, || format!("ratio {}", split.ratio_bound))?;
        let p = build_problem(n, &split).map_err(|e| e.to_string())?;
        let s0 = solve_sigma0(&p, 1e-12).map_err(|e| e.to_string())?;
        ensure((s0 - expected).abs() <= 1e-9, || format!("n = {n}: sigma0 {s0}"))?;
        let m = min_sk_oracle(n, &op, 1, &OracleSearch::default()).map_err(|e| e.to_string())?;
        let gap = rel_err(m.value, expected);
        ensure(gap <= 1e-4, || format!("n = {n}: oracle {} vs {expected}", m.value))?;
        parts.push(format!("n={n}: sigma0 {s0:.12}, oracle {:.8}", m.value));
    }
    Ok(parts.join("; "))
}

fn example_grid(n: usize) -> SamplingSpec {
    SamplingSpec::Grid(GridSpec {
        lower: vec![-10.0; n],
        upper: vec![10.0; n],
        counts: vec![11; n],
    })
}

fn example_end_to_end() -> Verdict {
    let mut parts = Vec::new();
    for n in [2usize, 3] {
        for q in [0.3, 0.5] {
            let mut s = Scenario::new(ScenarioKind::VerifyExample);
            s.operator = Some(OperatorSpec::Example(ExampleSpec {
                n,
                q,
                profile: ProfileName::Cosine,
                quadrature: false,
            }));
            s.sampling = Some(example_grid(n));
            let report = run_scenario(&s).map_err(|e| e.to_string())?.report;
            for name in ["residual_exact", "condition_q", "growth_sandwich", "growth_verdict"] {
                let c = report.check(name).ok_or_else(|| format!("{name} missing"))?;
                ensure(c.status == Status::Pass, || {
                    format!("n={n} q={q}: {name} {:?}", c.measured)
                })?;
            }
            let q_check = report.check("condition_q").unwrap();
            let e = n as i32 + 1;
            let mu1 = q_check.measured["mu1"].as_f64().unwrap();
            let mu2 = q_check.measured["mu2"].as_f64().unwrap();
            ensure(
                rel_err(mu1, q.powi(e) / n as f64) <= 1e-15 && rel_err(mu2, q.powi(-e) / n as f64) <= 1e-15,
                || format!("mu1 {mu1} mu2 {mu2}"),
            )?;
            let checked = report.check("growth_sandwich").unwrap().measured["checked"]
                .as_u64()
                .unwrap();
            ensure(checked as usize + 1 == 11usize.pow(n as u32), || {
                format!("sandwich checked {checked}")
            })?;
            let resid = report.check("residual_exact").unwrap().measured["max_abs_residual"]
                .as_f64()
                .unwrap();
            parts.push(format!("n={n} q={q}: residual {resid:.1e}"));
        }
    }
    Ok(parts.join("; "))
}

fn fd_accuracy() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        for q in [0.3, 0.5] {
            let ex = make_cosine_example(n, q).map_err(|e| e.to_string())?;
            let pts = rigidity_core::harness::sampling::grid_sample(&vec![(-10.0, 10.0); n], &vec![11; n])
                .map_err(|e| e.to_string())?;
            for x in &pts {
                let fd = linalg::hessian_fd(&ex, x, 1e-4).map_err(|e| e.to_string())?;
                let alpha = ex.alpha(x);
                for i in 0..n {
                    for j in 0..n {
                        let exact = if i == j { alpha[i] } else { 0.0 };
                        worst = worst.max((fd.get(i, j) - exact).abs());
                    }
                }
            }
        }
    }
    ensure(worst <= 1e-5, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e}"))
}

fn majorization() -> Verdict {
    let mut rng = Rng::new(6);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let n = 1 + rng.below(6);
        let eps = rng.uniform(0.05, 5.0);
        let (a, _) = random_psd(&mut rng, n, 0.99 * eps);
        let r = majorization_bound(&a, eps, 1e-12).map_err(|e| e.to_string())?;
        let spec = SymmSpectrum::of_matrix(&a).map_err(|e| e.to_string())?;
        for k in 1..=n {
            let bound = eps.powi(k as i32) * binomial(n, k);
            ensure(spec.s[k] <= bound * (1.0 + 1e-12), || {
                format!("S_{k} = {} > {bound}", spec.s[k])
            })?;
        }
        ensure(r.holds, || format!("{r:?}"))?;
        worst = worst.min(r.per_k_slack.iter().copied().fold(f64::INFINITY, f64::min));
    }
    Ok(format!("1000 matrices, smallest slack {worst:.3}"))
}

fn probe_dichotomy() -> Verdict {
    let f = fields::sqrt_one_plus_norm2(2);
    let search = ProbeSearch::cube(2, 50.0);
    let mut parts = Vec::new();
    for eps in [0.5, 0.1, 0.02] {
        let r = rigidity_probe(&f, eps, &search, 1e-8, None).map_err(|e| e.to_string())?;
        ensure(r.outcome == ProbeOutcome::Interior && r.touching_ok, || {
            format!(
                "eps {eps}: {:?} at {:?}, eigs {:?}",
                r.outcome, r.x0, r.hessian_eigenvalues
            )
        })?;
        parts.push(format!(
            "eps={eps}: interior, max eig {:.4}",
            r.hessian_eigenvalues.last().unwrap()
        ));
    }
    for (n, q) in [(2usize, 0.5), (3, 0.3)] {
        let ex = make_cosine_example(n, q).map_err(|e| e.to_string())?;
        let eps = q / 2.0;
        let mut s = ProbeSearch::cube(n, 50.0);
        s.grid_points = if n == 2 { 41 } else { 21 };
        let r = rigidity_probe(&ex, eps, &s, 1e-8, None).map_err(|e| e.to_string())?;
        ensure(r.outcome == ProbeOutcome::Inconclusive, || {
            format!("example n={n} q={q}: {:?} at {:?}", r.outcome, r.x0)
        })?;
    }
    parts.push("example: inconclusive".into());
    Ok(parts.join("; "))
}

fn theorem_a_family() -> Verdict {
    let mut rng = Rng::new(8);
    let mut worst_det: f64 = 0.0;
    let mut worst_resid: f64 = 0.0;
    for n in [2usize, 3] {
        for _ in 0..5 {
            let (a, _) = {
                let eigs: Vec<f64> = (0..n).map(|_| rng.uniform(0.1, 3.0)).collect();
                (common::with_spectrum(&mut rng, &eigs), eigs)
            };
            let base = normalize_to_ma(n, &a).map_err(|e| e.to_string())?;
            let b: Vec<f64> = (0..n).map(|_| rng.uniform(-5.0, 5.0)).collect();
            let f = families::make_quadratic_solution(n, base.matrix, b, rng.uniform(-5.0, 5.0))
                .map_err(|e| e.to_string())?;
            let eq = builtin_theorem_a(n).map_err(|e| e.to_string())?;
            for _ in 0..100 {
                let x: Vec<f64> = (0..n).map(|_| rng.uniform(-10.0, 10.0)).collect();
                let h = f.hessian(&x).ok_or("no Hessian")?;
                worst_det = worst_det.max((det_laplace(&h.to_rows()) - 1.0).abs());
                worst_resid = worst_resid.max(eq.residual_field(&f, &x, 1e-4).map_err(|e| e.to_string())?.abs());
            }
        }
    }
    ensure(worst_det <= 1e-10 && worst_resid <= 1e-10, || {
        format!("det {worst_det:e}, residual {worst_resid:e}")
    })?;
    Ok(format!("|det - 1| {worst_det:.1e}, residual {worst_resid:.1e}"))
}

fn determinism() -> Verdict {
    let mut scenarios: Vec<Scenario> = ScenarioKind::ALL.iter().map(|&k| Scenario::new(k)).collect();
    let mut probe = Scenario::new(ScenarioKind::RigidityProbe);
    probe.field = Some(FieldSpec::Example(ExampleSpec {
        n: 2,
        q: 0.5,
        profile: ProfileName::Cosine,
        quadrature: false,
    }));
    scenarios.push(probe);
    for s in &mut scenarios {
        s.set_seed(12345);
    }
    for s in &scenarios {
        let a = run_scenario(s).map_err(|e| e.to_string())?;
        let b = run_scenario(s).map_err(|e| e.to_string())?;
        ensure(a.report.to_json() == b.report.to_json(), || {
            format!("{:?} reports differ", s.kind)
        })?;
        let csv = |o: &rigidity_core::harness::Outcome| o.grid.as_ref().map(|g| g.to_csv());
        ensure(csv(&a) == csv(&b), || format!("{:?} CSV differs", s.kind))?;
    }
    Ok(format!("{} scenarios byte-identical", scenarios.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("symmetric-function oracle equivalence", symmetric_oracle),
        ("Maclaurin chain", maclaurin),
        ("sigma0 values", sigma0_values),
        ("separable example end to end", example_end_to_end),
        ("finite-difference Hessian accuracy", fd_accuracy),
        ("majorization bound", majorization),
        ("rigidity probe dichotomy", probe_dichotomy),
        ("Monge-Ampere quadratic family", theorem_a_family),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
