//! Scenario execution.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::error::Error as MathError;
use crate::families::{
    self, estimate_growth_order, growth_bounds_check, make_cosine_example, make_quadrature_example, normalize_to_ma,
    GrowthVerdict, Profile, SeparableExample,
};
use crate::harness::fields;
use crate::harness::probe::{rigidity_probe, ProbeOutcome, ProbeSearch};
use crate::harness::report::{CheckRecord, GridDump, GridRow, Report, Status};
use crate::harness::sampling::{cube, grid_sample, random_sample};
use crate::harness::scenario::{
    BuiltinName, BuiltinSpec, DimSpec, ExampleSpec, FieldSpec, GridSpec, OperatorSpec, OracleSpec, ProfileName,
    RandomSpec, SamplingSpec, Scenario, ScenarioKind,
};
use crate::linalg::{self, ScalarField, SymmetricMatrix};
use crate::operator::{self, Equation, HessianOperator, LemmaCase};
use crate::sigma0::{build_problem, min_sk_oracle, solve_sigma0, verify_lower_bound, OracleSearch};
use crate::symmfn::{check_maclaurin_chain, SymmSpectrum};

/// Rejections that happen before any check runs (exit code 2).
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn from_math(context: &str) -> impl Fn(MathError) -> ConfigError + '_ {
    move |e| ConfigError::Invalid(format!("{context}: {e}"))
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Scenario::from_json(&text)?)
}

/// Report plus the optional per-point dump.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub grid: Option<GridDump>,
}

impl Outcome {
    /// Writes the report and CSV to the paths named in the scenario, if any.
    pub fn write_outputs(&self) -> std::io::Result<()> {
        let out = &self.report.scenario.output;
        if let Some(path) = &out.report {
            fs::write(path, self.report.to_json())?;
        }
        if let (Some(path), Some(grid)) = (&out.csv, &self.grid) {
            fs::write(path, grid.to_csv())?;
        }
        Ok(())
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<Outcome, ConfigError> {
    let kind = scenario.kind.ok_or_else(|| invalid("scenario kind is missing"))?;
    let mut resolved = scenario.clone();
    let (checks, grid) = match kind {
        ScenarioKind::Symm => (run_symm(&mut resolved)?, None),
        ScenarioKind::Sigma0 => (run_sigma0(&mut resolved)?, None),
        ScenarioKind::VerifyExample => run_verify_example(&mut resolved)?,
        ScenarioKind::ResidualScan => run_residual_scan(&mut resolved)?,
        ScenarioKind::RigidityProbe => (run_probe(&mut resolved)?, None),
        ScenarioKind::Growth => (run_growth(&mut resolved)?, None),
    };
    Ok(Outcome {
        report: Report::new(resolved, checks),
        grid,
    })
}

fn default_example_spec() -> ExampleSpec {
    ExampleSpec {
        n: 2,
        q: 0.5,
        profile: ProfileName::Cosine,
        quadrature: false,
    }
}

/// Interval on which non-cosine profiles are validated.
const PROFILE_INTERVAL: (f64, f64) = (-100.0, 100.0);

fn build_example(spec: &ExampleSpec) -> Result<SeparableExample, ConfigError> {
    let ctx = from_math("example");
    match (spec.profile, spec.quadrature) {
        (ProfileName::Cosine, false) => make_cosine_example(spec.n, spec.q).map_err(ctx),
        (ProfileName::Cosine, true) => {
            if !(spec.q > 0.0 && spec.q < 1.0) {
                return Err(invalid(format!("example: need 0 < q < 1, got {}", spec.q)));
            }
            make_quadrature_example(spec.n, spec.q, Profile::cosine(spec.q), PROFILE_INTERVAL, 1e-12).map_err(ctx)
        }
        (ProfileName::Step, _) => {
            make_quadrature_example(spec.n, spec.q, Profile::step(spec.q), PROFILE_INTERVAL, 0.0).map_err(ctx)
        }
        (ProfileName::Constant, _) => {
            make_quadrature_example(spec.n, spec.q, Profile::Constant(1.0), PROFILE_INTERVAL, 0.0).map_err(ctx)
        }
    }
}

fn build_equation(spec: &OperatorSpec) -> Result<Equation, ConfigError> {
    let ctx = from_math("operator");
    match spec {
        OperatorSpec::Builtin(b) => match b.name {
            BuiltinName::Eq3 => operator::builtin_eq3(b.n).map(Equation::homogeneous).map_err(ctx),
            BuiltinName::Eq4 => operator::builtin_eq4(b.n).map(Equation::homogeneous).map_err(ctx),
            BuiltinName::TheoremA => operator::builtin_theorem_a(b.n).map_err(ctx),
        },
        OperatorSpec::Example(e) => {
            let ex = build_example(e)?;
            families::example_operator(&ex).map(Equation::homogeneous).map_err(ctx)
        }
        OperatorSpec::Constant(c) => {
            let mut op = HessianOperator::zero(c.coefficients.len()).map_err(&ctx)?;
            for (i, &a) in c.coefficients.iter().enumerate() {
                if a != 0.0 {
                    op = op.with_constant(i + 1, a).map_err(&ctx)?;
                }
            }
            Ok(Equation::homogeneous(op))
        }
    }
}

fn build_field(spec: &FieldSpec) -> Result<Box<dyn ScalarField>, ConfigError> {
    let check_n = |n: usize| {
        if n == 0 {
            Err(invalid("field: need n >= 1"))
        } else {
            Ok(n)
        }
    };
    Ok(match spec {
        FieldSpec::SqrtOnePlusNorm2(d) => Box::new(fields::sqrt_one_plus_norm2(check_n(d.n)?)),
        FieldSpec::HalfNorm2(d) => Box::new(fields::half_norm2(check_n(d.n)?)),
        FieldSpec::Affine(a) => {
            check_n(a.b.len())?;
            Box::new(fields::affine(a.b.clone(), a.a))
        }
        FieldSpec::Quadratic(q) => {
            let m = SymmetricMatrix::from_rows(&q.matrix).map_err(from_math("field matrix"))?;
            let n = m.dim();
            let base = if q.normalize {
                normalize_to_ma(n, &m).map_err(from_math("field matrix"))?
            } else {
                families::make_quadratic_solution(n, m, vec![0.0; n], 0.0).map_err(from_math("field"))?
            };
            let b = q.b.clone().unwrap_or_else(|| vec![0.0; n]);
            Box::new(families::make_quadratic_solution(n, base.matrix, b, q.a).map_err(from_math("field"))?)
        }
        FieldSpec::Example(e) => Box::new(build_example(e)?),
    })
}

fn build_samples(spec: &SamplingSpec, n: usize) -> Result<Vec<Vec<f64>>, ConfigError> {
    let (lower, upper) = match spec {
        SamplingSpec::Grid(g) => (&g.lower, &g.upper),
        SamplingSpec::Random(r) => (&r.lower, &r.upper),
    };
    if lower.len() != n || upper.len() != n {
        return Err(invalid(format!("sampling box must have {n} axes")));
    }
    let intervals: Vec<(f64, f64)> = lower.iter().copied().zip(upper.iter().copied()).collect();
    let points = match spec {
        SamplingSpec::Grid(g) => grid_sample(&intervals, &g.counts),
        SamplingSpec::Random(r) => random_sample(&intervals, r.count, r.seed),
    }
    .map_err(from_math("sampling"))?;
    if points.is_empty() {
        return Err(invalid("sampling produced no points"));
    }
    Ok(points)
}

fn default_grid(n: usize) -> SamplingSpec {
    SamplingSpec::Grid(GridSpec {
        lower: vec![-10.0; n],
        upper: vec![10.0; n],
        counts: vec![11; n],
    })
}

fn default_random(n: usize, seed: u64) -> SamplingSpec {
    SamplingSpec::Random(RandomSpec {
        lower: vec![-10.0; n],
        upper: vec![10.0; n],
        count: 100,
        seed,
    })
}

fn grid_row(eq: &Equation, f: &dyn ScalarField, x: &[f64], fd_step: f64) -> Result<GridRow, MathError> {
    let hess = linalg::hessian_of(f, x, fd_step)?;
    let spec = SymmSpectrum::of_matrix(&hess)?;
    let residual = eq.operator.residual_spectrum(x, &spec)? - eq.rhs;
    Ok(GridRow {
        point: x.to_vec(),
        residual,
        s: spec.s[1..].to_vec(),
        min_eigenvalue: linalg::min_eigenvalue(&hess)?,
    })
}

fn run_symm(s: &mut Scenario) -> Result<Vec<CheckRecord>, ConfigError> {
    let rows = s
        .matrix
        .get_or_insert_with(|| vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]])
        .clone();
    let a = SymmetricMatrix::from_rows(&rows).map_err(from_math("matrix"))?;
    let tol = s.tolerances.clone();
    let n = a.dim();
    let mut checks = Vec::new();

    let eig = match linalg::eigen_symmetric(&a, linalg::JACOBI_TOL) {
        Ok(e) => e,
        Err(e) => return Ok(vec![CheckRecord::error("eigen_residual", &e)]),
    };
    let recon = eig.reconstruct();
    let dense = a.to_rows();
    let resid: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (dense[i][j] - recon[i][j]).powi(2))
        .sum::<f64>()
        .sqrt()
        / linalg::psd_scale(&a);
    checks.push(
        CheckRecord::judged("eigen_residual", resid <= tol.cross_check)
            .measure("eigenvalues", &eig.values)
            .measure("sweeps", eig.sweeps)
            .measure("relative_residual", resid)
            .tol("relative_residual", tol.cross_check),
    );

    let spec = SymmSpectrum::from_eigenvalues(&eig.values);
    let det = linalg::determinant(&a);
    let det_err = (spec.s[n] - det).abs() / det.abs().max(1.0);
    checks.push(
        CheckRecord::judged("determinant_cross_check", det_err <= tol.cross_check)
            .measure("s", &spec.s)
            .measure("s_n", spec.s[n])
            .measure("determinant_lu", det)
            .measure("relative_error", det_err)
            .tol("relative_error", tol.cross_check),
    );
    let trace = a.trace();
    let tr_err = (spec.s[1] - trace).abs() / trace.abs().max(1.0);
    checks.push(
        CheckRecord::judged("trace_cross_check", tr_err <= tol.cross_check)
            .measure("s_1", spec.s[1])
            .measure("trace", trace)
            .measure("relative_error", tr_err)
            .tol("relative_error", tol.cross_check),
    );

    let psd = eig.values[0] >= -tol.psd * linalg::psd_scale(&a);
    if psd {
        checks.push(match check_maclaurin_chain(&a, tol.psd) {
            Ok(r) => CheckRecord::judged("maclaurin_chain", r.holds)
                .measure("worst_pair", r.worst_pair)
                .measure("worst_slack", r.worst_slack)
                .measure("all_equal", r.all_equal)
                .measure("clamped", r.clamped)
                .tol("slack", tol.psd),
            Err(e) => CheckRecord::error("maclaurin_chain", &e),
        });
    } else {
        checks.push(
            CheckRecord::new("maclaurin_chain", Status::Skipped)
                .measure("min_eigenvalue", eig.values[0])
                .diagnose("matrix is not PSD"),
        );
    }
    Ok(checks)
}

fn run_sigma0(s: &mut Scenario) -> Result<Vec<CheckRecord>, ConfigError> {
    let spec = s
        .operator
        .get_or_insert(OperatorSpec::Builtin(BuiltinSpec {
            name: BuiltinName::Eq3,
            n: 2,
        }))
        .clone();
    let eq = build_equation(&spec)?;
    if eq.rhs != 0.0 {
        return Err(invalid("sigma0 needs a homogeneous operator"));
    }
    let oracle_spec = s.oracle.get_or_insert_with(OracleSpec::default).clone();
    let tol = s.tolerances.clone();
    let op = &eq.operator;
    let n = op.dim();
    let search = OracleSearch {
        grid_points: oracle_spec.grid_points,
        restarts: oracle_spec.restarts,
        seed: oracle_spec.seed,
        ..OracleSearch::default()
    };
    let mut checks = Vec::new();

    let case = match op.classify_lemma_case() {
        Ok(c) => c,
        Err(e) => return Ok(vec![CheckRecord::error("classify", &e)]),
    };
    checks.push(CheckRecord::new("classify", Status::Pass).measure("case", &case));

    let split = match case {
        LemmaCase::Split(split) => split,
        LemmaCase::AllSameSign { .. } => {
            if op.constant_coefficients().is_none() {
                return Ok(checks);
            }
            for k in op.index_set() {
                let name = format!("oracle_forces_zero_k{k}");
                checks.push(match min_sk_oracle(n, op, k, &search) {
                    Err(MathError::ForcesZero { lambda_max, .. }) => {
                        CheckRecord::new(name, Status::Pass).measure("lambda_max", lambda_max)
                    }
                    Ok(m) => CheckRecord::new(name, Status::Fail)
                        .measure("value", m.value)
                        .measure("spectrum", &m.spectrum)
                        .diagnose("found a positive S_k on a same-sign operator"),
                    Err(e) => CheckRecord::error(name, &e),
                });
            }
            return Ok(checks);
        }
    };

    let problem = match build_problem(n, &split) {
        Ok(p) => p,
        Err(e) => {
            checks.push(CheckRecord::error("sigma0_root", &e));
            return Ok(checks);
        }
    };
    let sigma0 = match solve_sigma0(&problem, tol.root) {
        Ok(v) => v,
        Err(e) => {
            checks.push(CheckRecord::error("sigma0_root", &e));
            return Ok(checks);
        }
    };
    let resid = (problem.lhs(sigma0) - 1.0).abs();
    checks.push(
        CheckRecord::judged("sigma0_root", resid <= tol.root)
            .measure("sigma0", sigma0)
            .measure("i1", problem.i1)
            .measure("js", &problem.js)
            .measure("ratio", problem.ratio)
            .measure("nu", &problem.nu)
            .measure("alpha", &problem.alpha)
            .measure("root_residual", resid)
            .tol("root_residual", tol.root),
    );
    let delta = 1e-6;
    let below = problem.lhs(sigma0 * (1.0 - delta));
    let above = problem.lhs(sigma0 * (1.0 + delta));
    checks.push(
        CheckRecord::judged("sigma0_monotone", below < 1.0 && 1.0 < above)
            .measure("f_below", below)
            .measure("f_above", above)
            .tol("delta", delta),
    );

    if op.constant_coefficients().is_some() {
        let floor = 1e-6;
        checks.push(match min_sk_oracle(n, op, problem.i1, &search) {
            Ok(m) => CheckRecord::judged("oracle_lower_bound", m.value >= sigma0 - floor)
                .measure("oracle_value", m.value)
                .measure("spectrum", &m.spectrum)
                .measure("relative_gap", (m.value - sigma0) / sigma0)
                .measure("lambda_max", m.lambda_max)
                .tol("absolute_floor", floor),
            Err(e) => CheckRecord::error("oracle_lower_bound", &e),
        });
    } else {
        checks.push(
            CheckRecord::new("oracle_lower_bound", Status::Skipped).diagnose("operator has non-constant coefficients"),
        );
    }
    Ok(checks)
}

fn example_spec_of(s: &mut Scenario) -> Result<ExampleSpec, ConfigError> {
    if let Some(OperatorSpec::Example(e)) = &s.operator {
        return Ok(e.clone());
    }
    if let Some(FieldSpec::Example(e)) = &s.field {
        return Ok(e.clone());
    }
    if s.operator.is_some() || s.field.is_some() {
        return Err(invalid("verify-example needs an example operator or field"));
    }
    let e = default_example_spec();
    s.operator = Some(OperatorSpec::Example(e.clone()));
    Ok(e)
}

fn run_verify_example(s: &mut Scenario) -> Result<(Vec<CheckRecord>, Option<GridDump>), ConfigError> {
    let spec = example_spec_of(s)?;
    let ex = build_example(&spec)?;
    let n = ex.n;
    if n < 2 {
        return Err(invalid("verify-example needs n >= 2"));
    }
    let op = families::example_operator(&ex).map_err(from_math("operator"))?;
    let eq = Equation::homogeneous(op.clone());
    let sampling = s.sampling.get_or_insert_with(|| default_grid(n)).clone();
    let growth = s.growth.get_or_insert_with(Default::default).clone();
    let samples = build_samples(&sampling, n)?;
    let tol = s.tolerances.clone();
    let mut checks = Vec::new();
    let mut dump = GridDump { n, rows: Vec::new() };

    let mut max_resid: f64 = 0.0;
    let mut max_fd: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    let mut hessians = Vec::with_capacity(samples.len());
    let mut failure = None;
    for x in &samples {
        let row = match grid_row(&eq, &ex, x, tol.fd_step) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        max_resid = max_resid.max(row.residual.abs());
        min_eig = min_eig.min(row.min_eigenvalue);
        let exact = ex.hessian(x).expect("separable example has a Hessian");
        match linalg::hessian_fd(&ex, x, tol.fd_step) {
            Ok(fd) => {
                let dev = exact
                    .packed()
                    .iter()
                    .zip(fd.packed())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                max_fd = max_fd.max(dev);
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        hessians.push((x.clone(), exact));
        dump.rows.push(row);
    }
    if let Some(e) = failure {
        checks.push(CheckRecord::error("residual_exact", &e));
        return Ok((checks, Some(dump)));
    }

    checks.push(
        CheckRecord::judged("residual_exact", max_resid <= tol.residual)
            .measure("max_abs_residual", max_resid)
            .measure("points", samples.len())
            .tol("max_abs_residual", tol.residual),
    );

    let (mu1, mu2) = ex.omega_bounds();
    checks.push(match op.validate_condition_q(&samples, tol.condition_q) {
        Ok(r) => CheckRecord::judged("condition_q", r.ok)
            .measure("mu1", mu1)
            .measure("mu2", mu2)
            .measure("violations", r.violations.len())
            .tol("relative", tol.condition_q),
        Err(e) => CheckRecord::error("condition_q", &e),
    });

    checks.push(match growth_bounds_check(&ex, &samples) {
        Ok(r) => CheckRecord::judged("growth_sandwich", r.holds)
            .measure("checked", r.checked)
            .measure("skipped", r.skipped)
            .measure("violations", r.violations.len()),
        Err(e) => CheckRecord::error("growth_sandwich", &e),
    });

    let directions = growth.directions.unwrap_or(16.max(2 * n));
    checks.push(match estimate_growth_order(&ex, &growth.radii, directions) {
        Ok(r) => CheckRecord::judged("growth_verdict", r.verdict == GrowthVerdict::Quadratic)
            .measure("verdict", r.verdict)
            .measure("ratios", &r.ratios)
            .measure("radii", &r.radii),
        Err(e) => CheckRecord::error("growth_verdict", &e),
    });

    checks.push(
        CheckRecord::judged("fd_hessian", max_fd <= tol.fd)
            .measure("max_abs_deviation", max_fd)
            .measure("step", tol.fd_step)
            .tol("max_abs_deviation", tol.fd),
    );

    let convexity_floor = ex.q - 1e-12;
    checks.push(
        CheckRecord::judged("convexity", min_eig >= convexity_floor)
            .measure("min_eigenvalue", min_eig)
            .tol("floor", convexity_floor),
    );

    match op.classify_lemma_case() {
        Ok(LemmaCase::Split(split)) => {
            let leader_ok = split.leader() == 1 && split.minus_side == vec![n];
            checks.push(
                CheckRecord::judged("lemma_split", leader_ok)
                    .measure("plus_side", &split.plus_side)
                    .measure("minus_side", &split.minus_side)
                    .measure("ratio_bound", split.ratio_bound),
            );
            let bound = build_problem(n, &split)
                .and_then(|p| solve_sigma0(&p, tol.root).map(|s0| (p, s0)))
                .and_then(|(p, s0)| verify_lower_bound(&p, s0, &hessians, tol.psd));
            checks.push(match bound {
                Ok(r) => CheckRecord::judged("lower_bound", r.ok)
                    .measure("sigma0", r.sigma0)
                    .measure("bounded", r.bounded)
                    .measure("degenerate", r.degenerate)
                    .measure("violations", r.violations.len()),
                Err(e) => CheckRecord::error("lower_bound", &e),
            });
        }
        Ok(other) => checks.push(CheckRecord::new("lemma_split", Status::Fail).measure("case", other)),
        Err(e) => checks.push(CheckRecord::error("lemma_split", &e)),
    }
    Ok((checks, Some(dump)))
}

fn run_residual_scan(s: &mut Scenario) -> Result<(Vec<CheckRecord>, Option<GridDump>), ConfigError> {
    let op_spec = s
        .operator
        .get_or_insert_with(|| OperatorSpec::Example(default_example_spec()))
        .clone();
    let eq = build_equation(&op_spec)?;
    let field: Box<dyn ScalarField> = match (&s.field, &op_spec) {
        (Some(f), _) => build_field(f)?,
        (None, OperatorSpec::Example(e)) => Box::new(build_example(e)?),
        (None, _) => return Err(invalid("residual-scan with this operator needs a field")),
    };
    let n = eq.dim();
    if field.dim() != n {
        return Err(invalid(format!(
            "field dimension {} != operator dimension {n}",
            field.dim()
        )));
    }
    let seed = s.seed.unwrap_or(0);
    let sampling = s.sampling.get_or_insert_with(|| default_random(n, seed)).clone();
    let samples = build_samples(&sampling, n)?;
    let tol = s.tolerances.clone();
    let mut dump = GridDump { n, rows: Vec::new() };
    let mut max_resid: f64 = 0.0;
    for x in &samples {
        match grid_row(&eq, field.as_ref(), x, tol.fd_step) {
            Ok(row) => {
                max_resid = max_resid.max(row.residual.abs());
                dump.rows.push(row);
            }
            Err(e) => return Ok((vec![CheckRecord::error("residual", &e)], Some(dump))),
        }
    }
    let check = CheckRecord::judged("residual", max_resid <= tol.residual)
        .measure("max_abs_residual", max_resid)
        .measure("points", samples.len())
        .measure("exact_hessian", field.hessian(&samples[0]).is_some())
        .tol("max_abs_residual", tol.residual);
    Ok((vec![check], Some(dump)))
}

fn run_probe(s: &mut Scenario) -> Result<Vec<CheckRecord>, ConfigError> {
    let field_spec = s
        .field
        .get_or_insert(FieldSpec::SqrtOnePlusNorm2(DimSpec { n: 2 }))
        .clone();
    let field = build_field(&field_spec)?;
    let n = field.dim();
    let probe = s.probe.get_or_insert_with(Default::default).clone();
    if probe.eps.is_empty() {
        return Err(invalid("probe needs at least one eps"));
    }
    if !(probe.half_width > 0.0 && probe.half_width.is_finite()) || probe.grid_points < 2 {
        return Err(invalid("probe box must have positive width and >= 2 grid points"));
    }
    let eq = s.operator.as_ref().map(build_equation).transpose()?;
    if let Some(eq) = &eq {
        if eq.dim() != n {
            return Err(invalid("probe operator dimension does not match field"));
        }
    }
    let tol = s.tolerances.clone();
    let mut search = ProbeSearch::cube(n, probe.half_width);
    search.grid_points = probe.grid_points;
    search.fd_step = tol.fd_step;

    let mut checks = Vec::new();
    for &eps in &probe.eps {
        let name = format!("probe_eps_{eps}");
        let result = rigidity_probe(
            field.as_ref(),
            eps,
            &search,
            tol.probe,
            eq.as_ref().map(|e| &e.operator),
        );
        checks.push(match result {
            Ok(r) => {
                let status = match (r.outcome, probe.expect) {
                    (ProbeOutcome::Interior, Some(ProbeOutcome::Inconclusive)) => Status::Fail,
                    (ProbeOutcome::Interior, _) => {
                        if r.passed() {
                            Status::Pass
                        } else {
                            Status::Fail
                        }
                    }
                    (ProbeOutcome::Inconclusive, Some(ProbeOutcome::Inconclusive)) => Status::Pass,
                    (ProbeOutcome::Inconclusive, Some(ProbeOutcome::Interior)) => Status::Fail,
                    (ProbeOutcome::Inconclusive, None) => Status::Skipped,
                };
                let mut rec = CheckRecord::new(name, status)
                    .measure("outcome", r.outcome)
                    .measure("x0", &r.x0)
                    .measure("g_min", r.g_min)
                    .measure("touching_ok", r.touching_ok)
                    .measure("hessian_eigenvalues", &r.hessian_eigenvalues)
                    .tol("loewner", tol.probe);
                if let Some(m) = &r.majorization {
                    rec = rec.measure("majorization_slack", &m.per_k_slack);
                }
                if r.outcome == ProbeOutcome::Inconclusive {
                    rec = rec.diagnose("minimizer on the search-box boundary");
                }
                rec
            }
            Err(e) => CheckRecord::error(name, &e),
        });
    }
    Ok(checks)
}

fn run_growth(s: &mut Scenario) -> Result<Vec<CheckRecord>, ConfigError> {
    let field_spec = s
        .field
        .get_or_insert_with(|| FieldSpec::Example(default_example_spec()))
        .clone();
    let field = build_field(&field_spec)?;
    let n = field.dim();
    let growth = s.growth.get_or_insert_with(Default::default);
    let directions = *growth.directions.get_or_insert(16.max(2 * n));
    let growth = growth.clone();
    Ok(vec![
        match estimate_growth_order(field.as_ref(), &growth.radii, directions) {
            Ok(r) => {
                let status = match growth.expect {
                    Some(v) if v != r.verdict => Status::Fail,
                    _ => Status::Pass,
                };
                let mut rec = CheckRecord::new("growth_order", status)
                    .measure("verdict", r.verdict)
                    .measure("ratios", &r.ratios)
                    .measure("radii", &r.radii);
                if let Some(v) = growth.expect {
                    rec = rec.measure("expected", v);
                }
                rec
            }
            Err(e) => CheckRecord::error("growth_order", &e),
        },
    ])
}

/// Convenience for `[lo, hi]ⁿ` random sampling specs.
pub fn random_cube(n: usize, lo: f64, hi: f64, count: usize, seed: u64) -> SamplingSpec {
    let b = cube(n, lo, hi);
    SamplingSpec::Random(RandomSpec {
        lower: b.iter().map(|i| i.0).collect(),
        upper: b.iter().map(|i| i.1).collect(),
        count,
        seed,
    })
}
