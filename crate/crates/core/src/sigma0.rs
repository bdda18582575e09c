//! The universal lower bound `σ₀` on `S_{i₁}` for nondegenerate PSD
//! solutions of a sign-split operator equation.
//!
//! `σ₀` is the unique positive root of
//! `F(σ) = ratio · Σₖ αₖ σ^{νₖ − 1} = 1` with `νₖ = jₖ / i₁` and
//! `αₖ = C(n, jₖ) · C(n, i₁)^{−νₖ}`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::sampling::unit_f64;
use crate::linalg::{self, SymmetricMatrix};
use crate::minimize::compass_search;
use crate::operator::{HessianOperator, LemmaCase, SignSplit};
use crate::symmfn::{binomial, elementary_symmetric_all, SymmSpectrum};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
const BISECTION_CAP: usize = 200;
const BRACKET_CAP: usize = 2100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sigma0Problem {
    pub n: usize,
    pub i1: usize,
    /// Remaining indices on the leader's side; they do not enter `F`.
    pub plus_rest: Vec<usize>,
    pub js: Vec<usize>,
    pub ratio: f64,
    pub nu: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl Sigma0Problem {
    /// `js` is sorted on construction, so its order does not matter.
    pub fn new(n: usize, i1: usize, mut js: Vec<usize>, ratio: f64) -> Result<Self> {
        if i1 == 0 || i1 > n {
            return Err(Error::IndexOutOfRange { k: i1, lo: 1, hi: n });
        }
        if js.is_empty() {
            return Err(Error::DegenerateSplit("minus side is empty".into()));
        }
        js.sort_unstable();
        js.dedup();
        if let Some(&j) = js.iter().find(|&&j| j <= i1 || j > n) {
            return Err(Error::DegenerateSplit(format!(
                "minus index {j} must lie in ({i1}, {n}]"
            )));
        }
        if !(ratio >= 1.0 && ratio.is_finite()) {
            return Err(Error::invalid("ratio", format!("must be finite and >= 1, got {ratio}")));
        }
        let log_ci1 = binomial(n, i1).ln();
        let nu: Vec<f64> = js.iter().map(|&j| j as f64 / i1 as f64).collect();
        let alpha = js
            .iter()
            .zip(&nu)
            .map(|(&j, &v)| (binomial(n, j).ln() - v * log_ci1).exp())
            .collect();
        Ok(Sigma0Problem {
            n,
            i1,
            plus_rest: Vec::new(),
            js,
            ratio,
            nu,
            alpha,
        })
    }

    /// All indices of `J` covered by the problem.
    pub fn index_set(&self) -> Vec<usize> {
        let mut all: Vec<usize> = std::iter::once(self.i1)
            .chain(self.plus_rest.iter().copied())
            .chain(self.js.iter().copied())
            .collect();
        all.sort_unstable();
        all
    }

    /// `F(σ) = ratio · Σ αₖ σ^{νₖ−1}`, with `F(0) = 0`.
    pub fn lhs(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        let log_sigma = sigma.ln();
        let sum: f64 = self
            .alpha
            .iter()
            .zip(&self.nu)
            .map(|(a, v)| a * ((v - 1.0) * log_sigma).exp())
            .sum();
        self.ratio * sum
    }
}

/// Builds the root problem from a sign split.
///
/// A split ratio below 1 is raised to 1; the bound stays valid since it only
/// weakens as the ratio grows.
pub fn build_problem(n: usize, split: &SignSplit) -> Result<Sigma0Problem> {
    let i1 = *split
        .plus_side
        .first()
        .ok_or_else(|| Error::DegenerateSplit("plus side is empty".into()))?;
    if let Some(&j1) = split.minus_side.first() {
        if j1 <= i1 {
            return Err(Error::DegenerateSplit(format!("need i1 < j1, got {i1} >= {j1}")));
        }
    }
    let mut p = Sigma0Problem::new(n, i1, split.minus_side.clone(), split.ratio_bound.max(1.0))?;
    p.plus_rest = split.plus_side[1..].to_vec();
    Ok(p)
}

/// Positive root of `F(σ) = 1` by bracket doubling/halving from `σ = 1`,
/// then bisection until `|F(σ) − 1| ≤ tol`.
pub fn solve_sigma0(p: &Sigma0Problem, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let residual = |s: f64| p.lhs(s) - 1.0;
    let r1 = residual(1.0);
    if r1.abs() <= tol {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = if r1 < 0.0 { (1.0, 2.0) } else { (0.5, 1.0) };
    let mut steps = 0;
    loop {
        let probe = if r1 < 0.0 { hi } else { lo };
        let r = residual(probe);
        if !(probe.is_finite() && probe > 0.0 && r.is_finite()) || steps == BRACKET_CAP {
            return Err(Error::BracketOverflow { sigma: probe });
        }
        if r1 < 0.0 && r < 0.0 {
            lo = hi;
            hi *= 2.0;
        } else if r1 > 0.0 && r > 0.0 {
            hi = lo;
            lo *= 0.5;
        } else {
            break;
        }
        steps += 1;
    }
    let mut last = f64::INFINITY;
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        let r = residual(mid);
        if r.abs() <= tol {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        last = r;
    }
    Err(Error::RootNotConverged {
        iterations: BISECTION_CAP,
        residual: last,
    })
}

/// Search settings for [`min_sk_oracle`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSearch {
    /// Box half-side `Λ_max`; derived from the `σ₀` estimate when absent.
    pub lambda_max: Option<f64>,
    pub grid_points: usize,
    pub restarts: usize,
    pub seed: u64,
    pub feas_tol: f64,
    /// Refinement stops once the pattern step falls below `step_tol · Λ_max`.
    pub step_tol: f64,
}

impl Default for OracleSearch {
    fn default() -> Self {
        OracleSearch {
            lambda_max: None,
            grid_points: 64,
            restarts: 256,
            seed: 0,
            feas_tol: 1e-9,
            step_tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleMinimum {
    pub value: f64,
    /// Minimizing spectrum, ascending.
    pub spectrum: Vec<f64>,
    pub lambda_max: f64,
    pub candidates: usize,
}

struct SpectralProblem {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
    lambda_max: f64,
    feas_tol: f64,
}

impl SpectralProblem {
    /// Completes `free` (the first n−1 eigenvalues) by solving the equation
    /// for the last one. The residual is affine in each eigenvalue.
    fn complete(&self, free: &[f64]) -> Option<Vec<f64>> {
        let e = elementary_symmetric_all(free);
        let mut constant = 0.0;
        let mut slope = 0.0;
        for i in 1..=self.n {
            let a = self.coeffs[i - 1];
            if a == 0.0 {
                continue;
            }
            if i < e.len() {
                constant += a * e[i];
            }
            slope += a * e[i - 1];
        }
        let last = if slope != 0.0 {
            -constant / slope
        } else if constant == 0.0 {
            0.0
        } else {
            return None;
        };
        let slack = 1e-14 * self.lambda_max;
        if !(last >= -slack && last <= self.lambda_max + slack) {
            return None;
        }
        let mut lambda = free.to_vec();
        lambda.push(last.clamp(0.0, self.lambda_max));
        Some(lambda)
    }

    /// `S_k` at a feasible completion, `+∞` otherwise.
    fn objective(&self, free: &[f64]) -> (f64, Option<Vec<f64>>) {
        let Some(lambda) = self.complete(free) else {
            return (f64::INFINITY, None);
        };
        let s = elementary_symmetric_all(&lambda);
        let residual: f64 = (1..=self.n).map(|i| self.coeffs[i - 1] * s[i]).sum();
        let scale: f64 = (1..=self.n).map(|i| (self.coeffs[i - 1] * s[i]).abs()).sum();
        if residual.abs() > self.feas_tol * scale.max(1.0) || s[self.k] <= self.feas_tol {
            return (f64::INFINITY, None);
        }
        (s[self.k], Some(lambda))
    }
}

fn better(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.1 < b.1,
    }
}

/// Brute-force minimum of `Sₖ(λ)` over nonnegative spectra in `[0, Λ]ⁿ`
/// satisfying `Σ aᵢ Sᵢ(λ) = 0` with `Sₖ(λ) > 0`.
///
/// Independent of the root equation: it only ever evaluates symmetric
/// functions of explicit spectra. Candidates come from the equal-spectrum
/// line, a grid over the first n−1 eigenvalues (n ≤ 3) or seeded random
/// restarts (n ≥ 4), each then refined by pattern search.
pub fn min_sk_oracle(n: usize, op: &HessianOperator, k: usize, search: &OracleSearch) -> Result<OracleMinimum> {
    if op.dim() != n {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: n,
        });
    }
    let coeffs = op
        .constant_coefficients()
        .ok_or_else(|| Error::Precondition("oracle needs constant coefficients".into()))?;
    if !op.index_set().contains(&k) {
        return Err(Error::Precondition(format!("k = {k} is not in the index set")));
    }
    if search.grid_points < 2 {
        return Err(Error::invalid("grid_points", "need at least 2"));
    }
    let lambda_max = match search.lambda_max {
        Some(l) if l > 0.0 && l.is_finite() => l,
        Some(l) => return Err(Error::invalid("lambda_max", format!("must be positive, got {l}"))),
        None => {
            let (estimate, i1) = match op.classify_lemma_case()? {
                LemmaCase::Split(split) => {
                    let p = build_problem(n, &split)?;
                    (solve_sigma0(&p, DEFAULT_ROOT_TOL)?, p.i1)
                }
                LemmaCase::AllSameSign { .. } => (1.0, 1),
            };
            10.0 * n as f64 * estimate.powf(1.0 / i1 as f64)
        }
    };
    let problem = SpectralProblem {
        n,
        k,
        coeffs,
        lambda_max,
        feas_tol: search.feas_tol,
    };
    let free_dim = n - 1;

    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    let push = |free: Vec<f64>, seeds: &mut Vec<(f64, Vec<f64>)>| {
        let (v, _) = problem.objective(&free);
        if v.is_finite() {
            seeds.push((v, free));
        }
    };

    // equal-spectrum line: sign changes of Σ aᵢ C(n,i) tⁱ
    let line = |t: f64| -> f64 {
        (1..=n)
            .map(|i| problem.coeffs[i - 1] * binomial(n, i) * t.powi(i as i32))
            .sum()
    };
    let line_samples = 64 * search.grid_points;
    let mut prev_t = 0.0;
    let mut prev_r = line(0.0);
    for step in 1..=line_samples {
        let t = lambda_max * step as f64 / line_samples as f64;
        let r = line(t);
        if r == 0.0 || (prev_r != 0.0 && r.signum() != prev_r.signum()) {
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if line(mid).signum() == line(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            push(vec![root; free_dim], &mut seeds);
        }
        prev_t = t;
        prev_r = r;
    }

    if n <= 3 {
        let g = search.grid_points;
        let total = g.pow(free_dim as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut free = vec![0.0; free_dim];
            for slot in free.iter_mut().rev() {
                *slot = lambda_max * (rem % g) as f64 / (g - 1) as f64;
                rem /= g;
            }
            push(free, &mut seeds);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        for _ in 0..search.restarts {
            let free: Vec<f64> = (0..free_dim).map(|_| lambda_max * unit_f64(&mut rng)).collect();
            push(free, &mut seeds);
        }
    }

    let candidates = seeds.len();
    if seeds.is_empty() {
        return Err(Error::ForcesZero { k, lambda_max });
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.partial_cmp(&b.1).unwrap()));

    let lower = vec![0.0; free_dim];
    let upper = vec![lambda_max; free_dim];
    let initial_step = lambda_max / (search.grid_points - 1) as f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (_, free) in seeds.iter().take(8) {
        let refined = compass_search(
            |z| problem.objective(z).0,
            free,
            &lower,
            &upper,
            initial_step,
            search.step_tol * lambda_max,
        );
        let (value, lambda) = problem.objective(&refined.x);
        let Some(mut lambda) = lambda else { continue };
        lambda.sort_by(f64::total_cmp);
        let cand = (value, lambda);
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    }
    let (value, spectrum) = best.ok_or(Error::ForcesZero { k, lambda_max })?;
    Ok(OracleMinimum {
        value,
        spectrum,
        lambda_max,
        candidates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `S_{i₁} ≥ σ₀`.
    Bounded,
    /// `Sᵢ ≈ 0` for every index in `J`.
    Degenerate,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub branch: Branch,
    pub s_leader: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub ok: bool,
    pub sigma0: f64,
    pub bounded: usize,
    pub degenerate: usize,
    pub violations: Vec<usize>,
    pub outcomes: Vec<SampleOutcome>,
}

/// Checks the either/or bound on solution samples: `S_{i₁}(A) ≥ σ₀(1 − tol)`
/// or `Sᵢ(A) ≤ tol` for every `i ∈ J`.
///
/// Samples are expected to solve the operator equation already; only the
/// PSD precondition is verified here.
pub fn verify_lower_bound(
    p: &Sigma0Problem,
    sigma0: f64,
    samples: &[(Vec<f64>, SymmetricMatrix)],
    tol: f64,
) -> Result<LowerBoundReport> {
    let indices = p.index_set();
    let mut outcomes = Vec::with_capacity(samples.len());
    let mut violations = Vec::new();
    for (idx, (_, a)) in samples.iter().enumerate() {
        if a.dim() != p.n {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: p.n,
            });
        }
        if !linalg::is_psd(a, tol)? {
            return Err(Error::Precondition(format!("sample {idx} is not PSD")));
        }
        let spec = SymmSpectrum::of_matrix(a)?;
        let s_leader = spec.s[p.i1];
        let branch = if s_leader >= sigma0 * (1.0 - tol) {
            Branch::Bounded
        } else if indices.iter().all(|&i| spec.s[i] <= tol) {
            Branch::Degenerate
        } else {
            violations.push(idx);
            Branch::Violation
        };
        outcomes.push(SampleOutcome { branch, s_leader });
    }
    let count = |b| outcomes.iter().filter(|o| o.branch == b).count();
    Ok(LowerBoundReport {
        ok: violations.is_empty(),
        sigma0,
        bounded: count(Branch::Bounded),
        degenerate: count(Branch::Degenerate),
        violations,
        outcomes,
    })
}
