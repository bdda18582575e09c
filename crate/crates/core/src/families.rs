//! Explicit solution families.
//!
//! * Quadratic polynomials `f(x) = a + ⟨b, x⟩ + ⟨x, A x⟩`, the rigid
//!   solutions of `det Hess f = 1`.
//! * The separable example `f(x) = Σᵢ ∫₀^{xᵢ} (xᵢ − t) α(t) dt` with
//!   `q ≤ α ≤ 1/q`: convex, quadratic growth, `Hess f = diag(α(xᵢ))`, and a
//!   solution of `Sₙ(Hess f) − ω(x) S₁(Hess f) = 0` with
//!   `ω = Π α(xᵢ) / Σ α(xᵢ)`.

use std::fmt;
use std::sync::Arc;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::sampling::unit_f64;
use crate::linalg::{self, FnField, ScalarField, SymmetricMatrix};
use crate::operator::{ActiveCoefficient, HessianOperator, Sign};
use crate::symmfn::SymmSpectrum;

/// Absolute tolerance of the per-coordinate quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Samples used to validate a profile on its working interval.
const PROFILE_SAMPLES: usize = 2001;

/// The one-dimensional profile `α(t)`.
#[derive(Clone)]
pub enum Profile {
    /// `c + d·cos t`, ranging over exactly `[c − d, c + d]`.
    Cosine {
        c: f64,
        d: f64,
    },
    /// `low` for `t < 0`, `high` for `t ≥ 0` (right limit at the jump).
    Step {
        low: f64,
        high: f64,
    },
    Constant(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Profile {
    /// Cosine profile with range `[q, 1/q]`.
    pub fn cosine(q: f64) -> Self {
        Profile::Cosine {
            c: 0.5 * (q + 1.0 / q),
            d: 0.5 * (1.0 / q - q),
        }
    }

    pub fn step(q: f64) -> Self {
        Profile::Step { low: q, high: 1.0 / q }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Cosine { c, d } => c + d * t.cos(),
            Profile::Step { low, high } => {
                if t < 0.0 {
                    *low
                } else {
                    *high
                }
            }
            Profile::Constant(v) => *v,
            Profile::Custom(f) => f(t),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Cosine { .. } => "cosine",
            Profile::Step { .. } => "step",
            Profile::Constant(_) => "constant",
            Profile::Custom(_) => "custom",
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Cosine { c, d } => write!(f, "Cosine {{ c: {c}, d: {d} }}"),
            Profile::Step { low, high } => write!(f, "Step {{ low: {low}, high: {high} }}"),
            Profile::Constant(v) => write!(f, "Constant({v})"),
            Profile::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Adaptive Simpson quadrature of `g` over `[a, b]` (either orientation).
pub fn integrate(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (fa, fm, fb) = (g(lo), g(0.5 * (lo + hi)), g(hi));
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    sign * simpson_step(g, lo, hi, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (g(lm), g(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// The separable quadratic-growth family.
#[derive(Debug, Clone)]
pub struct SeparableExample {
    pub n: usize,
    pub q: f64,
    pub profile: Profile,
    /// Use the cosine closed forms rather than quadrature.
    pub closed_form: bool,
    /// False for constant profiles or `q = 1`, which fall outside the family
    /// proper and are kept for testing.
    pub conforming: bool,
}

/// Cosine-profile example with closed-form `f`, gradient and Hessian.
pub fn make_cosine_example(n: usize, q: f64) -> Result<SeparableExample> {
    if n == 0 {
        return Err(Error::invalid("n", "need n >= 1"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid("q", format!("need 0 < q < 1, got {q}")));
    }
    Ok(SeparableExample {
        n,
        q,
        profile: Profile::cosine(q),
        closed_form: true,
        conforming: true,
    })
}

/// Example evaluated by quadrature for an arbitrary profile.
///
/// The profile is sampled densely on `interval` and must stay within
/// `[q(1 − tol), (1 + tol)/q]` there.
pub fn make_quadrature_example(
    n: usize,
    q: f64,
    profile: Profile,
    interval: (f64, f64),
    tol: f64,
) -> Result<SeparableExample> {
    if n == 0 {
        return Err(Error::invalid("n", "need n >= 1"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::invalid("q", format!("need 0 < q <= 1, got {q}")));
    }
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidBox(format!("profile interval [{lo}, {hi}]")));
    }
    let (min_ok, max_ok) = (q * (1.0 - tol), (1.0 + tol) / q);
    let mut seen_min = f64::INFINITY;
    let mut seen_max = f64::NEG_INFINITY;
    for i in 0..PROFILE_SAMPLES {
        let t = lo + (hi - lo) * i as f64 / (PROFILE_SAMPLES - 1) as f64;
        let a = profile.eval(t);
        if !(a >= min_ok && a <= max_ok) {
            return Err(Error::Precondition(format!(
                "profile value {a} at t = {t} outside [{q}, {}]",
                1.0 / q
            )));
        }
        seen_min = seen_min.min(a);
        seen_max = seen_max.max(a);
    }
    Ok(SeparableExample {
        n,
        q,
        profile,
        closed_form: false,
        conforming: q < 1.0 && seen_max - seen_min > 1e-9,
    })
}

impl SeparableExample {
    pub fn alpha(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&t| self.profile.eval(t)).collect()
    }

    fn coordinate_value(&self, xi: f64) -> f64 {
        match (&self.profile, self.closed_form) {
            (Profile::Cosine { c, d }, true) => {
                let s = (0.5 * xi).sin();
                0.5 * c * xi * xi + 2.0 * d * s * s
            }
            _ => {
                let profile = &self.profile;
                integrate(&|t| (xi - t) * profile.eval(t), 0.0, xi, QUADRATURE_TOL)
            }
        }
    }

    fn coordinate_slope(&self, xi: f64) -> f64 {
        match (&self.profile, self.closed_form) {
            (Profile::Cosine { c, d }, true) => c * xi + d * xi.sin(),
            _ => {
                let profile = &self.profile;
                integrate(&|t| profile.eval(t), 0.0, xi, QUADRATURE_TOL)
            }
        }
    }

    /// `ω(x) = Π α(xᵢ) / Σ α(xᵢ)`.
    pub fn omega(&self, x: &[f64]) -> f64 {
        let alpha = self.alpha(x);
        let product: f64 = alpha.iter().product();
        let sum: f64 = alpha.iter().sum();
        product / sum
    }

    /// Coefficient pinching `q^{n+1}/n ≤ ω ≤ q^{−n−1}/n`.
    pub fn omega_bounds(&self) -> (f64, f64) {
        let n = self.n as f64;
        let e = self.n as i32 + 1;
        (self.q.powi(e) / n, self.q.powi(-e) / n)
    }
}

impl ScalarField for SeparableExample {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| self.coordinate_value(xi)).sum()
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(x.iter().map(|&xi| self.coordinate_slope(xi)).collect())
    }

    fn hessian(&self, x: &[f64]) -> Option<SymmetricMatrix> {
        SymmetricMatrix::from_diagonal(&self.alpha(x)).ok()
    }
}

/// Free-function form of [`SeparableExample::omega`].
pub fn omega(ex: &SeparableExample, x: &[f64]) -> f64 {
    ex.omega(x)
}

/// `Sₙ − ω(x)·S₁`, which the example solves identically.
pub fn example_operator(ex: &SeparableExample) -> Result<HessianOperator> {
    let n = ex.n;
    if n < 2 {
        return Err(Error::invalid("n", "S_1 and S_n coincide for n = 1"));
    }
    let (mu1, mu2) = ex.omega_bounds();
    let inner = ex.clone();
    let field: Arc<dyn ScalarField> = Arc::new(FnField::new(n, move |x| -inner.omega(x)));
    HessianOperator::zero(n)?
        .with(1, ActiveCoefficient::field(field, Sign::Minus, mu1, mu2)?)?
        .with_constant(n, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthViolation {
    pub point: Vec<f64>,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthBoundsReport {
    pub holds: bool,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<GrowthViolation>,
}

const GROWTH_REL_TOL: f64 = 1e-12;

/// Checks `q‖x‖²/2 ≤ f(x) ≤ ‖x‖²/(2q)` at every sample except the origin.
pub fn growth_bounds_check(ex: &SeparableExample, samples: &[Vec<f64>]) -> Result<GrowthBoundsReport> {
    if samples.is_empty() {
        return Err(Error::invalid("samples", "need at least one sample point"));
    }
    let mut checked = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    for x in samples {
        if x.len() != ex.n {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: ex.n,
            });
        }
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if norm2 == 0.0 {
            skipped += 1;
            continue;
        }
        checked += 1;
        let value = ex.value(x);
        let lower = 0.5 * ex.q * norm2;
        let upper = 0.5 * norm2 / ex.q;
        if !(value >= lower * (1.0 - GROWTH_REL_TOL) && value <= upper * (1.0 + GROWTH_REL_TOL)) {
            violations.push(GrowthViolation {
                point: x.clone(),
                value,
                lower,
                upper,
            });
        }
    }
    Ok(GrowthBoundsReport {
        holds: violations.is_empty(),
        checked,
        skipped,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthVerdict {
    Subquadratic,
    Quadratic,
    Superquadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub radii: Vec<f64>,
    /// `max_u |f(R u)| / R²` per radius.
    pub ratios: Vec<f64>,
    pub verdict: GrowthVerdict,
}

const DIRECTION_SEED: u64 = 0x6772_6f77_7468;

/// `±eᵢ` followed by seeded uniform directions on the sphere.
pub fn sample_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::with_capacity(count);
    'axes: for i in 0..n {
        for s in [1.0, -1.0] {
            if dirs.len() == count {
                break 'axes;
            }
            let mut u = vec![0.0; n];
            u[i] = s;
            dirs.push(u);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
    while dirs.len() < count {
        let v: Vec<f64> = (0..n).map(|_| 2.0 * unit_f64(&mut rng) - 1.0).collect();
        let norm2: f64 = v.iter().map(|c| c * c).sum();
        if norm2 > 1e-6 && norm2 <= 1.0 {
            let norm = norm2.sqrt();
            dirs.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    dirs
}

/// Classifies growth from `max|f|/R²` along sampled rays.
///
/// Subquadratic: ratios fall by at least 2× from first to last radius and the
/// last is ≤ 1e−2. Quadratic: every ratio within ±20% of the last, positive
/// one. Superquadratic otherwise.
pub fn estimate_growth_order(f: &dyn ScalarField, radii: &[f64], directions: usize) -> Result<GrowthReport> {
    let n = f.dim();
    if radii.len() < 2 {
        return Err(Error::invalid("radii", "need at least two radii"));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) || !(radii[0] > 0.0) || !radii.iter().all(|r| r.is_finite()) {
        return Err(Error::invalid(
            "radii",
            "must be positive, finite and strictly ascending",
        ));
    }
    if directions < 2 * n {
        return Err(Error::invalid("directions", format!("need at least 2n = {}", 2 * n)));
    }
    let dirs = sample_directions(n, directions);
    let mut ratios = Vec::with_capacity(radii.len());
    let mut point = vec![0.0; n];
    for &r in radii {
        let mut best: f64 = 0.0;
        for u in &dirs {
            for (p, c) in point.iter_mut().zip(u) {
                *p = r * c;
            }
            let v = f.value(&point);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("field value at radius {r}"),
                    value: v,
                });
            }
            best = best.max(v.abs());
        }
        ratios.push(best / (r * r));
    }
    let first = ratios[0];
    let last = *ratios.last().unwrap();
    let verdict = if first >= 2.0 * last && last <= 1e-2 {
        GrowthVerdict::Subquadratic
    } else if last > 0.0 && ratios.iter().all(|&r| (r - last).abs() <= 0.2 * last) {
        GrowthVerdict::Quadratic
    } else {
        GrowthVerdict::Superquadratic
    };
    Ok(GrowthReport {
        radii: radii.to_vec(),
        ratios,
        verdict,
    })
}

/// `f(x) = a + ⟨b, x⟩ + ⟨x, A x⟩` with exact oracles; `Hess f = 2A`.
#[derive(Debug, Clone)]
pub struct QuadraticSolution {
    pub n: usize,
    pub a: f64,
    pub b: Vec<f64>,
    pub matrix: SymmetricMatrix,
}

pub fn make_quadratic_solution(n: usize, matrix: SymmetricMatrix, b: Vec<f64>, a: f64) -> Result<QuadraticSolution> {
    if matrix.dim() != n {
        return Err(Error::DimensionMismatch {
            left: matrix.dim(),
            right: n,
        });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            left: b.len(),
            right: n,
        });
    }
    if !a.is_finite() || !b.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("b", "affine terms must be finite"));
    }
    Ok(QuadraticSolution { n, a, b, matrix })
}

/// Rescales a positive definite `A` so that `det(Hess f) = det(2A) = 1`.
pub fn normalize_to_ma(n: usize, matrix: &SymmetricMatrix) -> Result<QuadraticSolution> {
    if matrix.dim() != n {
        return Err(Error::DimensionMismatch {
            left: matrix.dim(),
            right: n,
        });
    }
    if !(linalg::min_eigenvalue(matrix)? > 0.0) {
        return Err(Error::Precondition("matrix is not positive definite".into()));
    }
    let det = SymmSpectrum::of_matrix(&matrix.scale(2.0)?)?.s[n];
    let s = det.powf(-1.0 / n as f64);
    let scaled = matrix.scale(s)?;
    let check = SymmSpectrum::of_matrix(&scaled.scale(2.0)?)?.s[n];
    if (check - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "normalized determinant {check} drifted from 1 (ill-conditioned input)"
        )));
    }
    make_quadratic_solution(n, scaled, vec![0.0; n], 0.0)
}

impl ScalarField for QuadraticSolution {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        let linear: f64 = self.b.iter().zip(x).map(|(b, x)| b * x).sum();
        self.a + linear + self.matrix.quadratic_form(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let ax = self.matrix.mul_vec(x);
        Some(self.b.iter().zip(ax).map(|(b, v)| b + 2.0 * v).collect())
    }

    fn hessian(&self, _x: &[f64]) -> Option<SymmetricMatrix> {
        self.matrix.scale(2.0).ok()
    }
}
