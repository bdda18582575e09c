//! Touching-paraboloid probe.
//!
//! For convex `f` and `ε > 0`, minimize `g(x) = (ε/2)‖x‖² − f(x)` over a box.
//! At an interior minimizer `Hess g(x₀) ≥ 0`, i.e. `Hess f(x₀) ≤ εI`, and the
//! majorization bound `Sₖ(Hess f(x₀)) ≤ εᵏ C(n,k)` follows. A minimizer on
//! the box boundary means `g` may keep decreasing outside, so the probe
//! reports it as inconclusive.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::sampling::grid_sample;
use crate::linalg::{self, ScalarField, SymmetricMatrix};
use crate::minimize::compass_search;
use crate::operator::HessianOperator;
use crate::symmfn::{majorization_bound, MajorizationReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSearch {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub grid_points: usize,
    pub step_tol: f64,
    pub fd_step: f64,
    /// Grid points per axis for the convexity spot check.
    pub convexity_points: usize,
}

impl ProbeSearch {
    pub fn cube(n: usize, half_width: f64) -> Self {
        ProbeSearch {
            lower: vec![-half_width; n],
            upper: vec![half_width; n],
            grid_points: 41,
            step_tol: 1e-8,
            fd_step: linalg::DEFAULT_FD_STEP,
            convexity_points: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeOutcome {
    Interior,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub eps: f64,
    pub x0: Vec<f64>,
    pub g_min: f64,
    /// Constant subtracted from `f` so that `f ≥ 0` on the sampled grid.
    pub shift: f64,
    pub outcome: ProbeOutcome,
    /// `Hess f(x₀) ≤ εI` within tolerance.
    pub touching_ok: bool,
    pub hessian_eigenvalues: Vec<f64>,
    /// Indices `k` the majorization verdict covers.
    pub checked_indices: Vec<usize>,
    pub majorization: Option<MajorizationReport>,
    pub majorization_ok: Option<bool>,
    pub evaluations: usize,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.outcome == ProbeOutcome::Interior && self.touching_ok && self.majorization_ok == Some(true)
    }
}

fn hessian_at(f: &dyn ScalarField, x: &[f64], h: f64) -> Result<SymmetricMatrix> {
    linalg::hessian_of(f, x, h)
}

pub fn rigidity_probe(
    f: &dyn ScalarField,
    eps: f64,
    search: &ProbeSearch,
    tol: f64,
    operator: Option<&HessianOperator>,
) -> Result<ProbeReport> {
    let n = f.dim();
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("eps", format!("must be positive, got {eps}")));
    }
    if search.lower.len() != n || search.upper.len() != n {
        return Err(Error::DimensionMismatch {
            left: search.lower.len(),
            right: n,
        });
    }
    if search.grid_points < 2 {
        return Err(Error::invalid("grid_points", "need at least 2"));
    }
    if let Some(op) = operator {
        if op.dim() != n {
            return Err(Error::DimensionMismatch {
                left: op.dim(),
                right: n,
            });
        }
    }
    let intervals: Vec<(f64, f64)> = search.lower.iter().copied().zip(search.upper.iter().copied()).collect();

    for x in grid_sample(&intervals, &vec![search.convexity_points.max(1); n])? {
        let h = hessian_at(f, &x, search.fd_step)?;
        if !linalg::is_psd(&h, tol.max(1e-8))? {
            return Err(Error::Precondition(format!("field is not convex near {x:?}")));
        }
    }

    let grid = grid_sample(&intervals, &vec![search.grid_points; n])?;
    let values: Vec<f64> = grid.iter().map(|x| f.value(x)).collect();
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "field value on probe grid".into(),
            value: *bad,
        });
    }
    let shift = values.iter().copied().fold(f64::INFINITY, f64::min);
    let g = |x: &[f64]| -> f64 {
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        0.5 * eps * norm2 - (f.value(x) - shift)
    };
    let (start, _) = grid
        .iter()
        .zip(&values)
        .map(|(x, v)| {
            let norm2: f64 = x.iter().map(|c| c * c).sum();
            (x, 0.5 * eps * norm2 - (v - shift))
        })
        .fold(
            (&grid[0], f64::INFINITY),
            |best, cand| if cand.1 < best.1 { cand } else { best },
        );

    let spacing = intervals
        .iter()
        .map(|(lo, hi)| (hi - lo) / (search.grid_points - 1) as f64)
        .fold(0.0, f64::max);
    let found = compass_search(g, start, &search.lower, &search.upper, spacing, search.step_tol);

    let on_boundary = found.x.iter().zip(&intervals).any(|(&x, &(lo, hi))| {
        let margin = 1e-6 * (hi - lo);
        x - lo <= margin || hi - x <= margin
    });
    let outcome = if on_boundary {
        ProbeOutcome::Inconclusive
    } else {
        ProbeOutcome::Interior
    };

    let hess = hessian_at(f, &found.x, search.fd_step)?;
    let hessian_eigenvalues = linalg::eigenvalues_symmetric(&hess, linalg::JACOBI_TOL)?;
    let eps_id = SymmetricMatrix::scaled_identity(n, eps)?;
    let touching_ok = linalg::loewner_leq(&hess, &eps_id, tol)?;

    let checked_indices = match operator {
        Some(op) => op.index_set(),
        None => (1..=n).collect(),
    };
    let (majorization, majorization_ok) = if outcome == ProbeOutcome::Interior && touching_ok {
        match majorization_bound(&hess, eps, tol) {
            Ok(rep) => {
                let ok = checked_indices.iter().all(|&k| rep.per_k_slack[k - 1] >= -tol);
                (Some(rep), Some(ok))
            }
            Err(Error::Precondition(_)) => (None, Some(false)),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };

    Ok(ProbeReport {
        eps,
        x0: found.x,
        g_min: found.value,
        shift,
        outcome,
        touching_ok,
        hessian_eigenvalues,
        checked_indices,
        majorization,
        majorization_ok,
        evaluations: found.evaluations + grid.len(),
    })
}
