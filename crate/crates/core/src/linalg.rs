//! Dense symmetric-matrix primitives.
//!
//! Matrices here are small (n ≤ 16) and always symmetric, so they are stored
//! as a packed lower triangle and diagonalized with cyclic Jacobi rotations.

use std::fmt;

use crate::error::{Error, Result};

/// Relative off-diagonal threshold used by the Jacobi solver when callers do
/// not ask for something specific.
pub const JACOBI_TOL: f64 = 1e-14;

/// Sweep cap for the Jacobi solver.
pub const MAX_SWEEPS: usize = 100;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Real symmetric `n × n` matrix stored as its lower triangle, row by row.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    lower: Vec<f64>,
}

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

fn check_finite(context: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            context: context.to_string(),
            value,
        })
    }
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(SymmetricMatrix {
            n,
            lower: vec![0.0; n * (n + 1) / 2],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Result<Self> {
        check_finite("scaled identity factor", c)?;
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.lower[packed_index(i, i)] = c;
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            check_finite("diagonal entry", d)?;
            m.lower[packed_index(i, i)] = d;
        }
        Ok(m)
    }

    /// Builds from the packed lower triangle `[a00, a10, a11, a20, ...]`.
    pub fn from_lower(n: usize, lower: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let expected = n * (n + 1) / 2;
        if lower.len() != expected {
            return Err(Error::WrongLength {
                expected,
                actual: lower.len(),
            });
        }
        for &v in &lower {
            check_finite("matrix entry", v)?;
        }
        Ok(SymmetricMatrix { n, lower })
    }

    /// Builds from full rows. The input must be square and exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::WrongLength {
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in 0..=i {
                let (lo, up) = (rows[i][j], rows[j][i]);
                check_finite("matrix entry", lo)?;
                check_finite("matrix entry", up)?;
                if lo != up {
                    return Err(Error::NotSymmetric {
                        row: j,
                        col: i,
                        upper: up,
                        lower: lo,
                    });
                }
                m.lower[packed_index(i, j)] = lo;
            }
        }
        Ok(m)
    }

    /// Builds from `entry(i, j)` evaluated on the lower triangle only.
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in 0..=i {
                let v = entry(i, j);
                check_finite("matrix entry", v)?;
                m.lower[packed_index(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[packed_index(i, j)]
    }

    pub fn packed(&self) -> &[f64] {
        &self.lower
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.sum_of_squares(true).sqrt()
    }

    fn sum_of_squares(&self, with_diagonal: bool) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                let v = self.get(i, j);
                s += 2.0 * v * v;
            }
            if with_diagonal {
                let d = self.get(i, i);
                s += d * d;
            }
        }
        s
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        let lower: Vec<f64> = self.lower.iter().map(|v| v * c).collect();
        Self::from_lower(self.n, lower)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let lower = self.lower.iter().zip(&other.lower).map(|(&a, &b)| op(a, b)).collect();
        Self::from_lower(self.n, lower)
    }

    /// `⟨x, A x⟩`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            s += self.get(i, i) * x[i] * x[i];
            for j in 0..i {
                s += 2.0 * self.get(i, j) * x[i] * x[j];
            }
        }
        s
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetricMatrix")
            .field("n", &self.n)
            .field("rows", &self.to_rows())
            .finish()
    }
}

/// Eigen-decomposition `A = Q Λ Qᵀ` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Row-major `n × n`; column `k` is the eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        let n = self.values.len();
        (0..n).map(|r| self.vectors[r * n + k]).collect()
    }

    /// Full rows of `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let n = self.values.len();
        let q = &self.vectors;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| q[i * n + k] * self.values[k] * q[j * n + k]).sum())
                    .collect()
            })
            .collect()
    }
}

/// Cyclic Jacobi eigen-decomposition.
///
/// Sweeps until the off-diagonal Frobenius norm drops to `tol · ‖A‖_F`, up to
/// [`MAX_SWEEPS`]. Rotations are applied in a fixed `(p, q)` order so the
/// result is bit-for-bit reproducible.
pub fn eigen_symmetric(a: &SymmetricMatrix, tol: f64) -> Result<Eigen> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let n = a.dim();
    let mut m: Vec<f64> = a.to_rows().into_iter().flatten().collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = tol * a.frobenius_norm();

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..p {
                s += 2.0 * m[p * n + q] * m[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&m);
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m[r * n + p];
                    let arq = m[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    m[r * n + p] = new_rp;
                    m[p * n + r] = new_rp;
                    m[r * n + q] = new_rq;
                    m[q * n + r] = new_rq;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
        off = off_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + dst] = v[r * n + src];
        }
    }
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn eigenvalues_symmetric(a: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    eigen_symmetric(a, tol).map(|e| e.values)
}

pub fn min_eigenvalue(a: &SymmetricMatrix) -> Result<f64> {
    Ok(eigenvalues_symmetric(a, JACOBI_TOL)?[0])
}

/// Scale used for all relative PSD tolerances.
#[inline]
pub fn psd_scale(a: &SymmetricMatrix) -> f64 {
    a.frobenius_norm().max(1.0)
}

/// `λ_min(A) ≥ −tol · max(1, ‖A‖_F)`.
pub fn is_psd(a: &SymmetricMatrix, tol: f64) -> Result<bool> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tol", format!("must be non-negative, got {tol}")));
    }
    Ok(min_eigenvalue(a)? >= -tol * psd_scale(a))
}

/// Loewner order `A ≤ B`, i.e. `B − A` is PSD.
pub fn loewner_leq(a: &SymmetricMatrix, b: &SymmetricMatrix, tol: f64) -> Result<bool> {
    is_psd(&b.sub(a)?, tol)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &SymmetricMatrix) -> f64 {
    let n = a.dim();
    let mut m: Vec<f64> = a.to_rows().into_iter().flatten().collect();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .unwrap_or(col);
        if m[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for r in (col + 1)..n {
            let factor = m[r * n + col] / d;
            for k in col..n {
                m[r * n + k] -= factor * m[col * n + k];
            }
        }
    }
    det
}

/// A real function on `ℝⁿ` with optional exact derivative oracles.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }

    fn hessian(&self, _x: &[f64]) -> Option<SymmetricMatrix> {
        None
    }
}

type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type HessianFn = Box<dyn Fn(&[f64]) -> SymmetricMatrix + Send + Sync>;

/// Closure-backed [`ScalarField`].
pub struct FnField {
    n: usize,
    value: ValueFn,
    gradient: Option<GradientFn>,
    hessian: Option<HessianFn>,
}

impl FnField {
    pub fn new(n: usize, value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        FnField {
            n,
            value: Box::new(value),
            gradient: None,
            hessian: None,
        }
    }

    pub fn with_gradient(mut self, gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(gradient));
        self
    }

    pub fn with_hessian(mut self, hessian: impl Fn(&[f64]) -> SymmetricMatrix + Send + Sync + 'static) -> Self {
        self.hessian = Some(Box::new(hessian));
        self
    }
}

impl ScalarField for FnField {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.gradient.as_ref().map(|g| g(x))
    }

    fn hessian(&self, x: &[f64]) -> Option<SymmetricMatrix> {
        self.hessian.as_ref().map(|h| h(x))
    }
}

/// Central second differences of `f` at `x`.
///
/// Diagonal entries use the 3-point stencil, off-diagonal entries the 4-point
/// cross stencil; only the lower triangle is computed.
pub fn hessian_fd(f: &dyn ScalarField, x: &[f64], h: f64) -> Result<SymmetricMatrix> {
    let n = f.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: n,
        });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("h", format!("step must be positive, got {h}")));
    }
    let eval = |p: &[f64]| -> Result<f64> {
        let v = f.value(p);
        check_finite("field value at stencil point", v).map(|_| v)
    };
    let f0 = eval(x)?;
    let mut p = x.to_vec();
    let h2 = h * h;

    let mut lower = vec![0.0; n * (n + 1) / 2];
    for i in 0..n {
        p[i] = x[i] + h;
        let fp = eval(&p)?;
        p[i] = x[i] - h;
        let fm = eval(&p)?;
        p[i] = x[i];
        lower[packed_index(i, i)] = (fp - 2.0 * f0 + fm) / h2;

        for j in 0..i {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                p[i] = x[i] + si * h;
                p[j] = x[j] + sj * h;
                let v = eval(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let fpp = corner(1.0, 1.0)?;
            let fpm = corner(1.0, -1.0)?;
            let fmp = corner(-1.0, 1.0)?;
            let fmm = corner(-1.0, -1.0)?;
            lower[packed_index(i, j)] = (fpp - fpm - fmp + fmm) / (4.0 * h2);
        }
    }
    SymmetricMatrix::from_lower(n, lower)
}

/// Exact Hessian when the field provides one, else [`hessian_fd`].
pub fn hessian_of(f: &dyn ScalarField, x: &[f64], h: f64) -> Result<SymmetricMatrix> {
    match f.hessian(x) {
        Some(hess) => {
            if hess.dim() != f.dim() {
                return Err(Error::DimensionMismatch {
                    left: hess.dim(),
                    right: f.dim(),
                });
            }
            Ok(hess)
        }
        None => hessian_fd(f, x, h),
    }
}
