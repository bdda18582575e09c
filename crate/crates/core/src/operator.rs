//! Hessian operators `L[f] = Σᵢ aᵢ(x)·Sᵢ(Hess f)`.
//!
//! Coefficient indices are 1-based throughout, matching `Sᵢ`: index `i`
//! multiplies `Sᵢ`, and `1 ≤ i ≤ n`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, FnField, ScalarField, SymmetricMatrix};
use crate::symmfn::SymmSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Strict sign of `v`; zero and NaN have none.
    pub fn of(v: f64) -> Option<Sign> {
        if v > 0.0 {
            Some(Sign::Plus)
        } else if v < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// The function `x ↦ aᵢ(x)`, with its sign included.
#[derive(Clone)]
pub enum CoefficientFn {
    Constant(f64),
    Field(Arc<dyn ScalarField>),
}

impl CoefficientFn {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            CoefficientFn::Constant(c) => *c,
            CoefficientFn::Field(f) => f.value(x),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            CoefficientFn::Constant(c) => Some(*c),
            CoefficientFn::Field(_) => None,
        }
    }
}

impl fmt::Debug for CoefficientFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientFn::Constant(c) => write!(f, "Constant({c})"),
            CoefficientFn::Field(field) => write!(f, "Field(dim = {})", field.dim()),
        }
    }
}

/// A coefficient pinched as `μ₁ ≤ |aᵢ(x)| ≤ μ₂` with a declared sign.
#[derive(Debug, Clone)]
pub struct ActiveCoefficient {
    pub a: CoefficientFn,
    pub sign: Sign,
    pub mu1: f64,
    pub mu2: f64,
}

impl ActiveCoefficient {
    /// Constant coefficient with `μ₁ = μ₂ = |value|`.
    pub fn constant(value: f64) -> Result<Self> {
        let sign = Sign::of(value)
            .filter(|_| value.is_finite())
            .ok_or_else(|| Error::invalid("value", format!("must be finite and nonzero, got {value}")))?;
        Self::new(CoefficientFn::Constant(value), sign, value.abs(), value.abs())
    }

    pub fn field(field: Arc<dyn ScalarField>, sign: Sign, mu1: f64, mu2: f64) -> Result<Self> {
        Self::new(CoefficientFn::Field(field), sign, mu1, mu2)
    }

    pub fn new(a: CoefficientFn, sign: Sign, mu1: f64, mu2: f64) -> Result<Self> {
        if !(mu1.is_finite() && mu2.is_finite() && mu1 > 0.0 && mu1 <= mu2) {
            return Err(Error::invalid(
                "mu",
                format!("need 0 < mu1 <= mu2 < inf, got mu1 = {mu1}, mu2 = {mu2}"),
            ));
        }
        Ok(ActiveCoefficient { a, sign, mu1, mu2 })
    }
}

#[derive(Debug, Clone)]
pub enum Coefficient {
    Zero,
    Active(ActiveCoefficient),
}

#[derive(Debug, Clone)]
pub struct HessianOperator {
    n: usize,
    coeffs: Vec<Coefficient>,
}

impl HessianOperator {
    /// The operator with every coefficient identically zero.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(HessianOperator {
            n,
            coeffs: vec![Coefficient::Zero; n],
        })
    }

    /// Sets coefficient `index` (1-based).
    pub fn with(mut self, index: usize, coeff: ActiveCoefficient) -> Result<Self> {
        if index == 0 || index > self.n {
            return Err(Error::IndexOutOfRange {
                k: index,
                lo: 1,
                hi: self.n,
            });
        }
        if let CoefficientFn::Field(f) = &coeff.a {
            if f.dim() != self.n {
                return Err(Error::DimensionMismatch {
                    left: f.dim(),
                    right: self.n,
                });
            }
        }
        self.coeffs[index - 1] = Coefficient::Active(coeff);
        Ok(self)
    }

    pub fn with_constant(self, index: usize, value: f64) -> Result<Self> {
        self.with(index, ActiveCoefficient::constant(value)?)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficient multiplying `S_index`.
    pub fn coefficient(&self, index: usize) -> Option<&Coefficient> {
        index.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    fn active(&self) -> impl Iterator<Item = (usize, &ActiveCoefficient)> {
        self.coeffs.iter().enumerate().filter_map(|(i, c)| match c {
            Coefficient::Active(a) => Some((i + 1, a)),
            Coefficient::Zero => None,
        })
    }

    /// The index set `J` of active coefficients, ascending.
    pub fn index_set(&self) -> Vec<usize> {
        self.active().map(|(i, _)| i).collect()
    }

    /// Coefficient values `a₁ … aₙ` when all are constant (zeros included).
    pub fn constant_coefficients(&self) -> Option<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Zero => Some(0.0),
                Coefficient::Active(a) => a.a.as_constant(),
            })
            .collect()
    }

    /// Multiplies every coefficient by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("c", format!("must be positive, got {c}")));
        }
        let n = self.n;
        let coeffs = self
            .coeffs
            .iter()
            .map(|coeff| match coeff {
                Coefficient::Zero => Ok(Coefficient::Zero),
                Coefficient::Active(a) => {
                    let scaled = match &a.a {
                        CoefficientFn::Constant(v) => CoefficientFn::Constant(c * v),
                        CoefficientFn::Field(f) => {
                            let f = Arc::clone(f);
                            CoefficientFn::Field(Arc::new(FnField::new(n, move |x| c * f.value(x))))
                        }
                    };
                    ActiveCoefficient::new(scaled, a.sign, c * a.mu1, c * a.mu2).map(Coefficient::Active)
                }
            })
            .collect::<Result<_>>()?;
        Ok(HessianOperator { n, coeffs })
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: self.n,
            });
        }
        Ok(())
    }

    /// `Σ_{i∈J} aᵢ(x)·Sᵢ` for a precomputed spectrum.
    pub fn residual_spectrum(&self, x: &[f64], spec: &SymmSpectrum) -> Result<f64> {
        self.check_point(x)?;
        if spec.n != self.n {
            return Err(Error::DimensionMismatch {
                left: spec.n,
                right: self.n,
            });
        }
        let mut total = 0.0;
        for (i, coeff) in self.active() {
            let a = coeff.a.eval(x);
            if !a.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("coefficient a_{i}"),
                    value: a,
                });
            }
            total += a * spec.s[i];
        }
        Ok(total)
    }

    /// `L(A)` at the point `x`.
    pub fn residual_matrix(&self, x: &[f64], a: &SymmetricMatrix) -> Result<f64> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: self.n,
            });
        }
        self.residual_spectrum(x, &SymmSpectrum::of_matrix(a)?)
    }

    /// `L[f](x)`, using the exact Hessian of `f` when available.
    pub fn residual_field(&self, f: &dyn ScalarField, x: &[f64], fd_step: f64) -> Result<f64> {
        let hess = linalg::hessian_of(f, x, fd_step)?;
        self.residual_matrix(x, &hess)
    }

    /// Samples the pinching condition on every active coefficient.
    pub fn validate_condition_q(&self, samples: &[Vec<f64>], tol: f64) -> Result<ConditionQReport> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "need at least one sample point"));
        }
        let mut violations = Vec::new();
        for x in samples {
            self.check_point(x)?;
            for (index, coeff) in self.active() {
                let value = coeff.a.eval(x);
                let magnitude = value.abs();
                let mut flag = |kind| {
                    violations.push(QViolation {
                        index,
                        point: x.clone(),
                        kind,
                        value,
                    })
                };
                if !(magnitude >= coeff.mu1 * (1.0 - tol)) {
                    flag(ViolationKind::BelowMu1);
                }
                if !(magnitude <= coeff.mu2 * (1.0 + tol)) {
                    flag(ViolationKind::AboveMu2);
                }
                if Sign::of(value) != Some(coeff.sign) {
                    flag(ViolationKind::SignFlip);
                }
            }
        }
        Ok(ConditionQReport {
            ok: violations.is_empty(),
            checked: samples.len(),
            violations,
        })
    }

    /// Splits `J` by declared sign.
    ///
    /// The side holding `min J` becomes `plus_side`, so its leader `i₁` is
    /// always below the other side's leader `j₁`.
    pub fn classify_lemma_case(&self) -> Result<LemmaCase> {
        let first = self.active().next().ok_or(Error::EmptyIndexSet)?;
        let leader_sign = first.1.sign;
        let (same, other): (Vec<_>, Vec<_>) = self.active().partition(|(_, c)| c.sign == leader_sign);
        if other.is_empty() {
            return Ok(LemmaCase::AllSameSign { sign: leader_sign });
        }
        let leader_mu1 = first.1.mu1;
        let max_mu2 = other.iter().map(|(_, c)| c.mu2).fold(f64::MIN, f64::max);
        Ok(LemmaCase::Split(SignSplit {
            plus_side: same.iter().map(|(i, _)| *i).collect(),
            minus_side: other.iter().map(|(i, _)| *i).collect(),
            ratio_bound: max_mu2 / leader_mu1,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    BelowMu1,
    AboveMu2,
    SignFlip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QViolation {
    pub index: usize,
    pub point: Vec<f64>,
    pub kind: ViolationKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionQReport {
    pub ok: bool,
    pub checked: usize,
    pub violations: Vec<QViolation>,
}

/// Partition of `J` into two opposite-sign sides, leaders `i₁ < j₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignSplit {
    pub plus_side: Vec<usize>,
    pub minus_side: Vec<usize>,
    /// `max_{j ∈ minus} μ₂(j) / μ₁(i₁)`.
    pub ratio_bound: f64,
}

impl SignSplit {
    pub fn leader(&self) -> usize {
        self.plus_side[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaCase {
    AllSameSign { sign: Sign },
    Split(SignSplit),
}

/// `L[f] = rhs`, kept separate so `L` itself stays homogeneous.
#[derive(Debug, Clone)]
pub struct Equation {
    pub operator: HessianOperator,
    pub rhs: f64,
}

impl Equation {
    pub fn homogeneous(operator: HessianOperator) -> Self {
        Equation { operator, rhs: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn residual_matrix(&self, x: &[f64], a: &SymmetricMatrix) -> Result<f64> {
        Ok(self.operator.residual_matrix(x, a)? - self.rhs)
    }

    pub fn residual_field(&self, f: &dyn ScalarField, x: &[f64], fd_step: f64) -> Result<f64> {
        Ok(self.operator.residual_field(f, x, fd_step)? - self.rhs)
    }
}

/// `Sₙ − S₁ = det Hess f − Δf`.
pub fn builtin_eq3(n: usize) -> Result<HessianOperator> {
    if n < 2 {
        return Err(Error::invalid("n", format!("need n >= 2, got {n}")));
    }
    HessianOperator::zero(n)?.with_constant(1, -1.0)?.with_constant(n, 1.0)
}

/// `Σ_{k=0}^{⌊(n−1)/2⌋} (−1)ᵏ S_{2k+1}`.
pub fn builtin_eq4(n: usize) -> Result<HessianOperator> {
    if n < 1 {
        return Err(Error::invalid("n", "need n >= 1"));
    }
    let mut op = HessianOperator::zero(n)?;
    for k in 0..=(n - 1) / 2 {
        let value = if k % 2 == 0 { 1.0 } else { -1.0 };
        op = op.with_constant(2 * k + 1, value)?;
    }
    Ok(op)
}

/// Monge–Ampère `det Hess f = 1`.
pub fn builtin_theorem_a(n: usize) -> Result<Equation> {
    if n < 2 {
        return Err(Error::invalid("n", format!("need n >= 2, got {n}")));
    }
    Ok(Equation {
        operator: HessianOperator::zero(n)?.with_constant(n, 1.0)?,
        rhs: 1.0,
    })
}
