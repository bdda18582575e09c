//! Reference fields used by the probe and growth scenarios.

use crate::linalg::{FnField, SymmetricMatrix};

/// `√(1 + ‖x‖²)`: convex with linear growth.
pub fn sqrt_one_plus_norm2(n: usize) -> FnField {
    let s = |x: &[f64]| (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt();
    FnField::new(n, move |x| s(x))
        .with_gradient(move |x| {
            let r = s(x);
            x.iter().map(|v| v / r).collect()
        })
        .with_hessian(move |x| {
            let r = s(x);
            let r3 = r * r * r;
            SymmetricMatrix::from_fn(x.len(), |i, j| {
                let diag = if i == j { 1.0 / r } else { 0.0 };
                diag - x[i] * x[j] / r3
            })
            .expect("finite Hessian")
        })
}

/// `‖x‖² / 2`.
pub fn half_norm2(n: usize) -> FnField {
    FnField::new(n, |x| 0.5 * x.iter().map(|v| v * v).sum::<f64>())
        .with_gradient(|x| x.to_vec())
        .with_hessian(|x| SymmetricMatrix::identity(x.len()).expect("n >= 1"))
}

/// `a + ⟨b, x⟩`.
pub fn affine(b: Vec<f64>, a: f64) -> FnField {
    let n = b.len();
    let grad = b.clone();
    FnField::new(n, move |x| a + b.iter().zip(x).map(|(b, x)| b * x).sum::<f64>())
        .with_gradient(move |_| grad.clone())
        .with_hessian(|x| SymmetricMatrix::zeros(x.len()).expect("n >= 1"))
}
