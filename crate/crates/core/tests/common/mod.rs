#![allow(dead_code, clippy::needless_range_loop)]

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidity_core::SymmetricMatrix;

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    /// Standard normal by Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u = 1.0 - self.unit();
        let v = self.unit();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }
}

pub fn dense(a: &SymmetricMatrix) -> Vec<Vec<f64>> {
    a.to_rows()
}

pub fn random_symmetric(rng: &mut Rng, n: usize, lo: f64, hi: f64) -> SymmetricMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.uniform(lo, hi);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    SymmetricMatrix::from_rows(&rows).unwrap()
}

/// Orthogonal matrix from Gram–Schmidt on a Gaussian matrix; rows are the basis.
pub fn random_orthogonal(rng: &mut Rng, n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// `Qᵀ diag(λ) Q` for a random orthogonal `Q`.
pub fn with_spectrum(rng: &mut Rng, eigs: &[f64]) -> SymmetricMatrix {
    let n = eigs.len();
    let q = random_orthogonal(rng, n);
    SymmetricMatrix::from_fn(n, |i, j| (0..n).map(|k| q[k][i] * eigs[k] * q[k][j]).sum()).unwrap()
}

pub fn random_psd(rng: &mut Rng, n: usize, max_eig: f64) -> (SymmetricMatrix, Vec<f64>) {
    let eigs: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, max_eig)).collect();
    (with_spectrum(rng, &eigs), eigs)
}

/// Determinant by Laplace expansion along the first row.
pub fn det_laplace(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    match n {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..n)
            .map(|c| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][c] * det_laplace(&minor)
            })
            .sum(),
    }
}

/// `Sₖ(A)` as the sum of all k×k principal minors; `S₀ = 1`.
pub fn principal_minor_sum(a: &[Vec<f64>], k: usize) -> f64 {
    let n = a.len();
    if k == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
        total += det_laplace(&sub);
    }
    total
}

/// `eₖ(λ)` by subset enumeration of products.
pub fn subset_product_sum(eigs: &[f64], k: usize) -> f64 {
    let n = eigs.len();
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| eigs[i]).product::<f64>())
        .sum()
}

/// `|a − b| / max(|b|, 1)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
