//! Deterministic point sets.
//!
//! Random points come from ChaCha8 seeded with `seed_from_u64`; each
//! coordinate is `lo + (hi − lo)·u` with `u = (next_u64 >> 11) · 2⁻⁵³`, drawn
//! axis by axis, point by point. That recipe is stable across platforms and
//! easy to replicate elsewhere.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Uniform double in `[0, 1)` from the top 53 bits of one `u64`.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_box(intervals: &[(f64, f64)]) -> Result<()> {
    if intervals.is_empty() {
        return Err(Error::InvalidBox("box has no axes".into()));
    }
    for (axis, &(lo, hi)) in intervals.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidBox(format!("axis {axis}: [{lo}, {hi}]")));
        }
    }
    Ok(())
}

/// Tensor grid in row-major order (last axis varies fastest). An axis with a
/// single point uses the interval midpoint.
pub fn grid_sample(intervals: &[(f64, f64)], counts: &[usize]) -> Result<Vec<Vec<f64>>> {
    check_box(intervals)?;
    if counts.len() != intervals.len() {
        return Err(Error::DimensionMismatch {
            left: counts.len(),
            right: intervals.len(),
        });
    }
    if counts.contains(&0) {
        return Err(Error::InvalidBox("grid count must be at least 1".into()));
    }
    let axes: Vec<Vec<f64>> = intervals
        .iter()
        .zip(counts)
        .map(|(&(lo, hi), &c)| {
            if c == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..c)
                    .map(|i| {
                        if i == c - 1 {
                            hi
                        } else {
                            lo + (hi - lo) * i as f64 / (c - 1) as f64
                        }
                    })
                    .collect()
            }
        })
        .collect();
    let total: usize = counts.iter().product();
    let mut points = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut p = vec![0.0; axes.len()];
        for (axis, slot) in p.iter_mut().enumerate().rev() {
            *slot = axes[axis][idx % counts[axis]];
            idx /= counts[axis];
        }
        points.push(p);
    }
    Ok(points)
}

/// `count` uniform points in the box, reproducible from `seed`.
pub fn random_sample(intervals: &[(f64, f64)], count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_box(intervals)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            intervals
                .iter()
                .map(|&(lo, hi)| lo + (hi - lo) * unit_f64(&mut rng))
                .collect()
        })
        .collect())
}

/// `[lo, hi]ⁿ` as a list of intervals.
pub fn cube(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    vec![(lo, hi); n]
}
