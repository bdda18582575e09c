//! Derivative-free box-constrained minimization.

/// Result of a [`compass_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Compass (coordinate pattern) search inside `[lower, upper]`.
///
/// Polls `±step·eᵢ` in a fixed order, moves on the first strict improvement
/// and halves the step when a full poll fails, stopping once the step drops
/// below `min_step`. Trial points are clamped to the box.
pub fn compass_search(
    objective: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    initial_step: f64,
    min_step: f64,
) -> SearchResult {
    let mut x = x0.to_vec();
    let mut fx = objective(&x);
    let mut evaluations = 1;
    let mut step = initial_step;
    let mut trial = x.clone();
    while step >= min_step && step > 0.0 {
        let mut improved = false;
        'poll: for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                trial[i] = (x[i] + dir * step).clamp(lower[i], upper[i]);
                if trial[i] == x[i] {
                    continue;
                }
                let ft = objective(&trial);
                evaluations += 1;
                if ft < fx {
                    x.copy_from_slice(&trial);
                    fx = ft;
                    improved = true;
                    break 'poll;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    SearchResult {
        x,
        value: fx,
        evaluations,
    }
}
