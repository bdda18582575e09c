//! Browser bindings for three interactive views: the lower-bound root as a
//! function of the ratio, a heatmap of the separable example, and the
//! touching-paraboloid probe. Errors come back as `{"error": ...}` JSON so the
//! functions stay callable from native tests.

use rigidity_core::families::{self, make_cosine_example};
use rigidity_core::harness::fields::sqrt_one_plus_norm2;
use rigidity_core::harness::probe::{rigidity_probe, ProbeSearch};
use rigidity_core::sigma0::{solve_sigma0, Sigma0Problem};
use rigidity_core::{ScalarField, SymmSpectrum};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn error_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

#[wasm_bindgen]
pub fn artifact_version() -> String {
    rigidity_core::ARTIFACT_VERSION.to_string()
}

/// `σ₀` at `steps` log-spaced ratios in `[ratio_min, ratio_max]`, as
/// `[r₀, σ₀(r₀), r₁, σ₀(r₁), …]`. Empty on invalid input.
#[wasm_bindgen]
pub fn sigma0_curve(n: usize, i1: usize, js: Vec<u32>, ratio_min: f64, ratio_max: f64, steps: usize) -> Vec<f64> {
    if steps == 0 || !(ratio_min >= 1.0 && ratio_max >= ratio_min && ratio_max.is_finite()) {
        return Vec::new();
    }
    let js: Vec<usize> = js.into_iter().map(|j| j as usize).collect();
    let (lo, hi) = (ratio_min.ln(), ratio_max.ln());
    let mut out = Vec::with_capacity(2 * steps);
    for i in 0..steps {
        let t = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
        let ratio = (lo + (hi - lo) * t).exp();
        let root = Sigma0Problem::new(n, i1, js.clone(), ratio).and_then(|p| solve_sigma0(&p, 1e-12));
        match root {
            Ok(s) => {
                out.push(ratio);
                out.push(s);
            }
            Err(_) => return Vec::new(),
        }
    }
    out
}

/// Row-major `res × res` samples of the two-dimensional cosine example on
/// `[−half_width, half_width]²` (y varies slowest). `quantity` is one of
/// `f`, `omega`, `s1`, `s2`, `residual`. Empty on invalid input.
#[wasm_bindgen]
pub fn example_heatmap(q: f64, half_width: f64, res: usize, quantity: &str) -> Vec<f64> {
    let Ok(ex) = make_cosine_example(2, q) else {
        return Vec::new();
    };
    if res < 2 || !(half_width > 0.0 && half_width.is_finite()) {
        return Vec::new();
    }
    let coord = |i: usize| -half_width + 2.0 * half_width * i as f64 / (res - 1) as f64;
    let mut out = Vec::with_capacity(res * res);
    for iy in 0..res {
        for ix in 0..res {
            let x = [coord(ix), coord(res - 1 - iy)];
            let h = ex.hessian(&x).expect("closed-form Hessian");
            let s = SymmSpectrum::of_matrix(&h).expect("finite Hessian");
            let v = match quantity {
                "f" => ex.value(&x),
                "omega" => families::omega(&ex, &x),
                "s1" => s.s[1],
                "s2" => s.s[2],
                "residual" => s.s[2] - families::omega(&ex, &x) * s.s[1],
                _ => return Vec::new(),
            };
            out.push(v);
        }
    }
    out
}

/// Runs the probe on `sqrt` (`√(1+‖x‖²)`) or `example` (cosine, parameter
/// `q`) in two dimensions and returns the report as JSON.
#[wasm_bindgen]
pub fn run_probe(field: &str, q: f64, eps: f64, half_width: f64, grid_points: usize) -> String {
    let f: Box<dyn ScalarField> = match field {
        "sqrt" => Box::new(sqrt_one_plus_norm2(2)),
        "example" => match make_cosine_example(2, q) {
            Ok(ex) => Box::new(ex),
            Err(e) => return error_json(e),
        },
        other => return error_json(format!("unknown field `{other}`")),
    };
    if !(half_width > 0.0 && half_width.is_finite()) {
        return error_json("half width must be positive");
    }
    let mut search = ProbeSearch::cube(2, half_width);
    search.grid_points = grid_points;
    match rigidity_probe(f.as_ref(), eps, &search, 1e-8, None) {
        Ok(r) => json!({
            "outcome": r.outcome,
            "x0": r.x0,
            "g_min": r.g_min,
            "touching_ok": r.touching_ok,
            "hessian_eigenvalues": r.hessian_eigenvalues,
            "passed": r.passed(),
            "evaluations": r.evaluations,
        })
        .to_string(),
        Err(e) => error_json(e),
    }
}
