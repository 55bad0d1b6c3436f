//! Browser bindings for three interactive views: a curvature heatmap, the
//! Gauss map drawn in the Poincaré disk, and translation-family profiles.
//!
//! The `*_values` functions are plain Rust so they can be tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors to strings.

use heisenberg_surfaces::expr::parse;
use heisenberg_surfaces::gans::gans_to_disk;
use heisenberg_surfaces::gauss_map::{gauss_det, gauss_map};
use heisenberg_surfaces::graph::{self, ExprSurface, Grid, Rect, SurfaceField};
use heisenberg_surfaces::translation::{
    family_curves, flat_residual_from_jets, minimal_residual_from_jets, FlatGeneral, Normalization, TranslationFamily,
};
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn grid(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Res<Grid> {
    let rect = Rect::new(x0, x1, y0, y1).map_err(|e| e.to_string())?;
    Grid::new(rect, n, n).map_err(|e| e.to_string())
}

fn field(src: &str) -> Res<ExprSurface> {
    parse(src).map(ExprSurface).map_err(|e| e.to_string())
}

/// `n·n` samples of `K`, `H` or `det` in row-major order (y outer). Points
/// where `f` cannot be evaluated come back as NaN.
pub fn curvature_values(src: &str, quantity: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Res<Vec<f64>> {
    let f = field(src)?;
    let pick: fn(&graph::CurvatureSample) -> f64 = match quantity {
        "K" => |s| s.k,
        "H" => |s| s.h,
        "det" => |s| s.det_gauss,
        other => return Err(format!("unknown quantity '{other}' (use K, H or det)")),
    };
    Ok(grid(x0, x1, y0, y1, n)?
        .points()
        .map(|(x, y)| f.jet(x, y).map(|j| pick(&graph::curvature_sample(&j, x, y))).unwrap_or(f64::NAN))
        .collect())
}

/// For each grid point: disk coordinates of the Gauss map and `det dφ`,
/// flattened as `[dx, dy, det, ...]`.
pub fn gauss_disk_values(src: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Res<Vec<f64>> {
    let f = field(src)?;
    let mut out = Vec::with_capacity(3 * n * n);
    for (x, y) in grid(x0, x1, y0, y1, n)?.points() {
        match f.jet(x, y) {
            Ok(j) => {
                let d = gans_to_disk(gauss_map(&j, x, y));
                out.extend([d.x, d.y, gauss_det(&j)]);
            }
            Err(_) => out.extend([f64::NAN; 3]),
        }
    }
    Ok(out)
}

/// Parameters by tag: `minimal-eqm [C]`, `flat-zero-det [A, C]`,
/// `flat-power [A, A1, B, paper_literal]`, `flat-general [C1, C2, C3, K1, K2]`.
pub fn family_from(tag: &str, p: &[f64]) -> Res<TranslationFamily> {
    let get = |i: usize| p.get(i).copied().ok_or_else(|| format!("{tag} needs {} parameters", i + 1));
    let fam = match tag {
        "minimal-eqm" => TranslationFamily::MinimalEqm { c: get(0)? },
        "flat-zero-det" => TranslationFamily::FlatZeroDet { a: get(0)?, c: get(1)? },
        "flat-power" => TranslationFamily::FlatPower {
            a: get(0)?,
            a1: get(1)?,
            b: get(2)?,
            normalization: if p.get(3).copied().unwrap_or(0.0) != 0.0 {
                Normalization::PaperLiteral
            } else {
                Normalization::SecondDerivative
            },
        },
        "flat-general" => TranslationFamily::FlatGeneral(FlatGeneral {
            c1: get(0)?,
            c2: get(1)?,
            c3: get(2)?,
            k1: get(3)?,
            k2: get(4)?,
            ..FlatGeneral::default()
        }),
        other => return Err(format!("unknown family '{other}'")),
    };
    fam.validate().map_err(|e| e.to_string())?;
    Ok(fam)
}

/// `n` rows of `[y, v, v', max_x |residual|]` over `y ∈ [y0, y1]`, with the
/// residual (minimal or flat, by family) maximised over `x ∈ [-1, 1]`.
/// For the general family `v` starts at `y0` with `v = 0`, `v' = 1`.
pub fn family_profile_values(tag: &str, params: &[f64], y0: f64, y1: f64, n: usize) -> Res<Vec<f64>> {
    if n < 2 || !(y0 < y1) {
        return Err("need y0 < y1 and at least 2 samples".into());
    }
    let mut fam = family_from(tag, params)?;
    if let TranslationFamily::FlatGeneral(g) = &mut fam {
        g.y_init = y0;
    }
    let pair = family_curves(&fam, (y0, y1)).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (0..=20).map(|k| -1.0 + 0.1 * k as f64).collect();
    let mut out = Vec::with_capacity(4 * n);
    for k in 0..n {
        let y = if k == n - 1 { y1 } else { y0 + (y1 - y0) * k as f64 / (n - 1) as f64 };
        let Ok(v) = pair.v.jet(y) else {
            out.extend([y, f64::NAN, f64::NAN, f64::NAN]);
            continue;
        };
        let mut worst = 0.0f64;
        for &x in &xs {
            let r = match pair.u.jet(x) {
                Ok(u) if fam.is_minimal() => minimal_residual_from_jets(&u, &v, y),
                Ok(u) => flat_residual_from_jets(&u, &v, y),
                Err(_) => f64::NAN,
            };
            worst = worst.max(r.abs());
        }
        out.extend([y, v.value, v.d1, worst]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn curvature_grid(src: &str, quantity: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    curvature_values(src, quantity, x0, x1, y0, y1, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gauss_disk(src: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    gauss_disk_values(src, x0, x1, y0, y1, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn family_profile(tag: &str, params: &[f64], y0: f64, y1: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    family_profile_values(tag, params, y0, y1, n).map_err(|e| JsValue::from_str(&e))
}
