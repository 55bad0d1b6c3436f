//! Independent numerical routes to the closed-form quantities of
//! [`graph`](crate::graph) and [`gauss_map`](crate::gauss_map).
//!
//! Each oracle consumes only first-order information (or values) of `f` and
//! differentiates numerically with fourth-order central stencils, so it
//! shares no algebra with the formulas it checks.

use crate::error::Result;
use crate::graph::{first_form, pq, tangent_frame, unit_normal, SurfaceField};
use crate::heisenberg::{covariant_of_invariant, AlgebraVector};

/// Default stencil spacing for the fourth-order oracles.
pub const ORACLE_STEP: f64 = 1e-3;

const OFFSETS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Weights of `f'` on the five-point stencil, before dividing by `h`.
const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
/// Weights of `f''`, before dividing by `h²`.
const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

fn apply(w: &[f64; 5], s: &[f64; 5]) -> f64 {
    w.iter().zip(s).map(|(a, b)| a * b).sum()
}

/// Partial derivatives up to order two of a scalar sampled on a 5×5 stencil.
#[derive(Debug, Clone, Copy)]
struct Partials {
    v: f64,
    x: f64,
    y: f64,
    xx: f64,
    xy: f64,
    yy: f64,
}

fn partials(s: &[[f64; 5]; 5], h: f64) -> Partials {
    // s[j][i]: j indexes y offsets, i indexes x offsets
    let row = s[2];
    let col = [s[0][2], s[1][2], s[2][2], s[3][2], s[4][2]];
    let dx_rows: Vec<f64> = s.iter().map(|r| apply(&D1, r) / h).collect();
    let dx_rows: [f64; 5] = dx_rows.try_into().unwrap();
    Partials {
        v: s[2][2],
        x: apply(&D1, &row) / h,
        y: apply(&D1, &col) / h,
        xx: apply(&D2, &row) / (h * h),
        xy: apply(&D1, &dx_rows) / h,
        yy: apply(&D2, &col) / (h * h),
    }
}

/// Gaussian curvature from `E, F, G` alone by the Brioschi formula.
pub fn brioschi_curvature(field: &dyn SurfaceField, x: f64, y: f64) -> Result<f64> {
    brioschi_curvature_with_step(field, x, y, ORACLE_STEP)
}

pub fn brioschi_curvature_with_step(field: &dyn SurfaceField, x: f64, y: f64, h: f64) -> Result<f64> {
    let mut e = [[0.0; 5]; 5];
    let mut f = [[0.0; 5]; 5];
    let mut g = [[0.0; 5]; 5];
    for (j, dy) in OFFSETS.iter().enumerate() {
        for (i, dx) in OFFSETS.iter().enumerate() {
            let (xs, ys) = (x + dx * h, y + dy * h);
            let ff = first_form(&field.jet(xs, ys)?, xs, ys);
            e[j][i] = ff.e;
            f[j][i] = ff.f;
            g[j][i] = ff.g;
        }
    }
    let (e, f, g) = (partials(&e, h), partials(&f, h), partials(&g, h));
    let a = [
        [-0.5 * e.yy + f.xy - 0.5 * g.xx, 0.5 * e.x, f.x - 0.5 * e.y],
        [f.y - 0.5 * g.x, e.v, f.v],
        [0.5 * g.y, f.v, g.v],
    ];
    let b = [[0.0, 0.5 * e.y, 0.5 * g.x], [0.5 * e.y, e.v, f.v], [0.5 * g.x, f.v, g.v]];
    let den = e.v * g.v - f.v * f.v;
    Ok((det3(&a) - det3(&b)) / (den * den))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `K = K_amb(T_pS) + det(shape operator)`, with the ambient sectional
/// curvature of the tangent plane equal to `1/4 - n₃²` for unit normal `n`.
pub fn gauss_equation_curvature(field: &dyn SurfaceField, x: f64, y: f64) -> Result<f64> {
    let jet = field.jet(x, y)?;
    let n3 = unit_normal(&jet, x, y).a3;
    let ff = crate::graph::FundamentalForms::at(&jet, x, y);
    Ok(0.25 - n3 * n3 + ff.second_det() / ff.first_det())
}

/// `(L, M, N)` as `-⟨∇_{X_i} η, X_j⟩`, with the covariant derivative built
/// from differences of the frame coefficients of `η` plus the connection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariantSecondForm {
    pub l: f64,
    /// `-⟨∇_{X_x} η, X_y⟩`.
    pub m_xy: f64,
    /// `-⟨∇_{X_y} η, X_x⟩`; equal to `m_xy` by self-adjointness.
    pub m_yx: f64,
    pub n: f64,
}

pub fn covariant_second_form(field: &dyn SurfaceField, x: f64, y: f64) -> Result<CovariantSecondForm> {
    let h = ORACLE_STEP;
    let normal_at = |xs: f64, ys: f64| -> Result<AlgebraVector> { Ok(unit_normal(&field.jet(xs, ys)?, xs, ys)) };
    let along = |dir: [f64; 2]| -> Result<AlgebraVector> {
        let mut acc = AlgebraVector::ZERO;
        for (k, o) in OFFSETS.iter().enumerate() {
            if D1[k] != 0.0 {
                acc = acc + (D1[k] / h) * normal_at(x + o * h * dir[0], y + o * h * dir[1])?;
            }
        }
        Ok(acc)
    };
    let jet = field.jet(x, y)?;
    let eta = unit_normal(&jet, x, y);
    let (xx, xy) = tangent_frame(&jet, x, y);
    let nabla_x = along([1.0, 0.0])? + covariant_of_invariant(xx, eta);
    let nabla_y = along([0.0, 1.0])? + covariant_of_invariant(xy, eta);
    Ok(CovariantSecondForm {
        l: -nabla_x.dot(xx),
        m_xy: -nabla_x.dot(xy),
        m_yx: -nabla_y.dot(xx),
        n: -nabla_y.dot(xy),
    })
}

/// Jacobian of `φ = (-p, -q)` by differences of first-order data, and its
/// determinant.
pub fn fd_gauss_jacobian(field: &dyn SurfaceField, x: f64, y: f64) -> Result<([[f64; 2]; 2], f64)> {
    let h = ORACLE_STEP;
    let phi = |xs: f64, ys: f64| -> Result<[f64; 2]> {
        let (p, q) = pq(&field.jet(xs, ys)?, xs, ys);
        Ok([-p, -q])
    };
    let mut jac = [[0.0; 2]; 2];
    for (col, dir) in [[1.0, 0.0], [0.0, 1.0]].iter().enumerate() {
        for (k, o) in OFFSETS.iter().enumerate() {
            if D1[k] == 0.0 {
                continue;
            }
            let s = phi(x + o * h * dir[0], y + o * h * dir[1])?;
            jac[0][col] += D1[k] / h * s[0];
            jac[1][col] += D1[k] / h * s[1];
        }
    }
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    Ok((jac, det))
}
