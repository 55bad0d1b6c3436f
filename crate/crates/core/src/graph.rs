//! Graphs `z = f(x, y)` in the Heisenberg group: tangent frame, unit normal,
//! fundamental forms, mean and Gauss curvature.
//!
//! Everything is expressed through `p = f_x + y/2` and `q = f_y - x/2`, the
//! `E3` components of the coordinate tangents `X_x = E1 + p E3` and
//! `X_y = E2 + q E3`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{jet2_at, Expr, Jet2};
use crate::heisenberg::AlgebraVector;

/// Anything that can produce second-order jets of a height function.
pub trait SurfaceField: Send + Sync {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2>;

    fn value(&self, x: f64, y: f64) -> Result<f64> {
        self.jet(x, y).map(|j| j.f)
    }
}

/// Surface backed by a parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprSurface(pub Expr);

impl SurfaceField for ExprSurface {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        jet2_at(&self.0, x, y)
    }

    fn value(&self, x: f64, y: f64) -> Result<f64> {
        self.0.eval(x, y)
    }
}

impl<F: Fn(f64, f64) -> Result<Jet2> + Send + Sync> SurfaceField for F {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        self(x, y)
    }
}

/// Closed rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
        if !ok {
            return Err(Error::param(format!(
                "degenerate domain [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }
}

/// Uniform grid over a rectangle, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::param(format!("grid resolution must be at least 2x2, got {nx}x{ny}")));
        }
        Ok(Self { rect, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        lerp(self.rect.x0, self.rect.x1, i, self.nx)
    }

    pub fn y(&self, j: usize) -> f64 {
        lerp(self.rect.y0, self.rect.y1, j, self.ny)
    }

    /// Points in row-major order: `y` outer, `x` inner.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (self.x(i), self.y(j))))
    }
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64) / ((n - 1) as f64)
    }
}

/// A height field restricted to a rectangular domain.
#[derive(Clone)]
pub struct SurfacePatch {
    pub field: Arc<dyn SurfaceField>,
    pub domain: Rect,
}

impl SurfacePatch {
    pub fn new(field: Arc<dyn SurfaceField>, domain: Rect) -> Self {
        Self { field, domain }
    }

    pub fn from_expr(e: Expr, domain: Rect) -> Self {
        Self::new(Arc::new(ExprSurface(e)), domain)
    }

    pub fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        self.field.jet(x, y)
    }
}

impl std::fmt::Debug for SurfacePatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfacePatch").field("domain", &self.domain).finish_non_exhaustive()
    }
}

/// Which of the two unit normals orients the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `η` with positive `E3` component.
    #[default]
    Up,
    Down,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Up => 1.0,
            Orientation::Down => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub p: f64,
    pub q: f64,
    pub w: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl FundamentalForms {
    pub fn at(jet: &Jet2, x: f64, y: f64) -> Self {
        Self::oriented(jet, x, y, Orientation::Up)
    }

    pub fn oriented(jet: &Jet2, x: f64, y: f64, o: Orientation) -> Self {
        let first = first_form(jet, x, y);
        let (l, m, n) = second_form_oriented(jet, x, y, o);
        Self { l, m, n, ..first }
    }

    pub fn first_det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn second_det(&self) -> f64 {
        self.l * self.n - self.m * self.m
    }
}

pub fn pq(jet: &Jet2, x: f64, y: f64) -> (f64, f64) {
    (jet.fx + 0.5 * y, jet.fy - 0.5 * x)
}

/// `X_x` and `X_y` as frame coefficients.
pub fn tangent_frame(jet: &Jet2, x: f64, y: f64) -> (AlgebraVector, AlgebraVector) {
    let (p, q) = pq(jet, x, y);
    (AlgebraVector::new(1.0, 0.0, p), AlgebraVector::new(0.0, 1.0, q))
}

pub fn unit_normal(jet: &Jet2, x: f64, y: f64) -> AlgebraVector {
    let (p, q) = pq(jet, x, y);
    let w = (1.0 + p * p + q * q).sqrt();
    AlgebraVector::new(-p / w, -q / w, 1.0 / w)
}

/// First fundamental form; the second-form slots are left at zero.
pub fn first_form(jet: &Jet2, x: f64, y: f64) -> FundamentalForms {
    let (p, q) = pq(jet, x, y);
    FundamentalForms {
        p,
        q,
        w: (1.0 + p * p + q * q).sqrt(),
        e: 1.0 + p * p,
        f: p * q,
        g: 1.0 + q * q,
        l: 0.0,
        m: 0.0,
        n: 0.0,
    }
}

/// `(L, M, N)` for the upward normal.
pub fn second_form(jet: &Jet2, x: f64, y: f64) -> (f64, f64, f64) {
    second_form_oriented(jet, x, y, Orientation::Up)
}

pub fn second_form_oriented(jet: &Jet2, x: f64, y: f64, o: Orientation) -> (f64, f64, f64) {
    let (p, q) = pq(jet, x, y);
    let s = o.sign() / (1.0 + p * p + q * q).sqrt();
    (
        s * (jet.fxx + q * p),
        s * (jet.fxy + 0.5 * q * q - 0.5 * p * p),
        s * (jet.fyy - q * p),
    )
}

/// Left side of the minimal graph equation.
pub fn minimal_residual(jet: &Jet2, x: f64, y: f64) -> f64 {
    let (p, q) = pq(jet, x, y);
    (1.0 + q * q) * jet.fxx - 2.0 * p * q * jet.fxy + (1.0 + p * p) * jet.fyy
}

pub fn mean_curvature(jet: &Jet2, x: f64, y: f64) -> f64 {
    mean_curvature_oriented(jet, x, y, Orientation::Up)
}

pub fn mean_curvature_oriented(jet: &Jet2, x: f64, y: f64, o: Orientation) -> f64 {
    let (p, q) = pq(jet, x, y);
    let w = (1.0 + p * p + q * q).sqrt();
    o.sign() * minimal_residual(jet, x, y) / (2.0 * w * w * w)
}

/// `½ (EN + GL - 2FM) / (EG - F²)`, the same quantity from the forms.
pub fn mean_curvature_from_forms(ff: &FundamentalForms) -> f64 {
    0.5 * (ff.e * ff.n + ff.g * ff.l - 2.0 * ff.f * ff.m) / ff.first_det()
}

/// `w⁴ K`; vanishes exactly where the graph is flat.
pub fn flat_residual(jet: &Jet2, x: f64, y: f64) -> f64 {
    let (p, q) = pq(jet, x, y);
    let w2 = 1.0 + p * p + q * q;
    let hess = jet.fxx * jet.fyy;
    let fxy = jet.fxy;
    w2 * (fxy * fxy - hess - 0.25)
        - (1.0 + q * q) * ((fxy + 0.5).powi(2) - hess)
        - (1.0 + p * p) * ((fxy - 0.5).powi(2) - hess)
        + p * q * (jet.fyy - jet.fxx)
}

pub fn gauss_curvature(jet: &Jet2, x: f64, y: f64) -> f64 {
    let (p, q) = pq(jet, x, y);
    let w2 = 1.0 + p * p + q * q;
    flat_residual(jet, x, y) / (w2 * w2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub x: f64,
    pub y: f64,
    pub f: f64,
    pub k: f64,
    pub h: f64,
    pub det_gauss: f64,
    pub minimal_residual: f64,
    pub flat_residual: f64,
}

pub fn curvature_sample(jet: &Jet2, x: f64, y: f64) -> CurvatureSample {
    CurvatureSample {
        x,
        y,
        f: jet.f,
        k: gauss_curvature(jet, x, y),
        h: mean_curvature(jet, x, y),
        det_gauss: crate::gauss_map::gauss_det(jet),
        minimal_residual: minimal_residual(jet, x, y),
        flat_residual: flat_residual(jet, x, y),
    }
}

/// Evaluate `curvature_sample` over a grid, stopping at the first failure.
pub fn sample_grid(field: &dyn SurfaceField, grid: &Grid) -> Result<Vec<CurvatureSample>> {
    grid.points()
        .map(|(x, y)| field.jet(x, y).map(|j| curvature_sample(&j, x, y)))
        .collect()
}
