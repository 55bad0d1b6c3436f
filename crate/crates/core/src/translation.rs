//! Translation surfaces `α(x) * β(y)` with `α = (x, 0, u(x))` and
//! `β = (0, y, v(y))`, i.e. graphs of `f = u(x) + v(y) + xy/2`.
//!
//! For these graphs `p = u' + y`, `q = v'`, `f_xy = 1/2`, so the Gauss map
//! determinant collapses to `u'' v''` and both curvature equations become
//! ODE-like relations between the two profile curves.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{jet3_curve_at, CurveJet, Expr, Jet2, Scalar};
use crate::graph::{Grid, Rect, SurfaceField, SurfacePatch};
use crate::numerics::{ode_integrate, DenseSolution, OdeProblem};

/// A profile curve with derivatives through order three.
pub trait CurveField: Send + Sync {
    fn jet(&self, t: f64) -> Result<CurveJet>;

    fn value(&self, t: f64) -> Result<f64> {
        self.jet(t).map(|j| j.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExprCurve(pub Expr);

impl CurveField for ExprCurve {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        jet3_curve_at(&self.0, t)
    }
}

/// Closed-form curve written once for every [`Scalar`].
trait ClosedForm: Send + Sync {
    fn eval<S: Scalar>(&self, t: S) -> Result<S>;
}

struct Closed<C>(C);

impl<C: ClosedForm> CurveField for Closed<C> {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        self.0.eval(CurveJet::var(t))
    }

    fn value(&self, t: f64) -> Result<f64> {
        self.0.eval(t)
    }
}

#[derive(Clone)]
pub struct CurvePair {
    pub u: Arc<dyn CurveField>,
    pub v: Arc<dyn CurveField>,
}

impl CurvePair {
    pub fn new(u: Arc<dyn CurveField>, v: Arc<dyn CurveField>) -> Self {
        Self { u, v }
    }

    pub fn from_exprs(u: Expr, v: Expr) -> Self {
        Self::new(Arc::new(ExprCurve(u)), Arc::new(ExprCurve(v)))
    }

    pub fn jets(&self, x: f64, y: f64) -> Result<(CurveJet, CurveJet)> {
        Ok((self.u.jet(x)?, self.v.jet(y)?))
    }
}

impl fmt::Debug for CurvePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CurvePair { .. }")
    }
}

/// `f(x, y) = u(x) + v(y) + xy/2` as a jet provider.
#[derive(Clone, Debug)]
pub struct TranslationSurface(pub CurvePair);

impl SurfaceField for TranslationSurface {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        let (u, v) = self.0.jets(x, y)?;
        Ok(Jet2::new(
            u.value + v.value + 0.5 * x * y,
            u.d1 + 0.5 * y,
            v.d1 + 0.5 * x,
            u.d2,
            0.5,
            v.d2,
        ))
    }
}

pub fn build_graph(pair: CurvePair, domain: Rect) -> SurfacePatch {
    SurfacePatch::new(Arc::new(TranslationSurface(pair)), domain)
}

pub fn gauss_det(pair: &CurvePair, x: f64, y: f64) -> Result<f64> {
    let (u, v) = pair.jets(x, y)?;
    Ok(u.d2 * v.d2)
}

/// `(1 + v'²) u'' - v'(u' + y) + (1 + (u' + y)²) v''`.
pub fn minimal_residual_from_jets(u: &CurveJet, v: &CurveJet, y: f64) -> f64 {
    let p = u.d1 + y;
    (1.0 + v.d1 * v.d1) * u.d2 - v.d1 * p + (1.0 + p * p) * v.d2
}

/// `u''v'' + (y + u') v' (v'' - u'') - (1 + v'²)`; equals `w⁴K` of the graph.
pub fn flat_residual_from_jets(u: &CurveJet, v: &CurveJet, y: f64) -> f64 {
    u.d2 * v.d2 + (y + u.d1) * v.d1 * (v.d2 - u.d2) - (1.0 + v.d1 * v.d1)
}

pub fn minimal_translation_residual(pair: &CurvePair, x: f64, y: f64) -> Result<f64> {
    let (u, v) = pair.jets(x, y)?;
    Ok(minimal_residual_from_jets(&u, &v, y))
}

pub fn flat_translation_residual(pair: &CurvePair, x: f64, y: f64) -> Result<f64> {
    let (u, v) = pair.jets(x, y)?;
    Ok(flat_residual_from_jets(&u, &v, y))
}

/// How the quadratic profile of [`TranslationFamily::FlatPower`] is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `u = A x² + A1 x`, as printed with the solution.
    PaperLiteral,
    /// `u = A x²/2 + A1 x`, so that `u'' = A` as assumed in the derivation.
    SecondDerivative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TranslationFamily {
    MinimalEqm { c: f64 },
    FlatZeroDet { a: f64, c: f64 },
    FlatPower { a: f64, a1: f64, b: f64, normalization: Normalization },
    FlatGeneral(FlatGeneral),
}

/// Parameters of the family whose `v` solves `(K1/(C1 - y) + K2) v'' = v'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatGeneral {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub k1: f64,
    pub k2: f64,
    /// Initial data `v(y_init) = v0`, `v'(y_init) = v0prime`.
    pub v0: f64,
    pub v0prime: f64,
    pub y_init: f64,
}

impl Default for FlatGeneral {
    fn default() -> Self {
        Self { c1: 0.0, c2: 1.0, c3: 1.0, k1: 0.0, k2: 1.0, v0: 0.0, v0prime: 1.0, y_init: 0.0 }
    }
}

impl FlatGeneral {
    /// `K1/(C1 - y) + K2`.
    pub fn coefficient(&self, y: f64) -> f64 {
        if self.k1 == 0.0 {
            self.k2
        } else {
            self.k1 / (self.c1 - y) + self.k2
        }
    }

    fn coefficient_slope(&self, y: f64) -> f64 {
        if self.k1 == 0.0 {
            0.0
        } else {
            self.k1 / (self.c1 - y).powi(2)
        }
    }
}

impl TranslationFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            TranslationFamily::MinimalEqm { .. } => "minimal-eqm",
            TranslationFamily::FlatZeroDet { .. } => "flat-zero-det",
            TranslationFamily::FlatPower { .. } => "flat-power",
            TranslationFamily::FlatGeneral(_) => "flat-general",
        }
    }

    /// Families whose defining equation is an identity, not just a claim.
    pub fn is_minimal(&self) -> bool {
        matches!(self, TranslationFamily::MinimalEqm { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match *self {
            TranslationFamily::MinimalEqm { c } if !finite(&[c]) => Err(Error::param("C must be finite")),
            TranslationFamily::FlatZeroDet { a, c } => {
                if !finite(&[a, c]) || c <= 0.0 {
                    return Err(Error::param(format!("flat-zero-det needs finite A and C > 0, got C = {c}")));
                }
                Ok(())
            }
            TranslationFamily::FlatPower { a, a1, b, .. } => {
                if !finite(&[a, a1, b]) {
                    return Err(Error::param("flat-power parameters must be finite"));
                }
                if a == 0.0 || b == 0.0 {
                    return Err(Error::param("flat-power needs A ≠ 0 and B ≠ 0"));
                }
                if a == -1.0 {
                    return Err(Error::param("flat-power exponent 1 + A vanishes for A = -1"));
                }
                Ok(())
            }
            TranslationFamily::FlatGeneral(g) => {
                if !finite(&[g.c1, g.c2, g.c3, g.k1, g.k2, g.v0, g.v0prime, g.y_init]) {
                    return Err(Error::param("flat-general parameters must be finite"));
                }
                if g.c2 == 0.0 {
                    return Err(Error::param("flat-general needs C2 ≠ 0"));
                }
                if g.k1 == 0.0 && g.k2 == 0.0 {
                    return Err(Error::param("flat-general needs K1 or K2 non-zero"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

struct Zero;

impl ClosedForm for Zero {
    fn eval<S: Scalar>(&self, _t: S) -> Result<S> {
        Ok(S::constant(0.0))
    }
}

/// `k t² + m t`.
struct Quadratic {
    k: f64,
    m: f64,
}

impl ClosedForm for Quadratic {
    fn eval<S: Scalar>(&self, t: S) -> Result<S> {
        Ok(t * t.scale(self.k) + t.scale(self.m))
    }
}

/// `(C/2) [y √(1+y²) + asinh y]`.
struct MinimalProfile {
    c: f64,
}

impl ClosedForm for MinimalProfile {
    fn eval<S: Scalar>(&self, y: S) -> Result<S> {
        let root = (S::constant(1.0) + y * y).sqrt();
        Ok((y * root + y.asinh()).scale(0.5 * self.c))
    }
}

/// Antiderivative of `√(C s² - 1)` at `s = A + y`:
/// `s √(C s² - 1)/2 - ln|√C s + √(C s² - 1)| / (2√C)`.
struct ZeroDetProfile {
    a: f64,
    c: f64,
}

impl ClosedForm for ZeroDetProfile {
    fn eval<S: Scalar>(&self, y: S) -> Result<S> {
        let s = y + S::constant(self.a);
        let disc = s * s.scale(self.c) - S::constant(1.0);
        if !(disc.value() > 0.0) {
            return Err(Error::domain(format!(
                "flat-zero-det needs C (A + y)² > 1, got {} at y = {}",
                disc.value() + 1.0,
                y.value()
            )));
        }
        let root = disc.sqrt();
        let rc = self.c.sqrt();
        let log = (s.scale(rc) + root).abs().ln();
        Ok((s * root).scale(0.5) - log.scale(0.5 / rc))
    }
}

/// `B y^(1+A) / (1+A)`.
struct PowerProfile {
    a: f64,
    b: f64,
}

impl ClosedForm for PowerProfile {
    fn eval<S: Scalar>(&self, y: S) -> Result<S> {
        let n = 1.0 + self.a;
        let yv = y.value();
        if n.fract() != 0.0 && !(yv > 0.0) {
            return Err(Error::domain(format!("y^{n} needs y > 0, got y = {yv}")));
        }
        if n < 0.0 && yv == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(y.powf(n).scale(self.b / n))
    }
}

/// `-C1 x + (C1² + 2 C2 x + C3)^{3/2} / (3 C2)`.
struct GeneralProfile {
    c1: f64,
    c2: f64,
    c3: f64,
}

impl ClosedForm for GeneralProfile {
    fn eval<S: Scalar>(&self, x: S) -> Result<S> {
        let inner = x.scale(2.0 * self.c2) + S::constant(self.c1 * self.c1 + self.c3);
        if !(inner.value() > 0.0) {
            return Err(Error::domain(format!(
                "flat-general needs C1² + 2 C2 x + C3 > 0, got {} at x = {}",
                inner.value(),
                x.value()
            )));
        }
        Ok(inner.powf(1.5).scale(1.0 / (3.0 * self.c2)) - x.scale(self.c1))
    }
}

/// Default tolerances for the `v` equation of [`FlatGeneral`].
pub const V_ODE_RTOL: f64 = 1e-12;
pub const V_ODE_ATOL: f64 = 1e-12;

/// Numerical `v` for [`FlatGeneral`], integrated outward from `y_init`.
#[derive(Debug, Clone)]
pub struct VSolution {
    params: FlatGeneral,
    y_init: f64,
    forward: Option<DenseSolution>,
    backward: Option<DenseSolution>,
}

impl VSolution {
    pub fn span(&self) -> (f64, f64) {
        let lo = self.backward.as_ref().map_or(self.y_init, |s| s.t_end());
        let hi = self.forward.as_ref().map_or(self.y_init, |s| s.t_end());
        (lo, hi)
    }

    /// Accepted steps on both sides of the initial point.
    pub fn steps(&self) -> usize {
        self.forward.as_ref().map_or(0, |s| s.steps()) + self.backward.as_ref().map_or(0, |s| s.steps())
    }

    pub fn max_step(&self) -> f64 {
        let f = self.forward.as_ref().map_or(0.0, |s| s.max_step());
        let b = self.backward.as_ref().map_or(0.0, |s| s.max_step());
        f.max(b)
    }

    fn state(&self, y: f64) -> Result<[f64; 2]> {
        let sol = if y >= self.y_init { &self.forward } else { &self.backward };
        match sol {
            Some(s) => {
                let st = s.query(y)?;
                Ok([st[0], st[1]])
            }
            None if y == self.y_init => Ok([self.params.v0, self.params.v0prime]),
            None => Err(Error::domain(format!("y = {y} outside the integrated span"))),
        }
    }
}

impl CurveField for VSolution {
    fn jet(&self, y: f64) -> Result<CurveJet> {
        let [v, vp] = self.state(y)?;
        let c = self.params.coefficient(y);
        let vpp = vp / c;
        // v''' = (v'' c - v' c') / c² = v' (1 - c') / c²
        let vppp = vp * (1.0 - self.params.coefficient_slope(y)) / (c * c);
        Ok(CurveJet::new(v, vp, vpp, vppp))
    }
}

/// Integrate `v'' = v' / (K1/(C1 - y) + K2)` over `y_span` from `y0`.
pub fn ode_solve_v(fam: &FlatGeneral, y_span: (f64, f64), y0: f64) -> Result<VSolution> {
    ode_solve_v_with(fam, y_span, y0, V_ODE_RTOL, V_ODE_ATOL)
}

pub fn ode_solve_v_with(fam: &FlatGeneral, y_span: (f64, f64), y0: f64, rtol: f64, atol: f64) -> Result<VSolution> {
    TranslationFamily::FlatGeneral(*fam).validate()?;
    let (lo, hi) = y_span;
    if !(lo < hi) {
        return Err(Error::param(format!("degenerate y span [{lo}, {hi}]")));
    }
    if !(lo..=hi).contains(&y0) {
        return Err(Error::param(format!("initial point {y0} outside [{lo}, {hi}]")));
    }
    if fam.k1 != 0.0 && (lo..=hi).contains(&fam.c1) {
        return Err(Error::domain(format!("pole y = C1 = {} inside [{lo}, {hi}]", fam.c1)));
    }
    if fam.k1 != 0.0 && fam.k2 != 0.0 {
        // K1 + K2 (C1 - y) = 0
        let zero = fam.c1 + fam.k1 / fam.k2;
        if (lo..=hi).contains(&zero) {
            return Err(Error::domain(format!("coefficient K1/(C1-y)+K2 vanishes at y = {zero}")));
        }
    }
    let params = *fam;
    let rhs = move |y: f64, s: &[f64], d: &mut [f64]| {
        d[0] = s[1];
        d[1] = s[1] / params.coefficient(y);
    };
    let max_step = (hi - lo) / 400.0;
    let solve = |end: f64| -> Result<Option<DenseSolution>> {
        if end == y0 {
            return Ok(None);
        }
        let p = OdeProblem::new(rhs, y0, end, vec![fam.v0, fam.v0prime])
            .tolerances(rtol, atol)
            .max_step(max_step);
        ode_integrate(&p).map(Some)
    };
    Ok(VSolution { params, y_init: y0, forward: solve(hi)?, backward: solve(lo)? })
}

/// Closed-form `u` and `v` of a family. `y_span` is only used to integrate
/// the numerical `v` of [`TranslationFamily::FlatGeneral`].
pub fn family_curves(fam: &TranslationFamily, y_span: (f64, f64)) -> Result<CurvePair> {
    fam.validate()?;
    let pair = match *fam {
        TranslationFamily::MinimalEqm { c } => {
            CurvePair::new(Arc::new(Closed(Zero)), Arc::new(Closed(MinimalProfile { c })))
        }
        TranslationFamily::FlatZeroDet { a, c } => CurvePair::new(
            Arc::new(Closed(Quadratic { k: 0.0, m: a })),
            Arc::new(Closed(ZeroDetProfile { a, c })),
        ),
        TranslationFamily::FlatPower { a, a1, b, normalization } => {
            let k = match normalization {
                Normalization::PaperLiteral => a,
                Normalization::SecondDerivative => 0.5 * a,
            };
            CurvePair::new(
                Arc::new(Closed(Quadratic { k, m: a1 })),
                Arc::new(Closed(PowerProfile { a, b })),
            )
        }
        TranslationFamily::FlatGeneral(g) => CurvePair::new(
            Arc::new(Closed(GeneralProfile { c1: g.c1, c2: g.c2, c3: g.c3 })),
            Arc::new(ode_solve_v(&g, y_span, g.y_init)?),
        ),
    };
    Ok(pair)
}

/// The two readings of the necessary condition obtained by differentiating
/// the flat equation in `x` and dividing by `v''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eq3Residuals {
    /// `u''' - (u''' y r + (u''u')' r - u'' y)` as printed.
    pub printed: f64,
    /// `G_x + F_x r` with `F_x = -(y u''' + (u'u'')')`, `G_x = u''' + u''v'`.
    pub derived: f64,
}

/// `(u'u'')' = u''² + u'u'''`.
fn product_slope(u: &CurveJet) -> f64 {
    u.d2 * u.d2 + u.d1 * u.d3
}

/// Printed form with an explicit ratio `r`.
pub fn eq3_printed_with_ratio(u: &CurveJet, y: f64, r: f64) -> f64 {
    u.d3 - (u.d3 * y * r + product_slope(u) * r - u.d2 * y)
}

pub fn eq3_necessary_residual(pair: &CurvePair, x: f64, y: f64) -> Result<Eq3Residuals> {
    let (u, v) = pair.jets(x, y)?;
    if v.d2 == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let r = v.d1 / v.d2;
    let fx = -(y * u.d3 + product_slope(&u));
    let gx = u.d3 + u.d2 * v.d1;
    Ok(Eq3Residuals { printed: eq3_printed_with_ratio(&u, y, r), derived: gx + fx * r })
}

/// Acceptance threshold for families whose equation should hold identically.
pub const REPORT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStatus {
    Pass,
    /// The residual exceeded the tolerance; see the recorded profile.
    Profile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub family: TranslationFamily,
    pub points: usize,
    /// `max |minimal residual|` for the minimal family only.
    pub max_minimal_residual: Option<f64>,
    /// `max |flat residual|` for the flat families only.
    pub max_flat_residual: Option<f64>,
    pub max_abs_det: f64,
    pub min_abs_det: f64,
    pub status: ReportStatus,
    /// `(x, y, residual)` per grid point, row-major.
    pub profile: Vec<(f64, f64, f64)>,
}

impl ResidualReport {
    pub fn relevant_residual(&self) -> f64 {
        self.max_minimal_residual.or(self.max_flat_residual).unwrap_or(f64::NAN)
    }

    /// Whether the family is asserted to satisfy its equation; reports for
    /// the other families are informational.
    pub fn is_mandatory(&self) -> bool {
        matches!(
            self.family,
            TranslationFamily::MinimalEqm { .. } | TranslationFamily::FlatZeroDet { .. }
        )
    }
}

pub fn residual_report(fam: &TranslationFamily, grid: &Grid) -> Result<ResidualReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let pair = family_curves(fam, (grid.rect.y0, grid.rect.y1))?;
    let mut profile = Vec::with_capacity(grid.len());
    let (mut worst, mut max_det, mut min_det) = (0.0f64, 0.0f64, f64::INFINITY);
    for (x, y) in grid.points() {
        let (u, v) = pair.jets(x, y)?;
        let r = if fam.is_minimal() {
            minimal_residual_from_jets(&u, &v, y)
        } else {
            flat_residual_from_jets(&u, &v, y)
        };
        let det = (u.d2 * v.d2).abs();
        worst = worst.max(r.abs());
        max_det = max_det.max(det);
        min_det = min_det.min(det);
        profile.push((x, y, r));
    }
    let status = if worst <= REPORT_TOLERANCE { ReportStatus::Pass } else { ReportStatus::Profile };
    let (max_minimal_residual, max_flat_residual) =
        if fam.is_minimal() { (Some(worst), None) } else { (None, Some(worst)) };
    Ok(ResidualReport {
        family: *fam,
        points: grid.len(),
        max_minimal_residual,
        max_flat_residual,
        max_abs_det: max_det,
        min_abs_det: min_det,
        status,
        profile,
    })
}

/// `v'' = 0` with `v' = A`: the flat equation becomes `1 + A² = -(y + u')u''`,
/// which cannot hold for all `y` when `u'' ≠ 0`. Returns the flat residual at
/// each probe point.
pub fn case_b_probe(u: &dyn CurveField, slope: f64, points: &[(f64, f64)]) -> Result<Vec<f64>> {
    let v = CurveJet::new(0.0, slope, 0.0, 0.0);
    points
        .iter()
        .map(|&(x, y)| {
            let uj = u.jet(x)?;
            Ok(flat_residual_from_jets(&uj, &CurveJet { value: slope * y, ..v }, y))
        })
        .collect()
}

/// `r` constant: the linear-in-`y` condition forces `C u''' = u''`, whose
/// solution `u = C² e^{x/C}` must also satisfy `(u'u'')' C - u''' = 0`.
/// Returns `(first, second)` equation values at each probe abscissa.
pub fn case_bi_probe(c: f64, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    if c == 0.0 {
        return Err(Error::param("C must be non-zero"));
    }
    let u = exponential_profile(c);
    xs.iter()
        .map(|&x| {
            let j = u.jet(x)?;
            Ok((c * j.d3 - j.d2, product_slope(&j) * c - j.d3))
        })
        .collect()
}

/// `r = C1 - C2/y`: with `u = C1² e^{x/C1}` solving the leading coefficient
/// of the resulting quadratic in `y`, returns the printed necessary-condition
/// residual at each probe point.
pub fn case_bii_probe(c1: f64, c2: f64, points: &[(f64, f64)]) -> Result<Vec<f64>> {
    if c1 == 0.0 {
        return Err(Error::param("C1 must be non-zero"));
    }
    let u = exponential_profile(c1);
    points
        .iter()
        .map(|&(x, y)| {
            if y == 0.0 {
                return Err(Error::DivisionByZero);
            }
            Ok(eq3_printed_with_ratio(&u.jet(x)?, y, c1 - c2 / y))
        })
        .collect()
}

/// `C² e^{x/C}`.
fn exponential_profile(c: f64) -> impl CurveField {
    struct Exp(f64);
    impl ClosedForm for Exp {
        fn eval<S: Scalar>(&self, x: S) -> Result<S> {
            Ok(x.scale(1.0 / self.0).exp().scale(self.0 * self.0))
        }
    }
    Closed(Exp(c))
}
