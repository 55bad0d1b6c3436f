//! The Gauss map of a graph, read in the Gans chart.
//!
//! The unit normal is left-translated to the identity and projected by
//! `psi`; for a graph this gives `φ(x, y) = (-p, -q)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Jet2;
use crate::gans::{gans_isometry, GansIsometry, GansPoint};
use crate::graph::{first_form, pq, second_form, tangent_frame, unit_normal, Grid, SurfaceField, SurfacePatch};
use crate::heisenberg::{covariant_of_invariant, IsometryElement, OrthogonalPart};

pub fn gauss_map(jet: &Jet2, x: f64, y: f64) -> GansPoint {
    let (p, q) = pq(jet, x, y);
    GansPoint::new(-p, -q)
}

pub fn gauss_jacobian(jet: &Jet2) -> [[f64; 2]; 2] {
    [[-jet.fxx, -jet.fxy - 0.5], [-jet.fxy + 0.5, -jet.fyy]]
}

/// `det dφ = f_xx f_yy - f_xy² + 1/4`.
pub fn gauss_det(jet: &Jet2) -> f64 {
    jet.fxx * jet.fyy - jet.fxy * jet.fxy + 0.25
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMapSample {
    pub x: f64,
    pub y: f64,
    pub phi: GansPoint,
    pub jacobian: [[f64; 2]; 2],
    pub det: f64,
}

pub fn gauss_map_sample(jet: &Jet2, x: f64, y: f64) -> GaussMapSample {
    GaussMapSample {
        x,
        y,
        phi: gauss_map(jet, x, y),
        jacobian: gauss_jacobian(jet),
        det: gauss_det(jet),
    }
}

pub fn sample_grid(field: &dyn SurfaceField, grid: &Grid) -> Result<Vec<GaussMapSample>> {
    grid.points()
        .map(|(x, y)| field.jet(x, y).map(|j| gauss_map_sample(&j, x, y)))
        .collect()
}

/// Default central-difference step for [`verify_gauss_differential`].
pub const DIFFERENTIAL_STEP: f64 = 1e-4;

pub fn verify_gauss_differential(patch: &SurfacePatch, x: f64, y: f64, v: [f64; 2]) -> Result<f64> {
    verify_gauss_differential_with_step(patch, x, y, v, DIFFERENTIAL_STEP)
}

/// Norm of `dL_p ∘ dγ_p(v) + A_η(v) + ∇_v η̄` at `(x, y)`.
///
/// `v = (α, β)` means the tangent vector `α X_x + β X_y`. The left side is a
/// central difference of the frame coefficients of `η` along `v`; the right
/// side uses only the second fundamental form and the connection table.
pub fn verify_gauss_differential_with_step(
    patch: &SurfacePatch,
    x: f64,
    y: f64,
    v: [f64; 2],
    h: f64,
) -> Result<f64> {
    let [alpha, beta] = v;
    let (xp, yp, xm, ym) = (x + h * alpha, y + h * beta, x - h * alpha, y - h * beta);
    if !(h > 0.0) || !patch.domain.contains(xp, yp) || !patch.domain.contains(xm, ym) {
        return Err(Error::StencilOutsideDomain { x, y });
    }
    let jet = patch.jet(x, y)?;
    let np = unit_normal(&patch.jet(xp, yp)?, xp, yp);
    let nm = unit_normal(&patch.jet(xm, ym)?, xm, ym);
    let lhs = (1.0 / (2.0 * h)) * (np - nm);

    let ff = first_form(&jet, x, y);
    let (l, m, n) = second_form(&jet, x, y);
    let det = ff.first_det();
    // shape operator in the basis (X_x, X_y): I⁻¹ II
    let s = [
        [(ff.g * l - ff.f * m) / det, (ff.g * m - ff.f * n) / det],
        [(-ff.f * l + ff.e * m) / det, (-ff.f * m + ff.e * n) / det],
    ];
    let c1 = s[0][0] * alpha + s[0][1] * beta;
    let c2 = s[1][0] * alpha + s[1][1] * beta;
    let (xx, xy) = tangent_frame(&jet, x, y);
    let shape_v = c1 * xx + c2 * xy;
    let v_frame = alpha * xx + beta * xy;
    let alpha_v = covariant_of_invariant(v_frame, unit_normal(&jet, x, y));
    let rhs = -(shape_v + alpha_v);
    Ok((lhs - rhs).norm())
}

/// The graph of an isometric image of a graph, in closed form.
///
/// For `L_g ∘ A` with `A = (R, s)` (an orthogonal map of the xy-plane and a
/// sign on z), the image of `z = f(x, y)` is the graph of
/// `c + s f(Rᵀ(x̃ - a, ỹ - b)) + (a(ỹ - b) - b(x̃ - a))/2`.
pub struct IsometricImage {
    pub field: Arc<dyn SurfaceField>,
    pub iso: IsometryElement,
}

fn planar_part(o: OrthogonalPart) -> ([[f64; 2]; 2], f64) {
    let m = o.matrix();
    ([[m[0][0], m[0][1]], [m[1][0], m[1][1]]], m[2][2])
}

impl SurfaceField for IsometricImage {
    fn jet(&self, xt: f64, yt: f64) -> Result<Jet2> {
        let g = self.iso.translation;
        let (r, s) = planar_part(self.iso.orthogonal_part);
        let (dx, dy) = (xt - g.x, yt - g.y);
        let x = r[0][0] * dx + r[1][0] * dy;
        let y = r[0][1] * dx + r[1][1] * dy;
        let j = self.field.jet(x, y)?;
        // gradient R ∇f, Hessian R H Rᵀ
        let gx = r[0][0] * j.fx + r[0][1] * j.fy;
        let gy = r[1][0] * j.fx + r[1][1] * j.fy;
        let hm = [[j.fxx, j.fxy], [j.fxy, j.fyy]];
        let rh = |a: usize, b: usize| {
            (0..2)
                .map(|k| (0..2).map(|l| r[a][k] * hm[k][l] * r[b][l]).sum::<f64>())
                .sum::<f64>()
        };
        Ok(Jet2::new(
            g.z + s * j.f + 0.5 * (g.x * dy - g.y * dx),
            s * gx - 0.5 * g.y,
            s * gy + 0.5 * g.x,
            s * rh(0, 0),
            s * rh(0, 1),
            s * rh(1, 1),
        ))
    }
}

/// The Gans-plane isometry predicted to intertwine the Gauss maps.
pub fn induced_gans_isometry(o: OrthogonalPart) -> GansIsometry {
    match o {
        OrthogonalPart::RotationZ(t) => GansIsometry::Rotation(t),
        // the xy reflection fixes the line at angle θ/2; τ fixes its perpendicular
        OrthogonalPart::ReflectionFlip(t) => GansIsometry::Reflection {
            a: (0.5 * t).cos(),
            b: (0.5 * t).sin(),
        },
    }
}

/// Largest deviation between the Gauss map of the image surface and the
/// predicted transform of the original Gauss map over `grid`.
pub fn equivariance_check(patch: &SurfacePatch, iso: IsometryElement, grid: &Grid) -> Result<f64> {
    let r = grid.rect;
    let d = patch.domain;
    if r.x0 < d.x0 || r.x1 > d.x1 || r.y0 < d.y0 || r.y1 > d.y1 {
        return Err(Error::param("sample grid must lie inside the patch domain"));
    }
    let image = IsometricImage { field: patch.field.clone(), iso };
    let tau = induced_gans_isometry(iso.orthogonal_part);
    let mut worst: f64 = 0.0;
    for (x, y) in grid.points() {
        let phi = gauss_map(&patch.jet(x, y)?, x, y);
        let moved = crate::heisenberg::apply_isometry(iso, crate::heisenberg::GroupPoint::new(x, y, 0.0));
        let (xt, yt) = (moved.x, moved.y);
        let phi_image = gauss_map(&image.jet(xt, yt)?, xt, yt);
        let want = gans_isometry(tau, phi)?;
        worst = worst.max((phi_image.u - want.u).abs()).max((phi_image.v - want.v).abs());
    }
    Ok(worst)
}

/// `max - min` of each Gauss map component over the grid.
pub fn gauss_map_spread(field: &dyn SurfaceField, grid: &Grid) -> Result<(f64, f64)> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for (x, y) in grid.points() {
        let phi = gauss_map(&field.jet(x, y)?, x, y);
        for (k, c) in [phi.u, phi.v].into_iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    Ok((hi[0] - lo[0], hi[1] - lo[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::gans::gans_to_disk;
    use crate::graph::{ExprSurface, Rect};
    use crate::heisenberg::GroupPoint;
    use std::f64::consts::PI;

    fn patch(src: &str) -> SurfacePatch {
        SurfacePatch::from_expr(parse(src).unwrap(), Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap())
    }

    fn grid() -> Grid {
        Grid::new(Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 9, 9).unwrap()
    }

    const PLANE: Jet2 = Jet2::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);

    #[test]
    fn gauss_map_examples() {
        assert_eq!(gauss_map(&PLANE, 0.0, 0.0), GansPoint::new(-0.0, -0.0));
        let phi = gauss_map(&PLANE, 2.0, 0.0);
        assert_eq!((phi.u, phi.v), (0.0, 1.0));
        for (x, y) in [(100.0, -40.0), (1e6, 3.0)] {
            assert!(gans_to_disk(gauss_map(&PLANE, x, y)).norm() < 1.0);
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(gauss_det(&PLANE), 0.25);
        assert_eq!(gauss_det(&Jet2::new(0.0, 0.0, 0.0, 0.0, 0.5, 0.0)), 0.0);
        assert_eq!(gauss_det(&Jet2::new(0.0, 0.0, 0.0, 1.0, 0.0, -1.0)), -0.75);
        let j = Jet2::new(0.0, 0.3, 0.1, 1.2, -0.4, 0.7);
        let m = gauss_jacobian(&j);
        assert!((m[0][0] * m[1][1] - m[0][1] * m[1][0] - gauss_det(&j)).abs() < 1e-15);
    }

    #[test]
    fn differential_identity_examples() {
        let p = patch("0");
        let r = verify_gauss_differential(&p, 0.0, 0.0, [1.0, 0.0]).unwrap();
        assert!(r <= 1e-6, "{r}");
        let p = patch("x^2+y^2");
        let r = verify_gauss_differential(&p, 0.3, -0.2, [0.0, 1.0]).unwrap();
        assert!(r <= 1e-6, "{r}");
    }

    #[test]
    fn differential_residual_is_second_order() {
        let p = patch("sin(x)*cos(y) + x^3*y/3");
        let hs = [1e-3, 5e-4, 2.5e-4];
        let r: Vec<f64> = hs
            .iter()
            .map(|&h| verify_gauss_differential_with_step(&p, 0.4, 0.7, [1.0, 0.5], h).unwrap())
            .collect();
        for w in r.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio} from {r:?}");
        }
    }

    #[test]
    fn differential_stencil_must_stay_inside() {
        let p = patch("0");
        assert!(matches!(
            verify_gauss_differential(&p, 3.0, 0.0, [1.0, 0.0]),
            Err(Error::StencilOutsideDomain { .. })
        ));
    }

    #[test]
    fn left_translation_keeps_gauss_map() {
        let iso = IsometryElement::translation(GroupPoint::new(1.0, -2.0, 0.5));
        let dev = equivariance_check(&patch("x^2*y"), iso, &grid()).unwrap();
        assert!(dev <= 1e-10, "{dev}");
    }

    #[test]
    fn rotation_on_symmetric_paraboloid() {
        let dev = equivariance_check(&patch("(x^2+y^2)/2"), IsometryElement::rotation(PI / 3.0), &grid())
            .unwrap();
        assert!(dev <= 1e-10, "{dev}");
    }

    #[test]
    fn identity_has_zero_deviation() {
        let dev = equivariance_check(&patch("sin(x*y)"), IsometryElement::IDENTITY, &grid()).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn general_isometries_on_asymmetric_field() {
        let p = patch("x^3 - 2*x*y + exp(y/2)");
        for o in [OrthogonalPart::RotationZ(0.7), OrthogonalPart::ReflectionFlip(-1.1)] {
            let iso = IsometryElement { translation: GroupPoint::new(0.3, 0.2, -1.0), orthogonal_part: o };
            let dev = equivariance_check(&p, iso, &grid()).unwrap();
            assert!(dev <= 1e-10, "{o:?}: {dev}");
        }
    }

    #[test]
    fn image_field_really_is_the_image() {
        // points of the image surface are images of surface points
        let field: Arc<dyn SurfaceField> = Arc::new(ExprSurface(parse("x^2*y - y").unwrap()));
        let iso = IsometryElement {
            translation: GroupPoint::new(-0.4, 1.2, 0.3),
            orthogonal_part: OrthogonalPart::ReflectionFlip(0.9),
        };
        let image = IsometricImage { field: field.clone(), iso };
        for (x, y) in grid().points() {
            let p = GroupPoint::new(x, y, field.value(x, y).unwrap());
            let q = crate::heisenberg::apply_isometry(iso, p);
            assert!((image.value(q.x, q.y).unwrap() - q.z).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_outside_patch_is_rejected() {
        let p = SurfacePatch::from_expr(parse("0").unwrap(), Rect::new(0.0, 1.0, 0.0, 1.0).unwrap());
        assert!(equivariance_check(&p, IsometryElement::IDENTITY, &grid()).is_err());
    }
}
