//! The Heisenberg group in exponential coordinates.
//!
//! Points are `(x, y, z)` with product
//! `(a, b, c) * (x, y, z) = (a + x, b + y, c + z + (ay - bx)/2)`, carrying the
//! left-invariant metric `dx² + dy² + (y/2 dx - x/2 dy + dz)²`. Tangent
//! vectors are usually expressed in the orthonormal left-invariant frame
//! `E1 = ∂x - y/2 ∂z`, `E2 = ∂y + x/2 ∂z`, `E3 = ∂z`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Coefficients of a tangent vector in the frame `{E1, E2, E3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraVector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl AlgebraVector {
    pub const ZERO: AlgebraVector = AlgebraVector::new(0.0, 0.0, 0.0);

    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    pub fn basis(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Self::new(1.0, 0.0, 0.0)),
            2 => Ok(Self::new(0.0, 1.0, 0.0)),
            3 => Ok(Self::new(0.0, 0.0, 1.0)),
            _ => Err(Error::IndexOutOfRange(i)),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Metric pairing; the frame is orthonormal so this is the Euclidean dot.
    pub fn dot(self, o: Self) -> f64 {
        self.a1 * o.a1 + self.a2 * o.a2 + self.a3 * o.a3
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Coordinate components of this vector at `p`.
    pub fn to_coordinates(self, p: GroupPoint) -> [f64; 3] {
        [
            self.a1,
            self.a2,
            self.a3 - 0.5 * p.y * self.a1 + 0.5 * p.x * self.a2,
        ]
    }

    /// Frame coefficients of the coordinate vector `v` at `p`.
    pub fn from_coordinates(v: [f64; 3], p: GroupPoint) -> Self {
        Self::new(v[0], v[1], v[2] + 0.5 * p.y * v[0] - 0.5 * p.x * v[1])
    }
}

impl Add for AlgebraVector {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)
    }
}

impl Sub for AlgebraVector {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(self.a1 - o.a1, self.a2 - o.a2, self.a3 - o.a3)
    }
}

impl Neg for AlgebraVector {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.a1, -self.a2, -self.a3)
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;

    fn mul(self, v: AlgebraVector) -> AlgebraVector {
        AlgebraVector::new(self * v.a1, self * v.a2, self * v.a3)
    }
}

pub fn product(g: GroupPoint, h: GroupPoint) -> GroupPoint {
    GroupPoint::new(
        g.x + h.x,
        g.y + h.y,
        g.z + h.z + 0.5 * (g.x * h.y - g.y * h.x),
    )
}

pub fn inverse(g: GroupPoint) -> GroupPoint {
    GroupPoint::new(-g.x, -g.y, -g.z)
}

/// Differential of the left translation by `g`, in coordinates.
///
/// It does not depend on the base point.
pub fn left_translation_differential(g: GroupPoint) -> [[f64; 3]; 3] {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-0.5 * g.y, 0.5 * g.x, 1.0]]
}

/// Coordinate components of `E1`, `E2`, `E3` at `p`.
pub fn frame_at(p: GroupPoint) -> [[f64; 3]; 3] {
    [
        [1.0, 0.0, -0.5 * p.y],
        [0.0, 1.0, 0.5 * p.x],
        [0.0, 0.0, 1.0],
    ]
}

/// Coordinate matrix of the metric at `p`.
pub fn metric_at(p: GroupPoint) -> [[f64; 3]; 3] {
    // ds² = dx² + dy² + θ², θ = (y/2, -x/2, 1)
    let th = [0.5 * p.y, -0.5 * p.x, 1.0];
    let mut g = [[0.0; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, gij) in row.iter_mut().enumerate() {
            *gij = th[i] * th[j] + if i == j && i < 2 { 1.0 } else { 0.0 };
        }
    }
    g
}

/// `v^T g(p) w` for coordinate vectors.
pub fn metric_pairing(p: GroupPoint, v: [f64; 3], w: [f64; 3]) -> f64 {
    let g = metric_at(p);
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += v[i] * g[i][j] * w[j];
        }
    }
    s
}

/// Levi-Civita connection on the frame: `∇_{E_i} E_j` as frame coefficients.
pub fn connection(i: usize, j: usize) -> Result<AlgebraVector> {
    let h = 0.5;
    let v = match (i, j) {
        (1, 1) | (2, 2) | (3, 3) => AlgebraVector::ZERO,
        (1, 2) => AlgebraVector::new(0.0, 0.0, h),
        (2, 1) => AlgebraVector::new(0.0, 0.0, -h),
        (1, 3) | (3, 1) => AlgebraVector::new(0.0, -h, 0.0),
        (2, 3) | (3, 2) => AlgebraVector::new(h, 0.0, 0.0),
        (i, _) if !(1..=3).contains(&i) => return Err(Error::IndexOutOfRange(i)),
        (_, j) => return Err(Error::IndexOutOfRange(j)),
    };
    Ok(v)
}

/// `∇_v W` for a constant-coefficient (left-invariant) field `W`.
pub fn covariant_of_invariant(v: AlgebraVector, w: AlgebraVector) -> AlgebraVector {
    let (vs, ws) = (v.to_array(), w.to_array());
    let mut out = AlgebraVector::ZERO;
    for (i, vi) in vs.iter().enumerate() {
        for (j, wj) in ws.iter().enumerate() {
            if *vi != 0.0 && *wj != 0.0 {
                let c = connection(i + 1, j + 1).expect("indices in range");
                out = out + (vi * wj) * c;
            }
        }
    }
    out
}

/// Lie bracket of the frame, `[E_i, E_j]`.
pub fn bracket(v: AlgebraVector, w: AlgebraVector) -> AlgebraVector {
    AlgebraVector::new(0.0, 0.0, v.a1 * w.a2 - v.a2 * w.a1)
}

/// Orthogonal part of an isometry fixing the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrthogonalPart {
    /// Rotation by `θ` about the z-axis.
    RotationZ(f64),
    /// Reflection of the xy-plane across the line at angle `θ/2`, composed
    /// with `z ↦ -z`.
    ReflectionFlip(f64),
}

impl OrthogonalPart {
    pub fn matrix(self) -> [[f64; 3]; 3] {
        match self {
            OrthogonalPart::RotationZ(t) => {
                let (s, c) = t.sin_cos();
                [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
            }
            OrthogonalPart::ReflectionFlip(t) => {
                let (s, c) = t.sin_cos();
                [[c, s, 0.0], [s, -c, 0.0], [0.0, 0.0, -1.0]]
            }
        }
    }

    pub fn apply(self, p: GroupPoint) -> GroupPoint {
        let m = self.matrix();
        let v = p.to_array();
        let r = |i: usize| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
        GroupPoint::new(r(0), r(1), r(2))
    }

    pub fn inverse(self) -> Self {
        match self {
            OrthogonalPart::RotationZ(t) => OrthogonalPart::RotationZ(-t),
            f @ OrthogonalPart::ReflectionFlip(_) => f,
        }
    }

    /// The reflection across the line `a x + b y = 0` composed with `z ↦ -z`.
    pub fn flip_across_line(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 && b == 0.0 {
            return Err(Error::param("line normal (a, b) must be non-zero"));
        }
        // the fixed line has direction (-b, a), at angle φ; the matrix uses θ = 2φ
        Ok(OrthogonalPart::ReflectionFlip(2.0 * a.atan2(-b)))
    }
}

/// `L_g ∘ A` with `A` orthogonal and `g` a left translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryElement {
    pub translation: GroupPoint,
    pub orthogonal_part: OrthogonalPart,
}

impl IsometryElement {
    pub const IDENTITY: IsometryElement = IsometryElement {
        translation: GroupPoint::IDENTITY,
        orthogonal_part: OrthogonalPart::RotationZ(0.0),
    };

    pub fn translation(g: GroupPoint) -> Self {
        Self { translation: g, orthogonal_part: OrthogonalPart::RotationZ(0.0) }
    }

    pub fn rotation(theta: f64) -> Self {
        Self { translation: GroupPoint::IDENTITY, orthogonal_part: OrthogonalPart::RotationZ(theta) }
    }

    pub fn flip(theta: f64) -> Self {
        Self {
            translation: GroupPoint::IDENTITY,
            orthogonal_part: OrthogonalPart::ReflectionFlip(theta),
        }
    }

    pub fn inverse(self) -> Self {
        // (L_g ∘ A)⁻¹ = L_{A⁻¹ g⁻¹} ∘ A⁻¹, since A is an automorphism
        let a_inv = self.orthogonal_part.inverse();
        Self {
            translation: a_inv.apply(inverse(self.translation)),
            orthogonal_part: a_inv,
        }
    }
}

pub fn apply_isometry(iso: IsometryElement, p: GroupPoint) -> GroupPoint {
    product(iso.translation, iso.orthogonal_part.apply(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pt(x: f64, y: f64, z: f64) -> GroupPoint {
        GroupPoint::new(x, y, z)
    }

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b).all(|(u, v)| (u - v).abs() <= tol)
    }

    #[test]
    fn product_examples() {
        assert_eq!(product(GroupPoint::IDENTITY, pt(1.0, -2.0, 3.0)), pt(1.0, -2.0, 3.0));
        assert_eq!(product(pt(1.0, 2.0, 3.0), pt(-1.0, -2.0, -3.0)), GroupPoint::IDENTITY);
        assert_eq!(product(pt(1.0, 2.0, 3.0), pt(4.0, 5.0, 6.0)), pt(5.0, 7.0, 7.5));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(GroupPoint::IDENTITY), GroupPoint::IDENTITY);
        assert_eq!(inverse(pt(1.0, 2.0, 3.0)), pt(-1.0, -2.0, -3.0));
        let g = pt(5.0, -1.0, 2.0);
        assert_eq!(product(g, inverse(g)), GroupPoint::IDENTITY);
    }

    #[test]
    fn frame_examples() {
        assert_eq!(
            frame_at(GroupPoint::IDENTITY),
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        );
        assert_eq!(frame_at(pt(2.0, 0.0, 0.0))[1], [0.0, 1.0, 1.0]);
        assert_eq!(frame_at(pt(0.0, 4.0, 7.0))[0], [1.0, 0.0, -2.0]);
    }

    #[test]
    fn metric_examples() {
        let g0 = metric_at(GroupPoint::IDENTITY);
        assert_eq!(g0, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let g = metric_at(pt(0.0, 2.0, 0.0));
        assert_eq!(g[0][0], 2.0);
        assert_eq!(g[0][2], 1.0);
    }

    #[test]
    fn frame_is_orthonormal() {
        let p = pt(3.0, -1.0, 5.0);
        let e = frame_at(p);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((metric_pairing(p, e[i], e[j]) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn connection_table() {
        assert_eq!(connection(1, 1).unwrap(), AlgebraVector::ZERO);
        assert_eq!(connection(1, 2).unwrap(), AlgebraVector::new(0.0, 0.0, 0.5));
        assert_eq!(connection(3, 2).unwrap(), AlgebraVector::new(0.5, 0.0, 0.0));
        assert_eq!(connection(0, 1), Err(Error::IndexOutOfRange(0)));
        assert_eq!(connection(2, 4), Err(Error::IndexOutOfRange(4)));
    }

    #[test]
    fn connection_is_metric_and_torsion_free() {
        for i in 1..=3 {
            for j in 1..=3 {
                let ej = AlgebraVector::basis(j).unwrap();
                let ei = AlgebraVector::basis(i).unwrap();
                for k in 1..=3 {
                    let ek = AlgebraVector::basis(k).unwrap();
                    let s = connection(i, j).unwrap().dot(ek) + ej.dot(connection(i, k).unwrap());
                    assert_eq!(s, 0.0, "compatibility at ({i},{j},{k})");
                }
                let torsion = connection(i, j).unwrap() - connection(j, i).unwrap() - bracket(ei, ej);
                assert_eq!(torsion, AlgebraVector::ZERO, "torsion at ({i},{j})");
            }
        }
        assert_eq!(
            bracket(AlgebraVector::basis(1).unwrap(), AlgebraVector::basis(2).unwrap()),
            AlgebraVector::basis(3).unwrap()
        );
    }

    #[test]
    fn frame_coordinate_conversion_round_trips() {
        let p = pt(0.7, -1.3, 2.0);
        let v = AlgebraVector::new(0.2, -0.5, 1.1);
        let back = AlgebraVector::from_coordinates(v.to_coordinates(p), p);
        assert!(close(back.to_array(), v.to_array(), 1e-15));
    }

    #[test]
    fn isometry_examples() {
        let p = pt(1.0, 2.0, 3.0);
        assert_eq!(apply_isometry(IsometryElement::IDENTITY, p), p);
        let r = apply_isometry(IsometryElement::rotation(FRAC_PI_2), pt(1.0, 0.0, 0.0));
        assert!(close(r.to_array(), [0.0, 1.0, 0.0], 1e-15));
        assert_eq!(apply_isometry(IsometryElement::flip(0.0), p), pt(1.0, -2.0, -3.0));
    }

    #[test]
    fn flip_across_line_fixes_the_line() {
        let f = OrthogonalPart::flip_across_line(1.0, 1.0).unwrap();
        // line x + y = 0 is fixed in the xy-plane, z is negated
        let q = f.apply(pt(1.0, -1.0, 2.0));
        assert!(close(q.to_array(), [1.0, -1.0, -2.0], 1e-15));
        let n = f.apply(pt(1.0, 1.0, 0.0));
        assert!(close(n.to_array(), [-1.0, -1.0, 0.0], 1e-15));
        assert!(OrthogonalPart::flip_across_line(0.0, 0.0).is_err());
    }

    /// Pushforward of `v` at `p` by central differences.
    fn pushforward(iso: IsometryElement, p: GroupPoint, v: [f64; 3]) -> [f64; 3] {
        let h = 1e-5;
        let shift = |s: f64| pt(p.x + s * v[0], p.y + s * v[1], p.z + s * v[2]);
        let a = apply_isometry(iso, shift(h)).to_array();
        let b = apply_isometry(iso, shift(-h)).to_array();
        [0, 1, 2].map(|i| (a[i] - b[i]) / (2.0 * h))
    }

    fn coords() -> impl Strategy<Value = f64> {
        -3.0..3.0f64
    }

    fn point() -> impl Strategy<Value = GroupPoint> {
        (coords(), coords(), coords()).prop_map(|(x, y, z)| pt(x, y, z))
    }

    fn vector() -> impl Strategy<Value = [f64; 3]> {
        (coords(), coords(), coords()).prop_map(|(x, y, z)| [x, y, z])
    }

    fn isometry() -> impl Strategy<Value = IsometryElement> {
        (point(), -PI..PI, any::<bool>()).prop_map(|(g, t, flip)| IsometryElement {
            translation: g,
            orthogonal_part: if flip {
                OrthogonalPart::ReflectionFlip(t)
            } else {
                OrthogonalPart::RotationZ(t)
            },
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(g in point(), h in point(), k in point()) {
            let l = product(product(g, h), k).to_array();
            let r = product(g, product(h, k)).to_array();
            prop_assert!(close(l, r, 1e-14 * (1.0 + l.iter().map(|v| v.abs()).fold(0.0, f64::max))));
        }

        #[test]
        fn metric_is_left_invariant(g in point(), p in point(), v in vector(), w in vector()) {
            let d = left_translation_differential(g);
            let push = |u: [f64; 3]| [0, 1, 2].map(|i| d[i][0] * u[0] + d[i][1] * u[1] + d[i][2] * u[2]);
            let lhs = metric_pairing(product(g, p), push(v), push(w));
            let rhs = metric_pairing(p, v, w);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn isometry_inverse_round_trips(iso in isometry(), p in point()) {
            let q = apply_isometry(iso.inverse(), apply_isometry(iso, p));
            prop_assert!(close(q.to_array(), p.to_array(), 1e-12));
        }

        #[test]
        fn isometries_preserve_the_metric(iso in isometry(), p in point(), v in vector()) {
            let pv = pushforward(iso, p, v);
            let lhs = metric_pairing(apply_isometry(iso, p), pv, pv);
            let rhs = metric_pairing(p, v, v);
            prop_assert!((lhs - rhs).abs() <= 1e-7 * (1.0 + rhs));
        }
    }
}
