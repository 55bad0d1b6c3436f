//! The Gans model of the hyperbolic plane: the whole plane `z = 1` with the
//! metric pulled back from the Poincaré disk.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || x * x + y * y >= 1.0 {
            return Err(Error::domain(format!("({x}, {y}) is not inside the unit disk")));
        }
        Ok(Self { x, y })
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GansPoint {
    pub u: f64,
    pub v: f64,
}

impl GansPoint {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }
}

/// Central projection of the upper hemisphere from the origin onto `z = 1`.
pub fn psi(p: [f64; 3]) -> Result<GansPoint> {
    let [x, y, z] = p;
    if !(z > 0.0) {
        return Err(Error::domain(format!("psi needs z > 0, got {z}")));
    }
    Ok(GansPoint::new(x / z, y / z))
}

pub fn disk_to_gans(p: DiskPoint) -> Result<GansPoint> {
    let d = 1.0 - p.x * p.x - p.y * p.y;
    if !(d > 0.0) {
        return Err(Error::domain(format!("({}, {}) is not inside the unit disk", p.x, p.y)));
    }
    Ok(GansPoint::new(2.0 * p.x / d, 2.0 * p.y / d))
}

pub fn gans_to_disk(q: GansPoint) -> DiskPoint {
    let s = 1.0 + (1.0 + q.u * q.u + q.v * q.v).sqrt();
    DiskPoint { x: q.u / s, y: q.v / s }
}

pub fn gans_metric(q: GansPoint) -> [[f64; 2]; 2] {
    let d = 1.0 + q.u * q.u + q.v * q.v;
    let off = -q.u * q.v / d;
    [[(1.0 + q.v * q.v) / d, off], [off, (1.0 + q.u * q.u) / d]]
}

pub fn gans_pairing(q: GansPoint, a: [f64; 2], b: [f64; 2]) -> f64 {
    let g = gans_metric(q);
    a[0] * (g[0][0] * b[0] + g[0][1] * b[1]) + a[1] * (g[1][0] * b[0] + g[1][1] * b[1])
}

/// The two isometries of the Gans plane used by Gauss map equivariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GansIsometry {
    /// Rotation about the origin by `θ` radians.
    Rotation(f64),
    /// Euclidean reflection across the line `a u + b v = 0`.
    Reflection { a: f64, b: f64 },
}

pub fn gans_isometry(kind: GansIsometry, q: GansPoint) -> Result<GansPoint> {
    match kind {
        GansIsometry::Rotation(t) => {
            let (s, c) = t.sin_cos();
            Ok(GansPoint::new(c * q.u - s * q.v, s * q.u + c * q.v))
        }
        GansIsometry::Reflection { a, b } => {
            let n2 = a * a + b * b;
            if n2 == 0.0 {
                return Err(Error::param("reflection line needs a non-zero normal (a, b)"));
            }
            let k = 2.0 * (a * q.u + b * q.v) / n2;
            Ok(GansPoint::new(q.u - k * a, q.v - k * b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn psi_examples() {
        assert_eq!(psi([0.0, 0.0, 1.0]).unwrap(), GansPoint::new(0.0, 0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = psi([s, 0.0, s]).unwrap();
        assert!((q.u - 1.0).abs() < 1e-15 && q.v == 0.0);
        let q = psi([0.0, 0.6, 0.8]).unwrap();
        assert!((q.v - 0.75).abs() < 1e-15);
        assert!(psi([1.0, 0.0, 0.0]).is_err());
        assert!(psi([0.0, 0.6, -0.8]).is_err());
    }

    #[test]
    fn disk_map_examples() {
        let o = DiskPoint::new(0.0, 0.0).unwrap();
        assert_eq!(disk_to_gans(o).unwrap(), GansPoint::new(0.0, 0.0));
        let q = disk_to_gans(DiskPoint::new(0.5, 0.0).unwrap()).unwrap();
        assert!((q.u - 4.0 / 3.0).abs() < 1e-15);
        let p = DiskPoint::new(0.3, -0.4).unwrap();
        let back = gans_to_disk(disk_to_gans(p).unwrap());
        assert!((back.x - 0.3).abs() < 1e-14 && (back.y + 0.4).abs() < 1e-14);
        assert!(DiskPoint::new(0.8, 0.6).is_err());
        assert!(disk_to_gans(DiskPoint { x: 1.0, y: 0.0 }).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(gans_to_disk(GansPoint::new(0.0, 0.0)), DiskPoint { x: 0.0, y: 0.0 });
        let d = gans_to_disk(GansPoint::new(4.0 / 3.0, 0.0));
        assert!((d.x - 0.5).abs() < 1e-15);
        let far = gans_to_disk(GansPoint::new(0.0, -1e6));
        assert!(far.x == 0.0 && far.y < 0.0 && far.y > -1.0);
    }

    #[test]
    fn metric_examples() {
        assert_eq!(gans_metric(GansPoint::new(0.0, 0.0)), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(gans_metric(GansPoint::new(1.0, 0.0)), [[0.5, 0.0], [0.0, 1.0]]);
        let q = GansPoint::new(0.7, -2.1);
        let g = gans_metric(q);
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let d = 1.0 + q.u * q.u + q.v * q.v;
        assert!((det - 1.0 / d).abs() < 1e-15);
    }

    #[test]
    fn isometry_examples() {
        let r = gans_isometry(GansIsometry::Rotation(PI), GansPoint::new(1.0, 0.0)).unwrap();
        assert!((r.u + 1.0).abs() < 1e-15 && r.v.abs() < 1e-15);
        let c = gans_isometry(GansIsometry::Reflection { a: 0.0, b: 1.0 }, GansPoint::new(2.0, 3.0))
            .unwrap();
        assert_eq!(c, GansPoint::new(2.0, -3.0));
        assert!(gans_isometry(GansIsometry::Reflection { a: 0.0, b: 0.0 }, c).is_err());
    }

    /// Pushforward of `v` at `q` by central differences.
    fn push(kind: GansIsometry, q: GansPoint, v: [f64; 2]) -> [f64; 2] {
        let h = 1e-6;
        let at = |s: f64| gans_isometry(kind, GansPoint::new(q.u + s * v[0], q.v + s * v[1])).unwrap();
        let (a, b) = (at(h), at(-h));
        [(a.u - b.u) / (2.0 * h), (a.v - b.v) / (2.0 * h)]
    }

    /// Jacobian of `gans_to_disk` by central differences.
    fn disk_jacobian(q: GansPoint) -> [[f64; 2]; 2] {
        let h = 1e-6;
        let du = |s: f64| gans_to_disk(GansPoint::new(q.u + s, q.v));
        let dv = |s: f64| gans_to_disk(GansPoint::new(q.u, q.v + s));
        let (a, b, c, d) = (du(h), du(-h), dv(h), dv(-h));
        [
            [(a.x - b.x) / (2.0 * h), (c.x - d.x) / (2.0 * h)],
            [(a.y - b.y) / (2.0 * h), (c.y - d.y) / (2.0 * h)],
        ]
    }

    fn gans_point() -> impl Strategy<Value = GansPoint> {
        (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(u, v)| GansPoint::new(u, v))
    }

    fn disk_point() -> impl Strategy<Value = DiskPoint> {
        (0.0..0.99f64, -PI..PI).prop_map(|(r, t)| DiskPoint { x: r * t.cos(), y: r * t.sin() })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn disk_round_trip(p in disk_point()) {
            let back = gans_to_disk(disk_to_gans(p).unwrap());
            prop_assert!((back.x - p.x).abs() < 1e-12 && (back.y - p.y).abs() < 1e-12);
        }

        #[test]
        fn image_stays_in_disk(q in gans_point()) {
            prop_assert!(gans_to_disk(q).norm() < 1.0);
        }

        #[test]
        fn rotations_and_reflections_are_isometries(
            q in gans_point(),
            v in (-1.0..1.0f64, -1.0..1.0f64),
            t in -PI..PI,
            flip in any::<bool>(),
        ) {
            let kind = if flip {
                GansIsometry::Reflection { a: t.cos(), b: t.sin() }
            } else {
                GansIsometry::Rotation(t)
            };
            let v = [v.0, v.1];
            let pv = push(kind, q, v);
            let lhs = gans_pairing(gans_isometry(kind, q).unwrap(), pv, pv);
            let rhs = gans_pairing(q, v, v);
            prop_assert!((lhs - rhs).abs() < 1e-8);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn metric_is_poincare_pullback(q in gans_point()) {
            let d = gans_to_disk(q);
            let j = disk_jacobian(q);
            let conf = 4.0 / (1.0 - d.x * d.x - d.y * d.y).powi(2);
            let h = gans_metric(q);
            for a in 0..2 {
                for b in 0..2 {
                    let pull = conf * (j[0][a] * j[0][b] + j[1][a] * j[1][b]);
                    prop_assert!((pull - h[a][b]).abs() < 1e-8, "{a}{b}: {pull} vs {}", h[a][b]);
                }
            }
        }
    }
}
