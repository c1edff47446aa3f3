use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::io::fmt_real;
use crate::model::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn splat(v: f64) -> Self {
        Vec3::new(v, v, v)
    }

    pub fn unit(axis: Axis) -> Self {
        let mut v = Vec3::ZERO;
        v.set(axis, 1.0);
        v
    }

    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn set(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::X => self.x = value,
            Axis::Y => self.y = value,
            Axis::Z => self.z = value,
        }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn min(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Vec3 {
        Vec3::new(f(self.x), f(self.y), f(self.z))
    }
}

/// Euclidean distance.
pub fn distance(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm()
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}, {}, {}>",
            fmt_real(self.x),
            fmt_real(self.y),
            fmt_real(self.z)
        )
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

/// Sine and cosine of an angle in degrees, exact at multiples of 90.
fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let quarter = deg / 90.0;
    if quarter == quarter.round() {
        match (quarter as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        deg.to_radians().sin_cos()
    }
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Right-handed rotation by `deg` degrees about a world axis.
    pub fn about(axis: Axis, deg: f64) -> Mat3 {
        let (s, c) = sin_cos_deg(deg);
        match axis {
            Axis::X => Mat3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]),
            Axis::Y => Mat3([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]),
            Axis::Z => Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]),
        }
    }

    /// Extrinsic Euler angles in degrees, applied about Z, then X, then Y.
    pub fn from_euler_deg(rot: Vec3) -> Mat3 {
        Mat3::about(Axis::Y, rot.y) * Mat3::about(Axis::X, rot.x) * Mat3::about(Axis::Z, rot.z)
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(r)
    }
}

/// World-axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Aabb { min, max }
    }

    pub fn from_center_extents(center: Vec3, extents: Vec3) -> Self {
        let half = extents * 0.5;
        Aabb::new(center - half, center + half)
    }

    /// Smallest box containing every point.
    pub fn enclosing(points: impl IntoIterator<Item = Vec3>) -> Option<Aabb> {
        points.into_iter().fold(None, |acc, p| {
            Some(match acc {
                None => Aabb::new(p, p),
                Some(b) => Aabb::new(b.min.min(p), b.max.max(p)),
            })
        })
    }

    pub fn extents(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        Aabb::new(self.min.min(o.min), self.max.max(o.max))
    }

    pub fn inflate(&self, margin: f64) -> Aabb {
        Aabb::new(
            self.min - Vec3::splat(margin),
            self.max + Vec3::splat(margin),
        )
    }

    pub fn translate(&self, by: Vec3) -> Aabb {
        Aabb::new(self.min + by, self.max + by)
    }

    /// Closed containment of `o` in `self`.
    pub fn contains(&self, o: &Aabb) -> bool {
        Axis::ALL
            .iter()
            .all(|&a| self.min.get(a) <= o.min.get(a) && o.max.get(a) <= self.max.get(a))
    }

    /// Interior containment: no face of `o` touches a face of `self`.
    pub fn strictly_contains(&self, o: &Aabb) -> bool {
        Axis::ALL
            .iter()
            .all(|&a| self.min.get(a) < o.min.get(a) && o.max.get(a) < self.max.get(a))
    }

    pub fn contains_point(&self, p: Vec3) -> bool {
        Axis::ALL
            .iter()
            .all(|&a| self.min.get(a) <= p.get(a) && p.get(a) <= self.max.get(a))
    }

    /// The face extremal along a signed axis, as a degenerate box.
    pub fn face(&self, axis: Axis, positive: bool) -> Aabb {
        let at = if positive {
            self.max.get(axis)
        } else {
            self.min.get(axis)
        };
        let mut f = *self;
        f.min.set(axis, at);
        f.max.set(axis, at);
        f
    }

    pub fn approx_eq(&self, o: &Aabb, tol: f64) -> bool {
        Axis::ALL.iter().all(|&a| {
            (self.min.get(a) - o.min.get(a)).abs() <= tol
                && (self.max.get(a) - o.max.get(a)).abs() <= tol
        })
    }
}

impl fmt::Display for Aabb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Axis::ALL
            .iter()
            .map(|&a| {
                format!(
                    "[{}, {}]",
                    fmt_real(self.min.get(a)),
                    fmt_real(self.max.get(a))
                )
            })
            .collect();
        f.write_str(&parts.join(" x "))
    }
}
