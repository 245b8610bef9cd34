//! Plane vectors, 2×2 matrices and exact orientation predicates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::linalg::Complex;
use crate::scalar::Scalar;

/// A holonomy or displacement; `x` horizontal, `y` vertical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    pub fn zero() -> Self {
        Vec2::default()
    }

    pub fn east() -> Self {
        Vec2::ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, o: &Vec2) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, s: &Scalar) -> Vec2 {
        Vec2::new(&self.x * s, &self.y * s)
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(self.x.clone(), self.y.clone())
    }

    pub fn from_complex(c: &Complex) -> Vec2 {
        Vec2::new(c.re.clone(), c.im.clone())
    }

    /// Same direction (positive multiple).
    pub fn same_direction(&self, o: &Vec2) -> bool {
        self.cross(o).is_zero() && self.dot(o).is_positive()
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl<'a, 'b> Add<&'b Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn add(self, o: &'b Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a, 'b> Sub<&'b Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn sub(self, o: &'b Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        &self + &o
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        &self - &o
    }
}

impl<'a> Neg for &'a Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        -&self
    }
}

/// 2×2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::ints(1, 0, 0, 1)
    }

    /// Horocycle matrix `[[1, t], [0, 1]]`.
    pub fn shear(t: Scalar) -> Self {
        Mat2::new(Scalar::one(), t, Scalar::zero(), Scalar::one())
    }

    /// Rotation-scaling matrix taking `v` to `(|v|², 0)`.
    pub fn normalizer(v: &Vec2) -> Self {
        Mat2::new(v.x.clone(), v.y.clone(), -&v.y, v.x.clone())
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let inv = det.inv();
        Some(Mat2::new(&self.d * &inv, -(&self.b * &inv), -(&self.c * &inv), &self.a * &inv))
    }
}

impl<'a, 'b> Mul<&'b Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, o: &'b Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

/// Which half-turn `x` falls into, measured counterclockwise from `base`:
/// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half(base: &Vec2, x: &Vec2) -> u8 {
    let c = base.cross(x);
    if c.is_positive() || (c.is_zero() && base.dot(x).is_positive()) {
        0
    } else {
        1
    }
}

/// Compares the counterclockwise angles from `base` to `a` and to `b`, each in `[0, 2π)`.
pub fn ccw_angle_cmp(base: &Vec2, a: &Vec2, b: &Vec2) -> Ordering {
    let (ha, hb) = (half(base, a), half(base, b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    match a.cross(b).signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Whether direction `w` lies in the half-open counterclockwise sweep `[from, to)`.
/// The sweep is assumed to be shorter than a full turn.
pub fn in_sweep(from: &Vec2, to: &Vec2, w: &Vec2) -> bool {
    ccw_angle_cmp(from, w, to) == Ordering::Less
}

pub fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> i32 {
    (b - a).cross(&(c - a)).signum()
}

/// Closed segments `[p1, p2]` and `[q1, q2]` share a point.
pub fn segments_touch(p1: &Vec2, p2: &Vec2, q1: &Vec2, q2: &Vec2) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(p1, p2, q1))
        || (o2 == 0 && on_segment(p1, p2, q2))
        || (o3 == 0 && on_segment(q1, q2, p1))
        || (o4 == 0 && on_segment(q1, q2, p2))
}

/// `q` (known collinear) lies on the closed segment `[a, b]`.
fn on_segment(a: &Vec2, b: &Vec2, q: &Vec2) -> bool {
    let lo_x = a.x.clone().min(b.x.clone());
    let hi_x = a.x.clone().max(b.x.clone());
    let lo_y = a.y.clone().min(b.y.clone());
    let hi_y = a.y.clone().max(b.y.clone());
    q.x >= lo_x && q.x <= hi_x && q.y >= lo_y && q.y <= hi_y
}

/// Twice the signed area of a closed polygon given by its vertices.
pub fn twice_signed_area(verts: &[Vec2]) -> Scalar {
    let n = verts.len();
    (0..n).map(|i| verts[i].cross(&verts[(i + 1) % n])).sum()
}

/// Positive when `d` lies strictly inside the circle through the
/// counterclockwise triangle `a, b, c`.
pub fn incircle(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> i32 {
    let ad = a - d;
    let bd = b - d;
    let cd = c - d;
    let (a2, b2, c2) = (ad.norm_sq(), bd.norm_sq(), cd.norm_sq());
    let det = &ad.x * &(&bd.y * &c2 - &b2 * &cd.y) - &ad.y * &(&bd.x * &c2 - &b2 * &cd.x)
        + &a2 * &(&bd.x * &cd.y - &bd.y * &cd.x);
    det.signum()
}

/// JSON-friendly exact vector: `[x, y]` as scalar strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VecText(pub String, pub String);

impl From<&Vec2> for VecText {
    fn from(v: &Vec2) -> Self {
        VecText(v.x.to_string(), v.y.to_string())
    }
}
