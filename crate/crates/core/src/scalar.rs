//! Exact elements of `Q` and of real quadratic fields `Q(√d)`.
//!
//! A [`Scalar`] is `a + b√d` with `a, b` arbitrary-precision rationals. The
//! representation is canonical: rationals are kept in lowest terms with a
//! positive denominator, and a scalar with `b = 0` always carries `d = 0`, so
//! structural equality is numeric equality. Rational scalars combine freely
//! with elements of any quadratic field; mixing two different non-trivial
//! fields is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The coefficient field `Q(√d)`; `d = 0` stands for `Q` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldCtx {
    pub d: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field parameter {0} is not square-free")]
    NotSquareFree(u32),
    #[error("field parameter 1 does not define a quadratic field")]
    Trivial,
}

impl FieldCtx {
    pub const RATIONAL: FieldCtx = FieldCtx { d: 0 };

    pub fn new(d: u32) -> Result<Self, FieldError> {
        if d == 1 {
            return Err(FieldError::Trivial);
        }
        let mut k = 2u32;
        while k.saturating_mul(k) <= d {
            if d % (k * k) == 0 {
                return Err(FieldError::NotSquareFree(d));
            }
            k += 1;
        }
        Ok(FieldCtx { d })
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    /// `√d` as a scalar of this field.
    pub fn sqrt_d(&self) -> Scalar {
        assert!(self.d != 0, "Q has no distinguished square root");
        Scalar::new(BigRational::zero(), BigRational::one(), self.d)
    }

    /// Whether `s` lies in this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        s.d == 0 || s.d == self.d
    }

    /// The smallest field containing both; `None` if they are incompatible.
    pub fn join(&self, other: &FieldCtx) -> Option<FieldCtx> {
        match (self.d, other.d) {
            (0, _) => Some(*other),
            (_, 0) => Some(*self),
            (a, b) if a == b => Some(*self),
            _ => None,
        }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            write!(f, "Q")
        } else {
            write!(f, "Q(sqrt({}))", self.d)
        }
    }
}

/// An exact real number `a + b√d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn combine_d(x: u32, y: u32) -> u32 {
    match (x, y) {
        (0, y) => y,
        (x, 0) => x,
        (x, y) => {
            assert_eq!(x, y, "scalars from different quadratic fields Q(√{x}) and Q(√{y})");
            x
        }
    }
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Self {
        if d == 0 {
            assert!(b.is_zero(), "irrational part over Q");
        }
        let d = if b.is_zero() { 0 } else { d };
        Scalar { a, b, d }
    }

    pub fn zero() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::zero(), d: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero(), d: 0 }
    }

    /// `p/q + (r/s)√d`, mostly for tests and fixtures.
    pub fn quad(p: i64, q: i64, r: i64, s: i64, d: u32) -> Self {
        Self::new(
            BigRational::new(p.into(), q.into()),
            BigRational::new(r.into(), s.into()),
            d,
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// The field parameter of the smallest field containing this value.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b√d`.
    pub fn conjugate(&self) -> Scalar {
        Scalar { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a² - d b²` (a rational).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        let n = self.norm();
        Scalar::new(&self.a / &n, -&self.b / &n, self.d)
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Largest integer `n` with `n <= self`, decided exactly.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // b√d = ±√(b² d); bracket it between consecutive integers of isqrt
        let t = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        let guess_b = isqrt_floor(&t);
        let guess = if self.b.is_negative() {
            (&self.a - BigRational::from_integer(guess_b)).floor().to_integer()
        } else {
            (&self.a + BigRational::from_integer(guess_b)).floor().to_integer()
        };
        let mut n: BigInt = guess - 2;
        while (self - &Scalar::rational(BigRational::from_integer(n.clone() + 1))).signum() >= 0 {
            n += 1;
        }
        while (self - &Scalar::rational(BigRational::from_integer(n.clone()))).signum() < 0 {
            n -= 1;
        }
        n
    }

    /// `self mod m` in `[0, m)` for positive `m`.
    pub fn rem_euclid(&self, m: &Scalar) -> Scalar {
        assert!(m.is_positive());
        let q = (self / m).floor();
        self - &(m * &Scalar::rational(BigRational::from_integer(q)))
    }

    /// Rough floating-point value; used for rendering only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// floor(√t) for a non-negative rational t.
fn isqrt_floor(t: &BigRational) -> BigInt {
    let fl = t.floor().to_integer();
    if fl.is_negative() {
        return BigInt::zero();
    }
    fl.sqrt()
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

macro_rules! forward_binop {
    ($Tr:ident, $m:ident) => {
        impl $Tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $Tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $Tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

impl<'a, 'b> Add<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'b Scalar) -> Scalar {
        let d = combine_d(self.d, rhs.d);
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a, 'b> Sub<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'b Scalar) -> Scalar {
        let d = combine_d(self.d, rhs.d);
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        let d = combine_d(self.d, rhs.d);
        if self.b.is_zero() && rhs.b.is_zero() {
            return Scalar::rational(&self.a * &rhs.a);
        }
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar::new(a, b, d)
    }
}

impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        if rhs.b.is_zero() {
            assert!(!rhs.a.is_zero(), "division by zero");
            return Scalar::new(&self.a / &rhs.a, &self.b / &rhs.a, self.d);
        }
        self * &rhs.inv()
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// `p/q` for rationals, `p/q+r/s*sqrt(d)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let sep = if self.b.is_negative() { "" } else { "+" };
        write!(f, "{}{}{}*sqrt({})", fmt_rat(&self.a), sep, fmt_rat(&self.b), self.d)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse exact scalar {0:?}")]
pub struct ParseScalarError(pub String);

pub fn parse_rational(s: &str) -> Result<BigRational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| err())?;
    let d = BigInt::from_str(den).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `p/q`, `p/q+r/s*sqrt(d)` and `p/q-r/s*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find("*sqrt(") else {
            return Ok(Scalar::rational(parse_rational(&t)?));
        };
        if !t.ends_with(')') {
            return Err(err());
        }
        let d: u32 = t[pos + 6..t.len() - 1].parse().map_err(|_| err())?;
        let head = &t[..pos];
        // split at the last sign that is not the leading one
        let split = head
            .char_indices()
            .skip(1)
            .filter(|(i, c)| (*c == '+' || *c == '-') && !head[..*i].ends_with('/'))
            .map(|(i, _)| i)
            .last()
            .ok_or_else(err)?;
        let a = parse_rational(&head[..split])?;
        let b_str = head[split..].trim_start_matches('+');
        let b = parse_rational(b_str)?;
        if d == 0 && !b.is_zero() {
            return Err(err());
        }
        let ctx = FieldCtx::new(d).map_err(|_| err())?;
        Ok(Scalar::new(a, b, ctx.d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_examples() {
        assert_eq!(Scalar::quad(0, 1, 0, 1, 5).signum(), 0);
        assert_eq!(Scalar::quad(1, 1, -1, 1, 5).signum(), -1);
        assert_eq!(Scalar::quad(-3, 1, 2, 1, 2).signum(), -1);
        assert_eq!(Scalar::quad(3, 1, -2, 1, 2).signum(), 1);
    }

    #[test]
    fn golden_ratio_identity() {
        let phi = Scalar::quad(1, 2, 1, 2, 5);
        assert_eq!(phi.square(), &phi + &Scalar::one());
        assert_eq!((&phi * &phi.inv()), Scalar::one());
        assert_eq!(phi.floor(), BigInt::from(1));
        assert_eq!((-&phi).floor(), BigInt::from(-2));
    }

    #[test]
    fn floor_exact_at_integers() {
        let s = Scalar::quad(3, 1, 0, 1, 0);
        assert_eq!(s.floor(), BigInt::from(3));
        let x = Scalar::quad(0, 1, 1, 1, 2) * Scalar::quad(0, 1, 1, 1, 2);
        assert_eq!(x.floor(), BigInt::from(2));
    }

    #[test]
    fn field_ctx_validation() {
        assert!(FieldCtx::new(5).is_ok());
        assert_eq!(FieldCtx::new(8), Err(FieldError::NotSquareFree(8)));
        assert_eq!(FieldCtx::new(1), Err(FieldError::Trivial));
    }

    #[test]
    fn parse_print_forms() {
        let s: Scalar = "1/2+1/2*sqrt(5)".parse().unwrap();
        assert_eq!(s, Scalar::quad(1, 2, 1, 2, 5));
        assert_eq!(s.to_string(), "1/2+1/2*sqrt(5)");
        let t: Scalar = "-3-2/7*sqrt(2)".parse().unwrap();
        assert_eq!(t.to_string(), "-3-2/7*sqrt(2)");
        assert_eq!("6/4".parse::<Scalar>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1+1*sqrt(4)".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..30, -50i64..50, 1i64..30, prop::sample::select(vec![0u32, 2, 3, 5]))
            .prop_map(|(p, q, r, s, d)| {
                if d == 0 {
                    Scalar::from_ratio(p, q)
                } else {
                    Scalar::quad(p, q, r, s, d)
                }
            })
    }

    proptest! {
        #[test]
        fn sign_is_antisymmetric(s in arb_scalar()) {
            let prod = s.signum() * (-&s).signum();
            prop_assert!(prod == 0 || prod == -1);
            prop_assert!(s.square().signum() >= 0);
        }

        #[test]
        fn parse_print_round_trip(s in arb_scalar()) {
            let back: Scalar = s.to_string().parse().unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn floor_brackets(s in arb_scalar()) {
            let n = Scalar::rational(BigRational::from_integer(s.floor()));
            prop_assert!(n <= s);
            prop_assert!(s < &n + &Scalar::one());
        }
    }
}
