//! Exact arithmetic in the quadratic field Q(√2), 2×2 matrices over it and
//! the projective action of such matrices on directions in [0, π].

use std::cmp::Ordering;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `a + b√2` of Q(√2) with arbitrary precision rational parts.
///
/// Both parts are kept reduced, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Q2 {
    a: BigRational,
    b: BigRational,
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl Q2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Q2 { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Q2::new(ratio(a, 1), ratio(b, 1))
    }

    /// `p/q + (r/s)√2`. Panics if a denominator is zero.
    pub fn from_fracs(p: i64, q: i64, r: i64, s: i64) -> Self {
        Q2::new(ratio(p, q), ratio(r, s))
    }

    pub fn rational(a: BigRational) -> Self {
        Q2::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        Q2::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Q2::from_ints(1, 0)
    }

    pub fn sqrt2() -> Self {
        Q2::from_ints(0, 1)
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b√2`.
    pub fn conjugate(&self) -> Self {
        Q2::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    /// Exact sign, decided by comparing `a²` with `2b²` when the parts disagree.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            (x, y) => {
                // a² - 2b² > 0 means |a| > |b|√2
                if self.norm() > BigRational::zero() {
                    x
                } else {
                    y
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Q2::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Q2) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Q2::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Nearest double. When the parts have opposite signs the value is
    /// computed as `norm / conjugate` so no cancellation occurs.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.a.is_positive() == self.b.is_positive() || self.a.is_zero() || self.b.is_zero()
        {
            return a + b * SQRT_2;
        }
        let n = self.norm().to_f64().unwrap_or(f64::NAN);
        n / (a - b * SQRT_2)
    }
}

impl PartialOrd for Q2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl From<i64> for Q2 {
    fn from(v: i64) -> Self {
        Q2::from_ints(v, 0)
    }
}

impl From<BigRational> for Q2 {
    fn from(v: BigRational) -> Self {
        Q2::rational(v)
    }
}

macro_rules! q2_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Q2> for &'a Q2 {
            type Output = Q2;
            fn $method(self, rhs: &'a Q2) -> Q2 {
                let f: fn(&Q2, &Q2) -> Q2 = $body;
                f(self, rhs)
            }
        }
        impl $tr<Q2> for Q2 {
            type Output = Q2;
            fn $method(self, rhs: Q2) -> Q2 {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Q2> for Q2 {
            type Output = Q2;
            fn $method(self, rhs: &'a Q2) -> Q2 {
                (&self).$method(rhs)
            }
        }
    };
}

q2_binop!(Add, add, |x, y| Q2::new(&x.a + &y.a, &x.b + &y.b));
q2_binop!(Sub, sub, |x, y| Q2::new(&x.a - &y.a, &x.b - &y.b));
q2_binop!(Mul, mul, |x, y| {
    let two = BigRational::from_integer(BigInt::from(2));
    Q2::new(
        &x.a * &y.a + two * &x.b * &y.b,
        &x.a * &y.b + &x.b * &y.a,
    )
});

impl Neg for Q2 {
    type Output = Q2;
    fn neg(self) -> Q2 {
        Q2::new(-self.a, -self.b)
    }
}

impl Neg for &Q2 {
    type Output = Q2;
    fn neg(self) -> Q2 {
        Q2::new(-self.a.clone(), -self.b.clone())
    }
}

/// Formats as `p/q + r/s*sqrt2`; both terms are always present.
impl fmt::Display for Q2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt2", self.a, -self.b.clone())
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p).map_err(|_| bad())?;
        let q = BigInt::from_str(q).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    Ok(BigRational::from_integer(
        BigInt::from_str(s).map_err(|_| bad())?,
    ))
}

/// Accepts sums of terms like `3`, `-1/2`, `0.25`, `sqrt2`, `2*sqrt2`,
/// `1/3*sqrt(2)` or `√2`, e.g. `"1 + 2*sqrt2"` or `"3/2-sqrt2"`.
impl FromStr for Q2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Q2> {
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .replace("sqrt(2)", "sqrt2")
            .replace('√', "sqrt");
        if compact.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        // split into signed terms
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*'
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut acc = Q2::zero();
        for term in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'-' => (true, &term[1..]),
                b'+' => (false, &term[1..]),
                _ => (false, term),
            };
            let value = if let Some(coef) = body.strip_suffix("sqrt2") {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coef)?
                };
                Q2::new(BigRational::zero(), c)
            } else if let Some(coef) = body.strip_prefix("sqrt2") {
                let coef = coef.strip_prefix('*').unwrap_or(coef);
                let c = if coef.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coef)?
                };
                Q2::new(BigRational::zero(), c)
            } else {
                Q2::rational(parse_rational(body)?)
            };
            acc = if neg { acc - value } else { acc + value };
        }
        Ok(acc)
    }
}

/// Ring operations shared by exact and floating matrix entries.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn try_div(&self, rhs: &Self) -> Option<Self>;
    fn to_f64(&self) -> f64;
}

impl Scalar for Q2 {
    fn zero() -> Self {
        Q2::zero()
    }
    fn one() -> Self {
        Q2::one()
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div(rhs).ok()
    }
    fn to_f64(&self) -> f64 {
        Q2::to_f64(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Row-major 2×2 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<T = Q2> {
    pub m: [[T; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.m[0][0].clone() * self.m[1][1].clone() - self.m[0][1].clone() * self.m[1][0].clone()
    }

    pub fn product(&self, rhs: &Mat2<T>) -> Mat2<T> {
        let e = |i: usize, j: usize| {
            self.m[i][0].clone() * rhs.m[0][j].clone() + self.m[i][1].clone() * rhs.m[1][j].clone()
        };
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn inverse(&self) -> Result<Mat2<T>> {
        let det = self.det();
        let div = |v: T| v.try_div(&det).ok_or(Error::SingularMatrix);
        Ok(Mat2::new(
            div(self.m[1][1].clone())?,
            div(-self.m[0][1].clone())?,
            div(-self.m[1][0].clone())?,
            div(self.m[0][0].clone())?,
        ))
    }

    pub fn pow(&self, e: u32) -> Mat2<T> {
        (0..e).fold(Mat2::identity(), |acc, _| acc.product(self))
    }

    pub fn apply(&self, x: &T, y: &T) -> (T, T) {
        (
            self.m[0][0].clone() * x.clone() + self.m[0][1].clone() * y.clone(),
            self.m[1][0].clone() * x.clone() + self.m[1][1].clone() * y.clone(),
        )
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        Mat2::new(
            self.m[0][0].to_f64(),
            self.m[0][1].to_f64(),
            self.m[1][0].to_f64(),
            self.m[1][1].to_f64(),
        )
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.m[0][0], &self.m[0][1], &self.m[1][0], &self.m[1][1]]
    }
}

impl<T: Scalar> Mul for &Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: &Mat2<T>) -> Mat2<T> {
        Mat2::product(self, rhs)
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Mat2<T>) -> Mat2<T> {
        Mat2::product(&self, &rhs)
    }
}

impl Mat2<f64> {
    /// Entrywise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &Mat2<f64>, tol: f64) -> bool {
        self.entries()
            .iter()
            .zip(other.entries())
            .all(|(a, b)| (**a - *b).abs() <= tol)
    }
}

/// Cotangents of `kπ/8` for `k = 1..=7`.
pub fn cot_eighth(k: u32) -> Option<Q2> {
    Some(match k {
        1 => Q2::from_ints(1, 1),
        2 => Q2::from_ints(1, 0),
        3 => Q2::from_ints(-1, 1),
        4 => Q2::from_ints(0, 0),
        5 => Q2::from_ints(1, -1),
        6 => Q2::from_ints(-1, 0),
        7 => Q2::from_ints(-1, -1),
        _ => return None,
    })
}

/// A direction θ ∈ [0, π], either exact or as a floating angle.
///
/// Exact directions are stored as `(μ, 1)` with μ = cot θ, or as `(±1, 0)`
/// for θ = 0 and θ = π, which the Farey map tells apart.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectiveDirection {
    Exact { x: Q2, y: Q2 },
    Approx { theta: f64 },
}

impl ProjectiveDirection {
    /// Normalizes the vector `(x, y)`; opposite vectors give the same direction
    /// unless `y = 0`.
    pub fn exact(x: Q2, y: Q2) -> Result<Self> {
        match y.sign() {
            Ordering::Equal => match x.sign() {
                Ordering::Equal => Err(Error::ZeroDirection),
                Ordering::Greater => Ok(Self::zero()),
                Ordering::Less => Ok(Self::pi()),
            },
            _ => {
                let mu = x.checked_div(&y)?;
                Ok(ProjectiveDirection::Exact { x: mu, y: Q2::one() })
            }
        }
    }

    /// The direction with cotangent `mu`.
    pub fn from_cot(mu: Q2) -> Self {
        ProjectiveDirection::Exact { x: mu, y: Q2::one() }
    }

    /// θ = 0.
    pub fn zero() -> Self {
        ProjectiveDirection::Exact { x: Q2::one(), y: Q2::zero() }
    }

    /// θ = π.
    pub fn pi() -> Self {
        ProjectiveDirection::Exact { x: -Q2::one(), y: Q2::zero() }
    }

    pub fn approx(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::AngleOutOfRange(theta));
        }
        Ok(ProjectiveDirection::Approx { theta })
    }

    /// Exact direction `k·π/m` when `m` divides 8.
    pub fn multiple_of_pi(k: u32, m: u32) -> Result<Self> {
        if m == 0 || 8 % m != 0 {
            return Err(Error::ExactUnavailable(format!("pi/{m} is not a multiple of pi/8")));
        }
        let eighths = k * (8 / m);
        match eighths {
            0 => Ok(Self::zero()),
            8 => Ok(Self::pi()),
            e if e < 8 => Ok(Self::from_cot(cot_eighth(e).unwrap())),
            _ => Err(Error::AngleOutOfRange(PI * k as f64 / m as f64)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ProjectiveDirection::Exact { .. })
    }

    /// Cotangent, `None` for the horizontal direction.
    pub fn cot(&self) -> Option<Q2> {
        match self {
            ProjectiveDirection::Exact { x, y } if !y.is_zero() => Some(x.clone()),
            _ => None,
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            ProjectiveDirection::Approx { theta } => *theta,
            ProjectiveDirection::Exact { x, y } => {
                if y.is_zero() {
                    if x.is_positive() {
                        0.0
                    } else {
                        PI
                    }
                } else {
                    // y = 1
                    1.0f64.atan2(x.to_f64())
                }
            }
        }
    }

    pub fn to_approx(&self) -> ProjectiveDirection {
        ProjectiveDirection::Approx { theta: self.theta() }
    }

    /// Unit vector along the direction.
    pub fn vector_f64(&self) -> (f64, f64) {
        let t = self.theta();
        (t.cos(), t.sin())
    }

    /// Orders two directions by angle; exact when both are exact.
    pub fn angle_cmp(&self, other: &ProjectiveDirection) -> Ordering {
        match (self.exact_key(), other.exact_key()) {
            (Some((ra, ma)), Some((rb, mb))) => ra.cmp(&rb).then_with(|| match (ma, mb) {
                // larger cotangent means smaller angle
                (Some(a), Some(b)) => b.cmp(&a),
                _ => Ordering::Equal,
            }),
            _ => self.theta().total_cmp(&other.theta()),
        }
    }

    fn exact_key(&self) -> Option<(u8, Option<Q2>)> {
        match self {
            ProjectiveDirection::Approx { .. } => None,
            ProjectiveDirection::Exact { x, y } => Some(if y.is_zero() {
                if x.is_positive() {
                    (0, None)
                } else {
                    (2, None)
                }
            } else {
                (1, Some(x.clone()))
            }),
        }
    }
}

impl fmt::Display for ProjectiveDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveDirection::Approx { theta } => write!(f, "theta={theta}"),
            ProjectiveDirection::Exact { x, y } if y.is_zero() => {
                write!(f, "{}", if x.is_positive() { "theta=0" } else { "theta=pi" })
            }
            ProjectiveDirection::Exact { x, .. } => write!(f, "cot={x}"),
        }
    }
}

/// Projective action of `m` on `d` through the vector action on `(cos θ, sin θ)`;
/// the image is renormalized into [0, π].
pub fn moebius_apply(m: &Mat2<Q2>, d: &ProjectiveDirection) -> Result<ProjectiveDirection> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    match d {
        ProjectiveDirection::Exact { x, y } => {
            let (x2, y2) = m.apply(x, y);
            ProjectiveDirection::exact(x2, y2)
        }
        ProjectiveDirection::Approx { theta } => {
            Ok(ProjectiveDirection::Approx { theta: moebius_apply_f64(&m.to_f64(), *theta) })
        }
    }
}

/// Floating version of [`moebius_apply`] on angles.
pub fn moebius_apply_f64(m: &Mat2<f64>, theta: f64) -> f64 {
    let (x, y) = m.apply(&theta.cos(), &theta.sin());
    vector_angle(x, y)
}

/// Angle in [0, π] of the line spanned by `(x, y)`, keeping the sign of `x`
/// when `y` vanishes.
pub fn vector_angle(x: f64, y: f64) -> f64 {
    let (x, y) = if y < 0.0 { (-x, -y) } else { (x, y) };
    // +0.0 so that atan2 returns π rather than -π
    y.abs().atan2(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q2 {
        s.parse().unwrap()
    }

    #[test]
    fn field_examples() {
        let one_plus = Q2::from_ints(1, 1);
        assert_eq!(&one_plus * &one_plus, Q2::from_ints(3, 2));
        assert_eq!(Q2::one().checked_div(&one_plus).unwrap(), Q2::from_ints(-1, 1));
        assert_eq!(Q2::from_ints(3, -2).sign(), Ordering::Greater);
        assert_eq!(Q2::from_ints(-3, 2).sign(), Ordering::Less);
        assert_eq!(Q2::one().checked_div(&Q2::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn sign_of_near_cancellation() {
        // 99/70 is a convergent of √2: 99 - 70√2 ≈ 0.00505 > 0
        assert!(Q2::from_ints(99, -70).is_positive());
        assert!(Q2::from_ints(-99, 70).is_negative());
        // 140/99 < √2
        assert!(Q2::from_ints(140, -99).is_negative());
    }

    #[test]
    fn to_f64_avoids_cancellation() {
        let x = Q2::from_ints(99, -70);
        let expect = 99.0 - 70.0 * SQRT_2;
        assert!((x.to_f64() - expect).abs() < 1e-14);
        let big = Q2::from_ints(3, 2).pow(20) * Q2::from_ints(3, -2).pow(20);
        assert_eq!(big, Q2::one());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("1 + 2*sqrt2"), Q2::from_ints(1, 2));
        assert_eq!(q("3/2-sqrt2"), Q2::from_fracs(3, 2, -1, 1));
        assert_eq!(q("-1/3*sqrt(2)"), Q2::from_fracs(0, 1, -1, 3));
        assert_eq!(q("0.25"), Q2::from_fracs(1, 4, 0, 1));
        assert_eq!(q("2+√2"), Q2::from_ints(2, 1));
        assert_eq!(Q2::from_fracs(1, 2, -3, 4).to_string(), "1/2 - 3/4*sqrt2");
        assert_eq!(Q2::from_ints(3, 2).to_string(), "3 + 2*sqrt2");
        assert!("1/0".parse::<Q2>().is_err());
        assert!("abc".parse::<Q2>().is_err());
    }

    fn gamma() -> Mat2 {
        Mat2::new(-Q2::one(), Q2::from_ints(2, 2), Q2::zero(), Q2::one())
    }

    #[test]
    fn gamma_fixes_pi_over_8() {
        let d = ProjectiveDirection::from_cot(Q2::from_ints(1, 1));
        assert_eq!(moebius_apply(&gamma(), &d).unwrap(), d);
    }

    #[test]
    fn gamma_sends_pi_over_4() {
        let d = ProjectiveDirection::from_cot(Q2::one());
        let img = moebius_apply(&gamma(), &d).unwrap();
        assert_eq!(img, ProjectiveDirection::from_cot(Q2::from_ints(1, 2)));
    }

    #[test]
    fn gamma_swaps_horizontal_ends() {
        let g = gamma();
        assert_eq!(moebius_apply(&g, &ProjectiveDirection::zero()).unwrap(), ProjectiveDirection::pi());
        assert_eq!(moebius_apply(&g, &ProjectiveDirection::pi()).unwrap(), ProjectiveDirection::zero());
    }

    #[test]
    fn identity_action() {
        let id = Mat2::<Q2>::identity();
        for d in [
            ProjectiveDirection::zero(),
            ProjectiveDirection::pi(),
            ProjectiveDirection::from_cot(Q2::from_fracs(-7, 3, 2, 5)),
        ] {
            assert_eq!(moebius_apply(&id, &d).unwrap(), d);
        }
        let a = ProjectiveDirection::approx(1.234).unwrap();
        assert!((moebius_apply(&id, &a).unwrap().theta() - 1.234).abs() < 1e-15);
    }

    #[test]
    fn matrix_identities() {
        let g = gamma();
        assert_eq!(&g * &g, Mat2::identity());
        let nu7 = Mat2::new(-Q2::one(), Q2::zero(), Q2::zero(), Q2::one());
        assert_eq!(&nu7 * &nu7, Mat2::identity());
        let sigma = Mat2::new(Q2::one(), Q2::from_ints(2, 2), Q2::zero(), Q2::one());
        assert_eq!(&g * &nu7, sigma);
        assert_eq!(sigma.inverse().unwrap().product(&sigma), Mat2::identity());
        let singular = Mat2::new(Q2::one(), Q2::sqrt2(), Q2::sqrt2(), Q2::from_ints(2, 0));
        assert_eq!(singular.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn exact_angles() {
        let d = ProjectiveDirection::multiple_of_pi(1, 8).unwrap();
        assert!((d.theta() - PI / 8.0).abs() < 1e-15);
        assert!(((1.0 + SQRT_2) - (PI / 8.0).cos() / (PI / 8.0).sin()).abs() < 1e-12);
        assert_eq!(ProjectiveDirection::multiple_of_pi(2, 4).unwrap(), ProjectiveDirection::from_cot(Q2::zero()));
        assert_eq!(ProjectiveDirection::multiple_of_pi(1, 1).unwrap(), ProjectiveDirection::pi());
        assert!(ProjectiveDirection::multiple_of_pi(1, 3).is_err());
        for k in 1..8 {
            let d = ProjectiveDirection::multiple_of_pi(k, 8).unwrap();
            assert!((d.theta() - k as f64 * PI / 8.0).abs() < 1e-14);
        }
    }

    #[test]
    fn angle_order() {
        let a = ProjectiveDirection::multiple_of_pi(1, 8).unwrap();
        let b = ProjectiveDirection::multiple_of_pi(3, 8).unwrap();
        assert_eq!(a.angle_cmp(&b), Ordering::Less);
        assert_eq!(ProjectiveDirection::zero().angle_cmp(&a), Ordering::Less);
        assert_eq!(ProjectiveDirection::pi().angle_cmp(&b), Ordering::Greater);
        assert_eq!(a.angle_cmp(&a), Ordering::Equal);
    }

    #[test]
    fn vector_angle_near_horizontal() {
        assert_eq!(vector_angle(-1.0, 0.0), PI);
        assert_eq!(vector_angle(-1.0, -0.0), PI);
        assert_eq!(vector_angle(1.0, 0.0), 0.0);
        assert!((vector_angle(0.0, -1.0) - PI / 2.0).abs() < 1e-15);
    }
}
