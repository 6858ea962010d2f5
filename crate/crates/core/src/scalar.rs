//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.
//!
//! Every quantity that enters a certificate is carried in one of these two
//! types. There is no rounding anywhere in this module; equality is decidable
//! and `conj` is an involution.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational from a decimal-free string such as `"3"` or `"-5/7"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.contains('.') || t.contains(['e', 'E']) {
        return Err(format!("`{t}` is not an exact rational (floats are rejected)"));
    }
    Rat::from_str(t).map_err(|e| format!("`{t}`: {e}"))
}

/// Render a rational as `p` or `p/q` with no whitespace.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Gaussian rational `re + im*i` with exact components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat { re, im: <Rat as Zero>::zero() }
    }

    pub fn zero() -> Self {
        GaussRat { re: <Rat as Zero>::zero(), im: <Rat as Zero>::zero() }
    }

    pub fn one() -> Self {
        GaussRat { re: <Rat as One>::one(), im: <Rat as Zero>::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat { re: <Rat as Zero>::zero(), im: <Rat as One>::one() }
    }

    pub fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(&self.re) && <Rat as Zero>::is_zero(&self.im)
    }

    pub fn is_real(&self) -> bool {
        <Rat as Zero>::is_zero(&self.im)
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `re^2 + im^2`.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|oi| self.mul(&oi))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if <Rat as Zero>::is_zero(&self.im) {
            write!(f, "{}", rat_to_string(&self.re))
        } else if <Rat as Zero>::is_zero(&self.re) {
            write!(f, "{}i", rat_to_string(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{}i", rat_to_string(&self.re), rat_to_string(&self.im))
        } else {
            write!(f, "{}+{}i", rat_to_string(&self.re), rat_to_string(&self.im))
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The common interface of the two exact coefficient fields.
///
/// Arithmetic goes through `&self` methods so that `BigRational` and
/// `GaussRat` share one generic code path in the form/matrix layers.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Complex conjugation (identity on the real field).
    fn conj(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_rat(&rat(n))
    }
    /// Approximate value as `(re, im)`, for numeric search layers only.
    fn approx(&self) -> (f64, f64);
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn approx(&self) -> (f64, f64) {
        (self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn one() -> Self {
        GaussRat::one()
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        GaussRat::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRat::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRat::mul(self, o)
    }
    fn neg(&self) -> Self {
        GaussRat::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        GaussRat::inv(self)
    }
    fn conj(&self) -> Self {
        GaussRat::conj(self)
    }
    fn from_rat(r: &Rat) -> Self {
        GaussRat::from_rat(r.clone())
    }
    fn approx(&self) -> (f64, f64) {
        self.to_f64()
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions. Returns `None` for non-finite input.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    // Continued-fraction convergents p/q with q <= max_den.
    let neg = x < 0.0;
    let mut x = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::from(0), BigInt::from(1), BigInt::from(1), BigInt::from(0));
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - a;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1.is_zero() {
        return None;
    }
    let mut r = Rat::new(p1, q1);
    if neg {
        r = -r;
    }
    Some(r)
}
