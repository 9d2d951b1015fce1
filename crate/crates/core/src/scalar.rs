//! Exact numbers in a real quadratic field `Q(sqrt(d))`.
//!
//! A [`Scalar`] is `p/q + (r/s)·sqrt(d)` with `d` square-free. Rationals are
//! the scalars with a zero irrational part, and they are compatible with every
//! field. Two scalars with nonzero irrational parts over different `d` cannot
//! be combined; the `try_*` methods report that as [`ScalarError::FieldMismatch`]
//! and the operator impls panic on it, the same way integer overflow would.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("field mismatch: sqrt({left}) and sqrt({right}) cannot be combined")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// `rat + irr·sqrt(d)`, kept canonical: `irr == 0` exactly when `d == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    irr: BigRational,
    d: u32,
}

fn ratio(p: i64, q: i64) -> BigRational {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Splits `n` into `(k, m)` with `n = k²·m` and `m` square-free.
fn square_free_part(n: u32) -> (u32, u32) {
    let mut k = 1u32;
    let mut m = n;
    let mut f = 2u32;
    while f.saturating_mul(f) <= m {
        while m.is_multiple_of(f * f) {
            m /= f * f;
            k *= f;
        }
        f += 1;
    }
    (k, m)
}

impl Scalar {
    fn from_parts(rat: BigRational, irr: BigRational, d: u32) -> Self {
        if irr.is_zero() || d == 0 {
            return Scalar { rat, irr: BigRational::zero(), d: 0 };
        }
        let (k, m) = square_free_part(d);
        let irr = irr * BigRational::from_integer(BigInt::from(k));
        if m == 1 {
            Scalar { rat: rat + irr, irr: BigRational::zero(), d: 0 }
        } else {
            Scalar { rat, irr, d: m }
        }
    }

    /// `p/q + (r/s)·sqrt(d)`.
    pub fn new(p: i64, q: i64, r: i64, s: i64, d: u32) -> Self {
        Self::from_parts(ratio(p, q), ratio(r, s), d)
    }

    pub fn from_ratios(rat: BigRational, irr: BigRational, d: u32) -> Self {
        Self::from_parts(rat, irr, d)
    }

    pub fn rational(p: i64, q: i64) -> Self {
        Self::from_parts(ratio(p, q), BigRational::zero(), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(n, 1)
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Self::from_parts(r, BigRational::zero(), 0)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(d)` for any non-negative `d`; perfect squares come out rational.
    pub fn sqrt(d: u32) -> Self {
        Self::from_parts(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irr
    }

    /// Square-free discriminant, 0 for rationals.
    pub fn discriminant(&self) -> u32 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// Galois conjugate `p - r·sqrt(d)`.
    pub fn conj(&self) -> Self {
        Scalar { rat: self.rat.clone(), irr: -self.irr.clone(), d: self.d }
    }

    /// `x · conj(x)`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - &self.irr * &self.irr * BigRational::from_integer(self.d.into())
    }

    fn field_with(&self, other: &Scalar) -> Result<u32, ScalarError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(ScalarError::FieldMismatch { left: a, right: b }),
        }
    }

    pub fn compatible(&self, other: &Scalar) -> bool {
        self.field_with(other).is_ok()
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.field_with(other)?;
        Ok(Self::from_parts(&self.rat + &other.rat, &self.irr + &other.irr, d))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.field_with(other)?;
        Ok(Self::from_parts(&self.rat - &other.rat, &self.irr - &other.irr, d))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.field_with(other)?;
        let dd = BigRational::from_integer(d.into());
        let rat = &self.rat * &other.rat + &self.irr * &other.irr * dd;
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Ok(Self::from_parts(rat, irr, d))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.field_with(other)?;
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = other.norm();
        let num = self.try_mul(&other.conj())?;
        Ok(Self::from_parts(num.rat / &n, num.irr / n, num.d))
    }

    pub fn recip(&self) -> Scalar {
        Scalar::one() / self
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Exact sign, decided by comparing `p²` against `r²·d` when the parts disagree.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.irr);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let lhs = &self.rat * &self.rat;
        let rhs = &self.irr * &self.irr * BigRational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        let diff = self.try_sub(other)?;
        Ok(diff.signum().cmp(&0))
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.d == 0 {
            return r;
        }
        r + self.irr.to_f64().unwrap_or(f64::NAN) * f64::from(self.d).sqrt()
    }

    /// Greatest integer `k` with `k <= self`.
    pub fn floor(&self) -> BigInt {
        if self.d == 0 {
            return self.rat.floor().to_integer();
        }
        let approx = self.to_f64().floor();
        let mut k = BigInt::from(approx as i64);
        while Scalar::from_big_rational(BigRational::from_integer(k.clone())) > *self {
            k -= 1;
        }
        while Scalar::from_big_rational(BigRational::from_integer(&k + 1)) <= *self {
            k += 1;
        }
        k
    }

    /// Smallest integer `k` with `k >= self`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn midpoint(&self, other: &Scalar) -> Scalar {
        (self + other) / &Scalar::from_int(2)
    }

    pub fn min_of<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max_of<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat.clone(), irr: -self.irr.clone(), d: self.d }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    write!(f, "{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.rat)?;
        if self.d != 0 {
            if self.irr.is_negative() {
                f.write_str("-")?;
                write_ratio(f, &-self.irr.clone())?;
            } else {
                f.write_str("+")?;
                write_ratio(f, &self.irr)?;
            }
            write!(f, "*sqrt({})", self.d)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{})", self.to_f64())
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> ScalarError {
        ScalarError::Parse { input: self.src.to_string(), reason: reason.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn peek_digit(&mut self) -> bool {
        self.skip_ws();
        self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit()
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))
    }

    fn sqrt_arg(&mut self) -> Result<u32, ScalarError> {
        if !self.eat("(") {
            return Err(self.err("expected '(' after sqrt"));
        }
        let n = self.integer()?;
        if !self.eat(")") {
            return Err(self.err("expected ')'"));
        }
        n.to_u32().ok_or_else(|| self.err("discriminant out of range"))
    }

    /// `[int ['/' int]] ['*'] ['sqrt(' int ')'] ['/' int]`
    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut coef = BigRational::one();
        let mut has_coef = false;
        if self.peek_digit() {
            let n = self.integer()?;
            coef = BigRational::from_integer(n);
            has_coef = true;
            if self.eat("/") {
                let q = self.integer()?;
                if q.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                coef /= BigRational::from_integer(q);
            }
        }
        let had_star = self.eat("*");
        if self.eat("sqrt") {
            let d = self.sqrt_arg()?;
            let mut irr = coef;
            if self.eat("/") {
                let q = self.integer()?;
                if q.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                irr /= BigRational::from_integer(q);
            }
            return Ok(Scalar::from_parts(BigRational::zero(), irr, d));
        }
        if had_star || !has_coef {
            return Err(self.err("expected a number or sqrt(d)"));
        }
        Ok(Scalar::from_parts(coef, BigRational::zero(), 0))
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut neg = self.eat("-");
        if !neg {
            self.eat("+");
        }
        let mut acc: Option<Scalar> = None;
        loop {
            let mut t = self.term()?;
            if neg {
                t = -t;
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.try_add(&t)?,
            });
            if self.eat("+") {
                neg = self.eat("-");
            } else if self.eat("-") {
                neg = true;
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing characters"));
        }
        Ok(acc.expect("at least one term"))
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts the canonical `p/q` and `p/q+r/s*sqrt(d)` forms as well as looser
    /// inputs such as `1+sqrt(2)`, `6*sqrt(2)/7` or `-3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, bytes: s.as_bytes(), pos: 0 };
        p.expr()
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact three-way comparison; fails only on incompatible fields.
pub fn scalar_cmp(x: &Scalar, y: &Scalar) -> Result<Ordering, ScalarError> {
    x.try_cmp(y)
}

/// `gcd(|numerator|, denominator)` is 1 for both parts; exposed for tests.
pub fn is_canonical(x: &Scalar) -> bool {
    let ok = |r: &BigRational| r.numer().gcd(r.denom()).is_one() && r.denom().is_positive();
    ok(&x.rat) && ok(&x.irr) && ((x.d == 0) == x.irr.is_zero())
}
