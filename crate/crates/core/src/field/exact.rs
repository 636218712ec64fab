use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{FpPoly, RatFunc};
use super::{FieldContext, FieldKind, Valuation};
use crate::error::{Error, Result};

/// An exact (infinite-precision) scalar: a rational number for `Q_p`, or a
/// rational function over `F_p` for `F_p((t))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exact {
    Rational(BigRational),
    Function(RatFunc),
}

/// Parse `"a"`, `"a/b"` or `"-a/b"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// `ord_p` of a nonzero integer.
pub(crate) fn ord_int(n: &BigInt, p: u32) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

impl Exact {
    pub fn from_int(n: i64, ctx: &FieldContext) -> Self {
        match ctx.kind() {
            FieldKind::PAdic => Exact::Rational(BigRational::from_integer(n.into())),
            FieldKind::Laurent => Exact::Function(RatFunc::from_poly(FpPoly::constant(ctx.p(), n))),
        }
    }

    pub fn zero(ctx: &FieldContext) -> Self {
        Self::from_int(0, ctx)
    }

    pub fn one(ctx: &FieldContext) -> Self {
        Self::from_int(1, ctx)
    }

    /// Parse an entry for the given field: `"a/b"` for `Q_p`, a rational
    /// function in `t` such as `"(1+t)/(1+2*t^2)"` for `F_p((t))`.
    pub fn parse(text: &str, ctx: &FieldContext) -> Result<Self> {
        match ctx.kind() {
            FieldKind::PAdic => parse_rational(text).map(Exact::Rational),
            FieldKind::Laurent => RatFunc::parse(text, ctx.p()).map(Exact::Function),
        }
    }

    /// The zero of the same kind (and characteristic) as `self`.
    pub fn zero_like(&self) -> Self {
        match self {
            Exact::Rational(_) => Exact::Rational(BigRational::zero()),
            Exact::Function(f) => Exact::Function(RatFunc::from_poly(FpPoly::zero(f.p()))),
        }
    }

    pub fn one_like(&self) -> Self {
        self.int_like(1)
    }

    pub fn int_like(&self, n: i64) -> Self {
        match self {
            Exact::Rational(_) => Exact::Rational(BigRational::from_integer(n.into())),
            Exact::Function(f) => Exact::Function(RatFunc::from_poly(FpPoly::constant(f.p(), n))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Exact::Rational(q) => q.is_zero(),
            Exact::Function(f) => f.is_zero(),
        }
    }

    /// Whether `self` is a scalar of the field described by `ctx`.
    pub fn belongs_to(&self, ctx: &FieldContext) -> bool {
        match (self, ctx.kind()) {
            (Exact::Rational(_), FieldKind::PAdic) => true,
            (Exact::Function(f), FieldKind::Laurent) => f.p() == ctx.p(),
            _ => false,
        }
    }

    /// Exact valuation. Rationals are measured at `p`, rational functions at `t`.
    pub fn ord_at(&self, p: u32) -> Valuation {
        match self {
            Exact::Rational(q) if q.is_zero() => Valuation::Infinite,
            Exact::Rational(q) => Valuation::Finite(ord_int(q.numer(), p) - ord_int(q.denom(), p)),
            Exact::Function(f) => f.ord_t().map_or(Valuation::Infinite, Valuation::Finite),
        }
    }

    /// Exact valuation in the field of `ctx`.
    pub fn ord_in(&self, ctx: &FieldContext) -> Valuation {
        self.ord_at(ctx.p())
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (Exact::Rational(a), Exact::Rational(b)) if !b.is_zero() => Some(Exact::Rational(a / b)),
            (Exact::Function(a), Exact::Function(b)) => a.checked_div(b).map(Exact::Function),
            (Exact::Rational(_), Exact::Rational(_)) => None,
            _ => panic!("mixed exact scalar kinds"),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Exact::Rational(q) => Some(q),
            Exact::Function(_) => None,
        }
    }

    pub fn as_function(&self) -> Option<&RatFunc> {
        match self {
            Exact::Function(f) => Some(f),
            Exact::Rational(_) => None,
        }
    }

    /// Largest absolute value among numerator and denominator (rationals),
    /// or largest degree (rational functions). Used as a height.
    pub fn height(&self) -> BigInt {
        match self {
            Exact::Rational(q) => q.numer().abs().max(q.denom().abs()),
            Exact::Function(f) => {
                let d = f.numer().degree().unwrap_or(0).max(f.denom().degree().unwrap_or(0));
                BigInt::from(d)
            }
        }
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Exact::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Exact::Function(r) => write!(f, "{r}"),
        }
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident, $rat:expr, $func:expr) => {
        impl $trait for &Exact {
            type Output = Exact;

            fn $method(self, rhs: &Exact) -> Exact {
                match (self, rhs) {
                    (Exact::Rational(a), Exact::Rational(b)) => Exact::Rational($rat(a, b)),
                    (Exact::Function(a), Exact::Function(b)) => Exact::Function($func(a, b)),
                    _ => panic!("mixed exact scalar kinds"),
                }
            }
        }

        impl $trait for Exact {
            type Output = Exact;

            fn $method(self, rhs: Exact) -> Exact {
                (&self).$method(&rhs)
            }
        }
    };
}

exact_binop!(Add, add, |a: &BigRational, b: &BigRational| a + b, |a: &RatFunc, b: &RatFunc| a.add(b));
exact_binop!(Sub, sub, |a: &BigRational, b: &BigRational| a - b, |a: &RatFunc, b: &RatFunc| a.sub(b));
exact_binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, |a: &RatFunc, b: &RatFunc| a.mul(b));

impl Neg for &Exact {
    type Output = Exact;

    fn neg(self) -> Exact {
        match self {
            Exact::Rational(a) => Exact::Rational(-a),
            Exact::Function(a) => Exact::Function(a.neg()),
        }
    }
}

impl Neg for Exact {
    type Output = Exact;

    fn neg(self) -> Exact {
        -&self
    }
}
