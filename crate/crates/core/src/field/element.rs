use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{ord_int, Exact};
use super::poly::{inv_mod_p, FpPoly, RatFunc};
use super::reconstruct;
use super::{Certainty, FieldContext, FieldKind, OrdReading, Valuation};
use crate::error::{Error, Result};

/// The unit part of a nonzero element, reduced modulo `pi^k` where `k` is
/// the element's relative precision.
///
/// For `Q_p` this is an integer in `[1, p^k)` coprime to `p`; for `F_p((t))`
/// it is the coefficient vector (length exactly `k`) of a truncated power
/// series with nonzero constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnitPart {
    Integer(BigInt),
    Series(Vec<u32>),
}

thread_local! {
    static POWERS: RefCell<HashMap<(u32, u32), BigInt>> = RefCell::new(HashMap::new());
}

/// `p^k`, memoized per thread.
pub(crate) fn pow_p(p: u32, k: u32) -> BigInt {
    POWERS.with(|cache| {
        cache
            .borrow_mut()
            .entry((p, k))
            .or_insert_with(|| num_traits::pow(BigInt::from(p), k as usize))
            .clone()
    })
}

// Arithmetic in R / pi^k. Values use the `UnitPart` layout but need not be units.

fn reduce(ctx: &FieldContext, x: &UnitPart, k: u32) -> UnitPart {
    match x {
        UnitPart::Integer(a) => UnitPart::Integer(a.mod_floor(&pow_p(ctx.p(), k))),
        UnitPart::Series(s) => {
            let mut s: Vec<u32> = s.iter().take(k as usize).copied().collect();
            s.resize(k as usize, 0);
            UnitPart::Series(s)
        }
    }
}

/// `a * pi^sa + b * pi^sb mod pi^k`
fn combine(ctx: &FieldContext, a: &UnitPart, sa: u32, b: &UnitPart, sb: u32, k: u32) -> UnitPart {
    match (a, b) {
        (UnitPart::Integer(a), UnitPart::Integer(b)) => {
            let m = pow_p(ctx.p(), k);
            let ta = if sa >= k { BigInt::zero() } else { a * pow_p(ctx.p(), sa) };
            let tb = if sb >= k { BigInt::zero() } else { b * pow_p(ctx.p(), sb) };
            UnitPart::Integer((ta + tb).mod_floor(&m))
        }
        (UnitPart::Series(a), UnitPart::Series(b)) => {
            let p = ctx.p();
            let mut out = vec![0u32; k as usize];
            for (shift, s) in [(sa as usize, a), (sb as usize, b)] {
                for (i, &c) in s.iter().enumerate() {
                    let j = i + shift;
                    if j >= k as usize {
                        break;
                    }
                    out[j] = ((u64::from(out[j]) + u64::from(c)) % u64::from(p)) as u32;
                }
            }
            UnitPart::Series(out)
        }
        _ => unreachable!("unit layouts are tied to the field kind"),
    }
}

fn mul_mod(ctx: &FieldContext, a: &UnitPart, b: &UnitPart, k: u32) -> UnitPart {
    match (a, b) {
        (UnitPart::Integer(a), UnitPart::Integer(b)) => {
            UnitPart::Integer((a * b).mod_floor(&pow_p(ctx.p(), k)))
        }
        (UnitPart::Series(a), UnitPart::Series(b)) => {
            let p = u64::from(ctx.p());
            let k = k as usize;
            let mut out = vec![0u64; k];
            for (i, &x) in a.iter().enumerate().take(k) {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate().take(k - i) {
                    out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % p;
                }
            }
            UnitPart::Series(out.into_iter().map(|c| c as u32).collect())
        }
        _ => unreachable!("unit layouts are tied to the field kind"),
    }
}

fn neg_mod(ctx: &FieldContext, a: &UnitPart, k: u32) -> UnitPart {
    match a {
        UnitPart::Integer(a) => UnitPart::Integer((-a).mod_floor(&pow_p(ctx.p(), k))),
        UnitPart::Series(s) => {
            let p = ctx.p();
            UnitPart::Series(s.iter().map(|&c| (p - c) % p).collect())
        }
    }
}

fn inv_mod(ctx: &FieldContext, a: &UnitPart, k: u32) -> UnitPart {
    match a {
        UnitPart::Integer(a) => {
            let m = pow_p(ctx.p(), k);
            UnitPart::Integer(a.modinv(&m).expect("units are invertible"))
        }
        UnitPart::Series(s) => UnitPart::Series(series_inverse(s, ctx.p(), k as usize)),
    }
}

pub(crate) fn series_inverse(s: &[u32], p: u32, k: usize) -> Vec<u32> {
    let pm = u64::from(p);
    let inv0 = u64::from(inv_mod_p(s[0], p));
    let mut out = vec![0u32; k];
    if k == 0 {
        return out;
    }
    out[0] = inv0 as u32;
    for i in 1..k {
        let mut acc = 0u64;
        for j in 1..=i.min(s.len() - 1) {
            acc = (acc + u64::from(s[j]) * u64::from(out[i - j])) % pm;
        }
        out[i] = ((pm - acc) % pm * inv0 % pm) as u32;
    }
    out
}

/// Split `x mod pi^k` as `pi^t * u` with `u` a unit mod `pi^(k-t)`; `None` if
/// `x` vanishes mod `pi^k`.
fn strip_uniformizer(ctx: &FieldContext, x: UnitPart, k: u32) -> Option<(u32, UnitPart)> {
    match x {
        UnitPart::Integer(a) => {
            if a.is_zero() {
                return None;
            }
            let t = ord_int(&a, ctx.p()) as u32;
            if t >= k {
                return None;
            }
            let u = &a / pow_p(ctx.p(), t);
            Some((t, UnitPart::Integer(u.mod_floor(&pow_p(ctx.p(), k - t)))))
        }
        UnitPart::Series(s) => {
            let t = s.iter().take(k as usize).position(|&c| c != 0)? as u32;
            let mut u: Vec<u32> = s[t as usize..].to_vec();
            u.resize((k - t) as usize, 0);
            Some((t, UnitPart::Series(u)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Inner {
    /// Zero modulo `pi^abs`: all that is known is `ord >= abs`.
    Zero { abs: i64 },
    /// `unit * pi^val`, unit known modulo `pi^prec`.
    Nonzero { val: i64, prec: u32, unit: UnitPart },
}

/// An element of `K` known to finite precision.
///
/// Nonzero elements are `unit * pi^val` with the unit known to `prec`
/// significant digits; the absolute precision is `val + prec`. An element
/// that is zero at its precision only carries the absolute bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuedElement {
    ctx: FieldContext,
    inner: Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    /// `d0·p⁰ + d1·p¹ + … + O(p^k)`
    Digits,
    /// `(u, v, k)`
    UnitVal,
    /// Bounded-height rational reconstruction, tagged as a guess.
    RationalGuess,
}

impl ValuedElement {
    pub fn zero(ctx: &FieldContext) -> Self {
        Self::zero_at(ctx, i64::from(ctx.precision()))
    }

    /// Zero known modulo `pi^abs`.
    pub fn zero_at(ctx: &FieldContext, abs: i64) -> Self {
        Self {
            ctx: *ctx,
            inner: Inner::Zero { abs },
        }
    }

    pub fn one(ctx: &FieldContext) -> Self {
        Self::from_int(1, ctx)
    }

    pub fn from_int(n: i64, ctx: &FieldContext) -> Self {
        Self::embed(&Exact::from_int(n, ctx), ctx)
    }

    /// The image of an exact scalar, to full working precision.
    pub fn embed(q: &Exact, ctx: &FieldContext) -> Self {
        Self::embed_with_precision(q, ctx, ctx.precision())
    }

    /// The image of an exact scalar with `rel` significant digits.
    pub fn embed_with_precision(q: &Exact, ctx: &FieldContext, rel: u32) -> Self {
        assert!(q.belongs_to(ctx), "scalar {q} does not belong to {ctx}");
        let rel = rel.max(1);
        let inner = match q {
            _ if q.is_zero() => Inner::Zero {
                abs: i64::from(rel),
            },
            Exact::Rational(r) => {
                let p = ctx.p();
                let vn = ord_int(r.numer(), p);
                let vd = ord_int(r.denom(), p);
                let n = r.numer() / pow_p(p, vn as u32);
                let d = r.denom() / pow_p(p, vd as u32);
                let m = pow_p(p, rel);
                let d_inv = d.mod_floor(&m).modinv(&m).expect("denominator is a unit");
                Inner::Nonzero {
                    val: vn - vd,
                    prec: rel,
                    unit: UnitPart::Integer((n * d_inv).mod_floor(&m)),
                }
            }
            Exact::Function(f) => {
                let p = ctx.p();
                let vn = f.numer().ord_t().expect("nonzero");
                let vd = f.denom().ord_t().expect("nonzero denominator");
                let n = f.numer().shift_down(vn);
                let d = f.denom().shift_down(vd);
                let mut d_coeffs = d.coeffs().to_vec();
                d_coeffs.resize(rel as usize, 0);
                let d_inv = series_inverse(&d_coeffs, p, rel as usize);
                let unit = mul_mod(
                    ctx,
                    &reduce(ctx, &UnitPart::Series(n.coeffs().to_vec()), rel),
                    &UnitPart::Series(d_inv),
                    rel,
                );
                Inner::Nonzero {
                    val: vn as i64 - vd as i64,
                    prec: rel,
                    unit,
                }
            }
        };
        Self { ctx: *ctx, inner }
    }

    /// Build `unit * pi^val` from an integral representative of the unit.
    /// The representative is reduced mod `pi^prec` and must be a unit.
    pub fn from_unit(ctx: &FieldContext, unit: UnitPart, val: i64, prec: u32) -> Result<Self> {
        let prec = prec.max(1);
        let unit = reduce(ctx, &unit, prec);
        let is_unit = match (&unit, ctx.kind()) {
            (UnitPart::Integer(a), FieldKind::PAdic) => !(a % BigInt::from(ctx.p())).is_zero(),
            (UnitPart::Series(s), FieldKind::Laurent) => s[0] != 0,
            _ => false,
        };
        if !is_unit {
            return Err(Error::Parse("unit part is not a unit of the valuation ring".into()));
        }
        Ok(Self {
            ctx: *ctx,
            inner: Inner::Nonzero { val, prec, unit },
        })
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.inner, Inner::Zero { .. })
    }

    /// `ord_pi`, `+inf` for an element that is zero at its precision.
    pub fn ord(&self) -> Valuation {
        match &self.inner {
            Inner::Zero { .. } => Valuation::Infinite,
            Inner::Nonzero { val, .. } => Valuation::Finite(*val),
        }
    }

    /// `ord_pi` as certified at the current precision.
    pub fn ord_reading(&self) -> OrdReading {
        match &self.inner {
            Inner::Zero { abs } => OrdReading::AtLeast(*abs),
            Inner::Nonzero { val, .. } => OrdReading::Exact(*val),
        }
    }

    /// The element is known modulo `pi^abs_precision`.
    pub fn abs_precision(&self) -> i64 {
        match &self.inner {
            Inner::Zero { abs } => *abs,
            Inner::Nonzero { val, prec, .. } => val + i64::from(*prec),
        }
    }

    /// Number of significant digits; `None` for zero.
    pub fn rel_precision(&self) -> Option<u32> {
        match &self.inner {
            Inner::Zero { .. } => None,
            Inner::Nonzero { prec, .. } => Some(*prec),
        }
    }

    pub fn unit(&self) -> Option<&UnitPart> {
        match &self.inner {
            Inner::Zero { .. } => None,
            Inner::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Forget every digit at or beyond `pi^abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        let inner = match &self.inner {
            Inner::Zero { abs: a } => Inner::Zero { abs: (*a).min(abs) },
            Inner::Nonzero { val, .. } if *val >= abs => Inner::Zero { abs },
            Inner::Nonzero { val, prec, unit } => {
                let k = (*prec).min((abs - val) as u32);
                Inner::Nonzero {
                    val: *val,
                    prec: k,
                    unit: if k == *prec { unit.clone() } else { reduce(&self.ctx, unit, k) },
                }
            }
        };
        Self { ctx: self.ctx, inner }
    }

    fn merged_ctx(&self, other: &Self) -> FieldContext {
        self.ctx.with_precision(self.ctx.precision().max(other.ctx.precision()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same_field(&other.ctx)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let ctx = self.merged_ctx(other);
        let abs = self.abs_precision().min(other.abs_precision());
        let inner = match (&self.inner, &other.inner) {
            (Inner::Zero { .. }, _) => other.truncate_abs(abs).inner,
            (_, Inner::Zero { .. }) => self.truncate_abs(abs).inner,
            (
                Inner::Nonzero {
                    val: va, unit: ua, ..
                },
                Inner::Nonzero {
                    val: vb, unit: ub, ..
                },
            ) => {
                let m = (*va).min(*vb);
                if m >= abs {
                    Inner::Zero { abs }
                } else {
                    let k = (abs - m) as u32;
                    let shift_a = (va - m).min(i64::from(k)) as u32;
                    let shift_b = (vb - m).min(i64::from(k)) as u32;
                    let sum = combine(&ctx, ua, shift_a, ub, shift_b, k);
                    match strip_uniformizer(&ctx, sum, k) {
                        None => Inner::Zero { abs },
                        Some((t, unit)) => Inner::Nonzero {
                            val: m + i64::from(t),
                            prec: k - t,
                            unit,
                        },
                    }
                }
            }
        };
        Self { ctx, inner }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_impl())
    }

    fn neg_impl(&self) -> Self {
        let inner = match &self.inner {
            Inner::Zero { abs } => Inner::Zero { abs: *abs },
            Inner::Nonzero { val, prec, unit } => Inner::Nonzero {
                val: *val,
                prec: *prec,
                unit: neg_mod(&self.ctx, unit, *prec),
            },
        };
        Self { ctx: self.ctx, inner }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same_field(&other.ctx)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ctx = self.merged_ctx(other);
        let inner = match (&self.inner, &other.inner) {
            (Inner::Zero { abs: a }, Inner::Zero { abs: b }) => Inner::Zero { abs: a + b },
            (Inner::Zero { abs }, Inner::Nonzero { val, .. })
            | (Inner::Nonzero { val, .. }, Inner::Zero { abs }) => Inner::Zero { abs: abs + val },
            (
                Inner::Nonzero {
                    val: va,
                    prec: pa,
                    unit: ua,
                },
                Inner::Nonzero {
                    val: vb,
                    prec: pb,
                    unit: ub,
                },
            ) => {
                let k = (*pa).min(*pb);
                Inner::Nonzero {
                    val: va + vb,
                    prec: k,
                    unit: mul_mod(&ctx, ua, ub, k),
                }
            }
        };
        Self { ctx, inner }
    }

    /// Multiplicative inverse; relative precision is preserved.
    pub fn inv(&self) -> Result<Self> {
        match &self.inner {
            Inner::Zero { abs } => Err(Error::DivisionByZero(format!(
                "{}^{}",
                self.ctx.uniformizer_symbol(),
                abs
            ))),
            Inner::Nonzero { val, prec, unit } => Ok(Self {
                ctx: self.ctx,
                inner: Inner::Nonzero {
                    val: -val,
                    prec: *prec,
                    unit: inv_mod(&self.ctx, unit, *prec),
                },
            }),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiply by `pi^k` (exact, no precision change in relative terms).
    pub fn shift(&self, k: i64) -> Self {
        let inner = match &self.inner {
            Inner::Zero { abs } => Inner::Zero { abs: abs + k },
            Inner::Nonzero { val, prec, unit } => Inner::Nonzero {
                val: val + k,
                prec: *prec,
                unit: unit.clone(),
            },
        };
        Self { ctx: self.ctx, inner }
    }

    /// `self ≡ other` modulo the smaller of the two absolute precisions.
    pub fn congruent(&self, other: &Self) -> bool {
        self.checked_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Whether `ord(self - other) >= k` is certified.
    pub fn agrees_to(&self, other: &Self, k: i64) -> bool {
        self.checked_sub(other)
            .map(|d| d.ord_reading().certainly_at_least(k))
            .unwrap_or(false)
    }

    /// The canonical exact representative: `p^val * u` with `0 < u < p^prec`,
    /// or `t^val * u(t)` with `deg u < prec`. Zero maps to zero.
    pub fn to_exact(&self) -> Exact {
        match &self.inner {
            Inner::Zero { .. } => Exact::zero(&self.ctx),
            Inner::Nonzero { val, unit, .. } => match unit {
                UnitPart::Integer(u) => {
                    let p = self.ctx.p();
                    let q = if *val >= 0 {
                        BigRational::from_integer(u * pow_p(p, *val as u32))
                    } else {
                        BigRational::new(u.clone(), pow_p(p, (-val) as u32))
                    };
                    Exact::Rational(q)
                }
                UnitPart::Series(s) => {
                    let p = self.ctx.p();
                    let u = FpPoly::new(p, s.clone());
                    let f = if *val >= 0 {
                        RatFunc::from_poly(u.shift_up(*val as usize))
                    } else {
                        RatFunc::new(u, FpPoly::monomial(p, (-val) as usize, 1)).expect("nonzero")
                    };
                    Exact::Function(f)
                }
            },
        }
    }

    /// Base-`p` digits (or series coefficients) of the unit, low first.
    pub fn unit_digits(&self) -> Vec<u32> {
        match &self.inner {
            Inner::Zero { .. } => vec![],
            Inner::Nonzero { prec, unit, .. } => match unit {
                UnitPart::Series(s) => s.clone(),
                UnitPart::Integer(u) => {
                    let p = BigInt::from(self.ctx.p());
                    let mut digits = Vec::with_capacity(*prec as usize);
                    let mut rest = u.clone();
                    for _ in 0..*prec {
                        let (q, r) = rest.div_rem(&p);
                        digits.push(u32::try_from(r).expect("digit below p"));
                        rest = q;
                    }
                    digits
                }
            },
        }
    }

    /// Largest height for which a rational reconstruction from the known
    /// digits is unique: `floor(sqrt(p^prec / 2))` for `Q_p`, `floor(prec/2)`
    /// (a degree) for Laurent series.
    pub fn default_guess_height(&self) -> BigInt {
        let prec = self.rel_precision().unwrap_or(0);
        match self.ctx.kind() {
            FieldKind::PAdic => (pow_p(self.ctx.p(), prec) / 2u32).sqrt(),
            FieldKind::Laurent => BigInt::from(prec / 2),
        }
    }

    /// Bounded-height rational reconstruction: a scalar `q` of height at
    /// most `height` with `q ≡ self` at the element's precision, if one exists.
    pub fn rational_guess(&self, height: &BigInt) -> Option<Exact> {
        match &self.inner {
            Inner::Zero { .. } => Some(Exact::zero(&self.ctx)),
            Inner::Nonzero { val, prec, unit } => {
                let p = self.ctx.p();
                let unit_guess = match unit {
                    UnitPart::Integer(u) => {
                        let (a, b) = reconstruct::integer(u, &pow_p(p, *prec), height)?;
                        Exact::Rational(BigRational::new(a, b))
                    }
                    UnitPart::Series(s) => {
                        let bound = usize::try_from(height).ok()?;
                        let (a, b) = reconstruct::series(&FpPoly::new(p, s.clone()), *prec as usize, bound)?;
                        Exact::Function(RatFunc::new(a, b).ok()?)
                    }
                };
                let scale = match self.ctx.kind() {
                    FieldKind::PAdic => {
                        let pv = pow_p(p, val.unsigned_abs() as u32);
                        Exact::Rational(if *val >= 0 {
                            BigRational::from_integer(pv)
                        } else {
                            BigRational::new(BigInt::one(), pv)
                        })
                    }
                    FieldKind::Laurent => {
                        let t = FpPoly::monomial(p, val.unsigned_abs() as usize, 1);
                        Exact::Function(if *val >= 0 {
                            RatFunc::from_poly(t)
                        } else {
                            RatFunc::new(FpPoly::constant(p, 1), t).expect("nonzero")
                        })
                    }
                };
                let guess = &unit_guess * &scale;
                if guess.height() > *height {
                    return None;
                }
                let check = ValuedElement::embed(&guess, &self.ctx.with_precision(*prec));
                self.congruent(&check).then_some(guess)
            }
        }
    }

    pub fn render(&self, style: RenderStyle) -> String {
        let sym = self.ctx.uniformizer_symbol();
        let big_o = format!("O({sym}^{})", self.abs_precision());
        let (val, prec, unit) = match &self.inner {
            Inner::Zero { .. } => return big_o,
            Inner::Nonzero { val, prec, unit } => (*val, *prec, unit),
        };
        match style {
            RenderStyle::Digits => {
                let mut terms: Vec<String> = self
                    .unit_digits()
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(|(i, d)| format!("{d}·{sym}{}", superscript(val + i as i64)))
                    .collect();
                terms.push(big_o);
                terms.join(" + ")
            }
            RenderStyle::UnitVal => {
                let u = match unit {
                    UnitPart::Integer(u) => u.to_string(),
                    UnitPart::Series(s) => FpPoly::new(self.ctx.p(), s.clone()).to_string(),
                };
                format!("({u}, {val}, {prec})")
            }
            RenderStyle::RationalGuess => match self.rational_guess(&self.default_guess_height()) {
                Some(q) => format!("{q} (guess)"),
                None => format!("no rational guess of height <= {}", self.default_guess_height()),
            },
        }
    }
}

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::new();
    if n < 0 {
        out.push('⁻');
    }
    for ch in n.unsigned_abs().to_string().chars() {
        out.push(DIGITS[ch.to_digit(10).unwrap() as usize]);
    }
    out
}

impl fmt::Display for ValuedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::Digits))
    }
}

macro_rules! element_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &ValuedElement {
            type Output = ValuedElement;

            fn $method(self, rhs: &ValuedElement) -> ValuedElement {
                self.$checked(rhs).expect(concat!("ValuedElement::", stringify!($method)))
            }
        }

        impl $trait for ValuedElement {
            type Output = ValuedElement;

            fn $method(self, rhs: ValuedElement) -> ValuedElement {
                (&self).$method(&rhs)
            }
        }
    };
}

element_binop!(Add, add, checked_add);
element_binop!(Sub, sub, checked_sub);
element_binop!(Mul, mul, checked_mul);
element_binop!(Div, div, checked_div);

impl Neg for &ValuedElement {
    type Output = ValuedElement;

    fn neg(self) -> ValuedElement {
        self.neg_impl()
    }
}

impl Neg for ValuedElement {
    type Output = ValuedElement;

    fn neg(self) -> ValuedElement {
        self.neg_impl()
    }
}

/// The closed disc `D(center, |pi|^radius)`, i.e. `{x : ord(x - center) >= radius}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disc {
    pub center: ValuedElement,
    pub radius: i64,
}

impl Disc {
    pub fn new(center: ValuedElement, radius: i64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, x: &ValuedElement) -> Certainty {
        in_disc(x, self)
    }
}

/// Membership test `x ∈ D(c, |pi|^r)`, undecidable when `x - c` is zero only
/// to a precision below `r`.
pub fn in_disc(x: &ValuedElement, disc: &Disc) -> Certainty {
    let Ok(diff) = x.checked_sub(&disc.center) else {
        return Certainty::No;
    };
    match diff.ord_reading() {
        OrdReading::Exact(v) if v >= disc.radius => Certainty::Yes,
        OrdReading::Exact(_) => Certainty::No,
        OrdReading::AtLeast(b) if b >= disc.radius => Certainty::Yes,
        OrdReading::AtLeast(_) => Certainty::Undecidable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_rational;

    fn q(ctx: &FieldContext, s: &str) -> ValuedElement {
        ValuedElement::embed(&Exact::parse(s, ctx).unwrap(), ctx)
    }

    #[test]
    fn embedding_valuations() {
        let q2 = FieldContext::p_adic(2, 10).unwrap();
        let x = q(&q2, "26/9");
        assert_eq!(x.ord(), Valuation::Finite(1));
        assert_eq!(x.rel_precision(), Some(10));
        let z = q(&q2, "0");
        assert!(z.is_zero());
        assert_eq!(z.ord(), Valuation::Infinite);
        assert_eq!(z.ord_reading(), OrdReading::AtLeast(10));

        let q5 = FieldContext::p_adic(5, 10).unwrap();
        let s = q(&q5, "75");
        assert_eq!(s.ord(), Valuation::Finite(2));
        assert_eq!(s.unit_digits()[0], 3);
    }

    #[test]
    fn arithmetic_examples() {
        let q3 = FieldContext::p_adic(3, 10).unwrap();
        let nine = &q(&q3, "5") + &q(&q3, "4");
        assert_eq!(nine.ord(), Valuation::Finite(2));
        assert!(nine.congruent(&q(&q3, "9")));

        let q2 = FieldContext::p_adic(2, 10).unwrap();
        let one = &q(&q2, "26/9") * &q(&q2, "9/26");
        assert_eq!(one.ord(), Valuation::Finite(0));
        assert_eq!(one, ValuedElement::one(&q2));

        let q7 = FieldContext::p_adic(7, 10).unwrap();
        let s = &q(&q7, "3") + &q(&q7, "686");
        assert_eq!(s.ord(), Valuation::Finite(0));
    }

    #[test]
    fn addition_tracks_absolute_precision() {
        let q3 = FieldContext::p_adic(3, 5).unwrap();
        let a = q(&q3, "1"); // abs 5
        let b = q(&q3, "-1");
        let z = &a + &b;
        assert_eq!(z.ord_reading(), OrdReading::AtLeast(5));
        let c = q(&q3, "81"); // val 4, abs 9
        let d = &c - &q(&q3, "162"); // -81
        assert_eq!(d.ord(), Valuation::Finite(4));
        assert_eq!(d.abs_precision(), 9);
        // cancellation of leading digits shortens relative precision
        let e = &q(&q3, "10") - &q(&q3, "1");
        assert_eq!(e.ord(), Valuation::Finite(2));
        assert_eq!(e.rel_precision(), Some(3));
    }

    #[test]
    fn zero_times_element() {
        let q3 = FieldContext::p_adic(3, 5).unwrap();
        let z = ValuedElement::zero_at(&q3, 4);
        let x = q(&q3, "9");
        assert_eq!((&z * &x).ord_reading(), OrdReading::AtLeast(6));
        assert!(z.inv().is_err());
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = ValuedElement::one(&FieldContext::p_adic(3, 5).unwrap());
        let b = ValuedElement::one(&FieldContext::p_adic(5, 5).unwrap());
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch { .. })));
        let c = ValuedElement::one(&FieldContext::laurent(3, 5).unwrap());
        assert!(a.checked_mul(&c).is_err());
    }

    #[test]
    fn disc_membership() {
        let q3 = FieldContext::p_adic(3, 10).unwrap();
        let d = Disc::new(q(&q3, "1"), 1);
        assert_eq!(in_disc(&q(&q3, "-5"), &d), Certainty::Yes);
        assert_eq!(in_disc(&q(&q3, "5"), &Disc::new(q(&q3, "2"), 1)), Certainty::Yes);
        for p in [2u64, 3, 5, 7, 11] {
            let ctx = FieldContext::p_adic(p, 6).unwrap();
            let d = Disc::new(ValuedElement::one(&ctx), 1);
            assert_eq!(in_disc(&ValuedElement::zero(&ctx), &d), Certainty::No);
        }
        let fuzzy = ValuedElement::zero_at(&q3, 2);
        let tight = Disc::new(ValuedElement::zero(&q3), 5);
        assert_eq!(in_disc(&fuzzy, &tight), Certainty::Undecidable);
    }

    #[test]
    fn render_styles() {
        let q3 = FieldContext::p_adic(3, 4).unwrap();
        assert_eq!(q(&q3, "5").render(RenderStyle::Digits), "2·3⁰ + 1·3¹ + O(3^4)");
        assert_eq!(q(&q3, "1/3").render(RenderStyle::Digits), "1·3⁻¹ + O(3^3)");
        assert_eq!(ValuedElement::zero(&q3).render(RenderStyle::Digits), "O(3^4)");

        // 5/4 in Q_3: unit is 5 * 4^{-1} mod 3^N
        let q3n = FieldContext::p_adic(3, 20).unwrap();
        let m = pow_p(3, 20);
        let expected = (BigInt::from(5) * BigInt::from(4).modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(
            q(&q3n, "5/4").render(RenderStyle::UnitVal),
            format!("({expected}, 0, 20)")
        );
        assert_eq!(q(&q3n, "5/4").render(RenderStyle::RationalGuess), "5/4 (guess)");

        let f3 = FieldContext::laurent(3, 4).unwrap();
        assert_eq!(q(&f3, "2 + t^2").render(RenderStyle::Digits), "2·t⁰ + 1·t² + O(t^4)");
        assert_eq!(q(&f3, "t + t^2").render(RenderStyle::UnitVal), "(1 + t, 1, 4)");
    }

    #[test]
    fn rational_reconstruction() {
        let q7 = FieldContext::p_adic(7, 30).unwrap();
        let x = q(&q7, "-123/457");
        let guess = x.rational_guess(&BigInt::from(1000)).unwrap();
        assert_eq!(guess, Exact::Rational(parse_rational("-123/457").unwrap()));
        let y = q(&q7, "98/3"); // valuation 2
        assert_eq!(
            y.rational_guess(&BigInt::from(1000)).unwrap().to_string(),
            "98/3"
        );

        let f5 = FieldContext::laurent(5, 12).unwrap();
        let z = q(&f5, "(1 + t)/(1 + 2*t^2)");
        let guess = z.rational_guess(&BigInt::from(3)).unwrap();
        assert_eq!(guess, Exact::parse("(1 + t)/(1 + 2*t^2)", &f5).unwrap());
    }

    #[test]
    fn laurent_arithmetic() {
        let f3 = FieldContext::laurent(3, 6).unwrap();
        let a = q(&f3, "1 + t");
        let b = q(&f3, "2 + 2*t");
        let s = &a + &b; // 3 + 3t = 0 in F_3
        assert!(s.is_zero());
        let inv = a.inv().unwrap();
        assert_eq!(&inv * &a, ValuedElement::one(&f3));
        let x = q(&f3, "1/t");
        assert_eq!(x.ord(), Valuation::Finite(-1));
        assert_eq!(x.to_exact(), Exact::parse("1/t", &f3).unwrap());
    }
}
