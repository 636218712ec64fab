//! Arithmetic in a complete discretely valued field `K`.
//!
//! Two instances are supported behind one contract: the p-adic numbers `Q_p`
//! (uniformizer `p`) and formal Laurent series `F_p((t))` (uniformizer `t`).
//! Exact inputs live in `Q` or `F_p(t)` ([`Exact`]); finite-precision values
//! live in [`ValuedElement`], stored as `unit * pi^valuation` with a relative
//! precision.

mod element;
mod exact;
mod poly;
mod reconstruct;

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use element::{in_disc, Disc, RenderStyle, UnitPart, ValuedElement};
pub use exact::{parse_rational, Exact};
pub use poly::{FpPoly, RatFunc};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    /// `Q_p`, mixed characteristic.
    PAdic,
    /// `F_p((t))`, equal characteristic.
    Laurent,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::PAdic => f.write_str("p-adic"),
            FieldKind::Laurent => f.write_str("laurent"),
        }
    }
}

/// The ambient field together with a working precision `N`, the number of
/// significant uniformizer digits newly embedded elements carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldContext {
    kind: FieldKind,
    p: u32,
    precision: u32,
}

impl FieldContext {
    pub fn new(kind: FieldKind, p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) || p > u64::from(u32::MAX) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(Self {
            kind,
            p: p as u32,
            precision,
        })
    }

    pub fn p_adic(p: u64, precision: u32) -> Result<Self> {
        Self::new(FieldKind::PAdic, p, precision)
    }

    pub fn laurent(p: u64, precision: u32) -> Result<Self> {
        Self::new(FieldKind::Laurent, p, precision)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Residue characteristic.
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self {
            precision: precision.max(1),
            ..*self
        }
    }

    /// Display label of the uniformizer: the prime itself for `Q_p`, `t`
    /// for Laurent series.
    pub fn uniformizer_symbol(&self) -> String {
        match self.kind {
            FieldKind::PAdic => self.p.to_string(),
            FieldKind::Laurent => "t".to_string(),
        }
    }

    /// Same field, possibly at different working precisions.
    pub fn same_field(&self, other: &FieldContext) -> bool {
        self.kind == other.kind && self.p == other.p
    }

    pub(crate) fn check_same_field(&self, other: &FieldContext) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    /// The image of the integer `n` in `K` as an exact scalar.
    pub fn integer(&self, n: i64) -> Exact {
        Exact::from_int(n, self)
    }

    /// `ord_pi(n)` for an integer `n`; `+inf` when `n` vanishes in `K`
    /// (e.g. `p | n` in characteristic `p`).
    pub fn ord_of_integer(&self, n: i64) -> Valuation {
        self.integer(n).ord_in(self)
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::PAdic => write!(f, "Q_{} (N={})", self.p, self.precision),
            FieldKind::Laurent => write!(f, "F_{}((t)) (N={})", self.p, self.precision),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A discrete valuation value: an integer or `+inf` (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `k * self` for a non-negative integer `k`, with `0 * inf = 0`.
    pub fn times(&self, k: i64) -> Valuation {
        debug_assert!(k >= 0);
        match self {
            _ if k == 0 => Valuation::Finite(0),
            Valuation::Finite(v) => Valuation::Finite(v * k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// What can be said about `ord` of a finite-precision quantity: its exact
/// value, or only a lower bound when the quantity is zero at precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrdReading {
    Exact(i64),
    AtLeast(i64),
}

impl OrdReading {
    pub fn lower_bound(&self) -> i64 {
        match self {
            OrdReading::Exact(v) | OrdReading::AtLeast(v) => *v,
        }
    }

    /// True when the reading proves `ord >= bound`.
    pub fn certainly_at_least(&self, bound: i64) -> bool {
        self.lower_bound() >= bound
    }

    pub fn min(self, other: OrdReading) -> OrdReading {
        if self.lower_bound() <= other.lower_bound() {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for OrdReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdReading::Exact(v) => write!(f, "{v}"),
            OrdReading::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// Outcome of a membership test performed at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Yes,
    No,
    Undecidable,
}

impl Certainty {
    pub fn is_yes(&self) -> bool {
        matches!(self, Certainty::Yes)
    }
}
