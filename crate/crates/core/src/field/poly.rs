//! Polynomials and rational functions over the prime field `F_p`.

use std::fmt;

use crate::error::{Error, Result};

/// A polynomial over `F_p`, coefficients stored low degree first with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

pub(crate) fn mod_p(c: i64, p: u32) -> u32 {
    c.rem_euclid(i64::from(p)) as u32
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    // Fermat: a^(p-2)
    let m = u64::from(p);
    let mut base = u64::from(a) % m;
    let mut exp = m - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u32
}

impl FpPoly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn from_i64s(p: u32, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| mod_p(c, p)).collect())
    }

    pub fn zero(p: u32) -> Self {
        Self { p, coeffs: vec![] }
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::new(p, vec![mod_p(c, p)])
    }

    /// `c * t^degree`
    pub fn monomial(p: u32, degree: usize, c: u32) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c % p;
        Self::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Index of the lowest nonzero coefficient, i.e. `ord_t`.
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Divide by `t^k`; the caller guarantees `t^k` divides `self`.
    pub(crate) fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|&c| c == 0));
        Self::new(self.p, self.coeffs.iter().skip(k).copied().collect())
    }

    pub(crate) fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { p: self.p, coeffs }
    }

    /// Reduce modulo `t^k`.
    pub(crate) fn truncate(&self, k: usize) -> Self {
        Self::new(self.p, self.coeffs.iter().take(k).copied().collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| ((u64::from(self.coeff(i)) + u64::from(other.coeff(i))) % u64::from(self.p)) as u32)
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        Self::new(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = u64::from(self.p);
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .map(|&a| (u64::from(a) * u64::from(c) % p) as u32)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = u64::from(self.p);
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + u64::from(a) * u64::from(b)) % p;
            }
        }
        Self::new(self.p, out.into_iter().map(|c| c as u32).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = u64::from(self.p);
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = u64::from(inv_mod_p(divisor.leading(), self.p));
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| u64::from(c)).collect();
        if rem.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * lead_inv % p;
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * u64::from(d) % p) % p;
            }
        }
        rem.truncate(dd);
        (
            Self::new(self.p, quot.into_iter().map(|c| c as u32).collect()),
            Self::new(self.p, rem.into_iter().map(|c| c as u32).collect()),
        )
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod_p(self.leading(), self.p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Parse `"1 + 2*t - t^3"` style input; integer coefficients are reduced mod `p`.
    pub fn parse(text: &str, p: u32) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = Self::zero(p);
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut i = 0;
        let mut terms = Vec::new();
        while i <= bytes.len() {
            let at_split = i == bytes.len() || (i > start && (bytes[i] == b'+' || bytes[i] == b'-'));
            if at_split {
                terms.push(&compact[start..i]);
                start = i;
            }
            i += 1;
        }
        for term in terms {
            acc = acc.add(&parse_term(term, p)?);
        }
        Ok(acc)
    }
}

fn parse_term(term: &str, p: u32) -> Result<FpPoly> {
    let bad = || Error::Parse(format!("bad polynomial term {term:?}"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (1i64, &term[1..]),
        Some(b'-') => (-1i64, &term[1..]),
        _ => (1i64, term),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (coef_text, var_text) = match body.find('t') {
        Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
        None => (body, None),
    };
    let coef_text = coef_text.strip_suffix('*').unwrap_or(coef_text);
    let coef: i64 = if coef_text.is_empty() {
        if var_text.is_none() {
            return Err(bad());
        }
        1
    } else {
        let big: num_bigint::BigInt = coef_text.parse().map_err(|_| bad())?;
        let r = big % num_bigint::BigInt::from(p);
        i64::try_from(r).map_err(|_| bad())?
    };
    let degree = match var_text {
        None => 0,
        Some("") => 1,
        Some(rest) => {
            let exp = rest.strip_prefix('^').ok_or_else(bad)?;
            exp.parse::<usize>().map_err(|_| bad())?
        }
    };
    Ok(FpPoly::monomial(p, degree, mod_p(sign * coef, p)))
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A rational function `num/den` over `F_p`, kept in lowest terms with a
/// monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FpPoly,
    den: FpPoly,
}

impl RatFunc {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: FpPoly, den: FpPoly) -> Self {
        let p = num.p();
        if num.is_zero() {
            return Self {
                num,
                den: FpPoly::constant(p, 1),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = inv_mod_p(den.leading(), p);
        Self {
            num: num.scale(lead),
            den: den.scale(lead),
        }
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let p = num.p();
        Self {
            num,
            den: FpPoly::constant(p, 1),
        }
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn numer(&self) -> &FpPoly {
        &self.num
    }

    pub fn denom(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `ord_t(num) - ord_t(den)`; `None` for zero.
    pub fn ord_t(&self) -> Option<i64> {
        let n = self.num.ord_t()? as i64;
        let d = self.den.ord_t().expect("nonzero denominator") as i64;
        Some(n - d)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        Some(Self::normalized(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    /// Parse `poly`, `poly/poly`, optionally with parenthesized parts.
    pub fn parse(text: &str, p: u32) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in compact.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(Error::Parse(format!("more than one '/' in {text:?}")));
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
        }
        let strip = |s: &str| -> String {
            s.strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(s)
                .to_string()
        };
        match split {
            None => Ok(Self::from_poly(FpPoly::parse(&strip(&compact), p)?)),
            Some(i) => {
                let num = FpPoly::parse(&strip(&compact[..i]), p)?;
                let den = FpPoly::parse(&strip(&compact[i + 1..]), p)?;
                Self::new(num, den)
            }
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
