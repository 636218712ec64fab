//! Square matrices over `K`: exact inputs ([`RationalMatrix`]) and
//! precision-tracked working copies ([`ValMatrix`]).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Exact, FieldContext, OrdReading, Valuation, ValuedElement};

/// An `n x n` matrix with exact entries (rationals, or rational functions over `F_p`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Exact>,
}

/// Wire form shared by the library and the CLI: `{"n": 2, "entries": [["4","-5"],["1","10"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl RationalMatrix {
    /// Build from rows; rejects empty, ragged or non-square input and mixed scalar kinds.
    pub fn new(rows: Vec<Vec<Exact>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare("matrix has no rows".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        let entries: Vec<Exact> = rows.into_iter().flatten().collect();
        let first = &entries[0];
        let same_kind = |e: &Exact| match (first, e) {
            (Exact::Rational(_), Exact::Rational(_)) => true,
            (Exact::Function(a), Exact::Function(b)) => a.p() == b.p(),
            _ => false,
        };
        if !entries.iter().all(same_kind) {
            return Err(Error::Parse("entries mix scalar kinds".into()));
        }
        Ok(Self { n, entries })
    }

    pub fn from_strings<S: AsRef<str>>(rows: &[Vec<S>], ctx: &FieldContext) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| Exact::parse(s.as_ref(), ctx)).collect())
            .collect::<Result<Vec<Vec<Exact>>>>()?;
        Self::new(parsed)
    }

    pub fn from_wire(wire: &MatrixJson, ctx: &FieldContext) -> Result<Self> {
        if wire.entries.len() != wire.n {
            return Err(Error::DimensionMismatch(format!(
                "\"n\" is {} but {} rows were given",
                wire.n,
                wire.entries.len()
            )));
        }
        Self::from_strings(&wire.entries, ctx)
    }

    pub fn from_json(text: &str, ctx: &FieldContext) -> Result<Self> {
        let wire: MatrixJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        Self::from_wire(&wire, ctx)
    }

    pub fn to_wire(&self) -> MatrixJson {
        MatrixJson {
            n: self.n,
            entries: self
                .rows()
                .map(|row| row.iter().map(|e| e.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("matrix serializes")
    }

    pub fn identity(n: usize, ctx: &FieldContext) -> Self {
        Self::from_fn(n, |i, j| Exact::from_int(i64::from(i == j), ctx))
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Exact) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Exact {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Exact] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Exact]> {
        self.entries.chunks(self.n)
    }

    /// Whether every entry is a scalar of the field of `ctx`.
    pub fn belongs_to(&self, ctx: &FieldContext) -> bool {
        self.entries.iter().all(|e| e.belongs_to(ctx))
    }

    pub fn trace(&self) -> Exact {
        (0..self.n).fold(self.get(0, 0).zero_like(), |acc, i| &acc + self.get(i, i))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(self.get(0, 0).zero_like(), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        }))
    }

    pub fn scale(&self, c: &Exact) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| c * e).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Exact) -> Exact) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Embed every entry into `K` at the working precision of `ctx`.
    pub fn embed(&self, ctx: &FieldContext) -> ValMatrix {
        ValMatrix {
            ctx: *ctx,
            n: self.n,
            entries: self.entries.iter().map(|e| ValuedElement::embed(e, ctx)).collect(),
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `B = alpha * A` undone: `A = alpha^-1 B` with entries in `D(1, |pi|^radius)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rescaled {
    pub matrix: RationalMatrix,
    pub alpha: Exact,
    /// Eigenvalues of `matrix` are those of `B` divided by `alpha`; eigenvectors agree.
    pub radius: Valuation,
}

/// Divide `B` by `alpha` after checking that all entries of `B` lie in a disc
/// `D(alpha, r)` with `r < |alpha|`.
pub fn rescale_to_unit_disc(b: &RationalMatrix, alpha: &Exact, ctx: &FieldContext) -> Result<Rescaled> {
    if !alpha.belongs_to(ctx) || !b.belongs_to(ctx) {
        return Err(Error::InvalidRescale(format!("inputs are not scalars of {ctx}")));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidRescale("alpha must be nonzero".into()));
    }
    let ord_alpha = alpha.ord_in(ctx);
    let spread = b
        .entries()
        .iter()
        .map(|e| (e - alpha).ord_in(ctx))
        .min()
        .expect("matrix is nonempty");
    if spread <= ord_alpha {
        return Err(Error::InvalidRescale(format!(
            "entries only lie in D(alpha, |pi|^{spread}), which contains 0 since ord(alpha) = {ord_alpha}"
        )));
    }
    let inv = alpha.one_like().checked_div(alpha).expect("alpha is nonzero");
    let radius = match (spread, ord_alpha) {
        (Valuation::Finite(s), Valuation::Finite(a)) => Valuation::Finite(s - a),
        _ => Valuation::Infinite,
    };
    Ok(Rescaled {
        matrix: b.scale(&inv),
        alpha: alpha.clone(),
        radius,
    })
}

/// An `n x n` matrix of finite-precision elements sharing one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValMatrix {
    ctx: FieldContext,
    n: usize,
    entries: Vec<ValuedElement>,
}

impl ValMatrix {
    pub fn new(ctx: &FieldContext, n: usize, entries: Vec<ValuedElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::NotSquare(format!("{} entries for n = {n}", entries.len())));
        }
        for e in &entries {
            ctx.check_same_field(e.context())?;
        }
        Ok(Self { ctx: *ctx, n, entries })
    }

    pub fn from_fn(ctx: &FieldContext, n: usize, mut f: impl FnMut(usize, usize) -> ValuedElement) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { ctx: *ctx, n, entries }
    }

    pub fn identity(n: usize, ctx: &FieldContext) -> Self {
        Self::from_fn(ctx, n, |i, j| ValuedElement::from_int(i64::from(i == j), ctx))
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ValuedElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[ValuedElement] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ValuedElement]> {
        self.entries.chunks(self.n)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.ctx.check_same_field(&other.ctx)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.n;
        let ctx = self.ctx;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = &self.entries[i * n] * &other.entries[j];
                for k in 1..n {
                    acc = &acc + &(&self.entries[i * n + k] * &other.entries[k * n + j]);
                }
                entries.push(acc);
            }
        }
        Ok(Self { ctx, n, entries })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&ValuedElement, &ValuedElement) -> ValuedElement) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            ctx: self.ctx,
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &ValuedElement) -> Result<Self> {
        self.ctx.check_same_field(c.context())?;
        Ok(self.map(|e| e * c))
    }

    pub fn map(&self, f: impl Fn(&ValuedElement) -> ValuedElement) -> Self {
        Self {
            ctx: self.ctx,
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `self - c * I`
    pub fn sub_scalar(&self, c: &ValuedElement) -> Result<Self> {
        self.ctx.check_same_field(c.context())?;
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            out.entries[i * n + i] = &self.entries[i * n + i] - c;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ValVector) -> Result<ValVector> {
        self.ctx.check_same_field(v.context())?;
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!("matrix {} vs vector {}", self.n, v.len())));
        }
        let entries = self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .reduce(|acc, t| &acc + &t)
                    .expect("n >= 1")
            })
            .collect();
        Ok(ValVector::new_unchecked(self.ctx, entries))
    }

    pub fn trace(&self) -> ValuedElement {
        (1..self.n).fold(self.get(0, 0).clone(), |acc, i| &acc + self.get(i, i))
    }

    /// `ord ‖M‖ = min ord m_ij`; only a lower bound when every entry is zero at precision.
    pub fn mat_norm(&self) -> OrdReading {
        min_reading(&self.entries)
    }

    /// Smallest absolute precision among the entries.
    pub fn min_abs_precision(&self) -> i64 {
        self.entries.iter().map(ValuedElement::abs_precision).min().expect("n >= 1")
    }

    pub fn to_exact(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.n, |i, j| self.get(i, j).to_exact())
    }
}

fn min_reading(xs: &[ValuedElement]) -> OrdReading {
    let exact = xs.iter().filter_map(|e| e.ord().finite()).min();
    match exact {
        Some(v) => OrdReading::Exact(v),
        None => OrdReading::AtLeast(xs.iter().map(ValuedElement::abs_precision).min().unwrap_or(0)),
    }
}

/// A vector in `K^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValVector {
    ctx: FieldContext,
    entries: Vec<ValuedElement>,
}

impl ValVector {
    pub fn new(ctx: &FieldContext, entries: Vec<ValuedElement>) -> Result<Self> {
        for e in &entries {
            ctx.check_same_field(e.context())?;
        }
        Ok(Self::new_unchecked(*ctx, entries))
    }

    fn new_unchecked(ctx: FieldContext, entries: Vec<ValuedElement>) -> Self {
        Self { ctx, entries }
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &ValuedElement {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[ValuedElement] {
        &self.entries
    }

    pub fn norm(&self) -> OrdReading {
        min_reading(&self.entries)
    }

    pub fn sum(&self) -> ValuedElement {
        self.entries
            .iter()
            .cloned()
            .reduce(|acc, x| &acc + &x)
            .unwrap_or_else(|| ValuedElement::zero(&self.ctx))
    }

    pub fn scale(&self, c: &ValuedElement) -> Self {
        Self::new_unchecked(self.ctx, self.entries.iter().map(|e| e * c).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same_field(&other.ctx)?;
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.len(), other.len())));
        }
        Ok(Self::new_unchecked(
            self.ctx,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Index of the first coordinate of maximal absolute value.
    pub fn first_max_abs(&self) -> Option<usize> {
        let best = self.entries.iter().filter_map(|e| e.ord().finite()).min()?;
        self.entries.iter().position(|e| e.ord() == Valuation::Finite(best))
    }

    pub fn min_abs_precision(&self) -> i64 {
        self.entries.iter().map(ValuedElement::abs_precision).min().unwrap_or(0)
    }
}

/// A kernel vector of the square matrix `m`, normalized so that its first
/// coordinate of maximal absolute value is exactly 1.
///
/// Gaussian elimination with full pivoting on the entry of least valuation.
/// The rank is the number of pivots found before the remaining block is
/// zero at precision; a full-rank matrix has no kernel at this precision.
pub fn solve_kernel(m: &ValMatrix) -> Result<ValVector> {
    let n = m.n;
    let ctx = m.ctx;
    let mut a: Vec<Vec<ValuedElement>> = m.rows().map(<[ValuedElement]>::to_vec).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while rank < n {
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in a.iter().enumerate().skip(rank) {
            for (j, e) in row.iter().enumerate().skip(rank) {
                if let Some(v) = e.ord().finite() {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(rank, pi);
        if pj != rank {
            for row in a.iter_mut() {
                row.swap(rank, pj);
            }
            cols.swap(rank, pj);
        }
        let pivot_inv = a[rank][rank].inv()?;
        for i in rank + 1..n {
            if a[i][rank].is_zero() {
                continue;
            }
            let factor = &a[i][rank] * &pivot_inv;
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][rank..].iter_mut().zip(&top[rank][rank..]) {
                *x = &*x - &(&factor * y);
            }
        }
        rank += 1;
    }
    if rank == n {
        return Err(Error::NoKernel);
    }
    // Free variable at permuted column `rank` set to 1, the other free ones to 0.
    let mut y = vec![ValuedElement::zero(&ctx); n];
    y[rank] = ValuedElement::one(&ctx);
    for i in (0..rank).rev() {
        let mut acc = ValuedElement::zero(&ctx);
        for j in i + 1..=rank {
            acc = &acc + &(&a[i][j] * &y[j]);
        }
        y[i] = (-&acc).checked_div(&a[i][i])?;
    }
    let mut x = vec![ValuedElement::zero(&ctx); n];
    for (k, &c) in cols.iter().enumerate() {
        x[c] = y[k].clone();
    }
    normalize_max_abs(ValVector::new_unchecked(ctx, x))
}

/// Scale `v` so that its first max-abs coordinate is exactly 1 (`‖v‖ = 1`).
pub fn normalize_max_abs(v: ValVector) -> Result<ValVector> {
    let idx = v
        .first_max_abs()
        .ok_or_else(|| Error::PrecisionExhausted("kernel vector is zero at working precision".into()))?;
    let inv = v.entries[idx].inv()?;
    let mut out = v.scale(&inv);
    out.entries[idx] = ValuedElement::one(&out.ctx);
    Ok(out)
}
