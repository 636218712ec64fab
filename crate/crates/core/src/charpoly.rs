//! Exact characteristic polynomials, Newton polygons and the coefficient
//! bounds for matrices whose entries are all close to 1.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Exact, FieldContext, Valuation};
use crate::linalg::RationalMatrix;

/// A monic polynomial `x^n + c_{n-1} x^{n-1} + ... + c_0` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    /// `c_0, ..., c_{n-1}, 1`
    coeffs: Vec<Exact>,
}

impl CharPoly {
    /// From `c_0..c_n`; the leading coefficient must be exactly 1.
    pub fn from_coeffs(coeffs: Vec<Exact>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if *lead == lead.one_like() && coeffs.len() >= 2 => {}
            _ => return Err(Error::Parse("polynomial must be monic of degree >= 1".into())),
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_i`, with `c_n = 1`.
    pub fn coeff(&self, i: usize) -> &Exact {
        &self.coeffs[i]
    }

    /// `c_0, ..., c_n`
    pub fn coeffs(&self) -> &[Exact] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Exact) -> Exact {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_derivative(&self, x: &Exact) -> Exact {
        let mut acc = x.zero_like();
        for (i, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = &(&acc * x) + &(c * &x.int_like(i as i64));
        }
        acc
    }

    /// `det A = (-1)^n c_0`
    pub fn determinant(&self) -> Exact {
        if self.degree().is_multiple_of(2) {
            self.coeffs[0].clone()
        } else {
            -&self.coeffs[0]
        }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for i in (0..=n).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            let body = if body.contains(['+', ' ']) { format!("({body})") } else { body };
            let sign = match (first, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let term = match (body.as_str(), i) {
                (_, 0) => body.clone(),
                ("1", _) => mono,
                _ => format!("{body}*{mono}"),
            };
            write!(f, "{sign}{term}")?;
            first = false;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - A)` by Berkowitz's division-free algorithm.
pub fn char_poly(a: &RationalMatrix) -> CharPoly {
    let n = a.n();
    let zero = a.get(0, 0).zero_like();
    let one = zero.one_like();
    // Coefficients of the char poly of the leading k x k block, highest degree first.
    let mut p = vec![one.clone()];
    for k in 0..n {
        // Leading block is indices 0..k; new row/column index k.
        let akk = a.get(k, k);
        let col: Vec<Exact> = (0..k).map(|i| a.get(i, k).clone()).collect();
        let mut q = Vec::with_capacity(k + 2);
        q.push(one.clone());
        q.push(-akk);
        // -R A_k^j C for j = 0..k-1
        let mut v = col;
        for _ in 0..k {
            let rc = (0..k).fold(zero.clone(), |acc, i| &acc + &(a.get(k, i) * &v[i]));
            q.push(-rc);
            v = (0..k)
                .map(|i| (0..k).fold(zero.clone(), |acc, j| &acc + &(a.get(i, j) * &v[j])))
                .collect();
        }
        let next: Vec<Exact> = (0..=k + 1)
            .map(|i| {
                (0..=i.min(k)).fold(zero.clone(), |acc, j| &acc + &(&q[i - j] * &p[j]))
            })
            .collect();
        p = next;
    }
    p.reverse();
    CharPoly { coeffs: p }
}

/// A point `(i, ord c_i)` of a Newton polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonPoint(pub i64, pub i64);

/// An exact slope, serialized as `"a/b"` or `"a"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope(pub Ratio<i64>);

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ratio::from_str(s.trim())
            .map(Slope)
            .map_err(|_| Error::Parse(format!("bad slope {s:?}")))
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Slope,
    pub length: i64,
}

/// Lower convex hull of `(i, ord c_i)` over the nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub points: Vec<PolygonPoint>,
    pub vertices: Vec<PolygonPoint>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Polygon of the points `(i, v_i)` for the finite entries of `ords`.
    pub fn from_valuations(ords: &[Valuation]) -> Self {
        let points: Vec<PolygonPoint> = ords
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|v| PolygonPoint(i as i64, v)))
            .collect();
        let mut hull: Vec<PolygonPoint> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // drop b when it lies on or above the chord a -> pt
                let lhs = i128::from(b.1 - a.1) * i128::from(pt.0 - a.0);
                let rhs = i128::from(pt.1 - a.1) * i128::from(b.0 - a.0);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| Segment {
                slope: Slope(Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0)),
                length: w[1].0 - w[0].0,
            })
            .collect();
        Self {
            points,
            vertices: hull,
            segments,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polygon serializes")
    }
}

/// Newton polygon of `f` with respect to the valuation of `ctx`.
pub fn newton_polygon(f: &CharPoly, ctx: &FieldContext) -> NewtonPolygon {
    let ords: Vec<Valuation> = f.coeffs().iter().map(|c| c.ord_in(ctx)).collect();
    NewtonPolygon::from_valuations(&ords)
}

/// Root valuation and multiplicity carried by one polygon segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootValuation {
    pub valuation: Slope,
    pub count: i64,
}

/// One `(-slope, length)` pair per segment: `length` roots in `C_K` of that valuation.
pub fn root_valuations(pg: &NewtonPolygon) -> Vec<RootValuation> {
    pg.segments
        .iter()
        .map(|s| RootValuation {
            valuation: Slope(-s.slope.0),
            count: s.length,
        })
        .collect()
}

/// Which inequality a [`BoundCertificate`] is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `ord det A >= l(n-1)`
    DetBound,
    /// `ord c_j >= l(n-j-1)`
    CoeffBound(usize),
    /// `ord c_{n-1} = ord n`
    TraceIdentity,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::DetBound => f.write_str("det-bound"),
            Claim::CoeffBound(j) => write!(f, "coeff-bound({j})"),
            Claim::TraceIdentity => f.write_str("trace-identity"),
        }
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det-bound" => Ok(Claim::DetBound),
            "trace-identity" => Ok(Claim::TraceIdentity),
            _ => s
                .strip_prefix("coeff-bound(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|j| j.parse().ok())
                .map(Claim::CoeffBound)
                .ok_or_else(|| Error::Parse(format!("unknown claim {s:?}"))),
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Claim {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exactly checked valuation inequality (or equality, for the trace identity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub claim: Claim,
    pub required: Valuation,
    pub observed: Valuation,
    pub holds: bool,
}

impl BoundCertificate {
    fn at_least(claim: Claim, required: Valuation, observed: Valuation) -> Self {
        Self {
            claim,
            required,
            observed,
            holds: observed >= required,
        }
    }
}

/// `min ord(a_ij - 1)`: the largest `l` with every entry in `D(1, |pi|^l)`.
pub fn closeness_to_one(a: &RationalMatrix, ctx: &FieldContext) -> Valuation {
    let one = a.get(0, 0).one_like();
    a.entries()
        .iter()
        .map(|e| (e - &one).ord_in(ctx))
        .min()
        .expect("matrix is nonempty")
}

fn check_closeness(a: &RationalMatrix, ctx: &FieldContext, ell: i64) -> Result<()> {
    if ell < 1 {
        return Err(Error::HypothesisViolation(format!("l must be positive, got {ell}")));
    }
    let actual = closeness_to_one(a, ctx);
    if actual < Valuation::Finite(ell) {
        return Err(Error::HypothesisViolation(format!(
            "entries are not all in D(1, |pi|^{ell}): min ord(a_ij - 1) = {actual}"
        )));
    }
    Ok(())
}

/// Check `ord det A >= l(n-1)` for a matrix with all entries in `D(1, |pi|^l)`.
pub fn check_det_bound(a: &RationalMatrix, ctx: &FieldContext, ell: i64) -> Result<BoundCertificate> {
    check_closeness(a, ctx, ell)?;
    let det = char_poly(a).determinant();
    let n = a.n() as i64;
    Ok(BoundCertificate::at_least(
        Claim::DetBound,
        Valuation::Finite(ell * (n - 1)),
        det.ord_in(ctx),
    ))
}

/// Per-coefficient bounds `ord c_j >= l(n-j-1)`, plus `ord c_{n-1} = ord n`
/// when `l > ord n`.
pub fn check_coeff_bounds(f: &CharPoly, ctx: &FieldContext, ell: i64, n: usize) -> Vec<BoundCertificate> {
    let ni = n as i64;
    let mut out: Vec<BoundCertificate> = (0..n)
        .map(|j| {
            BoundCertificate::at_least(
                Claim::CoeffBound(j),
                Valuation::Finite(ell * (ni - j as i64 - 1)),
                f.coeff(j).ord_in(ctx),
            )
        })
        .collect();
    let ord_n = ctx.ord_of_integer(ni);
    if Valuation::Finite(ell) > ord_n {
        let observed = f.coeff(n - 1).ord_in(ctx);
        out.push(BoundCertificate {
            claim: Claim::TraceIdentity,
            required: ord_n,
            observed,
            holds: observed == ord_n,
        });
    }
    out
}
