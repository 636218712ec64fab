//! Rational reconstruction by the half extended Euclidean algorithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::FpPoly;

/// Find `a/b` with `|a|, b <= height`, `b > 0` coprime to `a`, and
/// `a ≡ b·u (mod m)`.
pub(crate) fn integer(u: &BigInt, m: &BigInt, height: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > height {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let (mut a, mut b) = (r1, s1);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    if b.is_zero() || &b > height || !a.gcd(&b).is_one() {
        return None;
    }
    if !(&a - &b * u).mod_floor(m).is_zero() {
        return None;
    }
    Some((a, b))
}

/// Find `a/b` with `deg a, deg b <= deg_bound`, `b(0) != 0` and
/// `a ≡ b·u (mod t^k)`.
pub(crate) fn series(u: &FpPoly, k: usize, deg_bound: usize) -> Option<(FpPoly, FpPoly)> {
    let p = u.p();
    let deg = |f: &FpPoly| f.degree().map_or(-1, |d| d as i64);
    let (mut r0, mut r1) = (FpPoly::monomial(p, k, 1), u.truncate(k));
    let (mut s0, mut s1) = (FpPoly::zero(p), FpPoly::constant(p, 1));
    while deg(&r1) > deg_bound as i64 {
        let (q, r2) = r0.div_rem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let (a, b) = (r1, s1);
    if b.is_zero() || deg(&b) > deg_bound as i64 || b.coeff(0) == 0 {
        return None;
    }
    if !a.sub(&b.mul(u)).truncate(k).is_zero() {
        return None;
    }
    Some((a, b))
}
