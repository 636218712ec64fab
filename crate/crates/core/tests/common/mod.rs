//! Test oracles that avoid the library's own algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use padic_perron::field::{Exact, FieldContext, ValuedElement};
use padic_perron::linalg::RationalMatrix;

pub fn mat(ctx: &FieldContext, rows: &[&[&str]]) -> RationalMatrix {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    RationalMatrix::from_strings(&rows, ctx).unwrap()
}

pub fn val(ctx: &FieldContext, s: &str) -> ValuedElement {
    ValuedElement::embed(&Exact::parse(s, ctx).unwrap(), ctx)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn sign(perm: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Leibniz expansion of the principal minor on `idx`.
fn minor(a: &RationalMatrix, idx: &[usize]) -> Exact {
    let zero = a.get(0, 0).zero_like();
    let mut det = zero;
    for perm in permutations(idx.len()) {
        let mut term = a.get(0, 0).one_like();
        for (r, &c) in perm.iter().enumerate() {
            term = &term * a.get(idx[r], idx[c]);
        }
        det = if sign(&perm) { &det + &term } else { &det - &term };
    }
    det
}

/// `det(xI - A)` as `sum_I (-1)^|I| det(A_I) x^(n - |I|)`, summed over all
/// principal index sets. Exponential; meant for `n <= 4`.
pub fn brute_char_poly(a: &RationalMatrix) -> Vec<Exact> {
    let n = a.n();
    let mut coeffs = vec![a.get(0, 0).zero_like(); n + 1];
    coeffs[n] = a.get(0, 0).one_like();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let d = minor(a, &idx);
        let k = n - idx.len();
        coeffs[k] = if idx.len().is_multiple_of(2) { &coeffs[k] + &d } else { &coeffs[k] - &d };
    }
    coeffs
}

fn ord(x: &BigInt, p: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut x = x.clone();
    let mut k = 0;
    while (&x % p).is_zero() {
        x /= p;
        k += 1;
    }
    Some(k)
}

fn inverse(u: &BigInt, m: &BigInt) -> BigInt {
    let g = u.extended_gcd(m);
    assert!(g.gcd.is_one(), "not a unit");
    g.x.mod_floor(m)
}

/// Result of power iteration: `lambda mod p^digits`.
pub struct PowerEstimate {
    pub lambda: BigInt,
    pub digits: u32,
}

/// Power iteration on integer residues mod `p^digits`. Each step divides
/// the iterate by the largest power of `p` dividing all entries (losing that
/// many digits) and reads the eigenvalue off a unit coordinate. The
/// estimate is trusted to the number of digits on which the last two
/// readings agree.
pub fn power_iteration(a: &RationalMatrix, p: u32, digits: u32, steps: usize, start: &[i64]) -> Option<PowerEstimate> {
    let pb = BigInt::from(p);
    let n = a.n();
    let mut m = pb.pow(digits);
    let mut prec = digits;
    let entries: Vec<BigInt> = a
        .entries()
        .iter()
        .map(|e| {
            let r = e.as_rational().expect("rational entries");
            (r.numer() * inverse(r.denom(), &m)).mod_floor(&m)
        })
        .collect();
    let mut x: Vec<BigInt> = start.iter().map(|&s| BigInt::from(s).mod_floor(&m)).collect();
    let mut previous: Option<BigInt> = None;
    let mut agreement = 0;
    for _ in 0..steps {
        let i = (0..n).find(|&i| ord(&x[i], &pb) == Some(0))?;
        let y: Vec<BigInt> = (0..n)
            .map(|r| (0..n).map(|c| &entries[r * n + c] * &x[c]).sum::<BigInt>().mod_floor(&m))
            .collect();
        let lambda = (&y[i] * inverse(&x[i], &m)).mod_floor(&m);
        if let Some(prev) = &previous {
            let d = (&lambda - prev).mod_floor(&m);
            agreement = ord(&d, &pb).unwrap_or(prec).min(prec);
        }
        previous = Some(lambda);
        let shift = y.iter().filter_map(|v| ord(v, &pb)).min()?;
        if shift >= prec {
            return None;
        }
        let scale = pb.pow(shift);
        prec -= shift;
        m = pb.pow(prec);
        x = y.iter().map(|v| (v / &scale).mod_floor(&m)).collect();
        agreement = agreement.min(prec);
    }
    let lambda = previous?;
    let m = pb.pow(agreement);
    Some(PowerEstimate {
        lambda: if m.is_positive() { lambda.mod_floor(&m) } else { lambda },
        digits: agreement,
    })
}
