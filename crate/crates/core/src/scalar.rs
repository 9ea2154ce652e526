//! Integer scalar abstraction.
//!
//! All exact arithmetic in the crate is generic over [`Scalar`]. The
//! default instantiation is [`num_bigint::BigInt`]; `i64` and `i128` work
//! as long as intermediate values stay in range.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as a coordinate type.
pub trait Scalar:
    Integer
    + Signed
    + Roots
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Lifts a machine integer into the scalar type.
#[inline]
pub fn int<I: Scalar>(v: i64) -> I {
    I::from_i64(v).expect("scalar type cannot represent an i64 constant")
}

/// Lifts an unsigned machine integer into the scalar type.
#[inline]
pub fn uint<I: Scalar>(v: u64) -> I {
    I::from_u64(v).expect("scalar type cannot represent a u64 constant")
}

/// Converts a scalar to `u64`, panicking if it is negative or too large.
#[inline]
pub fn to_u64<I: Scalar>(v: &I) -> u64 {
    v.to_u64().expect("value does not fit in u64")
}

/// Least nonnegative residue of `x` modulo `m > 0`.
#[inline]
pub fn modulo<I: Scalar>(x: &I, m: &I) -> I {
    x.mod_floor(m)
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt<I: Scalar>(n: &I) -> Option<I> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if r.clone() * r.clone() == *n {
        Some(r)
    } else {
        None
    }
}

/// Extended gcd: returns `(g, s, t)` with `s*x + t*y = g >= 0`.
pub fn xgcd<I: Scalar>(x: &I, y: &I) -> (I, I, I) {
    let e = x.extended_gcd(y);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Converts any scalar to a `BigInt` via its decimal representation.
pub fn to_bigint<I: Scalar>(v: &I) -> BigInt {
    v.to_string().parse().expect("scalar Display is decimal")
}

/// Factors `n >= 1` by trial division into `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && factor_u64(n) == [(n, 1)]
}

/// True when `n` has no square factor greater than one.
pub fn is_squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_and_factoring() {
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors_u64(1), vec![1]);
        assert_eq!(factor_u64(81), vec![(3, 4)]);
        assert!(is_squarefree(14));
        assert!(!is_squarefree(4));
        assert!(is_prime_u64(10007));
        assert!(!is_prime_u64(1));
    }

    #[test]
    fn xgcd_is_nonnegative() {
        let (g, s, t) = xgcd(&-4i64, &6i64);
        assert_eq!(g, 2);
        assert_eq!(s * -4 + t * 6, 2);
        assert_eq!(exact_sqrt(&49i64), Some(7));
        assert_eq!(exact_sqrt(&50i64), None);
        assert_eq!(modulo(&-3i64, &5), 2);
    }
}
