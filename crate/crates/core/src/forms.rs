//! Positive definite binary quadratic forms and the form class group.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::order::QuadraticOrder;
use crate::scalar::{factor_u64, int, xgcd, Scalar};

/// The form `A·x² + B·x·y + C·y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryForm<I> {
    pub a: I,
    pub b: I,
    pub c: I,
}

impl<I: Scalar> BinaryForm<I> {
    pub fn new(a: I, b: I, c: I) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn disc(&self) -> I {
        self.b.clone() * self.b.clone() - int::<I>(4) * self.a.clone() * self.c.clone()
    }

    /// The principal form of discriminant `disc`.
    pub fn identity(disc: &I) -> Self {
        let four = int::<I>(4);
        if disc.is_multiple_of(&four) {
            BinaryForm::new(I::one(), I::zero(), -disc.clone() / four)
        } else {
            BinaryForm::new(I::one(), I::one(), (I::one() - disc.clone()) / four)
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// `|B| <= A <= C`, with `B >= 0` when `|B| = A` or `A = C`.
    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a
            && self.a <= self.c
            && !((ab == self.a || self.a == self.c) && self.b.is_negative())
    }

    /// The unique reduced form properly equivalent to `self`.
    pub fn reduce(&self) -> Self {
        let two = int::<I>(2);
        let (mut a, mut b, mut c) = (self.a.clone(), self.b.clone(), self.c.clone());
        loop {
            // normalize b into (-a, a]
            if b.abs() > a || b == -a.clone() {
                let two_a = two.clone() * a.clone();
                let mut nb = b.mod_floor(&two_a);
                if nb > a {
                    nb = nb - two_a.clone();
                }
                let k = (nb.clone() - b.clone()) / two_a;
                // c' = a·k² + b·k + c
                c = a.clone() * k.clone() * k.clone() + b.clone() * k + c;
                b = nb;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b.is_negative() {
                b = -b;
            }
            break;
        }
        BinaryForm::new(a, b, c)
    }

    pub fn inverse(&self) -> Self {
        BinaryForm::new(self.a.clone(), -self.b.clone(), self.c.clone()).reduce()
    }

    /// Gaussian composition, reduced.
    pub fn compose(&self, other: &Self) -> Self {
        let disc = self.disc();
        debug_assert_eq!(disc, other.disc());
        let two = int::<I>(2);
        let (a1, b1) = (self.a.clone(), self.b.clone());
        let (a2, b2) = (other.a.clone(), other.b.clone());
        let s = (b1.clone() + b2.clone()) / two.clone();
        let (g0, u0, v0) = xgcd(&a1, &a2);
        let (g, x, w) = xgcd(&g0, &s);
        let u = x.clone() * u0;
        let v = x * v0;
        let a3 = a1.clone() * a2.clone() / (g.clone() * g.clone());
        let num = u * a1 * b2.clone()
            + v * a2 * b1.clone()
            + w * (b1 * b2 + disc.clone()) / two.clone();
        debug_assert!(num.is_multiple_of(&g));
        let two_a3 = two * a3.clone();
        let b3 = (num / g).mod_floor(&two_a3);
        let c3 = (b3.clone() * b3.clone() - disc) / (int::<I>(4) * a3.clone());
        BinaryForm::new(a3, b3, c3).reduce()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(&self.disc());
        let mut base = self.reduce();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Order of the class of `self` in the form class group.
    pub fn class_order(&self) -> u64 {
        let id = Self::identity(&self.disc());
        let base = self.reduce();
        let mut cur = base.clone();
        let mut k = 1;
        while cur != id {
            cur = cur.compose(&base);
            k += 1;
        }
        k
    }
}

impl<I: Scalar> fmt::Display for BinaryForm<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All primitive reduced forms of a negative discriminant, sorted.
pub fn reduced_forms(disc: i64) -> Vec<BinaryForm<i64>> {
    assert!(disc < 0 && matches!(disc.rem_euclid(4), 0 | 1));
    let mut out = Vec::new();
    let mut a = 1i64;
    // reduced forms have 3a² <= |disc|
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let form = BinaryForm::new(a, b, c);
            if form.is_reduced() && form.is_primitive() {
                out.push(form);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

/// Class number and group structure of an order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupInfo {
    pub disc: i64,
    pub h: u64,
    /// Elementary divisors `d1 | d2 | ...`, all greater than one.
    pub invariants: Vec<u64>,
    pub representatives: Vec<BinaryForm<i64>>,
}

impl ClassGroupInfo {
    pub fn is_cyclic(&self) -> bool {
        self.invariants.len() <= 1
    }
}

/// Form class group of discriminant `f²·d_K`: `Cl(O_K)` for the maximal
/// order and `Pic(O)` otherwise. Results are memoized per discriminant.
pub fn class_group(order: QuadraticOrder) -> ClassGroupInfo {
    static CACHE: OnceLock<Mutex<HashMap<i64, ClassGroupInfo>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("class group cache poisoned").get(&order.disc()) {
        return hit.clone();
    }
    let info = class_group_uncached(order.disc());
    cache
        .lock()
        .expect("class group cache poisoned")
        .insert(order.disc(), info.clone());
    info
}

pub fn class_group_uncached(disc: i64) -> ClassGroupInfo {
    let forms = reduced_forms(disc);
    let h = forms.len() as u64;
    let mut invariants_by_prime: Vec<Vec<u64>> = Vec::new();
    for (p, e) in factor_u64(h) {
        // count[k] = #{x : x^(p^k) = 1}
        let mut counts = vec![1u64];
        let mut k = 0;
        while counts[k] < p.pow(e) {
            k += 1;
            let pk = p.pow(k as u32);
            let n = forms.iter().filter(|x| x.pow(pk) == BinaryForm::identity(&disc)).count() as u64;
            counts.push(n);
        }
        // ranks[k] = number of cyclic factors of order >= p^k
        let ranks: Vec<u32> = (1..counts.len())
            .map(|k| (counts[k] / counts[k - 1]).ilog(p))
            .collect();
        let mut parts = Vec::new();
        for (i, &r) in ranks.iter().enumerate() {
            let next = ranks.get(i + 1).copied().unwrap_or(0);
            for _ in 0..(r - next) {
                parts.push(p.pow(i as u32 + 1));
            }
        }
        parts.sort_unstable_by(|x, y| y.cmp(x));
        invariants_by_prime.push(parts);
    }
    let width = invariants_by_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut invariants: Vec<u64> = (0..width)
        .map(|i| invariants_by_prime.iter().filter_map(|ps| ps.get(i)).product())
        .collect();
    invariants.reverse();
    ClassGroupInfo { disc, h, invariants, representatives: forms }
}
