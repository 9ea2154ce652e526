//! Elements of quadratic orders and of the field `K*`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::order::QuadraticOrder;
use crate::scalar::{exact_sqrt, int, Scalar};

/// The element `a + b·τ` of an order, with `τ = f·ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderElement<I> {
    order: QuadraticOrder,
    a: I,
    b: I,
}

impl<I: Scalar> OrderElement<I> {
    pub fn new(order: QuadraticOrder, a: I, b: I) -> Self {
        OrderElement { order, a, b }
    }

    pub fn from_i64(order: QuadraticOrder, a: i64, b: i64) -> Self {
        Self::new(order, int(a), int(b))
    }

    pub fn integer(order: QuadraticOrder, a: I) -> Self {
        Self::new(order, a, I::zero())
    }

    pub fn zero(order: QuadraticOrder) -> Self {
        Self::new(order, I::zero(), I::zero())
    }

    pub fn one(order: QuadraticOrder) -> Self {
        Self::new(order, I::one(), I::zero())
    }

    /// Builds an element of `order` from coordinates over the maximal basis
    /// `{1, ω}`; `None` if the element does not lie in `order`.
    pub fn from_maximal_coords(order: QuadraticOrder, a: I, c: I) -> Option<Self> {
        let f: I = order.fs();
        if c.is_multiple_of(&f) {
            Some(Self::new(order, a, c / f))
        } else {
            None
        }
    }

    #[inline]
    pub fn order(&self) -> QuadraticOrder {
        self.order
    }

    #[inline]
    pub fn a(&self) -> &I {
        &self.a
    }

    #[inline]
    pub fn b(&self) -> &I {
        &self.b
    }

    /// Coordinates `(a, c)` with `x = a + c·ω`.
    pub fn maximal_coords(&self) -> (I, I) {
        (self.a.clone(), self.b.clone() * self.order.fs())
    }

    /// The same number viewed in the maximal order.
    pub fn to_maximal(&self) -> Self {
        let (a, c) = self.maximal_coords();
        Self::new(self.order.maximal_order(), a, c)
    }

    /// The same number viewed in another order of the same field, if it lies there.
    pub fn rebase(&self, target: QuadraticOrder) -> Option<Self> {
        assert!(self.order.same_field(&target), "rebase across different fields");
        let (a, c) = self.maximal_coords();
        Self::from_maximal_coords(target, a, c)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `N(x) = x·x̄ = a² + f·t·a·b + f²·n·b²`.
    pub fn norm(&self) -> I {
        let f: I = self.order.fs();
        let t: I = self.order.t();
        let n: I = self.order.n();
        let ab = self.a.clone() * self.b.clone();
        self.a.clone() * self.a.clone()
            + f.clone() * t * ab
            + f.clone() * f * n * self.b.clone() * self.b.clone()
    }

    pub fn trace(&self) -> I {
        let f: I = self.order.fs();
        let t: I = self.order.t();
        int::<I>(2) * self.a.clone() + f * t * self.b.clone()
    }

    pub fn conj(&self) -> Self {
        let f: I = self.order.fs();
        let t: I = self.order.t();
        Self::new(self.order, self.a.clone() + f * t * self.b.clone(), -self.b.clone())
    }

    pub fn scale(&self, k: &I) -> Self {
        Self::new(self.order, self.a.clone() * k.clone(), self.b.clone() * k.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.order, other.order, "operands live in different orders");
    }

    /// Representative of the unit orbit `U(O)·x` with the smallest key
    /// `(not both maximal coordinates nonnegative, a, c)`.
    pub fn canonical(&self) -> Self {
        let units = unit_list::<I>(self.order);
        let mut best = self.clone();
        let mut best_key = canonical_key(&best);
        for u in units.iter().skip(1) {
            let cand = &u.clone() * self;
            let key = canonical_key(&cand);
            if key < best_key {
                best = cand;
                best_key = key;
            }
        }
        best
    }

    pub fn is_associate(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn repr(&self) -> ElementRepr {
        ElementRepr {
            d: self.order.d(),
            f: self.order.f(),
            a: self.a.to_string(),
            b: self.b.to_string(),
        }
    }
}

/// Replayable wire form of an element: `a + b·τ` in the order `(d, f)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementRepr {
    pub d: i64,
    pub f: i64,
    pub a: String,
    pub b: String,
}

impl ElementRepr {
    /// Parses the coordinates back; `None` on malformed input.
    pub fn parse<I: Scalar + std::str::FromStr>(&self) -> Option<OrderElement<I>> {
        let order = QuadraticOrder::new(self.d, self.f).ok()?;
        Some(OrderElement::new(order, self.a.parse().ok()?, self.b.parse().ok()?))
    }
}

fn canonical_key<I: Scalar>(x: &OrderElement<I>) -> (bool, I, I) {
    let (a, c) = x.maximal_coords();
    (a.is_negative() || c.is_negative(), a, c)
}

impl<I: Scalar> Mul for &OrderElement<I> {
    type Output = OrderElement<I>;
    /// `τ² = f·t·τ − f²·n`.
    fn mul(self, rhs: &OrderElement<I>) -> OrderElement<I> {
        self.check_same(rhs);
        let f: I = self.order.fs();
        let t: I = self.order.t();
        let n: I = self.order.n();
        let bb = self.b.clone() * rhs.b.clone();
        let a = self.a.clone() * rhs.a.clone() - f.clone() * f.clone() * n * bb.clone();
        let b = self.a.clone() * rhs.b.clone() + rhs.a.clone() * self.b.clone() + f * t * bb;
        OrderElement::new(self.order, a, b)
    }
}

impl<I: Scalar> Add for &OrderElement<I> {
    type Output = OrderElement<I>;
    fn add(self, rhs: &OrderElement<I>) -> OrderElement<I> {
        self.check_same(rhs);
        OrderElement::new(self.order, self.a.clone() + rhs.a.clone(), self.b.clone() + rhs.b.clone())
    }
}

impl<I: Scalar> Sub for &OrderElement<I> {
    type Output = OrderElement<I>;
    fn sub(self, rhs: &OrderElement<I>) -> OrderElement<I> {
        self.check_same(rhs);
        OrderElement::new(self.order, self.a.clone() - rhs.a.clone(), self.b.clone() - rhs.b.clone())
    }
}

impl<I: Scalar> Neg for &OrderElement<I> {
    type Output = OrderElement<I>;
    fn neg(self) -> OrderElement<I> {
        OrderElement::new(self.order, -self.a.clone(), -self.b.clone())
    }
}

impl<I: Scalar> fmt::Display for OrderElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = if self.order.is_maximal() { "ω" } else { "τ" };
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}{}", self.b, sym)
        } else if self.b.is_negative() {
            write!(f, "{}-{}{}", self.a, -self.b.clone(), sym)
        } else {
            write!(f, "{}+{}{}", self.a, self.b, sym)
        }
    }
}

/// Exact quotient `x / y` if it lies in the common order.
///
/// # Panics
/// If `y` is zero or the operands live in different orders.
pub fn divide_exact<I: Scalar>(x: &OrderElement<I>, y: &OrderElement<I>) -> Option<OrderElement<I>> {
    assert!(!y.is_zero(), "division by zero");
    let num = x * &y.conj();
    let n = y.norm();
    if num.a.is_multiple_of(&n) && num.b.is_multiple_of(&n) {
        Some(OrderElement::new(x.order, num.a / n.clone(), num.b / n))
    } else {
        None
    }
}

/// Every element of `order` of norm exactly `n`, sorted by coordinates.
///
/// Uses `4N = (2a + f·t·b)² + |d_K|·f²·b²` and scans `b` exactly.
pub fn elements_of_norm<I: Scalar>(order: QuadraticOrder, n: &I) -> Vec<OrderElement<I>> {
    let mut out = Vec::new();
    if !n.is_positive() {
        if n.is_zero() {
            out.push(OrderElement::zero(order));
        }
        return out;
    }
    let four_n = int::<I>(4) * n.clone();
    let f: I = order.fs();
    let t: I = order.t();
    let weight = int::<I>(order.d_k().abs()) * f.clone() * f.clone();
    let bmax = (four_n.clone() / weight.clone()).sqrt();
    let two = int::<I>(2);
    let mut b = -bmax.clone();
    while b <= bmax {
        let rest = four_n.clone() - weight.clone() * b.clone() * b.clone();
        if let Some(s) = exact_sqrt(&rest) {
            let shift = f.clone() * t.clone() * b.clone();
            for num in [s.clone() - shift.clone(), -s.clone() - shift.clone()] {
                if num.is_multiple_of(&two) {
                    out.push(OrderElement::new(order, num / two.clone(), b.clone()));
                }
            }
        }
        b = b + I::one();
    }
    out.sort();
    out.dedup();
    out
}

/// Every element of `order` with `1 <= N(x) <= bound`, sorted by (norm, coordinates).
pub fn elements_up_to<I: Scalar>(order: QuadraticOrder, bound: &I) -> Vec<OrderElement<I>> {
    let four_b = int::<I>(4) * bound.clone();
    let f: I = order.fs();
    let t: I = order.t();
    let weight = int::<I>(order.d_k().abs()) * f.clone() * f.clone();
    let bmax = (four_b.clone() / weight.clone()).sqrt();
    let two = int::<I>(2);
    let mut out = Vec::new();
    let mut b = -bmax.clone();
    while b <= bmax {
        let s = (four_b.clone() - weight.clone() * b.clone() * b.clone()).sqrt();
        let shift = f.clone() * t.clone() * b.clone();
        // 2a + shift ∈ [-s, s]
        let lo = (-s.clone() - shift.clone()).div_ceil(&two);
        let hi = (s - shift).div_floor(&two);
        let mut a = lo;
        while a <= hi {
            let x = OrderElement::new(order, a.clone(), b.clone());
            if !x.is_zero() && x.norm() <= *bound {
                out.push(x);
            }
            a = a + I::one();
        }
        b = b + I::one();
    }
    out.sort_by_cached_key(|x| (x.norm(), x.a.clone(), x.b.clone()));
    out
}

/// The unit group of `order`, computed as the elements of norm one.
pub fn units<I: Scalar>(order: QuadraticOrder) -> Vec<OrderElement<I>> {
    elements_of_norm(order, &I::one())
}

/// Units with `1` first, built directly from the known unit groups.
pub(crate) fn unit_list<I: Scalar>(order: QuadraticOrder) -> Vec<OrderElement<I>> {
    let e = |a: i64, b: i64| OrderElement::from_i64(order, a, b);
    match (order.d(), order.f()) {
        (-1, 1) => vec![e(1, 0), e(-1, 0), e(0, 1), e(0, -1)],
        // ω² = ω − 1
        (-3, 1) => vec![e(1, 0), e(-1, 0), e(0, 1), e(0, -1), e(-1, 1), e(1, -1)],
        _ => vec![e(1, 0), e(-1, 0)],
    }
}

/// A nonzero element of `K`, written `num / den` with `num` in the maximal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KElement<I> {
    num: OrderElement<I>,
    den: I,
}

impl<I: Scalar> KElement<I> {
    /// Returns `None` for a zero numerator or zero denominator.
    pub fn new(num: &OrderElement<I>, den: I) -> Option<Self> {
        if num.is_zero() || den.is_zero() {
            return None;
        }
        let num = num.to_maximal();
        let (num, den) = if den.is_negative() { (-&num, -den) } else { (num, den) };
        let g = num.a.gcd(&num.b).gcd(&den);
        Some(KElement {
            num: OrderElement::new(num.order, num.a / g.clone(), num.b / g.clone()),
            den: den / g,
        })
    }

    pub fn from_element(x: &OrderElement<I>) -> Option<Self> {
        Self::new(x, I::one())
    }

    /// `x / y` for nonzero order elements of the same field.
    pub fn quotient(x: &OrderElement<I>, y: &OrderElement<I>) -> Option<Self> {
        if y.is_zero() {
            return None;
        }
        let y = y.to_maximal();
        let num = &x.to_maximal() * &y.conj();
        Self::new(&num, y.norm())
    }

    pub fn num(&self) -> &OrderElement<I> {
        &self.num
    }

    pub fn den(&self) -> &I {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&(&self.num * &other.num), self.den.clone() * other.den.clone())
            .expect("K* is closed under multiplication")
    }

    pub fn inv(&self) -> Self {
        let n = self.num.norm();
        Self::new(&self.num.conj().scale(&self.den), n).expect("nonzero")
    }

    /// The element as a member of `order`, if it lies there.
    pub fn to_order(&self, order: QuadraticOrder) -> Option<OrderElement<I>> {
        if !self.den.is_one() {
            return None;
        }
        self.num.rebase(order)
    }
}

impl<I: Scalar> fmt::Display for KElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// Orders elements by norm, then coordinates.
pub fn by_norm<I: Scalar>(x: &OrderElement<I>, y: &OrderElement<I>) -> Ordering {
    x.norm().cmp(&y.norm()).then_with(|| x.cmp(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::make_order;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type E = OrderElement<BigInt>;

    fn el(o: QuadraticOrder, a: i64, b: i64) -> E {
        OrderElement::from_i64(o, a, b)
    }

    #[test]
    fn norm_examples() {
        // Z[√−3] = Z + 2·O_K; 1+√−3 = 2ω, i.e. maximal coords (0, 2) and order coords (0, 1).
        let r = make_order(-3, 2).unwrap();
        let x = OrderElement::<BigInt>::from_maximal_coords(r, 0.into(), 2.into()).unwrap();
        assert_eq!(x.norm(), BigInt::from(4));
        assert_eq!(el(r, 0, 0).norm(), BigInt::from(0));
        let gi = make_order(-1, 1).unwrap();
        assert_eq!(el(gi, 2, 1).norm(), BigInt::from(5));
    }

    #[test]
    fn divide_exact_examples() {
        let r = make_order(-3, 2).unwrap();
        // √−3 = 2ω − 1 = −1 + τ
        let sqrt_m3 = el(r, -1, 1);
        let one_plus = &el(r, 1, 0) + &sqrt_m3;
        let one_minus = &el(r, 1, 0) - &sqrt_m3;
        assert_eq!(divide_exact(&el(r, 4, 0), &el(r, 2, 0)), Some(el(r, 2, 0)));
        assert_eq!(divide_exact(&el(r, 4, 0), &one_plus), Some(one_minus));
        assert_eq!(divide_exact(&el(r, 5, 0), &one_plus), None);
    }

    #[test]
    fn elements_of_norm_examples() {
        let o = make_order(-5, 1).unwrap();
        let six = elements_of_norm::<BigInt>(o, &6.into());
        assert_eq!(six, vec![el(o, -1, -1), el(o, -1, 1), el(o, 1, -1), el(o, 1, 1)]);
        assert!(elements_of_norm::<BigInt>(o, &2.into()).is_empty());
        for (d, f) in [(-1, 1), (-3, 1), (-3, 2), (-5, 1), (-7, 3)] {
            let o = make_order(d, f).unwrap();
            let u = units::<BigInt>(o);
            let mut fast = unit_list::<BigInt>(o);
            fast.sort();
            assert_eq!(u, fast, "units of {o}");
        }
    }

    #[test]
    fn unit_counts() {
        assert_eq!(units::<i64>(make_order(-3, 2).unwrap()).len(), 2);
        assert_eq!(units::<i64>(make_order(-3, 1).unwrap()).len(), 6);
        assert_eq!(units::<i64>(make_order(-1, 1).unwrap()).len(), 4);
        assert_eq!(units::<i64>(make_order(-5, 1).unwrap()).len(), 2);
    }

    #[test]
    fn kelement_reduction_and_inverse() {
        let d = make_order(-3, 1).unwrap();
        let x = KElement::new(&el(d, 2, 4), BigInt::from(6)).unwrap();
        assert_eq!(x.den(), &BigInt::from(3));
        assert_eq!(x.num(), &el(d, 1, 2));
        let one = x.mul(&x.inv());
        assert_eq!(one, KElement::from_element(&el(d, 1, 0)).unwrap());
        assert!(KElement::new(&el(d, 0, 0), BigInt::from(1)).is_none());
    }

    #[test]
    fn elements_up_to_matches_norm_scan() {
        for (d, f) in [(-1, 1), (-3, 1), (-3, 2), (-5, 1), (-14, 1), (-7, 2)] {
            let o = make_order(d, f).unwrap();
            let all = elements_up_to::<i64>(o, &60);
            let by_scan: usize = (1..=60).map(|n| elements_of_norm::<i64>(o, &n).len()).sum();
            assert_eq!(all.len(), by_scan, "{o}");
        }
    }

    fn orders() -> impl Strategy<Value = QuadraticOrder> {
        prop::sample::select(vec![(-1i64, 1i64), (-3, 1), (-3, 2), (-5, 1), (-14, 1), (-7, 3), (-1, 2), (-2, 5)])
            .prop_map(|(d, f)| make_order(d, f).unwrap())
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(o in orders(), a in -60i64..60, b in -60i64..60, c in -60i64..60, e in -60i64..60) {
            let x = el(o, a, b);
            let y = el(o, c, e);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert!(x.norm() >= BigInt::from(0));
            prop_assert_eq!(x.norm() == BigInt::from(0), x.is_zero());
        }

        #[test]
        fn divide_exact_inverts_mul(o in orders(), a in -40i64..40, b in -40i64..40, c in -40i64..40, e in -40i64..40) {
            let x = el(o, a, b);
            let y = el(o, c, e);
            prop_assume!(!y.is_zero());
            prop_assert_eq!(divide_exact(&(&x * &y), &y), Some(x));
        }

        #[test]
        fn rebasing_preserves_norm(o in orders(), a in -50i64..50, b in -50i64..50) {
            let x = el(o, a, b);
            prop_assert_eq!(x.to_maximal().norm(), x.norm());
            prop_assert_eq!(x.to_maximal().rebase(o), Some(x));
        }

        #[test]
        fn norm_solutions_closed_under_units_and_conjugation(o in orders(), n in 1i64..400) {
            let sols = elements_of_norm::<i64>(o, &n);
            for x in &sols {
                prop_assert_eq!(x.norm(), n);
                prop_assert!(sols.binary_search(&x.conj()).is_ok());
                for u in units::<i64>(o) {
                    prop_assert!(sols.binary_search(&(&u * x)).is_ok());
                }
            }
        }

        #[test]
        fn unit_iff_norm_one(o in orders(), a in -5i64..5, b in -5i64..5) {
            let x = el(o, a, b);
            prop_assume!(!x.is_zero());
            let us = units::<BigInt>(o);
            prop_assert_eq!(us.contains(&x), x.norm() == BigInt::from(1));
        }

        #[test]
        fn canonical_is_orbit_invariant(o in orders(), a in -30i64..30, b in -30i64..30) {
            let x = el(o, a, b);
            let c = x.canonical();
            for u in unit_list::<BigInt>(o) {
                prop_assert_eq!((&u * &x).canonical(), c.clone());
            }
        }

        #[test]
        fn i64_and_bigint_agree(o in orders(), a in -300i64..300, b in -300i64..300, c in -300i64..300, e in -300i64..300) {
            let x64 = OrderElement::<i64>::new(o, a, b);
            let y64 = OrderElement::<i64>::new(o, c, e);
            let p64 = &x64 * &y64;
            let p = &el(o, a, b) * &el(o, c, e);
            prop_assert_eq!(BigInt::from(*p64.a()), p.a().clone());
            prop_assert_eq!(BigInt::from(*p64.b()), p.b().clone());
            prop_assert_eq!(BigInt::from(p64.norm()), p.norm());
        }
    }
}
