//! Ideals of the maximal order in two-generator Hermite normal form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::element::{elements_of_norm, OrderElement};
use crate::forms::BinaryForm;
use crate::lattice::{Lattice, LatticeRepr};
use crate::order::QuadraticOrder;
use crate::scalar::{divisors_u64, factor_u64, int, to_u64, uint, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("ideals are only represented over maximal orders, got {0}")]
    NotMaximal(QuadraticOrder),
    #[error("all generators are zero")]
    ZeroGenerators,
    #[error("lattice [{0}] is not closed under multiplication by ω")]
    NotAnIdeal(String),
    #[error("generator lives in {found}, expected {expected}")]
    OrderMismatch { expected: QuadraticOrder, found: QuadraticOrder },
}

/// The ideal `a·Z + (b + c·ω)·Z` of the maximal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralIdeal<I> {
    order: QuadraticOrder,
    lattice: Lattice<I>,
}

/// Multiplication by `ω` on maximal coordinates: `(x, y) ↦ (−n·y, x + t·y)`.
pub(crate) fn times_omega<I: Scalar>(order: QuadraticOrder, v: &(I, I)) -> (I, I) {
    let t: I = order.t();
    let n: I = order.n();
    (-(n * v.1.clone()), v.0.clone() + t * v.1.clone())
}

impl<I: Scalar> IntegralIdeal<I> {
    /// Wraps a lattice after checking closure under `ω`.
    pub fn from_lattice(order: QuadraticOrder, lattice: Lattice<I>) -> Result<Self, IdealError> {
        if !order.is_maximal() {
            return Err(IdealError::NotMaximal(order));
        }
        let closed = lattice.basis().iter().all(|v| lattice.contains(&times_omega(order, v)));
        if !closed {
            return Err(IdealError::NotAnIdeal(lattice.to_string()));
        }
        Ok(IntegralIdeal { order, lattice })
    }

    pub fn from_hnf(order: QuadraticOrder, a: I, b: I, c: I) -> Result<Self, IdealError> {
        let lattice = Lattice::from_hnf(a, b, c)
            .ok_or_else(|| IdealError::NotAnIdeal("coordinates not in HNF".into()))?;
        Self::from_lattice(order, lattice)
    }

    pub fn unit(order: QuadraticOrder) -> Self {
        Self::from_hnf(order, I::one(), I::zero(), I::one()).expect("O_K is an ideal")
    }

    pub fn principal(x: &OrderElement<I>) -> Result<Self, IdealError> {
        ideal_from_generators(x.order().maximal_order(), std::slice::from_ref(x))
    }

    pub fn order(&self) -> QuadraticOrder {
        self.order
    }

    pub fn lattice(&self) -> &Lattice<I> {
        &self.lattice
    }

    pub fn a(&self) -> &I {
        self.lattice.a()
    }

    pub fn b(&self) -> &I {
        self.lattice.b()
    }

    pub fn c(&self) -> &I {
        self.lattice.c()
    }

    pub fn norm(&self) -> I {
        self.lattice.index()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn contains(&self, x: &OrderElement<I>) -> bool {
        self.lattice.contains(&x.maximal_coords())
    }

    /// `self ⊇ other`, i.e. `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "ideals of different orders");
        let mut gens = Vec::with_capacity(4);
        for u in self.lattice.basis() {
            for v in other.lattice.basis() {
                gens.push(mul_coords(self.order, &u, &v));
            }
        }
        let lattice = Lattice::from_vectors(&gens).expect("product of nonzero ideals is full rank");
        IntegralIdeal { order: self.order, lattice }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::unit(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self + other`, the gcd of the two ideals.
    pub fn sum(&self, other: &Self) -> Self {
        IntegralIdeal { order: self.order, lattice: self.lattice.sum(&other.lattice) }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        IntegralIdeal { order: self.order, lattice: self.lattice.intersect(&other.lattice) }
    }

    pub fn is_comaximal(&self, other: &Self) -> bool {
        self.sum(other).is_unit()
    }

    pub fn conj(&self) -> Self {
        let gens: Vec<(I, I)> = self
            .lattice
            .basis()
            .iter()
            .map(|(x, y)| (x.clone() + self.order.t::<I>() * y.clone(), -y.clone()))
            .collect();
        let lattice = Lattice::from_vectors(&gens).expect("conjugate is full rank");
        IntegralIdeal { order: self.order, lattice }
    }

    /// Reduced form attached to the ideal class.
    ///
    /// The primitive part `A·Z + (B + ω)·Z` maps to `(A, 2B + t, N(B + ω)/A)`.
    pub fn class_form(&self) -> BinaryForm<I> {
        let c = self.c().clone();
        let a = self.a().clone() / c.clone();
        let b = self.b().clone() / c;
        let t: I = self.order.t();
        let n: I = self.order.n();
        let two = int::<I>(2);
        let norm_b = b.clone() * b.clone() + t.clone() * b.clone() + n;
        BinaryForm::new(a.clone(), two * b + t, norm_b / a).reduce()
    }

    /// True iff the class of the ideal is trivial, decided via forms.
    pub fn is_principal_class(&self) -> bool {
        self.class_form() == BinaryForm::identity(&int::<I>(self.order.d_k()))
    }

    pub fn repr(&self) -> LatticeRepr {
        self.lattice.repr()
    }

    fn sort_key(&self) -> (I, I, I, I) {
        (self.norm(), self.a().clone(), self.b().clone(), self.c().clone())
    }
}

impl<I: Scalar> PartialOrd for IntegralIdeal<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: Scalar> Ord for IntegralIdeal<I> {
    /// By `(norm, a, b, c)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key()).then_with(|| self.order.cmp(&other.order))
    }
}

impl<I: Scalar> fmt::Display for IntegralIdeal<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lattice)
    }
}

pub(crate) fn mul_coords<I: Scalar>(order: QuadraticOrder, u: &(I, I), v: &(I, I)) -> (I, I) {
    let t: I = order.t();
    let n: I = order.n();
    let yy = u.1.clone() * v.1.clone();
    (
        u.0.clone() * v.0.clone() - n * yy.clone(),
        u.0.clone() * v.1.clone() + v.0.clone() * u.1.clone() + t * yy,
    )
}

/// HNF of the ideal generated by `gens` in the maximal order.
pub fn ideal_from_generators<I: Scalar>(
    order: QuadraticOrder,
    gens: &[OrderElement<I>],
) -> Result<IntegralIdeal<I>, IdealError> {
    if !order.is_maximal() {
        return Err(IdealError::NotMaximal(order));
    }
    let mut vs = Vec::with_capacity(2 * gens.len());
    for g in gens {
        if !g.order().same_field(&order) {
            return Err(IdealError::OrderMismatch { expected: order, found: g.order() });
        }
        let v = g.maximal_coords();
        vs.push(times_omega(order, &v));
        vs.push(v);
    }
    let lattice = Lattice::from_vectors(&vs).ok_or(IdealError::ZeroGenerators)?;
    Ok(IntegralIdeal { order, lattice })
}

pub fn ideal_mul<I: Scalar>(i: &IntegralIdeal<I>, j: &IntegralIdeal<I>) -> IntegralIdeal<I> {
    i.mul(j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// The primes of `O_K` above the rational prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSplitting<I> {
    pub p: u64,
    pub kind: SplittingType,
    pub primes: Vec<IntegralIdeal<I>>,
}

/// Splits `p` by factoring `x² − t·x + n` modulo `p`.
pub fn primes_above<I: Scalar>(order: QuadraticOrder, p: u64) -> PrimeSplitting<I> {
    assert!(order.is_maximal());
    let pp = p as i128;
    let t = order.omega_trace() as i128;
    let n = (order.omega_norm() as i128).rem_euclid(pp);
    let roots: Vec<u64> = (0..p)
        .filter(|&r| {
            let r = r as i128;
            (r * r - t * r + n).rem_euclid(pp) == 0
        })
        .collect();
    let mk = |b: u64, c: u64| {
        IntegralIdeal::from_hnf(order, uint::<I>(p), uint::<I>(b), uint::<I>(c))
            .expect("prime ideal HNF is an ideal")
    };
    let root_ideal = |r: u64| mk((p - r) % p, 1);
    match roots.as_slice() {
        [] => PrimeSplitting { p, kind: SplittingType::Inert, primes: vec![mk(0, p)] },
        [r] => PrimeSplitting { p, kind: SplittingType::Ramified, primes: vec![root_ideal(*r)] },
        _ => {
            let mut primes: Vec<_> = roots.iter().map(|&r| root_ideal(r)).collect();
            primes.sort();
            PrimeSplitting { p, kind: SplittingType::Split, primes }
        }
    }
}

/// Prime ideal factorization, sorted by `(norm, a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization<I> {
    pub factors: Vec<(IntegralIdeal<I>, u32)>,
}

impl<I: Scalar> PrimeFactorization<I> {
    pub fn product(&self, order: QuadraticOrder) -> IntegralIdeal<I> {
        self.factors
            .iter()
            .fold(IntegralIdeal::unit(order), |acc, (p, e)| acc.mul(&p.pow(*e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn total_exponent(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

/// An ideal is prime iff its norm is `p` or `p²` and it occurs among the
/// primes above `p` produced by [`primes_above`].
pub fn is_prime_ideal<I: Scalar>(ideal: &IntegralIdeal<I>) -> bool {
    let norm = to_u64(&ideal.norm());
    let p = match factor_u64(norm).as_slice() {
        [(p, 1)] | [(p, 2)] => *p,
        _ => return false,
    };
    primes_above::<I>(ideal.order(), p).primes.contains(ideal)
}

pub fn factor_ideal<I: Scalar>(ideal: &IntegralIdeal<I>) -> PrimeFactorization<I> {
    let mut factors = Vec::new();
    for (p, _) in factor_u64(to_u64(&ideal.norm())) {
        for prime in primes_above::<I>(ideal.order(), p).primes {
            let mut e = 0;
            let mut power = prime.clone();
            while power.divides(ideal) {
                e += 1;
                power = power.mul(&prime);
            }
            if e > 0 {
                factors.push((prime, e));
            }
        }
    }
    factors.sort();
    PrimeFactorization { factors }
}

/// A generator of `ideal` (canonical associate), or `None` if nonprincipal.
pub fn is_principal<I: Scalar>(ideal: &IntegralIdeal<I>) -> Option<OrderElement<I>> {
    elements_of_norm(ideal.order(), &ideal.norm())
        .into_iter()
        .find(|x| IntegralIdeal::principal(x).as_ref() == Ok(ideal))
        .map(|x| x.canonical())
}

/// All ideals of norm exactly `n`, sorted.
pub fn ideals_of_norm<I: Scalar>(order: QuadraticOrder, n: u64) -> Vec<IntegralIdeal<I>> {
    let mut out = Vec::new();
    for c in divisors_u64(n) {
        if n % (c * c) != 0 {
            continue;
        }
        let a = n / c;
        let mut b = 0;
        while b < a {
            if let Ok(ideal) = IntegralIdeal::from_hnf(order, uint(a), uint(b), uint(c)) {
                out.push(ideal);
            }
            b += c;
        }
    }
    out.sort();
    out
}

pub fn ideals_up_to<I: Scalar>(order: QuadraticOrder, bound: u64) -> Vec<IntegralIdeal<I>> {
    (1..=bound).flat_map(|n| ideals_of_norm(order, n)).collect()
}

/// Class number of `O_K` counted from ideals of norm at most `√(|d_K|/3)`,
/// grouping `I ~ J` when `I·J̄` is principal.
pub fn class_number_by_ideals(order: QuadraticOrder) -> u64 {
    assert!(order.is_maximal());
    let bound = ((order.d_k().unsigned_abs() as f64 / 3.0).sqrt().floor() as u64).max(1);
    let mut reps: Vec<IntegralIdeal<num_bigint::BigInt>> = Vec::new();
    for ideal in ideals_up_to(order, bound) {
        let new = reps.iter().all(|r| is_principal(&ideal.mul(&r.conj())).is_none());
        if new {
            reps.push(ideal);
        }
    }
    reps.len() as u64
}

/// Multiplicities of the prime factors grouped by rational prime.
pub fn exponents_by_prime<I: Scalar>(fact: &PrimeFactorization<I>) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    for (p, e) in &fact.factors {
        let norm = to_u64(&p.norm());
        let q = factor_u64(norm)[0].0;
        *out.entry(q).or_insert(0) += e;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::class_group;
    use crate::order::make_order;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Id = IntegralIdeal<BigInt>;

    fn el(o: QuadraticOrder, a: i64, b: i64) -> OrderElement<BigInt> {
        OrderElement::from_i64(o, a, b)
    }

    fn hnf(o: QuadraticOrder, a: i64, b: i64, c: i64) -> Id {
        IntegralIdeal::from_hnf(o, a.into(), b.into(), c.into()).unwrap()
    }

    #[test]
    fn from_generators_examples() {
        let gi = make_order(-1, 1).unwrap();
        assert_eq!(ideal_from_generators(gi, &[el(gi, 2, 0)]).unwrap(), hnf(gi, 2, 0, 2));
        assert_eq!(ideal_from_generators(gi, &[el(gi, 1, 1)]).unwrap().norm(), BigInt::from(2));
        let m5 = make_order(-5, 1).unwrap();
        let p2 = ideal_from_generators(m5, &[el(m5, 2, 0), el(m5, 1, 1)]).unwrap();
        assert_eq!(p2.norm(), BigInt::from(2));
        assert!(ideal_from_generators(m5, &[el(m5, 0, 0)]).is_err());
        assert_eq!(
            ideal_from_generators(make_order(-5, 2).unwrap(), &[el(m5, 1, 0)]),
            Err(IdealError::NotMaximal(make_order(-5, 2).unwrap()))
        );
        assert!(IntegralIdeal::<BigInt>::from_hnf(m5, 3.into(), 0.into(), 1.into()).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let m5 = make_order(-5, 1).unwrap();
        let p2 = hnf(m5, 2, 1, 1);
        assert_eq!(p2.mul(&Id::unit(m5)), p2);
        assert_eq!(p2.mul(&p2.conj()), hnf(m5, 2, 0, 2));
        assert_eq!(p2.conj(), p2);
    }

    #[test]
    fn factorization_examples() {
        let gi = make_order(-1, 1).unwrap();
        let six = Id::principal(&el(gi, 6, 0)).unwrap();
        let f = factor_ideal(&six);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.factors[0], (Id::principal(&el(gi, 1, 1)).unwrap(), 2));
        assert_eq!(f.factors[1], (hnf(gi, 3, 0, 3), 1));

        let e3 = make_order(-3, 1).unwrap();
        let f = factor_ideal(&Id::principal(&el(e3, 2, 0)).unwrap());
        assert_eq!(f.factors, vec![(hnf(e3, 2, 0, 2), 1)]);
        assert_eq!(primes_above::<BigInt>(e3, 2).kind, SplittingType::Inert);

        let m5 = make_order(-5, 1).unwrap();
        let f = factor_ideal(&Id::principal(&el(m5, 6, 0)).unwrap());
        let shape: Vec<(BigInt, u32)> = f.factors.iter().map(|(p, e)| (p.norm(), *e)).collect();
        assert_eq!(shape, vec![(2.into(), 2), (3.into(), 1), (3.into(), 1)]);
        assert_eq!(primes_above::<BigInt>(m5, 3).kind, SplittingType::Split);
        assert!(f.factors.iter().all(|(p, _)| is_prime_ideal(p)));
    }

    #[test]
    fn principality_examples() {
        let gi = make_order(-1, 1).unwrap();
        let i = Id::principal(&el(gi, 1, 1)).unwrap();
        let g = is_principal(&i).unwrap();
        assert!(g.is_associate(&el(gi, 1, 1)));
        let m5 = make_order(-5, 1).unwrap();
        let p2 = hnf(m5, 2, 1, 1);
        assert_eq!(is_principal(&p2), None);
        assert!(!p2.is_principal_class());
        let g = is_principal(&p2.mul(&p2)).unwrap();
        assert!(g.is_associate(&el(m5, 2, 0)));
    }

    #[test]
    fn minkowski_class_count_matches_forms() {
        for d in [-1i64, -2, -3, -5, -6, -7, -11, -13, -14, -15, -17, -21, -23, -26, -30] {
            let o = make_order(d, 1).unwrap();
            assert_eq!(class_number_by_ideals(o), class_group(o).h, "d = {d}");
        }
    }

    #[test]
    fn principal_search_agrees_with_form_class() {
        for d in [-5i64, -14, -21, -23] {
            let o = make_order(d, 1).unwrap();
            for ideal in ideals_up_to::<BigInt>(o, 60) {
                assert_eq!(is_principal(&ideal).is_some(), ideal.is_principal_class(), "{ideal}");
            }
        }
    }

    fn field() -> impl Strategy<Value = QuadraticOrder> {
        prop::sample::select(vec![-1i64, -2, -3, -5, -7, -14, -15, -23]).prop_map(|d| make_order(d, 1).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn factor_roundtrip(o in field(), n in 1u64..10_000, pick in 0usize..1000) {
            let ideals = ideals_of_norm::<BigInt>(o, n);
            prop_assume!(!ideals.is_empty());
            let ideal = &ideals[pick % ideals.len()];
            let f = factor_ideal(ideal);
            prop_assert_eq!(&f.product(o), ideal);
            prop_assert!(f.factors.iter().all(|(p, _)| is_prime_ideal(p)));
        }

        #[test]
        fn norm_multiplicative(o in field(), a in -30i64..30, b in -30i64..30, c in -30i64..30, e in -30i64..30, g in -30i64..30) {
            let x = el(o, a, b);
            let y = el(o, c, e);
            prop_assume!(!x.is_zero() && !y.is_zero());
            let i = ideal_from_generators(o, &[x.clone(), el(o, g, 1)]).unwrap();
            let j = Id::principal(&y).unwrap();
            prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
            prop_assert_eq!(Id::principal(&x).unwrap().norm(), x.norm());
        }

        #[test]
        fn hnf_invariant_under_reordering_and_units(o in field(), a in -20i64..20, b in -20i64..20, c in -20i64..20, e in -20i64..20, k in 0usize..6) {
            let x = el(o, a, b);
            let y = el(o, c, e);
            prop_assume!(!x.is_zero() || !y.is_zero());
            let us = crate::element::units::<BigInt>(o);
            let u = &us[k % us.len()];
            let i1 = ideal_from_generators(o, &[x.clone(), y.clone()]).unwrap();
            let i2 = ideal_from_generators(o, &[y.clone(), x.clone()]).unwrap();
            let i3 = ideal_from_generators(o, &[u * &x, y.clone()]).unwrap();
            prop_assert_eq!(&i1, &i2);
            prop_assert_eq!(&i1, &i3);
        }

        #[test]
        fn principal_generator_has_ideal_norm(o in field(), n in 1u64..300) {
            for ideal in ideals_of_norm::<BigInt>(o, n) {
                if let Some(g) = is_principal(&ideal) {
                    prop_assert_eq!(g.norm(), ideal.norm());
                }
            }
        }
    }
}
