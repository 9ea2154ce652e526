//! Factorization into irreducibles, length sets, elasticity, half-factorial
//! certification and the boundary map.
//!
//! Length sets are computed by exhaustive descent over norm divisors: `π`
//! can only divide `x` when `N(π) | N(x)`, and the descent
//! `L(x) = ⋃ { 1 + L(x/π) : π irreducible, π | x }` terminates because norms
//! strictly decrease. Results are memoized by canonical associate inside a
//! [`FactorLab`]; a lab is meant to be owned by one worker.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::element::{divide_exact, elements_of_norm, elements_up_to, ElementRepr, KElement, OrderElement};
use crate::forms::{class_group, BinaryForm};
use crate::ideal::{is_principal, primes_above, IntegralIdeal, SplittingType};
use crate::order::QuadraticOrder;
use crate::scalar::{divisors_u64, int, is_prime_u64, to_u64, uint, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("zero has no factorization")]
    Zero,
    #[error("units have no factorization into irreducibles")]
    Unit,
    #[error("norm {norm} exceeds the search budget {budget}")]
    BudgetExceeded { norm: u64, budget: u64 },
    #[error("bound must be at least 2, got {0}")]
    BoundTooSmall(u64),
    #[error("element of {found} passed to a lab for {expected}")]
    OrderMismatch { expected: QuadraticOrder, found: QuadraticOrder },
}

/// All factorizations of an element into canonical-associate irreducibles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationSet<I> {
    pub element: OrderElement<I>,
    /// Each factorization is a sorted multiset.
    pub factorizations: BTreeSet<Vec<OrderElement<I>>>,
    /// The length set `L(x)`, ascending.
    pub lengths: Vec<u32>,
}

/// An element together with two factorizations of different lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthWitness<I> {
    pub element: OrderElement<I>,
    pub short: Vec<OrderElement<I>>,
    pub long: Vec<OrderElement<I>>,
}

impl<I: Scalar> LengthWitness<I> {
    /// Re-checks the witness from scratch: both products are associates of
    /// the element, every factor is irreducible, and the lengths differ.
    pub fn replay(&self) -> bool {
        let order = self.element.order();
        let check = |fs: &[OrderElement<I>]| {
            if fs.iter().any(|x| x.order() != order || x.is_zero()) {
                return false;
            }
            let prod = fs.iter().fold(OrderElement::one(order), |acc, x| &acc * x);
            prod.is_associate(&self.element) && fs.iter().all(|x| is_irreducible(order, x))
        };
        self.short.len() != self.long.len() && check(&self.short) && check(&self.long)
    }

    pub fn repr(&self) -> LengthWitnessRepr {
        LengthWitnessRepr {
            element: self.element.repr(),
            short: self.short.iter().map(OrderElement::repr).collect(),
            long: self.long.iter().map(OrderElement::repr).collect(),
            lengths: [self.short.len() as u32, self.long.len() as u32],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthWitnessRepr {
    pub element: ElementRepr,
    pub short: Vec<ElementRepr>,
    pub long: Vec<ElementRepr>,
    pub lengths: [u32; 2],
}

impl LengthWitnessRepr {
    pub fn parse<I: Scalar + std::str::FromStr>(&self) -> Option<LengthWitness<I>> {
        let all = |v: &[ElementRepr]| v.iter().map(ElementRepr::parse).collect::<Option<Vec<_>>>();
        Some(LengthWitness { element: self.element.parse()?, short: all(&self.short)?, long: all(&self.long)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HfdVerdict {
    CertifiedHfd,
    HfdUpToBound,
    NotHfd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    Carlitz,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfdCertificate<I> {
    pub order: QuadraticOrder,
    pub verdict: HfdVerdict,
    pub bound: u64,
    pub witness: Option<LengthWitness<I>>,
    pub method: CertMethod,
    /// Class number, when the Carlitz route was taken.
    pub class_number: Option<u64>,
}

impl<I: Scalar> HfdCertificate<I> {
    pub fn is_hfd(&self) -> bool {
        self.verdict != HfdVerdict::NotHfd
    }

    /// Whether lengths of elements of norm `norm` are known to be unique.
    pub fn covers(&self, norm: u64) -> bool {
        match self.verdict {
            HfdVerdict::CertifiedHfd => true,
            HfdVerdict::HfdUpToBound => norm <= self.bound,
            HfdVerdict::NotHfd => false,
        }
    }

    pub fn repr(&self) -> CertificateRepr {
        CertificateRepr {
            order: self.order,
            verdict: self.verdict,
            bound: self.bound,
            method: self.method,
            class_number: self.class_number,
            witness: self.witness.as_ref().map(LengthWitness::repr),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRepr {
    pub order: QuadraticOrder,
    pub verdict: HfdVerdict,
    pub bound: u64,
    pub method: CertMethod,
    pub class_number: Option<u64>,
    pub witness: Option<LengthWitnessRepr>,
}

/// Truncated elasticity `max L(x) / min L(x)` over nonunits of norm `<= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elasticity<I> {
    pub bound: u64,
    pub value: Ratio<u64>,
    pub witness: Option<LengthWitness<I>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryValue(pub i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("UNCERTIFIED_DOMAIN: {order} has no half-factorial certificate covering norm {norm}")]
    UncertifiedDomain { order: QuadraticOrder, norm: u64 },
    #[error("AMBIGUOUS_LENGTH: {element} has lengths {lengths:?}")]
    AmbiguousLength { element: String, lengths: Vec<u32> },
    #[error("certificate is for {certificate}, lab is for {lab}")]
    CertificateMismatch { certificate: QuadraticOrder, lab: QuadraticOrder },
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Irreducibility by definition: a nonunit with no divisor of intermediate norm.
pub fn is_irreducible<I: Scalar>(order: QuadraticOrder, x: &OrderElement<I>) -> bool {
    assert!(!x.is_zero(), "irreducibility of zero is undefined");
    let n = x.norm();
    if n.is_one() {
        return false;
    }
    let n = to_u64(&n);
    divisors_u64(n)
        .into_iter()
        .filter(|&m| m > 1 && m < n)
        .all(|m| {
            elements_of_norm(order, &uint::<I>(m))
                .iter()
                .all(|y| divide_exact(x, y).is_none())
        })
}

pub struct FactorLab<I: Scalar> {
    order: QuadraticOrder,
    budget: u64,
    irreducibles: RefCell<HashMap<u64, Rc<Vec<OrderElement<I>>>>>,
    lengths: RefCell<HashMap<OrderElement<I>, Rc<Vec<u32>>>>,
}

impl<I: Scalar> FactorLab<I> {
    pub fn new(order: QuadraticOrder, budget: u64) -> Self {
        FactorLab {
            order,
            budget,
            irreducibles: RefCell::new(HashMap::new()),
            lengths: RefCell::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> QuadraticOrder {
        self.order
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Raises the search budget; caches stay valid.
    pub fn raise_budget(&mut self, budget: u64) {
        self.budget = self.budget.max(budget);
    }

    fn check(&self, x: &OrderElement<I>) -> Result<u64, FactorError> {
        if x.order() != self.order {
            return Err(FactorError::OrderMismatch { expected: self.order, found: x.order() });
        }
        if x.is_zero() {
            return Err(FactorError::Zero);
        }
        let n = to_u64(&x.norm());
        if n > self.budget {
            return Err(FactorError::BudgetExceeded { norm: n, budget: self.budget });
        }
        Ok(n)
    }

    /// Canonical irreducibles of norm exactly `n`, sorted by coordinates.
    pub fn irreducibles_of_norm(&self, n: u64) -> Rc<Vec<OrderElement<I>>> {
        if let Some(hit) = self.irreducibles.borrow().get(&n) {
            return hit.clone();
        }
        let proper: Vec<u64> = divisors_u64(n).into_iter().filter(|&m| m > 1 && m < n).collect();
        let mut found: Vec<OrderElement<I>> = Vec::new();
        if n > 1 {
            let mut cands: Vec<_> = elements_of_norm(self.order, &uint::<I>(n))
                .into_iter()
                .map(|x| x.canonical())
                .collect();
            cands.sort();
            cands.dedup();
            for x in cands {
                let reducible = proper.iter().any(|&m| {
                    self.irreducibles_of_norm(m).iter().any(|p| divide_exact(&x, p).is_some())
                });
                if !reducible {
                    found.push(x);
                }
            }
        }
        let found = Rc::new(found);
        self.irreducibles.borrow_mut().insert(n, found.clone());
        found
    }

    pub fn is_irreducible(&self, x: &OrderElement<I>) -> bool {
        let n = to_u64(&x.norm());
        self.irreducibles_of_norm(n).binary_search(&x.canonical()).is_ok()
    }

    /// Canonical irreducible divisors `π` of `x` with their cofactors.
    fn irreducible_divisors(&self, x: &OrderElement<I>, n: u64) -> Vec<(OrderElement<I>, OrderElement<I>)> {
        let mut out = Vec::new();
        for m in divisors_u64(n).into_iter().filter(|&m| m > 1) {
            for p in self.irreducibles_of_norm(m).iter() {
                if let Some(q) = divide_exact(x, p) {
                    out.push((p.clone(), q));
                }
            }
        }
        out
    }

    /// The length set `L(x)`; `[0]` for units.
    pub fn length_set(&self, x: &OrderElement<I>) -> Result<Rc<Vec<u32>>, FactorError> {
        let n = self.check(x)?;
        if n == 1 {
            return Ok(Rc::new(vec![0]));
        }
        let key = x.canonical();
        if let Some(hit) = self.lengths.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let mut set = BTreeSet::new();
        for (_, q) in self.irreducible_divisors(&key, n) {
            for l in self.length_set(&q)?.iter() {
                set.insert(l + 1);
            }
        }
        let lengths = Rc::new(set.into_iter().collect::<Vec<_>>());
        self.lengths.borrow_mut().insert(key, lengths.clone());
        Ok(lengths)
    }

    /// Every factorization of a nonzero nonunit.
    pub fn factorizations(&self, x: &OrderElement<I>) -> Result<FactorizationSet<I>, FactorError> {
        let n = self.check(x)?;
        if n == 1 {
            return Err(FactorError::Unit);
        }
        let mut memo = HashMap::new();
        let factorizations = self.factorizations_rec(x, n, &mut memo).as_ref().clone();
        let lengths: BTreeSet<u32> = factorizations.iter().map(|f| f.len() as u32).collect();
        Ok(FactorizationSet { element: x.clone(), factorizations, lengths: lengths.into_iter().collect() })
    }

    fn factorizations_rec(
        &self,
        x: &OrderElement<I>,
        n: u64,
        memo: &mut HashMap<OrderElement<I>, Rc<BTreeSet<Vec<OrderElement<I>>>>>,
    ) -> Rc<BTreeSet<Vec<OrderElement<I>>>> {
        if n == 1 {
            return Rc::new(BTreeSet::from([Vec::new()]));
        }
        let key = x.canonical();
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let mut out = BTreeSet::new();
        for (p, q) in self.irreducible_divisors(&key, n) {
            let m = to_u64(&p.norm());
            for rest in self.factorizations_rec(&q, n / m, memo).iter() {
                let mut f = rest.clone();
                f.push(p.clone());
                f.sort();
                out.insert(f);
            }
        }
        let out = Rc::new(out);
        memo.insert(key, out.clone());
        out
    }

    pub fn irreducibles_up_to(&self, bound: u64) -> Result<Vec<OrderElement<I>>, FactorError> {
        if bound < 2 {
            return Err(FactorError::BoundTooSmall(bound));
        }
        Ok((2..=bound).flat_map(|n| self.irreducibles_of_norm(n).as_ref().clone()).collect())
    }

    /// Canonical nonunits with `2 <= N(x) <= bound`, sorted by (norm, coordinates).
    pub fn nonunits_up_to(&self, bound: u64) -> Vec<OrderElement<I>> {
        let mut seen = std::collections::HashSet::new();
        elements_up_to(self.order, &uint::<I>(bound))
            .into_iter()
            .filter(|x| !x.is_unit())
            .map(|x| x.canonical())
            .filter(|x| seen.insert(x.clone()))
            .collect()
    }

    fn extremal_witness(&self, x: &OrderElement<I>) -> Result<LengthWitness<I>, FactorError> {
        let set = self.factorizations(x)?;
        let short = set.factorizations.iter().min_by_key(|f| f.len()).cloned().unwrap_or_default();
        let long = set.factorizations.iter().max_by_key(|f| f.len()).cloned().unwrap_or_default();
        Ok(LengthWitness { element: x.clone(), short, long })
    }

    pub fn elasticity_up_to(&self, bound: u64) -> Result<Elasticity<I>, FactorError> {
        if bound < 2 {
            return Err(FactorError::BoundTooSmall(bound));
        }
        let mut best: Option<(Ratio<u64>, OrderElement<I>)> = None;
        for x in self.nonunits_up_to(bound) {
            let ls = self.length_set(&x)?;
            let rho = Ratio::new(*ls.last().unwrap() as u64, ls[0] as u64);
            if best.as_ref().is_none_or(|(b, _)| rho > *b) {
                best = Some((rho, x));
            }
        }
        match best {
            Some((value, x)) if value > Ratio::one() => Ok(Elasticity {
                bound,
                value,
                witness: Some(self.extremal_witness(&x)?),
            }),
            _ => Ok(Elasticity { bound, value: Ratio::one(), witness: None }),
        }
    }

    /// Carlitz route for maximal orders, exhaustive length check otherwise.
    pub fn hfd_certify(&self, bound: u64) -> Result<HfdCertificate<I>, FactorError> {
        if bound < 2 {
            return Err(FactorError::BoundTooSmall(bound));
        }
        if self.order.is_maximal() {
            let h = class_group(self.order).h;
            let (verdict, witness) = if h <= 2 {
                (HfdVerdict::CertifiedHfd, None)
            } else {
                (HfdVerdict::NotHfd, Some(carlitz_witness(self.order)))
            };
            return Ok(HfdCertificate {
                order: self.order,
                verdict,
                bound,
                witness,
                method: CertMethod::Carlitz,
                class_number: Some(h),
            });
        }
        for x in self.nonunits_up_to(bound) {
            if self.length_set(&x)?.len() > 1 {
                return Ok(HfdCertificate {
                    order: self.order,
                    verdict: HfdVerdict::NotHfd,
                    bound,
                    witness: Some(self.extremal_witness(&x)?),
                    method: CertMethod::Exhaustive,
                    class_number: None,
                });
            }
        }
        Ok(HfdCertificate {
            order: self.order,
            verdict: HfdVerdict::HfdUpToBound,
            bound,
            witness: None,
            method: CertMethod::Exhaustive,
            class_number: None,
        })
    }

    /// The unique factorization length of `x`, provided the certificate covers it.
    pub fn certified_length(&self, cert: &HfdCertificate<I>, x: &OrderElement<I>) -> Result<u32, BoundaryError> {
        let n = to_u64(&x.norm());
        if !cert.covers(n) {
            return Err(BoundaryError::UncertifiedDomain { order: self.order, norm: n });
        }
        let ls = self.length_set(x)?;
        match ls.as_slice() {
            [l] => Ok(*l),
            _ => Err(BoundaryError::AmbiguousLength { element: x.to_string(), lengths: ls.to_vec() }),
        }
    }

    /// `∂_R(x) = len(a) − len(b)` for `x = a/b` with `a, b ∈ R`.
    ///
    /// With `x = num/den` and `num = α + c·ω`, the smallest `m` putting
    /// `m·num` into `R = Z + f·O_K` is `f / gcd(f, c)`; then `a = m·num`
    /// and `b = m·den`.
    pub fn boundary(&self, cert: &HfdCertificate<I>, x: &KElement<I>) -> Result<BoundaryValue, BoundaryError> {
        if cert.order != self.order {
            return Err(BoundaryError::CertificateMismatch { certificate: cert.order, lab: self.order });
        }
        let f: I = int(self.order.f());
        let (_, c) = x.num().maximal_coords();
        let m = f.clone() / f.gcd(&c);
        let top = x
            .num()
            .scale(&m)
            .rebase(self.order)
            .expect("m·num lies in R by choice of m");
        let bottom = OrderElement::integer(self.order, m * x.den().clone());
        let la = self.certified_length(cert, &top)?;
        let lb = self.certified_length(cert, &bottom)?;
        Ok(BoundaryValue(la as i64 - lb as i64))
    }
}

/// Constructs two factorizations of different lengths in a maximal order
/// with class number above two.
///
/// With a prime `P` of class order `k > 2`, `p^k = α·ᾱ` where `(α) = P^k`
/// gives lengths `k` and `2`. When every class has order at most two, three
/// primes `P, Q, S` with `[S] = [PQ]` give `w² = x·y·z` for generators of
/// `PQS, P², Q², S²`.
pub fn carlitz_witness<I: Scalar>(order: QuadraticOrder) -> LengthWitness<I> {
    assert!(order.is_maximal());
    let info = class_group(order);
    assert!(info.h > 2, "Carlitz witness requires class number above two");
    let elementary = info.invariants.iter().all(|&e| e == 2);
    let mut by_class: Vec<(BinaryForm<I>, IntegralIdeal<I>)> = Vec::new();
    let generator = |ideal: &IntegralIdeal<I>| is_principal(ideal).expect("ideal is principal by class arithmetic");
    let mut p = 2u64;
    loop {
        assert!(p < 10_000_000, "no suitable prime ideals found");
        if !is_prime_u64(p) {
            p += 1;
            continue;
        }
        let splitting = primes_above::<I>(order, p);
        if splitting.kind != SplittingType::Inert {
            for prime in splitting.primes {
                let form = prime.class_form();
                if form == BinaryForm::identity(&int(order.d_k())) {
                    continue;
                }
                if !elementary {
                    let k = form.class_order();
                    if k > 2 {
                        let alpha = generator(&prime.pow(k as u32));
                        let rational = OrderElement::integer(order, uint::<I>(p));
                        let element = rational.pow(k as u32);
                        let witness = LengthWitness {
                            element,
                            short: sorted(vec![alpha.conj().canonical(), alpha]),
                            long: vec![rational; k as usize],
                        };
                        debug_assert!(witness.replay());
                        return witness;
                    }
                    continue;
                }
                if by_class.iter().all(|(f, _)| *f != form) {
                    by_class.push((form, prime));
                }
                for (i, (_, pi)) in by_class.iter().enumerate() {
                    for (_, qi) in by_class.iter().skip(i + 1) {
                        let pq = pi.mul(qi);
                        let target = pq.class_form();
                        if let Some((_, si)) = by_class.iter().find(|(f, _)| *f == target) {
                            let w = generator(&pq.mul(si));
                            let x = generator(&pi.pow(2));
                            let y = generator(&qi.pow(2));
                            let z = generator(&si.pow(2));
                            let witness = LengthWitness {
                                element: w.pow(2),
                                short: vec![w.clone(), w],
                                long: sorted(vec![x, y, z]),
                            };
                            debug_assert!(witness.replay());
                            return witness;
                        }
                    }
                }
            }
        }
        p += 1;
    }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

pub fn factorizations<I: Scalar>(order: QuadraticOrder, x: &OrderElement<I>) -> Result<FactorizationSet<I>, FactorError> {
    let budget = if x.is_zero() { 0 } else { to_u64(&x.norm()) };
    FactorLab::new(order, budget).factorizations(x)
}

pub fn irreducibles_up_to<I: Scalar>(order: QuadraticOrder, bound: u64) -> Result<Vec<OrderElement<I>>, FactorError> {
    FactorLab::new(order, bound).irreducibles_up_to(bound)
}

pub fn elasticity_up_to<I: Scalar>(order: QuadraticOrder, bound: u64) -> Result<Elasticity<I>, FactorError> {
    FactorLab::new(order, bound).elasticity_up_to(bound)
}

pub fn hfd_certify<I: Scalar>(order: QuadraticOrder, bound: u64) -> Result<HfdCertificate<I>, FactorError> {
    FactorLab::new(order, bound).hfd_certify(bound)
}

/// `∂_R(x)` for the order of `cert`, refusing norms the certificate does not cover.
pub fn boundary<I: Scalar>(cert: &HfdCertificate<I>, x: &KElement<I>) -> Result<BoundaryValue, BoundaryError> {
    FactorLab::new(cert.order, u64::MAX).boundary(cert, x)
}

/// Product of a factorization.
pub fn product<I: Scalar>(order: QuadraticOrder, factors: &[OrderElement<I>]) -> OrderElement<I> {
    factors.iter().fold(OrderElement::one(order), |acc, x| &acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::make_order;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type E = OrderElement<BigInt>;

    thread_local! {
        static EISENSTEIN_SUBORDER: (FactorLab<BigInt>, HfdCertificate<BigInt>) = {
            let lab = FactorLab::new(make_order(-3, 2).unwrap(), 10_000);
            let cert = lab.hfd_certify(10_000).unwrap();
            (lab, cert)
        };
    }

    fn el(o: QuadraticOrder, a: i64, b: i64) -> E {
        OrderElement::from_i64(o, a, b)
    }

    fn canon(v: Vec<E>) -> Vec<E> {
        let mut v: Vec<E> = v.into_iter().map(|x| x.canonical()).collect();
        v.sort();
        v
    }

    #[test]
    fn irreducibility_examples() {
        let m5 = make_order(-5, 1).unwrap();
        assert!(is_irreducible(m5, &el(m5, 2, 0)));
        assert!(!is_irreducible(m5, &el(m5, 6, 0)));
        assert!(!is_irreducible(m5, &el(m5, 1, 0)));
        let r = make_order(-3, 2).unwrap();
        // 1+√−3 = τ
        assert!(is_irreducible(r, &el(r, 0, 1)));
        let lab = FactorLab::<BigInt>::new(r, 100);
        assert!(lab.is_irreducible(&el(r, 0, 1)));
        assert!(lab.is_irreducible(&el(r, 2, 0)));
    }

    #[test]
    fn factorization_examples() {
        let m5 = make_order(-5, 1).unwrap();
        let set = factorizations(m5, &el(m5, 6, 0)).unwrap();
        let expect: BTreeSet<Vec<E>> =
            [canon(vec![el(m5, 2, 0), el(m5, 3, 0)]), canon(vec![el(m5, 1, 1), el(m5, 1, -1)])].into();
        assert_eq!(set.factorizations, expect);
        assert_eq!(set.lengths, vec![2]);

        let m14 = make_order(-14, 1).unwrap();
        let set = factorizations(m14, &el(m14, 81, 0)).unwrap();
        assert_eq!(set.lengths, vec![2, 4]);
        assert!(set.factorizations.contains(&vec![el(m14, 3, 0); 4]));
        assert!(set.factorizations.contains(&canon(vec![el(m14, 5, 2), el(m14, 5, -2)])));

        let gi = make_order(-1, 1).unwrap();
        let set = factorizations(gi, &el(gi, 5, 0)).unwrap();
        assert_eq!(set.factorizations.len(), 1);
        assert_eq!(set.factorizations.first().unwrap(), &canon(vec![el(gi, 2, 1), el(gi, 2, -1)]));
        assert_eq!(set.lengths, vec![2]);

        assert_eq!(factorizations(gi, &el(gi, 0, 1)), Err(FactorError::Unit));
        assert_eq!(
            FactorLab::<BigInt>::new(gi, 10).factorizations(&el(gi, 5, 5)),
            Err(FactorError::BudgetExceeded { norm: 50, budget: 10 })
        );
    }

    #[test]
    fn irreducibles_up_to_examples() {
        let gi = make_order(-1, 1).unwrap();
        let irr = irreducibles_up_to::<BigInt>(gi, 5).unwrap();
        assert_eq!(irr, canon_sorted_by_norm(vec![el(gi, 1, 1), el(gi, 2, 1), el(gi, 2, -1)]));
        let m5 = make_order(-5, 1).unwrap();
        let irr = irreducibles_up_to::<BigInt>(m5, 9).unwrap();
        for x in [el(m5, 2, 0), el(m5, 3, 0), el(m5, 1, 1), el(m5, 1, -1)] {
            assert!(irr.contains(&x.canonical()), "{x}");
        }
        assert_eq!(irreducibles_up_to::<BigInt>(m5, 1), Err(FactorError::BoundTooSmall(1)));
    }

    fn canon_sorted_by_norm(v: Vec<E>) -> Vec<E> {
        let mut v = canon(v);
        v.sort_by(crate::element::by_norm);
        v
    }

    #[test]
    fn elasticity_examples() {
        let m14 = make_order(-14, 1).unwrap();
        // N(81) = 6561, so this is the first bound that reaches the witness
        let e = elasticity_up_to::<BigInt>(m14, 6561).unwrap();
        assert!(e.value >= Ratio::from_integer(2));
        assert!(elasticity_up_to::<BigInt>(m14, 6560).unwrap().value < Ratio::from_integer(2));
        let w = e.witness.unwrap();
        assert!(w.replay());
        let gi = make_order(-1, 1).unwrap();
        let e = elasticity_up_to::<BigInt>(gi, 100).unwrap();
        assert_eq!(e.value, Ratio::one());
        assert!(e.witness.is_none());
    }

    #[test]
    fn hfd_certificates() {
        let m5 = make_order(-5, 1).unwrap();
        let c = hfd_certify::<BigInt>(m5, 100).unwrap();
        assert_eq!(c.verdict, HfdVerdict::CertifiedHfd);
        assert_eq!(c.class_number, Some(2));

        let m14 = make_order(-14, 1).unwrap();
        let c = hfd_certify::<BigInt>(m14, 100).unwrap();
        assert_eq!(c.verdict, HfdVerdict::NotHfd);
        let w = c.witness.unwrap();
        assert!(w.replay());
        assert_eq!(w.element, el(m14, 81, 0));
        assert_eq!((w.short.len(), w.long.len()), (2, 4));

        let r = make_order(-3, 2).unwrap();
        let c = hfd_certify::<BigInt>(r, 2000).unwrap();
        assert_eq!(c.verdict, HfdVerdict::HfdUpToBound);
        assert!(c.covers(2000) && !c.covers(2001));
    }

    #[test]
    fn elementary_two_group_witness() {
        // Q(√−21): Cl ≅ (Z/2)²
        let o = make_order(-21, 1).unwrap();
        let w = carlitz_witness::<BigInt>(o);
        assert!(w.replay());
        assert_eq!((w.short.len(), w.long.len()), (2, 3));
        // Q(√−23): Cl ≅ Z/3
        let o = make_order(-23, 1).unwrap();
        let w = carlitz_witness::<BigInt>(o);
        assert!(w.replay());
        assert_eq!((w.short.len(), w.long.len()), (2, 3));
    }

    #[test]
    fn boundary_examples() {
        let r = make_order(-3, 2).unwrap();
        let d = r.maximal_order();
        let lab = FactorLab::<BigInt>::new(r, 1000);
        let cert = lab.hfd_certify(1000).unwrap();
        let two = KElement::from_element(&el(r, 2, 0)).unwrap();
        assert_eq!(lab.boundary(&cert, &two), Ok(BoundaryValue(1)));
        // (1+√−3)/2 = ω
        let omega = KElement::from_element(&el(d, 0, 1)).unwrap();
        assert_eq!(lab.boundary(&cert, &omega), Ok(BoundaryValue(0)));
        let one = KElement::from_element(&el(r, 1, 0)).unwrap();
        assert_eq!(lab.boundary(&cert, &one), Ok(BoundaryValue(0)));
        let half = KElement::new(&el(d, 1, 0), BigInt::from(2)).unwrap();
        assert_eq!(lab.boundary(&cert, &half), Ok(BoundaryValue(-1)));

        let big = KElement::from_element(&el(r, 100, 0)).unwrap();
        assert!(matches!(lab.boundary(&cert, &big), Err(BoundaryError::UncertifiedDomain { .. })));

        let m14 = make_order(-14, 1).unwrap();
        let lab14 = FactorLab::<BigInt>::new(m14, 1000);
        let cert14 = lab14.hfd_certify(100).unwrap();
        let x = KElement::from_element(&el(m14, 3, 0)).unwrap();
        assert!(matches!(lab14.boundary(&cert14, &x), Err(BoundaryError::UncertifiedDomain { .. })));
    }

    #[test]
    fn lab_irreducibility_matches_definition() {
        for (d, f) in [(-1, 1), (-3, 2), (-5, 1), (-14, 1), (-1, 2), (-7, 2)] {
            let o = make_order(d, f).unwrap();
            let lab = FactorLab::<i64>::new(o, 400);
            for x in lab.nonunits_up_to(400) {
                assert_eq!(lab.is_irreducible(&x), is_irreducible(o, &x), "{x} in {o}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn factorizations_multiply_back(
            (d, f) in prop::sample::select(vec![(-1i64, 1i64), (-3, 2), (-5, 1), (-14, 1), (-6, 1), (-1, 2)]),
            a in -25i64..25, b in -8i64..8,
        ) {
            let o = make_order(d, f).unwrap();
            let x = el(o, a, b);
            prop_assume!(!x.is_zero() && !x.is_unit());
            let set = factorizations(o, &x).unwrap();
            prop_assert!(!set.factorizations.is_empty());
            for fs in &set.factorizations {
                prop_assert!(product(o, fs).is_associate(&x));
                for p in fs {
                    prop_assert!(is_irreducible(o, p));
                }
            }
            let lengths: BTreeSet<u32> = set.factorizations.iter().map(|f| f.len() as u32).collect();
            prop_assert_eq!(lengths.into_iter().collect::<Vec<_>>(), set.lengths.clone());
            let lab = FactorLab::<BigInt>::new(o, to_u64(&x.norm()));
            prop_assert_eq!(lab.length_set(&x).unwrap().as_ref().clone(), set.lengths);
        }

        #[test]
        fn boundary_is_a_homomorphism(
            a in -4i64..4, b in -4i64..4, c in 1i64..4, e in -4i64..4, g in -4i64..4, h in 1i64..4,
        ) {
            let r = make_order(-3, 2).unwrap();
            let d = r.maximal_order();
            let x = KElement::new(&el(d, a, b), BigInt::from(c));
            let y = KElement::new(&el(d, e, g), BigInt::from(h));
            prop_assume!(x.is_some() && y.is_some());
            let (x, y) = (x.unwrap(), y.unwrap());
            EISENSTEIN_SUBORDER.with(|(lab, cert)| {
                let bx = lab.boundary(cert, &x).unwrap().0;
                let by = lab.boundary(cert, &y).unwrap().0;
                let bxy = lab.boundary(cert, &x.mul(&y)).unwrap().0;
                prop_assert_eq!(bxy, bx + by);
                Ok(())
            })?;
        }
    }
}
