use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::element::{unit_list, OrderElement};
use crate::ideal::{factor_ideal, mul_coords, IntegralIdeal};
use crate::lattice::{express_in_span, Lattice};
use crate::order::QuadraticOrder;
use crate::scalar::{int, to_u64, Scalar};

use super::conductor::ConductorData;
use super::{is_intermediate, OverringError};

/// Solves `x ≡ r_i (mod M_i)` in `O_K` for pairwise comaximal `M_i`.
///
/// For each `i` a Bézout relation `1 = m_i + n_i` with `m_i ∈ M_i` and
/// `n_i ∈ ∏_{j≠i} M_j` is read off the lattice bases, and `x = Σ r_i·n_i`
/// is reduced modulo `∏ M_i`.
pub fn crt_solve<I: Scalar>(
    d: QuadraticOrder,
    system: &[(OrderElement<I>, IntegralIdeal<I>)],
) -> Result<OrderElement<I>, OverringError> {
    if !d.is_maximal() {
        return Err(OverringError::NotMaximal(d));
    }
    for (r, m) in system {
        if m.order() != d {
            return Err(OverringError::WrongOrder { expected: d, found: m.order() });
        }
        if !r.order().same_field(&d) {
            return Err(OverringError::WrongOrder { expected: d, found: r.order() });
        }
    }
    for i in 0..system.len() {
        for j in i + 1..system.len() {
            if !system[i].1.is_comaximal(&system[j].1) {
                return Err(OverringError::NonComaximal { first: i, second: j });
            }
        }
    }
    let product = system.iter().fold(IntegralIdeal::unit(d), |acc, (_, m)| acc.mul(m));
    let mut x = (I::zero(), I::zero());
    for (i, (r, m)) in system.iter().enumerate() {
        let others = system
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(IntegralIdeal::unit(d), |acc, (_, (_, q))| acc.mul(q));
        let mut vs = m.lattice().basis().to_vec();
        vs.extend(others.lattice().basis());
        let k = express_in_span(&vs, &(I::one(), I::zero())).expect("comaximal ideals sum to O_K");
        let n = (
            k[2].clone() * vs[2].0.clone() + k[3].clone() * vs[3].0.clone(),
            k[2].clone() * vs[2].1.clone() + k[3].clone() * vs[3].1.clone(),
        );
        let term = mul_coords(d, &r.maximal_coords(), &n);
        x = (x.0 + term.0, x.1 + term.1);
    }
    let (a, c) = product.lattice().reduce(&x);
    Ok(OrderElement::new(d, a, c))
}

/// Status of the hypothesis `O_K = R·U(O_K)` attached to an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Hypothesis {
    Verified,
    HypothesisUnverified,
}

/// Exact test of `O_K = R·U(O_K)` over residues modulo `f·O_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCover<I> {
    pub order: QuadraticOrder,
    pub holds: bool,
    /// A residue class representative no unit moves into `R`.
    pub uncovered: Option<OrderElement<I>>,
}

/// Whether every element of `O_K` has a unit multiple in `R`.
///
/// `f·O_K ⊆ R`, so membership of `u·x` in `R` only depends on `x` modulo
/// `f·O_K` and the question reduces to `f²` residue classes.
pub fn unit_cover<I: Scalar>(r: QuadraticOrder) -> UnitCover<I> {
    let d = r.maximal_order();
    let f = r.f();
    let units = unit_list::<I>(d);
    for a in 0..f {
        for c in 0..f {
            let x = OrderElement::from_i64(d, a, c);
            if !units.iter().any(|u| (u * &x).rebase(r).is_some()) {
                return UnitCover { order: r, holds: false, uncovered: Some(x) };
            }
        }
    }
    UnitCover { order: r, holds: true, uncovered: None }
}

/// Both routes to `x ∈ T`, with the status of the hypothesis under which
/// they are expected to agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceMembership {
    pub by_congruence: bool,
    pub by_lattice: bool,
    pub hypothesis: Hypothesis,
}

impl CongruenceMembership {
    pub fn agree(&self) -> bool {
        self.by_congruence == self.by_lattice
    }
}

/// Residues of `T = Z + h·O_K` modulo the lattice `m`, as reduced coordinates.
fn residues_of_order<I: Scalar>(t: QuadraticOrder, m: &Lattice<I>) -> HashSet<(I, I)> {
    let n = to_u64(&m.index()) as i64;
    let h = t.f();
    let mut out = HashSet::new();
    for k in 0..n {
        for l in 0..n {
            out.insert(m.reduce(&(int::<I>(k), int::<I>(l * h))));
        }
    }
    out
}

/// Decides `x ∈ T` from the congruences `x ≡ r_i (mod P_i^{e_i})` with
/// `r_i ∈ T` over the factorization of `(R : O_K)`, and compares with
/// direct lattice membership.
pub fn membership_via_congruences<I: Scalar>(
    x: &OrderElement<I>,
    t: QuadraticOrder,
    c: &ConductorData<I>,
) -> Result<CongruenceMembership, OverringError> {
    let d = c.sub.maximal_order();
    if c.over != d {
        return Err(OverringError::NotMaximal(c.over));
    }
    if !is_intermediate(c.sub, t) {
        return Err(OverringError::NotIntermediate { sub: c.sub, over: t });
    }
    if !x.order().same_field(&d) {
        return Err(OverringError::WrongOrder { expected: d, found: x.order() });
    }
    let v = x.maximal_coords();
    let by_congruence = c.factorization.factors.iter().all(|(p, e)| {
        let m = p.pow(*e);
        residues_of_order(t, m.lattice()).contains(&m.lattice().reduce(&v))
    });
    let by_lattice = x.rebase(t).is_some();
    let hypothesis = if unit_cover::<I>(c.sub).holds {
        Hypothesis::Verified
    } else {
        Hypothesis::HypothesisUnverified
    };
    Ok(CongruenceMembership { by_congruence, by_lattice, hypothesis })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitAssociate<I> {
    /// A unit of `O_K`.
    pub unit: OrderElement<I>,
    /// `unit·x` as an element of `R`.
    pub image: OrderElement<I>,
}

/// Scans `U(O_K)` for `u` with `u·x ∈ R`, trying `u = 1` first.
pub fn unit_associate_into<I: Scalar>(r: QuadraticOrder, x: &OrderElement<I>) -> Option<UnitAssociate<I>> {
    let d = r.maximal_order();
    assert!(x.order().same_field(&d), "element from another field");
    let x = x.to_maximal();
    unit_list::<I>(d).into_iter().find_map(|u| {
        let image = (&u * &x).rebase(r)?;
        Some(UnitAssociate { unit: u, image })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerInto<I> {
    pub k: u64,
    /// `x^k` as an element of `R`.
    pub power: OrderElement<I>,
    /// `|(O_K / f·O_K)^*|`, which `k` divides.
    pub unit_group_order: u64,
}

/// Least `k >= 1` with `x^k ∈ R`, for `x` comaximal to `f·O_K`.
pub fn comaximal_power_into<I: Scalar>(r: QuadraticOrder, x: &OrderElement<I>) -> Result<PowerInto<I>, OverringError> {
    let d = r.maximal_order();
    if !x.order().same_field(&d) {
        return Err(OverringError::WrongOrder { expected: d, found: x.order() });
    }
    let x = x.to_maximal();
    let f: I = int(r.f());
    let fo = IntegralIdeal::from_hnf(d, f.clone(), I::zero(), f.clone()).expect("f·O_K");
    let comaximal = !x.is_zero() && IntegralIdeal::principal(&x).map(|p| p.is_comaximal(&fo)).unwrap_or(false);
    if !comaximal {
        return Err(OverringError::NotComaximal { element: x.to_string(), conductor: r.f() });
    }
    let unit_group_order: u64 = factor_ideal(&fo)
        .factors
        .iter()
        .map(|(p, e)| {
            let q = to_u64(&p.norm());
            q.pow(e - 1) * (q - 1)
        })
        .product();
    let lat = fo.lattice();
    let step = |v: &(I, I)| lat.reduce(&mul_coords(d, v, &x.maximal_coords()));
    let mut cur = lat.reduce(&x.maximal_coords());
    let mut k = 1u64;
    while !cur.1.is_multiple_of(&f) {
        cur = step(&cur);
        k += 1;
        assert!(k <= unit_group_order, "power iteration exceeded the unit group order");
    }
    assert!(unit_group_order % k == 0 || r.f() == 1);
    let power = x.pow(k as u32).rebase(r).expect("x^k ≡ element of R mod f·O_K");
    Ok(PowerInto { k, power, unit_group_order: unit_group_order.max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overring::conductor;
    use crate::order::make_order;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn el(o: QuadraticOrder, a: i64, b: i64) -> OrderElement<BigInt> {
        OrderElement::from_i64(o, a, b)
    }

    #[test]
    fn crt_examples() {
        let gi = make_order(-1, 1).unwrap();
        let two = IntegralIdeal::from_hnf(gi, 2.into(), 1.into(), 1.into()).unwrap().pow(2);
        let three = IntegralIdeal::from_hnf(gi, 3.into(), 0.into(), 3.into()).unwrap();
        let x = crt_solve(gi, &[(el(gi, 1, 0), two.clone()), (el(gi, 0, 1), three.clone())]).unwrap();
        assert!(two.contains(&(&x - &el(gi, 1, 0))));
        assert!(three.contains(&(&x - &el(gi, 0, 1))));

        let single = crt_solve(gi, &[(el(gi, 7, 5), three.clone())]).unwrap();
        assert_eq!(single, el(gi, 1, 2));

        let err = crt_solve(gi, &[(el(gi, 1, 0), two.clone()), (el(gi, 0, 1), two)]);
        assert_eq!(err, Err(OverringError::NonComaximal { first: 0, second: 1 }));
    }

    #[test]
    fn membership_examples() {
        let r = make_order(-3, 2).unwrap();
        let d = r.maximal_order();
        let c = conductor::<BigInt>(r, d).unwrap();
        let omega = el(d, 0, 1);
        let m = membership_via_congruences(&omega, r, &c).unwrap();
        assert_eq!((m.by_congruence, m.by_lattice), (false, false));
        assert_eq!(m.hypothesis, Hypothesis::Verified);
        let m = membership_via_congruences(&omega, d, &c).unwrap();
        assert_eq!((m.by_congruence, m.by_lattice), (true, true));
        let inside = el(d, 3, 2);
        let m = membership_via_congruences(&inside, r, &c).unwrap();
        assert_eq!((m.by_congruence, m.by_lattice), (true, true));
    }

    #[test]
    fn unit_cover_examples() {
        assert!(unit_cover::<i64>(make_order(-3, 2).unwrap()).holds);
        let z2i = unit_cover::<i64>(make_order(-1, 2).unwrap());
        assert!(!z2i.holds);
        assert_eq!(z2i.uncovered, Some(OrderElement::from_i64(make_order(-1, 1).unwrap(), 1, 1)));
        assert!(unit_cover::<i64>(make_order(-5, 1).unwrap()).holds);
    }

    #[test]
    fn unit_associate_examples() {
        let r = make_order(-3, 2).unwrap();
        let d = r.maximal_order();
        for x in [el(d, 0, 1), el(d, 1, 1), el(d, 5, 0)] {
            let found = unit_associate_into(r, &x).unwrap();
            assert!(found.unit.is_unit());
            assert_eq!((&found.unit * &x).rebase(r), Some(found.image.clone()));
        }
        // ω·ω̄ = 1, so some unit takes ω to ±1
        let w = unit_associate_into(r, &el(d, 0, 1)).unwrap();
        assert!(w.image.is_unit());
        // (3+√−3)/2 = 1 + ω has norm 3; its image is ±√−3
        let w = unit_associate_into(r, &el(d, 1, 1)).unwrap();
        assert_eq!(w.image.norm(), BigInt::from(3));
        let inside = el(d, 4, 2);
        let w = unit_associate_into(r, &inside).unwrap();
        assert_eq!(w.unit, el(d, 1, 0));
    }

    #[test]
    fn comaximal_power_examples() {
        let r = make_order(-3, 2).unwrap();
        let d = r.maximal_order();
        let p = comaximal_power_into(r, &el(d, 0, 1)).unwrap();
        assert_eq!(p.k, 3);
        assert_eq!(p.power, el(r, -1, 0));
        assert_eq!(p.unit_group_order, 3);
        let p = comaximal_power_into(r, &el(r, 3, 1)).unwrap();
        assert_eq!(p.k, 1);
        assert!(matches!(comaximal_power_into(r, &el(d, 2, 0)), Err(OverringError::NotComaximal { .. })));
        assert!(matches!(comaximal_power_into(r, &el(d, 2, 2)), Err(OverringError::NotComaximal { .. })));
    }

    proptest! {
        #[test]
        fn crt_round_trip(
            (d, moduli) in prop::sample::select(vec![
                (-1i64, vec![(2u64, 3u32), (3, 1), (5, 2)]),
                (-5, vec![(2, 2), (3, 1), (7, 1)]),
            ]),
            residues in prop::collection::vec((-40i64..40, -40i64..40), 3),
        ) {
            let o = make_order(d, 1).unwrap();
            let system: Vec<_> = moduli
                .iter()
                .zip(&residues)
                .map(|(&(p, e), &(a, b))| {
                    let prime = crate::ideal::primes_above::<BigInt>(o, p).primes[0].clone();
                    (el(o, a, b), prime.pow(e))
                })
                .collect();
            let x = crt_solve(o, &system).unwrap();
            for (r, m) in &system {
                prop_assert!(m.contains(&(&x - r)));
            }
            let product = system.iter().fold(IntegralIdeal::unit(o), |acc, (_, m)| acc.mul(m));
            prop_assert_eq!(product.lattice().reduce(&x.maximal_coords()), x.maximal_coords());
            // moving each residue within its class gives the same reduced solution
            let shifted: Vec<_> = system
                .iter()
                .map(|(r, m)| (r + &OrderElement::integer(o, m.a().clone()), m.clone()))
                .collect();
            let y = crt_solve(o, &shifted).unwrap();
            prop_assert!(product.contains(&(&x - &y)));
            prop_assert_eq!(x, y);
        }

        #[test]
        fn membership_routes_agree(a in -30i64..30, c in -30i64..30, (d, f) in prop::sample::select(vec![(-3i64, 2i64), (-1, 2), (-2, 3), (-7, 6), (-5, 4)])) {
            let r = make_order(d, f).unwrap();
            let dd = r.maximal_order();
            let cd = conductor::<i64>(r, dd).unwrap();
            let x = OrderElement::from_i64(dd, a, c);
            for t in crate::overring::intermediate_orders(r) {
                let m = membership_via_congruences(&x, t, &cd).unwrap();
                if m.hypothesis == Hypothesis::Verified {
                    prop_assert!(m.agree(), "{} in {}: {:?}", x, t, m);
                }
                if m.by_lattice {
                    prop_assert!(m.by_congruence);
                }
            }
        }
    }
}
