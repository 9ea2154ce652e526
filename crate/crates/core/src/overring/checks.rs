use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::time::Instant;

use num_bigint::BigInt;

use crate::element::{elements_up_to, KElement, OrderElement};
use crate::factor::{is_irreducible, BoundaryError, CertMethod, FactorLab, HfdCertificate, HfdVerdict};
use crate::forms::class_group;
use crate::ideal::{factor_ideal, ideals_up_to, is_prime_ideal, is_principal, IntegralIdeal};
use crate::lattice::Lattice;
use crate::order::QuadraticOrder;
use crate::scalar::{to_u64, uint, Scalar};

use super::conductor::{conductor, order_lattice};
use super::residue::unit_associate_into;
use super::{
    intermediate_orders, is_intermediate, order_generated, CheckStatus, OverringError, OverringReport, Statement,
    Witness,
};

/// Caches factorization labs and certificates for every order between `R`
/// and `O_K`, so several checks on one order share work.
pub struct OverringContext<I: Scalar> {
    sub: QuadraticOrder,
    labs: RefCell<BTreeMap<i64, Rc<FactorLab<I>>>>,
    certs: RefCell<HashMap<(i64, u64), Rc<HfdCertificate<I>>>>,
}

impl<I: Scalar> OverringContext<I> {
    pub fn new(sub: QuadraticOrder) -> Self {
        OverringContext { sub, labs: RefCell::new(BTreeMap::new()), certs: RefCell::new(HashMap::new()) }
    }

    pub fn sub(&self) -> QuadraticOrder {
        self.sub
    }

    pub fn maximal(&self) -> QuadraticOrder {
        self.sub.maximal_order()
    }

    pub fn lab(&self, t: QuadraticOrder) -> Rc<FactorLab<I>> {
        assert!(is_intermediate(self.sub, t), "{t} is not between {} and O_K", self.sub);
        self.labs
            .borrow_mut()
            .entry(t.f())
            .or_insert_with(|| Rc::new(FactorLab::new(t, u64::MAX)))
            .clone()
    }

    /// Half-factorial certificate of an intermediate order; maximal orders
    /// ignore the bound.
    pub fn certificate(&self, t: QuadraticOrder, bound: u64) -> Result<Rc<HfdCertificate<I>>, OverringError> {
        let key = (t.f(), if t.is_maximal() { 0 } else { bound });
        if let Some(hit) = self.certs.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let cert = Rc::new(self.lab(t).hfd_certify(bound.max(2))?);
        self.certs.borrow_mut().insert(key, cert.clone());
        Ok(cert)
    }

    /// Certificate for `R` strong enough to evaluate `∂_R` on elements of
    /// `O_K` of norm at most `bound`: clearing denominators multiplies norms
    /// by at most `f²`.
    fn boundary_certificate(&self, bound: u64) -> Result<Rc<HfdCertificate<I>>, OverringError> {
        let f = self.sub.f() as u64;
        let needed = bound.saturating_mul(f * f);
        let cert = self.certificate(self.sub, needed)?;
        if !cert.is_hfd() {
            return Err(BoundaryError::UncertifiedDomain { order: self.sub, norm: needed }.into());
        }
        Ok(cert)
    }

    fn boundary(&self, cert: &HfdCertificate<I>, x: &OrderElement<I>) -> Result<i64, OverringError> {
        let k = KElement::from_element(x).expect("nonzero element");
        Ok(self.lab(self.sub).boundary(cert, &k)?.0)
    }

    fn nonunits_of_maximal(&self, bound: u64) -> Vec<OrderElement<I>> {
        elements_up_to(self.maximal(), &uint::<I>(bound)).into_iter().filter(|x| !x.is_unit()).collect()
    }

    /// No nonunit of `O_K` has boundary zero.
    pub fn boundary_zero_scan(&self, bound: u64) -> Result<OverringReport, OverringError> {
        let start = Instant::now();
        let d = self.maximal();
        let mut rep = OverringReport::new(Statement::NoBoundaryZero, self.sub, d, bound);
        let cert = self.boundary_certificate(bound)?;
        rep.notes.push(certified_note(&cert));
        for x in self.nonunits_of_maximal(bound) {
            let v = self.boundary(&cert, &x)?;
            rep.bump("elements");
            if v > 0 {
                continue;
            }
            rep.bump("nonpositive");
            let (prime_in_maximal, prime_factors_principal) = prime_data(&x);
            rep.witnesses.push(Witness::NonpositiveBoundary {
                element: x.repr(),
                boundary: v,
                prime_in_maximal,
                prime_factors_principal,
            });
        }
        if !rep.witnesses.is_empty() {
            rep.status = CheckStatus::Refuted;
        }
        rep.seconds = start.elapsed().as_secs_f64();
        Ok(rep)
    }

    /// Boundaries of irreducibles of `T` lie in `{0, 1}`, and are all `1`
    /// exactly when `T` is half-factorial.
    pub fn irreducible_boundary_profile(&self, t: QuadraticOrder, bound: u64) -> Result<OverringReport, OverringError> {
        let start = Instant::now();
        if !is_intermediate(self.sub, t) {
            return Err(OverringError::NotIntermediate { sub: self.sub, over: t });
        }
        let mut rep = OverringReport::new(Statement::IrreducibleBoundary, self.sub, t, bound);
        let cert = self.boundary_certificate(bound)?;
        let cert_t = self.certificate(t, bound)?;
        let t_hfd = cert_t.is_hfd();
        rep.notes.push(certified_note(&cert));
        rep.notes.push(format!("{t}: {}", verdict_name(cert_t.verdict)));
        let mut all_one = true;
        for pi in self.lab(t).irreducibles_up_to(bound.max(2))? {
            let v = self.boundary(&cert, &pi)?;
            rep.bump(&format!("boundary={v}"));
            all_one &= v == 1;
            if !(0..=1).contains(&v) || (t_hfd && v != 1) {
                rep.witnesses.push(Witness::IrreducibleBoundary { element: pi.repr(), boundary: v, over_is_hfd: t_hfd });
            }
        }
        if !t_hfd && all_one {
            rep.witnesses.push(Witness::Certificate(cert_t.repr()));
        }
        if !rep.witnesses.is_empty() {
            rep.status = CheckStatus::Refuted;
        }
        rep.seconds = start.elapsed().as_secs_f64();
        Ok(rep)
    }

    /// `α` is irreducible in `R[α]` iff `∂_R(α) = 1`, provided every
    /// intermediate order is half-factorial; otherwise some `α` irreducible
    /// in `R[α]` has boundary above one.
    pub fn bandaid_check(&self, bound: u64) -> Result<OverringReport, OverringError> {
        let start = Instant::now();
        let d = self.maximal();
        let mut rep = OverringReport::new(Statement::GeneratedOrderIrreducibility, self.sub, d, bound);
        let cert = self.boundary_certificate(bound)?;
        rep.notes.push(certified_note(&cert));
        let mut non_hfd = Vec::new();
        for t in intermediate_orders(self.sub) {
            let c = self.certificate(t, bound)?;
            rep.notes.push(format!("{t}: {}", verdict_name(c.verdict)));
            if !c.is_hfd() {
                non_hfd.push(c);
            }
        }
        let mut expected = None;
        for alpha in self.nonunits_of_maximal(bound) {
            let v = self.boundary(&cert, &alpha)?;
            let s = order_generated(self.sub, &alpha);
            let in_s = alpha.rebase(s).expect("α lies in R[α]");
            let irreducible = self.lab(s).is_irreducible(&in_s);
            rep.bump("elements");
            if irreducible {
                rep.bump("irreducible_in_generated");
            }
            if v == 1 {
                rep.bump("boundary_one");
            }
            let witness = || Witness::GeneratedOrder {
                element: alpha.repr(),
                boundary: v,
                generated: s.id(),
                irreducible_in_generated: irreducible,
            };
            if non_hfd.is_empty() {
                if irreducible != (v == 1) {
                    rep.witnesses.push(witness());
                }
            } else if expected.is_none() && irreducible && v > 1 {
                expected = Some(witness());
            }
        }
        if non_hfd.is_empty() {
            if !rep.witnesses.is_empty() {
                rep.status = CheckStatus::Refuted;
            }
        } else {
            rep.notes.push("some intermediate order is not half-factorial".into());
            match expected {
                Some(w) => rep.witnesses.push(w),
                None => {
                    rep.status = CheckStatus::Refuted;
                    rep.witnesses.extend(non_hfd.iter().map(|c| Witness::Certificate(c.repr())));
                }
            }
        }
        rep.seconds = start.elapsed().as_secs_f64();
        Ok(rep)
    }

    fn sweep_units(&self, bound: u64, rep: &mut OverringReport) -> Vec<OrderElement<I>> {
        let mut failures = Vec::new();
        for x in elements_up_to(self.maximal(), &uint::<I>(bound)) {
            rep.bump("unit_sweep_elements");
            if unit_associate_into(self.sub, &x).is_none() {
                rep.bump("unit_sweep_failures");
                failures.push(x);
            }
        }
        failures
    }

    /// Every element of `O_K` of norm at most `bound` has a unit multiple in `R`.
    pub fn unit_associate_sweep(&self, bound: u64) -> Result<OverringReport, OverringError> {
        let start = Instant::now();
        let mut rep = OverringReport::new(Statement::UnitAssociates, self.sub, self.maximal(), bound);
        let cert = self.certificate(self.sub, bound)?;
        rep.notes.push(format!("{}: {}", self.sub, verdict_name(cert.verdict)));
        let failures = self.sweep_units(bound, &mut rep);
        rep.witnesses
            .extend(failures.iter().take(16).map(|x| Witness::NoUnitAssociate { element: x.repr() }));
        if !failures.is_empty() {
            rep.status = if cert.is_hfd() { CheckStatus::Refuted } else { CheckStatus::Vacuous };
        } else if !cert.is_hfd() {
            rep.status = CheckStatus::Vacuous;
        }
        if !cert.is_hfd() {
            rep.notes.push("R is not half-factorial; the sweep is recorded as data only".into());
        }
        rep.seconds = start.elapsed().as_secs_f64();
        Ok(rep)
    }

    /// Distinct ideals of `O_K` of norm at most `bound` contract to distinct
    /// ideals of `R`, under the hypothesis `O_K = R·U(O_K)`.
    pub fn uic_check(&self, bound: u64) -> Result<OverringReport, OverringError> {
        let start = Instant::now();
        let d = self.maximal();
        let mut rep = OverringReport::new(Statement::InjectiveContraction, self.sub, d, bound);
        rep.notes.push(
            "contractions are taken for ideals of O_K: the statement speaks of ideals of R, \
             but its argument uses elements and units of O_K"
                .into(),
        );
        let failures = self.sweep_units(bound, &mut rep);
        let r = order_lattice::<I>(self.sub);
        let mut seen: HashMap<Lattice<I>, IntegralIdeal<I>> = HashMap::new();
        let mut collisions = Vec::new();
        for ideal in ideals_up_to::<I>(d, bound) {
            rep.bump("ideals");
            let c = ideal.lattice().intersect(&r);
            match seen.get(&c) {
                Some(prev) => collisions.push(Witness::ContractionCollision {
                    left: prev.repr(),
                    right: ideal.repr(),
                    contraction: c.repr(),
                }),
                None => {
                    seen.insert(c, ideal);
                }
            }
        }
        rep.counters.insert("collisions".into(), collisions.len() as u64);
        if let Some(x) = failures.first() {
            rep.status = CheckStatus::Vacuous;
            rep.notes.push(format!("O_K = R·U(O_K) fails: no unit moves {x} into R"));
            rep.witnesses.push(Witness::NoUnitAssociate { element: x.repr() });
            rep.witnesses.extend(collisions.into_iter().take(1));
        } else if !collisions.is_empty() {
            rep.status = CheckStatus::Refuted;
            rep.witnesses.extend(collisions.into_iter().take(16));
        }
        rep.seconds = start.elapsed().as_secs_f64();
        Ok(rep)
    }

    /// A half-factorial order with radical conductor has only half-factorial
    /// intermediate orders.
    pub fn squeeze_verify(&self, bound: u64) -> Result<OverringReport, OverringError> {
        let start = Instant::now();
        let d = self.maximal();
        let mut rep = OverringReport::new(Statement::Squeeze, self.sub, d, bound);
        let c = conductor::<I>(self.sub, d)?;
        rep.witnesses.push(Witness::Conductor {
            lattice: c.lattice.repr(),
            extension: c.ideal.repr(),
            factors: c.factorization.factors.iter().map(|(p, e)| (p.repr(), *e)).collect(),
            radical: c.radical,
        });
        let cert = self.certificate(self.sub, bound)?;
        rep.witnesses.push(Witness::Certificate(cert.repr()));
        if !c.radical {
            rep.status = CheckStatus::Vacuous;
            rep.notes.push("conductor is not radical".into());
        } else if !cert.is_hfd() {
            rep.status = CheckStatus::Vacuous;
            rep.notes.push("R is not half-factorial".into());
        } else {
            for t in intermediate_orders(self.sub).into_iter().skip(1) {
                let ct = self.certificate(t, bound)?;
                rep.bump("intermediates");
                if !ct.is_hfd() {
                    rep.status = CheckStatus::Refuted;
                }
                rep.witnesses.push(Witness::Certificate(ct.repr()));
            }
        }
        rep.seconds = start.elapsed().as_secs_f64();
        Ok(rep)
    }
}

fn verdict_name(v: HfdVerdict) -> String {
    serde_json::to_value(v).expect("unit variant").as_str().expect("string").to_string()
}

fn certified_note<I: Scalar>(cert: &HfdCertificate<I>) -> String {
    match cert.method {
        CertMethod::Carlitz => format!("{}: {} by class number", cert.order, verdict_name(cert.verdict)),
        CertMethod::Exhaustive => {
            format!("{}: {} up to norm {}", cert.order, verdict_name(cert.verdict), cert.bound)
        }
    }
}

/// Whether `(x)` is prime in `O_K`, and whether all its prime factors are principal.
fn prime_data<I: Scalar>(x: &OrderElement<I>) -> (bool, bool) {
    let ideal = IntegralIdeal::principal(&x.to_maximal()).expect("nonzero");
    let factors = factor_ideal(&ideal);
    let principal = factors.factors.iter().all(|(p, _)| is_principal(p).is_some());
    (is_prime_ideal(&ideal), principal)
}

pub fn boundary_zero_scan<I: Scalar>(r: QuadraticOrder, bound: u64) -> Result<OverringReport, OverringError> {
    OverringContext::<I>::new(r).boundary_zero_scan(bound)
}

pub fn irreducible_boundary_profile<I: Scalar>(
    r: QuadraticOrder,
    t: QuadraticOrder,
    bound: u64,
) -> Result<OverringReport, OverringError> {
    OverringContext::<I>::new(r).irreducible_boundary_profile(t, bound)
}

pub fn bandaid_check<I: Scalar>(r: QuadraticOrder, bound: u64) -> Result<OverringReport, OverringError> {
    OverringContext::<I>::new(r).bandaid_check(bound)
}

pub fn unit_associate_sweep<I: Scalar>(r: QuadraticOrder, bound: u64) -> Result<OverringReport, OverringError> {
    OverringContext::<I>::new(r).unit_associate_sweep(bound)
}

pub fn uic_check<I: Scalar>(r: QuadraticOrder, bound: u64) -> Result<OverringReport, OverringError> {
    OverringContext::<I>::new(r).uic_check(bound)
}

pub fn squeeze_verify<I: Scalar>(r: QuadraticOrder, bound: u64) -> Result<OverringReport, OverringError> {
    OverringContext::<I>::new(r).squeeze_verify(bound)
}

/// Recomputes one witness from its stored coordinates.
pub(crate) fn replay_witness(rep: &OverringReport, w: &Witness) -> bool {
    let ctx = OverringContext::<BigInt>::new(rep.sub);
    let d = rep.sub.maximal_order();
    let boundary_of = |x: &OrderElement<BigInt>| -> Option<i64> {
        let n = to_u64(&x.to_maximal().norm());
        let cert = ctx.boundary_certificate(n).ok()?;
        ctx.boundary(&cert, &x.to_maximal()).ok()
    };
    match w {
        Witness::NonpositiveBoundary { element, boundary, .. } => {
            let Some(x) = element.parse::<BigInt>() else { return false };
            x.order().same_field(&d) && !x.is_zero() && !x.is_unit() && boundary_of(&x) == Some(*boundary) && *boundary <= 0
        }
        Witness::IrreducibleBoundary { element, boundary, over_is_hfd } => {
            let Some(x) = element.parse::<BigInt>() else { return false };
            x.order() == rep.over
                && !x.is_zero()
                && is_irreducible(rep.over, &x)
                && boundary_of(&x) == Some(*boundary)
                && (!(0..=1).contains(boundary) || (*over_is_hfd && *boundary != 1))
        }
        Witness::GeneratedOrder { element, boundary, generated, irreducible_in_generated } => {
            let Some(x) = element.parse::<BigInt>() else { return false };
            if x.order() != d || x.is_zero() || x.is_unit() {
                return false;
            }
            let s = order_generated(rep.sub, &x);
            let irr = is_irreducible(s, &x.rebase(s).expect("α ∈ R[α]"));
            s.id() == *generated
                && irr == *irreducible_in_generated
                && boundary_of(&x) == Some(*boundary)
                && irr != (*boundary == 1)
        }
        Witness::NoUnitAssociate { element } => {
            let Some(x) = element.parse::<BigInt>() else { return false };
            x.order().same_field(&d) && unit_associate_into(rep.sub, &x).is_none()
        }
        Witness::ContractionCollision { left, right, contraction } => {
            let (Some(l), Some(r), Some(c)) =
                (left.parse::<BigInt>(), right.parse::<BigInt>(), contraction.parse::<BigInt>())
            else {
                return false;
            };
            let sub = order_lattice::<BigInt>(rep.sub);
            l != r
                && IntegralIdeal::from_lattice(d, l.clone()).is_ok()
                && IntegralIdeal::from_lattice(d, r.clone()).is_ok()
                && l.intersect(&sub) == c
                && r.intersect(&sub) == c
        }
        Witness::Conductor { lattice, radical, .. } => match conductor::<BigInt>(rep.sub, d) {
            Ok(c) => c.lattice.repr() == *lattice && c.radical == *radical,
            Err(_) => false,
        },
        Witness::Certificate(c) => match c.verdict {
            HfdVerdict::NotHfd => c
                .witness
                .as_ref()
                .and_then(|w| w.parse::<BigInt>())
                .is_some_and(|w| w.element.order() == c.order && w.replay()),
            HfdVerdict::CertifiedHfd => class_group(c.order).h <= 2,
            HfdVerdict::HfdUpToBound => true,
        },
        Witness::Lengths(l) => l.parse::<BigInt>().is_some_and(|w| w.replay()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::make_order;

    #[test]
    fn small_scans_on_eisenstein_suborder() {
        let r = make_order(-3, 2).unwrap();
        let ctx = OverringContext::<BigInt>::new(r);
        let rep = ctx.boundary_zero_scan(300).unwrap();
        assert_eq!(rep.status, CheckStatus::Verified);
        assert!(rep.witnesses.is_empty());
        let rep = ctx.irreducible_boundary_profile(r.maximal_order(), 300).unwrap();
        assert_eq!(rep.status, CheckStatus::Verified);
        assert_eq!(rep.counters.keys().collect::<Vec<_>>(), vec!["boundary=1"]);
        let rep = ctx.irreducible_boundary_profile(r, 300).unwrap();
        assert_eq!(rep.status, CheckStatus::Verified);
        assert_eq!(ctx.bandaid_check(200).unwrap().status, CheckStatus::Verified);
        assert_eq!(ctx.unit_associate_sweep(300).unwrap().status, CheckStatus::Verified);
        assert_eq!(ctx.uic_check(50).unwrap().status, CheckStatus::Verified);
        let rep = ctx.squeeze_verify(300).unwrap();
        assert_eq!(rep.status, CheckStatus::Verified);
        assert!(rep.replay());
    }

    #[test]
    fn gaussian_suborder_is_vacuous_for_squeeze_and_contraction() {
        let r = make_order(-1, 2).unwrap();
        let ctx = OverringContext::<BigInt>::new(r);
        let rep = ctx.squeeze_verify(500).unwrap();
        assert_eq!(rep.status, CheckStatus::Vacuous);
        assert!(rep.notes.iter().any(|n| n.contains("not radical")));
        let rep = ctx.uic_check(50).unwrap();
        assert_eq!(rep.status, CheckStatus::Vacuous);
        assert!(rep.counters["collisions"] > 0);
        for w in &rep.witnesses {
            assert!(replay_witness(&rep, w), "{w:?}");
        }
    }

    #[test]
    fn maximal_orders_scan_trivially() {
        let m5 = make_order(-5, 1).unwrap();
        let rep = boundary_zero_scan::<BigInt>(m5, 300).unwrap();
        assert_eq!(rep.status, CheckStatus::Verified);
        assert_eq!(squeeze_verify::<BigInt>(m5, 100).unwrap().status, CheckStatus::Verified);
        let m14 = make_order(-14, 1).unwrap();
        assert!(matches!(
            boundary_zero_scan::<BigInt>(m14, 100),
            Err(OverringError::Boundary(BoundaryError::UncertifiedDomain { .. }))
        ));
    }

    #[test]
    fn refutations_replay() {
        let r = make_order(-1, 2).unwrap();
        let d = r.maximal_order();
        let mut rep = OverringReport::new(Statement::UnitAssociates, r, d, 10);
        rep.status = CheckStatus::Refuted;
        rep.witnesses.push(Witness::NoUnitAssociate { element: OrderElement::<BigInt>::from_i64(d, 1, 1).repr() });
        assert!(rep.replay());
        rep.witnesses.push(Witness::NoUnitAssociate { element: OrderElement::<BigInt>::from_i64(d, 1, 0).repr() });
        assert!(!rep.replay());
        rep.witnesses.clear();
        assert!(!rep.replay());
    }
}
