use crate::ideal::{factor_ideal, ideal_from_generators, times_omega, IntegralIdeal, PrimeFactorization};
use crate::lattice::Lattice;
use crate::order::QuadraticOrder;
use crate::scalar::{int, Scalar};

use super::{is_intermediate, OverringError};

/// The conductor `(R : T) = {x : x·T ⊆ R}` and its prime structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductorData<I> {
    pub sub: QuadraticOrder,
    pub over: QuadraticOrder,
    /// `(R : T)` in maximal-order coordinates.
    pub lattice: Lattice<I>,
    /// `(R : T)·O_K`; equal to the conductor itself when `T = O_K`.
    pub ideal: IntegralIdeal<I>,
    pub factorization: PrimeFactorization<I>,
    pub radical: bool,
    /// `Q_i = P_i^{e_i} ∩ R`, one per prime factor, in factorization order.
    pub contractions: Vec<Lattice<I>>,
}

/// Lattice of the order `Z + h·O_K` in maximal-order coordinates.
pub(crate) fn order_lattice<I: Scalar>(order: QuadraticOrder) -> Lattice<I> {
    Lattice::from_hnf(I::one(), I::zero(), int(order.f())).expect("order lattice is in HNF")
}

/// Computes `(R : T)` as `R ∩ (h·ω)⁻¹·R`, since `T` is generated by `1` and `h·ω`.
pub fn conductor<I: Scalar>(sub: QuadraticOrder, over: QuadraticOrder) -> Result<ConductorData<I>, OverringError> {
    if !is_intermediate(sub, over) {
        return Err(OverringError::NotIntermediate { sub, over });
    }
    let d = sub.maximal_order();
    let r = order_lattice::<I>(sub);
    let h: I = int(over.f());
    let image = |v: (I, I)| {
        let (x, y) = times_omega(d, &v);
        [x * h.clone(), y * h.clone()]
    };
    let col0 = image((I::one(), I::zero()));
    let col1 = image((I::zero(), I::one()));
    let m = [[col0[0].clone(), col1[0].clone()], [col0[1].clone(), col1[1].clone()]];
    let lattice = r.intersect(&r.preimage(&m));

    // closed form: (f/h)·Z + f·ω·Z
    let f: I = int(sub.f());
    let closed = Lattice::from_hnf(f.clone() / h.clone(), I::zero(), f.clone()).expect("HNF");
    assert_eq!(lattice, closed, "conductor disagrees with its closed form");
    let t = order_lattice::<I>(over);
    for u in lattice.basis() {
        for v in t.basis() {
            let p = crate::ideal::mul_coords(d, &u, &v);
            assert!(r.contains(&p), "conductor times T escapes R");
        }
    }

    let gens: Vec<_> = lattice
        .basis()
        .into_iter()
        .map(|(x, y)| crate::element::OrderElement::new(d, x, y))
        .collect();
    let ideal = ideal_from_generators(d, &gens).expect("conductor is nonzero");
    if over == d {
        assert_eq!(ideal.lattice(), &lattice, "(R : O_K) is an ideal of O_K");
        let f_ok = IntegralIdeal::from_hnf(d, f.clone(), I::zero(), f).expect("f·O_K");
        assert_eq!(ideal, f_ok, "(R : O_K) must equal f·O_K");
    }
    let factorization = factor_ideal(&ideal);
    let radical = factorization.is_squarefree();
    let contractions = factorization
        .factors
        .iter()
        .map(|(p, e)| p.pow(*e).lattice().intersect(&r))
        .collect();
    Ok(ConductorData { sub, over, lattice, ideal, factorization, radical, contractions })
}
