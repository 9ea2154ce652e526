//! The extension `R ⊆ T ⊆ O_K` of an order inside its integral closure:
//! intermediate orders, conductors, residue-ring machinery and executable
//! checks of structural statements about half-factorial orders.

mod checks;
mod conductor;
mod residue;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::element::{ElementRepr, OrderElement};
use crate::factor::{BoundaryError, CertificateRepr, FactorError, LengthWitnessRepr};
use crate::lattice::LatticeRepr;
use crate::order::{OrderId, QuadraticOrder};
use crate::scalar::{int, Scalar};

pub use checks::{
    bandaid_check, boundary_zero_scan, irreducible_boundary_profile, squeeze_verify, uic_check,
    unit_associate_sweep, OverringContext,
};
pub use conductor::{conductor, ConductorData};
pub use residue::{
    comaximal_power_into, crt_solve, membership_via_congruences, unit_associate_into, unit_cover,
    CongruenceMembership, Hypothesis, PowerInto, UnitAssociate, UnitCover,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OverringError {
    #[error("NOT_INTERMEDIATE: {over} does not contain {sub}")]
    NotIntermediate { sub: QuadraticOrder, over: QuadraticOrder },
    #[error("NON_COMAXIMAL: moduli {first} and {second} share a prime")]
    NonComaximal { first: usize, second: usize },
    #[error("NOT_COMAXIMAL: ({element}) is not comaximal to the conductor {conductor}")]
    NotComaximal { element: String, conductor: i64 },
    #[error("{0} is not a maximal order")]
    NotMaximal(QuadraticOrder),
    #[error("element of {found} where {expected} was required")]
    WrongOrder { expected: QuadraticOrder, found: QuadraticOrder },
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

impl From<FactorError> for OverringError {
    fn from(e: FactorError) -> Self {
        OverringError::Boundary(BoundaryError::Factor(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Verified,
    Vacuous,
    Refuted,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Verified => "VERIFIED",
            CheckStatus::Vacuous => "VACUOUS",
            CheckStatus::Refuted => "REFUTED",
        })
    }
}

/// Which structural statement a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    /// Nonunits of an integral extension have positive boundary.
    NoBoundaryZero,
    /// Irreducibles of `T` have boundary in `{0, 1}`, all `1` iff `T` is half-factorial.
    IrreducibleBoundary,
    /// `α` irreducible in `R[α]` iff `∂_R(α) = 1`, when all intermediates are half-factorial.
    GeneratedOrderIrreducibility,
    /// Every element of `O_K` is a unit multiple of an element of `R`.
    UnitAssociates,
    /// Distinct ideals of `O_K` contract to distinct ideals of `R`.
    InjectiveContraction,
    /// Radical conductor forces every intermediate order to be half-factorial.
    Squeeze,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

/// Evidence attached to a report. Everything is stored as decimal strings so
/// a report can be replayed without the process that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A nonunit of `O_K` with `∂_R <= 0`.
    NonpositiveBoundary {
        element: ElementRepr,
        boundary: i64,
        prime_in_maximal: bool,
        prime_factors_principal: bool,
    },
    /// An irreducible of `T` whose boundary is outside `{0, 1}`, or disagrees
    /// with the half-factorial status of `T`.
    IrreducibleBoundary { element: ElementRepr, boundary: i64, over_is_hfd: bool },
    /// `α` where irreducibility in `R[α]` and `∂_R(α) = 1` disagree, or the
    /// expected irreducible of boundary above one.
    GeneratedOrder {
        element: ElementRepr,
        boundary: i64,
        generated: OrderId,
        irreducible_in_generated: bool,
    },
    /// No unit of `O_K` moves the element into `R`.
    NoUnitAssociate { element: ElementRepr },
    /// Two distinct ideals of `O_K` with the same contraction to `R`.
    ContractionCollision { left: LatticeRepr, right: LatticeRepr, contraction: LatticeRepr },
    /// The conductor of `R` in `O_K` and its factorization.
    Conductor { lattice: LatticeRepr, extension: LatticeRepr, factors: Vec<(LatticeRepr, u32)>, radical: bool },
    /// A half-factorial certificate or its refutation.
    Certificate(CertificateRepr),
    /// Two factorizations of different length.
    Lengths(LengthWitnessRepr),
}

/// Outcome of one check on one order pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverringReport {
    pub statement: Statement,
    pub sub: QuadraticOrder,
    pub over: QuadraticOrder,
    pub bound: u64,
    pub status: CheckStatus,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub counters: BTreeMap<String, u64>,
    /// Wall-clock seconds; not part of the deterministic output.
    #[serde(skip)]
    pub seconds: f64,
}

impl OverringReport {
    pub(crate) fn new(statement: Statement, sub: QuadraticOrder, over: QuadraticOrder, bound: u64) -> Self {
        OverringReport {
            statement,
            sub,
            over,
            bound,
            status: CheckStatus::Verified,
            witnesses: Vec::new(),
            notes: Vec::new(),
            counters: BTreeMap::new(),
            seconds: 0.0,
        }
    }

    pub(crate) fn bump(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_insert(0) += 1;
    }

    /// Re-derives every refuting witness from its stored coordinates.
    /// Always true for reports that are not refutations.
    pub fn replay(&self) -> bool {
        if self.status != CheckStatus::Refuted {
            return true;
        }
        !self.witnesses.is_empty() && self.witnesses.iter().all(|w| checks::replay_witness(self, w))
    }
}

/// All orders `Z + h·O_K` with `h | f`, from `R` down to `O_K`.
pub fn intermediate_orders(r: QuadraticOrder) -> Vec<QuadraticOrder> {
    r.intermediate_indices()
        .into_iter()
        .map(|h| r.with_conductor(h).expect("divisor of a valid conductor"))
        .collect()
}

/// Whether `sub ⊆ over` as orders of one field.
pub fn is_intermediate(sub: QuadraticOrder, over: QuadraticOrder) -> bool {
    sub.same_field(&over) && sub.f() % over.f() == 0
}

/// `R[α]` for `α` in `O_K`: the order of conductor `gcd(f, c)` where
/// `α = a + c·ω`.
pub fn order_generated<I: Scalar>(r: QuadraticOrder, alpha: &OrderElement<I>) -> QuadraticOrder {
    assert!(r.same_field(&alpha.order()), "element from another field");
    let f: I = int(r.f());
    let (_, c) = alpha.maximal_coords();
    let h = f.gcd(&c).to_i64().expect("divisor of an i64 conductor");
    let generated = r.with_conductor(h).expect("divisor of a valid conductor");
    // minimal over the divisor lattice: no smaller intermediate order contains α
    let smallest = intermediate_orders(r)
        .into_iter()
        .find(|t| alpha.rebase(*t).is_some())
        .expect("O_K contains α");
    assert_eq!(generated, smallest, "gcd rule disagrees with the divisor-lattice scan");
    generated
}
