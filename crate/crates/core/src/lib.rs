//! Exact factorization theory in orders of imaginary quadratic fields.
//!
//! The crate computes irreducibles, length sets, elasticity, class groups,
//! conductors and the boundary map of half-factorial orders, and runs
//! exhaustive verifiers for structural statements about the overrings
//! `R ⊆ T ⊆ O_K` of such orders.
//!
//! All arithmetic is exact and generic over an integer [`Scalar`]. The
//! aliases below fix the scalar to [`BigInt`], which is what the driver and
//! the command-line tool use.

pub mod driver;
pub mod element;
pub mod factor;
pub mod forms;
pub mod ideal;
pub mod lattice;
pub mod order;
pub mod overring;
pub mod scalar;

pub use num_bigint::BigInt;

pub use element::{divide_exact, elements_of_norm, elements_up_to, units, KElement, OrderElement};
pub use factor::{
    boundary, hfd_certify, BoundaryError, BoundaryValue, FactorError, FactorLab, FactorizationSet, HfdCertificate,
    HfdVerdict,
};
pub use forms::{class_group, BinaryForm, ClassGroupInfo};
pub use ideal::{factor_ideal, ideal_from_generators, ideal_mul, is_principal, IntegralIdeal, PrimeFactorization};
pub use lattice::Lattice;
pub use order::{make_order, OrderError, OrderId, QuadraticOrder};
pub use overring::{
    conductor, intermediate_orders, order_generated, CheckStatus, ConductorData, OverringContext, OverringError,
    OverringReport, Statement, Witness,
};
pub use scalar::Scalar;

/// Order element with arbitrary-precision coordinates.
pub type Element = OrderElement<BigInt>;
/// Field element with arbitrary-precision coordinates.
pub type FieldElement = KElement<BigInt>;
/// Ideal of the maximal order with arbitrary-precision HNF.
pub type Ideal = IntegralIdeal<BigInt>;

/// Machine-word instantiations for small desk computations.
pub type Element64 = OrderElement<i64>;
pub type Ideal64 = IntegralIdeal<i64>;

/// Factorization workspace over [`BigInt`].
pub type Lab = FactorLab<BigInt>;
