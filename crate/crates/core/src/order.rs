//! Orders `Z + f·O_K` in imaginary quadratic fields `K = Q(√d)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{divisors_u64, is_squarefree, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("d = {0} must be negative")]
    NonNegativeField(i64),
    #[error("d = {0} is not squarefree")]
    NotSquarefree(i64),
    #[error("conductor index f = {0} must be positive")]
    NonPositiveConductor(i64),
    #[error("discriminant f^2*d_K for d = {d}, f = {f} does not fit in 64 bits")]
    TooLarge { d: i64, f: i64 },
}

/// An order in an imaginary quadratic field, identified by `(d, f)`.
///
/// Elements use the basis `{1, τ}` with `τ = f·ω`, where `ω = √d` when
/// `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`. The
/// minimal polynomial of `ω` is `x² − t·x + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "OrderId", into = "OrderId")]
pub struct QuadraticOrder {
    d: i64,
    f: i64,
    d_k: i64,
    disc: i64,
}

/// Plain `(d, f)` pair used on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderId {
    pub d: i64,
    pub f: i64,
}

impl TryFrom<OrderId> for QuadraticOrder {
    type Error = OrderError;
    fn try_from(id: OrderId) -> Result<Self, OrderError> {
        QuadraticOrder::new(id.d, id.f)
    }
}

impl From<QuadraticOrder> for OrderId {
    fn from(o: QuadraticOrder) -> Self {
        OrderId { d: o.d, f: o.f }
    }
}

/// Builds the order `Z + f·O_K` for `K = Q(√d)`.
pub fn make_order(d: i64, f: i64) -> Result<QuadraticOrder, OrderError> {
    QuadraticOrder::new(d, f)
}

impl QuadraticOrder {
    pub fn new(d: i64, f: i64) -> Result<Self, OrderError> {
        if d >= 0 {
            return Err(OrderError::NonNegativeField(d));
        }
        if !is_squarefree(d.unsigned_abs()) {
            return Err(OrderError::NotSquarefree(d));
        }
        if f <= 0 {
            return Err(OrderError::NonPositiveConductor(f));
        }
        let d_k = if d.rem_euclid(4) == 1 {
            d
        } else {
            d.checked_mul(4).ok_or(OrderError::TooLarge { d, f })?
        };
        let disc = f
            .checked_mul(f)
            .and_then(|ff| ff.checked_mul(d_k))
            .ok_or(OrderError::TooLarge { d, f })?;
        Ok(QuadraticOrder { d, f, d_k, disc })
    }

    pub fn maximal(d: i64) -> Result<Self, OrderError> {
        Self::new(d, 1)
    }

    #[inline]
    pub fn d(&self) -> i64 {
        self.d
    }

    #[inline]
    pub fn f(&self) -> i64 {
        self.f
    }

    /// Field discriminant.
    #[inline]
    pub fn d_k(&self) -> i64 {
        self.d_k
    }

    /// Order discriminant `f²·d_K`.
    #[inline]
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn id(&self) -> OrderId {
        (*self).into()
    }

    #[inline]
    pub fn is_maximal(&self) -> bool {
        self.f == 1
    }

    /// The maximal order `O_K` of the same field.
    pub fn maximal_order(&self) -> QuadraticOrder {
        QuadraticOrder { d: self.d, f: 1, d_k: self.d_k, disc: self.d_k }
    }

    /// `Z + h·O_K` in the same field.
    pub fn with_conductor(&self, h: i64) -> Result<QuadraticOrder, OrderError> {
        QuadraticOrder::new(self.d, h)
    }

    pub fn same_field(&self, other: &QuadraticOrder) -> bool {
        self.d == other.d
    }

    /// Trace of `ω`.
    #[inline]
    pub fn omega_trace(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            1
        } else {
            0
        }
    }

    /// Norm of `ω`.
    #[inline]
    pub fn omega_norm(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            (1 - self.d) / 4
        } else {
            -self.d
        }
    }

    pub(crate) fn t<I: Scalar>(&self) -> I {
        crate::scalar::int(self.omega_trace())
    }

    pub(crate) fn n<I: Scalar>(&self) -> I {
        crate::scalar::int(self.omega_norm())
    }

    pub(crate) fn fs<I: Scalar>(&self) -> I {
        crate::scalar::int(self.f)
    }

    /// Conductor indices of the orders between this one and `O_K`, descending.
    pub fn intermediate_indices(&self) -> Vec<i64> {
        let mut hs: Vec<i64> = divisors_u64(self.f as u64).into_iter().map(|h| h as i64).collect();
        hs.reverse();
        hs
    }
}

impl fmt::Display for QuadraticOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f == 1 {
            write!(f, "O_K(√{})", self.d)
        } else {
            write!(f, "Z+{}·O_K(√{})", self.f, self.d)
        }
    }
}
