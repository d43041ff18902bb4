//! Exact multivariate polynomial algebra over the rationals: monomial orders,
//! division with remainder, reduced Gröbner bases (Buchberger) and ideal /
//! radical membership.

use std::time::Instant;

use thiserror::Error;

pub(crate) mod groebner;
mod ideal;
mod monomial;
mod polynomial;
mod set;

pub use groebner::{groebner, groebner_extend, is_groebner_basis, reduce, s_polynomial};
pub use ideal::{
    ideal_is_trivial, ideal_is_trivial_with, ideal_member, ideal_member_with, radical_member, radical_member_with,
    set_product, set_product_with, ChoiceIndices,
};
pub use monomial::{compare_monomials, Monomial, MonomialOrder};
pub use polynomial::{default_names, poly_arith, ArithKind, PolyMap, Polynomial, Term};
pub use set::PolySet;

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimitExceeded(String),
}

/// Caps that turn runaway expression swell into an error instead of a hang.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyLimits {
    pub max_degree: u32,
    pub max_terms: usize,
    pub max_basis: usize,
    pub deadline: Option<Instant>,
}

impl Default for PolyLimits {
    fn default() -> Self {
        PolyLimits {
            max_degree: 512,
            max_terms: 200_000,
            max_basis: 10_000,
            deadline: None,
        }
    }
}

impl PolyLimits {
    pub fn unlimited() -> Self {
        PolyLimits {
            max_degree: u32::MAX,
            max_terms: usize::MAX,
            max_basis: usize::MAX,
            deadline: None,
        }
    }

    pub(crate) fn check_degree(&self, degree: u32) -> Result<(), PolyError> {
        if degree > self.max_degree {
            return Err(PolyError::ResourceLimitExceeded(format!(
                "polynomial degree {degree} exceeds cap {}",
                self.max_degree
            )));
        }
        Ok(())
    }

    pub(crate) fn check_terms(&self, terms: usize) -> Result<(), PolyError> {
        if terms > self.max_terms {
            return Err(PolyError::ResourceLimitExceeded(format!(
                "term count {terms} exceeds cap {}",
                self.max_terms
            )));
        }
        Ok(())
    }

    pub(crate) fn check_basis(&self, size: usize) -> Result<(), PolyError> {
        if size > self.max_basis {
            return Err(PolyError::ResourceLimitExceeded(format!(
                "basis size {size} exceeds cap {}",
                self.max_basis
            )));
        }
        Ok(())
    }

    pub(crate) fn check_deadline(&self) -> Result<(), PolyError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(PolyError::ResourceLimitExceeded(
                "wall-clock budget exhausted".to_string(),
            )),
            _ => Ok(()),
        }
    }
}
