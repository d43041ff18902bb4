//! Chain-length combinatorics: binomial representations, Hilbert values of
//! monomial ideals, f-generating sequences and the bound on the length of
//! strictly ascending degree-bounded ideal chains.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

mod binomial;
mod hilbert;
mod machine;

pub use binomial::{binom_count, inc, macaulay_decompose, MacaulayRep, Run};
pub use hilbert::{hat_sequence, hilbert_value, MonomialIdealBasis};
pub use machine::{chain_bound, hilbert_machine, hilbert_trace, omega, HilbertTrace, DEFAULT_MACHINE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    /// The answer is larger than the cap; `lower_bound` is known to be `<=` it.
    #[error("exceeds cap {cap} (at least {lower_bound})")]
    CapExceeded { cap: u64, lower_bound: BigUint },
    #[error("target unreachable: the Hilbert value passed below it at step {step}")]
    TargetUnreachable { step: u64 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimitExceeded(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `f(i) = a*i + b`
    Affine { a: u64, b: u64 },
    /// `f(i) = a * b^(i-1)`
    Geometric { a: u64, b: u64 },
    /// Explicit values `f(1), f(2), …`, extended by repeating the last one.
    Table(Vec<u64>),
}

/// A nondecreasing degree bound `f: {1,2,…} → ℕ` with `f(1) >= 1`, optionally
/// shifted (`f_{+m}(i) = f(m + i)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeBoundFn {
    kind: BoundKind,
    shift: u64,
}

impl DegreeBoundFn {
    pub fn new(kind: BoundKind) -> Result<Self, ChainError> {
        match &kind {
            BoundKind::Affine { a, b } if a + b == 0 => {
                return Err(ChainError::InvalidArgument("affine bound needs f(1) >= 1".into()))
            }
            BoundKind::Geometric { a, b } if *a == 0 || *b == 0 => {
                return Err(ChainError::InvalidArgument("geometric bound needs a, b >= 1".into()))
            }
            BoundKind::Table(t) => {
                if t.is_empty() || t[0] == 0 {
                    return Err(ChainError::InvalidArgument("table bound needs f(1) >= 1".into()));
                }
                if t.windows(2).any(|w| w[0] > w[1]) {
                    return Err(ChainError::InvalidArgument("table bound must be nondecreasing".into()));
                }
            }
            _ => {}
        }
        Ok(DegreeBoundFn { kind, shift: 0 })
    }

    pub fn affine(a: u64, b: u64) -> Result<Self, ChainError> {
        Self::new(BoundKind::Affine { a, b })
    }

    pub fn geometric(a: u64, b: u64) -> Result<Self, ChainError> {
        Self::new(BoundKind::Geometric { a, b })
    }

    pub fn constant(c: u64) -> Result<Self, ChainError> {
        Self::new(BoundKind::Affine { a: 0, b: c })
    }

    pub fn table(values: Vec<u64>) -> Result<Self, ChainError> {
        Self::new(BoundKind::Table(values))
    }

    pub fn kind(&self) -> &BoundKind {
        &self.kind
    }

    pub fn shift_offset(&self) -> u64 {
        self.shift
    }

    /// `f_{+m}`; shifts compose additively.
    pub fn shifted(&self, m: u64) -> Self {
        DegreeBoundFn {
            kind: self.kind.clone(),
            shift: self.shift + m,
        }
    }

    /// `f(i)` for `i >= 1`.
    pub fn value(&self, i: u64) -> BigUint {
        let j = i + self.shift;
        match &self.kind {
            BoundKind::Affine { a, b } => BigUint::from(*a) * j + *b,
            BoundKind::Geometric { a, b } => {
                let e = (j.max(1) - 1).to_u32().expect("geometric exponent overflow");
                BigUint::from(*a) * BigUint::from(*b).pow(e)
            }
            BoundKind::Table(t) => {
                let idx = (j.max(1) - 1).min(t.len() as u64 - 1) as usize;
                BigUint::from(t[idx])
            }
        }
    }

    /// `f(i)` as a machine integer, if it fits.
    pub fn value_u64(&self, i: u64) -> Option<u64> {
        self.value(i).to_u64()
    }

    /// True iff `f(j) = f(i)` for all `j >= i`.
    pub fn constant_from(&self, i: u64) -> bool {
        let j = i + self.shift;
        match &self.kind {
            BoundKind::Affine { a, .. } => *a == 0,
            BoundKind::Geometric { b, .. } => *b == 1,
            BoundKind::Table(t) => j >= t.len() as u64,
        }
    }

    /// The pointwise minimum with a constant, as a table covering every index
    /// up to where `f` reaches the cap (or becomes constant).
    pub fn capped(&self, cap: u64) -> Result<Self, ChainError> {
        let mut vals = Vec::new();
        let mut i = 1;
        loop {
            let v = self.value(i).min(BigUint::from(cap)).to_u64().unwrap();
            vals.push(v);
            if v >= cap || self.constant_from(i) {
                break;
            }
            i += 1;
        }
        Self::table(vals)
    }
}

impl fmt::Display for DegreeBoundFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BoundKind::Affine { a, b } => write!(f, "f(i) = {a}*i + {b}")?,
            BoundKind::Geometric { a, b } => write!(f, "f(i) = {a}*{b}^(i-1)")?,
            BoundKind::Table(t) => write!(f, "f = {t:?} (last value repeated)")?,
        }
        if self.shift > 0 {
            write!(f, " shifted by {}", self.shift)?;
        }
        Ok(())
    }
}
