use std::collections::HashSet;

use super::{MonomialOrder, PolyError, Polynomial, Rational};

/// A finite set of polynomials in one ring, used as an ideal basis or as the
/// generators of an algebraic set.
///
/// When `groebner` is set the elements form the reduced Gröbner basis of
/// their ideal under that order, sorted by descending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySet {
    nvars: usize,
    polys: Vec<Polynomial>,
    groebner: Option<MonomialOrder>,
}

impl PolySet {
    /// Deduplicates (keeping first occurrences) and checks dimensions.
    pub fn new(nvars: usize, polys: impl IntoIterator<Item = Polynomial>) -> Result<Self, PolyError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in polys {
            if p.nvars() != nvars {
                return Err(PolyError::DimensionMismatch {
                    expected: nvars,
                    found: p.nvars(),
                });
            }
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(PolySet {
            nvars,
            polys: out,
            groebner: None,
        })
    }

    pub fn empty(nvars: usize) -> Self {
        PolySet {
            nvars,
            polys: Vec::new(),
            groebner: None,
        }
    }

    pub(crate) fn reduced_groebner(nvars: usize, polys: Vec<Polynomial>, order: MonomialOrder) -> Self {
        PolySet {
            nvars,
            polys,
            groebner: Some(order),
        }
    }

    /// The same polynomials in `extra` more trailing variables. Both orders
    /// restrict to the old one on the old ring, so a Gröbner basis stays one.
    pub fn extend_vars(&self, extra: usize) -> PolySet {
        PolySet {
            nvars: self.nvars + extra,
            polys: self.polys.iter().map(|p| p.extend_vars(extra)).collect(),
            groebner: self.groebner,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Polynomial> {
        self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Polynomial> {
        self.polys.iter()
    }

    pub fn is_reduced_groebner(&self) -> bool {
        self.groebner.is_some()
    }

    /// The order of the reduced Gröbner basis, if flagged.
    pub fn groebner_order(&self) -> Option<MonomialOrder> {
        self.groebner
    }

    /// Maximum element degree (0 for the empty set).
    pub fn degree(&self) -> u32 {
        self.polys.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Contains a nonzero constant, so the zero set is empty.
    pub fn contains_unit(&self) -> bool {
        self.polys.iter().any(Polynomial::is_unit)
    }

    /// True iff `point` is a common zero of every element.
    pub fn vanishes_at(&self, point: &[Rational]) -> Result<bool, PolyError> {
        for p in &self.polys {
            if !p.vanishes_at(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn union(&self, other: &PolySet) -> Result<PolySet, PolyError> {
        PolySet::new(self.nvars, self.polys.iter().chain(other.polys.iter()).cloned())
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<PolySet, PolyError> {
        PolySet::new(self.nvars, self.polys.iter().cloned().chain(extra))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.polys.contains(p)
    }

    pub fn fmt_with(&self, names: &[String]) -> Vec<String> {
        self.polys.iter().map(|p| p.fmt_with(names)).collect()
    }
}

impl<'a> IntoIterator for &'a PolySet {
    type Item = &'a Polynomial;
    type IntoIter = std::slice::Iter<'a, Polynomial>;
    fn into_iter(self) -> Self::IntoIter {
        self.polys.iter()
    }
}
