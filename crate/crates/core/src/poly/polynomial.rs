use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, PolyError, PolyLimits, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: Rational,
}

/// A sparse polynomial over the rationals in a fixed number of variables.
///
/// Terms are kept sorted by descending [`MonomialOrder::DegLex`] with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Term>,
}

fn mismatch(expected: usize, found: usize) -> PolyError {
    PolyError::DimensionMismatch { expected, found }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(mono: Monomial, coeff: Rational) -> Self {
        let nvars = mono.nvars();
        if coeff.is_zero() {
            return Polynomial::zero(nvars);
        }
        Polynomial {
            nvars,
            terms: vec![Term { mono, coeff }],
        }
    }

    /// The variable `x_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Self {
        Polynomial::monomial(Monomial::var(nvars, var, 1), Rational::one())
    }

    /// Collects arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial dimension mismatch");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Polynomial::from_accumulator(nvars, acc)
    }

    fn from_accumulator(nvars: usize, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { mono, coeff })
            .collect();
        terms.sort_unstable_by(|a, b| MonomialOrder::DegLex.cmp(&b.mono, &a.mono));
        Polynomial { nvars, terms }
    }

    /// Builds from terms that are already sorted by descending `order` with
    /// distinct monomials and nonzero coefficients.
    pub(crate) fn from_sorted_terms(nvars: usize, mut terms: Vec<Term>, order: MonomialOrder) -> Self {
        if order != MonomialOrder::DegLex {
            terms.sort_unstable_by(|a, b| MonomialOrder::DegLex.cmp(&b.mono, &a.mono));
        }
        Polynomial { nvars, terms }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.first().map(|t| t.mono.degree()).unwrap_or(0)
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some(t) if t.mono.is_one() => t.coeff.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<&Term> {
        match order {
            MonomialOrder::DegLex => self.terms.first(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.mono, &b.mono)),
        }
    }

    fn check_dim(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(mismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other)?;
        Ok(Polynomial {
            nvars: self.nvars,
            terms: merge_terms(&self.terms, &other.terms, None, MonomialOrder::DegLex),
        })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other)?;
        Ok(Polynomial {
            nvars: self.nvars,
            terms: merge_terms(
                &self.terms,
                &other.terms,
                Some(&-Rational::one()),
                MonomialOrder::DegLex,
            ),
        })
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.nvars));
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let t = &small.terms[0];
            return Ok(large.mul_term(&t.mono, &t.coeff));
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(small.len() * large.len());
        for a in &small.terms {
            for b in &large.terms {
                let c = &a.coeff * &b.coeff;
                acc.entry(a.mono.mul(&b.mono)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        Ok(Polynomial::from_accumulator(self.nvars, acc))
    }

    /// Product with a size check on the result.
    pub fn mul_limited(&self, other: &Polynomial, limits: &PolyLimits) -> Result<Polynomial, PolyError> {
        self.check_dim(other)?;
        if !self.is_zero() && !other.is_zero() {
            limits.check_degree(self.degree() + other.degree())?;
        }
        let p = self.try_mul(other)?;
        limits.check_terms(p.len())?;
        Ok(p)
    }

    /// `coeff * mono * self`.
    pub fn mul_term(&self, mono: &Monomial, coeff: &Rational) -> Polynomial {
        if coeff.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.mul(mono),
                    coeff: &t.coeff * coeff,
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some(t) if t.coeff.is_one() => self.clone(),
            Some(t) => self.scale(&t.coeff.recip()),
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(mismatch(self.nvars, point.len()));
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut sum = Rational::zero();
        for t in &self.terms {
            let mut prod = t.coeff.clone();
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &point[i];
                    table.push(next);
                }
                prod *= &table[e as usize];
            }
            sum += prod;
        }
        Ok(sum)
    }

    /// True iff the polynomial vanishes at `point`.
    pub fn vanishes_at(&self, point: &[Rational]) -> Result<bool, PolyError> {
        Ok(self.evaluate(point)?.is_zero())
    }

    /// Substitutes component `i` of `map` for variable `i`.
    pub fn compose(&self, map: &PolyMap) -> Result<Polynomial, PolyError> {
        self.compose_limited(map, &PolyLimits::unlimited())
    }

    pub fn compose_limited(&self, map: &PolyMap, limits: &PolyLimits) -> Result<Polynomial, PolyError> {
        if map.nvars() != self.nvars || map.len() != self.nvars {
            return Err(mismatch(self.nvars, map.len()));
        }
        let map_degree = map.degree();
        limits.check_degree(self.degree().saturating_mul(map_degree.max(1)))?;
        let target = map.nvars();
        let mut powers: Vec<Vec<Polynomial>> = map
            .components()
            .iter()
            .map(|c| vec![Polynomial::one(target), c.clone()])
            .collect();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for t in &self.terms {
            let mut prod = Polynomial::constant(target, t.coeff.clone());
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &map.components()[i];
                    limits.check_terms(next.len())?;
                    table.push(next);
                }
                prod = &prod * &table[e as usize];
                limits.check_terms(prod.len())?;
            }
            for term in prod.terms {
                acc.entry(term.mono)
                    .and_modify(|c| *c += &term.coeff)
                    .or_insert(term.coeff);
            }
            limits.check_terms(acc.len())?;
            limits.check_deadline()?;
        }
        Ok(Polynomial::from_accumulator(target, acc))
    }

    /// The same polynomial viewed in a ring with `extra` more trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.extend(extra),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    /// Renders with the given variable names (falls back to `x1, x2, ...`).
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = t.mono.fmt_with(names);
            if t.mono.is_one() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Merges two term lists sorted by descending `order`, computing
/// `a + factor * b` (or `a + b` without a factor).
pub(crate) fn merge_terms(a: &[Term], b: &[Term], factor: Option<&Rational>, order: MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let scaled = |t: &Term| match factor {
        Some(f) => &t.coeff * f,
        None => t.coeff.clone(),
    };
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].mono, &b[j].mono) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push(Term {
                    mono: b[j].mono.clone(),
                    coeff: scaled(&b[j]),
                });
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &a[i].coeff + scaled(&b[j]);
                if !c.is_zero() {
                    out.push(Term {
                        mono: a[i].mono.clone(),
                        coeff: c,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|t| Term {
        mono: t.mono.clone(),
        coeff: scaled(t),
    }));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(kind: ArithKind, p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    match kind {
        ArithKind::Add => p.try_add(q),
        ArithKind::Sub => p.try_sub(q),
        ArithKind::Mul => p.try_mul(q),
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = default_names(self.nvars);
        write!(f, "{}", self.fmt_with(&names))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

/// `x, y, z` for up to three variables, otherwise `x1, x2, ...`.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// A polynomial self-map of `K^d`: component `i` is the new value of `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, PolyError> {
        let d = components.len();
        for c in &components {
            if c.nvars() != d {
                return Err(mismatch(d, c.nvars()));
            }
        }
        Ok(PolyMap { components })
    }

    pub fn identity(nvars: usize) -> Self {
        PolyMap {
            components: (0..nvars).map(|i| Polynomial::var(nvars, i)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Maximum component degree.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn apply(&self, point: &[Rational]) -> Result<Vec<Rational>, PolyError> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn after(&self, inner: &PolyMap) -> Result<PolyMap, PolyError> {
        self.after_limited(inner, &PolyLimits::unlimited())
    }

    pub fn after_limited(&self, inner: &PolyMap, limits: &PolyLimits) -> Result<PolyMap, PolyError> {
        if inner.nvars() != self.nvars() {
            return Err(mismatch(self.nvars(), inner.nvars()));
        }
        Ok(PolyMap {
            components: self
                .components
                .iter()
                .map(|c| c.compose_limited(inner, limits))
                .collect::<Result<_, _>>()?,
        })
    }
}
