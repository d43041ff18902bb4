use std::borrow::Borrow;

use num_bigint::{BigInt, BigUint, Sign};
use rug::integer::Order;
use rug::{Integer, Rational as Q};

use super::{Monomial, MonomialOrder, PolyError, PolyLimits, PolySet, Polynomial, Rational, Term};

// Division and Buchberger run on GMP rationals; intermediate coefficients can
// reach thousands of bits and normalising them dominates the running time.
#[derive(Clone, Debug)]
struct WTerm {
    mono: Monomial,
    coeff: Q,
}

/// Terms sorted by descending `order`; the working representation for division.
type Work = Vec<WTerm>;

fn int_to_gmp(v: &BigInt) -> Integer {
    let (sign, digits) = v.to_u32_digits();
    let n = Integer::from_digits(&digits, Order::Lsf);
    if sign == Sign::Minus {
        -n
    } else {
        n
    }
}

fn int_from_gmp(v: &Integer) -> BigInt {
    let mag = BigUint::new(v.to_digits::<u32>(Order::Lsf));
    let sign = if *v < 0 { Sign::Minus } else { Sign::Plus };
    BigInt::from_biguint(sign, mag)
}

fn to_gmp(r: &Rational) -> Q {
    Q::from((int_to_gmp(r.numer()), int_to_gmp(r.denom())))
}

fn from_gmp(q: &Q) -> Rational {
    Rational::new_raw(int_from_gmp(q.numer()), int_from_gmp(q.denom()))
}

fn to_work(p: &Polynomial, order: MonomialOrder) -> Work {
    let mut terms: Work = p
        .terms()
        .iter()
        .map(|t| WTerm {
            mono: t.mono.clone(),
            coeff: to_gmp(&t.coeff),
        })
        .collect();
    if order != MonomialOrder::DegLex {
        terms.sort_unstable_by(|a, b| order.cmp(&b.mono, &a.mono));
    }
    terms
}

fn from_work(nvars: usize, w: &[WTerm], order: MonomialOrder) -> Polynomial {
    let terms = w
        .iter()
        .map(|t| Term {
            mono: t.mono.clone(),
            coeff: from_gmp(&t.coeff),
        })
        .collect();
    Polynomial::from_sorted_terms(nvars, terms, order)
}

fn make_monic(mut w: Work) -> Work {
    if let Some(lc) = w.first().map(|t| t.coeff.clone()) {
        if lc != 1 {
            let inv = lc.recip();
            for t in &mut w {
                t.coeff *= &inv;
            }
        }
    }
    w
}

/// `a + c * m * b`, both sorted descending.
fn merge_scaled(a: &[WTerm], b: &[WTerm], c: &Q, m: &Monomial, order: MonomialOrder) -> Work {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while j < b.len() {
        let bm = b[j].mono.mul(m);
        while i < a.len() && order.cmp(&a[i].mono, &bm) == std::cmp::Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
        }
        let mut coeff = Q::from(c * &b[j].coeff);
        if i < a.len() && a[i].mono == bm {
            coeff += &a[i].coeff;
            i += 1;
            if coeff == 0 {
                j += 1;
                continue;
            }
        }
        out.push(WTerm { mono: bm, coeff });
        j += 1;
    }
    out.extend_from_slice(&a[i..]);
    out
}

/// Full division of `p` by `basis` (each element monic, sorted by `order`).
/// Among several eligible divisors the one with the smallest leading monomial is used.
fn reduce_work<W: Borrow<Work>>(
    p: Work,
    basis: &[W],
    order: MonomialOrder,
    limits: &PolyLimits,
) -> Result<Work, PolyError> {
    let mut p = p;
    let mut start = 0;
    let mut rem: Work = Vec::new();
    let mut steps = 0usize;
    while start < p.len() {
        let lead = &p[start];
        let divisor = basis
            .iter()
            .map(Borrow::borrow)
            .filter(|g| g.first().is_some_and(|lt| lt.mono.divides(&lead.mono)))
            .min_by(|a, b| order.cmp(&a[0].mono, &b[0].mono));
        match divisor {
            Some(g) => {
                let q = lead.mono.div(&g[0].mono).expect("divisibility checked");
                let c = -Q::from(&lead.coeff / &g[0].coeff);
                p = merge_scaled(&p[start + 1..], &g[1..], &c, &q, order);
                start = 0;
                limits.check_terms(p.len() + rem.len())?;
                steps += 1;
                if steps.is_multiple_of(256) {
                    limits.check_deadline()?;
                }
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(rem)
}

/// Remainder of `f` on division by `basis` under `order`.
///
/// No monomial of the result is divisible by a leading monomial of `basis`,
/// and `f - result` lies in the ideal generated by `basis`. The remainder is
/// canonical when `basis` is a Gröbner basis for `order`.
pub fn reduce(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Result<Polynomial, PolyError> {
    for g in basis {
        if g.nvars() != f.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: f.nvars(),
                found: g.nvars(),
            });
        }
    }
    let work: Vec<Work> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(to_work(g, order)))
        .collect();
    let r = reduce_work(to_work(f, order), &work, order, &PolyLimits::unlimited())?;
    Ok(from_work(f.nvars(), &r, order))
}

pub(crate) fn reduce_limited(f: &Polynomial, basis: &PolySet, limits: &PolyLimits) -> Result<Polynomial, PolyError> {
    let order = basis.groebner_order().unwrap_or_default();
    let work: Vec<Work> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(to_work(g, order)))
        .collect();
    let r = reduce_work(to_work(f, order), &work, order, limits)?;
    Ok(from_work(f.nvars(), &r, order))
}

fn s_poly_work(f: &Work, g: &Work, order: MonomialOrder) -> Work {
    let lf = &f[0];
    let lg = &g[0];
    let lcm = lf.mono.lcm(&lg.mono);
    let mf = lcm.div(&lf.mono).expect("lcm divisible");
    let mg = lcm.div(&lg.mono).expect("lcm divisible");
    let cf = Q::from(lf.coeff.recip_ref());
    let cg = -Q::from(lg.coeff.recip_ref());
    merge_scaled(&merge_scaled(&[], &f[1..], &cf, &mf, order), &g[1..], &cg, &mg, order)
}

/// The S-polynomial of `f` and `g` under `order`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Result<Polynomial, PolyError> {
    if f.nvars() != g.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: f.nvars(),
            found: g.nvars(),
        });
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Polynomial::zero(f.nvars()));
    }
    let s = s_poly_work(&to_work(f, order), &to_work(g, order), order);
    Ok(from_work(f.nvars(), &s, order))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger's algorithm with the Gebauer-Möller pair update.
struct Buchberger<'a> {
    order: MonomialOrder,
    limits: &'a PolyLimits,
    polys: Vec<Work>,
    /// Indices of the current basis; no leading monomial divides another's.
    basis: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'a> Buchberger<'a> {
    fn new(order: MonomialOrder, limits: &'a PolyLimits) -> Self {
        Buchberger {
            order,
            limits,
            polys: Vec::new(),
            basis: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn lm(&self, i: usize) -> &Monomial {
        &self.polys[i][0].mono
    }

    fn reducers(&self) -> Vec<&Work> {
        self.basis.iter().map(|&i| &self.polys[i]).collect()
    }

    /// Adds a nonzero polynomial already reduced against the basis.
    fn add(&mut self, w: Work) -> Result<(), PolyError> {
        let w = make_monic(w);
        let degree = w.iter().map(|t| t.mono.degree()).max().unwrap_or(0);
        self.limits.check_degree(degree)?;
        self.limits.check_terms(w.len())?;
        self.limits.check_basis(self.basis.len() + 1)?;
        let h = self.polys.len();
        self.polys.push(w);
        let mh = self.lm(h).clone();

        // New pairs: drop (h, g) when another candidate's lcm with h divides
        // lcm(h, g), unless the leading monomials are coprime.
        let cands: Vec<(usize, Monomial)> = self.basis.iter().map(|&g| (g, mh.lcm(self.lm(g)))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (k, (g, lcm)) in cands.iter().enumerate() {
            let coprime = mh.is_coprime(self.lm(*g));
            let dominated =
                cands[k + 1..].iter().any(|(_, m)| m.divides(lcm)) || kept.iter().any(|(_, m)| m.divides(lcm));
            if coprime || !dominated {
                kept.push((*g, lcm.clone()));
            }
        }
        // Old pairs: drop (a, b) when lm(h) divides their lcm strictly on both sides.
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let lm = |i: usize| &polys[i][0].mono;
            !mh.divides(&p.lcm) || mh.lcm(lm(p.i)) == p.lcm || mh.lcm(lm(p.j)) == p.lcm
        });
        for (g, lcm) in kept {
            if !mh.is_coprime(self.lm(g)) {
                self.pairs.push(Pair { i: g, j: h, lcm });
            }
        }
        let basis: Vec<usize> = self
            .basis
            .iter()
            .copied()
            .filter(|&g| !mh.divides(self.lm(g)))
            .collect();
        self.basis = basis;
        self.basis.push(h);
        Ok(())
    }

    /// Normal selection: the pair with the smallest lcm.
    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let idx = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            order.cmp(&pa.lcm, &pb.lcm).then((pa.j, pa.i).cmp(&(pb.j, pb.i)))
        })?;
        Some(self.pairs.swap_remove(idx))
    }

    fn run(&mut self) -> Result<(), PolyError> {
        while let Some(Pair { i, j, .. }) = self.next_pair() {
            self.limits.check_deadline()?;
            let s = s_poly_work(&self.polys[i], &self.polys[j], self.order);
            let r = reduce_work(s, &self.reducers(), self.order, self.limits)?;
            if !r.is_empty() {
                self.add(r)?;
            }
        }
        Ok(())
    }

    /// Minimal, tail-reduced, monic basis sorted by descending leading monomial.
    fn finish(self) -> Result<Vec<Work>, PolyError> {
        let order = self.order;
        let mut polys: Vec<Option<Work>> = self.polys.into_iter().map(Some).collect();
        let mut by_lead: Vec<Work> = self.basis.iter().filter_map(|&i| polys[i].take()).collect();
        by_lead.sort_by(|a, b| order.cmp(&a[0].mono, &b[0].mono));
        let mut minimal: Vec<Work> = Vec::new();
        for w in by_lead {
            if !minimal.iter().any(|m| m[0].mono.divides(&w[0].mono)) {
                minimal.push(w);
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<Work> = minimal
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, w)| w.clone())
                .collect();
            let head = minimal[k][0].clone();
            let tail = reduce_work(minimal[k][1..].to_vec(), &others, order, self.limits)?;
            let mut w = Vec::with_capacity(tail.len() + 1);
            w.push(head);
            w.extend(tail);
            reduced.push(make_monic(w));
        }
        reduced.sort_by(|a, b| order.cmp(&b[0].mono, &a[0].mono));
        Ok(reduced)
    }
}

fn finish_set(nvars: usize, works: Vec<Work>, order: MonomialOrder) -> PolySet {
    let polys = works.into_iter().map(|w| from_work(nvars, &w, order)).collect();
    PolySet::reduced_groebner(nvars, polys, order)
}

fn check_dims(nvars: usize, polys: &[Polynomial]) -> Result<(), PolyError> {
    for p in polys {
        if p.nvars() != nvars {
            return Err(PolyError::DimensionMismatch {
                expected: nvars,
                found: p.nvars(),
            });
        }
    }
    Ok(())
}

/// The reduced Gröbner basis of the ideal generated by `polys`.
///
/// Buchberger's algorithm with the coprime and chain criteria and normal
/// pair selection, followed by inter-reduction and monic normalisation.
/// The zero ideal yields the empty basis; a basis containing a constant is
/// returned as `{1}`.
pub fn groebner(polys: &PolySet, order: MonomialOrder, limits: &PolyLimits) -> Result<PolySet, PolyError> {
    groebner_of(polys.nvars(), polys.polys(), order, limits)
}

pub(crate) fn groebner_of(
    nvars: usize,
    polys: &[Polynomial],
    order: MonomialOrder,
    limits: &PolyLimits,
) -> Result<PolySet, PolyError> {
    check_dims(nvars, polys)?;
    if polys.iter().any(Polynomial::is_unit) {
        return Ok(PolySet::reduced_groebner(nvars, vec![Polynomial::one(nvars)], order));
    }
    let mut inputs: Vec<Work> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| to_work(p, order))
        .collect();
    // Low-degree generators first keeps intermediate expressions small.
    inputs.sort_by(|a, b| order.cmp(&a[0].mono, &b[0].mono));
    let mut bb = Buchberger::new(order, limits);
    for w in inputs {
        let r = reduce_work(w, &bb.reducers(), order, limits)?;
        if !r.is_empty() {
            bb.add(r)?;
        }
    }
    bb.run()?;
    Ok(finish_set(nvars, bb.finish()?, order))
}

/// Reduced Gröbner basis of `gb ∪ extra`, reusing the fact that `gb` is
/// already a Gröbner basis (only pairs involving new elements are formed).
pub fn groebner_extend(gb: &PolySet, extra: &[Polynomial], limits: &PolyLimits) -> Result<PolySet, PolyError> {
    let Some(order) = gb.groebner_order() else {
        let all: Vec<Polynomial> = gb.iter().chain(extra.iter()).cloned().collect();
        return groebner_of(gb.nvars(), &all, MonomialOrder::default(), limits);
    };
    let nvars = gb.nvars();
    check_dims(nvars, extra)?;
    if gb.contains_unit() || extra.iter().any(Polynomial::is_unit) {
        return Ok(PolySet::reduced_groebner(nvars, vec![Polynomial::one(nvars)], order));
    }
    let mut bb = Buchberger::new(order, limits);
    for p in gb.iter() {
        bb.add(to_work(p, order))?;
    }
    // Pairs within a Gröbner basis reduce to zero.
    bb.pairs.clear();
    let mut added = false;
    for p in extra.iter().filter(|p| !p.is_zero()) {
        let r = reduce_work(to_work(p, order), &bb.reducers(), order, limits)?;
        if !r.is_empty() {
            bb.add(r)?;
            added = true;
        }
    }
    if !added {
        return Ok(gb.clone());
    }
    bb.run()?;
    Ok(finish_set(nvars, bb.finish()?, order))
}

/// Buchberger's criterion: every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial], order: MonomialOrder) -> Result<bool, PolyError> {
    for (i, f) in basis.iter().enumerate() {
        for g in &basis[i + 1..] {
            let s = s_polynomial(f, g, order)?;
            if !reduce(&s, basis, order)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
