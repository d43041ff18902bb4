use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{binom_count, ChainError, DegreeBoundFn};
use crate::poly::Monomial;

/// Upper limit on monomials visited by the enumerating routines.
const ENUM_CAP: u64 = 20_000_000;

/// Minimal monomial generators of a monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdealBasis {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdealBasis {
    /// Drops generators divisible by others (and duplicates).
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        assert!(all.iter().all(|m| m.nvars() == nvars), "monomial dimension mismatch");
        all.sort_by_key(|m| m.degree());
        let mut out: Vec<Monomial> = Vec::new();
        for m in all {
            if !out.iter().any(|g| g.divides(&m)) {
                out.push(m);
            }
        }
        MonomialIdealBasis { nvars, gens: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Largest generator degree (0 when empty).
    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }
}

/// Visits all exponent vectors of total degree `n` in `d` variables in
/// descending lexicographic order (`x_1` most significant). The callback
/// returns `true` to stop. `prune(prefix, rest)` may skip a whole subtree.
fn for_each_monomial<F, P>(d: usize, n: u32, prune: P, mut visit: F) -> Result<bool, ChainError>
where
    F: FnMut(&[u32]) -> bool,
    P: Fn(&[u32], u32) -> bool,
{
    fn rec<F: FnMut(&[u32]) -> bool, P: Fn(&[u32], u32) -> bool>(
        exps: &mut Vec<u32>,
        d: usize,
        rest: u32,
        prune: &P,
        visit: &mut F,
        budget: &mut u64,
    ) -> Result<bool, ChainError> {
        if exps.len() + 1 == d {
            exps.push(rest);
            if *budget == 0 {
                return Err(ChainError::ResourceLimitExceeded("monomial enumeration cap".into()));
            }
            *budget -= 1;
            let stop = visit(exps);
            exps.pop();
            return Ok(stop);
        }
        for e in (0..=rest).rev() {
            exps.push(e);
            let skip = prune(exps, rest - e);
            if !skip && rec(exps, d, rest - e, prune, visit, budget)? {
                exps.pop();
                return Ok(true);
            }
            exps.pop();
        }
        Ok(false)
    }
    if d == 0 {
        return Ok(n == 0 && visit(&[]));
    }
    let mut budget = ENUM_CAP;
    rec(&mut Vec::with_capacity(d), d, n, &prune, &mut visit, &mut budget)
}

/// `H_I(n)`: the number of degree-`n` monomials in `d` variables outside `M`.
pub fn hilbert_value(m: &MonomialIdealBasis, n: u32, d: usize) -> Result<BigUint, ChainError> {
    if m.nvars() != d {
        return Err(ChainError::InvalidArgument(format!(
            "ideal has {} variables, expected {d}",
            m.nvars()
        )));
    }
    if d == 0 {
        let unit = m.gens().iter().any(Monomial::is_one);
        return Ok(BigUint::from(u32::from(n == 0 && !unit)));
    }
    if m.gens().is_empty() {
        return Ok(binom_count(n as u64, d as u64 - 1));
    }
    let mut count = 0u64;
    // A subtree is dead when some generator divides the prefix alone.
    let prune = |prefix: &[u32], _rest: u32| {
        m.gens().iter().any(|g| {
            let e = g.exponents();
            e[prefix.len()..].iter().all(|&x| x == 0) && e.iter().zip(prefix).all(|(a, b)| a <= b)
        })
    };
    for_each_monomial(d, n, prune, |exps| {
        let mono = Monomial::new(exps.iter().copied());
        if !m.contains(&mono) {
            count += 1;
        }
        false
    })?;
    Ok(BigUint::from(count))
}

/// The canonical f-generating sequence in `d` variables: each new monomial is
/// the lexicographically greatest monomial of degree `f(i)` outside the ideal
/// of its predecessors. Stops after `max_len` elements or when no such
/// monomial exists.
pub fn hat_sequence(d: usize, f: &DegreeBoundFn, max_len: usize) -> Result<Vec<Monomial>, ChainError> {
    let mut seq: Vec<Monomial> = Vec::new();
    for i in 1..=max_len as u64 {
        let deg = f
            .value(i)
            .to_u32()
            .filter(|&v| v <= 1 << 20)
            .ok_or_else(|| ChainError::ResourceLimitExceeded(format!("degree f({i}) too large to enumerate")))?;
        let mut found: Option<Monomial> = None;
        let prune = |prefix: &[u32], _rest: u32| {
            seq.iter().any(|g| {
                let e = g.exponents();
                e[prefix.len()..].iter().all(|&x| x == 0) && e.iter().zip(prefix).all(|(a, b)| a <= b)
            })
        };
        for_each_monomial(d, deg, prune, |exps| {
            let mono = Monomial::new(exps.iter().copied());
            if seq.iter().any(|g| g.divides(&mono)) {
                false
            } else {
                found = Some(mono);
                true
            }
        })?;
        match found {
            Some(m) => seq.push(m),
            None => break,
        }
    }
    Ok(seq)
}
