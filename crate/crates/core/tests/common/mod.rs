#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

use polyterm::corpus::CORPUS;
use polyterm::poly::{rat, Monomial, PolySet, Polynomial, Rational};
use polyterm::program::{parse_point, Program};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pt(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| rat(c)).collect()
}

pub fn poly_from(nvars: usize, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        terms.iter().map(|(e, c)| (Monomial::new(e.iter().copied()), rat(*c))),
    )
}

/// A polynomial in `nvars` variables with at most `max_terms` terms of total
/// degree at most `max_deg` and small integer coefficients.
pub fn arb_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_deg, nvars), -4i64..=4).prop_map(move |(mut e, c)| {
        // Scale exponents down until the total degree fits.
        while e.iter().sum::<u32>() > max_deg {
            if let Some(x) = e.iter_mut().max() {
                *x -= 1;
            }
        }
        (e, c)
    });
    prop::collection::vec(term, 1..=max_terms).prop_map(move |ts| poly_from(nvars, &ts))
}

pub fn arb_nonzero_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    arb_poly(nvars, max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => (-3i64..=3).prop_map(rat),
        1 => (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d)),
    ]
}

pub fn arb_point(nvars: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(arb_rational(), nvars)
}

/// Same distribution as [`arb_rational`] for seeded non-proptest sampling.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_range(0..4) < 3 {
        rat(rng.gen_range(-3..=3))
    } else {
        q(rng.gen_range(-9..=9), rng.gen_range(1..=5))
    }
}

pub fn random_point<R: Rng>(rng: &mut R, nvars: usize) -> Vec<Rational> {
    (0..nvars).map(|_| random_rational(rng)).collect()
}

/// Hand-picked inputs for each corpus program: points on the guard, the
/// non-terminating inputs where known, and a few near misses.
pub fn named_points(name: &str) -> Vec<Vec<Rational>> {
    let pts: &[&str] = match name {
        "running" => &["0,0", "1,-1", "-1,1", "2,0", "1/2,-1/2", "2,-2", "3,-3"],
        "liu1" => &["0,1", "1,2", "-1,2", "2,5", "1/2,5/4", "0,0"],
        "liu2" => &["0,0", "1,-1", "-1,1", "2,-2", "1/3,-1/3"],
        "loop" => &["2,0", "6,0", "4,1", "0,0", "2,1"],
        "liu3" => &["1", "2", "0", "-1", "3", "1/2"],
        "ineq" => &["0,0", "1,1", "1,-1", "4,2", "4,-2", "9,3", "1/4,1/2"],
        "prod" => &["1,1,0", "1,1,1", "2,1,0", "1/2,1,0", "0,0,0"],
        "liu4" => &["1,1,1", "0,0,0", "8,4,2", "-1,1,-1", "1,2,1", "8,0,2", "27,9,3"],
        "var4" => &["0,0,0,0", "1,-1,0,0", "0,1,-1,0", "-2,0,1,1", "1,1,1,-3", "0,0,1,-1"],
        _ => &[],
    };
    pts.iter().map(|s| parse_point(s).unwrap()).collect()
}

pub fn corpus_programs() -> Vec<(&'static str, Program)> {
    CORPUS
        .iter()
        .map(|(n, _, _)| (*n, polyterm::corpus::corpus_program(n).unwrap()))
        .collect()
}

pub fn set(nvars: usize, polys: impl IntoIterator<Item = Polynomial>) -> PolySet {
    PolySet::new(nvars, polys).unwrap()
}

/// Longest f-generating sequence in two variables, by exhaustive search:
/// `m_i` has degree exactly `f(i)` and lies outside the ideal of
/// `m_1, …, m_{i-1}`. `f` is a nondecreasing table, last value repeated.
pub fn longest_generating_2vars(f: &[u64]) -> usize {
    fn go(f: &[u64], seq: &mut Vec<(u32, u32)>) -> usize {
        let i = seq.len();
        let deg = f[i.min(f.len() - 1)] as u32;
        let mut best = i;
        for a in 0..=deg {
            let m = (a, deg - a);
            if seq.iter().any(|&(p, q)| p <= m.0 && q <= m.1) {
                continue;
            }
            seq.push(m);
            best = best.max(go(f, seq));
            seq.pop();
        }
        best
    }
    go(f, &mut Vec::new())
}

/// Every nondecreasing table of length `1..=max_len` with entries in `1..=top`.
pub fn all_tables(max_len: usize, top: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<u64>> = (1..=top).map(|v| vec![v]).collect();
    for _ in 0..max_len {
        out.extend(frontier.iter().cloned());
        frontier = frontier
            .iter()
            .flat_map(|t| (*t.last().unwrap()..=top).map(move |v| [t.as_slice(), &[v]].concat()))
            .collect();
    }
    out
}
