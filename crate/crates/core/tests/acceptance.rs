//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyterm::chain_bound::{
    chain_bound, hat_sequence, hilbert_machine, hilbert_value, inc, omega, DegreeBoundFn, MonomialIdealBasis,
};
use polyterm::corpus::CORPUS;
use polyterm::nti::{input_set_check, n_nti_basis, nti_groebner, nti_variety, AnalysisLimits, InputSetStatus};
use polyterm::poly::{
    groebner, ideal_is_trivial, reduce, s_polynomial, Monomial, MonomialOrder, PolyLimits, PolySet, Polynomial,
    Rational,
};
use polyterm::program::{parse_polynomial, parse_program, Program};
use polyterm::sim::{dn_member_bruteforce, SimError};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    for (name, p) in corpus_programs() {
        let want = CORPUS.iter().find(|c| c.0 == name).unwrap().2;
        let start = Instant::now();
        let r = nti_groebner(&p, &AnalysisLimits::default()).map_err(|e| format!("{name}: {e}"))?;
        let t = start.elapsed();
        ensure(r.index == want, || format!("{name}: N̂ = {}, expected {want}", r.index))?;
        ensure(t < Duration::from_secs(60), || format!("{name}: took {t:.1?}"))?;
        parts.push(format!("{name}={} ({:.2}s)", r.index, t.as_secs_f64()));
    }
    Ok(parts.join(", "))
}

fn criterion_2() -> Outcome {
    let limits = AnalysisLimits::default();
    let mut parts = Vec::new();
    for (name, want) in [("running", 1), ("liu1", 0), ("liu2", 0)] {
        let p = polyterm::corpus::corpus_program(name).unwrap();
        let r = nti_variety(&p, &limits).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.index == want, || format!("{name}: N = {}, expected {want}", r.index))?;
        parts.push(format!("{name} N={}", r.index));
    }
    let p = parse_program("vars: x, y; while (x^2 + y^2 == 0) { (x, y) := (x, x + y); }").unwrap();
    let n = nti_variety(&p, &limits).map_err(|e| e.to_string())?.index;
    let n_hat = nti_groebner(&p, &limits).map_err(|e| e.to_string())?.index;
    ensure((n, n_hat) == (1, 2), || format!("remark program: N = {n}, N̂ = {n_hat}"))?;
    parts.push(format!("remark N={n} N̂={n_hat}"));
    Ok(parts.join(", "))
}

fn criterion_3() -> Outcome {
    let p = polyterm::corpus::corpus_program("running").unwrap();
    let r = nti_groebner(&p, &AnalysisLimits::default()).map_err(|e| e.to_string())?;
    let nti = [pt(&[0, 0]), pt(&[1, -1]), pt(&[-1, 1])];
    for v in &nti {
        ensure(r.basis.vanishes_at(v).unwrap(), || {
            format!("basis does not vanish at {v:?}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tried = 0;
    while tried < 20 {
        let v = random_point(&mut rng, 2);
        if nti.contains(&v) {
            continue;
        }
        tried += 1;
        let pin = [0, 1].map(|i| &Polynomial::var(2, i) - &Polynomial::constant(2, v[i].clone()));
        let s = r.basis.with(pin).unwrap();
        ensure(ideal_is_trivial(&s).unwrap(), || format!("{v:?} is a common zero"))?;
    }
    let c = PolySet::new(2, [parse_polynomial("x^2 + y", p.names()).unwrap()]).unwrap();
    let status = input_set_check(&p, &r, &c).map_err(|e| e.to_string())?;
    ensure(status == InputSetStatus::NonEmpty, || format!("x^2+y gave {status:?}"))?;
    Ok("3 NTI points, 20 random points excluded, x^2+y NonEmpty".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    ensure(inc(&big(11), 3) == big(16), || {
        format!("inc(11,3) = {}", inc(&big(11), 3))
    })?;
    let cap = 1_000_000;
    let l1 = chain_bound(2, &DegreeBoundFn::affine(1, 1).unwrap(), cap).map_err(|e| e.to_string())?;
    ensure(l1 == big(11), || format!("L(2, i+1) = {l1}"))?;
    let l2 = chain_bound(2, &DegreeBoundFn::geometric(2, 3).unwrap(), cap).map_err(|e| e.to_string())?;
    ensure(l2 == big(4382), || format!("L(2, 2·3^(i-1)) = {l2}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let f = match rng.gen_range(0..3) {
            0 => DegreeBoundFn::affine(rng.gen_range(0..4), rng.gen_range(1..6)),
            1 => DegreeBoundFn::geometric(rng.gen_range(1..4), rng.gen_range(1..4)),
            _ => {
                let mut t: Vec<u64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(1..10)).collect();
                t.sort_unstable();
                DegreeBoundFn::table(t)
            }
        }
        .unwrap();
        for d in 0..=4 {
            let w = omega(d, &f, 0, cap).map_err(|e| format!("Ω({d}, {f}, 0): {e}"))?;
            ensure(w == big(1), || format!("Ω({d}, {f}, 0) = {w}"))?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:.1?}"))?;
    Ok(format!(
        "inc(11,3)=16, L=11, L=4382, Ω(d,f,0)=1 ({:.3}s)",
        t.as_secs_f64()
    ))
}

/// Named points plus 50 seeded random points per program.
fn sample(name: &str, nvars: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = named_points(name);
    pts.extend((0..50).map(|_| random_point(&mut rng, nvars)));
    pts
}

/// `B_0..=B_3` for every corpus program, shared by criteria 5 and 6.
type Chains = Result<Vec<(&'static str, Program, Vec<PolySet>)>, String>;

fn chains() -> &'static Chains {
    static CHAINS: OnceLock<Chains> = OnceLock::new();
    CHAINS.get_or_init(|| {
        corpus_programs()
            .into_iter()
            .map(|(name, p)| {
                let chain = (0..=3)
                    .map(|n| n_nti_basis(&p, n).map_err(|e| format!("{name}: {e}")))
                    .collect::<Result<_, _>>()?;
                Ok((name, p, chain))
            })
            .collect()
    })
}

fn criterion_5() -> Outcome {
    let (mut checked, mut capped) = (0, 0);
    for (k, (name, p, chain)) in chains().as_ref().map_err(Clone::clone)?.iter().enumerate() {
        for v in sample(name, p.nvars(), 50 + k as u64) {
            for (n, b) in chain.iter().enumerate() {
                let brute = match dn_member_bruteforce(p, &v, n) {
                    Ok(m) => m,
                    Err(SimError::ResourceLimitExceeded(_)) => {
                        capped += 1;
                        continue;
                    }
                    Err(e) => return Err(e.to_string()),
                };
                let alg = b.vanishes_at(&v).unwrap();
                ensure(alg == brute, || {
                    format!("{name}, n = {n}, v = {v:?}: basis {alg}, paths {brute}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} checks agree, {capped} skipped at node caps"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for (k, (name, p, chain)) in chains().as_ref().map_err(Clone::clone)?.iter().enumerate() {
        for v in sample(name, p.nvars(), 50 + k as u64) {
            for n in 0..=2 {
                let here = chain[n].vanishes_at(&v).unwrap();
                let step = (0..p.num_branches()).any(|a| {
                    let w = p.branch(a).apply(&v).unwrap();
                    chain[n].vanishes_at(&w).unwrap()
                });
                let next = chain[n + 1].vanishes_at(&v).unwrap();
                ensure(next == (here && step), || format!("{name}, n = {n}, v = {v:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} checks agree"))
}

fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_deg: u32) -> Polynomial {
    loop {
        let terms: Vec<(Vec<u32>, i64)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let deg = rng.gen_range(0..=max_deg);
                let mut e = vec![0u32; nvars];
                for _ in 0..deg {
                    e[rng.gen_range(0..nvars)] += 1;
                }
                (e, rng.gen_range(-5..=5))
            })
            .collect();
        let f = poly_from(nvars, &terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let order = MonomialOrder::DegLex;
    let limits = PolyLimits::default();
    for i in 0..200 {
        let d = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=4)).map(|_| random_poly(&mut rng, d, 4)).collect();
        let p = PolySet::new(d, gens).unwrap();
        let g = groebner(&p, order, &limits).map_err(|e| format!("ideal {i}: {e}"))?;
        for f in p.iter() {
            ensure(reduce(f, g.polys(), order).unwrap().is_zero(), || {
                format!("ideal {i}: generator not reduced")
            })?;
        }
        for (j, a) in g.iter().enumerate() {
            for b in &g.polys()[j + 1..] {
                let s = s_polynomial(a, b, order).unwrap();
                ensure(reduce(&s, g.polys(), order).unwrap().is_zero(), || {
                    format!("ideal {i}: S-polynomial")
                })?;
            }
        }
        let again = groebner(&g, order, &limits).map_err(|e| format!("ideal {i}: {e}"))?;
        ensure(again.polys() == g.polys(), || format!("ideal {i}: not idempotent"))?;
    }
    Ok("200 ideals".into())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for i in 0..100 {
        let d = rng.gen_range(1..=4);
        let gens: Vec<Monomial> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let deg = rng.gen_range(0..=5);
                let mut e = vec![0u32; d];
                for _ in 0..deg {
                    e[rng.gen_range(0..d)] += 1;
                }
                Monomial::new(e)
            })
            .collect();
        let m = MonomialIdealBasis::new(d, gens);
        let lo = m.max_degree();
        for n in lo..=lo + 4 {
            let h = hilbert_value(&m, n, d).map_err(|e| e.to_string())?;
            let next = hilbert_value(&m, n + 1, d).map_err(|e| e.to_string())?;
            // Level 0 only occurs for the unit ideal, where H vanishes.
            let bound = if n == 0 { big(0) } else { inc(&h, n as u64) };
            ensure(next <= bound, || {
                format!("ideal {i}: H({}) = {next} > Inc_{n}({h}) = {bound}", n + 1)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} inequalities hold"))
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    let fs = [
        ("i+1", DegreeBoundFn::affine(1, 1)),
        ("i+2", DegreeBoundFn::affine(1, 2)),
        ("2", DegreeBoundFn::constant(2)),
        ("3", DegreeBoundFn::constant(3)),
    ];
    for d in [2u64, 3] {
        for (label, f) in &fs {
            let f = f.clone().unwrap().capped(8).unwrap();
            let hat = hat_sequence(d as usize, &f, 1_000_000)
                .map_err(|e| e.to_string())?
                .len();
            let machine = hilbert_machine(d, &f, &big(0), 1_000_000).map_err(|e| e.to_string())?;
            ensure(big(hat as u64) == machine, || {
                format!("D = {d}, f = {label}: hat {hat}, machine {machine}")
            })?;
            parts.push(format!("D={d} f={label}: {hat}"));
        }
    }
    let tables = all_tables(4, 4);
    for t in &tables {
        let f = DegreeBoundFn::table(t.clone()).unwrap();
        let longest = longest_generating_2vars(t);
        let bound = chain_bound(1, &f, 1_000_000).map_err(|e| e.to_string())?;
        ensure(big(longest as u64) <= bound, || {
            format!("f = {t:?}: sequence of {longest} > L = {bound}")
        })?;
    }
    parts.push(format!("exhaustive search within L(1,f) for {} tables", tables.len()));
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("corpus fixpoint indices (Gröbner chain)", criterion_1),
        ("variety chain spot checks", criterion_2),
        ("running example end to end", criterion_3),
        ("chain-bound calibration", criterion_4),
        ("basis membership vs path enumeration", criterion_5),
        ("back-step property", criterion_6),
        ("Gröbner core properties", criterion_7),
        ("Macaulay inequality", criterion_8),
        ("hat sequence vs machine", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title} [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title} [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
