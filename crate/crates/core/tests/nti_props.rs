mod common;

use std::collections::HashMap;
use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;

use polyterm::corpus::{corpus_program, CORPUS};
use polyterm::nti::{
    nti_chain, nti_groebner, nti_variety, point_terminates, AnalysisLimits, NtiResult, TerminationVerdict,
};
use polyterm::poly::{ideal_member, radical_member, PolySet, Rational};
use polyterm::program::Program;
use polyterm::sim::{dn_member_bruteforce, replay};

/// Programs cheap enough to analyse repeatedly; prod and var4 are covered by
/// the acceptance suite.
const FAST: [&str; 7] = ["running", "liu1", "liu2", "loop", "liu3", "ineq", "liu4"];

struct Analysed {
    program: Program,
    /// `B_0, …, B_4`.
    chain: Vec<PolySet>,
    result: NtiResult,
}

fn analysed(name: &str) -> &'static Analysed {
    static CACHE: OnceLock<HashMap<&'static str, Analysed>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        FAST.iter()
            .map(|&n| {
                let p = corpus_program(n).unwrap();
                let limits = AnalysisLimits::default();
                let chain = nti_chain(&p, 4, &limits).unwrap();
                let result = nti_groebner(&p, &limits).unwrap();
                (
                    n,
                    Analysed {
                        program: p,
                        chain,
                        result,
                    },
                )
            })
            .collect()
    })[name]
}

fn expected_index(name: &str) -> u64 {
    CORPUS.iter().find(|(n, _, _)| *n == name).unwrap().2
}

fn contained(small: &PolySet, big: &PolySet) -> bool {
    small.iter().all(|g| ideal_member(g, big).unwrap())
}

fn same_zero_set(a: &PolySet, b: &PolySet) -> bool {
    a.iter().all(|g| radical_member(g, b).unwrap()) && b.iter().all(|g| radical_member(g, a).unwrap())
}

fn arb_case() -> impl Strategy<Value = (&'static str, Vec<Rational>)> {
    (0..FAST.len()).prop_flat_map(|i| {
        let name = FAST[i];
        let n = corpus_program(name).unwrap().nvars();
        let named = named_points(name);
        let pts = prop_oneof![arb_point(n), (0..named.len()).prop_map(move |k| named[k].clone()),];
        (Just(name), pts)
    })
}

#[test]
fn chain_ascends_then_stabilises() {
    for name in FAST {
        let a = analysed(name);
        let n_hat = expected_index(name) as usize;
        assert_eq!(a.result.index as usize, n_hat, "{name}");
        for k in 0..a.chain.len() - 1 {
            assert!(contained(&a.chain[k], &a.chain[k + 1]), "{name}: B_{k} ⊄ B_{}", k + 1);
            // Strict until the fixpoint, equal afterwards.
            let back = contained(&a.chain[k + 1], &a.chain[k]);
            assert_eq!(back, k >= n_hat, "{name}: k = {k}");
        }
        assert!(same_zero_set(&a.result.basis, &a.chain[n_hat]), "{name}");
    }
}

#[test]
fn algorithms_agree() {
    for name in FAST.iter().filter(|&&n| n != "liu4") {
        let a = analysed(name);
        let v = nti_variety(&a.program, &AnalysisLimits::default()).unwrap();
        assert!(
            v.index <= a.result.index,
            "{name}: N = {} > N̂ = {}",
            v.index,
            a.result.index
        );
        assert!(same_zero_set(&v.basis, &a.result.basis), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chain_matches_path_enumeration((name, v) in arb_case(), n in 0usize..=3) {
        let a = analysed(name);
        prop_assert_eq!(
            a.chain[n].vanishes_at(&v).unwrap(),
            dn_member_bruteforce(&a.program, &v, n).unwrap()
        );
    }

    #[test]
    fn back_step((name, v) in arb_case(), n in 0usize..=3) {
        let a = analysed(name);
        let p = &a.program;
        let here = a.chain[n].vanishes_at(&v).unwrap();
        let step = (0..p.num_branches()).any(|b| {
            let w = p.branch(b).apply(&v).unwrap();
            a.chain[n].vanishes_at(&w).unwrap()
        });
        prop_assert_eq!(a.chain[n + 1].vanishes_at(&v).unwrap(), here && step);
    }

    #[test]
    fn verdicts_are_sound((name, v) in arb_case()) {
        let a = analysed(name);
        let p = &a.program;
        match point_terminates(p, &a.result, &v).unwrap() {
            TerminationVerdict::Terminating => {
                // Outside D_N̂ no path runs past N̂ steps.
                prop_assert!(!dn_member_bruteforce(p, &v, a.result.index as usize).unwrap());
            }
            TerminationVerdict::NonTerminating { witness } => {
                prop_assert!(dn_member_bruteforce(p, &v, 4).unwrap());
                if let Some(l) = witness {
                    let start = replay(p, &v, &l, 0).unwrap().expect("stem runs");
                    prop_assert_eq!(replay(p, &v, &l, 3).unwrap(), Some(start));
                }
            }
        }
    }
}
