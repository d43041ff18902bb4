//! Non-terminating input sets: the descending chain `D_0 ⊇ D_1 ⊇ …`, its
//! fixpoint computed on ideals (Gröbner chain) or on varieties (path family),
//! the a-priori bound on the fixpoint index, and point / input-set queries.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::chain_bound::{chain_bound, ChainError, DEFAULT_MACHINE_CAP};
use crate::poly::groebner::reduce_limited;
use crate::poly::{
    groebner, groebner_extend, ideal_is_trivial_with, radical_member_with, set_product_with, ChoiceIndices,
    MonomialOrder, PolyError, PolyLimits, PolyMap, PolySet, Polynomial, Rational,
};
use crate::program::{PathString, Program, ProgramError, Semantics};
use crate::sim::{find_lasso_with, Lasso, SimLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtiError {
    #[error("no fixpoint within {limit} iterations")]
    IterationLimitExceeded { limit: u64, partial: Box<NtiResult> },
    #[error("resource limit exceeded: {0}")]
    ResourceLimitExceeded(String),
    #[error("unsupported semantics: {0}")]
    UnsupportedSemantics(String),
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Program(ProgramError),
}

impl From<PolyError> for NtiError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ResourceLimitExceeded(m) => NtiError::ResourceLimitExceeded(m),
            PolyError::DimensionMismatch { expected, found } => NtiError::DimensionMismatch { expected, found },
        }
    }
}

impl From<ProgramError> for NtiError {
    fn from(e: ProgramError) -> Self {
        match e {
            ProgramError::Poly(p) => p.into(),
            other => NtiError::Program(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisLimits {
    /// Largest fixpoint index tried; `None` means `min(bound, 64)`.
    pub max_iterations: Option<u64>,
    pub poly: PolyLimits,
    pub timeout: Option<Duration>,
    /// Cap handed to the chain-bound machine.
    pub bound_cap: u64,
    /// Largest path family kept by the variety chain.
    pub max_family: usize,
    /// Largest number of products formed in one step.
    pub max_products: usize,
}

impl Default for AnalysisLimits {
    fn default() -> Self {
        AnalysisLimits {
            max_iterations: None,
            poly: PolyLimits::default(),
            timeout: None,
            bound_cap: DEFAULT_MACHINE_CAP,
            max_family: 4096,
            max_products: 200_000,
        }
    }
}

impl AnalysisLimits {
    fn poly_limits(&self) -> PolyLimits {
        let mut l = self.poly.clone();
        if let Some(t) = self.timeout {
            let d = Instant::now() + t;
            l.deadline = Some(l.deadline.map_or(d, |old| old.min(d)));
        }
        l
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Ideal chain `B_n`, stopping when a sweep adds nothing.
    GroebnerChain,
    /// Path family `T_σ`, stopping when `D_n = D_{n+1}`.
    VarietyChain,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::GroebnerChain => "groebner",
            Algorithm::VarietyChain => "variety",
        })
    }
}

/// The a-priori ceiling on the fixpoint index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IterationBound {
    Exact(BigUint),
    CapExceeded {
        cap: u64,
        lower_bound: BigUint,
    },
    /// The machine gave up before reaching the cap (value too large to track).
    Unknown(String),
}

impl IterationBound {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            IterationBound::Exact(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for IterationBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IterationBound::Exact(v) => write!(f, "{v}"),
            IterationBound::CapExceeded { cap, .. } => write!(f, "exceeds cap {cap}"),
            IterationBound::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepStats {
    pub generators: usize,
    pub max_degree: u32,
    /// Number of live paths (always 1 for the Gröbner chain).
    pub family: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NtiStats {
    pub elapsed: Duration,
    pub reductions: u64,
    pub membership_tests: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtiResult {
    pub algorithm: Algorithm,
    /// `N̂` for the Gröbner chain, `N` for the variety chain.
    pub index: u64,
    /// Reduced Gröbner basis with `Z(basis) = D`.
    pub basis: PolySet,
    /// One entry per chain element `0..=index`.
    pub history: Vec<StepStats>,
    pub bound: IterationBound,
    pub stats: NtiStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TerminationVerdict {
    Terminating,
    NonTerminating { witness: Option<Lasso> },
}

impl TerminationVerdict {
    pub fn is_terminating(&self) -> bool {
        matches!(self, TerminationVerdict::Terminating)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputSetStatus {
    Empty,
    NonEmpty,
}

/// `L(d, F)` for the program's degree bound.
pub fn iteration_bound(p: &Program, cap: u64) -> IterationBound {
    let f = match p.degree_bound_fn() {
        Ok(f) => f,
        Err(e) => return IterationBound::Unknown(e.to_string()),
    };
    match chain_bound(p.nvars() as u64, &f, cap) {
        Ok(v) => IterationBound::Exact(v),
        Err(ChainError::CapExceeded { cap, lower_bound }) => IterationBound::CapExceeded { cap, lower_bound },
        Err(e) => IterationBound::Unknown(e.to_string()),
    }
}

const DEFAULT_ITERATION_CEILING: u64 = 64;

fn iteration_limit(limits: &AnalysisLimits, bound: &IterationBound) -> u64 {
    if let Some(m) = limits.max_iterations {
        return m;
    }
    match bound {
        IterationBound::Exact(v) => v
            .to_u64()
            .map_or(DEFAULT_ITERATION_CEILING, |v| v.min(DEFAULT_ITERATION_CEILING)),
        _ => DEFAULT_ITERATION_CEILING,
    }
}

fn step_stats(b: &PolySet, family: usize) -> StepStats {
    StepStats {
        generators: b.len(),
        max_degree: b.degree(),
        family,
    }
}

struct Chain<'a> {
    p: &'a Program,
    guards: Vec<PolySet>,
    limits: &'a AnalysisLimits,
    poly: PolyLimits,
    stats: NtiStats,
}

impl<'a> Chain<'a> {
    fn new(p: &'a Program, limits: &'a AnalysisLimits) -> Result<Self, NtiError> {
        Ok(Chain {
            p,
            guards: p.guard_sets()?,
            limits,
            poly: limits.poly_limits(),
            stats: NtiStats::default(),
        })
    }

    fn product(&self, sets: &[PolySet]) -> Result<PolySet, NtiError> {
        if sets.len() == 1 {
            return Ok(sets[0].clone());
        }
        if sets.iter().any(PolySet::is_empty) {
            return Ok(PolySet::empty(self.p.nvars()));
        }
        Ok(set_product_with(sets, self.limits.max_products, &self.poly)?)
    }

    /// `B_0`: some guard holds.
    fn initial(&self) -> Result<PolySet, NtiError> {
        let b0 = self.product(&self.guards)?;
        Ok(groebner(&b0, MonomialOrder::DegLex, &self.poly)?)
    }

    fn reduce(&mut self, f: &Polynomial, b: &PolySet) -> Result<Polynomial, NtiError> {
        self.stats.reductions += 1;
        Ok(reduce_limited(f, b, &self.poly)?)
    }

    /// One step `B ↦ B ∪ ∏_a (S_a ∪ B∘A_a)`; returns whether the ideal grew.
    ///
    /// Factors are reduced modulo `B` first (`I + JK` only depends on `J`, `K`
    /// modulo `I`), products are formed from that frozen state and remainders
    /// are adjoined as they appear.
    fn sweep(&mut self, b: &mut PolySet) -> Result<bool, NtiError> {
        let frozen = b.clone();
        let mut factors: Vec<Vec<Polynomial>> = Vec::with_capacity(self.p.num_branches());
        for a in 0..self.p.num_branches() {
            let map = self.p.branch(a);
            let mut fa = Vec::new();
            let guard = self.p.guard_set_for(&self.guards, a).clone();
            for g in guard.iter() {
                let r = self.reduce(g, &frozen)?;
                if !r.is_zero() {
                    fa.push(r);
                }
            }
            for g in frozen.iter() {
                let c = g.compose_limited(map, &self.poly)?;
                let r = self.reduce(&c, &frozen)?;
                if !r.is_zero() && !fa.contains(&r) {
                    fa.push(r);
                }
            }
            if fa.is_empty() {
                return Ok(false);
            }
            factors.push(fa);
        }
        let sizes: Vec<usize> = factors.iter().map(Vec::len).collect();
        match ChoiceIndices::total(&sizes) {
            Some(n) if n <= self.limits.max_products => {}
            _ => {
                return Err(NtiError::ResourceLimitExceeded(format!(
                    "product of factor sets {sizes:?} exceeds {}",
                    self.limits.max_products
                )))
            }
        }
        let mut grew = false;
        for choice in ChoiceIndices::new(sizes) {
            let mut f = factors[0][choice[0]].clone();
            for (fs, &i) in factors.iter().zip(&choice).skip(1) {
                f = f.mul_limited(&fs[i], &self.poly)?;
            }
            let r = self.reduce(&f, b)?;
            if !r.is_zero() {
                *b = groebner_extend(b, &[r], &self.poly)?;
                grew = true;
            }
            self.poly.check_deadline()?;
        }
        Ok(grew)
    }
}

/// Reduced Gröbner basis of `B_n`.
pub fn n_nti_basis(p: &Program, n: u64) -> Result<PolySet, NtiError> {
    n_nti_basis_with(p, n, &AnalysisLimits::default())
}

pub fn n_nti_basis_with(p: &Program, n: u64, limits: &AnalysisLimits) -> Result<PolySet, NtiError> {
    Ok(nti_chain(p, n, limits)?.pop().expect("nonempty chain"))
}

/// `[B_0, …, B_n]`, each a reduced Gröbner basis.
pub fn nti_chain(p: &Program, n: u64, limits: &AnalysisLimits) -> Result<Vec<PolySet>, NtiError> {
    let mut chain = Chain::new(p, limits)?;
    let mut b = chain.initial()?;
    let mut out = vec![b.clone()];
    let mut stable = false;
    for _ in 0..n {
        // Once a sweep adds nothing every later one is idle too.
        if !stable {
            stable = !chain.sweep(&mut b)?;
        }
        out.push(b.clone());
    }
    Ok(out)
}

/// Gröbner-basis fixpoint: `N̂ = min{n | ⟨B_n⟩ = ⟨B_{n+1}⟩}` and `D = Z(B_N̂)`.
pub fn nti_groebner(p: &Program, limits: &AnalysisLimits) -> Result<NtiResult, NtiError> {
    let start = Instant::now();
    let bound = iteration_bound(p, limits.bound_cap);
    let max_iter = iteration_limit(limits, &bound);
    let mut chain = Chain::new(p, limits)?;
    let mut b = chain.initial()?;
    let mut history = vec![step_stats(&b, 1)];
    let mut index = 0u64;
    loop {
        if !chain.sweep(&mut b)? {
            break;
        }
        index += 1;
        history.push(step_stats(&b, 1));
        if index > max_iter {
            chain.stats.elapsed = start.elapsed();
            return Err(NtiError::IterationLimitExceeded {
                limit: max_iter,
                partial: Box::new(NtiResult {
                    algorithm: Algorithm::GroebnerChain,
                    index,
                    basis: b,
                    history,
                    bound,
                    stats: chain.stats,
                }),
            });
        }
    }
    chain.stats.elapsed = start.elapsed();
    Ok(NtiResult {
        algorithm: Algorithm::GroebnerChain,
        index,
        basis: b,
        history,
        bound,
        stats: chain.stats,
    })
}

/// A live path with its map and constraint sets (Gröbner-reduced `T_σ`).
#[derive(Clone)]
struct PathEntry {
    sigma: PathString,
    map: PolyMap,
    t_minus: Vec<Polynomial>,
    t: PolySet,
}

impl Chain<'_> {
    fn extend(&self, e: &PathEntry, a: usize) -> Result<PathEntry, NtiError> {
        let n = self.p.nvars();
        let mut t_minus = e.t_minus.clone();
        for g in self.p.guard_set_for(&self.guards, a) {
            let c = g.compose_limited(&e.map, &self.poly)?;
            if !c.is_zero() && !t_minus.contains(&c) {
                t_minus.push(c);
            }
        }
        let map = self.p.branch(a).after_limited(&e.map, &self.poly)?;
        let tails: Vec<PolySet> = self
            .guards
            .iter()
            .map(|s| {
                let comp: Result<Vec<Polynomial>, PolyError> =
                    s.iter().map(|g| g.compose_limited(&map, &self.poly)).collect();
                PolySet::new(n, comp?.into_iter().filter(|c| !c.is_zero()))
            })
            .collect::<Result<_, _>>()?;
        let tail = self.product(&tails)?;
        let all = PolySet::new(n, t_minus.iter().cloned().chain(tail.into_polys()))?;
        let t = groebner(&all, MonomialOrder::DegLex, &self.poly)?;
        Ok(PathEntry {
            sigma: e.sigma.push(a),
            map,
            t_minus,
            t,
        })
    }

    fn radical(&mut self, f: &Polynomial, s: &PolySet) -> Result<bool, NtiError> {
        self.stats.membership_tests += 1;
        Ok(radical_member_with(f, s, &self.poly)?)
    }

    /// `Z(T_σ) ⊆ ⋃_τ Z(T_τ)`, tested as `f ∈ √T_σ` for every `f ∈ ∏_τ T_τ`.
    /// Sets disjoint from `Z(T_σ)` are left out of the product and choices
    /// containing a factor already in `√T_σ` are skipped.
    fn covered(&mut self, sigma: &PathEntry, next: &[PathEntry]) -> Result<bool, NtiError> {
        let mut member_flags: Vec<Vec<bool>> = Vec::new();
        let mut sets: Vec<&PolySet> = Vec::new();
        for tau in next {
            let joint = sigma.t.union(&tau.t)?;
            if ideal_is_trivial_with(&joint, &self.poly)? {
                continue;
            }
            let mut flags = Vec::with_capacity(tau.t.len());
            for g in tau.t.iter() {
                flags.push(self.radical(g, &sigma.t)?);
            }
            if flags.iter().all(|&m| m) {
                return Ok(true);
            }
            member_flags.push(flags);
            sets.push(&tau.t);
        }
        if sets.is_empty() {
            return Ok(false);
        }
        let open: Vec<Vec<usize>> = member_flags
            .iter()
            .map(|fl| fl.iter().enumerate().filter(|(_, &m)| !m).map(|(i, _)| i).collect())
            .collect();
        let sizes: Vec<usize> = open.iter().map(Vec::len).collect();
        match ChoiceIndices::total(&sizes) {
            Some(n) if n <= self.limits.max_products => {}
            _ => {
                return Err(NtiError::ResourceLimitExceeded(format!(
                    "membership products {sizes:?} exceed {}",
                    self.limits.max_products
                )))
            }
        }
        // Fewest open factors first keeps the search tree narrow near the root.
        let mut levels: Vec<Vec<&Polynomial>> = open
            .iter()
            .zip(&sets)
            .map(|(idx, s)| idx.iter().map(|&i| &s.polys()[i]).collect())
            .collect();
        levels.sort_by_key(Vec::len);
        self.all_choices_excluded(&sigma.t, &levels)
    }

    /// Every choice `g_k` from each level makes `base + <1 - t_k g_k>` the unit
    /// ideal, with one fresh variable `t_k` per level. A node that is already
    /// the unit ideal settles its whole subtree.
    fn all_choices_excluded(&mut self, base: &PolySet, levels: &[Vec<&Polynomial>]) -> Result<bool, NtiError> {
        let Some((first, rest)) = levels.split_first() else {
            return Ok(false);
        };
        let nv = base.nvars() + 1;
        let lifted = base.extend_vars(1);
        let t = Polynomial::var(nv, nv - 1);
        for g in first {
            self.stats.membership_tests += 1;
            let g = g.extend_vars(nv - g.nvars());
            let aux = &Polynomial::one(nv) - &(&t * &g);
            let next = groebner_extend(&lifted, &[aux], &self.poly)?;
            if next.contains_unit() {
                continue;
            }
            if !self.all_choices_excluded(&next, rest)? {
                return Ok(false);
            }
            self.poly.check_deadline()?;
        }
        Ok(true)
    }
}

/// Variety fixpoint over ℂ: `N = min{n | D_n = D_{n+1}}` with
/// `D_n = ⋃_{|σ| = n} Z(T_σ)`.
pub fn nti_variety(p: &Program, limits: &AnalysisLimits) -> Result<NtiResult, NtiError> {
    if p.semantics() != Semantics::Complex {
        return Err(NtiError::UnsupportedSemantics(
            "the variety chain needs complex semantics (no real radical available)".into(),
        ));
    }
    let start = Instant::now();
    let bound = iteration_bound(p, limits.bound_cap);
    let max_iter = iteration_limit(limits, &bound);
    let mut chain = Chain::new(p, limits)?;
    let n = p.nvars();
    let root = PathEntry {
        sigma: PathString::empty(),
        map: PolyMap::identity(n),
        t_minus: Vec::new(),
        t: chain.initial()?,
    };
    // Paths with an empty zero set never come back and are dropped.
    let mut family: Vec<PathEntry> = if root.t.contains_unit() { Vec::new() } else { vec![root] };
    let family_stats = |fam: &[PathEntry]| StepStats {
        generators: fam.iter().map(|e| e.t.len()).sum(),
        max_degree: fam.iter().map(|e| e.t.degree()).max().unwrap_or(0),
        family: fam.len(),
    };
    let mut history = vec![family_stats(&family)];
    let mut index = 0u64;
    loop {
        let mut next = Vec::new();
        for e in &family {
            for a in 0..p.num_branches() {
                let child = chain.extend(e, a)?;
                if !child.t.contains_unit() {
                    next.push(child);
                }
            }
            if next.len() > limits.max_family {
                return Err(NtiError::ResourceLimitExceeded(format!(
                    "path family exceeds {}",
                    limits.max_family
                )));
            }
        }
        let mut stable = true;
        for e in &family {
            if !chain.covered(e, &next)? {
                stable = false;
                break;
            }
        }
        if stable {
            break;
        }
        family = next;
        index += 1;
        history.push(family_stats(&family));
        if index > max_iter {
            chain.stats.elapsed = start.elapsed();
            let basis = variety_basis(&chain, &family)?;
            return Err(NtiError::IterationLimitExceeded {
                limit: max_iter,
                partial: Box::new(NtiResult {
                    algorithm: Algorithm::VarietyChain,
                    index,
                    basis,
                    history,
                    bound,
                    stats: chain.stats,
                }),
            });
        }
    }
    let basis = variety_basis(&chain, &family)?;
    chain.stats.elapsed = start.elapsed();
    Ok(NtiResult {
        algorithm: Algorithm::VarietyChain,
        index,
        basis,
        history,
        bound,
        stats: chain.stats,
    })
}

/// `⋃_σ Z(T_σ) = Z(∏_σ T_σ)`, reduced.
fn variety_basis(chain: &Chain<'_>, family: &[PathEntry]) -> Result<PolySet, NtiError> {
    let n = chain.p.nvars();
    if family.is_empty() {
        return Ok(groebner(
            &PolySet::new(n, [Polynomial::one(n)])?,
            MonomialOrder::DegLex,
            &chain.poly,
        )?);
    }
    let sets: Vec<PolySet> = family.iter().map(|e| e.t.clone()).collect();
    let prod = chain.product(&sets)?;
    Ok(groebner(&prod, MonomialOrder::DegLex, &chain.poly)?)
}

/// Steps tried when looking for a lasso witness.
const WITNESS_STEPS: usize = 64;

/// `v` is non-terminating iff it lies on `Z(B)`; a lasso is attached when one
/// is found cheaply.
pub fn point_terminates(p: &Program, result: &NtiResult, v: &[Rational]) -> Result<TerminationVerdict, NtiError> {
    if v.len() != p.nvars() {
        return Err(NtiError::DimensionMismatch {
            expected: p.nvars(),
            found: v.len(),
        });
    }
    if !result.basis.vanishes_at(v)? {
        return Ok(TerminationVerdict::Terminating);
    }
    let limits = SimLimits {
        node_cap: 100_000,
        ..SimLimits::default()
    };
    let witness = find_lasso_with(p, v, WITNESS_STEPS, &limits).ok().flatten();
    Ok(TerminationVerdict::NonTerminating { witness })
}

/// Whether `Z(constraints)` meets `D`, decided over ℂ.
pub fn input_set_check(_p: &Program, result: &NtiResult, constraints: &PolySet) -> Result<InputSetStatus, NtiError> {
    input_set_check_with(result, constraints, &PolyLimits::default())
}

pub fn input_set_check_with(
    result: &NtiResult,
    constraints: &PolySet,
    limits: &PolyLimits,
) -> Result<InputSetStatus, NtiError> {
    let joint = result.basis.union(constraints)?;
    Ok(if ideal_is_trivial_with(&joint, limits)? {
        InputSetStatus::Empty
    } else {
        InputSetStatus::NonEmpty
    })
}
