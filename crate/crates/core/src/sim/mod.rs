//! Brute-force execution semantics on exact rational points: bounded execution
//! trees, direct membership in the n-non-terminating sets, and lasso search.

use std::fmt;

use thiserror::Error;

use crate::poly::{PolyError, Rational};
use crate::program::{PathString, Program};

/// Default ceiling on explored tree nodes.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;
/// Default ceiling on the bit length of a coordinate's numerator or denominator.
pub const DEFAULT_BIT_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("resource limit exceeded: {0}")]
    ResourceLimitExceeded(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimLimits {
    pub node_cap: usize,
    pub bit_cap: u64,
}

impl Default for SimLimits {
    fn default() -> Self {
        SimLimits {
            node_cap: DEFAULT_NODE_CAP,
            bit_cap: DEFAULT_BIT_CAP,
        }
    }
}

/// Shape of a depth-bounded execution tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSummary {
    pub depth: usize,
    pub nodes: usize,
    /// `alive[k]`: paths of length `k` after which some branch is still enabled.
    pub alive: Vec<usize>,
    /// Paths were still alive at the depth limit.
    pub truncated: bool,
    /// Some node was not expanded because a coordinate outgrew the bit cap.
    pub bit_capped: bool,
}

impl TreeSummary {
    /// Length of the longest alive path seen, if any.
    pub fn longest_alive(&self) -> Option<usize> {
        self.alive.iter().rposition(|&c| c > 0)
    }
}

/// A stem followed by a cycle that revisits a state exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: PathString,
    pub cycle: PathString,
    /// States before each step of `stem · cycle`; the state after the last
    /// step equals `states[stem.len()]`.
    pub states: Vec<Vec<Rational>>,
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})^ω", self.stem, self.cycle)
    }
}

fn check_dim(p: &Program, v: &[Rational]) -> Result<(), SimError> {
    if v.len() != p.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: p.nvars(),
            found: v.len(),
        }
        .into());
    }
    Ok(())
}

/// Branches that may fire at `v`.
pub fn enabled_branches(p: &Program, v: &[Rational]) -> Result<Vec<usize>, SimError> {
    if p.is_mpp() {
        return Ok(if p.enabled(0, v)? {
            (0..p.num_branches()).collect()
        } else {
            Vec::new()
        });
    }
    let mut out = Vec::new();
    for a in 0..p.num_branches() {
        if p.enabled(a, v)? {
            out.push(a);
        }
    }
    Ok(out)
}

fn too_big(v: &[Rational], bit_cap: u64) -> bool {
    v.iter()
        .any(|c| c.numer().bits() > bit_cap || c.denom().bits() > bit_cap)
}

/// Breadth-first expansion of the execution tree from `v` down to `depth`.
pub fn simulate_tree(p: &Program, v: &[Rational], depth: usize) -> Result<TreeSummary, SimError> {
    simulate_tree_with(p, v, depth, &SimLimits::default())
}

pub fn simulate_tree_with(
    p: &Program,
    v: &[Rational],
    depth: usize,
    limits: &SimLimits,
) -> Result<TreeSummary, SimError> {
    check_dim(p, v)?;
    let mut level: Vec<Vec<Rational>> = vec![v.to_vec()];
    let mut nodes = 1usize;
    let mut alive = Vec::with_capacity(depth + 1);
    let mut bit_capped = false;
    for k in 0..=depth {
        let mut next = Vec::new();
        let mut alive_here = 0;
        for state in &level {
            let en = enabled_branches(p, state)?;
            if en.is_empty() {
                continue;
            }
            alive_here += 1;
            if k == depth {
                continue;
            }
            if too_big(state, limits.bit_cap) {
                bit_capped = true;
                continue;
            }
            for a in en {
                nodes += 1;
                if nodes > limits.node_cap {
                    return Err(SimError::ResourceLimitExceeded(format!(
                        "execution tree exceeds {} nodes",
                        limits.node_cap
                    )));
                }
                next.push(p.branch(a).apply(state)?);
            }
        }
        alive.push(alive_here);
        level = next;
    }
    Ok(TreeSummary {
        depth,
        nodes,
        truncated: alive[depth] > 0,
        alive,
        bit_capped,
    })
}

/// `v ∈ D_n`: some path of `n` steps from `v` leaves a branch enabled.
pub fn dn_member_bruteforce(p: &Program, v: &[Rational], n: usize) -> Result<bool, SimError> {
    dn_member_bruteforce_with(p, v, n, &SimLimits::default())
}

pub fn dn_member_bruteforce_with(p: &Program, v: &[Rational], n: usize, limits: &SimLimits) -> Result<bool, SimError> {
    fn dfs(p: &Program, v: &[Rational], left: usize, limits: &SimLimits, nodes: &mut usize) -> Result<bool, SimError> {
        *nodes += 1;
        if *nodes > limits.node_cap {
            return Err(SimError::ResourceLimitExceeded(format!(
                "path enumeration exceeds {} nodes",
                limits.node_cap
            )));
        }
        let en = enabled_branches(p, v)?;
        if en.is_empty() {
            return Ok(false);
        }
        if left == 0 {
            return Ok(true);
        }
        if too_big(v, limits.bit_cap) {
            return Err(SimError::ResourceLimitExceeded(format!(
                "coordinate exceeds {} bits",
                limits.bit_cap
            )));
        }
        for a in en {
            let w = p.branch(a).apply(v)?;
            if dfs(p, &w, left - 1, limits, nodes)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    check_dim(p, v)?;
    dfs(p, v, n, limits, &mut 0)
}

/// Depth-first search for a path from `v` that returns to a state already on
/// it. Finding none says nothing about termination.
pub fn find_lasso(p: &Program, v: &[Rational], max_steps: usize) -> Result<Option<Lasso>, SimError> {
    find_lasso_with(p, v, max_steps, &SimLimits::default())
}

pub fn find_lasso_with(
    p: &Program,
    v: &[Rational],
    max_steps: usize,
    limits: &SimLimits,
) -> Result<Option<Lasso>, SimError> {
    struct Search<'a> {
        p: &'a Program,
        limits: &'a SimLimits,
        max_steps: usize,
        states: Vec<Vec<Rational>>,
        path: Vec<usize>,
        nodes: usize,
    }

    impl Search<'_> {
        fn go(&mut self) -> Result<Option<Lasso>, SimError> {
            let cur = self.states.last().expect("nonempty").clone();
            if self.path.len() >= self.max_steps || too_big(&cur, self.limits.bit_cap) {
                return Ok(None);
            }
            for a in enabled_branches(self.p, &cur)? {
                self.nodes += 1;
                if self.nodes > self.limits.node_cap {
                    return Err(SimError::ResourceLimitExceeded(format!(
                        "lasso search exceeds {} nodes",
                        self.limits.node_cap
                    )));
                }
                let next = self.p.branch(a).apply(&cur)?;
                self.path.push(a);
                if let Some(j) = self.states.iter().position(|s| *s == next) {
                    return Ok(Some(Lasso {
                        stem: PathString::new(self.path[..j].to_vec()),
                        cycle: PathString::new(self.path[j..].to_vec()),
                        states: self.states.clone(),
                    }));
                }
                self.states.push(next);
                if let Some(l) = self.go()? {
                    return Ok(Some(l));
                }
                self.states.pop();
                self.path.pop();
            }
            Ok(None)
        }
    }

    check_dim(p, v)?;
    let mut s = Search {
        p,
        limits,
        max_steps,
        states: vec![v.to_vec()],
        path: Vec::new(),
        nodes: 0,
    };
    s.go()
}

/// Replays `stem` then `cycles` rounds of `cycle` from `v`, checking that
/// every step is enabled. Returns the final state.
pub fn replay(p: &Program, v: &[Rational], lasso: &Lasso, cycles: usize) -> Result<Option<Vec<Rational>>, SimError> {
    check_dim(p, v)?;
    let mut cur = v.to_vec();
    let steps = lasso
        .stem
        .symbols()
        .iter()
        .chain(lasso.cycle.symbols().iter().cycle().take(cycles * lasso.cycle.len()));
    for &a in steps {
        if !enabled_branches(p, &cur)?.contains(&a) {
            return Ok(None);
        }
        cur = p.branch(a).apply(&cur)?;
    }
    Ok(Some(cur))
}
