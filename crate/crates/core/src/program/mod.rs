//! Multi-path polynomial programs and polynomial guarded commands: the data
//! model, a small textual language, guard normalization and path algebra.

use std::fmt;

use thiserror::Error;

use crate::chain_bound::DegreeBoundFn;
use crate::poly::{set_product_with, PolyError, PolyLimits, PolyMap, PolySet, Polynomial};

mod parser;
mod paths;

pub use parser::{parse_point, parse_polynomial, parse_program};
pub use paths::{compose_path, compose_path_with, path_constraints, path_constraints_with, PathString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("syntax error at {line}:{col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("arity error at {line}:{col}: {msg}")]
    ArityError { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("invalid path symbol {symbol} (program has {branches} branches)")]
    InvalidSymbol { symbol: usize, branches: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Field over which zero sets are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Semantics {
    Real,
    #[default]
    Complex,
}

/// An equality guard in disjunctive normal form: `⋁_i ⋀_j g_ij = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Guard {
    clauses: Vec<Vec<Polynomial>>,
}

impl Guard {
    pub fn new(clauses: Vec<Vec<Polynomial>>) -> Result<Self, PolyError> {
        let nvars = clauses
            .first()
            .and_then(|c| c.first())
            .map(Polynomial::nvars)
            .ok_or_else(|| PolyError::ResourceLimitExceeded("empty guard".into()))?;
        for p in clauses.iter().flatten() {
            if p.nvars() != nvars {
                return Err(PolyError::DimensionMismatch {
                    expected: nvars,
                    found: p.nvars(),
                });
            }
        }
        if clauses.iter().any(Vec::is_empty) {
            return Err(PolyError::ResourceLimitExceeded("empty guard clause".into()));
        }
        Ok(Guard { clauses })
    }

    /// The single equation `g = 0`.
    pub fn single(g: Polynomial) -> Self {
        Guard { clauses: vec![vec![g]] }
    }

    pub fn clauses(&self) -> &[Vec<Polynomial>] {
        &self.clauses
    }

    pub fn nvars(&self) -> usize {
        self.clauses[0][0].nvars()
    }

    /// Direct clause-by-clause evaluation.
    pub fn holds_at(&self, point: &[crate::poly::Rational]) -> Result<bool, PolyError> {
        for clause in &self.clauses {
            let mut all = true;
            for g in clause {
                if !g.vanishes_at(point)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Cap on the number of polynomials produced by distributing a guard.
const GUARD_PRODUCT_CAP: usize = 100_000;

/// A polynomial set whose zero set is the guard's solution set over the
/// chosen field.
///
/// Real: the single polynomial `∏_clauses Σ_j g_j²` (a lone `g` stays `g`).
/// Complex: one product per choice of a conjunct from every clause.
pub fn normalize_guard(g: &Guard, semantics: Semantics) -> Result<PolySet, PolyError> {
    let n = g.nvars();
    match semantics {
        Semantics::Real => {
            let mut prod = Polynomial::one(n);
            for clause in g.clauses() {
                let factor = if clause.len() == 1 {
                    clause[0].clone()
                } else {
                    clause.iter().fold(Polynomial::zero(n), |acc, p| &acc + &(p * p))
                };
                prod = &prod * &factor;
            }
            PolySet::new(n, [prod])
        }
        Semantics::Complex => {
            let sets: Vec<PolySet> = g
                .clauses()
                .iter()
                .map(|c| PolySet::new(n, c.iter().cloned()))
                .collect::<Result<_, _>>()?;
            set_product_with(&sets, GUARD_PRODUCT_CAP, &PolyLimits::default())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MppProgram {
    pub names: Vec<String>,
    pub guard: Guard,
    pub branches: Vec<PolyMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PgcProgram {
    pub names: Vec<String>,
    pub commands: Vec<(Guard, PolyMap)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProgramKind {
    Mpp(MppProgram),
    Pgc(PgcProgram),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    kind: ProgramKind,
    semantics: Semantics,
}

impl Program {
    pub fn mpp(names: Vec<String>, guard: Guard, branches: Vec<PolyMap>) -> Result<Self, PolyError> {
        let d = names.len();
        check_shape(d, std::iter::once(&guard), branches.iter())?;
        Ok(Program {
            kind: ProgramKind::Mpp(MppProgram { names, guard, branches }),
            semantics: Semantics::default(),
        })
    }

    /// A guarded-command program; identical guards collapse to a multi-path loop.
    pub fn pgc(names: Vec<String>, commands: Vec<(Guard, PolyMap)>) -> Result<Self, PolyError> {
        let d = names.len();
        check_shape(d, commands.iter().map(|c| &c.0), commands.iter().map(|c| &c.1))?;
        if commands.iter().all(|(g, _)| *g == commands[0].0) {
            let guard = commands[0].0.clone();
            let branches = commands.into_iter().map(|(_, a)| a).collect();
            return Program::mpp(names, guard, branches);
        }
        Ok(Program {
            kind: ProgramKind::Pgc(PgcProgram { names, commands }),
            semantics: Semantics::default(),
        })
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn kind(&self) -> &ProgramKind {
        &self.kind
    }

    pub fn is_mpp(&self) -> bool {
        matches!(self.kind, ProgramKind::Mpp(_))
    }

    pub fn nvars(&self) -> usize {
        self.names().len()
    }

    pub fn names(&self) -> &[String] {
        match &self.kind {
            ProgramKind::Mpp(p) => &p.names,
            ProgramKind::Pgc(p) => &p.names,
        }
    }

    /// Number of branches `ℓ`.
    pub fn num_branches(&self) -> usize {
        match &self.kind {
            ProgramKind::Mpp(p) => p.branches.len(),
            ProgramKind::Pgc(p) => p.commands.len(),
        }
    }

    /// Assignment map of branch `i` (0-based).
    pub fn branch(&self, i: usize) -> &PolyMap {
        match &self.kind {
            ProgramKind::Mpp(p) => &p.branches[i],
            ProgramKind::Pgc(p) => &p.commands[i].1,
        }
    }

    pub fn branches(&self) -> Vec<&PolyMap> {
        (0..self.num_branches()).map(|i| self.branch(i)).collect()
    }

    /// Guard of branch `i` (0-based); the shared guard for a multi-path loop.
    pub fn guard(&self, i: usize) -> &Guard {
        match &self.kind {
            ProgramKind::Mpp(p) => &p.guard,
            ProgramKind::Pgc(p) => &p.commands[i].0,
        }
    }

    /// Normalized guard sets: one entry for a multi-path loop, one per command otherwise.
    pub fn guard_sets(&self) -> Result<Vec<PolySet>, PolyError> {
        match &self.kind {
            ProgramKind::Mpp(p) => Ok(vec![normalize_guard(&p.guard, self.semantics)?]),
            ProgramKind::Pgc(p) => p
                .commands
                .iter()
                .map(|(g, _)| normalize_guard(g, self.semantics))
                .collect(),
        }
    }

    /// Normalized guard governing branch `i`, given the output of [`Program::guard_sets`].
    pub fn guard_set_for<'a>(&self, sets: &'a [PolySet], i: usize) -> &'a PolySet {
        if self.is_mpp() {
            &sets[0]
        } else {
            &sets[i]
        }
    }

    /// True iff branch `i` may fire at `point`.
    pub fn enabled(&self, i: usize, point: &[crate::poly::Rational]) -> Result<bool, PolyError> {
        self.guard(i).holds_at(point)
    }

    /// Renders the program in the input language.
    pub fn to_source(&self) -> String {
        let names = self.names();
        let mut out = format!("vars: {};\n", names.join(", "));
        let branch_src = |a: &PolyMap| {
            let comps: Vec<String> = a.components().iter().map(|c| c.fmt_with(names)).collect();
            format!("({}) := ({});", names.join(", "), comps.join(", "))
        };
        match &self.kind {
            ProgramKind::Mpp(p) => {
                out.push_str(&format!("while ({}) {{\n", guard_src(&p.guard, names)));
                for (i, a) in p.branches.iter().enumerate() {
                    let sep = if i == 0 { "   " } else { "|| " };
                    out.push_str(&format!("  {sep}{}\n", branch_src(a)));
                }
                out.push_str("}\n");
            }
            ProgramKind::Pgc(p) => {
                out.push_str("do\n");
                for (i, (g, a)) in p.commands.iter().enumerate() {
                    let sep = if i == 0 { "   " } else { "|| " };
                    out.push_str(&format!("  {sep}{} -> {}\n", guard_src(g, names), branch_src(a)));
                }
                out.push_str("od\n");
            }
        }
        out
    }

    /// `F(i) = a·b^i`: `a` the normalized guard degree, `b` the largest
    /// assignment degree (both at least 1). For guarded commands `a` is the
    /// largest guard degree.
    pub fn degree_bound_fn(&self) -> Result<DegreeBoundFn, PolyError> {
        let a = self.guard_sets()?.iter().map(PolySet::degree).max().unwrap_or(0).max(1) as u64;
        let b = self.branches().iter().map(|m| m.degree()).max().unwrap_or(0).max(1) as u64;
        DegreeBoundFn::geometric(a * b, b).map_err(|e| PolyError::ResourceLimitExceeded(e.to_string()))
    }
}

/// `F(i) = a·b^i` for the program (see [`Program::degree_bound_fn`]).
pub fn degree_bound_fn(p: &Program) -> Result<DegreeBoundFn, PolyError> {
    p.degree_bound_fn()
}

fn guard_src(g: &Guard, names: &[String]) -> String {
    g.clauses()
        .iter()
        .map(|c| {
            c.iter()
                .map(|p| format!("{} == 0", p.fmt_with(names)))
                .collect::<Vec<_>>()
                .join(" /\\ ")
        })
        .collect::<Vec<_>>()
        .join(" \\/ ")
}

fn check_shape<'a>(
    d: usize,
    guards: impl Iterator<Item = &'a Guard>,
    maps: impl Iterator<Item = &'a PolyMap>,
) -> Result<(), PolyError> {
    for g in guards {
        if g.nvars() != d {
            return Err(PolyError::DimensionMismatch {
                expected: d,
                found: g.nvars(),
            });
        }
    }
    let mut count = 0;
    for m in maps {
        count += 1;
        if m.nvars() != d {
            return Err(PolyError::DimensionMismatch {
                expected: d,
                found: m.nvars(),
            });
        }
    }
    if count == 0 {
        return Err(PolyError::ResourceLimitExceeded(
            "program needs at least one branch".into(),
        ));
    }
    Ok(())
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}
