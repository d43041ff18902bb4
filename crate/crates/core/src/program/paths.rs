use std::fmt;
use std::str::FromStr;

use super::{Program, ProgramError};
use crate::poly::{set_product_with, PolyLimits, PolyMap, PolySet, Polynomial};

/// A word over the branch indices. Symbols are stored 0-based and shown 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathString(Vec<usize>);

impl PathString {
    pub fn empty() -> Self {
        PathString(Vec::new())
    }

    pub fn new(symbols: Vec<usize>) -> Self {
        PathString(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, a: usize) -> PathString {
        let mut v = self.0.clone();
        v.push(a);
        PathString(v)
    }

    pub fn concat(&self, other: &PathString) -> PathString {
        PathString(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The prefix of length `k`.
    pub fn prefix(&self, k: usize) -> PathString {
        PathString(self.0[..k].to_vec())
    }

    pub fn check(&self, branches: usize) -> Result<(), ProgramError> {
        match self.0.iter().find(|&&s| s >= branches) {
            Some(&s) => Err(ProgramError::InvalidSymbol {
                symbol: s + 1,
                branches,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PathString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
        // Separators are only needed once a symbol has two digits.
        if self.0.iter().all(|&s| s < 9) {
            f.write_str(&parts.concat())
        } else {
            f.write_str(&parts.join("."))
        }
    }
}

impl FromStr for PathString {
    type Err = ProgramError;

    /// `"12"`, `"1.12.3"`, `""` or `"ε"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(PathString::empty());
        }
        let bad = |col| ProgramError::SyntaxError {
            line: 1,
            col,
            msg: format!("`{s}` is not a path of positive branch indices"),
        };
        let syms: Result<Vec<usize>, _> = if s.contains('.') {
            s.split('.')
                .enumerate()
                .map(|(i, t)| t.parse::<usize>().ok().filter(|&v| v > 0).ok_or(bad(i + 1)))
                .collect()
        } else {
            s.chars()
                .enumerate()
                .map(|(i, c)| c.to_digit(10).filter(|&v| v > 0).map(|v| v as usize).ok_or(bad(i + 1)))
                .collect()
        };
        Ok(PathString(syms?.into_iter().map(|v| v - 1).collect()))
    }
}

/// `A_σ`: the branch maps applied left to right, `A_{σa} = A_a ∘ A_σ`.
pub fn compose_path(p: &Program, sigma: &PathString) -> Result<PolyMap, ProgramError> {
    compose_path_with(p, sigma, &PolyLimits::unlimited())
}

pub fn compose_path_with(p: &Program, sigma: &PathString, limits: &PolyLimits) -> Result<PolyMap, ProgramError> {
    sigma.check(p.num_branches())?;
    let mut acc = PolyMap::identity(p.nvars());
    for &a in sigma.symbols() {
        acc = p.branch(a).after_limited(&acc, limits)?;
    }
    Ok(acc)
}

/// `(T⁻_σ, T_σ)`: the conditions for following `σ` from a point, and for the
/// loop to still be running afterwards.
///
/// Multi-path loops: `T⁻_σ = {g∘A_τ : τ a proper prefix, g ∈ S}` and
/// `T_σ = T⁻_σ ∪ S∘A_σ`. Guarded commands: step `k` contributes the guard of
/// the branch taken there, and `T_σ` adds the product of all guards after `σ`
/// (some command enabled).
pub fn path_constraints(p: &Program, sigma: &PathString) -> Result<(PolySet, PolySet), ProgramError> {
    path_constraints_with(p, sigma, &PolyLimits::default())
}

pub fn path_constraints_with(
    p: &Program,
    sigma: &PathString,
    limits: &PolyLimits,
) -> Result<(PolySet, PolySet), ProgramError> {
    sigma.check(p.num_branches())?;
    let n = p.nvars();
    let guards = p.guard_sets()?;
    let compose_all = |set: &PolySet, map: &PolyMap| -> Result<Vec<Polynomial>, ProgramError> {
        let mut out = Vec::with_capacity(set.len());
        for g in set {
            let c = g.compose_limited(map, limits)?;
            if !c.is_zero() {
                out.push(c);
            }
        }
        Ok(out)
    };
    let mut minus: Vec<Polynomial> = Vec::new();
    let mut acc = PolyMap::identity(n);
    for &a in sigma.symbols() {
        minus.extend(compose_all(p.guard_set_for(&guards, a), &acc)?);
        acc = p.branch(a).after_limited(&acc, limits)?;
        limits.check_deadline()?;
    }
    let last: Vec<PolySet> = guards
        .iter()
        .map(|s| PolySet::new(n, compose_all(s, &acc)?).map_err(ProgramError::from))
        .collect::<Result<_, _>>()?;
    let tail = if last.len() == 1 {
        last.into_iter().next().unwrap()
    } else if last.iter().any(PolySet::is_empty) {
        // An identically satisfied guard: no constraint.
        PolySet::empty(n)
    } else {
        set_product_with(&last, GUARD_TAIL_CAP, limits)?
    };
    let t_minus = PolySet::new(n, minus.clone())?;
    let t = PolySet::new(n, minus.into_iter().chain(tail.into_polys()))?;
    Ok((t_minus, t))
}

const GUARD_TAIL_CAP: usize = 100_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::program::{parse_polynomial, parse_program};

    const RUNNING: &str = "vars: x, y;
        while (x + y == 0) {
            (x, y) := (y^2, 2*x + y);
         || (x, y) := (2*x^2 + y - 1, x + 2*y + 1);
        }";

    fn polys(p: &Program, src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_polynomial(s, p.names()).unwrap()).collect()
    }

    #[test]
    fn path_strings() {
        let s: PathString = "12".parse().unwrap();
        assert_eq!(s.symbols(), &[0, 1]);
        assert_eq!(s.to_string(), "12");
        assert_eq!(PathString::empty().to_string(), "ε");
        assert_eq!("ε".parse::<PathString>().unwrap(), PathString::empty());
        let long: PathString = "1.11.2".parse().unwrap();
        assert_eq!(long.symbols(), &[0, 10, 1]);
        assert_eq!(long.to_string(), "1.11.2");
        assert!("1x".parse::<PathString>().is_err());
        assert!("0".parse::<PathString>().is_err());
    }

    #[test]
    fn running_compositions() {
        let p = parse_program(RUNNING).unwrap();
        assert_eq!(compose_path(&p, &PathString::empty()).unwrap(), PolyMap::identity(2));
        let a1 = compose_path(&p, &"1".parse().unwrap()).unwrap();
        assert_eq!(a1.components(), polys(&p, &["y^2", "2*x + y"]).as_slice());
        // Substituting (y², 2x+y) into (2x²+y−1, x+2y+1) by hand.
        let a12 = compose_path(&p, &"12".parse().unwrap()).unwrap();
        assert_eq!(
            a12.components(),
            polys(&p, &["2*y^4 + 2*x + y - 1", "y^2 + 4*x + 2*y + 1"]).as_slice()
        );
        assert!(matches!(
            compose_path(&p, &"3".parse().unwrap()),
            Err(ProgramError::InvalidSymbol { symbol: 3, branches: 2 })
        ));
    }

    #[test]
    fn running_constraints() {
        let p = parse_program(RUNNING).unwrap();
        let (tm, t) = path_constraints(&p, &PathString::empty()).unwrap();
        assert!(tm.is_empty());
        assert_eq!(t.polys(), polys(&p, &["x + y"]).as_slice());
        let (tm, t) = path_constraints(&p, &"1".parse().unwrap()).unwrap();
        assert_eq!(tm.polys(), polys(&p, &["x + y"]).as_slice());
        assert_eq!(t.polys(), polys(&p, &["x + y", "y^2 + 2*x + y"]).as_slice());
        let (_, t) = path_constraints(&p, &"2".parse().unwrap()).unwrap();
        assert_eq!(t.polys(), polys(&p, &["x + y", "2*x^2 + x + 3*y"]).as_slice());
    }

    #[test]
    fn guarded_command_constraints() {
        let p = parse_program("vars: x; do x == 0 -> x := x + 1; || x - 1 == 0 -> x := x + 2; od").unwrap();
        let (tm, t) = path_constraints(&p, &"1".parse().unwrap()).unwrap();
        assert_eq!(tm.polys(), polys(&p, &["x"]).as_slice());
        // After x := x+1, some guard holds: (x+1)(x+1−1).
        assert_eq!(t.polys(), polys(&p, &["x", "(x + 1)*x"]).as_slice());
        // x = 0 follows branch 1 and then stays enabled.
        for q in t.polys() {
            assert!(q.vanishes_at(&[rat(0)]).unwrap());
        }
    }
}
