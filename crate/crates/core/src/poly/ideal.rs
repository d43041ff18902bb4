use super::groebner::{groebner_of, reduce_limited};
use super::{MonomialOrder, PolyError, PolyLimits, PolySet, Polynomial};

fn check_dim(f: &Polynomial, p: &PolySet) -> Result<(), PolyError> {
    if f.nvars() != p.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: p.nvars(),
            found: f.nvars(),
        });
    }
    Ok(())
}

fn basis_of(p: &PolySet, limits: &PolyLimits) -> Result<PolySet, PolyError> {
    if p.is_reduced_groebner() {
        Ok(p.clone())
    } else {
        groebner_of(p.nvars(), p.polys(), MonomialOrder::DegLex, limits)
    }
}

/// `f ∈ ⟨P⟩`, decided by reducing against the reduced Gröbner basis.
pub fn ideal_member(f: &Polynomial, p: &PolySet) -> Result<bool, PolyError> {
    ideal_member_with(f, p, &PolyLimits::default())
}

pub fn ideal_member_with(f: &Polynomial, p: &PolySet, limits: &PolyLimits) -> Result<bool, PolyError> {
    check_dim(f, p)?;
    if f.is_zero() {
        return Ok(true);
    }
    let gb = basis_of(p, limits)?;
    Ok(reduce_limited(f, &gb, limits)?.is_zero())
}

/// `f` vanishes on the complex zero set of `P` (`f ∈ √⟨P⟩`).
///
/// Uses the auxiliary-variable test: `1 ∈ ⟨P ∪ {1 - t·f}⟩` in one more variable.
pub fn radical_member(f: &Polynomial, p: &PolySet) -> Result<bool, PolyError> {
    radical_member_with(f, p, &PolyLimits::default())
}

pub fn radical_member_with(f: &Polynomial, p: &PolySet, limits: &PolyLimits) -> Result<bool, PolyError> {
    if ideal_member_with(f, p, limits)? {
        return Ok(true);
    }
    let n = p.nvars();
    let t = Polynomial::var(n + 1, n);
    let aux = &Polynomial::one(n + 1) - &(&t * &f.extend_vars(1));
    let mut gens: Vec<Polynomial> = p.iter().map(|g| g.extend_vars(1)).collect();
    gens.push(aux);
    let gb = groebner_of(n + 1, &gens, MonomialOrder::DegLex, limits)?;
    Ok(gb.contains_unit())
}

/// `1 ∈ ⟨P⟩`, i.e. `P` has no common complex zero.
pub fn ideal_is_trivial(p: &PolySet) -> Result<bool, PolyError> {
    ideal_is_trivial_with(p, &PolyLimits::default())
}

pub fn ideal_is_trivial_with(p: &PolySet, limits: &PolyLimits) -> Result<bool, PolyError> {
    if p.contains_unit() {
        return Ok(true);
    }
    Ok(basis_of(p, limits)?.contains_unit())
}

/// Lexicographic enumeration of index tuples `(i_1, …, i_k)` with
/// `i_j < sizes[j]`, last position varying fastest.
#[derive(Clone, Debug)]
pub struct ChoiceIndices {
    sizes: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl ChoiceIndices {
    pub fn new(sizes: Vec<usize>) -> Self {
        let current = if sizes.contains(&0) {
            None
        } else {
            Some(vec![0; sizes.len()])
        };
        ChoiceIndices { sizes, current }
    }

    /// Number of tuples, or `None` on overflow.
    pub fn total(sizes: &[usize]) -> Option<usize> {
        sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s))
    }
}

impl Iterator for ChoiceIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.sizes[pos] {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(out)
    }
}

/// All products choosing one polynomial from each set, deduplicated, in
/// lexicographic choice order. Fails when more than `cap` products would be formed.
pub fn set_product(sets: &[PolySet], cap: usize) -> Result<PolySet, PolyError> {
    set_product_with(sets, cap, &PolyLimits::unlimited())
}

pub fn set_product_with(sets: &[PolySet], cap: usize, limits: &PolyLimits) -> Result<PolySet, PolyError> {
    let Some(first) = sets.first() else {
        return Err(PolyError::ResourceLimitExceeded("empty product of sets".into()));
    };
    let nvars = first.nvars();
    for s in sets {
        if s.nvars() != nvars {
            return Err(PolyError::DimensionMismatch {
                expected: nvars,
                found: s.nvars(),
            });
        }
    }
    let sizes: Vec<usize> = sets.iter().map(PolySet::len).collect();
    match ChoiceIndices::total(&sizes) {
        Some(n) if n <= cap => {}
        _ => {
            return Err(PolyError::ResourceLimitExceeded(format!(
                "set product of sizes {sizes:?} exceeds cap {cap}"
            )))
        }
    }
    let mut out = Vec::new();
    for choice in ChoiceIndices::new(sizes) {
        let mut prod = sets[0].polys()[choice[0]].clone();
        for (set, &i) in sets.iter().zip(&choice).skip(1) {
            prod = prod.mul_limited(&set.polys()[i], limits)?;
        }
        limits.check_deadline()?;
        out.push(prod);
    }
    PolySet::new(nvars, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }
    fn set(ps: Vec<Polynomial>) -> PolySet {
        let n = ps[0].nvars();
        PolySet::new(n, ps).unwrap()
    }

    #[test]
    fn membership_examples() {
        let x = v(2, 0);
        let y = v(2, 1);
        let x2 = &x * &x;
        assert!(!ideal_member(&x, &set(vec![x2.clone()])).unwrap());
        assert!(ideal_member(&(&x2 * &y), &set(vec![x2.clone()])).unwrap());
        assert!(ideal_member(&(&x + &x), &set(vec![&x + &y, &x - &y])).unwrap());
    }

    #[test]
    fn radical_examples() {
        let x = v(2, 0);
        let y = v(2, 1);
        let one = Polynomial::one(2);
        let x2 = &x * &x;
        assert!(radical_member(&x, &set(vec![x2.clone()])).unwrap());
        assert!(!radical_member(&(&x + &one), &set(vec![x2])).unwrap());
        // Z(x^2 + y^2) over C is the pair of lines y = ±ix; on them xy = ±ix^2, which is
        // nonzero away from the origin, so xy is not in the radical.
        let circle = &(&x * &x) + &(&y * &y);
        assert!(!radical_member(&(&x * &y), &set(vec![circle.clone()])).unwrap());
        // x^4 + x^2 y^2 = x^2 (x^2 + y^2) lies in the ideal itself.
        let x2y2 = &(&x * &x) * &(&y * &y);
        assert!(radical_member(&(&x2y2 + &(&(&x * &x) * &(&x * &x))), &set(vec![circle.clone()])).unwrap());
        // xy is a radical member of x^2 y^2 without being an ideal member.
        assert!(radical_member(&(&x * &y), &set(vec![x2y2.clone()])).unwrap());
        assert!(!ideal_member(&(&x * &y), &set(vec![x2y2])).unwrap());
    }

    #[test]
    fn triviality_examples() {
        let x = v(2, 0);
        let y = v(2, 1);
        let one = Polynomial::one(2);
        assert!(ideal_is_trivial(&set(vec![x.clone(), &x + &one])).unwrap());
        assert!(!ideal_is_trivial(&set(vec![x.clone()])).unwrap());
        let five = Polynomial::constant(2, crate::poly::rat(5));
        let ps = set(vec![&x + &y, &(&x * &x) + &y, &x - &five]);
        assert!(ideal_is_trivial(&ps).unwrap());
    }

    #[test]
    fn product_examples() {
        let x = v(3, 0);
        let y = v(3, 1);
        let z = v(3, 2);
        let p = set_product(&[set(vec![x.clone()]), set(vec![y.clone(), z.clone()])], 100).unwrap();
        assert_eq!(p.polys(), &[&x * &y, &x * &z]);
        let single = set_product(&[set(vec![y.clone(), z.clone()])], 100).unwrap();
        assert_eq!(single.polys(), &[y.clone(), z.clone()]);
        let s = &x + &y;
        let sq = set_product(&[set(vec![s.clone()]), set(vec![s.clone()])], 100).unwrap();
        assert_eq!(sq.polys(), &[&s * &s]);
        assert!(set_product(&vec![set(vec![y.clone(), z.clone()]); 4], 15).is_err());
    }

    #[test]
    fn choice_indices_are_lexicographic() {
        let all: Vec<_> = ChoiceIndices::new(vec![2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(ChoiceIndices::new(vec![2, 0]).count(), 0);
        assert_eq!(
            ChoiceIndices::new(vec![]).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
    }
}
