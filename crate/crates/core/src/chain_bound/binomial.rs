use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)` for a small `k`; exact.
pub(crate) fn choose_small(n: &BigUint, k: u64) -> BigUint {
    let kk = BigUint::from(k);
    if *n < kk {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `(n)_k = C(n + k, k)`, computed through the smaller of `n` and `k`.
pub(crate) fn pochhammer(n: &BigUint, k: &BigUint) -> BigUint {
    let top = n + k;
    let small = n.min(k);
    let s = small.to_u64().expect("binomial with both arguments beyond u64 range");
    choose_small(&top, s)
}

/// `(n)_k = C(n + k, k)`: the number of monomials of degree `n` in `k + 1` variables.
pub fn binom_count(n: u64, k: u64) -> BigUint {
    pochhammer(&BigUint::from(n), &BigUint::from(k))
}

/// A run of `count` equal entries `value` occupying consecutive levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub value: BigUint,
    pub count: BigUint,
}

/// The greedy binomial representation `n = (n_1, …, n_r)_k`, where entry `j`
/// contributes `(n_j)_{k-j+1}`. Entries are stored run-length encoded so that
/// very high levels stay cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacaulayRep {
    level: BigUint,
    runs: Vec<Run>,
}

/// Sum of `(v)_l` for `l` in `(level - count, level]`, by the hockey-stick identity
/// `sum_{l<=L} (v)_l = (v+1)_L`.
fn run_sum(v: &BigUint, level: &BigUint, count: &BigUint) -> BigUint {
    let v1 = v + 1u32;
    pochhammer(&v1, level) - pochhammer(&v1, &(level - count))
}

/// Largest `v` with `(v)_level <= rem`; requires `rem >= 1`.
fn max_entry(rem: &BigUint, level: &BigUint) -> BigUint {
    let fits = |v: &BigUint| pochhammer(v, level) <= *rem;
    let mut lo = BigUint::zero();
    let mut step = BigUint::one();
    while fits(&(&lo + &step)) {
        lo += &step;
        step <<= 1;
    }
    // Answer in [lo, lo + step).
    let mut hi = &lo + &step;
    while &hi - &lo > BigUint::one() {
        let mid = (&lo + &hi) >> 1;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Longest run of entry `v` starting at `level` whose sum stays within `rem`.
fn run_length(v: &BigUint, level: &BigUint, rem: &BigUint) -> BigUint {
    let full = run_sum(v, level, level);
    if full <= *rem {
        return level.clone();
    }
    if let Some(k) = v.to_u64().map(|x| x + 1).filter(|&k| k <= 64) {
        // Sum of c entries = C(v+level+1, k) - C(m, k) with m = v+level+1-c.
        // Find the smallest m >= k with C(m, k) >= C(v+level+1, k) - rem.
        let top = v + level + 1u32;
        let t = choose_small(&top, k) - rem;
        let mut fact = BigUint::one();
        for i in 2..=k {
            fact *= i;
        }
        let root = (&fact * &t).nth_root(k as u32);
        let kk = BigUint::from(k);
        let mut lo = root.clone().max(kk.clone());
        let mut hi = (&root + &kk).min(top.clone());
        if lo > hi {
            lo = hi.clone();
        }
        // Smallest m in [lo, hi] with C(m, k) >= t; guard against an off-by-one
        // at the lower end by stepping down while still feasible.
        while lo > kk && choose_small(&(&lo - 1u32), k) >= t {
            lo -= 1u32;
        }
        while lo < hi {
            let mid = (&lo + &hi) >> 1;
            if choose_small(&mid, k) >= t {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        return top - lo;
    }
    // Generic binary search over the run length.
    let mut lo = BigUint::one();
    let mut hi = level.clone();
    while lo < hi {
        let mid = (&lo + &hi + 1u32) >> 1;
        if run_sum(v, level, &mid) <= *rem {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    lo
}

impl MacaulayRep {
    /// Greedy decomposition of `n` at `level >= 1`.
    pub fn decompose(n: &BigUint, level: &BigUint) -> MacaulayRep {
        assert!(!level.is_zero(), "Macaulay level must be at least 1");
        let mut rem = n.clone();
        let mut lvl = level.clone();
        let mut runs = Vec::new();
        while !rem.is_zero() && !lvl.is_zero() {
            let v = max_entry(&rem, &lvl);
            let c = run_length(&v, &lvl, &rem);
            rem -= run_sum(&v, &lvl, &c);
            lvl -= &c;
            runs.push(Run { value: v, count: c });
        }
        debug_assert!(rem.is_zero());
        MacaulayRep {
            level: level.clone(),
            runs,
        }
    }

    pub fn level(&self) -> &BigUint {
        &self.level
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Number of entries `r`.
    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|r| &r.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Entries expanded; only sensible when `len()` is small.
    pub fn entries(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        for r in &self.runs {
            let c = r.count.to_usize().expect("too many entries to expand");
            out.extend(std::iter::repeat_n(r.value.clone(), c));
        }
        out
    }

    /// True iff every entry is zero (the value then equals the entry count).
    pub fn all_zero(&self) -> bool {
        self.runs.iter().all(|r| r.value.is_zero())
    }

    pub fn value(&self) -> BigUint {
        self.value_at(&self.level)
    }

    /// The same entries evaluated at another starting level.
    pub fn value_at(&self, level: &BigUint) -> BigUint {
        let mut lvl = level.clone();
        let mut acc = BigUint::zero();
        for r in &self.runs {
            acc += run_sum(&r.value, &lvl, &r.count);
            lvl -= &r.count;
        }
        acc
    }
}

/// Greedy Macaulay representation of `n` at level `k >= 1`.
pub fn macaulay_decompose(n: &BigUint, k: u64) -> MacaulayRep {
    MacaulayRep::decompose(n, &BigUint::from(k))
}

/// `Inc_k(n)`: decompose at level `k`, re-evaluate at level `k + 1`.
pub fn inc(n: &BigUint, k: u64) -> BigUint {
    let rep = macaulay_decompose(n, k);
    rep.value_at(&BigUint::from(k + 1))
}
