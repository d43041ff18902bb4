use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::binomial::pochhammer;
use super::{ChainError, DegreeBoundFn, MacaulayRep};

/// Default ceiling on the number of machine steps.
pub const DEFAULT_MACHINE_CAP: u64 = 1_000_000;

/// Hilbert values larger than this many bits abort the run.
const MAX_VALUE_BITS: u64 = 1 << 24;

/// The stopping value `h` is compared against at each step.
#[derive(Clone, Debug)]
enum Target {
    Fixed(BigUint),
    /// `count` entries equal to `entry` evaluated at the current level.
    Entries {
        entry: BigUint,
        count: u64,
    },
}

impl Target {
    fn at(&self, level: &BigUint) -> BigUint {
        match self {
            Target::Fixed(v) => v.clone(),
            Target::Entries { count: 0, .. } => BigUint::zero(),
            Target::Entries { entry, count } => {
                let e1 = entry + 1u32;
                pochhammer(&e1, level) - pochhammer(&e1, &(level - *count))
            }
        }
    }

    /// Independent of the level.
    fn is_constant(&self) -> bool {
        match self {
            Target::Fixed(_) => true,
            Target::Entries { entry, count } => *count == 0 || entry.is_zero(),
        }
    }
}

/// Steps of the Hilbert machine: `(k, h_k)` pairs and the stopping index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertTrace {
    pub nvars: u64,
    pub f: DegreeBoundFn,
    pub steps: Vec<(u64, BigUint)>,
    /// First `k` with `h_k = target`, if reached within the recorded steps.
    pub index: Option<u64>,
}

fn first_value(nvars: u64, f: &DegreeBoundFn) -> BigUint {
    pochhammer(&f.value(1), &BigUint::from(nvars - 1)) - 1u32
}

fn check_bits(h: &BigUint) -> Result<(), ChainError> {
    if h.bits() > MAX_VALUE_BITS {
        return Err(ChainError::ResourceLimitExceeded(format!(
            "Hilbert value exceeds {MAX_VALUE_BITS} bits"
        )));
    }
    Ok(())
}

fn finish(answer: BigUint, cap: u64) -> Result<BigUint, ChainError> {
    if answer > BigUint::from(cap) {
        Err(ChainError::CapExceeded {
            cap,
            lower_bound: answer,
        })
    } else {
        Ok(answer)
    }
}

fn run(nvars: u64, f: &DegreeBoundFn, target: Target, cap: u64) -> Result<BigUint, ChainError> {
    if nvars == 0 {
        return Err(ChainError::InvalidArgument(
            "the machine needs at least one variable".into(),
        ));
    }
    let mut k: u64 = 1;
    let mut h = first_value(nvars, f);
    let mut level = f.value(1);
    loop {
        if k > cap {
            return Err(ChainError::CapExceeded {
                cap,
                lower_bound: BigUint::from(cap) + 1u32,
            });
        }
        let tgt = target.at(&level);
        if h == tgt {
            return Ok(BigUint::from(k));
        }
        if h < tgt {
            return Err(ChainError::TargetUnreachable { step: k });
        }
        // Lifting never lowers a value, so h drops by at most one per step.
        if target.is_constant() {
            let lower = BigUint::from(k) + (&h - &tgt);
            if lower > BigUint::from(cap) {
                return Err(ChainError::CapExceeded {
                    cap,
                    lower_bound: lower,
                });
            }
        }
        // Constant degree from here on: lifting is the identity, so h just counts down.
        if f.constant_from(k) {
            return finish(BigUint::from(k) + (&h - &tgt), cap);
        }
        let rep = MacaulayRep::decompose(&h, &level);
        // All-zero entries keep their value under lifting; same countdown.
        if rep.all_zero() && target.is_constant() {
            return finish(BigUint::from(k) + (&h - &tgt), cap);
        }
        let next_level = f.value(k + 1);
        h = rep.value_at(&next_level) - 1u32;
        check_bits(&h)?;
        level = next_level;
        k += 1;
    }
}

/// Smallest `k >= 1` with `h_k = target`, where `h_1 = (f(1))_{D-1} - 1` and
/// `h_{k+1}` is `h_k` lifted from level `f(k)` to level `f(k+1)`, minus one.
pub fn hilbert_machine(nvars: u64, f: &DegreeBoundFn, target: &BigUint, cap: u64) -> Result<BigUint, ChainError> {
    run(nvars, f, Target::Fixed(target.clone()), cap)
}

/// The first `max_steps` machine values, without shortcuts.
pub fn hilbert_trace(
    nvars: u64,
    f: &DegreeBoundFn,
    target: &BigUint,
    max_steps: u64,
) -> Result<HilbertTrace, ChainError> {
    if nvars == 0 {
        return Err(ChainError::InvalidArgument(
            "the machine needs at least one variable".into(),
        ));
    }
    let mut steps = Vec::new();
    let mut h = first_value(nvars, f);
    let mut index = None;
    for k in 1..=max_steps {
        steps.push((k, h.clone()));
        if h == *target {
            index = Some(k);
            break;
        }
        if h < *target {
            break;
        }
        let level = f.value(k);
        let rep = MacaulayRep::decompose(&h, &level);
        h = rep.value_at(&f.value(k + 1)) - 1u32;
        check_bits(&h)?;
    }
    Ok(HilbertTrace {
        nvars,
        f: f.clone(),
        steps,
        index,
    })
}

/// `Ω(dd, f, t)`: the machine in `dd + 1` variables run until the Hilbert value
/// equals `f(1) - t` entries of `dd - 1` at the current level.
pub fn omega(dd: u64, f: &DegreeBoundFn, t: u64, cap: u64) -> Result<BigUint, ChainError> {
    let f1 = f
        .value(1)
        .to_u64()
        .ok_or_else(|| ChainError::InvalidArgument("f(1) too large".into()))?;
    if t > f1 {
        return Err(ChainError::InvalidArgument(format!("t = {t} exceeds f(1) = {f1}")));
    }
    if cap == 0 {
        return Err(ChainError::CapExceeded {
            cap,
            lower_bound: BigUint::one(),
        });
    }
    if dd == 0 {
        return Ok(BigUint::one());
    }
    let target = Target::Entries {
        entry: BigUint::from(dd - 1),
        count: f1 - t,
    };
    run(dd + 1, f, target, cap)
}

/// `L(d, f)`: the greatest length of a strictly ascending chain of ideals in
/// `d` variables whose `i`-th member is generated in degree at most `f(i)`.
pub fn chain_bound(d: u64, f: &DegreeBoundFn, cap: u64) -> Result<BigUint, ChainError> {
    let f1 = f
        .value(1)
        .to_u64()
        .ok_or_else(|| ChainError::InvalidArgument("f(1) too large".into()))?;
    omega(d, f, f1, cap)
}
