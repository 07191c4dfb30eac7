//! Build `theta` and `(b_n)` realizing a prescribed non-decreasing shadow `(a_n)`.
//!
//! Jump indices `n_j` (where `a_{n_j + 1} > a_{n_j}`) get the largest `b`
//! strictly inside the jump bracket
//! `1/a_j - 1/a_j' < 1/b < 1/(a_j - 1) - 1/(a_j' - 1)`, with `a_j' = a_{n_j + 1}`.
//! Plateau positions between jumps are filled with a common large value `N_j`
//! sized against the headroom budgets `theta_k`. The infinite sum is never
//! evaluated; every claim is made through rational enclosures.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::SequenceFamily;
use crate::greedy::DEFAULT_MAX_TERMS;
use crate::interval::RationalInterval;
use crate::rational::ExactRational;

/// How an explicit prefix is extended past its last entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Continuation {
    /// `a_{n+1} = a_n + (a_L - a_{L-1})` beyond the prefix.
    RepeatLastDelta,
    /// Values beyond the prefix come from the family.
    Family(SequenceFamily),
}

pub type Generator = Arc<dyn Fn(usize) -> BigInt + Send + Sync>;

/// A target shadow sequence `(a_n)`, 1-based.
#[derive(Clone)]
pub enum TargetSequence {
    Explicit {
        prefix: Vec<BigInt>,
        continuation: Continuation,
    },
    Family(SequenceFamily),
    Generator(Generator),
}

impl fmt::Debug for TargetSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSequence::Explicit {
                prefix,
                continuation,
            } => f
                .debug_struct("Explicit")
                .field("prefix", prefix)
                .field("continuation", continuation)
                .finish(),
            TargetSequence::Family(fam) => f.debug_tuple("Family").field(fam).finish(),
            TargetSequence::Generator(_) => f.write_str("Generator(..)"),
        }
    }
}

impl TargetSequence {
    pub fn explicit(prefix: Vec<BigInt>, continuation: Continuation) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidSequence("empty prefix".into()));
        }
        if continuation == Continuation::RepeatLastDelta {
            if prefix.len() < 2 {
                return Err(Error::InvalidSequence(
                    "repeating the last delta needs at least two values".into(),
                ));
            }
            if prefix[prefix.len() - 1] <= prefix[prefix.len() - 2] {
                return Err(Error::InvalidSequence(
                    "last delta is not positive, so the continuation is bounded".into(),
                ));
            }
        }
        Ok(TargetSequence::Explicit {
            prefix,
            continuation,
        })
    }

    pub fn generator(f: impl Fn(usize) -> BigInt + Send + Sync + 'static) -> Self {
        TargetSequence::Generator(Arc::new(f))
    }

    /// `a_n` for `n >= 1`.
    pub fn value(&self, n: usize) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::Domain("indices start at 1".into()));
        }
        match self {
            TargetSequence::Explicit {
                prefix,
                continuation,
            } => {
                if n <= prefix.len() {
                    return Ok(prefix[n - 1].clone());
                }
                match continuation {
                    Continuation::RepeatLastDelta => {
                        let l = prefix.len();
                        let delta = &prefix[l - 1] - &prefix[l - 2];
                        Ok(&prefix[l - 1] + delta * BigInt::from(n - l))
                    }
                    Continuation::Family(fam) => fam.a(n),
                }
            }
            TargetSequence::Family(fam) => fam.a(n),
            TargetSequence::Generator(g) => Ok(g(n)),
        }
    }

    /// `a_1, ..., a_len`, validated: `a_1 >= 2` and non-decreasing.
    pub fn prefix(&self, len: usize) -> Result<Vec<BigInt>> {
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        for n in 1..=len {
            let v = self.value(n)?;
            if n == 1 && v < BigInt::from(2) {
                return Err(Error::InvalidSequence(format!("a_1 = {v} is below 2")));
            }
            if let Some(prev) = out.last() {
                if &v < prev {
                    return Err(Error::InvalidSequence(format!(
                        "a_{n} = {v} is below a_{} = {prev}",
                        n - 1
                    )));
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    /// True when the whole infinite sequence is known to be strictly increasing,
    /// so no plateau (and no filler) can ever occur.
    pub fn known_strictly_increasing(&self) -> bool {
        match self {
            TargetSequence::Explicit {
                prefix,
                continuation: Continuation::RepeatLastDelta,
            } => prefix.windows(2).all(|w| w[0] < w[1]),
            TargetSequence::Explicit { .. } => false,
            TargetSequence::Family(fam) => fam.is_strictly_increasing(),
            TargetSequence::Generator(_) => false,
        }
    }
}

/// Indices `n <= depth` with `a_{n+1} > a_n`, in increasing order.
pub fn jump_set(seq: &TargetSequence, depth: usize) -> Result<Vec<usize>> {
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let a = seq.prefix(depth + 1)?;
    let jumps: Vec<usize> = (1..=depth).filter(|&n| a[n] > a[n - 1]).collect();
    if jumps.is_empty() {
        return Err(Error::NoJump(depth));
    }
    Ok(jumps)
}

/// The open bracket for `b` at a jump from `a_j` to `a_next`:
/// `(a_j a_next/(a_next - a_j) - 1 - (2a_j - 1)/(a_next - a_j), a_j a_next/(a_next - a_j))`.
///
/// Its length is `1 + (2a_j - 1)/(a_next - a_j) > 1`, so it always holds an integer.
pub fn jump_b_interval(a_j: &BigInt, a_next: &BigInt) -> Result<RationalInterval> {
    if a_j < &BigInt::from(2) || a_next <= a_j {
        return Err(Error::Domain(format!(
            "need 2 <= a_j < a_next, got ({a_j}, {a_next})"
        )));
    }
    let gap = a_next - a_j;
    let hi = ExactRational::new(a_j * a_next, gap.clone())?;
    let lo = &hi - &ExactRational::one() - ExactRational::new(BigInt::from(2) * a_j - 1, gap)?;
    RationalInterval::open(lo, hi)
}

/// The same bracket with both ends closed, the relaxation that still
/// supports the construction when it occurs at finitely many indices.
pub fn closed_jump_b_interval(a_j: &BigInt, a_next: &BigInt) -> Result<RationalInterval> {
    let open = jump_b_interval(a_j, a_next)?;
    RationalInterval::closed(
        open.lo().clone(),
        open.hi_value().cloned().expect("bounded"),
    )
}

/// `1/a_j - 1/a_next < 1/b < 1/(a_j - 1) - 1/(a_next - 1)`, checked directly
/// on reciprocals.
pub fn in_jump_bracket(a_j: &BigInt, a_next: &BigInt, b: &BigInt) -> bool {
    let one = BigInt::one();
    if a_j <= &one || a_next <= &one || b.is_zero() {
        return false;
    }
    let unit = |n: &BigInt| ExactRational::unit(n).expect("nonzero");
    let inv_b = unit(b);
    let lower = unit(a_j) - unit(a_next);
    let upper = unit(&(a_j - &one)) - unit(&(a_next - &one));
    lower < inv_b && inv_b < upper
}

/// Largest integer strictly inside an open bracket.
pub fn choose_b_jump(iv: &RationalInterval) -> Result<BigInt> {
    iv.largest_integer()
        .ok_or_else(|| Error::InvalidInterval(format!("{iv} holds no integer")))
}

/// Enclosure of `sum_{i >= j} 1/b_{n_i}` from the terms `b_{n_j}..b_{n_D}`
/// and the shadow value `a_after = a_{n_{D+1}}` beyond them:
/// `(S + 1/a_after, S + 1/(a_after - 1))` with `S` the finite sum.
pub fn jump_tail_enclosure(b_jumps: &[BigInt], a_after: &BigInt) -> Result<RationalInterval> {
    if a_after < &BigInt::from(2) {
        return Err(Error::Domain(format!("a_after = {a_after} is below 2")));
    }
    let mut s = ExactRational::zero();
    for b in b_jumps {
        s = s + ExactRational::unit(b)?;
    }
    let lo = &s + &ExactRational::unit(a_after)?;
    let hi = s + ExactRational::unit(&(a_after - BigInt::one()))?;
    RationalInterval::open(lo, hi)
}

/// Half the certified headroom below `1/(a_j - 1)`.
///
/// Returns `None` when the enclosure cannot certify
/// `1/a_j < S + theta_j < 1/(a_j - 1)`, which happens when its upper end
/// reaches `1/(a_j - 1)` or its lower end is too low.
pub fn choose_theta_j(enclosure: &RationalInterval, a_j: &BigInt) -> Option<ExactRational> {
    let hi = enclosure.hi_value()?;
    let ceiling = ExactRational::unit(&(a_j - BigInt::one())).ok()?;
    let floor = ExactRational::unit(a_j).ok()?;
    if *hi >= ceiling {
        return None;
    }
    let theta = (&ceiling - hi) * ExactRational::new(1, 2).expect("nonzero");
    // S > lo, so lo + theta >= 1/a_j is enough for the strict lower bound
    if enclosure.lo() + &theta < floor {
        return None;
    }
    Some(theta)
}

/// Tries [`choose_theta_j`] on enclosures of increasing depth `j..=max_depth`.
pub fn theta_j_with_deepening(
    a_j: &BigInt,
    j: usize,
    max_depth: usize,
    mut enclosure_at: impl FnMut(usize) -> Result<RationalInterval>,
) -> Result<ExactRational> {
    for depth in j..=max_depth {
        if let Some(theta) = choose_theta_j(&enclosure_at(depth)?, a_j) {
            return Ok(theta);
        }
    }
    Err(Error::DepthExhausted(max_depth))
}

/// `min { theta_1 / 2^j, theta_2 / 2^(j-1), ..., theta_j / 2 }` for `j = thetas.len()`.
pub fn filler_budget(thetas: &[ExactRational]) -> Option<ExactRational> {
    let j = thetas.len();
    thetas
        .iter()
        .enumerate()
        .map(|(i, th)| th * &ExactRational::new(1, BigInt::one() << (j - i)).expect("nonzero"))
        .min()
}

/// Smallest `N` with `gap / N < budget`; `None` when there is nothing to fill.
pub fn choose_filler(gap: usize, budget: &ExactRational) -> Option<BigInt> {
    if gap == 0 {
        return None;
    }
    let ratio = &ExactRational::from_integer(BigInt::from(gap)) / budget;
    Some(ratio.floor() + 1)
}

/// Outcome of the per-index checks on a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// `theta < 1/(a_{n_1} - 1) <= 1`, from the enclosure's upper end.
    pub theta_below_first_bound: bool,
    /// Indices `n` where `1/a_n < tail_n <= 1/(a_n - 1)` could not be certified.
    pub tail_failures: Vec<usize>,
    /// Jump indices whose `b` is not strictly inside the jump bracket.
    pub bracket_failures: Vec<usize>,
    pub checked: usize,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.theta_below_first_bound
            && self.tail_failures.is_empty()
            && self.bracket_failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionResult {
    #[serde(serialize_with = "crate::serial::bigint_vec")]
    pub a_prefix: Vec<BigInt>,
    #[serde(serialize_with = "crate::serial::bigint_vec")]
    pub b_prefix: Vec<BigInt>,
    /// `n_1 < n_2 < ... < n_J`, 1-based.
    pub jump_indices: Vec<usize>,
    pub theta_enclosure: RationalInterval,
    /// `theta_j`; empty when the target is known to have no plateaus.
    pub theta_j_choices: Vec<ExactRational>,
    /// `N_j` per jump block; `None` where the block has no plateau.
    #[serde(serialize_with = "crate::serial::opt_bigint_vec")]
    pub filler_values: Vec<Option<BigInt>>,
    /// Number of jumps constructed.
    pub verification_depth: usize,
    /// Enclosure of `sum_{i >= n} 1/b_i` for each prefix index `n`.
    #[serde(skip)]
    pub tail_enclosures: Vec<RationalInterval>,
    pub certificate: Certificate,
}

/// Builds `J = jumps` jump blocks of the construction and certifies them.
pub fn construct(seq: &TargetSequence, jumps: usize) -> Result<ConstructionResult> {
    if jumps == 0 {
        return Err(Error::Domain("need at least one jump".into()));
    }

    // scan until J jumps are seen, keeping a_{n_J + 1}
    let mut a: Vec<BigInt> = Vec::new();
    let mut jump_indices = Vec::with_capacity(jumps);
    let mut n = 1;
    while jump_indices.len() < jumps {
        if n > DEFAULT_MAX_TERMS {
            return Err(Error::NoJump(DEFAULT_MAX_TERMS));
        }
        if a.is_empty() {
            a = seq.prefix(2)?;
        } else {
            let v = seq.value(n + 1)?;
            if &v < a.last().expect("nonempty") {
                return Err(Error::InvalidSequence(format!("a_{} decreases", n + 1)));
            }
            a.push(v);
        }
        if a[n] > a[n - 1] {
            jump_indices.push(n);
        }
        n += 1;
    }
    let last = *jump_indices.last().expect("nonempty");
    let a_beyond = a[last].clone();
    a.truncate(last);

    // value a_{n_j} and the next shadow value a_{n_j + 1} = a_{n_{j+1}}
    let shadow = |j: usize| -> (&BigInt, &BigInt) {
        let n = jump_indices[j];
        let next = if j + 1 < jump_indices.len() {
            &a[jump_indices[j + 1] - 1]
        } else {
            &a_beyond
        };
        (&a[n - 1], next)
    };

    let mut b_jumps = Vec::with_capacity(jumps);
    for j in 0..jumps {
        let (a_j, a_next) = shadow(j);
        b_jumps.push(choose_b_jump(&jump_b_interval(a_j, a_next)?)?);
    }

    let skip_fillers = seq.known_strictly_increasing();
    let mut thetas = Vec::new();
    if !skip_fillers {
        for j in 0..jumps {
            let (a_j, _) = shadow(j);
            let theta = theta_j_with_deepening(a_j, j, jumps - 1, |d| {
                let after = shadow(d).1;
                jump_tail_enclosure(&b_jumps[j..=d], after)
            })?;
            thetas.push(theta);
        }
    }

    let mut b_prefix = Vec::with_capacity(last);
    let mut filler_values = Vec::with_capacity(jumps);
    let mut prev = 0;
    for (j, &n_j) in jump_indices.iter().enumerate() {
        let gap = n_j - prev - 1;
        let filler = if gap > 0 {
            let budget = filler_budget(&thetas[..=j]).ok_or_else(|| {
                Error::InvalidSequence("plateau in a sequence declared strictly increasing".into())
            })?;
            choose_filler(gap, &budget)
        } else {
            None
        };
        if let Some(fill) = &filler {
            b_prefix.extend(std::iter::repeat_n(fill.clone(), gap));
        }
        b_prefix.push(b_jumps[j].clone());
        filler_values.push(filler);
        prev = n_j;
    }

    // everything past n_J: jump terms in (1/a_beyond, 1/(a_beyond - 1)),
    // fillers in [0, min_k theta_k / 2^(J+1-k))
    let filler_tail = if skip_fillers {
        ExactRational::zero()
    } else {
        filler_budget(&thetas).expect("one theta per jump")
    };
    let beyond_lo = ExactRational::unit(&a_beyond)?;
    let beyond_hi = ExactRational::unit(&(&a_beyond - BigInt::one()))? + &filler_tail;

    let mut tail_enclosures = vec![None; last];
    let mut suffix = ExactRational::zero();
    for i in (0..last).rev() {
        suffix = suffix + ExactRational::unit(&b_prefix[i])?;
        tail_enclosures[i] = Some(RationalInterval::open(
            &suffix + &beyond_lo,
            &suffix + &beyond_hi,
        )?);
    }
    let tail_enclosures: Vec<RationalInterval> = tail_enclosures
        .into_iter()
        .map(|t| t.expect("filled"))
        .collect();
    let theta_enclosure = tail_enclosures[0].clone();

    let mut result = ConstructionResult {
        a_prefix: a,
        b_prefix,
        jump_indices,
        theta_enclosure,
        theta_j_choices: thetas,
        filler_values,
        verification_depth: jumps,
        tail_enclosures,
        certificate: Certificate {
            theta_below_first_bound: false,
            tail_failures: Vec::new(),
            bracket_failures: Vec::new(),
            checked: 0,
        },
    };
    result.certificate = certify(&result, &a_beyond);
    Ok(result)
}

fn certify(result: &ConstructionResult, a_beyond: &BigInt) -> Certificate {
    let one = BigInt::one();
    let a = &result.a_prefix;
    let first_bound = ExactRational::unit(&(&a[0] - &one)).expect("a_1 >= 2");
    let theta_below_first_bound = result
        .theta_enclosure
        .hi_value()
        .is_some_and(|h| *h < first_bound)
        && first_bound <= ExactRational::one();

    let mut tail_failures = Vec::new();
    for (i, tail) in result.tail_enclosures.iter().enumerate() {
        let lower = ExactRational::unit(&a[i]).expect("nonzero");
        let upper = ExactRational::unit(&(&a[i] - &one)).expect("nonzero");
        // tail > lo >= 1/a_n, and tail < hi <= 1/(a_n - 1)
        let ok = *tail.lo() >= lower && tail.hi_value().is_some_and(|h| *h <= upper);
        if !ok {
            tail_failures.push(i + 1);
        }
    }

    let mut bracket_failures = Vec::new();
    for (j, &n) in result.jump_indices.iter().enumerate() {
        let next = result
            .jump_indices
            .get(j + 1)
            .map(|&m| &a[m - 1])
            .unwrap_or(a_beyond);
        if !in_jump_bracket(&a[n - 1], next, &result.b_prefix[n - 1]) {
            bracket_failures.push(n);
        }
    }

    Certificate {
        theta_below_first_bound,
        tail_failures,
        bracket_failures,
        checked: result.tail_enclosures.len(),
    }
}
