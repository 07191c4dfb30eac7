//! When does a shadow sequence pin down the denominators uniquely?
//!
//! Two interval conventions are in play. The admissible interval for `b_n`
//! given `(a_n, a_{n+1})` is open; its integer count decides the sufficient
//! criterion. The jump bracket with both ends closed decides the necessary one.
//! Every closed-form predicate here is paired with an integer-counting oracle.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::closed_jump_b_interval;
use crate::greedy::admissible_b_interval;
use crate::interval::{count_integers_in, IntegerCount, RationalInterval};
use crate::serial::{bigint_str, opt_bigint_str};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// Open interval, `(a_{n+1} - a_n - 1) | a_n^2`.
    OpenDivisible,
    OpenNondivisible,
    /// Closed interval, `(a_{n+1} - a_n) | a_n a_{n+1}`.
    ClosedDivisible,
    ClosedNondivisible,
    /// `a_{n+1} - a_n <= 1`: the open interval has no upper end.
    Unbounded,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::OpenDivisible => "open-divisible",
            CaseTag::OpenNondivisible => "open-nondivisible",
            CaseTag::ClosedDivisible => "closed-divisible",
            CaseTag::ClosedNondivisible => "closed-nondivisible",
            CaseTag::Unbounded => "unbounded",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict for one consecutive pair `(a_n, a_{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub n: usize,
    #[serde(serialize_with = "bigint_str")]
    pub a_n: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub a_next: BigInt,
    pub case_tag: CaseTag,
    /// What the closed-form criterion says.
    pub formula_unique: bool,
    /// Integers actually inside the interval.
    pub oracle_count: IntegerCount,
    /// Largest integer in the interval, when bounded and nonempty.
    #[serde(serialize_with = "opt_bigint_str")]
    pub k_n: Option<BigInt>,
    /// Smallest admissible `b_n`; emitted only when the choice is not unique.
    #[serde(serialize_with = "opt_bigint_str")]
    pub witness_low: Option<BigInt>,
    #[serde(serialize_with = "opt_bigint_str")]
    pub witness_high: Option<BigInt>,
}

impl PairVerdict {
    pub fn agrees_with_oracle(&self) -> bool {
        self.formula_unique == self.oracle_count.is_exactly(1)
    }

    fn build(
        n: usize,
        a_n: &BigInt,
        a_next: &BigInt,
        case_tag: CaseTag,
        formula_unique: bool,
        iv: &RationalInterval,
    ) -> Self {
        let oracle_count = count_integers_in(iv);
        let k_n = iv.largest_integer();
        let multiple = !oracle_count.is_exactly(1) && !oracle_count.is_exactly(0);
        PairVerdict {
            n,
            a_n: a_n.clone(),
            a_next: a_next.clone(),
            case_tag,
            formula_unique,
            oracle_count,
            witness_low: if multiple {
                iv.smallest_integer()
            } else {
                None
            },
            witness_high: if multiple { k_n.clone() } else { None },
            k_n,
        }
    }
}

fn check_pair(a_n: &BigInt, a_next: &BigInt) {
    assert!(
        a_n >= &BigInt::from(2) && a_next >= a_n,
        "need 2 <= a_n <= a_next, got ({a_n}, {a_next})"
    );
}

/// Closed-form test for a unique integer in the open admissible interval.
///
/// With `m = a_{n+1} - a_n - 1`: if `m | a_n^2` the pair is unique iff
/// `a_{n+1}^2 - (4a_n - 1)a_{n+1} + a_n^2 + a_n - 2 >= 0`; otherwise iff
/// `floor(a_n^2/m) (a_{n+1} - a_n + 1) <= (a_n - 1)^2`.
pub fn open_pair_formula(a_n: &BigInt, a_next: &BigInt) -> (CaseTag, bool) {
    check_pair(a_n, a_next);
    let (a, big_a) = (a_n, a_next);
    let m = big_a - a - BigInt::one();
    if !m.is_positive() {
        return (CaseTag::Unbounded, false);
    }
    let a_sq = a * a;
    let am1_sq = (a - 1) * (a - 1);
    if a_sq.is_multiple_of(&m) {
        let q: BigInt = big_a * big_a - (BigInt::from(4) * a - 1) * big_a + &a_sq + a - 2;
        (CaseTag::OpenDivisible, !q.is_negative())
    } else {
        let lhs = a_sq.div_floor(&m) * (big_a - a + 1);
        (CaseTag::OpenNondivisible, lhs <= am1_sq)
    }
}

/// Closed-form test for a unique integer in the closed jump bracket:
/// `D = a_{n+1} - a_n >= 2`, `D` does not divide `a_n a_{n+1}`, and
/// `floor(a_n^2/D) D < (a_n - 1)^2`.
pub fn closed_pair_formula(a_n: &BigInt, a_next: &BigInt) -> (CaseTag, bool) {
    check_pair(a_n, a_next);
    let d = a_next - a_n;
    if d.is_zero() {
        return (CaseTag::Unbounded, false);
    }
    if (a_n * a_next).is_multiple_of(&d) {
        return (CaseTag::ClosedDivisible, false);
    }
    let ok = d >= BigInt::from(2) && (a_n * a_n).div_floor(&d) * &d < (a_n - 1) * (a_n - 1);
    (CaseTag::ClosedNondivisible, ok)
}

/// Verdict for `b_n` under the open admissible interval.
pub fn unique_pair_verdict(n: usize, a_n: &BigInt, a_next: &BigInt) -> PairVerdict {
    let (tag, unique) = open_pair_formula(a_n, a_next);
    let iv = admissible_b_interval(a_n, a_next).expect("domain checked");
    PairVerdict::build(n, a_n, a_next, tag, unique, &iv)
}

/// Verdict for `b_n` under the closed jump bracket. Equal shadows leave the
/// bracket undefined; they are reported as unbounded.
pub fn closed_pair_verdict(n: usize, a_n: &BigInt, a_next: &BigInt) -> PairVerdict {
    let (tag, unique) = closed_pair_formula(a_n, a_next);
    if tag == CaseTag::Unbounded {
        let iv = RationalInterval::unbounded_above(crate::ExactRational::zero());
        return PairVerdict::build(n, a_n, a_next, tag, false, &iv);
    }
    let iv = closed_jump_b_interval(a_n, a_next).expect("a_next > a_n");
    PairVerdict::build(n, a_n, a_next, tag, unique, &iv)
}

/// Outcome of a whole-sequence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceCheck {
    pub holds: bool,
    /// First index `n` (1-based) whose pair `(a_n, a_{n+1})` fails.
    pub first_failure: Option<usize>,
    pub pairs: Vec<PairVerdict>,
}

fn check_sequence(
    a: &[BigInt],
    verdict: impl Fn(usize, &BigInt, &BigInt) -> PairVerdict,
    extra: impl Fn(&BigInt, &BigInt) -> bool,
) -> SequenceCheck {
    let two = BigInt::from(2);
    let mut pairs = Vec::with_capacity(a.len().saturating_sub(1));
    let mut first_failure = None;
    for (i, w) in a.windows(2).enumerate() {
        let n = i + 1;
        let ok = if w[0] < two || w[1] < w[0] {
            false
        } else {
            let v = verdict(n, &w[0], &w[1]);
            let ok = v.formula_unique && extra(&w[0], &w[1]);
            pairs.push(v);
            ok
        };
        if !ok && first_failure.is_none() {
            first_failure = Some(n);
        }
    }
    SequenceCheck {
        holds: first_failure.is_none(),
        first_failure,
        pairs,
    }
}

/// Sufficient criterion: every pair has `a_{n+1} - 2 >= a_n >= 2` and a unique
/// integer in its open admissible interval.
pub fn sufficient_for_uniqueness(a: &[BigInt]) -> SequenceCheck {
    check_sequence(a, unique_pair_verdict, |x, y| y - x >= BigInt::from(2))
}

/// Necessary criterion: every pair has a unique integer in its closed bracket.
pub fn necessary_for_uniqueness(a: &[BigInt]) -> SequenceCheck {
    check_sequence(a, closed_pair_verdict, |_, _| true)
}

/// Consequences of the necessary criterion, exposed for testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Consequences {
    pub triple_below_next: bool,
    pub gap_not_dividing_am1_sq: bool,
    pub gap_not_dividing_a_sq: bool,
    pub gap_not_dividing_product: bool,
}

impl Consequences {
    pub fn all(&self) -> bool {
        self.triple_below_next
            && self.gap_not_dividing_am1_sq
            && self.gap_not_dividing_a_sq
            && self.gap_not_dividing_product
    }
}

/// `3a_n < a_{n+1}`, and `a_{n+1} - a_n` divides none of `(a_n - 1)^2`,
/// `a_n^2`, `a_n a_{n+1}`.
pub fn necessary_consequences(a_n: &BigInt, a_next: &BigInt) -> Consequences {
    let d = a_next - a_n;
    let divides = |x: BigInt| !d.is_zero() && x.is_multiple_of(&d);
    Consequences {
        triple_below_next: BigInt::from(3) * a_n < *a_next,
        gap_not_dividing_am1_sq: !divides((a_n - 1) * (a_n - 1)),
        gap_not_dividing_a_sq: !divides(a_n * a_n),
        gap_not_dividing_product: !divides(a_n * a_next),
    }
}

/// One row of an exhaustive pair sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub open: PairVerdict,
    pub closed: PairVerdict,
    /// Consequences hold, or the closed criterion fails (so nothing is claimed).
    pub consequences_ok: bool,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.open.agrees_with_oracle() && self.closed.agrees_with_oracle() && self.consequences_ok
    }
}

/// Every pair `2 <= a_n < a_{n+1} <= max`, in lexicographic order.
pub fn sweep_pairs(max: u64) -> Vec<SweepRow> {
    (2..=max)
        .into_par_iter()
        .flat_map_iter(|x| (x + 1..=max).map(move |y| (x, y)))
        .map(|(x, y)| {
            let (a, b) = (BigInt::from(x), BigInt::from(y));
            let open = unique_pair_verdict(1, &a, &b);
            let closed = closed_pair_verdict(1, &a, &b);
            let consequences_ok = !closed.formula_unique || necessary_consequences(&a, &b).all();
            SweepRow {
                open,
                closed,
                consequences_ok,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn seq(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn two_seven_is_unique() {
        let v = unique_pair_verdict(1, &big(2), &big(7));
        assert!(v.formula_unique);
        assert!(v.oracle_count.is_exactly(1));
        assert_eq!(v.k_n, Some(big(2)));
        assert_eq!(v.witness_low, None);
    }

    #[test]
    fn adjacent_shadows_are_unbounded() {
        for a in 2..50 {
            let v = unique_pair_verdict(1, &big(a), &big(a + 1));
            assert_eq!(v.case_tag, CaseTag::Unbounded);
            assert!(!v.formula_unique);
            assert_eq!(v.oracle_count, IntegerCount::Infinite);
            assert_eq!(v.k_n, None);
            assert!(v.witness_low.is_some());
        }
    }

    #[test]
    fn divisible_product_gives_two_witnesses() {
        // D = 2 divides 4 * 6
        let v = closed_pair_verdict(1, &big(4), &big(6));
        assert_eq!(v.case_tag, CaseTag::ClosedDivisible);
        assert!(!v.formula_unique);
        let (lo, hi) = (v.witness_low.unwrap(), v.witness_high.unwrap());
        assert!(lo < hi);
        let iv = closed_jump_b_interval(&big(4), &big(6)).unwrap();
        assert!(iv.contains(&crate::ExactRational::from_integer(lo)));
        assert!(iv.contains(&crate::ExactRational::from_integer(hi)));
    }

    #[test]
    fn tripled_shadow_fails_necessary() {
        for a in 2..200 {
            let (_, ok) = closed_pair_formula(&big(a), &big(3 * a));
            assert!(!ok, "a = {a}");
        }
    }

    #[test]
    fn quadratic_threshold_matches_radical() {
        // A >= (sqrt3/2) sqrt(4a^2 - 4a + 3) + 2a - 1/2, checked in floating point
        // away from the boundary
        for a in 2i64..200 {
            for big_a in a + 2..a + 800 {
                let q = big_a * big_a - (4 * a - 1) * big_a + a * a + a - 2;
                let af = a as f64;
                let rhs =
                    (3f64).sqrt() / 2.0 * (4.0 * af * af - 4.0 * af + 3.0).sqrt() + 2.0 * af - 0.5;
                let gap = big_a as f64 - rhs;
                if gap.abs() > 1e-6 {
                    assert_eq!(q >= 0, gap > 0.0, "a = {a}, A = {big_a}");
                }
            }
        }
    }

    #[test]
    fn sweep_agrees_to_sixty() {
        let rows = sweep_pairs(60);
        assert_eq!(rows.len(), 59 * 58 / 2);
        assert!(rows.iter().all(SweepRow::agrees));
        assert_eq!(
            (rows[0].open.a_n.clone(), rows[0].open.a_next.clone()),
            (big(2), big(3))
        );
    }

    #[test]
    fn sufficient_composes_pairwise() {
        let a = seq(&[2, 7, 43, 1807]);
        let check = sufficient_for_uniqueness(&a);
        let pairwise = a
            .windows(2)
            .all(|w| unique_pair_verdict(1, &w[0], &w[1]).formula_unique);
        assert_eq!(check.holds, pairwise);
        assert_eq!(check.pairs.len(), 3);
    }

    #[test]
    fn sufficient_rejects_adjacent_and_greedy_start() {
        let check = sufficient_for_uniqueness(&seq(&[2, 7, 8, 100]));
        assert_eq!(check.first_failure, Some(2));
        let check = sufficient_for_uniqueness(&seq(&[2, 3, 7, 43]));
        assert_eq!(check.first_failure, Some(1));
    }

    #[test]
    fn necessary_reports_first_failure() {
        let check = necessary_for_uniqueness(&seq(&[2, 7, 21, 100]));
        // 21 = 3 * 7
        assert_eq!(check.first_failure, Some(2));
    }

    proptest! {
        #[test]
        fn formulas_match_oracles_for_large_pairs(a in 2u64..5000, gap in 0u64..20000) {
            let (x, y) = (BigInt::from(a), BigInt::from(a + gap));
            prop_assert!(unique_pair_verdict(1, &x, &y).agrees_with_oracle());
            if gap > 0 {
                let c = closed_pair_verdict(1, &x, &y);
                prop_assert!(c.agrees_with_oracle());
                if c.formula_unique {
                    prop_assert!(necessary_consequences(&x, &y).all());
                }
            }
        }

        #[test]
        fn sufficient_implies_open_oracle(v in proptest::collection::vec(2u64..400, 2..8)) {
            let mut v = v;
            v.sort_unstable();
            let a: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
            let check = sufficient_for_uniqueness(&a);
            if check.holds {
                for w in a.windows(2) {
                    let iv = admissible_b_interval(&w[0], &w[1]).unwrap();
                    prop_assert!(count_integers_in(&iv).is_exactly(1));
                }
            }
        }
    }
}
