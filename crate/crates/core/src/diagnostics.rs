//! Checks tied to the asymptotic behaviour of weak greedy runs: per-step ratio
//! bounds, growth classification on finite prefixes, and the bounded-shadow
//! bound when the denominators sum to strictly less than `theta`.
//!
//! Nothing here decides an asymptotic property from finite data. Verdicts on
//! prefixes are labelled as evidence unless a known family supplies the limit.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::{recover_a_from_b, BSelection, LambdaSpec, WeakGreedyRun};
use crate::rational::{g_of, ExactRational};
use crate::serial::{bigint_str, bigint_vec};

/// The default grid of `t` values probed by [`classify_growth`].
pub fn default_t_grid() -> Vec<ExactRational> {
    ["1", "3/2", "2", "3", "5", "10"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

/// What is known about `lim a_{n+1}/a_n` independently of the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum DeclaredLimit {
    Exact(ExactRational),
    /// An irrational limit known to exceed one (Fibonacci: the golden ratio).
    IrrationalAboveOne,
}

impl DeclaredLimit {
    pub fn exceeds_one(&self) -> bool {
        match self {
            DeclaredLimit::Exact(l) => *l > ExactRational::one(),
            DeclaredLimit::IrrationalAboveOne => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthVerdict {
    ProducibleEvidence,
    NotProducibleEvidence,
    Inconclusive,
}

impl GrowthVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthVerdict::ProducibleEvidence => "producible-evidence",
            GrowthVerdict::NotProducibleEvidence => "not-producible-evidence",
            GrowthVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// `#{n <= N : b_n/a_n <= t}`, overall and within the late half of the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TWitness {
    pub t: ExactRational,
    pub count: usize,
    pub late_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub prefix_len: usize,
    /// `a_{n+1}/a_n` for `n < N`.
    pub a_ratios: Vec<ExactRational>,
    /// `b_n/a_n` for `n <= N`.
    pub b_over_a: Vec<ExactRational>,
    pub witnesses: Vec<TWitness>,
    pub verdict: GrowthVerdict,
    /// True when the verdict rests on a declared limit rather than the prefix.
    pub exact: bool,
    pub declared_limit: Option<DeclaredLimit>,
}

/// Late-window heuristics: a `t` whose witnesses keep appearing in at least
/// half of the late window looks unbounded; a late ratio at most `1 + 1/4`
/// with no late witnesses looks like ratio limit one.
const LATE_WITNESS_SHARE: (usize, usize) = (1, 2);
const NEAR_ONE: (i64, i64) = (5, 4);

/// Sizes up both sides of the producibility equivalence on a prefix: whether
/// `b_n/a_n <= t` keeps recurring, and whether `a_{n+1}/a_n` drifts to one.
pub fn classify_growth(
    a: &[BigInt],
    b: &[BigInt],
    t_grid: &[ExactRational],
    declared_limit: Option<DeclaredLimit>,
) -> Result<ClassificationReport> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::Domain("need a prefix of length at least 2".into()));
    }
    let n = a.len();
    let frac = |p: &BigInt, q: &BigInt| ExactRational::new(p.clone(), q.clone());
    let a_ratios = a
        .windows(2)
        .map(|w| frac(&w[1], &w[0]))
        .collect::<Result<Vec<_>>>()?;
    let b_over_a = b
        .iter()
        .zip(a)
        .map(|(x, y)| frac(x, y))
        .collect::<Result<Vec<_>>>()?;

    let late_start = n / 2;
    let late_len = n - late_start;
    let witnesses: Vec<TWitness> = t_grid
        .iter()
        .map(|t| TWitness {
            t: t.clone(),
            count: b_over_a.iter().filter(|r| *r <= t).count(),
            late_count: b_over_a[late_start..].iter().filter(|r| *r <= t).count(),
        })
        .collect();

    let (verdict, exact) = match &declared_limit {
        Some(limit) if limit.exceeds_one() => (GrowthVerdict::ProducibleEvidence, true),
        Some(_) => (GrowthVerdict::NotProducibleEvidence, true),
        None => {
            let recurring = witnesses
                .iter()
                .any(|w| w.late_count * LATE_WITNESS_SHARE.1 >= late_len * LATE_WITNESS_SHARE.0);
            let silent = witnesses.iter().all(|w| w.late_count == 0);
            let near_one = ExactRational::new(NEAR_ONE.0, NEAR_ONE.1)?;
            let late_ratios = &a_ratios[late_start.min(a_ratios.len() - 1)..];
            let flat = late_ratios.iter().all(|r| *r <= near_one);
            let verdict = if recurring {
                GrowthVerdict::ProducibleEvidence
            } else if silent && flat {
                GrowthVerdict::NotProducibleEvidence
            } else {
                GrowthVerdict::Inconclusive
            };
            (verdict, false)
        }
    };

    Ok(ClassificationReport {
        prefix_len: n,
        a_ratios,
        b_over_a,
        witnesses,
        verdict,
        exact,
        declared_limit,
    })
}

/// One step of a ratio-bound check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepBound {
    pub n: usize,
    #[serde(serialize_with = "bigint_str")]
    pub a_n: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub a_next: BigInt,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub t: ExactRational,
    pub steps: Vec<StepBound>,
    /// `t/(t-1)`; absent for the plain greedy run.
    pub limit: Option<ExactRational>,
    pub final_ratio: Option<ExactRational>,
    pub final_distance: Option<ExactRational>,
}

impl RatioReport {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.lower_ok && s.upper_ok)
    }
}

/// Checks the per-step growth bounds of a run.
///
/// For `b_n = ceil(t a_n)` with `t > 1`, every step must satisfy
/// `1/a_{n+1} < ((t-1)a_n + 2)/((t a_n + 1)(a_n - 1))` and
/// `a_{n+1}/a_n < t/(t-1) + 1/a_n`. For the plain greedy run (`t = 1`, `b = a`),
/// `b_{n+1}/b_n >= b_n - 1 + 1/b_n`; that case reports only `lower_ok`.
pub fn ratio_step_bounds(run: &WeakGreedyRun) -> Result<RatioReport> {
    let policy = &run.policy;
    let t = policy.t().clone();
    let one = ExactRational::one();
    let greedy = t == one;
    let shape_ok = *policy.lambda() == LambdaSpec::All
        && matches!(
            (policy.selection(), greedy),
            (BSelection::Greedy, true) | (BSelection::CeilTA, _)
        );
    if !shape_ok {
        return Err(Error::Domain(format!(
            "ratio bounds need a greedy or ceil-t-a run over every index, got {} on {}",
            policy.selection().name(),
            policy.lambda()
        )));
    }

    let steps_n = run.len().saturating_sub(1);
    let mut steps = Vec::with_capacity(steps_n);
    for i in 0..steps_n {
        let (a_n, a_next) = (&run.a[i], &run.a[i + 1]);
        let (b_n, b_next) = (&run.b[i], &run.b[i + 1]);
        if *b_n != policy.cap_for(a_n) {
            return Err(Error::PolicyViolation {
                index: i + 1,
                reason: format!("b_n = {b_n} is not ceil(t a_n) for a_n = {a_n}"),
            });
        }
        let step = if greedy {
            // b_{n+1}/b_n >= b_n - 1 + 1/b_n  <=>  b_{n+1} >= b_n^2 - b_n + 1
            let bound = b_n * b_n - b_n + 1u32;
            StepBound {
                n: i + 1,
                a_n: a_n.clone(),
                a_next: a_next.clone(),
                lower_ok: *b_next >= bound,
                upper_ok: true,
            }
        } else {
            let an = ExactRational::from_integer(a_n.clone());
            let anext = ExactRational::from_integer(a_next.clone());
            let two = ExactRational::from_integer(2);
            let lower_rhs =
                &(&(&(&t - &one) * &an) + &two) / &(&(&(&t * &an) + &one) * &(&an - &one));
            let lower_ok = anext.recip()? < lower_rhs;
            let upper_rhs = &(&t / &(&t - &one)) + &an.recip()?;
            let upper_ok = &anext / &an < upper_rhs;
            StepBound {
                n: i + 1,
                a_n: a_n.clone(),
                a_next: a_next.clone(),
                lower_ok,
                upper_ok,
            }
        };
        steps.push(step);
    }

    let limit = (!greedy).then(|| &t / &(&t - &one));
    let final_ratio = run
        .a
        .len()
        .checked_sub(2)
        .map(|i| ExactRational::new(run.a[i + 1].clone(), run.a[i].clone()))
        .transpose()?;
    let final_distance = match (&limit, &final_ratio) {
        (Some(l), Some(r)) => Some((r - l).abs()),
        _ => None,
    };
    Ok(RatioReport {
        t,
        steps,
        limit,
        final_ratio,
        final_distance,
    })
}

/// Bound on the recovered shadows when `sum 1/b_n < theta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowBound {
    /// Certified lower bound on `theta - sum_n 1/b_n`.
    pub gap: ExactRational,
    /// `G(gap)`.
    #[serde(serialize_with = "bigint_str")]
    pub bound: BigInt,
    #[serde(serialize_with = "bigint_vec")]
    pub a: Vec<BigInt>,
    pub holds: bool,
}

/// With `c = theta - sum_{n<=N} 1/b_n - tail_upper > 0`, every shadow
/// `a_n = G(theta - sum_{i<n} 1/b_i)` is at most `G(c)`.
///
/// `tail_upper` must bound `sum_{n>N} 1/b_n` from above.
pub fn shadow_bound(
    b: &[BigInt],
    theta: &ExactRational,
    tail_upper: &ExactRational,
) -> Result<ShadowBound> {
    let mut sum = ExactRational::zero();
    for x in b {
        sum = sum + ExactRational::unit(x)?;
    }
    let gap = &(theta - &sum) - tail_upper;
    if !gap.is_positive() {
        return Err(Error::NonPositiveGap);
    }
    let bound = g_of(&gap)?;
    let a = recover_a_from_b(b, theta)?;
    let holds = a.iter().all(|x| *x <= bound);
    Ok(ShadowBound {
        gap,
        bound,
        a,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::{greedy_expand, wgaa_expand, WgaaPolicy};
    use num_traits::One;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn big(n: u64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn quadratic_denominators_are_not_producible() {
        let n = 200u64;
        let a: Vec<BigInt> = (1..=n).map(|k| big(k + 1)).collect();
        let b: Vec<BigInt> = (1..=n).map(|k| big(k * (k + 2))).collect();
        let rep = classify_growth(&a, &b, &default_t_grid(), None).unwrap();
        assert_eq!(rep.verdict, GrowthVerdict::NotProducibleEvidence);
        assert!(!rep.exact);
        // b_n/a_n > n, so at most t indices can witness t
        for w in &rep.witnesses {
            assert!(ExactRational::from_integer(w.count as u64) <= w.t);
        }
    }

    #[test]
    fn geometric_family_is_producible() {
        let f = crate::families::SequenceFamily::geometric(2, 3).unwrap();
        let (a, b) = f.terms(30).unwrap();
        let rep = classify_growth(&a, &b, &default_t_grid(), None).unwrap();
        assert_eq!(rep.verdict, GrowthVerdict::ProducibleEvidence);
        let rep = classify_growth(
            &a,
            &b,
            &default_t_grid(),
            Some(DeclaredLimit::Exact(ExactRational::from_integer(3))),
        )
        .unwrap();
        assert!(rep.exact);
        assert_eq!(rep.verdict, GrowthVerdict::ProducibleEvidence);
    }

    #[test]
    fn greedy_run_witnesses_t_one_everywhere() {
        let run = greedy_expand(&q("5/7"), 6).unwrap();
        let rep = classify_growth(&run.a, &run.b, &default_t_grid(), None).unwrap();
        assert_eq!(rep.witnesses[0].count, run.len());
    }

    #[test]
    fn declared_limit_one_overrides_prefix() {
        let a = vec![big(2), big(5), big(20)];
        let b = a.clone();
        let rep = classify_growth(&a, &b, &[q("1")], Some(DeclaredLimit::Exact(q("1")))).unwrap();
        assert_eq!(rep.verdict, GrowthVerdict::NotProducibleEvidence);
        assert!(rep.exact);
    }

    #[test]
    fn classify_rejects_bad_input() {
        assert!(matches!(
            classify_growth(&[big(2)], &[big(2), big(3)], &[], None),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(classify_growth(&[big(2)], &[big(2)], &[], None).is_err());
    }

    #[test]
    fn t_two_run_has_ratio_bounds() {
        let run = wgaa_expand(&q("2/3"), &WgaaPolicy::ceil_t(q("2")).unwrap(), 25).unwrap();
        assert_eq!(run.len(), 25);
        let rep = ratio_step_bounds(&run).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.limit, Some(q("2")));
        // final ratio sits below 2 + 1/a_n
        let last = rep.steps.last().unwrap();
        assert!(rep.final_ratio.unwrap() < q("2") + ExactRational::unit(&last.a_n).unwrap());
    }

    #[test]
    fn four_thirds_upper_bound() {
        let run = wgaa_expand(&q("3/5"), &WgaaPolicy::ceil_t(q("4/3")).unwrap(), 25).unwrap();
        let rep = ratio_step_bounds(&run).unwrap();
        assert_eq!(rep.limit, Some(q("4")));
        assert!(rep.all_hold());
    }

    #[test]
    fn greedy_ratio_bound() {
        let run = greedy_expand(&q("19/48"), 9).unwrap();
        let rep = ratio_step_bounds(&run).unwrap();
        assert!(rep.all_hold());
        assert!(rep.limit.is_none());
    }

    #[test]
    fn ratio_bounds_reject_other_policies() {
        let p = WgaaPolicy::new(q("2"), LambdaSpec::All, BSelection::Greedy).unwrap();
        let run = wgaa_expand(&q("2/3"), &p, 5).unwrap();
        assert!(ratio_step_bounds(&run).is_err());
    }

    #[test]
    fn shadow_bound_powers_of_two() {
        let b: Vec<BigInt> = (1..=40u32).map(|n| BigInt::one() << (n + 1)).collect();
        let tail = ExactRational::new(1, BigInt::one() << 41u32).unwrap();
        let sb = shadow_bound(&b, &q("3/4"), &tail).unwrap();
        assert_eq!(sb.gap, q("1/4"));
        assert_eq!(sb.bound, big(5));
        assert!(sb.holds);
    }

    #[test]
    fn shadow_bound_telescoping() {
        let n = 60u64;
        let b: Vec<BigInt> = (1..=n).map(|k| big(k * (k + 2))).collect();
        // sum_{k>n} 1/(k(k+2)) = (1/(n+1) + 1/(n+2))/2
        let tail = &(&ExactRational::unit(&big(n + 1)).unwrap()
            + &ExactRational::unit(&big(n + 2)).unwrap())
            * &q("1/2");
        let sb = shadow_bound(&b, &q("7/8"), &tail).unwrap();
        assert_eq!(sb.gap, q("1/8"));
        assert_eq!(sb.bound, big(9));
        assert!(sb.holds);
    }

    #[test]
    fn shadow_bound_needs_positive_gap() {
        let b: Vec<BigInt> = (1..=10u32).map(|n| BigInt::one() << (n + 1)).collect();
        let tail = ExactRational::new(1, BigInt::one() << 11u32).unwrap();
        assert!(matches!(
            shadow_bound(&b, &q("1/2"), &tail),
            Err(Error::NonPositiveGap)
        ));
    }

    proptest! {
        #[test]
        fn ceil_t_runs_satisfy_step_bounds(
            p in 1u64..500, extra in 1u64..500,
            t in prop::sample::select(vec!["4/3", "3/2", "2", "5/2", "3"]),
        ) {
            let theta = ExactRational::new(p, p + extra).unwrap();
            let run = wgaa_expand(&theta, &WgaaPolicy::ceil_t(q(t)).unwrap(), 20).unwrap();
            prop_assert!(ratio_step_bounds(&run).unwrap().all_hold());
        }

        #[test]
        fn greedy_runs_satisfy_step_bound(p in 1u64..200, extra in 1u64..200) {
            let theta = ExactRational::new(p, p + extra).unwrap();
            let run = greedy_expand(&theta, 7).unwrap();
            prop_assert!(ratio_step_bounds(&run).unwrap().all_hold());
        }
    }
}
