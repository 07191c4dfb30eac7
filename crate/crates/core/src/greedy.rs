//! Greedy and weak-greedy unit-fraction expansion.
//!
//! A run pairs the greedy shadow `a_n = G(theta - sum_{i<n} 1/b_i)` with the
//! denominators `b_n >= a_n` actually used. The plain greedy algorithm is the
//! special case `b_n = a_n`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::rational::{g_of, ExactRational};

/// Default cap on the number of terms a single expansion may request.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// The index set on which `b_n <= ceil(t * a_n)` is enforced. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaSpec {
    All,
    Set(BTreeSet<usize>),
    Complement(BTreeSet<usize>),
    Periodic {
        period: usize,
        residues: BTreeSet<usize>,
    },
}

impl LambdaSpec {
    pub fn contains(&self, n: usize) -> bool {
        match self {
            LambdaSpec::All => true,
            LambdaSpec::Set(s) => s.contains(&n),
            LambdaSpec::Complement(s) => !s.contains(&n),
            LambdaSpec::Periodic { period, residues } => residues.contains(&(n % period)),
        }
    }
}

fn join(set: &BTreeSet<usize>) -> String {
    set.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_set(s: &str) -> Result<BTreeSet<usize>> {
    if s.trim().is_empty() {
        return Ok(BTreeSet::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index {t:?} in lambda spec")))
        })
        .collect()
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::All => f.write_str("all"),
            LambdaSpec::Set(s) => write!(f, "set:{}", join(s)),
            LambdaSpec::Complement(s) => write!(f, "complement:{}", join(s)),
            LambdaSpec::Periodic { period, residues } => {
                write!(f, "periodic:{period}:{}", join(residues))
            }
        }
    }
}

impl FromStr for LambdaSpec {
    type Err = Error;

    /// `all`, `set:1,3,5`, `complement:2,4`, or `periodic:P:r1,r2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(LambdaSpec::All);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown lambda spec {s:?}")))?;
        match kind {
            "set" => Ok(LambdaSpec::Set(parse_set(rest)?)),
            "complement" => Ok(LambdaSpec::Complement(parse_set(rest)?)),
            "periodic" => {
                let (p, r) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("periodic spec needs P:residues".into()))?;
                let period: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad period {p:?}")))?;
                if period == 0 {
                    return Err(Error::Parse("period must be positive".into()));
                }
                let residues = parse_set(r)?;
                if residues.iter().any(|&x| x >= period) {
                    return Err(Error::Parse("residue out of range".into()));
                }
                Ok(LambdaSpec::Periodic { period, residues })
            }
            _ => Err(Error::Parse(format!("unknown lambda spec {s:?}"))),
        }
    }
}

/// How `b_n` is picked once `a_n` is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BSelection {
    /// `b_n = a_n`
    Greedy,
    /// `b_n = ceil(t * a_n)`
    CeilTA,
    /// Smallest integer strictly inside the admissible interval that respects the cap.
    MinAdmissible,
    /// Replay a given list.
    Explicit(Vec<BigInt>),
}

impl BSelection {
    pub fn name(&self) -> &'static str {
        match self {
            BSelection::Greedy => "greedy",
            BSelection::CeilTA => "ceil-t-a",
            BSelection::MinAdmissible => "min-admissible",
            BSelection::Explicit(_) => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WgaaPolicy {
    t: ExactRational,
    lambda: LambdaSpec,
    selection: BSelection,
    last_greedy: bool,
}

impl WgaaPolicy {
    pub fn new(t: ExactRational, lambda: LambdaSpec, selection: BSelection) -> Result<Self> {
        if t < ExactRational::one() {
            return Err(Error::Domain(format!("t = {t} must be at least 1")));
        }
        Ok(Self {
            t,
            lambda,
            selection,
            last_greedy: false,
        })
    }

    /// The plain greedy algorithm: `t = 1`, every index constrained, `b = a`.
    pub fn greedy() -> Self {
        Self {
            t: ExactRational::one(),
            lambda: LambdaSpec::All,
            selection: BSelection::Greedy,
            last_greedy: false,
        }
    }

    /// `b_n = ceil(t * a_n)` at every index.
    pub fn ceil_t(t: ExactRational) -> Result<Self> {
        Self::new(t, LambdaSpec::All, BSelection::CeilTA)
    }

    /// Take the final term of an n-term expansion greedily.
    pub fn with_last_greedy(mut self, yes: bool) -> Self {
        self.last_greedy = yes;
        self
    }

    pub fn t(&self) -> &ExactRational {
        &self.t
    }

    pub fn lambda(&self) -> &LambdaSpec {
        &self.lambda
    }

    pub fn selection(&self) -> &BSelection {
        &self.selection
    }

    pub fn last_greedy(&self) -> bool {
        self.last_greedy
    }

    /// `ceil(t * a)`, the largest `b` allowed at a constrained index.
    pub fn cap_for(&self, a: &BigInt) -> BigInt {
        (&self.t * &ExactRational::from_integer(a.clone())).ceil()
    }
}

/// Paired sequences produced by one expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakGreedyRun {
    pub theta: ExactRational,
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
    /// `residuals[n-1] = theta - sum_{i<=n} 1/b_i`
    pub residuals: Vec<ExactRational>,
    pub policy: WgaaPolicy,
}

impl WeakGreedyRun {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Residual before step `n` (1-based): `theta - sum_{i<n} 1/b_i`.
    pub fn residual_before(&self, n: usize) -> &ExactRational {
        if n <= 1 {
            &self.theta
        } else {
            &self.residuals[n - 2]
        }
    }

    /// `sum_{i<=N} 1/b_i`
    pub fn approximation(&self) -> ExactRational {
        match self.residuals.last() {
            Some(r) => &self.theta - r,
            None => ExactRational::zero(),
        }
    }
}

impl Serialize for WeakGreedyRun {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strs = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let mut s = serializer.serialize_struct("WeakGreedyRun", 6)?;
        s.serialize_field("theta", &self.theta)?;
        s.serialize_field("t", &self.policy.t)?;
        s.serialize_field("lambda", &self.policy.lambda.to_string())?;
        s.serialize_field("a", &strs(&self.a))?;
        s.serialize_field("b", &strs(&self.b))?;
        s.serialize_field("residuals", &self.residuals)?;
        s.end()
    }
}

fn check_theta(theta: &ExactRational) -> Result<()> {
    if !theta.is_positive() || *theta > ExactRational::one() {
        return Err(Error::Domain(format!("theta = {theta} is outside (0, 1]")));
    }
    Ok(())
}

fn check_terms(n_terms: usize, cap: usize) -> Result<()> {
    if n_terms == 0 {
        return Err(Error::Domain("term count must be positive".into()));
    }
    if n_terms > cap {
        return Err(Error::TermCap {
            requested: n_terms,
            cap,
        });
    }
    Ok(())
}

/// Greedy underapproximation: `a_{n+1} = G(theta - sum_{i<=n} 1/a_i)` and `b = a`.
pub fn greedy_expand(theta: &ExactRational, n_terms: usize) -> Result<WeakGreedyRun> {
    greedy_expand_capped(theta, n_terms, DEFAULT_MAX_TERMS)
}

pub fn greedy_expand_capped(
    theta: &ExactRational,
    n_terms: usize,
    cap: usize,
) -> Result<WeakGreedyRun> {
    wgaa_expand_capped(theta, &WgaaPolicy::greedy(), n_terms, cap)
}

/// The weak greedy algorithm under `policy`.
pub fn wgaa_expand(
    theta: &ExactRational,
    policy: &WgaaPolicy,
    n_terms: usize,
) -> Result<WeakGreedyRun> {
    wgaa_expand_capped(theta, policy, n_terms, DEFAULT_MAX_TERMS)
}

pub fn wgaa_expand_capped(
    theta: &ExactRational,
    policy: &WgaaPolicy,
    n_terms: usize,
    cap: usize,
) -> Result<WeakGreedyRun> {
    check_theta(theta)?;
    check_terms(n_terms, cap)?;

    let mut a = Vec::with_capacity(n_terms);
    let mut b = Vec::with_capacity(n_terms);
    let mut residuals = Vec::with_capacity(n_terms);
    let mut residual = theta.clone();

    for n in 1..=n_terms {
        let a_n = g_of(&residual)?;
        let constrained = policy.lambda.contains(n);
        let b_n = select_b(policy, n, n_terms, &a_n, &residual)?;

        if b_n < a_n {
            return Err(Error::GreedyBoundViolation {
                index: n,
                a: a_n.to_string(),
                b: b_n.to_string(),
            });
        }
        if constrained && b_n > policy.cap_for(&a_n) {
            return Err(Error::PolicyViolation {
                index: n,
                reason: format!("b = {b_n} exceeds ceil(t * a) = {}", policy.cap_for(&a_n)),
            });
        }

        residual = &residual - &ExactRational::unit(&b_n)?;
        a.push(a_n);
        b.push(b_n);
        residuals.push(residual.clone());
    }

    Ok(WeakGreedyRun {
        theta: theta.clone(),
        a,
        b,
        residuals,
        policy: policy.clone(),
    })
}

fn select_b(
    policy: &WgaaPolicy,
    n: usize,
    n_terms: usize,
    a_n: &BigInt,
    residual: &ExactRational,
) -> Result<BigInt> {
    if let BSelection::Explicit(list) = &policy.selection {
        return list
            .get(n - 1)
            .cloned()
            .ok_or_else(|| Error::PolicyViolation {
                index: n,
                reason: format!("explicit list has only {} entries", list.len()),
            });
    }
    if policy.last_greedy && n == n_terms {
        return Ok(a_n.clone());
    }
    Ok(match &policy.selection {
        BSelection::Greedy => a_n.clone(),
        BSelection::CeilTA => policy.cap_for(a_n),
        BSelection::MinAdmissible => min_admissible(policy, n, a_n, residual)?,
        BSelection::Explicit(_) => unreachable!(),
    })
}

/// Scan upward from `a_n` for the first `b` that lands strictly inside the
/// admissible interval for the shadow it induces, within the cap when constrained.
fn min_admissible(
    policy: &WgaaPolicy,
    n: usize,
    a_n: &BigInt,
    residual: &ExactRational,
) -> Result<BigInt> {
    let limit = if policy.lambda.contains(n) {
        Some(policy.cap_for(a_n))
    } else {
        None
    };
    let mut b = a_n.clone();
    loop {
        if limit.as_ref().is_some_and(|l| &b > l) {
            return Err(Error::PolicyViolation {
                index: n,
                reason: "no admissible b under the cap".into(),
            });
        }
        let next = residual - &ExactRational::unit(&b)?;
        if next.is_positive() {
            let a_next = g_of(&next)?;
            if admissible_b_interval(a_n, &a_next)?
                .contains(&ExactRational::from_integer(b.clone()))
            {
                return Ok(b);
            }
        }
        b += 1;
    }
}

/// Replays `b` against `theta`, returning the greedy shadow `a_n` for each index.
///
/// Fails at the first index where `b_n < a_n`. With exact arithmetic that is
/// the same index at which the partial sum first reaches `theta`
/// (`1/b_n >= 1/(a_n - 1)` exhausts the residual), so `b` cannot be a weak
/// greedy approximation of `theta`.
pub fn recover_a_from_b(b: &[BigInt], theta: &ExactRational) -> Result<Vec<BigInt>> {
    check_theta(theta)?;
    let mut residual = theta.clone();
    let mut a = Vec::with_capacity(b.len());
    for (i, b_n) in b.iter().enumerate() {
        let n = i + 1;
        let a_n = g_of(&residual)?;
        if b_n < &a_n {
            return Err(Error::GreedyBoundViolation {
                index: n,
                a: a_n.to_string(),
                b: b_n.to_string(),
            });
        }
        residual = &residual - &ExactRational::unit(b_n)?;
        if !residual.is_positive() {
            return Err(Error::PartialSumExceedsTheta { index: n });
        }
        a.push(a_n);
    }
    Ok(a)
}

/// One row of a replay table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayRow {
    pub n: usize,
    #[serde(serialize_with = "crate::serial::bigint_str")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::serial::opt_bigint_str")]
    pub a: Option<BigInt>,
    /// `b_n >= a_n`
    pub greedy_bound: bool,
    /// `sum_{i<=n} 1/b_i < theta`
    pub partial_sum_below: bool,
    /// `b_n` strictly inside the admissible interval for `(a_n, a_{n+1})`;
    /// `None` at the last index.
    pub admissible: Option<bool>,
}

impl ReplayRow {
    pub fn passed(&self) -> bool {
        self.greedy_bound && self.partial_sum_below && self.admissible != Some(false)
    }
}

/// Per-index replay of `b` against `theta` that records failures instead of
/// stopping at the first one. Rows after a non-positive residual carry no `a`.
pub fn replay_table(b: &[BigInt], theta: &ExactRational) -> Result<Vec<ReplayRow>> {
    check_theta(theta)?;
    let mut rows: Vec<ReplayRow> = Vec::with_capacity(b.len());
    let mut residual = theta.clone();
    for (i, b_n) in b.iter().enumerate() {
        let a_n = if residual.is_positive() && residual <= ExactRational::one() {
            Some(g_of(&residual)?)
        } else {
            None
        };
        if b_n.sign() != num_bigint::Sign::Plus {
            return Err(Error::Parse(format!("b_{} = {b_n} is not positive", i + 1)));
        }
        residual = &residual - &ExactRational::unit(b_n)?;
        rows.push(ReplayRow {
            n: i + 1,
            b: b_n.clone(),
            greedy_bound: a_n.as_ref().is_some_and(|a| b_n >= a),
            a: a_n,
            partial_sum_below: residual.is_positive(),
            admissible: None,
        });
    }
    for i in 0..rows.len().saturating_sub(1) {
        if let (Some(a), Some(a_next)) = (rows[i].a.clone(), rows[i + 1].a.clone()) {
            let ok = admissible_b_interval(&a, &a_next)
                .map(|iv| iv.contains(&ExactRational::from_integer(rows[i].b.clone())))
                .unwrap_or(false);
            rows[i].admissible = Some(ok);
        } else {
            rows[i].admissible = Some(false);
        }
    }
    Ok(rows)
}

/// The open interval of `b_n` compatible with consecutive shadows `a_n <= a_next`:
/// `1/a_n - 1/(a_next - 1) < 1/b_n < 1/(a_n - 1) - 1/a_next`.
///
/// In terms of `b_n` this is
/// `((a_n-1) a_next / (a_next-a_n+1), a_n (a_next-1) / (a_next-a_n-1))`,
/// unbounded above when `a_next - a_n <= 1`.
pub fn admissible_b_interval(a_n: &BigInt, a_next: &BigInt) -> Result<RationalInterval> {
    let two = BigInt::from(2);
    if a_n < &two || a_next < a_n {
        return Err(Error::Domain(format!(
            "need 2 <= a_n <= a_next, got ({a_n}, {a_next})"
        )));
    }
    let one = BigInt::one();
    let lo = ExactRational::new((a_n - &one) * a_next, a_next - a_n + &one)?;
    let gap = a_next - a_n - &one;
    if gap <= BigInt::from(0) {
        return Ok(RationalInterval::unbounded_above(lo));
    }
    let hi = ExactRational::new(a_n * (a_next - &one), gap)?;
    RationalInterval::open(lo, hi)
}

/// A violated run invariant, with its 1-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunViolation {
    FirstTermBelowTwo,
    Decreasing(usize),
    BelowGreedy(usize),
    AboveCap(usize),
    NonPositiveResidual(usize),
    Sandwich(usize),
    OutsideAdmissible(usize),
}

/// Every invariant of a run, checked exactly. Empty means the run is sound.
///
/// Checks: `a` non-decreasing from `a_1 >= 2`; `b_n >= a_n`; the cap on
/// constrained indices; positive residuals; the sandwich
/// `1/a_n < theta - sum_{i<n} 1/b_i <= 1/(a_n - 1)`; and `b_n` inside the
/// admissible interval for `(a_n, a_{n+1})`.
pub fn check_run(run: &WeakGreedyRun) -> Vec<RunViolation> {
    let mut out = Vec::new();
    let one = BigInt::one();
    if run.a.first().is_some_and(|a| a < &BigInt::from(2)) {
        out.push(RunViolation::FirstTermBelowTwo);
    }
    for i in 0..run.len() {
        let n = i + 1;
        let (a_n, b_n) = (&run.a[i], &run.b[i]);
        if i > 0 && a_n < &run.a[i - 1] {
            out.push(RunViolation::Decreasing(n));
        }
        if b_n < a_n {
            out.push(RunViolation::BelowGreedy(n));
        }
        if run.policy.lambda.contains(n) && b_n > &run.policy.cap_for(a_n) {
            out.push(RunViolation::AboveCap(n));
        }
        if !run.residuals[i].is_positive() {
            out.push(RunViolation::NonPositiveResidual(n));
        }
        let r = run.residual_before(n);
        let lower = ExactRational::unit(a_n).ok();
        let upper = ExactRational::unit(&(a_n - &one)).ok();
        let sandwich = match (lower, upper) {
            (Some(lo), Some(hi)) => lo < *r && *r <= hi,
            _ => false,
        };
        if !sandwich {
            out.push(RunViolation::Sandwich(n));
        }
        if let Some(a_next) = run.a.get(i + 1) {
            let inside = admissible_b_interval(a_n, a_next)
                .map(|iv| iv.contains(&ExactRational::from_integer(b_n.clone())))
                .unwrap_or(false);
            if !inside {
                out.push(RunViolation::OutsideAdmissible(n));
            }
        }
    }
    out
}

/// `a_{n+1} >= a_n^2 - a_n + 1` at every step, the growth of the plain greedy algorithm.
pub fn greedy_growth_holds(a: &[BigInt]) -> bool {
    a.windows(2)
        .all(|w| w[1] >= &w[0] * &w[0] - &w[0] + BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_expand(&q("19/48"), 2).unwrap().a, ints(&[3, 17]));
        assert_eq!(greedy_expand(&q("1"), 4).unwrap().a, ints(&[2, 3, 7, 43]));
        assert_eq!(greedy_expand(&q("1/2"), 1).unwrap().a, ints(&[3]));
    }

    #[test]
    fn greedy_domain_and_cap() {
        assert!(matches!(greedy_expand(&q("0"), 3), Err(Error::Domain(_))));
        assert!(matches!(greedy_expand(&q("3/2"), 3), Err(Error::Domain(_))));
        assert!(matches!(greedy_expand(&q("1/2"), 0), Err(Error::Domain(_))));
        assert!(matches!(
            greedy_expand_capped(&q("1/2"), 11, 10),
            Err(Error::TermCap {
                requested: 11,
                cap: 10
            })
        ));
    }

    #[test]
    fn ceil_t_with_greedy_last_term() {
        let policy = WgaaPolicy::ceil_t(q("4/3")).unwrap().with_last_greedy(true);
        let run = wgaa_expand(&q("19/48"), &policy, 2).unwrap();
        assert_eq!(run.a, ints(&[3, 7]));
        assert_eq!(run.b, ints(&[4, 7]));
        assert_eq!(run.approximation(), q("1/4") + q("1/7"));
    }

    #[test]
    fn t_one_is_greedy() {
        let policy = WgaaPolicy::new(q("1"), LambdaSpec::All, BSelection::Greedy).unwrap();
        let theta = q("13/17");
        assert_eq!(
            wgaa_expand(&theta, &policy, 5).unwrap().b,
            greedy_expand(&theta, 5).unwrap().b
        );
        // ceil(1 * a) = a as well
        let policy = WgaaPolicy::ceil_t(q("1")).unwrap();
        assert_eq!(
            wgaa_expand(&theta, &policy, 5).unwrap().b,
            greedy_expand(&theta, 5).unwrap().b
        );
    }

    #[test]
    fn explicit_replay() {
        // a_1 = G(3/4) = 2; 3/4 - 1/3 = 5/12 -> G = 3; 5/12 - 1/8 = 7/24 -> G = 4
        let policy = WgaaPolicy::new(
            q("1"),
            LambdaSpec::Set(BTreeSet::new()),
            BSelection::Explicit(ints(&[3, 8, 120])),
        )
        .unwrap();
        let run = wgaa_expand(&q("3/4"), &policy, 3).unwrap();
        assert_eq!(run.a, ints(&[2, 3, 4]));
        assert!(check_run(&run).is_empty());
        assert_eq!(recover_a_from_b(&run.b, &run.theta).unwrap(), run.a);
    }

    #[test]
    fn explicit_below_greedy_rejected() {
        let policy = WgaaPolicy::new(
            q("1"),
            LambdaSpec::Set(BTreeSet::new()),
            BSelection::Explicit(ints(&[3, 2])),
        )
        .unwrap();
        let err = wgaa_expand(&q("3/4"), &policy, 2).unwrap_err();
        assert!(matches!(err, Error::GreedyBoundViolation { index: 2, .. }));
    }

    #[test]
    fn explicit_above_cap_rejected() {
        let policy =
            WgaaPolicy::new(q("3/2"), LambdaSpec::All, BSelection::Explicit(ints(&[4]))).unwrap();
        // a_1 = 2, cap = 3
        let err = wgaa_expand(&q("3/4"), &policy, 1).unwrap_err();
        assert!(matches!(err, Error::PolicyViolation { index: 1, .. }));
    }

    #[test]
    fn explicit_list_too_short() {
        let policy = WgaaPolicy::new(
            q("1"),
            LambdaSpec::Set(BTreeSet::new()),
            BSelection::Explicit(ints(&[3])),
        )
        .unwrap();
        assert!(matches!(
            wgaa_expand(&q("3/4"), &policy, 2),
            Err(Error::PolicyViolation { index: 2, .. })
        ));
    }

    #[test]
    fn t_below_one_rejected() {
        assert!(WgaaPolicy::ceil_t(q("1/2")).is_err());
    }

    #[test]
    fn min_admissible_is_sound() {
        let policy = WgaaPolicy::new(q("2"), LambdaSpec::All, BSelection::MinAdmissible).unwrap();
        let run = wgaa_expand(&q("5/7"), &policy, 6).unwrap();
        assert!(check_run(&run).is_empty());
        // b = a_n already sits inside its own admissible interval
        assert_eq!(run.b, greedy_expand(&q("5/7"), 6).unwrap().b);
    }

    #[test]
    fn lambda_strings_round_trip() {
        for s in ["all", "set:1,3,5", "complement:2", "periodic:3:0,2", "set:"] {
            let spec: LambdaSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("periodic:0:1".parse::<LambdaSpec>().is_err());
        assert!("periodic:3:3".parse::<LambdaSpec>().is_err());
        assert!("odd".parse::<LambdaSpec>().is_err());
        let p: LambdaSpec = "periodic:2:1".parse().unwrap();
        assert!(p.contains(1) && !p.contains(2) && p.contains(3));
    }

    #[test]
    fn off_lambda_indices_may_exceed_cap() {
        let policy = WgaaPolicy::new(
            q("1"),
            LambdaSpec::Set([2].into_iter().collect()),
            BSelection::Explicit(ints(&[10, 1, 1])),
        )
        .unwrap();
        // index 1 is unconstrained so b_1 = 10 > a_1 = 2 is fine
        let err = wgaa_expand(&q("3/4"), &policy, 2).unwrap_err();
        assert!(matches!(err, Error::GreedyBoundViolation { index: 2, .. }));
    }

    #[test]
    fn recover_examples() {
        let b: Vec<BigInt> = (1..=500i64).map(|n| BigInt::from(n * (n + 2))).collect();
        let a = recover_a_from_b(&b, &q("3/4")).unwrap();
        for (i, a_n) in a.iter().enumerate() {
            assert_eq!(*a_n, BigInt::from(i as i64 + 2));
        }
        let run = greedy_expand(&q("19/48"), 2).unwrap();
        assert_eq!(
            recover_a_from_b(&run.b, &q("19/48")).unwrap(),
            ints(&[3, 17])
        );
        // G(51/100) = 2 and b_1 = 2 meets it with equality
        assert_eq!(
            recover_a_from_b(&ints(&[2]), &q("51/100")).unwrap(),
            ints(&[2])
        );
    }

    #[test]
    fn recover_errors() {
        // G(1/2) = 3, and 1/2 alone already reaches theta
        assert!(matches!(
            recover_a_from_b(&ints(&[2]), &q("1/2")),
            Err(Error::GreedyBoundViolation { index: 1, .. })
        ));
        assert!(matches!(
            recover_a_from_b(&ints(&[2, 2]), &q("3/4")),
            Err(Error::GreedyBoundViolation { index: 2, .. })
        ));
    }

    #[test]
    fn admissible_examples() {
        let iv = admissible_b_interval(&BigInt::from(2), &BigInt::from(7)).unwrap();
        assert_eq!(iv, RationalInterval::open(q("7/6"), q("3")).unwrap());
        let iv = admissible_b_interval(&BigInt::from(3), &BigInt::from(17)).unwrap();
        assert_eq!(iv, RationalInterval::open(q("34/15"), q("48/13")).unwrap());
        for a in 2..20i64 {
            let iv = admissible_b_interval(&BigInt::from(a), &BigInt::from(a + 1)).unwrap();
            assert!(!iv.is_bounded());
            let iv = admissible_b_interval(&BigInt::from(a), &BigInt::from(a)).unwrap();
            assert!(!iv.is_bounded());
        }
        assert!(admissible_b_interval(&BigInt::from(1), &BigInt::from(3)).is_err());
        assert!(admissible_b_interval(&BigInt::from(5), &BigInt::from(3)).is_err());
    }

    #[test]
    fn replay_table_flags_failure() {
        let rows = replay_table(&ints(&[2, 3, 7]), &q("1")).unwrap();
        assert!(rows.iter().all(ReplayRow::passed));
        let rows = replay_table(&ints(&[2, 2, 7]), &q("1")).unwrap();
        assert!(rows[0].passed());
        assert!(!rows[1].partial_sum_below);
        assert_eq!(rows[2].a, None);
    }

    #[test]
    fn run_json_shape() {
        let run = greedy_expand(&q("19/48"), 2).unwrap();
        let json = serde_json::to_string(&run).unwrap();
        assert_eq!(
            json,
            r#"{"theta":"19/48","t":"1/1","lambda":"all","a":["3","17"],"b":["3","17"],"residuals":["1/16","1/272"]}"#
        );
    }
}
