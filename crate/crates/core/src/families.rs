//! Closed-form shadow/denominator pairs for geometric, arithmetic and
//! Fibonacci shadows, with certified enclosures of the resulting sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::construction::in_jump_bracket;
use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::rational::ExactRational;

/// Sums of more terms than this are bracketed on a dyadic grid instead of
/// being accumulated exactly.
pub const EXACT_SUM_TERMS: usize = 512;

/// Fractional bits of the dyadic grid used for long partial sums.
const DYADIC_BITS: u64 = 160;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceFamily {
    Geometric { a: BigInt, r: BigInt },
    Arithmetic { a: BigInt, d: BigInt },
    Fibonacci,
    Explicit(Vec<BigInt>),
}

impl SequenceFamily {
    pub fn geometric(a: impl Into<BigInt>, r: impl Into<BigInt>) -> Result<Self> {
        let (a, r) = (a.into(), r.into());
        if a < BigInt::from(2) || r < BigInt::from(2) {
            return Err(Error::Domain(format!(
                "geometric needs a >= 2, r >= 2; got a={a}, r={r}"
            )));
        }
        Ok(SequenceFamily::Geometric { a, r })
    }

    pub fn arithmetic(a: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (a, d) = (a.into(), d.into());
        if a < BigInt::from(2) || d < BigInt::one() {
            return Err(Error::Domain(format!(
                "arithmetic needs a >= 2, d >= 1; got a={a}, d={d}"
            )));
        }
        Ok(SequenceFamily::Arithmetic { a, d })
    }

    pub fn is_strictly_increasing(&self) -> bool {
        match self {
            SequenceFamily::Geometric { .. } | SequenceFamily::Arithmetic { .. } => true,
            // F_2 = 1 < F_3 = 2 < ...
            SequenceFamily::Fibonacci => true,
            SequenceFamily::Explicit(v) => v.windows(2).all(|w| w[0] < w[1]),
        }
    }

    /// Exact `lim a_{n+1}/a_n`, where the family determines it.
    pub fn ratio_limit(&self) -> Option<ExactRational> {
        match self {
            SequenceFamily::Geometric { r, .. } => Some(ExactRational::from_integer(r.clone())),
            SequenceFamily::Arithmetic { .. } => Some(ExactRational::one()),
            // the golden ratio is irrational; report nothing rather than an approximation
            SequenceFamily::Fibonacci | SequenceFamily::Explicit(_) => None,
        }
    }

    /// True when the ratio limit is known to exceed one (irrational limits included).
    pub fn ratio_limit_exceeds_one(&self) -> Option<bool> {
        match self {
            SequenceFamily::Fibonacci => Some(true),
            other => other.ratio_limit().map(|l| l > ExactRational::one()),
        }
    }

    /// `a_n`, 1-based.
    pub fn a(&self, n: usize) -> Result<BigInt> {
        check_index(n)?;
        Ok(match self {
            SequenceFamily::Geometric { a, r } => a * Pow::pow(r, n - 1),
            SequenceFamily::Arithmetic { a, d } => a + d * BigInt::from(n - 1),
            SequenceFamily::Fibonacci => fibonacci(n + 1),
            SequenceFamily::Explicit(v) => v
                .get(n - 1)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("explicit family has no a_{n}")))?,
        })
    }

    /// `b_n`, 1-based.
    pub fn b(&self, n: usize) -> Result<BigInt> {
        check_index(n)?;
        Ok(match self {
            SequenceFamily::Geometric { a, r } => {
                // a r^n / (r - 1), minus one when exact
                let rm1 = r - BigInt::one();
                let num = a * Pow::pow(r, n);
                let (q, rem) = num.div_rem(&rm1);
                if rem.is_zero() {
                    q - 1
                } else {
                    q
                }
            }
            SequenceFamily::Arithmetic { a, d } => {
                let lo = a + d * BigInt::from(n - 1);
                let hi = &lo + d;
                let (q, rem) = (lo * hi).div_rem(d);
                if rem.is_zero() {
                    q - 1
                } else {
                    q
                }
            }
            SequenceFamily::Fibonacci => fibonacci_parity_b(n),
            SequenceFamily::Explicit(_) => {
                let (a_n, a_next) = (self.a(n)?, self.a(n + 1)?);
                let iv = crate::construction::jump_b_interval(&a_n, &a_next)?;
                crate::construction::choose_b_jump(&iv)?
            }
        })
    }

    /// `(a_1..a_N, b_1..b_N)`.
    pub fn terms(&self, n_terms: usize) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let mut a = Vec::with_capacity(n_terms);
        let mut b = Vec::with_capacity(n_terms);
        for n in 1..=n_terms {
            a.push(self.a(n)?);
            b.push(self.b(n)?);
        }
        Ok((a, b))
    }
}

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("indices start at 1".into()));
    }
    Ok(())
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceFamily::Geometric { a, r } => write!(f, "geometric:a={a},r={r}"),
            SequenceFamily::Arithmetic { a, d } => write!(f, "arithmetic:a={a},d={d}"),
            SequenceFamily::Fibonacci => f.write_str("fibonacci"),
            SequenceFamily::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SequenceFamily {
    type Err = Error;

    /// `geometric:a=2,r=3`, `arithmetic:a=3,d=2`, `fibonacci`, `explicit:2,5,11`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "fibonacci" {
            return Ok(SequenceFamily::Fibonacci);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown family spec {s:?}")))?;
        let int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in family spec")))
        };
        let params = |names: [&str; 2]| -> Result<(BigInt, BigInt)> {
            let mut vals: [Option<BigInt>; 2] = [None, None];
            for part in rest.split(',') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
                let slot = names
                    .iter()
                    .position(|n| *n == k.trim())
                    .ok_or_else(|| Error::Parse(format!("unknown parameter {k:?}")))?;
                vals[slot] = Some(int(v)?);
            }
            match vals {
                [Some(x), Some(y)] => Ok((x, y)),
                _ => Err(Error::Parse(format!(
                    "{kind} needs {} and {}",
                    names[0], names[1]
                ))),
            }
        };
        match kind {
            "geometric" => {
                let (a, r) = params(["a", "r"])?;
                SequenceFamily::geometric(a, r)
            }
            "arithmetic" => {
                let (a, d) = params(["a", "d"])?;
                SequenceFamily::arithmetic(a, d)
            }
            "explicit" => Ok(SequenceFamily::Explicit(
                rest.split(',').map(int).collect::<Result<_>>()?,
            )),
            _ => Err(Error::Parse(format!("unknown family {kind:?}"))),
        }
    }
}

/// `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: usize) -> BigInt {
    let (mut x, mut y) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let z = &x + &y;
        x = std::mem::replace(&mut y, z);
    }
    x
}

/// `b_1 = 3`; for `n >= 2`, `F_{n+3} - 1` when `n` is odd and `F_{n+3}` when even.
pub fn fibonacci_parity_b(n: usize) -> BigInt {
    match n {
        0 => BigInt::zero(),
        1 => BigInt::from(3),
        _ if n % 2 == 1 => fibonacci(n + 3) - 1,
        _ => fibonacci(n + 3),
    }
}

/// `floor(F_{n+1} F_{n+2} / F_n)`, the unadjusted floor expression (`n >= 1`).
pub fn fibonacci_floor_b(n: usize) -> BigInt {
    (fibonacci(n + 1) * fibonacci(n + 2)).div_floor(&fibonacci(n))
}

/// `F_{n-1} F_{n+1} - F_n^2 = (-1)^n` for `1 <= n <= N`.
pub fn cassini_check(max_n: usize) -> bool {
    (1..=max_n).all(|n| {
        let lhs = fibonacci(n - 1) * fibonacci(n + 1) - fibonacci(n).pow(2u32);
        let rhs = if n % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        lhs == rhs
    })
}

/// Result of checking the strict jump brackets over an index range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketCheck {
    pub first_checked: usize,
    pub last_checked: usize,
    pub first_failure: Option<usize>,
    /// Every failing index, in order.
    pub failures: Vec<usize>,
}

impl BracketCheck {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `1/a_n - 1/a_{n+1} < 1/b_n < 1/(a_n - 1) - 1/(a_{n+1} - 1)` for each
/// `n` with `a_n >= 2`. `a` needs one more entry than `b`.
pub fn check_jump_brackets(a: &[BigInt], b: &[BigInt]) -> Result<BracketCheck> {
    if a.len() != b.len() + 1 {
        return Err(Error::LengthMismatch(a.len(), b.len() + 1));
    }
    let two = BigInt::from(2);
    let first = a
        .iter()
        .position(|x| x >= &two)
        .map_or(b.len() + 1, |i| i + 1);
    let failures: Vec<usize> = (first..=b.len())
        .filter(|&n| !in_jump_bracket(&a[n - 1], &a[n], &b[n - 1]))
        .collect();
    Ok(BracketCheck {
        first_checked: first,
        last_checked: b.len(),
        first_failure: failures.first().copied(),
        failures,
    })
}

/// Checks the jump brackets for `n <= N`, skipping leading shadows below 2
/// (the Fibonacci shadow starts at `a_1 = F_2 = 1`).
pub fn verify_jump_brackets(f: &SequenceFamily, max_n: usize) -> Result<BracketCheck> {
    check_index(max_n)?;
    let (a, b) = f.terms(max_n)?;
    let mut a = a;
    a.push(f.a(max_n + 1)?);
    check_jump_brackets(&a, &b)
}

/// Certified enclosure of `sum_{n >= 1} 1/b_n`: the partial sum over `n <= N`
/// plus a rigorous two-sided tail bracket.
pub fn family_theta_partial(f: &SequenceFamily, max_n: usize) -> Result<RationalInterval> {
    check_index(max_n)?;
    let (tail_lo, tail_hi, upto) = match f {
        SequenceFamily::Geometric { a, r } => {
            // b_n in [c r^n - 1, c r^n], c = a/(r-1); sum_{n > N} 1/(c r^n) = 1/(a r^N)
            let c = ExactRational::new(a.clone(), r - BigInt::one())?;
            let r_pow = ExactRational::from_integer(Pow::pow(r, max_n));
            let lo = (ExactRational::from_integer(a.clone()) * r_pow.clone()).recip()?;
            let x = &c * &(r_pow * ExactRational::from_integer(r.clone()));
            let hi = &lo * &(&x / &(&x - &ExactRational::one()));
            (lo, hi, max_n)
        }
        SequenceFamily::Arithmetic { a, d } => {
            // telescoping against (a_n - s)(a_{n+1} - s)/d for s = 0 and s = 1
            let next = a + d * BigInt::from(max_n);
            let lo = ExactRational::unit(&next)?;
            let hi = ExactRational::unit(&(next - 1))?;
            (lo, hi, max_n)
        }
        SequenceFamily::Fibonacci => {
            // b_{n+1} >= 3/2 b_n once n >= 3, so the tail past m >= 2 is
            // within [1/b_{m+1}, 3/b_{m+1}]
            let m = max_n.max(2);
            let next = fibonacci_parity_b(m + 1);
            let lo = ExactRational::unit(&next)?;
            let hi = ExactRational::new(3, next)?;
            (lo, hi, m)
        }
        SequenceFamily::Explicit(_) => {
            return Err(Error::Domain("an explicit family has no tail bound".into()));
        }
    };
    let (sum_lo, sum_hi) = partial_sum_bracket(f, upto)?;
    RationalInterval::closed(sum_lo + tail_lo, sum_hi + tail_hi)
}

/// `[lo, hi]` around `sum_{n <= N} 1/b_n`; exact (`lo == hi`) for short sums.
fn partial_sum_bracket(f: &SequenceFamily, max_n: usize) -> Result<(ExactRational, ExactRational)> {
    if max_n <= EXACT_SUM_TERMS {
        let mut s = ExactRational::zero();
        for n in 1..=max_n {
            s = s + ExactRational::unit(&f.b(n)?)?;
        }
        return Ok((s.clone(), s));
    }
    // floor(2^K / b) <= 2^K / b <= floor(2^K / b) + 1
    let scale = BigInt::one() << DYADIC_BITS;
    let mut lo = BigInt::zero();
    for n in 1..=max_n {
        lo += &scale / f.b(n)?;
    }
    let hi = &lo + BigInt::from(max_n);
    Ok((
        ExactRational::new(lo, scale.clone())?,
        ExactRational::new(hi, scale)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::RationalInterval;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn geo(a: i64, r: i64) -> SequenceFamily {
        SequenceFamily::geometric(a, r).unwrap()
    }

    fn arith(a: i64, d: i64) -> SequenceFamily {
        SequenceFamily::arithmetic(a, d).unwrap()
    }

    #[test]
    fn a_examples() {
        assert_eq!(geo(2, 3).a(3).unwrap(), big(18));
        assert_eq!(arith(2, 1).a(5).unwrap(), big(6));
        assert_eq!(SequenceFamily::Fibonacci.a(4).unwrap(), big(5));
    }

    #[test]
    fn b_closed_forms() {
        for n in 1..30usize {
            let pow3 = BigInt::from(3).pow(n as u32);
            assert_eq!(geo(2, 3).b(n).unwrap(), &pow3 - 1);
            let pow4 = BigInt::from(4).pow(n as u32);
            assert_eq!(geo(2, 4).b(n).unwrap(), (pow4 - 1) * 2 / 3);
            let m = n as i64;
            assert_eq!(arith(2, 1).b(n).unwrap(), big(m * m + 3 * m + 1));
            assert_eq!(arith(3, 2).b(n).unwrap(), big(2 * m * m + 4 * m + 1));
        }
        assert_eq!(SequenceFamily::Fibonacci.b(1).unwrap(), big(3));
        assert_eq!(SequenceFamily::Fibonacci.b(2).unwrap(), big(5));
        assert_eq!(SequenceFamily::Fibonacci.b(3).unwrap(), big(7));
    }

    #[test]
    fn geometric_dichotomy() {
        for a in 2..8i64 {
            for r in 2..8i64 {
                let f = geo(a, r);
                for n in 1..12usize {
                    let b = f.b(n).unwrap();
                    let num = big(a) * big(r).pow(n as u32);
                    if a % (r - 1) == 0 {
                        assert_eq!(big(r - 1) * (b + 1), num);
                    } else {
                        assert_eq!(b, num.div_floor(&big(r - 1)));
                    }
                }
            }
        }
    }

    #[test]
    fn arithmetic_dichotomy() {
        for a in 2..10i64 {
            for d in 1..10i64 {
                let f = arith(a, d);
                for n in 1..15usize {
                    let b = f.b(n).unwrap();
                    let (x, y) = (f.a(n).unwrap(), f.a(n + 1).unwrap());
                    if (a * a) % d == 0 {
                        assert_eq!(big(d) * (b + 1), x * y);
                    } else {
                        assert_eq!(b, (x * y).div_floor(&big(d)));
                    }
                }
            }
        }
    }

    #[test]
    fn brackets_hold_for_families() {
        assert!(verify_jump_brackets(&geo(2, 3), 30).unwrap().passed());
        assert!(verify_jump_brackets(&geo(2, 4), 30).unwrap().passed());
        assert!(verify_jump_brackets(&arith(2, 1), 50).unwrap().passed());
        assert!(verify_jump_brackets(&arith(3, 2), 50).unwrap().passed());
        let fib = verify_jump_brackets(&SequenceFamily::Fibonacci, 50).unwrap();
        assert!(fib.passed());
        assert_eq!(fib.first_checked, 2);
        for a in 2..6 {
            for r in 2..6 {
                assert!(verify_jump_brackets(&geo(a, r), 20).unwrap().passed());
            }
            for d in 1..8 {
                assert!(verify_jump_brackets(&arith(a, d), 40).unwrap().passed());
            }
        }
    }

    #[test]
    fn injected_fibonacci_value_fails() {
        let f = SequenceFamily::Fibonacci;
        let (mut a, mut b) = f.terms(10).unwrap();
        a.push(f.a(11).unwrap());
        b[1] = big(6);
        assert_eq!(check_jump_brackets(&a, &b).unwrap().first_failure, Some(2));
    }

    #[test]
    fn fibonacci_floor_disagrees_at_two() {
        assert_eq!(fibonacci_floor_b(2), big(6));
        assert_eq!(fibonacci_parity_b(2), big(5));
        for n in 3..60 {
            assert_eq!(fibonacci_floor_b(n), fibonacci_parity_b(n), "n = {n}");
        }
    }

    #[test]
    fn parity_is_largest_admissible() {
        for n in 2..=50usize {
            let iv =
                crate::construction::jump_b_interval(&fibonacci(n + 1), &fibonacci(n + 2)).unwrap();
            assert_eq!(
                iv.largest_integer().unwrap(),
                fibonacci_parity_b(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn cassini_small_cases() {
        assert_eq!(fibonacci(1) * fibonacci(3) - fibonacci(2).pow(2u32), big(1));
        assert_eq!(
            fibonacci(2) * fibonacci(4) - fibonacci(3).pow(2u32),
            big(-1)
        );
        assert!(cassini_check(80));
    }

    #[test]
    fn family_strings_round_trip() {
        for s in [
            "geometric:a=2,r=3",
            "arithmetic:a=3,d=2",
            "fibonacci",
            "explicit:2,5,11",
        ] {
            assert_eq!(s.parse::<SequenceFamily>().unwrap().to_string(), s);
        }
        assert!("geometric:a=1,r=3".parse::<SequenceFamily>().is_err());
        assert!("arithmetic:a=2".parse::<SequenceFamily>().is_err());
        assert!("geometric:a=2,q=3".parse::<SequenceFamily>().is_err());
        assert!("lucas".parse::<SequenceFamily>().is_err());
    }

    fn brute_tail_contains(f: &SequenceFamily, n: usize, extra: usize) {
        // longer partial sums stay below the enclosure, and deeper enclosures overlap it
        let enc = family_theta_partial(f, n).unwrap();
        let mut s = ExactRational::zero();
        for k in 1..=n + extra {
            s = s + ExactRational::unit(&f.b(k).unwrap()).unwrap();
        }
        assert!(s <= *enc.hi_value().unwrap());
        let deep = family_theta_partial(f, n + extra).unwrap();
        assert!(deep.lo() <= enc.hi_value().unwrap());
        assert!(enc.lo() <= deep.hi_value().unwrap());
    }

    #[test]
    fn enclosures_are_consistent_with_longer_sums() {
        brute_tail_contains(&geo(2, 3), 5, 30);
        brute_tail_contains(&geo(3, 2), 5, 30);
        brute_tail_contains(&arith(2, 1), 10, 200);
        brute_tail_contains(&arith(3, 5), 10, 200);
        brute_tail_contains(&SequenceFamily::Fibonacci, 1, 40);
        brute_tail_contains(&SequenceFamily::Fibonacci, 6, 40);
    }

    #[test]
    fn deeper_enclosures_nest() {
        for f in [geo(2, 3), arith(3, 2), SequenceFamily::Fibonacci] {
            let shallow = family_theta_partial(&f, 8).unwrap();
            let deep = family_theta_partial(&f, 20).unwrap();
            assert!(deep.width() < shallow.width());
            let overlap = RationalInterval::closed(
                std::cmp::max(deep.lo().clone(), shallow.lo().clone()),
                std::cmp::min(
                    deep.hi_value().unwrap().clone(),
                    shallow.hi_value().unwrap().clone(),
                ),
            );
            assert!(overlap.is_ok());
        }
    }

    #[test]
    fn dyadic_path_agrees_with_exact_path() {
        let f = arith(2, 1);
        let n = EXACT_SUM_TERMS + 88;
        let enc = family_theta_partial(&f, n).unwrap();
        let mut s = ExactRational::zero();
        for k in 1..=n {
            s = s + ExactRational::unit(&f.b(k).unwrap()).unwrap();
        }
        let next = f.a(n + 1).unwrap();
        let exact = RationalInterval::closed(
            &s + &ExactRational::unit(&next).unwrap(),
            &s + &ExactRational::unit(&(next - 1)).unwrap(),
        )
        .unwrap();
        assert!(exact.is_subset_of(&enc));
        let slack = enc.width().unwrap() - exact.width().unwrap();
        assert!(slack < ExactRational::new(1, BigInt::one() << 140u32).unwrap());
    }

    #[test]
    fn explicit_family() {
        let f: SequenceFamily = "explicit:2,3,5,9".parse().unwrap();
        assert_eq!(f.b(1).unwrap(), big(5));
        assert!(f.b(4).is_err());
        assert!(family_theta_partial(&f, 2).is_err());
    }
}
