use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use unitfrac::construction::{construct as build, Continuation, TargetSequence};
use unitfrac::diagnostics::{
    classify_growth, default_t_grid, ratio_step_bounds, shadow_bound, DeclaredLimit,
};
use unitfrac::families::{check_jump_brackets, family_theta_partial, BracketCheck, SequenceFamily};
use unitfrac::greedy::{replay_table, wgaa_expand_capped, BSelection, LambdaSpec, WgaaPolicy};
use unitfrac::uniqueness::{necessary_for_uniqueness, sufficient_for_uniqueness, sweep_pairs};
use unitfrac::{ExactRational, RationalInterval};

use crate::input::{parse_list, read_sequence};
use crate::report::Report;
use crate::{Algo, ClassifyArgs, ClassifyMode, CliError, ConstructArgs, ExpandArgs, FamilyArgs};
use crate::{Select, UniqueArgs, VerifyArgs};

fn rational(s: &str, what: &str) -> Result<ExactRational, CliError> {
    s.parse()
        .map_err(|_| CliError::usage(format!("--{what}: {s:?} is not a rational P/Q")))
}

fn family_spec(s: &str) -> Result<SequenceFamily, CliError> {
    Ok(s.parse::<SequenceFamily>()?)
}

fn s<T: ToString>(x: &T) -> String {
    x.to_string()
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(s).unwrap_or_default()
}

pub fn expand(args: &ExpandArgs, cap: usize) -> Result<Report, CliError> {
    let theta = rational(&args.theta, "theta")?;
    let t = rational(&args.t, "t")?;
    let policy = match args.algo {
        Algo::Greedy => WgaaPolicy::greedy(),
        Algo::Gt => WgaaPolicy::ceil_t(t)?,
        Algo::Wgaa => {
            let lambda: LambdaSpec = args.lambda.parse()?;
            let selection = match args.select {
                Select::Greedy => BSelection::Greedy,
                Select::CeilTA => BSelection::CeilTA,
                Select::MinAdmissible => BSelection::MinAdmissible,
                Select::Explicit => {
                    let list = args
                        .b_list
                        .as_deref()
                        .ok_or_else(|| CliError::usage("--select explicit needs --b-list"))?;
                    BSelection::Explicit(parse_list(list)?)
                }
            };
            WgaaPolicy::new(t, lambda, selection)?
        }
    }
    .with_last_greedy(args.last_greedy);
    let run = wgaa_expand_capped(&theta, &policy, args.terms, cap)?;
    let rows = (0..run.len())
        .map(|i| {
            vec![
                s(&(i + 1)),
                s(&run.a[i]),
                s(&run.b[i]),
                s(&run.residuals[i]),
            ]
        })
        .collect();
    Ok(Report::new(&run, vec!["n", "a", "b", "residual"], rows))
}

#[derive(Serialize)]
struct BracketDoc {
    first_checked: usize,
    last_checked: usize,
    failures: Vec<usize>,
    passed: bool,
}

impl From<&BracketCheck> for BracketDoc {
    fn from(c: &BracketCheck) -> Self {
        BracketDoc {
            first_checked: c.first_checked,
            last_checked: c.last_checked,
            failures: c.failures.clone(),
            passed: c.passed(),
        }
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Doc {
        #[serde(skip_serializing_if = "Option::is_none")]
        replay: Option<Vec<unitfrac::greedy::ReplayRow>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        brackets: Option<BracketDoc>,
        passed: bool,
    }
    if args.theta.is_none() && args.a_file.is_none() {
        return Err(CliError::usage("verify needs --theta and/or --a-file"));
    }
    let b = read_sequence(&args.b_file)?;
    let replay = match &args.theta {
        Some(t) => Some(replay_table(&b, &rational(t, "theta")?)?),
        None => None,
    };
    let brackets = match &args.a_file {
        Some(path) => Some(check_jump_brackets(&read_sequence(path)?, &b)?),
        None => None,
    };

    let replay_ok = replay
        .as_ref()
        .is_none_or(|r| r.iter().all(|row| row.passed()));
    let bracket_ok = brackets.as_ref().is_none_or(BracketCheck::passed);
    let mut rows = Vec::new();
    for (i, b_n) in b.iter().enumerate() {
        let n = i + 1;
        let r = replay.as_ref().map(|r| &r[i]);
        let bracket = brackets.as_ref().map(|c| {
            if n < c.first_checked {
                "skipped"
            } else if c.failures.contains(&n) {
                "fail"
            } else {
                "pass"
            }
        });
        let replay_pass = r.map(|r| r.passed());
        let pass = replay_pass != Some(false) && bracket != Some("fail");
        rows.push(vec![
            s(&n),
            s(b_n),
            r.map(|r| opt(&r.a)).unwrap_or_default(),
            replay_pass.map(|p| s(&p)).unwrap_or_default(),
            bracket.unwrap_or_default().to_string(),
            s(&pass),
        ]);
    }
    let doc = Doc {
        replay,
        brackets: brackets.as_ref().map(BracketDoc::from),
        passed: replay_ok && bracket_ok,
    };
    Ok(
        Report::new(&doc, vec!["n", "b", "a", "replay", "bracket", "pass"], rows)
            .with_ok(replay_ok && bracket_ok),
    )
}

/// A non-decreasing target starting in [2, 10] that mixes plateaus of length
/// 1..=3 with jumps of size 1..=a_n, ending on a jump.
pub fn random_target(rng: &mut impl Rng, jumps: usize) -> Vec<BigInt> {
    let mut cur: u64 = rng.gen_range(2..=10);
    let mut out = vec![BigInt::from(cur)];
    let mut seen = 0;
    while seen < jumps {
        if rng.gen_bool(0.5) {
            for _ in 0..rng.gen_range(1..=3) {
                out.push(BigInt::from(cur));
            }
        }
        cur += rng.gen_range(1..=cur);
        out.push(BigInt::from(cur));
        seen += 1;
    }
    out
}

pub fn construct(args: &ConstructArgs, seed: u64) -> Result<Report, CliError> {
    let seq = if let Some(path) = &args.a_file {
        let continuation = match args.continuation.as_str() {
            "repeat" => Continuation::RepeatLastDelta,
            spec => Continuation::Family(family_spec(spec)?),
        };
        TargetSequence::explicit(read_sequence(path)?, continuation)?
    } else if let Some(spec) = &args.family {
        TargetSequence::Family(family_spec(spec)?)
    } else if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TargetSequence::explicit(
            random_target(&mut rng, args.depth + 1),
            Continuation::RepeatLastDelta,
        )?
    } else {
        return Err(CliError::usage(
            "construct needs --a-file, --family or --random",
        ));
    };
    let result = build(&seq, args.depth)?;
    let rows = (0..result.a_prefix.len())
        .map(|i| {
            let n = i + 1;
            vec![
                s(&n),
                s(&result.a_prefix[i]),
                s(&result.b_prefix[i]),
                s(&result.jump_indices.contains(&n)),
            ]
        })
        .collect();
    let ok = result.certificate.holds();
    Ok(Report::new(&result, vec!["n", "a", "b", "jump"], rows).with_ok(ok))
}

pub fn unique(args: &UniqueArgs) -> Result<Report, CliError> {
    if let Some(max) = args.range {
        if max < 3 {
            return Err(CliError::usage("--range must be at least 3"));
        }
        let sweep = sweep_pairs(max);
        let ok = sweep.iter().all(|r| r.agrees());
        let rows = sweep
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let (o, c) = (&r.open, &r.closed);
                vec![
                    s(&(i + 1)),
                    s(&o.a_n),
                    s(&o.a_next),
                    s(&o.case_tag),
                    s(&o.formula_unique),
                    s(&o.oracle_count),
                    opt(&o.k_n),
                    s(&c.case_tag),
                    s(&c.formula_unique),
                    s(&c.oracle_count),
                    s(&r.agrees()),
                ]
            })
            .collect();
        let header = vec![
            "row",
            "a_n",
            "a_next",
            "case_tag",
            "formula_unique",
            "oracle_count",
            "k_n",
            "closed_case_tag",
            "closed_unique",
            "closed_oracle_count",
            "agree",
        ];
        return Ok(Report::new(&sweep, header, rows).with_ok(ok));
    }
    let path = args
        .a_file
        .as_ref()
        .ok_or_else(|| CliError::usage("unique needs --range or --a-file"))?;
    let a = read_sequence(path)?;
    if a.len() < 2 {
        return Err(CliError::usage("need at least two shadows"));
    }
    #[derive(Serialize)]
    struct Doc {
        sufficient: unitfrac::uniqueness::SequenceCheck,
        necessary: unitfrac::uniqueness::SequenceCheck,
    }
    let doc = Doc {
        sufficient: sufficient_for_uniqueness(&a),
        necessary: necessary_for_uniqueness(&a),
    };
    let ok = doc
        .sufficient
        .pairs
        .iter()
        .chain(&doc.necessary.pairs)
        .all(|v| v.agrees_with_oracle());
    let rows = doc
        .sufficient
        .pairs
        .iter()
        .zip(&doc.necessary.pairs)
        .map(|(o, c)| {
            vec![
                s(&o.n),
                s(&o.a_n),
                s(&o.a_next),
                s(&o.case_tag),
                s(&o.formula_unique),
                s(&o.oracle_count),
                opt(&o.k_n),
                s(&c.formula_unique),
                opt(&o.witness_low),
                opt(&o.witness_high),
            ]
        })
        .collect();
    let header = vec![
        "n",
        "a_n",
        "a_next",
        "case_tag",
        "formula_unique",
        "oracle_count",
        "k_n",
        "closed_unique",
        "witness_low",
        "witness_high",
    ];
    Ok(Report::new(&doc, header, rows).with_ok(ok))
}

#[derive(Serialize)]
struct EnclosureDoc {
    depth: usize,
    interval: RationalInterval,
    width: ExactRational,
    lo_decimal: String,
    hi_decimal: String,
    width_decimal: String,
}

fn enclosure_doc(iv: RationalInterval, depth: usize, digits: usize) -> EnclosureDoc {
    let hi = iv.hi_value().expect("bounded").clone();
    let width = iv.width().expect("bounded");
    EnclosureDoc {
        depth,
        lo_decimal: iv.lo().to_decimal(digits),
        hi_decimal: hi.to_decimal(digits),
        width_decimal: format!("{:.3e}", width.to_f64_lossy()),
        width,
        interval: iv,
    }
}

pub fn family(args: &FamilyArgs, cap: usize) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Doc {
        spec: String,
        #[serde(serialize_with = "strs")]
        a: Vec<BigInt>,
        #[serde(serialize_with = "strs")]
        b: Vec<BigInt>,
        brackets: BracketDoc,
        #[serde(skip_serializing_if = "Option::is_none")]
        enclosure: Option<EnclosureDoc>,
    }
    if args.terms == 0 {
        return Err(CliError::usage("--terms must be positive"));
    }
    if args.terms > cap {
        return Err(unitfrac::Error::TermCap {
            requested: args.terms,
            cap,
        }
        .into());
    }
    let f = family_spec(&args.spec)?;
    let (a, b) = f.terms(args.terms)?;
    let mut a_ext = a.clone();
    a_ext.push(f.a(args.terms + 1)?);
    let brackets = check_jump_brackets(&a_ext, &b)?;
    let enclosure = if args.theta_enclosure {
        let depth = args.enclosure_depth.unwrap_or(args.terms);
        Some(enclosure_doc(
            family_theta_partial(&f, depth)?,
            depth,
            args.digits,
        ))
    } else {
        None
    };
    let rows = (0..a.len())
        .map(|i| {
            let n = i + 1;
            let inside = if n < brackets.first_checked {
                "skipped"
            } else if brackets.failures.contains(&n) {
                "fail"
            } else {
                "pass"
            };
            vec![s(&n), s(&a[i]), s(&b[i]), inside.to_string()]
        })
        .collect();
    let ok = brackets.passed();
    let doc = Doc {
        spec: f.to_string(),
        a,
        b,
        brackets: BracketDoc::from(&brackets),
        enclosure,
    };
    Ok(Report::new(&doc, vec!["n", "a", "b", "bracket"], rows).with_ok(ok))
}

fn strs<S: serde::Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn classify(args: &ClassifyArgs, cap: usize) -> Result<Report, CliError> {
    match args.mode {
        ClassifyMode::Growth => {
            let grid = match &args.t_grid {
                Some(g) => g
                    .split(',')
                    .map(|t| rational(t.trim(), "t-grid"))
                    .collect::<Result<Vec<_>, _>>()?,
                None => default_t_grid(),
            };
            let (a, b, declared) = if let Some(spec) = &args.family {
                let f = family_spec(spec)?;
                let (a, b) = f.terms(args.terms)?;
                let declared = match (&f, f.ratio_limit()) {
                    (SequenceFamily::Fibonacci, _) => Some(DeclaredLimit::IrrationalAboveOne),
                    (_, Some(l)) => Some(DeclaredLimit::Exact(l)),
                    _ => None,
                };
                (a, b, declared)
            } else {
                match (&args.a_file, &args.b_file) {
                    (Some(af), Some(bf)) => (read_sequence(af)?, read_sequence(bf)?, None),
                    _ => {
                        return Err(CliError::usage(
                            "growth mode needs --family or both --a-file and --b-file",
                        ))
                    }
                }
            };
            let rep = classify_growth(&a, &b, &grid, declared)?;
            let rows = rep
                .witnesses
                .iter()
                .map(|w| vec![s(&w.t), s(&w.count), s(&w.late_count)])
                .collect();
            Ok(Report::new(
                &rep,
                vec!["t", "witnesses", "late_witnesses"],
                rows,
            ))
        }
        ClassifyMode::Ratio => {
            let theta = rational(
                args.theta
                    .as_deref()
                    .ok_or_else(|| CliError::usage("ratio mode needs --theta"))?,
                "theta",
            )?;
            let t = rational(&args.t, "t")?;
            let policy = if t == ExactRational::one() {
                WgaaPolicy::greedy()
            } else {
                WgaaPolicy::ceil_t(t)?
            };
            let run = wgaa_expand_capped(&theta, &policy, args.terms, cap)?;
            let rep = ratio_step_bounds(&run)?;
            let rows = rep
                .steps
                .iter()
                .map(|st| {
                    vec![
                        s(&st.n),
                        s(&st.a_n),
                        s(&st.a_next),
                        s(&st.lower_ok),
                        s(&st.upper_ok),
                    ]
                })
                .collect();
            let ok = rep.all_hold();
            Ok(Report::new(
                &rep,
                vec!["n", "a_n", "a_next", "lower_ok", "upper_ok"],
                rows,
            )
            .with_ok(ok))
        }
        ClassifyMode::Shadow => {
            let need = |o: &Option<String>, flag: &str| {
                o.clone()
                    .ok_or_else(|| CliError::usage(format!("shadow mode needs --{flag}")))
            };
            let theta = rational(&need(&args.theta, "theta")?, "theta")?;
            let tail = rational(&need(&args.tail_upper, "tail-upper")?, "tail-upper")?;
            let bf = args
                .b_file
                .as_ref()
                .ok_or_else(|| CliError::usage("shadow mode needs --b-file"))?;
            let sb = shadow_bound(&read_sequence(bf)?, &theta, &tail)?;
            let rows =
                sb.a.iter()
                    .enumerate()
                    .map(|(i, a)| vec![s(&(i + 1)), s(a), s(&(*a <= sb.bound))])
                    .collect();
            let ok = sb.holds;
            Ok(Report::new(&sb, vec!["n", "a", "within_bound"], rows).with_ok(ok))
        }
    }
}
