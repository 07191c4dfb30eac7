pub mod construction;
pub mod diagnostics;
pub mod error;
pub mod families;
pub mod greedy;
pub mod interval;
pub mod rational;
mod serial;
pub mod uniqueness;

pub use construction::{construct, jump_set, ConstructionResult, Continuation, TargetSequence};
pub use diagnostics::{classify_growth, ratio_step_bounds, shadow_bound, ClassificationReport};
pub use error::{Error, Result};
pub use families::{family_theta_partial, verify_jump_brackets, SequenceFamily};
pub use greedy::{
    admissible_b_interval, greedy_expand, recover_a_from_b, wgaa_expand, BSelection, LambdaSpec,
    WeakGreedyRun, WgaaPolicy,
};
pub use interval::{count_integers_in, IntegerCount, RationalInterval, UpperBound};
pub use rational::{g_of, ExactRational};
pub use uniqueness::{
    necessary_for_uniqueness, sufficient_for_uniqueness, sweep_pairs, unique_pair_verdict, CaseTag,
    PairVerdict,
};
