//! Bell-inequality experiments on ±1 data lists.
//!
//! * [`lists`]: exact correlations and the three- and four-list identities.
//! * [`quantum`]: singlet-state probabilities, matched correlations and the
//!   theoretical left-hand sides, with enumeration oracles.
//! * [`sampler`]: seeded generation of pair runs and per-trial gedanken lists.
//! * [`matching`]: class-FIFO reordering of independent runs onto a shared
//!   variable.
//! * [`scan`]: angle grids, the conditional-correlation surface and
//!   matched/unmatched comparisons.

pub mod error;
pub mod lists;
pub mod matching;
pub mod quantum;
pub mod rng;
pub mod sampler;
pub mod scan;

pub use error::{Error, Result};
pub use lists::{
    bell3_sides, chsh4_sides, correlation, cross_sum, fraction_positive, Bell3Sides, Chsh4Sides,
    DataList, Outcome, Rational,
};
pub use matching::{
    conditional_corr_estimate, match_four, match_three, MatchReport, MatchedQuad, MatchedTriple,
};
pub use quantum::oracle::{brute_force_corr3, brute_force_corr4};
pub use quantum::{
    bell3_lhs_theory, chsh4_lhs_theory, cond_prob, corr_aa_matched, corr_apbp_matched, corr_pair,
    joint_prob, AngleConfig3, AngleConfig4, Mode,
};
pub use rng::Seed;
pub use sampler::{sample_gedanken3, sample_gedanken4, sample_pair_run, PairedRun, RunSpec};
