//! Numerical verification: random-state campaigns over every bound, and deterministic
//! identity checks on grids and seeded states.

pub mod campaign;
pub mod identities;
pub mod sampler;
pub mod structural;

pub use campaign::{
    evaluate_sample, run_campaign, BoundEntry, BoundSummary, CampaignReport, SampleRecord,
    SamplerConfig, ABORT_TOL, SAMPLES_FILE, SUMMARY_FILE,
};
pub use identities::{identity_suite, IdentityCheck, IdentityReport};
pub use sampler::{sample_hs_state, sample_pure_bipartite, sample_state, substream, Ensemble};
