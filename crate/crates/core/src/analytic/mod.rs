//! Closed-form evaluators for both association policies.

pub mod cache;
pub mod latency;
pub mod max_rsrp;
pub mod min_delay;

pub use cache::{cache_hit_probability, zipf_popularity};
pub use latency::{
    avg_delivery_latency_max_rsrp, delivery_latency_bs, link_latencies, max_rsrp_latency,
    max_rsrp_latency_inputs, LinkLatencies, LinkPolicy, MaxRsrpLatency, MaxRsrpLatencyInputs,
    TierLoads,
};
pub use max_rsrp::{
    assoc_prob_max_rsrp, ergodic_rate_max_rsrp, success_prob_fap_alpha4,
    success_prob_fap_max_rsrp, success_prob_max_rsrp, success_prob_rrh_alpha4,
    success_prob_rrh_max_rsrp, MaxRsrpRate, MaxRsrpSuccess, TwoTier,
};
pub use min_delay::{
    assoc_prob_min_delay, avg_delivery_latency_min_delay, ergodic_rate_min_delay,
    min_delay_latency, min_delay_terms_general, min_delay_terms_il, min_delay_thresholds,
    solve_min_delay_equilibrium, success_prob_min_delay_general, success_prob_min_delay_il,
    MinDelayEquilibrium, MinDelayLatency, MinDelayLatencyInputs, MinDelayRate, MinDelayTerms,
    SinrThresholds,
};
