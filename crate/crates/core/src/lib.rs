//! Analytic model and Monte Carlo simulator for cache-enabled two-tier fog
//! radio access networks: RRHs with limited-feedback interference
//! collaboration and cache-equipped F-APs, deployed as independent Poisson
//! point processes, under maximal-RSRP and minimal-delay user association.

pub mod analytic;
pub mod config;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod numerics;
pub mod report;
pub mod tier;

pub use config::{
    derive_k, validate_config, CacheConfig, LatencyEstimator, NetworkConfig, NoiseForm,
    PlacementMode, Scenario, ScenarioSpec, SimulationConfig, ThresholdMapping, TrafficConfig,
};
pub use error::{ConfigErrors, Error, Result};
pub use report::{Estimate, Failure, MetricsReport};
pub use tier::Tier;
