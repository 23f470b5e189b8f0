//! Scenario configuration: network geometry, cache placement, traffic and
//! simulation controls, plus the validation that guards every evaluator.
//!
//! Powers are accepted in dBm at the file boundary and held in linear watts
//! everywhere else.

use std::path::Path;

use serde::Deserialize;

use crate::analytic::cache;
use crate::error::{ConfigErrors, Error, Result};
use crate::numerics::{self, FeedbackCoefficients};

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Association bias `k = (P_R / P_F)^(1/alpha)` that makes RSRP comparison a
/// distance comparison `r_R >= k r_F`.
pub fn derive_k(p_r: f64, p_f: f64, alpha: f64) -> Result<f64> {
    if !(p_r > 0.0) {
        return Err(Error::Domain {
            function: "derive_k",
            value: p_r,
            bound: "P_R > 0",
        });
    }
    if !(p_r < p_f) {
        let mut errs = ConfigErrors::default();
        errs.push(
            "network.p_r",
            format!("P_R must be below P_F so that k < 1 (P_R = {p_r} W, P_F = {p_f} W)"),
        );
        return Err(Error::Config(errs));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain {
            function: "derive_k",
            value: alpha,
            bound: "alpha > 2",
        });
    }
    Ok((p_r / p_f).powf(1.0 / alpha))
}

/// Two-tier Poisson deployment on a disc.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// RRH density (nodes/m^2).
    pub lambda_r: f64,
    /// F-AP density (nodes/m^2).
    pub lambda_f: f64,
    /// RRH transmit power (W).
    pub p_r: f64,
    /// F-AP transmit power (W).
    pub p_f: f64,
    pub alpha: f64,
    /// Noise power (W); zero is the interference-limited regime.
    pub sigma2: f64,
    /// Disc radius (m).
    pub disc_radius: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            lambda_r: 2e-4,
            lambda_f: 2e-5,
            p_r: dbm_to_watts(23.0),
            p_f: dbm_to_watts(43.0),
            alpha: 4.0,
            sigma2: 0.0,
            disc_radius: 5000.0,
        }
    }
}

impl NetworkConfig {
    pub fn disc_area(&self) -> f64 {
        std::f64::consts::PI * self.disc_radius * self.disc_radius
    }

    pub fn density_ratio(&self) -> f64 {
        self.lambda_r / self.lambda_f
    }

    fn check(&self, errs: &mut ConfigErrors) {
        positive(errs, "network.lambda_r", self.lambda_r);
        positive(errs, "network.lambda_f", self.lambda_f);
        positive(errs, "network.disc_radius", self.disc_radius);
        positive(errs, "network.p_r", self.p_r);
        positive(errs, "network.p_f", self.p_f);
        if !(self.alpha > 2.0) {
            errs.push(
                "network.alpha",
                format!("alpha must exceed 2 (got {})", self.alpha),
            );
        }
        if self.p_r > 0.0 && self.p_f > 0.0 && !(self.p_r < self.p_f) {
            errs.push(
                "network.p_r",
                format!(
                    "P_R must be below P_F (got {:.3} dBm vs {:.3} dBm)",
                    watts_to_dbm(self.p_r),
                    watts_to_dbm(self.p_f)
                ),
            );
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            errs.push(
                "network.sigma2",
                format!("noise power must be >= 0 (got {})", self.sigma2),
            );
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMode {
    /// Every F-AP stores the M most popular contents.
    MostPopular,
    /// Each F-AP independently holds the requested content with probability p_hit.
    IndependentThinning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CacheConfig {
    pub catalog_size: usize,
    /// Content length L (bits).
    pub content_length: f64,
    /// Number of cached contents M = C_F / L.
    pub cached_count: usize,
    pub zipf_tau: f64,
    pub placement: PlacementMode,
}

impl Default for CacheConfig {
    fn default() -> Self {
        Self {
            catalog_size: 50,
            content_length: 2.0,
            cached_count: 25,
            zipf_tau: 1.0,
            placement: PlacementMode::MostPopular,
        }
    }
}

impl CacheConfig {
    /// Cache size C_F = M L (bits).
    pub fn cache_size(&self) -> f64 {
        self.cached_count as f64 * self.content_length
    }

    pub fn hit_probability(&self) -> f64 {
        cache::cache_hit_probability(self.cached_count, self.zipf_tau, self.catalog_size)
    }

    fn check(&self, errs: &mut ConfigErrors) {
        if self.catalog_size == 0 {
            errs.push("cache.catalog_size", "catalog must hold at least one content");
        }
        positive(errs, "cache.content_length", self.content_length);
        if self.cached_count == 0 {
            errs.push("cache.cached_count", "cached_count must be at least 1");
        }
        if self.cached_count > self.catalog_size {
            errs.push(
                "cache.cached_count",
                format!(
                    "cached_count exceeds catalog (M = {} > N = {})",
                    self.cached_count, self.catalog_size
                ),
            );
        }
        if !(self.zipf_tau >= 0.0) || !self.zipf_tau.is_finite() {
            errs.push(
                "cache.zipf_tau",
                format!("Zipf exponent must be >= 0 (got {})", self.zipf_tau),
            );
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficConfig {
    /// User density (users/m^2).
    pub lambda_u: f64,
    /// Request rate per user.
    pub xi: f64,
    /// Fronthaul/backhaul latency per unit of aggregate traffic.
    pub d: f64,
    pub beta_fc: f64,
    pub beta_ftc: f64,
    pub beta_r: f64,
    pub feedback_bits: u32,
    pub antennas: u32,
    pub d_front_override: Option<f64>,
    pub d_back_override: Option<f64>,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            lambda_u: 4e-3,
            xi: 5e-3,
            d: 1.0,
            beta_fc: 1.0,
            beta_ftc: 5.0,
            beta_r: 6.0,
            feedback_bits: 0,
            antennas: 4,
            d_front_override: None,
            d_back_override: None,
        }
    }
}

impl TrafficConfig {
    fn check(&self, errs: &mut ConfigErrors) {
        positive(errs, "traffic.lambda_u", self.lambda_u);
        positive(errs, "traffic.xi", self.xi);
        positive(errs, "traffic.d", self.d);
        positive(errs, "traffic.beta_fc", self.beta_fc);
        positive(errs, "traffic.beta_ftc", self.beta_ftc);
        positive(errs, "traffic.beta_r", self.beta_r);
        if self.antennas < 2 {
            errs.push(
                "traffic.antennas",
                format!("N_B must be at least 2 (got {})", self.antennas),
            );
        }
        for (field, value) in [
            ("traffic.d_front_override", self.d_front_override),
            ("traffic.d_back_override", self.d_back_override),
        ] {
            if let Some(v) = value {
                if !(v >= 0.0) || !v.is_finite() {
                    errs.push(field, format!("link latency must be >= 0 (got {v})"));
                }
            }
        }
    }
}

/// How the minimal-delay thresholds are turned into SINR thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMapping {
    /// Use `eta` directly as the SINR threshold.
    #[default]
    Direct,
    /// Treat `eta` as a spectral-efficiency requirement: SINR > 2^eta - 1.
    Shannon,
}

/// Noise factor placed inside the F-AP terms of the noisy minimal-delay formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseForm {
    /// exp(-eta_i r^alpha sigma^2 / P_i) for each tier.
    #[default]
    PerTier,
    /// The RRH factor exp(-eta_R r^alpha sigma^2 / (zeta P_R)) in every term.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatencyEstimator {
    /// Plug estimated mean rates and loads into the M/D/1 lower bound.
    #[default]
    LowerBound,
    /// Average L / instantaneous rate, with the rate clamped below.
    Instantaneous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub realizations: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    /// SINR thresholds at which success probability is estimated.
    pub thresholds: Vec<f64>,
    pub mapping: ThresholdMapping,
    pub noise_form: NoiseForm,
    pub latency_estimator: LatencyEstimator,
    pub rate_floor: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            realizations: 20_000,
            seed: 1,
            workers: 0,
            thresholds: vec![0.1, 1.0, 10.0],
            mapping: ThresholdMapping::Direct,
            noise_form: NoiseForm::PerTier,
            latency_estimator: LatencyEstimator::LowerBound,
            rate_floor: 1e-3,
        }
    }
}

impl SimulationConfig {
    fn check(&self, errs: &mut ConfigErrors) {
        if self.realizations == 0 {
            errs.push("simulation.realizations", "need at least one realization");
        }
        if self.thresholds.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            errs.push("simulation.thresholds", "SINR thresholds must be finite and >= 0");
        }
        positive(errs, "simulation.rate_floor", self.rate_floor);
    }
}

/// Unvalidated bundle of all configuration sections.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioSpec {
    pub network: NetworkConfig,
    pub cache: CacheConfig,
    pub traffic: TrafficConfig,
    pub simulation: SimulationConfig,
}

impl ScenarioSpec {
    /// Parameter values of the reference simulation setup.
    pub fn reference() -> Self {
        Self::default()
    }

    pub fn validate(self) -> Result<Scenario, ConfigErrors> {
        validate_config(self)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_spec().map_err(Error::Config)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

/// Check every invariant and report all violations at once.
pub fn validate_config(spec: ScenarioSpec) -> Result<Scenario, ConfigErrors> {
    let mut errs = ConfigErrors::default();
    spec.network.check(&mut errs);
    spec.cache.check(&mut errs);
    spec.traffic.check(&mut errs);
    spec.simulation.check(&mut errs);
    if errs.is_empty() {
        Ok(Scenario { spec })
    } else {
        Err(errs)
    }
}

/// A validated scenario. Immutable; derive a modified copy through
/// [`Scenario::spec`] and re-validate.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    spec: ScenarioSpec,
}

impl Scenario {
    pub fn reference() -> Self {
        validate_config(ScenarioSpec::reference()).expect("reference parameters are valid")
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn network(&self) -> &NetworkConfig {
        &self.spec.network
    }

    pub fn cache(&self) -> &CacheConfig {
        &self.spec.cache
    }

    pub fn traffic(&self) -> &TrafficConfig {
        &self.spec.traffic
    }

    pub fn simulation(&self) -> &SimulationConfig {
        &self.spec.simulation
    }

    pub fn k(&self) -> f64 {
        let n = self.network();
        (n.p_r / n.p_f).powf(1.0 / n.alpha)
    }

    pub fn feedback(&self) -> FeedbackCoefficients {
        let t = self.traffic();
        numerics::feedback_coeffs(t.feedback_bits, t.antennas)
            .expect("antenna count validated")
    }

    pub fn hit_probability(&self) -> f64 {
        self.cache().hit_probability()
    }

    /// Apply `edit` to a copy of the unvalidated scenario and validate the result.
    pub fn modified(&self, edit: impl FnOnce(&mut ScenarioSpec)) -> Result<Scenario> {
        let mut spec = self.spec.clone();
        edit(&mut spec);
        validate_config(spec).map_err(Error::Config)
    }
}

fn positive(errs: &mut ConfigErrors, field: &str, value: f64) {
    if !(value > 0.0) || !value.is_finite() {
        errs.push(field, format!("must be finite and > 0 (got {value})"));
    }
}

// File representation. Every key is optional and falls back to the reference
// setup; unknown keys are rejected by serde.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    network: RawNetwork,
    #[serde(default)]
    cache: RawCache,
    #[serde(default)]
    traffic: RawTraffic,
    #[serde(default)]
    simulation: RawSimulation,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    lambda_r: Option<f64>,
    lambda_f: Option<f64>,
    p_r_dbm: Option<f64>,
    p_f_dbm: Option<f64>,
    p_r_watts: Option<f64>,
    p_f_watts: Option<f64>,
    alpha: Option<f64>,
    sigma2: Option<f64>,
    disc_radius: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCache {
    catalog_size: Option<usize>,
    content_length: Option<f64>,
    cached_count: Option<usize>,
    cache_size: Option<f64>,
    zipf_tau: Option<f64>,
    placement: Option<PlacementMode>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTraffic {
    lambda_u: Option<f64>,
    xi: Option<f64>,
    d: Option<f64>,
    beta_fc: Option<f64>,
    beta_ftc: Option<f64>,
    beta_r: Option<f64>,
    feedback_bits: Option<u32>,
    antennas: Option<u32>,
    d_front_override: Option<f64>,
    d_back_override: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    realizations: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
    thresholds: Option<Vec<f64>>,
    mapping: Option<ThresholdMapping>,
    noise_form: Option<NoiseForm>,
    latency_estimator: Option<LatencyEstimator>,
    rate_floor: Option<f64>,
}

fn pick_power(
    errs: &mut ConfigErrors,
    field: &str,
    dbm: Option<f64>,
    watts: Option<f64>,
    default: f64,
) -> f64 {
    match (dbm, watts) {
        (Some(_), Some(_)) => {
            errs.push(
                format!("network.{field}"),
                "give the power either in dBm or in watts, not both",
            );
            default
        }
        (Some(dbm), None) => dbm_to_watts(dbm),
        (None, Some(w)) => w,
        (None, None) => default,
    }
}

impl RawFile {
    fn into_spec(self) -> Result<ScenarioSpec, ConfigErrors> {
        let mut errs = ConfigErrors::default();
        let base = ScenarioSpec::reference();

        let n = self.network;
        let network = NetworkConfig {
            lambda_r: n.lambda_r.unwrap_or(base.network.lambda_r),
            lambda_f: n.lambda_f.unwrap_or(base.network.lambda_f),
            p_r: pick_power(&mut errs, "p_r", n.p_r_dbm, n.p_r_watts, base.network.p_r),
            p_f: pick_power(&mut errs, "p_f", n.p_f_dbm, n.p_f_watts, base.network.p_f),
            alpha: n.alpha.unwrap_or(base.network.alpha),
            sigma2: n.sigma2.unwrap_or(base.network.sigma2),
            disc_radius: n.disc_radius.unwrap_or(base.network.disc_radius),
        };

        let c = self.cache;
        let content_length = c.content_length.unwrap_or(base.cache.content_length);
        let cached_count = match (c.cached_count, c.cache_size) {
            (Some(_), Some(_)) => {
                errs.push("cache.cache_size", "give either cached_count or cache_size, not both");
                base.cache.cached_count
            }
            (Some(m), None) => m,
            (None, Some(c_f)) => {
                let m = c_f / content_length;
                if !(m >= 0.0) || (m - m.round()).abs() > 1e-9 {
                    errs.push(
                        "cache.cache_size",
                        format!(
                            "cache size {c_f} is not an integer multiple of content length {content_length}"
                        ),
                    );
                    base.cache.cached_count
                } else {
                    m.round() as usize
                }
            }
            (None, None) => base.cache.cached_count,
        };
        let cache = CacheConfig {
            catalog_size: c.catalog_size.unwrap_or(base.cache.catalog_size),
            content_length,
            cached_count,
            zipf_tau: c.zipf_tau.unwrap_or(base.cache.zipf_tau),
            placement: c.placement.unwrap_or(base.cache.placement),
        };

        let t = self.traffic;
        let traffic = TrafficConfig {
            lambda_u: t.lambda_u.unwrap_or(base.traffic.lambda_u),
            xi: t.xi.unwrap_or(base.traffic.xi),
            d: t.d.unwrap_or(base.traffic.d),
            beta_fc: t.beta_fc.unwrap_or(base.traffic.beta_fc),
            beta_ftc: t.beta_ftc.unwrap_or(base.traffic.beta_ftc),
            beta_r: t.beta_r.unwrap_or(base.traffic.beta_r),
            feedback_bits: t.feedback_bits.unwrap_or(base.traffic.feedback_bits),
            antennas: t.antennas.unwrap_or(base.traffic.antennas),
            d_front_override: t.d_front_override,
            d_back_override: t.d_back_override,
        };

        let s = self.simulation;
        let bs = base.simulation;
        let simulation = SimulationConfig {
            realizations: s.realizations.unwrap_or(bs.realizations),
            seed: s.seed.unwrap_or(bs.seed),
            workers: s.workers.unwrap_or(bs.workers),
            thresholds: s.thresholds.unwrap_or(bs.thresholds),
            mapping: s.mapping.unwrap_or(bs.mapping),
            noise_form: s.noise_form.unwrap_or(bs.noise_form),
            latency_estimator: s.latency_estimator.unwrap_or(bs.latency_estimator),
            rate_floor: s.rate_floor.unwrap_or(bs.rate_floor),
        };

        if errs.is_empty() {
            Ok(ScenarioSpec {
                network,
                cache,
                traffic,
                simulation,
            })
        } else {
            Err(errs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn k_for_reference_powers() {
        let k = derive_k(dbm_to_watts(23.0), dbm_to_watts(43.0), 4.0).unwrap();
        // (10^-2)^(1/4)
        assert!((k - 0.316_227_766_016_837_94).abs() < 1e-12);
    }

    #[test]
    fn k_simple_ratios() {
        assert!((derive_k(1.0 / 16.0, 1.0, 4.0).unwrap() - 0.5).abs() < 1e-15);
        let k = derive_k(0.5, 1.0, 2.5).unwrap();
        assert!((k - 2f64.powf(-0.4)).abs() < 1e-15);
        assert!((k - 0.757_858_283_255_199).abs() < 1e-12);
    }

    #[test]
    fn k_rejects_equal_or_larger_rrh_power() {
        assert!(matches!(derive_k(1.0, 1.0, 4.0), Err(Error::Config(_))));
        assert!(matches!(derive_k(2.0, 1.0, 4.0), Err(Error::Config(_))));
        assert!(derive_k(0.5, 1.0, 2.0).is_err());
    }

    #[test]
    fn reference_setup_is_valid() {
        let s = Scenario::reference();
        assert_eq!(s.cache().catalog_size, 50);
        assert_eq!(s.cache().content_length, 2.0);
        assert_eq!(s.network().lambda_r, 2e-4);
        assert_eq!(s.traffic().lambda_u, 4e-3);
        assert_eq!(s.network().alpha, 4.0);
        assert_eq!(s.cache().zipf_tau, 1.0);
        assert!((s.k() * s.k() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn alpha_two_rejected() {
        let mut spec = ScenarioSpec::reference();
        spec.network.alpha = 2.0;
        let errs = validate_config(spec).unwrap_err();
        assert!(errs.mentions("alpha must exceed 2"));
    }

    #[test]
    fn oversized_cache_rejected() {
        let mut spec = ScenarioSpec::reference();
        spec.cache.cached_count = 51;
        let errs = validate_config(spec).unwrap_err();
        assert!(errs.mentions("cached_count exceeds catalog"));
    }

    #[test]
    fn all_violations_are_reported() {
        let mut spec = ScenarioSpec::reference();
        spec.network.alpha = 1.5;
        spec.network.lambda_f = 0.0;
        spec.cache.cached_count = 60;
        spec.traffic.antennas = 1;
        spec.traffic.xi = -1.0;
        let errs = validate_config(spec).unwrap_err();
        assert_eq!(errs.0.len(), 5, "{errs}");
        for field in [
            "network.alpha",
            "network.lambda_f",
            "cache.cached_count",
            "traffic.antennas",
            "traffic.xi",
        ] {
            assert!(errs.iter().any(|v| v.field == field), "missing {field}");
        }
    }

    #[test]
    fn rrh_power_must_stay_below_fap_power() {
        let mut spec = ScenarioSpec::reference();
        spec.network.p_r = spec.network.p_f;
        let errs = validate_config(spec).unwrap_err();
        assert!(errs.iter().any(|v| v.field == "network.p_r"));
    }

    #[test]
    fn table_ranges_validate() {
        let base = Scenario::reference();
        for c_f in [30usize, 40, 50, 60, 70] {
            for lambda_f in [5e-6, 1e-5, 2e-5, 4e-5] {
                for xi in [5e-3, 7e-3, 9e-3] {
                    for d in [0.5, 1.0, 1.5] {
                        base.modified(|s| {
                            s.cache.cached_count = c_f / 2;
                            s.network.lambda_f = lambda_f;
                            s.traffic.xi = xi;
                            s.traffic.d = d;
                        })
                        .unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn parses_full_file() {
        let text = r#"
            [network]
            lambda_r = 2e-4
            lambda_f = 1e-5
            p_r_dbm = 23.0
            p_f_dbm = 43.0
            alpha = 4.0
            disc_radius = 3000.0

            [cache]
            catalog_size = 50
            content_length = 2.0
            cache_size = 60
            zipf_tau = 0.8
            placement = "independent_thinning"

            [traffic]
            xi = 7e-3
            d_front_override = 2.0

            [simulation]
            realizations = 500
            seed = 9
            mapping = "shannon"
        "#;
        let spec = ScenarioSpec::from_toml_str(text).unwrap();
        assert_eq!(spec.cache.cached_count, 30);
        assert_eq!(spec.cache.placement, PlacementMode::IndependentThinning);
        assert_eq!(spec.network.lambda_f, 1e-5);
        assert_eq!(spec.traffic.d_front_override, Some(2.0));
        assert_eq!(spec.simulation.mapping, ThresholdMapping::Shannon);
        assert!((spec.network.p_f - dbm_to_watts(43.0)).abs() < 1e-12);
        spec.validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = ScenarioSpec::from_toml_str("[network]\nlambda_x = 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err = ScenarioSpec::from_toml_str("[extras]\nfoo = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn fractional_cache_size_rejected() {
        let err = ScenarioSpec::from_toml_str("[cache]\ncache_size = 31\n").unwrap_err();
        match err {
            Error::Config(errs) => assert!(errs.mentions("integer multiple")),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn dbm_round_trip(dbm in -60.0f64..80.0) {
            let back = watts_to_dbm(dbm_to_watts(dbm));
            prop_assert!(((back - dbm) / dbm.abs().max(1.0)).abs() <= 1e-12);
        }

        #[test]
        fn k_monotone_in_powers(p_r in 0.01f64..0.5, p_f in 1.0f64..50.0, bump in 1.001f64..1.9, alpha in 2.1f64..6.0) {
            let k = derive_k(p_r, p_f, alpha).unwrap();
            prop_assert!(k > 0.0 && k < 1.0);
            prop_assert!(derive_k(p_r * bump, p_f, alpha).unwrap() > k);
            prop_assert!(derive_k(p_r, p_f * bump, alpha).unwrap() < k);
        }
    }
}
