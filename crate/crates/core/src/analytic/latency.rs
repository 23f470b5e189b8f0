//! M/D/1 queueing latency, per-BS loads and fronthaul/backhaul link latency.

use super::max_rsrp::{assoc_prob_max_rsrp, ergodic_rate_max_rsrp, MaxRsrpRate};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::tier::Tier;

/// Lower bound `L / (E[R] - rho')` on the delivery latency at one BS.
pub fn delivery_latency_bs(
    mean_rate: f64,
    rho_prime: f64,
    content_length: f64,
    tier: Tier,
) -> Result<f64> {
    if mean_rate <= rho_prime {
        return Err(Error::Unstable {
            tier,
            mean_rate,
            rho_prime,
            utilization: rho_prime / mean_rate,
        });
    }
    Ok(content_length / (mean_rate - rho_prime))
}

/// Mean number of users per base station of each class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TierLoads {
    pub n_fc: f64,
    pub n_ftc: f64,
    pub n_f: f64,
    pub n_r: f64,
}

impl TierLoads {
    pub fn get(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Fap => self.n_f,
            Tier::FapCached => self.n_fc,
            Tier::FapUncached => self.n_ftc,
            Tier::Rrh => self.n_r,
        }
    }

    /// Traffic `rho' = N xi L` offered to one BS of the class.
    pub fn rho_prime(&self, tier: Tier, xi: f64, content_length: f64) -> f64 {
        self.get(tier) * xi * content_length
    }

    /// `N_i = A_i lambda_u / lambda_i` for maximal-RSRP association.
    pub fn max_rsrp(scenario: &Scenario, a_f: f64, a_r: f64) -> Self {
        let n = scenario.network();
        let lu = scenario.traffic().lambda_u;
        let n_f = a_f * lu / n.lambda_f;
        // Under maximal RSRP caching does not steer association, so cached and
        // uncached F-APs carry the same mean load.
        Self {
            n_fc: n_f,
            n_ftc: n_f,
            n_f,
            n_r: a_r * lu / n.lambda_r,
        }
    }

    /// Loads for minimal-delay association with probabilities `[A_Fc, A_Ftc, A_R]`.
    pub fn min_delay(scenario: &Scenario, assoc: [f64; 3]) -> Self {
        let n = scenario.network();
        let lu = scenario.traffic().lambda_u;
        let p = scenario.hit_probability();
        let per = |a: f64, lambda: f64| if lambda > 0.0 { a * lu / lambda } else { 0.0 };
        Self {
            n_fc: per(assoc[0], p * n.lambda_f),
            n_ftc: per(assoc[1], (1.0 - p) * n.lambda_f),
            n_f: per(assoc[0] + assoc[1], n.lambda_f),
            n_r: per(assoc[2], n.lambda_r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkLatencies {
    pub d_front: f64,
    pub d_back: f64,
}

/// Whose traffic loads the backhaul.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkPolicy {
    /// Misses at every F-AP: `sum (1 - p_hit) N_F xi L`.
    MaxRsrp,
    /// Traffic of F-APs without the requested content: `sum N_Ftc xi L`.
    MinDelay,
}

/// `D = d * rho'_aggregate`, with the aggregate taken over the expected number
/// of nodes inside the configured disc. Configured overrides take precedence.
pub fn link_latencies(scenario: &Scenario, loads: &TierLoads, policy: LinkPolicy) -> LinkLatencies {
    let n = scenario.network();
    let t = scenario.traffic();
    let l = scenario.cache().content_length;
    let area = n.disc_area();
    let p = scenario.hit_probability();
    let back_traffic = match policy {
        LinkPolicy::MaxRsrp => n.lambda_f * area * (1.0 - p) * loads.n_f * t.xi * l,
        LinkPolicy::MinDelay => (1.0 - p) * n.lambda_f * area * loads.n_ftc * t.xi * l,
    };
    let front_traffic = n.lambda_r * area * loads.n_r * t.xi * l;
    LinkLatencies {
        d_front: t.d_front_override.unwrap_or(t.d * front_traffic),
        d_back: t.d_back_override.unwrap_or(t.d * back_traffic),
    }
}

/// Inputs of the maximal-RSRP average latency, analytic or estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRsrpLatencyInputs {
    pub a_f: f64,
    pub a_r: f64,
    pub rate_f: f64,
    pub rate_r: f64,
    pub loads: TierLoads,
    pub links: LinkLatencies,
}

/// `A_F L/(E[R_F]-rho'_F) + (1-p) A_F D_back + A_R (L/(E[R_R]-rho'_R) + D_front)`.
pub fn max_rsrp_latency(scenario: &Scenario, inp: &MaxRsrpLatencyInputs) -> Result<f64> {
    let l = scenario.cache().content_length;
    let xi = scenario.traffic().xi;
    let p = scenario.hit_probability();
    let mut total = 0.0;
    if inp.a_f > 0.0 {
        let q = delivery_latency_bs(inp.rate_f, inp.loads.rho_prime(Tier::Fap, xi, l), l, Tier::Fap)?;
        total += inp.a_f * q + (1.0 - p) * inp.a_f * inp.links.d_back;
    }
    if inp.a_r > 0.0 {
        let q = delivery_latency_bs(inp.rate_r, inp.loads.rho_prime(Tier::Rrh, xi, l), l, Tier::Rrh)?;
        total += inp.a_r * (q + inp.links.d_front);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRsrpLatency {
    pub latency: f64,
    pub inputs: MaxRsrpLatencyInputs,
    pub rates: MaxRsrpRate,
}

pub fn max_rsrp_latency_inputs(scenario: &Scenario, rates: &MaxRsrpRate) -> MaxRsrpLatencyInputs {
    let n = scenario.network();
    let (a_f, a_r) = assoc_prob_max_rsrp(n.lambda_f, n.lambda_r, scenario.k());
    let loads = TierLoads::max_rsrp(scenario, a_f, a_r);
    MaxRsrpLatencyInputs {
        a_f,
        a_r,
        rate_f: rates.fap.value,
        rate_r: rates.rrh.value,
        loads,
        links: link_latencies(scenario, &loads, LinkPolicy::MaxRsrp),
    }
}

pub fn avg_delivery_latency_max_rsrp(
    scenario: &Scenario,
    spec: &QuadratureSpec,
) -> Result<MaxRsrpLatency> {
    let rates = ergodic_rate_max_rsrp(scenario, spec)?;
    let inputs = max_rsrp_latency_inputs(scenario, &rates);
    Ok(MaxRsrpLatency {
        latency: max_rsrp_latency(scenario, &inputs)?,
        inputs,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn queue_latency_arithmetic() {
        assert_eq!(delivery_latency_bs(3.0, 1.0, 2.0, Tier::Fap).unwrap(), 1.0);
        assert_eq!(delivery_latency_bs(4.0, 0.0, 2.0, Tier::Rrh).unwrap(), 0.5);
        match delivery_latency_bs(2.0, 2.0, 2.0, Tier::Rrh) {
            Err(Error::Unstable { tier, utilization, .. }) => {
                assert_eq!(tier, Tier::Rrh);
                assert_eq!(utilization, 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn links_vanish_without_misses() {
        let s = Scenario::reference()
            .modified(|sp| sp.cache.cached_count = sp.cache.catalog_size)
            .unwrap();
        let loads = TierLoads::max_rsrp(&s, 0.5, 0.5);
        let links = link_latencies(&s, &loads, LinkPolicy::MaxRsrp);
        assert_eq!(links.d_back, 0.0);
        assert!(links.d_front > 0.0);
    }

    #[test]
    fn fronthaul_matches_aggregate_arithmetic() {
        let s = Scenario::reference();
        let (a_f, a_r) = (0.5, 0.5);
        let loads = TierLoads::max_rsrp(&s, a_f, a_r);
        let links = link_latencies(&s, &loads, LinkPolicy::MaxRsrp);
        let n_r = a_r * 4e-3 / 2e-4;
        let expect = 1.0 * (2e-4 * std::f64::consts::PI * 5000.0 * 5000.0) * n_r * 5e-3 * 2.0;
        assert!((links.d_front - expect).abs() < 1e-9 * expect);
        let p = s.hit_probability();
        let n_f = a_f * 4e-3 / 2e-5;
        let back = 2e-5 * std::f64::consts::PI * 25e6 * (1.0 - p) * n_f * 5e-3 * 2.0;
        assert!((links.d_back - back).abs() < 1e-9 * back);
    }

    #[test]
    fn overrides_take_precedence() {
        let s = Scenario::reference()
            .modified(|sp| {
                sp.traffic.d_front_override = Some(3.0);
                sp.traffic.d_back_override = Some(0.0);
            })
            .unwrap();
        let links = link_latencies(&s, &TierLoads::max_rsrp(&s, 0.5, 0.5), LinkPolicy::MaxRsrp);
        assert_eq!(links, LinkLatencies { d_front: 3.0, d_back: 0.0 });
    }

    #[test]
    fn full_hit_no_fronthaul_is_two_queue_terms() {
        let s = Scenario::reference()
            .modified(|sp| {
                sp.cache.cached_count = sp.cache.catalog_size;
                sp.traffic.d_front_override = Some(0.0);
            })
            .unwrap();
        let r = avg_delivery_latency_max_rsrp(&s, &QuadratureSpec::default()).unwrap();
        let i = r.inputs;
        let l = 2.0;
        let xi = 5e-3;
        let expect = i.a_f * l / (i.rate_f - i.loads.n_f * xi * l)
            + i.a_r * l / (i.rate_r - i.loads.n_r * xi * l);
        assert!((r.latency - expect).abs() < 1e-12);
    }

    #[test]
    fn reference_latency_is_finite_and_grows_with_requests() {
        let spec = QuadratureSpec::default();
        let base = Scenario::reference();
        let a = avg_delivery_latency_max_rsrp(&base, &spec).unwrap().latency;
        let b = avg_delivery_latency_max_rsrp(&base.modified(|s| s.traffic.xi = 7e-3).unwrap(), &spec)
            .unwrap()
            .latency;
        assert!(a.is_finite() && b > a);
    }

    #[test]
    fn unstable_fap_queue_is_reported() {
        let s = Scenario::reference()
            .modified(|sp| {
                sp.traffic.xi = 9e-3;
                sp.network.lambda_f = 2e-4 / 40.0;
            })
            .unwrap();
        match avg_delivery_latency_max_rsrp(&s, &QuadratureSpec::default()) {
            Err(Error::Unstable { tier, utilization, .. }) => {
                assert_eq!(tier, Tier::Fap);
                assert!(utilization > 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn latency_diverges_toward_capacity(rate in 0.5f64..10.0, f1 in 0.0f64..0.99, gap in 1e-3f64..0.5) {
            let f2 = (f1 + gap).min(0.999_999);
            let a = delivery_latency_bs(rate, rate * f1, 2.0, Tier::Fap).unwrap();
            let b = delivery_latency_bs(rate, rate * f2, 2.0, Tier::Fap).unwrap();
            prop_assert!(b > a);
        }
    }
}
