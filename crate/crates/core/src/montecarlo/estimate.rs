//! Parallel, seed-deterministic estimation of the metrics of one scenario.

use rayon::prelude::*;

use super::association::{associate, associate_max_rsrp, scan_min_delay, peak_sinr, Interference, Policy, PolicyState};
use super::scene::SceneModel;
use crate::analytic::{
    link_latencies, max_rsrp_latency, min_delay_latency, LinkPolicy, MaxRsrpLatencyInputs,
    MinDelayLatencyInputs, TierLoads,
};
use crate::config::{LatencyEstimator, Scenario};
use crate::error::{Error, Result};
use crate::report::{Estimate, Failure, MetricsReport};
use crate::tier::Tier;

/// Per-realization record kept for the reduction.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    tier: Tier,
    sinr: f64,
    met: bool,
    /// Serving node had the request in its cache (F-APs only).
    hit: bool,
    /// Maximal-RSRP tier and SINR of the same realization.
    mr_tier: Tier,
    mr_sinr: f64,
    counts: [u32; 3],
    peak: f64,
}

fn rate(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

fn simulate_one(model: &SceneModel, state: &PolicyState, seed: u64, index: u64) -> Result<Outcome> {
    let real = model.realize(seed, index);
    let intf = Interference::new(&real, &model.scenario, model.feedback);
    let a = associate(&real, &intf, state, model.k)?;
    let mr = if matches!(state, PolicyState::MaxRsrp) {
        a
    } else {
        associate_max_rsrp(&real, &intf, model.k)?
    };
    let counts = match state {
        PolicyState::MinDelay(md) => scan_min_delay(&real, &intf, md).counts.map(|c| c as u32),
        _ => [0; 3],
    };
    Ok(Outcome {
        tier: a.tier,
        sinr: a.sinr,
        met: a.met,
        hit: a.tier.is_fap() && real.fap_hit[a.index],
        mr_tier: mr.tier,
        mr_sinr: mr.sinr,
        counts,
        peak: peak_sinr(&intf),
    })
}

fn fraction(outcomes: &[Outcome], pred: impl Fn(&Outcome) -> bool, within: impl Fn(&Outcome) -> bool) -> Estimate {
    let v: Vec<f64> = outcomes
        .iter()
        .filter(|o| within(o))
        .map(|o| if pred(o) { 1.0 } else { 0.0 })
        .collect();
    Estimate::from_samples(&v)
}

fn mean_of(outcomes: &[Outcome], value: impl Fn(&Outcome) -> Option<f64>) -> Estimate {
    let v: Vec<f64> = outcomes.iter().filter_map(value).collect();
    Estimate::from_samples(&v)
}

fn serving_tiers(policy: Policy) -> &'static [Tier] {
    match policy {
        Policy::MaxRsrp => &Tier::MAX_RSRP,
        Policy::MinDelay => &Tier::MIN_DELAY,
        Policy::ClusterMaxCacheHit { .. } => &[Tier::FapCached, Tier::Rrh],
    }
}

/// Inputs the latency formula needs, estimated from a set of realizations.
#[derive(Debug, Clone, Copy)]
struct LatencyParts {
    assoc: [f64; 3],
    rate_f: f64,
    rate_r: f64,
    loads: TierLoads,
    links: crate::analytic::LinkLatencies,
}

fn latency_parts(scenario: &Scenario, state: &PolicyState, policy: Policy, outcomes: &[Outcome]) -> LatencyParts {
    let frac = |t: Tier, met_only: bool| {
        fraction(outcomes, |o| o.tier == t, |o| !met_only || o.met).mean
    };
    let tier_rate = |t: Tier, use_mr: bool| {
        mean_of(outcomes, |o| {
            let (tier, sinr) = if use_mr { (o.mr_tier, o.mr_sinr) } else { (o.tier, o.sinr) };
            (tier == t).then(|| rate(sinr))
        })
        .mean
    };
    let n = scenario.network();
    let lu = scenario.traffic().lambda_u;
    match (policy, state) {
        (Policy::MaxRsrp, _) => {
            let (a_f, a_r) = (frac(Tier::Fap, false), frac(Tier::Rrh, false));
            let loads = TierLoads::max_rsrp(scenario, a_f, a_r);
            LatencyParts {
                assoc: [a_f, 0.0, a_r],
                rate_f: tier_rate(Tier::Fap, false),
                rate_r: tier_rate(Tier::Rrh, false),
                loads,
                links: link_latencies(scenario, &loads, LinkPolicy::MaxRsrp),
            }
        }
        (Policy::MinDelay, PolicyState::MinDelay(md)) => LatencyParts {
            assoc: Tier::MIN_DELAY.map(|t| frac(t, true)),
            rate_f: tier_rate(Tier::Fap, true),
            rate_r: tier_rate(Tier::Rrh, true),
            loads: md.equilibrium.loads,
            links: md.links,
        },
        _ => {
            let (a_c, a_r) = (frac(Tier::FapCached, false), frac(Tier::Rrh, false));
            let n_f = a_c * lu / n.lambda_f;
            let loads = TierLoads {
                n_fc: n_f,
                n_ftc: 0.0,
                n_f,
                n_r: a_r * lu / n.lambda_r,
            };
            LatencyParts {
                assoc: [a_c, 0.0, a_r],
                rate_f: tier_rate(Tier::FapCached, false),
                rate_r: tier_rate(Tier::Rrh, false),
                loads,
                links: link_latencies(scenario, &loads, LinkPolicy::MinDelay),
            }
        }
    }
}

fn lower_bound_latency(scenario: &Scenario, policy: Policy, parts: &LatencyParts) -> Result<f64> {
    match policy {
        Policy::MaxRsrp => max_rsrp_latency(
            scenario,
            &MaxRsrpLatencyInputs {
                a_f: parts.assoc[0],
                a_r: parts.assoc[2],
                rate_f: parts.rate_f,
                rate_r: parts.rate_r,
                loads: parts.loads,
                links: parts.links,
            },
        ),
        _ => min_delay_latency(
            scenario,
            &MinDelayLatencyInputs {
                assoc: parts.assoc,
                rate_f: parts.rate_f,
                rate_r: parts.rate_r,
                loads: parts.loads,
                links: parts.links,
            },
        ),
    }
}

/// `L / max(R - rho', floor) + link` per realization.
fn instantaneous_latency(scenario: &Scenario, policy: Policy, parts: &LatencyParts, outcomes: &[Outcome]) -> Estimate {
    let l = scenario.cache().content_length;
    let xi = scenario.traffic().xi;
    let floor = scenario.simulation().rate_floor;
    let v: Vec<f64> = outcomes
        .iter()
        .filter(|o| policy != Policy::MinDelay || o.met)
        .map(|o| {
            let queue_tier = if policy == Policy::MaxRsrp && o.tier.is_fap() { Tier::Fap } else { o.tier };
            let rho = parts.loads.rho_prime(queue_tier, xi, l);
            let link = match o.tier {
                Tier::Rrh => parts.links.d_front,
                _ if o.hit => 0.0,
                _ => parts.links.d_back,
            };
            l / (rate(o.sinr) - rho).max(floor) + link
        })
        .collect();
    Estimate::from_samples(&v)
}

/// Batch-means standard error of a statistic that is not a plain average.
fn batch_std_error(outcomes: &[Outcome], stat: impl Fn(&[Outcome]) -> Option<f64>) -> f64 {
    let batches = (outcomes.len() / 50).min(20);
    if batches < 2 {
        return f64::NAN;
    }
    let size = outcomes.len() / batches;
    let vals: Vec<f64> = outcomes
        .chunks(size)
        .take(batches)
        .filter_map(&stat)
        .filter(|v| v.is_finite())
        .collect();
    if vals.len() < 2 {
        return f64::NAN;
    }
    Estimate::from_samples(&vals).std_error
}

/// Estimate every metric of `scenario` under `policy` from `realizations`
/// independent scenes drawn from `seed`.
///
/// Results depend only on the seed and the count, never on the number of
/// worker threads.
pub fn estimate_metrics(scenario: &Scenario, policy: Policy, realizations: usize, seed: u64) -> Result<MetricsReport> {
    if realizations == 0 {
        return Err(Error::Unsupported("zero realizations".into()));
    }
    let model = SceneModel::new(scenario);
    let state = PolicyState::new(policy, scenario)?;
    let run = || -> Result<Vec<Outcome>> {
        (0..realizations as u64)
            .into_par_iter()
            .map(|i| simulate_one(&model, &state, seed, i))
            .collect()
    };
    let workers = scenario.simulation().workers;
    let outcomes = if workers == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(run)?
    };
    Ok(reduce(scenario, policy, &state, &outcomes))
}

/// [`estimate_metrics`] with the realization count and seed of the scenario.
pub fn simulate(scenario: &Scenario, policy: Policy) -> Result<MetricsReport> {
    let sim = scenario.simulation();
    estimate_metrics(scenario, policy, sim.realizations, sim.seed)
}

fn reduce(scenario: &Scenario, policy: Policy, state: &PolicyState, outcomes: &[Outcome]) -> MetricsReport {
    let tiers = serving_tiers(policy);
    let min_delay = policy == Policy::MinDelay;
    let success_probability = scenario
        .simulation()
        .thresholds
        .iter()
        .map(|&d| (d, fraction(outcomes, |o| o.sinr > d, |_| true)))
        .collect();
    let association_fractions = tiers
        .iter()
        .map(|&t| (t, fraction(outcomes, |o| o.tier == t, |o| !min_delay || o.met)))
        .collect();
    let tier_terms = if min_delay {
        Tier::MIN_DELAY
            .iter()
            .enumerate()
            .map(|(j, &t)| (t, mean_of(outcomes, |o| Some(o.counts[j] as f64))))
            .collect()
    } else {
        Vec::new()
    };
    let tier_rates = if min_delay {
        Tier::MAX_RSRP
            .iter()
            .map(|&t| (t, mean_of(outcomes, |o| (o.mr_tier == t).then(|| rate(o.mr_sinr)))))
            .collect()
    } else {
        tiers
            .iter()
            .map(|&t| (t, mean_of(outcomes, |o| (o.tier == t).then(|| rate(o.sinr)))))
            .collect()
    };
    let tier_counts = tiers
        .iter()
        .map(|&t| (t, outcomes.iter().filter(|o| o.tier == t).count()))
        .collect();

    let parts = latency_parts(scenario, state, policy, outcomes);
    let delivery_latency = match scenario.simulation().latency_estimator {
        LatencyEstimator::LowerBound => lower_bound_latency(scenario, policy, &parts)
            .map(|mean| Estimate {
                mean,
                std_error: batch_std_error(outcomes, |b| {
                    lower_bound_latency(scenario, policy, &latency_parts(scenario, state, policy, b)).ok()
                }),
                n: outcomes.len(),
            })
            .map_err(|e| Failure::from(&e)),
        LatencyEstimator::Instantaneous => Ok(instantaneous_latency(scenario, policy, &parts, outcomes)),
    };

    MetricsReport {
        success_probability,
        deadline_success: min_delay.then(|| fraction(outcomes, |o| o.met, |_| true)),
        ergodic_rate: mean_of(outcomes, |o| Some(rate(o.sinr))),
        delivery_latency,
        association_fractions,
        tier_terms,
        tier_rates,
        peak_rate: mean_of(outcomes, |o| Some(rate(o.peak))),
        n_realizations: outcomes.len(),
        tier_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{assoc_prob_max_rsrp, success_prob_max_rsrp};

    fn small() -> Scenario {
        Scenario::reference()
            .modified(|sp| {
                sp.network.disc_radius = 1500.0;
                sp.traffic.d_front_override = Some(2.0);
                sp.simulation.thresholds = vec![1.0];
            })
            .unwrap()
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let s = small();
        let one = s.modified(|sp| sp.simulation.workers = 1).unwrap();
        let three = s.modified(|sp| sp.simulation.workers = 3).unwrap();
        for policy in [Policy::MaxRsrp, Policy::MinDelay] {
            let a = estimate_metrics(&one, policy, 120, 42).unwrap();
            let b = estimate_metrics(&three, policy, 120, 42).unwrap();
            assert_eq!(a, b);
        }
        let c = estimate_metrics(&one, Policy::MaxRsrp, 120, 43).unwrap();
        assert_ne!(c, estimate_metrics(&one, Policy::MaxRsrp, 120, 42).unwrap());
    }

    #[test]
    fn max_rsrp_matches_analytic() {
        let s = small();
        let r = estimate_metrics(&s, Policy::MaxRsrp, 3000, 7).unwrap();
        let n = s.network();
        let (a_f, _) = assoc_prob_max_rsrp(n.lambda_f, n.lambda_r, s.k());
        let est = r.association(Tier::Fap).unwrap();
        assert!(est.z_score(a_f) < 4.0, "{est:?} vs {a_f}");
        let sp = success_prob_max_rsrp(1.0, &s).unwrap().total;
        let est = r.success_at(1.0).unwrap();
        assert!(est.z_score(sp) < 4.0, "{est:?} vs {sp}");
        assert!(r.delivery_latency.is_ok());
        assert!(r.deadline_success.is_none());
    }

    #[test]
    fn cluster_radius_extremes() {
        let s = small();
        let none = estimate_metrics(&s, Policy::ClusterMaxCacheHit { radius: 0.0 }, 200, 1).unwrap();
        assert_eq!(none.association(Tier::Rrh).unwrap().mean, 1.0);
        let wide = estimate_metrics(&s, Policy::ClusterMaxCacheHit { radius: 1e9 }, 200, 1).unwrap();
        // Every hit realization is served by an F-AP.
        let p = s.hit_probability();
        let fc = wide.association(Tier::FapCached).unwrap();
        assert!(fc.z_score(p) < 4.0, "{fc:?} vs {p}");
    }

    #[test]
    fn instantaneous_estimator_runs() {
        let s = small()
            .modified(|sp| sp.simulation.latency_estimator = LatencyEstimator::Instantaneous)
            .unwrap();
        let r = estimate_metrics(&s, Policy::MaxRsrp, 200, 3).unwrap();
        let l = r.delivery_latency.unwrap();
        assert!(l.mean.is_finite() && l.mean > 0.0 && l.std_error > 0.0);
    }
}
