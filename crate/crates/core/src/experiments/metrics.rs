//! Named metrics shared by sweeps and cross-validation.
//!
//! Names are `base` or `base|key=value`, e.g. `success|delta=1`,
//! `assoc|tier=Fc`, `rate|tier=R`, `latency`.

use crate::analytic::{
    ergodic_rate_max_rsrp, ergodic_rate_min_delay, max_rsrp_latency, max_rsrp_latency_inputs,
    min_delay_latency, solve_min_delay_equilibrium, success_prob_max_rsrp, MinDelayLatencyInputs,
};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::montecarlo::Policy;
use crate::numerics::QuadratureSpec;
use crate::report::{Estimate, Failure, MetricsReport};
use crate::tier::Tier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Success,
    Association,
    Rate,
    Latency,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Success,
        MetricKind::Association,
        MetricKind::Rate,
        MetricKind::Latency,
    ];

    pub fn base(self) -> &'static str {
        match self {
            MetricKind::Success => "success",
            MetricKind::Association => "assoc",
            MetricKind::Rate => "rate",
            MetricKind::Latency => "latency",
        }
    }

    pub fn of(name: &str) -> Option<MetricKind> {
        let base = name.split('|').next()?;
        Self::ALL.into_iter().find(|k| k.base() == base)
    }
}

pub fn success_name(delta: f64) -> String {
    format!("success|delta={delta}")
}

pub fn tier_name(base: &str, tier: Tier) -> String {
    format!("{base}|tier={tier}")
}

/// A metric value or the reason it has none.
pub type MetricValue = std::result::Result<f64, Failure>;

fn value(r: Result<f64>) -> MetricValue {
    r.map_err(|e| Failure::from(&e))
}

/// Analytic value of every metric the model defines for `policy`.
pub fn analytic_metrics(scenario: &Scenario, policy: Policy) -> Result<Vec<(String, MetricValue)>> {
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();
    match policy {
        Policy::MaxRsrp => {
            for &d in &scenario.simulation().thresholds {
                out.push((success_name(d), value(success_prob_max_rsrp(d, scenario).map(|s| s.total))));
            }
            match ergodic_rate_max_rsrp(scenario, &spec) {
                Ok(rates) => {
                    out.push((tier_name("assoc", Tier::Fap), Ok(rates.a_f)));
                    out.push((tier_name("assoc", Tier::Rrh), Ok(rates.a_r)));
                    out.push(("rate".into(), Ok(rates.rate)));
                    out.push((tier_name("rate", Tier::Fap), Ok(rates.fap.value)));
                    out.push((tier_name("rate", Tier::Rrh), Ok(rates.rrh.value)));
                    let inputs = max_rsrp_latency_inputs(scenario, &rates);
                    out.push(("latency".into(), value(max_rsrp_latency(scenario, &inputs))));
                }
                Err(e) => {
                    for name in ["assoc", "rate", "latency"] {
                        out.push((name.into(), Err(Failure::from(&e))));
                    }
                }
            }
        }
        Policy::MinDelay => {
            let eq = solve_min_delay_equilibrium(scenario);
            let rates = ergodic_rate_max_rsrp(scenario, &spec);
            let closed_rate = ergodic_rate_min_delay(scenario, scenario.hit_probability(), &spec)
                .map(|r| r.integral.value);
            match &eq {
                Ok(eq) => {
                    out.push(("success".into(), Ok(eq.terms.total())));
                    for (j, t) in Tier::MIN_DELAY.iter().enumerate() {
                        out.push((tier_name("assoc", *t), Ok(eq.assoc[j])));
                    }
                    for (j, t) in Tier::MIN_DELAY.iter().enumerate() {
                        out.push((tier_name("term", *t), Ok(eq.terms.to_array()[j])));
                    }
                }
                Err(e) => {
                    out.push(("success".into(), Err(Failure::from(e))));
                    out.push(("assoc".into(), Err(Failure::from(e))));
                }
            }
            out.push(("rate".into(), value(closed_rate)));
            let latency = match (&eq, &rates) {
                (Ok(eq), Ok(rates)) => min_delay_latency(
                    scenario,
                    &MinDelayLatencyInputs {
                        assoc: eq.assoc,
                        rate_f: rates.fap.value,
                        rate_r: rates.rrh.value,
                        loads: eq.loads,
                        links: eq.links,
                    },
                ),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            out.push(("latency".into(), value(latency)));
        }
        Policy::ClusterMaxCacheHit { .. } => {
            return Err(Error::Unsupported(
                "the cluster benchmark has no analytic model".into(),
            ))
        }
    }
    Ok(out)
}

/// Monte Carlo estimate of every metric available for `policy`.
pub fn mc_metrics(report: &MetricsReport, policy: Policy) -> Vec<(String, std::result::Result<Estimate, Failure>)> {
    let mut out = Vec::new();
    if policy == Policy::MinDelay {
        if let Some(e) = report.deadline_success {
            out.push(("success".into(), Ok(e)));
        }
    } else {
        for (d, e) in &report.success_probability {
            out.push((success_name(*d), Ok(*e)));
        }
    }
    for (t, e) in &report.association_fractions {
        out.push((tier_name("assoc", *t), Ok(*e)));
    }
    for (t, e) in &report.tier_terms {
        out.push((tier_name("term", *t), Ok(*e)));
    }
    out.push(("rate".into(), Ok(report.ergodic_rate)));
    for (t, e) in &report.tier_rates {
        out.push((tier_name("rate", *t), Ok(*e)));
    }
    out.push(("latency".into(), report.delivery_latency.clone()));
    out
}
