//! Analytic against Monte Carlo agreement.

use super::metrics::{analytic_metrics, mc_metrics, MetricValue};
use crate::config::Scenario;
use crate::error::Result;
use crate::montecarlo::{estimate_metrics, Policy};
use crate::report::MetricsReport;

/// Below this many samples a comparison is reported but not judged.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub metric: String,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub rel_tol: f64,
    pub pass: bool,
    pub low_power: bool,
}

impl Check {
    pub fn z_score(&self) -> f64 {
        let d = (self.analytic - self.estimate).abs();
        if d == 0.0 { 0.0 } else { d / self.std_error }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub policy: Policy,
    pub checks: Vec<Check>,
    /// Metrics present on one side only or undefined on either.
    pub skipped: Vec<(String, String)>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.low_power)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && !c.low_power)
    }

    pub fn low_power(&self) -> bool {
        self.checks.iter().any(|c| c.low_power)
    }
}

/// Relative slack allowed on top of three standard errors.
pub fn relative_tolerance(metric: &str) -> f64 {
    match metric.split('|').next() {
        Some("rate") | Some("latency") => 0.05,
        _ => 0.0,
    }
}

/// Metrics left out of judgement: the minimal-delay rate integral sets
/// every class threshold to `2^t - 1`, which is not the rate of the served
/// user, so it has no simulation counterpart.
fn judged(policy: Policy, metric: &str) -> bool {
    !(policy == Policy::MinDelay && metric == "rate")
}

/// Pass iff `|analytic - mc| <= max(3 std_error, rel_tol |analytic|)`.
pub fn compare(policy: Policy, analytic: &[(String, MetricValue)], report: &MetricsReport) -> CrossCheckReport {
    let mc = mc_metrics(report, policy);
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for (name, a) in analytic {
        if !judged(policy, name) {
            skipped.push((name.clone(), "no simulation counterpart".into()));
            continue;
        }
        let Some((_, m)) = mc.iter().find(|(n, _)| n == name) else {
            skipped.push((name.clone(), "not estimated".into()));
            continue;
        };
        let (a, m) = match (a, m) {
            (Ok(a), Ok(m)) => (*a, *m),
            (Err(e), _) | (_, Err(e)) => {
                skipped.push((name.clone(), e.message.clone()));
                continue;
            }
        };
        let rel_tol = relative_tolerance(name);
        let slack = (3.0 * m.std_error).max(rel_tol * a.abs());
        let pass = (a - m.mean).abs() <= slack;
        checks.push(Check {
            metric: name.clone(),
            analytic: a,
            estimate: m.mean,
            std_error: m.std_error,
            n: m.n,
            rel_tol,
            pass,
            low_power: m.n < MIN_SAMPLES,
        });
    }
    CrossCheckReport {
        policy,
        checks,
        skipped,
    }
}

pub fn cross_validate(scenario: &Scenario, policy: Policy, realizations: usize, seed: u64) -> Result<CrossCheckReport> {
    let analytic = analytic_metrics(scenario, policy)?;
    let report = estimate_metrics(scenario, policy, realizations, seed)?;
    Ok(compare(policy, &analytic, &report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::assoc_prob_max_rsrp;

    fn small() -> Scenario {
        Scenario::reference()
            .modified(|sp| sp.network.disc_radius = 1500.0)
            .unwrap()
    }

    #[test]
    fn mutated_bias_fails_on_association() {
        let s = small();
        let mut analytic = analytic_metrics(&s, Policy::MaxRsrp).unwrap();
        let n = s.network();
        // Replace k^2 by k in the association probability.
        let (a_f, a_r) = assoc_prob_max_rsrp(n.lambda_f, n.lambda_r, s.k().sqrt());
        for (name, v) in &mut analytic {
            match name.as_str() {
                "assoc|tier=F" => *v = Ok(a_f),
                "assoc|tier=R" => *v = Ok(a_r),
                _ => {}
            }
        }
        let report = estimate_metrics(&s, Policy::MaxRsrp, 2000, 5).unwrap();
        let r = compare(Policy::MaxRsrp, &analytic, &report);
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.metric == "assoc|tier=F"));
        let clean = compare(Policy::MaxRsrp, &analytic_metrics(&s, Policy::MaxRsrp).unwrap(), &report);
        assert!(clean.checks.iter().any(|c| c.metric == "assoc|tier=F" && c.pass));
    }

    #[test]
    fn tiny_runs_flag_low_power() {
        let r = cross_validate(&small(), Policy::MaxRsrp, 10, 1).unwrap();
        assert!(r.low_power());
        assert!(r.passed());
    }
}
