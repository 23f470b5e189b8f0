use crate::error::Error;
use crate::tier::Tier;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            std_error: 0.0,
            n: 0,
        }
    }

    /// Mean and standard error of the mean from running sums.
    pub fn from_sums(sum: f64, sum_sq: f64, n: usize) -> Self {
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_error: f64::NAN,
                n,
            };
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / nf).sqrt(),
            n,
        }
    }

    pub fn from_samples(values: &[f64]) -> Self {
        let sum: f64 = values.iter().sum();
        let sum_sq: f64 = values.iter().map(|v| v * v).sum();
        Self::from_sums(sum, sum_sq, values.len())
    }

    pub fn ci95(&self) -> (f64, f64) {
        let h = 1.96 * self.std_error;
        (self.mean - h, self.mean + h)
    }

    /// Number of standard errors separating the estimate from `value`.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Why a metric has no value.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// A queue is at or past capacity; the metric is unbounded.
    pub unstable: bool,
    pub message: String,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        Self {
            unstable: matches!(e, Error::Unstable { .. }),
            message: e.to_string(),
        }
    }
}

/// Monte Carlo estimates for one scenario and policy.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// `(threshold, P(SINR > threshold))` for each requested threshold.
    pub success_probability: Vec<(f64, Estimate)>,
    /// Minimal delay only: probability that some node meets its class threshold.
    pub deadline_success: Option<Estimate>,
    pub ergodic_rate: Estimate,
    /// Average delivery latency, or the reason it is undefined.
    pub delivery_latency: Result<Estimate, Failure>,
    pub association_fractions: Vec<(Tier, Estimate)>,
    /// Expected number of nodes of each class meeting their threshold.
    pub tier_terms: Vec<(Tier, Estimate)>,
    /// Mean rate of users served by each tier.
    pub tier_rates: Vec<(Tier, Estimate)>,
    /// Mean of `log2(1 + max SINR)` over all nodes.
    pub peak_rate: Estimate,
    pub n_realizations: usize,
    /// Realizations served by each tier.
    pub tier_counts: Vec<(Tier, usize)>,
}

impl MetricsReport {
    pub fn association(&self, tier: Tier) -> Option<Estimate> {
        lookup(&self.association_fractions, tier)
    }

    pub fn tier_term(&self, tier: Tier) -> Option<Estimate> {
        lookup(&self.tier_terms, tier)
    }

    pub fn tier_rate(&self, tier: Tier) -> Option<Estimate> {
        lookup(&self.tier_rates, tier)
    }

    pub fn success_at(&self, threshold: f64) -> Option<Estimate> {
        self.success_probability
            .iter()
            .find(|(t, _)| *t == threshold)
            .map(|(_, e)| *e)
    }
}

fn lookup(items: &[(Tier, Estimate)], tier: Tier) -> Option<Estimate> {
    items.iter().find(|(t, _)| *t == tier).map(|(_, e)| *e)
}
