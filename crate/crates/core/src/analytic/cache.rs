/// Zipf request probabilities `f_i = i^-tau / sum_j j^-tau`, `i = 1..=n`.
pub fn zipf_popularity(tau: f64, n: usize) -> Vec<f64> {
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-tau)).collect();
    let total = crate::numerics::neumaier_sum(weights.iter().copied());
    weights.into_iter().map(|w| w / total).collect()
}

/// Probability that the request falls in the `m` most popular contents.
pub fn cache_hit_probability(m: usize, tau: f64, n: usize) -> f64 {
    if m >= n {
        return 1.0;
    }
    let pop = zipf_popularity(tau, n);
    crate::numerics::neumaier_sum(pop[..m].iter().copied()).min(1.0)
}
