//! Minimal-delay association: SINR thresholds from deadlines, per-tier
//! success terms, association probabilities, the load/threshold equilibrium
//! and the resulting rate and latency.

use super::latency::{delivery_latency_bs, link_latencies, LinkLatencies, LinkPolicy, TierLoads};
use super::max_rsrp::{ergodic_rate_max_rsrp, MaxRsrpRate};
use crate::config::{NoiseForm, Scenario, ThresholdMapping};
use crate::error::{Error, Result, ThresholdViolation};
use crate::numerics::{
    interference_constant, semi_infinite_quadrature, truncated_integral, integrate,
    FeedbackCoefficients, QuadratureSpec, TruncatedIntegral,
};
use crate::tier::Tier;

/// SINR thresholds of the three minimal-delay classes, after mapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrThresholds {
    pub eta_fc: f64,
    pub eta_ftc: f64,
    pub eta_r: f64,
}

impl SinrThresholds {
    pub fn uniform(eta: f64) -> Self {
        Self {
            eta_fc: eta,
            eta_ftc: eta,
            eta_r: eta,
        }
    }

    pub fn get(&self, tier: Tier) -> f64 {
        match tier {
            Tier::FapCached => self.eta_fc,
            Tier::FapUncached => self.eta_ftc,
            Tier::Rrh => self.eta_r,
            Tier::Fap => self.eta_fc.min(self.eta_ftc),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.eta_fc, self.eta_ftc, self.eta_r]
    }
}

pub fn map_threshold(eta: f64, mapping: ThresholdMapping) -> f64 {
    match mapping {
        ThresholdMapping::Direct => eta,
        ThresholdMapping::Shannon => eta.exp2() - 1.0,
    }
}

/// Deadlines `[beta_Fc, beta_Ftc, beta_R]` of a scenario.
pub fn deadlines(scenario: &Scenario) -> [f64; 3] {
    let t = scenario.traffic();
    [t.beta_fc, t.beta_ftc, t.beta_r]
}

fn raw_threshold(load: f64, xi: f64, l: f64, beta: f64, link: f64) -> f64 {
    if beta <= link {
        f64::INFINITY
    } else {
        load * xi * l + l / (beta - link)
    }
}

/// `eta_Fc = N_Fc xi L + L/beta_Fc`, `eta_Ftc = N_Ftc xi L + L/(beta_Ftc - D_back)`,
/// `eta_R = N_R xi L + L/(beta_R - D_front)`, then mapped to SINR thresholds.
pub fn min_delay_thresholds(
    loads: &TierLoads,
    betas: [f64; 3],
    links: &LinkLatencies,
    content_length: f64,
    xi: f64,
    mapping: ThresholdMapping,
) -> Result<SinrThresholds> {
    if betas[1] <= links.d_back {
        return Err(Error::DeadlineInfeasible {
            tier: Tier::FapUncached,
            deadline: betas[1],
            link_latency: links.d_back,
        });
    }
    if betas[2] <= links.d_front {
        return Err(Error::DeadlineInfeasible {
            tier: Tier::Rrh,
            deadline: betas[2],
            link_latency: links.d_front,
        });
    }
    let l = content_length;
    Ok(SinrThresholds {
        eta_fc: map_threshold(raw_threshold(loads.n_fc, xi, l, betas[0], 0.0), mapping),
        eta_ftc: map_threshold(raw_threshold(loads.n_ftc, xi, l, betas[1], links.d_back), mapping),
        eta_r: map_threshold(raw_threshold(loads.n_r, xi, l, betas[2], links.d_front), mapping),
    })
}

/// Densities `[p lambda_F, (1-p) lambda_F, lambda_R]`.
pub fn class_densities(scenario: &Scenario, p_hit: f64) -> [f64; 3] {
    let n = scenario.network();
    [p_hit * n.lambda_f, (1.0 - p_hit) * n.lambda_f, n.lambda_r]
}

/// Thresholds that allow a user to meet more than one serving condition.
pub fn threshold_violations(
    thresholds: &SinrThresholds,
    fb: FeedbackCoefficients,
    densities: [f64; 3],
) -> Vec<ThresholdViolation> {
    let bounds = [1.0, 1.0, fb.zeta / fb.upsilon];
    Tier::MIN_DELAY
        .iter()
        .zip(thresholds.to_array())
        .zip(bounds)
        .zip(densities)
        .filter(|(((_, eta), bound), lambda)| *lambda > 0.0 && !(eta > bound))
        .map(|(((tier, threshold), bound), _)| ThresholdViolation {
            tier: *tier,
            threshold,
            bound,
        })
        .collect()
}

/// Per-class success terms; their sum is the success probability.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinDelayTerms {
    pub s_fc: f64,
    pub s_ftc: f64,
    pub s_r: f64,
}

impl MinDelayTerms {
    pub fn total(&self) -> f64 {
        self.s_fc + self.s_ftc + self.s_r
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s_fc, self.s_ftc, self.s_r]
    }

    pub fn get(&self, tier: Tier) -> f64 {
        match tier {
            Tier::FapCached => self.s_fc,
            Tier::FapUncached => self.s_ftc,
            Tier::Rrh => self.s_r,
            Tier::Fap => self.s_fc + self.s_ftc,
        }
    }
}

/// Interference-limited coefficients `c_j` with `S_j = c_j eta_j^(-2/alpha)`.
pub fn il_coefficients(scenario: &Scenario, p_hit: f64) -> Result<[f64; 3]> {
    let n = scenario.network();
    let fb = scenario.feedback();
    let c = interference_constant(n.alpha)?;
    let e = 2.0 / n.alpha;
    let lam = class_densities(scenario, p_hit);
    let pf = n.p_f.powf(e);
    let all = n.lambda_f * pf + n.lambda_r * n.p_r.powf(e);
    let rrh_view = n.lambda_r * (fb.upsilon * n.p_r).powf(e) + n.lambda_f * pf;
    Ok([
        lam[0] * pf / (c * all),
        lam[1] * pf / (c * all),
        lam[2] * (fb.zeta * n.p_r).powf(e) / (c * rrh_view),
    ])
}

fn il_term(coef: f64, eta: f64, alpha: f64) -> f64 {
    if coef == 0.0 {
        0.0
    } else {
        coef * eta.powf(-2.0 / alpha)
    }
}

/// Interference-limited per-class terms without the assumption check.
pub fn min_delay_terms_il(
    thresholds: &SinrThresholds,
    scenario: &Scenario,
    p_hit: f64,
) -> Result<MinDelayTerms> {
    let c = il_coefficients(scenario, p_hit)?;
    let a = scenario.network().alpha;
    Ok(MinDelayTerms {
        s_fc: il_term(c[0], thresholds.eta_fc, a),
        s_ftc: il_term(c[1], thresholds.eta_ftc, a),
        s_r: il_term(c[2], thresholds.eta_r, a),
    })
}

fn check(
    thresholds: &SinrThresholds,
    scenario: &Scenario,
    p_hit: f64,
) -> Result<()> {
    let v = threshold_violations(thresholds, scenario.feedback(), class_densities(scenario, p_hit));
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::ThresholdAssumption(v))
    }
}

/// Interference-limited success probability and its per-class terms.
pub fn success_prob_min_delay_il(
    thresholds: &SinrThresholds,
    scenario: &Scenario,
    p_hit: f64,
) -> Result<MinDelayTerms> {
    check(thresholds, scenario, p_hit)?;
    min_delay_terms_il(thresholds, scenario, p_hit)
}

/// `int_0^inf 2 pi lambda r exp(-a r^2) exp(-c r^alpha) dr`, evaluated after
/// `x = a r^2` as `(pi lambda / a) int_0^inf e^-x exp(-c (x/a)^(alpha/2)) dx`.
fn noisy_term(
    lambda: f64,
    a: f64,
    c: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if lambda == 0.0 || a.is_infinite() {
        return Ok(0.0);
    }
    if a == 0.0 {
        return Ok(f64::INFINITY);
    }
    let q = semi_infinite_quadrature(
        |x| (-x - c * (x / a).powf(alpha / 2.0)).exp(),
        0.0,
        spec,
    )?;
    Ok(std::f64::consts::PI * lambda / a * q.value)
}

/// Per-class terms including noise, without the assumption check.
pub fn min_delay_terms_general(
    thresholds: &SinrThresholds,
    scenario: &Scenario,
    p_hit: f64,
    sigma2: f64,
    noise_form: NoiseForm,
    spec: &QuadratureSpec,
) -> Result<MinDelayTerms> {
    let n = scenario.network();
    let fb = scenario.feedback();
    let cst = interference_constant(n.alpha)?;
    let e = 2.0 / n.alpha;
    let lam = class_densities(scenario, p_hit);
    let all = n.lambda_f * n.p_f.powf(e) + n.lambda_r * n.p_r.powf(e);
    let rrh_view = n.lambda_r * (fb.upsilon * n.p_r).powf(e) + n.lambda_f * n.p_f.powf(e);
    let zeta_pr = fb.zeta * n.p_r;
    let a_of = |eta: f64, power: f64, sum: f64| {
        std::f64::consts::PI * (eta / power).powf(e) * cst * sum
    };
    let rrh_noise = thresholds.eta_r * sigma2 / zeta_pr;
    let fap_noise = |eta: f64| match noise_form {
        NoiseForm::PerTier => eta * sigma2 / n.p_f,
        NoiseForm::Literal => rrh_noise,
    };
    Ok(MinDelayTerms {
        s_fc: noisy_term(
            lam[0],
            a_of(thresholds.eta_fc, n.p_f, all),
            fap_noise(thresholds.eta_fc),
            n.alpha,
            spec,
        )?,
        s_ftc: noisy_term(
            lam[1],
            a_of(thresholds.eta_ftc, n.p_f, all),
            fap_noise(thresholds.eta_ftc),
            n.alpha,
            spec,
        )?,
        s_r: noisy_term(
            lam[2],
            a_of(thresholds.eta_r, zeta_pr, rrh_view),
            rrh_noise,
            n.alpha,
            spec,
        )?,
    })
}

/// Success probability with noise power `sigma2`.
pub fn success_prob_min_delay_general(
    thresholds: &SinrThresholds,
    scenario: &Scenario,
    p_hit: f64,
    sigma2: f64,
    noise_form: NoiseForm,
    spec: &QuadratureSpec,
) -> Result<MinDelayTerms> {
    check(thresholds, scenario, p_hit)?;
    min_delay_terms_general(thresholds, scenario, p_hit, sigma2, noise_form, spec)
}

/// `A_j = S_j / sum S`.
pub fn assoc_prob_min_delay(terms: &MinDelayTerms) -> Result<[f64; 3]> {
    let total = terms.total();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegenerateAssociation);
    }
    Ok(terms.to_array().map(|s| s / total))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDelayRate {
    pub integral: TruncatedIntegral,
    /// Below this `t` the common threshold `2^t - 1` breaks the
    /// single-serving-node assumption; the integrand is used as written there.
    pub assumption_boundary: f64,
}

/// `int_0^inf S(2^t - 1) dt` with every class threshold set to `2^t - 1`.
pub fn ergodic_rate_min_delay(
    scenario: &Scenario,
    p_hit: f64,
    spec: &QuadratureSpec,
) -> Result<MinDelayRate> {
    let alpha = scenario.network().alpha;
    let coef = il_coefficients(scenario, p_hit)?;
    let k: f64 = coef.iter().sum();
    let s = |t: f64| k * (t.exp2() - 1.0).powf(-2.0 / alpha);
    // S ~ t^(-2/alpha) at the origin; t = w^m with m = alpha/(alpha-2) removes it.
    let m = alpha / (alpha - 2.0);
    let head = integrate(
        |w| {
            if w <= 0.0 {
                return 0.0;
            }
            let t = w.powf(m);
            m * w.powf(m - 1.0) * s(t)
        },
        0.0,
        1.0,
        spec,
    )?;
    let tail = truncated_integral(|t| s(t + 1.0), 2.0 * std::f64::consts::LN_2 / alpha, spec)?;
    let fb = scenario.feedback();
    Ok(MinDelayRate {
        integral: TruncatedIntegral {
            value: head.value + tail.value,
            error: head.error + tail.error,
            truncation_point: tail.truncation_point + 1.0,
            tail: tail.tail,
        },
        assumption_boundary: (1.0 + (fb.zeta / fb.upsilon).max(1.0)).log2(),
    })
}

/// Self-consistent association, loads, link latencies and thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct MinDelayEquilibrium {
    /// `[A_Fc, A_Ftc, A_R]`.
    pub assoc: [f64; 3],
    pub loads: TierLoads,
    pub links: LinkLatencies,
    /// Mapped SINR thresholds; infinite for a class whose deadline is infeasible.
    pub thresholds: SinrThresholds,
    pub terms: MinDelayTerms,
    pub residual: f64,
    pub iterations: usize,
    /// Classes whose deadline cannot be met at the equilibrium load.
    pub infeasible: Vec<Tier>,
    pub violations: Vec<ThresholdViolation>,
}

struct ClassModel<'a> {
    scenario: &'a Scenario,
    lam: [f64; 3],
    coef: [f64; 3],
    universe: f64,
    spec: QuadratureSpec,
}

impl ClassModel<'_> {
    fn link(&self, j: usize, a: f64) -> f64 {
        let t = self.scenario.traffic();
        let l = self.scenario.cache().content_length;
        let computed = t.d * a * self.universe * t.xi * l;
        match j {
            0 => 0.0,
            1 => t.d_back_override.unwrap_or(computed),
            _ => t.d_front_override.unwrap_or(computed),
        }
    }

    fn load(&self, j: usize, a: f64) -> f64 {
        if self.lam[j] > 0.0 {
            a * self.scenario.traffic().lambda_u / self.lam[j]
        } else {
            0.0
        }
    }

    fn threshold(&self, j: usize, a: f64) -> f64 {
        let t = self.scenario.traffic();
        let l = self.scenario.cache().content_length;
        let beta = deadlines(self.scenario)[j];
        let raw = raw_threshold(self.load(j, a), t.xi, l, beta, self.link(j, a));
        map_threshold(raw, self.scenario.simulation().mapping)
    }

    fn term(&self, j: usize, a: f64) -> f64 {
        if self.lam[j] == 0.0 {
            return 0.0;
        }
        let eta = self.threshold(j, a);
        if eta.is_infinite() {
            return 0.0;
        }
        let n = self.scenario.network();
        if n.sigma2 == 0.0 {
            return il_term(self.coef[j], eta, n.alpha);
        }
        let th = SinrThresholds::uniform(eta);
        let p = self.scenario.hit_probability();
        min_delay_terms_general(&th, self.scenario, p, n.sigma2, NoiseForm::PerTier, &self.spec)
            .map(|t| t.to_array()[j])
            .unwrap_or(0.0)
    }

    /// Solve `a T = s_j(a)` on `[0, 1]`; the left side increases and the
    /// right side does not, so the root is unique.
    fn share(&self, j: usize, t: f64) -> f64 {
        if self.term(j, 0.0) == 0.0 {
            return 0.0;
        }
        if self.term(j, 1.0) >= t {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid * t < self.term(j, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Resolve the load/threshold coupling.
///
/// Each class term depends only on that class's own association probability
/// and does not increase with it. For a normaliser `T` every class solves
/// `A_j T = S_j(A_j)` by bisection, and `T` is bisected (in log scale) until
/// the shares sum to one.
pub fn solve_min_delay_equilibrium(scenario: &Scenario) -> Result<MinDelayEquilibrium> {
    const OUTER: usize = 200;
    let n = scenario.network();
    let p = scenario.hit_probability();
    let model = ClassModel {
        scenario,
        lam: class_densities(scenario, p),
        coef: il_coefficients(scenario, p)?,
        universe: scenario.traffic().lambda_u * n.disc_area(),
        spec: QuadratureSpec {
            relative_tolerance: 1e-10,
            ..QuadratureSpec::default()
        },
    };
    let at_zero: Vec<f64> = (0..3).map(|j| model.term(j, 0.0)).collect();
    let hi0: f64 = at_zero.iter().sum();
    if !(hi0 > 0.0) {
        return Err(Error::DegenerateAssociation);
    }
    let full: f64 = (0..3).map(|j| model.term(j, 1.0)).fold(0.0, f64::max);
    let (mut lo, mut hi) = (full.max(1e-300).ln(), hi0.ln());
    let sum_at = |t: f64| -> f64 { (0..3).map(|j| model.share(j, t)).sum() };
    let mut iterations = 0;
    if hi > lo {
        for _ in 0..OUTER {
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            if sum_at(mid.exp()) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
    }
    let t = (0.5 * (lo + hi)).exp();
    let mut assoc = [model.share(0, t), model.share(1, t), model.share(2, t)];
    let total: f64 = assoc.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateAssociation);
    }
    for a in &mut assoc {
        *a /= total;
    }
    let terms = MinDelayTerms {
        s_fc: model.term(0, assoc[0]),
        s_ftc: model.term(1, assoc[1]),
        s_r: model.term(2, assoc[2]),
    };
    let implied = assoc_prob_min_delay(&terms)?;
    let residual = assoc
        .iter()
        .zip(implied)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if residual > 1e-6 {
        return Err(Error::EquilibriumNonConvergence {
            iterations,
            residual,
        });
    }
    let loads = TierLoads::min_delay(scenario, assoc);
    let links = link_latencies(scenario, &loads, LinkPolicy::MinDelay);
    let thresholds = SinrThresholds {
        eta_fc: model.threshold(0, assoc[0]),
        eta_ftc: model.threshold(1, assoc[1]),
        eta_r: model.threshold(2, assoc[2]),
    };
    let infeasible = Tier::MIN_DELAY
        .iter()
        .zip(thresholds.to_array())
        .zip(model.lam)
        .filter(|((_, eta), lam)| *lam > 0.0 && eta.is_infinite())
        .map(|((tier, _), _)| *tier)
        .collect();
    let violations = threshold_violations(&thresholds, scenario.feedback(), model.lam);
    Ok(MinDelayEquilibrium {
        assoc,
        loads,
        links,
        thresholds,
        terms,
        residual,
        iterations,
        infeasible,
        violations,
    })
}

/// Inputs of the minimal-delay average latency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDelayLatencyInputs {
    pub assoc: [f64; 3],
    pub rate_f: f64,
    pub rate_r: f64,
    pub loads: TierLoads,
    pub links: LinkLatencies,
}

/// `A_Fc L/(E[R_F]-rho'_Fc) + A_Ftc (L/(E[R_F]-rho'_Ftc) + D_back)
///  + A_R (L/(E[R_R]-rho'_R) + D_front)`.
pub fn min_delay_latency(scenario: &Scenario, inp: &MinDelayLatencyInputs) -> Result<f64> {
    let l = scenario.cache().content_length;
    let xi = scenario.traffic().xi;
    let parts = [
        (Tier::FapCached, inp.rate_f, 0.0),
        (Tier::FapUncached, inp.rate_f, inp.links.d_back),
        (Tier::Rrh, inp.rate_r, inp.links.d_front),
    ];
    let mut total = 0.0;
    for ((tier, rate, link), a) in parts.into_iter().zip(inp.assoc) {
        if a > 0.0 {
            let q = delivery_latency_bs(rate, inp.loads.rho_prime(tier, xi, l), l, tier)?;
            total += a * (q + link);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinDelayLatency {
    pub latency: f64,
    pub equilibrium: MinDelayEquilibrium,
    pub rates: MaxRsrpRate,
}

/// Average latency at the equilibrium. The per-tier mean rates are those of
/// users served by each tier under the rate analysis of maximal RSRP.
pub fn avg_delivery_latency_min_delay(
    scenario: &Scenario,
    spec: &QuadratureSpec,
) -> Result<MinDelayLatency> {
    let equilibrium = solve_min_delay_equilibrium(scenario)?;
    let rates = ergodic_rate_max_rsrp(scenario, spec)?;
    let latency = min_delay_latency(
        scenario,
        &MinDelayLatencyInputs {
            assoc: equilibrium.assoc,
            rate_f: rates.fap.value,
            rate_r: rates.rrh.value,
            loads: equilibrium.loads,
            links: equilibrium.links,
        },
    )?;
    Ok(MinDelayLatency {
        latency,
        equilibrium,
        rates,
    })
}
