//! Maximal-RSRP association: association probabilities, per-tier success
//! probabilities and ergodic rates.

use crate::config::Scenario;
use crate::error::Result;
use crate::numerics::{
    rho, rho_closed_form_alpha4, truncated_integral, FeedbackCoefficients, QuadratureSpec,
    TruncatedIntegral,
};

/// Densities, powers and bias of the two tiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTier {
    pub lambda_f: f64,
    pub lambda_r: f64,
    pub p_f: f64,
    pub p_r: f64,
    pub alpha: f64,
    /// Distance bias; the RSRP-maximizing value is `(P_R/P_F)^(1/alpha)`.
    pub k: f64,
}

impl TwoTier {
    pub fn from_scenario(s: &Scenario) -> Self {
        let n = s.network();
        Self {
            lambda_f: n.lambda_f,
            lambda_r: n.lambda_r,
            p_f: n.p_f,
            p_r: n.p_r,
            alpha: n.alpha,
            k: s.k(),
        }
    }

    fn biased_rrh_density(&self) -> f64 {
        self.k * self.k * self.lambda_r
    }
}

/// `A_F = lambda_F / (lambda_F + k^2 lambda_R)`, `A_R = 1 - A_F`.
pub fn assoc_prob_max_rsrp(lambda_f: f64, lambda_r: f64, k: f64) -> (f64, f64) {
    let a_f = lambda_f / (lambda_f + k * k * lambda_r);
    (a_f, 1.0 - a_f)
}

fn fap_form(delta: f64, t: &TwoTier, rho: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if delta == 0.0 {
        return Ok(1.0);
    }
    let kr = t.biased_rrh_density();
    let cross = delta * t.p_r / (t.k.powf(t.alpha) * t.p_f);
    Ok((t.lambda_f + kr) / (t.lambda_f * (1.0 + rho(delta)?) + kr * (1.0 + rho(cross)?)))
}

fn rrh_form(
    delta: f64,
    t: &TwoTier,
    fb: FeedbackCoefficients,
    rho: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    if delta == 0.0 {
        return Ok(1.0);
    }
    let kr = t.biased_rrh_density();
    let d1 = delta * t.k.powf(t.alpha) * t.p_f / (fb.zeta * t.p_r);
    let d2 = fb.upsilon * delta / fb.zeta;
    Ok((t.lambda_f + kr) / (t.lambda_f * (1.0 + rho(d1)?) + kr * (1.0 + rho(d2)?)))
}

/// Success probability of a user served by its F-AP, interference-limited.
pub fn success_prob_fap_max_rsrp(delta: f64, tiers: &TwoTier) -> Result<f64> {
    fap_form(delta, tiers, |d| rho(d, tiers.alpha))
}

/// Success probability of a user served by its RRH under limited feedback.
pub fn success_prob_rrh_max_rsrp(
    delta: f64,
    tiers: &TwoTier,
    fb: FeedbackCoefficients,
) -> Result<f64> {
    rrh_form(delta, tiers, fb, |d| rho(d, tiers.alpha))
}

/// Path-loss exponent 4 specialisation written with arctangents.
pub fn success_prob_fap_alpha4(delta: f64, tiers: &TwoTier) -> f64 {
    fap_form(delta, tiers, |d| Ok(rho_closed_form_alpha4(d))).expect("closed form is total")
}

pub fn success_prob_rrh_alpha4(delta: f64, tiers: &TwoTier, fb: FeedbackCoefficients) -> f64 {
    rrh_form(delta, tiers, fb, |d| Ok(rho_closed_form_alpha4(d))).expect("closed form is total")
}

/// Per-tier conditional success probabilities and their association-weighted sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRsrpSuccess {
    pub total: f64,
    pub fap: f64,
    pub rrh: f64,
    pub a_f: f64,
    pub a_r: f64,
}

pub fn success_prob_max_rsrp(delta: f64, scenario: &Scenario) -> Result<MaxRsrpSuccess> {
    let t = TwoTier::from_scenario(scenario);
    let (a_f, a_r) = assoc_prob_max_rsrp(t.lambda_f, t.lambda_r, t.k);
    let fap = success_prob_fap_max_rsrp(delta, &t)?;
    let rrh = success_prob_rrh_max_rsrp(delta, &t, scenario.feedback())?;
    Ok(MaxRsrpSuccess {
        total: a_f * fap + a_r * rrh,
        fap,
        rrh,
        a_f,
        a_r,
    })
}

/// Integral of `S(2^t - 1)` over `t >= 0`; `S` decays like `2^(-2t/alpha)`.
pub fn rate_integral(
    alpha: f64,
    spec: &QuadratureSpec,
    mut success: impl FnMut(f64) -> Result<f64>,
) -> Result<TruncatedIntegral> {
    let mut failure = None;
    let decay = 2.0 * std::f64::consts::LN_2 / alpha;
    let out = truncated_integral(
        |t| match success(t.exp2() - 1.0) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        decay,
        spec,
    );
    match failure {
        Some(e) => Err(e),
        None => out,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRsrpRate {
    /// Association-weighted mean rate (bits/s/Hz).
    pub rate: f64,
    /// Mean rate of users served by F-APs.
    pub fap: TruncatedIntegral,
    /// Mean rate of users served by RRHs.
    pub rrh: TruncatedIntegral,
    pub a_f: f64,
    pub a_r: f64,
}

pub fn ergodic_rate_max_rsrp(scenario: &Scenario, spec: &QuadratureSpec) -> Result<MaxRsrpRate> {
    let t = TwoTier::from_scenario(scenario);
    let fb = scenario.feedback();
    let (a_f, a_r) = assoc_prob_max_rsrp(t.lambda_f, t.lambda_r, t.k);
    let fap = rate_integral(t.alpha, spec, |d| success_prob_fap_max_rsrp(d, &t))?;
    let rrh = rate_integral(t.alpha, spec, |d| success_prob_rrh_max_rsrp(d, &t, fb))?;
    Ok(MaxRsrpRate {
        rate: a_f * fap.value + a_r * rrh.value,
        fap,
        rrh,
        a_f,
        a_r,
    })
}
