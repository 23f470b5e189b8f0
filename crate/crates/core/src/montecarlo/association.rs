//! SINR evaluation and user association inside one realization.

use super::scene::{Node, Realization};
use crate::analytic::{solve_min_delay_equilibrium, LinkLatencies, MinDelayEquilibrium};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::numerics::FeedbackCoefficients;
use crate::tier::Tier;

/// Association rule applied by the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    MaxRsrp,
    MinDelay,
    /// Nearest F-AP holding the content within `radius`, else nearest RRH.
    ClusterMaxCacheHit { radius: f64 },
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::MaxRsrp => "max_rsrp",
            Policy::MinDelay => "min_delay",
            Policy::ClusterMaxCacheHit { .. } => "cluster",
        }
    }
}

/// Expected network state the minimal-delay rule works against.
#[derive(Debug, Clone, PartialEq)]
pub struct MinDelayState {
    /// SINR thresholds `[Fc, Ftc, R]`.
    pub thresholds: [f64; 3],
    /// Offered traffic `N xi L` per BS of each class.
    pub rho_prime: [f64; 3],
    pub links: LinkLatencies,
    pub content_length: f64,
    pub equilibrium: MinDelayEquilibrium,
}

impl MinDelayState {
    pub fn from_scenario(scenario: &Scenario) -> Result<Self> {
        let eq = solve_min_delay_equilibrium(scenario)?;
        Ok(Self::from_equilibrium(scenario, eq))
    }

    pub fn from_equilibrium(scenario: &Scenario, eq: MinDelayEquilibrium) -> Self {
        let l = scenario.cache().content_length;
        let xi = scenario.traffic().xi;
        let rho_prime = Tier::MIN_DELAY.map(|t| eq.loads.rho_prime(t, xi, l));
        Self {
            thresholds: eq.thresholds.to_array(),
            rho_prime,
            links: eq.links,
            content_length: l,
            equilibrium: eq,
        }
    }

    fn link(&self, class: usize) -> f64 {
        match class {
            0 => 0.0,
            1 => self.links.d_back,
            _ => self.links.d_front,
        }
    }

    /// Expected delay through one BS of `class` whose SINR is `sinr`.
    pub fn delay(&self, class: usize, sinr: f64) -> f64 {
        let margin = (1.0 + sinr).log2() - self.rho_prime[class];
        if margin <= 0.0 {
            f64::INFINITY
        } else {
            self.content_length / margin + self.link(class)
        }
    }
}

/// Scenario-specific state needed by [`associate`].
#[derive(Debug, Clone, PartialEq)]
pub enum PolicyState {
    MaxRsrp,
    MinDelay(Box<MinDelayState>),
    ClusterMaxCacheHit { radius: f64 },
}

impl PolicyState {
    pub fn new(policy: Policy, scenario: &Scenario) -> Result<Self> {
        Ok(match policy {
            Policy::MaxRsrp => PolicyState::MaxRsrp,
            Policy::MinDelay => PolicyState::MinDelay(Box::new(MinDelayState::from_scenario(scenario)?)),
            Policy::ClusterMaxCacheHit { radius } => PolicyState::ClusterMaxCacheHit { radius },
        })
    }
}

/// Received powers and their tier sums at the typical user.
#[derive(Debug, Clone)]
pub struct Interference {
    pub fap: Vec<f64>,
    pub rrh: Vec<f64>,
    pub sum_fap: f64,
    pub sum_rrh: f64,
    pub sigma2: f64,
    pub feedback: FeedbackCoefficients,
}

fn powers(nodes: &[Node], p: f64, alpha: f64) -> Vec<f64> {
    nodes.iter().map(|n| p * n.gain * n.pos.r.powf(-alpha)).collect()
}

impl Interference {
    pub fn new(real: &Realization, scenario: &Scenario, feedback: FeedbackCoefficients) -> Self {
        let n = scenario.network();
        let fap = powers(&real.fap, n.p_f, n.alpha);
        let rrh = powers(&real.rrh, n.p_r, n.alpha);
        Self {
            sum_fap: fap.iter().sum(),
            sum_rrh: rrh.iter().sum(),
            fap,
            rrh,
            sigma2: n.sigma2,
            feedback,
        }
    }

    /// Interference from all other nodes, summed directly rather than by
    /// subtracting from the tier total, so a dominant signal cannot cancel.
    fn others(values: &[f64], skip: usize) -> f64 {
        values
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| v)
            .sum()
    }

    /// `P_F h r^-alpha / (I_F' + I_R + sigma^2)`.
    pub fn sinr_fap(&self, index: usize) -> f64 {
        self.fap[index] / (Self::others(&self.fap, index) + self.sum_rrh + self.sigma2)
    }

    /// `zeta P_R h r^-alpha / (I_F + upsilon I_R' + sigma^2)`.
    pub fn sinr_rrh(&self, index: usize) -> f64 {
        let fb = self.feedback;
        fb.zeta * self.rrh[index]
            / (self.sum_fap + fb.upsilon * Self::others(&self.rrh, index) + self.sigma2)
    }

    /// Cheap SINR through the tier totals, used to screen candidates.
    fn approx_fap(&self, index: usize) -> f64 {
        let i = (self.sum_fap - self.fap[index]).max(0.0);
        self.fap[index] / (i + self.sum_rrh + self.sigma2)
    }

    fn approx_rrh(&self, index: usize) -> f64 {
        let fb = self.feedback;
        let i = (self.sum_rrh - self.rrh[index]).max(0.0);
        fb.zeta * self.rrh[index] / (self.sum_fap + fb.upsilon * i + self.sigma2)
    }
}

pub fn sinr_fap(real: &Realization, scenario: &Scenario, feedback: FeedbackCoefficients, index: usize) -> f64 {
    Interference::new(real, scenario, feedback).sinr_fap(index)
}

pub fn sinr_rrh(real: &Realization, scenario: &Scenario, feedback: FeedbackCoefficients, index: usize) -> f64 {
    Interference::new(real, scenario, feedback).sinr_rrh(index)
}

/// Serving node chosen for the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association {
    pub tier: Tier,
    pub index: usize,
    pub sinr: f64,
    /// Minimal delay: whether the serving node meets its class threshold.
    /// Always true for the other rules.
    pub met: bool,
}

/// Outcome of scanning every node against the minimal-delay thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDelayScan {
    /// Nodes of each class `[Fc, Ftc, R]` whose SINR exceeds the class threshold.
    pub counts: [usize; 3],
    pub association: Option<Association>,
}

/// Largest SINR over every node of either tier.
pub fn peak_sinr(intf: &Interference) -> f64 {
    let best_f = (0..intf.fap.len()).map(|i| intf.approx_fap(i)).enumerate().fold(None, argmax);
    let best_r = (0..intf.rrh.len()).map(|i| intf.approx_rrh(i)).enumerate().fold(None, argmax);
    let f = best_f.map_or(0.0, |(i, _)| intf.sinr_fap(i));
    let r = best_r.map_or(0.0, |(i, _)| intf.sinr_rrh(i));
    f.max(r)
}

fn argmax(best: Option<(usize, f64)>, item: (usize, f64)) -> Option<(usize, f64)> {
    match best {
        Some(b) if b.1 >= item.1 => Some(b),
        _ => Some(item),
    }
}

pub fn scan_min_delay(real: &Realization, intf: &Interference, state: &MinDelayState) -> MinDelayScan {
    let mut counts = [0usize; 3];
    // (delay, distance, sinr, tier, index)
    let mut best: Option<(f64, f64, f64, Tier, usize)> = None;
    let mut consider = |class: usize, tier: Tier, index: usize, dist: f64, approx: f64, exact: &dyn Fn() -> f64| {
        // The screening SINR never exceeds the exact one by more than rounding,
        // so only near-threshold nodes pay for the exact sum.
        let th = state.thresholds[class];
        if approx < th * (1.0 - 1e-9) {
            return;
        }
        let sinr = exact();
        if sinr <= th {
            return;
        }
        counts[class] += 1;
        let d = state.delay(class, sinr);
        let better = match best {
            None => true,
            Some((bd, br, _, _, _)) => d < bd || (d == bd && dist < br),
        };
        if better {
            best = Some((d, dist, sinr, tier, index));
        }
    };
    for i in 0..real.fap.len() {
        let (class, tier) = if real.fap_hit[i] {
            (0, Tier::FapCached)
        } else {
            (1, Tier::FapUncached)
        };
        consider(class, tier, i, real.fap[i].pos.r, intf.approx_fap(i), &|| intf.sinr_fap(i));
    }
    for i in 0..real.rrh.len() {
        consider(2, Tier::Rrh, i, real.rrh[i].pos.r, intf.approx_rrh(i), &|| intf.sinr_rrh(i));
    }
    MinDelayScan {
        counts,
        association: best.map(|(_, _, sinr, tier, index)| Association {
            tier,
            index,
            sinr,
            met: true,
        }),
    }
}

/// Maximal-RSRP choice between the nearest F-AP and the nearest RRH.
pub fn associate_max_rsrp(real: &Realization, intf: &Interference, k: f64) -> Result<Association> {
    let f = real.nearest_fap();
    let r = real.nearest_rrh();
    let use_fap = match (f, r) {
        (None, None) => return Err(Error::EmptyScene),
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (Some(f), Some(r)) => real.rrh[r].pos.r >= k * real.fap[f].pos.r,
    };
    Ok(if use_fap {
        let i = f.expect("checked");
        Association {
            tier: Tier::Fap,
            index: i,
            sinr: intf.sinr_fap(i),
            met: true,
        }
    } else {
        let i = r.expect("checked");
        Association {
            tier: Tier::Rrh,
            index: i,
            sinr: intf.sinr_rrh(i),
            met: true,
        }
    })
}

pub fn associate_cluster(real: &Realization, intf: &Interference, radius: f64) -> Result<Association> {
    if let Some(i) = real.nearest_hit_fap().filter(|i| real.fap[*i].pos.r <= radius) {
        return Ok(Association {
            tier: Tier::FapCached,
            index: i,
            sinr: intf.sinr_fap(i),
            met: true,
        });
    }
    let i = real.nearest_rrh().ok_or(Error::EmptyScene)?;
    Ok(Association {
        tier: Tier::Rrh,
        index: i,
        sinr: intf.sinr_rrh(i),
        met: true,
    })
}

/// Serving node of the typical user.
///
/// Under minimal delay, a user with no node meeting its threshold falls back
/// to the maximal-RSRP node with `met = false`.
pub fn associate(
    real: &Realization,
    intf: &Interference,
    state: &PolicyState,
    k: f64,
) -> Result<Association> {
    match state {
        PolicyState::MaxRsrp => associate_max_rsrp(real, intf, k),
        PolicyState::ClusterMaxCacheHit { radius } => associate_cluster(real, intf, *radius),
        PolicyState::MinDelay(md) => match scan_min_delay(real, intf, md).association {
            Some(a) => Ok(a),
            None => {
                let mut a = associate_max_rsrp(real, intf, k)?;
                if a.tier == Tier::Fap {
                    a.tier = if real.fap_hit[a.index] {
                        Tier::FapCached
                    } else {
                        Tier::FapUncached
                    };
                }
                a.met = false;
                Ok(a)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::scene::{Polar, SceneModel};

    fn node(r: f64, gain: f64) -> Node {
        Node {
            pos: Polar { r, theta: 0.0 },
            gain,
        }
    }

    fn scene(fap: Vec<Node>, rrh: Vec<Node>, hits: Vec<bool>) -> Realization {
        Realization {
            radius: 1000.0,
            rrh,
            fap,
            fap_hit: hits,
            request: 1,
            users: Vec::new(),
        }
    }

    #[test]
    fn sinr_by_hand() {
        let s = Scenario::reference();
        let n = s.network();
        let fb = FeedbackCoefficients {
            zeta: 0.5,
            upsilon: 0.25,
        };
        let real = scene(
            vec![node(10.0, 1.0), node(20.0, 2.0)],
            vec![node(15.0, 0.5), node(30.0, 1.5)],
            vec![true, false],
        );
        let pf = |r: f64, h: f64| n.p_f * h * r.powf(-4.0);
        let pr = |r: f64, h: f64| n.p_r * h * r.powf(-4.0);
        let expect_f0 = pf(10.0, 1.0) / (pf(20.0, 2.0) + pr(15.0, 0.5) + pr(30.0, 1.5));
        let expect_r1 = 0.5 * pr(30.0, 1.5)
            / (pf(10.0, 1.0) + pf(20.0, 2.0) + 0.25 * pr(15.0, 0.5));
        assert!((sinr_fap(&real, &s, fb, 0) / expect_f0 - 1.0).abs() < 1e-12);
        assert!((sinr_rrh(&real, &s, fb, 1) / expect_r1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_rsrp_bias_rule() {
        let s = Scenario::reference();
        let k = s.k();
        let fb = s.feedback();
        // RRH at exactly k times the F-AP distance goes to the F-AP.
        let real = scene(vec![node(100.0, 1.0)], vec![node(100.0 * k, 1.0)], vec![true]);
        let intf = Interference::new(&real, &s, fb);
        assert_eq!(associate_max_rsrp(&real, &intf, k).unwrap().tier, Tier::Fap);
        let real = scene(vec![node(100.0, 1.0)], vec![node(99.0 * k, 1.0)], vec![true]);
        let intf = Interference::new(&real, &s, fb);
        assert_eq!(associate_max_rsrp(&real, &intf, k).unwrap().tier, Tier::Rrh);
        let empty = scene(vec![], vec![], vec![]);
        let intf = Interference::new(&empty, &s, fb);
        assert!(matches!(associate_max_rsrp(&empty, &intf, k), Err(Error::EmptyScene)));
    }

    #[test]
    fn cluster_rule() {
        let s = Scenario::reference();
        let fb = s.feedback();
        let real = scene(
            vec![node(50.0, 1.0), node(150.0, 1.0)],
            vec![node(10.0, 1.0)],
            vec![false, true],
        );
        let intf = Interference::new(&real, &s, fb);
        let a = associate_cluster(&real, &intf, 200.0).unwrap();
        assert_eq!((a.tier, a.index), (Tier::FapCached, 1));
        let a = associate_cluster(&real, &intf, 100.0).unwrap();
        assert_eq!(a.tier, Tier::Rrh);
    }

    #[test]
    fn min_delay_counts_match_exact_sinr() {
        let s = Scenario::reference()
            .modified(|sp| {
                sp.network.disc_radius = 1500.0;
                sp.traffic.d_front_override = Some(2.0);
            })
            .unwrap();
        let model = SceneModel::new(&s);
        let state = MinDelayState::from_scenario(&s).unwrap();
        for idx in 0..20 {
            let real = model.realize(4, idx);
            let intf = Interference::new(&real, &s, model.feedback);
            let scan = scan_min_delay(&real, &intf, &state);
            let mut counts = [0usize; 3];
            for i in 0..real.fap.len() {
                let c = if real.fap_hit[i] { 0 } else { 1 };
                if intf.sinr_fap(i) > state.thresholds[c] {
                    counts[c] += 1;
                }
            }
            for i in 0..real.rrh.len() {
                if intf.sinr_rrh(i) > state.thresholds[2] {
                    counts[2] += 1;
                }
            }
            assert_eq!(scan.counts, counts);
            // With thresholds above one at most one node qualifies.
            assert!(counts.iter().sum::<usize>() <= 1);
            let a = associate(&real, &intf, &PolicyState::MinDelay(Box::new(state.clone())), model.k)
                .unwrap();
            assert_eq!(a.met, scan.association.is_some());
        }
    }

    #[test]
    fn delay_is_monotone_in_sinr() {
        let s = Scenario::reference()
            .modified(|sp| sp.traffic.d_front_override = Some(2.0))
            .unwrap();
        let st = MinDelayState::from_scenario(&s).unwrap();
        for c in 0..3 {
            let mut last = f64::INFINITY;
            for g in [1.0, 2.0, 5.0, 20.0, 100.0] {
                let d = st.delay(c, g);
                assert!(d <= last);
                last = d;
            }
        }
    }
}
