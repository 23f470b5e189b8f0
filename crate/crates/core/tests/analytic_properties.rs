use proptest::prelude::*;

use fran_core::analytic::{
    assoc_prob_max_rsrp, assoc_prob_min_delay, cache_hit_probability, delivery_latency_bs,
    min_delay_terms_il, success_prob_max_rsrp, SinrThresholds,
};
use fran_core::numerics::{rho, rho_closed_form_alpha4};
use fran_core::{derive_k, Error, Scenario, Tier};

fn scenario(ratio: f64, bits: u32) -> Scenario {
    Scenario::reference()
        .modified(|s| {
            s.network.lambda_f = s.network.lambda_r / ratio;
            s.traffic.feedback_bits = bits;
        })
        .unwrap()
}

proptest! {
    #[test]
    fn max_rsrp_association_is_a_distribution(
        lf in 1e-7f64..1e-3, lr in 1e-7f64..1e-3, k in 0.01f64..100.0, bump in 1.01f64..4.0,
    ) {
        let (a_f, a_r) = assoc_prob_max_rsrp(lf, lr, k);
        prop_assert!((0.0..=1.0).contains(&a_f));
        prop_assert!((a_f + a_r - 1.0).abs() < 1e-15);
        // A larger bias pushes users toward the RRH tier.
        let (a_f2, _) = assoc_prob_max_rsrp(lf, lr, k * bump);
        prop_assert!(a_f2 < a_f);
    }

    #[test]
    fn success_probability_bounded_and_decreasing(
        ratio in 2.0f64..60.0, bits in 0u32..8, delta in 1e-3f64..1e3, bump in 1.05f64..5.0,
    ) {
        let s = scenario(ratio, bits);
        let lo = success_prob_max_rsrp(delta, &s).unwrap();
        let hi = success_prob_max_rsrp(delta * bump, &s).unwrap();
        for p in [lo.total, lo.fap, lo.rrh] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert!(hi.total < lo.total);
        prop_assert!(hi.fap < lo.fap && hi.rrh < lo.rrh);
    }

    #[test]
    fn more_feedback_never_hurts_rrh_users(ratio in 2.0f64..60.0, bits in 0u32..10, delta in 0.01f64..100.0) {
        let a = success_prob_max_rsrp(delta, &scenario(ratio, bits)).unwrap().rrh;
        let b = success_prob_max_rsrp(delta, &scenario(ratio, bits + 1)).unwrap().rrh;
        prop_assert!(b >= a - 1e-14);
    }

    #[test]
    fn hit_probability_grows_with_cache(tau in 0.1f64..2.5, n in 2usize..500, m in 0usize..500) {
        let m = m % n;
        let p = cache_hit_probability(m, tau, n);
        let q = cache_hit_probability(m + 1, tau, n);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(q > p);
        prop_assert_eq!(cache_hit_probability(n, tau, n), 1.0);
    }

    #[test]
    fn rho_quadrature_tracks_closed_form(delta in 1e-3f64..1e3) {
        let q = fran_core::numerics::rho_integral(delta, 4.0, &fran_core::numerics::inner_spec()).unwrap();
        prop_assert!((q - rho_closed_form_alpha4(delta)).abs() <= 1e-9 * (1.0 + q));
    }

    #[test]
    fn min_delay_terms_fall_with_thresholds(
        ratio in 2.0f64..60.0, p_hit in 0.05f64..0.95, eta in 1.01f64..50.0, bump in 1.01f64..4.0,
    ) {
        let s = scenario(ratio, 0);
        let lo = min_delay_terms_il(&SinrThresholds::uniform(eta), &s, p_hit).unwrap();
        let hi = min_delay_terms_il(&SinrThresholds::uniform(eta * bump), &s, p_hit).unwrap();
        for t in Tier::MIN_DELAY {
            prop_assert!(hi.get(t) < lo.get(t));
        }
        let a = assoc_prob_min_delay(&lo).unwrap();
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn queue_latency_diverges_only_past_capacity(rate in 0.1f64..20.0, load in 0.0f64..0.999) {
        let l = delivery_latency_bs(rate, load * rate, 1.0, Tier::Fap).unwrap();
        prop_assert!(l >= 1.0 / rate);
        let unstable = delivery_latency_bs(rate, rate * (1.0 + load), 1.0, Tier::Fap);
        prop_assert!(matches!(unstable, Err(Error::Unstable { .. })), "expected unstable queue");
    }
}

#[test]
fn rsrp_bias_from_powers() {
    assert!(derive_k(10.0, 10.0, 4.0).is_err());
    let k = derive_k(0.2, 20.0, 4.0).unwrap();
    assert!((k - 0.01f64.powf(0.25)).abs() < 1e-15);
    assert!(derive_k(1.0, 1.0, 2.0).is_err());
}

#[test]
fn defaults_split_users_evenly() {
    let s = Scenario::reference();
    let p = success_prob_max_rsrp(1.0, &s).unwrap();
    assert!((p.a_f - 0.5).abs() < 1e-12);
    // rho(1, 4) = pi / 4.
    assert!((rho(1.0, 4.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}
