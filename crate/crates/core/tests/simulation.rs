use fran_core::experiments::{run_sweep, FigureId, Mode, SweepSpec, SweptVariable};
use fran_core::montecarlo::association::associate_max_rsrp;
use fran_core::montecarlo::{estimate_metrics, Interference, Policy, SceneModel};
use fran_core::{Error, Estimate, Scenario, Tier};

fn disc(radius: f64) -> Scenario {
    Scenario::reference()
        .modified(|s| s.network.disc_radius = radius)
        .unwrap()
}

/// Success of the typical user on one realization, before and after the
/// disc is doubled with the inner points kept.
#[test]
fn guard_band_is_wide_enough() {
    let s = disc(1500.0);
    let model = SceneModel::new(&s);
    let n = 4000;
    for delta in [0.1, 1.0, 10.0] {
        let (mut near, mut far) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for i in 0..n as u64 {
            let mut real = model.realize(4, i);
            let hit = |real: &_| {
                let intf = Interference::new(real, &s, s.feedback());
                let a = associate_max_rsrp(real, &intf, s.k()).unwrap();
                f64::from(u8::from(a.sinr > delta))
            };
            near.push(hit(&real));
            model.extend_to_radius(&mut real, 3000.0, 4, i);
            far.push(hit(&real));
        }
        let a = Estimate::from_samples(&near);
        let b = Estimate::from_samples(&far);
        assert!((a.mean - b.mean).abs() < b.std_error, "delta {delta}: {a:?} vs {b:?}");
    }
}

#[test]
fn seeds_replay_and_differ() {
    let s = disc(1500.0);
    let a = estimate_metrics(&s, Policy::MaxRsrp, 400, 1).unwrap();
    let b = estimate_metrics(&s, Policy::MaxRsrp, 400, 1).unwrap();
    let c = estimate_metrics(&s, Policy::MaxRsrp, 400, 2).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.ergodic_rate.mean, c.ergodic_rate.mean);
    let model = SceneModel::new(&s);
    assert_eq!(model.realize(9, 3), model.realize(9, 3));
}

#[test]
fn reports_are_consistent() {
    let r = estimate_metrics(&disc(1500.0), Policy::MaxRsrp, 1000, 3).unwrap();
    assert_eq!(r.n_realizations, 1000);
    let f = r.association(Tier::Fap).unwrap().mean;
    let rr = r.association(Tier::Rrh).unwrap().mean;
    assert!((f + rr - 1.0).abs() < 1e-12);
    let s: Vec<f64> = r.success_probability.iter().map(|(_, e)| e.mean).collect();
    assert!(s.windows(2).all(|w| w[1] <= w[0]));
    assert!(r.peak_rate.mean >= r.ergodic_rate.mean - 1e-12);
}

#[test]
fn cluster_needs_simulation() {
    let mut spec = SweepSpec::figure(FigureId::Fig7, &disc(1500.0)).unwrap();
    spec.grid = vec![5.0, 10.0];
    spec.realizations = 200;
    let r = run_sweep(&spec).unwrap();
    for radius in [15, 90] {
        let c = r.curve("cluster", "mc", &format!("latency|radius={radius}"));
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|(_, v)| v.is_finite() && *v > 0.0));
    }
    assert!(r.curve("cluster", "analytic", "latency|radius=15").is_empty());
}

#[test]
fn both_modes_share_rows_in_grid_order() {
    let mut spec = SweepSpec::figure(FigureId::Fig4, &disc(1500.0)).unwrap();
    spec.mode = Mode::Both;
    spec.grid = vec![5.0, 20.0, 40.0];
    spec.realizations = 200;
    let r = run_sweep(&spec).unwrap();
    let xs: Vec<f64> = r.curve("max_rsrp", "mc", "success|delta=1").iter().map(|p| p.0).collect();
    assert_eq!(xs, spec.grid);
    assert_eq!(r.curve("max_rsrp", "analytic", "success|delta=1").len(), 3);
}

#[test]
fn invalid_sweeps_are_rejected() {
    let mut spec = SweepSpec::figure(FigureId::Fig3, &Scenario::reference()).unwrap();
    spec.grid = vec![15.0, 20.0, 20.0];
    assert!(matches!(run_sweep(&spec), Err(Error::Sweep(_))));
    spec.grid = vec![15.5];
    assert!(run_sweep(&spec).is_err());
    spec.swept = SweptVariable::DensityRatio;
    spec.grid = vec![];
    assert!(matches!(run_sweep(&spec), Err(Error::Sweep(_))));
}
