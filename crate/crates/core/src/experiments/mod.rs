//! Parameter sweeps behind the result figures, CSV output and
//! analytic/simulation cross-validation.

pub mod crosscheck;
pub mod csv_io;
pub mod metrics;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{Scenario, ScenarioSpec};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_metrics, Policy};
use crate::report::Failure;

pub use crosscheck::{compare, cross_validate, Check, CrossCheckReport};
pub use csv_io::{read_csv, write_csv, ResultRow, COLUMNS, SCHEMA_VERSION};
pub use metrics::{analytic_metrics, mc_metrics, MetricKind, MetricValue};

/// λ_R is held here while λ_F follows the density ratio.
pub const RATIO_LAMBDA_R: f64 = 2e-4;
pub const DEFAULT_RATIOS: [f64; 7] = [5.0, 8.0, 10.0, 15.0, 20.0, 30.0, 40.0];
pub const DEFAULT_XI: [f64; 3] = [5e-3, 7e-3, 9e-3];
pub const DEFAULT_D_FRONT: [f64; 3] = [1.0, 2.0, 4.0];
/// Small and large cluster radii (m) of the benchmark.
pub const DEFAULT_RADII: [f64; 2] = [15.0, 90.0];
/// Link latencies used by the benchmark comparison unless the scenario sets its own.
pub const BENCHMARK_D_FRONT: f64 = 3.0;
pub const BENCHMARK_D_BACK: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Custom,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Custom => "custom",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .chain([FigureId::Custom])
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown figure {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    MonteCarlo,
    Both,
}

impl Mode {
    fn analytic(self) -> bool {
        self != Mode::MonteCarlo
    }

    fn mc(self) -> bool {
        self != Mode::Analytic
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "mc" | "montecarlo" => Ok(Mode::MonteCarlo),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptVariable {
    /// `lambda_R / lambda_F`, varying λ_F.
    DensityRatio,
    /// Number of cached contents M; the induced hit probability is reported too.
    CachedCount,
    Xi,
    DFront,
    ClusterRadius,
}

impl SweptVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweptVariable::DensityRatio => "density_ratio",
            SweptVariable::CachedCount => "cached_count",
            SweptVariable::Xi => "xi",
            SweptVariable::DFront => "d_front",
            SweptVariable::ClusterRadius => "cluster_radius",
        }
    }
}

impl FromStr for SweptVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            SweptVariable::DensityRatio,
            SweptVariable::CachedCount,
            SweptVariable::Xi,
            SweptVariable::DFront,
            SweptVariable::ClusterRadius,
        ]
        .into_iter()
        .find(|v| v.name() == s || (s == "ratio" && *v == SweptVariable::DensityRatio))
        .ok_or_else(|| Error::Parse(format!("unknown swept variable {s:?}")))
    }
}

/// Secondary parameter giving one curve per value.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    None,
    Xi(Vec<f64>),
    DFront(Vec<f64>),
}

impl Series {
    fn points(&self) -> Vec<Option<(&'static str, f64)>> {
        match self {
            Series::None => vec![None],
            Series::Xi(v) => v.iter().map(|x| Some(("xi", *x))).collect(),
            Series::DFront(v) => v.iter().map(|x| Some(("d_front", *x))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub figure: FigureId,
    pub swept: SweptVariable,
    pub grid: Vec<f64>,
    pub series: Series,
    /// Policies with an analytic model.
    pub policies: Vec<Policy>,
    /// Radii of the simulated cluster benchmark; empty for none.
    pub benchmark_radii: Vec<f64>,
    pub metrics: Vec<MetricKind>,
    pub mode: Mode,
    pub realizations: usize,
    pub seed: u64,
    pub base: Scenario,
}

impl SweepSpec {
    /// Default sweep of a figure on top of `base`.
    pub fn figure(figure: FigureId, base: &Scenario) -> Result<Self> {
        let both = vec![Policy::MaxRsrp, Policy::MinDelay];
        let ratios = DEFAULT_RATIOS.to_vec();
        let sim = base.simulation();
        let mut spec = SweepSpec {
            figure,
            swept: SweptVariable::DensityRatio,
            grid: ratios,
            series: Series::None,
            policies: both,
            benchmark_radii: Vec::new(),
            metrics: vec![MetricKind::Latency],
            mode: Mode::Analytic,
            realizations: sim.realizations,
            seed: sim.seed,
            base: base.clone(),
        };
        match figure {
            FigureId::Fig2 => {
                spec.series = Series::Xi(DEFAULT_XI.to_vec());
                spec.policies = vec![Policy::MaxRsrp];
            }
            FigureId::Fig3 => {
                spec.swept = SweptVariable::CachedCount;
                spec.grid = (15..=35).map(f64::from).collect();
                spec.series = Series::Xi(DEFAULT_XI.to_vec());
                spec.policies = vec![Policy::MaxRsrp];
            }
            FigureId::Fig4 => spec.metrics = vec![MetricKind::Success],
            FigureId::Fig5 => spec.metrics = vec![MetricKind::Rate],
            FigureId::Fig6 => spec.series = Series::DFront(DEFAULT_D_FRONT.to_vec()),
            FigureId::Fig7 => {
                spec.benchmark_radii = DEFAULT_RADII.to_vec();
                let t = base.traffic();
                if t.d_front_override.is_none() || t.d_back_override.is_none() {
                    spec.base = base.modified(|s| {
                        s.traffic.d_front_override.get_or_insert(BENCHMARK_D_FRONT);
                        s.traffic.d_back_override.get_or_insert(BENCHMARK_D_BACK);
                    })?;
                }
            }
            FigureId::Custom => spec.metrics = MetricKind::ALL.to_vec(),
        }
        Ok(spec)
    }

    fn point_spec(&self, x: f64, series: Option<(&str, f64)>) -> ScenarioSpec {
        let mut s = self.base.spec().clone();
        match self.swept {
            SweptVariable::DensityRatio => {
                s.network.lambda_r = RATIO_LAMBDA_R;
                s.network.lambda_f = RATIO_LAMBDA_R / x;
            }
            SweptVariable::CachedCount => s.cache.cached_count = x as usize,
            SweptVariable::Xi => s.traffic.xi = x,
            SweptVariable::DFront => s.traffic.d_front_override = Some(x),
            SweptVariable::ClusterRadius => {}
        }
        match series {
            Some(("xi", v)) => s.traffic.xi = v,
            Some(("d_front", v)) => s.traffic.d_front_override = Some(v),
            _ => {}
        }
        s
    }

    /// Grid nonempty, strictly monotone, and valid at every point.
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Sweep("grid is empty".into()));
        }
        let up = self.grid.windows(2).all(|w| w[1] > w[0]);
        let down = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Sweep("grid must be strictly monotone".into()));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::Sweep("grid values must be finite".into()));
        }
        if self.swept == SweptVariable::CachedCount && self.grid.iter().any(|x| x.fract() != 0.0 || *x < 0.0) {
            return Err(Error::Sweep("cached_count grid must hold nonnegative integers".into()));
        }
        if self.swept == SweptVariable::ClusterRadius && self.grid.iter().any(|x| *x <= 0.0) {
            return Err(Error::Sweep("cluster radii must be positive".into()));
        }
        if self.benchmark_radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Sweep("cluster radii must be positive".into()));
        }
        if self.mode.mc() && self.realizations == 0 {
            return Err(Error::Sweep("simulation needs at least one realization".into()));
        }
        for &x in &self.grid {
            for s in self.series.points() {
                self.point_spec(x, s).validate().map_err(|e| {
                    Error::Sweep(format!("{} = {x}: {e}", self.swept.name()))
                })?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Job {
    /// Hit probability induced by the cached count.
    HitProbability,
    Analytic(Policy),
    Simulate(Policy),
}

struct WorkItem {
    x: f64,
    series: Option<(&'static str, f64)>,
    job: Job,
}

fn metric_label(name: &str, series: Option<(&str, f64)>, radius: Option<f64>) -> String {
    let mut s = name.to_string();
    if let Some((k, v)) = series {
        s.push_str(&format!("|{k}={v}"));
    }
    if let Some(r) = radius {
        s.push_str(&format!("|radius={r}"));
    }
    s
}

fn failure_value(f: &Failure) -> f64 {
    if f.unstable { f64::INFINITY } else { f64::NAN }
}

/// Result of a sweep, rows in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub figure: FigureId,
    pub rows: Vec<ResultRow>,
}

impl SweepResult {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.error.is_empty()).count()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        write_csv(&mut buf, self.figure.name(), &self.rows)?;
        Ok(buf)
    }

    /// `(swept value, value)` pairs of one curve, in grid order.
    pub fn curve(&self, policy: &str, mode: &str, metric: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.policy == policy && r.mode == mode && r.metric == metric)
            .map(|r| (r.swept_value, r.value))
            .collect()
    }
}

impl SweepSpec {
    fn items(&self) -> Vec<WorkItem> {
        let mut items = Vec::new();
        for &x in &self.grid {
            if self.swept == SweptVariable::CachedCount {
                items.push(WorkItem { x, series: None, job: Job::HitProbability });
            }
            for series in self.series.points() {
                for &p in &self.policies {
                    if self.mode.analytic() {
                        items.push(WorkItem { x, series, job: Job::Analytic(p) });
                    }
                    if self.mode.mc() {
                        items.push(WorkItem { x, series, job: Job::Simulate(p) });
                    }
                }
                let radii = if self.swept == SweptVariable::ClusterRadius {
                    vec![x]
                } else {
                    self.benchmark_radii.clone()
                };
                for radius in radii {
                    // The benchmark has no analytic model and is always simulated.
                    items.push(WorkItem {
                        x,
                        series,
                        job: Job::Simulate(Policy::ClusterMaxCacheHit { radius }),
                    });
                }
            }
        }
        items
    }

    fn wanted(&self, name: &str) -> bool {
        MetricKind::of(name).is_some_and(|k| self.metrics.contains(&k))
    }

    fn run_item(&self, item: &WorkItem) -> Vec<ResultRow> {
        let swept_name = self.swept.name().to_string();
        let row = |policy: &str, mode: &str, metric: String, value: f64, se: f64, n: usize, error: String| ResultRow {
            swept_name: swept_name.clone(),
            swept_value: item.x,
            policy: policy.to_string(),
            mode: mode.to_string(),
            metric,
            value,
            std_error: se,
            n,
            error,
        };
        let (policy, mode) = match item.job {
            Job::HitProbability => ("cache", "analytic"),
            Job::Analytic(p) => (p.name(), "analytic"),
            Job::Simulate(p) => (p.name(), "mc"),
        };
        let radius = match item.job {
            Job::Simulate(Policy::ClusterMaxCacheHit { radius }) if self.swept != SweptVariable::ClusterRadius => {
                Some(radius)
            }
            _ => None,
        };
        let scenario = match self.point_spec(item.x, item.series).validate() {
            Ok(s) => s,
            Err(e) => {
                let label = metric_label("all", item.series, radius);
                return vec![row(policy, mode, label, f64::NAN, f64::NAN, 0, e.to_string())];
            }
        };
        let mut rows = Vec::new();
        match item.job {
            Job::HitProbability => {
                rows.push(row(policy, mode, "p_hit".into(), scenario.hit_probability(), 0.0, 0, String::new()));
            }
            Job::Analytic(p) => match analytic_metrics(&scenario, p) {
                Ok(values) => {
                    for (name, v) in values.into_iter().filter(|(n, _)| self.wanted(n)) {
                        let label = metric_label(&name, item.series, None);
                        rows.push(match v {
                            Ok(v) => row(p.name(), mode, label, v, 0.0, 0, String::new()),
                            Err(f) => row(p.name(), mode, label, failure_value(&f), f64::NAN, 0, f.message),
                        });
                    }
                }
                Err(e) => rows.push(row(p.name(), mode, metric_label("all", item.series, None), f64::NAN, f64::NAN, 0, e.to_string())),
            },
            Job::Simulate(p) => match estimate_metrics(&scenario, p, self.realizations, self.seed) {
                Ok(report) => {
                    for (name, v) in mc_metrics(&report, p).into_iter().filter(|(n, _)| self.wanted(n)) {
                        let label = metric_label(&name, item.series, radius);
                        rows.push(match v {
                            Ok(e) => row(p.name(), mode, label, e.mean, e.std_error, e.n, String::new()),
                            Err(f) => row(p.name(), mode, label, failure_value(&f), f64::NAN, report.n_realizations, f.message),
                        });
                    }
                }
                Err(e) => {
                    let f = Failure::from(&e);
                    rows.push(row(p.name(), mode, metric_label("all", item.series, radius), failure_value(&f), f64::NAN, 0, f.message));
                }
            },
        }
        rows
    }
}

/// Run every grid point; failures become rows with a nonempty error column.
/// Output order follows the grid regardless of completion order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let items = spec.items();
    let run = || -> Vec<Vec<ResultRow>> { items.par_iter().map(|it| spec.run_item(it)).collect() };
    let workers = spec.base.simulation().workers;
    let rows = if workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(run)
    };
    Ok(SweepResult {
        figure: spec.figure,
        rows: rows.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_defaults() {
        let base = Scenario::reference();
        let f2 = SweepSpec::figure(FigureId::Fig2, &base).unwrap();
        assert_eq!(f2.grid, DEFAULT_RATIOS.to_vec());
        assert_eq!(f2.policies, vec![Policy::MaxRsrp]);
        let f3 = SweepSpec::figure(FigureId::Fig3, &base).unwrap();
        assert_eq!(f3.grid.len(), 21);
        let f7 = SweepSpec::figure(FigureId::Fig7, &base).unwrap();
        assert_eq!(f7.base.traffic().d_front_override, Some(BENCHMARK_D_FRONT));
        assert_eq!(f7.benchmark_radii.len(), 2);
        assert_eq!("fig6".parse::<FigureId>().unwrap(), FigureId::Fig6);
        assert!("fig9".parse::<FigureId>().is_err());
        assert_eq!("ratio".parse::<SweptVariable>().unwrap(), SweptVariable::DensityRatio);
    }

    #[test]
    fn grid_validation() {
        let base = Scenario::reference();
        let mut s = SweepSpec::figure(FigureId::Fig2, &base).unwrap();
        s.grid.clear();
        assert!(matches!(run_sweep(&s), Err(Error::Sweep(_))));
        s.grid = vec![5.0, 5.0];
        assert!(s.validate().is_err());
        s.grid = vec![40.0, 10.0];
        assert!(s.validate().is_ok());
        let mut s = SweepSpec::figure(FigureId::Fig3, &base).unwrap();
        s.grid = vec![15.5];
        assert!(s.validate().is_err());
        s.grid = vec![60.0];
        assert!(s.validate().is_err());
    }

    #[test]
    fn analytic_rows_are_complete_and_ordered() {
        let base = Scenario::reference();
        let mut s = SweepSpec::figure(FigureId::Fig2, &base).unwrap();
        s.grid = vec![5.0, 10.0];
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.rows.len(), 2 * 3);
        assert_eq!(r.rows[0].metric, "latency|xi=0.005");
        assert_eq!(r.rows[0].swept_value, 5.0);
        assert_eq!(r.rows[5].swept_value, 10.0);
        let mut fig4 = SweepSpec::figure(FigureId::Fig4, &base).unwrap();
        fig4.grid = vec![10.0];
        let r = run_sweep(&fig4).unwrap();
        assert!(r.rows.iter().any(|row| row.policy == "max_rsrp"));
        assert!(r.rows.iter().any(|row| row.policy == "min_delay" && row.metric == "success"));
    }

    #[test]
    fn unstable_points_are_rows_not_aborts() {
        let base = Scenario::reference();
        let mut s = SweepSpec::figure(FigureId::Fig2, &base).unwrap();
        s.grid = vec![40.0];
        s.series = Series::Xi(vec![9e-3]);
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].value, f64::INFINITY);
        assert!(r.rows[0].error.contains("unstable"));
    }
}
