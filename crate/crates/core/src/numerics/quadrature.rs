//! Globally adaptive Gauss-Kronrod (10/21) quadrature with a compactified
//! variant for `[a, inf)` and a truncating integrator for rate integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-8,
            absolute_tolerance: 1e-12,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0) || !(self.absolute_tolerance > 0.0) {
            return Err(Error::Domain {
                function: "QuadratureSpec",
                value: self.relative_tolerance.min(self.absolute_tolerance),
                bound: "tolerances > 0",
            });
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.absolute_tolerance.max(self.relative_tolerance * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_024,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    spec.validate()?;
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let (value, error) = gk21(&mut f, a, b);
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            value,
            achieved_error: error,
            subdivisions: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut subdivisions = 0;

    while total_err > spec.target(total) {
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                value: total,
                achieved_error: total_err,
                subdivisions,
            });
        }
        let seg = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a.min(seg.b) && mid < seg.a.max(seg.b)) {
            // Interval cannot be split further in double precision.
            return Err(Error::NonConvergence {
                value: total,
                achieved_error: total_err,
                subdivisions,
            });
        }
        let (v1, e1) = gk21(&mut f, seg.a, mid);
        let (v2, e2) = gk21(&mut f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // Resum to shed accumulated rounding in the running totals.
            total = neumaier_sum(heap.iter().map(|s| s.value));
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    total = neumaier_sum(heap.iter().map(|s| s.value));
    Ok(Quadrature {
        value: total,
        error: total_err.max(0.0),
        subdivisions,
    })
}

/// Integral over `[a, inf)` through `x = a + (1 - t)/t`, `t in (0, 1]`.
pub fn semi_infinite_quadrature<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    integrate(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let x = a + (1.0 - t) / t;
            let y = f(x) / (t * t);
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// Result of a truncated integral over `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedIntegral {
    /// Integral over `[0, truncation_point]` plus `tail`.
    pub value: f64,
    pub error: f64,
    pub truncation_point: f64,
    /// Analytic tail estimate added beyond the truncation point.
    pub tail: f64,
}

/// Integrates an eventually geometrically decaying `f` over `[0, inf)`.
///
/// Unit-width panels are integrated adaptively until the integrand falls
/// below `absolute_tolerance` times the running integral; the remainder is
/// bounded by `f(T) / decay_rate`, the tail of `f(T) exp(-decay_rate (t - T))`.
pub fn truncated_integral<F: FnMut(f64) -> f64>(
    mut f: F,
    decay_rate: f64,
    spec: &QuadratureSpec,
) -> Result<TruncatedIntegral> {
    const PANEL: f64 = 1.0;
    const MAX_T: f64 = 4096.0;
    if !(decay_rate > 0.0) {
        return Err(Error::Domain {
            function: "truncated_integral",
            value: decay_rate,
            bound: "decay rate > 0",
        });
    }
    let mut parts = Vec::new();
    let mut error = 0.0;
    let mut t = 0.0;
    loop {
        let q = integrate(&mut f, t, t + PANEL, spec)?;
        parts.push(q.value);
        error += q.error;
        t += PANEL;
        let total = neumaier_sum(parts.iter().copied());
        let ft = f(t).abs();
        if ft <= spec.absolute_tolerance * total.abs() || ft == 0.0 {
            let tail = ft / decay_rate;
            return Ok(TruncatedIntegral {
                value: total + tail,
                error: error + tail,
                truncation_point: t,
                tail,
            });
        }
        if t >= MAX_T {
            return Err(Error::NonConvergence {
                value: total,
                achieved_error: ft / decay_rate,
                subdivisions: parts.len(),
            });
        }
    }
}

/// Compensated summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| 3.0 * x * x, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 8.0).abs() < 1e-13);
        assert_eq!(q.subdivisions, 0);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let q = integrate(f64::sin, std::f64::consts::PI, 0.0, &QuadratureSpec::default())
            .unwrap();
        assert!((q.value + 2.0).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity() {
        let q = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn exponential_tail() {
        let q = semi_infinite_quadrature(|t| (-t).exp(), 0.0, &QuadratureSpec::default())
            .unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn algebraic_tail() {
        let q = semi_infinite_quadrature(
            |t| 1.0 / ((1.0 + t) * (1.0 + t)),
            0.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
        let q = semi_infinite_quadrature(|t| 1.0 / (1.0 + t * t), 1.0, &QuadratureSpec::default())
            .unwrap();
        assert!((q.value - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn nonconvergence_reports_error_estimate() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::default()
        };
        match integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, &spec) {
            Err(Error::NonConvergence {
                achieved_error,
                subdivisions,
                ..
            }) => {
                assert_eq!(subdivisions, 3);
                assert!(achieved_error > 0.0);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let spec = QuadratureSpec::default();
        let f = |x: f64| (x * 7.0).cos() * (-x).exp();
        let a = semi_infinite_quadrature(f, 0.0, &spec).unwrap();
        let b = semi_infinite_quadrature(f, 0.0, &spec).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn truncated_indicator() {
        let t0 = 3.7;
        let r = truncated_integral(
            |t| if t <= t0 { 1.0 } else { 0.0 },
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - t0).abs() < 1e-8, "{}", r.value);
        assert_eq!(r.tail, 0.0);
    }

    #[test]
    fn truncated_geometric() {
        let rate = 0.5 * std::f64::consts::LN_2;
        let r = truncated_integral(|t| (-rate * t).exp(), rate, &QuadratureSpec::default())
            .unwrap();
        assert!((r.value - 1.0 / rate).abs() < 1e-9);
        assert!(r.truncation_point > 10.0);
        assert!(r.tail > 0.0);
    }

    #[test]
    fn compensated_sum() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(v), 2.0);
    }
}
