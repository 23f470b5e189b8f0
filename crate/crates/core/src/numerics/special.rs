//! Gamma/Beta functions and the limited-feedback coefficients built on them.

use statrs::function::gamma as sg;

use crate::error::{Error, Result};

pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "gamma_fn",
            value: x,
            bound: "x > 0",
        });
    }
    Ok(sg::gamma(x))
}

pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "ln_gamma",
            value: x,
            bound: "x > 0",
        });
    }
    Ok(sg::ln_gamma(x))
}

pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !(v > 0.0) {
            return Err(Error::Domain {
                function: "beta_fn",
                value: v,
                bound: "x > 0 and y > 0",
            });
        }
    }
    Ok(sg::ln_gamma(x) + sg::ln_gamma(y) - sg::ln_gamma(x + y))
}

/// Beta function, evaluated through log-Gamma so that large first arguments
/// (codebook sizes `2^B`) do not overflow.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

/// Statistics of the quantized channel seen by an RRH user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackCoefficients {
    /// Fraction of the serving-link power retained after quantization.
    pub zeta: f64,
    /// Scaling of residual intra-tier RRH interference.
    pub upsilon: f64,
}

impl FeedbackCoefficients {
    /// Perfect collaboration off, perfect channel: the plain SINR form.
    pub const UNIT: FeedbackCoefficients = FeedbackCoefficients {
        zeta: 1.0,
        upsilon: 1.0,
    };
}

/// `upsilon = 2^(-B/(N_B-1))`, `zeta = 1 - L_cb * beta(L_cb, N_B/(N_B-1))` with
/// codebook size `L_cb = 2^B`.
pub fn feedback_coeffs(bits: u32, antennas: u32) -> Result<FeedbackCoefficients> {
    if antennas < 2 {
        return Err(Error::Domain {
            function: "feedback_coeffs",
            value: antennas as f64,
            bound: "N_B >= 2",
        });
    }
    let nb = antennas as f64;
    let b = bits as f64;
    let upsilon = (-b / (nb - 1.0) * std::f64::consts::LN_2).exp();
    let codebook = 2f64.powi(bits as i32);
    // L_cb * beta(L_cb, y) = exp(ln L_cb + ln beta)
    let scaled = (b * std::f64::consts::LN_2 + ln_beta(codebook, nb / (nb - 1.0))?).exp();
    Ok(FeedbackCoefficients {
        zeta: 1.0 - scaled,
        upsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadratureSpec};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_at_integers_and_half() {
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-13);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-13);
        assert!(rel(gamma_fn(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-12);
        // Gamma(x+1) = x Gamma(x)
        for x in [0.3, 1.7, 4.25, 11.5] {
            let lhs = gamma_fn(x + 1.0).unwrap();
            assert!(rel(lhs, x * gamma_fn(x).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(gamma_fn(0.0), Err(Error::Domain { .. })));
        assert!(gamma_fn(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn beta_small_cases() {
        assert!(rel(beta_fn(1.0, 3.0).unwrap(), 1.0 / 3.0) < 1e-13);
        assert!(rel(beta_fn(2.0, 2.0).unwrap(), 1.0 / 6.0) < 1e-13);
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -2.0).is_err());
    }

    #[test]
    fn beta_matches_direct_integral() {
        // beta(16, 4/3) = int_0^1 t^15 (1-t)^(1/3) dt
        let spec = QuadratureSpec {
            relative_tolerance: 1e-12,
            ..QuadratureSpec::default()
        };
        let q = integrate(|t| t.powi(15) * (1.0 - t).cbrt(), 0.0, 1.0, &spec).unwrap();
        let b = beta_fn(16.0, 4.0 / 3.0).unwrap();
        assert!(rel(b, q.value) < 1e-10, "{b} vs {}", q.value);
    }

    #[test]
    fn beta_survives_large_codebooks() {
        let b = beta_fn(2f64.powi(20), 4.0 / 3.0).unwrap();
        assert!(b > 0.0 && b.is_finite());
        let fb = feedback_coeffs(20, 4).unwrap();
        assert!(fb.zeta > 0.0 && fb.zeta < 1.0);
    }

    #[test]
    fn feedback_reference_values() {
        for nb in [2, 3, 4, 8] {
            assert_eq!(feedback_coeffs(0, nb).unwrap().upsilon, 1.0);
        }
        let fb = feedback_coeffs(0, 4).unwrap();
        assert!((fb.zeta - 0.25).abs() < 1e-13);
        let fb = feedback_coeffs(4, 4).unwrap();
        assert!((fb.upsilon - 2f64.powf(-4.0 / 3.0)).abs() < 1e-15);
        assert!((fb.upsilon - 0.396_850_262_992_049_9).abs() < 1e-12);
        // Independent route: 16 * Gamma(16) Gamma(4/3) / Gamma(16 + 4/3)
        let direct = 16.0 * gamma_fn(16.0).unwrap() * gamma_fn(4.0 / 3.0).unwrap()
            / gamma_fn(16.0 + 4.0 / 3.0).unwrap();
        assert!((fb.zeta - (1.0 - direct)).abs() < 1e-12);
        assert!(feedback_coeffs(3, 1).is_err());
    }

    proptest! {
        #[test]
        fn beta_is_symmetric(x in 0.05f64..60.0, y in 0.05f64..60.0) {
            let a = beta_fn(x, y).unwrap();
            let b = beta_fn(y, x).unwrap();
            prop_assert!(rel(a, b) <= 1e-12);
        }

        #[test]
        fn upsilon_monotone(b in 0u32..16, nb in 2u32..32) {
            let base = feedback_coeffs(b, nb).unwrap();
            prop_assert!(feedback_coeffs(b + 1, nb).unwrap().upsilon < base.upsilon);
            if b > 0 {
                prop_assert!(feedback_coeffs(b, nb + 1).unwrap().upsilon > base.upsilon);
            }
            prop_assert!(base.zeta > 0.0 && base.zeta < 1.0);
            prop_assert!(base.upsilon > 0.0 && base.upsilon <= 1.0);
        }
    }
}
