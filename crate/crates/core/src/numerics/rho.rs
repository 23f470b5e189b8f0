use std::f64::consts::{FRAC_PI_2, PI};

use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{Error, Result};

fn check_alpha(function: &'static str, alpha: f64) -> Result<()> {
    if alpha > 2.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: alpha,
            bound: "alpha > 2",
        })
    }
}

/// `rho(delta, alpha) = int_{delta^(-2/alpha)}^inf delta^(2/alpha) / (1 + u^(alpha/2)) du`.
///
/// Evaluated as `(2/(alpha-2)) delta int_0^1 dv / (1 + delta v^(alpha/(alpha-2)))`,
/// which follows from `u = delta^(-2/alpha) v^(-2/(alpha-2))` and has a smooth,
/// bounded integrand on a finite interval.
pub fn rho_integral(delta: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha("rho_integral", alpha)?;
    if !(delta >= 0.0) {
        return Err(Error::Domain {
            function: "rho_integral",
            value: delta,
            bound: "delta >= 0",
        });
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    if delta.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let p = alpha / (alpha - 2.0);
    // The integrand drops from 1 to 1/2 at v = delta^(-1/p); splitting there
    // keeps large thresholds from hiding the knee inside one panel.
    let knee = delta.powf(-1.0 / p);
    let f = |v: f64| 1.0 / (1.0 + delta * v.powf(p));
    let q = if knee < 1.0 {
        let a = integrate(f, 0.0, knee, spec)?;
        let b = integrate(f, knee, 1.0, spec)?;
        a.value + b.value
    } else {
        integrate(f, 0.0, 1.0, spec)?.value
    };
    Ok(2.0 / (alpha - 2.0) * delta * q)
}

/// `rho(delta, 4) = sqrt(delta) (pi/2 - arctan(1/sqrt(delta)))`.
pub fn rho_closed_form_alpha4(delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let s = delta.sqrt();
    s * (FRAC_PI_2 - (1.0 / s).atan())
}

/// Tolerances used whenever rho sits inside another quadrature.
pub fn inner_spec() -> QuadratureSpec {
    QuadratureSpec {
        relative_tolerance: 1e-13,
        absolute_tolerance: 1e-15,
        max_subdivisions: 10_000,
    }
}

/// Closed form at `alpha = 4`, quadrature otherwise.
pub fn rho(delta: f64, alpha: f64) -> Result<f64> {
    if alpha == 4.0 && delta >= 0.0 {
        Ok(rho_closed_form_alpha4(delta))
    } else {
        rho_integral(delta, alpha, &inner_spec())
    }
}

/// `C(alpha) = (2 pi / alpha) / sin(2 pi / alpha)`.
pub fn interference_constant(alpha: f64) -> Result<f64> {
    check_alpha("interference_constant", alpha)?;
    let x = 2.0 * PI / alpha;
    Ok(x / x.sin())
}
