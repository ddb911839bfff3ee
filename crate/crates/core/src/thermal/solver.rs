//! Conductor temperature for a given load current.
//!
//! The residual `(P_c + P_r) - (P_J + P_S)` is non-positive at air temperature
//! and strictly increasing in conductor temperature over the operating range,
//! so the root is bracketed by `[air_temp, UPPER_BRACKET]` and found by
//! bisection. The first probe is taken at 50 °C.

use super::{heat_balance, AmbientConditions, ConductorSpec, ThermalError};

pub const TOLERANCE: f64 = 0.1;
pub const INITIAL_GUESS: f64 = 50.0;
pub const UPPER_BRACKET: f64 = 200.0;
pub const MAX_ITERATIONS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureSolution {
    pub temperature: f64,
    pub iterations: u32,
}

/// Steady-state conductor temperature (°C) carrying DC-equivalent current
/// `i_load`.
pub fn steady_state_temperature(
    spec: &ConductorSpec,
    amb: &AmbientConditions,
    i_load: f64,
) -> Result<f64, ThermalError> {
    solve_temperature(spec, amb, i_load).map(|s| s.temperature)
}

pub fn solve_temperature(
    spec: &ConductorSpec,
    amb: &AmbientConditions,
    i_load: f64,
) -> Result<TemperatureSolution, ThermalError> {
    let residual = |t: f64| heat_balance(spec, amb, i_load, t).residual();

    let mut lo = amb.air_temp;
    let mut hi = UPPER_BRACKET;
    let r_lo = residual(lo);
    if !r_lo.is_finite() || r_lo > 0.0 {
        return Err(ThermalError::NonPhysical {
            air_temp: amb.air_temp,
        });
    }
    if r_lo == 0.0 {
        return Ok(TemperatureSolution {
            temperature: lo,
            iterations: 0,
        });
    }
    if residual(hi) < 0.0 {
        // the root lies above the bracket: overload far beyond the rating
        return Err(ThermalError::NoConvergence { iterations: 0 });
    }

    let mut iterations = 0;
    let mut probe = if lo < INITIAL_GUESS && INITIAL_GUESS < hi {
        INITIAL_GUESS
    } else {
        0.5 * (lo + hi)
    };
    while hi - lo > TOLERANCE {
        if iterations >= MAX_ITERATIONS {
            return Err(ThermalError::NoConvergence { iterations });
        }
        iterations += 1;
        if residual(probe) < 0.0 {
            lo = probe;
        } else {
            hi = probe;
        }
        probe = 0.5 * (lo + hi);
    }
    Ok(TemperatureSolution {
        temperature: 0.5 * (lo + hi),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::dc_rating;

    fn amb(v: f64, s: f64, t: f64) -> AmbientConditions {
        AmbientConditions::new(v, 45.0, s, t).unwrap()
    }

    #[test]
    fn no_heating_returns_air_temperature() {
        let spec = ConductorSpec::zebra();
        let a = amb(3.0, 0.0, 12.0);
        let t = steady_state_temperature(&spec, &a, 0.0).unwrap();
        assert!((t - 12.0).abs() <= TOLERANCE);
    }

    #[test]
    fn rating_current_reaches_limit() {
        let spec = ConductorSpec::zebra();
        for a in [amb(0.0, 1000.0, 35.0), amb(5.0, 200.0, -10.0), amb(20.0, 0.0, 5.0)] {
            let i = dc_rating(&spec, &a).unwrap();
            let t = steady_state_temperature(&spec, &a, i).unwrap();
            assert!((t - spec.t_max).abs() <= TOLERANCE, "{a:?}: {t}");
        }
    }

    #[test]
    fn overload_exceeds_limit() {
        let spec = ConductorSpec::zebra();
        let a = amb(2.0, 500.0, 20.0);
        let i = dc_rating(&spec, &a).unwrap();
        let t = steady_state_temperature(&spec, &a, 1.1 * i).unwrap();
        assert!(t > spec.t_max);
    }

    #[test]
    fn extreme_overload_leaves_bracket() {
        let spec = ConductorSpec::zebra();
        let a = amb(0.0, 1000.0, 40.0);
        assert!(matches!(
            steady_state_temperature(&spec, &a, 10_000.0),
            Err(ThermalError::NoConvergence { .. })
        ));
    }

    #[test]
    fn iteration_count_is_small() {
        let spec = ConductorSpec::zebra();
        let s = solve_temperature(&spec, &amb(4.0, 300.0, 10.0), 900.0).unwrap();
        assert!(s.iterations <= 12, "{}", s.iterations);
    }
}
