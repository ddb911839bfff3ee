//! Air properties and Nusselt-number correlations for bare overhead conductors.
//!
//! Coefficients follow the CIGRE TB 207 steady-state method. The full table is
//! reproduced in `docs/constants.md`.

/// Stefan-Boltzmann constant, W/(m²·K⁴).
pub const STEFAN_BOLTZMANN: f64 = 5.670e-8;

/// Celsius to Kelvin offset used in the radiation term. Kept at 273 rather than
/// 273.15 so radiative cooling matches the published arithmetic.
pub const KELVIN_OFFSET: f64 = 273.0;

/// Gravitational acceleration, m/s².
pub const GRAVITY: f64 = 9.807;

/// Thermal conductivity of air at film temperature `t_f` (°C), W/(m·K).
pub fn thermal_conductivity(t_f: f64) -> f64 {
    2.368e-2 + 7.23e-5 * t_f - 2.763e-8 * t_f * t_f
}

/// Kinematic viscosity of air at film temperature `t_f` (°C), m²/s.
///
/// Sea-level density is assumed, so dynamic and kinematic forms coincide up to
/// the constant relative density of 1.
pub fn kinematic_viscosity(t_f: f64) -> f64 {
    1.32e-5 + 9.5e-8 * t_f
}

/// Prandtl number of air at film temperature `t_f` (°C).
pub fn prandtl(t_f: f64) -> f64 {
    0.715 - 2.5e-4 * t_f
}

pub fn film_temperature(t_s: f64, t_a: f64) -> f64 {
    0.5 * (t_s + t_a)
}

/// Reynolds number of the cross-flow over a conductor of diameter `diameter_m`.
pub fn reynolds(wind_speed: f64, diameter_m: f64, t_f: f64) -> f64 {
    wind_speed * diameter_m / kinematic_viscosity(t_f)
}

/// Forced-convection coefficients `(B, n)` for `Nu = B·Re^n` at attack angle 90°.
pub fn forced_coefficients(reynolds: f64, roughness: f64) -> (f64, f64) {
    if reynolds < 2650.0 {
        (0.641, 0.471)
    } else if roughness <= 0.05 {
        (0.178, 0.633)
    } else {
        (0.048, 0.800)
    }
}

/// Multiplier applied to the perpendicular-flow Nusselt number for an attack
/// angle `angle_deg` between wind and conductor axis.
pub fn attack_angle_factor(angle_deg: f64) -> f64 {
    let s = angle_deg.to_radians().sin().max(0.0);
    if angle_deg <= 24.0 {
        0.42 + 0.68 * s.powf(1.08)
    } else {
        0.42 + 0.58 * s.powf(0.90)
    }
}

/// Forced-convection Nusselt number. Zero for zero wind.
pub fn forced_nusselt(
    wind_speed: f64,
    angle_deg: f64,
    diameter_m: f64,
    roughness: f64,
    t_f: f64,
) -> f64 {
    if wind_speed <= 0.0 {
        return 0.0;
    }
    let re = reynolds(wind_speed, diameter_m, t_f);
    let (b, n) = forced_coefficients(re, roughness);
    b * re.powf(n) * attack_angle_factor(angle_deg)
}

/// Natural-convection coefficients `(A, m)` for `Nu = A·(Gr·Pr)^m`.
///
/// Two bands are tabulated (10² – 10⁴ and 10⁴ – 10⁶); values outside use the
/// nearest band.
pub fn natural_coefficients(gr_pr: f64) -> (f64, f64) {
    if gr_pr < 1.0e4 {
        (0.850, 0.188)
    } else {
        (0.480, 0.250)
    }
}

/// Grashof number for a horizontal cylinder with surface `t_s` in air `t_a`.
pub fn grashof(diameter_m: f64, t_s: f64, t_a: f64) -> f64 {
    let t_f = film_temperature(t_s, t_a);
    let nu = kinematic_viscosity(t_f);
    diameter_m.powi(3) * (t_s - t_a) * GRAVITY / ((t_f + KELVIN_OFFSET) * nu * nu)
}

/// Natural-convection Nusselt number. Zero when the conductor is not warmer
/// than the air.
pub fn natural_nusselt(diameter_m: f64, t_s: f64, t_a: f64) -> f64 {
    if t_s <= t_a {
        return 0.0;
    }
    let t_f = film_temperature(t_s, t_a);
    let gr_pr = grashof(diameter_m, t_s, t_a) * prandtl(t_f);
    let (a, m) = natural_coefficients(gr_pr);
    a * gr_pr.powf(m)
}
