use dlrsim::thermal::{ampacity, dc_rating, heat_balance, steady_state_temperature, AmbientConditions, ConductorSpec};
use proptest::prelude::*;

fn amb(v: f64, angle: f64, s: f64, t: f64) -> AmbientConditions {
    AmbientConditions::new(v, angle, s, t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rating_holds_conductor_at_limit(v in 0.0f64..25.0, angle in 0.0f64..90.0, s in 0.0f64..1000.0, t in -20.0f64..40.0) {
        let spec = ConductorSpec::zebra();
        let a = amb(v, angle, s, t);
        let i = dc_rating(&spec, &a).unwrap();
        let hb = heat_balance(&spec, &a, i, spec.t_max);
        prop_assert!(hb.residual().abs() < 1e-6 * (hb.p_joule + hb.p_solar).max(1.0));
        let ts = steady_state_temperature(&spec, &a, i).unwrap();
        prop_assert!((ts - spec.t_max).abs() <= 0.1 + 1e-9, "{ts}");
    }

    #[test]
    fn more_wind_never_lowers_the_rating(v in 0.0f64..24.0, dv in 0.01f64..1.0, s in 0.0f64..1000.0, t in -20.0f64..40.0) {
        let spec = ConductorSpec::zebra();
        let lo = ampacity(&spec, &amb(v, 45.0, s, t)).ac;
        let hi = ampacity(&spec, &amb(v + dv, 45.0, s, t)).ac;
        prop_assert!(hi >= lo - 1e-9);
    }

    #[test]
    fn warmer_air_lowers_the_rating(v in 0.0f64..25.0, t in -20.0f64..39.0, dt in 0.1f64..1.0) {
        let spec = ConductorSpec::zebra();
        let cold = ampacity(&spec, &amb(v, 45.0, 500.0, t)).ac;
        let warm = ampacity(&spec, &amb(v, 45.0, 500.0, t + dt)).ac;
        prop_assert!(warm < cold);
    }

    #[test]
    fn sun_lowers_the_rating(v in 0.0f64..25.0, s in 0.0f64..990.0, ds in 1.0f64..10.0) {
        let spec = ConductorSpec::zebra();
        let dark = ampacity(&spec, &amb(v, 45.0, s, 20.0)).ac;
        let lit = ampacity(&spec, &amb(v, 45.0, s + ds, 20.0)).ac;
        prop_assert!(lit < dark);
    }

    #[test]
    fn temperature_rises_with_current(i in 0.0f64..1500.0, di in 1.0f64..100.0, v in 0.5f64..10.0) {
        let spec = ConductorSpec::zebra();
        let a = amb(v, 45.0, 300.0, 10.0);
        let t1 = steady_state_temperature(&spec, &a, i).unwrap();
        let t2 = steady_state_temperature(&spec, &a, i + di).unwrap();
        prop_assert!(t2 >= t1 - 0.1);
    }

    #[test]
    fn ac_rating_is_below_dc(v in 0.0f64..25.0, t in -20.0f64..40.0) {
        let r = ampacity(&ConductorSpec::zebra(), &amb(v, 45.0, 0.0, t));
        prop_assert!(r.ac < r.dc && r.ac > 0.9 * r.dc);
    }
}

#[test]
fn parallel_wind_rates_below_perpendicular() {
    let spec = ConductorSpec::zebra();
    let par = ampacity(&spec, &amb(3.0, 0.0, 500.0, 20.0)).ac;
    let perp = ampacity(&spec, &amb(3.0, 90.0, 500.0, 20.0)).ac;
    assert!(par < perp);
}
