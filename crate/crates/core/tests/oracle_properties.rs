//! Ground-truth solver checks: step convergence, weightless reduction,
//! force balance and convergence order of the first-order closed form.

use sessile_core::capillary::solve_sphere;
use sessile_core::oracle::{perturbation_error, shoot_for_volume, OracleConfig};
use sessile_core::{DropSpec, FluidParams, Observable};

fn water() -> FluidParams {
    FluidParams::new(1.0, 72.0, 980.7).unwrap()
}

fn mercury() -> FluidParams {
    FluidParams::new(13.55, 476.0, 980.7).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn halving_the_step_changes_nothing() {
    let cases = [
        (DropSpec::from_degrees(6.75e-3, 72.0).unwrap(), water()),
        (DropSpec::from_degrees(3.70e-4, 131.1).unwrap(), mercury()),
        (DropSpec::from_degrees(1.037e-2, 132.4).unwrap(), mercury()),
    ];
    for (spec, fluid) in cases {
        let base = OracleConfig::default();
        let fine = OracleConfig {
            step_fraction: 0.5 * base.step_fraction,
            ..base
        };
        let a = shoot_for_volume(&spec, &fluid, &base).unwrap().observables;
        let b = shoot_for_volume(&spec, &fluid, &fine).unwrap().observables;
        for (o, v) in a.present() {
            let w = b.get(o).unwrap();
            assert!(rel(v, w) < 1e-8, "{o:?}: {v} vs {w}");
        }
    }
}

#[test]
fn weightless_oracle_is_the_sphere() {
    let dry = FluidParams::new(1.0, 72.0, 0.0).unwrap();
    for deg in [10.0, 45.0, 90.0, 135.0, 170.0] {
        for v in [1e-4, 1e-2, 1.0] {
            let spec = DropSpec::from_degrees(v, deg).unwrap();
            let cap = solve_sphere(&spec).unwrap();
            let sol = shoot_for_volume(&spec, &dry, &OracleConfig::default()).unwrap();
            assert!(rel(sol.apex_curvature, 1.0 / cap.radius) < 1e-8);
            let sphere = cap.observables();
            for (o, s) in sphere.present() {
                let got = sol.observables.get(o).unwrap();
                assert!(rel(got, s) < 1e-8, "{deg} {v} {o:?}: {got} vs {s}");
            }
        }
    }
}

#[test]
fn force_balance_holds_for_converged_solutions() {
    let cases = [
        (DropSpec::from_degrees(6.75e-3, 72.0).unwrap(), water()),
        (
            DropSpec::from_degrees(0.1234, 73.44).unwrap(),
            FluidParams::new(1.0, 70.6, 980.7).unwrap(),
        ),
        (DropSpec::from_degrees(3.70e-4, 131.1).unwrap(), mercury()),
        (DropSpec::from_degrees(1.037e-2, 132.4).unwrap(), mercury()),
        (DropSpec::from_degrees(0.5, 160.0).unwrap(), water()),
    ];
    for (spec, fluid) in cases {
        let sol = shoot_for_volume(&spec, &fluid, &OracleConfig::default()).unwrap();
        assert!(rel(sol.achieved_volume, spec.volume()) < 1e-10);
        let res = sol.identity_residual(&spec, &fluid).unwrap();
        assert!(res < 1e-6, "{res}");
        assert!(sol.richardson_error < 1e-8, "{}", sol.richardson_error);
    }
}

#[test]
fn gravity_flattens_the_oracle_drop_too() {
    let spec = DropSpec::from_degrees(0.025, 125.0).unwrap();
    let fluid = FluidParams::new(1.0, 70.0, 980.0).unwrap();
    let cap = solve_sphere(&spec).unwrap();
    let sol = shoot_for_volume(&spec, &fluid, &OracleConfig::default()).unwrap();
    assert!(sol.apex_curvature < 1.0 / cap.radius);
    assert!(sol.observables.apex_height < cap.apex_height);
    assert!(sol.observables.contact_radius > cap.contact_radius);
    assert!(sol.observables.equatorial_radius.unwrap() > cap.radius);
}

#[test]
fn truncation_error_grows_with_gravity() {
    let spec = DropSpec::from_degrees(6.75e-3, 72.0).unwrap();
    let cfg = OracleConfig::default();
    let errs: Vec<_> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&s| {
            perturbation_error(&spec, &water().with_gravity_scaled(s).unwrap(), &cfg).unwrap()
        })
        .collect();
    for o in [Observable::ContactRadius, Observable::ApexHeight] {
        let e: Vec<f64> = errs.iter().map(|x| x.get(o).unwrap()).collect();
        assert!(e[0] < e[1] && e[1] < e[2], "{o:?}: {e:?}");
    }
}
