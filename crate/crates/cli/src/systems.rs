//! Named system/observable setups shared by `simulate` and the experiment
//! registry.

use koopman_core::dynamics::SystemSpec;
use koopman_core::observables::ObservableSpec;

pub const SQRT2: f64 = core::f64::consts::SQRT_2;
pub const SQRT3: f64 = 1.732_050_807_568_877_2;

pub const LORENZ_SIGMA: f64 = 10.0;
pub const LORENZ_RHO: f64 = 28.0;
pub const LORENZ_BETA: f64 = 8.0 / 3.0;
pub const DEFAULT_RK4_STEP: f64 = 5e-4;

/// Distance scale of the positive equilibrium: `sqrt(beta (rho - 1))`.
pub fn lorenz_delta() -> f64 {
    (LORENZ_BETA * (LORENZ_RHO - 1.0)).sqrt()
}

pub fn lorenz_system(flow_time: f64, rk4_step: f64) -> SystemSpec {
    SystemSpec::Lorenz63 {
        sigma: LORENZ_SIGMA,
        rho: LORENZ_RHO,
        beta: LORENZ_BETA,
        flow_time,
        rk4_step,
    }
}

pub fn torus_rotation() -> SystemSpec {
    SystemSpec::TorusRotation {
        alpha: vec![SQRT2, SQRT3],
    }
}

pub fn affine_twist() -> SystemSpec {
    SystemSpec::AffineTwist { alpha: SQRT2 }
}

/// The registered setups, keyed by the names used on the command line.
pub fn named_setup(name: &str) -> Option<(SystemSpec, ObservableSpec)> {
    let setup = match name {
        "torus-f1" => (
            torus_rotation(),
            ObservableSpec::TorusExpTrig {
                a: 1.0,
                k1: 2,
                b: 1.0,
                k2: 3,
            },
        ),
        "torus-f2" => (
            torus_rotation(),
            ObservableSpec::BoxIndicator {
                lo: vec![0.0, 0.5],
                hi: vec![0.5, 1.0],
            },
        ),
        "twist" => (
            affine_twist(),
            ObservableSpec::TorusExpTrig {
                a: 2.0,
                k1: 2,
                b: 1.0,
                k2: 3,
            },
        ),
        "twist-weak" => (
            affine_twist(),
            ObservableSpec::TorusExpTrig {
                a: 2.0,
                k1: 2,
                b: 0.01,
                k2: 3,
            },
        ),
        "twist-x1" => (
            affine_twist(),
            ObservableSpec::TorusExpTrig {
                a: 2.0,
                k1: 2,
                b: 0.0,
                k2: 3,
            },
        ),
        "odometer" | "odometer-spectrum" => (
            SystemSpec::Odometer,
            ObservableSpec::IntervalExpSin { k: 3 },
        ),
        "lorenz-x1" => (
            lorenz_system(0.05, DEFAULT_RK4_STEP),
            ObservableSpec::Coordinate { index: 0 },
        ),
        "lorenz-bump" => {
            let delta = lorenz_delta();
            (
                lorenz_system(0.05, DEFAULT_RK4_STEP),
                ObservableSpec::GaussianBump {
                    center: vec![delta, delta, LORENZ_RHO - 1.0],
                    width: delta / 3.0,
                },
            )
        }
        _ => return None,
    };
    Some(setup)
}

pub fn setup_names() -> &'static [&'static str] {
    &[
        "torus-f1",
        "torus-f2",
        "twist",
        "twist-weak",
        "twist-x1",
        "odometer",
        "lorenz-x1",
        "lorenz-bump",
    ]
}
