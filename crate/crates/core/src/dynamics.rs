//! The dynamical systems generating the observation sequences, with
//! forward/backward stepping and seeded trajectory sampling.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::SplitMix64;

/// Fixed integration substep used when harvesting initial conditions for the
/// chaotic flow: rationally independent of the standard `5e-4` training step.
pub const LORENZ_SAMPLING_SUBSTEP: f64 = 5.3e-4;
/// Substeps per harvested sample point.
pub const LORENZ_SAMPLING_STRIDE: usize = 40;
/// Sample points discarded before harvesting, so the samples live on the
/// attractor rather than on the transient.
pub const LORENZ_WARMUP_POINTS: usize = 1000;

/// A dynamical system together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    /// Rotation of the unit torus: `x -> x + alpha (mod 1)` componentwise.
    TorusRotation { alpha: Vec<f64> },
    /// Skew product on the 2-torus: `(x1, x2) -> (x1 + alpha, x1 + x2) (mod 1)`.
    AffineTwist { alpha: f64 },
    /// Binary adding machine on `[0, 1)`.
    Odometer,
    /// Time-`flow_time` map of the Lorenz '63 flow, realized by classical
    /// fourth-order Runge-Kutta at the fixed substep `rk4_step`.
    Lorenz63 {
        sigma: f64,
        rho: f64,
        beta: f64,
        flow_time: f64,
        rk4_step: f64,
    },
    /// A bijection on finitely many atoms carrying uniform measure.
    FinitePermutation { perm: Vec<usize> },
}

/// A point of the state space: a coordinate vector for the continuous
/// systems, an atom index for finite permutations.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Point(Vec<f64>),
    Atom(usize),
}

impl State {
    pub fn coords(&self) -> Result<&[f64]> {
        match self {
            State::Point(v) => Ok(v),
            State::Atom(_) => Err(Error::StateMismatch("expected coordinates, got atom")),
        }
    }

    pub fn atom(&self) -> Result<usize> {
        match self {
            State::Atom(i) => Ok(*i),
            State::Point(_) => Err(Error::StateMismatch("expected atom, got coordinates")),
        }
    }
}

impl SystemSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SystemSpec::TorusRotation { alpha } => {
                if alpha.is_empty() {
                    return Err(Error::EmptyInput("rotation vector"));
                }
                if alpha.iter().any(|a| !a.is_finite()) {
                    return Err(Error::NonFinite("rotation vector"));
                }
            }
            SystemSpec::AffineTwist { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::NonFinite("twist parameter"));
                }
            }
            SystemSpec::Odometer => {}
            SystemSpec::Lorenz63 {
                sigma,
                rho,
                beta,
                flow_time,
                rk4_step,
            } => {
                if ![*sigma, *rho, *beta, *flow_time, *rk4_step]
                    .iter()
                    .all(|x| x.is_finite())
                {
                    return Err(Error::NonFinite("flow parameters"));
                }
                if *rk4_step <= 0.0 || *flow_time <= 0.0 {
                    return Err(Error::InvalidParameter("flow_time and rk4_step must be positive"));
                }
                let ratio = flow_time / rk4_step;
                let rounded = math::floor(ratio + 0.5);
                if math::abs(ratio - rounded) > 1e-12 * rounded.max(1.0) {
                    return Err(Error::InvalidParameter(
                        "flow_time must be an integer multiple of rk4_step",
                    ));
                }
            }
            SystemSpec::FinitePermutation { perm } => {
                if perm.is_empty() {
                    return Err(Error::EmptyInput("permutation"));
                }
                let n = perm.len();
                let mut seen = vec![false; n];
                for &p in perm {
                    if p >= n || seen[p] {
                        return Err(Error::NotABijection);
                    }
                    seen[p] = true;
                }
            }
        }
        Ok(())
    }

    /// Coordinate dimension, or `None` for atom-indexed systems.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SystemSpec::TorusRotation { alpha } => Some(alpha.len()),
            SystemSpec::AffineTwist { .. } => Some(2),
            SystemSpec::Odometer => Some(1),
            SystemSpec::Lorenz63 { .. } => Some(3),
            SystemSpec::FinitePermutation { .. } => None,
        }
    }

    fn lorenz_substeps(&self) -> usize {
        match self {
            SystemSpec::Lorenz63 {
                flow_time,
                rk4_step,
                ..
            } => math::floor(flow_time / rk4_step + 0.5) as usize,
            _ => 0,
        }
    }
}

/// Reduction to `[0, 1)`; results that round up to exactly 1.0 are clamped
/// back to 0.0 so states stay in the half-open interval.
fn mod1(x: f64) -> f64 {
    let r = x - math::floor(x);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

fn check_point<'a>(sys: &SystemSpec, x: &'a State) -> Result<&'a [f64]> {
    let coords = x.coords()?;
    let dim = sys.dim().ok_or(Error::StateMismatch("atom system"))?;
    if coords.len() != dim {
        return Err(Error::LengthMismatch {
            what: "state dimension",
            expected: dim,
            got: coords.len(),
        });
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("state"));
    }
    Ok(coords)
}

fn lorenz_rhs(sigma: f64, rho: f64, beta: f64, x: [f64; 3]) -> [f64; 3] {
    [
        sigma * (x[1] - x[0]),
        x[0] * (rho - x[2]) - x[1],
        x[0] * x[1] - beta * x[2],
    ]
}

fn rk4_substep(sigma: f64, rho: f64, beta: f64, x: [f64; 3], h: f64) -> [f64; 3] {
    let k1 = lorenz_rhs(sigma, rho, beta, x);
    let mid1 = [
        x[0] + 0.5 * h * k1[0],
        x[1] + 0.5 * h * k1[1],
        x[2] + 0.5 * h * k1[2],
    ];
    let k2 = lorenz_rhs(sigma, rho, beta, mid1);
    let mid2 = [
        x[0] + 0.5 * h * k2[0],
        x[1] + 0.5 * h * k2[1],
        x[2] + 0.5 * h * k2[2],
    ];
    let k3 = lorenz_rhs(sigma, rho, beta, mid2);
    let end = [x[0] + h * k3[0], x[1] + h * k3[1], x[2] + h * k3[2]];
    let k4 = lorenz_rhs(sigma, rho, beta, end);
    [
        x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        x[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

pub(crate) fn lorenz_flow(
    sigma: f64,
    rho: f64,
    beta: f64,
    mut x: [f64; 3],
    h: f64,
    substeps: usize,
) -> [f64; 3] {
    for _ in 0..substeps {
        x = rk4_substep(sigma, rho, beta, x, h);
    }
    x
}

/// Tower exponent of the adding machine: `n(x) = floor(-log2(1 - x))`, so
/// that `x` lies in `[1 - 2^-n, 1 - 2^-(n+1))`.
fn odometer_level(x: f64) -> u32 {
    math::floor(-math::log2(1.0 - x)) as u32
}

/// One application of the map.
pub fn step(sys: &SystemSpec, x: &State) -> Result<State> {
    match sys {
        SystemSpec::TorusRotation { alpha } => {
            let coords = check_point(sys, x)?;
            Ok(State::Point(
                coords
                    .iter()
                    .zip(alpha)
                    .map(|(c, a)| mod1(c + a))
                    .collect(),
            ))
        }
        SystemSpec::AffineTwist { alpha } => {
            let coords = check_point(sys, x)?;
            Ok(State::Point(vec![
                mod1(coords[0] + alpha),
                mod1(coords[0] + coords[1]),
            ]))
        }
        SystemSpec::Odometer => {
            let coords = check_point(sys, x)?;
            let v = coords[0];
            if !(0.0..1.0).contains(&v) {
                return Err(Error::StateMismatch("odometer state must lie in [0, 1)"));
            }
            let n = odometer_level(v);
            // x - (1 - 2^-n) + 2^-(n+1), written to stay exact on dyadics
            let out = v - 1.0 + 3.0 * math::powi(0.5, n as i32 + 1);
            Ok(State::Point(vec![out]))
        }
        SystemSpec::Lorenz63 {
            sigma,
            rho,
            beta,
            rk4_step,
            ..
        } => {
            let coords = check_point(sys, x)?;
            let out = lorenz_flow(
                *sigma,
                *rho,
                *beta,
                [coords[0], coords[1], coords[2]],
                *rk4_step,
                sys.lorenz_substeps(),
            );
            Ok(State::Point(out.to_vec()))
        }
        SystemSpec::FinitePermutation { perm } => {
            let i = x.atom()?;
            if i >= perm.len() {
                return Err(Error::StateMismatch("atom index out of range"));
            }
            Ok(State::Atom(perm[i]))
        }
    }
}

/// One application of the inverse map, for the systems where a closed form
/// exists. The chaotic flow is forward-only.
pub fn inverse_step(sys: &SystemSpec, x: &State) -> Result<State> {
    match sys {
        SystemSpec::TorusRotation { alpha } => {
            let coords = check_point(sys, x)?;
            Ok(State::Point(
                coords
                    .iter()
                    .zip(alpha)
                    .map(|(c, a)| mod1(c - a))
                    .collect(),
            ))
        }
        SystemSpec::AffineTwist { alpha } => {
            let coords = check_point(sys, x)?;
            let x1 = mod1(coords[0] - alpha);
            let x2 = mod1(coords[1] - x1);
            Ok(State::Point(vec![x1, x2]))
        }
        SystemSpec::Odometer => {
            let coords = check_point(sys, x)?;
            let z = coords[0];
            if !(0.0..1.0).contains(&z) {
                return Err(Error::StateMismatch("odometer state must lie in [0, 1)"));
            }
            if z == 0.0 {
                // 0 has no preimage in [0, 1); the map is an essential bijection.
                return Err(Error::StateMismatch("odometer inverse undefined at 0"));
            }
            // z lies in [2^-(m+1), 2^-m); the preimage is z - 2^-(m+1) + 1 - 2^-m.
            let m = (-math::floor(math::log2(z))) as i32 - 1;
            let out = z - math::powi(0.5, m + 1) + 1.0 - math::powi(0.5, m);
            Ok(State::Point(vec![out]))
        }
        SystemSpec::Lorenz63 { .. } => Err(Error::UnsupportedSystem(
            "no closed-form inverse for the chaotic flow",
        )),
        SystemSpec::FinitePermutation { perm } => {
            let i = x.atom()?;
            if i >= perm.len() {
                return Err(Error::StateMismatch("atom index out of range"));
            }
            let pre = perm
                .iter()
                .position(|&p| p == i)
                .ok_or(Error::NotABijection)?;
            Ok(State::Atom(pre))
        }
    }
}

/// The orbit `(x0, T x0, ..., T^(length-1) x0)`.
pub fn trajectory(sys: &SystemSpec, x0: &State, length: usize) -> Result<Vec<State>> {
    if length == 0 {
        return Err(Error::EmptyInput("trajectory length"));
    }
    let mut out = Vec::with_capacity(length);
    out.push(x0.clone());
    for _ in 1..length {
        let next = step(sys, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// `n` seeded initial conditions distributed according to the invariant
/// measure (uniform for the torus/interval systems and atoms; harvested from
/// a long attractor trajectory for the chaotic flow).
pub fn sample_initials(sys: &SystemSpec, n: usize, seed: u64) -> Result<Vec<State>> {
    if n == 0 {
        return Err(Error::EmptyInput("sample count"));
    }
    sys.validate()?;
    let mut rng = SplitMix64::new(seed);
    match sys {
        SystemSpec::TorusRotation { .. } | SystemSpec::AffineTwist { .. } => {
            let dim = sys.dim().unwrap();
            Ok((0..n)
                .map(|_| State::Point((0..dim).map(|_| rng.next_f64()).collect()))
                .collect())
        }
        SystemSpec::Odometer => Ok((0..n)
            .map(|_| State::Point(vec![rng.next_f64()]))
            .collect()),
        SystemSpec::FinitePermutation { perm } => {
            let atoms = perm.len();
            Ok((0..n).map(|_| State::Atom(rng.next_index(atoms))).collect())
        }
        SystemSpec::Lorenz63 {
            sigma, rho, beta, ..
        } => {
            let mut x = [
                4.0 + 0.1 * rng.next_signed(),
                7.0 + 0.1 * rng.next_signed(),
                16.0 + 0.1 * rng.next_signed(),
            ];
            let h = LORENZ_SAMPLING_SUBSTEP;
            for _ in 0..LORENZ_WARMUP_POINTS {
                x = lorenz_flow(*sigma, *rho, *beta, x, h, LORENZ_SAMPLING_STRIDE);
            }
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                x = lorenz_flow(*sigma, *rho, *beta, x, h, LORENZ_SAMPLING_STRIDE);
                out.push(State::Point(x.to_vec()));
            }
            Ok(out)
        }
    }
}
