//! Observation functions mapping states to scalars.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::filter::{Provenance, TrajectoryBuffer};
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableSpec {
    /// `exp(a sin(2 pi k1 x1) + b cos(2 pi k2 x2))` on the 2-torus.
    TorusExpTrig { a: f64, k1: i64, b: f64, k2: i64 },
    /// Characteristic function of the half-open box `[lo, hi)`.
    BoxIndicator { lo: Vec<f64>, hi: Vec<f64> },
    /// Projection onto one coordinate.
    Coordinate { index: usize },
    /// `exp(-||x - center||^2 / width^2)`.
    GaussianBump { center: Vec<f64>, width: f64 },
    /// `exp(sin(2 pi k x))` on the interval.
    IntervalExpSin { k: i64 },
    /// One value per atom of a finite system.
    AtomVector { values: Vec<f64> },
}

impl ObservableSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ObservableSpec::TorusExpTrig { a, b, .. } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::NonFinite("observable amplitudes"));
                }
            }
            ObservableSpec::BoxIndicator { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(Error::LengthMismatch {
                        what: "box corners",
                        expected: lo.len(),
                        got: hi.len(),
                    });
                }
                if lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
                    return Err(Error::InvalidParameter("box needs lo < hi componentwise"));
                }
            }
            ObservableSpec::GaussianBump { center, width } => {
                if center.iter().any(|c| !c.is_finite()) || !width.is_finite() {
                    return Err(Error::NonFinite("bump parameters"));
                }
                if *width <= 0.0 {
                    return Err(Error::InvalidParameter("bump width must be positive"));
                }
            }
            ObservableSpec::AtomVector { values } => {
                if values.is_empty() {
                    return Err(Error::EmptyInput("atom values"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("atom values"));
                }
            }
            ObservableSpec::Coordinate { .. } | ObservableSpec::IntervalExpSin { .. } => {}
        }
        Ok(())
    }
}

/// Evaluates the observation function at one state.
pub fn evaluate(obs: &ObservableSpec, x: &State) -> Result<f64> {
    match obs {
        ObservableSpec::TorusExpTrig { a, k1, b, k2 } => {
            let c = x.coords()?;
            if c.len() < 2 {
                return Err(Error::LengthMismatch {
                    what: "torus observable state",
                    expected: 2,
                    got: c.len(),
                });
            }
            Ok(math::exp(
                a * math::sin(math::TAU * *k1 as f64 * c[0])
                    + b * math::cos(math::TAU * *k2 as f64 * c[1]),
            ))
        }
        ObservableSpec::BoxIndicator { lo, hi } => {
            let c = x.coords()?;
            if c.len() != lo.len() {
                return Err(Error::LengthMismatch {
                    what: "indicator state",
                    expected: lo.len(),
                    got: c.len(),
                });
            }
            let inside = c
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *l <= *v && *v < *h);
            Ok(if inside { 1.0 } else { 0.0 })
        }
        ObservableSpec::Coordinate { index } => {
            let c = x.coords()?;
            if *index >= c.len() {
                return Err(Error::LengthMismatch {
                    what: "coordinate index",
                    expected: c.len(),
                    got: *index,
                });
            }
            Ok(c[*index])
        }
        ObservableSpec::GaussianBump { center, width } => {
            let c = x.coords()?;
            if c.len() != center.len() {
                return Err(Error::LengthMismatch {
                    what: "bump state",
                    expected: center.len(),
                    got: c.len(),
                });
            }
            let dist_sq: f64 = c
                .iter()
                .zip(center)
                .map(|(v, m)| (v - m) * (v - m))
                .sum();
            Ok(math::exp(-dist_sq / (width * width)))
        }
        ObservableSpec::IntervalExpSin { k } => {
            let c = x.coords()?;
            if c.len() != 1 {
                return Err(Error::LengthMismatch {
                    what: "interval observable state",
                    expected: 1,
                    got: c.len(),
                });
            }
            Ok(math::exp(math::sin(math::TAU * *k as f64 * c[0])))
        }
        ObservableSpec::AtomVector { values } => {
            let i = x.atom()?;
            if i >= values.len() {
                return Err(Error::LengthMismatch {
                    what: "atom index",
                    expected: values.len(),
                    got: i,
                });
            }
            Ok(values[i])
        }
    }
}

/// Observes a whole trajectory, preserving order and recording provenance.
pub fn observe(
    obs: &ObservableSpec,
    traj: &[State],
    provenance: Provenance,
) -> Result<TrajectoryBuffer> {
    if traj.is_empty() {
        return Err(Error::EmptyInput("trajectory"));
    }
    obs.validate()?;
    let mut values = Vec::with_capacity(traj.len());
    for x in traj {
        values.push(evaluate(obs, x)?);
    }
    TrajectoryBuffer::new(values, provenance)
}

/// Shorthand for observation with an ad-hoc provenance label.
pub fn observe_labeled(
    obs: &ObservableSpec,
    traj: &[State],
    system: &str,
    observable: &str,
    seed: u64,
) -> Result<TrajectoryBuffer> {
    observe(
        obs,
        traj,
        Provenance {
            system: String::from(system),
            observable: String::from(observable),
            seed,
            length: traj.len(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{trajectory, SystemSpec};

    #[test]
    fn torus_observable_at_origin() {
        // exp(sin 0 + cos 0) = e by direct substitution.
        let f1 = ObservableSpec::TorusExpTrig {
            a: 1.0,
            k1: 2,
            b: 1.0,
            k2: 3,
        };
        let v = evaluate(&f1, &State::Point(vec![0.0, 0.0])).unwrap();
        assert!((v - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn indicator_membership() {
        let f2 = ObservableSpec::BoxIndicator {
            lo: vec![0.0, 0.5],
            hi: vec![0.5, 1.0],
        };
        assert_eq!(
            evaluate(&f2, &State::Point(vec![0.25, 0.75])).unwrap(),
            1.0
        );
        assert_eq!(
            evaluate(&f2, &State::Point(vec![0.75, 0.25])).unwrap(),
            0.0
        );
        // half-open boundary convention
        assert_eq!(evaluate(&f2, &State::Point(vec![0.0, 0.5])).unwrap(), 1.0);
        assert_eq!(evaluate(&f2, &State::Point(vec![0.5, 0.5])).unwrap(), 0.0);
    }

    #[test]
    fn bump_center_and_waist() {
        let delta = (8.0 / 3.0f64 * 27.0).sqrt();
        let center = vec![delta, delta, 27.0];
        let width = delta / 3.0;
        let bump = ObservableSpec::GaussianBump {
            center: center.clone(),
            width,
        };
        assert_eq!(evaluate(&bump, &State::Point(center.clone())).unwrap(), 1.0);
        // at distance width from the center the value is exactly 1/e
        let mut off = center;
        off[0] += width;
        let v = evaluate(&bump, &State::Point(off)).unwrap();
        assert!((v - (-1.0f64).exp()).abs() <= 1e-12);
    }

    #[test]
    fn observe_atom_vector_orbit() {
        let sys = SystemSpec::FinitePermutation {
            perm: vec![1, 2, 0],
        };
        let orbit = trajectory(&sys, &State::Atom(0), 7).unwrap();
        let f = ObservableSpec::AtomVector {
            values: vec![1.0, 0.0, 0.0],
        };
        let buf = observe_labeled(&f, &orbit, "z3-shift", "delta", 0).unwrap();
        assert_eq!(
            buf.values,
            vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(buf.provenance.length, 7);
    }

    #[test]
    fn observe_constant() {
        let sys = SystemSpec::FinitePermutation {
            perm: vec![1, 0],
        };
        let orbit = trajectory(&sys, &State::Atom(0), 5).unwrap();
        let ones = ObservableSpec::AtomVector {
            values: vec![1.0, 1.0],
        };
        let buf = observe_labeled(&ones, &orbit, "swap", "ones", 0).unwrap();
        assert!(buf.values.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn dimension_mismatch_errors() {
        let f = ObservableSpec::Coordinate { index: 3 };
        assert!(evaluate(&f, &State::Point(vec![1.0, 2.0])).is_err());
        let g = ObservableSpec::IntervalExpSin { k: 3 };
        assert!(evaluate(&g, &State::Point(vec![0.1, 0.2])).is_err());
    }
}
