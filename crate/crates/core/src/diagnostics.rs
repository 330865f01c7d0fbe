//! Forecast-error evaluation, autocorrelation fidelity checks, and the
//! spectral/pseudospectral bounds on the fitted filter.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{sample_initials, step, State, SystemSpec};
use crate::error::{Error, Result};
use crate::filter::{
    companion_eigenvector, fit, fit_from_gram, predict_iterated, spectrum, FilterModel,
    GramSource, GramSummary, TrajectoryBuffer,
};
use crate::math;
use crate::observables::{evaluate, ObservableSpec};
use crate::oracle::{delayed_observables, exact_autocorr, FiniteSystem};

/// Paired system/filter autocorrelations from the snippet-ensemble protocol.
#[derive(Debug, Clone)]
pub struct AutocorrReport {
    pub lags: Vec<usize>,
    pub a_true: Vec<f64>,
    pub a_filter: Vec<f64>,
    pub delay: usize,
    pub ensemble: usize,
}

/// Forecast mean squared error per delay depth at a fixed horizon.
#[derive(Debug, Clone)]
pub struct ErrorCurve {
    pub depths: Vec<usize>,
    pub mse: Vec<f64>,
    pub steps: usize,
}

/// Mean squared `steps`-ahead prediction error, sliding the filter along a
/// held-out buffer: every window position is rolled out `steps` times and
/// compared against the true value.
pub fn forecast_mse(model: &FilterModel, test: &TrajectoryBuffer, steps: usize) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidParameter("horizon must be at least one step"));
    }
    let d = model.delay;
    let m = test.len() - 1;
    if test.len() < d + steps {
        return Err(Error::TrajectoryTooShort {
            needed: d + steps,
            got: test.len(),
        });
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for t in (d - 1)..=(m - steps) {
        let window = &test.values[t + 1 - d..=t];
        let rolled = predict_iterated(model, window, steps)?;
        let err = test.values[t + steps] - rolled[steps - 1];
        acc += err * err;
        count += 1;
    }
    Ok(acc / count as f64)
}

/// Fits at each depth on the training buffer and scores on the testing one.
pub fn error_curve(
    train: &TrajectoryBuffer,
    test: &TrajectoryBuffer,
    depths: &[usize],
    steps: usize,
) -> Result<ErrorCurve> {
    if depths.is_empty() {
        return Err(Error::EmptyInput("depth grid"));
    }
    let mut mse = Vec::with_capacity(depths.len());
    for &d in depths {
        let outcome = fit(train, d, None)?;
        mse.push(forecast_mse(&outcome.model, test, steps)?);
    }
    Ok(ErrorCurve {
        depths: depths.to_vec(),
        mse,
        steps,
    })
}

/// Snippet-ensemble autocorrelation comparison from explicit initial states:
/// each snippet of length `d` is continued both by the true map (observing at
/// the end) and by iterated filtering, and the two lag products are averaged
/// over the ensemble in a fixed order.
pub fn autocorr_protocol_with(
    sys: &SystemSpec,
    obs: &ObservableSpec,
    model: &FilterModel,
    initials: &[State],
    n_max: usize,
) -> Result<AutocorrReport> {
    if initials.is_empty() {
        return Err(Error::EmptyInput("snippet ensemble"));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("need at least one lag"));
    }
    let d = model.delay;
    let n = initials.len();
    let mut a_true = vec![0.0; n_max + 1];
    let mut a_filter = vec![0.0; n_max + 1];
    let mut window = vec![0.0; d];

    for x0 in initials {
        // snippet x_1 .. x_d and its observations
        let mut x = x0.clone();
        for slot in window.iter_mut() {
            *slot = evaluate(obs, &x)?;
            x = step(sys, &x)?;
        }
        // `x` is now x_{d+1}; the anchor value is f(x_d)
        let anchor = window[d - 1];
        a_true[0] += anchor * anchor;
        a_filter[0] += anchor * anchor;

        // (i) continue with the true map
        let mut current = x;
        for lag in 1..=n_max {
            let value = evaluate(obs, &current)?;
            a_true[lag] += anchor * value;
            if lag < n_max {
                current = step(sys, &current)?;
            }
        }

        // (ii) continue with the filter rollout
        let rolled = predict_iterated(model, &window, n_max)?;
        for lag in 1..=n_max {
            a_filter[lag] += anchor * rolled[lag - 1];
        }
    }

    for v in a_true.iter_mut().chain(a_filter.iter_mut()) {
        *v /= n as f64;
    }
    Ok(AutocorrReport {
        lags: (0..=n_max).collect(),
        a_true,
        a_filter,
        delay: d,
        ensemble: n,
    })
}

/// [`autocorr_protocol_with`] on a seeded sample of initial conditions.
pub fn autocorr_protocol(
    sys: &SystemSpec,
    obs: &ObservableSpec,
    model: &FilterModel,
    ensemble: usize,
    n_max: usize,
    seed: u64,
) -> Result<AutocorrReport> {
    let initials = sample_initials(sys, ensemble, seed)?;
    autocorr_protocol_with(sys, obs, model, &initials, n_max)
}

/// Time-average autocorrelation estimate over one buffer:
/// `A_hat(n) = (1/(m-n+1)) sum_t y_t y_{t+n}`.
pub fn autocorr_time_average(y: &TrajectoryBuffer, n_max: usize) -> Result<Vec<f64>> {
    if y.len() <= n_max {
        return Err(Error::TrajectoryTooShort {
            needed: n_max + 1,
            got: y.len(),
        });
    }
    let values = &y.values;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let terms = values.len() - n;
        let mut acc = 0.0;
        for t in 0..terms {
            acc += values[t] * values[t + n];
        }
        out.push(acc / terms as f64);
    }
    Ok(out)
}

/// Packages the time-average estimate as a Gram summary.
pub fn gram_from_series(y: &TrajectoryBuffer, n_max: usize) -> Result<GramSummary> {
    GramSummary::new(
        autocorr_time_average(y, n_max)?,
        GramSource::EmpiricalTimeAverage,
        y.len(),
    )
}

/// Squared residual of projecting the one-step-ahead observable onto the
/// span of `k` delays: `A(0) - b^T G^-1 b` with `b_i = A(i+1)`. At `k = 0`
/// the span is empty and the residual is `A(0)`. Negative round-off is
/// clamped to zero.
pub fn uf_residual_sq(g: &GramSummary, k: usize) -> Result<f64> {
    if k == 0 {
        return Ok(g.autocorr[0]);
    }
    if g.max_lag() < k {
        return Err(Error::LengthMismatch {
            what: "autocorrelation lags",
            expected: k + 1,
            got: g.max_lag() + 1,
        });
    }
    let gram = g.gram_matrix(k)?;
    let b = &g.autocorr[1..=k];
    let sol = crate::numerics::spd_solve(&gram, b)?;
    let mut projected = 0.0;
    for (bi, xi) in b.iter().zip(&sol.x) {
        projected += bi * xi;
    }
    Ok((g.autocorr[0] - projected).max(0.0))
}

/// The pseudospectral radius bound for depth `d`: the ratio of the
/// projection residual of the advanced observable on the full `d`-delay span
/// to the projection residual of the observable itself on the lagged
/// `(d-1)`-delay span. By measure invariance the denominator equals the
/// numerator one depth down.
pub fn pseudospec_epsilon(g: &GramSummary, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("delay depth must be at least 1"));
    }
    let den_sq = uf_residual_sq(g, d - 1)?;
    if den_sq <= 1e-12 {
        return Err(Error::DegenerateBasis);
    }
    let num_sq = uf_residual_sq(g, d)?;
    Ok(math::sqrt(num_sq) / math::sqrt(den_sq))
}

fn atom_space_residual(columns: &[Vec<f64>], target: &[f64]) -> Result<f64> {
    let n = target.len();
    let k = columns.len();
    let mut entries = Vec::with_capacity(n * k);
    for i in 0..n {
        for col in columns {
            entries.push(col[i]);
        }
    }
    let a = crate::numerics::DenseMatrix::new(n, k, entries)?;
    let sol = crate::numerics::least_squares_solve(&a, target)?;
    let fitted = a.mul_vec(&sol.coefficients);
    let mut resid_sq = 0.0;
    for (f, t) in fitted.iter().zip(target) {
        resid_sq += (f - t) * (f - t);
    }
    Ok(math::sqrt(resid_sq / n as f64))
}

/// The same ratio as [`pseudospec_epsilon`], evaluated primally on the atom
/// space of an exact finite system: both projection residuals come from a
/// least-squares solve followed by pointwise subtraction, so near-zero
/// residuals are resolved to rounding level instead of the `sqrt(eps)`
/// cancellation floor of the Gram formula.
pub fn pseudospec_epsilon_exact(sys: &FiniteSystem, f: &[f64], d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("delay depth must be at least 1"));
    }
    let n = sys.atoms();
    if d > n {
        return Err(Error::InvalidParameter("depth exceeds atom count"));
    }
    let table = delayed_observables(sys, f, d)?;
    let advanced: Vec<f64> = (0..n).map(|i| f[sys.apply(i)]).collect();
    let den = if d == 1 {
        crate::oracle::uniform_norm(f)
    } else {
        atom_space_residual(&table[1..], f)?
    };
    if den * den <= 1e-12 {
        return Err(Error::DegenerateBasis);
    }
    let num = atom_space_residual(&table, &advanced)?;
    Ok(num / den)
}

/// The filter's operator autocorrelation `A_d(n) = <U_d^n f, f>` computed in
/// the delayed-observable coordinates: the coordinate vector of `U_d^n f` is
/// the `n`-th companion power applied to the first basis vector, and pairing
/// with `f` contracts against `A(0 .. d-1)`.
pub fn model_autocorr(model: &FilterModel, g: &GramSummary, n_max: usize) -> Result<Vec<f64>> {
    let d = model.delay;
    if g.max_lag() + 1 < d {
        return Err(Error::LengthMismatch {
            what: "autocorrelation lags",
            expected: d,
            got: g.max_lag() + 1,
        });
    }
    let mut w = vec![0.0; d];
    w[0] = 1.0;
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        let mut pairing = 0.0;
        for (wi, ai) in w.iter().zip(&g.autocorr) {
            pairing += wi * ai;
        }
        out.push(pairing);
        // advance w <- U_d w using the companion structure
        let head = w[0];
        for i in 0..d - 1 {
            w[i] = model.coeffs[i] * head + w[i + 1];
        }
        w[d - 1] = model.coeffs[d - 1] * head;
    }
    Ok(out)
}

/// One verified eigenpair of the projected operator.
#[derive(Debug, Clone)]
pub struct EigenpairCheck {
    pub value: Complex64,
    /// `||U phi - lambda phi||` for the unit-norm eigenfunction, evaluated
    /// exactly on the atom space.
    pub residual: f64,
    pub within_bound: bool,
}

/// Pseudospectral verification on an exact finite system.
#[derive(Debug, Clone)]
pub struct PseudospectrumReport {
    pub epsilon: f64,
    pub eigenpairs: Vec<EigenpairCheck>,
    pub all_within: bool,
}

/// Fits the depth-`d` filter from exact autocorrelations, then checks every
/// eigenpair `(lambda, phi)` of the companion matrix against the bound:
/// `||U phi - lambda phi|| <= epsilon + 1e-8` with `phi` normalized to unit
/// norm through the exact Gram matrix.
pub fn verify_pseudospectrum(
    sys: &FiniteSystem,
    f: &[f64],
    d: usize,
) -> Result<PseudospectrumReport> {
    let n = sys.atoms();
    if d == 0 || d > n {
        return Err(Error::InvalidParameter("need 1 <= d <= atom count"));
    }
    let g = exact_autocorr(sys, f, d)?;
    let fitted = fit_from_gram(&g, d)?;
    let epsilon = pseudospec_epsilon(&g, d)?;
    let spec = spectrum(&fitted.model)?;
    let table = delayed_observables(sys, f, d)?;
    let gram = g.gram_matrix(d)?;

    let mut eigenpairs = Vec::with_capacity(d);
    let mut all_within = true;
    for lambda in &spec.values {
        let v = companion_eigenvector(&fitted.model, *lambda);
        // norm through the exact Gram: phi* G phi
        let mut norm_sq = 0.0;
        for i in 0..d {
            for j in 0..d {
                norm_sq += (v[i].conj() * v[j]).re * gram[(i, j)];
            }
        }
        let norm = math::sqrt(norm_sq.max(0.0));
        if norm <= 1e-14 {
            return Err(Error::DegenerateBasis);
        }
        // phi on the atom space and its image under the composition operator
        let mut phi = vec![Complex64::new(0.0, 0.0); n];
        for (vi, row) in v.iter().zip(&table) {
            for (slot, value) in phi.iter_mut().zip(row) {
                *slot += vi * value;
            }
        }
        let mut resid_sq = 0.0;
        for i in 0..n {
            let diff = phi[sys.apply(i)] - lambda * phi[i];
            resid_sq += diff.norm_sqr();
        }
        let residual = math::sqrt(resid_sq / n as f64) / norm;
        let within = residual <= epsilon + 1e-8;
        all_within &= within;
        eigenpairs.push(EigenpairCheck {
            value: *lambda,
            residual,
            within_bound: within,
        });
    }
    Ok(PseudospectrumReport {
        epsilon,
        eigenpairs,
        all_within,
    })
}

/// Per-lag outcome of the three-branch autocorrelation deviation bound.
#[derive(Debug, Clone)]
pub struct LagBoundCheck {
    pub lag: usize,
    pub deviation: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Checks `|A(n) - A_d(n)|` against the three-branch envelope: zero up to the
/// delay depth, the forecast residual times `||f||` at `n = d+1`, and the
/// linear-in-`(n-d)` pseudospectral slope beyond. Exact sources get a fixed
/// `1e-10` round-off slack; empirical sources get `3 A(0) / sqrt(N)`.
pub fn autocorr_bound_check(
    report: &AutocorrReport,
    g: &GramSummary,
    fnorm: f64,
) -> Result<Vec<LagBoundCheck>> {
    let d = report.delay;
    let forecast_residual = math::sqrt(uf_residual_sq(g, d)?);
    let slope = match pseudospec_epsilon(g, d) {
        Ok(eps) => eps,
        Err(Error::DegenerateBasis) => f64::INFINITY,
        Err(other) => return Err(other),
    };
    let slack = match g.source {
        GramSource::ExactOracle => 1e-10,
        _ => 3.0 * g.autocorr[0] / math::sqrt(g.sample_size.max(1) as f64),
    };
    let mut out = Vec::with_capacity(report.lags.len());
    for (idx, &lag) in report.lags.iter().enumerate() {
        let deviation = math::abs(report.a_true[idx] - report.a_filter[idx]);
        let bound = if lag <= d {
            0.0
        } else if lag == d + 1 {
            forecast_residual * fnorm
        } else {
            (lag - d) as f64 * slope * fnorm * fnorm
        };
        out.push(LagBoundCheck {
            lag,
            deviation,
            bound,
            pass: deviation <= bound + slack,
        });
    }
    Ok(out)
}

/// Convergence monitor for the fitted coefficients over doubling prefixes.
#[derive(Debug, Clone)]
pub struct StabilityProbe {
    pub prefix_lengths: Vec<usize>,
    /// `||c_{2L} - c_L||_2` for consecutive prefixes.
    pub distances: Vec<f64>,
    /// Any prefix produced a degenerate (ridge) fit.
    pub degenerate: bool,
}

/// Fits on prefixes of length `2d, 4d, 8d, ...` and reports successive
/// coefficient distances. A monitor only: no rate is asserted.
pub fn filter_stability_probe(y: &TrajectoryBuffer, d: usize) -> Result<StabilityProbe> {
    if d == 0 {
        return Err(Error::InvalidParameter("delay depth must be at least 1"));
    }
    if y.len() < 4 * d {
        return Err(Error::TrajectoryTooShort {
            needed: 4 * d,
            got: y.len(),
        });
    }
    let mut prefix_lengths = Vec::new();
    let mut len = 2 * d;
    while len <= y.len() {
        prefix_lengths.push(len);
        len *= 2;
    }
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(prefix_lengths.len());
    let mut degenerate = false;
    for &l in &prefix_lengths {
        let prefix = TrajectoryBuffer {
            values: y.values[..l].to_vec(),
            provenance: y.provenance.clone(),
        };
        let outcome = fit(&prefix, d, None)?;
        degenerate |= outcome.model.degenerate_fit;
        coeffs.push(outcome.model.coeffs);
    }
    let distances = coeffs
        .windows(2)
        .map(|pair| {
            let mut s = 0.0;
            for (a, b) in pair[0].iter().zip(&pair[1]) {
                s += (a - b) * (a - b);
            }
            math::sqrt(s)
        })
        .collect();
    Ok(StabilityProbe {
        prefix_lengths,
        distances,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::fit_from_gram;
    use crate::oracle::uniform_norm;
    use crate::rng::SplitMix64;

    fn buf(values: Vec<f64>) -> TrajectoryBuffer {
        TrajectoryBuffer::from_values(values).unwrap()
    }

    fn period_three_model() -> FilterModel {
        FilterModel::new(vec![0.0, 0.0, 1.0], false).unwrap()
    }

    #[test]
    fn forecast_mse_constant() {
        let model = FilterModel::new(vec![1.0], false).unwrap();
        let y = buf(vec![3.0; 40]);
        for steps in [1usize, 2, 5] {
            assert_eq!(forecast_mse(&model, &y, steps).unwrap(), 0.0);
        }
    }

    #[test]
    fn forecast_mse_exact_periodic_predictor() {
        let mut values = Vec::new();
        for _ in 0..10 {
            values.extend_from_slice(&[1.0, 0.0, 0.0]);
        }
        let y = buf(values);
        assert_eq!(forecast_mse(&period_three_model(), &y, 1).unwrap(), 0.0);
    }

    #[test]
    fn forecast_mse_too_short() {
        let model = FilterModel::new(vec![1.0, 0.0, 0.0], false).unwrap();
        let y = buf(vec![1.0, 2.0, 3.0]);
        assert!(forecast_mse(&model, &y, 1).is_err());
    }

    #[test]
    fn error_curve_constant_signal() {
        let train = buf(vec![2.0; 30]);
        let test = buf(vec![2.0; 30]);
        let curve = error_curve(&train, &test, &[1], 1).unwrap();
        assert_eq!(curve.mse, vec![0.0]);
    }

    #[test]
    fn time_average_all_ones() {
        let y = buf(vec![1.0; 25]);
        let a = autocorr_time_average(&y, 6).unwrap();
        assert!(a.iter().all(|v| (v - 1.0).abs() <= 1e-15));
    }

    #[test]
    fn time_average_periodic_counts() {
        // full periods: every lag multiple of three averages to 1/3
        let mut values = Vec::new();
        for _ in 0..4 {
            values.extend_from_slice(&[1.0, 0.0, 0.0]);
        }
        let y = buf(values);
        let a = autocorr_time_average(&y, 3).unwrap();
        assert!((a[0] - 1.0 / 3.0).abs() <= 1e-15);
        assert!(a[1].abs() <= 1e-15);
        assert!(a[2].abs() <= 1e-15);
        assert!((a[3] - 1.0 / 3.0).abs() <= 1e-15);
    }

    #[test]
    fn protocol_shared_prefix_is_bitwise() {
        let sys = SystemSpec::TorusRotation {
            alpha: vec![core::f64::consts::SQRT_2, 1.7320508075688772],
        };
        let obs = ObservableSpec::TorusExpTrig {
            a: 1.0,
            k1: 2,
            b: 1.0,
            k2: 3,
        };
        let model = FilterModel::new(vec![0.4, 0.3, 0.2], false).unwrap();
        let report = autocorr_protocol(&sys, &obs, &model, 200, 9, 42).unwrap();
        assert_eq!(report.a_true[0], report.a_filter[0]);
    }

    #[test]
    fn protocol_exact_enumeration_perfect_predictor() {
        // Exhaustive atoms as the ensemble: the period-3 filter reproduces
        // the true continuation, so both autocorrelations coincide.
        let sys = crate::oracle::FiniteSystem::shift(3, 1).unwrap();
        let spec = sys.as_system_spec();
        let obs = ObservableSpec::AtomVector {
            values: vec![1.0, 0.0, 0.0],
        };
        let initials: Vec<State> = (0..3).map(State::Atom).collect();
        let report =
            autocorr_protocol_with(&spec, &obs, &period_three_model(), &initials, 9).unwrap();
        for (t, f) in report.a_true.iter().zip(&report.a_filter) {
            assert!((t - f).abs() <= 1e-14);
        }
        // and the protocol estimate agrees with the operator expression
        let g = exact_autocorr(&sys, &[1.0, 0.0, 0.0], 9).unwrap();
        let operator = model_autocorr(&period_three_model(), &g, 9).unwrap();
        for (p, o) in report.a_filter.iter().zip(&operator) {
            assert!((p - o).abs() <= 1e-14);
        }
    }

    #[test]
    fn epsilon_hand_values() {
        // single delay with A = (1, a): numerator^2 = 1 - a^2, denominator 1
        let a = 0.6;
        let g = GramSummary::new(vec![1.0, a], GramSource::ExactOracle, 4).unwrap();
        let eps = pseudospec_epsilon(&g, 1).unwrap();
        assert!((eps - (1.0 - a * a).sqrt()).abs() <= 1e-12);

        // white signal: orthogonal delays, unit ratio
        let g = GramSummary::new(vec![2.5, 0.0, 0.0, 0.0], GramSource::ExactOracle, 8).unwrap();
        assert!((pseudospec_epsilon(&g, 2).unwrap() - 1.0).abs() <= 1e-12);
        assert!((pseudospec_epsilon(&g, 3).unwrap() - 1.0).abs() <= 1e-12);

        // periodic oracle at full depth: exact filter, zero numerator
        let third = 1.0 / 3.0;
        let g = GramSummary::new(vec![third, 0.0, 0.0, third], GramSource::ExactOracle, 3).unwrap();
        assert!(pseudospec_epsilon(&g, 3).unwrap() <= 1e-7);
    }

    #[test]
    fn epsilon_degenerate_basis_errors() {
        // constant observable: f lies in the span of its own delays
        let g = GramSummary::new(vec![1.0, 1.0, 1.0], GramSource::ExactOracle, 3).unwrap();
        assert!(matches!(
            pseudospec_epsilon(&g, 2),
            Err(Error::DegenerateBasis)
        ));
    }

    #[test]
    fn uf_residual_monotone_in_depth() {
        let sys = crate::oracle::FiniteSystem::shift(8, 3).unwrap();
        let mut rng = SplitMix64::new(12);
        for _ in 0..20 {
            let f: Vec<f64> = (0..8).map(|_| rng.next_signed()).collect();
            let g = exact_autocorr(&sys, &f, 8).unwrap();
            let mut prev = f64::INFINITY;
            for d in 1..=8usize {
                let r = uf_residual_sq(&g, d).unwrap();
                assert!(r <= prev + 1e-12, "residual rose at d={d}");
                prev = r;
            }
        }
    }

    #[test]
    fn pseudospectrum_full_depth_cyclic() {
        let sys = crate::oracle::FiniteSystem::shift(8, 1).unwrap();
        let mut delta = vec![0.0; 8];
        delta[0] = 1.0;
        let report = verify_pseudospectrum(&sys, &delta, 8).unwrap();
        assert!(report.all_within);
        for pair in &report.eigenpairs {
            assert!(pair.residual <= 1e-8, "residual {}", pair.residual);
        }
    }

    #[test]
    fn pseudospectrum_single_delay_closed_form() {
        // d = 1: one eigenpair, residual equals the bound exactly
        let sys = crate::oracle::FiniteSystem::shift(8, 3).unwrap();
        let mut rng = SplitMix64::new(77);
        let f: Vec<f64> = (0..8).map(|_| 1.0 + 0.5 * rng.next_signed()).collect();
        let report = verify_pseudospectrum(&sys, &f, 1).unwrap();
        assert_eq!(report.eigenpairs.len(), 1);
        assert!(
            (report.eigenpairs[0].residual - report.epsilon).abs() <= 1e-12,
            "{} vs {}",
            report.eigenpairs[0].residual,
            report.epsilon
        );
    }

    #[test]
    fn pseudospectrum_random_inequality() {
        let sys = crate::oracle::FiniteSystem::shift(8, 3).unwrap();
        let mut rng = SplitMix64::new(5);
        let f: Vec<f64> = (0..8).map(|_| rng.next_signed()).collect();
        let report = verify_pseudospectrum(&sys, &f, 4).unwrap();
        assert_eq!(report.eigenpairs.len(), 4);
        assert!(report.all_within);
    }

    #[test]
    fn bound_check_exact_oracle() {
        let sys = crate::oracle::FiniteSystem::shift(8, 3).unwrap();
        let mut rng = SplitMix64::new(21);
        let f: Vec<f64> = (0..8).map(|_| rng.next_signed()).collect();
        let d = 3;
        let n_max = 8;
        let g = exact_autocorr(&sys, &f, n_max.max(d)).unwrap();
        let fitted = fit_from_gram(&g, d).unwrap();
        let a_filter = model_autocorr(&fitted.model, &g, n_max).unwrap();
        let report = AutocorrReport {
            lags: (0..=n_max).collect(),
            a_true: g.autocorr[..=n_max].to_vec(),
            a_filter,
            delay: d,
            ensemble: 8,
        };
        let fnorm = uniform_norm(&f);
        let checks = autocorr_bound_check(&report, &g, fnorm).unwrap();
        for check in &checks {
            assert!(
                check.pass,
                "lag {}: deviation {} bound {}",
                check.lag, check.deviation, check.bound
            );
            if check.lag <= d {
                assert!(check.deviation <= 1e-10);
            }
        }
    }

    #[test]
    fn stability_probe_periodic_signal() {
        let mut values = Vec::new();
        for _ in 0..32 {
            values.extend_from_slice(&[1.0, 0.0, 0.0]);
        }
        let y = buf(values);
        let probe = filter_stability_probe(&y, 3).unwrap();
        assert!(probe.distances.iter().all(|d| *d <= 1e-10));
        assert!(!probe.degenerate);
    }

    #[test]
    fn stability_probe_flags_degenerate_input() {
        let y = buf(vec![1.0; 64]);
        let probe = filter_stability_probe(&y, 4).unwrap();
        assert!(probe.degenerate);
        assert_eq!(probe.distances.len(), probe.prefix_lengths.len() - 1);
    }

    #[test]
    fn stability_probe_needs_length() {
        let y = buf(vec![1.0; 7]);
        assert!(filter_stability_probe(&y, 2).is_err());
    }
}
